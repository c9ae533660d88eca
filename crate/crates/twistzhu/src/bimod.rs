//! Bimodule layer: the quotient of an admissible module by the span of
//! circle products, carrying left and right algebra actions. The module is
//! the adjoint one, so the machinery is the algebra-layer machinery aimed at
//! a module target; what is new here are the verification suites — bimodule
//! axioms, ideal memberships, the level-lowering epimorphism, the phi-map
//! identities, and the depth filtration with its dimension bookkeeping.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{keys_up_to, FockKey, FockVector, Sector, VoaContext};
use crate::rat::{ModIndex, Rat};
use crate::report::{DimBreakdown, SuiteOutcome};
use crate::zhu::{
    kernel_product, phi, span_o_v, star_right_v, star_right_v_lin, star_v, star_v_lin,
    QuotientSpace, ZhuContext,
};

/// Context for the level-n bimodule over the adjoint module.
#[derive(Clone)]
pub struct BimoduleContext {
    pub zhu: ZhuContext,
}

impl BimoduleContext {
    pub fn new(zhu: ZhuContext) -> Self {
        BimoduleContext { zhu }
    }

    pub fn voa(&self) -> &Arc<VoaContext> {
        &self.zhu.voa
    }

    pub fn n(&self) -> ModIndex {
        self.zhu.n
    }
}

/// u ∘ w into the module; same residue kernel as the algebra-side product.
pub fn circ_m(ctx: &BimoduleContext, u: &FockVector, w: &FockVector) -> Result<FockVector> {
    kernel_product(&ctx.zhu, u, w, 0, 0)
}

/// Left action product u * w.
pub fn star_left(ctx: &BimoduleContext, u: &FockVector, w: &FockVector) -> Result<FockVector> {
    star_v(&ctx.zhu, u, w)
}

/// Right action product w * u.
pub fn star_right(ctx: &BimoduleContext, w: &FockVector, u: &FockVector) -> Result<FockVector> {
    star_right_v(&ctx.zhu, w, u)
}

pub fn star_left_lin(ctx: &BimoduleContext, u: &FockVector, w: &FockVector) -> Result<FockVector> {
    star_v_lin(&ctx.zhu, u, w)
}

pub fn star_right_lin(ctx: &BimoduleContext, w: &FockVector, u: &FockVector) -> Result<FockVector> {
    star_right_v_lin(&ctx.zhu, w, u)
}

/// Spanning set of the module ideal: whole-window circle products of basis
/// monomials (no translation generators here; those memberships are theorems
/// to verify, not defining generators).
pub fn span_o_m(ctx: &BimoduleContext) -> Result<Vec<FockVector>> {
    let n2 = ctx.voa().cutoff2();
    let basis = keys_up_to(Sector::Untwisted, n2);
    let mut pairs: Vec<(FockKey, FockKey)> = Vec::new();
    for uk in &basis {
        let r = if ctx.voa().order() == 1 { 0 } else { uk.parity() };
        let (_, dpow) = ctx.zhu.kernel(uk.depth2(), r)?;
        let spread2 = 2 * (dpow - 1);
        for wk in &basis {
            if uk.depth2() + wk.depth2() + spread2 <= n2 {
                pairs.push((uk.clone(), wk.clone()));
            }
        }
    }
    pairs
        .par_iter()
        .map(|(uk, wk)| {
            circ_m(
                ctx,
                &FockVector::monomial(uk.clone()),
                &FockVector::monomial(wk.clone()),
            )
        })
        .collect()
}

/// The built bimodule: context plus the quotient data.
pub struct Bimodule {
    pub ctx: BimoduleContext,
    pub q: QuotientSpace,
}

impl Bimodule {
    pub fn build(ctx: BimoduleContext) -> Result<Self> {
        let gens = span_o_m(&ctx)?;
        let q = QuotientSpace::build(Sector::Untwisted, ctx.voa().cutoff2(), &gens)?;
        Ok(Bimodule { ctx, q })
    }

    pub fn reduce(&self, x: &FockVector) -> Result<FockVector> {
        self.q.reduce(x)
    }

    fn is_member(&self, x: &FockVector) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }
}

/// Monomial window: all basis vectors of weight <= wt2max/2 in a sector.
pub fn basis_window(sector: Sector, wt2max: i64) -> Vec<FockVector> {
    keys_up_to(sector, wt2max)
        .into_iter()
        .map(FockVector::monomial)
        .collect()
}

/// The four bimodule identities, verified after reduction for every triple
/// (u, v, w) in the window plus the supplied sampled combinations.
pub fn bimodule_axiom_suite(
    b: &Bimodule,
    window2: i64,
    extra: &[(FockVector, FockVector, FockVector)],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("bimodule-axioms");
    let window = basis_window(Sector::Untwisted, window2);

    // unit identities
    let one = b.ctx.voa().one();
    for w in &window {
        let lw = star_left_lin(&b.ctx, &one, w)?;
        let rw = star_right_lin(&b.ctx, w, &one)?;
        out.check(b.is_member(&lw.sub(w))?, || format!("1*w != w at w={w}"));
        out.check(b.is_member(&rw.sub(w))?, || format!("w*1 != w at w={w}"));
    }

    let mut triples: Vec<(FockVector, FockVector, FockVector)> = Vec::new();
    for u in &window {
        for v in &window {
            for w in &window {
                triples.push((u.clone(), v.clone(), w.clone()));
            }
        }
    }
    triples.extend_from_slice(extra);

    let results: Result<Vec<Vec<(bool, String)>>> = triples
        .par_iter()
        .map(|(u, v, w)| {
            let mut local = Vec::new();
            // (u*v)*w = u*(v*w)
            let lhs = star_left_lin(&b.ctx, &star_v_lin(&b.ctx.zhu, u, v)?, w)?;
            let rhs = star_left_lin(&b.ctx, u, &star_left_lin(&b.ctx, v, w)?)?;
            local.push((
                b.is_member(&lhs.sub(&rhs))?,
                format!("(u*v)*w != u*(v*w) at u={u}, v={v}, w={w}"),
            ));
            // w*(u*v) = (w*u)*v
            let lhs = star_right_lin(&b.ctx, w, &star_v_lin(&b.ctx.zhu, u, v)?)?;
            let rhs = star_right_lin(&b.ctx, &star_right_lin(&b.ctx, w, u)?, v)?;
            local.push((
                b.is_member(&lhs.sub(&rhs))?,
                format!("w*(u*v) != (w*u)*v at u={u}, v={v}, w={w}"),
            ));
            // (u*w)*v = u*(w*v)
            let lhs = star_right_lin(&b.ctx, &star_left_lin(&b.ctx, u, w)?, v)?;
            let rhs = star_left_lin(&b.ctx, u, &star_right_lin(&b.ctx, w, v)?)?;
            local.push((
                b.is_member(&lhs.sub(&rhs))?,
                format!("(u*w)*v != u*(w*v) at u={u}, v={v}, w={w}"),
            ));
            Ok(local)
        })
        .collect();
    for local in results? {
        for (ok, witness) in local {
            out.check(ok, || witness);
        }
    }
    Ok(out)
}

/// Ideal membership checks: the shifted-kernel family, the left/right
/// commutator defect, translation-generator products from either side, and
/// stability of the ideal under both actions.
pub fn membership_suite(
    b: &Bimodule,
    window2: i64,
    samples: &[(FockVector, FockVector)],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("membership");
    let window = basis_window(Sector::Untwisted, window2);

    // shifted kernels: extra (1+z)^k / z^m with m >= k >= 0 stay in the
    // ideal; only combinations whose top weight fits the window are
    // checkable at this cutoff
    let n2 = b.ctx.voa().cutoff2();
    let l = i64::from(b.ctx.n().l);
    for (u, w) in samples {
        for (k_extra, m_extra) in [(0i64, 1i64), (1, 1), (0, 2), (1, 2), (2, 2)] {
            for ((du2, _), comp) in u.by_depth_parity() {
                let dw2 = w.max_depth2().unwrap_or(0);
                if du2 + dw2 + 2 * (2 * l + 1 + m_extra) > n2 {
                    continue;
                }
                let x = kernel_product(&b.ctx.zhu, &comp, w, k_extra, m_extra)?;
                out.check(b.is_member(&x)?, || {
                    format!("shifted kernel (k={k_extra}, m={m_extra}) escaped ideal at u={comp}, w={w}")
                });
            }
        }
    }

    // commutator defect: u*w - w*u - sum_j C(wt u - 1, j) u_{j-1} w is in the
    // ideal for u in the fixed eigenspace
    for (u, w) in samples {
        for ((d2, p), comp) in u.by_depth_parity() {
            if b.ctx.zhu.voa.order() > 1 && p != 0 {
                continue;
            }
            let defect = star_left(&b.ctx, &comp, w)?
                .sub(&star_right(&b.ctx, w, &comp)?)
                .sub(&kernel_one_plus_z_pow(b, &comp, w, d2)?);
            out.check(b.is_member(&defect)?, || {
                format!("commutator defect escaped ideal at u={comp}, w={w}")
            });
        }
    }

    // translation generators from both sides
    for u in &window {
        for w in &window {
            let (d2, _) = u.homogeneous_type().unwrap();
            let tgen = b
                .ctx
                .voa()
                .l_op(-1, u)?
                .add(&u.scale(&Rat::new(d2, 2)));
            let lhs = star_left_lin(&b.ctx, &tgen, w)?;
            out.check(b.is_member(&lhs)?, || {
                format!("(L(-1)+L(0))u * w escaped ideal at u={u}, w={w}")
            });
            let rhs = star_right_lin(&b.ctx, w, &tgen)?;
            out.check(b.is_member(&rhs)?, || {
                format!("w * (L(-1)+L(0))u escaped ideal at u={u}, w={w}")
            });
        }
    }

    // ideal stability under both actions: full scan over every generator
    // whose products still fit the window
    let gens = span_o_m(&b.ctx)?;
    let small = basis_window(Sector::Untwisted, window2.min(6));
    let fits = |probe2: i64, g: &FockVector| -> bool {
        probe2 + g.max_depth2().unwrap_or(0) + 4 * l <= n2
    };
    let results: Result<Vec<Vec<(bool, String)>>> = gens
        .par_iter()
        .map(|g| {
            let mut local = Vec::new();
            for u in &small {
                let pu2 = u.max_depth2().unwrap_or(0);
                if !fits(pu2, g) {
                    continue;
                }
                let lv = star_left_lin(&b.ctx, u, g)?;
                local.push((b.reduce(&lv)?.is_zero(), format!("u * gen escaped ideal at u={u}")));
                let rv = star_right_lin(&b.ctx, g, u)?;
                local.push((b.reduce(&rv)?.is_zero(), format!("gen * u escaped ideal at u={u}")));
            }
            Ok(local)
        })
        .collect();
    for local in results? {
        for (ok, witness) in local {
            out.check(ok, || witness);
        }
    }

    // algebra-side ideal acts into the module ideal (full fitting scan)
    let algebra_gens = span_o_v(&b.ctx.zhu)?;
    for g in &algebra_gens {
        for w in &small {
            let pw2 = w.max_depth2().unwrap_or(0);
            if !fits(pw2, g) {
                continue;
            }
            let lv = star_left_lin(&b.ctx, g, w)?;
            out.check(b.is_member(&lv)?, || format!("ideal * w escaped at w={w}"));
            let rv = star_right_lin(&b.ctx, w, g)?;
            out.check(b.is_member(&rv)?, || format!("w * ideal escaped at w={w}"));
        }
    }
    Ok(out)
}

/// Residue of Y(u,z)w against (1+z)^{wt u - 1}: the inhomogeneous term of
/// the commutator defect. No denominator power here, so the residue pairs
/// the j-th kernel coefficient with the mode u_j.
fn kernel_one_plus_z_pow(
    b: &Bimodule,
    u: &FockVector,
    w: &FockVector,
    wu2: i64,
) -> Result<FockVector> {
    use crate::rat::{rat_binomial, FracExp};
    let alpha = Rat::new(wu2 - 2, 2);
    let dw2 = w.max_depth2().unwrap_or(0);
    let jmax = (wu2 + dw2 - 2) / 2;
    let mut acc = FockVector::zero(w.sector());
    for j in 0..=jmax.max(-1) {
        let c = rat_binomial(&alpha, j as u32);
        if c.is_zero() {
            continue;
        }
        acc.add_scaled(&b.ctx.voa().mode_act(u, FracExp::from_int(j), w)?, &c);
    }
    Ok(acc)
}

/// Level-lowering epimorphism check: the higher ideal dies in the lower
/// quotient, and both actions agree level-to-level — literally equal when
/// the fractional part of n is positive, modulo the lower span when n is an
/// integer.
pub fn epi_lower(
    hi: &Bimodule,
    lo: &Bimodule,
    samples: &[(FockVector, FockVector)],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("epimorphism");
    match hi.ctx.n().lower() {
        Some(low) if low == lo.ctx.n() => {}
        _ => {
            return Err(Error::InvalidArgument(format!(
                "lower context must sit at n - 1/T (got {} below {})",
                lo.ctx.n(),
                hi.ctx.n()
            )))
        }
    }
    for g in span_o_m(&hi.ctx)? {
        out.check(lo.reduce(&g)?.is_zero(), || {
            "higher ideal generator survives in lower quotient".to_string()
        });
    }
    let exact = hi.ctx.n().i >= 1;
    if exact {
        out.note("fractional level step: products compared for literal equality");
    } else {
        out.note("integer level step: products compared modulo the lower span");
    }
    for (u, w) in samples {
        let l_hi = star_left_lin(&hi.ctx, u, w)?;
        let l_lo = star_left_lin(&lo.ctx, u, w)?;
        let r_hi = star_right_lin(&hi.ctx, w, u)?;
        let r_lo = star_right_lin(&lo.ctx, w, u)?;
        if exact {
            out.check(l_hi == l_lo, || format!("left products differ at u={u}, w={w}"));
            out.check(r_hi == r_lo, || format!("right products differ at u={u}, w={w}"));
        } else {
            out.check(lo.reduce(&l_hi.sub(&l_lo))?.is_zero(), || {
                format!("left products incongruent at u={u}, w={w}")
            });
            out.check(lo.reduce(&r_hi.sub(&r_lo))?.is_zero(), || {
                format!("right products incongruent at u={u}, w={w}")
            });
        }
    }
    Ok(out)
}

/// phi on the module (adjoint, so it is the algebra operator).
pub fn phi_m(voa: &VoaContext, w: &FockVector) -> Result<FockVector> {
    phi(voa, w)
}

/// phi-map suite: the ideal maps into the inverse-automorphism ideal, and
/// both action-reversal identities hold modulo that ideal.
pub fn phi_m_suite(
    b: &Bimodule,
    b_inv: &Bimodule,
    samples: &[(FockVector, FockVector)],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("phi");
    let voa = b.ctx.voa();
    for g in span_o_m(&b.ctx)? {
        let img = phi_m(voa, &g)?;
        out.check(b_inv.reduce(&img)?.is_zero(), || {
            "phi image of ideal generator escaped inverse ideal".to_string()
        });
    }
    for (u, w) in samples {
        let pu = phi(voa, u)?;
        let pw = phi_m(voa, w)?;
        let lhs = phi_m(voa, &star_left_lin(&b.ctx, u, w)?)?;
        let rhs = star_right_lin(&b_inv.ctx, &pw, &pu)?;
        out.check(b_inv.reduce(&lhs.sub(&rhs))?.is_zero(), || {
            format!("phi(u*w) != phi(w)*phi(u) mod ideal at u={u}, w={w}")
        });
        let lhs = phi_m(voa, &star_right_lin(&b.ctx, w, u)?)?;
        let rhs = star_left_lin(&b_inv.ctx, &pu, &pw)?;
        out.check(b_inv.reduce(&lhs.sub(&rhs))?.is_zero(), || {
            format!("phi(w*u) != phi(u)*phi(w) mod ideal at u={u}, w={w}")
        });
    }
    Ok(out)
}

/// Filtration outcome: dimensions of each level's quotient, the subquotient
/// dimensions along the chain, additivity, and action stability.
pub struct FiltrationOutcome {
    pub suite: SuiteOutcome,
    pub dims: DimBreakdown,
}

/// Build the chain of ideals from level n down to 0, verify containments,
/// report dimensions of the quotient and every subquotient, check the
/// rank-nullity additivity of the decomposition and the stability of each
/// subquotient under both actions.
pub fn filtration_report(voa: &Arc<VoaContext>, n: ModIndex, window2: i64) -> Result<FiltrationOutcome> {
    let mut suite = SuiteOutcome::new("filtration");
    let mut levels: Vec<ModIndex> = vec![n];
    let mut cur = n;
    while let Some(low) = cur.lower() {
        levels.push(low);
        cur = low;
    }
    let bims: Vec<Bimodule> = levels
        .iter()
        .map(|&m| {
            Bimodule::build(BimoduleContext::new(ZhuContext::new(voa.clone(), m)?))
        })
        .collect::<Result<Vec<_>>>()?;

    // chain containment: ideal at level m inside ideal at level m - 1/T.
    // Verified before any dimension bookkeeping; a failure aborts with the
    // offending generator as witness.
    for s in 0..bims.len() - 1 {
        for g in span_o_m(&bims[s].ctx)? {
            if !bims[s + 1].reduce(&g)?.is_zero() {
                return Err(Error::ChainContainment(format!(
                    "generator at level {} survives at level {}: {g}",
                    levels[s],
                    levels[s + 1]
                )));
            }
            suite.check(true, || String::new());
        }
    }

    let ranks: Vec<usize> = bims.iter().map(|b| b.q.rank()).collect();
    let dims: Vec<usize> = bims.iter().map(|b| b.q.dim_upper()).collect();
    let ambient = bims[0].q.dim_ambient();
    // subquotient s (s = 1..nT): ideal(n - s/T) / ideal(n - (s-1)/T);
    // containment makes the ranks monotone
    let mut sub = Vec::new();
    for s in 1..bims.len() {
        sub.push(ranks[s] - ranks[s - 1]);
    }
    let additivity = dims[0] == dims[bims.len() - 1] + sub.iter().sum::<usize>();
    suite.check(additivity, || {
        format!(
            "additivity failed: dim_top={} dim_bottom={} subquotients={:?} ambient={ambient}",
            dims[0],
            dims[bims.len() - 1],
            sub
        )
    });

    // action stability: top-level products keep each lower ideal inside
    // itself, scanned over every generator/probe pair fitting the window
    let probes = basis_window(Sector::Untwisted, window2.min(4));
    let n2 = voa.cutoff2();
    let l_top = i64::from(n.l);
    for s in 1..bims.len() {
        let gens = span_o_m(&bims[s].ctx)?;
        for g in &gens {
            for u in &probes {
                let pu2 = u.max_depth2().unwrap_or(0);
                if pu2 + g.max_depth2().unwrap_or(0) + 4 * l_top > n2 {
                    continue;
                }
                let lv = star_left_lin(&bims[0].ctx, u, g)?;
                suite.check(bims[s].reduce(&lv)?.is_zero(), || {
                    format!("left action broke subquotient at level {}", levels[s])
                });
                let rv = star_right_lin(&bims[0].ctx, g, u)?;
                suite.check(bims[s].reduce(&rv)?.is_zero(), || {
                    format!("right action broke subquotient at level {}", levels[s])
                });
            }
        }
    }

    let dims = DimBreakdown {
        a_gn: dims[0],
        a_g0: dims[bims.len() - 1],
        subquotients: sub,
    };
    suite.note(format!(
        "levels {} down to {}; quotient dims are window upper bounds",
        levels[0],
        levels[levels.len() - 1]
    ));
    Ok(FiltrationOutcome { suite, dims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Aut;
    use crate::rat::FracExp;

    fn bim(aut: Aut, l: u32, i: u32, cutoff: u32) -> Bimodule {
        let voa = VoaContext::new(aut, cutoff);
        let t = voa.order();
        let ctx = ZhuContext::new(voa, ModIndex::new(l, i, t).unwrap()).unwrap();
        Bimodule::build(BimoduleContext::new(ctx)).unwrap()
    }

    #[test]
    fn unit_star_identities() {
        let b = bim(Aut::Theta, 0, 1, 7);
        let one = b.ctx.voa().one();
        for w in basis_window(Sector::Untwisted, 5) {
            assert_eq!(star_left(&b.ctx, &one, &w).unwrap(), w);
            assert_eq!(star_right(&b.ctx, &w, &one).unwrap(), w);
        }
    }

    #[test]
    fn odd_eigenspace_kills_both_actions() {
        let b = bim(Aut::Theta, 0, 1, 7);
        let a = b.ctx.voa().generator();
        let w = b.ctx.voa().omega();
        assert!(star_left(&b.ctx, &a, &w).unwrap().is_zero());
        assert!(star_right(&b.ctx, &w, &a).unwrap().is_zero());
    }

    #[test]
    fn adjoint_products_match_algebra_side() {
        let b = bim(Aut::Id, 0, 0, 8);
        let om = b.ctx.voa().omega();
        let one = b.ctx.voa().one();
        assert_eq!(
            circ_m(&b.ctx, &om, &one).unwrap(),
            crate::zhu::circ_v(&b.ctx.zhu, &om, &one).unwrap()
        );
        assert_eq!(star_left(&b.ctx, &om, &one).unwrap(), om);
    }

    #[test]
    fn generators_die_in_quotient() {
        let b = bim(Aut::Theta, 0, 1, 7);
        for g in span_o_m(&b.ctx).unwrap() {
            assert!(b.reduce(&g).unwrap().is_zero());
        }
    }

    #[test]
    fn commutator_defect_membership_nontrivial_level() {
        // l = 1 exercises the telescoping identity for real
        for b in [bim(Aut::Id, 1, 0, 9), bim(Aut::Theta, 1, 0, 9)] {
            let om = b.ctx.voa().omega();
            let one = b.ctx.voa().one();
            let defect = star_left(&b.ctx, &om, &one)
                .unwrap()
                .sub(&star_right(&b.ctx, &one, &om).unwrap())
                .sub(&kernel_one_plus_z_pow(&b, &om, &one, 4).unwrap());
            assert!(b.reduce(&defect).unwrap().is_zero());
        }
    }

    #[test]
    fn axiom_suite_small_window() {
        let b = bim(Aut::Theta, 0, 1, 8);
        let out = bimodule_axiom_suite(&b, 4, &[]).unwrap();
        assert!(out.pass, "failures: {:?}", out.failures);
    }

    #[test]
    fn epi_smoke() {
        let voa = VoaContext::new(Aut::Theta, 7);
        let hi = Bimodule::build(BimoduleContext::new(
            ZhuContext::new(voa.clone(), ModIndex::new(0, 1, 2).unwrap()).unwrap(),
        ))
        .unwrap();
        let lo = Bimodule::build(BimoduleContext::new(
            ZhuContext::new(voa.clone(), ModIndex::new(0, 0, 2).unwrap()).unwrap(),
        ))
        .unwrap();
        let samples: Vec<(FockVector, FockVector)> = basis_window(Sector::Untwisted, 3)
            .into_iter()
            .flat_map(|u| {
                basis_window(Sector::Untwisted, 3)
                    .into_iter()
                    .map(move |w| (u.clone(), w))
            })
            .collect();
        let out = epi_lower(&hi, &lo, &samples).unwrap();
        assert!(out.pass, "failures: {:?}", out.failures);
    }

    #[test]
    fn phi_suite_smoke() {
        let b = bim(Aut::Theta, 0, 1, 8);
        let b_inv = bim(Aut::Theta, 0, 1, 8);
        let samples: Vec<(FockVector, FockVector)> = basis_window(Sector::Untwisted, 4)
            .into_iter()
            .flat_map(|u| {
                basis_window(Sector::Untwisted, 3)
                    .into_iter()
                    .map(move |w| (u.clone(), w))
            })
            .collect();
        let out = phi_m_suite(&b, &b_inv, &samples).unwrap();
        assert!(out.pass, "failures: {:?}", out.failures);
    }

    #[test]
    fn filtration_smoke() {
        let voa = VoaContext::new(Aut::Theta, 6);
        let out = filtration_report(&voa, ModIndex::new(0, 1, 2).unwrap(), 4).unwrap();
        assert!(out.suite.pass, "failures: {:?}", out.suite.failures);
        assert_eq!(
            out.dims.a_gn,
            out.dims.a_g0 + out.dims.subquotients.iter().sum::<usize>()
        );
    }

    #[test]
    fn shifted_kernel_membership_sample() {
        let b = bim(Aut::Theta, 0, 1, 8);
        let a = b.ctx.voa().generator();
        let one = b.ctx.voa().one();
        for (k, m) in [(0i64, 0i64), (0, 1), (1, 1), (1, 2)] {
            let x = kernel_product(&b.ctx.zhu, &a, &one, k, m).unwrap();
            assert!(
                b.reduce(&x).unwrap().is_zero(),
                "shifted kernel (k={k},m={m}) escaped"
            );
        }
        let _ = FracExp::zero();
    }
}
