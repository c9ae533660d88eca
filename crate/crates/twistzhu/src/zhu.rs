//! Level-n twisted Zhu algebra layer: the two products on the algebra, the
//! spanning set of the quotient ideal, weight-truncated quotient spaces with
//! canonical coset representatives, the level-lowering surjection, the
//! grade-preserving involution phi, and the depth-filtered module functor
//! Omega with its zero-mode action.
//!
//! Truncation semantics: a spanning generator is admitted only when it lies
//! entirely inside the weight window, so computed quotient dimensions are
//! upper bounds for the image of the window and are labeled as such in
//! reports. Projecting partial generators would create spurious relations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{keys_up_to, FockKey, FockVector, Sector, VoaContext};
use crate::linalg::{Echelon, SparseRow};
use crate::rat::{int_binomial, rat_binomial, FracExp, ModIndex, Rat};

/// Context for one algebra A_{g,n} at a weight cutoff: the backend plus the
/// decomposition n = l + i/T. The cutoff lives on the backend context.
#[derive(Clone)]
pub struct ZhuContext {
    pub voa: Arc<VoaContext>,
    pub n: ModIndex,
}

impl ZhuContext {
    pub fn new(voa: Arc<VoaContext>, n: ModIndex) -> Result<Self> {
        if n.t != voa.order() {
            return Err(Error::InvalidArgument(format!(
                "index denominator T={} does not match automorphism order {}",
                n.t,
                voa.order()
            )));
        }
        Ok(ZhuContext { voa, n })
    }

    pub fn l(&self) -> i64 {
        i64::from(self.n.l)
    }

    /// Kernel data for a homogeneous left operand of doubled weight `wu2`
    /// and eigenvalue index `r`: the binomial exponent and the denominator
    /// power of the defining residue.
    pub fn kernel(&self, wu2: i64, r: u32) -> Result<(Rat, i64)> {
        let l = self.l();
        let t = i64::from(self.n.t);
        let d_r = self.n.delta_of(i64::from(r))?;
        let d_tr = self.n.delta_of(t - i64::from(r))?;
        let alpha = Rat::new(wu2, 2) + Rat::from_int(l - 1 + d_r) + Rat::new(i64::from(r), t);
        let dpow = 2 * l + d_r + d_tr + 1;
        Ok((alpha, dpow))
    }

    fn eigenvalue_of(&self, parity: u32) -> u32 {
        if self.voa.order() == 1 {
            0
        } else {
            parity
        }
    }
}

fn require_homogeneous(u: &FockVector) -> Result<(i64, u32)> {
    u.homogeneous_type()
        .ok_or_else(|| Error::InvalidArgument("operand must be weight- and eigenvalue-homogeneous".into()))
}

/// Residue product against the kernel (1+z)^{alpha + k_extra} / z^{dpow + m_extra}
/// for homogeneous `u`; this is the defining product when the extras vanish
/// and the shifted-kernel family of the ideal membership checks otherwise.
pub fn kernel_product(
    ctx: &ZhuContext,
    u: &FockVector,
    target: &FockVector,
    k_extra: i64,
    m_extra: i64,
) -> Result<FockVector> {
    if u.is_zero() || target.is_zero() {
        return Ok(FockVector::zero(target.sector()));
    }
    let (wu2, pu) = require_homogeneous(u)?;
    let r = ctx.eigenvalue_of(pu);
    let (alpha, dpow) = ctx.kernel(wu2, r)?;
    let alpha = alpha + Rat::from_int(k_extra);
    let dpow = dpow + m_extra;
    let dt2 = target.max_depth2().unwrap_or(0);
    let jmax = (wu2 + dt2 - 2) / 2 + dpow;
    let mut acc = FockVector::zero(target.sector());
    for j in 0..=jmax.max(-1) {
        let c = rat_binomial(&alpha, j as u32);
        if c.is_zero() {
            continue;
        }
        let part = ctx
            .voa
            .mode_act(u, FracExp::from_int(j - dpow), target)?;
        acc.add_scaled(&part, &c);
    }
    Ok(acc)
}

/// u ∘ v at level n: the residue product whose span defines the quotient
/// ideal. `u` must be homogeneous.
pub fn circ_v(ctx: &ZhuContext, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    kernel_product(ctx, u, v, 0, 0)
}

/// Left star product for homogeneous `u`: zero off the fixed eigenspace,
/// otherwise the alternating double binomial sum.
pub fn star_v(ctx: &ZhuContext, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    if u.is_zero() || v.is_zero() {
        return Ok(FockVector::zero(v.sector()));
    }
    let (wu2, pu) = require_homogeneous(u)?;
    if ctx.eigenvalue_of(pu) != 0 {
        return Ok(FockVector::zero(v.sector()));
    }
    let l = ctx.l();
    let alpha = Rat::new(wu2, 2) + Rat::from_int(l);
    let dv2 = v.max_depth2().unwrap_or(0);
    let mut acc = FockVector::zero(v.sector());
    for m in 0..=l {
        let outer = int_binomial(m + l, l as u32);
        let outer = if m % 2 == 0 { outer } else { -outer };
        let jmax = (wu2 + dv2 - 2) / 2 + m + l + 1;
        for j in 0..=jmax.max(-1) {
            let c = rat_binomial(&alpha, j as u32);
            if c.is_zero() {
                continue;
            }
            let part = ctx
                .voa
                .mode_act(u, FracExp::from_int(j - m - l - 1), v)?;
            acc.add_scaled(&part, &(&outer * &c));
        }
    }
    Ok(acc)
}

/// Right star product w * u for homogeneous `u`: constant sign (-1)^l and
/// the weight-shifted binomial exponents; zero off the fixed eigenspace.
pub fn star_right_v(ctx: &ZhuContext, w: &FockVector, u: &FockVector) -> Result<FockVector> {
    if u.is_zero() || w.is_zero() {
        return Ok(FockVector::zero(w.sector()));
    }
    let (wu2, pu) = require_homogeneous(u)?;
    if ctx.eigenvalue_of(pu) != 0 {
        return Ok(FockVector::zero(w.sector()));
    }
    let l = ctx.l();
    let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    let dw2 = w.max_depth2().unwrap_or(0);
    let mut acc = FockVector::zero(w.sector());
    for m in 0..=l {
        let outer = int_binomial(m + l, l as u32) * sign.clone();
        let alpha = Rat::new(wu2, 2) + Rat::from_int(m - 1);
        let jmax = (wu2 + dw2 - 2) / 2 + m + l + 1;
        for j in 0..=jmax.max(-1) {
            let c = rat_binomial(&alpha, j as u32);
            if c.is_zero() {
                continue;
            }
            let part = ctx
                .voa
                .mode_act(u, FracExp::from_int(j - m - l - 1), w)?;
            acc.add_scaled(&part, &(&outer * &c));
        }
    }
    Ok(acc)
}

/// Bilinear extension of [`circ_v`] over the homogeneous components of `u`.
pub fn circ_v_lin(ctx: &ZhuContext, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    let mut acc = FockVector::zero(v.sector());
    for comp in u.by_depth_parity().values() {
        acc = acc.add(&circ_v(ctx, comp, v)?);
    }
    Ok(acc)
}

/// Bilinear extension of [`star_v`] over the homogeneous components of `u`.
pub fn star_v_lin(ctx: &ZhuContext, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    let mut acc = FockVector::zero(v.sector());
    for comp in u.by_depth_parity().values() {
        acc = acc.add(&star_v(ctx, comp, v)?);
    }
    Ok(acc)
}

/// Bilinear extension of [`star_right_v`] over the components of `u`.
pub fn star_right_v_lin(ctx: &ZhuContext, w: &FockVector, u: &FockVector) -> Result<FockVector> {
    let mut acc = FockVector::zero(w.sector());
    for comp in u.by_depth_parity().values() {
        acc = acc.add(&star_right_v(ctx, w, comp)?);
    }
    Ok(acc)
}

/// Spanning set of the quotient ideal inside the algebra window: all
/// whole-window circle products of basis monomials plus the translation
/// generators (L(-1)+L(0))u. Generator production parallelizes over pairs;
/// the output order is fixed by the pair enumeration.
pub fn span_o_v(ctx: &ZhuContext) -> Result<Vec<FockVector>> {
    let n2 = ctx.voa.cutoff2();
    let basis = keys_up_to(Sector::Untwisted, n2);
    let mut gens: Vec<FockVector> = Vec::new();
    for uk in &basis {
        if uk.depth2() + 2 <= n2 {
            let u = FockVector::monomial(uk.clone());
            let g = ctx
                .voa
                .l_op(-1, &u)?
                .add(&u.scale(&Rat::new(uk.depth2(), 2)));
            gens.push(g);
        }
    }
    let mut pairs: Vec<(FockKey, FockKey)> = Vec::new();
    for uk in &basis {
        let r = ctx.eigenvalue_of(uk.parity());
        let (_, dpow) = ctx.kernel(uk.depth2(), r)?;
        let spread2 = 2 * (dpow - 1);
        for vk in &basis {
            if uk.depth2() + vk.depth2() + spread2 <= n2 {
                pairs.push((uk.clone(), vk.clone()));
            }
        }
    }
    let circ: Result<Vec<FockVector>> = pairs
        .par_iter()
        .map(|(uk, vk)| {
            circ_v(
                ctx,
                &FockVector::monomial(uk.clone()),
                &FockVector::monomial(vk.clone()),
            )
        })
        .collect();
    gens.extend(circ?);
    Ok(gens)
}

/// Weight-truncated quotient: ambient basis up to the cutoff plus the
/// reduced echelon form of a spanning set. `reduce` returns the canonical
/// coset representative (zero exactly on the span).
///
/// Pivoting eliminates the highest-weight key of each row, so reduction
/// rewrites downward and canonical representatives live on low-weight free
/// keys; the weight of a representative never exceeds the weight of the
/// input. Products of representatives therefore stay inside the window.
pub struct QuotientSpace {
    sector: Sector,
    cutoff2: i64,
    basis: Vec<FockKey>,
    index: HashMap<FockKey, usize>,
    ech: Echelon,
    generators: usize,
}

impl QuotientSpace {
    pub fn build(sector: Sector, cutoff2: i64, gens: &[FockVector]) -> Result<Self> {
        Self::build_ordered(sector, cutoff2, gens, false)
    }

    /// Same quotient with the opposite (upward-rewriting) column order;
    /// used as an independent elimination-order oracle for rank results.
    pub fn build_reversed(sector: Sector, cutoff2: i64, gens: &[FockVector]) -> Result<Self> {
        Self::build_ordered(sector, cutoff2, gens, true)
    }

    fn build_ordered(
        sector: Sector,
        cutoff2: i64,
        gens: &[FockVector],
        reversed: bool,
    ) -> Result<Self> {
        let mut basis = keys_up_to(sector, cutoff2);
        if !reversed {
            basis.reverse();
        }
        let index: HashMap<FockKey, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        let mut q = QuotientSpace {
            sector,
            cutoff2,
            basis,
            index,
            ech: Echelon::new(),
            generators: gens.len(),
        };
        for g in gens {
            let row = q.to_row(g)?;
            q.ech.insert(row);
        }
        Ok(q)
    }

    fn to_row(&self, x: &FockVector) -> Result<SparseRow> {
        if x.sector() != self.sector {
            return Err(Error::SectorMismatch("vector outside quotient sector".into()));
        }
        let mut row: SparseRow = Vec::with_capacity(x.num_terms());
        for (k, c) in x.terms() {
            match self.index.get(k) {
                Some(&j) => row.push((j, c.clone())),
                None => {
                    return Err(Error::CutoffOverflow {
                        needed: k.depth(),
                        cutoff: FracExp::from_doubled(self.cutoff2),
                    })
                }
            }
        }
        row.sort_by_key(|(j, _)| *j);
        Ok(row)
    }

    fn from_row(&self, row: &SparseRow) -> FockVector {
        let mut out = FockVector::zero(self.sector);
        for (j, c) in row {
            out.add_term(self.basis[*j].clone(), c);
        }
        out
    }

    /// Canonical coset representative modulo the span.
    pub fn reduce(&self, x: &FockVector) -> Result<FockVector> {
        let row = self.to_row(x)?;
        Ok(self.from_row(&self.ech.reduce(&row)))
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn dim_ambient(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the image of the weight window in the quotient; an
    /// upper bound for the window's true image ("dim<=N (upper bound)").
    pub fn dim_upper(&self) -> usize {
        self.basis.len() - self.ech.rank()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Representative keys for the quotient image: the non-pivot columns,
    /// in canonical ascending order.
    pub fn free_keys(&self) -> Vec<FockKey> {
        let mut out = Vec::new();
        for (j, k) in self.basis.iter().enumerate() {
            if !self.ech.has_pivot(j) {
                out.push(k.clone());
            }
        }
        out.sort();
        out
    }
}

/// The algebra at level n and cutoff N: context plus built quotient.
pub struct ZhuAlgebra {
    pub ctx: ZhuContext,
    pub q: QuotientSpace,
}

impl ZhuAlgebra {
    pub fn build(ctx: ZhuContext) -> Result<Self> {
        let gens = span_o_v(&ctx)?;
        let q = QuotientSpace::build(Sector::Untwisted, ctx.voa.cutoff2(), &gens)?;
        Ok(ZhuAlgebra { ctx, q })
    }

    pub fn reduce(&self, x: &FockVector) -> Result<FockVector> {
        self.q.reduce(x)
    }

    /// Product of cosets: reduce after the star product of representatives.
    pub fn mul(&self, a: &FockVector, b: &FockVector) -> Result<FockVector> {
        self.q.reduce(&star_v_lin(&self.ctx, a, b)?)
    }
}

/// Level-lowering surjection check from level n to n - 1/T: the higher
/// ideal dies in the lower quotient and star products agree (exactly when
/// the fractional part of n is positive, modulo the lower span otherwise).
pub fn surjection_check(
    hi: &ZhuAlgebra,
    lo: &ZhuAlgebra,
    samples: &[(FockVector, FockVector)],
) -> Result<bool> {
    match hi.ctx.n.lower() {
        Some(low) if low == lo.ctx.n => {}
        _ => {
            return Err(Error::InvalidArgument(format!(
                "lower context must sit at n - 1/T (got {} below {})",
                lo.ctx.n, hi.ctx.n
            )))
        }
    }
    for g in span_o_v(&hi.ctx)? {
        if !lo.reduce(&g)?.is_zero() {
            return Ok(false);
        }
    }
    for (u, v) in samples {
        let p_hi = star_v_lin(&hi.ctx, u, v)?;
        let p_lo = star_v_lin(&lo.ctx, u, v)?;
        if hi.ctx.n.i >= 1 {
            if p_hi != p_lo {
                return Ok(false);
            }
        } else if !lo.reduce(&p_hi.sub(&p_lo))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The grading involution e^{L(1)} (-1)^{L(0)}. L(1) lowers weight, so the
/// exponential terminates inside any window.
pub fn phi(voa: &VoaContext, u: &FockVector) -> Result<FockVector> {
    if u.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch("phi acts on untwisted vectors".into()));
    }
    let mut signed = FockVector::zero(Sector::Untwisted);
    for (k, c) in u.terms() {
        let wt = k.depth2() / 2;
        let c = if wt.rem_euclid(2) == 0 { c.clone() } else { -c };
        signed.add_term(k.clone(), &c);
    }
    let mut acc = signed.clone();
    let mut cur = signed;
    let mut fact = Rat::one();
    let mut j = 1i64;
    loop {
        cur = voa.l_op(1, &cur)?;
        if cur.is_zero() {
            break;
        }
        fact = fact * Rat::from_int(j);
        acc.add_scaled(&cur, &fact.recip());
        j += 1;
    }
    Ok(acc)
}

/// Basis of the depth-filtered subspace Omega_n(W) within the scan window:
/// vectors killed by every mode u_{wt u - 1 + k} with k > n, for u running
/// over the algebra basis up to `u_wt_cap2`.
pub fn omega_filter(
    voa: &Arc<VoaContext>,
    sector: Sector,
    n: &ModIndex,
    deg_cap2: i64,
    u_wt_cap2: i64,
) -> Result<Vec<FockVector>> {
    let targets = keys_up_to(sector, deg_cap2);
    let index: HashMap<FockKey, usize> = targets
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    let n2 = n
        .n_exp()
        .doubled()
        .ok_or_else(|| Error::InvalidArgument("index outside (1/2)Z".into()))?;
    let mut ech = Echelon::new();
    for uk in keys_up_to(Sector::Untwisted, u_wt_cap2) {
        if uk.is_vacuum() {
            continue;
        }
        let u = FockVector::monomial(uk.clone());
        let r = if sector == Sector::Twisted { i64::from(uk.parity()) } else { 0 };
        let mut k2 = n2 + 1;
        if k2.rem_euclid(2) != r.rem_euclid(2) {
            k2 += 1;
        }
        while k2 <= deg_cap2 {
            let mode = FracExp::from_doubled(uk.depth2() - 2 + k2);
            let mut rows: BTreeMap<FockKey, SparseRow> = BTreeMap::new();
            for (j, wk) in targets.iter().enumerate() {
                if wk.depth2() < k2 {
                    continue;
                }
                let img = voa.mode_act(&u, mode, &FockVector::monomial(wk.clone()))?;
                for (tk, c) in img.terms() {
                    rows.entry(tk.clone()).or_default().push((j, c.clone()));
                }
            }
            for (_, mut row) in rows {
                row.sort_by_key(|(j, _)| *j);
                ech.insert(row);
            }
            k2 += 2;
        }
    }
    let _ = index;
    let mut out = Vec::new();
    for v in ech.nullspace(targets.len()) {
        let mut vec = FockVector::zero(sector);
        for (j, c) in v {
            vec.add_term(targets[j].clone(), &c);
        }
        out.push(vec);
    }
    Ok(out)
}

/// Zero-mode action o(v) = v_{wt v - 1}, extended linearly; components whose
/// forced mode coset excludes wt v - 1 (odd eigenvalue on the twisted
/// module) act as zero.
pub fn o_act(voa: &VoaContext, v: &FockVector, w: &FockVector) -> Result<FockVector> {
    let mut acc = FockVector::zero(w.sector());
    for ((d2, p), comp) in v.by_depth_parity() {
        let k2 = d2 - 2;
        let valid = match w.sector() {
            Sector::Untwisted => true,
            Sector::Twisted => k2.rem_euclid(2) == i64::from(p),
        };
        if !valid {
            continue;
        }
        acc = acc.add(&voa.mode_act(&comp, FracExp::from_doubled(k2), w)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Aut;

    fn theta_ctx(n_l: u32, n_i: u32, cutoff: u32) -> ZhuContext {
        let voa = VoaContext::new(Aut::Theta, cutoff);
        ZhuContext::new(voa, ModIndex::new(n_l, n_i, 2).unwrap()).unwrap()
    }

    fn id_ctx(n_l: u32, cutoff: u32) -> ZhuContext {
        let voa = VoaContext::new(Aut::Id, cutoff);
        ZhuContext::new(voa, ModIndex::new(n_l, 0, 1).unwrap()).unwrap()
    }

    #[test]
    fn circ_vacuum_vanishes() {
        for ctx in [id_ctx(0, 8), id_ctx(1, 8), theta_ctx(0, 1, 8)] {
            let one = ctx.voa.one();
            for vk in keys_up_to(Sector::Untwisted, 6) {
                let v = FockVector::monomial(vk);
                assert!(circ_v(&ctx, &one, &v).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn circ_omega_vacuum() {
        let ctx = id_ctx(0, 8);
        let om = ctx.voa.omega();
        let got = circ_v(&ctx, &om, &ctx.voa.one()).unwrap();
        let expect = ctx
            .voa
            .l_op(-1, &om)
            .unwrap()
            .add(&om.scale(&Rat::from_int(2)));
        assert_eq!(got, expect);
    }

    #[test]
    fn circ_generator_twisted_level_zero() {
        let ctx = theta_ctx(0, 0, 8);
        let a = ctx.voa.generator();
        let got = circ_v(&ctx, &a, &a).unwrap();
        // a(-1)^2 1 - 1/8 = 2*omega - (1/8)*1
        let expect = ctx
            .voa
            .omega()
            .scale(&Rat::from_int(2))
            .add(&ctx.voa.one().scale(&Rat::new(-1, 8)));
        assert_eq!(got, expect);
    }

    #[test]
    fn star_unit_acts_as_identity() {
        for ctx in [id_ctx(0, 10), id_ctx(1, 10), theta_ctx(1, 1, 10)] {
            let one = ctx.voa.one();
            for vk in keys_up_to(Sector::Untwisted, 8) {
                let v = FockVector::monomial(vk);
                assert_eq!(star_v(&ctx, &one, &v).unwrap(), v);
                assert_eq!(star_right_v(&ctx, &v, &one).unwrap(), v);
            }
        }
    }

    #[test]
    fn star_kills_odd_eigenspace() {
        let ctx = theta_ctx(0, 1, 8);
        let a = ctx.voa.generator();
        let v = ctx.voa.omega();
        assert!(star_v(&ctx, &a, &v).unwrap().is_zero());
        assert!(star_right_v(&ctx, &v, &a).unwrap().is_zero());
    }

    #[test]
    fn star_omega_vacuum() {
        let ctx = id_ctx(0, 8);
        let om = ctx.voa.omega();
        let got = star_v(&ctx, &om, &ctx.voa.one()).unwrap();
        assert_eq!(got, om);
    }

    #[test]
    fn generators_reduce_to_zero() {
        let ctx = theta_ctx(0, 1, 7);
        let alg = ZhuAlgebra::build(ctx).unwrap();
        for g in span_o_v(&alg.ctx).unwrap() {
            assert!(alg.reduce(&g).unwrap().is_zero());
        }
        assert!(alg.reduce(&FockVector::zero(Sector::Untwisted)).unwrap().is_zero());
        // reduce is idempotent on a spread of vectors
        for k in keys_up_to(Sector::Untwisted, 7) {
            let x = FockVector::monomial(k);
            let r1 = alg.reduce(&x).unwrap();
            assert_eq!(alg.reduce(&r1).unwrap(), r1);
        }
    }

    #[test]
    fn circ_omega_is_translation_generator() {
        let ctx = id_ctx(0, 8);
        let alg = ZhuAlgebra::build(ctx).unwrap();
        let om = alg.ctx.voa.omega();
        let g = circ_v(&alg.ctx, &om, &alg.ctx.voa.one()).unwrap();
        assert!(alg.reduce(&g).unwrap().is_zero());
    }

    #[test]
    fn untwisted_level_zero_powers_independent() {
        let ctx = id_ctx(0, 6);
        let alg = ZhuAlgebra::build(ctx).unwrap();
        // images of a(-1)^k 1 for k = 0..3
        let mut ech = Echelon::new();
        let mut count = 0;
        for k in 0..=3u16 {
            let key = FockKey::from_doubled(Sector::Untwisted, vec![2; k as usize]).unwrap();
            let red = alg.reduce(&FockVector::monomial(key)).unwrap();
            assert!(!red.is_zero());
            let row: SparseRow = red
                .terms()
                .enumerate()
                .map(|(_, (kk, c))| (alg.q.index[kk], c.clone()))
                .collect();
            if ech.insert(row) {
                count += 1;
            }
        }
        assert_eq!(count, 4, "powers of the generator must stay independent");

        // independent elimination-order oracle: same rank both ways
        let gens = span_o_v(&alg.ctx).unwrap();
        let fwd = QuotientSpace::build(Sector::Untwisted, alg.ctx.voa.cutoff2(), &gens).unwrap();
        let rev = QuotientSpace::build_reversed(Sector::Untwisted, alg.ctx.voa.cutoff2(), &gens).unwrap();
        assert_eq!(fwd.rank(), rev.rank());
    }

    #[test]
    fn odd_generator_collapses_at_theta_level_zero() {
        let ctx = theta_ctx(0, 0, 6);
        let alg = ZhuAlgebra::build(ctx).unwrap();
        let a = alg.ctx.voa.generator();
        assert!(alg.reduce(&a).unwrap().is_zero());
    }

    #[test]
    fn unit_coset_is_identity() {
        let ctx = theta_ctx(0, 1, 7);
        let alg = ZhuAlgebra::build(ctx).unwrap();
        let one = alg.ctx.voa.one();
        for vk in keys_up_to(Sector::Untwisted, 4) {
            let v = alg.reduce(&FockVector::monomial(vk)).unwrap();
            assert_eq!(alg.mul(&one, &v).unwrap(), v);
        }
    }

    #[test]
    fn phi_examples() {
        let voa = VoaContext::new(Aut::Theta, 10);
        assert_eq!(phi(&voa, &voa.one()).unwrap(), voa.one());
        let a = voa.generator();
        assert_eq!(phi(&voa, &a).unwrap(), a.neg());
        let om = voa.omega();
        assert_eq!(phi(&voa, &om).unwrap(), om);
        // involution on the window
        for k in keys_up_to(Sector::Untwisted, 12) {
            let v = FockVector::monomial(k);
            assert_eq!(phi(&voa, &phi(&voa, &v).unwrap()).unwrap(), v);
        }
    }

    #[test]
    fn omega_filter_twisted_ground_level() {
        let voa = VoaContext::new(Aut::Theta, 16);
        let n = ModIndex::new(0, 0, 2).unwrap();
        let basis = omega_filter(&voa, Sector::Twisted, &n, 10, 10).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], FockVector::vacuum(Sector::Twisted));
    }

    #[test]
    fn zero_mode_examples() {
        let voa = VoaContext::new(Aut::Theta, 10);
        let w = FockVector::monomial(
            FockKey::from_doubled(Sector::Twisted, vec![3, 1]).unwrap(),
        );
        assert_eq!(o_act(&voa, &voa.one(), &w).unwrap(), w);
        // o(omega) = L(0)
        assert_eq!(
            o_act(&voa, &voa.omega(), &w).unwrap(),
            voa.l_op(0, &w).unwrap()
        );
        // odd eigenvalue acts as zero on the twisted module
        assert!(o_act(&voa, &voa.generator(), &w).unwrap().is_zero());
    }

    #[test]
    fn surjection_small() {
        let voa = VoaContext::new(Aut::Theta, 7);
        let hi = ZhuAlgebra::build(
            ZhuContext::new(voa.clone(), ModIndex::new(0, 1, 2).unwrap()).unwrap(),
        )
        .unwrap();
        let lo = ZhuAlgebra::build(
            ZhuContext::new(voa.clone(), ModIndex::new(0, 0, 2).unwrap()).unwrap(),
        )
        .unwrap();
        let samples: Vec<(FockVector, FockVector)> = keys_up_to(Sector::Untwisted, 3)
            .into_iter()
            .flat_map(|u| {
                keys_up_to(Sector::Untwisted, 3)
                    .into_iter()
                    .map(move |v| (FockVector::monomial(u.clone()), FockVector::monomial(v)))
            })
            .collect();
        assert!(surjection_check(&hi, &lo, &samples).unwrap());
        assert!(surjection_check(&lo, &hi, &samples).is_err());
    }
}
