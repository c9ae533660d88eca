//! Intertwiner layer: graded components of an intertwining operator between
//! an untwisted source module and a pair of twisted target modules, realized
//! concretely by the twisted module map itself, plus the machine checks that
//! its graded components intertwine the algebra actions and kill the module
//! ideal.

use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::bimod::{span_o_m, star_left_lin, star_right_lin, BimoduleContext};
use crate::error::{Error, Result};
use crate::fock::{keys_up_to, level_keys, FockKey, FockVector, Sector, VoaContext};
use crate::rat::{FracExp, Rat};
use crate::report::SuiteOutcome;
use crate::zhu::o_act;

/// An intertwining operator available to this backend: the module map of
/// the (possibly twisted) Fock module, or the zero operator (kept for the
/// degenerate probe).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntertwinerKind {
    Adjoint,
    Zero,
}

/// Intertwiner of type (target over source x target): source is the algebra
/// as a module over itself, both targets are the sector module of the
/// context. Conformal weights h0 of the source and h1 = h2 of the targets
/// fix the mode offset, which vanishes here since h1 = h2 and h0 = 0.
#[derive(Clone)]
pub struct Intertwiner {
    pub kind: IntertwinerKind,
    pub voa: Arc<VoaContext>,
    pub target_sector: Sector,
    pub h0: Rat,
    pub h1: Rat,
    pub h2: Rat,
}

impl Intertwiner {
    /// Graded mode w(n): the coefficient operator of the expansion of the
    /// module map, which for this realization is the plain mode action.
    pub fn mode(&self, w0: &FockVector, n: FracExp, w1: &FockVector) -> Result<FockVector> {
        match self.kind {
            IntertwinerKind::Zero => Ok(FockVector::zero(w1.sector())),
            IntertwinerKind::Adjoint => self.voa.mode_act(w0, n, w1),
        }
    }
}

/// The canonical intertwiner: the twisted module map (untwisted module map
/// when the automorphism is trivial). Target conformal weight is 1/16 in
/// the twisted sector and 0 otherwise.
pub fn adjoint_intertwiner(voa: &Arc<VoaContext>) -> Intertwiner {
    let target_sector = if voa.order() == 2 {
        Sector::Twisted
    } else {
        Sector::Untwisted
    };
    let h = VoaContext::sector_h(target_sector);
    Intertwiner {
        kind: IntertwinerKind::Adjoint,
        voa: voa.clone(),
        target_sector,
        h0: Rat::zero(),
        h1: h.clone(),
        h2: h,
    }
}

/// The zero intertwiner of the same type.
pub fn zero_intertwiner(voa: &Arc<VoaContext>) -> Intertwiner {
    Intertwiner {
        kind: IntertwinerKind::Zero,
        ..adjoint_intertwiner(voa)
    }
}

/// Exact matrix of a graded component between two module levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHom {
    pub source_level: FracExp,
    pub target_level: FracExp,
    source_basis: Vec<FockKey>,
    target_basis: Vec<FockKey>,
    /// rows x cols = target x source, dense.
    entries: Vec<Vec<Rat>>,
}

impl GradedHom {
    fn zero(source_level: FracExp, target_level: FracExp, source: Vec<FockKey>, target: Vec<FockKey>) -> Self {
        let entries = vec![vec![Rat::zero(); source.len()]; target.len()];
        GradedHom {
            source_level,
            target_level,
            source_basis: source,
            target_basis: target,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(|c| c.is_zero()))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.target_basis.len(), self.source_basis.len())
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rat {
        &self.entries[row][col]
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &GradedHom) -> GradedHom {
        assert_eq!(self.source_basis, other.target_basis, "level mismatch in composition");
        let mut out = GradedHom::zero(
            other.source_level,
            self.target_level,
            other.source_basis.clone(),
            self.target_basis.clone(),
        );
        for r in 0..self.target_basis.len() {
            for c in 0..other.source_basis.len() {
                let mut acc = Rat::zero();
                for k in 0..self.source_basis.len() {
                    acc += &(&self.entries[r][k] * &other.entries[k][c]);
                }
                out.entries[r][c] = acc;
            }
        }
        out
    }

    /// Identity scaled by a constant (square levels only).
    pub fn scalar(level: FracExp, basis: Vec<FockKey>, c: &Rat) -> GradedHom {
        let mut out = GradedHom::zero(level, level, basis.clone(), basis);
        for i in 0..out.source_basis.len() {
            out.entries[i][i] = c.clone();
        }
        out
    }

    pub fn sub(&self, other: &GradedHom) -> GradedHom {
        assert_eq!(self.dims(), other.dims());
        let mut out = self.clone();
        for r in 0..out.entries.len() {
            for c in 0..out.entries[r].len() {
                out.entries[r][c] = &self.entries[r][c] - &other.entries[r][c];
            }
        }
        out
    }
}

impl Serialize for GradedHom {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Hom<'a> {
            source_level: String,
            target_level: String,
            matrix: &'a MatrixRows<'a>,
        }
        struct MatrixRows<'a>(&'a Vec<Vec<Rat>>);
        impl Serialize for MatrixRows<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for row in self.0 {
                    let strings: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                    seq.serialize_element(&strings)?;
                }
                seq.end()
            }
        }
        Hom {
            source_level: self.source_level.to_string(),
            target_level: self.target_level.to_string(),
            matrix: &MatrixRows(&self.entries),
        }
        .serialize(s)
    }
}

fn level_basis(sector: Sector, level: FracExp) -> Result<Vec<FockKey>> {
    let d2 = level.doubled().ok_or_else(|| Error::InvalidArgument("level outside (1/2)Z".into()))?;
    Ok(level_keys(sector, d2))
}

/// Graded component o^I_{t,s}(w) = w(deg w - 1 - t + s) as an exact matrix
/// from the source level s to the target level t. Components whose mode
/// index falls outside the coset carried by the operand vanish.
pub fn o_i(iw: &Intertwiner, w: &FockVector, t: FracExp, s: FracExp) -> Result<GradedHom> {
    if w.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch("graded components take untwisted operands".into()));
    }
    let source = level_basis(iw.target_sector, s)?;
    let target = level_basis(iw.target_sector, t)?;
    let mut out = GradedHom::zero(s, t, source.clone(), target.clone());
    let target_index: std::collections::HashMap<&FockKey, usize> =
        target.iter().enumerate().map(|(i, k)| (k, i)).collect();
    for ((d2, p), comp) in w.by_depth_parity() {
        // mode index deg w - 1 - t + s, doubled
        let (s2, t2) = (s.doubled().unwrap(), t.doubled().unwrap());
        let k2 = d2 - 2 - t2 + s2;
        let valid = match iw.target_sector {
            Sector::Untwisted => k2.rem_euclid(2) == 0,
            Sector::Twisted => k2.rem_euclid(2) == i64::from(p),
        };
        if !valid {
            continue;
        }
        for (col, src_key) in source.iter().enumerate() {
            let img = iw.mode(&comp, FracExp::from_doubled(k2), &FockVector::monomial(src_key.clone()))?;
            for (tk, c) in img.terms() {
                match target_index.get(tk) {
                    Some(&row) => out.entries[row][col] = &out.entries[row][col] + c,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "graded component left its target level: {tk} from {src_key}"
                        )))
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of the zero mode o(u) on one module level.
pub fn o_act_matrix(voa: &VoaContext, u: &FockVector, sector: Sector, level: FracExp) -> Result<GradedHom> {
    let basis = level_basis(sector, level)?;
    let mut out = GradedHom::zero(level, level, basis.clone(), basis.clone());
    let index: std::collections::HashMap<&FockKey, usize> =
        basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    for (col, key) in basis.iter().enumerate() {
        let img = o_act(voa, u, &FockVector::monomial(key.clone()))?;
        for (tk, c) in img.terms() {
            let row = index[tk];
            out.entries[row][col] = &out.entries[row][col] + c;
        }
    }
    Ok(out)
}

/// Homomorphism checks for the graded components: both action identities on
/// a window of operands and the vanishing on every ideal generator.
pub fn check_pi_hom(
    iw: &Intertwiner,
    ctx: &BimoduleContext,
    s: FracExp,
    t: FracExp,
    window2: i64,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("pi-hom");
    if s.to_rat() > ctx.n().n() || t.to_rat() > ctx.n().n() {
        return Err(Error::InvalidArgument(format!(
            "levels s={s}, t={t} must not exceed n={}",
            ctx.n()
        )));
    }
    let voa = ctx.voa();
    let window: Vec<FockVector> = keys_up_to(Sector::Untwisted, window2)
        .into_iter()
        .map(FockVector::monomial)
        .collect();

    for u in &window {
        let o_u = o_act_matrix(voa, u, iw.target_sector, t)?;
        let o_u_src = o_act_matrix(voa, u, iw.target_sector, s)?;
        for w0 in &window {
            let left = o_i(iw, &star_left_lin(ctx, u, w0)?, t, s)?;
            let right = o_u.compose(&o_i(iw, w0, t, s)?);
            out.check(left == right, || {
                format!("o(u*w) != o(u)o(w) at u={u}, w={w0}, s={s}, t={t}")
            });
            let left = o_i(iw, &star_right_lin(ctx, w0, u)?, t, s)?;
            let right = o_i(iw, w0, t, s)?.compose(&o_u_src);
            out.check(left == right, || {
                format!("o(w*u) != o(w)o(u) at u={u}, w={w0}, s={s}, t={t}")
            });
        }
    }

    for g in span_o_m(ctx)? {
        let img = o_i(iw, &g, t, s)?;
        out.check(img.is_zero(), || {
            format!("ideal generator has nonzero graded component at s={s}, t={t}")
        });
    }
    out.note(format!(
        "graded components over levels s={s}, t={t}; window weight <= {}",
        window2 / 2
    ));
    Ok(out)
}

/// Degenerate-aware nonvanishing probe: a nonzero intertwiner must induce a
/// nonzero map on some graded component with levels bounded by n, and the
/// zero intertwiner must induce zero.
pub fn injectivity_probe(iw: &Intertwiner, ctx: &BimoduleContext, window2: i64) -> Result<bool> {
    let n2 = ctx
        .n()
        .n_exp()
        .doubled()
        .ok_or_else(|| Error::InvalidArgument("index outside (1/2)Z".into()))?;
    let window: Vec<FockVector> = keys_up_to(Sector::Untwisted, window2)
        .into_iter()
        .map(FockVector::monomial)
        .collect();
    let mut nonzero = false;
    let mut s2 = 0;
    while s2 <= n2 {
        let mut t2 = 0;
        while t2 <= n2 {
            for w in &window {
                let m = o_i(iw, w, FracExp::from_doubled(t2), FracExp::from_doubled(s2))?;
                if !m.is_zero() {
                    nonzero = true;
                }
            }
            t2 += 1;
        }
        s2 += 1;
    }
    Ok(match iw.kind {
        IntertwinerKind::Adjoint => nonzero,
        IntertwinerKind::Zero => !nonzero,
    })
}
