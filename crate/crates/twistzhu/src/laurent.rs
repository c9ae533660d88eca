//! Finite-support Laurent polynomials and truncated series with exponents in
//! (1/T)Z, residue extraction, and the symbolic binomial identities behind
//! the quotient constructions.
//!
//! Key entry points:
//! - [`LaurentPoly`]: exact finite-support Laurent polynomial over Rat.
//! - [`TruncSeries`]: series with a certified truncation order so residues
//!   are exact or refused, never approximate.
//! - [`binom_expand`]: truncated expansion of (1+z)^alpha.
//! - [`check_telescoping_unit`], [`check_alternating_collapse`],
//!   [`check_binom_vanish`], [`check_bivariate_cancellation`]: the four
//!   combinatorial identities the quotient and homomorphism arguments rest on.
//! - [`compose_neg_frac`]: substitution z -> -z0/(1+z0) with Jacobian, used
//!   to verify the kernel transformation behind the phi-map identities.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::{int_binomial, rat_binomial, FracExp, Rat};

/// Formal variable tag. Arithmetic requires matching tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum Var {
    #[default]
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "z0")]
    Z0,
    #[serde(rename = "z1")]
    Z1,
    #[serde(rename = "z2")]
    Z2,
}

/// Exact Laurent polynomial: finite support, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<FracExp, Rat>,
    var: Var,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn zero_in(var: Var) -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
            var,
        }
    }

    pub fn one() -> Self {
        Self::monomial(Rat::one(), FracExp::zero())
    }

    pub fn monomial(coef: Rat, exp: FracExp) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coef.is_zero() {
            coeffs.insert(exp, coef);
        }
        LaurentPoly {
            coeffs,
            var: Var::Z,
        }
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: FracExp) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&FracExp, &Rat)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add_term(&mut self, exp: FracExp, coef: &Rat) {
        if coef.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Rat::zero);
        *slot += coef;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "variable tag mismatch");
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
            var: self.var,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero_in(self.var);
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
            var: self.var,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "variable tag mismatch");
        let mut out = Self::zero_in(self.var);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                out.add_term(*ea + *eb, &(ca * cb));
            }
        }
        out
    }

    /// Multiply by z^d.
    pub fn shift(&self, d: FracExp) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e + d, c.clone())).collect(),
            var: self.var,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one().with_var(self.var);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal derivative d/dz.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero_in(self.var);
        for (e, c) in &self.coeffs {
            out.add_term(*e - FracExp::from_int(1), &(c * &e.to_rat()));
        }
        out
    }

    /// Coefficient of z^{-1}; always certified for a finite polynomial.
    pub fn residue(&self) -> Rat {
        self.coeff(FracExp::from_int(-1))
    }

    /// Some(coef, exp) when the polynomial is a single monomial.
    pub fn as_monomial(&self) -> Option<(Rat, FracExp)> {
        if self.coeffs.len() == 1 {
            let (e, c) = self.coeffs.iter().next().unwrap();
            Some((c.clone(), *e))
        } else {
            None
        }
    }
}

/// (1+z)^k for a nonnegative integer k, as an exact polynomial.
pub fn one_plus_z_pow(k: u32) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for j in 0..=k {
        p.add_term(FracExp::from_int(i64::from(j)), &int_binomial(i64::from(k), j));
    }
    p
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let name = match self.var {
            Var::Z => "z",
            Var::Z0 => "z0",
            Var::Z1 => "z1",
            Var::Z2 => "z2",
        };
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{name}^({e})")?;
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exp: String,
            coef: &'a Rat,
        }
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            seq.serialize_element(&Term {
                exp: e.to_string(),
                coef: c,
            })?;
        }
        seq.end()
    }
}

/// Laurent series truncated at a certified order: exponents strictly above
/// `trunc` have been discarded and the bound records that fact, so residue
/// extraction can refuse to answer instead of being silently wrong.
/// `trunc == None` means the series is exact (no discarded terms).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: BTreeMap<FracExp, Rat>,
    lower: FracExp,
    trunc: Option<FracExp>,
    var: Var,
}

impl TruncSeries {
    pub fn exact(p: &LaurentPoly) -> Self {
        let lower = p
            .coeffs
            .keys()
            .next()
            .copied()
            .unwrap_or_else(FracExp::zero);
        TruncSeries {
            coeffs: p.coeffs.clone(),
            lower,
            trunc: None,
            var: p.var,
        }
    }

    pub fn zero_certified_to(trunc: FracExp) -> Self {
        TruncSeries {
            coeffs: BTreeMap::new(),
            lower: FracExp::zero(),
            trunc: Some(trunc),
            var: Var::Z,
        }
    }

    pub fn lower(&self) -> FracExp {
        self.lower
    }

    pub fn trunc(&self) -> Option<FracExp> {
        self.trunc
    }

    pub fn coeff(&self, exp: FracExp) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&FracExp, &Rat)> {
        self.coeffs.iter()
    }

    /// True when every exponent up to `e` is certified exact.
    pub fn certified_through(&self, e: FracExp) -> bool {
        match self.trunc {
            None => true,
            Some(k) => e <= k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "variable tag mismatch");
        let trunc = match (self.trunc, other.trunc) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let slot = coeffs.entry(*e).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                coeffs.remove(e);
            }
        }
        if let Some(k) = trunc {
            coeffs.retain(|e, _| *e <= k);
        }
        TruncSeries {
            coeffs,
            lower: self.lower.min(other.lower),
            trunc,
            var: self.var,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TruncSeries {
            coeffs: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect()
            },
            lower: self.lower,
            trunc: self.trunc,
            var: self.var,
        }
    }

    /// Multiply by z^d (shifts both the support and the certified bound).
    pub fn shift(&self, d: FracExp) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e + d, c.clone())).collect(),
            lower: self.lower + d,
            trunc: self.trunc.map(|k| k + d),
            var: self.var,
        }
    }

    /// Cauchy product with truncation-order bookkeeping: the result is
    /// certified through min(a.trunc + b.lower, b.trunc + a.lower).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "variable tag mismatch");
        let trunc = match (self.trunc, other.trunc) {
            (None, None) => None,
            (Some(a), None) => Some(a + other.lower),
            (None, Some(b)) => Some(b + self.lower),
            (Some(a), Some(b)) => Some((a + other.lower).min(b + self.lower)),
        };
        let mut coeffs: BTreeMap<FracExp, Rat> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = *ea + *eb;
                if let Some(k) = trunc {
                    if e > k {
                        continue;
                    }
                }
                let slot = coeffs.entry(e).or_insert_with(Rat::zero);
                *slot += &(ca * cb);
                if slot.is_zero() {
                    coeffs.remove(&e);
                }
            }
        }
        TruncSeries {
            coeffs,
            lower: self.lower + other.lower,
            trunc,
            var: self.var,
        }
    }

    /// Coefficient of z^{-1}, or an error when the truncation could have
    /// discarded a z^{-1} contribution.
    pub fn residue(&self) -> Result<Rat> {
        let minus_one = FracExp::from_int(-1);
        if self.certified_through(minus_one) {
            Ok(self.coeff(minus_one))
        } else {
            Err(Error::UncertifiedResidue {
                order: self.trunc.unwrap(),
            })
        }
    }
}

/// Residue of a finite Laurent polynomial or a certified series.
pub fn residue(p: &TruncSeries) -> Result<Rat> {
    p.residue()
}

/// Truncated binomial series: sum_{j=0}^{K} C(alpha, j) z^j.
pub fn binom_expand(alpha: &Rat, k: u32) -> TruncSeries {
    let mut coeffs = BTreeMap::new();
    for j in 0..=k {
        let c = rat_binomial(alpha, j);
        if !c.is_zero() {
            coeffs.insert(FracExp::from_int(i64::from(j)), c);
        }
    }
    TruncSeries {
        coeffs,
        lower: FracExp::zero(),
        trunc: Some(FracExp::from_int(i64::from(k))),
        var: Var::Z,
    }
}

/// (1+z)^alpha / z^dpow expanded through certified order `k - dpow`.
pub fn expand_kernel(alpha: &Rat, dpow: i64, k: u32) -> TruncSeries {
    binom_expand(alpha, k).shift(FracExp::from_int(-dpow))
}

/// Telescoping identity behind the left/right commutator defect:
/// sum_{m=0}^{l} C(m+l, l) [(-1)^m (1+z)^{l+1} - (-1)^l (1+z)^m] / z^{l+m+1}
/// collapses to the constant 1.
pub fn check_telescoping_unit(l: u32) -> bool {
    let mut acc = LaurentPoly::zero();
    let lead = one_plus_z_pow(l + 1);
    let sign_l = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    for m in 0..=l {
        let c = int_binomial(i64::from(m) + i64::from(l), l);
        let sign_m = if m % 2 == 0 { Rat::one() } else { -Rat::one() };
        let numer = lead.scale(&sign_m).sub(&one_plus_z_pow(m).scale(&sign_l));
        let term = numer
            .scale(&c)
            .shift(FracExp::from_int(-(i64::from(l) + i64::from(m) + 1)));
        acc = acc.add(&term);
    }
    acc == LaurentPoly::one()
}

/// Alternating telescope sum_{m=0}^{l} (-1)^m C(m+l, l) (mz+l+m+1) / z^{l+m+2}.
/// Returns the exact value; it collapses to the single monomial
/// (-1)^l (2l+1) C(2l, l) / z^{2l+2}.
pub fn check_alternating_collapse(l: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for m in 0..=l {
        let sign = if m % 2 == 0 { Rat::one() } else { -Rat::one() };
        let c = int_binomial(i64::from(m) + i64::from(l), l) * sign;
        // (m z + l + m + 1) / z^{l+m+2}
        let mut numer = LaurentPoly::monomial(Rat::from_int(i64::from(m)), FracExp::from_int(1));
        numer.add_term(
            FracExp::zero(),
            &Rat::from_int(i64::from(l) + i64::from(m) + 1),
        );
        acc = acc.add(
            &numer
                .scale(&c)
                .shift(FracExp::from_int(-(i64::from(l) + i64::from(m) + 2))),
        );
    }
    acc
}

/// Expected collapsed constant for [`check_alternating_collapse`]:
/// (-1)^l (2l+1) C(2l, l).
pub fn alternating_collapse_constant(l: u32) -> Rat {
    let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    sign * Rat::from_int(2 * i64::from(l) + 1) * int_binomial(2 * i64::from(l), l)
}

/// Alternative closed form sometimes quoted for the same telescope,
/// (-1)^l (2l+1) C(2l+1, l); it disagrees with the symbolic sum for l >= 1
/// and is carried in reports as a discrepancy note.
pub fn alternating_collapse_quoted_constant(l: u32) -> Rat {
    let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    sign * Rat::from_int(2 * i64::from(l) + 1) * int_binomial(2 * i64::from(l) + 1, l)
}

/// Vanishing binomial convolution sum_{m=0}^{k} C(m+l, l) C(-l-m-1, k-m):
/// equals 1 at k = 0 and 0 for 1 <= k <= l.
pub fn check_binom_vanish(l: u32, k: u32) -> Rat {
    let mut acc = Rat::zero();
    for m in 0..=k {
        acc += &(int_binomial(i64::from(m) + i64::from(l), l)
            * int_binomial(-i64::from(l) - i64::from(m) - 1, k - m));
    }
    acc
}

/// Bivariate Laurent polynomial in (z1, z2) with integer exponents; only
/// what the two-variable cancellation check needs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct BiLaurent {
    coeffs: BTreeMap<(i64, i64), Rat>,
}

impl BiLaurent {
    fn add_term(&mut self, e1: i64, e2: i64, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((e1, e2)).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(e1, e2));
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Two-variable alternating-binomial cancellation:
/// sum_{m=0}^{l} (-1)^m C(m+l, l)
///   ( sum_{i=0}^{l-m} sum_{j=0}^{m} C(-l-m-1, i) C(m, j) (-1)^i z2^{i+j} / z1^{i+m}
///     - 1/z1^m )
/// is identically zero as a bivariate Laurent polynomial.
pub fn check_bivariate_cancellation(l: u32) -> bool {
    let mut acc = BiLaurent::default();
    for m in 0..=l {
        let sign_m = if m % 2 == 0 { Rat::one() } else { -Rat::one() };
        let outer = int_binomial(i64::from(m) + i64::from(l), l) * sign_m;
        for i in 0..=(l - m) {
            let sign_i = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
            let ci = int_binomial(-i64::from(l) - i64::from(m) - 1, i) * sign_i;
            for j in 0..=m {
                let c = &outer * &(&ci * &int_binomial(i64::from(m), j));
                acc.add_term(-(i64::from(i) + i64::from(m)), i64::from(i) + i64::from(j), &c);
            }
        }
        acc.add_term(-i64::from(m), 0, &-outer);
    }
    acc.is_zero()
}

/// Substitute z = -z0/(1+z0) into a series with integer exponents and
/// multiply by the Jacobian dz/dz0 = -(1+z0)^{-2} when requested. The
/// certified order carries over: z^n maps to z0-order n, so terms the input
/// was missing above its bound only affect z0-exponents above the same bound.
pub fn compose_neg_frac(p: &TruncSeries, jacobian: bool) -> Result<TruncSeries> {
    let kout = p.trunc;
    let bound = match kout {
        Some(k) => k,
        // exact input: pick an order that certifies everything down to the
        // residue and a margin above the support
        None => p
            .coeffs
            .keys()
            .next_back()
            .copied()
            .unwrap_or_else(FracExp::zero)
            + FracExp::from_int(8),
    };
    let bound_i = if bound.is_integer() {
        bound.numer()
    } else {
        return Err(Error::InvalidArgument(
            "compose_neg_frac: truncation order must be an integer".into(),
        ));
    };
    let mut acc = TruncSeries {
        coeffs: BTreeMap::new(),
        lower: p.lower,
        trunc: Some(bound),
        var: Var::Z0,
    };
    for (e, c) in &p.coeffs {
        if !e.is_integer() {
            return Err(Error::InvalidArgument(
                "compose_neg_frac: integer exponents required".into(),
            ));
        }
        let n = e.numer();
        // z^n -> (-1)^n z0^n (1+z0)^{-n}
        let order = (bound_i - n).max(0) as u32;
        let sign = if n.rem_euclid(2) == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        let factor = binom_expand(&Rat::from_int(-n), order)
            .shift(FracExp::from_int(n))
            .scale(&(&sign * c));
        let mut term = TruncSeries {
            var: Var::Z0,
            ..factor
        };
        term.trunc = Some(bound);
        acc = acc.add(&term);
    }
    if jacobian {
        let order = (bound_i - acc.lower.numer() + 2).max(0) as u32;
        let jac = binom_expand(&Rat::from_int(-2), order).scale(&-Rat::one());
        let jac = TruncSeries {
            var: Var::Z0,
            ..jac
        };
        acc = acc.mul(&jac);
        acc.trunc = Some(bound);
    }
    Ok(acc)
}

/// Factored transform of the kernel (1+z)^a / z^b under z = -z0/(1+z0) with
/// Jacobian: returns (sign, a', b) with
/// K(z) dz = sign * (1+z0)^{a'} / z0^{b} dz0, a' = b - a - 2, sign = (-1)^{b+1}.
/// Valid for any rational a (b must be an integer).
pub fn phi_kernel_transform(a: &Rat, b: i64) -> (Rat, Rat, i64) {
    let sign = if (b + 1).rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    };
    (sign, Rat::from_int(b - 2) - a.clone(), b)
}
