//! Rank-1 free boson backend: the Heisenberg vertex algebra on its vacuum
//! Fock space, the order-2 involution negating the generator, and the
//! half-integer-moded twisted Fock space.
//!
//! Basis monomials are weakly decreasing lists of oscillator depths;
//! untwisted depths are positive integers, twisted depths lie in N + 1/2.
//! Internally every depth, weight and mode index is stored doubled so that
//! all index arithmetic is exact i64 arithmetic.
//!
//! Mode actions u_k w are computed by peeling the leading oscillator off u
//! and applying the iterate identity of the (twisted) Jacobi relation; in
//! the twisted sector this brings in fractional binomial coefficients and a
//! finite correction sum. The construction is validated, not trusted:
//! [`VoaContext::verify_twisted_jacobi`] replays commutator and iterate
//! consequences of the Jacobi identity for arbitrary inputs.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rat::{int_binomial, rat_binomial, FracExp, Rat};

/// Module sector: the vacuum Fock space or its half-integer-moded twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Untwisted,
    Twisted,
}

/// Automorphism backing a context: the identity or the involution
/// negating the boson generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Aut {
    Id,
    Theta,
}

impl Aut {
    pub fn order(&self) -> u32 {
        match self {
            Aut::Id => 1,
            Aut::Theta => 2,
        }
    }

    /// Both backends are involutive, so inversion is the identity map.
    pub fn inverse(&self) -> Aut {
        *self
    }
}

impl fmt::Display for Aut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aut::Id => write!(f, "id"),
            Aut::Theta => write!(f, "theta"),
        }
    }
}

/// Basis monomial: weakly decreasing oscillator depths (doubled), plus the
/// sector tag. The empty list is the (twisted) vacuum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FockKey {
    sector: Sector,
    /// Doubled depths, weakly decreasing. Untwisted entries are even >= 2,
    /// twisted entries odd >= 1.
    modes2: Vec<u16>,
}

impl FockKey {
    pub fn vacuum(sector: Sector) -> Self {
        FockKey {
            sector,
            modes2: Vec::new(),
        }
    }

    /// Build from doubled depths (any order); sorts into canonical form and
    /// validates the parity/sector agreement.
    pub fn from_doubled(sector: Sector, mut modes2: Vec<u16>) -> Result<Self> {
        let want = match sector {
            Sector::Untwisted => 0,
            Sector::Twisted => 1,
        };
        for &d in &modes2 {
            if d == 0 || d % 2 != want {
                return Err(Error::InvalidArgument(format!(
                    "depth {} invalid in {sector:?} sector",
                    FracExp::from_doubled(i64::from(d))
                )));
            }
        }
        modes2.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FockKey { sector, modes2 })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn is_vacuum(&self) -> bool {
        self.modes2.is_empty()
    }

    pub fn factors(&self) -> usize {
        self.modes2.len()
    }

    /// Eigenvalue index under the involution: number of factors mod 2.
    pub fn parity(&self) -> u32 {
        (self.modes2.len() % 2) as u32
    }

    /// Total depth, doubled.
    pub fn depth2(&self) -> i64 {
        self.modes2.iter().map(|&d| i64::from(d)).sum()
    }

    pub fn depth(&self) -> FracExp {
        FracExp::from_doubled(self.depth2())
    }

    fn max_depth2(&self) -> i64 {
        self.modes2.first().map(|&d| i64::from(d)).unwrap_or(0)
    }

    /// Monomial with the leading (deepest) oscillator removed.
    fn tail(&self) -> FockKey {
        FockKey {
            sector: self.sector,
            modes2: self.modes2[1..].to_vec(),
        }
    }

    pub fn depths(&self) -> Vec<FracExp> {
        self.modes2
            .iter()
            .map(|&d| FracExp::from_doubled(i64::from(d)))
            .collect()
    }
}

impl PartialOrd for FockKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FockKey {
    /// Canonical order: sector, then total weight, then lexicographic on the
    /// depth sequence. Pivoting in the quotient layer relies on this.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sector
            .cmp(&other.sector)
            .then(self.depth2().cmp(&other.depth2()))
            .then(self.modes2.cmp(&other.modes2))
    }
}

impl fmt::Debug for FockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.modes2 {
            write!(f, "a(-{})", FracExp::from_doubled(i64::from(d)))?;
        }
        match self.sector {
            Sector::Untwisted => write!(f, "1"),
            Sector::Twisted => write!(f, "w0"),
        }
    }
}

/// Exact rational linear combination of basis monomials in one sector.
#[derive(Clone, PartialEq, Eq)]
pub struct FockVector {
    sector: Sector,
    terms: BTreeMap<FockKey, Rat>,
}

impl FockVector {
    pub fn zero(sector: Sector) -> Self {
        FockVector {
            sector,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(key: FockKey) -> Self {
        let sector = key.sector;
        let mut terms = BTreeMap::new();
        terms.insert(key, Rat::one());
        FockVector { sector, terms }
    }

    pub fn vacuum(sector: Sector) -> Self {
        Self::monomial(FockKey::vacuum(sector))
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockKey, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &FockKey) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, key: FockKey, c: &Rat) {
        debug_assert_eq!(key.sector, self.sector);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            let dead: Vec<FockKey> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &Rat) {
        debug_assert_eq!(other.sector, self.sector);
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn scale(&self, c: &Rat) -> FockVector {
        if c.is_zero() {
            return FockVector::zero(self.sector);
        }
        FockVector {
            sector: self.sector,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> FockVector {
        self.scale(&-Rat::one())
    }

    /// Maximum total depth among the monomials (doubled); None when zero.
    pub fn max_depth2(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.depth2()).max()
    }

    /// Split into homogeneous components by total depth.
    pub fn by_depth(&self) -> BTreeMap<i64, FockVector> {
        let mut out: BTreeMap<i64, FockVector> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.depth2())
                .or_insert_with(|| FockVector::zero(self.sector))
                .add_term(k.clone(), c);
        }
        out
    }

    /// Split by (total depth, parity) — the homogeneity the products need.
    pub fn by_depth_parity(&self) -> BTreeMap<(i64, u32), FockVector> {
        let mut out: BTreeMap<(i64, u32), FockVector> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry((k.depth2(), k.parity()))
                .or_insert_with(|| FockVector::zero(self.sector))
                .add_term(k.clone(), c);
        }
        out
    }

    /// (doubled weight, parity) when the vector is homogeneous in both.
    pub fn homogeneous_type(&self) -> Option<(i64, u32)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let ty = (first.depth2(), first.parity());
        if it.all(|k| (k.depth2(), k.parity()) == ty) {
            Some(ty)
        } else {
            None
        }
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{k}")?;
        }
        Ok(())
    }
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            modes: Vec<String>,
            coef: &'a Rat,
        }
        #[derive(Serialize)]
        struct Vector<'a> {
            sector: Sector,
            terms: Vec<Term<'a>>,
        }
        let v = Vector {
            sector: self.sector,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| Term {
                    modes: k.depths().iter().map(|d| d.to_string()).collect(),
                    coef: c,
                })
                .collect(),
        };
        v.serialize(s)
    }
}

/// All basis monomials of a given total depth (doubled), canonical order.
pub fn level_keys(sector: Sector, depth2: i64) -> Vec<FockKey> {
    fn gen(parts: &mut Vec<u16>, remaining: i64, max_part: i64, step: i64, out: &mut Vec<Vec<u16>>) {
        if remaining == 0 {
            out.push(parts.clone());
            return;
        }
        let mut p = max_part.min(remaining);
        // keep parity class of the allowed parts
        if step == 2 && p % 2 != 0 {
            p -= 1;
        }
        if step == 2 {
            while p >= 2 {
                parts.push(p as u16);
                gen(parts, remaining - p, p, step, out);
                parts.pop();
                p -= 2;
            }
        } else {
            if p % 2 == 0 {
                p -= 1;
            }
            while p >= 1 {
                parts.push(p as u16);
                gen(parts, remaining - p, p, step, out);
                parts.pop();
                p -= 2;
            }
        }
    }
    if depth2 < 0 {
        return Vec::new();
    }
    if depth2 == 0 {
        return vec![FockKey::vacuum(sector)];
    }
    let step = match sector {
        Sector::Untwisted => 2,
        Sector::Twisted => 1,
    };
    if sector == Sector::Untwisted && depth2 % 2 != 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    gen(&mut Vec::new(), depth2, depth2, step, &mut raw);
    let mut keys: Vec<FockKey> = raw
        .into_iter()
        .map(|modes2| FockKey { sector, modes2 })
        .collect();
    keys.sort();
    keys
}

/// All basis monomials of total depth <= `depth2_max`, canonical order.
pub fn keys_up_to(sector: Sector, depth2_max: i64) -> Vec<FockKey> {
    let mut out = Vec::new();
    for d in 0..=depth2_max.max(0) {
        out.extend(level_keys(sector, d));
    }
    out
}

type MemoKey = (FockKey, i64, FockKey);

/// Context: automorphism choice, weight cutoff, and the shared memo table
/// for mode-action structure constants. Immutable after construction; the
/// memo is concurrency-safe and, since entries are pure functions of their
/// key, results are identical at any thread count.
pub struct VoaContext {
    aut: Aut,
    cutoff2: i64,
    memo: DashMap<MemoKey, FockVector>,
}

impl VoaContext {
    pub fn new(aut: Aut, cutoff: u32) -> Arc<Self> {
        Arc::new(VoaContext {
            aut,
            cutoff2: 2 * i64::from(cutoff),
            memo: DashMap::new(),
        })
    }

    pub fn aut(&self) -> Aut {
        self.aut
    }

    pub fn order(&self) -> u32 {
        self.aut.order()
    }

    pub fn cutoff(&self) -> u32 {
        (self.cutoff2 / 2) as u32
    }

    pub fn cutoff2(&self) -> i64 {
        self.cutoff2
    }

    /// The vacuum vector of the algebra.
    pub fn one(&self) -> FockVector {
        FockVector::vacuum(Sector::Untwisted)
    }

    /// The generator a(-1)1.
    pub fn generator(&self) -> FockVector {
        FockVector::monomial(FockKey {
            sector: Sector::Untwisted,
            modes2: vec![2],
        })
    }

    /// Conformal vector (1/2) a(-1)^2 1; central charge 1.
    pub fn omega(&self) -> FockVector {
        FockVector::monomial(FockKey {
            sector: Sector::Untwisted,
            modes2: vec![2, 2],
        })
        .scale(&Rat::new(1, 2))
    }

    /// Involution negating the generator: scales a k-oscillator monomial
    /// by (-1)^k. Rejects twisted-sector input.
    pub fn theta_act(&self, v: &FockVector) -> Result<FockVector> {
        if v.sector != Sector::Untwisted {
            return Err(Error::SectorMismatch(
                "involution acts on the untwisted algebra only".into(),
            ));
        }
        let mut out = FockVector::zero(Sector::Untwisted);
        for (k, c) in &v.terms {
            let c = if k.factors() % 2 == 0 { c.clone() } else { -c };
            out.add_term(k.clone(), &c);
        }
        Ok(out)
    }

    /// Projection onto the eigenspace with index r (0 <= r <= T-1).
    pub fn eigen_component(&self, v: &FockVector, r: u32) -> Result<FockVector> {
        if r >= self.order() {
            return Err(Error::InvalidArgument(format!(
                "eigenvalue index {r} outside [0, {}]",
                self.order() - 1
            )));
        }
        if v.sector != Sector::Untwisted {
            return Err(Error::SectorMismatch("eigenspaces live in the algebra".into()));
        }
        if self.order() == 1 {
            return Ok(v.clone());
        }
        let mut out = FockVector::zero(Sector::Untwisted);
        for (k, c) in &v.terms {
            if k.parity() == r {
                out.add_term(k.clone(), c);
            }
        }
        Ok(out)
    }

    /// Eigenvalue index of a monomial in this context (always 0 when T = 1).
    pub fn key_eigenvalue(&self, k: &FockKey) -> u32 {
        if self.order() == 1 {
            0
        } else {
            k.parity()
        }
    }

    /// Oscillator action of the generator mode a(mode2/2) on one monomial.
    /// Negative modes create, positive modes annihilate with weight r per
    /// matched factor, mode 0 kills everything (no momentum).
    fn heis_key(&self, mode2: i64, w: &FockKey) -> FockVector {
        if mode2 == 0 {
            return FockVector::zero(w.sector);
        }
        let want = match w.sector {
            Sector::Untwisted => 0,
            Sector::Twisted => 1,
        };
        debug_assert_eq!(mode2.rem_euclid(2), want, "oscillator coset violated");
        if mode2 < 0 {
            let mut modes2 = w.modes2.clone();
            let d = (-mode2) as u16;
            let pos = modes2.partition_point(|&x| x > d);
            modes2.insert(pos, d);
            FockVector::monomial(FockKey {
                sector: w.sector,
                modes2,
            })
        } else {
            let d = mode2 as u16;
            let count = w.modes2.iter().filter(|&&x| x == d).count();
            if count == 0 {
                return FockVector::zero(w.sector);
            }
            let mut modes2 = w.modes2.clone();
            let pos = modes2.iter().position(|&x| x == d).unwrap();
            modes2.remove(pos);
            FockVector::monomial(FockKey {
                sector: w.sector,
                modes2,
            })
            .scale(&(Rat::new(mode2, 2) * Rat::from_int(count as i64)))
        }
    }

    fn heis_vec(&self, mode2: i64, w: &FockVector) -> FockVector {
        let mut out = FockVector::zero(w.sector);
        for (k, c) in &w.terms {
            out.add_scaled(&self.heis_key(mode2, k), c);
        }
        out
    }

    /// Core recursion: mode action of one algebra monomial on one module
    /// monomial. `k2` is the doubled mode index, already coset-checked.
    fn act_key(&self, u: &FockKey, k2: i64, w: &FockKey) -> Result<FockVector> {
        let res2 = w.depth2() + u.depth2() - k2 - 2;
        if res2 < 0 {
            return Ok(FockVector::zero(w.sector));
        }
        if res2 > self.cutoff2 {
            return Err(Error::CutoffOverflow {
                needed: FracExp::from_doubled(res2),
                cutoff: FracExp::from_doubled(self.cutoff2),
            });
        }
        if u.is_vacuum() {
            return Ok(if k2 == -2 {
                FockVector::monomial(w.clone())
            } else {
                FockVector::zero(w.sector)
            });
        }
        let memo_key = (u.clone(), k2, w.clone());
        if let Some(hit) = self.memo.get(&memo_key) {
            return Ok(hit.clone());
        }

        let shift2: i64 = match w.sector {
            Sector::Twisted => 1,
            Sector::Untwisted => 0,
        };
        let d1 = i64::from(u.modes2[0]);
        let m = -(d1 / 2);
        let m2 = -d1;
        let uprime = u.tail();
        let m_even = m.rem_euclid(2) == 0;

        let mut acc = FockVector::zero(w.sector);

        let j1_bound = (w.depth2() + uprime.depth2() - k2 + shift2 - 2) / 2;
        let j2_bound = (w.max_depth2() - shift2).div_euclid(2);
        for j in 0..=j1_bound.max(j2_bound).max(-1) {
            let c_abs = int_binomial(m, j as u32);
            if c_abs.is_zero() {
                continue;
            }
            let c = if j % 2 == 0 { c_abs } else { -c_abs };
            if j <= j1_bound {
                let inner = self.act_key(&uprime, k2 - shift2 + 2 * j, w)?;
                if !inner.is_zero() {
                    let created = self.heis_vec(shift2 + m2 - 2 * j, &inner);
                    acc.add_scaled(&created, &c);
                }
            }
            if j <= j2_bound {
                let inner = self.heis_key(shift2 + 2 * j, w);
                if !inner.is_zero() {
                    let mut part = FockVector::zero(w.sector);
                    for (ik, ic) in &inner.terms {
                        part.add_scaled(&self.act_key(&uprime, k2 - shift2 + m2 - 2 * j, ik)?, ic);
                    }
                    let c2 = if m_even { -c } else { c };
                    acc.add_scaled(&part, &c2);
                }
            }
        }

        // half-integer-moded sector: finite resummation correction with
        // C(1/2, j) coefficients
        if shift2 == 1 {
            let half = Rat::new(1, 2);
            let cor_bound = (uprime.max_depth2() + d1) / 2;
            for j in 1..=cor_bound.max(0) {
                let coef = rat_binomial(&half, j as u32);
                let moved_u = self.heis_key(m2 + 2 * j, &uprime.clone());
                if moved_u.is_zero() {
                    continue;
                }
                let mut part = FockVector::zero(w.sector);
                for (xk, xc) in &moved_u.terms {
                    part.add_scaled(&self.act_key(xk, k2 - 2 * j, w)?, xc);
                }
                acc.add_scaled(&part, &-coef);
            }
        }

        self.memo.insert(memo_key, acc.clone());
        Ok(acc)
    }

    /// Mode action u_k w, exact. `u` must be untwisted; `k` must lie in the
    /// coset forced by the sector of `w` and the eigenvalue of each monomial
    /// of `u`. Results whose weight would exceed the cutoff are refused.
    pub fn mode_act(&self, u: &FockVector, k: FracExp, w: &FockVector) -> Result<FockVector> {
        if u.sector != Sector::Untwisted {
            return Err(Error::SectorMismatch("mode operand must be untwisted".into()));
        }
        if w.sector == Sector::Twisted && self.aut != Aut::Theta {
            return Err(Error::SectorMismatch(
                "twisted module requires the theta context".into(),
            ));
        }
        let k2 = k.doubled().ok_or_else(|| Error::InvalidModeIndex {
            index: k,
            reason: "mode indices lie in (1/2)Z".into(),
        })?;
        let mut acc = FockVector::zero(w.sector);
        for (uk, uc) in &u.terms {
            match w.sector {
                Sector::Untwisted => {
                    if k2.rem_euclid(2) != 0 {
                        return Err(Error::InvalidModeIndex {
                            index: k,
                            reason: "untwisted modes are integers".into(),
                        });
                    }
                }
                Sector::Twisted => {
                    if k2.rem_euclid(2) != i64::from(uk.parity()) {
                        return Err(Error::InvalidModeIndex {
                            index: k,
                            reason: format!(
                                "eigenvalue {} forces indices in {}/2 + Z",
                                uk.parity(),
                                uk.parity()
                            ),
                        });
                    }
                }
            }
            for (wk, wc) in &w.terms {
                let part = self.act_key(uk, k2, wk)?;
                acc.add_scaled(&part, &(uc * wc));
            }
        }
        Ok(acc)
    }

    /// Virasoro operator L(n) = omega_{n+1}; central charge 1.
    pub fn l_op(&self, n: i64, w: &FockVector) -> Result<FockVector> {
        self.mode_act(&self.omega(), FracExp::from_int(n + 1), w)
    }

    /// Conformal weight shift of the module: 1/16 in the twisted sector.
    pub fn sector_h(sector: Sector) -> Rat {
        match sector {
            Sector::Untwisted => Rat::zero(),
            Sector::Twisted => Rat::new(1, 16),
        }
    }

    /// Coefficient-level consequences of the (twisted) Jacobi identity for
    /// the triple (u, v, w): the commutator formula and the iterate
    /// resummation, over all mode indices bounded by `order`.
    /// `u` and `v` must be eigenvalue-homogeneous.
    pub fn verify_twisted_jacobi(
        &self,
        u: &FockVector,
        v: &FockVector,
        w: &FockVector,
        order: i64,
    ) -> Result<bool> {
        let (_, pu) = u.homogeneous_type().map(|(d, p)| (d, p)).ok_or_else(|| {
            Error::InvalidArgument("verify_twisted_jacobi: u must be homogeneous".into())
        })?;
        let (_, pv) = v.homogeneous_type().map(|(d, p)| (d, p)).ok_or_else(|| {
            Error::InvalidArgument("verify_twisted_jacobi: v must be homogeneous".into())
        })?;
        if u.is_zero() || v.is_zero() {
            return Ok(true);
        }
        let twisted = w.sector == Sector::Twisted;
        let su2: i64 = if twisted { i64::from(pu) } else { 0 };
        let sv2: i64 = if twisted { i64::from(pv) } else { 0 };
        let du2 = u.max_depth2().unwrap_or(0);
        let dv2 = v.max_depth2().unwrap_or(0);
        let dw2 = w.max_depth2().unwrap_or(0);

        let uv_bound = (du2 + dv2 - 2) / 2; // u_j v = 0 beyond

        // mode index sets: p2 in su2 + 2Z with |p2| <= 2*order
        let modes = |s2: i64| -> Vec<i64> {
            let mut out = Vec::new();
            let mut p2 = -2 * order + (s2 - (-2 * order)).rem_euclid(2);
            while p2 <= 2 * order {
                out.push(p2);
                p2 += 2;
            }
            out
        };

        // commutator formula
        for &p2 in &modes(su2) {
            for &q2 in &modes(sv2) {
                let p = FracExp::from_doubled(p2);
                let q = FracExp::from_doubled(q2);
                let lhs = self
                    .mode_act(u, p, &self.mode_act(v, q, w)?)?
                    .sub(&self.mode_act(v, q, &self.mode_act(u, p, w)?)?);
                let mut rhs = FockVector::zero(w.sector);
                for j in 0..=uv_bound.max(0) {
                    let c = rat_binomial(&p.to_rat(), j as u32);
                    if c.is_zero() {
                        continue;
                    }
                    let uv = self.mode_act(u, FracExp::from_int(j), v)?;
                    if uv.is_zero() {
                        continue;
                    }
                    rhs.add_scaled(
                        &self.mode_act(&uv, FracExp::from_doubled(p2 + q2 - 2 * j), w)?,
                        &c,
                    );
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }

        // iterate resummation, for two coset representatives s
        for s in 0..=1i64 {
            for m in -order..=order {
                for &q2 in &modes(sv2) {
                    // LHS: sum_j C(su/2 + s, j) (u_{m+j} v)_{q + su/2 + s - j} w
                    let shift = FracExp::from_doubled(su2 + 2 * s);
                    let mut lhs = FockVector::zero(w.sector);
                    for j in 0..=(uv_bound - m).max(0) {
                        let c = rat_binomial(&shift.to_rat(), j as u32);
                        if c.is_zero() {
                            continue;
                        }
                        let uv = self.mode_act(u, FracExp::from_int(m + j), v)?;
                        if uv.is_zero() {
                            continue;
                        }
                        lhs.add_scaled(
                            &self.mode_act(
                                &uv,
                                FracExp::from_doubled(q2 + su2 + 2 * s - 2 * j),
                                w,
                            )?,
                            &c,
                        );
                    }
                    // RHS: sum_j (-1)^j C(m, j) [u_{su/2+s+m-j} v_{q+j} w
                    //       - (-1)^m v_{q+m-j} u_{su/2+s+j} w]
                    let mut rhs = FockVector::zero(w.sector);
                    let b1 = (dw2 + dv2 - q2 - 2) / 2;
                    let b2 = (dw2 + du2 - su2 - 2 * s - 2) / 2;
                    for j in 0..=b1.max(b2).max(0) {
                        let c_abs = int_binomial(m, j as u32);
                        if c_abs.is_zero() {
                            continue;
                        }
                        let c = if j % 2 == 0 { c_abs } else { -c_abs };
                        if j <= b1 {
                            let inner = self.mode_act(v, FracExp::from_doubled(q2 + 2 * j), w)?;
                            if !inner.is_zero() {
                                rhs.add_scaled(
                                    &self.mode_act(
                                        u,
                                        FracExp::from_doubled(su2 + 2 * s + 2 * m - 2 * j),
                                        &inner,
                                    )?,
                                    &c,
                                );
                            }
                        }
                        if j <= b2 {
                            let inner =
                                self.mode_act(u, FracExp::from_doubled(su2 + 2 * s + 2 * j), w)?;
                            if !inner.is_zero() {
                                let c2 = if m.rem_euclid(2) == 0 { -c.clone() } else { c.clone() };
                                rhs.add_scaled(
                                    &self.mode_act(v, FracExp::from_doubled(q2 + 2 * m - 2 * j), &inner)?,
                                    &c2,
                                );
                            }
                        }
                    }
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(aut: Aut, cutoff: u32) -> Arc<VoaContext> {
        VoaContext::new(aut, cutoff)
    }

    fn key(sector: Sector, depths2: &[u16]) -> FockKey {
        FockKey::from_doubled(sector, depths2.to_vec()).unwrap()
    }

    fn vec_of(sector: Sector, depths2: &[u16]) -> FockVector {
        FockVector::monomial(key(sector, depths2))
    }

    #[test]
    fn involution_examples() {
        let c = ctx(Aut::Theta, 8);
        let one = c.one();
        assert_eq!(c.theta_act(&one).unwrap(), one);
        let a = c.generator();
        assert_eq!(c.theta_act(&a).unwrap(), a.neg());
        let om = c.omega();
        assert_eq!(c.theta_act(&om).unwrap(), om);
        assert!(c.theta_act(&FockVector::vacuum(Sector::Twisted)).is_err());
        // theta is an involution on a spread of monomials
        for k in keys_up_to(Sector::Untwisted, 12) {
            let v = FockVector::monomial(k);
            assert_eq!(c.theta_act(&c.theta_act(&v).unwrap()).unwrap(), v);
        }
    }

    #[test]
    fn eigen_component_examples() {
        let c = ctx(Aut::Theta, 8);
        let om = c.omega();
        assert_eq!(c.eigen_component(&om, 0).unwrap(), om);
        let a = c.generator();
        assert_eq!(c.eigen_component(&a, 1).unwrap(), a);
        let mixed = om.add(&a);
        assert_eq!(c.eigen_component(&mixed, 0).unwrap(), om);
        assert_eq!(c.eigen_component(&mixed, 1).unwrap(), a);
        assert_eq!(
            c.eigen_component(&mixed, 0)
                .unwrap()
                .add(&c.eigen_component(&mixed, 1).unwrap()),
            mixed
        );
        assert!(c.eigen_component(&mixed, 2).is_err());
    }

    #[test]
    fn vacuum_operator_is_identity_or_zero() {
        let c = ctx(Aut::Theta, 8);
        let w = vec_of(Sector::Twisted, &[3, 1]);
        let one = c.one();
        assert_eq!(c.mode_act(&one, FracExp::from_int(-1), &w).unwrap(), w);
        assert!(c
            .mode_act(&one, FracExp::from_int(0), &w)
            .unwrap()
            .is_zero());
        assert!(c
            .mode_act(&one, FracExp::from_int(-3), &w)
            .unwrap()
            .is_zero());
        // coset violation refused
        assert!(c.mode_act(&one, FracExp::new(1, 2), &w).is_err());
    }

    #[test]
    fn creation_on_vacuum() {
        let c = ctx(Aut::Id, 8);
        let a = c.generator();
        let got = c.mode_act(&a, FracExp::from_int(-1), &c.one()).unwrap();
        assert_eq!(got, a);
    }

    #[test]
    fn twisted_zero_point_energy() {
        let c = ctx(Aut::Theta, 8);
        let w0 = FockVector::vacuum(Sector::Twisted);
        let got = c.mode_act(&c.omega(), FracExp::from_int(1), &w0).unwrap();
        assert_eq!(got, w0.scale(&Rat::new(1, 16)));

        // independent oracle: zeta-regularized oscillator sum. Each positive
        // half-integer mode contributes r/2; sum_{r in N+1/2} r regularizes to
        // -B2(1/2)/2 with B2(x) = x^2 - x + 1/6, and the plane weight adds the
        // central-term c/24. Total: 1/48 + 1/24 = 1/16.
        let b2_half = Rat::new(1, 4) - Rat::new(1, 2) + Rat::new(1, 6);
        let regularized = -b2_half / Rat::from_int(2); // 1/24
        let h = regularized / Rat::from_int(2) + Rat::new(1, 24);
        assert_eq!(h, Rat::new(1, 16));
    }

    #[test]
    fn l_zero_grades_by_weight() {
        let c = ctx(Aut::Theta, 10);
        let v = vec_of(Sector::Untwisted, &[4, 2]); // a(-2)a(-1)1, weight 3
        let got = c.l_op(0, &v).unwrap();
        assert_eq!(got, v.scale(&Rat::from_int(3)));
        assert!(c.l_op(-1, &c.one()).unwrap().is_zero());
        // twisted level: L(0) = depth + 1/16
        let w = vec_of(Sector::Twisted, &[1]);
        let got = c.l_op(0, &w).unwrap();
        assert_eq!(got, w.scale(&Rat::new(9, 16)));
    }

    #[test]
    fn virasoro_central_term() {
        let c = ctx(Aut::Id, 12);
        let one = c.one();
        let lhs = c
            .l_op(2, &c.l_op(-2, &one).unwrap())
            .unwrap()
            .sub(&c.l_op(-2, &c.l_op(2, &one).unwrap()).unwrap());
        assert_eq!(lhs, one.scale(&Rat::new(1, 2)));
    }

    #[test]
    fn virasoro_bracket_sampled() {
        // [L(m), L(n)] = (m-n) L(m+n) + delta_{m+n,0} (m^3-m)/12, c = 1
        for (aut, sector) in [(Aut::Id, Sector::Untwisted), (Aut::Theta, Sector::Twisted)] {
            let c = ctx(aut, 16);
            let samples: Vec<FockVector> = keys_up_to(sector, 5)
                .into_iter()
                .map(FockVector::monomial)
                .collect();
            for m in -2i64..=2 {
                for n in -2i64..=2 {
                    for w in &samples {
                        let lhs = c
                            .l_op(m, &c.l_op(n, w).unwrap())
                            .unwrap()
                            .sub(&c.l_op(n, &c.l_op(m, w).unwrap()).unwrap());
                        let mut rhs = c.l_op(m + n, w).unwrap().scale(&Rat::from_int(m - n));
                        if m + n == 0 {
                            rhs = rhs.add(&w.scale(&Rat::new(m * m * m - m, 12)));
                        }
                        assert_eq!(lhs, rhs, "[L({m}),L({n})] failed on {w} ({sector:?})");
                    }
                }
            }
        }
    }

    #[test]
    fn heisenberg_commutators_both_sectors() {
        for (aut, sector, step) in [
            (Aut::Id, Sector::Untwisted, 2i64),
            (Aut::Theta, Sector::Twisted, 1i64),
        ] {
            let c = ctx(aut, 14);
            let a = c.generator();
            let samples: Vec<FockVector> = keys_up_to(sector, 6)
                .into_iter()
                .map(FockVector::monomial)
                .collect();
            let mut m2: i64 = -7;
            while m2 <= 7 {
                if m2.rem_euclid(2) == step % 2 {
                    let mut n2: i64 = -7;
                    while n2 <= 7 {
                        if n2.rem_euclid(2) == step % 2 {
                            let m = FracExp::from_doubled(m2);
                            let n = FracExp::from_doubled(n2);
                            for w in &samples {
                                let lhs = c
                                    .mode_act(&a, m, &c.mode_act(&a, n, w).unwrap())
                                    .unwrap()
                                    .sub(&c.mode_act(&a, n, &c.mode_act(&a, m, w).unwrap()).unwrap());
                                let rhs = if m2 + n2 == 0 {
                                    w.scale(&Rat::new(m2, 2))
                                } else {
                                    FockVector::zero(sector)
                                };
                                assert_eq!(lhs, rhs, "[a({m}),a({n})] failed ({sector:?})");
                            }
                        }
                        n2 += 1;
                    }
                }
                m2 += 1;
            }
        }
    }

    #[test]
    fn grading_bound() {
        let c = ctx(Aut::Theta, 10);
        for uk in keys_up_to(Sector::Untwisted, 8) {
            let u = FockVector::monomial(uk.clone());
            for wk in keys_up_to(Sector::Twisted, 5) {
                let w = FockVector::monomial(wk.clone());
                // pick k beyond the grading bound: deg = dw + wu - k - 1 < 0
                let k2 = wk.depth2() + uk.depth2() + 2 - i64::from(uk.parity());
                let k2 = if k2.rem_euclid(2) == i64::from(uk.parity()) {
                    k2
                } else {
                    k2 + 1
                };
                let got = c.mode_act(&u, FracExp::from_doubled(k2), &w).unwrap();
                assert!(got.is_zero());
            }
        }
    }

    #[test]
    fn equivariance_under_involution() {
        let c = ctx(Aut::Theta, 12);
        let w = vec_of(Sector::Twisted, &[1]);
        for uk in keys_up_to(Sector::Untwisted, 6) {
            let u = FockVector::monomial(uk.clone());
            let tu = c.theta_act(&u).unwrap();
            let k2 = i64::from(uk.parity()) - 2;
            let k = FracExp::from_doubled(k2);
            let lhs = c.mode_act(&tu, k, &w).unwrap();
            let sign = if uk.parity() == 0 { Rat::one() } else { -Rat::one() };
            let rhs = c.mode_act(&u, k, &w).unwrap().scale(&sign);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn jacobi_smoke() {
        let c = ctx(Aut::Theta, 20);
        let a = c.generator();
        let w0 = FockVector::vacuum(Sector::Twisted);
        assert!(c.verify_twisted_jacobi(&a, &a, &w0, 3).unwrap());
        let one = c.one();
        assert!(c
            .verify_twisted_jacobi(&one, &a, &vec_of(Sector::Twisted, &[1]), 3)
            .unwrap());
        let cu = ctx(Aut::Id, 20);
        assert!(cu
            .verify_twisted_jacobi(&cu.omega(), &a, &vec_of(Sector::Untwisted, &[2]), 3)
            .unwrap());
    }

    #[test]
    fn cutoff_overflow_is_loud() {
        let c = ctx(Aut::Id, 3);
        let a = c.generator();
        let v = vec_of(Sector::Untwisted, &[4, 2]); // weight 3
        let err = c.mode_act(&a, FracExp::from_int(-1), &v);
        assert!(matches!(err, Err(Error::CutoffOverflow { .. })));
    }

    #[test]
    fn level_enumeration() {
        assert_eq!(level_keys(Sector::Untwisted, 8).len(), 5); // partitions of 4
        assert_eq!(level_keys(Sector::Untwisted, 7).len(), 0);
        // twisted depth 2: parts odd doubled summing to 4: (3,1), (1,1,1,1)
        assert_eq!(level_keys(Sector::Twisted, 4).len(), 2);
        let all = keys_up_to(Sector::Untwisted, 12);
        assert_eq!(all.len(), 1 + 1 + 2 + 3 + 5 + 7 + 11);
        // canonical order is strictly increasing
        assert!(all.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn serialization_shape() {
        let v = vec_of(Sector::Twisted, &[3, 1]).scale(&Rat::new(-2, 3));
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"sector":"twisted","terms":[{"modes":["3/2","1/2"],"coef":"-2/3"}]}"#
        );
    }
}
