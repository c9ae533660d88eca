//! Exact scalar arithmetic: arbitrary-precision rationals, generalized
//! binomial coefficients with rational upper argument, and the (1/T)Z
//! index bookkeeping (mode exponents, the n = l + i/T decomposition and
//! the step function delta_i).
//!
//! Everything here is total-precision; there is no floating point anywhere
//! in this crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always reduced, denominator > 0.
///
/// Serializes as the string `"p/q"` (`q` omitted when it is 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Rat(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.clone().recip())
    }

    /// Integer power; negative exponents invert (panics on 0^negative).
    pub fn pow(&self, e: i32) -> Self {
        use num_traits::Pow;
        Rat(Pow::pow(&self.0, e))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::InvalidArgument(format!("bad rational literal {s:?}")))
        };
        match s.split_once('/') {
            None => Ok(Rat(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let den = parse_int(q)?;
                if den.is_zero() {
                    return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
                }
                Ok(Rat(BigRational::new(parse_int(p)?, den)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|e: Error| D::Error::custom(e.to_string()))
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0) $op (&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op (&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);
rat_binop!(Div, div, /);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0.clone())
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

/// Generalized binomial coefficient C(alpha, j) = alpha(alpha-1)...(alpha-j+1)/j!
/// for rational alpha. Total function; C(alpha, 0) = 1.
pub fn rat_binomial(alpha: &Rat, j: u32) -> Rat {
    let mut acc = Rat::one();
    let mut term = alpha.clone();
    for t in 0..j {
        acc = acc * &term / Rat::from_int(i64::from(t) + 1);
        if acc.is_zero() {
            return acc;
        }
        term = term - Rat::one();
    }
    acc
}

/// C(m, j) for integer m (possibly negative).
pub fn int_binomial(m: i64, j: u32) -> Rat {
    rat_binomial(&Rat::from_int(m), j)
}

/// The step function delta_i(r): 1 if i >= r, 0 otherwise, for 0 <= i <= T-1
/// and 0 <= r <= T. The boundary value r = T is accepted and always yields 0
/// (i < T is forced), which is what the r = 0 product exponents require.
pub fn delta(i: i64, r: i64, t: i64) -> Result<i64> {
    if t < 1 || i < 0 || i > t - 1 {
        return Err(Error::InvalidArgument(format!(
            "delta: i={i} outside [0, {}]",
            t - 1
        )));
    }
    if r < 0 || r > t {
        return Err(Error::InvalidArgument(format!("delta: r={r} outside [0, {t}]")));
    }
    Ok(i64::from(i >= r))
}

/// Exponent in (1/T)Z, stored as a reduced fraction with i64 parts.
///
/// Serializes as `{"num": p, "den": q}` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FracExp {
    num: i64,
    den: i64,
}

impl FracExp {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "FracExp with zero denominator");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        FracExp {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn from_int(n: i64) -> Self {
        FracExp { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        FracExp { num: 0, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    /// True when `self * t` is an integer, i.e. the exponent lies in (1/t)Z.
    pub fn in_lattice(&self, t: i64) -> bool {
        (i128::from(self.num) * i128::from(t)) % i128::from(self.den) == 0
    }

    /// 2 * self when that is an integer (every exponent used by the T <= 2
    /// backends satisfies this).
    pub fn doubled(&self) -> Option<i64> {
        if self.den == 1 {
            Some(2 * self.num)
        } else if self.den == 2 {
            Some(self.num)
        } else {
            None
        }
    }

    pub fn from_doubled(d: i64) -> Self {
        FracExp::new(d, 2)
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.num, self.den)
    }

    pub fn try_from_rat(r: &Rat) -> Result<Self> {
        let num = r.numer().to_i64();
        let den = r.denom().to_i64();
        match (num, den) {
            (Some(n), Some(d)) => Ok(FracExp::new(n, d)),
            _ => Err(Error::InvalidArgument(format!("exponent {r} too large for FracExp"))),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 && b == 0 {
        return 1;
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Display for FracExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for FracExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for FracExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FracExp {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = i128::from(self.num) * i128::from(other.den);
        let rhs = i128::from(other.num) * i128::from(self.den);
        lhs.cmp(&rhs)
    }
}

impl Add for FracExp {
    type Output = FracExp;
    fn add(self, rhs: FracExp) -> FracExp {
        FracExp::new(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }
}

impl Sub for FracExp {
    type Output = FracExp;
    fn sub(self, rhs: FracExp) -> FracExp {
        FracExp::new(self.num * rhs.den - rhs.num * self.den, self.den * rhs.den)
    }
}

impl Neg for FracExp {
    type Output = FracExp;
    fn neg(self) -> FracExp {
        FracExp {
            num: -self.num,
            den: self.den,
        }
    }
}

impl FromStr for FracExp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r: Rat = s.parse()?;
        FracExp::try_from_rat(&r)
    }
}

/// The decomposition n = l + i/T with l a nonnegative integer and
/// 0 <= i <= T-1; parametrizes every product in the algebra and
/// bimodule layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModIndex {
    pub l: u32,
    pub i: u32,
    pub t: u32,
}

impl ModIndex {
    pub fn new(l: u32, i: u32, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument("ModIndex: T must be positive".into()));
        }
        if i >= t {
            return Err(Error::InvalidArgument(format!(
                "ModIndex: i={i} outside [0, {}]",
                t - 1
            )));
        }
        Ok(ModIndex { l, i, t })
    }

    pub fn n(&self) -> Rat {
        Rat::from_int(i64::from(self.l)) + Rat::new(i64::from(self.i), i64::from(self.t))
    }

    pub fn n_exp(&self) -> FracExp {
        FracExp::new(
            i64::from(self.l) * i64::from(self.t) + i64::from(self.i),
            i64::from(self.t),
        )
    }

    /// n - 1/T, or None when n = 0.
    pub fn lower(&self) -> Option<ModIndex> {
        if self.i > 0 {
            Some(ModIndex {
                l: self.l,
                i: self.i - 1,
                t: self.t,
            })
        } else if self.l > 0 {
            Some(ModIndex {
                l: self.l - 1,
                i: self.t - 1,
                t: self.t,
            })
        } else {
            None
        }
    }

    pub fn delta_of(&self, r: i64) -> Result<i64> {
        delta(i64::from(self.i), r, i64::from(self.t))
    }
}

impl fmt::Display for ModIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}/{}", self.l, self.i, self.t)
    }
}

/// Split n in (1/T)Z, n >= 0 into the unique (l, i) pair with n = l + i/T.
pub fn decompose_n(n: &Rat, t: u32) -> Result<ModIndex> {
    let tt = Rat::from_int(i64::from(t));
    let scaled = n * &tt;
    if !scaled.is_integer() || n.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "n={n} is not a nonnegative element of (1/{t})Z"
        )));
    }
    let total = scaled
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("n={n} too large")))?;
    let l = total / i64::from(t);
    let i = total % i64::from(t);
    ModIndex::new(l as u32, i as u32, t)
}
