//! Exact rationals, integer lattice vectors and a few number-theory helpers.
//!
//! `Rational` wraps `BigRational` so the crate controls its text format:
//! `"-5/2"`, or just `"3"` when the denominator is one.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num.into(), den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn signum(&self) -> Ordering {
        self.numer().sign().cmp_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // huge numerator and denominator: scale both down by the same power of two
            let shift = self.numer().bits().max(self.denom().bits()).saturating_sub(1000);
            let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<&BigInt> for Rational {
    fn from(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = |reason| ParseRationalError { input: s.to_string(), reason };
        let t = s.trim();
        if t.contains(['.', 'e', 'E']) {
            return Err(err("decimal notation is not accepted, write a/b"));
        }
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n = parse_int(n).ok_or_else(|| err("bad numerator"))?;
        let d = parse_int(d).ok_or_else(|| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        Ok(Rational::new(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = int_serde::StrOrInt::deserialize(d)?;
        raw.as_str().parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapters writing big integers as JSON numbers when they fit in
/// `i64` and as decimal strings otherwise.
pub mod int_serde {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum StrOrInt {
        Int(i64),
        Str(String),
    }

    impl StrOrInt {
        pub(crate) fn as_str(&self) -> std::borrow::Cow<'_, str> {
            match self {
                StrOrInt::Int(n) => n.to_string().into(),
                StrOrInt::Str(s) => s.as_str().into(),
            }
        }
    }

    #[derive(Serialize)]
    #[serde(untagged)]
    enum Out {
        Int(i64),
        Str(String),
    }

    fn out(n: &BigInt) -> Out {
        match n.to_i64() {
            Some(v) => Out::Int(v),
            None => Out::Str(n.to_string()),
        }
    }

    fn back<E: serde::de::Error>(raw: StrOrInt) -> std::result::Result<BigInt, E> {
        match raw {
            StrOrInt::Int(n) => Ok(BigInt::from(n)),
            StrOrInt::Str(s) => parse_int(&s).ok_or_else(|| E::custom(format!("bad integer {s:?}"))),
        }
    }

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        out(n).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        back(StrOrInt::deserialize(d)?)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(out))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
            Vec::<StrOrInt>::deserialize(d)?.into_iter().map(back).collect()
        }
    }

    pub mod array3 {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(out))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[BigInt; 3], D::Error> {
            let v: Vec<BigInt> = vec::deserialize(d)?;
            v.try_into()
                .map_err(|_| serde::de::Error::custom("expected three integers"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeVector {
    #[serde(with = "int_serde")]
    pub x: BigInt,
    #[serde(with = "int_serde")]
    pub y: BigInt,
}

impl LatticeVector {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatticeVector { x: x.into(), y: y.into() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y).is_one()
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector { x: &self.x * k, y: &self.y * k }
    }

    pub fn dot(&self, p: &RationalPoint) -> Rational {
        Rational::from(&self.x) * &p.x + Rational::from(&self.y) * &p.y
    }

    pub fn to_point(&self) -> RationalPoint {
        RationalPoint::new(Rational::from(&self.x), Rational::from(&self.y))
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: &LatticeVector) -> LatticeVector {
        LatticeVector { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: &LatticeVector) -> LatticeVector {
        LatticeVector { x: &self.x - &o.x, y: &self.y - &o.y }
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector { x: -&self.x, y: -&self.y }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RationalPoint { x, y }
    }

    pub fn origin() -> Self {
        RationalPoint::new(Rational::zero(), Rational::zero())
    }

    pub fn add(&self, o: &RationalPoint) -> RationalPoint {
        RationalPoint::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &RationalPoint) -> RationalPoint {
        RationalPoint::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Rational) -> RationalPoint {
        RationalPoint::new(&self.x * k, &self.y * k)
    }

    /// Cross product of two rational vectors.
    pub fn cross(&self, o: &RationalPoint) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn wedge(u: &LatticeVector, v: &LatticeVector) -> BigInt {
    &u.x * &v.y - &u.y * &v.x
}

/// `v = k * u` with `u` primitive; the zero vector gives `((0,0), 0)`.
pub fn primitive_part(v: &LatticeVector) -> (LatticeVector, BigInt) {
    let k = v.x.gcd(&v.y);
    if k.is_zero() {
        return (v.clone(), k);
    }
    (LatticeVector { x: &v.x / &k, y: &v.y / &k }, k)
}

/// Splits a rational vector into `lambda * u` with `u` primitive integral
/// and `lambda >= 0`.
pub fn rational_direction(d: &RationalPoint) -> (LatticeVector, Rational) {
    let l = d.x.denom().lcm(d.y.denom());
    let v = LatticeVector {
        x: d.x.numer() * (&l / d.x.denom()),
        y: d.y.numer() * (&l / d.y.denom()),
    };
    let (u, k) = primitive_part(&v);
    (u, Rational::new(k, l))
}

/// Integral affine length of the segment from `a` to `b`.
pub fn affine_length(a: &RationalPoint, b: &RationalPoint) -> Result<Rational> {
    let (_, lambda) = rational_direction(&b.sub(a));
    if lambda.is_negative() {
        return Err(Error::NotRationalDirection);
    }
    Ok(lambda)
}

/// `Some(r)` with `r * r == n` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Representative of `a mod m` in `[0, m)`.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m > 0`, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let eg = modulo(a, m).extended_gcd(m);
    eg.gcd.is_one().then(|| modulo(&eg.x, m))
}
