//! Hirzebruch–Jung continued fractions `[b1, ..., bm] = b1 - 1/(b2 - ...)`,
//! Wahl chains `p^2/(pq - 1)` with their `e`/`f` sequences, and zero
//! continued fractions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, int_serde, mod_inverse, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct HJChain(Vec<i64>);

impl HJChain {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if let Some(b) = entries.iter().find(|&&b| b < 1) {
            return Err(Error::InvalidArgument(format!("chain entry {b} < 1")));
        }
        Ok(HJChain(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> HJChain {
        HJChain(self.0.iter().rev().copied().collect())
    }

    /// Entries `b_i` for 1-based `i`.
    pub fn b(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn slice(&self, from: usize, to: usize) -> HJChain {
        HJChain(self.0[from..to].to_vec())
    }
}

impl TryFrom<Vec<i64>> for HJChain {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        HJChain::new(v)
    }
}

impl From<HJChain> for Vec<i64> {
    fn from(c: HJChain) -> Self {
        c.0
    }
}

impl fmt::Display for HJChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HjValue {
    Finite(Rational),
    Infinity,
}

impl HjValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, HjValue::Finite(r) if r.is_zero())
    }
}

impl fmt::Display for HjValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HjValue::Finite(r) => write!(f, "{r}"),
            HjValue::Infinity => write!(f, "inf"),
        }
    }
}

/// Expansion of `n/a` with every entry at least 2; `(1, 1)` gives `[]`.
pub fn hj_expand(n: &BigInt, a: &BigInt) -> Result<HJChain> {
    if n.is_one() && a.is_one() {
        return Ok(HJChain::default());
    }
    if !a.is_positive() || a >= n {
        return Err(Error::InvalidArgument(format!("need 0 < a < n, got n={n}, a={a}")));
    }
    if !n.gcd(a).is_one() {
        return Err(Error::InvalidArgument(format!("gcd({n}, {a}) != 1")));
    }
    let (mut n, mut a) = (n.clone(), a.clone());
    let mut out = Vec::new();
    while !a.is_zero() {
        let b = n.div_ceil(&a);
        let next = &b * &a - &n;
        out.push(b.to_i64().ok_or_else(|| Error::InvalidArgument(format!("entry {b} too large")))?);
        n = a;
        a = next;
    }
    Ok(HJChain(out))
}

/// Projective value `(num, den)` of the chain, evaluated right to left from
/// `1/0`; never `(0, 0)`.
pub fn hj_eval_projective(chain: &[i64]) -> (BigInt, BigInt) {
    let (mut n, mut d) = (BigInt::one(), BigInt::zero());
    for &b in chain.iter().rev() {
        let next = BigInt::from(b) * &n - &d;
        d = n;
        n = next;
    }
    (n, d)
}

pub fn hj_eval(chain: &HJChain) -> HjValue {
    let (n, d) = hj_eval_projective(&chain.0);
    if d.is_zero() {
        HjValue::Infinity
    } else {
        HjValue::Finite(Rational::new(n, d))
    }
}

/// Every proper tail `[b_i, ..., b_k]`, `i >= 2`, is finite and positive.
pub fn is_admissible(chain: &HJChain) -> bool {
    let (mut n, mut d) = (BigInt::one(), BigInt::zero());
    for &b in chain.0[1.min(chain.len())..].iter().rev() {
        let next = BigInt::from(b) * &n - &d;
        d = n;
        n = next;
        if d.is_zero() || (n.is_positive() != d.is_positive()) || n.is_zero() {
            return false;
        }
    }
    true
}

/// Admissible chain of value 0. These are exactly the chains reachable from
/// a single 0-vertex by blow-ups; projective value alone is not enough
/// (`[1,1,1,1,1]` evaluates to 0 through an infinite tail).
pub fn is_zero_continued_fraction(chain: &HJChain) -> bool {
    !chain.is_empty() && is_admissible(chain) && hj_eval(chain).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WahlData {
    #[serde(with = "int_serde")]
    pub p: BigInt,
    #[serde(with = "int_serde")]
    pub q: BigInt,
    pub chain: HJChain,
    /// `e_0..=e_{m+1}`.
    #[serde(with = "int_serde::vec")]
    pub e: Vec<BigInt>,
    /// `f_0..=f_{m+1}`.
    #[serde(with = "int_serde::vec")]
    pub f: Vec<BigInt>,
}

impl WahlData {
    pub fn m(&self) -> usize {
        self.chain.len()
    }

    pub fn p_squared(&self) -> BigInt {
        &self.p * &self.p
    }
}

fn recurse(chain: &HJChain, x0: BigInt, x1: BigInt) -> Vec<BigInt> {
    let mut x = vec![x0, x1];
    for (i, &b) in chain.entries().iter().enumerate() {
        let next = BigInt::from(b) * &x[i + 1] - &x[i];
        x.push(next);
    }
    x
}

pub fn wahl_data(p: &BigInt, q: &BigInt) -> Result<WahlData> {
    let invalid = || Error::InvalidPair { p: p.clone(), q: q.clone() };
    if !q.is_positive() || q > p || !p.gcd(q).is_one() {
        return Err(invalid());
    }
    let p2 = p * p;
    let a = p * q - 1;
    let chain = if p.is_one() { HJChain::default() } else { hj_expand(&p2, &a)? };
    let e = recurse(&chain, BigInt::zero(), BigInt::one());
    let f = recurse(&chain, p2.clone(), a);
    // the chain for p = 1 has m = 0 and the sequences are (0, 1), (1, 0)
    let m = chain.len();
    let (e, f) = (e[..m + 2].to_vec(), f[..m + 2].to_vec());
    if e[m + 1] != p2 || !f[m + 1].is_zero() {
        return Err(Error::Internal(format!("e/f endpoints wrong for ({p}, {q})")));
    }
    Ok(WahlData { p: p.clone(), q: q.clone(), chain, e, f })
}

/// Reversed chain together with `a^{-1} mod n`.
pub fn dual_chain(chain: &HJChain, n: &BigInt, a: &BigInt) -> Result<(HJChain, BigInt)> {
    if n.is_one() {
        return Ok((chain.reversed(), BigInt::one()));
    }
    let abar = mod_inverse(a, n).ok_or_else(|| Error::InvalidArgument(format!("gcd({n}, {a}) != 1")))?;
    let rev = chain.reversed();
    if hj_expand(n, &abar)? != rev {
        return Err(Error::InvalidArgument(format!("{chain} is not the expansion of {n}/{a}")));
    }
    Ok((rev, abar))
}

/// `n/(n - a)`: the chain whose dual graph closes up the one of `n/a`.
pub fn riemenschneider_dual(n: &BigInt, a: &BigInt) -> Result<HJChain> {
    hj_expand(n, &(n - a))
}

/// If the minimal chain evaluates to `k^2/a` with `k^2/(k^2 - a)` a Wahl
/// fraction `k^2/(kq - 1)`, `gcd(k, q) = 1`, returns `k`.
pub fn dual_wahl_root(chain: &HJChain) -> Option<BigInt> {
    if chain.is_empty() || chain.entries().iter().any(|&b| b < 2) {
        return None;
    }
    let HjValue::Finite(v) = hj_eval(chain) else { return None };
    let k = exact_sqrt(v.numer())?;
    let kq: BigInt = v.numer() - v.denom() + 1;
    if k <= BigInt::one() || !kq.is_multiple_of(&k) {
        return None;
    }
    (&kq / &k).gcd(&k).is_one().then_some(k)
}
