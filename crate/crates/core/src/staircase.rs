//! The staircase `Stair(p, q)`: a union of open boxes read off from the
//! branch sequence, the embedding oracle built on it, pin-ball capacities,
//! two- and three-ball packing bounds and the arithmetic behind each
//! obstruction.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int_serde, Rational};
use crate::hj::wahl_data;
use crate::intersection::two_ball_degree;
use crate::markov::{canonical_triple, companion_pair_of_triple, compare_to_sigma, MarkovTriple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StairBox {
    #[serde(rename = "i")]
    pub index: i64,
    pub alpha_sup: Rational,
    pub beta_sup: Rational,
}

impl StairBox {
    fn from_pair(p: &BigInt, index: i64, mi: &BigInt, mi1: &BigInt) -> Self {
        StairBox {
            index,
            alpha_sup: Rational::new(mi1.clone(), p * mi),
            beta_sup: Rational::new(mi.clone(), p * mi1),
        }
    }

    pub fn contains(&self, alpha: &Rational, beta: &Rational) -> bool {
        alpha < &self.alpha_sup && beta < &self.beta_sup
    }
}

/// Two consecutive branch terms `(m_i, m_{i+1})`, stepped in either direction.
#[derive(Debug, Clone)]
struct Walker {
    p: BigInt,
    c: BigInt,
    i: i64,
    mi: BigInt,
    mi1: BigInt,
}

impl Walker {
    fn new(p: &BigInt, q: &BigInt) -> Result<Self> {
        let t = canonical_triple(p, q)?;
        Ok(Walker { p: p.clone(), c: BigInt::from(3) * p, i: 0, mi: t.p(3).clone(), mi1: t.p(2).clone() })
    }

    fn at(mut self, i: i64) -> Self {
        while self.i < i {
            self.up();
        }
        while self.i > i {
            self.down();
        }
        self
    }

    fn up(&mut self) {
        let next = &self.c * &self.mi1 - &self.mi;
        self.mi = std::mem::replace(&mut self.mi1, next);
        self.i += 1;
    }

    fn down(&mut self) {
        let prev = &self.c * &self.mi - &self.mi1;
        self.mi1 = std::mem::replace(&mut self.mi, prev);
        self.i -= 1;
    }

    fn stair_box(&self) -> StairBox {
        StairBox::from_pair(&self.p, self.i, &self.mi, &self.mi1)
    }

    /// `m_{i-1}`.
    fn prev(&self) -> BigInt {
        &self.c * &self.mi - &self.mi1
    }
}

pub fn stair_boxes(p: &BigInt, q: &BigInt, i_lo: i64, i_hi: i64) -> Result<Vec<StairBox>> {
    if i_lo > i_hi {
        return Err(Error::InvalidArgument(format!("empty range {i_lo}..{i_hi}")));
    }
    let mut w = Walker::new(p, q)?.at(i_lo);
    let mut out = Vec::new();
    loop {
        out.push(w.stair_box());
        if w.i == i_hi {
            return Ok(out);
        }
        w.up();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Embeds,
    DoesNotEmbed,
    OutsideVisibleRange,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Answer::Embeds => "Embeds",
            Answer::DoesNotEmbed => "DoesNotEmbed",
            Answer::OutsideVisibleRange => "OutsideVisibleRange",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingVerdict {
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_box: Option<StairBox>,
    /// Inner corner `(m_i/(p m_{i-1}), m_i/(p m_{i+1}))` dominated by the query.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<(Rational, Rational)>,
}

/// Strict throughout: the staircase and the visible square are open.
pub fn embeds(p: &BigInt, q: &BigInt, alpha: &Rational, beta: &Rational) -> Result<EmbeddingVerdict> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::NonPositive);
    }
    let mut w = Walker::new(p, q)?;
    if compare_to_sigma(p, alpha) != Ordering::Less || compare_to_sigma(p, beta) != Ordering::Less {
        return Ok(EmbeddingVerdict { answer: Answer::OutsideVisibleRange, witness_box: None, obstruction: None });
    }
    let embeds_in = |b: StairBox| EmbeddingVerdict { answer: Answer::Embeds, witness_box: Some(b), obstruction: None };
    if *alpha < w.stair_box().alpha_sup {
        // walk down; beta_sup grows to sigma_p > beta, so this stops
        loop {
            let b = w.stair_box();
            if *beta < b.beta_sup {
                return Ok(embeds_in(b));
            }
            let prev_alpha = Rational::new(w.mi.clone(), p * w.prev());
            if *alpha >= prev_alpha {
                break;
            }
            w.down();
        }
    } else {
        // alpha_sup grows to sigma_p > alpha
        while *alpha >= w.stair_box().alpha_sup {
            w.up();
        }
        let b = w.stair_box();
        if *beta < b.beta_sup {
            return Ok(embeds_in(b));
        }
    }
    let corner = (Rational::new(w.mi.clone(), p * w.prev()), w.stair_box().beta_sup);
    Ok(EmbeddingVerdict { answer: Answer::DoesNotEmbed, witness_box: None, obstruction: Some(corner) })
}

/// `min(p2/(p p3), p3/(p p2))` for the canonical triple `(p, p2, p3)`.
pub fn pin_ball_capacity(p: &BigInt, q: &BigInt) -> Result<Rational> {
    let t = canonical_triple(p, q)?;
    let a = Rational::new(t.p(2).clone(), p * t.p(3));
    let b = Rational::new(t.p(3).clone(), p * t.p(2));
    Ok(a.min(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Feasibility {
    Feasible,
    Infeasible,
    /// Outside the scope of the packing bounds.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    /// e.g. `"alpha1"` or `"alpha1+alpha2"`.
    pub lhs: String,
    pub value: Rational,
    pub bound: Rational,
    pub holds: bool,
}

impl Bound {
    fn new(lhs: &str, value: Rational, bound: Rational) -> Self {
        let holds = value < bound;
        Bound { lhs: lhs.to_string(), value, bound, holds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingVerdict {
    pub status: Feasibility,
    /// The completing Markov number, when there is one.
    #[serde(with = "opt_int", default, skip_serializing_if = "Option::is_none")]
    pub p3: Option<BigInt>,
    pub bounds: Vec<Bound>,
    /// Indices into `bounds` that fail.
    pub binding: Vec<usize>,
    /// Index of a bound implied by the others.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implied: Option<usize>,
}

mod opt_int {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(n) => int_serde::serialize(n, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "int_serde")] BigInt);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

fn verdict(bounds: Vec<Bound>, p3: Option<BigInt>, implied: Option<usize>) -> PackingVerdict {
    let binding: Vec<usize> = bounds.iter().enumerate().filter(|(_, b)| !b.holds).map(|(i, _)| i).collect();
    let status = if binding.is_empty() { Feasibility::Feasible } else { Feasibility::Infeasible };
    PackingVerdict { status, p3, bounds, binding, implied }
}

fn check_companion(t: &MarkovTriple, q: &BigInt) -> Result<()> {
    if companion_pair_of_triple(t).contains(q) {
        Ok(())
    } else {
        Err(Error::CompanionMismatch { p: t.p(1).clone(), q: q.clone() })
    }
}

/// Two pin-balls `B_{p1,q1}(alpha1)` and `B_{p2,q2}(alpha2)`.
pub fn two_ball_feasible(
    p1: &BigInt,
    q1: &BigInt,
    alpha1: &Rational,
    p2: &BigInt,
    q2: &BigInt,
    alpha2: &Rational,
) -> Result<PackingVerdict> {
    if !alpha1.is_positive() || !alpha2.is_positive() {
        return Err(Error::NonPositive);
    }
    let p3 = match two_ball_degree(p1, p2) {
        Ok(c) => c,
        Err(Error::NoCommonTriple { .. }) if p1.is_one() || p2.is_one() => {
            return Ok(PackingVerdict {
                status: Feasibility::Unknown,
                p3: None,
                bounds: vec![],
                binding: vec![],
                implied: None,
            });
        }
        Err(e) => return Err(e),
    };
    let t = MarkovTriple::new(p1.clone(), p2.clone(), p3.clone())?;
    check_companion(&t, q1)?;
    check_companion(&t.rotated(2), q2)?;
    let bounds = vec![
        Bound::new("alpha1", alpha1.clone(), Rational::new(p2.clone(), p1 * &p3)),
        Bound::new("alpha2", alpha2.clone(), Rational::new(p1.clone(), p2 * &p3)),
        Bound::new("alpha1+alpha2", alpha1 + alpha2, Rational::new(p3.clone(), p1 * p2)),
    ];
    // p3 <= max(p1, p2), so the sum bound caps the ball next to the larger number
    let implied = Some(if p2 >= p1 { 0 } else { 1 });
    Ok(verdict(bounds, Some(p3), implied))
}

/// Three pin-balls at the vertices of the Vianna triangle of `t`.
pub fn three_ball_feasible(t: &MarkovTriple, qs: &[BigInt; 3], alphas: &[Rational; 3]) -> Result<PackingVerdict> {
    if alphas.iter().any(|a| !a.is_positive()) {
        return Err(Error::NonPositive);
    }
    for (i, q) in qs.iter().enumerate() {
        check_companion(&t.rotated(i + 1), q)?;
    }
    let [p1, p2, p3] = t.entries();
    let [a1, a2, a3] = alphas;
    let bounds = vec![
        Bound::new("alpha1+alpha2", a1 + a2, Rational::new(p3.clone(), p1 * p2)),
        Bound::new("alpha1+alpha3", a1 + a3, Rational::new(p2.clone(), p1 * p3)),
        Bound::new("alpha2+alpha3", a2 + a3, Rational::new(p1.clone(), p2 * p3)),
    ];
    Ok(verdict(bounds, None, None))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub index: i64,
    pub triple: MarkovTriple,
    #[serde(with = "int_serde")]
    pub p3_prime: BigInt,
    /// `-p2 p3' / p1^2`.
    pub s: Rational,
    /// Girdle length `p1 p3 / (p2 p3')`.
    pub length: Rational,
    /// Displacement `p3 / p1`.
    pub displacement: Rational,
    pub corner: (Rational, Rational),
    /// Index `j` with `(e_j, f_j) = (p3', p2)` in the Wahl chain of `(p, q)`, if any.
    pub chain_index: Option<usize>,
    pub identity_holds: bool,
}

/// Arithmetic of the inner corner between boxes `i - 1` and `i`: with
/// `(p1, p2, p3) = (p, m_{i+1}, m_i)` and `p3' = m_{i-1}`, checks
/// `s * length + displacement = 0`.
pub fn obstruction_certificate(p: &BigInt, q: &BigInt, i: i64) -> Result<ObstructionCertificate> {
    let w = Walker::new(p, q)?.at(i);
    let (p1, p2, p3) = (p.clone(), w.mi1.clone(), w.mi.clone());
    let p3p = BigInt::from(3) * &p1 * &p3 - &p2;
    if p3p != w.prev() {
        return Err(Error::Internal("mutated entry is not the previous branch term".into()));
    }
    let triple = MarkovTriple::new(p1.clone(), p2.clone(), p3.clone())?;
    let s = Rational::new(-(&p2 * &p3p), &p1 * &p1);
    let length = Rational::new(&p1 * &p3, &p2 * &p3p);
    let displacement = Rational::new(p3.clone(), p1.clone());
    let identity_holds = (&s * &length + &displacement).is_zero();
    let corner = (Rational::new(p3.clone(), &p1 * &p3p), Rational::new(p3.clone(), &p1 * &p2));
    let wd = wahl_data(p, q)?;
    let chain_index = (1..=wd.m()).find(|&j| wd.e[j] == p3p && wd.f[j] == p2);
    Ok(ObstructionCertificate {
        index: i,
        triple,
        p3_prime: p3p,
        s,
        length,
        displacement,
        corner,
        chain_index,
        identity_holds,
    })
}
