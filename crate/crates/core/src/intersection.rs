//! Intersection theory of Wahl chains: the tridiagonal matrix `M`, its
//! closed-form inverse, discrepancies, rational homology classes, the culet
//! and the square-zero class searches.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, int_serde, Rational};
use crate::hj::{dual_wahl_root, wahl_data, HJChain, WahlData};
use crate::markov::{canonical_triple, is_markov_triple, MarkovTriple};

pub fn intersection_matrix(w: &WahlData) -> Vec<Vec<i64>> {
    let m = w.m();
    let mut out = vec![vec![0; m]; m];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = -w.chain.entries()[i];
        if i > 0 {
            row[i - 1] = 1;
        }
        if i + 1 < m {
            row[i + 1] = 1;
        }
    }
    out
}

/// `M^{-1}_{ij} = -e_i f_j / p^2` for `i <= j` (1-based), symmetric.
pub fn inverse_closed_form(w: &WahlData) -> Vec<Vec<Rational>> {
    let m = w.m();
    let p2 = w.p_squared();
    (1..=m)
        .map(|i| {
            (1..=m)
                .map(|j| {
                    let (a, b) = (i.min(j), i.max(j));
                    Rational::new(-(&w.e[a] * &w.f[b]), p2.clone())
                })
                .collect()
        })
        .collect()
}

/// `k_i = -1 + (e_i + f_i)/p^2`.
pub fn discrepancies(w: &WahlData) -> Vec<Rational> {
    let p2 = w.p_squared();
    (1..=w.m())
        .map(|i| Rational::new(&w.e[i] + &w.f[i], p2.clone()) - Rational::one())
        .collect()
}

/// Leading principal minors of `M`, by the three-term recurrence.
pub fn leading_minors(matrix: &[Vec<i64>]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(matrix.len());
    let (mut prev2, mut prev) = (BigInt::zero(), BigInt::one());
    for i in 0..matrix.len() {
        let off = if i > 0 { BigInt::from(matrix[i][i - 1] * matrix[i - 1][i]) } else { BigInt::zero() };
        let d = BigInt::from(matrix[i][i]) * &prev - off * &prev2;
        prev2 = std::mem::replace(&mut prev, d.clone());
        out.push(d);
    }
    out
}

pub fn is_negative_definite(matrix: &[Vec<i64>]) -> bool {
    leading_minors(matrix)
        .iter()
        .enumerate()
        .all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    pub chains: Vec<WahlData>,
    #[serde(with = "int_serde")]
    pub delta: BigInt,
}

impl IntersectionLattice {
    pub fn new(chains: Vec<WahlData>) -> Self {
        let delta = chains.iter().fold(BigInt::one(), |acc, w| acc * &w.p);
        IntersectionLattice { chains, delta }
    }

    pub fn single(w: WahlData) -> Self {
        IntersectionLattice::new(vec![w])
    }

    pub fn dims(&self) -> Vec<usize> {
        self.chains.iter().map(WahlData::m).collect()
    }
}

/// `a0 * E + sum_j sum_i a_{j,i} C_{j,i}` where `E` is `H / Delta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyClass {
    pub a0: Rational,
    pub coeffs: Vec<Vec<Rational>>,
}

impl HomologyClass {
    pub fn new(a0: Rational, coeffs: Vec<Vec<Rational>>) -> Self {
        HomologyClass { a0, coeffs }
    }

    /// `Delta * a0 * E` is an integral multiple of `H` only if `a0` is an integer.
    pub fn e_coefficient_integral(&self) -> bool {
        self.a0.is_integer()
    }
}

fn check_dims(lattice: &IntersectionLattice, a: &HomologyClass) -> Result<()> {
    if a.coeffs.len() != lattice.chains.len() {
        return Err(Error::DimensionMismatch { expected: lattice.chains.len(), got: a.coeffs.len() });
    }
    for (v, w) in a.coeffs.iter().zip(&lattice.chains) {
        if v.len() != w.m() {
            return Err(Error::DimensionMismatch { expected: w.m(), got: v.len() });
        }
    }
    Ok(())
}

pub fn class_pairing(lattice: &IntersectionLattice, a: &HomologyClass, b: &HomologyClass) -> Result<Rational> {
    check_dims(lattice, a)?;
    check_dims(lattice, b)?;
    let d2 = &lattice.delta * &lattice.delta;
    let mut total = &a.a0 * &b.a0 / Rational::from(d2);
    for ((x, y), w) in a.coeffs.iter().zip(&b.coeffs).zip(&lattice.chains) {
        let m = intersection_matrix(w);
        for i in 0..x.len() {
            for j in i.saturating_sub(1)..(i + 2).min(x.len()) {
                total = total + &x[i] * Rational::from(m[i][j]) * &y[j];
            }
        }
    }
    Ok(total)
}

pub fn class_square(lattice: &IntersectionLattice, a: &HomologyClass) -> Result<Rational> {
    class_pairing(lattice, a, a)
}

/// `a = M^{-1} chi` via the closed form.
pub fn coefficients_from_intersections(w: &WahlData, chi: &[BigInt]) -> Result<Vec<Rational>> {
    if chi.len() != w.m() {
        return Err(Error::DimensionMismatch { expected: w.m(), got: chi.len() });
    }
    let inv = inverse_closed_form(w);
    Ok(inv
        .iter()
        .map(|row| row.iter().zip(chi).map(|(r, c)| r * Rational::from(c)).sum())
        .collect())
}

/// The canonical class `-3 Delta E + sum k_{j,i} C_{j,i}`.
pub fn canonical_class(lattice: &IntersectionLattice) -> HomologyClass {
    HomologyClass::new(
        Rational::from(-(BigInt::from(3) * &lattice.delta)),
        lattice.chains.iter().map(discrepancies).collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuletReport {
    /// 1-based.
    pub culet_index: usize,
    /// `(p, sqrt(e_i), sqrt(f_i))`.
    pub triple: MarkovTriple,
    pub weight: i64,
    /// Chain entries before and after the culet.
    pub flanks: [HJChain; 2],
}

pub fn culet_report(p: &BigInt, q: &BigInt) -> Result<CuletReport> {
    let no_culet = || Error::NoCulet { p: p.clone(), q: q.clone() };
    if p < &BigInt::from(2) {
        return Err(no_culet());
    }
    canonical_triple(p, q).map_err(|_| no_culet())?;
    let w = wahl_data(p, q)?;
    let mut hits = Vec::new();
    for i in 1..=w.m() {
        let (Some(r2), Some(r3)) = (exact_sqrt(&w.e[i]), exact_sqrt(&w.f[i])) else { continue };
        if is_markov_triple(p, &r2, &r3) {
            hits.push((i, r2, r3));
        }
    }
    if hits.len() > 1 {
        return Err(Error::MultipleCulets { p: p.clone(), q: q.clone() });
    }
    let (i, r2, r3) = hits.pop().ok_or_else(no_culet)?;
    let weight = w.chain.b(i);
    let flanks = [w.chain.slice(0, i - 1), w.chain.slice(i, w.m())];
    for (flank, root) in flanks.iter().zip([&r2, &r3]) {
        let ok = if root.is_one() { flank.is_empty() } else { dual_wahl_root(flank).as_ref() == Some(root) };
        if !ok {
            return Err(Error::Internal(format!("flank {flank} of ({p}, {q}) is not dual to the Wahl chain of {root}")));
        }
    }
    let empty = flanks.iter().filter(|f| f.is_empty()).count();
    let expected = match empty {
        2 => 4,
        1 => 7,
        _ => 10,
    };
    if weight != expected {
        return Err(Error::Internal(format!("weight {weight} with {empty} empty flanks")));
    }
    let triple = MarkovTriple::new(p.clone(), r2, r3)?;
    Ok(CuletReport { culet_index: i, triple, weight, flanks })
}

/// Integer data of the scaled adjunction equation
/// `2p^2 = 3p c0 - c0^2 + Q(chi) + L(chi)`, with
/// `Q(chi) = -p^2 chi^T M^{-1} chi` and `L(chi) = -p^2 k^T chi`.
struct Adjunction {
    p: BigInt,
    p2: BigInt,
    /// `g[i][j] = e_min f_max`, 0-based.
    g: Vec<Vec<BigInt>>,
    /// `p^2 - e_i - f_i`.
    l: Vec<BigInt>,
}

impl Adjunction {
    fn new(w: &WahlData) -> Self {
        let m = w.m();
        let g = (1..=m)
            .map(|i| (1..=m).map(|j| &w.e[i.min(j)] * &w.f[i.max(j)]).collect())
            .collect();
        let p2 = w.p_squared();
        let l = (1..=m).map(|i| &p2 - &w.e[i] - &w.f[i]).collect();
        Adjunction { p: w.p.clone(), p2, g, l }
    }

    /// All `(c0, chi)` with `chi_i in 0..=max_entry`, `1 <= c0 <= p`,
    /// `c0^2 = Q(chi)` and the adjunction equation. Every coefficient of
    /// `Q` and `L` is positive, so partial sums only grow and prune the
    /// depth-first walk.
    fn solve(&self, max_entry: u8) -> Vec<(BigInt, Vec<u8>)> {
        let mut out = Vec::new();
        let mut chi = vec![0u8; self.l.len()];
        // with c0 >= 1 the equation needs L <= 2p^2 - 3p + c0^2 - Q = 2p^2 - 3p c0
        let l_budget = BigInt::from(2) * &self.p2 - BigInt::from(3) * &self.p;
        self.walk(0, &mut chi, BigInt::zero(), BigInt::zero(), max_entry, &l_budget, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        i: usize,
        chi: &mut Vec<u8>,
        q: BigInt,
        l: BigInt,
        max_entry: u8,
        l_budget: &BigInt,
        out: &mut Vec<(BigInt, Vec<u8>)>,
    ) {
        if q > self.p2 || &l > l_budget {
            return;
        }
        if i == chi.len() {
            let Some(c0) = exact_sqrt(&q) else { return };
            if c0.is_zero() || c0 > self.p {
                return;
            }
            let rhs = BigInt::from(3) * &self.p * &c0 - &c0 * &c0 + &q + &l;
            if rhs == BigInt::from(2) * &self.p2 {
                out.push((c0, chi.clone()));
            }
            return;
        }
        for v in 0..=max_entry {
            chi[i] = v;
            let vb = BigInt::from(v);
            // Q gains v^2 g_ii + 2 v sum_{j<i} chi_j g_ji
            let cross: BigInt = (0..i).map(|j| BigInt::from(chi[j]) * &self.g[j][i]).sum();
            let dq = &vb * &vb * &self.g[i][i] + BigInt::from(2) * &vb * cross;
            let dl = &vb * &self.l[i];
            self.walk(i + 1, chi, &q + dq, &l + dl, max_entry, l_budget, out);
        }
        chi[i] = 0;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareZeroClass {
    #[serde(with = "int_serde")]
    pub c0: BigInt,
    pub chi: Vec<u8>,
    /// 1-based support of `chi`.
    pub support: usize,
}

/// Every solution with `chi_i <= max_entry`; not checked for uniqueness.
pub fn square_zero_solutions(w: &WahlData, max_entry: u8) -> Vec<(BigInt, Vec<u8>)> {
    Adjunction::new(w).solve(max_entry)
}

pub fn square_zero_class_search(p: &BigInt, q: &BigInt) -> Result<SquareZeroClass> {
    if p < &BigInt::from(2) {
        return Err(Error::InvalidPair { p: p.clone(), q: q.clone() });
    }
    canonical_triple(p, q)?;
    let w = wahl_data(p, q)?;
    let mut sols = square_zero_solutions(&w, 1);
    if sols.len() != 1 {
        return Err(Error::Internal(format!("{} square-zero solutions for ({p}, {q})", sols.len())));
    }
    let (c0, chi) = sols.pop().unwrap();
    let support: Vec<usize> = chi.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i + 1).collect();
    let [i] = support[..] else {
        return Err(Error::Internal(format!("chi support {support:?} is not a single index")));
    };
    if w.p_squared() + &w.e[i] + &w.f[i] != BigInt::from(3) * p * &c0 {
        return Err(Error::Internal("p^2 + e_i + f_i != 3 p c0".into()));
    }
    Ok(SquareZeroClass { c0, chi, support: i })
}

/// The smaller root of `x^2 - 3 p1 p2 x + p1^2 + p2^2`.
pub fn two_ball_degree(p1: &BigInt, p2: &BigInt) -> Result<BigInt> {
    let none = || Error::NoCommonTriple { p1: p1.clone(), p2: p2.clone() };
    if !p1.is_positive() || !p2.is_positive() {
        return Err(none());
    }
    let s = BigInt::from(3) * p1 * p2;
    let disc = &s * &s - BigInt::from(4) * (p1 * p1 + p2 * p2);
    let r = exact_sqrt(&disc).ok_or_else(none)?;
    if (&s - &r).is_odd() {
        return Err(none());
    }
    let c0: BigInt = (&s - &r) / 2;
    let other: BigInt = (&s + &r) / 2;
    if !c0.is_positive() || !is_markov_triple(p1, p2, &c0) || !is_markov_triple(p1, p2, &other) {
        return Err(none());
    }
    let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
    if lo > &BigInt::one() && BigInt::from(3) * &c0 >= *hi {
        return Err(Error::Internal(format!("c0 = {c0} not below {hi}/3")));
    }
    Ok(c0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::reachable_pairs;
    use num_traits::ToPrimitive;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn wd(p: i64, q: i64) -> WahlData {
        wahl_data(&b(p), &b(q)).unwrap()
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(intersection_matrix(&wd(2, 1)), vec![vec![-4]]);
        let m = intersection_matrix(&wd(5, 1));
        assert_eq!((0..4).map(|i| m[i][i]).collect::<Vec<_>>(), vec![-7, -2, -2, -2]);
        assert_eq!(m[0][1], 1);
        assert_eq!(m[0][2], 0);
        assert!(intersection_matrix(&wd(1, 1)).is_empty());
        assert!(is_negative_definite(&m));
        assert!(!is_negative_definite(&[vec![-1, 1], vec![1, -1]]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_closed_form(&wd(2, 1)), vec![vec![r(-1, 4)]]);
        let w = wd(5, 1);
        let inv = inverse_closed_form(&w);
        assert_eq!(inv[0][0], r(-4, 25));
        let m = intersection_matrix(&w);
        for i in 0..4 {
            for j in 0..4 {
                let s: Rational = (0..4).map(|k| Rational::from(m[i][k]) * &inv[k][j]).sum();
                assert_eq!(s, Rational::from(i64::from(i == j)));
            }
        }
        assert!(inv.iter().flatten().all(Rational::is_negative));
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(discrepancies(&wd(2, 1)), vec![r(-1, 2)]);
        let k = discrepancies(&wd(5, 1));
        assert_eq!(k, vec![r(-4, 5), r(-3, 5), r(-2, 5), r(-1, 5)]);
        assert!(k.iter().all(|x| x > &Rational::from(-1) && x.is_negative()));
    }

    #[test]
    fn pairing_examples() {
        let l = IntersectionLattice::single(wd(2, 1));
        let c1 = HomologyClass::new(Rational::zero(), vec![vec![Rational::one()]]);
        assert_eq!(class_square(&l, &c1).unwrap(), Rational::from(-4));
        for (p, q) in [(2, 1), (5, 1), (29, 7)] {
            let w = wd(p, q);
            let m = w.m();
            let l = IntersectionLattice::single(w);
            let e = HomologyClass::new(Rational::one(), vec![vec![Rational::zero(); m]]);
            assert_eq!(class_square(&l, &e).unwrap(), r(1, p * p));
        }
        let bad = HomologyClass::new(Rational::one(), vec![vec![]]);
        assert!(matches!(class_square(&l, &bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn canonical_class_square_is_nine_minus_m() {
        for (p, q) in reachable_pairs(8, &b(1000)) {
            if p < b(2) {
                continue;
            }
            let w = wahl_data(&p, &q).unwrap();
            let m = w.m() as i64;
            // adjunction on each curve: K . C_i = b_i - 2
            let k = discrepancies(&w);
            let mm = intersection_matrix(&w);
            for i in 0..w.m() {
                let s: Rational = (0..w.m()).map(|j| Rational::from(mm[i][j]) * &k[j]).sum();
                assert_eq!(s, Rational::from(w.chain.entries()[i] - 2));
            }
            let l = IntersectionLattice::single(w);
            assert_eq!(class_square(&l, &canonical_class(&l)).unwrap(), Rational::from(9 - m));
        }
    }

    #[test]
    fn coefficient_examples() {
        let a = coefficients_from_intersections(&wd(5, 1), &[b(1), b(0), b(0), b(0)]).unwrap();
        assert_eq!(a, vec![r(-4, 25), r(-3, 25), r(-2, 25), r(-1, 25)]);
        assert_eq!(coefficients_from_intersections(&wd(2, 1), &[b(1)]).unwrap(), vec![r(-1, 4)]);
        let z = coefficients_from_intersections(&wd(29, 7), &vec![b(0); 10]).unwrap();
        assert!(z.iter().all(Rational::is_zero));
        assert!(coefficients_from_intersections(&wd(5, 1), &[b(1)]).is_err());
    }

    #[test]
    fn culet_examples() {
        let c = culet_report(&b(2), &b(1)).unwrap();
        assert_eq!((c.culet_index, c.weight), (1, 4));
        assert_eq!(c.triple, MarkovTriple::new(2, 1, 1).unwrap());
        let c = culet_report(&b(5), &b(1)).unwrap();
        assert_eq!((c.culet_index, c.weight), (1, 7));
        assert_eq!(c.triple, MarkovTriple::new(5, 1, 2).unwrap());
        assert!(c.flanks[0].is_empty());
        assert_eq!(c.flanks[1].entries(), &[2, 2, 2]);
        let c = culet_report(&b(29), &b(7)).unwrap();
        assert_eq!((c.culet_index, c.weight), (7, 10));
        assert_eq!(c.triple, MarkovTriple::new(29, 5, 2).unwrap());
        assert_eq!(c.flanks[0].entries(), &[5, 2, 2, 2, 2, 2]);
        assert!(matches!(culet_report(&b(7), &b(1)), Err(Error::NoCulet { .. })));
        assert!(matches!(culet_report(&b(5), &b(2)), Err(Error::NoCulet { .. })));
    }

    #[test]
    fn culet_json() {
        let c = culet_report(&b(29), &b(7)).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["culet_index"], 7);
        assert_eq!(v["triple"], serde_json::json!([29, 5, 2]));
        assert_eq!(v["flanks"][1], serde_json::json!([2, 2, 2]));
        assert_eq!(serde_json::from_value::<CuletReport>(v).unwrap(), c);
    }

    #[test]
    fn square_zero_examples() {
        let s = square_zero_class_search(&b(5), &b(1)).unwrap();
        assert_eq!((s.c0.to_i64().unwrap(), s.chi.clone()), (2, vec![1, 0, 0, 0]));
        let s = square_zero_class_search(&b(2), &b(1)).unwrap();
        assert_eq!((s.c0.to_i64().unwrap(), s.chi.clone()), (1, vec![1]));
        let s = square_zero_class_search(&b(29), &b(7)).unwrap();
        assert_eq!((s.c0.to_i64().unwrap(), s.support), (10, 7));
    }

    #[test]
    fn two_ball_degree_examples() {
        assert_eq!(two_ball_degree(&b(1), &b(2)).unwrap(), b(1));
        assert_eq!(two_ball_degree(&b(2), &b(5)).unwrap(), b(1));
        assert_eq!(two_ball_degree(&b(5), &b(29)).unwrap(), b(2));
        assert_eq!(two_ball_degree(&b(29), &b(5)).unwrap(), b(2));
        assert!(matches!(two_ball_degree(&b(2), &b(13)), Err(Error::NoCommonTriple { .. })));
    }
}
