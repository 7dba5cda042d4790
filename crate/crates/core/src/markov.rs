//! Markov triples `a^2 + b^2 + c^2 = 3abc`, the mutation tree, companion
//! numbers, branch sequences through a fixed entry, and `sigma_p`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int_serde, mod_inverse, modulo, Rational};

/// Default and maximal depth for tree walks.
pub const TREE_DEPTH_BOUND: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", into = "RawTriple")]
pub struct MarkovTriple([BigInt; 3]);

#[derive(Serialize, Deserialize)]
struct RawTriple(#[serde(with = "int_serde::array3")] [BigInt; 3]);

impl TryFrom<RawTriple> for MarkovTriple {
    type Error = Error;
    fn try_from(r: RawTriple) -> Result<Self> {
        let [a, b, c] = r.0;
        MarkovTriple::new(a, b, c)
    }
}

impl From<MarkovTriple> for RawTriple {
    fn from(t: MarkovTriple) -> Self {
        RawTriple(t.0)
    }
}

pub fn is_markov_triple(a: &BigInt, b: &BigInt, c: &BigInt) -> bool {
    let one = BigInt::one();
    if *a < one || *b < one || *c < one {
        return false;
    }
    a * a + b * b + c * c == BigInt::from(3) * a * b * c
}

impl MarkovTriple {
    /// Validates the Markov equation together with its consequences:
    /// pairwise coprime entries, none divisible by 3.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        let three = BigInt::from(3);
        let ok = is_markov_triple(&a, &b, &c)
            && a.gcd(&b).is_one()
            && a.gcd(&c).is_one()
            && b.gcd(&c).is_one()
            && [&a, &b, &c].iter().all(|x| !x.is_multiple_of(&three));
        if ok {
            Ok(MarkovTriple([a, b, c]))
        } else {
            Err(Error::InvalidTriple(a, b, c))
        }
    }

    pub fn root() -> Self {
        MarkovTriple([BigInt::one(), BigInt::one(), BigInt::one()])
    }

    pub fn entries(&self) -> &[BigInt; 3] {
        &self.0
    }

    /// 1-based entry, matching the `(p1, p2, p3)` naming.
    pub fn p(&self, i: usize) -> &BigInt {
        &self.0[i - 1]
    }

    pub fn sorted(&self) -> MarkovTriple {
        let mut v = self.0.clone();
        v.sort();
        MarkovTriple(v)
    }

    pub fn largest(&self) -> &BigInt {
        self.0.iter().max().unwrap()
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        self.0.contains(n)
    }

    /// Cyclic rotation so that entry `i` (1-based) comes first.
    pub fn rotated(&self, i: usize) -> MarkovTriple {
        let k = i - 1;
        MarkovTriple([self.0[k].clone(), self.0[(k + 1) % 3].clone(), self.0[(k + 2) % 3].clone()])
    }

    /// Reorders the entries; `perm[j]` is the 1-based source slot of slot `j`.
    pub fn permuted(&self, perm: [usize; 3]) -> MarkovTriple {
        MarkovTriple(perm.map(|k| self.0[k - 1].clone()))
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Replaces entry `index` (1-based) by `3 * (product of the others) - entry`.
pub fn mutate(t: &MarkovTriple, index: usize) -> Result<MarkovTriple> {
    if !(1..=3).contains(&index) {
        return Err(Error::BadMutationIndex(index));
    }
    let k = index - 1;
    let mut v = t.0.clone();
    v[k] = BigInt::from(3) * &t.0[(k + 1) % 3] * &t.0[(k + 2) % 3] - &t.0[k];
    Ok(MarkovTriple(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    /// Sorted ascending.
    pub triple: MarkovTriple,
    pub parent: Option<usize>,
    /// 1-based slot of the parent's sorted triple that was mutated.
    pub mutated: Option<usize>,
}

/// Children of a sorted node: distinct sorted mutations other than the
/// parent, in ascending mutation index.
fn children(t: &MarkovTriple, parent: Option<&MarkovTriple>) -> Vec<(usize, MarkovTriple)> {
    let mut out: Vec<(usize, MarkovTriple)> = Vec::new();
    for k in 1..=3 {
        let c = mutate(t, k).expect("index in range").sorted();
        if Some(&c) == parent || c == *t || out.iter().any(|(_, o)| *o == c) {
            continue;
        }
        out.push((k, c));
    }
    out
}

/// Breadth-first tree from `(1,1,1)`, one sorted representative per node.
///
/// The tree is binary below level 2, so level `d` holds `2^(d-2)` nodes:
/// depths near the bound are not practical to materialize.
pub fn enumerate_tree(depth: usize) -> Result<Vec<TreeNode>> {
    if depth > TREE_DEPTH_BOUND {
        return Err(Error::DepthOverBound { depth, bound: TREE_DEPTH_BOUND });
    }
    let mut nodes = vec![TreeNode { triple: MarkovTriple::root(), parent: None, mutated: None }];
    let mut level = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &i in &level {
            let parent = nodes[i].parent.map(|j| nodes[j].triple.clone());
            for (k, c) in children(&nodes[i].triple, parent.as_ref()) {
                nodes.push(TreeNode { triple: c, parent: Some(i), mutated: Some(k) });
                next.push(nodes.len() - 1);
            }
        }
        level = next;
    }
    Ok(nodes)
}

/// Sorted tree nodes with largest entry at most `limit`, within `depth`
/// levels. Children always have a larger maximum, so the walk is pruned.
pub fn triples_up_to(limit: &BigInt, depth: usize) -> Vec<MarkovTriple> {
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(MarkovTriple::root(), None::<MarkovTriple>, 0usize)]);
    while let Some((t, parent, d)) = queue.pop_front() {
        if t.largest() > limit {
            continue;
        }
        if d < depth {
            for (_, c) in children(&t, parent.as_ref()) {
                queue.push_back((c, Some(t.clone()), d + 1));
            }
        }
        out.push(t);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompanionPair {
    #[serde(with = "int_serde")]
    pub p: BigInt,
    /// The smaller of the two companions.
    #[serde(with = "int_serde")]
    pub q_plus: BigInt,
    #[serde(with = "int_serde")]
    pub q_minus: BigInt,
}

impl CompanionPair {
    pub fn contains(&self, q: &BigInt) -> bool {
        *q == self.q_plus || *q == self.q_minus
    }
}

/// `3 * a * b^{-1} mod p`, normalized to `[1, p]`.
pub fn companion_of(p: &BigInt, a: &BigInt, b: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(b, p)?;
    let q = modulo(&(BigInt::from(3) * a * inv), p);
    Some(if q.is_zero() { p.clone() } else { q })
}

fn pair_from(p: &BigInt, q: BigInt) -> CompanionPair {
    let other = if p <= &BigInt::from(2) { q.clone() } else { p - &q };
    let (lo, hi) = if q <= other { (q, other) } else { (other, q) };
    CompanionPair { p: p.clone(), q_plus: lo, q_minus: hi }
}

/// Companion pair of `t.p(1)` read off from the ordered triple.
pub fn companion_pair_of_triple(t: &MarkovTriple) -> CompanionPair {
    let q = companion_of(t.p(1), t.p(2), t.p(3)).expect("Markov entries are coprime");
    pair_from(t.p(1), q)
}

/// Every companion pair of `p`, one per tree node having `p` as largest
/// entry. Each pair is re-derived from a second triple on the same branch.
pub fn companion_pairs(p: &BigInt, search_depth: usize) -> Result<Vec<CompanionPair>> {
    if search_depth > TREE_DEPTH_BOUND {
        return Err(Error::DepthOverBound { depth: search_depth, bound: TREE_DEPTH_BOUND });
    }
    let mut found = BTreeSet::new();
    for t in triples_up_to(p, search_depth) {
        if t.largest() != p {
            continue;
        }
        let (a, b) = (&t.entries()[0], &t.entries()[1]);
        let ordered = MarkovTriple::new(p.clone(), a.clone(), b.clone())?;
        let pair = companion_pair_of_triple(&ordered);
        let other = companion_pair_of_triple(&mutate(&ordered, 2)?);
        if other != pair {
            return Err(Error::Internal(format!("companions of {p} not mutation invariant")));
        }
        found.insert(pair);
    }
    if found.is_empty() {
        return Err(Error::NotFound { p: p.clone(), depth: search_depth });
    }
    Ok(found.into_iter().collect())
}

pub fn companions(p: &BigInt, search_depth: usize) -> Result<CompanionPair> {
    Ok(companion_pairs(p, search_depth)?.remove(0))
}

/// The triple `(p, a, b)` with `a, b <= p` and `q = 3ab^{-1} mod p`.
pub fn canonical_triple(p: &BigInt, q: &BigInt) -> Result<MarkovTriple> {
    let invalid = || Error::InvalidPair { p: p.clone(), q: q.clone() };
    if q < &BigInt::one() || q > p {
        return Err(invalid());
    }
    for t in triples_up_to(p, TREE_DEPTH_BOUND) {
        if t.largest() != p {
            continue;
        }
        let (a, b) = (t.entries()[0].clone(), t.entries()[1].clone());
        for (x, y) in [(&a, &b), (&b, &a)] {
            if companion_of(p, x, y).as_ref() == Some(q) {
                return MarkovTriple::new(p.clone(), x.clone(), y.clone());
            }
        }
    }
    Err(invalid())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSequence {
    #[serde(with = "int_serde")]
    pub p: BigInt,
    #[serde(with = "int_serde")]
    pub q: BigInt,
    /// Index of `values[0]`.
    pub lo: i64,
    #[serde(with = "int_serde::vec")]
    pub values: Vec<BigInt>,
    #[serde(with = "int_serde")]
    pub coefficient: BigInt,
}

impl BranchSequence {
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn get(&self, i: i64) -> Option<&BigInt> {
        usize::try_from(i - self.lo).ok().and_then(|k| self.values.get(k))
    }
}

/// Window `m_lo..=m_hi` of the branch through `canonical_triple(p, q) =
/// (p, a, b)`, with `m_0 = b`, `m_1 = a` and `q = 3 m_{i+1} m_i^{-1} mod p`.
pub fn branch_sequence(p: &BigInt, q: &BigInt, lo: i64, hi: i64) -> Result<BranchSequence> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty window {lo}..{hi}")));
    }
    let t = canonical_triple(p, q)?;
    let c = BigInt::from(3) * p;
    let (m0, m1) = (t.p(3).clone(), t.p(2).clone());

    let mut fwd = vec![m0.clone(), m1.clone()];
    while (fwd.len() as i64) <= hi {
        let n = fwd.len();
        fwd.push(&c * &fwd[n - 1] - &fwd[n - 2]);
    }
    // back[k] = m_{1-k}
    let mut back = vec![m1, m0];
    while (back.len() as i64) - 2 < -lo {
        let n = back.len();
        back.push(&c * &back[n - 1] - &back[n - 2]);
    }
    let values = (lo..=hi)
        .map(|i| {
            if i >= 0 {
                fwd[i as usize].clone()
            } else {
                back[(1 - i) as usize].clone()
            }
        })
        .collect();
    Ok(BranchSequence { p: p.clone(), q: q.clone(), lo, values, coefficient: c })
}

/// `sigma_p`, the larger root of `x^2 - 3x + 1/p^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sigma {
    #[serde(with = "int_serde")]
    pub p: BigInt,
    /// Monic minimal polynomial `x^2 + c1 x + c0`, as `[c0, c1]`.
    pub min_poly: [Rational; 2],
    pub approx: f64,
}

pub fn sigma_p(p: &BigInt) -> Sigma {
    let p2 = p * p;
    let min_poly = [Rational::new(1, p2.clone()), Rational::from(-3)];
    let approx = sigma_decimal(p, 17).parse().unwrap_or(f64::NAN);
    Sigma { p: p.clone(), min_poly, approx }
}

impl Sigma {
    pub fn compare(&self, r: &Rational) -> Ordering {
        compare_to_sigma(&self.p, r)
    }

    pub fn decimal(&self, digits: u32) -> String {
        sigma_decimal(&self.p, digits)
    }
}

/// Exact comparison of `r` with `sigma_p`: the sign of `r^2 - 3r + 1/p^2`
/// above the vertex `3/2` of the parabola.
pub fn compare_to_sigma(p: &BigInt, r: &Rational) -> Ordering {
    if *r <= Rational::new(3, 2) {
        return Ordering::Less;
    }
    let v = r * r - Rational::from(3) * r + Rational::new(1, p * p);
    v.signum()
}

/// `sigma_p` truncated (not rounded) to `digits` decimals.
pub fn sigma_decimal(p: &BigInt, digits: u32) -> String {
    // sigma = (3p + sqrt(9p^2 - 4)) / (2p)
    let scale = BigInt::from(10).pow(digits);
    let disc: BigInt = (BigInt::from(9) * p * p - 4) * &scale * &scale;
    let num = BigInt::from(3) * p * &scale + disc.sqrt();
    let t = num / (BigInt::from(2) * p);
    let s = t.to_string();
    let d = digits as usize;
    let (int, frac) = s.split_at(s.len() - d);
    if d == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

/// `sigma_p` rounded to three decimals with a trailing ellipsis, the way
/// the staircase plots label it.
pub fn sigma_display(p: &BigInt) -> String {
    let t = sigma_decimal(p, 4);
    let (int, frac) = t.split_once('.').expect("four decimals");
    let mut v: u32 = frac.parse().expect("digits");
    let mut int: BigInt = int.parse().expect("digits");
    v = (v + 5) / 10;
    if v == 1000 {
        v = 0;
        int += 1;
    }
    format!("{int}.{v:03}…")
}

/// True when `9p^2 - 4` is not a perfect square, i.e. `sigma_p` is irrational.
pub fn sigma_is_irrational(p: &BigInt) -> bool {
    let d: BigInt = BigInt::from(9) * p * p - 4;
    if d.is_negative() {
        return false;
    }
    let r = d.sqrt();
    &r * &r != d
}

/// All `(p, q)` pairs with `p <= max_p` occurring in the tree to `depth`.
pub fn reachable_pairs(depth: usize, max_p: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = BTreeSet::new();
    for t in triples_up_to(max_p, depth) {
        for i in 1..=3 {
            let r = t.rotated(i);
            let pair = companion_pair_of_triple(&r);
            out.insert((pair.p.clone(), pair.q_plus.clone()));
            out.insert((pair.p, pair.q_minus));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn t(a: i64, x: i64, c: i64) -> MarkovTriple {
        MarkovTriple::new(a, x, c).unwrap()
    }

    #[test]
    fn markov_equation() {
        assert!(is_markov_triple(&b(1), &b(1), &b(1)));
        assert!(is_markov_triple(&b(5), &b(29), &b(2)));
        assert!(!is_markov_triple(&b(2), &b(2), &b(2)));
        assert!(!is_markov_triple(&b(0), &b(0), &b(0)));
        assert!(MarkovTriple::new(2, 2, 2).is_err());
    }

    #[test]
    fn mutation_examples() {
        assert_eq!(mutate(&MarkovTriple::root(), 3).unwrap(), t(1, 1, 2));
        assert_eq!(mutate(&t(1, 5, 2), 3).unwrap(), t(1, 5, 13));
        let x = t(2, 5, 29);
        assert_eq!(mutate(&mutate(&x, 1).unwrap(), 1).unwrap(), x);
        assert!(mutate(&x, 4).is_err());
    }

    #[test]
    fn tree_levels() {
        let tree = enumerate_tree(0).unwrap();
        assert_eq!(tree.len(), 1);
        let tree = enumerate_tree(5).unwrap();
        // 1 + 1 + 1 + 2 + 4 + 8
        assert_eq!(tree.len(), 17);
        let has = |x: MarkovTriple| tree.iter().any(|n| n.triple == x.sorted());
        assert!(has(t(29, 169, 2)));
        assert!(has(t(13, 194, 5)));
        assert!(has(t(433, 37666, 29)));
        assert!(has(t(169, 985, 2)));
        assert!(enumerate_tree(31).is_err());
    }

    #[test]
    fn tree_json_shape() {
        let tree = enumerate_tree(2).unwrap();
        let v = serde_json::to_value(&tree).unwrap();
        assert_eq!(v[2]["triple"], serde_json::json!([1, 2, 5]));
        assert_eq!(v[2]["parent"], 1);
        assert_eq!(v[0]["parent"], serde_json::Value::Null);
        let back: Vec<TreeNode> = serde_json::from_value(v).unwrap();
        assert_eq!(back, tree);
    }

    #[test]
    fn companion_examples() {
        let c = companions(&b(2), 30).unwrap();
        assert_eq!((c.q_plus, c.q_minus), (b(1), b(1)));
        let c = companions(&b(5), 30).unwrap();
        assert_eq!((c.q_plus, c.q_minus), (b(1), b(4)));
        let c = companions(&b(29), 30).unwrap();
        assert_eq!((c.q_plus, c.q_minus), (b(7), b(22)));
        let c = companions(&b(1), 30).unwrap();
        assert_eq!((c.q_plus, c.q_minus), (b(1), b(1)));
        assert!(matches!(companions(&b(7), 30), Err(Error::NotFound { .. })));
        assert!(matches!(companions(&b(985), 3), Err(Error::NotFound { .. })));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_triple(&b(2), &b(1)).unwrap(), t(2, 1, 1));
        assert_eq!(canonical_triple(&b(5), &b(1)).unwrap(), t(5, 2, 1));
        assert_eq!(canonical_triple(&b(5), &b(4)).unwrap(), t(5, 1, 2));
        assert_eq!(canonical_triple(&b(1), &b(1)).unwrap(), t(1, 1, 1));
        assert_eq!(canonical_triple(&b(29), &b(7)).unwrap(), t(29, 2, 5));
        assert_eq!(canonical_triple(&b(29), &b(22)).unwrap(), t(29, 5, 2));
        assert!(canonical_triple(&b(5), &b(2)).is_err());
        assert!(canonical_triple(&b(6), &b(1)).is_err());
    }

    fn window(p: i64, q: i64, lo: i64, hi: i64) -> Vec<i64> {
        let s = branch_sequence(&b(p), &b(q), lo, hi).unwrap();
        s.values.iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn branch_examples() {
        assert_eq!(window(2, 1, -3, 4), vec![169, 29, 5, 1, 1, 5, 29, 169]);
        assert_eq!(window(5, 1, -3, 3), vec![2897, 194, 13, 1, 2, 29, 433]);
        assert_eq!(window(1, 1, 0, 6), vec![1, 1, 2, 5, 13, 34, 89]);
        assert_eq!(window(1, 1, -2, 1), vec![5, 2, 1, 1]);
        assert_eq!(window(5, 1, 2, 2), vec![29]);
        let s = branch_sequence(&b(5), &b(1), -2, 2).unwrap();
        assert_eq!(s.get(-1), Some(&b(13)));
        assert_eq!(s.get(3), None);
        assert_eq!(s.hi(), 2);
    }

    #[test]
    fn branch_orientation() {
        for (p, q) in [(5, 1), (5, 4), (29, 7), (29, 22), (13, 2), (13, 11)] {
            let s = branch_sequence(&b(p), &b(q), -6, 6).unwrap();
            for w in s.values.windows(2) {
                assert_eq!(companion_of(&b(p), &w[1], &w[0]), Some(b(q)));
                assert!(is_markov_triple(&b(p), &w[0], &w[1]));
            }
        }
    }

    #[test]
    fn sigma_values() {
        assert!(sigma_decimal(&b(2), 6).starts_with("2.914213"));
        assert_eq!(sigma_decimal(&b(5), 6), "2.986606");
        assert_eq!(sigma_display(&b(5)), "2.987…");
        assert_eq!(sigma_display(&b(2)), "2.914…");
        assert_eq!(sigma_decimal(&b(1), 0), "2");
        assert_eq!(compare_to_sigma(&b(2), &Rational::new(29, 10)), Ordering::Less);
        assert_eq!(compare_to_sigma(&b(2), &Rational::new(433, 145)), Ordering::Greater);
        assert_eq!(compare_to_sigma(&b(5), &Rational::from(3)), Ordering::Greater);
        assert_eq!(compare_to_sigma(&b(5), &Rational::new(1, 1000)), Ordering::Less);
        let s = sigma_p(&b(5));
        assert!((s.approx - 2.986_606_9).abs() < 1e-6);
        assert_eq!(s.min_poly[0], Rational::new(1, 25));
    }

    #[test]
    fn tree_triples_valid_to_depth_10() {
        let tree = enumerate_tree(10).unwrap();
        for n in &tree {
            let [x, y, z] = n.triple.entries();
            assert!(is_markov_triple(x, y, z));
            assert!(sigma_is_irrational(x) && sigma_is_irrational(y) && sigma_is_irrational(z));
        }
    }

    #[test]
    fn mutate_involution_to_depth_8() {
        for n in enumerate_tree(8).unwrap() {
            for k in 1..=3 {
                let m = mutate(&n.triple, k).unwrap();
                assert_eq!(mutate(&m, k).unwrap(), n.triple);
            }
        }
    }

    #[test]
    fn companions_independent_of_seed() {
        let tree = enumerate_tree(8).unwrap();
        for n in &tree {
            for i in 1..=3 {
                let r = n.triple.rotated(i);
                let from_seed = companion_pair_of_triple(&r);
                let searched = companion_pairs(r.p(1), TREE_DEPTH_BOUND).unwrap();
                assert!(searched.contains(&from_seed), "{r}");
            }
        }
    }

    #[test]
    fn reachable_pairs_small() {
        let pairs = reachable_pairs(8, &b(30));
        let want: Vec<(BigInt, BigInt)> =
            [(1, 1), (2, 1), (5, 1), (5, 4), (13, 2), (13, 11), (29, 7), (29, 22)]
                .iter()
                .map(|&(p, q)| (b(p), b(q)))
                .collect();
        assert_eq!(pairs, want);
    }

    proptest! {
        #[test]
        fn random_mutation_words_stay_markov(word in prop::collection::vec(1usize..=3, 0..25)) {
            let mut x = MarkovTriple::root();
            for k in word {
                x = mutate(&x, k).unwrap();
                let [a, bb, c] = x.entries();
                prop_assert!(MarkovTriple::new(a.clone(), bb.clone(), c.clone()).is_ok());
            }
        }

        #[test]
        fn branch_recursion_and_growth(idx in 0usize..8, lo in -8i64..0, len in 3i64..14) {
            let pairs = reachable_pairs(6, &b(2000));
            let (p, q) = pairs[idx % pairs.len()].clone();
            let s = branch_sequence(&p, &q, lo, lo + len).unwrap();
            let c = BigInt::from(3) * &p;
            for w in s.values.windows(3) {
                prop_assert_eq!(&w[2], &(&c * &w[1] - &w[0]));
            }
            // positive direction: ratios m_{i+1}/(p m_i) increase and stay below sigma_p
            let pos = branch_sequence(&p, &q, 1, 12).unwrap();
            let ratios: Vec<Rational> = pos
                .values
                .windows(2)
                .map(|w| Rational::new(w[1].clone(), &p * &w[0]))
                .collect();
            for r in ratios.windows(2) {
                prop_assert!(r[0] < r[1]);
            }
            for r in &ratios {
                prop_assert_eq!(compare_to_sigma(&p, r), Ordering::Less);
            }
        }
    }
}
