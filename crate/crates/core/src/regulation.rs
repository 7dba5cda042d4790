//! Dual graphs of configurations of spheres, combinatorial blow-ups and
//! blow-downs, and the broken rulings attached to a Wahl chain.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::int_serde;
use crate::hj::{dual_wahl_root, HJChain};
use crate::intersection::culet_report;

/// Graphs above this size skip the exhaustive search.
pub const EXHAUSTIVE_VERTEX_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    /// Self-intersection.
    pub label: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct DualGraph {
    labels: BTreeMap<usize, i64>,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    vertices: Vec<Vertex>,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for DualGraph {
    type Error = Error;
    fn try_from(r: RawGraph) -> Result<Self> {
        DualGraph::new(r.vertices, r.edges)
    }
}

impl From<DualGraph> for RawGraph {
    fn from(g: DualGraph) -> Self {
        RawGraph { vertices: g.vertices(), edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect() }
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b { (a, b) } else { (b, a) }
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for v in vertices {
            if labels.insert(v.id, v.label).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut set = BTreeSet::new();
        for [a, b] in edges {
            if a == b || !labels.contains_key(&a) || !labels.contains_key(&b) || !set.insert(ordered(a, b)) {
                return Err(Error::InvalidArgument(format!("bad edge {a}-{b}")));
            }
        }
        let g = DualGraph { labels, edges: set };
        if !g.is_tree() {
            return Err(Error::InvalidArgument("dual graph is not a tree".into()));
        }
        Ok(g)
    }

    pub fn single(label: i64) -> Self {
        DualGraph { labels: BTreeMap::from([(1, label)]), edges: BTreeSet::new() }
    }

    /// Path with vertex ids `1..=k`.
    pub fn chain(labels: &[i64]) -> Self {
        DualGraph {
            labels: labels.iter().enumerate().map(|(i, &l)| (i + 1, l)).collect(),
            edges: (1..labels.len()).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.labels.iter().map(|(&id, &label)| Vertex { id, label }).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: usize) -> Option<i64> {
        self.labels.get(&id).copied()
    }

    pub fn neighbours(&self, id: usize) -> Vec<usize> {
        self.edges.iter().filter_map(|&(a, b)| if a == id { Some(b) } else if b == id { Some(a) } else { None }).collect()
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == id || b == id).count()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&ordered(a, b))
    }

    pub fn next_id(&self) -> usize {
        self.labels.keys().next_back().map_or(1, |m| m + 1)
    }

    pub fn is_tree(&self) -> bool {
        let n = self.labels.len();
        if n == 0 || self.edges.len() != n - 1 {
            return n == 0;
        }
        let start = *self.labels.keys().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == n
    }

    /// The single 0-vertex of a smooth fibre.
    pub fn is_smooth_fibre(&self) -> bool {
        self.labels.len() == 1 && self.labels.values().all(|&l| l == 0)
    }

    pub fn minus_one_count(&self) -> usize {
        self.labels.values().filter(|&&l| l == -1).count()
    }

    /// Vertices a blow-down may contract: label -1, degree 1 or 2.
    pub fn contractible(&self) -> Vec<usize> {
        self.labels.iter().filter(|&(&id, &l)| l == -1 && (1..=2).contains(&self.degree(id))).map(|(&id, _)| id).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for (id, l) in &self.labels {
            writeln!(s, "  v{id} [label=\"{l}\"];").unwrap();
        }
        for (a, b) in &self.edges {
            writeln!(s, "  v{a} -- v{b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Chain entries `b_i` become self-intersections `-b_i`.
pub fn labels_from_chain(chain: &HJChain) -> Vec<i64> {
    chain.entries().iter().map(|b| -b).collect()
}

pub fn chain_from_labels(labels: &[i64]) -> Result<HJChain> {
    HJChain::new(labels.iter().map(|l| -l).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Site {
    Vertex(usize),
    Edge(usize, usize),
}

pub fn blow_up(g: &DualGraph, site: Site) -> Result<DualGraph> {
    let id = g.next_id();
    let mut out = g.clone();
    match site {
        Site::Vertex(v) => {
            *out.labels.get_mut(&v).ok_or(Error::InvalidSite)? -= 1;
            out.edges.insert(ordered(v, id));
        }
        Site::Edge(a, b) => {
            if !g.has_edge(a, b) {
                return Err(Error::InvalidSite);
            }
            *out.labels.get_mut(&a).unwrap() -= 1;
            *out.labels.get_mut(&b).unwrap() -= 1;
            out.edges.remove(&ordered(a, b));
            out.edges.insert(ordered(a, id));
            out.edges.insert(ordered(b, id));
        }
    }
    out.labels.insert(id, -1);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowDown {
    pub contracted: usize,
    /// The one or two neighbours whose labels went up by one.
    pub neighbours: [Option<usize>; 2],
}

/// Inverse of [`blow_up`] at the vertex `id`.
pub fn blow_down(g: &DualGraph, id: usize) -> Result<(DualGraph, BlowDown)> {
    if g.label(id) != Some(-1) {
        return Err(Error::InvalidSite);
    }
    let nb = g.neighbours(id);
    let mut out = g.clone();
    out.labels.remove(&id);
    out.edges.retain(|&(a, b)| a != id && b != id);
    match nb[..] {
        [a] => {
            *out.labels.get_mut(&a).unwrap() += 1;
            Ok((out, BlowDown { contracted: id, neighbours: [Some(a), None] }))
        }
        [a, b] => {
            *out.labels.get_mut(&a).unwrap() += 1;
            *out.labels.get_mut(&b).unwrap() += 1;
            out.edges.insert(ordered(a, b));
            Ok((out, BlowDown { contracted: id, neighbours: [Some(a), Some(b)] }))
        }
        _ => Err(Error::InvalidSite),
    }
}

/// Contracts the contractible vertex of smallest id until none is left.
pub fn blow_down_all(g: &DualGraph) -> (DualGraph, Vec<BlowDown>) {
    let mut cur = g.clone();
    let mut log = Vec::new();
    while let Some(&id) = cur.contractible().first() {
        let (next, mv) = blow_down(&cur, id).expect("contractible vertex");
        cur = next;
        log.push(mv);
    }
    (cur, log)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulingCheck {
    pub is_ruling: bool,
    pub exhaustive: bool,
    pub warning: Option<String>,
}

fn reaches_fibre(g: &DualGraph, dead: &mut HashSet<DualGraph>) -> bool {
    if g.is_smooth_fibre() {
        return true;
    }
    if dead.contains(g) {
        return false;
    }
    for id in g.contractible() {
        let (next, _) = blow_down(g, id).expect("contractible vertex");
        if reaches_fibre(&next, dead) {
            return true;
        }
    }
    dead.insert(g.clone());
    false
}

pub fn check_ruling(g: &DualGraph) -> RulingCheck {
    if g.len() > EXHAUSTIVE_VERTEX_CAP {
        let (end, _) = blow_down_all(g);
        return RulingCheck {
            is_ruling: end.is_smooth_fibre(),
            exhaustive: false,
            warning: Some(format!("{} vertices exceed the exhaustive cap of {EXHAUSTIVE_VERTEX_CAP}; greedy order only", g.len())),
        };
    }
    RulingCheck { is_ruling: reaches_fibre(g, &mut HashSet::new()), exhaustive: true, warning: None }
}

/// Whether some sequence of blow-downs ends at a single 0-vertex.
pub fn is_ruling_degeneration(g: &DualGraph) -> bool {
    check_ruling(g).is_ruling
}

/// Chain with a -1 vertex attached at `position` (1-based).
pub fn chain_with_exceptional(chain: &HJChain, position: usize) -> DualGraph {
    let g = DualGraph::chain(&labels_from_chain(chain));
    let mut out = g.clone();
    let id = g.next_id();
    out.labels.insert(id, -1);
    out.edges.insert(ordered(position, id));
    out
}

/// The unique chain vertex (1-based) where a -1 sphere completes a ruling.
pub fn attach_position(chain: &HJChain) -> Result<usize> {
    let hits: Vec<usize> = (1..=chain.len()).filter(|&i| is_ruling_degeneration(&chain_with_exceptional(chain, i))).collect();
    match hits[..] {
        [] => Err(Error::NoPosition(chain.entries().to_vec())),
        [i] => {
            if dual_wahl_root(chain).is_none() {
                return Err(Error::InvalidArgument(format!("{chain} is not a dual Wahl chain")));
            }
            Ok(i)
        }
        _ => Err(Error::MultiplePositions(chain.entries().to_vec(), hits)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flank {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrokenRuling {
    pub flank: Flank,
    /// Chain indices of the curves in the ruling, 1-based.
    pub curves: Vec<usize>,
    /// Chain index of the curve the -1 sphere meets.
    pub attach_curve: usize,
    /// Vertex id of the -1 sphere.
    pub exceptional: usize,
    pub graph: DualGraph,
    /// Number of spheres contracted down to the smooth fibre.
    pub contracted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegulationPrediction {
    #[serde(with = "int_serde")]
    pub p: BigInt,
    #[serde(with = "int_serde")]
    pub q: BigInt,
    pub chain: HJChain,
    pub culet_index: usize,
    pub weight: i64,
    pub broken_rulings: Vec<BrokenRuling>,
}

impl RegulationPrediction {
    pub fn total_contracted(&self) -> usize {
        self.broken_rulings.iter().map(|r| r.contracted).sum()
    }
}

pub fn predict_regulation(p: &BigInt, q: &BigInt) -> Result<RegulationPrediction> {
    let report = culet_report(p, q)?;
    let chain = crate::hj::wahl_data(p, q)?.chain;
    let m = chain.len();
    let c = report.culet_index;
    let mut broken_rulings = Vec::new();
    for (flank, side) in [(Flank::Left, &report.flanks[0]), (Flank::Right, &report.flanks[1])] {
        if side.is_empty() {
            continue;
        }
        let offset = if flank == Flank::Left { 0 } else { c };
        let pos = attach_position(side)?;
        let curves: Vec<usize> = (1..=side.len()).map(|j| j + offset).collect();
        let exceptional = m + 1 + broken_rulings.len();
        let mut labels: BTreeMap<usize, i64> = curves.iter().map(|&k| (k, -chain.b(k))).collect();
        labels.insert(exceptional, -1);
        let mut edges: BTreeSet<(usize, usize)> = curves.windows(2).map(|w| (w[0], w[1])).collect();
        edges.insert(ordered(pos + offset, exceptional));
        let graph = DualGraph { labels, edges };
        let check = check_ruling(&graph);
        let (end, log) = blow_down_all(&graph);
        if !check.is_ruling || !end.is_smooth_fibre() {
            return Err(Error::Internal(format!("predicted ruling on {side} is not a ruling degeneration")));
        }
        broken_rulings.push(BrokenRuling { flank, curves, attach_curve: pos + offset, exceptional, graph, contracted: log.len() });
    }
    let expected = match report.weight {
        4 => 0,
        7 => 1,
        10 => 2,
        w => return Err(Error::Internal(format!("weight {w} outside {{4, 7, 10}}"))),
    };
    if broken_rulings.len() != expected {
        return Err(Error::Internal(format!("weight {} with {} broken rulings", report.weight, broken_rulings.len())));
    }
    Ok(RegulationPrediction { p: p.clone(), q: q.clone(), chain, culet_index: c, weight: report.weight, broken_rulings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hj::is_zero_continued_fraction;
    use crate::markov::reachable_pairs;
    use proptest::prelude::*;

    fn chain(v: &[i64]) -> HJChain {
        HJChain::new(v.to_vec()).unwrap()
    }

    fn labels(g: &DualGraph) -> Vec<i64> {
        g.vertices().iter().map(|v| v.label).collect()
    }

    #[test]
    fn blow_up_examples() {
        let g = blow_up(&DualGraph::single(0), Site::Vertex(1)).unwrap();
        assert_eq!(g, DualGraph::chain(&[-1, -1]));
        let e = blow_up(&g, Site::Edge(1, 2)).unwrap();
        assert_eq!(labels(&e), vec![-2, -2, -1]);
        assert_eq!(e.neighbours(3), vec![1, 2]);
        let v = blow_up(&g, Site::Vertex(2)).unwrap();
        assert_eq!(labels(&v), vec![-1, -2, -1]);
        assert_eq!(v.edges(), vec![(1, 2), (2, 3)]);
        assert!(matches!(blow_up(&g, Site::Edge(1, 3)), Err(Error::InvalidSite)));
        assert!(matches!(blow_up(&g, Site::Vertex(9)), Err(Error::InvalidSite)));
    }

    #[test]
    fn blow_down_examples() {
        let (end, log) = blow_down_all(&DualGraph::chain(&[-2, -1, -2]));
        assert!(end.is_smooth_fibre());
        assert_eq!(log.len(), 2);
        let (end, _) = blow_down_all(&chain_with_exceptional(&chain(&[2, 2, 2]), 2));
        assert!(end.is_smooth_fibre());
        let (end, _) = blow_down_all(&chain_with_exceptional(&chain(&[2, 2, 2]), 1));
        assert_eq!(labels(&end), vec![-1]);
        assert!(!end.is_smooth_fibre());
    }

    #[test]
    fn ruling_examples() {
        assert!(is_ruling_degeneration(&DualGraph::chain(&[-2, -1, -2])));
        assert!(!is_ruling_degeneration(&DualGraph::single(-1)));
        assert!(is_ruling_degeneration(&DualGraph::chain(&[-2, -2, -1, -3])));
        assert!(is_ruling_degeneration(&DualGraph::single(0)));
    }

    #[test]
    fn negation_helpers_round_trip() {
        let c = chain(&[7, 2, 2, 2]);
        assert_eq!(labels_from_chain(&c), vec![-7, -2, -2, -2]);
        assert_eq!(chain_from_labels(&labels_from_chain(&c)).unwrap(), c);
        assert!(chain_from_labels(&[1]).is_err());
    }

    #[test]
    fn json_and_dot() {
        let g = DualGraph::chain(&[-2, -1]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"vertices":[{"id":1,"label":-2},{"id":2,"label":-1}],"edges":[[1,2]]}"#);
        assert_eq!(serde_json::from_str::<DualGraph>(&s).unwrap(), g);
        assert!(serde_json::from_str::<DualGraph>(r#"{"vertices":[{"id":1,"label":0},{"id":2,"label":0}],"edges":[]}"#).is_err());
        assert_eq!(g.to_dot(), "graph G {\n  v1 [label=\"-2\"];\n  v2 [label=\"-1\"];\n  v1 -- v2;\n}\n");
    }

    #[test]
    fn attach_examples() {
        assert_eq!(attach_position(&chain(&[2, 2, 2])).unwrap(), 2);
        assert_eq!(attach_position(&chain(&[5, 2, 2, 2, 2, 2])).unwrap(), 2);
        assert!(matches!(attach_position(&chain(&[4])), Err(Error::NoPosition(_))));
    }

    #[test]
    fn prediction_examples() {
        let b = BigInt::from;
        let r = predict_regulation(&b(2), &b(1)).unwrap();
        assert_eq!((r.weight, r.broken_rulings.len()), (4, 0));
        let r = predict_regulation(&b(5), &b(1)).unwrap();
        assert_eq!(r.weight, 7);
        assert_eq!(r.broken_rulings.len(), 1);
        assert_eq!(r.broken_rulings[0].curves, vec![2, 3, 4]);
        assert_eq!(r.broken_rulings[0].attach_curve, 3);
        let r = predict_regulation(&b(29), &b(7)).unwrap();
        assert_eq!(r.weight, 10);
        let rs = &r.broken_rulings;
        assert_eq!(rs[0].curves, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(rs[0].attach_curve, 2);
        assert_eq!(rs[1].curves, vec![8, 9, 10]);
        assert_eq!(rs[1].attach_curve, 9);
    }

    #[test]
    fn contracted_count_is_m_minus_one() {
        for (p, q) in reachable_pairs(6, &BigInt::from(1000)) {
            if p < BigInt::from(2) {
                continue;
            }
            let r = predict_regulation(&p, &q).unwrap();
            assert_eq!(r.total_contracted(), r.chain.len() - 1, "({p}, {q})");
        }
    }

    #[test]
    fn greedy_matches_exhaustive_on_small_chains() {
        for len in 1..=4usize {
            for code in 0..5usize.pow(len as u32) {
                let ls: Vec<i64> = (0..len).map(|i| -(((code / 5usize.pow(i as u32)) % 5) as i64) - 1).collect();
                let g = DualGraph::chain(&ls);
                for pos in 1..=len {
                    let mut h = g.clone();
                    h.labels.insert(len + 1, -1);
                    h.edges.insert((pos, len + 1));
                    assert_eq!(blow_down_all(&h).0.is_smooth_fibre(), is_ruling_degeneration(&h), "{h:?}");
                }
            }
        }
    }

    #[test]
    fn chain_graphs_agree_with_zcf_small() {
        for len in 1..=4usize {
            for code in 0..4usize.pow(len as u32) {
                let v: Vec<i64> = (0..len).map(|i| ((code / 4usize.pow(i as u32)) % 4) as i64 + 1).collect();
                let c = chain(&v);
                assert_eq!(is_zero_continued_fraction(&c), is_ruling_degeneration(&DualGraph::chain(&labels_from_chain(&c))), "{c}");
            }
        }
    }

    /// Tree on `1..=n` from a Prufer sequence.
    fn prufer_tree(seq: &[usize], labels: &[i64]) -> DualGraph {
        let n = labels.len();
        let mut degree = vec![1usize; n + 1];
        for &s in seq {
            degree[s] += 1;
        }
        let mut edges = Vec::new();
        for &s in seq {
            let leaf = (1..=n).find(|&v| degree[v] == 1).unwrap();
            edges.push([leaf, s]);
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
        if n >= 2 {
            edges.push([rest[0], rest[1]]);
        }
        let vertices = labels.iter().enumerate().map(|(i, &label)| Vertex { id: i + 1, label }).collect();
        DualGraph::new(vertices, edges).unwrap()
    }

    #[test]
    fn greedy_matches_exhaustive_on_small_trees() {
        for n in 1..=5usize {
            let seqs = n.saturating_sub(2) as u32;
            for sc in 0..n.pow(seqs) {
                let seq: Vec<usize> = (0..seqs).map(|i| (sc / n.pow(i)) % n + 1).collect();
                for lc in 0..5usize.pow(n as u32) {
                    let ls: Vec<i64> = (0..n as u32).map(|i| -(((lc / 5usize.pow(i)) % 5) as i64) - 1).collect();
                    let g = prufer_tree(&seq, &ls);
                    assert_eq!(blow_down_all(&g).0.is_smooth_fibre(), is_ruling_degeneration(&g), "{g:?}");
                }
            }
        }
    }

    fn random_blow_ups(sites: &[(bool, usize)]) -> DualGraph {
        let mut g = DualGraph::single(0);
        for &(on_edge, k) in sites {
            let site = if on_edge && !g.edges.is_empty() {
                let (a, b) = g.edges()[k % g.edges.len()];
                Site::Edge(a, b)
            } else {
                let vs = g.vertices();
                Site::Vertex(vs[k % vs.len()].id)
            };
            g = blow_up(&g, site).unwrap();
        }
        g
    }

    proptest! {
        #[test]
        fn greedy_matches_exhaustive_on_trees_up_to_seven(
            seq in prop::collection::vec(1usize..=7, 5),
            ls in prop::collection::vec(-5i64..=-1, 7),
            n in 2usize..=7,
        ) {
            let seq: Vec<usize> = seq[..n - 2].iter().map(|&s| (s - 1) % n + 1).collect();
            let g = prufer_tree(&seq, &ls[..n]);
            prop_assert_eq!(blow_down_all(&g).0.is_smooth_fibre(), is_ruling_degeneration(&g));
        }

        #[test]
        fn blow_up_then_down_is_identity(sites in prop::collection::vec((any::<bool>(), 0usize..64), 0..12), on_edge: bool, k in 0usize..64) {
            let g = random_blow_ups(&sites);
            let site = if on_edge && !g.edges.is_empty() {
                let (a, b) = g.edges()[k % g.edges.len()];
                Site::Edge(a, b)
            } else {
                Site::Vertex(g.vertices()[k % g.len()].id)
            };
            let up = blow_up(&g, site).unwrap();
            let (down, _) = blow_down(&up, up.next_id() - 1).unwrap();
            prop_assert_eq!(down, g);
        }

        #[test]
        fn random_blow_ups_are_rulings(sites in prop::collection::vec((any::<bool>(), 0usize..64), 1..=10)) {
            let g = random_blow_ups(&sites);
            prop_assert!(g.is_tree());
            prop_assert!(g.minus_one_count() >= 1);
            prop_assert!(is_ruling_degeneration(&g));
            prop_assert!(blow_down_all(&g).0.is_smooth_fibre());
        }
    }
}
