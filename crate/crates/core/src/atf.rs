//! Integral affine geometry of almost toric base diagrams: the girdled
//! triangle of a pin-ellipsoid, its fan subdivision and pavilion
//! truncations, and Vianna triangles realized by explicit mutation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{affine_length, int_serde, primitive_part, rational_direction, wedge, LatticeVector, Rational, RationalPoint};
use crate::hj::wahl_data;
use crate::markov::{companion_of, mutate, MarkovTriple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirdledTriangle {
    #[serde(with = "int_serde")]
    pub p: BigInt,
    #[serde(with = "int_serde")]
    pub q: BigInt,
    pub alpha: Rational,
    pub beta: Rational,
    /// `(0,0)`, `(alpha p^2, alpha (pq - 1))`, `(0, beta)`, anticlockwise.
    pub vertices: [RationalPoint; 3],
    pub rho0: LatticeVector,
    pub rho_end: LatticeVector,
    /// `(alpha pq - alpha - beta, -alpha p^2)`, with `gamma . x >= -alpha beta p^2`.
    pub gamma: RationalPoint,
}

impl GirdledTriangle {
    pub fn origin(&self) -> &RationalPoint {
        &self.vertices[0]
    }

    pub fn apex(&self) -> &RationalPoint {
        &self.vertices[1]
    }

    pub fn top(&self) -> &RationalPoint {
        &self.vertices[2]
    }

    pub fn girdle_offset(&self) -> Rational {
        -(&self.alpha * &self.beta * Rational::from(&self.p * &self.p))
    }

    /// The three half-planes `n . x >= c`, as `(n, c)`.
    pub fn half_planes(&self) -> [(RationalPoint, Rational); 3] {
        [
            (self.rho0.to_point(), Rational::zero()),
            (self.rho_end.to_point(), Rational::zero()),
            (self.gamma.clone(), self.girdle_offset()),
        ]
    }
}

fn dot(a: &RationalPoint, b: &RationalPoint) -> Rational {
    &a.x * &b.x + &a.y * &b.y
}

/// Intersection of the lines `n1 . x = c1` and `n2 . x = c2`.
fn meet(n1: &RationalPoint, c1: &Rational, n2: &RationalPoint, c2: &Rational) -> Option<RationalPoint> {
    let det = n1.cross(n2);
    if det.is_zero() {
        return None;
    }
    let x = (c1 * &n2.y - c2 * &n1.y) / &det;
    let y = (&n1.x * c2 - &n2.x * c1) / &det;
    Some(RationalPoint::new(x, y))
}

pub fn delta_triangle(p: &BigInt, q: &BigInt, alpha: &Rational, beta: &Rational) -> Result<GirdledTriangle> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::NonPositive);
    }
    if !q.is_positive() || q > p || !num_integer::Integer::gcd(p, q).is_one() {
        return Err(Error::InvalidPair { p: p.clone(), q: q.clone() });
    }
    let p2 = Rational::from(p * p);
    let pq1 = Rational::from(p * q - 1);
    let vertices = [
        RationalPoint::origin(),
        RationalPoint::new(alpha * &p2, alpha * &pq1),
        RationalPoint::new(Rational::zero(), beta.clone()),
    ];
    let rho0 = LatticeVector::new(1, 0);
    let rho_end = LatticeVector::new(1 - p * q, p * p);
    let gamma = RationalPoint::new(alpha * Rational::from(p * q) - alpha - beta, -(alpha * &p2));
    let t = GirdledTriangle { p: p.clone(), q: q.clone(), alpha: alpha.clone(), beta: beta.clone(), vertices, rho0, rho_end, gamma };

    // the half-plane description must cut out exactly these vertices
    let hp = t.half_planes();
    let expect = [(0, 1, 0), (1, 2, 1), (0, 2, 2)];
    for (a, b, v) in expect {
        let pt = meet(&hp[a].0, &hp[a].1, &hp[b].0, &hp[b].1);
        if pt.as_ref() != Some(&t.vertices[v]) {
            return Err(Error::Internal(format!("half-planes {a},{b} do not meet at vertex {v}")));
        }
    }
    for v in &t.vertices {
        if hp.iter().any(|(n, c)| dot(n, v) < *c) {
            return Err(Error::Internal("vertex outside the half-planes".into()));
        }
    }
    if wedge(&t.rho0, &t.rho_end) != p * p {
        return Err(Error::Internal("rho0 ^ rho_end != p^2".into()));
    }
    Ok(t)
}

/// `rho_0 = (1,0)`, `rho_1 = (0,1)`, `rho_{i+1} = b_i rho_i - rho_{i-1}`.
pub fn fan_rays(p: &BigInt, q: &BigInt) -> Result<Vec<LatticeVector>> {
    let w = wahl_data(p, q)?;
    let mut rays = vec![LatticeVector::new(1, 0), LatticeVector::new(0, 1)];
    for (i, &b) in w.chain.entries().iter().enumerate() {
        let next = &rays[i + 1].scale(&BigInt::from(b)) - &rays[i];
        rays.push(next);
    }
    let end = LatticeVector::new(1 - p * q, p * p);
    if rays.last() != Some(&end) {
        return Err(Error::Internal(format!("terminal ray {} != {end}", rays.last().unwrap())));
    }
    if rays.windows(2).any(|r| !wedge(&r[0], &r[1]).is_one()) {
        return Err(Error::Internal("consecutive rays do not form a lattice basis".into()));
    }
    Ok(rays)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Inward normal `rho_i`; `0` and `m + 1` are the toric sides of the triangle.
    Ray(usize),
    Girdle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonEdge {
    pub kind: EdgeKind,
    pub from: RationalPoint,
    pub to: RationalPoint,
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PavilionPolygon {
    pub base: GirdledTriangle,
    pub rays: Vec<LatticeVector>,
    pub lambdas: Vec<Rational>,
    /// Anticlockwise from the top vertex `(0, beta)`.
    pub vertices: Vec<RationalPoint>,
    pub edges: Vec<PolygonEdge>,
}

impl PavilionPolygon {
    /// Affine lengths of the new edges `f_1..f_m`.
    pub fn cut_lengths(&self) -> Vec<Rational> {
        let m = self.lambdas.len();
        (1..=m)
            .map(|i| self.edges.iter().find(|e| e.kind == EdgeKind::Ray(i)).map(|e| e.length.clone()).unwrap_or_else(Rational::zero))
            .collect()
    }
}

/// Convex polygon with a tag on the edge leaving each vertex.
struct Tagged {
    verts: Vec<RationalPoint>,
    tags: Vec<EdgeKind>,
}

impl Tagged {
    fn clip(&self, n: &RationalPoint, c: &Rational, tag: EdgeKind) -> Tagged {
        let k = self.verts.len();
        let mut verts = Vec::new();
        let mut tags = Vec::new();
        for i in 0..k {
            let (a, b) = (&self.verts[i], &self.verts[(i + 1) % k]);
            let (fa, fb) = (dot(n, a) - c, dot(n, b) - c);
            let cross_at = || {
                let t = &fa / (&fa - &fb);
                a.add(&b.sub(a).scale(&t))
            };
            match (!fa.is_negative(), !fb.is_negative()) {
                (true, true) => {
                    verts.push(a.clone());
                    tags.push(self.tags[i]);
                }
                (true, false) => {
                    verts.push(a.clone());
                    tags.push(self.tags[i]);
                    verts.push(cross_at());
                    tags.push(tag);
                }
                (false, true) => {
                    verts.push(cross_at());
                    tags.push(self.tags[i]);
                }
                (false, false) => {}
            }
        }
        let mut out = Tagged { verts, tags };
        out.drop_degenerate();
        out
    }

    fn drop_degenerate(&mut self) {
        let mut i = 0;
        while self.verts.len() > 1 && i < self.verts.len() {
            let j = (i + 1) % self.verts.len();
            if self.verts[i] == self.verts[j] {
                self.verts.remove(i);
                self.tags.remove(i);
            } else {
                i += 1;
            }
        }
    }
}

/// Truncates the triangle by `rho_i . x >= lambda_i`, `i = 1..m`.
pub fn pavilion_polygon(base: &GirdledTriangle, lambdas: &[Rational]) -> Result<PavilionPolygon> {
    let rays = fan_rays(&base.p, &base.q)?;
    let m = rays.len() - 2;
    if lambdas.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: lambdas.len() });
    }
    if lambdas.iter().any(|l| !l.is_positive()) {
        return Err(Error::NonPositive);
    }
    for (i, l) in lambdas.iter().enumerate() {
        if base.vertices[1..].iter().any(|v| rays[i + 1].dot(v) <= *l) {
            return Err(Error::GirdleViolated(i + 1));
        }
    }
    let mut poly = Tagged {
        verts: vec![base.top().clone(), base.origin().clone(), base.apex().clone()],
        tags: vec![EdgeKind::Ray(0), EdgeKind::Ray(m + 1), EdgeKind::Girdle],
    };
    for (i, l) in lambdas.iter().enumerate() {
        poly = poly.clip(&rays[i + 1].to_point(), l, EdgeKind::Ray(i + 1));
    }
    // expected edge sequence from the top vertex: rho_0, rho_1, ..., rho_{m+1}, girdle
    let want: Vec<EdgeKind> = (0..=m + 1).map(EdgeKind::Ray).chain([EdgeKind::Girdle]).collect();
    if poly.tags != want {
        let missing = (1..=m).find(|&i| !poly.tags.contains(&EdgeKind::Ray(i))).unwrap_or(0);
        return Err(Error::NotDelzant(missing));
    }
    let k = poly.verts.len();
    let mut edges = Vec::with_capacity(k);
    for i in 0..k {
        let (from, to) = (poly.verts[i].clone(), poly.verts[(i + 1) % k].clone());
        let length = affine_length(&from, &to)?;
        edges.push(PolygonEdge { kind: poly.tags[i], from, to, length });
    }
    Ok(PavilionPolygon { base: base.clone(), rays, lambdas: lambdas.to_vec(), vertices: poly.verts, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViannaTriangle {
    pub triple: MarkovTriple,
    pub vertices: [RationalPoint; 3],
    /// Primitive direction of the branch cut at each vertex, pointing inward.
    pub nodes: [LatticeVector; 3],
    /// Mutated slots, starting from the standard simplex.
    pub path: Vec<usize>,
}

/// Primitive integral direction of the segment `a -> b`.
fn direction(a: &RationalPoint, b: &RationalPoint) -> LatticeVector {
    rational_direction(&b.sub(a)).0
}

impl ViannaTriangle {
    pub fn standard() -> Self {
        let pt = |x: i64, y: i64| RationalPoint::new(Rational::from(x), Rational::from(y));
        ViannaTriangle {
            triple: MarkovTriple::root(),
            vertices: [pt(0, 0), pt(1, 0), pt(0, 1)],
            nodes: [LatticeVector::new(1, 1), LatticeVector::new(-2, 1), LatticeVector::new(1, -2)],
            path: vec![],
        }
    }

    /// `|u ^ w|` for the primitive edge directions at vertex `i` (0-based).
    pub fn determinant(&self, i: usize) -> BigInt {
        let v = &self.vertices[i];
        let u = direction(v, &self.vertices[(i + 1) % 3]);
        let w = direction(v, &self.vertices[(i + 2) % 3]);
        wedge(&u, &w).abs()
    }

    /// Affine length of the edge opposite vertex `i` (0-based).
    pub fn edge_length(&self, i: usize) -> Rational {
        affine_length(&self.vertices[(i + 1) % 3], &self.vertices[(i + 2) % 3]).expect("rational segment")
    }

    pub fn area(&self) -> Rational {
        let [a, b, c] = &self.vertices;
        (b.sub(a).cross(&c.sub(a)) * Rational::new(1, 2)).abs()
    }

    /// Invariant under integral affine equivalence.
    pub fn signature(&self) -> (Vec<BigInt>, Vec<Rational>, Rational) {
        let mut d: Vec<BigInt> = (0..3).map(|i| self.determinant(i)).collect();
        let mut l: Vec<Rational> = (0..3).map(|i| self.edge_length(i)).collect();
        d.sort();
        l.sort();
        (d, l, self.area())
    }

    /// Determinants `p_i^2`, lengths `p_i/(p_{i+1} p_{i+2})`, area 1/2.
    pub fn validate(&self) -> Result<()> {
        let t = self.triple.entries();
        for i in 0..3 {
            if self.determinant(i) != &t[i] * &t[i] {
                return Err(Error::Internal(format!("vertex {i} of {} has determinant {}", self.triple, self.determinant(i))));
            }
            let want = Rational::new(t[i].clone(), &t[(i + 1) % 3] * &t[(i + 2) % 3]);
            if self.edge_length(i) != want {
                return Err(Error::Internal(format!("edge {i} of {} has length {}", self.triple, self.edge_length(i))));
            }
            if !self.nodes[i].is_primitive() {
                return Err(Error::Internal("node direction not primitive".into()));
            }
        }
        if self.area() != Rational::new(1, 2) {
            return Err(Error::Internal("area changed".into()));
        }
        Ok(())
    }

    /// Relabels slots: new slot `j` is old slot `perm[j]` (1-based).
    pub fn permuted(&self, perm: [usize; 3]) -> ViannaTriangle {
        ViannaTriangle {
            triple: self.triple.permuted(perm),
            vertices: perm.map(|k| self.vertices[k - 1].clone()),
            nodes: perm.map(|k| self.nodes[k - 1].clone()),
            path: self.path.clone(),
        }
    }
}

/// `y + s (d ^ y) d`, the monodromy shear of a node in direction `d`.
fn shear(d: &LatticeVector, s: i64, y: &RationalPoint) -> RationalPoint {
    let k = (Rational::from(&d.x) * &y.y - Rational::from(&d.y) * &y.x) * Rational::from(s);
    y.add(&d.to_point().scale(&k))
}

fn shear_vec(d: &LatticeVector, s: i64, y: &LatticeVector) -> LatticeVector {
    let k = wedge(d, y) * s;
    y + &d.scale(&k)
}

/// Cuts along the branch cut at `vertex` (1-based), shears the half holding
/// the next vertex so the old corner straightens, and relabels by the
/// mutation rule: slot `k+2` keeps its vertex, slot `k` takes the sheared
/// next vertex, slot `k+1` the point where the cut met the far side.
pub fn mutate_triangle(t: &ViannaTriangle, vertex: usize) -> Result<ViannaTriangle> {
    if !(1..=3).contains(&vertex) {
        return Err(Error::BadMutationIndex(vertex));
    }
    let k = vertex - 1;
    let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
    let v = &t.vertices[k];
    let d = &t.nodes[k];
    let (v1, v2) = (&t.vertices[k1], &t.vertices[k2]);
    let e = v2.sub(v1);
    let s = v1.sub(v).cross(&e) / d.to_point().cross(&e);
    let hit = v.add(&d.to_point().scale(&s));

    let u = v1.sub(v);
    let w = v2.sub(v);
    let sign = [1, -1]
        .into_iter()
        .find(|&sg| {
            let au = shear(d, sg, &u);
            au.cross(&w).is_zero() && dot(&au, &w).is_negative()
        })
        .ok_or_else(|| Error::Internal(format!("no straightening shear at vertex {vertex} of {}", t.triple)))?;

    let new_triple = mutate(&t.triple, vertex)?;
    let [a, b, c] = [t.triple.entries()[k1].clone(), new_triple.entries()[k].clone(), t.triple.entries()[k2].clone()];
    // slot k <- p_{k+1}, slot k+1 <- mutated entry, slot k+2 <- p_{k+2}
    let mut entries: [BigInt; 3] = Default::default();
    entries[k] = a;
    entries[k1] = b;
    entries[k2] = c;
    let [x, y, z] = entries;
    let triple = MarkovTriple::new(x, y, z)?;

    let mut vertices = t.vertices.clone();
    let mut nodes = t.nodes.clone();
    vertices[k] = v.add(&shear(d, sign, &u));
    nodes[k] = shear_vec(d, sign, &t.nodes[k1]);
    vertices[k1] = hit;
    nodes[k1] = -d;
    let mut path = t.path.clone();
    path.push(vertex);
    let out = ViannaTriangle { triple, vertices, nodes, path };
    out.validate()?;
    Ok(out)
}

/// Vianna triangle for an ordered triple, built by mutating the standard
/// simplex along the tree path to the triple's multiset.
pub fn vianna_triangle(target: &MarkovTriple) -> Result<ViannaTriangle> {
    let mut chain = vec![target.sorted()];
    while *chain.last().unwrap() != MarkovTriple::root() {
        let down = mutate(chain.last().unwrap(), 3)?.sorted();
        chain.push(down);
    }
    chain.reverse();
    let mut tri = ViannaTriangle::standard();
    for next in &chain[1..] {
        let k = (1..=3)
            .find(|&k| mutate(&tri.triple, k).map(|m| m.sorted() == *next).unwrap_or(false))
            .ok_or_else(|| Error::Internal(format!("no mutation of {} reaches {next}", tri.triple)))?;
        tri = mutate_triangle(&tri, k)?;
    }
    for perm in [[1, 2, 3], [2, 3, 1], [3, 1, 2], [1, 3, 2], [3, 2, 1], [2, 1, 3]] {
        if tri.triple.permuted(perm) == *target {
            return Ok(tri.permuted(perm));
        }
    }
    Err(Error::Internal(format!("{} is not a reordering of {target}", tri.triple)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirdleData {
    pub vector: LatticeVector,
    pub length: Rational,
    pub displacement: Rational,
}

/// Girdle of the triangle with `alpha = p3/(p1 p2)`, `beta = p3/(p1 p3')`
/// for `t = (p1, p2, p3)`, `p3' = 3 p1 p3 - p2`.
pub fn girdle_data(t: &MarkovTriple, q1: &BigInt) -> Result<GirdleData> {
    let [p1, p2, p3] = t.entries();
    if companion_of(p1, p2, p3).as_ref() != Some(q1) {
        return Err(Error::CompanionMismatch { p: p1.clone(), q: q1.clone() });
    }
    let p3p = BigInt::from(3) * p1 * p3 - p2;
    let num = &p3p * q1 - BigInt::from(3) * p3;
    if !(&num % p1).is_zero() {
        return Err(Error::Internal(format!("girdle slope {num}/{p1} not integral")));
    }
    let vector = LatticeVector::new(p3p.clone(), &num / p1);
    let length = Rational::new(p1 * p3, p2 * &p3p);
    let displacement = Rational::new(p3.clone(), p1.clone());

    let tri = delta_triangle(p1, q1, &Rational::new(p3.clone(), p1 * p2), &Rational::new(p3.clone(), p1 * &p3p))?;
    let (u, lam) = rational_direction(&tri.apex().sub(tri.top()));
    let disp = (Rational::from(&u.x) * &tri.top().y).abs();
    if u != vector || lam != length || disp != displacement {
        return Err(Error::Internal(format!("girdle of {t}: formula and vertices disagree")));
    }
    Ok(GirdleData { vector, length, displacement })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibleBounds {
    pub alpha_max: Rational,
    pub beta_max: Rational,
    #[serde(with = "int_serde")]
    pub q: BigInt,
}

/// Open bounds for the pin-ellipsoid visible at vertex `i` (1-based).
pub fn visible_ellipsoid_bounds(t: &MarkovTriple, i: usize) -> Result<VisibleBounds> {
    if !(1..=3).contains(&i) {
        return Err(Error::BadMutationIndex(i));
    }
    let r = t.rotated(i);
    let [pi, pi1, pi2] = r.entries();
    Ok(VisibleBounds {
        alpha_max: Rational::new(pi2.clone(), pi * pi1),
        beta_max: Rational::new(pi1.clone(), pi * pi2),
        q: companion_of(pi, pi1, pi2).expect("coprime entries"),
    })
}

/// Primitive part of a rational direction, exposed for rendering.
pub fn primitive_direction(v: &LatticeVector) -> LatticeVector {
    primitive_part(v).0
}
