//! SVG emission. Geometry stays exact until the coordinate is written.

use std::fmt::Write as _;

use num_bigint::BigInt;
use pinstairs_core::atf::{EdgeKind, GirdledTriangle, PavilionPolygon, ViannaTriangle};
use pinstairs_core::markov::{sigma_display, sigma_p, TreeNode};
use pinstairs_core::staircase::{stair_boxes, StairBox};
use pinstairs_core::{Error, Rational, RationalPoint, Result};

const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    Staircase,
    BaseDiagram,
    MarkovTree,
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub kind: RenderKind,
    /// Plot window `[0, window]` on each axis.
    pub window: Rational,
    /// Pixels per unit.
    pub scale: f64,
    pub steps: usize,
}

impl RenderSpec {
    pub fn staircase(steps: usize) -> Self {
        RenderSpec { kind: RenderKind::Staircase, window: Rational::from(3), scale: 200.0, steps }
    }

    pub fn base_diagram() -> Self {
        RenderSpec { kind: RenderKind::BaseDiagram, window: Rational::from(1), scale: 300.0, steps: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.window.is_positive() {
            return Err(Error::InvalidArgument("window must be positive".into()));
        }
        if self.steps == 0 {
            return Err(Error::InvalidArgument("step count must be at least 1".into()));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        Ok(())
    }
}

/// Six significant digits, no exponent, trailing zeros dropped.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" { "0".into() } else { s }
}

struct Canvas {
    body: String,
    scale: f64,
    /// Bounding box in plot units.
    x0: f64,
    y1: f64,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new(scale: f64, x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Canvas { body: String::new(), scale, x0, y1, width: (x1 - x0) * scale + 2.0 * MARGIN, height: (y1 - y0) * scale + 2.0 * MARGIN }
    }

    fn px(&self, x: f64) -> String {
        fmt6(MARGIN + (x - self.x0) * self.scale)
    }

    fn py(&self, y: f64) -> String {
        fmt6(MARGIN + (self.y1 - y) * self.scale)
    }

    fn line(&mut self, class: &str, a: (f64, f64), b: (f64, f64)) {
        let (x1, y1, x2, y2) = (self.px(a.0), self.py(a.1), self.px(b.0), self.py(b.1));
        writeln!(self.body, r#"<line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#).unwrap();
    }

    fn text(&mut self, class: &str, at: (f64, f64), dx: f64, dy: f64, s: &str) {
        let (x, y) = (fmt6(MARGIN + (at.0 - self.x0) * self.scale + dx), fmt6(MARGIN + (self.y1 - at.1) * self.scale + dy));
        writeln!(self.body, r#"<text class="{class}" x="{x}" y="{y}">{}</text>"#, escape(s)).unwrap();
    }

    fn cross(&mut self, at: (f64, f64)) {
        let (cx, cy) = (MARGIN + (at.0 - self.x0) * self.scale, MARGIN + (self.y1 - at.1) * self.scale);
        let d = 5.0;
        writeln!(
            self.body,
            r#"<path class="node" d="M{} {} L{} {} M{} {} L{} {}"/>"#,
            fmt6(cx - d),
            fmt6(cy - d),
            fmt6(cx + d),
            fmt6(cy + d),
            fmt6(cx - d),
            fmt6(cy + d),
            fmt6(cx + d),
            fmt6(cy - d)
        )
        .unwrap();
    }

    fn finish(self, style: &str) -> String {
        let (w, h) = (fmt6(self.width), fmt6(self.height));
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<style>{style}</style>\n{}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn f(r: &Rational) -> f64 {
    r.to_f64()
}

fn pt(p: &RationalPoint) -> (f64, f64) {
    (f(&p.x), f(&p.y))
}

/// Box indices `0, 1, -1, 2, -2, ...`, `steps` of them, in index order.
pub fn staircase_indices(steps: usize) -> Vec<i64> {
    let mut v: Vec<i64> = (0..steps as i64).map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 }).collect();
    v.sort();
    v
}

pub fn staircase_boxes(p: &BigInt, q: &BigInt, steps: usize) -> Result<Vec<StairBox>> {
    let idx = staircase_indices(steps.max(1));
    stair_boxes(p, q, idx[0], *idx.last().unwrap())
}

const STAIR_STYLE: &str = ".box{fill:#d9d9d9;stroke:none}.outline{fill:none;stroke:#000;stroke-width:1.5}\
.axis{stroke:#000;stroke-width:1}.volume{fill:none;stroke:#555;stroke-dasharray:6,4}\
.sigma{stroke:#a00;stroke-dasharray:3,3}.corner{fill:#000}text{font:11px sans-serif}";

pub fn render_staircase(p: &BigInt, q: &BigInt, spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let boxes = staircase_boxes(p, q, spec.steps)?;
    let w = f(&spec.window);
    let mut c = Canvas::new(spec.scale, 0.0, 0.0, w, w);

    for b in &boxes {
        let (a, h) = (f(&b.alpha_sup).min(w), f(&b.beta_sup).min(w));
        let (x, y) = (c.px(0.0), c.py(h));
        writeln!(c.body, r#"<rect class="box" x="{x}" y="{y}" width="{}" height="{}"/>"#, fmt6(a * spec.scale), fmt6(h * spec.scale)).unwrap();
    }
    // outline: boxes sorted by alpha_sup ascending have beta_sup descending
    let mut d = format!("M{} {}", c.px(0.0), c.py(f(&boxes[0].beta_sup).min(w)));
    for (k, b) in boxes.iter().enumerate() {
        let a = f(&b.alpha_sup).min(w);
        write!(d, " L{} {}", c.px(a), c.py(f(&b.beta_sup).min(w))).unwrap();
        let next = boxes.get(k + 1).map_or(0.0, |n| f(&n.beta_sup).min(w));
        write!(d, " L{} {}", c.px(a), c.py(next)).unwrap();
    }
    writeln!(c.body, r#"<path class="outline" d="{d}"/>"#).unwrap();

    c.line("axis", (0.0, 0.0), (w, 0.0));
    c.line("axis", (0.0, 0.0), (0.0, w));
    c.text("label", (w, 0.0), 6.0, 4.0, "α");
    c.text("label", (0.0, w), -4.0, -8.0, "β");
    for k in 1..=w.floor() as i64 {
        let v = k as f64;
        c.line("axis", (v, 0.0), (v, -4.0 / spec.scale));
        c.text("tick", (v, 0.0), -3.0, 16.0, &k.to_string());
        c.line("axis", (0.0, v), (-4.0 / spec.scale, v));
        c.text("tick", (0.0, v), -16.0, 4.0, &k.to_string());
    }

    // p^2 alpha beta = 1 across the window
    let pf = p.to_string().parse::<f64>().unwrap_or(f64::MAX);
    let lo = 1.0 / (pf * pf * w);
    let pts: Vec<String> = (0..=200)
        .map(|k| {
            let a = lo * (w / lo).powf(k as f64 / 200.0);
            format!("{},{}", c.px(a), c.py(1.0 / (pf * pf * a)))
        })
        .collect();
    writeln!(c.body, r#"<polyline class="volume" points="{}"/>"#, pts.join(" ")).unwrap();

    let sigma = sigma_p(p).approx;
    if sigma <= w {
        c.line("sigma", (sigma, 0.0), (sigma, w));
        c.text("label", (sigma, w), 4.0, 12.0, &format!("σ_{p} = {}", sigma_display(p)));
    }

    for b in &boxes {
        let (a, h) = (f(&b.alpha_sup), f(&b.beta_sup));
        if a > w || h > w {
            continue;
        }
        writeln!(
            c.body,
            r#"<circle class="corner" data-i="{}" data-alpha="{}" data-beta="{}" cx="{}" cy="{}" r="2.5"/>"#,
            b.index,
            b.alpha_sup,
            b.beta_sup,
            c.px(a),
            c.py(h)
        )
        .unwrap();
        c.text("corner-label", (a, h), 4.0, -4.0, &format!("({}, {}) ({}, {})", b.alpha_sup, b.beta_sup, fmt6(a), fmt6(h)));
    }
    Ok(c.finish(STAIR_STYLE))
}

const BASE_STYLE: &str = ".toric{fill:none;stroke:#000;stroke-width:2.5}.girdle{stroke:#000;stroke-width:1;stroke-dasharray:10,5}\
.cut{stroke:#000;stroke-width:0.8;stroke-dasharray:2,2}.node{stroke:#000;stroke-width:1.5;fill:none}text{font:11px sans-serif}";

/// Any polygon-like input to [`render_base_diagram`].
pub enum BaseDiagram<'a> {
    Triangle(&'a GirdledTriangle),
    Pavilion(&'a PavilionPolygon),
    Vianna(&'a ViannaTriangle),
}

struct Stroke {
    class: &'static str,
    a: (f64, f64),
    b: (f64, f64),
}

fn bounds(points: &[(f64, f64)]) -> (f64, f64, f64, f64) {
    let xs = points.iter().map(|p| p.0);
    let ys = points.iter().map(|p| p.1);
    (
        xs.clone().fold(f64::INFINITY, f64::min),
        ys.clone().fold(f64::INFINITY, f64::min),
        xs.fold(f64::NEG_INFINITY, f64::max),
        ys.fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Where the ray `v + t d` leaves the segment `a b`, as `t`.
fn ray_exit(v: &RationalPoint, d: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Rational {
    let e = b.sub(a);
    a.sub(v).cross(&e) / d.cross(&e)
}

pub fn render_base_diagram(diagram: &BaseDiagram, spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let half = Rational::new(1, 2);
    let mut strokes = Vec::new();
    let mut nodes = Vec::new();
    let mut labels = Vec::new();
    let mut corners: Vec<RationalPoint> = Vec::new();
    match diagram {
        BaseDiagram::Triangle(t) => {
            let [o, apex, top] = &t.vertices;
            corners.extend([o.clone(), apex.clone(), top.clone()]);
            strokes.push(Stroke { class: "toric", a: pt(o), b: pt(top) });
            strokes.push(Stroke { class: "toric", a: pt(o), b: pt(apex) });
            strokes.push(Stroke { class: "girdle", a: pt(apex), b: pt(top) });
            if t.p > BigInt::from(1) {
                let d = RationalPoint::new(Rational::from(&t.p), Rational::from(&t.q));
                let node = o.add(&d.scale(&(ray_exit(o, &d, apex, top) * &half)));
                strokes.push(Stroke { class: "cut", a: pt(o), b: pt(&node) });
                nodes.push(pt(&node));
            }
        }
        BaseDiagram::Pavilion(pav) => {
            corners.extend(pav.vertices.iter().cloned());
            for e in &pav.edges {
                let class = if e.kind == EdgeKind::Girdle { "girdle" } else { "toric" };
                strokes.push(Stroke { class, a: pt(&e.from), b: pt(&e.to) });
            }
        }
        BaseDiagram::Vianna(v) => {
            corners.extend(v.vertices.iter().cloned());
            for i in 0..3 {
                let (a, b) = (&v.vertices[(i + 1) % 3], &v.vertices[(i + 2) % 3]);
                strokes.push(Stroke { class: "toric", a: pt(a), b: pt(b) });
            }
            for i in 0..3 {
                if v.triple.p(i + 1) <= &BigInt::from(1) {
                    continue;
                }
                let o = &v.vertices[i];
                let d = v.nodes[i].to_point();
                let t = ray_exit(o, &d, &v.vertices[(i + 1) % 3], &v.vertices[(i + 2) % 3]);
                let node = o.add(&d.scale(&(t * &half)));
                strokes.push(Stroke { class: "cut", a: pt(o), b: pt(&node) });
                nodes.push(pt(&node));
                labels.push((pt(o), format!("{}²", v.triple.p(i + 1))));
            }
        }
    }
    let pts: Vec<(f64, f64)> = corners.iter().map(pt).collect();
    let (x0, y0, x1, y1) = bounds(&pts);
    let extent = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let mut c = Canvas::new(spec.scale / extent, x0, y0, x1, y1);
    for s in &strokes {
        c.line(s.class, s.a, s.b);
    }
    for n in &nodes {
        c.cross(*n);
    }
    for p in &corners {
        c.text("vertex", pt(p), 4.0, -4.0, &format!("({}, {})", p.x, p.y));
    }
    for (at, s) in &labels {
        c.text("det", *at, 4.0, 12.0, s);
    }
    Ok(c.finish(BASE_STYLE))
}

pub fn render_markov_tree(nodes: &[TreeNode]) -> String {
    let mut depth = vec![0usize; nodes.len()];
    for (k, n) in nodes.iter().enumerate() {
        depth[k] = n.parent.map_or(0, |p| depth[p] + 1);
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let mut slot = vec![0usize; max_depth + 1];
    let mut pos = vec![(0.0, 0.0); nodes.len()];
    for k in 0..nodes.len() {
        let width = depth.iter().filter(|&&d| d == depth[k]).count() as f64;
        pos[k] = ((slot[depth[k]] as f64 + 0.5) / width, -(depth[k] as f64));
        slot[depth[k]] += 1;
    }
    let mut c = Canvas::new(160.0, 0.0, -(max_depth as f64), 4.0, 0.0);
    let stretch = |p: (f64, f64)| (p.0 * 4.0, p.1);
    for (k, n) in nodes.iter().enumerate() {
        if let Some(parent) = n.parent {
            c.line("edge", stretch(pos[parent]), stretch(pos[k]));
        }
    }
    for (k, n) in nodes.iter().enumerate() {
        c.text("triple", stretch(pos[k]), -30.0, -4.0, &n.triple.to_string());
    }
    c.finish(".edge{stroke:#888}text{font:10px sans-serif}")
}
