//! The `pinstairs` command line. [`run`] parses arguments, dispatches to
//! `pinstairs-core`, and returns the exit status: 0 on success, 1 on domain
//! errors, 2 on usage errors.

pub mod render;

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use pinstairs_core::atf::{delta_triangle, pavilion_polygon, vianna_triangle};
use pinstairs_core::hj::wahl_data;
use pinstairs_core::intersection::{culet_report, discrepancies, intersection_matrix, inverse_closed_form, CuletReport};
use pinstairs_core::markov::{
    branch_sequence, companions, compare_to_sigma, enumerate_tree, sigma_display, MarkovTriple, TREE_DEPTH_BOUND,
};
use pinstairs_core::regulation::predict_regulation;
use pinstairs_core::staircase::{
    embeds, pin_ball_capacity, three_ball_feasible, two_ball_feasible, Answer, EmbeddingVerdict, PackingVerdict,
};
use pinstairs_core::{Rational, Result as CoreResult};

use render::{render_base_diagram, render_markov_tree, render_staircase, BaseDiagram, RenderSpec};

#[derive(Parser, Debug)]
#[command(name = "pinstairs", version, about = "Exact pin-ellipsoid staircases, Markov triples and Wahl chains")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Markov tree, companions and branch sequences.
    Markov {
        #[command(subcommand)]
        cmd: MarkovCmd,
    },
    /// Wahl chain of p^2/(pq-1) with its intersection data.
    Wahl {
        p: BigInt,
        q: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// Pin-ellipsoid embedding query or staircase plot.
    Stair(StairArgs),
    /// Pin-ball capacity.
    Capacity { p: BigInt, q: BigInt },
    /// Two- and three-ball packings.
    Pack {
        #[command(subcommand)]
        cmd: PackCmd,
    },
    /// Almost toric base diagrams.
    Atf {
        #[command(subcommand)]
        cmd: AtfCmd,
    },
    /// Broken rulings predicted for a Wahl chain.
    Regulation {
        p: BigInt,
        q: BigInt,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand, Debug)]
enum MarkovCmd {
    Tree {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    Companions {
        p: BigInt,
        #[arg(long, default_value_t = TREE_DEPTH_BOUND)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    Branch {
        p: BigInt,
        q: BigInt,
        #[arg(long, allow_negative_numbers = true)]
        lo: i64,
        #[arg(long, allow_negative_numbers = true)]
        hi: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct StairArgs {
    p: BigInt,
    q: BigInt,
    #[arg(long, requires = "beta", required_unless_present = "svg")]
    alpha: Option<Rational>,
    #[arg(long, requires = "alpha")]
    beta: Option<Rational>,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "FILE", requires = "steps", conflicts_with_all = ["alpha", "json"])]
    svg: Option<PathBuf>,
    #[arg(long, requires = "svg")]
    steps: Option<usize>,
    /// Plot window [0, W] on both axes.
    #[arg(long, requires = "svg")]
    window: Option<Rational>,
    /// Pixels per unit.
    #[arg(long, requires = "svg")]
    scale: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum PackCmd {
    Two {
        p1: BigInt,
        q1: BigInt,
        a1: Rational,
        p2: BigInt,
        q2: BigInt,
        a2: Rational,
        #[arg(long)]
        json: bool,
    },
    Three {
        p1: BigInt,
        q1: BigInt,
        a1: Rational,
        p2: BigInt,
        q2: BigInt,
        a2: Rational,
        p3: BigInt,
        q3: BigInt,
        a3: Rational,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AtfCmd {
    Delta {
        p: BigInt,
        q: BigInt,
        alpha: Rational,
        beta: Rational,
        #[arg(long, value_delimiter = ',', value_name = "L1,...,Lm")]
        pavilion: Option<Vec<Rational>>,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    Vianna {
        p1: BigInt,
        p2: BigInt,
        p3: BigInt,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<pinstairs_core::Error> for Failure {
    fn from(e: pinstairs_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

fn json(out: Out, v: &impl Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::Domain(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn write_svg(out: Out, path: &PathBuf, svg: CoreResult<String>) -> Result<(), Failure> {
    std::fs::write(path, svg?)?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Cmd, out: Out) -> Result<(), Failure> {
    match cmd {
        Cmd::Markov { cmd } => markov(cmd, out),
        Cmd::Wahl { p, q, json: as_json } => wahl(&p, &q, as_json, out),
        Cmd::Stair(args) => stair(args, out),
        Cmd::Capacity { p, q } => {
            let c = pin_ball_capacity(&p, &q)?;
            writeln!(out, "{c} ({})", render::fmt6(c.to_f64()))?;
            Ok(())
        }
        Cmd::Pack { cmd } => pack(cmd, out),
        Cmd::Atf { cmd } => atf(cmd, out),
        Cmd::Regulation { p, q, json: as_json, dot } => regulation(&p, &q, as_json, dot, out),
    }
}

fn markov(cmd: MarkovCmd, out: Out) -> Result<(), Failure> {
    match cmd {
        MarkovCmd::Tree { depth, json: as_json, svg } => {
            let nodes = enumerate_tree(depth)?;
            if let Some(path) = svg {
                return write_svg(out, &path, Ok(render_markov_tree(&nodes)));
            }
            if as_json {
                return json(out, &nodes);
            }
            let mut level = vec![0usize; nodes.len()];
            for (k, n) in nodes.iter().enumerate() {
                level[k] = n.parent.map_or(0, |p| level[p] + 1);
                writeln!(out, "{}{}", "  ".repeat(level[k]), n.triple)?;
            }
            Ok(())
        }
        MarkovCmd::Companions { p, depth, json: as_json } => {
            let c = companions(&p, depth)?;
            if as_json {
                return json(out, &c);
            }
            if c.q_plus == c.q_minus {
                writeln!(out, "q ∈ {{{}}}", c.q_plus)?;
            } else {
                writeln!(out, "q ∈ {{{}, {}}}", c.q_plus, c.q_minus)?;
            }
            Ok(())
        }
        MarkovCmd::Branch { p, q, lo, hi, json: as_json } => {
            if lo > hi {
                return Err(Failure::Usage(format!("--lo {lo} exceeds --hi {hi}")));
            }
            let s = branch_sequence(&p, &q, lo, hi)?;
            if as_json {
                return json(out, &s);
            }
            writeln!(out, "{{…, {}, …}}", join(&s.values))?;
            for (k, v) in s.values.iter().enumerate() {
                writeln!(out, "m_{} = {v}", s.lo + k as i64)?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct WahlReport {
    #[serde(flatten)]
    data: pinstairs_core::hj::WahlData,
    matrix: Vec<Vec<i64>>,
    inverse: Vec<Vec<Rational>>,
    discrepancies: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    culet: Option<CuletReport>,
}

fn wahl(p: &BigInt, q: &BigInt, as_json: bool, out: Out) -> Result<(), Failure> {
    let data = wahl_data(p, q)?;
    let culet = if data.chain.is_empty() { None } else { Some(culet_report(p, q)?) };
    let report = WahlReport {
        matrix: intersection_matrix(&data),
        inverse: inverse_closed_form(&data),
        discrepancies: discrepancies(&data),
        culet,
        data,
    };
    if as_json {
        return json(out, &report);
    }
    writeln!(out, "chain {}", report.data.chain)?;
    writeln!(out, "e {}", join(&report.data.e))?;
    writeln!(out, "f {}", join(&report.data.f))?;
    writeln!(out, "M")?;
    for row in &report.matrix {
        writeln!(out, "  {}", join(row))?;
    }
    writeln!(out, "M^-1")?;
    for row in &report.inverse {
        writeln!(out, "  {}", join(row))?;
    }
    writeln!(out, "discrepancies {}", join(&report.discrepancies))?;
    if let Some(c) = &report.culet {
        writeln!(out, "culet C_{} triple {} weight {}", c.culet_index, c.triple, c.weight)?;
    }
    Ok(())
}

fn describe_verdict(p: &BigInt, alpha: &Rational, v: &EmbeddingVerdict) -> String {
    match v.answer {
        Answer::Embeds => {
            let b = v.witness_box.as_ref().expect("witness");
            format!("Embeds (box i={}, sup {} × {})", b.index, b.alpha_sup, b.beta_sup)
        }
        Answer::DoesNotEmbed => {
            let (a, b) = v.obstruction.as_ref().expect("corner");
            format!("DoesNotEmbed (inner corner {a} × {b})")
        }
        Answer::OutsideVisibleRange => {
            let side = if compare_to_sigma(p, alpha).is_lt() { "beta" } else { "alpha" };
            format!("OutsideVisibleRange ({side} ≥ sigma_{p} = {})", sigma_display(p))
        }
    }
}

fn stair(args: StairArgs, out: Out) -> Result<(), Failure> {
    let StairArgs { p, q, alpha, beta, json: as_json, svg, steps, window, scale } = args;
    if let Some(path) = svg {
        let mut spec = RenderSpec::staircase(steps.unwrap_or(1));
        if let Some(w) = window {
            spec.window = w;
        }
        if let Some(s) = scale {
            spec.scale = s;
        }
        spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        return write_svg(out, &path, render_staircase(&p, &q, &spec));
    }
    let (Some(alpha), Some(beta)) = (alpha, beta) else {
        return Err(Failure::Usage("--alpha and --beta are required".into()));
    };
    let v = embeds(&p, &q, &alpha, &beta)?;
    if as_json {
        return json(out, &v);
    }
    writeln!(out, "{}", describe_verdict(&p, &alpha, &v))?;
    Ok(())
}

fn print_packing(out: Out, v: &PackingVerdict, as_json: bool) -> Result<(), Failure> {
    if as_json {
        return json(out, v);
    }
    match &v.p3 {
        Some(p3) => writeln!(out, "{:?} (p3 = {p3})", v.status)?,
        None => writeln!(out, "{:?}", v.status)?,
    }
    for (k, b) in v.bounds.iter().enumerate() {
        let mark = if b.holds { "ok" } else { "FAILS" };
        let implied = if v.implied == Some(k) { " (implied)" } else { "" };
        writeln!(out, "  {} = {} < {}  {mark}{implied}", b.lhs, b.value, b.bound)?;
    }
    Ok(())
}

fn pack(cmd: PackCmd, out: Out) -> Result<(), Failure> {
    match cmd {
        PackCmd::Two { p1, q1, a1, p2, q2, a2, json: as_json } => {
            let v = two_ball_feasible(&p1, &q1, &a1, &p2, &q2, &a2)?;
            print_packing(out, &v, as_json)
        }
        PackCmd::Three { p1, q1, a1, p2, q2, a2, p3, q3, a3, json: as_json } => {
            let t = MarkovTriple::new(p1, p2, p3)?;
            let v = three_ball_feasible(&t, &[q1, q2, q3], &[a1, a2, a3])?;
            print_packing(out, &v, as_json)
        }
    }
}

fn atf(cmd: AtfCmd, out: Out) -> Result<(), Failure> {
    let spec = RenderSpec::base_diagram();
    match cmd {
        AtfCmd::Delta { p, q, alpha, beta, pavilion, svg, json: as_json } => {
            let tri = delta_triangle(&p, &q, &alpha, &beta)?;
            if let Some(lambdas) = pavilion {
                let pav = pavilion_polygon(&tri, &lambdas)?;
                if let Some(path) = svg {
                    return write_svg(out, &path, render_base_diagram(&BaseDiagram::Pavilion(&pav), &spec));
                }
                if as_json {
                    return json(out, &pav);
                }
                writeln!(out, "vertices {}", join(&pav.vertices))?;
                for e in &pav.edges {
                    writeln!(out, "  {:?} {} -> {} length {}", e.kind, e.from, e.to, e.length)?;
                }
                return Ok(());
            }
            if let Some(path) = svg {
                return write_svg(out, &path, render_base_diagram(&BaseDiagram::Triangle(&tri), &spec));
            }
            if as_json {
                return json(out, &tri);
            }
            writeln!(out, "vertices {}", join(&tri.vertices))?;
            writeln!(out, "normals {}, {}, girdle {} >= {}", tri.rho0, tri.rho_end, tri.gamma, tri.girdle_offset())?;
            Ok(())
        }
        AtfCmd::Vianna { p1, p2, p3, svg, json: as_json } => {
            let t = MarkovTriple::new(p1, p2, p3)?;
            let v = vianna_triangle(&t)?;
            if let Some(path) = svg {
                return write_svg(out, &path, render_base_diagram(&BaseDiagram::Vianna(&v), &spec));
            }
            if as_json {
                return json(out, &v);
            }
            for i in 0..3 {
                writeln!(
                    out,
                    "v{} = {}  det {}  node {}  opposite edge {}",
                    i + 1,
                    v.vertices[i],
                    v.determinant(i),
                    v.nodes[i],
                    v.edge_length(i)
                )?;
            }
            Ok(())
        }
    }
}

fn regulation(p: &BigInt, q: &BigInt, as_json: bool, dot: bool, out: Out) -> Result<(), Failure> {
    let r = predict_regulation(p, q)?;
    if as_json {
        return json(out, &r);
    }
    if dot {
        for b in &r.broken_rulings {
            write!(out, "{}", b.graph.to_dot())?;
        }
        return Ok(());
    }
    writeln!(out, "chain {} culet C_{} weight {}", r.chain, r.culet_index, r.weight)?;
    if r.broken_rulings.is_empty() {
        writeln!(out, "no broken rulings")?;
    }
    for b in &r.broken_rulings {
        let curves = join(b.curves.iter().map(|c| format!("C{c}")));
        writeln!(out, "ruling {{{curves}}} + E at C{}, {} contractions", b.attach_curve, b.contracted)?;
    }
    writeln!(out, "total contracted {} = m - 1", r.total_contracted())?;
    Ok(())
}
