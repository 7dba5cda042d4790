use std::collections::BTreeSet;
use std::process::Command;

use num_bigint::BigInt;
use pinstairs_core::atf::{vianna_triangle, ViannaTriangle};
use pinstairs_core::markov::{enumerate_tree, MarkovTriple, TreeNode};
use pinstairs_core::regulation::{predict_regulation, RegulationPrediction};
use pinstairs_core::staircase::{embeds, EmbeddingVerdict};
use pinstairs_core::Rational;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pinstairs").chain(args.iter().copied());
    let code = pinstairs::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["stair", "2", "1", "--alpha", "49/100", "--beta", "49/100"]), "Embeds (box i=0, sup 1/2 × 1/2)\n");
    assert_eq!(ok(&["markov", "companions", "29"]), "q ∈ {7, 22}\n");
    assert_eq!(ok(&["stair", "5", "1", "--alpha", "3", "--beta", "1/100"]), "OutsideVisibleRange (alpha ≥ sigma_5 = 2.987…)\n");
}

#[test]
fn other_verdicts_and_queries() {
    assert_eq!(ok(&["stair", "5", "1", "--alpha", "1/2", "--beta", "1/2"]), "DoesNotEmbed (inner corner 2/5 × 2/145)\n");
    assert_eq!(ok(&["stair", "2", "1", "--alpha", "1/100", "--beta", "3"]), "OutsideVisibleRange (beta ≥ sigma_2 = 2.914…)\n");
    assert_eq!(ok(&["markov", "companions", "2"]), "q ∈ {1}\n");
    assert_eq!(ok(&["capacity", "5", "1"]), "1/10 (0.1)\n");
    let branch = ok(&["markov", "branch", "5", "1", "--lo", "-3", "--hi", "3"]);
    assert!(branch.starts_with("{…, 2897, 194, 13, 1, 2, 29, 433, …}\n"), "{branch}");
    assert!(branch.contains("m_-1 = 13\n"));
    let wahl = ok(&["wahl", "29", "7"]);
    assert!(wahl.starts_with("chain [5,2,2,2,2,2,10,2,2,2]\n"));
    assert!(wahl.contains("culet C_7 triple (29, 5, 2) weight 10"));
    let two = ok(&["pack", "two", "2", "1", "1/20", "5", "1", "1/20"]);
    assert!(two.starts_with("Infeasible (p3 = 1)\n"), "{two}");
    assert!(two.contains("alpha1+alpha2 = 1/10 < 1/10  FAILS"));
    let three = ok(&["pack", "three", "5", "1", "1/30", "2", "1", "1/30", "1", "1", "1/10"]);
    assert!(three.starts_with("Feasible\n"));
    let reg = ok(&["regulation", "5", "1"]);
    assert!(reg.contains("ruling {C2, C3, C4} + E at C3, 3 contractions"));
    assert!(ok(&["regulation", "2", "1"]).contains("no broken rulings"));
    let dot = ok(&["regulation", "29", "7", "--dot"]);
    assert_eq!(dot.matches("graph G {").count(), 2);
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["stair", "5", "1", "--alpha", "0.3", "--beta", "1/2"]);
    assert_eq!(code, 2);
    assert!(err.contains("--alpha") && err.contains("decimal"), "{err}");
    let (code, _, err) = run(&["stair", "5", "1", "--beta", "1/2"]);
    assert_eq!(code, 2);
    assert!(err.contains("--alpha"), "{err}");
    let (code, _, err) = run(&["stair", "5", "1", "--svg", "x.svg"]);
    assert_eq!(code, 2);
    assert!(err.contains("--steps"), "{err}");
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["stair", "4", "1", "--alpha", "1/3", "--beta", "1/3"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = run(&["atf", "vianna", "1", "2", "3"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["markov", "tree", "--depth", "31"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["markov", "branch", "2", "1", "--lo", "3", "--hi", "1"]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("stair"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_pinstairs");
    let o = Command::new(bin).args(["markov", "companions", "29"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "q ∈ {7, 22}\n");
    let o = Command::new(bin).args(["capacity", "6", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(bin).args(["capacity", "x", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_round_trips() {
    let v: EmbeddingVerdict = serde_json::from_str(&ok(&["stair", "5", "1", "--alpha", "1/2", "--beta", "1/2", "--json"])).unwrap();
    assert_eq!(v, embeds(&b(5), &b(1), &r("1/2"), &r("1/2")).unwrap());
    let nodes: Vec<TreeNode> = serde_json::from_str(&ok(&["markov", "tree", "--depth", "5", "--json"])).unwrap();
    assert_eq!(nodes, enumerate_tree(5).unwrap());
    let reg: RegulationPrediction = serde_json::from_str(&ok(&["regulation", "29", "7", "--json"])).unwrap();
    assert_eq!(reg, predict_regulation(&b(29), &b(7)).unwrap());
    let t: ViannaTriangle = serde_json::from_str(&ok(&["atf", "vianna", "5", "2", "1", "--json"])).unwrap();
    assert_eq!(t, vianna_triangle(&MarkovTriple::new(5, 2, 1).unwrap()).unwrap());
    let w: serde_json::Value = serde_json::from_str(&ok(&["wahl", "5", "1", "--json"])).unwrap();
    assert_eq!(w["chain"], serde_json::json!([7, 2, 2, 2]));
    assert_eq!(w["inverse"][2][2], "-26/25");
    assert_eq!(w["culet"]["weight"], 7);
}

fn svg(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.svg");
    let mut argv: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    argv.extend(["--svg", &p]);
    ok(&argv);
    std::fs::read_to_string(&path).unwrap()
}

fn attr_pairs(doc: &str) -> BTreeSet<(Rational, Rational)> {
    doc.lines()
        .filter(|l| l.contains(r#"class="corner""#))
        .map(|l| {
            let get = |key: &str| {
                let start = l.find(&format!("{key}=\"")).unwrap() + key.len() + 2;
                r(&l[start..start + l[start..].find('"').unwrap()])
            };
            (get("data-alpha"), get("data-beta"))
        })
        .collect()
}

fn set(pairs: &[(&str, &str)]) -> BTreeSet<(Rational, Rational)> {
    pairs.iter().map(|(a, c)| (r(a), r(c))).collect()
}

#[test]
fn staircase_svg_corners() {
    let doc = svg(&["stair", "2", "1", "--steps", "5"]);
    assert_eq!(attr_pairs(&doc), set(&[("1/2", "1/2"), ("5/2", "1/10"), ("1/10", "5/2"), ("29/10", "5/58"), ("5/58", "29/10")]));
    assert!(doc.contains(r#"class="volume""#) && doc.contains(r#"class="sigma""#));
    assert!(doc.contains("σ_2 = 2.914…"));

    let corners = attr_pairs(&svg(&["stair", "5", "1", "--steps", "6"]));
    assert!(corners.contains(&(r("2/5"), r("1/10"))));
    assert!(corners.contains(&(r("433/145"), r("29/2165"))));
    assert_eq!(corners.len(), 6);

    assert_eq!(attr_pairs(&svg(&["stair", "1", "1", "--steps", "1"])), set(&[("1", "1")]));
}

#[test]
fn svg_is_deterministic() {
    let a = svg(&["stair", "29", "7", "--steps", "7"]);
    let c = svg(&["stair", "29", "7", "--steps", "7"]);
    assert_eq!(a, c);
    assert_eq!(svg(&["atf", "vianna", "5", "2", "1"]), svg(&["atf", "vianna", "5", "2", "1"]));
}

#[test]
fn base_diagram_svgs() {
    let d = svg(&["atf", "vianna", "2", "1", "1"]);
    assert_eq!(d.matches(r#"class="cut""#).count(), 1);
    assert_eq!(d.matches(r#"class="node""#).count(), 1);
    assert_eq!(d.matches(r#"class="toric""#).count(), 3);
    let d = svg(&["atf", "vianna", "1", "1", "1"]);
    assert_eq!(d.matches(r#"class="cut""#).count(), 0);
    assert_eq!(d.matches(r#"class="toric""#).count(), 3);
    let d = svg(&["atf", "delta", "5", "1", "1", "1", "--pavilion", "1/100,3/200,1/60,1/70"]);
    // two sides, four new edges, one girdle
    assert_eq!(d.matches(r#"class="toric""#).count(), 6);
    assert_eq!(d.matches(r#"class="girdle""#).count(), 1);
    let d = svg(&["atf", "delta", "2", "1", "1/2", "1/2"]);
    assert_eq!(d.matches(r#"class="cut""#).count(), 1);
    assert_eq!(d.matches(r#"class="girdle""#).count(), 1);
}

#[test]
fn tree_svg_lists_every_triple() {
    let d = svg(&["markov", "tree", "--depth", "5"]);
    assert_eq!(d.matches(r#"class="triple""#).count(), 17);
    assert!(d.contains("(2, 169, 985)"));
}
