use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use doublecover::bounds::theorem_constant;
use doublecover::cli::doc::{pieces_doc, PathDoc};
use doublecover::cli::{load_path_doc, EXIT_COVERING, EXIT_NOT_DOUBLY_COVERED, EXIT_OK, EXIT_UNCOVERED_SEGMENT, EXIT_USAGE, EXIT_VERIFY};
use doublecover::covering::{BBox, Covering};
use doublecover::geom::{Disc, Point};
use doublecover::pathgen::build_gamma;
use doublecover::subcover::build_chain;
use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doublecover")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn file(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write_covering(dir: &TempDir, name: &str, centres: &[(f64, f64)], bbox: [f64; 4]) -> String {
    let discs: Vec<Disc> = centres.iter().map(|&(x, y)| Disc::unit(Point::new(x, y))).collect();
    let c = Covering::new(discs, BBox::new(bbox[0], bbox[1], bbox[2], bbox[3])).unwrap();
    let p = file(dir, name);
    std::fs::write(&p, c.to_json()).unwrap();
    p
}

fn perturbed(dir: &TempDir) -> String {
    let p = file(dir, "cover.json");
    let o = bin(&["gen", "perturbed", "--seed", "7", "--bbox", "0", "0", "20", "20", "--out", &p]);
    assert_eq!(code(&o), EXIT_OK);
    p
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&bin(&["--help"])), EXIT_OK);
    assert_eq!(code(&bin(&["--version"])), EXIT_OK);
    assert_eq!(code(&bin(&["path", "--help"])), EXIT_OK);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&bin(&[])), EXIT_USAGE);
    assert_eq!(code(&bin(&["nosuch"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["bounds", "--grid-step", "abc"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["bounds", "--grid-step", "-1"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["path", "--covering", "x.json", "--from", "1"])), EXIT_USAGE);
}

#[test]
fn gen_lattice_checks_coverage() {
    let dir = TempDir::new().unwrap();
    let ok = bin(&["gen", "lattice", "--spacing", "1.41421356", "--bbox", "0", "0", "10", "10", "--out", &file(&dir, "a.json")]);
    assert_eq!(code(&ok), EXIT_OK);
    let summary = json(&ok);
    assert_eq!(summary["report"]["pass"], true);

    let bad = bin(&["gen", "lattice", "--spacing", "1.5", "--bbox", "0", "0", "10", "10", "--out", &file(&dir, "b.json")]);
    assert_eq!(code(&bad), EXIT_COVERING);
    let summary = json(&bad);
    assert_eq!(summary["report"]["min_count"], 0);
    assert!(summary["report"]["worst_point"]["x"].is_number());
}

#[test]
fn gen_without_out_prints_the_covering() {
    let o = bin(&["gen", "random", "--count", "60", "--seed", "2", "--bbox", "0", "0", "6", "6"]);
    assert_eq!(code(&o), EXIT_OK);
    let v = json(&o);
    assert_eq!(v["radius"], 1.0);
    assert!(v["discs"].as_array().unwrap().len() >= 60);
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"pass\": true"));
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (file(&dir, "a.json"), file(&dir, "b.json"));
    for p in [&a, &b] {
        assert_eq!(code(&bin(&["gen", "perturbed", "--seed", "7", "--out", p])), EXIT_OK);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn path_round_trip() {
    let dir = TempDir::new().unwrap();
    let cover = perturbed(&dir);
    let out = file(&dir, "path.json");
    let o = bin(&["path", "--covering", &cover, "--from", "4.5", "5.1", "--to", "15.2", "14.4", "--out", &out]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = load_path_doc(Path::new(&out)).unwrap();
    let measured = doc.curve().length().unwrap();
    assert!((measured - doc.length).abs() <= 1e-9);
    let checks = doc.checks.as_ref().unwrap();
    assert!(checks.pass && checks.doubly_covered.pass);
    let pt = |v: Option<[f64; 2]>| v.map(|[x, y]| Point::new(x, y)).unwrap();
    let span = pt(doc.a_prime).dist(pt(doc.b_prime));
    assert!(doc.length <= theorem_constant() * span + 1e-9);
    assert_eq!(doc.from, Some([4.5, 5.1]));

    let v = bin(&["verify", "--covering", &cover, "--path", &out]);
    assert_eq!(code(&v), EXIT_OK);
    assert_eq!(json(&v)["path"]["length_ok"], true);
}

#[test]
fn path_rejects_singly_covered_endpoint() {
    let dir = TempDir::new().unwrap();
    let cover = write_covering(&dir, "c.json", &[(0.0, 0.0), (1.2, 0.0)], [-1.0, -1.0, 2.0, 1.0]);
    let o = bin(&["path", "--covering", &cover, "--from", "0.6", "0", "--to", "-0.8", "0"]);
    assert_eq!(code(&o), EXIT_NOT_DOUBLY_COVERED);
    assert!(String::from_utf8_lossy(&o.stderr).contains("endpoint B"));
}

#[test]
fn path_rejects_gap_on_segment() {
    let dir = TempDir::new().unwrap();
    let cover = write_covering(
        &dir,
        "c.json",
        &[(0.0, 0.0), (0.5, 0.0), (0.25, 0.4), (6.0, 0.0), (6.5, 0.0), (6.25, 0.4)],
        [-1.0, -1.0, 7.5, 1.5],
    );
    let o = bin(&["path", "--covering", &cover, "--from", "0.25", "0", "--to", "6.25", "0"]);
    assert_eq!(code(&o), EXIT_UNCOVERED_SEGMENT, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bounds_and_worstpair_report_values() {
    let b = bin(&["bounds"]);
    assert_eq!(code(&b), EXIT_OK);
    let v = json(&b);
    assert!((v["value"].as_f64().unwrap() - theorem_constant()).abs() <= 1e-6);
    assert!((v["argmax"][0].as_f64().unwrap() - PI / 3.0).abs() <= 1e-4);

    let w = bin(&["worstpair"]);
    assert_eq!(code(&w), EXIT_OK);
    let v = json(&w);
    let r = v["ratio"].as_f64().unwrap();
    assert!((1.578..=1.582).contains(&r));
    assert_eq!(v["candidates"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_reports_a_polyline() {
    let dir = TempDir::new().unwrap();
    let cover = perturbed(&dir);
    let o = bin(&["oracle", "--covering", &cover, "--from", "4.5", "5.1", "--to", "15.2", "14.4"]);
    assert_eq!(code(&o), EXIT_OK);
    let v = json(&o);
    let len = v["length"].as_f64().unwrap();
    let d = Point::new(4.5, 5.1).dist(Point::new(15.2, 14.4));
    assert!(len >= d && len <= 2.0 * d);
    let poly = v["polyline"].as_array().unwrap();
    assert_eq!(poly.first().unwrap()[0], 4.5);
    assert_eq!(poly.last().unwrap()[1], 14.4);
}

#[test]
fn verify_flags_a_bad_path() {
    let dir = TempDir::new().unwrap();
    let cover = file(&dir, "lat.json");
    bin(&["gen", "lattice", "--bbox", "0", "0", "10", "10", "--out", &cover]);
    // straight through a lattice centre, which only one disc covers
    let s = std::f64::consts::SQRT_2;
    let doc = serde_json::json!({
        "length": 2.0,
        "pieces": [{"type": "seg", "from": [3.0 * s - 1.0, 3.0 * s], "to": [3.0 * s + 1.0, 3.0 * s]}],
    });
    let p = file(&dir, "bad.json");
    std::fs::write(&p, doc.to_string()).unwrap();
    let o = bin(&["verify", "--covering", &cover, "--path", &p]);
    assert_eq!(code(&o), EXIT_VERIFY);
    assert_eq!(json(&o)["path"]["report"]["min_count"], 1);
}

fn semicircle_doc(dir: &TempDir) -> PathBuf {
    let doc = serde_json::json!({
        "length": PI,
        "pieces": [{"type": "arc", "center": [0.0, 0.0], "radius": 1.0, "from_angle": PI, "to_angle": 0.0, "ccw": false}],
    });
    let p = dir.path().join("semi.json");
    std::fs::write(&p, doc.to_string()).unwrap();
    p
}

#[test]
fn render_single_disc() {
    let dir = TempDir::new().unwrap();
    let cover = write_covering(&dir, "one.json", &[(0.0, 0.0)], [-1.5, -1.5, 1.5, 1.5]);
    let path = semicircle_doc(&dir);
    let args = ["render", "--covering", &cover, "--path", path.to_str().unwrap()];
    let o = bin(&args);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 1);
    assert_eq!(svg.matches(r#"class="gamma""#).count(), 1);
    assert_eq!(bin(&args).stdout, svg.as_bytes());
}

/// Endpoints of every drawing command in an SVG path, in world coordinates.
fn path_vertices(d: &str) -> Vec<(f64, f64)> {
    let tokens: Vec<&str> = d.split_whitespace().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < tokens.len() {
        let skip = match tokens[k] {
            "M" | "L" => 0,
            "A" => 5,
            t => panic!("unexpected token {t}"),
        };
        let x: f64 = tokens[k + 1 + skip].parse().unwrap();
        let y: f64 = tokens[k + 2 + skip].parse().unwrap();
        out.push((x, -y));
        k += 3 + skip;
    }
    out
}

#[test]
fn two_run_path_crosses_the_line_once() {
    // one disc below the line and one above give runs on opposite sides
    let discs = vec![Disc::unit(Point::new(0.0, -0.3)), Disc::unit(Point::new(1.5, 0.3))];
    let c = Covering::new(discs, BBox::new(-1.5, -1.5, 3.0, 1.5)).unwrap();
    let x_a = -(1.0f64 - 0.09).sqrt();
    let x_b = 1.5 + (1.0f64 - 0.09).sqrt();
    let chain = build_chain(&c, 0.0, x_a, x_b).unwrap();
    let (gamma, runs) = build_gamma(&chain);
    assert_eq!(runs.len(), 2);

    let dir = TempDir::new().unwrap();
    let cover = file(&dir, "two.json");
    std::fs::write(&cover, c.to_json()).unwrap();
    let doc = PathDoc {
        length: gamma.length().unwrap(),
        pieces: pieces_doc(&gamma),
        from: None,
        to: None,
        a_prime: Some([x_a, 0.0]),
        b_prime: Some([x_b, 0.0]),
        ratio: None,
        total_length: None,
        connectors: Vec::new(),
        milestones: Vec::new(),
        chain: Vec::new(),
        gamma_pieces: Vec::new(),
        checks: None,
    };
    let p = file(&dir, "two_path.json");
    std::fs::write(&p, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = bin(&["render", "--covering", &cover, "--path", &p]);
    assert_eq!(code(&o), EXIT_OK);
    let svg = String::from_utf8(o.stdout).unwrap();
    let line = svg.lines().find(|l| l.contains(r#"class="gamma""#)).unwrap();
    let d = line.split(r#" d=""#).nth(1).unwrap().split('"').next().unwrap();
    let signs: Vec<f64> = path_vertices(d)
        .into_iter()
        .map(|(_, y)| y)
        .filter(|y| y.abs() > 1e-6)
        .map(f64::signum)
        .collect();
    let crossings = signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(crossings, 1, "{d}");
}
