use std::path::{Path, PathBuf};
use std::process::Command;

use bergspec::report::{run, Report, RunOptions, TruncationRequest};
use bergspec::scenario::{BuiltIn, Scenario, Weights};
use bergspec::svg::{render_svg, Viewport};
use num_complex::Complex64;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn bergspec(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bergspec"))
        .args(args)
        .current_dir(scenarios())
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn strip_report() -> Report {
    let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap();
    let opts = RunOptions {
        ts: vec![1.0],
        lambdas: vec![Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0)],
        truncation: Some(TruncationRequest { t: 1.0, n: 30, n_max: 12 }),
        ..Default::default()
    };
    run(&s, Some("strip"), &opts).unwrap()
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let a = strip_report();
    let text = a.to_json();
    let back = Report::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    assert_eq!(strip_report().to_json(), text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["case"], "attracting_dominant");
    assert!(v["provenance"].get("wall_time_s").is_none());
}

#[test]
fn svg_has_one_element_per_component() {
    let r = strip_report();
    let op = r.regions.operators[0].spectrum.value().unwrap();
    let svg = render_svg(op, &Viewport::fit(op));
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    let drawn = svg.matches("<path class=").count() + svg.matches("<rect class=").count();
    assert_eq!(drawn, op.components().len());
    assert_eq!(svg.matches("class=\"axis\"").count(), 2);
}

#[test]
fn classify_prints_json() {
    let (code, out, _) = bergspec(&["classify", "-c", "strip.cfg", "--t", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["gamma_profile"]["gammas"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes_follow_the_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "p = 0.5\nmodel = strip_flow\na = 1\n").unwrap();
    let (code, _, err) = bergspec(&["classify", "-c", bad.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
    assert!(err.starts_with("bergspec: "));

    let (code, _, _) = bergspec(&["classify", "-c", "half_strip.cfg"]);
    assert_eq!(code, 3);

    let (code, _, _) = bergspec(&["verify", "-c", "strip.cfg", "--lambda", "0.5,2"]);
    assert_eq!(code, 0);

    let (code, _, _) = bergspec(&["verify", "-c", "strip.cfg", "--lambda", "zz"]);
    assert_eq!(code, 2);

    let (code, _, err) = bergspec(&[
        "truncate", "-c", "strip.cfg", "--N", "30", "--nmax", "12", "--tol-radius-ratio", "0.3",
    ]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("gelfand_radius_bound"));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("op.svg");
    let (code, _, err) = bergspec(&[
        "plot", "-c", "trident.cfg", "--region", "operator", "--t", "1", "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.contains("closed_annulus") || svg.contains("disk"));
}
