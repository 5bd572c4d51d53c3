use std::process::{Command, Output};

use meskit::four_qubit::{ConvertibilityVerdict, IsolationVerdict, ReachabilityVerdict, StandardForm4};
use meskit::protocol::{MonotoneReport, SimulationReport};
use meskit::sep::SepCertificate;
use meskit::sweep::SweepReport;
use meskit::synth::Synthesized;
use meskit::three_qubit::{Classification, MesVerdict};
use meskit::FactoredState;
use serde::Deserialize;

const GHZ: &str = r#"{"amplitudes":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}"#;

fn meskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meskit"))
        .args(args)
        .env_remove("MESKIT_TOL_EQ")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn sampled(class: &str, seed: &str) -> String {
    let o = meskit(&["sample", "--class", class, "--count", "1", "--seed", seed]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<FactoredState> = meskit::json::from_str(&stdout(&o)).unwrap();
    meskit::json::to_string(&v[0]).unwrap()
}

fn parse<T: for<'de> Deserialize<'de>>(o: &Output) -> T {
    meskit::json::from_str(&stdout(o)).unwrap()
}

#[test]
fn sample_is_byte_identical_per_seed() {
    let a = meskit(&["sample", "--class", "4q-generic", "--count", "5", "--seed", "7"]);
    let b = meskit(&["sample", "--class", "4q-generic", "--count", "5", "--seed", "7"]);
    let c = meskit(&["sample", "--class", "4q-generic", "--count", "5", "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let states: Vec<FactoredState> = parse(&a);
    assert_eq!(states.len(), 5);
}

#[test]
fn classify_and_mes3() {
    let o = meskit(&["classify3", "-i", GHZ]);
    assert_eq!(o.status.code(), Some(0));
    let c: Classification = parse(&o);
    assert!((c.tangle - 1.0).abs() < 1e-12);

    let o = meskit(&["mes3", "-i", GHZ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(parse::<MesVerdict>(&o).in_mes);

    let o = meskit(&["mes3", "-i", &sampled("3q-w-x0pos", "1")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!parse::<MesVerdict>(&o).in_mes);
}

#[test]
fn four_qubit_verbs_and_exit_codes() {
    let generic = sampled("4q-generic", "3");
    let o = meskit(&["isolated4", "-i", &generic]);
    assert_eq!(o.status.code(), Some(0));
    assert!(parse::<IsolationVerdict>(&o).isolated);

    let o = meskit(&["reachable4", "-i", &generic]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!parse::<ReachabilityVerdict>(&o).reachable);

    let o = meskit(&["mes4", "-i", &generic]);
    assert_eq!(o.status.code(), Some(0));

    let shaped = sampled("4q-thm3-shape", "3");
    let o = meskit(&["convertible4", "-i", &shaped]);
    assert_eq!(o.status.code(), Some(0));
    let v: ConvertibilityVerdict = parse(&o);
    assert!(v.convertible && v.witness.is_some());

    let o = meskit(&["standard-form", "-i", &generic]);
    assert_eq!(o.status.code(), Some(0));
    parse::<StandardForm4>(&o);
}

#[test]
fn synth_output_simulates() {
    let dir = std::env::temp_dir().join(format!("meskit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("target.json");
    std::fs::write(&target, sampled("3q-ghz-random-z", "4")).unwrap();
    let out = dir.join("synth.json");
    let o = meskit(&[
        "synth",
        "-i",
        target.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s: Synthesized = meskit::json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let pr = meskit::json::to_string(&s.protocol).unwrap();

    #[derive(Deserialize)]
    struct Sim {
        simulation: SimulationReport,
        monotone: MonotoneReport,
    }
    let o = meskit(&["simulate", "-i", &pr]);
    assert_eq!(o.status.code(), Some(0));
    let sim: Sim = parse(&o);
    assert!(sim.simulation.deterministic && sim.monotone.ok);

    let o = meskit(&["synth", "-i", GHZ]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sep_check_named_group() {
    let ghz = r#"{"seed":"GHZ","locals":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
    let input = format!(r#"{{"source":{ghz},"target":{ghz},"group":"ghz-x"}}"#);
    let o = meskit(&["sep-check", "-i", &input]);
    assert_eq!(o.status.code(), Some(0));
    let c: SepCertificate = parse(&o);
    assert!(c.feasible && c.degenerate);
}

#[test]
fn sweep_summary_and_report() {
    let o = meskit(&[
        "sweep",
        "--verb",
        "isolated4",
        "--class",
        "4q-generic",
        "--count",
        "40",
        "--seed",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: SweepReport = parse(&o);
    assert_eq!(r.histogram.values().sum::<usize>(), 40);
    assert_eq!(r.count_of("isolated"), 40);

    let o = meskit(&[
        "sweep",
        "--verb",
        "simulate",
        "--class",
        "protocols",
        "--count",
        "30",
        "--format",
        "summary",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("deterministic=30"));

    // a verb applied to the wrong party count is an internal-consistency failure
    let o = meskit(&["sweep", "--verb", "mes3", "--class", "4q-generic", "--count", "2"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn rejected_inputs() {
    assert_eq!(meskit(&["mes4", "-i", r#"{"bad":1}"#]).status.code(), Some(3));
    assert_eq!(meskit(&["mes4"]).status.code(), Some(3));
    assert_eq!(
        meskit(&["mes4", "-i", "/nonexistent/x.json"]).status.code(),
        Some(3)
    );
    assert_eq!(meskit(&["sample", "--class", "nope"]).status.code(), Some(3));
    assert_eq!(
        meskit(&["sample", "--class", "3q-w", "--count", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        meskit(&["mes3", "-i", GHZ, "--tol-eq", "0"]).status.code(),
        Some(3)
    );
}

/// Zero-round protocol whose target has fidelity `1 − 1.25e-7` with the
/// source: not deterministic at the default `tol_eq`, deterministic at 1e-6.
fn near_identity_protocol() -> String {
    let id = "[[[1,0],[0,0]],[[0,0],[1,0]]]";
    let bumped = "[[[1,0],[0,0]],[[0,0],[1.001,0]]]";
    format!(
        r#"{{"source":{{"seed":"GHZ","locals":[{id},{id},{id}]}},"target":{{"seed":"GHZ","locals":[{bumped},{id},{id}]}},"rounds":[]}}"#
    )
}

#[test]
fn tolerance_overrides_change_the_verdict() {
    let pr = near_identity_protocol();
    assert_eq!(meskit(&["simulate", "-i", &pr]).status.code(), Some(2));
    assert_eq!(
        meskit(&["simulate", "-i", &pr, "--tol-eq", "1e-6"]).status.code(),
        Some(0)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_meskit"))
        .args(["simulate", "-i", &pr])
        .env("MESKIT_TOL_EQ", "1e-6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
