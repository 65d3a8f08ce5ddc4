use std::fs;
use std::path::Path;
use std::process::Command;

use clap::Parser;
use swarmsteer::cli::{execute, Cli, Command as Sub};
use swarmsteer::config::{ConfigError, SystemKind};
use swarmsteer::HarnessError;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swarmsteer"))
}

fn resolve(args: &[&str]) -> Result<swarmsteer::ExperimentConfig, HarnessError> {
    let cli = Cli::try_parse_from(args).expect("arguments parse");
    match cli.command {
        Sub::Single(a) => a.resolve(SystemKind::Single),
        Sub::Linear(a) => a.resolve(SystemKind::Linear),
        Sub::Bearing(a) => a.resolve(SystemKind::Bearing),
        Sub::Run(a) => a.run.resolve(a.system),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn documented_single_invocation_is_valid() {
    let cfg = resolve(&[
        "swarmsteer",
        "run",
        "--system",
        "single",
        "--mu",
        "0.1",
        "--d0",
        "10",
        "--runs",
        "1000",
        "--seed",
        "42",
    ])
    .unwrap();
    assert_eq!(cfg.system, SystemKind::Single);
    assert_eq!((cfg.runs, cfg.master_seed), (1000, 42));
    assert_eq!(cfg.points[0].controller.mu(), 0.1);
}

#[test]
fn range_errors_name_the_key() {
    let err = resolve(&["swarmsteer", "single", "--mu", "1.5"]).unwrap_err();
    assert!(matches!(
        err,
        HarnessError::Config(ConfigError::OutOfRange { ref key, .. }) if key == "mu"
    ));
    let err = resolve(&[
        "swarmsteer",
        "run",
        "--system",
        "linear",
        "--n",
        "10",
        "--sigma",
        "0.5",
    ])
    .unwrap_err();
    assert!(matches!(
        err,
        HarnessError::Config(ConfigError::OutOfRange { ref key, .. }) if key == "sigma"
    ));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.conf");
    fs::write(&path, "# bearing run\nmu = 0.2\nvisibility = 4\nruns = 3\n").unwrap();
    let cfg = resolve(&[
        "swarmsteer",
        "bearing",
        "--config",
        path.to_str().unwrap(),
        "--mu",
        "0.05",
    ])
    .unwrap();
    assert_eq!(cfg.runs, 3);
    assert_eq!(cfg.points[0].values.visibility, Some(4.0));
    assert_eq!(cfg.points[0].controller.mu(), 0.05);

    fs::write(&path, "mu = 0.2\nspeed = 4\n").unwrap();
    let err = resolve(&["swarmsteer", "single", "--config", path.to_str().unwrap()]).unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    assert!(err.to_string().contains("speed"), "{err}");
}

#[test]
fn binary_writes_outputs_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["single", "--runs", "5", "--d0", "4", "--plot", "--out-dir"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["trace.csv", "summary.csv", "plot.svg"] {
        assert!(out.join(f).exists(), "{f}");
    }

    let failed = bin()
        .args(["single", "--runs", "1", "--max-steps", "0"])
        .output()
        .unwrap();
    assert!(!failed.status.success());
    let msg = String::from_utf8_lossy(&failed.stderr);
    assert!(msg.contains("max-steps"), "{msg}");
}

#[test]
fn sweep_flags_vacuous_points_without_skipping() {
    let dir = tempfile::tempdir().unwrap();
    let cli = Cli::try_parse_from([
        "swarmsteer",
        "sweep-kdelta",
        "--runs",
        "20",
        "--d0-grid",
        "5,40",
        "--delta-grid",
        "0.1,2.0",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ])
    .unwrap();
    execute(cli).unwrap();
    let rows: Vec<swarmsteer::SummaryRecord> =
        swarmsteer::experiment::read_rows(&dir.path().join("summary.csv")).unwrap();
    assert_eq!(rows.len(), 4);
    // d0 = 5 lies inside the equilibrium radius for delta = 2
    let vac = &rows[1];
    assert!(vac.vacuous && vac.k_delta_bound.is_none());
    assert_eq!(vac.runs, 20);
    assert!(rows
        .iter()
        .filter(|r| !r.vacuous)
        .all(|r| r.k_delta_bound.is_some()));
    assert!(!dir.path().join("trace.csv").exists());
}

#[test]
fn sweep_requires_goal_seeking() {
    let cli = Cli::try_parse_from(["swarmsteer", "sweep-kdelta", "--direction", "1,0"]).unwrap();
    assert!(execute(cli).is_err());
}

fn svg_root_children(path: &Path) -> Vec<(String, Option<String>)> {
    let text = fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed svg");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    doc.descendants()
        .filter(|n| n.is_element())
        .map(|n| {
            (
                n.tag_name().name().to_string(),
                n.attribute("class").map(String::from),
            )
        })
        .collect()
}

#[test]
fn k_vs_delta_draws_two_curves_per_start_distance() {
    let dir = tempfile::tempdir().unwrap();
    let cli = Cli::try_parse_from([
        "swarmsteer",
        "sweep-kdelta",
        "--runs",
        "10",
        "--d0-grid",
        "10,20,30,40,50",
        "--delta-grid",
        "0.1,0.5,1.0",
        "--plot",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ])
    .unwrap();
    execute(cli).unwrap();
    let elems = svg_root_children(&dir.path().join("plot.svg"));
    let lines: Vec<_> = elems.iter().filter(|(t, _)| t == "polyline").collect();
    assert_eq!(lines.len(), 10);
    let theory = lines
        .iter()
        .filter(|(_, c)| c.as_deref() == Some("theory"))
        .count();
    assert_eq!(theory, 5);
}

#[test]
fn trajectory_of_uncontrolled_walker() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cli = Cli::try_parse_from([
        "swarmsteer",
        "single",
        "--mu",
        "1",
        "--runs",
        "1",
        "--max-steps",
        "2000",
        "--d0",
        "1000",
        "--trace-stride",
        "10",
        "--out-dir",
        out,
    ])
    .unwrap();
    execute(cli).unwrap();
    let svg = dir.path().join("traj.svg");
    let plot = Cli::try_parse_from([
        "swarmsteer",
        "plot",
        "--input",
        dir.path().join("trace.csv").to_str().unwrap(),
        "--kind",
        "trajectory",
        "--output",
        svg.to_str().unwrap(),
    ])
    .unwrap();
    execute(plot).unwrap();
    let elems = svg_root_children(&svg);
    let classes: Vec<_> = elems.iter().filter_map(|(_, c)| c.as_deref()).collect();
    for c in ["path", "start", "goal"] {
        assert!(classes.contains(&c), "missing {c}");
    }
}

#[test]
fn plot_rejects_empty_and_mismatched_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "# swarmsteer summary v1\n").unwrap();
    let out = dir.path().join("never.svg");
    let run = |input: &Path, kind: &str| {
        let cli = Cli::try_parse_from([
            "swarmsteer",
            "plot",
            "--input",
            input.to_str().unwrap(),
            "--kind",
            kind,
            "--output",
            out.to_str().unwrap(),
        ])
        .unwrap();
        execute(cli)
    };
    assert!(matches!(
        run(&empty, "k_vs_delta"),
        Err(HarnessError::EmptyCsv(_))
    ));
    assert!(!out.exists());

    let trace = dir.path().join("trace.csv");
    fs::write(
        &trace,
        "# swarmsteer trace v1 system=single seed=1\n\
         run_id,k,centroid_x,centroid_y,c,projection,distance_to_goal,terminal\n\
         0,0,1.0,2.0,,,,false\n",
    )
    .unwrap();
    assert!(matches!(
        run(&trace, "k_vs_delta"),
        Err(HarnessError::Schema { .. })
    ));
    assert!(!out.exists());
}
