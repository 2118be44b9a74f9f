use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cdice_cli::config::{FileConfig, Settings};
use cdice_cli::{render_chart, Chart};
use cdice_core::policy::{solve, PolicyConfig, PolicyProblem, Scenario, SolverOptions};
use cdice_core::{ClimatePreset, PresetName};
use proptest::prelude::*;

const GOLDEN_ENV: &str = "CDICE_UPDATE_GOLDEN";

fn cdice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdice")).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--out-dir", dir.to_str().unwrap()]);
    cdice(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn listing(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os(GOLDEN_ENV).is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "{} differs from golden output", name);
}

#[test]
fn constant_series_is_a_horizontal_line() {
    let x: Vec<f64> = (0..=10).map(f64::from).collect();
    let chart = Chart::new("constant", "year", "value").line("flat", &x, &[1.0; 11]);
    let svg = render_chart(&chart).unwrap();
    assert_eq!(svg, render_chart(&chart).unwrap());
    let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let points = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    let ys: Vec<&str> = points.split(' ').map(|p| p.split(',').nth(1).unwrap()).collect();
    assert!(ys.windows(2).all(|w| w[0] == w[1]));
    golden("constant_series.svg", &svg);
}

#[test]
fn quadrupling_comparison_draws_one_line_per_preset() {
    let mut chart = Chart::new("abrupt 4xCO2", "years", "K");
    let presets = [
        PresetName::Dice2016,
        PresetName::Dice2016Bf,
        PresetName::Cdice,
        PresetName::CdiceHadgem,
        PresetName::CdiceGiss,
    ];
    for name in presets {
        let p = ClimatePreset::from_name(name);
        let dt = if p.dt_locked { p.native_dt as f64 } else { 1.0 };
        let r = cdice_core::scenarios::abrupt_4xco2(&p, 150.0, dt).unwrap();
        chart = chart.line(name.as_str(), &r.years, &r.t_at);
    }
    let svg = render_chart(&chart).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
    for name in presets {
        assert!(svg.contains(&format!(">{}</text>", name)));
    }
}

#[test]
fn bench_all_writes_four_tables_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["bench", "all", "--preset", "CDICE"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for t in ["test1", "test2", "test3", "test4"] {
        assert!(dir.path().join(format!("{}_cdice.csv", t)).is_file());
    }
    let summary = fs::read_to_string(dir.path().join("conformance_test1-test2-test3-test4_cdice.txt")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("PASS test1")));
    assert!(summary.lines().last().unwrap().ends_with("checks passed for CDICE"));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 11);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let o = run_in(dir, &["bench", "all", "--format", "both"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (la, lb) = (listing(a.path()), listing(b.path()));
    assert_eq!(la.len(), lb.len());
    for (pa, pb) in la.iter().zip(&lb) {
        assert_eq!(pa.file_name(), pb.file_name());
        if pa.file_name().unwrap() != "settings.toml" {
            assert_eq!(fs::read(pa).unwrap(), fs::read(pb).unwrap(), "{}", pa.display());
        }
    }
}

#[test]
fn rcp85_chart_has_both_envelopes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["bench", "test4", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("test4_cdice_concentration.svg")).unwrap();
    assert_eq!(svg.matches("<polygon class=\"band\"").count(), 2);
    assert!(svg.contains(">+-5%</text>") && svg.contains(">+-20%</text>"));
    assert!(!dir.path().join("test4_cdice.csv").exists());
}

#[test]
fn policy_csv_carries_the_solver_scc() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["policy", "bau", "--preset", "CDICE", "--rho", "0.015"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("policy_bau_cdice.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "scc").unwrap();
    let row = csv.lines().find(|l| l.starts_with("2020,")).unwrap();
    let from_csv: f64 = row.split(',').nth(col).unwrap().parse().unwrap();

    let cfg = PolicyConfig {
        scenario: Scenario::Bau,
        ..PolicyConfig::default()
    };
    let sol = solve(&PolicyProblem::from_config(&cfg).unwrap(), &SolverOptions::default()).unwrap();
    let expected = sol.trajectory.scc_at(2020.0).unwrap().unwrap();
    assert_eq!(from_csv, expected);
}

#[test]
fn eigen_prints_half_lives() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["calibrate", "eigen", "--preset", "DICE-2016"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0.6796 0.9959"), "{}", out);
    assert!(out.contains("half-lives 9.0 and 850.5 years"), "{}", out);
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["bench", "all", "--preset", "NOPE"]).status.code(), Some(1));
    assert_eq!(run_in(dir.path(), &["bench", "all", "--speed", "3"]).status.code(), Some(1));
    assert_eq!(run_in(dir.path(), &["bench", "test9"]).status.code(), Some(1));
    assert_eq!(run_in(dir.path(), &["bench", "test1", "--preset", "DICE-2016", "--dt", "1"]).status.code(), Some(1));
    assert_eq!(run_in(dir.path(), &["policy", "bau", "--format", "png"]).status.code(), Some(1));
}

#[test]
fn missing_fixtures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["bench", "test3", "--data-dir", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn nonconvergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["policy", "optimal", "--max-iterations", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "# comparison run\npreset = \"DICE-2016\"\nformat = \"both\"\nout_dir = \"{}\"\n",
            out.display()
        ),
    )
    .unwrap();
    let o = cdice(&["calibrate", "timescales", "--config", cfg.to_str().unwrap(), "--preset", "CDICE"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("timescales_cdice.csv").is_file());
    let used = FileConfig::parse(&fs::read_to_string(out.join("settings.toml")).unwrap()).unwrap();
    assert_eq!(used.preset.as_deref(), Some("CDICE"));
    assert_eq!(used.format.as_deref(), Some("both"));
}

fn settings() -> impl Strategy<Value = Settings> {
    let preset = prop::option::of(prop::sample::select(PresetName::ALL.to_vec()));
    let damage = prop::option::of(prop::sample::select(vec!["nordhaus", "howard-sterner", "zero"]));
    let fex = prop::option::of(prop_oneof![Just("linear".to_string()), (0.0..1.0f64).prop_map(|s| format!("proportional:{}", s))]);
    let format = prop::sample::select(vec!["csv", "svg", "both"]);
    (
        preset,
        prop::option::of(prop::sample::select(vec![1.0, 5.0, 10.0])),
        prop::option::of(1.0..2000.0f64),
        prop::option::of(0.0..0.1f64),
        damage,
        fex,
        format,
        prop::option::of(1usize..100_000),
        prop::option::of("[a-z]{1,8}(/[a-z]{1,8}){0,2}"),
    )
        .prop_map(|(preset, dt, horizon, rho, damage, fex, format, max_iterations, data_dir)| {
            let cfg = FileConfig {
                preset: preset.map(|p| p.as_str().to_string()),
                dt,
                horizon,
                rho,
                damage: damage.map(str::to_string),
                fex,
                data_dir: data_dir.map(PathBuf::from),
                out_dir: Some(PathBuf::from("results")),
                format: Some(format.to_string()),
                max_iterations,
            };
            Settings::from_config(&cfg).unwrap()
        })
}

proptest! {
    #[test]
    fn written_settings_parse_back(s in settings()) {
        let text = s.to_toml().unwrap();
        let back = Settings::from_config(&FileConfig::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}
