//! The `sts` binary: exit codes, CSV layout, determinism and config round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use sts_core::cli::RunConfig;

fn sts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sts")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Column values of a one-table CSV keyed by header name.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn tunnel_row_agrees_with_oracle() {
    let out = sts(&["tunnel", "--v0", "100", "--emax", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = parse_csv(&stdout(&out));
    assert_eq!(h.last().unwrap(), "flag");
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    let closed = num(&r[column(&h, "closed_im")]);
    let oracle = num(&r[column(&h, "oracle_im")]);
    assert!((closed - oracle).abs() <= 1e-6 * closed);
    assert_eq!(num(&r[column(&h, "closed_re")]), 0.0);
    assert_eq!(r[column(&h, "flag")], "ok");
}

#[test]
fn tunnel_starts_at_tau0() {
    let out = sts(&["tunnel", "--v0", "100", "--emax", "0.01"]);
    let (h, rows) = parse_csv(&stdout(&out));
    let ratio = num(&rows[0][column(&h, "closed_im")]) / num(&rows[0][column(&h, "tau0")]);
    assert!((0.99997..=1.00003).contains(&ratio), "{ratio}");
}

#[test]
fn exit_codes() {
    let bad_window = sts(&["tunnel", "--emax", "0"]);
    assert_eq!(bad_window.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_window.stderr).contains("domain"));
    assert_eq!(sts(&["tunnel", "--emax", "150"]).status.code(), Some(2));
    assert_eq!(sts(&["verify", "--length", "0"]).status.code(), Some(2));
    assert_eq!(sts(&["verify", "--mass", "abc"]).status.code(), Some(2));
    assert_eq!(sts(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sts(&["reference", "--emax", "100"]).status.code(), Some(2));
    // one subdivision cannot meet a 1e-15 target
    let starved = sts(&["tunnel", "--emax", "10", "--max-subdivisions", "1", "--rel-tol", "1e-15", "--abs-tol", "1e-300"]);
    assert_eq!(starved.status.code(), Some(3));
    assert!(stdout(&starved).trim_end().ends_with(",noconv"));
}

#[test]
fn verify_default_and_coarse() {
    let out = sts(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));

    let coarse = sts(&["verify", "--nt", "8"]);
    assert_eq!(coarse.status.code(), Some(0), "{}", stdout(&coarse));
    assert!(stdout(&coarse).contains("orders"));
}

#[test]
fn sweep_rows_and_markers() {
    let out = sts(&["sweep", "--k0l", "30pi", "--kgrid", "0.5,1,1.25"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = parse_csv(&stdout(&out));
    assert_eq!(
        h,
        ["k_over_k0", "re_T_sts_over_tau0", "im_T_sts_over_tau0", "tau_phase", "tau_dwell", "tau_larmor", "tau_bl", "flag"]
    );
    let half = &rows[0];
    assert_eq!(num(&half[1]), 0.0);
    let (im, larmor) = (num(&half[2]), num(&half[5]));
    assert!((im - larmor).abs() / larmor < 0.05, "{im} vs {larmor}");
    assert_eq!(rows[1].last().unwrap(), "singular");
    assert!(rows[1][1..7].iter().all(String::is_empty));
    assert!(num(&rows[2][1]) > 0.0);
    assert_eq!(rows[2].last().unwrap(), "ok");
}

fn larmor_mismatch(k0l: &str) -> f64 {
    let out = sts(&["sweep", "--k0l", k0l, "--kgrid", "0.2:0.8:0.2"]);
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 4);
    rows.iter().map(|r| (num(&r[2]) - num(&r[5])).abs() / num(&r[5])).fold(0.0, f64::max)
}

#[test]
fn weak_barrier_disagrees_with_larmor() {
    let weak = larmor_mismatch("pi/10");
    let strong = larmor_mismatch("30pi");
    assert!(weak > 0.2 && weak > 5.0 * strong, "weak {weak}, strong {strong}");
}

#[test]
fn sweep_writes_one_file_per_strength() {
    let base = scratch("sweep.csv");
    let out = sts(&["sweep", "--k0l", "pi/10,3pi", "--kgrid", "0.1:0.9:0.4", "--out", base.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    for name in ["sweep_k0l_0.314159.csv", "sweep_k0l_9.424778.csv"] {
        let text = std::fs::read_to_string(base.with_file_name(name)).unwrap();
        assert_eq!(text.lines().count(), 4, "{name}");
    }
}

#[test]
fn density_csv_is_long_format_and_deterministic() {
    let args = ["density", "--nx", "3", "--nt", "4", "--emax", "1"];
    let a = sts(&args);
    let b = sts(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(!text.contains('\r'));
    let (h, rows) = parse_csv(&text);
    assert_eq!(h, ["x", "t", "rho", "rho_err", "flag"]);
    assert_eq!(rows.len(), 12);
    for r in &rows {
        assert!(num(&r[2]) >= 0.0);
        // 17 significant digits
        let mantissa = r[2].split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').len(), 18);
    }
}

#[test]
fn density_decays_with_oscillation() {
    let out = sts(&["density", "--xrange=-1,0", "--nx", "2", "--trange", "0,15", "--nt", "121"]);
    let (_, rows) = parse_csv(&stdout(&out));
    let series: Vec<f64> = rows.iter().filter(|r| num(&r[0]) == 0.0).map(|r| num(&r[2])).collect();
    assert_eq!(series.len(), 121);
    let peaks: Vec<f64> = series.windows(3).filter(|w| w[1] > w[0] && w[1] >= w[2]).map(|w| w[1]).collect();
    assert!(!peaks.is_empty());
    let mut last = series[0];
    for p in peaks {
        assert!(p < last, "peak {p} after {last}");
        last = p;
    }
}

#[test]
fn reference_row() {
    let out = sts(&["reference", "--v0", "100", "--emax", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = parse_csv(&stdout(&out));
    let r = &rows[0];
    let bl = num(&r[column(&h, "tau_bl")]);
    let c = (num(&r[column(&h, "tau_complex_re")]), num(&r[column(&h, "tau_complex_im")]));
    assert!((c.0.hypot(c.1) - bl).abs() <= 1e-14 * bl);
}

#[test]
fn config_file_and_flag_precedence() {
    let path = scratch("run.cfg");
    std::fs::write(&path, "v0 = 50\nemax = 5\n").unwrap();
    let from_file = sts(&["tunnel", "--config", path.to_str().unwrap()]);
    let (h, rows) = parse_csv(&stdout(&from_file));
    assert_eq!(num(&rows[0][column(&h, "v0")]), 50.0);
    let overridden = sts(&["tunnel", "--config", path.to_str().unwrap(), "--v0", "80"]);
    let (h, rows) = parse_csv(&stdout(&overridden));
    assert_eq!(num(&rows[0][column(&h, "v0")]), 80.0);
    assert_eq!(num(&rows[0][column(&h, "emax")]), 5.0);
}

#[test]
fn echoed_config_reparses() {
    let out = sts(&["--echo-config", "sweep", "--k0l", "pi/10,30pi", "--kgrid", "0.1,0.3", "--abs-tol", "1e-13"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let cfg = RunConfig::parse(&text).unwrap();
    assert_eq!(cfg.k0l, vec![std::f64::consts::PI / 10.0, 30.0 * std::f64::consts::PI]);
    let path = scratch("echo.cfg");
    std::fs::write(&path, &text).unwrap();
    let again = sts(&["--config", path.to_str().unwrap(), "--echo-config", "verify"]);
    assert_eq!(stdout(&again), text);
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, 1e-300f64..1e-3, Just(0.1), Just(1.0 / 3.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_text_round_trips(
        mass in finite(), hbar in finite(), v0 in finite(), emax in finite(),
        k0l in prop::collection::vec(finite(), 0..4),
        x in (finite(), finite()),
        nx in 0usize..10_000,
        rel_tol in 1e-15f64..1e-2,
        out in prop::option::of("[a-z][a-z0-9_./]{0,12}"),
    ) {
        let cfg = RunConfig {
            mass,
            hbar,
            v0,
            emax,
            k0l,
            xrange: x,
            nx,
            rel_tol,
            out: out.map(PathBuf::from),
            ..RunConfig::default()
        };
        prop_assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}
