//! End-to-end tests of the `critscat` binary: example invocations, output
//! schemas, configuration layering, determinism, and exit codes.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;

use critscat_cli::config::{parse_flat, render_flat, ExperimentConfig};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_critscat"));
    // hermetic environment: host CRITSCAT_* variables must not leak in
    cmd.env_clear();
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn parse_csv(text: &str, expected_header: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(expected_header));
    lines
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("critscat-cli-{}-{name}", std::process::id()))
}

#[test]
fn sector_example_reports_sigma_one() {
    let out = run_ok(&["sector", "--d", "3", "--l", "0", "--gamma", "1.25"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sigma"], 1.0);
    assert_eq!(v["kappa"], 0.5);
    assert_eq!(v["class"]["Oscillatory"]["sigma"], 1.0);
    assert_eq!(v["harmonic_multiplicity"], 1);
    let tc = &v["threshold_classification"];
    assert_eq!(tc["oscillatory"], serde_json::json!([0]));
    assert_eq!(tc["first_decaying_exponent"], 1.0);
    assert_eq!(tc["first_decaying_multiplicity"], 3);
    assert_eq!(tc["next_order_scale"], "KSquaredLog");
}

#[test]
fn eigenvalues_example_ladder_ratio() {
    let out = run_ok(&["eigenvalues", "--sigma", "1", "--n", "6"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ratios = v["kappa_ratios"].as_array().unwrap();
    assert_eq!(ratios.len(), 5);
    let last = ratios.last().unwrap().as_f64().unwrap();
    let expected = (-PI).exp();
    assert!(
        (last - expected).abs() / expected < 1e-3,
        "ratio {last} vs {expected}"
    );
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 6);
}

#[test]
fn specfun_csv_matches_the_library() {
    let out = run_ok(&[
        "specfun",
        "--sigma",
        "1",
        "--function",
        "hankel1",
        "--inputs",
        "0.5,2,10",
    ]);
    let rows = parse_csv(&out, "input,re,im");
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let z = num_complex::Complex64::new(row[0], 0.0);
        let order = num_complex::Complex64::new(0.0, -1.0);
        let h = critscat::specfun::hankel1(order, z).unwrap();
        assert!((row[1] - h.re).abs() <= 1e-14 * h.norm());
        assert!((row[2] - h.im).abs() <= 1e-14 * h.norm());
    }
}

#[test]
fn wkb_csv_matches_the_library() {
    let out = run_ok(&[
        "wkb",
        "--gamma",
        "1.25",
        "--mu",
        "2",
        "--lambda-min",
        "1e-5",
        "--lambda-max",
        "1e-3",
        "--points",
        "3",
    ]);
    let rows = parse_csv(&out, "ln_lambda,integral");
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let lam = row[0].exp();
        let expected = critscat::scattering::wkb_phase_integral(1.25, 2.0, lam, 1.0).unwrap();
        assert!((row[1] - expected).abs() <= 1e-12 * expected.abs());
    }
}

#[test]
fn csv_output_is_byte_identical_across_runs_and_jobs() {
    let args = [
        "greens",
        "--sigma",
        "1",
        "--k-min",
        "1e-4",
        "--k-max",
        "1e-3",
        "--points-per-period",
        "8",
    ];
    let a = run_ok(&args);
    let b = run_ok(&args);
    let mut with_jobs: Vec<&str> = args.to_vec();
    with_jobs.extend_from_slice(&["--jobs", "4"]);
    let c = run_ok(&with_jobs);
    assert_eq!(a, b, "repeat runs must agree byte-for-byte");
    assert_eq!(a, c, "thread count must not affect output bytes");
    assert!(a.starts_with("ln_k,re_g_1.5_2,im_g_1.5_2,"), "{}", &a[..60]);
}

#[test]
fn config_file_env_and_flags_layer_in_order() {
    let path = temp_path("layer.cfg");
    std::fs::write(
        &path,
        "[sector]\nsigma = 1\n\n[potential]\nselection = pure\n\n[grid]\nk_min = 1e-4\nk_max = 1e-2\npoints_per_period = 12\n",
    )
    .unwrap();
    let cfg_arg = path.to_str().unwrap();

    let from_file = run_ok(&["phase-shift", "--config", cfg_arg]);
    let from_flags = run_ok(&[
        "phase-shift",
        "--sigma",
        "1",
        "--potential",
        "pure",
        "--k-min",
        "1e-4",
        "--k-max",
        "1e-2",
        "--points-per-period",
        "12",
    ]);
    assert_eq!(from_file, from_flags);

    // an environment override shrinks the sweep: fewer rows
    let out = bin()
        .args(["phase-shift", "--config", cfg_arg])
        .env("CRITSCAT_K_MIN", "1e-3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let env_rows = String::from_utf8(out.stdout).unwrap().lines().count();
    assert!(env_rows < from_file.lines().count());

    // a flag beats the same environment variable
    let out = bin()
        .args(["phase-shift", "--config", cfg_arg, "--k-min", "1e-4"])
        .env("CRITSCAT_K_MIN", "1e-3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), from_file);

    std::fs::remove_file(&path).ok();
}

#[test]
fn config_parse_errors_cite_line_and_key() {
    let path = temp_path("bad.cfg");
    std::fs::write(&path, "[grid]\nk_minn = 3\n").unwrap();
    let out = run(&["sector", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("k_minn"), "{err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn unknown_potential_is_a_usage_error() {
    let out = run(&["phase-shift", "--potential", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("compact-bump"), "{err}");
}

#[test]
fn potential_spec_files_are_accepted() {
    let path = temp_path("pot.json");
    std::fs::write(&path, r#"{"preset": "compact-bump", "amplitude": 0.25}"#).unwrap();
    let out = run_ok(&[
        "phase-shift",
        "--sigma",
        "1",
        "--potential",
        path.to_str().unwrap(),
        "--k-min",
        "1e-3",
        "--k-max",
        "1e-2",
        "--points-per-period",
        "8",
    ]);
    assert!(out.starts_with("ln_k,sigma_sr\n"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn output_directory_routes_artifacts() {
    let dir = temp_path("outdir");
    let out = bin()
        .args(["eigenvalues", "--sigma", "1", "--n", "4"])
        .env("CRITSCAT_OUT_DIR", dir.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "artifact should go to the directory");
    let text = std::fs::read_to_string(dir.join("eigenvalues.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["levels"], 4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn greens_solution_export_has_the_radial_schema() {
    let sol = temp_path("sol.csv");
    let csv_out = temp_path("greens.csv");
    let out = run(&[
        "greens",
        "--sigma",
        "1",
        "--k-min",
        "1e-3",
        "--k-max",
        "1e-2",
        "--points-per-period",
        "6",
        "--probes",
        "1.5,2;3,2",
        "--out",
        csv_out.to_str().unwrap(),
        "--solution-out",
        sol.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&sol).unwrap();
    let rows = parse_csv(&text, "r,re_u,im_u,re_du,im_du");
    // probe radii 1.5, 2, 3 deduplicated and sorted
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], 1.5);
    assert_eq!(rows[2][0], 3.0);
    std::fs::remove_file(&sol).ok();
    std::fs::remove_file(&csv_out).ok();
}

#[test]
fn verify_driver_reports_every_criterion_and_exits_clean() {
    let out = run(&["verify", "--preset", "compact-bump"]);
    assert!(
        out.status.success(),
        "verify failed: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    for id in 1..=12 {
        assert!(
            text.contains(&format!("criterion {id:02}")),
            "missing criterion {id}:\n{text}"
        );
    }
    assert_eq!(text.matches(" PASS ").count(), 12, "{text}");
    assert!(text.trim_end().ends_with("12/12 criteria passed"), "{text}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The flat config format is lossless: render then parse is the identity.
    #[test]
    fn flat_config_round_trips(
        dimension in 2u32..9,
        angular_momentum in 0u32..6,
        coupling in prop::option::of((1e-6f64..100.0, proptest::bool::ANY)),
        selection in "[a-z0-9./_-]{1,24}",
        k_min in 1e-9f64..1.0,
        k_max in 1e-9f64..1.0,
        points_per_period in 2usize..200,
        pairs in prop::collection::vec((0.3f64..50.0, 0.3f64..50.0), 0..5),
        dir in prop::option::of("[a-z0-9./_-]{1,24}"),
        max_fit_residual in 1e-9f64..10.0,
    ) {
        let mut cfg = ExperimentConfig::default();
        cfg.sector.dimension = dimension;
        cfg.sector.angular_momentum = angular_momentum;
        match coupling {
            Some((g, true)) => cfg.sector.gamma = Some(g),
            Some((s, false)) => cfg.sector.sigma = Some(s),
            None => {}
        }
        cfg.potential.selection = selection;
        cfg.grid.k_min = k_min;
        cfg.grid.k_max = k_max;
        cfg.grid.points_per_period = points_per_period;
        cfg.probes.pairs = pairs;
        cfg.output.dir = dir;
        cfg.tolerances.max_fit_residual = max_fit_residual;

        let text = render_flat(&cfg);
        let back = parse_flat(&text).expect("canonical rendering parses");
        prop_assert_eq!(back, cfg);
    }
}
