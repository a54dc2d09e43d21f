use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn deltareg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltareg")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn summary(text: &str, key: &str) -> f64 {
    let prefix = format!("# {key},");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no summary line {key}"))
        .parse()
        .unwrap()
}

#[test]
fn hat_kernel_coefficients() {
    let out = deltareg(&["kernel", "--m", "1", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("power,numerator,denominator,float_value\n"));
    let rows = data_rows(&text);
    assert_eq!(rows[0], ["0", "3", "4", "7.5000000000000000e-1"]);
    assert_eq!(rows[1], ["2", "-3", "4", "-7.5000000000000000e-1"]);
    assert!(summary(&text, "mass_residual").abs() < 1e-14);
}

#[test]
fn kernel_dump_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coeffs.csv");
    let out = deltareg(&["kernel", "--m", "7", "--k", "4", "--dump-coeffs", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let text = fs::read_to_string(&path).unwrap();
    // Degree 2(3 + 5) = 16 gives nine even powers.
    assert_eq!(data_rows(&text).len(), 9);
    assert!(summary(&text, "max_moment_residual") < 1e-10);
}

#[test]
fn invalid_resolution_names_the_flag() {
    let out = deltareg(&["solve", "--problem", "advection", "--N", "0", "--m", "7", "--k", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--N"), "{}", stderr(&out));
}

#[test]
fn parse_errors_exit_with_one() {
    assert_eq!(deltareg(&["solve", "--problem", "advection", "--N", "x", "--m", "7", "--k", "4"]).status.code(), Some(1));
    assert_eq!(deltareg(&["kernel", "--m", "3"]).status.code(), Some(1));
    assert_eq!(deltareg(&["kernel", "--m", "0", "--k", "2"]).status.code(), Some(1));
    assert_eq!(deltareg(&["frobnicate"]).status.code(), Some(1));
    let out = deltareg(&["solve", "--problem", "heat", "--N", "8", "--m", "7", "--k", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("heat"));
}

#[test]
fn help_and_version_succeed() {
    let out = deltareg(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("converge"));
    let out = deltareg(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn unsafe_quadrature_needs_opt_in() {
    let args = ["solve", "--problem", "advection", "--N", "8", "--m", "1", "--k", "4"];
    let out = deltareg(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--allow-unsafe-q"));
    let mut allowed = args.to_vec();
    allowed.push("--allow-unsafe-q");
    let out = deltareg(&allowed);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("warning"));
}

fn solve_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["solve", "--problem", "advection", "--N", "24", "--m", "7", "--k", "4", "--out"];
    args.push(path.to_str().unwrap());
    args.extend_from_slice(extra);
    deltareg(&args)
}

#[test]
fn solve_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(solve_to(&a, &[]).status.code(), Some(0));
    assert_eq!(solve_to(&b, &[]).status.code(), Some(0));
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("x,u_num,u_ref,abs_error,region\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 25);
    for row in &rows {
        assert_eq!(row.len(), 5);
        assert!(["P", "R", "Q"].contains(&row[4].as_str()));
        let (un, ur, e): (f64, f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap(), row[3].parse().unwrap());
        assert_eq!(e, (un - ur).abs());
        assert!(row[0].contains('e'));
    }
    assert_eq!(summary(&text, "epsilon"), 6.6e-2);
}

#[test]
fn operator_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("u.csv");
    let op_path = dir.path().join("op.csv");
    let out = solve_to(&out_path, &["--dump-operator", op_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&op_path).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 2 + 25);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 25);
    let row_sum: f64 = rows[3][2..].iter().map(|v| v.parse::<f64>().unwrap()).sum();
    assert!(row_sum.abs() < 1e-9);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults\nproblem = advection\nm = 7\nk = 4\nN = 8\nepsilon = 0.1\n").unwrap();
    let out = deltareg(&["--config", cfg.to_str().unwrap(), "solve", "--N", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(data_rows(&text).len(), 13);
    assert_eq!(summary(&text, "epsilon"), 0.1);

    fs::write(&cfg, "no-such-flag = 3\n").unwrap();
    let out = deltareg(&["--config", cfg.to_str().unwrap(), "kernel", "--m", "1", "--k", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn regularize_particle_file() {
    let dir = tempfile::tempdir().unwrap();
    let particles = dir.path().join("p.csv");
    let n = 400;
    let mut text = String::from("position,value\n");
    for i in 0..=n {
        let x = -0.3 + 0.6 * i as f64 / n as f64;
        text.push_str(&format!("{x},{}\n", deltareg::experiments::advection_source(x)));
    }
    fs::write(&particles, text).unwrap();
    let out_path = dir.path().join("s.csv");
    let out = deltareg(&[
        "regularize", "--m", "5", "--k", "4", "--q", "2", "--epsilon", "0.08", "--particles",
        particles.to_str().unwrap(), "--source", "advection", "--eval-grid", "-0.5:0.5:101", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("x,s_tilde,s_exact_if_known,abs_error,region\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 101);
    let max_p = rows
        .iter()
        .filter(|r| r[4] == "P")
        .map(|r| r[3].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max_p < 1e-4, "{max_p}");
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.0);

    let samples = deltareg(&[
        "regularize", "--m", "5", "--k", "4", "--epsilon", "0.08", "--particles", particles.to_str().unwrap(),
        "--eval-grid", "0:0:1",
    ]);
    assert_eq!(samples.status.code(), Some(0), "{}", stderr(&samples));
    let rows = data_rows(&stdout(&samples));
    assert_eq!(rows[0][2], "");
    assert!((rows[0][1].parse::<f64>().unwrap() - 3.0).abs() < 1e-3);
}

#[test]
fn regularize_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let particles = dir.path().join("p.csv");
    fs::write(&particles, "0,1\n0.5,1\n1,1\n").unwrap();
    let out = deltareg(&["regularize", "--m", "5", "--k", "4", "--particles", particles.to_str().unwrap(), "--eval-grid", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--eval-grid"));
}

#[test]
fn converge_writes_errors_and_summary() {
    let out = deltareg(&["converge", "--problem", "advection", "--m", "7", "--k", "4", "--N-list", "40,60,80"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("N,error_P,error_Q\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["40", "60", "80"]);
    assert!(summary(&text, "order_P") > 0.0);
    assert!(summary(&text, "order_Q").is_finite());
    assert_eq!(summary(&text, "epsilon"), 6.6e-2);
}
