use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfrac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scalar(args: &[&str]) -> f64 {
    let o = mfrac(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o).trim().parse().unwrap()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn read_csv(text: &str) -> Csv {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    Csv { header, rows }
}

/// Partial sum of the sine series of 50x(1−x) on [0, 1]; only odd n
/// contribute, with coefficient 400 / (nπ)³.
fn parabola_series(x: f64, decay: impl Fn(f64) -> f64) -> f64 {
    (1..=51)
        .step_by(2)
        .map(|n| {
            let w = f64::from(n) * PI;
            400.0 / w.powi(3) * (w * x).sin() * decay(w)
        })
        .sum()
}

#[test]
fn ml_eval_prints_values() {
    assert_eq!(scalar(&["ml-eval", "--z", "0.3", "--beta", "1", "--i", "1"]), 1.3);
    assert_eq!(scalar(&["ml-eval", "--z", "1", "--beta", "1"]), std::f64::consts::E);
    let v = scalar(&["ml-eval", "--z", "-1", "--beta", "2"]);
    assert!((v - 1f64.cos()).abs() < 1e-15);
    let v = scalar(&["ml-eval", "--z", "2", "--beta", "0.5", "--i", "3"]);
    let want = 1.0 + 2.0 / (PI.sqrt() / 2.0) + 4.0 + 8.0 / (3.0 * PI.sqrt() / 4.0);
    assert!((v - want).abs() < 1e-14 * want);
}

#[test]
fn deriv_closed_and_limit() {
    // t^{1-α} f'(t) / Γ(β+1) with f = t³, α = 0.25, β = 2, t = 2
    let want = 2f64.powf(0.75) * 12.0 / 2.0;
    let closed = scalar(&["deriv", "--f", "t^3", "--alpha", "0.25", "--beta", "2", "--t", "2"]);
    assert!((closed - want).abs() < 1e-13 * want);
    let limit = scalar(&[
        "deriv", "--f", "t^3", "--alpha", "0.25", "--beta", "2", "--t", "2", "--method", "limit",
    ]);
    assert!((limit - want).abs() < 1e-6 * want);
    let o = mfrac(&[
        "deriv", "--f", "exp(x)", "--alpha", "0.6", "--t", "1.5", "--method", "both",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(
        lines[0].starts_with("closed = ") && lines[1].starts_with("limit = ") && lines[2].starts_with("difference = ")
    );
}

#[test]
fn integrate_reports_value_and_error() {
    // Γ(2) ∫₀¹ x^{−1/2} dx = 2
    let o = mfrac(&["integrate", "--f", "1", "--alpha", "0.5", "--a", "0", "--t", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let fields: Vec<(&str, &str)> = text.lines().map(|l| l.split_once(" = ").unwrap()).collect();
    assert_eq!(
        fields.iter().map(|f| f.0).collect::<Vec<_>>(),
        ["value", "abs_error_estimate", "subdivisions"]
    );
    let value: f64 = fields[0].1.parse().unwrap();
    assert!((value - 2.0).abs() < 1e-12);
    assert!(fields[1].1.parse::<f64>().unwrap() <= 1e-10);
    // β = 3 multiplies by Γ(4) = 6; ∫₁² x · x^{−0.7} dx = (2^{1.3} − 1) / 1.3
    let o = mfrac(&[
        "integrate",
        "--f",
        "x",
        "--alpha",
        "0.3",
        "--beta",
        "3",
        "--a",
        "1",
        "--t",
        "2",
    ]);
    let value: f64 = stdout(&o)
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("value = ")
        .parse()
        .unwrap();
    let want = 6.0 * (2f64.powf(1.3) - 1.0) / 1.3;
    assert!((value - want).abs() < 1e-10 * want);
}

#[test]
fn ode_csv_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ode.csv");
    let o = mfrac(&[
        "ode",
        "--mu-sq",
        "2",
        "--sign",
        "plus",
        "--c",
        "3",
        "--alpha",
        "0.5",
        "--beta",
        "1",
        "--t",
        "0.5,1,2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!stderr(&o).is_empty());
    let csv = read_csv(&fs::read_to_string(&path).unwrap());
    assert_eq!(csv.header, ["t", "v", "residual"]);
    for row in &csv.rows {
        // D v + μ² v = 0 with β = 1: v = c exp(−μ² t^α / α)
        let want = 3.0 * (-2.0 * row[0].sqrt() / 0.5).exp();
        assert!((row[1] - want).abs() < 1e-14 * want.max(1e-300), "{row:?}");
        assert!(row[2].abs() < 1e-12);
    }

    let o = mfrac(&[
        "ode", "--mu-sq", "1", "--sign", "minus", "--alpha", "0.7", "--t", "1,2", "--method", "rk4", "--t0", "0.5",
        "--steps", "400",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read_csv(&stdout(&o));
    assert_eq!(csv.rows.len(), 2);
    assert!(csv.rows.iter().all(|r| r[2].abs() < 1e-6));
}

#[test]
fn compare_lists_every_family() {
    let o = mfrac(&["compare", "--f", "t^2", "--alpha", "0.5", "--t", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,beta,i,limit,limit_minus_closed,quotient,quotient_minus_alternative"
    );
    let families: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        families,
        [
            "conformable",
            "generalized(1)",
            "generalized(2)",
            "generalized(5)",
            "generalized(10)",
            "generalized(20)",
            "alternative",
            "m-fractional(0.5)",
            "m-fractional(1.0)",
            "m-fractional(2.0)",
        ]
    );
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn heat_config_classical_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fig2.json",
        r#"{"L": 1, "k": 0.003, "alpha": [0.4, 0.6, 0.8, 1.0], "beta": 1, "f": "50*x*(1-x)", "n_terms": 51, "t": 150, "x_points": 101}"#,
    );
    let o = mfrac(&["heat", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read_csv(&stdout(&o));
    assert_eq!(
        csv.header,
        ["x", "u_alpha_0.4", "u_alpha_0.6", "u_alpha_0.8", "u_alpha_1.0"]
    );
    assert_eq!(csv.rows.len(), 101);
    for row in &csv.rows {
        let classical = parabola_series(row[0], |w| (-0.003 * w * w * 150.0).exp());
        assert!(
            (row[4] - classical).abs() < 1e-9,
            "x = {}: {} vs {classical}",
            row[0],
            row[4]
        );
    }
}

#[test]
fn heat_at_time_zero_is_fourier_sum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "t0.json",
        r#"{"k": 0.003, "alpha": [0.3, 0.7, 1], "beta": 2, "f": "50*x*(1-x)", "t": 0, "x_points": 41}"#,
    );
    let o = mfrac(&["heat", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    for row in read_csv(&stdout(&o)).rows {
        let want = parabola_series(row[0], |_| 1.0);
        for u in &row[1..] {
            assert!((u - want).abs() < 1e-10, "x = {}: {u} vs {want}", row[0]);
        }
    }
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"k": 0.003, "alpha": 0.5, "beta": 1, "f": "50*x*(1-x)", "t": 150, "x_points": 5}"#,
    );
    let out_path = dir.path().join("u.csv");
    let o = mfrac(&[
        "heat",
        "--config",
        &cfg,
        "--x-points",
        "3",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    assert_eq!(read_csv(&fs::read_to_string(out_path).unwrap()).rows.len(), 3);
}

#[test]
fn figures_are_deterministic_and_ordered() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = mfrac(&["figures", "--output-dir", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let mut tables = Vec::new();
    for name in ["figure1.csv", "figure2.csv", "figure3.csv"] {
        let first = fs::read(a.path().join(name)).unwrap();
        assert_eq!(first, fs::read(b.path().join(name)).unwrap(), "{name}");
        let csv = read_csv(&String::from_utf8(first).unwrap());
        assert_eq!(
            csv.header,
            [
                "x",
                "u_alpha_0.2",
                "u_alpha_0.4",
                "u_alpha_0.6",
                "u_alpha_0.8",
                "u_alpha_1.0"
            ]
        );
        assert_eq!(csv.rows.len(), 201);
        let (top, bottom) = (&csv.rows[0], &csv.rows[200]);
        assert_eq!((top[0], bottom[0]), (0.0, 1.0));
        assert!(top[1..].iter().chain(&bottom[1..]).all(|&u| u == 0.0));
        tables.push(csv);
    }
    // the decay rate grows with Γ(β+1) and with t^α/α at t = 150
    for j in 1..200 {
        for col in 1..=5 {
            let u: Vec<f64> = tables.iter().map(|t| t.rows[j][col]).collect();
            assert!(u[0] > u[1] && u[1] > u[2], "row {j} column {col}: {u:?}");
        }
        let row = &tables[1].rows[j];
        assert!(row[1..].windows(2).all(|w| w[0] > w[1]), "row {j}: {row:?}");
    }
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"k": "slow", "alpha": 0.5, "beta": 1, "f": "x", "t": 1}"#, "`k`"),
        (
            r#"{"k": 1, "alpha": 0.5, "beta": 1, "f": "x", "t": 1, "x_point": 3}"#,
            "`x_point`",
        ),
        (r#"{"alpha": 0.5, "beta": 1, "f": "x", "t": 1}"#, "`k`"),
        (r#"{"k": 1, "alpha": 0.5, "beta": 1, "f": "x +", "t": 1}"#, "`f`"),
        (r#"{"k": 1, "alpha": [], "beta": 1, "f": "x", "t": 1}"#, "`alpha`"),
    ];
    for (i, (body, key)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("bad{i}.json"), body);
        let o = mfrac(&["heat", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(1), "{body}");
        assert!(stderr(&o).contains(key), "{body}: {}", stderr(&o));
    }
    assert_eq!(
        mfrac(&["deriv", "--f", "t", "--alpha", "1.5", "--t", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mfrac(&["deriv", "--f", "y", "--alpha", "0.5", "--t", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(mfrac(&["ml-eval", "--z", "1"]).status.code(), Some(1));
    assert_eq!(
        mfrac(&["deriv", "--f", "ln(t)", "--alpha", "0.5", "--t", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mfrac(&["ode", "--mu-sq", "1", "--alpha", "0.5", "--t", "-1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn numerical_and_io_exit_codes() {
    assert_eq!(mfrac(&["ml-eval", "--z", "50", "--beta", "0.1"]).status.code(), Some(2));
    assert_eq!(
        mfrac(&[
            "deriv",
            "--f",
            "sqrt(abs(t-1))",
            "--alpha",
            "0.5",
            "--t",
            "1",
            "--method",
            "limit"
        ])
        .status
        .code(),
        Some(2)
    );
    let o = mfrac(&["heat", "--config", "/nonexistent/dir/cfg.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("/nonexistent/dir/cfg.json"));
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = mfrac(&["figures", "--output-dir", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
