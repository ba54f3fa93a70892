//! Command-line front end. [`run`] takes the argument list and output
//! streams and returns the process exit status:
//! 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.

mod config;
mod csv;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{HeatRun, HeatSettings};
pub use csv::{format_g17, Cell, CsvTable};

use crate::error::Error;
use crate::expr::{parse, Expr};
use crate::fracderiv::{
    deriv_at_zero, deriv_closed, deriv_limit, difference_quotient, family_params, initial_eps, DerivFamily, FracParams,
};
use crate::fracint::mfrac_integral;
use crate::heat::{solve_heat, HeatProblem};
use crate::ode::{solve_general, solve_linear, verify_linear, LinearOdeProblem, Sign};
use crate::special::{ml_truncated, MLParams, TruncationIndex};

/// Largest accepted |closed − limit| for `deriv --method both`, relative to
/// `max(1, |closed|)`.
pub const METHOD_AGREEMENT: f64 = 1e-5;

/// α values drawn in each figure.
pub const FIGURE_ALPHAS: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];
/// File name and β of each figure.
pub const FIGURES: [(&str, f64); 3] = [("figure1.csv", 0.5), ("figure2.csv", 1.0), ("figure3.csv", 2.0)];

/// Why a command failed, grouped by exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn io_failure(what: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", what.display()))
}

fn stdout_failure(e: std::io::Error) -> Failure {
    Failure::Io(format!("writing output: {e}"))
}

#[derive(Debug, Parser)]
#[command(
    name = "mfrac",
    version,
    about = "Truncated M-fractional derivatives, integrals, ODEs and heat-equation series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the truncated Mittag-Leffler function.
    MlEval {
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long)]
        beta: f64,
        /// Truncation index: a non-negative integer or `inf`.
        #[arg(long, default_value = "inf")]
        i: TruncationIndex,
    },
    /// Fractional derivative of an expression in `t` (or `x`).
    Deriv(DerivArgs),
    /// M-fractional integral of an expression.
    Integrate(IntegrateArgs),
    /// Linear equation D v ± μ² v = 0.
    Ode(OdeArgs),
    /// Series solution of the heat equation, written as CSV.
    Heat(HeatArgs),
    /// Limit-definition derivative under each derivative family.
    Compare(CompareArgs),
    /// Write the three figure data sets.
    Figures {
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
struct OrderArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value = "inf")]
    i: TruncationIndex,
}

impl OrderArgs {
    fn params(&self) -> Result<FracParams, Failure> {
        Ok(FracParams::new(self.alpha, self.beta, self.i)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DerivMethod {
    Closed,
    Limit,
    Both,
}

#[derive(Debug, Args)]
struct DerivArgs {
    #[arg(long)]
    f: String,
    #[command(flatten)]
    order: OrderArgs,
    /// Evaluation point; 0 gives the right limit at the origin.
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, value_enum, default_value_t = DerivMethod::Closed)]
    method: DerivMethod,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[arg(long)]
    f: String,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OdeMethod {
    Closed,
    Rk4,
}

#[derive(Debug, Args)]
struct OdeArgs {
    #[arg(long, allow_negative_numbers = true)]
    mu_sq: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,
    /// Comma-separated output times.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    t: Vec<f64>,
    #[arg(long, value_enum, default_value_t = OdeMethod::Closed)]
    method: OdeMethod,
    /// Start of the RK4 integration; defaults to the smallest output time.
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HeatArgs {
    /// JSON file with keys L, k, alpha, beta, f, n_terms, t, x_points, output.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "L", visible_alias = "length")]
    length: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    /// One or more comma-separated orders.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    n_terms: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long)]
    x_points: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::MlEval { z, beta, i } => {
            let v = ml_truncated(z, MLParams::new(beta, i)?)?;
            writeln!(out, "{v:?}").map_err(stdout_failure)
        }
        Command::Deriv(a) => cmd_deriv(&a, out),
        Command::Integrate(a) => {
            let f = parse_function(&a.f)?;
            let p = FracParams::new(a.alpha, a.beta, TruncationIndex::Infinity)?;
            let r = mfrac_integral(&f, a.a, a.t, &p)?;
            writeln!(
                out,
                "value = {:?}\nabs_error_estimate = {:e}\nsubdivisions = {}",
                r.value, r.abs_error_estimate, r.subdivisions
            )
            .map_err(stdout_failure)
        }
        Command::Ode(a) => cmd_ode(&a, out, err),
        Command::Heat(a) => cmd_heat(a, out),
        Command::Compare(a) => {
            let f = parse_function(&a.f)?;
            let table = compare_table(&f, a.alpha, a.t)?;
            emit(&table, a.output.as_deref(), out)
        }
        Command::Figures { output_dir } => write_figures(&output_dir),
    }
}

fn parse_function(source: &str) -> Result<Expr, Failure> {
    parse(source).map_err(|e| Failure::Validation(format!("in expression {source:?}: {e}")))
}

fn emit(table: &CsvTable, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, table.to_bytes()).map_err(|e| io_failure(p, e)),
        None => table.write_to(out).map_err(stdout_failure),
    }
}

fn cmd_deriv(a: &DerivArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let f = parse_function(&a.f)?;
    let p = a.order.params()?;
    let closed = || -> Result<f64, Failure> {
        Ok(if a.t == 0.0 {
            deriv_at_zero(&f, &p)?
        } else {
            deriv_closed(&f, &p, a.t)?
        })
    };
    match a.method {
        DerivMethod::Closed => writeln!(out, "{:?}", closed()?).map_err(stdout_failure),
        DerivMethod::Limit => writeln!(out, "{:?}", deriv_limit(&f, &p, a.t)?.value).map_err(stdout_failure),
        DerivMethod::Both => {
            let c = closed()?;
            let l = deriv_limit(&f, &p, a.t)?;
            let diff = (c - l.value).abs();
            writeln!(out, "closed = {c:?}\nlimit = {:?}\ndifference = {diff:e}", l.value).map_err(stdout_failure)?;
            if diff > METHOD_AGREEMENT * c.abs().max(1.0) {
                return Err(Failure::Numerical(format!(
                    "closed form and limit definition disagree by {diff:e}"
                )));
            }
            Ok(())
        }
    }
}

fn cmd_ode(a: &OdeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let p = FracParams::new(a.alpha, a.beta, TruncationIndex::Infinity)?;
    let sign = match a.sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    let prob = LinearOdeProblem::new(a.mu_sq, sign, a.c, p)?;
    if let Some(bad) = a.t.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Failure::Validation(format!(
            "invalid parameter `t`: times must be positive, got {bad}"
        )));
    }
    let exact = solve_linear(&prob);
    let sol = match a.method {
        OdeMethod::Closed => exact,
        OdeMethod::Rk4 => {
            let t0 =
                a.t0.unwrap_or_else(|| a.t.iter().copied().fold(f64::INFINITY, f64::min));
            let t1 = a.t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let v0 = exact.eval(t0)?;
            let rate = match sign {
                Sign::Plus => -a.mu_sq,
                Sign::Minus => a.mu_sq,
            };
            if t1 > t0 {
                solve_general(|_, v| rate * v, t0, v0, t1, &p, a.steps)?
            } else {
                // a single output time at the start: nothing to integrate
                exact
            }
        }
    };
    let _ = writeln!(err, "{}", sol.description());
    let mut table = CsvTable::new(vec!["t".into(), "v".into(), "residual".into()]);
    for &t in &a.t {
        table.push(vec![
            t.into(),
            sol.eval(t)?.into(),
            verify_linear(&sol, &prob, &[t])?.into(),
        ]);
    }
    emit(&table, a.output.as_deref(), out)
}

fn cmd_heat(a: HeatArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let file = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            HeatSettings::from_json(&text)?
        }
        None => HeatSettings::default(),
    };
    let flags = HeatSettings {
        length: a.length,
        k: a.k,
        alpha: (!a.alpha.is_empty()).then_some(a.alpha),
        beta: a.beta,
        f: a.f,
        n_terms: a.n_terms,
        t: a.t,
        x_points: a.x_points,
        output: a.output,
    };
    let run = file.overridden_by(flags).resolve()?;
    let table = heat_table(&run)?;
    emit(&table, run.output.as_deref(), out)
}

/// `x` followed by one `u_alpha_<α>` column per order, on a uniform grid
/// of `x_points` samples of [0, L].
pub fn heat_table(run: &HeatRun) -> Result<CsvTable, Failure> {
    let f = parse(&run.f).map_err(|e| Failure::Validation(format!("config key `f`: {e}")))?;
    let prob = HeatProblem::new(run.length, run.k, run.alphas[0], run.beta, f, run.n_terms)?;
    let base = solve_heat(&prob)?;
    let columns = run
        .alphas
        .iter()
        .map(|&alpha| base.with_params(alpha, run.beta))
        .collect::<Result<Vec<_>, _>>()?;
    let mut header = vec!["x".to_string()];
    header.extend(run.alphas.iter().map(|a| format!("u_alpha_{a:?}")));
    let mut table = CsvTable::new(header);
    let last = run.x_points - 1;
    for j in 0..run.x_points {
        let x = if j == last {
            run.length
        } else {
            run.length * j as f64 / last as f64
        };
        let mut row = vec![Cell::from(x)];
        for sol in &columns {
            row.push(sol.eval(x, run.t)?.into());
        }
        table.push(row);
    }
    Ok(table)
}

/// Settings of one figure: L = 1, k = 0.003, t = 150, f = 50x(1−x).
pub fn figure_run(beta: f64) -> HeatRun {
    HeatRun {
        length: 1.0,
        k: 0.003,
        alphas: FIGURE_ALPHAS.to_vec(),
        beta,
        f: "50*x*(1-x)".into(),
        n_terms: crate::heat::DEFAULT_TERMS,
        t: 150.0,
        x_points: 201,
        output: None,
    }
}

fn write_figures(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    for (name, beta) in FIGURES {
        let table = heat_table(&figure_run(beta))?;
        let path = dir.join(name);
        fs::write(&path, table.to_bytes()).map_err(|e| io_failure(&path, e))?;
    }
    Ok(())
}

/// Families swept by `compare`, in row order.
pub fn compare_families() -> Vec<DerivFamily> {
    let mut fams = vec![DerivFamily::Conformable];
    fams.extend([1, 2, 5, 10, 20].map(DerivFamily::Generalized));
    fams.push(DerivFamily::Alternative);
    fams.extend([0.5, 1.0, 2.0].map(DerivFamily::MFractional));
    fams
}

/// One row per family: the limit-definition value and its deviation from
/// the β = 1 closed form, then the raw difference quotient at the initial
/// step and its deviation from the alternative family's quotient.
pub fn compare_table(f: &Expr, alpha: f64, t: f64) -> Result<CsvTable, Failure> {
    let reference = family_params(DerivFamily::Alternative, alpha)?;
    let closed = deriv_closed(f, &reference, t)?;
    let eps = initial_eps(&reference, t);
    let alt_quotient = difference_quotient(f, &reference, t, eps)?;
    let mut table = CsvTable::new(
        [
            "family",
            "beta",
            "i",
            "limit",
            "limit_minus_closed",
            "quotient",
            "quotient_minus_alternative",
        ]
        .map(String::from)
        .to_vec(),
    );
    for fam in compare_families() {
        let p = family_params(fam, alpha)?;
        let limit = deriv_limit(f, &p, t)?.value;
        let q = difference_quotient(f, &p, t, eps)?;
        table.push(vec![
            fam.to_string().into(),
            p.beta().into(),
            p.trunc().to_string().into(),
            limit.into(),
            (limit - closed).into(),
            q.into(),
            (q - alt_quotient).into(),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("mfrac").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ml_eval_examples() {
        assert_eq!(call(&["ml-eval", "--z", "0", "--beta", "1", "--i", "5"]).1, "1.0\n");
        assert_eq!(call(&["ml-eval", "--z", "0.3", "--beta", "1", "--i", "1"]).1, "1.3\n");
        assert_eq!(
            call(&["ml-eval", "--z", "1", "--beta", "1", "--i", "inf"]).1,
            "2.718281828459045\n"
        );
        assert_eq!(call(&["ml-eval", "--z", "-1", "--beta", "1"]).0, 0);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["ml-eval", "--z", "1", "--beta", "-1"]).0, 1);
        assert_eq!(call(&["ml-eval", "--z", "50", "--beta", "0.1"]).0, 2);
        assert_eq!(call(&["nonsense"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["deriv", "--f", "t +", "--alpha", "0.5", "--t", "1"]).0, 1);
        let (code, _, err) = call(&["figures", "--output-dir", "/proc/definitely/not/here"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn deriv_methods() {
        let (code, out, _) = call(&[
            "deriv", "--f", "t^2", "--alpha", "0.5", "--beta", "1", "--i", "1", "--t", "1", "--method", "both",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("closed = 2.0\nlimit = "), "{out}");
        assert_eq!(call(&["deriv", "--f", "3", "--alpha", "0.5", "--t", "2"]).1, "0.0\n");
        let out = call(&[
            "deriv", "--f", "sin(t)", "--alpha", "0.3", "--beta", "2", "--t", "1", "--method", "closed",
        ])
        .1;
        assert!((out.trim().parse::<f64>().unwrap() - 0.270_151_152_9).abs() < 1e-10);
        let out = call(&["deriv", "--f", "t^0.5", "--alpha", "0.5", "--t", "0"]).1;
        assert!((out.trim().parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn compare_rows() {
        let table = compare_table(&parse("t^2").unwrap(), 0.5, 1.0).unwrap();
        assert_eq!(table.rows.len(), 10);
        assert_eq!(table.rows[0][3..], table.rows[1][3..]);
    }

    #[test]
    fn heat_grid_ends_exactly_at_length() {
        let run = HeatRun {
            length: 0.7,
            x_points: 11,
            f: "x*(0.7-x)".into(),
            ..figure_run(1.0)
        };
        let table = heat_table(&run).unwrap();
        assert_eq!(table.rows[10][0], Cell::Num(0.7));
        assert!(table.rows[10][1..].iter().all(|c| *c == Cell::Num(0.0)));
    }
}
