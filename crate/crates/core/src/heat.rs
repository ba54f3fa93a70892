//! Series solution of the M-fractional heat equation
//!
//! ```text
//! ∂^α u/∂t^α = k ∂²u/∂x²,   0 < x < L,  t > 0,
//! u(0, t) = u(L, t) = 0,    u(x, 0) = f(x),
//! ```
//!
//! by separation of variables:
//! `u(x, t) = Σ_n c_n sin(nπx/L) exp(−Γ(β+1) (nπ/L)² (k/α) t^α)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fracderiv::{closed_form, FracParams};
use crate::ode::{LinearOdeProblem, Sign};
use crate::quad::{integrate, neumaier_sum, Tolerance};
use crate::special::{gamma, TruncationIndex};

/// Number of series terms used when none is given.
pub const DEFAULT_TERMS: usize = 51;
/// Allowed |f(0)| and |f(L)|.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Problem data. Checked by [`HeatProblem::validate`], which every solver
/// calls first.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatProblem {
    pub length: f64,
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
    pub initial_profile: Expr,
    pub n_terms: usize,
}

impl HeatProblem {
    pub fn new(length: f64, k: f64, alpha: f64, beta: f64, initial_profile: Expr, n_terms: usize) -> Result<Self> {
        let prob = HeatProblem {
            length,
            k,
            alpha,
            beta,
            initial_profile,
            n_terms,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.length, self.k, self.alpha, self.beta)?;
        if self.n_terms == 0 {
            return Err(Error::param("n_terms", "must be at least 1"));
        }
        for (name, x) in [("f(0)", 0.0), ("f(L)", self.length)] {
            let v = self.initial_profile.eval(x)?;
            if v.abs() > BOUNDARY_TOL {
                return Err(Error::param(
                    "f",
                    format!("{name} = {v} but the boundary condition needs 0 (within {BOUNDARY_TOL:e})"),
                ));
            }
        }
        Ok(())
    }

    /// The linear ODE solved by the time factor of mode `n`:
    /// `D T + (nπ/L)² k T = 0`.
    pub fn time_factor_problem(&self, n: usize) -> Result<LinearOdeProblem> {
        let mu = n as f64 * PI / self.length;
        let p = FracParams::new(self.alpha, self.beta, TruncationIndex::Infinity)?;
        LinearOdeProblem::new(mu * mu * self.k, Sign::Plus, 1.0, p)
    }
}

fn check_params(length: f64, k: f64, alpha: f64, beta: f64) -> Result<()> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::param(
            "L",
            format!("must be a finite positive number, got {length}"),
        ));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::param("k", format!("must be a finite positive number, got {k}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::param(
            "beta",
            format!("must be a finite positive number, got {beta}"),
        ));
    }
    Ok(())
}

/// sin(πy) with exact zeros at the integers.
fn sin_pi(y: f64) -> f64 {
    let r = y.rem_euclid(2.0);
    if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// `c_n = (2/L) ∫₀^L f(x) sin(nπx/L) dx` for n = 1..=N, each to an absolute
/// error of `max(1e-12, 1e-13 |c_n|)`.
pub fn fourier_coeffs(prob: &HeatProblem) -> Result<Vec<f64>> {
    prob.validate()?;
    let l = prob.length;
    let tol = Tolerance::new(0.5e-12 * l, 1e-13);
    (1..=prob.n_terms)
        .map(|n| {
            let m = n as f64 / l;
            let r =
                integrate(|x| Ok(prob.initial_profile.eval(x)? * sin_pi(m * x)), 0.0, l, tol).map_err(|e| match e {
                    Error::ToleranceNotMet(best) => Error::Convergence(format!(
                        "Fourier coefficient n = {n}: error estimate {:e}",
                        best.abs_error_estimate
                    )),
                    other => other,
                })?;
            Ok(2.0 / l * r.value)
        })
        .collect()
}

/// Truncated series solution.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSolution {
    pub length: f64,
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `c_n` at index n − 1.
    pub coeffs: Vec<f64>,
    gamma_factor: f64,
}

impl HeatSolution {
    /// Builds the series from precomputed coefficients.
    pub fn from_coeffs(length: f64, k: f64, alpha: f64, beta: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_params(length, k, alpha, beta)?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("coeffs", "must be finite"));
        }
        Ok(HeatSolution {
            length,
            k,
            alpha,
            beta,
            coeffs,
            gamma_factor: gamma(beta + 1.0)?,
        })
    }

    /// Same coefficients, different order parameters.
    pub fn with_params(&self, alpha: f64, beta: f64) -> Result<Self> {
        HeatSolution::from_coeffs(self.length, self.k, alpha, beta, self.coeffs.clone())
    }

    /// `(nπ/L)² k`.
    fn decay(&self, n: usize) -> f64 {
        let mu = n as f64 * PI / self.length;
        mu * mu * self.k
    }

    /// `exp(−Γ(β+1) (nπ/L)² (k/α) t^α)`.
    pub fn time_factor(&self, n: usize, t: f64) -> f64 {
        (-self.gamma_factor * self.decay(n) / self.alpha * t.powf(self.alpha)).exp()
    }

    fn check_point(&self, x: f64, t: f64) -> Result<()> {
        if !(x >= 0.0 && x <= self.length) {
            return Err(Error::param("x", format!("must lie in [0, {}], got {x}", self.length)));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::param(
                "t",
                format!("must be a finite non-negative number, got {t}"),
            ));
        }
        Ok(())
    }

    /// u(x, t), summed in ascending n.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        self.check_point(x, t)?;
        let m = x / self.length;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * sin_pi((i + 1) as f64 * m) * self.time_factor(i + 1, t));
        Ok(neumaier_sum(terms))
    }
}

/// Coefficients by quadrature, then the series.
pub fn solve_heat(prob: &HeatProblem) -> Result<HeatSolution> {
    let coeffs = fourier_coeffs(prob)?;
    HeatSolution::from_coeffs(prob.length, prob.k, prob.alpha, prob.beta, coeffs)
}

/// `|∂^α_t u − k ∂²_x u|` at an interior point. The time derivative is the
/// closed-form fractional derivative of each exponential factor; the space
/// derivative is exact.
pub fn heat_residual(sol: &HeatSolution, x: f64, t: f64) -> Result<f64> {
    if !(x > 0.0 && x < sol.length) {
        return Err(Error::param(
            "x",
            format!("must be interior to (0, {}), got {x}", sol.length),
        ));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    let m = x / sol.length;
    let mut lhs = Vec::with_capacity(sol.coeffs.len());
    let mut rhs = Vec::with_capacity(sol.coeffs.len());
    for (i, c) in sol.coeffs.iter().enumerate() {
        let n = i + 1;
        let s = c * sin_pi(n as f64 * m);
        let tf = sol.time_factor(n, t);
        let d_tf = -sol.gamma_factor * sol.decay(n) * t.powf(sol.alpha - 1.0) * tf;
        lhs.push(s * closed_form(d_tf, sol.alpha, sol.gamma_factor, t));
        rhs.push(-s * sol.decay(n) * tf);
    }
    Ok((neumaier_sum(lhs) - neumaier_sum(rhs)).abs())
}

/// The β = 1 solution and the classical (α = β = 1) solution.
pub fn limit_solutions(prob: &HeatProblem) -> Result<(HeatSolution, HeatSolution)> {
    let base = solve_heat(prob)?;
    Ok((base.with_params(prob.alpha, 1.0)?, base.with_params(1.0, 1.0)?))
}
