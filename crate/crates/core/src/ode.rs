//! First-order equations `D v = g(t, v)` in the truncated M-fractional
//! derivative.
//!
//! The linear constant-coefficient case `D v ± μ² v = 0` has the closed form
//! `v(t) = c exp(∓Γ(β+1) μ² t^α / α)`. General right-hand sides are reduced
//! through the chain rule to the classical equation
//! `v′ = Γ(β+1) t^{α−1} g(t, v)` and integrated with RK4.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Dual;
use crate::fracderiv::{closed_form, FracParams};
use crate::func::DualFn;

/// Sign of the `μ² v` term in `D v ± μ² v = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// `D v ± μ² v = 0` with `v(0⁺) = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOdeProblem {
    pub mu_sq: f64,
    pub sign: Sign,
    pub c: f64,
    pub params: FracParams,
}

impl LinearOdeProblem {
    pub fn new(mu_sq: f64, sign: Sign, c: f64, params: FracParams) -> Result<Self> {
        if !(mu_sq.is_finite() && mu_sq > 0.0) {
            return Err(Error::param(
                "mu_sq",
                format!("must be a finite positive number, got {mu_sq}"),
            ));
        }
        if !c.is_finite() {
            return Err(Error::param("c", format!("must be finite, got {c}")));
        }
        require_order_at_most_one(&params)?;
        Ok(LinearOdeProblem { mu_sq, sign, c, params })
    }
}

fn require_order_at_most_one(p: &FracParams) -> Result<()> {
    if p.alpha() <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must lie in (0, 1], got {}", p.alpha())))
    }
}

/// A solution of an M-fractional ODE, either in closed form or as samples
/// joined by cubic Hermite pieces.
#[derive(Debug, Clone, PartialEq)]
pub enum OdeSolution {
    /// `c exp(rate · t^α)`.
    Closed { c: f64, rate: f64, alpha: f64 },
    /// Values and slopes on a uniform grid.
    Sampled { t0: f64, h: f64, v: Vec<f64>, dv: Vec<f64> },
}

impl OdeSolution {
    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.dual(t)?.val)
    }

    /// Human-readable form of the solution.
    pub fn description(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for OdeSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeSolution::Closed { c, rate, alpha } => write!(f, "v(t) = {c:?} * exp({rate:?} * t^{alpha:?})"),
            OdeSolution::Sampled { t0, h, v, .. } => {
                let steps = v.len() - 1;
                write!(
                    f,
                    "RK4 solution on [{t0:?}, {:?}] with {steps} steps",
                    t0 + h * steps as f64
                )
            }
        }
    }
}

impl DualFn for OdeSolution {
    fn dual(&self, t: f64) -> Result<Dual> {
        match self {
            OdeSolution::Closed { c, rate, alpha } => {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::param("t", format!("must be positive, got {t}")));
                }
                let v = c * (rate * t.powf(*alpha)).exp();
                Ok(Dual::new(v, v * rate * alpha * t.powf(alpha - 1.0)))
            }
            OdeSolution::Sampled { t0, h, v, dv } => {
                let steps = v.len() - 1;
                let t1 = t0 + h * steps as f64;
                if !(t >= *t0 && t <= t1) {
                    return Err(Error::param("t", format!("outside the solved range [{t0}, {t1}]: {t}")));
                }
                let k = (((t - t0) / h).floor() as usize).min(steps - 1);
                let s = (t - (t0 + h * k as f64)) / h;
                Ok(hermite(v[k], v[k + 1], dv[k] * h, dv[k + 1] * h, s, *h))
            }
        }
    }
}

/// Cubic Hermite interpolant on [0, 1] with end slopes scaled by the step.
fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, s: f64, h: f64) -> Dual {
    let s2 = s * s;
    let s3 = s2 * s;
    let val =
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
    let der = (6.0 * s2 - 6.0 * s) * y0
        + (3.0 * s2 - 4.0 * s + 1.0) * m0
        + (-6.0 * s2 + 6.0 * s) * y1
        + (3.0 * s2 - 2.0 * s) * m1;
    Dual::new(val, der / h)
}

/// Closed-form solution. The exponent carries the sign opposite to the one
/// in the equation, so `Sign::Plus` decays.
pub fn solve_linear(prob: &LinearOdeProblem) -> OdeSolution {
    let p = prob.params;
    OdeSolution::Closed {
        c: prob.c,
        rate: -prob.sign.factor() * p.gamma_factor() * prob.mu_sq / p.alpha(),
        alpha: p.alpha(),
    }
}

/// Largest `|D v(t) ± μ² v(t)|` over `ts`.
pub fn verify_linear(sol: &OdeSolution, prob: &LinearOdeProblem, ts: &[f64]) -> Result<f64> {
    let p = prob.params;
    let gamma = p.gamma_factor();
    let mut worst: f64 = 0.0;
    for &t in ts {
        let d = sol.dual(t)?;
        let lhs = closed_form(d.der, p.alpha(), gamma, t);
        worst = worst.max((lhs + prob.sign.factor() * prob.mu_sq * d.val).abs());
    }
    Ok(worst)
}

/// RK4 on `v′ = Γ(β+1) t^{α−1} g(t, v)` from `(t0, v0)` to `t1` in `steps`
/// equal steps.
pub fn solve_general<G>(g: G, t0: f64, v0: f64, t1: f64, p: &FracParams, steps: usize) -> Result<OdeSolution>
where
    G: Fn(f64, f64) -> f64,
{
    require_order_at_most_one(p)?;
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(Error::param("t0", format!("must be positive, got {t0}")));
    }
    if !(t1.is_finite() && t1 > t0) {
        return Err(Error::param("t1", format!("must exceed t0 = {t0}, got {t1}")));
    }
    if steps < 4 {
        return Err(Error::param(
            "steps",
            format!("at least 4 steps are needed, got {steps}"),
        ));
    }
    if !v0.is_finite() {
        return Err(Error::param("v0", format!("must be finite, got {v0}")));
    }
    let gamma = p.gamma_factor();
    let alpha = p.alpha();
    let rhs = |t: f64, v: f64| gamma * t.powf(alpha - 1.0) * g(t, v);
    let h = (t1 - t0) / steps as f64;
    let mut v = Vec::with_capacity(steps + 1);
    let mut dv = Vec::with_capacity(steps + 1);
    let mut y = v0;
    for k in 0..=steps {
        let t = t0 + h * k as f64;
        let k1 = rhs(t, y);
        if !(y.is_finite() && k1.is_finite()) {
            return Err(Error::Overflow(format!("solution left the finite range near t = {t}")));
        }
        v.push(y);
        dv.push(k1);
        if k == steps {
            break;
        }
        let k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        let k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        let k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(OdeSolution::Sampled { t0, h, v, dv })
}
