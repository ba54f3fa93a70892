//! The truncated M-fractional derivative.
//!
//! For 0 < α < 1, β > 0 and a truncation index i the operator is the limit
//!
//! ```text
//! D f(t) = lim_{ε→0} [ f(t · E(ε t^{-α})) − f(t) ] / ε
//! ```
//!
//! where `E` is the truncated Mittag-Leffler function of [`crate::special`].
//! For differentiable `f` it has the closed form `t^{1−α} f′(t) / Γ(β+1)`,
//! which does not depend on `i`. This module provides both routes, the
//! higher-order variant, the limit at the origin, the parameter sets of the
//! four derivative families the operator contains, and witness searches for
//! the Rolle and mean-value theorems.

mod limit;
mod witness;

use std::fmt;

use crate::error::{Error, Result};
use crate::func::DualFn;
use crate::special::{gamma, MLParams, TruncationIndex};

pub use limit::{
    deriv_higher_limit, deriv_limit, difference_quotient, initial_eps, richardson_limit, LimitEstimate, LIMIT_RTOL,
    MAX_LEVELS,
};
pub use witness::{mvt_extension_witness, mvt_witness, rolle_witness, SCAN_POINTS, WITNESS_TOL};

/// Order α, Mittag-Leffler parameter β and truncation index i.
///
/// The constructor only checks α > 0 and β > 0; each operator enforces the
/// interval for α it is defined on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    alpha: f64,
    beta: f64,
    trunc: TruncationIndex,
}

impl FracParams {
    pub fn new(alpha: f64, beta: f64, trunc: TruncationIndex) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::param(
                "alpha",
                format!("must be a finite positive number, got {alpha}"),
            ));
        }
        MLParams::new(beta, trunc)?;
        Ok(FracParams { alpha, beta, trunc })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn trunc(&self) -> TruncationIndex {
        self.trunc
    }

    pub fn ml(&self) -> MLParams {
        MLParams::new(self.beta, self.trunc).expect("validated at construction")
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        FracParams::new(alpha, self.beta, self.trunc)
    }

    /// Γ(β + 1).
    pub fn gamma_factor(&self) -> f64 {
        gamma(self.beta + 1.0).expect("beta + 1 > 0")
    }

    pub(crate) fn require_first_order(&self) -> Result<()> {
        if self.alpha < 1.0 {
            Ok(())
        } else {
            Err(Error::param(
                "alpha",
                format!("first-order operators need 0 < alpha < 1, got {}", self.alpha),
            ))
        }
    }
}

pub(crate) fn require_positive_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::param("t", format!("must be a finite positive number, got {t}")))
    }
}

/// `t^{1−α} f′(t) / Γ(β+1)` without range checks on α. Used where α = 1 is
/// admitted as the classical endpoint.
pub(crate) fn closed_form(derivative: f64, alpha: f64, gamma_factor: f64, t: f64) -> f64 {
    t.powf(1.0 - alpha) * derivative / gamma_factor
}

/// Closed-form derivative `t^{1−α} f′(t) / Γ(β+1)` with `f′` from dual
/// arithmetic.
pub fn deriv_closed<F: DualFn + ?Sized>(f: &F, p: &FracParams, t: f64) -> Result<f64> {
    p.require_first_order()?;
    require_positive_t(t)?;
    let d = f.dual(t)?;
    Ok(closed_form(d.der, p.alpha, p.gamma_factor(), t))
}

/// Smallest and largest exponent k of the sample points `t = 2^{-k}` used by
/// [`deriv_at_zero`].
pub const AT_ZERO_EXPONENTS: (i32, i32) = (4, 40);

/// Value at the origin, defined as the right limit `lim_{t→0+} D f(t)`.
///
/// The closed form is sampled at `t = 2^{-k}`, k = 4..=40, and the tail is
/// accelerated with Aitken's Δ² process. A sequence whose increments do not
/// shrink is reported as divergent.
pub fn deriv_at_zero<F: DualFn + ?Sized>(f: &F, p: &FracParams) -> Result<f64> {
    let (k0, k1) = AT_ZERO_EXPONENTS;
    let mut seq = Vec::with_capacity((k1 - k0 + 1) as usize);
    for k in k0..=k1 {
        let v = deriv_closed(f, p, 2f64.powi(-k))?;
        if !v.is_finite() {
            return Err(Error::Convergence(format!(
                "D f(2^-{k}) is not finite; the limit at 0 diverges"
            )));
        }
        seq.push(v);
    }
    let n = seq.len();
    let (s0, s1, s2) = (seq[n - 3], seq[n - 2], seq[n - 1]);
    let (d1, d2) = (s1 - s0, s2 - s1);
    if d2.abs() <= 1e-12 * s2.abs().max(1.0) {
        return Ok(s2);
    }
    let ratio = d2 / d1;
    if !(ratio.abs() < 1.0) {
        return Err(Error::Convergence(format!(
            "D f(t) does not settle as t -> 0+ (last values {s1:e}, {s2:e})"
        )));
    }
    Ok(s2 - d2 * d2 / (d2 - d1))
}

/// Higher-order derivative for n < α ≤ n + 1 from the closed form
/// `t^{n+1−α} f^{(n+1)}(t) / Γ(β+1)`.
///
/// `derivs(t, k)` must return the k-th classical derivative of f at t for
/// k ∈ {n, n + 1}.
pub fn deriv_higher<G>(derivs: G, p: &FracParams, n: u32, t: f64) -> Result<f64>
where
    G: Fn(f64, u32) -> f64,
{
    require_higher_order(p, n)?;
    require_positive_t(t)?;
    let d = derivs(t, n + 1);
    Ok(t.powf(f64::from(n) + 1.0 - p.alpha) * d / p.gamma_factor())
}

pub(crate) fn require_higher_order(p: &FracParams, n: u32) -> Result<()> {
    let lo = f64::from(n);
    if p.alpha > lo && p.alpha <= lo + 1.0 {
        Ok(())
    } else {
        Err(Error::param(
            "alpha",
            format!("order {} is outside ({lo}, {}] for n = {n}", p.alpha, lo + 1.0),
        ))
    }
}

/// Local derivative types contained in the truncated M-fractional derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivFamily {
    /// β = 1, i = 1: the quotient `[f(t + ε t^{1−α}) − f(t)] / ε`.
    Conformable,
    /// β = 1, i = ∞: the quotient with `t e^{ε t^{−α}}`.
    Alternative,
    /// β = 1, finite i: truncated exponential.
    Generalized(u32),
    /// i = ∞: full one-parameter Mittag-Leffler function.
    MFractional(f64),
    /// Any (β, i).
    Truncated(MLParams),
}

impl DerivFamily {
    pub fn ml_params(&self) -> Result<MLParams> {
        match *self {
            DerivFamily::Conformable => MLParams::new(1.0, TruncationIndex::Finite(1)),
            DerivFamily::Alternative => MLParams::new(1.0, TruncationIndex::Infinity),
            DerivFamily::Generalized(i) => MLParams::new(1.0, TruncationIndex::Finite(i)),
            DerivFamily::MFractional(beta) => MLParams::new(beta, TruncationIndex::Infinity),
            DerivFamily::Truncated(p) => Ok(p),
        }
    }
}

impl fmt::Display for DerivFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivFamily::Conformable => f.write_str("conformable"),
            DerivFamily::Alternative => f.write_str("alternative"),
            DerivFamily::Generalized(i) => write!(f, "generalized({i})"),
            DerivFamily::MFractional(b) => write!(f, "m-fractional({b:?})"),
            DerivFamily::Truncated(p) => write!(f, "truncated({:?},{})", p.beta(), p.trunc()),
        }
    }
}

/// Parameters selecting `fam` at order `alpha`.
pub fn family_params(fam: DerivFamily, alpha: f64) -> Result<FracParams> {
    let ml = fam.ml_params()?;
    FracParams::new(alpha, ml.beta(), ml.trunc())
}
