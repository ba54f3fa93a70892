use super::{require_higher_order, require_positive_t, FracParams};
use crate::error::{Error, Result};
use crate::func::RealFn;
use crate::special::ml_truncated;

/// Result of extrapolating a difference quotient to ε → 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    /// Smallest ε that entered the accepted extrapolant.
    pub eps_used: f64,
    /// Size of the last extrapolation increment; never negative.
    pub extrapolation_error: f64,
}

/// Deepest halving level of the ε schedule (levels 0..=20).
pub const MAX_LEVELS: usize = 20;
/// Accepted when `extrapolation_error <= LIMIT_RTOL * max(|value|, 1)`.
pub const LIMIT_RTOL: f64 = 1e-6;

fn accepted(e: &LimitEstimate) -> bool {
    e.value.is_finite() && e.extrapolation_error <= LIMIT_RTOL * e.value.abs().max(1.0)
}

/// Richardson extrapolation of `quotient(ε)` over ε_j = ε₀ 2^{−j}, assuming
/// an error expansion in integer powers of ε.
///
/// The tableau grows one row per level and the entry with the smallest
/// increment wins. Once that entry meets the acceptance tolerance, the sweep
/// stops as soon as the diagonal moves away from it by more than twice the
/// increment (round-off has taken over).
pub fn richardson_limit<Q>(mut quotient: Q, eps0: f64) -> Result<LimitEstimate>
where
    Q: FnMut(f64) -> Result<f64>,
{
    if !(eps0.is_finite() && eps0 > 0.0) {
        return Err(Error::param(
            "eps0",
            format!("must be a finite positive number, got {eps0}"),
        ));
    }
    let mut prev: Vec<f64> = Vec::new();
    let mut best: Option<LimitEstimate> = None;
    for j in 0..=MAX_LEVELS {
        let eps = eps0 * 0.5f64.powi(j as i32);
        let q = quotient(eps)?;
        if !q.is_finite() {
            return Err(Error::Convergence(format!(
                "difference quotient is not finite at eps = {eps:e}"
            )));
        }
        let mut row = Vec::with_capacity(j + 1);
        row.push(q);
        let mut factor = 1.0;
        for m in 1..=j {
            factor *= 2.0;
            let v = (factor * row[m - 1] - prev[m - 1]) / (factor - 1.0);
            let err = (v - row[m - 1]).abs().max((v - prev[m - 1]).abs());
            if best.is_none_or(|b| err <= b.extrapolation_error) {
                best = Some(LimitEstimate {
                    value: v,
                    eps_used: eps,
                    extrapolation_error: err,
                });
            }
            row.push(v);
        }
        if let Some(b) = best {
            if accepted(&b) && (row[j] - prev[j - 1]).abs() >= 2.0 * b.extrapolation_error {
                break;
            }
        }
        prev = row;
    }
    let best = best.expect("at least two levels are evaluated");
    if accepted(&best) {
        Ok(best)
    } else {
        Err(Error::Convergence(format!(
            "difference quotient does not settle: estimate {} with increment {:e}",
            best.value, best.extrapolation_error
        )))
    }
}

/// `[f(t · E(ε t^{−α})) − f(t)] / ε` at a single ε.
pub fn difference_quotient<F: RealFn + ?Sized>(f: &F, p: &FracParams, t: f64, eps: f64) -> Result<f64> {
    p.require_first_order()?;
    require_positive_t(t)?;
    let shifted = t * ml_truncated(eps * t.powf(-p.alpha()), p.ml())?;
    Ok((f.value(shifted)? - f.value(t)?) / eps)
}

/// Starting step of [`deriv_limit`]: `1e-2 t^α`.
pub fn initial_eps(p: &FracParams, t: f64) -> f64 {
    1e-2 * t.powf(p.alpha())
}

/// Limit-definition estimate of the derivative at `t`:
/// `[f(t · E(ε t^{−α})) − f(t)] / ε` extrapolated to ε → 0 from ε₀ = 1e-2 t^α.
pub fn deriv_limit<F: RealFn + ?Sized>(f: &F, p: &FracParams, t: f64) -> Result<LimitEstimate> {
    p.require_first_order()?;
    require_positive_t(t)?;
    let ml = p.ml();
    let ft = f.value(t)?;
    let t_neg_alpha = t.powf(-p.alpha());
    richardson_limit(
        |eps| {
            let shifted = t * ml_truncated(eps * t_neg_alpha, ml)?;
            Ok((f.value(shifted)? - ft) / eps)
        },
        initial_eps(p, t),
    )
}

/// Limit-definition estimate of the order-α derivative for n < α ≤ n + 1,
/// applied to `f^{(n)}` with the argument `t · E(ε t^{n−α})`.
pub fn deriv_higher_limit<G>(derivs: G, p: &FracParams, n: u32, t: f64) -> Result<LimitEstimate>
where
    G: Fn(f64, u32) -> f64,
{
    require_higher_order(p, n)?;
    require_positive_t(t)?;
    let ml = p.ml();
    let shift = f64::from(n) - p.alpha();
    let ft = derivs(t, n);
    let t_pow = t.powf(shift);
    richardson_limit(
        |eps| {
            let shifted = t * ml_truncated(eps * t_pow, ml)?;
            Ok((derivs(shifted, n) - ft) / eps)
        },
        1e-2 / t_pow,
    )
}
