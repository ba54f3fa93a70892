//! The M-fractional integral `Γ(β+1) ∫_a^t f(x) x^{α−1} dx` and checks of
//! its inverse relation with the derivative.

use crate::error::{Error, Result};
use crate::fracderiv::{deriv_closed, deriv_limit, FracParams};
use crate::func::{DualFn, RealFn};
use crate::quad::{integrate, QuadratureResult, Tolerance};

/// Target accuracy of [`mfrac_integral`]: `max(1e-10, 1e-10 |value|)`.
pub const RESULT_TOL: Tolerance = Tolerance::new(1e-10, 1e-10);

/// Tolerance handed to the quadrature before the constant prefactor is
/// applied. It does not depend on β unless the prefactor is huge, so results
/// for different β differ only by the factor Γ(β+1).
fn inner_tolerance(prefactor: f64) -> Tolerance {
    let abs = if prefactor <= 1e3 { 1e-13 } else { 1e-10 / prefactor };
    Tolerance::new(abs, 1e-12)
}

/// Integral over [a, t] in either orientation, without range checks on the
/// endpoints beyond a ≥ 0 and t ≥ 0.
fn integral_between<F: RealFn + ?Sized>(f: &F, a: f64, t: f64, p: &FracParams) -> Result<QuadratureResult> {
    let alpha = p.alpha();
    let gamma = p.gamma_factor();
    let (prefactor, raw) = if a == 0.0 || t == 0.0 {
        // x = u^{1/α} turns x^{α−1} dx into du/α
        let prefactor = gamma / alpha;
        let inv = 1.0 / alpha;
        let r = integrate(
            |u: f64| f.value(u.powf(inv)),
            a.powf(alpha),
            t.powf(alpha),
            inner_tolerance(prefactor),
        );
        (prefactor, r)
    } else {
        let r = integrate(
            |x: f64| Ok(f.value(x)? * x.powf(alpha - 1.0)),
            a,
            t,
            inner_tolerance(gamma),
        );
        (gamma, r)
    };
    match raw {
        Ok(r) => Ok(r.scaled(prefactor)),
        Err(Error::ToleranceNotMet(best)) => Err(Error::ToleranceNotMet(best.scaled(prefactor))),
        Err(e) => Err(e),
    }
}

/// `Γ(β+1) ∫_a^t f(x) x^{α−1} dx` for 0 ≤ a ≤ t and 0 < α < 1.
///
/// With a = 0 the weight is singular; the substitution x = u^{1/α} removes
/// it before the adaptive rule runs.
pub fn mfrac_integral<F: RealFn + ?Sized>(f: &F, a: f64, t: f64, p: &FracParams) -> Result<QuadratureResult> {
    p.require_first_order()?;
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::param(
            "a",
            format!("must be a finite non-negative number, got {a}"),
        ));
    }
    if !(t.is_finite() && t >= a) {
        return Err(Error::param("t", format!("must satisfy t >= a = {a}, got {t}")));
    }
    let r = integral_between(f, a, t, p)?;
    if r.abs_error_estimate > RESULT_TOL.bound(r.value) {
        return Err(Error::ToleranceNotMet(r));
    }
    Ok(r)
}

/// s ↦ I f(s) with lower limit `a`, stored as `I f(t) + ∫_t^s` so that
/// nearby values are not swamped by quadrature noise of the full integral.
struct RunningIntegral<'a, F: ?Sized> {
    f: &'a F,
    p: &'a FracParams,
    anchor: f64,
    at_anchor: f64,
}

impl<F: RealFn + ?Sized> RealFn for RunningIntegral<'_, F> {
    fn value(&self, s: f64) -> Result<f64> {
        Ok(self.at_anchor + integral_between(self.f, self.anchor, s, self.p)?.value)
    }
}

/// `|D(I f)(t) − f(t)|`, with the derivative taken through the limit
/// definition of the numerically integrated function.
pub fn check_inverse_di<F: RealFn + ?Sized>(f: &F, a: f64, t: f64, p: &FracParams) -> Result<f64> {
    if !(t > a) {
        return Err(Error::param("t", format!("must exceed a = {a}, got {t}")));
    }
    let running = RunningIntegral {
        f,
        p,
        anchor: t,
        at_anchor: mfrac_integral(f, a, t, p)?.value,
    };
    let d = deriv_limit(&running, p, t)?;
    Ok((d.value - f.value(t)?).abs())
}

/// `|I(D f)(t) − f(t)|` for f with f(a) = 0 and t > a > 0.
pub fn check_inverse_id<F: DualFn + ?Sized>(f: &F, a: f64, t: f64, p: &FracParams) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::param("a", format!("must be positive, got {a}")));
    }
    if !(t.is_finite() && t > a) {
        return Err(Error::param("t", format!("must exceed a = {a}, got {t}")));
    }
    let fa = f.value(a)?;
    if fa.abs() > 1e-12 {
        return Err(Error::Precondition(format!("f(a) must vanish, got f({a}) = {fa}")));
    }
    let derivative = |s: f64| deriv_closed(f, p, s);
    let i = mfrac_integral(&crate::func::Fallible(derivative), a, t, p)?;
    Ok((i.value - f.value(t)?).abs())
}
