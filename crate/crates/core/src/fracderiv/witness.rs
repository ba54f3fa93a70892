//! Root searches that exhibit the points promised by the Rolle and
//! mean-value theorems for the truncated M-fractional derivative.

use super::{deriv_closed, require_positive_t, FracParams};
use crate::error::{Error, Result};
use crate::expr::Dual;
use crate::func::DualFn;

/// Interior sample points of the initial scan.
pub const SCAN_POINTS: usize = 1024;
/// A witness must satisfy its equation to this absolute residual.
pub const WITNESS_TOL: f64 = 1e-8;
const BISECTION_WIDTH: f64 = 1e-12;

fn check_interval(a: f64, b: f64) -> Result<()> {
    require_positive_t(a).map_err(|_| Error::param("a", format!("must be positive, got {a}")))?;
    if !(b.is_finite() && b > a) {
        return Err(Error::param("b", format!("must exceed a = {a}, got {b}")));
    }
    Ok(())
}

/// First c in (a, b), in increasing order, with |g(c)| ≤ [`WITNESS_TOL`].
fn first_root<G>(g: G, a: f64, b: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let h = (b - a) / (SCAN_POINTS + 1) as f64;
    let mut prev: Option<(f64, f64)> = None;
    for j in 1..=SCAN_POINTS {
        let t = a + h * j as f64;
        let gt = g(t)?;
        if let Some((tp, gp)) = prev {
            if gp * gt < 0.0 {
                if let Some(c) = bisect(&g, tp, gp, t)? {
                    return Ok(c);
                }
            }
        }
        if gt.abs() <= WITNESS_TOL {
            return Ok(t);
        }
        prev = Some((t, gt));
    }
    Err(Error::NotFound(format!(
        "no zero of the fractional derivative detected on ({a}, {b}); check the theorem's hypotheses"
    )))
}

/// Bisects a sign change down to [`BISECTION_WIDTH`]; `None` if the bracketed
/// point is a pole rather than a zero.
fn bisect<G>(g: &G, mut lo: f64, mut glo: f64, mut hi: f64) -> Result<Option<f64>>
where
    G: Fn(f64) -> Result<f64>,
{
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(Some(mid));
        }
        if gm * glo > 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let mut best: Option<(f64, f64)> = None;
    for c in [0.5 * (lo + hi), lo, hi] {
        let r = g(c)?.abs();
        if best.is_none_or(|(_, rb)| r < rb) {
            best = Some((c, r));
        }
    }
    Ok(best.filter(|&(_, r)| r <= WITNESS_TOL).map(|(c, _)| c))
}

/// Point c ∈ (a, b) with `D f(c) = 0` for f with f(a) = f(b).
///
/// The closed-form derivative is scanned on 1024 interior points; the first
/// sign change is refined by bisection, and a scan point where |D f| is
/// already below 1e-8 is accepted as is. Ties go to the smallest c.
pub fn rolle_witness<F: DualFn + ?Sized>(f: &F, a: f64, b: f64, p: &FracParams) -> Result<f64> {
    check_interval(a, b)?;
    p.require_first_order()?;
    let fa = f.value(a)?;
    let fb = f.value(b)?;
    if (fa - fb).abs() > 1e-12 * (1.0 + fa.abs()) {
        return Err(Error::Precondition(format!("f(a) = {fa} and f(b) = {fb} differ")));
    }
    first_root(|t| deriv_closed(f, p, t), a, b)
}

/// f minus a multiple of another function, as seen by the Rolle search.
struct Difference<'a, F: ?Sized, G> {
    f: &'a F,
    k: f64,
    g: G,
}

impl<F: DualFn + ?Sized, G: Fn(Dual) -> Result<Dual>> DualFn for Difference<'_, F, G> {
    fn dual(&self, t: f64) -> Result<Dual> {
        Ok(self.f.dual(t)? - self.k * (self.g)(Dual::variable(t))?)
    }
}

/// Point c ∈ (a, b) with `D f(c) = [(f(b) − f(a)) / (b^α/α − a^α/α)] / Γ(β+1)`.
///
/// The division by Γ(β+1) is what the closed form forces: D(t^α/α) equals
/// 1/Γ(β+1), so the auxiliary function `f − R t^α/α` vanishes at both ends
/// only with this normalisation. Found by a Rolle search on that function.
pub fn mvt_witness<F: DualFn + ?Sized>(f: &F, a: f64, b: f64, p: &FracParams) -> Result<f64> {
    check_interval(a, b)?;
    p.require_first_order()?;
    let alpha = p.alpha();
    let ratio = (f.value(b)? - f.value(a)?) / ((b.powf(alpha) - a.powf(alpha)) / alpha);
    let h = Difference {
        f,
        k: ratio,
        g: |t: Dual| Ok(t.powf(alpha) / alpha),
    };
    first_root(|t| deriv_closed(&h, p, t), a, b)
}

/// Point c ∈ (a, b) with `D f(c) / D g(c) = (f(b) − f(a)) / (g(b) − g(a))`,
/// returned as a zero of `D f − K D g`.
pub fn mvt_extension_witness<F, G>(f: &F, g: &G, a: f64, b: f64, p: &FracParams) -> Result<f64>
where
    F: DualFn + ?Sized,
    G: DualFn + ?Sized,
{
    check_interval(a, b)?;
    p.require_first_order()?;
    let dg = g.value(b)? - g.value(a)?;
    if dg == 0.0 {
        return Err(Error::Precondition("g(a) = g(b); the ratio is undefined".into()));
    }
    let k = (f.value(b)? - f.value(a)?) / dg;
    let h = Difference {
        f,
        k,
        g: |t: Dual| g.dual(t.val),
    };
    first_root(|t| deriv_closed(&h, p, t), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::TruncationIndex;
    use std::f64::consts::PI;

    fn params(alpha: f64, beta: f64) -> FracParams {
        FracParams::new(alpha, beta, TruncationIndex::Infinity).unwrap()
    }

    #[test]
    fn rolle_parabola() {
        let f = |t: Dual| (t - 1.0) * (t - 2.0);
        let c = rolle_witness(&f, 1.0, 2.0, &params(0.5, 1.0)).unwrap();
        assert!((c - 1.5).abs() < 1e-11, "{c}");
    }

    #[test]
    fn rolle_constant_returns_first_scan_point() {
        let c = rolle_witness(&|_: Dual| Dual::constant(2.0), 1.0, 2.0, &params(0.5, 1.0)).unwrap();
        assert_eq!(c, 1.0 + 1.0 / (SCAN_POINTS + 1) as f64);
    }

    #[test]
    fn rolle_sine() {
        let f = |t: Dual| (t * PI).sin();
        let c = rolle_witness(&f, 1.0, 3.0, &params(0.7, 2.0)).unwrap();
        assert!((c - 1.5).abs() < 1e-11 || (c - 2.5).abs() < 1e-11, "{c}");
        // smallest root wins
        assert!((c - 1.5).abs() < 1e-11);
    }

    #[test]
    fn rolle_precondition() {
        let err = rolle_witness(&|t: Dual| t, 1.0, 2.0, &params(0.5, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(rolle_witness(&|t: Dual| t, 0.0, 2.0, &params(0.5, 1.0)).is_err());
        assert!(rolle_witness(&|t: Dual| t, 2.0, 1.0, &params(0.5, 1.0)).is_err());
    }

    #[test]
    fn mvt_identity_function() {
        // t^α/α: every point works, the first scan point is returned
        let p = params(0.5, 1.0);
        let c = mvt_witness(&|t: Dual| t.powf(0.5) / 0.5, 1.0, 4.0, &p).unwrap();
        assert_eq!(c, 1.0 + 3.0 / (SCAN_POINTS + 1) as f64);
    }

    #[test]
    fn mvt_linear() {
        let c = mvt_witness(&|t: Dual| t, 1.0, 4.0, &params(0.5, 1.0)).unwrap();
        assert!((c - 2.25).abs() < 1e-10, "{c}");
    }

    #[test]
    fn mvt_gamma_factor_is_applied() {
        let p = params(0.5, 2.0);
        let f = |t: Dual| t * t * t;
        let c = mvt_witness(&f, 1.0, 3.0, &p).unwrap();
        let ratio = (27.0 - 1.0) / ((3f64.sqrt() - 1.0) / 0.5);
        let lhs = deriv_closed(&f, &p, c).unwrap();
        assert!((lhs - ratio / p.gamma_factor()).abs() <= WITNESS_TOL);
    }

    #[test]
    fn mvt_near_classical_order() {
        let p = params(1.0 - 1e-9, 1.0);
        let c = mvt_witness(&|t: Dual| t * t, 1.0, 2.0, &p).unwrap();
        assert!((c - 1.5).abs() < 1e-6, "{c}");
    }

    #[test]
    fn extension_witness() {
        let p = params(0.4, 1.5);
        let f = |t: Dual| t.exp();
        let g = |t: Dual| t * t;
        let c = mvt_extension_witness(&f, &g, 1.0, 2.0, &p).unwrap();
        let k = (2f64.exp() - 1f64.exp()) / 3.0;
        let ratio = deriv_closed(&f, &p, c).unwrap() / deriv_closed(&g, &p, c).unwrap();
        assert!((ratio - k).abs() < 1e-7);
        assert!(mvt_extension_witness(&f, &|_: Dual| Dual::constant(1.0), 1.0, 2.0, &p).is_err());
    }
}
