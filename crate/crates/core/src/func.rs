//! Function carriers accepted by the operators.
//!
//! Plain closures work directly: `|t: f64| t * t` is a [`RealFn`] and
//! `|t: Dual| t * t` is a [`DualFn`]. Parsed [`Expr`] trees implement both.
//! Closures that can fail are wrapped in [`Fallible`].

use crate::error::Result;
use crate::expr::{Dual, Expr};

/// A real function of one real variable.
pub trait RealFn {
    fn value(&self, t: f64) -> Result<f64>;
}

/// A real function that also yields its exact first derivative.
pub trait DualFn {
    fn dual(&self, t: f64) -> Result<Dual>;

    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.dual(t)?.val)
    }
}

impl<F: Fn(f64) -> f64> RealFn for F {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self(t))
    }
}

impl<F: Fn(Dual) -> Dual> DualFn for F {
    fn dual(&self, t: f64) -> Result<Dual> {
        Ok(self(Dual::variable(t)))
    }
}

impl RealFn for Expr {
    fn value(&self, t: f64) -> Result<f64> {
        self.eval(t)
    }
}

impl DualFn for Expr {
    fn dual(&self, t: f64) -> Result<Dual> {
        self.eval_dual(t)
    }
}

/// Wraps a closure returning `Result`.
#[derive(Debug, Clone, Copy)]
pub struct Fallible<F>(pub F);

impl<F: Fn(f64) -> Result<f64>> RealFn for Fallible<F> {
    fn value(&self, t: f64) -> Result<f64> {
        (self.0)(t)
    }
}

impl<F: Fn(Dual) -> Result<Dual>> DualFn for Fallible<F> {
    fn dual(&self, t: f64) -> Result<Dual> {
        (self.0)(Dual::variable(t))
    }
}

/// Uses only the value part of a [`DualFn`].
#[derive(Debug, Clone, Copy)]
pub struct ValueOf<'a, F: ?Sized>(pub &'a F);

impl<F: DualFn + ?Sized> RealFn for ValueOf<'_, F> {
    fn value(&self, t: f64) -> Result<f64> {
        self.0.value(t)
    }
}
