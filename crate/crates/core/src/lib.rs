//! Truncated M-fractional calculus.
//!
//! The derivative of order α ∈ (0, 1) is built on the truncated
//! Mittag-Leffler function `ᵢE_β(z) = Σ_{k=0}^{i} z^k / Γ(βk + 1)`:
//!
//! ```text
//! D f(t) = lim_{ε→0} [ f(t · ᵢE_β(ε t^{−α})) − f(t) ] / ε = t^{1−α} f′(t) / Γ(β+1)
//! ```
//!
//! Alongside the derivative the crate provides the matching integral, linear
//! and general first-order ODE solvers, the series solution of the
//! fractional heat equation, and an expression language with forward-mode
//! differentiation so that all of these accept functions given as text.

// `!(x > y)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod expr;
pub mod fracderiv;
pub mod fracint;
pub mod func;
pub mod heat;
pub mod ode;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use expr::{parse, Dual, Expr};
pub use fracderiv::{deriv_closed, deriv_limit, DerivFamily, FracParams, LimitEstimate};
pub use fracint::mfrac_integral;
pub use func::{DualFn, Fallible, RealFn};
pub use heat::{solve_heat, HeatProblem, HeatSolution};
pub use ode::{solve_general, solve_linear, LinearOdeProblem, OdeSolution, Sign};
pub use quad::QuadratureResult;
pub use special::{gamma, ln_gamma, ml_truncated, MLParams, TruncationIndex};
