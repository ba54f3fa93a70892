use super::{Dual, Expr, Func};
use crate::error::{Error, Result};

/// Exponents this close to an integer are treated as integers.
const INTEGER_EXPONENT_TOL: f64 = 1e-12;

type Partial<T> = std::result::Result<T, String>;

fn integer_exponent(p: f64) -> Option<f64> {
    let n = p.round();
    ((p - n).abs() < INTEGER_EXPONENT_TOL).then_some(n)
}

fn div_value(a: f64, b: f64) -> Partial<f64> {
    if b == 0.0 {
        return Err("division by zero".into());
    }
    Ok(a / b)
}

fn pow_value(base: f64, exponent: f64) -> Partial<f64> {
    if let Some(n) = integer_exponent(exponent) {
        if n < 0.0 && base == 0.0 {
            return Err("zero raised to a negative power".into());
        }
        if n.abs() <= f64::from(i32::MAX) {
            return Ok(base.powi(n as i32));
        }
        return Ok(base.powf(n));
    }
    if base < 0.0 {
        return Err(format!("negative base {base} with non-integer exponent {exponent}"));
    }
    if base == 0.0 && exponent < 0.0 {
        return Err("zero raised to a negative power".into());
    }
    Ok(base.powf(exponent))
}

fn func_value(f: Func, a: f64) -> Partial<f64> {
    Ok(match f {
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Exp => a.exp(),
        Func::Ln => {
            if a <= 0.0 {
                return Err(format!("logarithm of non-positive value {a}"));
            }
            a.ln()
        }
        Func::Sqrt => {
            if a < 0.0 {
                return Err(format!("square root of negative value {a}"));
            }
            a.sqrt()
        }
        Func::Abs => a.abs(),
    })
}

/// Arithmetic needed by the tree walker. The value part of every `Dual`
/// operation goes through the same helpers as plain `f64`, so both
/// evaluators agree bit for bit.
trait Scalar: Copy {
    fn constant(c: f64) -> Self;
    fn variable(t: f64) -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn div(self, o: Self) -> Partial<Self>;
    fn pow(self, o: Self) -> Partial<Self>;
    fn apply(self, f: Func) -> Partial<Self>;
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn variable(t: f64) -> Self {
        t
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn neg(self) -> Self {
        -self
    }
    fn div(self, o: Self) -> Partial<Self> {
        div_value(self, o)
    }
    fn pow(self, o: Self) -> Partial<Self> {
        pow_value(self, o)
    }
    fn apply(self, f: Func) -> Partial<Self> {
        func_value(f, self)
    }
}

impl Scalar for Dual {
    fn constant(c: f64) -> Self {
        Dual::constant(c)
    }
    fn variable(t: f64) -> Self {
        Dual::variable(t)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn neg(self) -> Self {
        -self
    }
    fn div(self, o: Self) -> Partial<Self> {
        let val = div_value(self.val, o.val)?;
        Ok(Dual::new(val, (self.der * o.val - self.val * o.der) / (o.val * o.val)))
    }
    fn pow(self, o: Self) -> Partial<Self> {
        let val = pow_value(self.val, o.val)?;
        let der = if o.der == 0.0 {
            if self.der == 0.0 {
                0.0
            } else if let Some(n) = integer_exponent(o.val) {
                if n == 0.0 {
                    0.0
                } else {
                    n * pow_value(self.val, n - 1.0)? * self.der
                }
            } else if self.val == 0.0 {
                if o.val < 1.0 {
                    return Err(format!("zero base with exponent {} is not differentiable", o.val));
                }
                0.0
            } else {
                o.val * self.val.powf(o.val - 1.0) * self.der
            }
        } else {
            if self.val <= 0.0 {
                return Err(format!("variable exponent needs a positive base, got {}", self.val));
            }
            val * (o.der * self.val.ln() + o.val * self.der / self.val)
        };
        Ok(Dual::new(val, der))
    }
    fn apply(self, f: Func) -> Partial<Self> {
        let val = func_value(f, self.val)?;
        let a = self.val;
        let d = self.der;
        let der = match f {
            Func::Sin => d * a.cos(),
            Func::Cos => -d * a.sin(),
            Func::Exp => d * val,
            Func::Ln => d / a,
            Func::Sqrt | Func::Abs if a == 0.0 => {
                if d != 0.0 {
                    return Err(format!("{} is not differentiable at 0", f.name()));
                }
                0.0
            }
            Func::Sqrt => d / (2.0 * val),
            Func::Abs => d * a.signum(),
        };
        Ok(Dual::new(val, der))
    }
}

fn walk<S: Scalar>(e: &Expr, t: f64) -> Result<S> {
    let fail = |reason: String| Error::Domain {
        node: e.to_string(),
        reason,
    };
    Ok(match e {
        Expr::Constant(c) => S::constant(*c),
        Expr::Variable => S::variable(t),
        Expr::Add(a, b) => walk::<S>(a, t)?.add(walk(b, t)?),
        Expr::Sub(a, b) => walk::<S>(a, t)?.sub(walk(b, t)?),
        Expr::Mul(a, b) => walk::<S>(a, t)?.mul(walk(b, t)?),
        Expr::Div(a, b) => walk::<S>(a, t)?.div(walk(b, t)?).map_err(fail)?,
        Expr::Pow(a, b) => walk::<S>(a, t)?.pow(walk(b, t)?).map_err(fail)?,
        Expr::Neg(a) => walk::<S>(a, t)?.neg(),
        Expr::Call(f, a) => walk::<S>(a, t)?.apply(*f).map_err(fail)?,
    })
}

impl Expr {
    /// Real value at `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        walk(self, t)
    }

    /// Value and exact first derivative at `t`.
    pub fn eval_dual(&self, t: f64) -> Result<Dual> {
        walk(self, t)
    }
}
