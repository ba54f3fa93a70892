use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value and first derivative with respect to the single variable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub val: f64,
    pub der: f64,
}

impl Dual {
    pub const fn new(val: f64, der: f64) -> Self {
        Dual { val, der }
    }

    /// The variable itself: derivative seeded to one.
    pub const fn variable(t: f64) -> Self {
        Dual { val: t, der: 1.0 }
    }

    pub const fn constant(c: f64) -> Self {
        Dual { val: c, der: 0.0 }
    }

    pub fn sin(self) -> Self {
        Dual::new(self.val.sin(), self.der * self.val.cos())
    }

    pub fn cos(self) -> Self {
        Dual::new(self.val.cos(), -self.der * self.val.sin())
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        Dual::new(e, self.der * e)
    }

    pub fn ln(self) -> Self {
        Dual::new(self.val.ln(), self.der / self.val)
    }

    pub fn sqrt(self) -> Self {
        let s = self.val.sqrt();
        Dual::new(s, self.der / (2.0 * s))
    }

    pub fn abs(self) -> Self {
        Dual::new(self.val.abs(), self.der * self.val.signum())
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dual::constant(1.0);
        }
        Dual::new(self.val.powi(n), f64::from(n) * self.val.powi(n - 1) * self.der)
    }

    pub fn powf(self, p: f64) -> Self {
        Dual::new(self.val.powf(p), p * self.val.powf(p - 1.0) * self.der)
    }
}

impl From<f64> for Dual {
    fn from(c: f64) -> Self {
        Dual::constant(c)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.val + o.val, self.der + o.der)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.val - o.val, self.der - o.der)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.val * o.val, self.der * o.val + self.val * o.der)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(
            self.val / o.val,
            (self.der * o.val - self.val * o.der) / (o.val * o.val),
        )
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.val, -self.der)
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<f64> for Dual {
            type Output = Dual;
            fn $method(self, o: f64) -> Dual {
                $tr::$method(self, Dual::constant(o))
            }
        }
        impl $tr<Dual> for f64 {
            type Output = Dual;
            fn $method(self, o: Dual) -> Dual {
                $tr::$method(Dual::constant(self), o)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);
