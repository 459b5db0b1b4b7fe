//! Second-order forward-mode jets in three variables.
//!
//! A [`Jet2`] carries a complex value, its gradient and its Hessian with
//! respect to three real inputs. Arithmetic propagates all three exactly (up
//! to rounding), so differential operators of order ≤ 2 can be applied to
//! closed-form expressions without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::C64;

const N: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: C64,
    pub grad: [C64; N],
    pub hess: [[C64; N]; N],
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

impl Jet2 {
    pub fn constant(value: C64) -> Self {
        Self {
            value,
            grad: [ZERO; N],
            hess: [[ZERO; N]; N],
        }
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    /// The coordinate function `w_i` evaluated at `value`.
    pub fn variable(i: usize, value: f64) -> Self {
        let mut j = Self::constant(C64::new(value, 0.0));
        j.grad[i] = C64::new(1.0, 0.0);
        j
    }

    /// Seeds all three coordinates at `w`.
    pub fn variables(w: [f64; N]) -> [Self; N] {
        [
            Self::variable(0, w[0]),
            Self::variable(1, w[1]),
            Self::variable(2, w[2]),
        ]
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = *self;
        out.value *= k;
        for i in 0..N {
            out.grad[i] *= k;
            for j in 0..N {
                out.hess[i][j] *= k;
            }
        }
        out
    }

    /// Chain rule for a scalar function `φ` with `φ(v)`, `φ'(v)`, `φ''(v)` given.
    pub fn compose(&self, f0: C64, f1: C64, f2: C64) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..N {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..N {
            for j in 0..N {
                out.hess[i][j] = f2 * (self.grad[i] * self.grad[j]) + f1 * self.hess[i][j];
            }
        }
        out
    }

    /// `self^e` for a real exponent, principal branch.
    pub fn powf(&self, e: f64) -> Self {
        let v = self.value;
        let f0 = v.powf(e);
        let f1 = v.powf(e - 1.0) * e;
        let f2 = v.powf(e - 2.0) * (e * (e - 1.0));
        self.compose(f0, f1, f2)
    }

    pub fn powi(&self, e: i32) -> Self {
        let v = self.value;
        let ef = e as f64;
        self.compose(v.powi(e), v.powi(e - 1) * ef, v.powi(e - 2) * (ef * (ef - 1.0)))
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    /// `Σ_i w_i ∂_i f`, the Euler operator.
    pub fn euler(&self, w: [f64; N]) -> C64 {
        (0..N).map(|i| self.grad[i] * w[i]).sum()
    }

    /// `⟨∂, M ∂⟩ f = Σ_ij M_ij ∂_i∂_j f`.
    pub fn contract_hessian(&self, m: &[[f64; N]; N]) -> C64 {
        let mut acc = ZERO;
        for i in 0..N {
            for j in 0..N {
                acc += self.hess[i][j] * m[i][j];
            }
        }
        acc
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(mut self, o: Jet2) -> Jet2 {
        self.value += o.value;
        for i in 0..N {
            self.grad[i] += o.grad[i];
            for j in 0..N {
                self.hess[i][j] += o.hess[i][j];
            }
        }
        self
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let mut out = Jet2::constant(self.value * o.value);
        for i in 0..N {
            out.grad[i] = self.grad[i] * o.value + self.value * o.grad[i];
        }
        for i in 0..N {
            for j in 0..N {
                // The cross terms are written symmetrically so that
                // hess[i][j] and hess[j][i] are bitwise equal.
                out.hess[i][j] = self.hess[i][j] * o.value
                    + self.value * o.hess[i][j]
                    + (self.grad[i] * o.grad[j] + self.grad[j] * o.grad[i]);
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Mul<C64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: C64) -> Jet2 {
        self.scale(k)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(C64::new(k, 0.0))
    }
}

impl Add<C64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, k: C64) -> Jet2 {
        self.value += k;
        self
    }
}
