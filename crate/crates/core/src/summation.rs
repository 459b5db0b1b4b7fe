//! Neumaier-compensated accumulation.
//!
//! Every reduction over quadratic forms goes through these accumulators in
//! the canonical enumeration order, so results do not depend on thread count.

use crate::C64;

/// Neumaier compensated sum of `f64` values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of complex values, real and imaginary parts tracked apart.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: C64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline]
    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

impl Extend<C64> for ComplexSum {
    fn extend<I: IntoIterator<Item = C64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

pub fn sum_f64<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut s = CompensatedSum::new();
    s.extend(iter);
    s.value()
}

pub fn sum_c64<I: IntoIterator<Item = C64>>(iter: I) -> C64 {
    let mut s = ComplexSum::new();
    s.extend(iter);
    s.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum_f64(v), 2.0);
        let naive: f64 = v.iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn complex_parts_independent() {
        let v = [C64::new(1.0, 1e100), C64::new(1e100, 1.0), C64::new(-1e100, -1e100)];
        assert_eq!(sum_c64(v), C64::new(1.0, 1.0));
    }
}
