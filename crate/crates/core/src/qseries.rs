//! Exact truncated Laurent series in `q = e^{2πiz}` with integer coefficients.
//!
//! A series stores coefficients for exponents `valuation ≤ n < precision`.
//! Arithmetic never extends precision: a product or quotient is known only as
//! far as both operands' relative precisions allow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::qforms::UpperHalfPoint;
use crate::summation::ComplexSum;
use crate::{Error, Result, C64};

/// Default number of known coefficients.
pub const DEFAULT_PRECISION: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentQSeries {
    valuation: i64,
    coeffs: Vec<BigInt>,
    precision: i64,
}

/// A point value of a q-series together with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QValue {
    pub value: C64,
    pub tail_bound: f64,
}

impl LaurentQSeries {
    /// Builds `Σ coeffs[i] q^{start+i}` known for exponents `< precision`.
    /// Coefficients at or beyond `precision` are dropped.
    pub fn from_coeffs(start: i64, coeffs: Vec<BigInt>, precision: i64) -> Self {
        let mut s = Self {
            valuation: start,
            coeffs,
            precision,
        };
        s.normalize();
        s
    }

    pub fn from_i64(start: i64, coeffs: &[i64], precision: i64) -> Self {
        Self::from_coeffs(start, coeffs.iter().map(|&c| BigInt::from(c)).collect(), precision)
    }

    pub fn zero(precision: i64) -> Self {
        Self {
            valuation: precision,
            coeffs: Vec::new(),
            precision,
        }
    }

    pub fn one(precision: i64) -> Self {
        Self::monomial(BigInt::one(), 0, precision)
    }

    pub fn monomial(coeff: BigInt, exponent: i64, precision: i64) -> Self {
        Self::from_coeffs(exponent, vec![coeff], precision)
    }

    fn normalize(&mut self) {
        let keep = (self.precision - self.valuation).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
                self.valuation += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.valuation = self.precision;
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (`precision` for the zero series).
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Coefficients are known for exponents strictly below this value.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    fn relative_precision(&self) -> i64 {
        self.precision - self.valuation
    }

    /// Coefficient of `q^n`, or `None` if `n` is beyond the known precision.
    pub fn coefficient(&self, n: i64) -> Option<BigInt> {
        if n >= self.precision {
            return None;
        }
        if n < self.valuation {
            return Some(BigInt::zero());
        }
        Some(
            self.coeffs
                .get((n - self.valuation) as usize)
                .cloned()
                .unwrap_or_default(),
        )
    }

    /// `(exponent, coefficient)` for every known nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.valuation + i as i64, c))
    }

    pub fn truncate(&self, precision: i64) -> Self {
        let mut s = self.clone();
        s.precision = s.precision.min(precision);
        s.normalize();
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        let start = self.valuation.min(other.valuation).min(precision);
        let len = (precision - start).max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for s in [self, other] {
            for (n, c) in s.terms() {
                if n < precision {
                    coeffs[(n - start) as usize] += c;
                }
            }
        }
        Self::from_coeffs(start, coeffs, precision)
    }

    pub fn neg(&self) -> Self {
        self.scalar(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        Self::from_coeffs(self.valuation, coeffs, self.precision)
    }

    pub fn scalar_i64(&self, k: i64) -> Self {
        self.scalar(&BigInt::from(k))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            let precision = if self.is_zero() && other.is_zero() {
                self.precision + other.precision
            } else if self.is_zero() {
                self.precision + other.valuation
            } else {
                other.precision + self.valuation
            };
            return Self::zero(precision);
        }
        let valuation = self.valuation + other.valuation;
        let rel = self.relative_precision().min(other.relative_precision());
        let len = rel.max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(valuation, coeffs, valuation + rel)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(i64::MAX / 4);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient. Fails if any coefficient division is inexact.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Precision(
                "division by a series with no known nonzero coefficient".into(),
            ));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.precision - other.valuation));
        }
        let valuation = self.valuation - other.valuation;
        let rel = self.relative_precision().min(other.relative_precision());
        let len = rel.max(0) as usize;
        let lead = &other.coeffs[0];
        let mut rem: Vec<BigInt> = (0..len)
            .map(|i| self.coeffs.get(i).cloned().unwrap_or_default())
            .collect();
        let mut out = vec![BigInt::zero(); len];
        for i in 0..len {
            let (quot, r) = rem[i].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            if !quot.is_zero() {
                for (j, b) in other.coeffs.iter().enumerate().skip(1).take(len - i - 1) {
                    rem[i + j] -= &quot * b;
                }
            }
            out[i] = quot;
        }
        Ok(Self::from_coeffs(valuation, out, valuation + rel))
    }

    /// `q d/dq`, which equals `(1/2πi) d/dz` on functions of `z`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(self.valuation + i as i64))
            .collect();
        Self::from_coeffs(self.valuation, coeffs, self.precision)
    }

    /// Evaluates `Σ cₙ qⁿ` at `z`, with a geometric bound on the tail.
    ///
    /// The bound assumes `|cₙ|^{1/n}` is non-increasing past the known range
    /// (true for every series built here: divisor sums and the subexponential
    /// growth of `j_n`). With `g` the largest `|cₙ|^{1/n}` over the upper half
    /// of the known window and `ρ = g|q|`, the tail is at most `ρ^N/(1−ρ)`.
    pub fn evaluate(&self, z: UpperHalfPoint) -> QValue {
        let q = z.q();
        let log_abs_q = -2.0 * std::f64::consts::PI * z.y();
        let mut acc = ComplexSum::new();
        let arg_q = 2.0 * std::f64::consts::PI * z.x();
        for (n, c) in self.terms() {
            let log_qn = n as f64 * log_abs_q;
            let term = match c.to_f64() {
                Some(cf) if cf.is_finite() && log_qn.abs() < 600.0 => q.powi(n as i32) * cf,
                // Coefficient or power outside f64 range: combine in log space.
                _ => {
                    let sign = if c.is_negative() { -1.0 } else { 1.0 };
                    let mag = (log_abs_bigint(c) + log_qn).exp();
                    C64::from_polar(sign * mag, (n as f64 * arg_q).rem_euclid(std::f64::consts::TAU))
                }
            };
            acc.add(term);
        }
        let n_prec = self.precision;
        let window_lo = (n_prec / 2).max(1).max(self.valuation);
        let mut log_g = f64::NEG_INFINITY;
        for n in window_lo..n_prec {
            if let Some(c) = self.coefficient(n).filter(|c| !c.is_zero()) {
                let lc = log_abs_bigint(&c) / n as f64;
                log_g = log_g.max(lc);
            }
        }
        let tail_bound = if log_g == f64::NEG_INFINITY {
            0.0
        } else {
            let log_rho = log_g + log_abs_q;
            if log_rho >= 0.0 {
                f64::INFINITY
            } else {
                (log_rho * n_prec as f64).exp() / (1.0 - log_rho.exp())
            }
        };
        QValue {
            value: acc.value(),
            tail_bound,
        }
    }

    /// [`evaluate`](Self::evaluate), failing when the tail exceeds `tol`.
    pub fn evaluate_checked(&self, z: UpperHalfPoint, tol: f64) -> Result<QValue> {
        let v = self.evaluate(z);
        if !(v.tail_bound <= tol) {
            return Err(Error::TailAboveTolerance {
                tail: v.tail_bound,
                tol,
            });
        }
        Ok(v)
    }
}

fn log_abs_bigint(c: &BigInt) -> f64 {
    let bits = c.bits();
    if bits < 1000 {
        c.abs().to_f64().unwrap().ln()
    } else {
        let shift = bits - 60;
        let top: BigInt = c.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// One `n:coefficient` line per known nonzero coefficient.
impl fmt::Display for LaurentQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.terms() {
            writeln!(f, "{n}:{c}")?;
        }
        Ok(())
    }
}

fn sigma(n: u64, power: u32) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(power);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(power);
            }
        }
        d += 1;
    }
    s
}

/// `E_2 = 1 − 24Σσ₁(n)qⁿ`, `E_4 = 1 + 240Σσ₃(n)qⁿ`, `E_6 = 1 − 504Σσ₅(n)qⁿ`,
/// known for exponents `< precision`.
pub fn eisenstein(weight: u32, precision: i64) -> Result<LaurentQSeries> {
    if precision < 1 {
        return Err(Error::Precision(format!("precision {precision} must be at least 1")));
    }
    let factor: i64 = match weight {
        2 => -24,
        4 => 240,
        6 => -504,
        w => return Err(Error::UnsupportedWeight(w as i64)),
    };
    let coeffs = (0..precision)
        .map(|n| {
            if n == 0 {
                BigInt::one()
            } else {
                sigma(n as u64, weight - 1) * factor
            }
        })
        .collect();
    Ok(LaurentQSeries::from_coeffs(0, coeffs, precision))
}

/// `Δ = (E_4³ − E_6²)/1728 = q − 24q² + 252q³ − …`.
pub fn delta(precision: i64) -> Result<LaurentQSeries> {
    let p = precision.max(2) + 1;
    let e4 = eisenstein(4, p)?;
    let e6 = eisenstein(6, p)?;
    let num = e4.pow(3).sub(&e6.pow(2));
    let d = num.div(&LaurentQSeries::from_i64(0, &[1728], i64::MAX / 4))?;
    Ok(d.truncate(precision))
}

/// Klein's `j = E_4³/Δ = q^{−1} + 744 + 196884q + …`.
pub fn klein_j(precision: i64) -> Result<LaurentQSeries> {
    let p = precision.max(1) + 2;
    let e4 = eisenstein(4, p)?;
    let j = e4.pow(3).div(&delta(p)?)?;
    Ok(j.truncate(precision))
}

/// The Faber basis `j_0, …, j_max`, each known for exponents `< precision`:
/// `j_n` is the unique modular function with `j_n = q^{−n} + O(q)`.
pub fn faber_basis(max: usize, precision: i64) -> Result<Vec<LaurentQSeries>> {
    if precision < 1 {
        return Err(Error::Precision(format!("precision {precision} must be at least 1")));
    }
    let work = precision + max as i64 + 1;
    let j = klein_j(work)?;
    let one = LaurentQSeries::one(work);
    let mut basis = vec![one.clone()];
    if max >= 1 {
        basis.push(j.sub(&one.scalar_i64(744)));
    }
    for n in 2..=max {
        let mut p = basis[1].mul(&basis[n - 1]);
        for e in (-(n as i64) + 1)..=0 {
            let c = p.coefficient(e).expect("within precision");
            if !c.is_zero() {
                p = p.sub(&basis[(-e) as usize].scalar(&c));
            }
        }
        basis.push(p);
    }
    Ok(basis.into_iter().map(|s| s.truncate(precision)).collect())
}

pub fn faber(n: usize, precision: i64) -> Result<LaurentQSeries> {
    Ok(faber_basis(n, precision)?.pop().expect("non-empty basis"))
}
