//! One-dimensional quadrature: Gauss–Legendre rules, the periodic trapezoid
//! rule and adaptive Gauss–Kronrod (7, 15) integration.

use std::f64::consts::PI;

use crate::summation::{CompensatedSum, ComplexSum};
use crate::{Error, Result, C64};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule; nodes by Newton iteration on `P_n` from the Tricomi
    /// initial guesses.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("Gauss–Legendre rule needs n ≥ 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely to `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (x, w) in self.mapped(lo, hi) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// `(1/M) Σ_j f(j/M)` over one period `[0, 1)`.
pub fn periodic_trapezoid<F: FnMut(f64) -> C64>(m: usize, mut f: F) -> C64 {
    let mut acc = ComplexSum::new();
    for j in 0..m {
        acc.add(f(j as f64 / m as f64));
    }
    acc.value() / m as f64
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// An integral with the sum of the per-interval Kronrod–Gauss differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadValue {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = KRONROD_WEIGHTS[7] * fc;
    let mut g = GAUSS7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * KRONROD_NODES[i];
        let s = f(mid - dx) + f(mid + dx);
        k += KRONROD_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += GAUSS7_WEIGHTS[i / 2] * s;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive G7K15 on `[a, b]` (finite), bisecting the interval with the
/// largest error until the total estimate is below `max(abs_tol,
/// rel_tol·|I|)`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadValue> {
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let value: f64 = {
            let mut s = CompensatedSum::new();
            parts.iter().for_each(|p| s.add(p.2));
            s.value()
        };
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadValue {
                value,
                error_estimate: err,
                intervals: parts.len(),
            });
        }
        if parts.len() >= max_intervals {
            return Err(Error::NotConverged {
                tail: err,
                tol: abs_tol.max(rel_tol * value.abs()),
                radius: parts.len() as f64,
            });
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let m = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, m);
        let (v2, e2) = gk15(&mut f, m, hi);
        parts.push((lo, m, v1, e1));
        parts.push((m, hi, v2, e2));
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    }
}

/// Adaptive integral over `[0, ∞)` through `t = s/(1 − s)`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(mut f: F, abs_tol: f64, rel_tol: f64) -> Result<QuadValue> {
    integrate_adaptive(
        |s| {
            if s >= 1.0 {
                return 0.0;
            }
            let t = s / (1.0 - s);
            let jac = 1.0 / ((1.0 - s) * (1.0 - s));
            let v = f(t) * jac;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
        4000,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(10).unwrap();
        let s: f64 = gl.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // Degree 19 is the exactness limit for 10 points.
        let v = gl.integrate(-1.0, 1.0, |x| x.powi(18));
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let v = gl.integrate(0.0, 2.0, |x| x.powi(3));
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_odd_size_is_symmetric() {
        let gl = GaussLegendre::new(7).unwrap();
        for i in 0..7 {
            assert!((gl.nodes[i] + gl.nodes[6 - i]).abs() < 1e-15);
            assert_eq!(gl.weights[i], gl.weights[6 - i]);
        }
        assert_eq!(gl.nodes[3], 0.0);
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic_functions() {
        let v = periodic_trapezoid(32, |x| {
            C64::new(0.0, 2.0 * PI * 3.0 * x).exp() * C64::new(0.0, -2.0 * PI * 3.0 * x).exp()
        });
        assert!((v - 1.0).norm() < 1e-15);
        let v = periodic_trapezoid(32, |x| C64::new(0.0, 2.0 * PI * 5.0 * x).exp());
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn adaptive_gamma_integral() {
        // ∫_0^∞ t^{4.5} e^{−t} dt = Γ(5.5)
        let q = integrate_half_line(|t| t.powf(4.5) * (-t).exp(), 0.0, 1e-13).unwrap();
        let gamma_5_5 = 52.342_777_784_553_52;
        assert!((q.value - gamma_5_5).abs() / gamma_5_5 < 1e-12, "{}", q.value);
    }

    #[test]
    fn adaptive_handles_endpoint_sqrt() {
        let q = integrate_adaptive(|x| x.sqrt(), 0.0, 1.0, 1e-12, 0.0, 1000).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-11);
    }
}
