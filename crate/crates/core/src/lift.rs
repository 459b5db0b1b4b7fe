//! Fourier coefficients, Petersson inner products over the fundamental
//! domain, and the pieces that make up the theta lift of `Λ_k`.
//!
//! Unfolding `⟨P^+_{k+1/2,D}, Λ_k(·, −z̄)⟩` reduces it to three computable
//! facts: the `D`-th Fourier coefficient of `Λ_k(·, z)` is
//! `D^{k−1/2} ω_{k+1,D}(z) e^{−2πDv}`, the Mellin integral
//! `∫_0^∞ v^{k−3/2} e^{−4πDv} dv = Γ(k − 1/2)/(4πD)^{k−1/2}`, and
//! `ω_{k+1,D}(−z̄) = conj(ω_{k+1,D}(z))`. Together they give
//! `Γ(k − 1/2)/(6(4π)^{k−1/2}) ω_{k+1,D}(z)`. The projection onto the plus
//! space is not constructed, so the inner product itself is never evaluated.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::maass_ops::SmoothFunction;
use crate::qforms::UpperHalfPoint;
use crate::quadrature::{integrate_half_line, periodic_trapezoid, GaussLegendre};
use crate::report::VerificationReport;
use crate::series::{hyperbolic_sums, omega, SeriesParams, Target};
use crate::summation::ComplexSum;
use crate::theta::{KernelCoefficients, KernelKind, SquarePolicy};
use crate::{Error, Result, C64};

/// A trapezoid Fourier coefficient with the change under node doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierValue {
    pub value: C64,
    pub aliasing: f64,
}

impl FourierValue {
    pub fn within(self, tol: f64) -> Result<C64> {
        if self.aliasing > tol {
            return Err(Error::TailAboveTolerance {
                tail: self.aliasing,
                tol,
            });
        }
        Ok(self.value)
    }
}

fn raw_coefficient<F: SmoothFunction + ?Sized>(f: &F, n: i64, y: f64, m: usize) -> Result<C64> {
    let base = UpperHalfPoint::new(0.0, y)?;
    let c = periodic_trapezoid(m, |x| {
        f.eval(base.translate(x)) * C64::new(0.0, -2.0 * PI * n as f64 * x).exp()
    });
    Ok(c * (2.0 * PI * n as f64 * y).exp())
}

/// `e^{2πny} (1/M) Σ_j F(x_j + iy) e^{−2πinx_j}`, the `n`-th coefficient of
/// `F = Σ c(n) qⁿ` measured at height `y`, compared against `2M` nodes.
pub fn fourier_coefficient<F: SmoothFunction + ?Sized>(f: &F, n: i64, y: f64, m: usize) -> Result<FourierValue> {
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one node".into()));
    }
    let coarse = raw_coefficient(f, n, y, m)?;
    let fine = raw_coefficient(f, n, y, 2 * m)?;
    Ok(FourierValue {
        value: fine,
        aliasing: (fine - coarse).norm(),
    })
}

/// The first `n ≥ 1` whose coefficient exceeds `1e−8·max(1, |c(1)|)`.
pub fn leading_fourier_index<F: SmoothFunction + ?Sized>(f: &F, y: f64, n_max: i64, m: usize) -> Result<(i64, C64)> {
    let c1 = fourier_coefficient(f, 1, y, m)?.value;
    let threshold = 1e-8 * c1.norm().max(1.0);
    for n in 1..=n_max {
        let c = if n == 1 {
            c1
        } else {
            fourier_coefficient(f, n, y, m)?.value
        };
        if c.norm() > threshold {
            return Ok((n, c));
        }
    }
    Err(Error::NotConverged {
        tail: 0.0,
        tol: threshold,
        radius: n_max as f64,
    })
}

/// Trapezoid coefficient from equispaced samples on `[0, 1)`, using every
/// `stride`-th one.
fn sampled_coefficient(values: &[C64], n: i64, y: f64, stride: usize) -> C64 {
    let count = values.len() / stride;
    let mut acc = ComplexSum::new();
    for (j, v) in values.iter().step_by(stride).enumerate() {
        acc.add(v * C64::new(0.0, -2.0 * PI * n as f64 * j as f64 / count as f64).exp());
    }
    acc.value() / count as f64 * (2.0 * PI * n as f64 * y).exp()
}

/// `ω_{k+1,D}(z) = Σ_{n≥1} (h(n) + c(n)/y) qⁿ` from the coefficients `c` of
/// `f_{k,D}` and `h` of the holomorphic part, extracted at a height where
/// the direct sums are accurate.
///
/// Far up the cusp `ω` is exponentially small while the individual terms of
/// the direct sum are not, so this is the only way to evaluate it there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaExpansion {
    pub f_coefficients: Vec<C64>,
    pub holomorphic_coefficients: Vec<C64>,
    pub height: f64,
    /// Largest change of any term `c(n)qⁿ` at the extraction height under
    /// node doubling; higher up these errors shrink like `e^{−2πn(y − height)}`.
    pub aliasing: f64,
}

impl OmegaExpansion {
    /// Coefficients `n = 1..=n_max` from `2m` samples at height `y`.
    pub fn extract(p: &SeriesParams, y: f64, n_max: usize, m: usize) -> Result<Self> {
        if m == 0 || n_max == 0 {
            return Err(Error::InvalidParameter(
                "need at least one node and one coefficient".into(),
            ));
        }
        let samples = (0..2 * m)
            .into_par_iter()
            .map(|j| {
                let z = UpperHalfPoint::new(j as f64 / (2 * m) as f64, y)?;
                let s = hyperbolic_sums(p, z, Target::Omega)?;
                Ok((s.f, s.holomorphic))
            })
            .collect::<Result<Vec<_>>>()?;
        let (fs, hs): (Vec<C64>, Vec<C64>) = samples.into_iter().unzip();
        let mut f_coefficients = Vec::with_capacity(n_max);
        let mut holomorphic_coefficients = Vec::with_capacity(n_max);
        let mut aliasing: f64 = 0.0;
        for n in 1..=n_max as i64 {
            for (values, out) in [(&fs, &mut f_coefficients), (&hs, &mut holomorphic_coefficients)] {
                let fine = sampled_coefficient(values, n, y, 1);
                let change = (fine - sampled_coefficient(values, n, y, 2)).norm();
                aliasing = aliasing.max(change * (-2.0 * PI * n as f64 * y).exp());
                out.push(fine);
            }
        }
        Ok(Self {
            f_coefficients,
            holomorphic_coefficients,
            height: y,
            aliasing,
        })
    }

    pub fn evaluate(&self, z: UpperHalfPoint) -> C64 {
        let q = z.q();
        let mut qn = C64::new(1.0, 0.0);
        let mut acc = ComplexSum::new();
        for (c, h) in self.f_coefficients.iter().zip(&self.holomorphic_coefficients) {
            qn *= q;
            acc.add((h + c / z.y()) * qn);
        }
        acc.value()
    }
}

/// Product Gauss–Legendre grid on `{|x| ≤ 1/2, |z| ≥ 1, y ≤ Y}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureGrid {
    pub nx: usize,
    pub ny: usize,
    pub y_cutoff: f64,
}

impl QuadratureGrid {
    /// Cutoff for weight-12 integrands, which decay like `y^{10} e^{−4πy}`.
    pub const DEFAULT_CUTOFF: f64 = 6.0;

    pub fn new(nx: usize, ny: usize, y_cutoff: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter("grid needs nodes in both directions".into()));
        }
        if !(y_cutoff > 1.0) {
            return Err(Error::InvalidParameter(format!("cutoff {y_cutoff} must exceed 1")));
        }
        Ok(Self { nx, ny, y_cutoff })
    }

    pub fn standard() -> Self {
        Self {
            nx: 48,
            ny: 48,
            y_cutoff: Self::DEFAULT_CUTOFF,
        }
    }

    /// The same grid with twice the nodes in each direction.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx,
            ny: 2 * self.ny,
            y_cutoff: self.y_cutoff,
        }
    }

    pub fn with_cutoff(&self, y_cutoff: f64) -> Self {
        Self {
            y_cutoff,
            ..self.clone()
        }
    }

    /// Lower edge of the column at `x`.
    pub fn arc(x: f64) -> f64 {
        (1.0 - x * x).sqrt()
    }
}

/// A Petersson product with an estimate of the omitted region `y > Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeterssonValue {
    pub value: C64,
    pub tail_estimate: f64,
}

/// `∫_F F(z) conj(G(z)) y^κ dx dy / y²` over the truncated fundamental
/// domain, for level-one inputs of which at least one is cuspidal.
///
/// The tail estimate takes the integrand at `Y` and `Y + 1/2` along the
/// centre line, fits an exponential and integrates it from `Y` to `∞`.
pub fn petersson_product<F, G>(kappa: u32, f: &F, g: &G, grid: &QuadratureGrid) -> Result<PeterssonValue>
where
    F: SmoothFunction + ?Sized,
    G: SmoothFunction + ?Sized,
{
    let gx = GaussLegendre::new(grid.nx)?;
    let gy = GaussLegendre::new(grid.ny)?;
    let kf = kappa as f64;
    let integrand = |x: f64, y: f64| -> C64 {
        let z = UpperHalfPoint::new(x, y).expect("grid lies above the arc");
        f.eval(z) * g.eval(z).conj() * y.powf(kf - 2.0)
    };
    let columns: Vec<(f64, f64)> = gx.mapped(-0.5, 0.5).collect();
    let values: Vec<C64> = columns
        .par_iter()
        .map(|&(x, wx)| {
            let mut col = ComplexSum::new();
            for (y, wy) in gy.mapped(QuadratureGrid::arc(x), grid.y_cutoff) {
                col.add(integrand(x, y) * wy);
            }
            col.value() * wx
        })
        .collect();
    let mut acc = ComplexSum::new();
    values.into_iter().for_each(|v| acc.add(v));

    let h0 = integrand(0.0, grid.y_cutoff).norm();
    let h1 = integrand(0.0, grid.y_cutoff + 0.5).norm();
    let tail_estimate = if h0 == 0.0 {
        0.0
    } else {
        let rate = 2.0 * (h0 / h1.max(f64::MIN_POSITIVE)).ln();
        if !(rate > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "integrand does not decay above y = {}",
                grid.y_cutoff
            )));
        }
        h0 / rate
    };
    Ok(PeterssonValue {
        value: acc.value(),
        tail_estimate,
    })
}

/// `Γ(κ − 1)/(4πm)^{κ−1}`, the factor in `⟨f, P_{κ,m}⟩ = factor · a_f(m)`.
pub fn petersson_coefficient_factor(kappa: u32, m: i64) -> f64 {
    let e = kappa as f64 - 1.0;
    gamma(e) / (4.0 * PI * m as f64).powf(e)
}

/// `∫_0^∞ v^{k+1/2} e^{−4πDv} dv/v²` by quadrature and in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinValue {
    pub numeric: f64,
    pub closed_form: f64,
    /// `|numeric − closed_form| / closed_form`.
    pub residual: f64,
}

pub fn mellin_weight_integral(k: u32, d: i64, rel_tol: f64) -> Result<MellinValue> {
    if d <= 0 {
        return Err(Error::InvalidParameter(format!("D = {d} must be positive")));
    }
    let s = k as f64 - 0.5;
    let scale = (4.0 * PI * d as f64).powf(s);
    // t = 4πDv turns the integral into Γ(s)/(4πD)^s.
    let q = integrate_half_line(|t| t.powf(s - 1.0) * (-t).exp(), 0.0, rel_tol)?;
    let numeric = q.value / scale;
    let closed_form = gamma(s) / scale;
    Ok(MellinValue {
        numeric,
        closed_form,
        residual: (numeric - closed_form).abs() / closed_form,
    })
}

/// `Γ(k − 1/2) / (6 (4π)^{k−1/2})`.
pub fn theta_lift_constant(k: u32) -> f64 {
    let s = k as f64 - 0.5;
    gamma(s) / (6.0 * (4.0 * PI).powf(s))
}

/// Numerical settings for [`theta_lift_components`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftParams {
    /// Height at which `Λ_k` is integrated over `u`.
    pub v: f64,
    pub d_max: i64,
    pub nodes: usize,
    /// Accuracy of the hyperbolic sums.
    pub tol: f64,
    pub extraction_tol: f64,
    pub mellin_tol: f64,
    pub symmetry_tol: f64,
}

impl Default for LiftParams {
    fn default() -> Self {
        Self {
            v: 0.5,
            d_max: 24,
            nodes: 256,
            tol: 1e-11,
            extraction_tol: 1e-7,
            mellin_tol: 1e-10,
            symmetry_tol: 1e-9,
        }
    }
}

/// The computable components of the theta lift identity at `(k, D, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftComponents {
    pub k: u32,
    pub d: i64,
    pub z: UpperHalfPoint,
    pub extracted: C64,
    pub expected: C64,
    pub extraction_residual: f64,
    pub mellin: MellinValue,
    pub symmetry_residual: f64,
    pub omega: C64,
    pub rhs_constant: f64,
    pub rhs: C64,
    pub params: LiftParams,
}

/// What the components establish, attached to every report.
pub const LIFT_SCOPE_NOTE: &str = "the lift identity follows from coefficient extraction, the Mellin integral and \
     the b -> -b symmetry after unfolding; the plus-space projection and the inner product itself are not computed";

pub fn theta_lift_components(k: u32, d: i64, z: UpperHalfPoint, params: LiftParams) -> Result<LiftComponents> {
    let p = SeriesParams::new(k as i64, d, params.tol)?;
    let d_max = params.d_max.max(d);
    let kernel = KernelCoefficients::build(
        KernelKind::Lambda,
        k,
        z,
        d_max,
        params.v,
        params.tol,
        SquarePolicy::Include,
    )?;
    let extracted = kernel.extract_coefficient(d, params.v, params.nodes)?;
    let om = omega(&p, z)?;
    let weight = (d as f64).powf(k as f64 - 0.5);
    let expected = om.value * weight * (-2.0 * PI * d as f64 * params.v).exp();
    let mellin = mellin_weight_integral(k, d, 1e-13)?;
    let om_reflected = omega(&p, z.reflect())?;
    let symmetry_residual = (om_reflected.value - om.value.conj()).norm();
    let rhs_constant = theta_lift_constant(k);
    Ok(LiftComponents {
        k,
        d,
        z,
        extracted,
        expected,
        extraction_residual: (extracted - expected).norm(),
        mellin,
        symmetry_residual,
        omega: om.value,
        rhs_constant,
        rhs: om.value * rhs_constant,
        params,
    })
}

impl LiftComponents {
    /// One report per component plus the assembled right-hand side.
    pub fn reports(&self, prefix: &str) -> Vec<VerificationReport> {
        let base = |name: &str, residual: f64, tol: f64| {
            VerificationReport::new(format!("{prefix}.{name}"), residual, tol)
                .param("k", self.k)
                .param("D", self.d)
                .param("z", [self.z.x(), self.z.y()])
                .param("v", self.params.v)
                .param("D_max", self.params.d_max.max(self.d))
                .param("nodes", self.params.nodes)
                .param("series_tol", self.params.tol)
        };
        let p = &self.params;
        let mut out = vec![
            base("coefficient_extraction", self.extraction_residual, p.extraction_tol)
                .param("extracted", self.extracted)
                .param("expected", self.expected)
                .note("square discriminants included in the kernel"),
            base("mellin", self.mellin.residual, p.mellin_tol)
                .param("numeric", self.mellin.numeric)
                .param("closed_form", self.mellin.closed_form),
            base("conjugation_symmetry", self.symmetry_residual, p.symmetry_tol),
        ];
        let worst = [
            self.extraction_residual / p.extraction_tol,
            self.mellin.residual / p.mellin_tol,
            self.symmetry_residual / p.symmetry_tol,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let mut assembled = base("assembled", worst, 1.0)
            .param("rhs_constant", self.rhs_constant)
            .param("omega", self.omega)
            .param("rhs", self.rhs)
            .note("residual is the largest component residual divided by its tolerance")
            .note(LIFT_SCOPE_NOTE);
        if self.k == 4 {
            assembled = assembled.note(format!("weight 8 has no cusp forms: |rhs| = {:.3e}", self.rhs.norm()));
        }
        out.push(assembled);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::delta;

    fn delta_eval() -> impl Fn(UpperHalfPoint) -> C64 + Sync {
        let d = delta(80).unwrap();
        move |z| d.evaluate(z).value
    }

    #[test]
    fn delta_coefficients() {
        let f = delta_eval();
        let c1 = fourier_coefficient(&f, 1, 1.0, 32).unwrap();
        assert!((c1.value - 1.0).norm() < 1e-9, "{:?}", c1);
        let c2 = fourier_coefficient(&f, 2, 1.0, 32).unwrap();
        assert!((c2.value + 24.0).norm() < 1e-8, "{:?}", c2);
        let c3 = fourier_coefficient(&f, 3, 1.3, 32).unwrap().value;
        assert!((c3 - 252.0).norm() < 1e-7);
        assert_eq!(leading_fourier_index(&f, 1.0, 5, 32).unwrap().0, 1);
    }

    #[test]
    fn omega_expansion_matches_direct_sum() {
        let p = SeriesParams::new(6, 5, 1e-12).unwrap();
        let e = OmegaExpansion::extract(&p, 1.0, 8, 32).unwrap();
        assert!(e.aliasing < 1e-8, "{}", e.aliasing);
        let z = UpperHalfPoint::new(0.2, 1.5).unwrap();
        let direct = hyperbolic_sums(&p, z, Target::Omega).unwrap().omega;
        assert!(
            (e.evaluate(z) - direct).norm() < 1e-9,
            "{} vs {}",
            e.evaluate(z),
            direct
        );
    }

    #[test]
    fn holomorphic_coefficients_follow_derivative() {
        // f' = −ik·holomorphic, so h(n) = −2πn c(n)/k.
        let p = SeriesParams::new(6, 8, 1e-12).unwrap();
        let e = OmegaExpansion::extract(&p, 1.0, 4, 32).unwrap();
        for (i, (c, h)) in e.f_coefficients.iter().zip(&e.holomorphic_coefficients).enumerate() {
            let n = (i + 1) as f64;
            let want = c * (-2.0 * PI * n / 6.0);
            assert!((h - want).norm() < 1e-7 * (1.0 + want.norm()), "n={n}: {h} vs {want}");
        }
    }

    #[test]
    fn gamma_matches_half_integer_recursion() {
        for k in [4u32, 6, 8, 12] {
            let mut g = PI.sqrt();
            let mut s = 0.5;
            while s < k as f64 - 0.5 {
                g *= s;
                s += 1.0;
            }
            assert!((gamma(k as f64 - 0.5) - g).abs() / g < 1e-13);
        }
    }

    #[test]
    fn mellin_examples() {
        for d in [5, 1] {
            assert!(mellin_weight_integral(6, d, 1e-13).unwrap().residual < 1e-10);
        }
        let a = mellin_weight_integral(6, 5, 1e-13).unwrap().numeric;
        let b = mellin_weight_integral(6, 20, 1e-13).unwrap().numeric;
        assert!((a / b - 4f64.powf(5.5)).abs() / 4f64.powf(5.5) < 1e-10);
    }

    #[test]
    fn delta_norm_is_cutoff_independent() {
        let f = delta_eval();
        let grid = QuadratureGrid::standard();
        let a = petersson_product(12, &f, &f, &grid.with_cutoff(5.0)).unwrap();
        let b = petersson_product(12, &f, &f, &grid.with_cutoff(7.0)).unwrap();
        assert!((a.value - b.value).norm() / b.value.norm() < 1e-8);
        // ⟨Δ, Δ⟩ ≈ 1.035362e−6
        assert!((b.value.re - 1.035_362e-6).abs() < 1e-11, "{:?}", b.value);
        let c = petersson_product(12, &f, &f, &grid.refined()).unwrap();
        assert!((c.value - b.value).norm() / b.value.norm() < 1e-6);
        assert!(a.tail_estimate > b.tail_estimate);
    }

    #[test]
    fn lift_constant() {
        let c = theta_lift_constant(6);
        assert!((c - gamma(5.5) / (6.0 * (4.0 * PI).powf(5.5))).abs() < 1e-20);
    }
}
