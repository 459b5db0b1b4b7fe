//! The two-variable kernels
//!
//! ```text
//! Ω_k(τ, z) = Σ_{D>0} D^{k−1/2} f_{k,D}(z) e^{2πiDτ},
//! Λ_k(τ, z) = Σ_{D>0} D^{k−1/2} ω_{k+1,D}(z) e^{2πiDτ},
//! ```
//!
//! the Vignéras kernel `p` on `R³` whose theta series is `Λ_k`, and the
//! checks that `Λ_k(·, z)` is modular of weight `k + 1/2` on `Γ_0(4)` with
//! Fourier support on discriminants.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::jet::Jet2;
use crate::maass_ops::{slash, Weight};
use crate::qforms::{Discriminant, GroupElement, UpperHalfPoint};
use crate::quadrature::periodic_trapezoid;
use crate::series::{hyperbolic_sums, SeriesParams, Target};
use crate::summation::ComplexSum;
use crate::{Error, Result, C64};

/// The lattice `Z³` with `q(a, b, c) = b² − 4ac`, level 4.
pub struct VignerasSetup;

impl VignerasSetup {
    pub const DIMENSION: usize = 3;
    pub const LEVEL: i64 = 4;
    /// Gram matrix `A` with `q(w) = wᵀAw/2`.
    pub const GRAM: [[i64; 3]; 3] = [[0, 0, -4], [0, 2, 0], [-4, 0, 0]];
    /// `4·A^{−1}`, kept integral so that `A·A^{−1} = I` can be checked exactly.
    pub const GRAM_INV_TIMES_4: [[i64; 3]; 3] = [[0, 0, -1], [0, 2, 0], [-1, 0, 0]];

    pub fn gram_inverse() -> [[f64; 3]; 3] {
        Self::GRAM_INV_TIMES_4.map(|row| row.map(|v| v as f64 / 4.0))
    }

    /// `λ = k − 1`.
    pub fn eigenvalue(k: u32) -> f64 {
        k as f64 - 1.0
    }

    /// `A · (4A^{−1}) = 4I` in integer arithmetic.
    pub fn inverse_is_exact() -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                let s: i64 = (0..3).map(|l| Self::GRAM[i][l] * Self::GRAM_INV_TIMES_4[l][j]).sum();
                s == if i == j { 4 } else { 0 }
            })
        })
    }

    pub fn q(w: [i64; 3]) -> i64 {
        w[1] * w[1] - 4 * w[0] * w[2]
    }

    /// `wᵀAw/2`, which must agree with [`Self::q`].
    pub fn q_from_gram(w: [i64; 3]) -> i64 {
        let mut s = 0;
        for i in 0..3 {
            for j in 0..3 {
                s += w[i] * Self::GRAM[i][j] * w[j];
            }
        }
        s / 2
    }

    /// The bilinear form `⟨s, t⟩ = sᵀAt/2` on complex triples.
    pub fn pairing(s: [C64; 3], t: [C64; 3]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += s[i] * t[j] * Self::GRAM[i][j] as f64;
            }
        }
        acc * 0.5
    }

    /// `s(z) = (1/2, z, z²/2)`; `⟨s, s̄⟩ = |z|² − Re(z²) = 2y²`.
    pub fn s_vector(z: UpperHalfPoint) -> [C64; 3] {
        let zc = z.to_complex();
        [C64::new(0.5, 0.0), zc, zc * zc * 0.5]
    }
}

/// `p(w) = q(w)^{k−1/2} Q_z / Q(z,1)^{k+1}` for `q(w) > 0`, else `0`, where
/// `w = (a, b, c)` is read as the form `[a, b, c]` with real entries.
pub fn vigneras_p(k: u32, z: UpperHalfPoint, w: [f64; 3]) -> C64 {
    let [a, b, c] = w;
    let q = b * b - 4.0 * a * c;
    if q <= 0.0 {
        return C64::new(0.0, 0.0);
    }
    let (x, y) = (z.x(), z.y());
    let zc = z.to_complex();
    let qz = (a * (x * x + y * y) + b * x + c) / y;
    let qv = zc * zc * a + zc * b + c;
    qv.powi(-(k as i32 + 1)) * (q.powf(k as f64 - 0.5) * qz)
}

/// [`vigneras_p`] with value, gradient and Hessian in `(a, b, c)`.
pub fn vigneras_p_jet(k: u32, z: UpperHalfPoint, w: [f64; 3]) -> Jet2 {
    let q0 = w[1] * w[1] - 4.0 * w[0] * w[2];
    if q0 <= 0.0 {
        return Jet2::zero();
    }
    let [a, b, c] = Jet2::variables(w);
    let (x, y) = (z.x(), z.y());
    let zc = z.to_complex();
    let q = b * b - a * c * 4.0;
    let qz = (a * (x * x + y * y) + b * x + c) * (1.0 / y);
    let qv = a * (zc * zc) + b * zc + c;
    q.powf(k as f64 - 0.5) * qz * qv.powi(-(k as i32 + 1))
}

/// Smallest `q(w)` accepted by [`vigneras_residual`].
pub const LIGHT_CONE_MARGIN: f64 = 1e-3;

/// The Euler operator, `Δ^{(A)} = ⟨∂, A^{−1}∂⟩` and the residual of
/// Vignéras' equation at `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VignerasResidual {
    pub p: C64,
    pub euler: C64,
    pub laplace: C64,
    /// `E p − Δ^{(A)}p/4π − (k − 1)p`.
    pub residual: C64,
}

impl VignerasResidual {
    pub fn relative(&self) -> f64 {
        if self.p.norm() == 0.0 {
            self.residual.norm()
        } else {
            self.residual.norm() / self.p.norm()
        }
    }
}

pub fn vigneras_residual(k: u32, z: UpperHalfPoint, w: [f64; 3]) -> Result<VignerasResidual> {
    let q = w[1] * w[1] - 4.0 * w[0] * w[2];
    if !(q > LIGHT_CONE_MARGIN) {
        return Err(Error::InvalidParameter(format!(
            "q(w) = {q} is within {LIGHT_CONE_MARGIN} of the light cone"
        )));
    }
    Ok(residual_of(k, &vigneras_p_jet(k, z, w), w))
}

/// Residual at any `w`, including the zero branch `q(w) ≤ 0`.
pub fn vigneras_residual_any(k: u32, z: UpperHalfPoint, w: [f64; 3]) -> VignerasResidual {
    residual_of(k, &vigneras_p_jet(k, z, w), w)
}

fn residual_of(k: u32, p: &Jet2, w: [f64; 3]) -> VignerasResidual {
    let euler = p.euler(w);
    let laplace = p.contract_hessian(&VignerasSetup::gram_inverse());
    let residual = euler - laplace / (4.0 * PI) - p.value * VignerasSetup::eigenvalue(k);
    VignerasResidual {
        p: p.value,
        euler,
        laplace,
        residual,
    }
}

/// Which coefficient functions a kernel carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelKind {
    /// `Ω_k`, coefficients `f_{k,D}(z)`.
    Omega,
    /// `Λ_k`, coefficients `ω_{k+1,D}(z)`.
    Lambda,
}

/// Whether square `D` contribute to a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SquarePolicy {
    Include,
    Exclude,
}

/// One coefficient `D^{k−1/2} g_D(z)` of a kernel with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelTerm {
    pub d: i64,
    pub coefficient: C64,
    pub error_bound: f64,
}

/// The coefficients of `Ω_k(·, z)` or `Λ_k(·, z)` for `0 < D ≤ D_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCoefficients {
    pub kind: KernelKind,
    pub k: u32,
    pub z: UpperHalfPoint,
    pub d_max: i64,
    pub policy: SquarePolicy,
    pub terms: Vec<KernelTerm>,
}

/// A kernel value at `τ`: the partial sum, the sum of the per-coefficient
/// error bounds, and the size of the last included term (the D-truncation
/// indicator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: C64,
    pub coefficient_error: f64,
    pub last_term: f64,
}

impl KernelCoefficients {
    /// Computes every coefficient so that its contribution at heights
    /// `v ≥ v_min` is accurate to `tol / D_max`.
    pub fn build(
        kind: KernelKind,
        k: u32,
        z: UpperHalfPoint,
        d_max: i64,
        v_min: f64,
        tol: f64,
        policy: SquarePolicy,
    ) -> Result<Self> {
        if d_max < 1 {
            return Err(Error::InvalidParameter(format!("D_max = {d_max} must be positive")));
        }
        if !(v_min > 0.0) {
            return Err(Error::InvalidParameter(format!("v_min = {v_min} must be positive")));
        }
        let discs = Discriminant::up_to(d_max, policy == SquarePolicy::Include);
        let target = match kind {
            KernelKind::Omega => Target::F,
            KernelKind::Lambda => Target::Omega,
        };
        let terms: Result<Vec<KernelTerm>> = discs
            .par_iter()
            .map(|&disc| {
                let d = disc.get();
                let weight = (d as f64).powf(k as f64 - 0.5);
                let damp = (-2.0 * PI * d as f64 * v_min).exp();
                let inner_tol = (tol / (d_max as f64 * weight * damp)).min(1e-2);
                let p = SeriesParams::with_discriminant(k as i64, disc, inner_tol)?;
                let s = hyperbolic_sums(&p, z, target)?;
                let value = match kind {
                    KernelKind::Omega => s.f,
                    KernelKind::Lambda => s.omega,
                };
                Ok(KernelTerm {
                    d,
                    coefficient: value * weight,
                    error_bound: s.tail(target) * weight,
                })
            })
            .collect();
        Ok(Self {
            kind,
            k,
            z,
            d_max,
            policy,
            terms: terms?,
        })
    }

    pub fn coefficient(&self, d: i64) -> C64 {
        self.terms
            .iter()
            .find(|t| t.d == d)
            .map(|t| t.coefficient)
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// The partial sum at `τ`, in increasing-`D` order.
    pub fn evaluate(&self, tau: UpperHalfPoint) -> KernelValue {
        let qt = tau.q();
        let mut acc = ComplexSum::new();
        let mut err = 0.0;
        let mut last = 0.0;
        for t in &self.terms {
            let e = qt.powi(t.d as i32);
            let term = t.coefficient * e;
            acc.add(term);
            err += t.error_bound * e.norm();
            last = term.norm();
        }
        KernelValue {
            value: acc.value(),
            coefficient_error: err,
            last_term: last,
        }
    }

    /// [`Self::evaluate`], failing if the last included term exceeds `tol`.
    pub fn evaluate_checked(&self, tau: UpperHalfPoint, tol: f64) -> Result<KernelValue> {
        let v = self.evaluate(tau);
        if v.last_term > tol {
            return Err(Error::TailAboveTolerance { tail: v.last_term, tol });
        }
        Ok(v)
    }

    /// `∫_0^1 K(u + iv) e^{−2πinu} du` by the `m`-node trapezoid rule.
    pub fn extract_coefficient(&self, n: i64, v: f64, m: usize) -> Result<C64> {
        let tau0 = UpperHalfPoint::new(0.0, v)?;
        Ok(periodic_trapezoid(m, |u| {
            self.evaluate(tau0.translate(u)).value * C64::new(0.0, -2.0 * PI * n as f64 * u).exp()
        }))
    }

    /// Indices `n ≡ 2, 3 (mod 4)` up to `D_max` whose extracted coefficient
    /// at height `v` exceeds `tol` in magnitude.
    pub fn plus_space_violations(&self, v: f64, tol: f64) -> Result<Vec<(i64, f64)>> {
        let mut out = Vec::new();
        for n in 1..=self.d_max {
            if matches!(n.rem_euclid(4), 2 | 3) {
                let c = self.extract_coefficient(n, v, PLUS_SPACE_NODES)?.norm();
                if c > tol {
                    out.push((n, c));
                }
            }
        }
        Ok(out)
    }

    /// `|(K|_{k+1/2} g)(τ) − K(τ)|`, requiring the truncation indicator to be
    /// below `tol` at both `τ` and `gτ`.
    pub fn half_integral_modularity_residual(&self, g: &GroupElement, tau: UpperHalfPoint, tol: f64) -> Result<f64> {
        self.evaluate_checked(tau, tol)?;
        self.evaluate_checked(g.mobius(tau), tol)?;
        let kernel = |t: UpperHalfPoint| self.evaluate(t).value;
        let lhs = slash(Weight::half_integral(self.k as i64), g, &kernel, tau)?;
        Ok((lhs - kernel(tau)).norm())
    }
}

/// Trapezoid nodes for coefficient extraction.
pub const PLUS_SPACE_NODES: usize = 256;

/// A point on the isometric circle `|4τ + 1| = 1` of `[[1,0],[4,1]]` at
/// height `v ≤ 1/4`; the sign picks the branch `Re τ ≷ −1/4`.
pub fn isometric_circle_point(v: f64, right: bool) -> Result<UpperHalfPoint> {
    let s = 4.0 * v;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "height {v} is not on the isometric circle"
        )));
    }
    let c = (1.0 - s * s).sqrt();
    let x = -0.25 + if right { c } else { -c } / 4.0;
    UpperHalfPoint::new(x, v)
}
