//! Point evaluators for the hyperbolic Poincaré series
//! `f_{k,D}(z) = Σ_Q Q(z,1)^{−k}`, the weak Maass form
//! `ω_{k+1,D}(z) = Σ_Q Q_z Q(z,1)^{−k−1}`, its holomorphic part, and the
//! objects they are compared against (`E_2^*`, the generating function of the
//! `j_n`, divisor modular forms, exponential Poincaré series).
//!
//! # Truncation
//!
//! Sums run over `{Q ∈ Q_D : |Q(z,1)| ≤ R}`. The radius doubles until the
//! extrapolated tail of `Σ|Q(z,1)|^{−k}` is below the requested tolerance.
//! With `A(R)` that absolute sum and `α = k − 2` (lattice-point count
//! `≪ R²` against terms of size `R^{−k}`), the tail beyond `R_n` is bounded by
//! `max(A(R_n) − A(R_{n−1}), 2^{−α}(A(R_{n−1}) − A(R_{n−2}))) / (2^α − 1)`.
//! Since `|Q_z| ≤ |Q(z,1)|/y` and `|Q'(z,1)| ≤ 2|Q(z,1)|/y`, the tails of `ω`
//! and of the holomorphic part are at most `1/y` and `2/y` times that bound.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::qforms::{enumerate_bounded_any, Discriminant, QForm, UpperHalfPoint};
use crate::qseries::{self, LaurentQSeries, QValue, DEFAULT_PRECISION};
use crate::summation::{CompensatedSum, ComplexSum};
use crate::{Error, Result, C64};

/// Upper limit on the number of `(a, b)` pairs scanned by one enumeration.
const MAX_BOX: f64 = 6.0e8;

/// Parameters shared by the hyperbolic sums: weight `k` (even, `> 2`),
/// discriminant `D`, absolute target accuracy `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesParams {
    k: u32,
    disc: Discriminant,
    tol: f64,
}

impl SeriesParams {
    /// Non-square `D` only.
    pub fn new(k: i64, d: i64, tol: f64) -> Result<Self> {
        Self::with_discriminant(k, Discriminant::new(d)?, tol)
    }

    pub fn with_discriminant(k: i64, disc: Discriminant, tol: f64) -> Result<Self> {
        if k <= 2 || k % 2 != 0 || k > 64 {
            return Err(Error::InvalidWeight(k));
        }
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
        }
        Ok(Self { k: k as u32, disc, tol })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn discriminant(&self) -> Discriminant {
        self.disc
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(&self, tol: f64) -> Self {
        Self { tol, ..*self }
    }
}

/// A truncated sum with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedValue {
    pub value: C64,
    pub tail_bound: f64,
    pub radius_used: f64,
    pub terms: usize,
}

/// Which of the simultaneously computed sums drives the stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    F,
    Omega,
    Holomorphic,
    FPrime,
}

/// `f`, `ω`, the holomorphic part and `f'` from one pass over the same forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicSums {
    pub f: C64,
    pub omega: C64,
    pub holomorphic: C64,
    /// `d/dz f_{k,D} = −k Σ Q'(z,1)/Q(z,1)^{k+1}`.
    pub f_prime: C64,
    /// Tail bound for `f`; the other tails follow from [`Self::tail`].
    pub f_tail: f64,
    pub radius: f64,
    pub terms: usize,
    k: u32,
    y: f64,
}

impl HyperbolicSums {
    pub fn tail(&self, target: Target) -> f64 {
        self.f_tail * tail_scale(target, self.k, self.y)
    }

    pub fn truncated(&self, target: Target) -> TruncatedValue {
        let value = match target {
            Target::F => self.f,
            Target::Omega => self.omega,
            Target::Holomorphic => self.holomorphic,
            Target::FPrime => self.f_prime,
        };
        TruncatedValue {
            value,
            tail_bound: self.tail(target),
            radius_used: self.radius,
            terms: self.terms,
        }
    }
}

fn tail_scale(target: Target, k: u32, y: f64) -> f64 {
    match target {
        Target::F => 1.0,
        Target::Omega => 1.0 / y,
        Target::Holomorphic => 2.0 / y,
        Target::FPrime => 2.0 * k as f64 / y,
    }
}

struct RawSums {
    f: C64,
    omega: C64,
    holomorphic: C64,
    abs: f64,
}

fn sum_over(forms: &[QForm], k: u32, z: UpperHalfPoint) -> RawSums {
    let mut f = ComplexSum::new();
    let mut om = ComplexSum::new();
    let mut hol = ComplexSum::new();
    let mut abs = CompensatedSum::new();
    let minus_i = C64::new(0.0, -1.0);
    for q in forms {
        let qv = q.evaluate(z);
        let inv_k = qv.powi(-(k as i32));
        let inv_k1 = inv_k / qv;
        f.add(inv_k);
        om.add(inv_k1 * q.geodesic_invariant(z));
        hol.add(minus_i * q.z_derivative(z) * inv_k1);
        abs.add(qv.norm_sqr().powf(-(k as f64) / 2.0));
    }
    RawSums {
        f: f.value(),
        omega: om.value(),
        holomorphic: hol.value(),
        abs: abs.value(),
    }
}

/// Adaptive evaluation of all four hyperbolic sums at `z`, stopping when the
/// tail for `target` is at most `p.tol()`.
pub fn hyperbolic_sums(p: &SeriesParams, z: UpperHalfPoint, target: Target) -> Result<HyperbolicSums> {
    let k = p.k;
    let y = z.y();
    let d = p.disc.get() as f64;
    let alpha = (k - 2) as f64;
    let growth = 2f64.powf(alpha);
    let scale = tail_scale(target, k, y);

    let mut radius = 4.0 * d.sqrt() * y;
    let mut history: Vec<f64> = Vec::new();
    loop {
        let box_size = (radius / (y * y) + 1.0) * (2.0 * radius / y + 1.0);
        if box_size > MAX_BOX {
            let tail = last_tail(&history, growth).unwrap_or(f64::INFINITY) * scale;
            return Err(Error::NotConverged {
                tail,
                tol: p.tol,
                radius,
            });
        }
        let forms = enumerate_bounded_any(p.disc, z, radius)?;
        if forms.is_empty() {
            // Below the smallest |Q(z,1)| nothing is known about the tail yet.
            history.clear();
            radius *= 2.0;
            continue;
        }
        let raw = sum_over(&forms, k, z);
        history.push(raw.abs);
        if let Some(tail) = last_tail(&history, growth) {
            let tail_target = tail * scale;
            if history.len() >= 3 && tail_target <= p.tol {
                let kf = k as f64;
                return Ok(HyperbolicSums {
                    f: raw.f,
                    omega: raw.omega,
                    // Σ Q'/Q^{k+1} = i·holomorphic
                    f_prime: raw.holomorphic * C64::new(0.0, -kf),
                    holomorphic: raw.holomorphic,
                    f_tail: tail,
                    radius,
                    terms: forms.len(),
                    k,
                    y,
                });
            }
        }
        radius *= 2.0;
    }
}

fn last_tail(history: &[f64], growth: f64) -> Option<f64> {
    let n = history.len();
    if n < 2 {
        return None;
    }
    let delta = history[n - 1] - history[n - 2];
    let prev = if n >= 3 {
        (history[n - 2] - history[n - 3]) / growth
    } else {
        0.0
    };
    Some(delta.max(prev).max(0.0) / (growth - 1.0))
}

/// `f_{k,D}(z) = Σ_{Q ∈ Q_D} Q(z,1)^{−k}`, a cusp form of weight `2k`.
pub fn f_hyperbolic(p: &SeriesParams, z: UpperHalfPoint) -> Result<TruncatedValue> {
    Ok(hyperbolic_sums(p, z, Target::F)?.truncated(Target::F))
}

/// `ω_{k+1,D}(z) = Σ_{Q ∈ Q_D} Q_z / Q(z,1)^{k+1}`.
pub fn omega(p: &SeriesParams, z: UpperHalfPoint) -> Result<TruncatedValue> {
    Ok(hyperbolic_sums(p, z, Target::Omega)?.truncated(Target::Omega))
}

/// `−i Σ Q'(z,1)/Q(z,1)^{k+1}`; `ω = holomorphic_part + f/y`.
pub fn holomorphic_part(p: &SeriesParams, z: UpperHalfPoint) -> Result<TruncatedValue> {
    Ok(hyperbolic_sums(p, z, Target::Holomorphic)?.truncated(Target::Holomorphic))
}

/// The hyperbolic sums over a fixed, frozen set of forms.
///
/// Differentiating a truncated sum over a fixed set is differentiating a
/// finite sum of smooth functions, which is what the finite-difference checks
/// of the Laplace eigenvalue equation need.
#[derive(Debug, Clone)]
pub struct FrozenForms {
    k: u32,
    forms: Vec<QForm>,
}

impl FrozenForms {
    /// Converges at `centre`, then keeps every form inside twice that radius.
    pub fn around(p: &SeriesParams, centre: UpperHalfPoint, target: Target) -> Result<Self> {
        let s = hyperbolic_sums(p, centre, target)?;
        let forms = enumerate_bounded_any(p.disc, centre, 2.0 * s.radius)?;
        Ok(Self { k: p.k, forms })
    }

    pub fn from_forms(k: u32, forms: Vec<QForm>) -> Self {
        Self { k, forms }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn f(&self, z: UpperHalfPoint) -> C64 {
        sum_over(&self.forms, self.k, z).f
    }

    pub fn omega(&self, z: UpperHalfPoint) -> C64 {
        sum_over(&self.forms, self.k, z).omega
    }

    pub fn holomorphic(&self, z: UpperHalfPoint) -> C64 {
        sum_over(&self.forms, self.k, z).holomorphic
    }
}

/// Tail tolerance used for every `E_2` evaluation.
pub const E2_TAIL_TOL: f64 = 1e-12;

fn cached_e2(precision: i64) -> Result<Arc<LaurentQSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<LaurentQSeries>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("e2 cache poisoned");
    if let Some(s) = guard.get(&precision) {
        return Ok(s.clone());
    }
    let s = Arc::new(qseries::eisenstein(2, precision)?);
    guard.insert(precision, s.clone());
    Ok(s)
}

/// `E_2(z)` from its exact q-expansion.
pub fn e2(z: UpperHalfPoint, precision: i64) -> Result<QValue> {
    cached_e2(precision)?.evaluate_checked(z, E2_TAIL_TOL)
}

/// `E_2^*(z) = E_2(z) − 3/(πy)`, modular of weight 2.
pub fn e2_star(z: UpperHalfPoint, precision: i64) -> Result<QValue> {
    let v = e2(z, precision)?;
    Ok(QValue {
        value: v.value - 3.0 / (PI * z.y()),
        tail_bound: v.tail_bound,
    })
}

type FaberKey = (usize, i64);

fn cached_faber(max: usize, precision: i64) -> Result<Arc<Vec<LaurentQSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<FaberKey, Arc<Vec<LaurentQSeries>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("faber cache poisoned").get(&(max, precision)) {
        return Ok(s.clone());
    }
    let basis = Arc::new(qseries::faber_basis(max, precision)?);
    cache
        .lock()
        .expect("faber cache poisoned")
        .insert((max, precision), basis.clone());
    Ok(basis)
}

fn cached_j(precision: i64) -> Result<Arc<LaurentQSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<LaurentQSeries>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("j cache poisoned").get(&precision) {
        return Ok(s.clone());
    }
    let j = Arc::new(qseries::klein_j(precision)?);
    cache.lock().expect("j cache poisoned").insert(precision, j.clone());
    Ok(j)
}

/// Relative accuracy demanded of every `j_n(z)` and `j(z)` evaluation.
const J_REL_TOL: f64 = 1e-13;
const MAX_Q_PRECISION: i64 = 2048;

/// `(j_0(z), …, j_n(z))`, raising the q-precision until every tail is small.
fn faber_values(n: usize, z: UpperHalfPoint) -> Result<Vec<QValue>> {
    let mut precision = DEFAULT_PRECISION.max(64 + 8 * n as i64);
    loop {
        let basis = cached_faber(n, precision)?;
        let vals: Vec<QValue> = basis.iter().map(|s| s.evaluate(z)).collect();
        if vals.iter().all(|v| v.tail_bound <= J_REL_TOL * v.value.norm().max(1.0)) {
            return Ok(vals);
        }
        if precision >= MAX_Q_PRECISION {
            let worst = vals.iter().map(|v| v.tail_bound).fold(0.0, f64::max);
            return Err(Error::TailAboveTolerance {
                tail: worst,
                tol: J_REL_TOL,
            });
        }
        precision *= 2;
    }
}

fn klein_j_value(z: UpperHalfPoint, derivative: bool) -> Result<QValue> {
    let mut precision = DEFAULT_PRECISION;
    loop {
        let j = cached_j(precision)?;
        let v = if derivative {
            j.derivative().evaluate(z)
        } else {
            j.evaluate(z)
        };
        if v.tail_bound <= J_REL_TOL * v.value.norm().max(1.0) {
            return Ok(v);
        }
        if precision >= MAX_Q_PRECISION {
            return Err(Error::TailAboveTolerance {
                tail: v.tail_bound,
                tol: J_REL_TOL,
            });
        }
        precision *= 2;
    }
}

fn check_heights(z: UpperHalfPoint, tau: UpperHalfPoint) -> Result<()> {
    if tau.y() <= z.y() {
        return Err(Error::InvalidParameter(format!(
            "generating function needs Im(tau) > Im(z), got {} <= {}",
            tau.y(),
            z.y()
        )));
    }
    Ok(())
}

/// `H_z(τ) = Σ_{n=0}^{N} j_n(z) e^{2πinτ}` with a geometric tail bound.
pub fn h_generating(z: UpperHalfPoint, tau: UpperHalfPoint, n_terms: usize) -> Result<QValue> {
    check_heights(z, tau)?;
    let vals = faber_values(n_terms, z)?;
    let qt = tau.q();
    let mut acc = ComplexSum::new();
    let mut eval_tail = 0.0;
    for (n, v) in vals.iter().enumerate() {
        let w = qt.powi(n as i32);
        acc.add(v.value * w);
        eval_tail += v.tail_bound * w.norm();
    }
    // |j_n(z)| is of size |q_z|^{−n}; the omitted terms decay like r^n.
    let r = (-2.0 * PI * (tau.y() - z.y())).exp();
    let log_qz = -2.0 * PI * z.y();
    let c = vals
        .iter()
        .enumerate()
        .map(|(n, v)| v.value.norm() * (log_qz * n as f64).exp())
        .fold(1.0, f64::max);
    let tail = c * r.powi(n_terms as i32 + 1) / (1.0 - r);
    Ok(QValue {
        value: acc.value(),
        tail_bound: tail + eval_tail,
    })
}

/// `((1/2πi) j'(τ)) / (j(z) − j(τ))`.
pub fn akn_closed_form(z: UpperHalfPoint, tau: UpperHalfPoint) -> Result<QValue> {
    check_heights(z, tau)?;
    let jz = klein_j_value(z, false)?;
    let jt = klein_j_value(tau, false)?;
    let djt = klein_j_value(tau, true)?;
    let den = jz.value - jt.value;
    let scale = jz.value.norm() + jt.value.norm();
    if den.norm() <= 1e-9 * scale {
        return Err(Error::Pole(format!(
            "j({z}) = j({tau}): the points are SL2(Z)-equivalent"
        )));
    }
    let value = djt.value / den;
    let tail = djt.tail_bound / den.norm() + value.norm() * (jz.tail_bound + jt.tail_bound) / den.norm();
    Ok(QValue {
        value,
        tail_bound: tail,
    })
}

/// Relative accuracy requested of `f` when forming `f'/f` or `ω/f`.
pub const DIVISOR_REL_TOL: f64 = 1e-10;

/// Sums at `z` accurate relative to `|f(z)|`; fails near zeros of `f`.
fn sums_relative_to_f(p: &SeriesParams, z: UpperHalfPoint, target: Target) -> Result<HyperbolicSums> {
    let coarse = hyperbolic_sums(p, z, Target::F)?;
    let fabs = coarse.f.norm();
    if !(fabs > p.tol * 1e3) {
        return Err(Error::IllConditioned(format!(
            "|f_{{{},{}}}({z})| = {fabs:.3e} is too close to zero for tolerance {:.1e}",
            p.k, p.disc, p.tol
        )));
    }
    let tol = p.tol.min(DIVISOR_REL_TOL * fabs);
    hyperbolic_sums(&p.with_tol(tol), z, target)
}

/// `(k/6) E_2(z) − (1/2πi) f'(z)/f(z)` for `f = f_{k,D}`, with `f'` summed
/// termwise as `−k Σ Q'(z,1)/Q(z,1)^{k+1}`.
pub fn divisor_form_bko(p: &SeriesParams, z: UpperHalfPoint) -> Result<C64> {
    let s = sums_relative_to_f(p, z, Target::FPrime)?;
    let e2 = e2(z, DEFAULT_PRECISION)?.value;
    let kf = p.k as f64;
    Ok(e2 * (kf / 6.0) - s.f_prime / s.f / C64::new(0.0, 2.0 * PI))
}

/// `(k/2π) ω_{k+1,D}(z)/f_{k,D}(z) + (k/6) E_2^*(z)`.
pub fn divisor_form_thm(p: &SeriesParams, z: UpperHalfPoint) -> Result<C64> {
    let s = sums_relative_to_f(p, z, Target::Omega)?;
    let e2s = e2_star(z, DEFAULT_PRECISION)?.value;
    let kf = p.k as f64;
    Ok(s.omega / s.f * (kf / (2.0 * PI)) + e2s * (kf / 6.0))
}

/// A truncated exponential Poincaré series value with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareValue {
    pub value: C64,
    pub tail_estimate: f64,
}

/// `|cx + d|` window: the omitted `d` contribute at most `2W^{1−κ}/(κ−1)`.
const POINCARE_D_WINDOW: f64 = 24.0;

fn mod_inverse(d: i64, c: i64) -> i64 {
    let (mut r0, mut r1) = (d.rem_euclid(c), c);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(c)
}

/// `P_{κ,m}(z) = Σ_{γ ∈ Γ_∞\SL2(Z)} (e^{2πimz})|_κ γ`, summed over bottom rows
/// `(c, d)` with `1 ≤ c ≤ c_max`, `gcd(c, d) = 1`, `|cx + d| ≤ 24`.
///
/// For `γ = [[a,b],[c,d]]`, `γz = a/c − 1/(c(cz + d))` with `a ≡ d^{−1} (mod c)`.
/// The tail estimate extrapolates the last shell `c = c_max`, whose absolute
/// size scales like `c^{1−κ}`.
pub fn poincare_exponential(kappa: u32, m: i64, z: UpperHalfPoint, c_max: i64) -> Result<PoincareValue> {
    if kappa < 8 || kappa % 2 != 0 {
        return Err(Error::InvalidWeight(kappa as i64));
    }
    if m < 1 {
        return Err(Error::InvalidParameter(format!("index m = {m} must be positive")));
    }
    if c_max < 1 {
        return Err(Error::InvalidParameter("c_max must be at least 1".into()));
    }
    let two_pi_i_m = C64::new(0.0, 2.0 * PI * m as f64);
    let zc = z.to_complex();
    let mut acc = ComplexSum::new();
    acc.add((two_pi_i_m * zc).exp());
    let mut last_shell = 0.0;
    for c in 1..=c_max {
        let centre = -(c as f64) * z.x();
        let lo = (centre - POINCARE_D_WINDOW).ceil() as i64;
        let hi = (centre + POINCARE_D_WINDOW).floor() as i64;
        let mut shell = ComplexSum::new();
        let mut shell_abs = CompensatedSum::new();
        for d in lo..=hi {
            if num_integer::gcd(c, d) != 1 {
                continue;
            }
            let a = if c == 1 { 0 } else { mod_inverse(d, c) };
            let j = zc * c as f64 + d as f64;
            let gz = C64::new(a as f64 / c as f64, 0.0) - (j * c as f64).inv();
            let term = j.powi(-(kappa as i32)) * (two_pi_i_m * gz).exp();
            shell.add(term);
            shell_abs.add(term.norm());
        }
        acc.add(shell.value());
        last_shell = shell_abs.value();
    }
    let tail_estimate = last_shell * c_max as f64 / (kappa as f64 - 2.0);
    Ok(PoincareValue {
        value: acc.value(),
        tail_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::GroupElement;

    fn pt(x: f64, y: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(x, y).unwrap()
    }

    #[test]
    fn params_validation() {
        assert_eq!(SeriesParams::new(3, 5, 1e-8), Err(Error::InvalidWeight(3)));
        assert_eq!(SeriesParams::new(2, 5, 1e-8), Err(Error::InvalidWeight(2)));
        assert_eq!(SeriesParams::new(6, 7, 1e-8), Err(Error::NotDiscriminant(7)));
        assert_eq!(SeriesParams::new(6, 6, 1e-8), Err(Error::NotDiscriminant(6)));
        assert!(SeriesParams::new(6, 5, 1e-8).is_ok());
    }

    #[test]
    fn f_is_real_on_imaginary_axis() {
        let p = SeriesParams::new(6, 8, 1e-10).unwrap();
        for y in [0.9, 1.4] {
            let s = hyperbolic_sums(&p, pt(0.0, y), Target::Omega).unwrap();
            assert!(s.f.im.abs() < 1e-13, "{:?}", s.f);
            assert!(s.omega.im.abs() < 1e-13, "{:?}", s.omega);
        }
    }

    #[test]
    fn single_form_splitting() {
        for (q, z) in [
            (QForm::new(1, 1, -1), pt(0.3, 1.1)),
            (QForm::new(-3, 5, 2), pt(-0.2, 0.7)),
        ] {
            let k = 6;
            let qv = q.evaluate(z);
            let lhs = q.geodesic_invariant(z) / qv.powi(k + 1);
            let rhs = C64::new(0.0, -1.0) * q.z_derivative(z) / qv.powi(k + 1) + (qv.powi(k) * z.y()).inv();
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn splitting_identity_on_sums() {
        let p = SeriesParams::new(6, 5, 1e-10).unwrap();
        let z = pt(0.17, 1.05);
        let s = hyperbolic_sums(&p, z, Target::Omega).unwrap();
        let resid = (s.omega - s.holomorphic - s.f / z.y()).norm();
        assert!(resid < 1e-12, "{resid}");
    }

    #[test]
    fn weight_eight_vanishes() {
        let p = SeriesParams::new(4, 5, 1e-8).unwrap();
        let z = pt(0.1, 1.0);
        let s = hyperbolic_sums(&p, z, Target::Omega).unwrap();
        assert!(s.f.norm() < 1e-6, "f = {:?}", s.f);
        assert!(s.omega.norm() < 1e-6, "omega = {:?}", s.omega);
        assert!(s.holomorphic.norm() < 1e-6);
    }

    #[test]
    fn e2_star_fixed_point_and_periodicity() {
        let v = e2_star(UpperHalfPoint::I, 64).unwrap();
        assert!(v.value.norm() < 1e-12, "{:?}", v);
        let z = pt(0.23, 0.9);
        let a = e2_star(z, 64).unwrap().value;
        let b = e2_star(z.translate(1.0), 64).unwrap().value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn generating_function_matches_closed_form() {
        let z = pt(0.1, 1.0);
        let tau = pt(0.2, 2.0);
        let h = h_generating(z, tau, 20).unwrap();
        let c = akn_closed_form(z, tau).unwrap();
        assert!((h.value - c.value).norm() < 1e-7, "{:?} vs {:?}", h, c);
        let h0 = h_generating(z, tau, 0).unwrap();
        assert_eq!(h0.value, C64::new(1.0, 0.0));
        assert!(h_generating(tau, z, 5).is_err());
    }

    #[test]
    fn equivalent_points_are_poles() {
        let tau = pt(0.0, 2.0);
        let z = GroupElement::S.mobius(tau); // i/2
        assert!(matches!(akn_closed_form(z, tau), Err(Error::Pole(_))));
    }

    #[test]
    fn poincare_periodic_and_stable() {
        let z = pt(0.13, 1.1);
        let a = poincare_exponential(12, 1, z, 20).unwrap();
        let b = poincare_exponential(12, 1, z.translate(1.0), 20).unwrap();
        assert!((a.value - b.value).norm() < 1e-9);
        let z2 = pt(0.0, 2.0);
        let c1 = poincare_exponential(12, 1, z2, 10).unwrap();
        let c2 = poincare_exponential(12, 1, z2, 20).unwrap();
        assert!((c1.value - c2.value).norm() <= c1.tail_estimate.max(1e-16) * 10.0);
        assert!(poincare_exponential(12, 0, z, 5).is_err());
    }

    #[test]
    fn mod_inverse_small() {
        for c in 2..30i64 {
            for d in -40..40i64 {
                if num_integer::gcd(c, d) == 1 {
                    assert_eq!((mod_inverse(d, c) * d).rem_euclid(c), 1);
                }
            }
        }
    }
}
