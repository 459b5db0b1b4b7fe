//! Finite-difference differential operators on the upper half-plane, slash
//! operators of integral and half-integral weight, and the Kronecker symbol
//! and `ε_d` that the theta multiplier needs.

use crate::qforms::{GroupElement, UpperHalfPoint};
use crate::{Error, Result, C64};

/// A deterministic evaluator `H → C`.
pub trait SmoothFunction: Sync {
    fn eval(&self, z: UpperHalfPoint) -> C64;
}

impl<F> SmoothFunction for F
where
    F: Fn(UpperHalfPoint) -> C64 + Sync,
{
    fn eval(&self, z: UpperHalfPoint) -> C64 {
        self(z)
    }
}

/// Kronecker symbol `(a/n)` for all integers, with `(a/−1) = sign(a)` (and 1
/// for `a = 0`) and `(a/2)` from `a mod 8`.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n) for odd n > 0.
    let mut a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `ε_d = 1` if `d ≡ 1 (mod 4)`, `i` if `d ≡ 3 (mod 4)`; negative `d` are
/// classified by their least non-negative residue.
pub fn eps(d: i64) -> Result<C64> {
    match d.rem_euclid(4) {
        1 => Ok(C64::new(1.0, 0.0)),
        3 => Ok(C64::new(0.0, 1.0)),
        _ => Err(Error::InvalidParameter(format!("eps(d) needs odd d, got {d}"))),
    }
}

/// A weight in `½Z`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    twice: i64,
}

impl Weight {
    pub fn integral(k: i64) -> Self {
        Self { twice: 2 * k }
    }

    /// The weight `k + 1/2`.
    pub fn half_integral(k: i64) -> Self {
        Self { twice: 2 * k + 1 }
    }

    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn is_integral(&self) -> bool {
        self.twice % 2 == 0
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }
}

/// The factor multiplying `F(γz)` in `(F|_κ γ)(z)`.
///
/// Integral `κ`: `j(γ,z)^{−κ}`. Half-integral `κ` (`γ ∈ Γ_0(4)`):
/// `(c/d) ε_d^{2κ} j(γ,z)^{−κ}` with `w^{−κ} = exp(−κ Log w)`, `Log` the
/// principal branch.
pub fn slash_factor(kappa: Weight, g: &GroupElement, z: UpperHalfPoint) -> Result<C64> {
    let j = g.cocycle(z);
    if kappa.is_integral() {
        return Ok(j.powi(-(kappa.twice / 2) as i32));
    }
    if !g.is_in_gamma0(4) {
        return Err(Error::NotInGamma04 { c: g.c });
    }
    let chi = kronecker(g.c, g.d) as f64;
    let e = eps(g.d)?.powi(kappa.twice.rem_euclid(4) as i32);
    let power = (-kappa.value() * j.ln()).exp();
    Ok(e * power * chi)
}

/// `(F|_κ γ)(z)`.
pub fn slash<F: SmoothFunction + ?Sized>(kappa: Weight, g: &GroupElement, f: &F, z: UpperHalfPoint) -> Result<C64> {
    Ok(slash_factor(kappa, g, z)? * f.eval(g.mobius(z)))
}

/// A finite-difference estimate with the difference between the two step
/// sizes used in the Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdValue {
    pub value: C64,
    pub error_estimate: f64,
}

impl FdValue {
    /// Fails if the step-halving estimates disagree by more than `tol`.
    pub fn within(self, tol: f64) -> Result<C64> {
        if self.error_estimate > tol {
            return Err(Error::RoughFunction {
                disagreement: self.error_estimate,
                tol,
            });
        }
        Ok(self.value)
    }
}

/// Default first-derivative step at `z`.
pub fn default_step(z: UpperHalfPoint) -> f64 {
    1e-3 * z.y().max(1.0)
}

/// Default step for the Laplacian at `z`.
pub fn default_laplacian_step(z: UpperHalfPoint) -> f64 {
    5e-3 * z.y().max(1.0)
}

fn check_step(z: UpperHalfPoint, h: f64) -> Result<()> {
    if !(h > 0.0) || 2.0 * h >= 0.5 * z.y() {
        return Err(Error::InvalidParameter(format!(
            "step {h} too large for height {}",
            z.y()
        )));
    }
    Ok(())
}

fn at(z: UpperHalfPoint, dx: f64, dy: f64) -> UpperHalfPoint {
    z.offset(dx, dy).expect("step checked against height")
}

/// Fourth-order central first derivatives `(F_x, F_y)` with step `h`.
fn gradient<F: SmoothFunction + ?Sized>(f: &F, z: UpperHalfPoint, h: f64) -> (C64, C64) {
    let d = |dx: f64, dy: f64| f.eval(at(z, dx, dy));
    let fx = (-d(2.0 * h, 0.0) + d(h, 0.0) * 8.0 - d(-h, 0.0) * 8.0 + d(-2.0 * h, 0.0)) / (12.0 * h);
    let fy = (-d(0.0, 2.0 * h) + d(0.0, h) * 8.0 - d(0.0, -h) * 8.0 + d(0.0, -2.0 * h)) / (12.0 * h);
    (fx, fy)
}

/// Fourth-order central second derivatives `F_xx + F_yy` and first
/// derivatives, sharing evaluations.
fn laplace_parts<F: SmoothFunction + ?Sized>(f: &F, z: UpperHalfPoint, h: f64) -> (C64, C64, C64) {
    let d = |dx: f64, dy: f64| f.eval(at(z, dx, dy));
    let f0 = f.eval(z);
    let (xp1, xm1, xp2, xm2) = (d(h, 0.0), d(-h, 0.0), d(2.0 * h, 0.0), d(-2.0 * h, 0.0));
    let (yp1, ym1, yp2, ym2) = (d(0.0, h), d(0.0, -h), d(0.0, 2.0 * h), d(0.0, -2.0 * h));
    let h2 = 12.0 * h * h;
    let fxx = (-xp2 + xp1 * 16.0 - f0 * 30.0 + xm1 * 16.0 - xm2) / h2;
    let fyy = (-yp2 + yp1 * 16.0 - f0 * 30.0 + ym1 * 16.0 - ym2) / h2;
    let fx = (-xp2 + xp1 * 8.0 - xm1 * 8.0 + xm2) / (12.0 * h);
    let fy = (-yp2 + yp1 * 8.0 - ym1 * 8.0 + ym2) / (12.0 * h);
    (fxx + fyy, fx, fy)
}

fn richardson(coarse: C64, fine: C64) -> FdValue {
    FdValue {
        value: (fine * 16.0 - coarse) / 15.0,
        error_estimate: (fine - coarse).norm(),
    }
}

/// `∂F/∂z̄ = (F_x + iF_y)/2`, Richardson-extrapolated over steps `h`, `h/2`.
pub fn wirtinger_dzbar<F: SmoothFunction + ?Sized>(f: &F, z: UpperHalfPoint, h: f64) -> Result<FdValue> {
    check_step(z, h)?;
    let est = |h: f64| {
        let (fx, fy) = gradient(f, z, h);
        (fx + C64::new(0.0, 1.0) * fy) * 0.5
    };
    Ok(richardson(est(h), est(h / 2.0)))
}

/// `ξ_κ F = 2i y^κ conj(∂F/∂z̄)`.
pub fn xi<F: SmoothFunction + ?Sized>(kappa: f64, f: &F, z: UpperHalfPoint, h: f64) -> Result<FdValue> {
    let d = wirtinger_dzbar(f, z, h)?;
    let factor = C64::new(0.0, 2.0 * z.y().powf(kappa));
    Ok(FdValue {
        value: factor * d.value.conj(),
        error_estimate: factor.norm() * d.error_estimate,
    })
}

/// `Δ_κ F = −y²(F_xx + F_yy) + iκy(F_x + iF_y)`, Richardson-extrapolated.
pub fn laplacian<F: SmoothFunction + ?Sized>(kappa: f64, f: &F, z: UpperHalfPoint, h: f64) -> Result<FdValue> {
    check_step(z, h)?;
    let y = z.y();
    let i = C64::new(0.0, 1.0);
    let est = |h: f64| {
        let (lap, fx, fy) = laplace_parts(f, z, h);
        -lap * (y * y) + i * (kappa * y) * (fx + i * fy)
    };
    Ok(richardson(est(h), est(h / 2.0)))
}

/// Jacobi theta function `θ(z) = Σ_{n∈Z} e^{2πin²z}`, summed until the terms
/// fall below `1e−17`.
pub fn jacobi_theta(z: UpperHalfPoint) -> C64 {
    let q = z.q();
    let mut acc = C64::new(1.0, 0.0);
    let mut n = 1i32;
    loop {
        let t = q.powi(n * n) * 2.0;
        acc += t;
        if t.norm() < 1e-17 {
            break;
        }
        n += 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::QForm;
    use crate::qseries;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(x, y).unwrap()
    }

    /// Legendre/Jacobi by Euler's criterion for odd prime n, as an oracle.
    fn legendre(a: i64, p: i64) -> i64 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        let mut r = 1i64;
        let mut base = a;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        for c in -20..20 {
            assert_eq!(kronecker(c, 1), 1);
        }
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(0, -1), 1);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(4, 2), 0);
        assert_eq!(kronecker(3, 2), -1);
        assert_eq!(kronecker(7, 2), 1);
        for p in [3, 5, 7, 11, 13, 17, 19, 23] {
            for a in -30..30 {
                assert_eq!(kronecker(a, p), legendre(a, p), "({a}/{p})");
            }
        }
    }

    proptest! {
        #[test]
        fn kronecker_multiplicative(a in -200i64..200, m in -60i64..60, n in -60i64..60) {
            prop_assume!(m != 0 && n != 0);
            prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
        }
    }

    #[test]
    fn eps_values() {
        assert_eq!(eps(1).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(eps(3).unwrap(), C64::new(0.0, 1.0));
        assert_eq!(eps(-3).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(eps(-1).unwrap(), C64::new(0.0, 1.0));
        assert!(eps(4).is_err());
    }

    #[test]
    fn slash_identity_and_theta() {
        let theta = |z: UpperHalfPoint| jacobi_theta(z);
        let z = pt(0.11, 0.7);
        let v = slash(Weight::half_integral(0), &GroupElement::IDENTITY, &theta, z).unwrap();
        assert!((v - theta(z)).norm() < 1e-15);
        let g = GroupElement::new(1, 0, 4, 1).unwrap();
        for z in [pt(0.11, 0.7), pt(-0.3, 0.4), pt(0.2, 1.5)] {
            let v = slash(Weight::half_integral(0), &g, &theta, z).unwrap();
            assert!((v - theta(z)).norm() < 1e-9, "{v} vs {}", theta(z));
        }
        assert!(matches!(
            slash(Weight::half_integral(0), &GroupElement::S, &theta, z),
            Err(Error::NotInGamma04 { .. })
        ));
    }

    #[test]
    fn theta_multiplier_on_more_of_gamma0_4() {
        let theta = |z: UpperHalfPoint| jacobi_theta(z);
        // Includes negative d and negative c.
        let gs = [
            (1, 0, 4, 1),
            (-1, 0, -4, -1),
            (3, -1, 4, -1),
            (1, 1, 4, 5),
            (5, 2, -8, -3),
            (-3, 1, 8, -3),
        ];
        for (a, b, c, d) in gs {
            let g = GroupElement::new(a, b, c, d).unwrap();
            let z = pt(0.05, 0.9 / (c as f64).abs());
            let v = slash(Weight::half_integral(0), &g, &theta, z).unwrap();
            assert!((v - theta(z)).norm() < 1e-9, "{g}: {v} vs {}", theta(z));
        }
    }

    #[test]
    fn slash_cocycle_half_integral() {
        // (F|h)|g = F|(hg) for a generic (non-modular) F.
        let f = |z: UpperHalfPoint| (z.to_complex() * 0.7).sin() + z.to_complex().powi(2);
        let gs = [
            GroupElement::new(1, 0, 4, 1).unwrap(),
            GroupElement::new(3, -1, 4, -1).unwrap(),
            GroupElement::new(-1, 0, 0, -1).unwrap(),
            GroupElement::new(5, 2, -8, -3).unwrap(),
            GroupElement::T,
        ];
        let z = pt(0.1, 0.8);
        for kappa in [
            Weight::half_integral(0),
            Weight::half_integral(6),
            Weight::half_integral(3),
            Weight::integral(12),
        ] {
            for g in &gs {
                for h in &gs {
                    let inner = |w: UpperHalfPoint| slash(kappa, h, &f, w).unwrap();
                    let lhs = slash(kappa, g, &inner, z).unwrap();
                    let rhs = slash(kappa, &h.mul(g).unwrap(), &f, z).unwrap();
                    assert!(
                        (lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()),
                        "{kappa:?} {g} {h}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn minus_identity_acts_trivially() {
        let f = |z: UpperHalfPoint| z.to_complex().exp();
        let z = pt(0.3, 0.6);
        for k in [0, 3, 6, 8] {
            let v = slash(Weight::half_integral(k), &GroupElement::MINUS_IDENTITY, &f, z).unwrap();
            assert!((v - f(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_weight_twelve() {
        let d = qseries::delta(64).unwrap();
        let f = |z: UpperHalfPoint| d.evaluate(z).value;
        for z in [pt(0.1, 1.2), pt(-0.4, 0.95)] {
            let v = slash(Weight::integral(12), &GroupElement::S, &f, z).unwrap();
            assert!((v - f(z)).norm() < 1e-8, "{v} vs {}", f(z));
        }
    }

    #[test]
    fn wirtinger_examples() {
        let z = pt(0.2, 1.1);
        let cube = |w: UpperHalfPoint| w.to_complex().powi(3);
        assert!(wirtinger_dzbar(&cube, z, default_step(z)).unwrap().value.norm() < 1e-9);
        let conj = |w: UpperHalfPoint| w.to_complex().conj();
        assert!((wirtinger_dzbar(&conj, z, default_step(z)).unwrap().value - 1.0).norm() < 1e-10);
        let q = QForm::new(1, 1, -1);
        let qz = |w: UpperHalfPoint| C64::new(q.geodesic_invariant(w), 0.0);
        let d = wirtinger_dzbar(&qz, z, default_step(z)).unwrap().value;
        let lhs = C64::new(0.0, 2.0 * z.y() * z.y()) * d;
        assert!((lhs - q.evaluate(z)).norm() < 1e-6);
        assert!(wirtinger_dzbar(&cube, pt(0.0, 0.01), 0.01).is_err());
    }

    #[test]
    fn laplacian_of_power() {
        let f = |w: UpperHalfPoint| C64::new(w.y().powi(-1), 0.0);
        for z in [pt(0.0, 0.9), pt(0.4, 1.7)] {
            let v = laplacian(10.0, &f, z, default_laplacian_step(z)).unwrap().value;
            let expected = 8.0 / z.y();
            assert!((v - expected).norm() < 1e-5 * expected, "{v} vs {expected}");
        }
    }

    #[test]
    fn xi_examples() {
        let z = pt(0.3, 1.1);
        let hol = |w: UpperHalfPoint| w.to_complex().exp();
        assert!(xi(4.0, &hol, z, default_step(z)).unwrap().value.norm() < 1e-8);

        let k = 6;
        let q = QForm::new(1, 1, -1);
        let term = |w: UpperHalfPoint| q.evaluate(w).powi(-(k + 1)) * q.geodesic_invariant(w);
        let lhs = xi((2 * k + 2) as f64, &term, z, default_step(z)).unwrap().value;
        let zbar_val = q.evaluate(z).conj();
        let rhs = -zbar_val.powi(-k) * z.y().powi(2 * k);
        assert!((lhs - rhs).norm() < 1e-5, "{lhs} vs {rhs}");
    }

    #[test]
    fn operator_factorisation() {
        // Δ_κ = −ξ_{2−κ} ξ_κ on a smooth non-holomorphic test function.
        let f = |w: UpperHalfPoint| {
            let z = w.to_complex();
            (z * 0.5).sin() * w.y().powf(1.5) + z.conj() * z.powi(2)
        };
        let z = pt(0.2, 1.3);
        let kappa = 4.0;
        let h = default_step(z);
        let inner = |w: UpperHalfPoint| xi(kappa, &f, w, h).unwrap().value;
        let outer = xi(2.0 - kappa, &inner, z, 4.0 * h).unwrap().value;
        let lap = laplacian(kappa, &f, z, default_laplacian_step(z)).unwrap().value;
        assert!((lap + outer).norm() < 1e-4, "{lap} vs {}", -outer);
    }
}
