//! Integral binary quadratic forms `[a,b,c] = aX² + bXY + cY²`, points of the
//! upper half-plane, the `SL2(Z)` action on both, and complete enumeration of
//! the forms of a fixed discriminant inside a ball `|Q(z,1)| ≤ R`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// A point `x + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    x: f64,
    y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::NotInUpperHalfPlane { x, y });
        }
        Ok(Self { x, y })
    }

    pub fn from_complex(z: C64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub const I: UpperHalfPoint = UpperHalfPoint { x: 0.0, y: 1.0 };

    /// `ρ = e^{2πi/3}`.
    pub fn rho() -> Self {
        Self {
            x: -0.5,
            y: 3f64.sqrt() / 2.0,
        }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn to_complex(&self) -> C64 {
        C64::new(self.x, self.y)
    }

    /// `z ↦ -z̄`, the reflection in the imaginary axis.
    pub fn reflect(&self) -> Self {
        Self { x: -self.x, y: self.y }
    }

    pub fn translate(&self, dx: f64) -> Self {
        Self {
            x: self.x + dx,
            y: self.y,
        }
    }

    /// Shifts by `(dx, dy)`; fails if the result leaves the upper half-plane.
    pub fn offset(&self, dx: f64, dy: f64) -> Result<Self> {
        Self::new(self.x + dx, self.y + dy)
    }

    /// `q = e^{2πiz}`.
    pub fn q(&self) -> C64 {
        (C64::new(0.0, 2.0 * std::f64::consts::PI) * self.to_complex()).exp()
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.y)
    }
}

/// An element of `SL2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        if det != 1 {
            return Err(Error::NotUnimodular { a, b, c, d });
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: GroupElement = GroupElement { a: 1, b: 0, c: 0, d: 1 };
    pub const S: GroupElement = GroupElement {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    pub const T: GroupElement = GroupElement { a: 1, b: 1, c: 0, d: 1 };
    pub const MINUS_IDENTITY: GroupElement = GroupElement {
        a: -1,
        b: 0,
        c: 0,
        d: -1,
    };

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        let m = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            let v = (x as i128) * (y as i128) + (z as i128) * (w as i128);
            i64::try_from(v).map_err(|_| Error::Overflow("matrix product"))
        };
        Ok(GroupElement {
            a: m(self.a, other.a, self.b, other.c)?,
            b: m(self.a, other.b, self.b, other.d)?,
            c: m(self.c, other.a, self.d, other.c)?,
            d: m(self.c, other.b, self.d, other.d)?,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn is_in_gamma0(&self, level: i64) -> bool {
        self.c % level == 0
    }

    /// The automorphy factor `j(γ, z) = cz + d`.
    #[inline]
    pub fn cocycle(&self, z: UpperHalfPoint) -> C64 {
        C64::new(self.c as f64 * z.x + self.d as f64, self.c as f64 * z.y)
    }

    /// `γz = (az + b)/(cz + d)`.
    pub fn mobius(&self, z: UpperHalfPoint) -> UpperHalfPoint {
        let zc = z.to_complex();
        let w = (zc * self.a as f64 + self.b as f64) / self.cocycle(z);
        // The imaginary part is y/|cz+d|², computed directly to keep it positive.
        let y = z.y / self.cocycle(z).norm_sqr();
        UpperHalfPoint { x: w.re, y }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A validated positive discriminant, `D ≡ 0, 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Discriminant(i64);

impl Discriminant {
    /// Accepts positive non-square discriminants only.
    pub fn new(d: i64) -> Result<Self> {
        let disc = Self::allow_square(d)?;
        if disc.is_square() {
            return Err(Error::SquareDiscriminant(d));
        }
        Ok(disc)
    }

    /// Accepts every positive discriminant, including perfect squares.
    pub fn allow_square(d: i64) -> Result<Self> {
        if d <= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::NotDiscriminant(d));
        }
        Ok(Self(d))
    }

    #[inline]
    pub fn get(&self) -> i64 {
        self.0
    }

    pub fn is_square(&self) -> bool {
        let r = self.0.sqrt();
        r * r == self.0
    }

    /// All discriminants `0 < D ≤ max`, optionally skipping perfect squares.
    pub fn up_to(max: i64, include_squares: bool) -> Vec<Discriminant> {
        (1..=max)
            .filter_map(|d| Self::allow_square(d).ok())
            .filter(|d| include_squares || !d.is_square())
            .collect()
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The integral binary quadratic form `aX² + bXY + cY²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl QForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// `b² − 4ac`, with overflow reported as an input-range error.
    pub fn discriminant(&self) -> Result<i64> {
        let err = || Error::Overflow("discriminant");
        let b2 = self.b.checked_mul(self.b).ok_or_else(err)?;
        let ac4 = self
            .a
            .checked_mul(self.c)
            .and_then(|v| v.checked_mul(4))
            .ok_or_else(err)?;
        b2.checked_sub(ac4).ok_or_else(err)
    }

    /// `Q(z, 1) = az² + bz + c`.
    #[inline]
    pub fn evaluate(&self, z: UpperHalfPoint) -> C64 {
        let (a, b, c) = (self.a as f64, self.b as f64, self.c as f64);
        let (x, y) = (z.x, z.y);
        C64::new(a * (x * x - y * y) + b * x + c, y * (2.0 * a * x + b))
    }

    /// `Q_z = (a|z|² + bx + c)/y`; its zero set is the geodesic joining the
    /// two real roots of `Q(z,1)`.
    #[inline]
    pub fn geodesic_invariant(&self, z: UpperHalfPoint) -> f64 {
        let (a, b, c) = (self.a as f64, self.b as f64, self.c as f64);
        (a * (z.x * z.x + z.y * z.y) + b * z.x + c) / z.y
    }

    /// `Q'(z,1) = 2az + b`.
    #[inline]
    pub fn z_derivative(&self, z: UpperHalfPoint) -> C64 {
        let a = self.a as f64;
        C64::new(2.0 * a * z.x + self.b as f64, 2.0 * a * z.y)
    }

    /// `(Q∘γ)(X,Y) = Q(aX + bY, cX + dY)`. This is a right action:
    /// `(Q∘g)∘h = Q∘(gh)`.
    pub fn act(&self, g: &GroupElement) -> Result<QForm> {
        let det = (g.a as i128) * (g.d as i128) - (g.b as i128) * (g.c as i128);
        if det != 1 {
            return Err(Error::NotUnimodular {
                a: g.a,
                b: g.b,
                c: g.c,
                d: g.d,
            });
        }
        let (qa, qb, qc) = (self.a as i128, self.b as i128, self.c as i128);
        let (a, b, c, d) = (g.a as i128, g.b as i128, g.c as i128, g.d as i128);
        let na = qa * a * a + qb * a * c + qc * c * c;
        let nb = 2 * qa * a * b + qb * (a * d + b * c) + 2 * qc * c * d;
        let nc = qa * b * b + qb * b * d + qc * d * d;
        let conv = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("group action"));
        Ok(QForm {
            a: conv(na)?,
            b: conv(nb)?,
            c: conv(nc)?,
        })
    }

    /// `[a,b,c] ↦ [a,−b,c]`, which corresponds to `z ↦ −z̄`.
    pub fn flip_b(&self) -> QForm {
        QForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    pub fn negate(&self) -> QForm {
        QForm {
            a: -self.a,
            b: -self.b,
            c: -self.c,
        }
    }

    /// Canonical order `(|a|, a, |b|, b, |c|, c)`; `c` only breaks ties in the
    /// `a = 0` family of square discriminants.
    pub fn canonical_cmp(&self, other: &QForm) -> Ordering {
        let key = |q: &QForm| (q.a.abs(), q.a, q.b.abs(), q.b, q.c.abs(), q.c);
        key(self).cmp(&key(other))
    }
}

/// Every form of discriminant `disc` with `|Q(z,1)| ≤ radius` (boundary
/// included), in canonical order.
///
/// Completeness: `|Q(z,1)| ≥ y|Q_z|` and `|Q(z,1)| ≥ y|2ax + b|`, while
/// `yQ_z − Re Q(z,1) = 2ay²`, so every such form has `|a| ≤ R/y²` and
/// `|2ax + b| ≤ R/y`. If `R² < D y²` the list is empty because
/// `|Q(z,1)|² = y²(D + Q_z²)`.
///
/// Non-square discriminants only; see [`enumerate_bounded_any`] for squares.
pub fn enumerate_bounded(disc: i64, z: UpperHalfPoint, radius: f64) -> Result<Vec<QForm>> {
    let d = Discriminant::new(disc)?;
    enumerate_bounded_any(d, z, radius)
}

/// As [`enumerate_bounded`], for any validated discriminant. For a square
/// `D = m²` the forms with `a = 0` are `[0, ±m, c]`.
pub fn enumerate_bounded_any(disc: Discriminant, z: UpperHalfPoint, radius: f64) -> Result<Vec<QForm>> {
    if !(radius.is_finite()) || radius < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "radius {radius} must be finite and non-negative"
        )));
    }
    let d = disc.get();
    let (x, y) = (z.x, z.y);
    if radius * radius < d as f64 * y * y {
        return Ok(Vec::new());
    }
    let a_max = (radius / (y * y)).floor();
    let b_half = radius / y;
    if a_max > 1e9 || b_half + 2.0 * a_max * x.abs() > 1e9 {
        return Err(Error::Overflow("enumeration box"));
    }
    let a_max = a_max as i64;
    let r2 = radius * radius;

    let in_ball = |q: &QForm| q.evaluate(z).norm_sqr() <= r2;

    let mut a_values: Vec<i64> = (1..=a_max).flat_map(|a| [-a, a]).collect();
    a_values.sort_by_key(|a| (a.abs(), *a));

    let mut forms: Vec<QForm> = Vec::new();
    if disc.is_square() {
        let m = d.sqrt();
        for b in [-m, m] {
            let centre = -(b as f64) * x;
            let lo = (centre - radius).ceil() as i64;
            let hi = (centre + radius).floor() as i64;
            forms.extend((lo..=hi).map(|c| QForm::new(0, b, c)).filter(|q| in_ball(q)));
        }
    }

    let chunks: Vec<Vec<QForm>> = a_values
        .par_iter()
        .map(|&a| -> Result<Vec<QForm>> {
            let centre = -2.0 * a as f64 * x;
            let lo = (centre - b_half).ceil() as i64;
            let hi = (centre + b_half).floor() as i64;
            let four_a = 4 * a;
            let mut out = Vec::new();
            for b in lo..=hi {
                let num = b
                    .checked_mul(b)
                    .and_then(|b2| b2.checked_sub(d))
                    .ok_or(Error::Overflow("enumeration"))?;
                if num % four_a != 0 {
                    continue;
                }
                let q = QForm::new(a, b, num / four_a);
                if in_ball(&q) {
                    out.push(q);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    forms.extend(chunks.into_iter().flatten());
    forms.sort_by(QForm::canonical_cmp);
    Ok(forms)
}
