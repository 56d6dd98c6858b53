use serde::Serialize;

use super::{GeometryError, Point2, Rational, Scalar};

/// Planar affine map `S(x, y) = (a x + b y + e, c x + d y + f)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap2<T = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
}

impl<T: Scalar> AffineMap2<T> {
    pub fn new(a: T, b: T, c: T, d: T, e: T, f: T) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub fn identity() -> Self {
        Self::new(
            T::one(),
            T::zero(),
            T::zero(),
            T::one(),
            T::zero(),
            T::zero(),
        )
    }

    /// Linear map `(a, b; c, d)` with zero translation.
    pub fn linear(a: T, b: T, c: T, d: T) -> Self {
        Self::new(a, b, c, d, T::zero(), T::zero())
    }

    pub fn translation(&self) -> Point2<T> {
        Point2::new(self.e.clone(), self.f.clone())
    }

    pub fn apply(&self, p: &Point2<T>) -> Point2<T> {
        Point2::new(
            self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone() + self.e.clone(),
            self.c.clone() * p.x.clone() + self.d.clone() * p.y.clone() + self.f.clone(),
        )
    }

    /// Applies only the linear part.
    pub fn apply_linear(&self, v: &Point2<T>) -> Point2<T> {
        Point2::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let t = self.apply(&other.translation());
        Self::new(
            self.a.clone() * other.a.clone() + self.b.clone() * other.c.clone(),
            self.a.clone() * other.b.clone() + self.b.clone() * other.d.clone(),
            self.c.clone() * other.a.clone() + self.d.clone() * other.c.clone(),
            self.c.clone() * other.b.clone() + self.d.clone() * other.d.clone(),
            t.x,
            t.y,
        )
    }

    pub fn determinant(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if det.is_zero() {
            return None;
        }
        let a = self.d.clone() / det.clone();
        let b = -self.b.clone() / det.clone();
        let c = -self.c.clone() / det.clone();
        let d = self.a.clone() / det;
        let lin = Self::linear(a, b, c, d);
        let t = lin.apply_linear(&self.translation());
        Some(Self::new(lin.a, lin.b, lin.c, lin.d, -t.x, -t.y))
    }

    /// The unique affine map sending the three points `src` to `dst`, when
    /// `src` is not collinear.
    pub fn from_triangles(src: [&Point2<T>; 3], dst: [&Point2<T>; 3]) -> Option<Self> {
        let u1 = src[1].sub(src[0]);
        let u2 = src[2].sub(src[0]);
        let v1 = dst[1].sub(dst[0]);
        let v2 = dst[2].sub(dst[0]);
        // L [u1 u2] = [v1 v2]  =>  L = [v1 v2] [u1 u2]^-1
        let basis = Self::linear(u1.x, u2.x, u1.y, u2.y).inverse()?;
        let image = Self::linear(v1.x, v2.x, v1.y, v2.y);
        let lin = image.compose(&basis);
        let t = dst[0].sub(&lin.apply_linear(src[0]));
        Some(Self::new(lin.a, lin.b, lin.c, lin.d, t.x, t.y))
    }

    pub fn is_finite(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
            .iter()
            .all(|v| v.is_finite_value())
    }

    pub fn to_f64(&self) -> AffineMap2<f64> {
        AffineMap2::new(
            self.a.as_f64(),
            self.b.as_f64(),
            self.c.as_f64(),
            self.d.as_f64(),
            self.e.as_f64(),
            self.f.as_f64(),
        )
    }

    pub fn to_rational(&self) -> AffineMap2<Rational> {
        AffineMap2::new(
            self.a.to_rational(),
            self.b.to_rational(),
            self.c.to_rational(),
            self.d.to_rational(),
            self.e.to_rational(),
            self.f.to_rational(),
        )
    }
}

/// Extremal stretch of an affine map: `max` and `min` of
/// `‖S(x) − S(y)‖ / ‖x − y‖`, i.e. the singular values of the linear part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StretchFactors {
    #[serde(rename = "Q")]
    pub max: f64,
    #[serde(rename = "q")]
    pub min: f64,
}

impl StretchFactors {
    /// `log Q / log q`, the exponent for which `Q = q^exponent`.
    pub fn log_ratio(&self) -> f64 {
        self.max.ln() / self.min.ln()
    }

    pub fn is_similarity(&self, tol: f64) -> bool {
        (self.max - self.min).abs() <= tol * self.max
    }
}

/// Singular values of the linear part, from the eigenvalues of the Gram
/// matrix `LᵀL`. Rejects maps that are not strict contractions.
pub fn stretch_factors<T: Scalar>(m: &AffineMap2<T>) -> Result<StretchFactors, GeometryError> {
    let sv = singular_values(m);
    if !sv.max.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if sv.max >= 1.0 {
        return Err(GeometryError::NonContractive { norm: sv.max });
    }
    if sv.min <= 0.0 || m.determinant().is_zero() {
        return Err(GeometryError::Degenerate);
    }
    Ok(sv)
}

/// Singular values without the contraction check. The determinant is taken
/// in `T`, so exact maps get an exact `σ₁σ₂`.
pub(crate) fn singular_values<T: Scalar>(m: &AffineMap2<T>) -> StretchFactors {
    let det = m.determinant().as_f64().abs();
    let m = m.to_f64();
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    // Gram matrix [[p, r], [r, s]]
    let p = a * a + c * c;
    let s = b * b + d * d;
    let r = a * b + c * d;
    let half_trace = 0.5 * (p + s);
    let disc = (0.5 * (p - s)).hypot(r);
    let max = (half_trace + disc).sqrt();
    // |det| / σ₁ avoids the cancellation in half_trace − disc
    let min = if max > 0.0 { (det / max).min(max) } else { 0.0 };
    StretchFactors { max, min }
}
