//! Planar primitives: points, affine maps, convex polygons and the metric
//! quantities built on them.
//!
//! Everything is generic over [`Scalar`], which is implemented for `f64` and
//! for [`Rational`]. Discrete predicates (containment, intersection
//! classification) are always evaluated exactly; metric quantities
//! (distances, angles, singular values) are computed in `f64`.

mod affine;
mod metric;
mod polygon;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub(crate) use affine::singular_values;
pub use affine::{stretch_factors, AffineMap2, StretchFactors};
pub use metric::{diameter, incident_side_angles, min_distance, point_polygon_distance};
pub use polygon::{apply, convex_intersection, ConvexPolygon, IntersectionKind};

pub(crate) use metric::ray_angle_min;
pub(crate) use polygon::intersect_exact;

/// Arbitrary-precision rational number used for exact predicates.
pub type Rational = num_rational::BigRational;

/// Number type usable as a planar coordinate.
pub trait Scalar:
    Clone + PartialOrd + fmt::Debug + Num + Signed + ToPrimitive + FromPrimitive + Send + Sync
{
    /// Exact rational value. Every finite `f64` is a dyadic rational, so the
    /// conversion is lossless.
    fn to_rational(&self) -> Rational;

    /// Nearest value of this type to `r`.
    fn from_rational(r: &Rational) -> Self;

    fn is_finite_value(&self) -> bool;

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational {
    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Converts a rational to the nearest-ish `f64` without overflowing on huge
/// numerators and denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Both parts too large for f64: shift them down together.
    let numer = r.numer();
    let denom = r.denom();
    let shift = numer.bits().max(denom.bits()).saturating_sub(1000);
    let n: BigInt = numer >> shift;
    let d: BigInt = denom >> shift;
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

/// Point (or vector) in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Point2<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.x.clone() - other.x.clone(),
            self.y.clone() - other.y.clone(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.x.clone() + other.x.clone(),
            self.y.clone() + other.y.clone(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    /// z-component of the cross product `self × other`.
    pub fn cross(&self, other: &Self) -> T {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite_value() && self.y.is_finite_value()
    }

    pub fn to_f64(&self) -> Point2<f64> {
        Point2::new(self.x.as_f64(), self.y.as_f64())
    }

    pub fn to_rational(&self) -> Point2<Rational> {
        Point2::new(self.x.to_rational(), self.y.to_rational())
    }

    pub fn from_rational(p: &Point2<Rational>) -> Self {
        Self::new(T::from_rational(&p.x), T::from_rational(&p.y))
    }
}

impl Point2<f64> {
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl<T: fmt::Display> fmt::Display for Point2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point2<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

/// Twice the signed area of triangle `(a, b, c)`; positive when
/// counterclockwise.
pub fn orient<T: Scalar>(a: &Point2<T>, b: &Point2<T>, c: &Point2<T>) -> T {
    b.sub(a).cross(&c.sub(a))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("linear part is not contractive (operator norm {norm})")]
    NonContractive { norm: f64 },
    #[error("linear part is singular")]
    Degenerate,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not strictly convex")]
    NotStrictlyConvex,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("point is not a common vertex of both polygons")]
    NotSharedVertex,
    #[error("empty point set")]
    EmptyInput,
}
