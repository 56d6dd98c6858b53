use num_traits::Signed;

use super::{orient, AffineMap2, GeometryError, Point2, Rational, Scalar};

/// Strictly convex polygon with counterclockwise vertices and nonempty
/// interior.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexPolygon<T = f64> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> ConvexPolygon<T> {
    /// Builds a polygon from vertices in either orientation; clockwise input
    /// is reversed.
    pub fn new(mut vertices: Vec<Point2<T>>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if !vertices.iter().all(Point2::is_finite) {
            return Err(GeometryError::NonFinite);
        }
        let area2 = signed_area2(&vertices);
        if area2.is_zero() {
            return Err(GeometryError::NotStrictlyConvex);
        }
        if area2 < T::zero() {
            reverse_keep_first(&mut vertices);
        }
        // Every other vertex strictly left of every edge.
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            for (k, p) in vertices.iter().enumerate() {
                if k == i || k == (i + 1) % n {
                    continue;
                }
                if orient(a, b, p) <= T::zero() {
                    return Err(GeometryError::NotStrictlyConvex);
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(v_k, v_{k+1})`.
    pub fn edges(&self) -> impl Iterator<Item = (&Point2<T>, &Point2<T>)> {
        let n = self.vertices.len();
        (0..n).map(move |k| (&self.vertices[k], &self.vertices[(k + 1) % n]))
    }

    /// Closed containment, exact in `T`.
    pub fn contains(&self, p: &Point2<T>) -> bool {
        self.edges().all(|(a, b)| orient(a, b, p) >= T::zero())
    }

    /// Image under `m`, re-oriented counterclockwise.
    pub fn image(&self, m: &AffineMap2<T>) -> Self {
        let mut vs: Vec<_> = self.vertices.iter().map(|v| m.apply(v)).collect();
        if m.determinant() < T::zero() {
            reverse_keep_first(&mut vs);
        }
        Self { vertices: vs }
    }

    pub fn to_f64(&self) -> ConvexPolygon<f64> {
        ConvexPolygon {
            vertices: self.vertices.iter().map(Point2::to_f64).collect(),
        }
    }

    pub fn to_rational(&self) -> ConvexPolygon<Rational> {
        ConvexPolygon {
            vertices: self.vertices.iter().map(Point2::to_rational).collect(),
        }
    }

    pub fn centroid(&self) -> Point2<T> {
        let n = T::from_usize(self.vertices.len()).unwrap_or_else(T::one);
        let sum = self
            .vertices
            .iter()
            .fold(Point2::new(T::zero(), T::zero()), |acc, v| acc.add(v));
        Point2::new(sum.x / n.clone(), sum.y / n)
    }
}

impl ConvexPolygon<f64> {
    /// Closed containment with slack `eps` (a distance) on every edge.
    pub fn contains_within(&self, p: &Point2<f64>, eps: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b.sub(a);
            e.cross(&p.sub(a)) >= -eps * e.norm()
        })
    }
}

fn signed_area2<T: Scalar>(vs: &[Point2<T>]) -> T {
    let n = vs.len();
    (0..n).fold(T::zero(), |acc, k| acc + vs[k].cross(&vs[(k + 1) % n]))
}

fn reverse_keep_first<P>(vs: &mut [P]) {
    if vs.len() > 1 {
        vs[1..].reverse();
    }
}

/// Image polygon `m(p)`; counterclockwise even when `det m < 0`.
pub fn apply<T: Scalar>(m: &AffineMap2<T>, p: &ConvexPolygon<T>) -> ConvexPolygon<T> {
    p.image(m)
}

/// Classification of `p1 ∩ p2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionKind<T = f64> {
    Empty,
    SinglePoint(Point2<T>),
    /// A segment or a region: more than one point.
    Extended,
}

impl<T> IntersectionKind<T> {
    pub fn is_empty(&self) -> bool {
        matches!(self, Self::Empty)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Empty => "empty",
            Self::SinglePoint(_) => "single_point",
            Self::Extended => "extended",
        }
    }
}

/// Exact classification of the intersection of two convex polygons.
///
/// `p1` is clipped against every closed half-plane of `p2` in rational
/// arithmetic; the number of distinct points left decides the kind.
pub fn convex_intersection<T: Scalar>(
    p1: &ConvexPolygon<T>,
    p2: &ConvexPolygon<T>,
) -> IntersectionKind<T> {
    let q1 = p1.to_rational();
    let q2 = p2.to_rational();
    match intersect_exact(&q1, &q2) {
        IntersectionKind::Empty => IntersectionKind::Empty,
        IntersectionKind::Extended => IntersectionKind::Extended,
        IntersectionKind::SinglePoint(p) => {
            IntersectionKind::SinglePoint(Point2::from_rational(&p))
        }
    }
}

pub(crate) fn intersect_exact(
    p1: &ConvexPolygon<Rational>,
    p2: &ConvexPolygon<Rational>,
) -> IntersectionKind<Rational> {
    let mut region: Vec<Point2<Rational>> = p1.vertices.clone();
    for (a, b) in p2.edges() {
        region = clip_half_plane(&region, a, b);
        if region.is_empty() {
            return IntersectionKind::Empty;
        }
    }
    let mut distinct: Vec<Point2<Rational>> = Vec::new();
    for p in region {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
        if distinct.len() > 1 {
            return IntersectionKind::Extended;
        }
    }
    match distinct.pop() {
        Some(p) => IntersectionKind::SinglePoint(p),
        None => IntersectionKind::Empty,
    }
}

/// Keeps the part of the (possibly degenerate) convex chain `poly` on or
/// left of the directed line `a → b`.
fn clip_half_plane(
    poly: &[Point2<Rational>],
    a: &Point2<Rational>,
    b: &Point2<Rational>,
) -> Vec<Point2<Rational>> {
    let n = poly.len();
    let side: Vec<Rational> = poly.iter().map(|p| orient(a, b, p)).collect();
    let mut out: Vec<Point2<Rational>> = Vec::with_capacity(n + 1);
    for k in 0..n {
        let j = (k + 1) % n;
        let (cur, nxt) = (&poly[k], &poly[j]);
        let (sc, sn) = (&side[k], &side[j]);
        if !sc.is_negative() {
            push_distinct(&mut out, cur.clone());
        }
        if (sc.is_positive() && sn.is_negative()) || (sc.is_negative() && sn.is_positive()) {
            let t = sc.clone() / (sc.clone() - sn.clone());
            push_distinct(&mut out, cur.add(&nxt.sub(cur).scale(&t)));
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn push_distinct(out: &mut Vec<Point2<Rational>>, p: Point2<Rational>) {
    if out.last() != Some(&p) {
        out.push(p);
    }
}
