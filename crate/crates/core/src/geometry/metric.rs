use super::{convex_intersection, ConvexPolygon, GeometryError, IntersectionKind, Point2, Scalar};

/// Distance from `p` to the closed segment `[a, b]`.
pub(crate) fn point_segment_distance(p: &Point2, a: &Point2, b: &Point2) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (p.sub(a).dot(&ab) / len2).clamp(0.0, 1.0);
    p.distance(&a.add(&ab.scale(&t)))
}

/// `inf ‖x − y‖` over `x ∈ p1`, `y ∈ p2`. Zero exactly when the polygons
/// intersect (decided exactly); otherwise attained between a vertex and an
/// edge.
pub fn min_distance<T: Scalar>(p1: &ConvexPolygon<T>, p2: &ConvexPolygon<T>) -> f64 {
    if !matches!(convex_intersection(p1, p2), IntersectionKind::Empty) {
        return 0.0;
    }
    let (q1, q2) = (p1.to_f64(), p2.to_f64());
    vertex_edge_min(&q1, &q2).min(vertex_edge_min(&q2, &q1))
}

fn vertex_edge_min(from: &ConvexPolygon, to: &ConvexPolygon) -> f64 {
    from.vertices()
        .iter()
        .flat_map(|v| {
            to.edges()
                .map(move |(a, b)| point_segment_distance(v, a, b))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Distance from a point to a closed polygon; zero when contained (exact
/// test in `T`).
pub fn point_polygon_distance<T: Scalar>(a: &Point2<T>, p: &ConvexPolygon<T>) -> f64 {
    if p.contains(a) {
        return 0.0;
    }
    let af = a.to_f64();
    let q = p.to_f64();
    q.edges()
        .map(|(u, v)| point_segment_distance(&af, u, v))
        .fold(f64::INFINITY, f64::min)
}

/// Unsigned angle in `[0, π]` between two direction vectors.
fn angle_between(u: &Point2, v: &Point2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v))
}

/// Minimum angle over pairs of rays, one from each list.
pub(crate) fn ray_angle_min(r1: &[Point2], r2: &[Point2]) -> f64 {
    r1.iter()
        .flat_map(|u| r2.iter().map(move |v| angle_between(u, v)))
        .fold(f64::INFINITY, f64::min)
}

/// Rays from vertex `k` of `p` along its two incident sides.
fn incident_rays(p: &ConvexPolygon, k: usize) -> [Point2; 2] {
    let vs = p.vertices();
    let n = vs.len();
    [vs[(k + n - 1) % n].sub(&vs[k]), vs[(k + 1) % n].sub(&vs[k])]
}

/// Minimum angle between a side of `p1` and a side of `p2`, both incident
/// to their common vertex `a`, with sides taken as rays leaving `a`.
pub fn incident_side_angles<T: Scalar>(
    a: &Point2<T>,
    p1: &ConvexPolygon<T>,
    p2: &ConvexPolygon<T>,
) -> Result<f64, GeometryError> {
    let a = a.to_f64();
    let (q1, q2) = (p1.to_f64(), p2.to_f64());
    let k1 = vertex_index(&a, &q1).ok_or(GeometryError::NotSharedVertex)?;
    let k2 = vertex_index(&a, &q2).ok_or(GeometryError::NotSharedVertex)?;
    Ok(ray_angle_min(
        &incident_rays(&q1, k1),
        &incident_rays(&q2, k2),
    ))
}

fn vertex_index(a: &Point2, p: &ConvexPolygon) -> Option<usize> {
    let scale = p
        .vertices()
        .iter()
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(a.x.abs().max(a.y.abs()), f64::max)
        .max(1.0);
    let tol = 1e-9 * scale;
    p.vertices().iter().position(|v| v.distance(a) <= tol)
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point2]) -> Result<f64, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    if points.len() <= 32 {
        return Ok(all_pairs_max(points));
    }
    let hull = convex_hull(points);
    if hull.len() <= 3 {
        return Ok(all_pairs_max(&hull));
    }
    Ok(rotating_calipers(&hull))
}

fn all_pairs_max(points: &[Point2]) -> f64 {
    let mut best = 0.0f64;
    for (k, p) in points.iter().enumerate() {
        for q in &points[k + 1..] {
            best = best.max(p.distance(q));
        }
    }
    best
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Point2, a: &Point2, b: &Point2| a.sub(o).cross(&b.sub(o));
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

fn rotating_calipers(hull: &[Point2]) -> f64 {
    let n = hull.len();
    let area =
        |i: usize, j: usize, k: usize| hull[j].sub(&hull[i]).cross(&hull[k].sub(&hull[i])).abs();
    let mut best = 0.0f64;
    let mut j = 1;
    for i in 0..n {
        let i2 = (i + 1) % n;
        while area(i, i2, (j + 1) % n) > area(i, i2, j) {
            j = (j + 1) % n;
        }
        best = best
            .max(hull[i].distance(&hull[j]))
            .max(hull[i2].distance(&hull[j]));
    }
    best
}
