use rayon::prelude::*;

use super::graph::{BipartiteIntersectionGraph, GraphWitness};
use super::PolygonalSystem;
use crate::geometry::{ConvexPolygon, IntersectionKind, Point2, Rational};

/// `S_i(P) ⊂ P` for every `i`. Indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition1 {
    pub passed: bool,
    pub failing_maps: Vec<usize>,
}

/// Every vertex of `P` is some `S_i(A_c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition2 {
    pub passed: bool,
    pub uncovered_vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairViolation {
    pub i: usize,
    pub j: usize,
    pub kind: IntersectionKind<Rational>,
}

/// `P_i ∩ P_j` is empty or a single common vertex of both images.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition3 {
    pub passed: bool,
    pub violations: Vec<PairViolation>,
    /// One entry per touching pair `i < j`; empty unless passed.
    pub connection_points: Vec<ConnectionPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionPoint {
    pub i: usize,
    pub j: usize,
    pub point: Point2<Rational>,
}

/// The intersection graph is a tree. `None` in the report when skipped.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition4 {
    pub passed: bool,
    pub witness: Option<GraphWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub condition1: Condition1,
    pub condition2: Condition2,
    pub condition3: Condition3,
    pub condition4: Option<Condition4>,
    pub graph: Option<BipartiteIntersectionGraph>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn connection_points(&self) -> &[ConnectionPoint] {
        &self.condition3.connection_points
    }
}

pub fn check_condition1(sys: &PolygonalSystem) -> Condition1 {
    let base = sys.base();
    let failing_maps: Vec<usize> = (0..sys.len())
        .filter(|&i| !sys.image(i).vertices().iter().all(|v| base.contains(v)))
        .collect();
    Condition1 {
        passed: failing_maps.is_empty(),
        failing_maps,
    }
}

pub fn check_condition2(sys: &PolygonalSystem) -> Condition2 {
    let n = sys.base().len();
    let uncovered_vertices: Vec<usize> = (0..n)
        .filter(|&a| {
            let target = &sys.base().vertices()[a];
            !(0..sys.len())
                .any(|i| (0..n).any(|c| sys.same_vertex(&sys.vertex_image(i, c), target)))
        })
        .collect();
    Condition2 {
        passed: uncovered_vertices.is_empty(),
        uncovered_vertices,
    }
}

pub fn check_condition3(sys: &PolygonalSystem) -> Condition3 {
    let images: Vec<ConvexPolygon<Rational>> = (0..sys.len()).map(|i| sys.image(i)).collect();
    let pairs: Vec<(usize, usize)> = (0..sys.len())
        .flat_map(|i| (i + 1..sys.len()).map(move |j| (i, j)))
        .collect();
    let kinds: Vec<IntersectionKind<Rational>> = pairs
        .par_iter()
        .map(|&(i, j)| crate::geometry::intersect_exact(&images[i], &images[j]))
        .collect();

    let is_vertex_of = |p: &Point2<Rational>, poly: &ConvexPolygon<Rational>| {
        poly.vertices().iter().any(|v| sys.same_vertex(v, p))
    };

    let mut violations = Vec::new();
    let mut connection_points = Vec::new();
    for (&(i, j), kind) in pairs.iter().zip(kinds) {
        match kind {
            IntersectionKind::Empty => {}
            IntersectionKind::SinglePoint(p) => {
                if is_vertex_of(&p, &images[i]) && is_vertex_of(&p, &images[j]) {
                    connection_points.push(ConnectionPoint { i, j, point: p });
                } else {
                    violations.push(PairViolation {
                        i,
                        j,
                        kind: IntersectionKind::SinglePoint(p),
                    });
                }
            }
            IntersectionKind::Extended => violations.push(PairViolation {
                i,
                j,
                kind: IntersectionKind::Extended,
            }),
        }
    }
    let passed = violations.is_empty();
    if !passed {
        connection_points.clear();
    }
    Condition3 {
        passed,
        violations,
        connection_points,
    }
}

/// Graph on the copies and the distinct connection points, with an edge
/// `(i, A)` for every copy `P_i` containing `A`.
pub fn build_graph(
    sys: &PolygonalSystem,
    connection_points: &[ConnectionPoint],
) -> BipartiteIntersectionGraph {
    let mut points: Vec<Point2<Rational>> = Vec::new();
    for cp in connection_points {
        if !points.contains(&cp.point) {
            points.push(cp.point.clone());
        }
    }
    let images: Vec<_> = (0..sys.len()).map(|i| sys.image(i)).collect();
    let mut edges = Vec::new();
    for (i, img) in images.iter().enumerate() {
        for (k, p) in points.iter().enumerate() {
            if img.contains(p) {
                edges.push((i, k));
            }
        }
    }
    BipartiteIntersectionGraph::new(sys.len(), points, edges)
}

pub fn check_condition4(graph: &BipartiteIntersectionGraph) -> Condition4 {
    match graph.tree_witness() {
        None => Condition4 {
            passed: true,
            witness: None,
        },
        Some(w) => Condition4 {
            passed: false,
            witness: Some(w),
        },
    }
}

/// Runs the four conditions in order; the graph and condition 4 are skipped
/// when condition 3 fails.
pub fn validate(sys: &PolygonalSystem) -> ValidationReport {
    let condition1 = check_condition1(sys);
    let condition2 = check_condition2(sys);
    let condition3 = check_condition3(sys);
    let (graph, condition4) = if condition3.passed {
        let g = build_graph(sys, &condition3.connection_points);
        let c4 = check_condition4(&g);
        (Some(g), Some(c4))
    } else {
        (None, None)
    };
    let passed = condition1.passed
        && condition2.passed
        && condition3.passed
        && condition4.as_ref().is_some_and(|c| c.passed);
    ValidationReport {
        condition1,
        condition2,
        condition3,
        condition4,
        graph,
        passed,
    }
}
