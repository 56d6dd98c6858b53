use super::{validate, BipartiteIntersectionGraph, GraphNode, PolygonalSystem, ValidationReport};
use crate::geometry::{AffineMap2, ConvexPolygon};

#[derive(Debug, Clone, thiserror::Error)]
#[error("system is not a valid polygonal system")]
pub struct ValidationFailed(pub Box<ValidationReport>);

/// A system that passed all four conditions, with the combinatorial tables
/// needed to reason about copies symbolically.
///
/// Vertex indices refer to the base polygon's vertex list.
#[derive(Clone, Debug)]
pub struct ValidatedSystem {
    system: PolygonalSystem,
    report: ValidationReport,
    base: ConvexPolygon,
    maps: Vec<AffineMap2>,
    /// `preimage[i][a] = Some(c)` iff `S_i(A_c) = A_a`.
    preimage: Vec<Vec<Option<usize>>>,
    /// First `(i, c)` with `S_i(A_c) = A_a`.
    cover: Vec<(usize, usize)>,
    /// `junction[i][j] = Some((ci, cj))` iff `P_i ∩ P_j = {S_i(A_ci)} = {S_j(A_cj)}`.
    junction: Vec<Vec<Option<(usize, usize)>>>,
    /// Copies along the tree path from `i` to `j`, both included.
    copy_paths: Vec<Vec<Vec<usize>>>,
}

impl ValidatedSystem {
    pub fn new(system: PolygonalSystem) -> Result<Self, ValidationFailed> {
        let report = validate(&system);
        if !report.passed {
            return Err(ValidationFailed(Box::new(report)));
        }
        let m = system.len();
        let n = system.base().len();
        let images: Vec<Vec<_>> = (0..m)
            .map(|i| (0..n).map(|c| system.vertex_image(i, c)).collect())
            .collect();

        let preimage: Vec<Vec<Option<usize>>> = (0..m)
            .map(|i| {
                (0..n)
                    .map(|a| {
                        let target = &system.base().vertices()[a];
                        (0..n).find(|&c| system.same_vertex(&images[i][c], target))
                    })
                    .collect()
            })
            .collect();
        let cover = (0..n)
            .map(|a| {
                (0..m)
                    .find_map(|i| preimage[i][a].map(|c| (i, c)))
                    .expect("condition 2 holds")
            })
            .collect();

        let mut junction = vec![vec![None; m]; m];
        for cp in report.connection_points() {
            let find = |i: usize| {
                (0..n)
                    .find(|&c| system.same_vertex(&images[i][c], &cp.point))
                    .expect("condition 3 holds")
            };
            let (ci, cj) = (find(cp.i), find(cp.j));
            junction[cp.i][cp.j] = Some((ci, cj));
            junction[cp.j][cp.i] = Some((cj, ci));
        }

        let graph = report
            .graph
            .as_ref()
            .expect("graph built when condition 3 holds");
        let copy_paths = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        graph
                            .copy_chain(i, j)
                            .into_iter()
                            .filter_map(|node| match node {
                                GraphNode::Polygon(c) => Some(c),
                                GraphNode::Point(_) => None,
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let base = system.base_f64();
        let maps = system.maps_f64();
        Ok(Self {
            system,
            report,
            base,
            maps,
            preimage,
            cover,
            junction,
            copy_paths,
        })
    }

    pub fn system(&self) -> &PolygonalSystem {
        &self.system
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn graph(&self) -> &BipartiteIntersectionGraph {
        self.report.graph.as_ref().expect("validated")
    }

    /// Number of maps.
    pub fn m(&self) -> usize {
        self.maps.len()
    }

    /// Number of base vertices.
    pub fn vertex_count(&self) -> usize {
        self.base.len()
    }

    pub fn base_f64(&self) -> &ConvexPolygon {
        &self.base
    }

    pub fn maps_f64(&self) -> &[AffineMap2] {
        &self.maps
    }

    pub fn preimage(&self, i: usize, a: usize) -> Option<usize> {
        self.preimage[i][a]
    }

    pub fn cover(&self, a: usize) -> (usize, usize) {
        self.cover[a]
    }

    pub fn junction(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        self.junction[i][j]
    }

    pub fn copy_path(&self, i: usize, j: usize) -> &[usize] {
        &self.copy_paths[i][j]
    }

    /// `S_𝐰(A_b) = A_a`, decided combinatorially.
    pub fn vertex_is(&self, word: &[usize], b: usize, a: usize) -> bool {
        match word.split_first() {
            None => a == b,
            Some((&i, rest)) => match self.preimage[i][a] {
                Some(c) => self.vertex_is(rest, b, c),
                None => false,
            },
        }
    }

    /// `S_𝐮(A_a) = S_𝐰(A_b)`, decided combinatorially.
    ///
    /// After stripping the common prefix, either one word is empty (a base
    /// vertex, handled by `vertex_is`) or the first letters differ and the
    /// point must be the junction of those two copies.
    pub fn same_point(&self, u: &[usize], a: usize, w: &[usize], b: usize) -> bool {
        let k = u.iter().zip(w).take_while(|(x, y)| x == y).count();
        let (u, w) = (&u[k..], &w[k..]);
        match (u.split_first(), w.split_first()) {
            (None, None) => a == b,
            (None, Some(_)) => self.vertex_is(w, b, a),
            (Some(_), None) => self.vertex_is(u, a, b),
            (Some((&i, ur)), Some((&j, wr))) => match self.junction[i][j] {
                Some((ci, cj)) => self.vertex_is(ur, a, ci) && self.vertex_is(wr, b, cj),
                None => false,
            },
        }
    }
}
