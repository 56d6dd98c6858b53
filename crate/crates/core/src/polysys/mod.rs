//! Polygonal systems: a convex polygon `P` with affine contractions
//! `S_1, …, S_m`, the four defining conditions, and the bipartite
//! intersection graph.

mod graph;
mod topology;
mod validate;

use crate::geometry::{
    apply, stretch_factors, AffineMap2, ConvexPolygon, GeometryError, Point2, Rational, Scalar,
    StretchFactors,
};

pub use graph::{BipartiteIntersectionGraph, GraphNode, GraphWitness};
pub use topology::{ValidatedSystem, ValidationFailed};
pub use validate::{
    build_graph, check_condition1, check_condition2, check_condition3, check_condition4, validate,
    Condition1, Condition2, Condition3, Condition4, ConnectionPoint, PairViolation,
    ValidationReport,
};

/// Absolute tolerance for vertex coincidence in systems built from floats.
pub const FLOAT_VERTEX_TOL: f64 = 1e-12;

/// How the coordinates were supplied. Exact systems compare vertices with
/// rational equality; float systems compare within [`FLOAT_VERTEX_TOL`].
/// Intersection classification is exact in both cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SystemError {
    #[error("a system needs at least 2 maps, got {0}")]
    TooFewMaps(usize),
    #[error("base polygon")]
    Polygon(#[source] GeometryError),
    #[error("map {}", index + 1)]
    Map {
        index: usize,
        #[source]
        source: GeometryError,
    },
    #[error("not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error("coordinate change is singular")]
    SingularChange,
}

/// Candidate system `(P, S_1, …, S_m)`; each map is a checked injective
/// contraction, the four conditions are not assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonalSystem {
    base: ConvexPolygon<Rational>,
    maps: Vec<AffineMap2<Rational>>,
    stretch: Vec<StretchFactors>,
    arithmetic: Arithmetic,
}

impl PolygonalSystem {
    pub fn new(
        base: ConvexPolygon<Rational>,
        maps: Vec<AffineMap2<Rational>>,
    ) -> Result<Self, SystemError> {
        Self::with_arithmetic(base, maps, Arithmetic::Exact)
    }

    /// Builds from float coordinates; each value is taken at its exact
    /// binary value.
    pub fn from_f64(base: Vec<Point2>, maps: Vec<AffineMap2>) -> Result<Self, SystemError> {
        let base = ConvexPolygon::new(base.iter().map(Point2::to_rational).collect())
            .map_err(SystemError::Polygon)?;
        let maps = maps
            .iter()
            .enumerate()
            .map(|(index, m)| {
                if m.is_finite() {
                    Ok(m.to_rational())
                } else {
                    Err(SystemError::Map {
                        index,
                        source: GeometryError::NonFinite,
                    })
                }
            })
            .collect::<Result<_, _>>()?;
        Self::with_arithmetic(base, maps, Arithmetic::Float)
    }

    pub fn with_arithmetic(
        base: ConvexPolygon<Rational>,
        maps: Vec<AffineMap2<Rational>>,
        arithmetic: Arithmetic,
    ) -> Result<Self, SystemError> {
        if maps.len() < 2 {
            return Err(SystemError::TooFewMaps(maps.len()));
        }
        let stretch = maps
            .iter()
            .enumerate()
            .map(|(index, m)| {
                stretch_factors(m).map_err(|source| SystemError::Map { index, source })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            base,
            maps,
            stretch,
            arithmetic,
        })
    }

    pub fn base(&self) -> &ConvexPolygon<Rational> {
        &self.base
    }

    pub fn maps(&self) -> &[AffineMap2<Rational>] {
        &self.maps
    }

    /// Number of maps `m`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic
    }

    /// `(Q_i, q_i)` for every map.
    pub fn stretch(&self) -> &[StretchFactors] {
        &self.stretch
    }

    /// `P_i = S_i(P)`.
    pub fn image(&self, i: usize) -> ConvexPolygon<Rational> {
        apply(&self.maps[i], &self.base)
    }

    /// `S_i(A_v)`.
    pub fn vertex_image(&self, i: usize, v: usize) -> Point2<Rational> {
        self.maps[i].apply(&self.base.vertices()[v])
    }

    /// Vertex coincidence under this system's arithmetic.
    pub fn same_vertex(&self, p: &Point2<Rational>, q: &Point2<Rational>) -> bool {
        match self.arithmetic {
            Arithmetic::Exact => p == q,
            Arithmetic::Float => {
                let d = p.sub(q).to_f64();
                d.x.abs() <= FLOAT_VERTEX_TOL && d.y.abs() <= FLOAT_VERTEX_TOL
            }
        }
    }

    /// Index `a` with `A_a` coinciding with `p`.
    pub fn vertex_index(&self, p: &Point2<Rational>) -> Option<usize> {
        self.base
            .vertices()
            .iter()
            .position(|v| self.same_vertex(v, p))
    }

    /// Reorders the maps: new map `k` is old map `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, SystemError> {
        let m = self.maps.len();
        let mut seen = vec![false; m];
        if perm.len() != m
            || !perm
                .iter()
                .all(|&k| k < m && !std::mem::replace(&mut seen[k], true))
        {
            return Err(SystemError::BadPermutation(m));
        }
        let maps = perm.iter().map(|&k| self.maps[k].clone()).collect();
        Self::with_arithmetic(self.base.clone(), maps, self.arithmetic)
    }

    /// The system in coordinates `y = g(x)`: base `g(P)`, maps `g S_i g⁻¹`.
    pub fn conjugate(&self, g: &AffineMap2<Rational>) -> Result<Self, SystemError> {
        let inv = g.inverse().ok_or(SystemError::SingularChange)?;
        let base = apply(g, &self.base);
        let maps = self
            .maps
            .iter()
            .map(|s| g.compose(&s.compose(&inv)))
            .collect();
        Self::with_arithmetic(base, maps, self.arithmetic)
    }

    /// Conjugation by the homothety `x ↦ s·x`.
    pub fn scale(&self, s: &Rational) -> Result<Self, SystemError> {
        let zero = Rational::from_integer(0.into());
        self.conjugate(&AffineMap2::linear(
            s.clone(),
            zero.clone(),
            zero,
            s.clone(),
        ))
    }

    pub fn base_f64(&self) -> ConvexPolygon {
        self.base.to_f64()
    }

    pub fn maps_f64(&self) -> Vec<AffineMap2> {
        self.maps.iter().map(AffineMap2::to_f64).collect()
    }
}

/// `S_{w_1} ∘ … ∘ S_{w_n}` for a word of 0-based indices.
pub fn compose_word<T: Scalar>(maps: &[AffineMap2<T>], word: &[usize]) -> AffineMap2<T> {
    word.iter()
        .fold(AffineMap2::identity(), |acc, &i| acc.compose(&maps[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rejects_single_map_and_expansions() {
        let dt2 = fixtures::dt2();
        let one = vec![dt2.maps()[0].clone()];
        assert_eq!(
            PolygonalSystem::new(dt2.base().clone(), one),
            Err(SystemError::TooFewMaps(1))
        );
        let mut maps = dt2.maps().to_vec();
        maps[1] = AffineMap2::identity();
        assert!(matches!(
            PolygonalSystem::new(dt2.base().clone(), maps),
            Err(SystemError::Map {
                index: 1,
                source: GeometryError::NonContractive { .. }
            })
        ));
    }

    #[test]
    fn permutation_is_checked() {
        let dt2 = fixtures::dt2();
        assert!(dt2.permute(&[1, 0]).is_ok());
        assert_eq!(dt2.permute(&[0, 0]), Err(SystemError::BadPermutation(2)));
        assert_eq!(dt2.permute(&[0]), Err(SystemError::BadPermutation(2)));
    }

    #[test]
    fn conjugation_keeps_vertex_images() {
        let dt2 = fixtures::dt2();
        let two = Rational::from_integer(2.into());
        let big = dt2.scale(&two).unwrap();
        for i in 0..2 {
            for v in 0..3 {
                let p = dt2.vertex_image(i, v);
                let q = big.vertex_image(i, v);
                assert_eq!(q, p.scale(&two));
            }
        }
    }

    #[test]
    fn compose_word_applies_first_letter_last() {
        let dt2 = fixtures::dt2();
        let w = compose_word(dt2.maps(), &[1, 0]);
        let p = &dt2.base().vertices()[1];
        assert_eq!(w.apply(p), dt2.maps()[1].apply(&dt2.maps()[0].apply(p)));
    }
}
