//! Symbolic addresses of copies, finite Hutchinson refinements and SVG
//! rendering.

mod svg;

use std::fmt;

use rayon::prelude::*;

use crate::geometry::{apply, AffineMap2, ConvexPolygon, Point2, Rational, Scalar};
use crate::polysys::{compose_word, PolygonalSystem, ValidatedSystem};

pub use svg::{render_svg, Highlight};

/// Default limit on the number of cells a refinement or arc may produce.
pub const DEFAULT_CELL_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AttractorError {
    #[error("{requested} cells exceed the cell budget of {budget}")]
    DepthTooLarge { requested: u128, budget: u64 },
    #[error("point lies outside every cell")]
    PointOutside,
    #[error("invalid address token {0:?}")]
    InvalidToken(String),
}

/// Upper bound on cells materialized by one call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellBudget(pub u64);

impl Default for CellBudget {
    fn default() -> Self {
        Self(DEFAULT_CELL_BUDGET)
    }
}

impl CellBudget {
    /// Fails when `requested` cells would exceed the budget.
    pub fn check(&self, requested: u128) -> Result<(), AttractorError> {
        if requested > u128::from(self.0) {
            Err(AttractorError::DepthTooLarge {
                requested,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }

    /// `m^depth`, saturating.
    pub fn cells(m: usize, depth: usize) -> u128 {
        (0..depth).fold(1u128, |acc, _| acc.saturating_mul(m as u128))
    }
}

/// Word `i_1 … i_n` over `{0, …, m−1}`; the empty word is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(Vec<usize>);

impl Address {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut w = self.0.clone();
        w.push(i);
        Self(w)
    }

    pub fn concat(&self, tail: &[usize]) -> Self {
        let mut w = self.0.clone();
        w.extend_from_slice(tail);
        Self(w)
    }

    pub fn is_prefix_of(&self, other: &Self) -> bool {
        other.0.starts_with(&self.0)
    }

    /// 1-based letters: concatenated when `m ≤ 9`, dot-separated otherwise;
    /// `ε` for the root.
    pub fn token(&self, m: usize) -> String {
        if self.0.is_empty() {
            return "ε".to_owned();
        }
        let sep = if m <= 9 { "" } else { "." };
        self.0
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Inverse of [`Address::token`].
    pub fn parse(token: &str, m: usize) -> Result<Self, AttractorError> {
        let bad = || AttractorError::InvalidToken(token.to_owned());
        if token == "ε" || token.is_empty() {
            return Ok(Self::root());
        }
        let parts: Vec<&str> = if m <= 9 {
            token.split("").filter(|s| !s.is_empty()).collect()
        } else {
            token.split('.').collect()
        };
        let letters = parts
            .into_iter()
            .map(|s| match s.parse::<usize>() {
                Ok(k) if (1..=m).contains(&k) && !s.starts_with('+') => Ok(k - 1),
                _ => Err(bad()),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self(letters))
    }
}

/// Maximal common prefix.
pub fn longest_common_prefix(a: &Address, b: &Address) -> Address {
    let k = a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count();
    Address(a.0[..k].to_vec())
}

/// The point `S_𝐢(A_v)` of the attractor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddressedPoint {
    pub address: Address,
    /// 0-based index into the base polygon's vertices.
    pub vertex: usize,
}

impl AddressedPoint {
    pub fn new(address: Address, vertex: usize) -> Self {
        Self { address, vertex }
    }

    /// Whether every letter and the vertex index are in range.
    pub fn is_valid_for(&self, m: usize, vertex_count: usize) -> bool {
        self.vertex < vertex_count && self.address.0.iter().all(|&i| i < m)
    }

    pub fn denote(&self, sys: &ValidatedSystem) -> Point2 {
        compose_word(sys.maps_f64(), self.address.letters())
            .apply(&sys.base_f64().vertices()[self.vertex])
    }

    pub fn denote_exact(&self, sys: &PolygonalSystem) -> Point2<Rational> {
        compose_word(sys.maps(), self.address.letters()).apply(&sys.base().vertices()[self.vertex])
    }

    /// `"<address>:<vertex>"`, both 1-based.
    pub fn token(&self, m: usize) -> String {
        format!("{}:{}", self.address.token(m), self.vertex + 1)
    }

    pub fn parse(token: &str, m: usize, vertex_count: usize) -> Result<Self, AttractorError> {
        let bad = || AttractorError::InvalidToken(token.to_owned());
        let (addr, v) = token.rsplit_once(':').ok_or_else(bad)?;
        let vertex = match v.parse::<usize>() {
            Ok(k) if (1..=vertex_count).contains(&k) && !v.starts_with('+') => k - 1,
            _ => return Err(bad()),
        };
        let address = Address::parse(addr, m).map_err(|_| bad())?;
        Ok(Self { address, vertex })
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // unambiguous for any m
        f.write_str(&self.token(usize::MAX))
    }
}

/// All depth-`n` cells in lexicographic address order.
#[derive(Clone, Debug, PartialEq)]
pub struct Refinement<T = f64> {
    pub depth: usize,
    pub cells: Vec<(Address, ConvexPolygon<T>)>,
}

/// Composed maps `S_𝐢` for every address of length `depth`, lexicographic.
pub fn cell_maps<T: Scalar>(
    maps: &[AffineMap2<T>],
    depth: usize,
    budget: CellBudget,
) -> Result<Vec<(Address, AffineMap2<T>)>, AttractorError> {
    budget.check(CellBudget::cells(maps.len(), depth))?;
    let mut level = vec![(Address::root(), AffineMap2::identity())];
    for _ in 0..depth {
        level = level
            .par_iter()
            .flat_map_iter(|(addr, g)| {
                maps.iter()
                    .enumerate()
                    .map(move |(i, s)| (addr.child(i), g.compose(s)))
            })
            .collect();
    }
    Ok(level)
}

/// `P_𝐢 = S_𝐢(P)` for all addresses of length `depth`.
pub fn refine(
    sys: &PolygonalSystem,
    depth: usize,
    budget: CellBudget,
) -> Result<Refinement, AttractorError> {
    let base = sys.base_f64();
    let cells = cell_maps(&sys.maps_f64(), depth, budget)?
        .into_par_iter()
        .map(|(a, g)| (a, apply(&g, &base)))
        .collect();
    Ok(Refinement { depth, cells })
}

/// As [`refine`], in exact arithmetic.
pub fn refine_exact(
    sys: &PolygonalSystem,
    depth: usize,
    budget: CellBudget,
) -> Result<Refinement<Rational>, AttractorError> {
    let cells = cell_maps(sys.maps(), depth, budget)?
        .into_par_iter()
        .map(|(a, g)| (a, apply(&g, sys.base())))
        .collect();
    Ok(Refinement { depth, cells })
}

/// Slack used by [`locate`] for rounding in composed float maps.
pub const LOCATE_TOL: f64 = 1e-12;

/// Addresses of all cells containing `p`, within [`LOCATE_TOL`].
pub fn locate(p: &Point2, refinement: &Refinement) -> Result<Vec<Address>, AttractorError> {
    let hits: Vec<Address> = refinement
        .cells
        .iter()
        .filter(|(_, cell)| cell.contains_within(p, LOCATE_TOL))
        .map(|(a, _)| a.clone())
        .collect();
    if hits.is_empty() {
        Err(AttractorError::PointOutside)
    } else {
        Ok(hits)
    }
}

impl Refinement<Rational> {
    /// Exact version of [`locate`].
    pub fn locate_exact(&self, p: &Point2<Rational>) -> Result<Vec<Address>, AttractorError> {
        let hits: Vec<Address> = self
            .cells
            .iter()
            .filter(|(_, c)| c.contains(p))
            .map(|(a, _)| a.clone())
            .collect();
        if hits.is_empty() {
            Err(AttractorError::PointOutside)
        } else {
            Ok(hits)
        }
    }
}

/// Nearest depth-`depth` copy vertex to `p`, with its distance. Ties go to
/// the lexicographically first address, then the lowest vertex.
pub fn snap(
    sys: &ValidatedSystem,
    p: &Point2,
    depth: usize,
    budget: CellBudget,
) -> Result<(AddressedPoint, f64), AttractorError> {
    let base = sys.base_f64().vertices();
    let mut best: Option<(AddressedPoint, f64)> = None;
    for (addr, g) in cell_maps(sys.maps_f64(), depth, budget)? {
        for (v, a) in base.iter().enumerate() {
            let d = g.apply(a).distance(p);
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((AddressedPoint::new(addr.clone(), v), d));
            }
        }
    }
    Ok(best.expect("at least one cell"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn addr(s: &[usize]) -> Address {
        Address::new(s.to_vec())
    }

    #[test]
    fn common_prefix_examples() {
        assert_eq!(
            longest_common_prefix(&addr(&[0, 1, 0]), &addr(&[0, 1, 1])),
            addr(&[0, 1])
        );
        assert_eq!(
            longest_common_prefix(&addr(&[0]), &addr(&[1])),
            Address::root()
        );
        assert_eq!(
            longest_common_prefix(&addr(&[0, 0, 0]), &addr(&[0, 0, 0])),
            addr(&[0, 0, 0])
        );
    }

    #[test]
    fn tokens() {
        assert_eq!(addr(&[0, 1]).token(2), "12");
        assert_eq!(Address::root().token(2), "ε");
        assert_eq!(addr(&[9, 2, 1]).token(10), "10.3.2");
        assert_eq!(Address::parse("10.3.2", 10), Ok(addr(&[9, 2, 1])));
        assert_eq!(Address::parse("12", 2), Ok(addr(&[0, 1])));
        assert!(Address::parse("13", 2).is_err());
        assert!(Address::parse("1x", 2).is_err());
        let p = AddressedPoint::parse("12:3", 2, 3).unwrap();
        assert_eq!(p, AddressedPoint::new(addr(&[0, 1]), 2));
        assert_eq!(p.token(2), "12:3");
        assert_eq!(
            AddressedPoint::parse("ε:1", 2, 3).unwrap().address,
            Address::root()
        );
        for bad in ["12", "12:4", "12:0", ":", "3:1", "1:+1"] {
            assert!(AddressedPoint::parse(bad, 2, 3).is_err(), "{bad}");
        }
    }

    #[test]
    fn refine_counts_and_order() {
        let sys = fixtures::dt2();
        let r0 = refine(&sys, 0, CellBudget::default()).unwrap();
        assert_eq!(r0.cells.len(), 1);
        assert_eq!(r0.cells[0].1, sys.base_f64());
        let r2 = refine(&sys, 2, CellBudget::default()).unwrap();
        let tokens: Vec<_> = r2.cells.iter().map(|(a, _)| a.token(2)).collect();
        assert_eq!(tokens, ["11", "12", "21", "22"]);
    }

    #[test]
    fn budget_is_enforced() {
        let sys = fixtures::dt2();
        let err = refine(&sys, 4, CellBudget(15)).unwrap_err();
        assert_eq!(
            err,
            AttractorError::DepthTooLarge {
                requested: 16,
                budget: 15
            }
        );
        assert!(refine(&sys, 4, CellBudget(16)).is_ok());
        assert_eq!(CellBudget::cells(5, 200), u128::MAX);
    }

    #[test]
    fn exact_cells_are_nested() {
        let sys = fixtures::dt2();
        let r2 = refine_exact(&sys, 2, CellBudget::default()).unwrap();
        let r3 = refine_exact(&sys, 3, CellBudget::default()).unwrap();
        for (a, cell) in &r3.cells {
            let parent = &r2.cells.iter().find(|(b, _)| b.is_prefix_of(a)).unwrap().1;
            assert!(cell.vertices().iter().all(|v| parent.contains(v)));
        }
    }

    #[test]
    fn locate_examples() {
        let sys = fixtures::dt2();
        let r1 = refine(&sys, 1, CellBudget::default()).unwrap();
        let c = r1.cells[0].1.centroid();
        assert_eq!(locate(&c, &r1).unwrap(), vec![addr(&[0])]);
        assert_eq!(
            locate(&Point2::new(0.5, 0.0), &r1).unwrap(),
            vec![addr(&[0]), addr(&[1])]
        );
        assert_eq!(
            locate(&Point2::new(2.0, 2.0), &r1),
            Err(AttractorError::PointOutside)
        );
        let e1 = refine_exact(&sys, 1, CellBudget::default()).unwrap();
        let mid = Point2::new(
            Rational::new(1.into(), 2.into()),
            Rational::from_integer(0.into()),
        );
        assert_eq!(e1.locate_exact(&mid).unwrap().len(), 2);
    }

    #[test]
    fn snap_finds_the_connection_point() {
        let v = ValidatedSystem::new(fixtures::dt2()).unwrap();
        let (p, d) = snap(&v, &Point2::new(0.51, 0.01), 1, CellBudget::default()).unwrap();
        assert!(v.same_point(p.address.letters(), p.vertex, &[0], 1));
        assert!((d - 0.01f64.hypot(0.01)).abs() < 1e-12);
    }
}
