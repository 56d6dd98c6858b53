//! Finite approximations of the arc `γ(x, y)` between two points of the
//! attractor.
//!
//! The arc is traced symbolically: at the smallest copy containing both
//! endpoints, the tree of first-level copies gives the unique sequence of
//! children the arc passes through, joined at connection points. Each piece
//! is refined the same way until the cells reach the requested depth.

use crate::attractor::{Address, AddressedPoint, AttractorError, CellBudget};
use crate::geometry::{
    apply, diameter, intersect_exact, AffineMap2, ConvexPolygon, IntersectionKind, Point2,
};
use crate::polysys::{compose_word, BipartiteIntersectionGraph, GraphNode, ValidatedSystem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArcError {
    #[error("endpoint {0} does not name a copy vertex of this system")]
    InvalidEndpoint(String),
    #[error("depth {depth} is shorter than the endpoint address ({needed} letters)")]
    DepthBelowEndpoint { depth: usize, needed: usize },
    #[error(transparent)]
    Budget(#[from] AttractorError),
    #[error("endpoints denote the same point")]
    CoincidentEndpoints,
}

/// The chain of depth-`d` cells covering `γ(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcApproximation {
    pub x: AddressedPoint,
    pub y: AddressedPoint,
    pub depth: usize,
    /// Cells from the one containing `x` to the one containing `y`.
    pub chain: Vec<Address>,
    /// `chain[t] ∩ chain[t+1] = {junctions[t]}`; addressed from the copy
    /// with the smaller index at the level where the two cells separate.
    pub junctions: Vec<AddressedPoint>,
    pub junction_points: Vec<Point2>,
    pub cells: Vec<ConvexPolygon>,
    pub x_point: Point2,
    pub y_point: Point2,
    /// Whether `x` and `y` denote the same point.
    pub coincident: bool,
    /// Diameter of `{x, y} ∪ junctions`; at most `diam γ(x, y)`.
    pub diam_lower: f64,
    /// Diameter of the union of the chain cells; at least `diam γ(x, y)`.
    pub diam_upper: f64,
}

/// Unique alternating copy/point path between copies `i` and `j`.
pub fn copy_chain(graph: &BipartiteIntersectionGraph, i: usize, j: usize) -> Vec<GraphNode> {
    graph.copy_chain(i, j)
}

struct Tracer<'a> {
    sys: &'a ValidatedSystem,
    budget: CellBudget,
    chain: Vec<Address>,
    cells: Vec<ConvexPolygon>,
    junctions: Vec<AddressedPoint>,
    junction_points: Vec<Point2>,
}

/// An endpoint relative to the current copy.
type Rel<'w> = (&'w [usize], usize);

/// Endpoint points of a traced piece, computed from its end cells.
type Ends = (Point2, Point2);

impl Tracer<'_> {
    /// First letter of a relative point, extending a bare vertex through
    /// the copy that covers it.
    fn split<'w>(&self, (word, v): Rel<'w>) -> (usize, Rel<'w>) {
        match word.split_first() {
            Some((&i, rest)) => (i, (rest, v)),
            None => {
                let (i, c) = self.sys.cover(v);
                (i, (&[], c))
            }
        }
    }

    fn same(&self, x: Rel<'_>, y: Rel<'_>) -> bool {
        self.sys.same_point(x.0, x.1, y.0, y.1)
    }

    fn push_cell(&mut self, prefix: &[usize], g: &AffineMap2) -> Result<(), ArcError> {
        self.budget.check(self.chain.len() as u128 + 1)?;
        self.chain.push(Address::new(prefix.to_vec()));
        self.cells.push(apply(g, self.sys.base_f64()));
        Ok(())
    }

    /// Traces `γ(x, y)` inside the copy `prefix` (map `g`), with `x ≠ y`.
    fn trace(
        &mut self,
        prefix: &mut Vec<usize>,
        g: &AffineMap2,
        x: Rel<'_>,
        y: Rel<'_>,
        remaining: usize,
    ) -> Result<Ends, ArcError> {
        if remaining == 0 {
            debug_assert!(x.0.is_empty() && y.0.is_empty());
            self.push_cell(prefix, g)?;
            let base = self.sys.base_f64().vertices();
            return Ok((g.apply(&base[x.1]), g.apply(&base[y.1])));
        }
        let (i, xr) = self.split(x);
        let (j, yr) = self.split(y);
        let maps = self.sys.maps_f64();
        if i == j {
            prefix.push(i);
            let ends = self.trace(prefix, &g.compose(&maps[i]), xr, yr, remaining - 1);
            prefix.pop();
            return ends;
        }

        let path = self.sys.copy_path(i, j).to_vec();
        let k = path.len() - 1;
        // piece t runs inside copy path[t] from starts[t] to ends[t]
        let mut starts: Vec<Rel<'_>> = vec![xr];
        let mut ends: Vec<Rel<'_>> = Vec::with_capacity(k + 1);
        for t in 0..k {
            let (ca, cb) = self
                .sys
                .junction(path[t], path[t + 1])
                .expect("adjacent copies touch");
            ends.push((&[], ca));
            starts.push((&[], cb));
        }
        ends.push(yr);

        let mut first: Option<Point2> = None;
        let mut last: Option<Point2> = None;
        for t in 0..=k {
            if self.same(starts[t], ends[t]) {
                continue;
            }
            if let Some(p) = last.take() {
                let (a, b) = (path[t - 1], path[t]);
                let (ca, cb) = self.sys.junction(a, b).expect("adjacent copies touch");
                let (c, v) = if a < b { (a, ca) } else { (b, cb) };
                let mut w = prefix.clone();
                w.push(c);
                self.junctions.push(AddressedPoint::new(Address::new(w), v));
                self.junction_points.push(p);
            }
            prefix.push(path[t]);
            let piece = self.trace(
                prefix,
                &g.compose(&maps[path[t]]),
                starts[t],
                ends[t],
                remaining - 1,
            );
            prefix.pop();
            let (s, e) = piece?;
            first.get_or_insert(s);
            last = Some(e);
        }
        Ok((first.expect("x ≠ y"), last.expect("x ≠ y")))
    }

    /// Depth-`remaining` cell below `prefix` having `x` as a vertex.
    fn cell_of(
        &mut self,
        prefix: &mut Vec<usize>,
        g: AffineMap2,
        x: Rel<'_>,
        remaining: usize,
    ) -> Result<Point2, ArcError> {
        if remaining == 0 {
            self.push_cell(prefix, &g)?;
            return Ok(g.apply(&self.sys.base_f64().vertices()[x.1]));
        }
        let (i, xr) = self.split(x);
        prefix.push(i);
        let g = g.compose(&self.sys.maps_f64()[i]);
        let p = self.cell_of(prefix, g, xr, remaining - 1);
        prefix.pop();
        p
    }
}

/// Approximates `γ(x, y)` by depth-`depth` cells.
pub fn arc(
    sys: &ValidatedSystem,
    x: &AddressedPoint,
    y: &AddressedPoint,
    depth: usize,
    budget: CellBudget,
) -> Result<ArcApproximation, ArcError> {
    let (m, n) = (sys.m(), sys.vertex_count());
    for p in [x, y] {
        if !p.is_valid_for(m, n) {
            return Err(ArcError::InvalidEndpoint(format!("{p:?}")));
        }
    }
    let needed = x.address.len().max(y.address.len());
    if depth < needed {
        return Err(ArcError::DepthBelowEndpoint { depth, needed });
    }
    let mut tr = Tracer {
        sys,
        budget,
        chain: Vec::new(),
        cells: Vec::new(),
        junctions: Vec::new(),
        junction_points: Vec::new(),
    };
    let xr: Rel<'_> = (x.address.letters(), x.vertex);
    let yr: Rel<'_> = (y.address.letters(), y.vertex);
    let coincident = tr.same(xr, yr);
    let (x_point, y_point) = if coincident {
        let p = tr.cell_of(&mut Vec::new(), AffineMap2::identity(), xr, depth)?;
        (p.clone(), p)
    } else {
        tr.trace(&mut Vec::new(), &AffineMap2::identity(), xr, yr, depth)?
    };

    let diam_lower = if coincident {
        0.0
    } else {
        let mut pts = Vec::with_capacity(tr.junction_points.len() + 2);
        pts.push(x_point.clone());
        pts.extend(tr.junction_points.iter().cloned());
        pts.push(y_point.clone());
        diameter(&pts).expect("nonempty")
    };
    let verts: Vec<Point2> = tr
        .cells
        .iter()
        .flat_map(|c| c.vertices().iter().cloned())
        .collect();
    let diam_upper = diameter(&verts).expect("nonempty");

    Ok(ArcApproximation {
        x: x.clone(),
        y: y.clone(),
        depth,
        chain: tr.chain,
        junctions: tr.junctions,
        junction_points: tr.junction_points,
        cells: tr.cells,
        x_point,
        y_point,
        coincident,
        diam_lower,
        diam_upper,
    })
}

/// `(diam_lower, diam_upper) / ‖x − y‖^λ`.
pub fn arc_ratio(approx: &ArcApproximation, lambda: f64) -> Result<(f64, f64), ArcError> {
    let dist = approx.x_point.distance(&approx.y_point);
    if approx.coincident || dist == 0.0 {
        return Err(ArcError::CoincidentEndpoints);
    }
    let scale = dist.powf(lambda);
    Ok((approx.diam_lower / scale, approx.diam_upper / scale))
}

/// A failed exact re-check of an arc approximation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChainDefect {
    #[error("cells {0} and {1} do not meet in a single point")]
    NotSinglePoint(usize, usize),
    #[error("junction {0} differs from the meeting point of its cells")]
    JunctionMismatch(usize),
    #[error("endpoint is not in its end cell")]
    EndpointOutside,
    #[error("chain and junction counts disagree")]
    Shape,
}

/// Re-checks in exact arithmetic that consecutive cells meet in exactly
/// their junction and that the end cells contain the endpoints.
pub fn check_chain_exact(
    sys: &ValidatedSystem,
    approx: &ArcApproximation,
) -> Result<(), ChainDefect> {
    if approx.chain.len() != approx.junctions.len() + 1 {
        return Err(ChainDefect::Shape);
    }
    let maps = sys.system().maps();
    let base = sys.system().base();
    for (t, pair) in approx.chain.windows(2).enumerate() {
        let (a, b) = (pair[0].letters(), pair[1].letters());
        let k = a.iter().zip(b).take_while(|(p, q)| p == q).count();
        let pa = apply(&compose_word(maps, &a[k..]), base);
        let pb = apply(&compose_word(maps, &b[k..]), base);
        let IntersectionKind::SinglePoint(p) = intersect_exact(&pa, &pb) else {
            return Err(ChainDefect::NotSinglePoint(t, t + 1));
        };
        let j = &approx.junctions[t];
        let jw = j.address.letters();
        if !jw.starts_with(&a[..k]) {
            return Err(ChainDefect::JunctionMismatch(t));
        }
        let q = compose_word(maps, &jw[k..]).apply(&base.vertices()[j.vertex]);
        if p != q {
            return Err(ChainDefect::JunctionMismatch(t));
        }
    }
    let ends = [
        (&approx.x, &approx.chain[0]),
        (&approx.y, &approx.chain[approx.chain.len() - 1]),
    ];
    for (p, cell) in ends {
        let c = apply(&compose_word(maps, cell.letters()), base);
        if !c.contains(&p.denote_exact(sys.system())) {
            return Err(ChainDefect::EndpointOutside);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pt(word: &[usize], v: usize) -> AddressedPoint {
        AddressedPoint::new(Address::new(word.to_vec()), v)
    }

    #[test]
    fn dt2_base_vertices_a_to_b() {
        let sys = ValidatedSystem::new(fixtures::dt2()).unwrap();
        let a = arc(&sys, &pt(&[], 0), &pt(&[], 1), 1, CellBudget::default()).unwrap();
        assert_eq!(a.chain, vec![Address::new(vec![0]), Address::new(vec![1])]);
        assert_eq!(a.junctions, vec![pt(&[0], 1)]);
        assert_eq!(a.junction_points, vec![Point2::new(0.5, 0.0)]);
        assert_eq!(a.diam_lower, 1.0);
        check_chain_exact(&sys, &a).unwrap();
        // same endpoints written through S_1 and S_2
        let b = arc(&sys, &pt(&[0], 0), &pt(&[1], 1), 1, CellBudget::default()).unwrap();
        assert_eq!(b.chain, a.chain);
    }

    #[test]
    fn coincident_endpoints() {
        let sys = ValidatedSystem::new(fixtures::dt2()).unwrap();
        // mid AB as S_1(B) and as S_2(C)
        let a = arc(&sys, &pt(&[0], 1), &pt(&[1], 2), 3, CellBudget::default()).unwrap();
        assert!(a.coincident);
        assert_eq!(a.chain.len(), 1);
        assert_eq!(a.diam_lower, 0.0);
        assert!(a.diam_upper > 0.0);
        assert_eq!(arc_ratio(&a, 0.5), Err(ArcError::CoincidentEndpoints));
    }

    #[test]
    fn endpoint_validation() {
        let sys = ValidatedSystem::new(fixtures::dt2()).unwrap();
        let bad = pt(&[2], 0);
        assert!(matches!(
            arc(&sys, &bad, &pt(&[], 1), 3, CellBudget::default()),
            Err(ArcError::InvalidEndpoint(_))
        ));
        assert_eq!(
            arc(
                &sys,
                &pt(&[0, 0, 0], 0),
                &pt(&[], 1),
                2,
                CellBudget::default()
            ),
            Err(ArcError::DepthBelowEndpoint {
                depth: 2,
                needed: 3
            })
        );
        assert!(matches!(
            arc(&sys, &pt(&[], 0), &pt(&[], 1), 12, CellBudget(10)),
            Err(ArcError::Budget(AttractorError::DepthTooLarge { .. }))
        ));
    }

    #[test]
    fn lambda_zero_ratio_is_the_diameter() {
        let sys = ValidatedSystem::new(fixtures::dt2()).unwrap();
        let a = arc(
            &sys,
            &pt(&[0, 1], 2),
            &pt(&[1, 1, 0], 0),
            5,
            CellBudget::default(),
        )
        .unwrap();
        assert_eq!(arc_ratio(&a, 0.0).unwrap(), (a.diam_lower, a.diam_upper));
    }

    #[test]
    fn gf_straight_piece_has_unit_ratio() {
        // p_1 = S_2(p_1) and p_2 = S_3(p_2): the arc is the segment p_1 p_2
        let sys = ValidatedSystem::new(fixtures::gf()).unwrap();
        let (x, y) = (pt(&[], 0), pt(&[], 1));
        let mut prev = f64::INFINITY;
        for d in [2, 6, 10] {
            let a = arc(&sys, &x, &y, d, CellBudget::default()).unwrap();
            let (lo, hi) = arc_ratio(&a, 1.0).unwrap();
            assert!((lo - 1.0).abs() < 1e-9);
            assert!(hi >= lo && hi <= prev);
            prev = hi;
        }
        assert!(prev - 1.0 < 1e-3);
    }

    #[test]
    fn copy_chain_along_gf() {
        let sys = ValidatedSystem::new(fixtures::gf()).unwrap();
        use GraphNode::*;
        assert_eq!(
            copy_chain(sys.graph(), 0, 2),
            vec![Polygon(0), Point(0), Polygon(1), Point(1), Polygon(2)]
        );
        assert_eq!(copy_chain(sys.graph(), 3, 3), vec![Polygon(3)]);
    }
}
