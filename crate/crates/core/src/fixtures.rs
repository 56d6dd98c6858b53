//! Reference systems used throughout the tests and the CLI examples.

use crate::geometry::{AffineMap2, ConvexPolygon, Point2, Rational};
use crate::io::parse_rational;
use crate::polysys::PolygonalSystem;

fn q(s: &str) -> Rational {
    parse_rational(s).expect("fixture literal")
}

fn pt(x: &str, y: &str) -> Point2<Rational> {
    Point2::new(q(x), q(y))
}

fn map(a: &str, b: &str, c: &str, d: &str, e: &str, f: &str) -> AffineMap2<Rational> {
    AffineMap2::new(q(a), q(b), q(c), q(d), q(e), q(f))
}

fn system(vertices: Vec<Point2<Rational>>, maps: Vec<AffineMap2<Rational>>) -> PolygonalSystem {
    PolygonalSystem::new(ConvexPolygon::new(vertices).expect("fixture polygon"), maps)
        .expect("fixture maps")
}

/// Two-map triangle dendrite. `A = (0,0)`, `B = (1,0)`, `C = (1/2,5/8)`;
/// `S_1` halves towards `A`, `S_2` sends `(A, B, C)` to `(C, B, mid AB)`.
/// One connection point, `mid AB = S_1(B) = S_2(C)`.
pub fn dt2() -> PolygonalSystem {
    system(
        vec![pt("0", "0"), pt("1", "0"), pt("1/2", "5/8")],
        vec![
            map("1/2", "0", "0", "1/2", "0", "0"),
            map("1/2", "-2/5", "-5/8", "-1/2", "1/2", "5/8"),
        ],
    )
}

/// Five copies in a row on the triangle `p_1 = (0,0)`, `p_2 = (2/3,1/3)`,
/// `p_3 = (0,2/3)`. `S_1 = diag(2/3, 1/3) + (0, 1/6)` sits on the edge
/// `p_1 p_3`; the other four tile the polyline `p_1 → p_2 → p_3`, which is
/// therefore the arc between `p_1` and `p_3`.
pub fn gf() -> PolygonalSystem {
    system(
        vec![pt("0", "0"), pt("2/3", "1/3"), pt("0", "2/3")],
        vec![
            map("2/3", "0", "0", "1/3", "0", "1/6"),
            map("1/2", "0", "1/8", "1/4", "0", "0"),
            map("1/2", "0", "7/32", "1/16", "1/3", "1/6"),
            map("-1/4", "-1/2", "1/4", "0", "2/3", "1/3"),
            map("-1/4", "-1/2", "1/4", "0", "1/3", "1/2"),
        ],
    )
}

/// Three half-size corner copies of a triangle; their intersection graph
/// is a 6-cycle.
pub fn sierpinski() -> PolygonalSystem {
    let h = "0.866025403784";
    let hh = "0.433012701892";
    system(
        vec![pt("0", "0"), pt("1", "0"), pt("1/2", h)],
        vec![
            map("1/2", "0", "0", "1/2", "0", "0"),
            map("1/2", "0", "0", "1/2", "1/2", "0"),
            map("1/2", "0", "0", "1/2", "1/4", hh),
        ],
    )
}

/// Two 0.6-scaled copies of the unit square at opposite corners; they
/// overlap in a square.
pub fn overlapping_squares() -> PolygonalSystem {
    system(
        vec![pt("0", "0"), pt("1", "0"), pt("1", "1"), pt("0", "1")],
        vec![
            map("0.6", "0", "0", "0.6", "0", "0"),
            map("0.6", "0", "0", "0.6", "0.4", "0.4"),
        ],
    )
}

/// Similarity-only variant of [`dt2`]: `C = (1/2, 1/2)` makes the second
/// map a reflection scaled by `1/√2`.
pub fn similarity() -> PolygonalSystem {
    system(
        vec![pt("0", "0"), pt("1", "0"), pt("1/2", "1/2")],
        vec![
            map("1/2", "0", "0", "1/2", "0", "0"),
            map("1/2", "-1/2", "-1/2", "-1/2", "1/2", "1/2"),
        ],
    )
}
