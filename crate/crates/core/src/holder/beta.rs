use serde::Serialize;

use crate::attractor::{cell_maps, Address, CellBudget};
use crate::geometry::{ray_angle_min, AffineMap2, Point2};
use crate::polysys::ValidatedSystem;

/// Where the minimal angle occurs: cells `first` and `second` touch at
/// `point`, the junction of copies `pair` below `prefix`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaWitness {
    pub prefix: Address,
    #[serde(serialize_with = "crate::report::one_based_pair")]
    pub pair: (usize, usize),
    pub first: Address,
    pub second: Address,
    pub point: Point2,
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaProbe {
    pub beta: f64,
    pub witness: BetaWitness,
    /// `profile[d − 1]` is the minimum over configurations of depth `≤ d`.
    pub profile: Vec<f64>,
}

impl BetaProbe {
    /// The deepest level did not lower β beyond rounding.
    pub fn stabilized(&self) -> bool {
        match self.profile.as_slice() {
            [.., prev, last] => *last >= prev * (1.0 - 1e-12),
            _ => true,
        }
    }
}

/// A cell `w` (relative to the configuration prefix) having the junction as
/// its vertex `c`; `map` is the composed map of `w`.
struct Corner {
    word: Vec<usize>,
    vertex: usize,
    map: AffineMap2,
}

/// All cells below copy `a` of length `≤ max_len` that have the point
/// `S_a(A_c)` as a vertex.
fn corners(sys: &ValidatedSystem, a: usize, c: usize, max_len: usize) -> Vec<Corner> {
    let maps = sys.maps_f64();
    let mut out = vec![Corner {
        word: vec![a],
        vertex: c,
        map: maps[a].clone(),
    }];
    let mut k = 0;
    while k < out.len() {
        if out[k].word.len() < max_len {
            for (i, s) in maps.iter().enumerate() {
                if let Some(c2) = sys.preimage(i, out[k].vertex) {
                    let mut word = out[k].word.clone();
                    word.push(i);
                    let map = out[k].map.compose(s);
                    out.push(Corner {
                        word,
                        vertex: c2,
                        map,
                    });
                }
            }
        }
        k += 1;
    }
    out
}

/// Rays from `A_c` along its two incident sides, mapped by the linear part
/// of `g`.
fn rays(base: &[Point2], g: &AffineMap2, c: usize) -> [Point2; 2] {
    let n = base.len();
    let prev = base[(c + n - 1) % n].sub(&base[c]);
    let next = base[(c + 1) % n].sub(&base[c]);
    [g.apply_linear(&prev), g.apply_linear(&next)]
}

/// Minimum angle between incident sides of two cells of length `≤ depth`
/// that meet in a single point.
///
/// Two incomparable cells meet only at the junction of the two copies where
/// their addresses split, so it suffices to enumerate every prefix, every
/// touching pair of children, and every pair of corner cells at that
/// junction.
pub fn compute_beta(sys: &ValidatedSystem, depth: usize) -> BetaProbe {
    let depth = depth.max(1);
    let base = sys.base_f64().vertices();
    let m = sys.m();
    let mut configs: Vec<(usize, f64, BetaWitness)> = Vec::new();

    let pairs: Vec<(usize, usize, usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .filter_map(|(a, b)| sys.junction(a, b).map(|(ca, cb)| (a, b, ca, cb)))
        .collect();

    for len in 0..depth {
        let prefixes =
            cell_maps(sys.maps_f64(), len, CellBudget(u64::MAX)).expect("unbounded budget");
        let room = depth - len;
        for (prefix, gk) in &prefixes {
            for &(a, b, ca, cb) in &pairs {
                let ka = corners(sys, a, ca, room);
                let kb = corners(sys, b, cb, room);
                for u in &ka {
                    let gu = gk.compose(&u.map);
                    let ru = rays(base, &gu, u.vertex);
                    for v in &kb {
                        let gv = gk.compose(&v.map);
                        let angle = ray_angle_min(&ru, &rays(base, &gv, v.vertex));
                        let d = len + u.word.len().max(v.word.len());
                        configs.push((
                            d,
                            angle,
                            BetaWitness {
                                prefix: prefix.clone(),
                                pair: (a, b),
                                first: prefix.concat(&u.word),
                                second: prefix.concat(&v.word),
                                point: gu.apply(&base[u.vertex]),
                                angle,
                            },
                        ));
                    }
                }
            }
        }
    }

    let mut profile = Vec::with_capacity(depth);
    let mut best: Option<&BetaWitness> = None;
    for d in 1..=depth {
        for (cd, angle, w) in &configs {
            if *cd == d && best.is_none_or(|b| *angle < b.angle) {
                best = Some(w);
            }
        }
        profile.push(best.map_or(std::f64::consts::PI, |w| w.angle));
    }
    let witness = best.cloned().unwrap_or_else(|| BetaWitness {
        prefix: Address::root(),
        pair: (0, 0),
        first: Address::root(),
        second: Address::root(),
        point: Point2::new(0.0, 0.0),
        angle: std::f64::consts::PI,
    });
    BetaProbe {
        beta: witness.angle,
        witness,
        profile,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{apply, incident_side_angles};

    #[test]
    fn level_one_matches_incident_side_angles() {
        for sys in [fixtures::dt2(), fixtures::gf(), fixtures::similarity()] {
            let v = ValidatedSystem::new(sys).unwrap();
            let probe = compute_beta(&v, 1);
            let base = v.base_f64();
            let mut expected = f64::INFINITY;
            for cp in v.report().connection_points() {
                let p1 = apply(&v.maps_f64()[cp.i], base);
                let p2 = apply(&v.maps_f64()[cp.j], base);
                expected =
                    expected.min(incident_side_angles(&cp.point.to_f64(), &p1, &p2).unwrap());
            }
            assert!((probe.beta - expected).abs() < 1e-12);
            assert_eq!(probe.profile.len(), 1);
        }
    }

    #[test]
    fn profile_is_non_increasing() {
        let v = ValidatedSystem::new(fixtures::dt2()).unwrap();
        let probe = compute_beta(&v, 6);
        assert_eq!(probe.profile.len(), 6);
        for w in probe.profile.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert_eq!(probe.beta, probe.profile[5]);
    }

    #[test]
    fn similarity_profile_is_flat() {
        let v = ValidatedSystem::new(fixtures::similarity()).unwrap();
        let probe = compute_beta(&v, 5);
        assert!(
            (probe.beta - std::f64::consts::FRAC_PI_4).abs() < 1e-12,
            "{}",
            probe.beta
        );
        assert!(probe.profile.iter().all(|b| (b - probe.beta).abs() < 1e-12));
    }
}
