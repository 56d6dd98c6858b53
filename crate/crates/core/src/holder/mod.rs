//! Hölder certificate `(Q_i, q_i, λ, ρ, β, C)` for a validated system and
//! empirical checks of the inequality `diam γ(x, y) ≤ C ‖x − y‖^λ`.
//!
//! All certificate quantities are computed for the rescaled system with
//! `diam P = 1`. In the original coordinates the bound reads
//! `diam γ(x, y) ≤ C · diam(P)^{1−λ} · ‖x − y‖^λ`.

mod beta;
mod verify;

use serde::Serialize;

use crate::geometry::{
    diameter, intersect_exact, min_distance, point_polygon_distance, IntersectionKind, Rational,
    StretchFactors,
};
use crate::polysys::{PolygonalSystem, SystemError, ValidatedSystem, ValidationFailed};

pub use beta::{compute_beta, BetaProbe, BetaWitness};
pub use verify::{
    check_image_arcs, check_word_stretch, sample_pairs, verify_bounded_turning, ImageArcReport,
    SamplePair, Stratum, TurningReport, TurningWitness, WordStretchReport,
};

/// Default depth for the β probe.
pub const DEFAULT_BETA_DEPTH: usize = 6;

#[derive(Debug, Clone, thiserror::Error)]
pub enum HolderError {
    #[error("no disjoint pair of copies and no base vertex outside a copy")]
    NoSeparatedPairs,
    #[error("rescaled system")]
    System(#[from] SystemError),
    #[error(transparent)]
    Validation(#[from] ValidationFailed),
    #[error(transparent)]
    Arc(#[from] crate::arcs::ArcError),
}

/// Rescales by a rational close to `1 / diam P`, so that `diam P = 1` up to
/// rounding and the system stays exact. Returns the scale `diam P`.
pub fn normalize(sys: &PolygonalSystem) -> Result<(PolygonalSystem, f64), SystemError> {
    let scale = diameter(sys.base_f64().vertices()).expect("polygon has vertices");
    if scale == 1.0 {
        return Ok((sys.clone(), 1.0));
    }
    let s = Rational::from_float(scale)
        .expect("finite diameter")
        .recip();
    Ok((sys.scale(&s)?, scale))
}

/// `min_i log Q_i / log q_i`, in `(0, 1]`.
pub fn compute_lambda(stretch: &[StretchFactors]) -> f64 {
    stretch
        .iter()
        .map(StretchFactors::log_ratio)
        .fold(f64::INFINITY, f64::min)
        // q ≤ Q, so only rounding can push a similarity past 1
        .min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoWitness {
    /// Disjoint copies `P_i`, `P_j`.
    Pair {
        #[serde(serialize_with = "crate::report::one_based")]
        i: usize,
        #[serde(serialize_with = "crate::report::one_based")]
        j: usize,
    },
    /// Base vertex `A_vertex` outside `P_copy`.
    Vertex {
        #[serde(serialize_with = "crate::report::one_based")]
        vertex: usize,
        #[serde(serialize_with = "crate::report::one_based")]
        copy: usize,
    },
}

/// `ρ = min(d₁, d₂)`: `d₁` over disjoint pairs of first-level copies, `d₂`
/// over base vertices and the copies not containing them.
pub fn compute_rho(sys: &PolygonalSystem) -> Result<(f64, RhoWitness), HolderError> {
    let images: Vec<_> = (0..sys.len()).map(|i| sys.image(i)).collect();
    let mut best: Option<(f64, RhoWitness)> = None;
    let mut offer = |d: f64, w: RhoWitness| {
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, w));
        }
    };
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if matches!(
                intersect_exact(&images[i], &images[j]),
                IntersectionKind::Empty
            ) {
                offer(
                    min_distance(&images[i], &images[j]),
                    RhoWitness::Pair { i, j },
                );
            }
        }
    }
    for (vertex, a) in sys.base().vertices().iter().enumerate() {
        for (copy, img) in images.iter().enumerate() {
            if !img.contains(a) {
                offer(
                    point_polygon_distance(a, img),
                    RhoWitness::Vertex { vertex, copy },
                );
            }
        }
    }
    best.ok_or(HolderError::NoSeparatedPairs)
}

/// `C = 2 / (ρ^λ (sin β)^λ)`.
pub fn holder_constant(rho: f64, beta: f64, lambda: f64) -> f64 {
    2.0 / (rho.powf(lambda) * beta.sin().powf(lambda))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderCertificate {
    pub per_map: Vec<StretchFactors>,
    pub lambda: f64,
    pub rho: f64,
    pub rho_witness: RhoWitness,
    pub beta: f64,
    pub beta_depth: usize,
    /// `β(1), …, β(beta_depth)`.
    pub beta_profile: Vec<f64>,
    /// The last probe level did not lower β.
    pub beta_stabilized: bool,
    pub beta_witness: BetaWitness,
    #[serde(rename = "C")]
    pub c: f64,
    /// `diam P` of the input system.
    pub diam_scale: f64,
}

impl HolderCertificate {
    /// The constant for the original coordinates, `C · diam(P)^{1−λ}`.
    pub fn denormalized_constant(&self) -> f64 {
        self.c * self.diam_scale.powf(1.0 - self.lambda)
    }
}

/// The rescaled system together with its certificate.
#[derive(Clone, Debug)]
pub struct Certified {
    pub system: ValidatedSystem,
    pub certificate: HolderCertificate,
}

/// Rescales to `diam P = 1`, re-validates, and computes every quantity of
/// the certificate.
pub fn compute_certificate(
    sys: &ValidatedSystem,
    beta_depth: usize,
) -> Result<Certified, HolderError> {
    let (scaled, diam_scale) = normalize(sys.system())?;
    let system = ValidatedSystem::new(scaled)?;
    let per_map = system.system().stretch().to_vec();
    let lambda = compute_lambda(&per_map);
    let (rho, rho_witness) = compute_rho(system.system())?;
    let probe = compute_beta(&system, beta_depth);
    let c = holder_constant(rho, probe.beta, lambda);
    let certificate = HolderCertificate {
        per_map,
        lambda,
        rho,
        rho_witness,
        beta: probe.beta,
        beta_depth,
        beta_stabilized: probe.stabilized(),
        beta_profile: probe.profile,
        beta_witness: probe.witness,
        c,
        diam_scale,
    };
    Ok(Certified {
        system,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{AffineMap2, ConvexPolygon, Point2, Scalar};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn r(v: f64) -> Rational {
        v.to_rational()
    }

    #[test]
    fn constant_formula() {
        assert_eq!(holder_constant(1.0, FRAC_PI_2, 0.3), 2.0);
        assert!((holder_constant(0.25, FRAC_PI_6, 0.5) - 5.656854249492381).abs() < 1e-12);
    }

    #[test]
    fn lambda_examples() {
        let sf = |max, min| StretchFactors { max, min };
        assert_eq!(compute_lambda(&[sf(0.5, 0.5)]), 1.0);
        let l = compute_lambda(&[sf(0.5, 0.5), sf(2.0 / 3.0, 1.0 / 3.0)]);
        // ln(3/2) / ln 3
        assert!((l - 0.369_070_246_428_542_6).abs() < 1e-15);
    }

    #[test]
    fn normalize_examples() {
        let dt2 = fixtures::dt2();
        let (same, s) = normalize(&dt2).unwrap();
        assert_eq!((same, s), (dt2.clone(), 1.0));
        let big = dt2.scale(&r(2.0)).unwrap();
        let (back, s) = normalize(&big).unwrap();
        assert_eq!(s, 2.0);
        assert_eq!(back, dt2);
        let gf = fixtures::gf();
        let (n, _) = normalize(&gf).unwrap();
        let d = diameter(n.base_f64().vertices()).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let l0 = compute_lambda(gf.stretch());
        let l1 = compute_lambda(n.stretch());
        assert!((l0 - l1).abs() < 1e-15);
    }

    #[test]
    fn dt2_rho_is_a_vertex_distance() {
        let (rho, w) = compute_rho(&fixtures::dt2()).unwrap();
        // nearest point of P_1 to C = (1/2, 5/8) is its vertex (1/4, 5/16)
        assert!((rho - 41f64.sqrt() / 16.0).abs() < 1e-15, "{rho}");
        assert_eq!(w, RhoWitness::Vertex { vertex: 2, copy: 0 });
    }

    #[test]
    fn rho_from_disjoint_squares() {
        let big = ConvexPolygon::new(vec![
            Point2::new(r(0.0), r(0.0)),
            Point2::new(r(4.0), r(0.0)),
            Point2::new(r(4.0), r(4.0)),
            Point2::new(r(0.0), r(4.0)),
        ])
        .unwrap();
        let q = r(0.25);
        let z = r(0.0);
        let maps = vec![
            AffineMap2::new(q.clone(), z.clone(), z.clone(), q.clone(), r(1.0), r(1.0)),
            AffineMap2::new(q.clone(), z.clone(), z.clone(), q.clone(), r(3.0), r(1.0)),
        ];
        let sys = PolygonalSystem::new(big, maps).unwrap();
        let (rho, _) = compute_rho(&sys).unwrap();
        assert!(rho <= 1.0);
    }

    #[test]
    fn dt2_certificate() {
        let v = ValidatedSystem::new(fixtures::dt2()).unwrap();
        let cert = compute_certificate(&v, 1).unwrap().certificate;
        assert!(cert.lambda > 0.0 && cert.lambda < 1.0);
        let expected = cert.per_map[1].log_ratio();
        assert_eq!(cert.lambda, expected);
        assert_eq!(cert.c, holder_constant(cert.rho, cert.beta, cert.lambda));
        for s in &cert.per_map {
            assert!(s.max <= s.min.powf(cert.lambda) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn similarity_certificate_has_lambda_one() {
        let v = ValidatedSystem::new(fixtures::similarity()).unwrap();
        let cert = compute_certificate(&v, 4).unwrap().certificate;
        assert!((cert.lambda - 1.0).abs() < 1e-12);
        for w in cert.beta_profile.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-12);
        }
        assert!(cert.beta_stabilized);
    }

    #[test]
    fn certificate_is_similarity_invariant() {
        let v = ValidatedSystem::new(fixtures::dt2()).unwrap();
        let a = compute_certificate(&v, 3).unwrap().certificate;
        let third = Rational::new(1.into(), 3.into());
        let w = ValidatedSystem::new(fixtures::dt2().scale(&third).unwrap()).unwrap();
        let b = compute_certificate(&w, 3).unwrap().certificate;
        assert!((a.lambda - b.lambda).abs() < 1e-12);
        assert!((a.rho - b.rho).abs() < 1e-12);
        assert!((a.beta - b.beta).abs() < 1e-12);
        assert!((a.c - b.c).abs() < 1e-12 * a.c);
        assert!((b.diam_scale - 1.0 / 3.0).abs() < 1e-15);
    }
}
