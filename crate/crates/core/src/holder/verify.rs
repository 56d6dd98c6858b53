use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{holder_constant, Certified, HolderError};
use crate::arcs::{arc, arc_ratio, ArcApproximation};
use crate::attractor::{Address, AddressedPoint, CellBudget};
use crate::geometry::{singular_values, Rational};
use crate::polysys::{compose_word, PolygonalSystem, ValidatedSystem};

/// Relative slack for the floating-point side of the exponent checks.
pub const CHECK_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordStretchReport {
    pub trials: usize,
    pub max_len: usize,
    pub seed: u64,
    pub lambda: f64,
    /// Largest `Q_𝐢 / q_𝐢^λ` seen; at most 1 up to rounding.
    pub max_ratio: f64,
    /// Word attaining `max_ratio`.
    #[serde(serialize_with = "crate::report::one_based_list")]
    pub witness: Vec<usize>,
    pub violations: usize,
}

fn random_word(rng: &mut ChaCha8Rng, m: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..m)).collect()
}

/// Checks `Q_𝐢 ≤ q_𝐢^λ (1 + 1e−9)` on `trials` random words of length
/// `1..=max_len`, composing each word exactly. Violations are counted, not
/// raised.
pub fn check_word_stretch(
    sys: &PolygonalSystem,
    lambda: f64,
    trials: usize,
    max_len: usize,
    seed: u64,
) -> WordStretchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = sys.len();
    let words: Vec<Vec<usize>> = (0..trials)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.max(1));
            random_word(&mut rng, m, len)
        })
        .collect();
    let ratios: Vec<(f64, f64, f64)> = words
        .par_iter()
        .map(|w| {
            let sv = singular_values(&compose_word::<Rational>(sys.maps(), w));
            let bound = sv.min.powf(lambda);
            (sv.max / bound, sv.max, bound)
        })
        .collect();
    let mut report = WordStretchReport {
        trials,
        max_len,
        seed,
        lambda,
        max_ratio: 0.0,
        witness: Vec::new(),
        violations: 0,
    };
    for (w, &(ratio, q_max, bound)) in words.iter().zip(&ratios) {
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.witness = w.clone();
        }
        if q_max > bound * (1.0 + CHECK_SLACK) {
            report.violations += 1;
        }
    }
    report
}

/// How a sampled pair relates to the copy structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    /// In different first-level copies.
    AcrossCopies,
    /// In different children of a copy of length `⌈d/2⌉ … d−1`.
    DeepCopies,
    /// Both inside one random copy.
    WithinCopy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplePair {
    pub stratum: Stratum,
    pub x: AddressedPoint,
    pub y: AddressedPoint,
}

/// Copy vertex below `prefix` with address length at most `depth`.
fn point_below(
    rng: &mut ChaCha8Rng,
    sys: &ValidatedSystem,
    prefix: &[usize],
    depth: usize,
) -> AddressedPoint {
    let extra = rng.gen_range(0..=depth.saturating_sub(prefix.len()));
    let mut word = prefix.to_vec();
    word.extend(random_word(rng, sys.m(), extra));
    AddressedPoint::new(Address::new(word), rng.gen_range(0..sys.vertex_count()))
}

fn two_children(rng: &mut ChaCha8Rng, m: usize) -> (usize, usize) {
    let a = rng.gen_range(0..m);
    let b = (a + rng.gen_range(1..m)) % m;
    (a, b)
}

/// Deterministic stratified pairs of distinct points with addresses of
/// length `≤ depth`. Strata cycle in the order of [`Stratum`].
pub fn sample_pairs(
    sys: &ValidatedSystem,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Vec<SamplePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = sys.m();
    let strata = [
        Stratum::AcrossCopies,
        Stratum::DeepCopies,
        Stratum::WithinCopy,
    ];
    let mut out = Vec::with_capacity(samples);
    if depth == 0 {
        // only the base vertices exist at depth 0
        let n = sys.vertex_count();
        for k in 0..samples {
            let a = k % n;
            let b = (a + 1 + (k / n) % (n - 1)) % n;
            out.push(SamplePair {
                stratum: Stratum::WithinCopy,
                x: AddressedPoint::new(Address::root(), a),
                y: AddressedPoint::new(Address::root(), b),
            });
        }
        return out;
    }
    for k in 0..samples {
        let stratum = strata[k % 3];
        loop {
            let (x, y) = match stratum {
                Stratum::AcrossCopies => {
                    let (i, j) = two_children(&mut rng, m);
                    (
                        point_below(&mut rng, sys, &[i], depth),
                        point_below(&mut rng, sys, &[j], depth),
                    )
                }
                Stratum::DeepCopies => {
                    let len = rng.gen_range(depth.div_ceil(2)..depth.max(1));
                    let p = random_word(&mut rng, m, len.min(depth - 1));
                    let (a, b) = two_children(&mut rng, m);
                    let (mut pa, mut pb) = (p.clone(), p);
                    pa.push(a);
                    pb.push(b);
                    (
                        point_below(&mut rng, sys, &pa, depth),
                        point_below(&mut rng, sys, &pb, depth),
                    )
                }
                Stratum::WithinCopy => {
                    let len = rng.gen_range(1.min(depth - 1)..depth.max(1));
                    let p = random_word(&mut rng, m, len);
                    (
                        point_below(&mut rng, sys, &p, depth),
                        point_below(&mut rng, sys, &p, depth),
                    )
                }
            };
            let same = sys.same_point(x.address.letters(), x.vertex, y.address.letters(), y.vertex);
            if !same {
                out.push(SamplePair { stratum, x, y });
                break;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TurningWitness {
    pub stratum: Stratum,
    pub x: AddressedPoint,
    pub y: AddressedPoint,
    pub distance: f64,
    pub diam_lower: f64,
    pub diam_upper: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumSummary {
    pub stratum: Stratum,
    pub samples: usize,
    pub max_ratio: f64,
}

/// Maximum of `diam_upper / ‖x − y‖^λ` over sampled pairs, measured in the
/// rescaled coordinates where the certificate lives.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TurningReport {
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    pub lambda: f64,
    pub lambda_overridden: bool,
    /// `2 / (ρ sin β)^λ` for the `lambda` above.
    #[serde(rename = "C")]
    pub c: f64,
    /// `C · diam(P)^{1−λ}` for the input coordinates.
    pub c_original_coordinates: f64,
    pub max_ratio: f64,
    /// Largest `diam_lower / ‖x − y‖^λ`.
    pub max_lower_ratio: f64,
    pub margin: f64,
    pub holds: bool,
    pub witness: TurningWitness,
    pub strata: Vec<StratumSummary>,
}

struct Measured {
    distance: f64,
    lower: f64,
    upper: f64,
    approx: ArcApproximation,
}

/// Samples pairs, traces their arcs at `depth`, and compares the upper
/// ratio with `C`. A ratio above `C` is reported, not raised: the upper
/// bound overestimates `diam γ` at small depth.
pub fn verify_bounded_turning(
    certified: &Certified,
    samples: usize,
    depth: usize,
    seed: u64,
    lambda_override: Option<f64>,
    budget: CellBudget,
) -> Result<TurningReport, HolderError> {
    let cert = &certified.certificate;
    let lambda = lambda_override.unwrap_or(cert.lambda);
    let c = holder_constant(cert.rho, cert.beta, lambda);
    let pairs = sample_pairs(&certified.system, samples, depth, seed);

    let measured: Vec<Measured> = pairs
        .par_iter()
        .map(|p| {
            let approx = arc(&certified.system, &p.x, &p.y, depth, budget)?;
            let (lower, upper) = arc_ratio(&approx, lambda)?;
            let distance = approx.x_point.distance(&approx.y_point);
            Ok(Measured {
                distance,
                lower,
                upper,
                approx,
            })
        })
        .collect::<Result<_, crate::arcs::ArcError>>()?;

    let mut best: Option<usize> = None;
    let mut max_lower_ratio = 0.0f64;
    let mut strata: Vec<StratumSummary> = Vec::new();
    for (k, (p, r)) in pairs.iter().zip(&measured).enumerate() {
        if best.is_none_or(|b| r.upper > measured[b].upper) {
            best = Some(k);
        }
        max_lower_ratio = max_lower_ratio.max(r.lower);
        match strata.iter_mut().find(|s| s.stratum == p.stratum) {
            Some(s) => {
                s.samples += 1;
                s.max_ratio = s.max_ratio.max(r.upper);
            }
            None => strata.push(StratumSummary {
                stratum: p.stratum,
                samples: 1,
                max_ratio: r.upper,
            }),
        }
    }
    let (witness, max_ratio) = match best {
        Some(k) => {
            let r = &measured[k];
            (
                TurningWitness {
                    stratum: pairs[k].stratum,
                    x: pairs[k].x.clone(),
                    y: pairs[k].y.clone(),
                    distance: r.distance,
                    diam_lower: r.approx.diam_lower,
                    diam_upper: r.approx.diam_upper,
                    ratio: r.upper,
                },
                r.upper,
            )
        }
        None => (
            TurningWitness {
                stratum: Stratum::WithinCopy,
                x: AddressedPoint::new(Address::root(), 0),
                y: AddressedPoint::new(Address::root(), 0),
                distance: 0.0,
                diam_lower: 0.0,
                diam_upper: 0.0,
                ratio: 0.0,
            },
            0.0,
        ),
    };
    Ok(TurningReport {
        samples,
        depth,
        seed,
        lambda,
        lambda_overridden: lambda_override.is_some(),
        c,
        c_original_coordinates: c * cert.diam_scale.powf(1.0 - lambda),
        max_ratio,
        max_lower_ratio,
        margin: c - max_ratio,
        holds: max_ratio <= c,
        witness,
        strata,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageArcReport {
    pub words: usize,
    /// Every image chain equals the original chain with the word prepended.
    pub chains_preserved: bool,
    /// Largest `ratio(S_𝐢x, S_𝐢y) / ratio(x, y)`.
    pub max_growth: f64,
    /// Largest `ratio(S_𝐢x, S_𝐢y) / (ratio(x, y) · Q_𝐢 / q_𝐢^λ)`.
    pub max_bound_use: f64,
    pub violations: usize,
}

/// Compares the arc of `(x, y)` at `depth` with the arcs of
/// `(S_𝐢x, S_𝐢y)` at `depth + |𝐢|` for random words `𝐢`.
#[allow(clippy::too_many_arguments)]
pub fn check_image_arcs(
    sys: &ValidatedSystem,
    x: &AddressedPoint,
    y: &AddressedPoint,
    depth: usize,
    lambda: f64,
    words: usize,
    max_len: usize,
    seed: u64,
    budget: CellBudget,
) -> Result<ImageArcReport, HolderError> {
    let base = arc(sys, x, y, depth, budget)?;
    let (_, r0) = arc_ratio(&base, lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ImageArcReport {
        words,
        chains_preserved: true,
        max_growth: 0.0,
        max_bound_use: 0.0,
        violations: 0,
    };
    for _ in 0..words {
        let len = rng.gen_range(1..=max_len.max(1));
        let w = random_word(&mut rng, sys.m(), len);
        let lift = |p: &AddressedPoint| {
            let mut word = w.clone();
            word.extend_from_slice(p.address.letters());
            AddressedPoint::new(Address::new(word), p.vertex)
        };
        let image = arc(sys, &lift(x), &lift(y), depth + len, budget)?;
        let expected: Vec<Address> = base
            .chain
            .iter()
            .map(|c| Address::new(w.clone()).concat(c.letters()))
            .collect();
        if image.chain != expected {
            report.chains_preserved = false;
        }
        let (_, r) = arc_ratio(&image, lambda)?;
        let sv = singular_values(&compose_word::<Rational>(sys.system().maps(), &w));
        let bound = r0 * sv.max / sv.min.powf(lambda);
        report.max_growth = report.max_growth.max(r / r0);
        report.max_bound_use = report.max_bound_use.max(r / bound);
        if r > bound * (1.0 + CHECK_SLACK) || bound > r0 * (1.0 + CHECK_SLACK) {
            report.violations += 1;
        }
    }
    Ok(report)
}
