//! Measurement-imprecision analysis: closed-form epsilon thresholds below
//! which no ontologically faithful non-contextual model can reproduce an
//! observed violation, plus a finite-shot simulator with independent
//! per-(vertex, context) projector jitter.
//!
//! The reported `epsilon_estimate` is a proxy: the largest gap between a
//! vertex's empirical yes-probabilities across the contexts it appears in
//! (a total-variation gap on the marginal). Single-copy projective statistics
//! cannot observe the defining counterfactual probability directly, and JSON
//! output labels the field `epsilon_estimate_tv` accordingly.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::construction::MeasurementFamily;
use crate::error::{Error, Result};
use crate::graph::{build_family_graph, maximal_cliques, Context};
use crate::rng::stream_seed;
use crate::vector::ComplexVector;

/// Parity-dependent precision threshold: delta/n for odd n, delta/(n+3) for
/// even n, where delta is the observed violation above the classical bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OncThreshold {
    pub n: u32,
    pub delta: f64,
    pub epsilon_bound: f64,
}

pub fn onc_threshold(n: u32, delta: f64) -> Result<OncThreshold> {
    if n < 5 {
        return Err(Error::VertexCountTooSmall { min: 5, got: n });
    }
    if delta < 0.0 || delta.is_nan() {
        return Err(Error::NegativeDelta(delta));
    }
    let epsilon_bound = if n % 2 == 1 {
        delta / n as f64
    } else {
        delta / (n as f64 + 3.0)
    };
    Ok(OncThreshold { n, delta, epsilon_bound })
}

/// Per-context measurement vectors: each maximal clique of the family graph
/// carries its own copy of every member vertex's vector, independently
/// perturbed, which is exactly the same-vertex-different-context loophole.
#[derive(Clone, Debug)]
pub struct MeasurementMap {
    n: u32,
    d: usize,
    state: ComplexVector,
    contexts: Vec<Context>,
    vectors: Vec<BTreeMap<u32, ComplexVector>>, // parallel to contexts
    eta: f64,
    seed: u64,
}

impl MeasurementMap {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn state(&self) -> &ComplexVector {
        &self.state
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vector_in_context(&self, context_index: usize, vertex: u32) -> Result<&ComplexVector> {
        self.vectors
            .get(context_index)
            .and_then(|m| m.get(&vertex))
            .ok_or(Error::UnknownVertex(vertex))
    }
}

const PERTURB_TAG: u64 = 0x7065_7274; // "pert"
const SHOT_TAG: u64 = 0x7368_6f74; // "shot"

/// Builds the per-context measurement map for `family`, adding
/// normalize(v + eta * g) jitter with an independent seeded standard complex
/// Gaussian g per (vertex, context). eta = 0 reproduces the family exactly.
pub fn perturb_family(family: &MeasurementFamily, eta: f64, seed: u64) -> Result<MeasurementMap> {
    if eta < 0.0 || eta.is_nan() {
        return Err(Error::NegativeNoise(eta));
    }
    let graph = build_family_graph(family.n())?;
    let contexts = maximal_cliques(&graph);
    let mut vectors = Vec::with_capacity(contexts.len());
    for (ci, context) in contexts.iter().enumerate() {
        let mut per_vertex = BTreeMap::new();
        for &v in context.vertices() {
            let base = family.vector(v)?;
            let vec = if eta == 0.0 {
                base.clone()
            } else {
                let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(
                    seed,
                    &[PERTURB_TAG, ci as u64, v as u64],
                ));
                let noise: Vec<Complex64> = (0..family.d())
                    .map(|_| {
                        Complex64::new(
                            rng.sample(rand_distr::StandardNormal),
                            rng.sample(rand_distr::StandardNormal),
                        )
                    })
                    .collect();
                base.add(&ComplexVector::new(noise).scaled(Complex64::new(eta, 0.0)))
                    .normalized()?
            };
            per_vertex.insert(v, vec);
        }
        vectors.push(per_vertex);
    }
    Ok(MeasurementMap {
        n: family.n(),
        d: family.d(),
        state: family.state().clone(),
        contexts,
        vectors,
        eta,
        seed,
    })
}

/// Histogram of joint outcomes for one context. The key is a bitmask over the
/// context's sorted vertex positions; the all-zero mask is the no-click
/// outcome (the complement of every projector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextHistogram {
    pub context: Context,
    pub counts: BTreeMap<u32, u64>,
}

impl ContextHistogram {
    /// Count of shots in which the projector at `position` fired.
    pub fn yes_count(&self, position: usize) -> u64 {
        self.counts
            .iter()
            .filter(|(mask, _)| *mask & (1 << position) != 0)
            .map(|(_, c)| c)
            .sum()
    }

    /// Count of shots with two or more projectors firing.
    pub fn multi_click_count(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(mask, _)| mask.count_ones() >= 2)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Finite-shot outcome summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub shots: u64,
    pub seed: u64,
    pub eta: f64,
    pub histograms: Vec<ContextHistogram>,
    /// Sum over vertices of the vertex's yes-probability averaged over the
    /// contexts containing it.
    pub empirical_beta: f64,
    /// Largest per-context fraction of shots with two projectors firing.
    pub empirical_exclusivity_violation: f64,
    /// Largest gap between a vertex's yes-probabilities across its contexts.
    pub epsilon_estimate: f64,
}

/// Samples every context of the map `shots` times from `state`.
///
/// Within a context the (possibly non-orthogonal) rank-one tests are applied
/// sequentially in vertex order, collapsing after each answer, with the
/// complement outcome last; for exact families this reduces to the joint
/// projective measurement. Per-context RNG streams are derived from
/// (seed, context index), so results are independent of scheduling and
/// bit-identical across reruns.
pub fn simulate_contexts(
    map: &MeasurementMap,
    state: &ComplexVector,
    shots: u64,
    seed: u64,
) -> Result<SimulationResult> {
    if shots < 1 {
        return Err(Error::NoShots);
    }
    if state.dim() != map.d() {
        return Err(Error::DimensionMismatch { expected: map.d(), got: state.dim() });
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }

    let mut histograms = Vec::with_capacity(map.contexts().len());
    for (ci, context) in map.contexts().iter().enumerate() {
        let vectors: Vec<&ComplexVector> = context
            .vertices()
            .iter()
            .map(|&v| map.vector_in_context(ci, v))
            .collect::<Result<_>>()?;
        let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, &[SHOT_TAG, ci as u64]));
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        let mut current = ComplexVector::zeros(map.d());
        for _ in 0..shots {
            current.clone_from(state);
            let mut alive = true; // current still carries norm 1
            let mut mask = 0u32;
            for (pos, vec) in vectors.iter().enumerate() {
                if !alive {
                    break;
                }
                let amp = vec.inner(&current);
                // probabilities below squared machine precision are rounding
                // residue of exact zeros; sampling them would let impossible
                // outcomes fire on a zero uniform draw
                let p = amp.norm_sqr();
                let p = if p < 1e-24 { 0.0 } else { p.clamp(0.0, 1.0) };
                if rng.random::<f64>() < p {
                    mask |= 1 << pos;
                    // collapse onto the fired vector (global phase irrelevant)
                    current.clone_from(vec);
                } else {
                    // collapse onto the complement and renormalize
                    current = current.sub(&vec.scaled(amp));
                    let rest = current.norm();
                    if rest < 1e-9 {
                        alive = false; // state exhausted: every later test says no
                    } else {
                        current = current.scaled(Complex64::new(1.0 / rest, 0.0));
                    }
                }
            }
            *counts.entry(mask).or_insert(0) += 1;
        }
        histograms.push(ContextHistogram { context: context.clone(), counts });
    }

    // per-vertex yes-probabilities per context
    let mut per_vertex: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    let mut worst_multi = 0.0f64;
    for hist in &histograms {
        worst_multi = worst_multi.max(hist.multi_click_count() as f64 / shots as f64);
        for (pos, &v) in hist.context.vertices().iter().enumerate() {
            let p = hist.yes_count(pos) as f64 / shots as f64;
            per_vertex.entry(v).or_default().push(p);
        }
    }
    let empirical_beta = per_vertex
        .values()
        .map(|ps| ps.iter().sum::<f64>() / ps.len() as f64)
        .sum();
    let epsilon_estimate = per_vertex
        .values()
        .map(|ps| {
            let mut gap = 0.0f64;
            for (i, a) in ps.iter().enumerate() {
                for b in &ps[i + 1..] {
                    gap = gap.max((a - b).abs());
                }
            }
            gap
        })
        .fold(0.0, f64::max);

    Ok(SimulationResult {
        shots,
        seed,
        eta: map.eta(),
        histograms,
        empirical_beta,
        empirical_exclusivity_violation: worst_multi,
        epsilon_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_measurements;

    #[test]
    fn threshold_closed_forms() {
        let odd = onc_threshold(7, 1.0 / 9.0).unwrap();
        assert_eq!(odd.epsilon_bound, 1.0 / 63.0); // (1/9)/7 rounds to 1/63 exactly
        let even = onc_threshold(8, 1.0 / 9.0).unwrap();
        assert!((even.epsilon_bound - 1.0 / 99.0).abs() <= f64::EPSILON / 64.0);
        let zero = onc_threshold(9, 0.0).unwrap();
        assert_eq!(zero.epsilon_bound, 0.0);
    }

    #[test]
    fn threshold_parity_branches() {
        for n in 5..=40u32 {
            let t = onc_threshold(n, 0.25).unwrap();
            let expected = if n % 2 == 1 {
                0.25 / n as f64
            } else {
                0.25 / (n as f64 + 3.0)
            };
            assert_eq!(t.epsilon_bound, expected, "n={n}");
        }
    }

    #[test]
    fn threshold_rejects_bad_inputs() {
        assert!(matches!(onc_threshold(4, 0.1), Err(Error::VertexCountTooSmall { .. })));
        assert!(matches!(onc_threshold(7, -0.1), Err(Error::NegativeDelta(_))));
    }

    #[test]
    fn zero_noise_reproduces_the_family_exactly() {
        let fam = build_measurements(7).unwrap();
        let map = perturb_family(&fam, 0.0, 17).unwrap();
        for (ci, context) in map.contexts().iter().enumerate() {
            for &v in context.vertices() {
                assert_eq!(
                    map.vector_in_context(ci, v).unwrap(),
                    fam.vector(v).unwrap()
                );
            }
        }
    }

    #[test]
    fn perturbation_is_deterministic_in_the_seed() {
        let fam = build_measurements(7).unwrap();
        let a = perturb_family(&fam, 1e-2, 5).unwrap();
        let b = perturb_family(&fam, 1e-2, 5).unwrap();
        for ci in 0..a.contexts().len() {
            for &v in a.contexts()[ci].vertices() {
                assert_eq!(
                    a.vector_in_context(ci, v).unwrap(),
                    b.vector_in_context(ci, v).unwrap()
                );
            }
        }
    }

    #[test]
    fn perturbed_vectors_stay_close_over_many_seeds() {
        let fam = build_measurements(7).unwrap();
        for seed in 0..100u64 {
            let map = perturb_family(&fam, 1e-3, seed).unwrap();
            for (ci, context) in map.contexts().iter().enumerate() {
                for &v in context.vertices() {
                    let fidelity = map
                        .vector_in_context(ci, v)
                        .unwrap()
                        .overlap(fam.vector(v).unwrap());
                    assert!(fidelity >= 1.0 - 1e-4, "fidelity {fidelity} at seed {seed}");
                }
            }
        }
    }

    #[test]
    fn perturb_rejects_negative_noise() {
        let fam = build_measurements(7).unwrap();
        assert!(matches!(
            perturb_family(&fam, -1.0, 0),
            Err(Error::NegativeNoise(_))
        ));
    }

    #[test]
    fn exact_simulation_has_zero_exclusivity_violation() {
        let fam = build_measurements(7).unwrap();
        let map = perturb_family(&fam, 0.0, 0).unwrap();
        let result = simulate_contexts(&map, fam.state(), 20_000, 1).unwrap();
        assert_eq!(result.empirical_exclusivity_violation, 0.0);
        for hist in &result.histograms {
            let total: u64 = hist.counts.values().sum();
            assert_eq!(total, 20_000);
            assert!(hist.counts.keys().all(|mask| mask.count_ones() <= 1));
        }
    }

    #[test]
    fn simulation_is_reproducible() {
        let fam = build_measurements(8).unwrap();
        let map = perturb_family(&fam, 1e-2, 3).unwrap();
        let a = simulate_contexts(&map, fam.state(), 5_000, 11).unwrap();
        let b = simulate_contexts(&map, fam.state(), 5_000, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn simulation_rejects_bad_inputs() {
        let fam = build_measurements(7).unwrap();
        let map = perturb_family(&fam, 0.0, 0).unwrap();
        assert!(matches!(
            simulate_contexts(&map, fam.state(), 0, 0),
            Err(Error::NoShots)
        ));
        let unnormalized = fam.state().scaled(Complex64::new(1.5, 0.0));
        assert!(matches!(
            simulate_contexts(&map, &unnormalized, 10, 0),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn empirical_beta_concentrates_at_modest_shots() {
        let fam = build_measurements(7).unwrap();
        let map = perturb_family(&fam, 0.0, 0).unwrap();
        let result = simulate_contexts(&map, fam.state(), 100_000, 7).unwrap();
        let beta = 2.0 + 1.0 / 9.0;
        assert!((result.empirical_beta - beta).abs() < 0.02, "{}", result.empirical_beta);
        assert!(result.epsilon_estimate < 0.02);
    }
}
