//! State search for the fixed measurement family: the top eigenvalue of the
//! projector sum S = sum_i |v_i><v_i| by randomized-restart power iteration.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::construction::MeasurementFamily;
use crate::error::{Error, Result};
use crate::rng::stream_seed;
use crate::vector::ComplexVector;

/// A dense d x d complex matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    d: usize,
    data: Vec<Complex64>, // row-major
}

impl HermitianOperator {
    pub fn zeros(d: usize) -> Self {
        Self { d, data: vec![Complex64::ZERO; d * d] }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.d + col]
    }

    /// Adds the rank-one projector |v><v|.
    pub fn add_outer(&mut self, v: &ComplexVector) {
        assert_eq!(v.dim(), self.d, "projector dimension mismatch");
        for row in 0..self.d {
            for col in 0..self.d {
                self.data[row * self.d + col] += v.component(row) * v.component(col).conj();
            }
        }
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(v.dim(), self.d, "operator dimension mismatch");
        let mut out = ComplexVector::zeros(self.d);
        for row in 0..self.d {
            let mut acc = Complex64::ZERO;
            for col in 0..self.d {
                acc += self.entry(row, col) * v.component(col);
            }
            out.set_component(row, acc);
        }
        out
    }

    /// Rayleigh quotient <v|S|v> / <v|v>, real for Hermitian operators.
    pub fn rayleigh(&self, v: &ComplexVector) -> f64 {
        let sv = self.apply(v);
        (v.inner(&sv) / v.norm_sqr()).re
    }

    pub fn trace(&self) -> f64 {
        (0..self.d).map(|i| self.entry(i, i).re).sum()
    }

    /// Largest |a_ij - conj(a_ji)| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in 0..self.d {
            for col in 0..self.d {
                worst = worst.max((self.entry(row, col) - self.entry(col, row).conj()).norm());
            }
        }
        worst
    }
}

/// Sum of the rank-one projectors of the chosen vertices (all when None).
pub fn projector_sum(
    family: &MeasurementFamily,
    vertices: Option<&[u32]>,
) -> Result<HermitianOperator> {
    let mut op = HermitianOperator::zeros(family.d());
    match vertices {
        Some(list) => {
            for &v in list {
                op.add_outer(family.vector(v)?);
            }
        }
        None => {
            for v in family.vectors().values() {
                op.add_outer(v);
            }
        }
    }
    Ok(op)
}

/// Result of the eigen-optimum search.
#[derive(Clone, Debug)]
pub struct OptimizationOutcome {
    pub lambda_max: f64,
    pub state: ComplexVector,
    pub restarts_used: u32,
    pub converged: bool,
    /// Iterations used by the winning restart.
    pub iterations: u32,
}

/// Maximizes <psi|S|psi> over unit states for S = projector_sum(family) by
/// power iteration from `restarts` seeded random starts. A restart converges
/// when successive Rayleigh quotients differ by at most `tol`; the best
/// Rayleigh quotient over restarts wins, ties broken by the earliest restart.
pub fn max_violation_state(
    family: &MeasurementFamily,
    restarts: u32,
    iters: u32,
    tol: f64,
    seed: u64,
) -> Result<OptimizationOutcome> {
    if restarts < 1 {
        return Err(Error::NoRestarts);
    }
    let op = projector_sum(family, None)?;
    let mut best: Option<OptimizationOutcome> = None;
    for restart in 0..restarts {
        let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, &[0x9e1f, restart as u64]));
        let start = random_unit_vector(&mut rng, op.dim());
        let (lambda, state, converged, iterations) = power_iterate(&op, start, iters, tol);
        let better = match &best {
            None => true,
            Some(b) => lambda > b.lambda_max,
        };
        if better {
            best = Some(OptimizationOutcome {
                lambda_max: lambda,
                state,
                restarts_used: restarts,
                converged,
                iterations,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn random_unit_vector(rng: &mut ChaCha12Rng, d: usize) -> ComplexVector {
    loop {
        let components: Vec<Complex64> = (0..d)
            .map(|_| {
                Complex64::new(
                    rng.sample(rand_distr::StandardNormal),
                    rng.sample(rand_distr::StandardNormal),
                )
            })
            .collect();
        let v = ComplexVector::new(components);
        if let Ok(unit) = v.normalized() {
            return unit;
        }
    }
}

fn power_iterate(
    op: &HermitianOperator,
    start: ComplexVector,
    iters: u32,
    tol: f64,
) -> (f64, ComplexVector, bool, u32) {
    let mut x = start;
    let mut lambda = op.rayleigh(&x);
    for it in 1..=iters {
        let y = op.apply(&x);
        let norm = y.norm();
        if norm <= f64::MIN_POSITIVE {
            // x is (numerically) in the kernel: Rayleigh quotient is 0 and
            // cannot move, so the iterate is converged at eigenvalue 0.
            return (0.0, x, true, it);
        }
        x = y.scaled(Complex64::new(1.0 / norm, 0.0));
        let next = op.rayleigh(&x);
        let delta = (next - lambda).abs();
        lambda = next;
        if delta <= tol {
            return (lambda, x, true, it);
        }
    }
    (lambda, x, false, iters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_measurements;
    use crate::graph::build_family_graph;

    #[test]
    fn single_vertex_projector_has_unit_trace() {
        let fam = build_measurements(7).unwrap();
        let op = projector_sum(&fam, Some(&[3])).unwrap();
        assert!((op.trace() - 1.0).abs() < 1e-12);
        assert!(op.hermiticity_defect() < 1e-12);
        // rank one: S^2 = S on its eigenvector
        let v = fam.vector(3).unwrap();
        assert!((op.rayleigh(v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn part_a_projector_is_idempotent_on_the_state() {
        let fam = build_measurements(9).unwrap();
        let g = build_family_graph(9).unwrap();
        let op = projector_sum(&fam, Some(g.part_a())).unwrap();
        // part A is orthonormal and spans the state, so S psi = psi
        let sv = op.apply(fam.state());
        assert!(sv.sub(fam.state()).norm() < 1e-9);
        // eigenvalues are 0 or 1: S^2 - S = 0 within tolerance on a probe
        let probe = fam.vector(1).unwrap();
        let s1 = op.apply(probe);
        let s2 = op.apply(&s1);
        assert!(s2.sub(&s1).norm() < 1e-9);
    }

    #[test]
    fn full_family_trace_equals_n() {
        let fam = build_measurements(7).unwrap();
        let op = projector_sum(&fam, None).unwrap();
        assert!((op.trace() - 7.0).abs() < 1e-9);
    }

    #[test]
    fn projector_sum_rejects_unknown_vertex() {
        let fam = build_measurements(7).unwrap();
        assert!(matches!(
            projector_sum(&fam, Some(&[8])),
            Err(Error::UnknownVertex(8))
        ));
    }

    #[test]
    fn orthonormal_family_gives_lambda_one() {
        // d orthonormal vectors sum to a projector with top eigenvalue 1;
        // build one from part A of n = 9 (4 orthonormal vectors in d = 7).
        let fam = build_measurements(9).unwrap();
        let g = build_family_graph(9).unwrap();
        let op = projector_sum(&fam, Some(g.part_a())).unwrap();
        let mut best = 0.0f64;
        for restart in 0..8u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(5, &[0x9e1f, restart]));
            let start = random_unit_vector(&mut rng, op.dim());
            let (lambda, _, converged, _) = power_iterate(&op, start, 5000, 1e-14);
            assert!(converged);
            best = best.max(lambda);
        }
        assert!((best - 1.0).abs() < 1e-9, "lambda = {best}");
    }

    #[test]
    fn n7_eigen_optimum_is_near_2_22() {
        let fam = build_measurements(7).unwrap();
        let out = max_violation_state(&fam, 8, 20_000, 1e-13, 7).unwrap();
        assert!(out.converged);
        assert!(out.lambda_max > 2.0 + 1.0 / 9.0);
        assert!((out.lambda_max - 2.22).abs() < 0.02, "lambda = {}", out.lambda_max);
        // returned state is unit and achieves the reported Rayleigh quotient
        assert!((out.state.norm() - 1.0).abs() < 1e-12);
        let op = projector_sum(&fam, None).unwrap();
        assert!((op.rayleigh(&out.state) - out.lambda_max).abs() < 1e-12);
    }

    #[test]
    fn eigen_optimum_dominates_the_built_state() {
        for n in [7u32, 8, 11] {
            let fam = build_measurements(n).unwrap();
            let op = projector_sum(&fam, None).unwrap();
            let feasible = op.rayleigh(fam.state());
            let out = max_violation_state(&fam, 8, 20_000, 1e-13, 3).unwrap();
            assert!(out.lambda_max >= feasible - 1e-12, "n={n}");
            let bound = (n as f64).min(fam.d() as f64);
            assert!(out.lambda_max <= bound + 1e-9, "n={n}");
        }
    }

    #[test]
    fn optimization_is_deterministic_in_the_seed() {
        let fam = build_measurements(8).unwrap();
        let a = max_violation_state(&fam, 8, 10_000, 1e-12, 99).unwrap();
        let b = max_violation_state(&fam, 8, 10_000, 1e-12, 99).unwrap();
        assert_eq!(a.lambda_max.to_bits(), b.lambda_max.to_bits());
        assert_eq!(a.state, b.state);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn zero_restarts_is_rejected() {
        let fam = build_measurements(7).unwrap();
        assert!(matches!(
            max_violation_state(&fam, 0, 100, 1e-12, 0),
            Err(Error::NoRestarts)
        ));
    }
}
