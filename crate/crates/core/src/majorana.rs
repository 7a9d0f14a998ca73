//! Majorana constellations: a d-dimensional state maps (up to global phase)
//! to d-1 points on the sphere, the stereographically projected zeros of
//! f(x) = sum_k sqrt(C(d-1,k)) a_k x^k.
//!
//! Conventions: a zero x relates to angles by x = e^{-i phi} tan(theta/2);
//! the zero x = 0 is the north pole (theta = 0), and a polynomial of degree
//! k < d-1 contributes d-1-k points at the south pole (theta = pi).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vector::ComplexVector;

/// Residual bound for accepted roots, relative to the largest coefficient.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;

/// Points closer than this angular distance merge into one multiplicity.
pub const MERGE_TOL: f64 = 1e-6;

/// Binomial coefficient as f64 (exact for the small arguments used here).
fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as f64
}

/// Coefficient list of the Majorana polynomial: entry k is
/// sqrt(C(d-1,k)) * a_k. Trailing zeros are retained so the degree deficiency
/// stays visible to the root finder.
pub fn majorana_polynomial(state: &ComplexVector) -> Result<Vec<Complex64>> {
    let d = state.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d });
    }
    Ok(state
        .components()
        .iter()
        .enumerate()
        .map(|(k, a)| a * binomial(d - 1, k).sqrt())
        .collect())
}

fn eval_poly(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::ZERO, |acc, &c| acc * x + c)
}

fn eval_poly_derivative(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::ZERO, |acc, (k, &c)| acc * x + c * k as f64)
}

/// All roots of the polynomial with the given coefficient list (entry k is
/// the coefficient of x^k), plus the degree deficiency
/// (list length - 1 - actual degree, from exactly-zero leading coefficients).
///
/// Zero roots are split off exactly; the rest come from Durand-Kerner
/// iteration on the monic deflated polynomial, started on a ring with a
/// deterministic jitter that breaks symmetric stalls, then polished with
/// Newton steps. Every returned root r passes a backward-error test:
/// |f(r)| <= tol * max(max_k |c_k|, sum_k |c_k| |r|^k), i.e. r is an exact
/// root of a polynomial whose coefficients differ relatively by at most tol
/// (the plain max-coefficient scale is meaningless for large-modulus roots,
/// where evaluation roundoff alone exceeds it). Roots are sorted by (re, im)
/// so the output is a deterministic multiset.
pub fn polynomial_roots(coeffs: &[Complex64], tol: f64) -> Result<(Vec<Complex64>, usize)> {
    let is_zero = |c: &Complex64| c.re == 0.0 && c.im == 0.0;
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 || coeffs.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let top = coeffs.iter().rposition(|c| !is_zero(c)).unwrap();
    let deficiency = coeffs.len() - 1 - top;
    let low = coeffs.iter().position(|c| !is_zero(c)).unwrap();

    let mut roots = vec![Complex64::ZERO; low];
    let deflated = &coeffs[low..=top];
    let degree = top - low;
    if degree > 0 {
        let mut found = durand_kerner(deflated, 0)?;
        // one polishing round on the deflated polynomial
        for r in &mut found {
            for _ in 0..3 {
                let fx = eval_poly(deflated, *r);
                let dfx = eval_poly_derivative(deflated, *r);
                if dfx.norm() <= f64::MIN_POSITIVE {
                    break;
                }
                let step = fx / dfx;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                *r -= step;
            }
        }
        roots.extend(found);
    }

    for r in &roots {
        let residual = eval_poly(coeffs, *r).norm();
        let evaluation_scale = coeffs
            .iter()
            .fold((0.0f64, 1.0f64), |(acc, power), c| {
                (acc + c.norm() * power, power * r.norm())
            })
            .0;
        let bound = tol * scale.max(evaluation_scale);
        if residual > bound || residual.is_nan() {
            return Err(Error::RootResidual { residual, bound });
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok((roots, deficiency))
}

fn durand_kerner(coeffs: &[Complex64], attempt: u32) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0f64, f64::max);

    // deterministic jitter from a fixed counter stream
    let mut counter = 0x5bd1_e995u64.wrapping_add(attempt as u64);
    let mut next_unit = || {
        counter = counter.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (counter >> 11) as f64 / (1u64 << 53) as f64
    };
    let tau = std::f64::consts::TAU;
    let mut z: Vec<Complex64> = (0..degree)
        .map(|j| {
            let angle = tau * (j as f64 + 0.25 + 0.5 * next_unit()) / degree as f64;
            let r = radius * (0.7 + 0.6 * next_unit());
            Complex64::from_polar(r, angle)
        })
        .collect();

    let mut ok = false;
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for j in 0..degree {
            let mut denom = Complex64::ONE;
            for l in 0..degree {
                if l != j {
                    denom *= z[j] - z[l];
                }
            }
            if denom.norm() <= f64::MIN_POSITIVE {
                denom = Complex64::new(f64::MIN_POSITIVE.sqrt(), 0.0);
            }
            let step = eval_poly(&monic, z[j]) / denom;
            if !step.re.is_finite() || !step.im.is_finite() {
                return retry(coeffs, attempt);
            }
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step <= 1e-14 {
            ok = true;
            break;
        }
    }
    if !ok {
        // multiple roots converge slowly; accept and let the residual check
        // decide, unless iterates are clearly broken
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return retry(coeffs, attempt);
        }
    }
    Ok(z)
}

fn retry(coeffs: &[Complex64], attempt: u32) -> Result<Vec<Complex64>> {
    if attempt >= 4 {
        return Err(Error::RootResidual { residual: f64::INFINITY, bound: 0.0 });
    }
    durand_kerner(coeffs, attempt + 1)
}

/// One merged constellation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstellationPoint {
    /// Colatitude in radians, in [0, pi].
    pub theta: f64,
    /// Azimuth in radians, in (-pi, pi].
    pub phi: f64,
    pub multiplicity: u32,
}

/// The d-1 sphere points of a state, with coincident points merged and
/// degree-deficiency points counted at the south pole.
#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    dim: usize,
    points: Vec<ConstellationPoint>,
    south_pole_count: u32,
}

impl Constellation {
    pub fn new(dim: usize, points: Vec<ConstellationPoint>, south_pole_count: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { min: 2, got: dim });
        }
        let total: u32 = points.iter().map(|p| p.multiplicity).sum::<u32>() + south_pole_count;
        if total as usize != dim - 1 {
            return Err(Error::InvalidConstellation(format!(
                "{total} points for dimension {dim} (need {})",
                dim - 1
            )));
        }
        for p in &points {
            if !p.theta.is_finite() || !p.phi.is_finite() {
                return Err(Error::InvalidConstellation("non-finite angles".into()));
            }
        }
        Ok(Self { dim, points, south_pole_count })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ConstellationPoint] {
        &self.points
    }

    pub fn south_pole_count(&self) -> u32 {
        self.south_pole_count
    }

    pub fn north_pole_count(&self) -> u32 {
        self.points
            .iter()
            .filter(|p| p.theta == 0.0)
            .map(|p| p.multiplicity)
            .sum()
    }

    pub fn total_points(&self) -> u32 {
        self.points.iter().map(|p| p.multiplicity).sum::<u32>() + self.south_pole_count
    }

    /// All d-1 points with multiplicities expanded, south poles included as
    /// (pi, 0).
    pub fn expanded(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.dim - 1);
        for p in &self.points {
            for _ in 0..p.multiplicity {
                out.push((p.theta, p.phi));
            }
        }
        for _ in 0..self.south_pole_count {
            out.push((std::f64::consts::PI, 0.0));
        }
        out
    }

    /// The image under the amplitude-reversal symmetry:
    /// (theta, phi) -> (pi - theta, -phi), poles swapping roles.
    pub fn flipped(&self) -> Constellation {
        let pi = std::f64::consts::PI;
        let flipped: Vec<(f64, f64)> = self
            .expanded()
            .into_iter()
            .map(|(theta, phi)| (pi - theta, normalize_phi(-phi)))
            .collect();
        cluster_points(self.dim, &flipped)
    }
}

fn normalize_phi(phi: f64) -> f64 {
    let pi = std::f64::consts::PI;
    if phi <= -pi {
        phi + 2.0 * pi
    } else if phi > pi {
        phi - 2.0 * pi
    } else {
        phi
    }
}

/// Central angle between two (theta, phi) directions.
pub fn angular_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let cosine = a.0.cos() * b.0.cos() + a.0.sin() * b.0.sin() * (a.1 - b.1).cos();
    cosine.clamp(-1.0, 1.0).acos()
}

/// Merges coincident points (within [`MERGE_TOL`]) and splits off exact south
/// poles into the deficiency count.
fn cluster_points(dim: usize, raw: &[(f64, f64)]) -> Constellation {
    let pi = std::f64::consts::PI;
    let mut south = 0u32;
    let mut sorted: Vec<(f64, f64)> = raw
        .iter()
        .copied()
        .filter(|&(theta, _)| {
            if pi - theta <= MERGE_TOL {
                south += 1;
                false
            } else {
                true
            }
        })
        .collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut merged: Vec<ConstellationPoint> = Vec::new();
    for (theta, phi) in sorted {
        match merged
            .iter_mut()
            .find(|p| angular_distance((p.theta, p.phi), (theta, phi)) <= MERGE_TOL)
        {
            Some(p) => p.multiplicity += 1,
            None => merged.push(ConstellationPoint { theta, phi, multiplicity: 1 }),
        }
    }
    Constellation::new(dim, merged, south).expect("clustering preserves the point count")
}

/// Computes the constellation of a unit state.
pub fn constellation(state: &ComplexVector) -> Result<Constellation> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized(norm));
    }
    let coeffs = majorana_polynomial(state)?;
    let (roots, deficiency) = polynomial_roots(&coeffs, ROOT_RESIDUAL_TOL)?;
    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(state.dim() - 1);
    for root in roots {
        let modulus = root.norm();
        if modulus == 0.0 {
            raw.push((0.0, 0.0)); // north pole
        } else {
            let theta = 2.0 * modulus.atan();
            let phi = normalize_phi(-root.arg());
            raw.push((theta, phi));
        }
    }
    let pi = std::f64::consts::PI;
    for _ in 0..deficiency {
        raw.push((pi, 0.0));
    }
    Ok(cluster_points(state.dim(), &raw))
}

/// Rebuilds a state from its constellation: expand the monic polynomial with
/// the constellation's zeros (south-pole points lower the degree), divide
/// coefficient k by sqrt(C(d-1,k)), normalize, and fix the first nonzero
/// amplitude to be real positive. Matches the original up to global phase.
pub fn reconstruct_state(c: &Constellation) -> ComplexVector {
    let pi = std::f64::consts::PI;
    let d = c.dim();
    let mut poly = vec![Complex64::ONE];
    for p in c.points() {
        if pi - p.theta <= 1e-12 {
            continue; // south pole: degree deficiency, no factor
        }
        let root = Complex64::from_polar((p.theta / 2.0).tan(), -p.phi);
        for _ in 0..p.multiplicity {
            // multiply the ascending coefficient list by (x - root)
            poly.push(Complex64::ZERO);
            for k in (1..poly.len()).rev() {
                let lower = poly[k - 1];
                poly[k] = lower - root * poly[k];
            }
            poly[0] = -root * poly[0];
        }
    }
    let mut amplitudes = vec![Complex64::ZERO; d];
    for (k, coeff) in poly.iter().enumerate() {
        amplitudes[k] = coeff / binomial(d - 1, k).sqrt();
    }
    let state = ComplexVector::new(amplitudes)
        .normalized()
        .expect("constellation polynomial has a nonzero coefficient");
    // fix global phase: first amplitude above threshold becomes real positive
    let phase = state
        .components()
        .iter()
        .find(|a| a.norm() > 1e-12)
        .map(|a| a / a.norm())
        .unwrap_or(Complex64::ONE);
    state.scaled(phase.conj())
}

/// Worst matched angular distance between two equally sized constellations,
/// by greedy nearest-neighbor matching of the expanded point lists.
pub fn match_distance(a: &Constellation, b: &Constellation) -> f64 {
    let pa = a.expanded();
    let mut pb = b.expanded();
    assert_eq!(pa.len(), pb.len(), "constellations of different sizes");
    let mut worst = 0.0f64;
    for p in pa {
        let (idx, dist) = pb
            .iter()
            .enumerate()
            .map(|(i, q)| (i, angular_distance(p, *q)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty");
        worst = worst.max(dist);
        pb.swap_remove(idx);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_state(values: &[f64]) -> ComplexVector {
        ComplexVector::from_real(values).normalized().unwrap()
    }

    #[test]
    fn polynomial_of_basis_zero_is_constant() {
        let state = ComplexVector::basis_state(5, 0);
        let coeffs = majorana_polynomial(&state).unwrap();
        assert_eq!(coeffs.len(), 5);
        assert_eq!(coeffs[0], Complex64::ONE);
        assert!(coeffs[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn polynomial_weights_are_unity_in_d2() {
        let state = real_state(&[1.0, 1.0]);
        let coeffs = majorana_polynomial(&state).unwrap();
        let r = 0.5f64.sqrt();
        assert!((coeffs[0].re - r).abs() < 1e-15);
        assert!((coeffs[1].re - r).abs() < 1e-15);
    }

    #[test]
    fn polynomial_weights_in_d3() {
        // sqrt(C(2,k)) = (1, sqrt 2, 1); the middle amplitude is 0
        let state = real_state(&[1.0, 0.0, 1.0]);
        let coeffs = majorana_polynomial(&state).unwrap();
        let r = 0.5f64.sqrt();
        assert!((coeffs[0].re - r).abs() < 1e-15);
        assert!(coeffs[1].norm() < 1e-15);
        assert!((coeffs[2].re - r).abs() < 1e-15);
    }

    #[test]
    fn polynomial_rejects_d1() {
        let state = ComplexVector::basis_state(1, 0);
        assert!(matches!(
            majorana_polynomial(&state),
            Err(Error::DimensionTooSmall { min: 2, got: 1 })
        ));
    }

    #[test]
    fn linear_roots() {
        let one = Complex64::ONE;
        let (roots, deficiency) = polynomial_roots(&[one, one], 1e-12).unwrap();
        assert_eq!(deficiency, 0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] + one).norm() < 1e-12);

        let (roots, deficiency) =
            polynomial_roots(&[Complex64::new(-2.0, 0.0), one], 1e-12).unwrap();
        assert_eq!(deficiency, 0);
        assert!((roots[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_polynomial_has_full_deficiency() {
        let mut coeffs = vec![Complex64::ZERO; 5];
        coeffs[0] = Complex64::ONE;
        let (roots, deficiency) = polynomial_roots(&coeffs, 1e-12).unwrap();
        assert!(roots.is_empty());
        assert_eq!(deficiency, 4);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(matches!(
            polynomial_roots(&[Complex64::ZERO; 3], 1e-12),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn quartic_with_known_roots() {
        // (x-1)(x+2)(x-3i)(x+i) expanded
        let r = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 3.0),
            Complex64::new(0.0, -1.0),
        ];
        let mut poly = vec![Complex64::ONE];
        for root in r {
            poly.insert(0, Complex64::ZERO);
            for k in 0..poly.len() - 1 {
                let high = poly[k + 1];
                poly[k] -= root * high;
            }
        }
        let (roots, deficiency) = polynomial_roots(&poly, 1e-10).unwrap();
        assert_eq!(deficiency, 0);
        assert_eq!(roots.len(), 4);
        for want in r {
            let nearest = roots
                .iter()
                .map(|found| (found - want).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-9, "no root near {want}");
        }
    }

    #[test]
    fn basis_zero_constellation_is_all_south() {
        let c = constellation(&ComplexVector::basis_state(5, 0)).unwrap();
        assert_eq!(c.south_pole_count(), 4);
        assert!(c.points().is_empty());
        assert_eq!(c.total_points(), 4);
    }

    #[test]
    fn top_basis_state_constellation_is_all_north() {
        let c = constellation(&ComplexVector::basis_state(5, 4)).unwrap();
        assert_eq!(c.south_pole_count(), 0);
        assert_eq!(c.north_pole_count(), 4);
        assert_eq!(c.points().len(), 1);
        assert_eq!(c.points()[0].multiplicity, 4);
    }

    #[test]
    fn equal_superposition_in_d2_sits_on_minus_x() {
        let c = constellation(&real_state(&[1.0, 1.0])).unwrap();
        assert_eq!(c.points().len(), 1);
        let p = c.points()[0];
        let pi = std::f64::consts::PI;
        assert!((p.theta - pi / 2.0).abs() < 1e-12);
        assert!((p.phi - pi).abs() < 1e-12);
    }

    #[test]
    fn single_north_point_in_d2_reconstructs_to_basis_one() {
        let c = Constellation::new(
            2,
            vec![ConstellationPoint { theta: 0.0, phi: 0.0, multiplicity: 1 }],
            0,
        )
        .unwrap();
        let state = reconstruct_state(&c);
        let target = ComplexVector::basis_state(2, 1);
        assert!(state.overlap(&target) > 1.0 - 1e-12);
    }

    #[test]
    fn round_trip_basis_zero() {
        let state = ComplexVector::basis_state(5, 0);
        let rebuilt = reconstruct_state(&constellation(&state).unwrap());
        assert!(rebuilt.overlap(&state) > 1.0 - 1e-12);
    }

    #[test]
    fn round_trip_constructed_state() {
        use crate::construction::build_measurements;
        let fam = build_measurements(7).unwrap();
        let rebuilt = reconstruct_state(&constellation(fam.state()).unwrap());
        assert!(rebuilt.overlap(fam.state()) >= 1.0 - 1e-8);
    }

    #[test]
    fn flip_symmetry_of_built_state_and_v1() {
        use crate::construction::build_measurements;
        for n in 6..=14u32 {
            let fam = build_measurements(n).unwrap();
            for v in [fam.state().clone(), fam.vector(1).unwrap().clone()] {
                let c = constellation(&v).unwrap();
                let dist = match_distance(&c, &c.flipped());
                assert!(dist <= 1e-6, "flip distance {dist} at n={n}");
            }
        }
    }

    #[test]
    fn part_b_constellations_are_flipped_part_a() {
        use crate::construction::build_measurements;
        use crate::graph::build_family_graph;
        for n in [7u32, 8, 10, 11] {
            let fam = build_measurements(n).unwrap();
            let g = build_family_graph(n).unwrap();
            for &i in g.part_a() {
                let j = n + 2 - i;
                let ci = constellation(fam.vector(i).unwrap()).unwrap();
                let cj = constellation(fam.vector(j).unwrap()).unwrap();
                let dist = match_distance(&cj, &ci.flipped());
                assert!(dist <= 1e-6, "partner distance {dist} at n={n}, i={i}");
            }
        }
    }

    #[test]
    fn degenerate_points_merge_with_multiplicity() {
        // v3 at n = 7 has an exact double zero at the origin: two north poles
        use crate::construction::build_measurements;
        let fam = build_measurements(7).unwrap();
        let c = constellation(fam.vector(3).unwrap()).unwrap();
        assert_eq!(c.north_pole_count(), 2);
        assert_eq!(c.total_points(), 4);
    }

    #[test]
    fn constellation_rejects_unnormalized_states() {
        let state = ComplexVector::from_real(&[2.0, 0.0]);
        assert!(matches!(constellation(&state), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn constellation_total_must_match_dimension() {
        assert!(Constellation::new(5, Vec::new(), 3).is_err());
        assert!(Constellation::new(5, Vec::new(), 4).is_ok());
    }
}
