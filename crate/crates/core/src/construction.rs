//! Synthesis of the qudit state and per-vertex measurement vectors for the
//! n >= 6 graph family, in dimension d = n - 2.
//!
//! The part-A vectors other than |0> follow a fixed template whose free
//! coefficients are the rows of a centered regular simplex, scaled so that
//! pairwise row products hit the parity-dependent target (-2 odd, -4 even).
//! Part-B vectors are amplitude-reversed images of their part-A partners
//! (vertex i pairs with vertex n+2-i).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vector::ComplexVector;

/// Tolerance for construction algebra (simplex row products, column sums).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Tolerance for physics assertions (orthogonality, probabilities, spans).
pub const PHYSICS_TOL: f64 = 1e-9;

/// Real coefficient rows: m rows of length m-1 with constant pairwise dot
/// product and vanishing column sums.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    rows: Vec<Vec<f64>>,
    pairwise: f64,
}

impl CoefficientMatrix {
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row_dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn pairwise_target(&self) -> f64 {
        self.pairwise
    }

    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|a| self.rows.iter().map(|b| dot(a, b)).collect())
            .collect()
    }

    /// Largest deviation of an off-diagonal row product from the target.
    pub fn max_pairwise_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.row_count() {
            for j in i + 1..self.row_count() {
                worst = worst.max((dot(&self.rows[i], &self.rows[j]) - self.pairwise).abs());
            }
        }
        worst
    }

    /// Largest absolute column sum.
    pub fn max_column_sum(&self) -> f64 {
        (0..self.row_dim())
            .map(|k| self.rows.iter().map(|r| r[k]).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of a squared row norm from -pairwise * (m-1).
    pub fn max_norm_deviation(&self) -> f64 {
        let target = -self.pairwise * (self.row_count() as f64 - 1.0);
        self.rows
            .iter()
            .map(|r| (dot(r, r) - target).abs())
            .fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The m vertices of a centered regular simplex in dimension m-1, scaled so
/// every pairwise dot product equals `pairwise` (< 0). Row norms are then
/// -pairwise*(m-1) and every column sums to zero. m = 1 gives one empty row.
pub fn simplex_rows(m: usize, pairwise: f64) -> Result<CoefficientMatrix> {
    if m < 1 {
        return Err(Error::DimensionTooSmall { min: 1, got: m });
    }
    if pairwise >= 0.0 || pairwise.is_nan() {
        return Err(Error::PairwiseNotNegative(pairwise));
    }
    // Unit vertices by recursive embedding: k vertices in R^{k-1} extend the
    // k-1 unit simplex scaled by c, plus the apex at the new axis.
    let mut verts: Vec<Vec<f64>> = vec![Vec::new()];
    for k in 2..=m {
        let h = 1.0 / (k as f64 - 1.0);
        let c = (1.0 - h * h).sqrt();
        let mut next: Vec<Vec<f64>> = verts
            .iter()
            .map(|w| {
                let mut row: Vec<f64> = w.iter().map(|x| c * x).collect();
                row.push(-h);
                row
            })
            .collect();
        let mut apex = vec![0.0; k - 2];
        apex.push(1.0);
        next.push(apex);
        verts = next;
    }
    let scale = (-pairwise * (m as f64 - 1.0)).sqrt();
    for row in &mut verts {
        for x in row.iter_mut() {
            *x *= scale;
        }
    }
    Ok(CoefficientMatrix { rows: verts, pairwise })
}

/// A normalized measurement vector per vertex plus the normalized state,
/// in dimension d = n - 2.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementFamily {
    n: u32,
    d: usize,
    vectors: BTreeMap<u32, ComplexVector>,
    state: ComplexVector,
}

impl MeasurementFamily {
    /// Validates dimensions (d = n - 2, all vectors of length d) and unit
    /// norms to 1e-6, which is loose enough for serialized round trips.
    pub fn new(n: u32, vectors: BTreeMap<u32, ComplexVector>, state: ComplexVector) -> Result<Self> {
        if n < 6 {
            return Err(Error::VertexCountTooSmall { min: 6, got: n });
        }
        let d = n as usize - 2;
        if state.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: state.dim() });
        }
        if vectors.len() != n as usize || vectors.keys().zip(1..=n).any(|(&k, v)| k != v) {
            return Err(Error::InvalidFamily(format!(
                "expected vectors for vertices 1..={n}"
            )));
        }
        for (v, vec) in &vectors {
            if vec.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: vec.dim() });
            }
            if !vec.is_finite() {
                return Err(Error::InvalidFamily(format!("vector {v} has non-finite entries")));
            }
            if (vec.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidFamily(format!(
                    "vector {v} is not normalized (norm {})",
                    vec.norm()
                )));
            }
        }
        if !state.is_finite() || (state.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidFamily(format!(
                "state is not normalized (norm {})",
                state.norm()
            )));
        }
        Ok(Self { n, d, vectors, state })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn state(&self) -> &ComplexVector {
        &self.state
    }

    pub fn vector(&self, vertex: u32) -> Result<&ComplexVector> {
        self.vectors.get(&vertex).ok_or(Error::UnknownVertex(vertex))
    }

    pub fn vectors(&self) -> &BTreeMap<u32, ComplexVector> {
        &self.vectors
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vectors.keys().copied()
    }
}

/// Unnormalized part-A template for odd n, vertices (n+1)/2 >= i >= 3:
/// |mid> + sum_k c_{i,k}|k> + |d-1> with k running over (n-1)/2..=n-4.
fn odd_template(n: u32, row: &[f64]) -> ComplexVector {
    let d = n as usize - 2;
    let mid = (n as usize - 3) / 2;
    let mut v = ComplexVector::zeros(d);
    v.set_component(mid, Complex64::ONE);
    let first_k = (n as usize - 1) / 2;
    for (offset, &c) in row.iter().enumerate() {
        v.set_component(first_k + offset, Complex64::new(c, 0.0));
    }
    v.set_component(d - 1, Complex64::ONE);
    v
}

/// Unnormalized part-A template for even n, vertices n/2 >= i >= 3:
/// |n/2-2> + |n/2-1> + sum_k c_{i,k}|k> + sqrt(2)|d-1>, k in n/2..=n-4.
fn even_template(n: u32, row: &[f64]) -> ComplexVector {
    let d = n as usize - 2;
    let lo = n as usize / 2 - 2;
    let mut v = ComplexVector::zeros(d);
    v.set_component(lo, Complex64::ONE);
    v.set_component(lo + 1, Complex64::ONE);
    let first_k = n as usize / 2;
    for (offset, &c) in row.iter().enumerate() {
        v.set_component(first_k + offset, Complex64::new(c, 0.0));
    }
    v.set_component(d - 1, Complex64::new(2f64.sqrt(), 0.0));
    v
}

/// Builds the full measurement family for n >= 6: the state, vertex 1, the
/// part-A vectors, and their amplitude-reversed part-B partners.
pub fn build_measurements(n: u32) -> Result<MeasurementFamily> {
    if n < 6 {
        return Err(Error::VertexCountTooSmall { min: 6, got: n });
    }
    let d = n as usize - 2;
    let mut vectors: BTreeMap<u32, ComplexVector> = BTreeMap::new();
    let state;
    if n % 2 == 1 {
        let mid = (n as usize - 3) / 2;
        let s3 = 1.0 / 3f64.sqrt();
        let mut psi = ComplexVector::zeros(d);
        psi.set_component(0, Complex64::new(s3, 0.0));
        psi.set_component(mid, Complex64::new(s3, 0.0));
        psi.set_component(d - 1, Complex64::new(s3, 0.0));
        let mut v1 = psi.clone();
        v1.set_component(mid, Complex64::new(-s3, 0.0));
        state = psi;
        vectors.insert(1, v1);
        vectors.insert(2, ComplexVector::basis_state(d, 0));
        let coeffs = simplex_rows((n as usize - 3) / 2, -2.0)?;
        for (row, i) in coeffs.rows().iter().zip(3..=n.div_ceil(2)) {
            vectors.insert(i, odd_template(n, row).normalized()?);
        }
        for i in 2..=n.div_ceil(2) {
            let partner = vectors[&i].reversed();
            vectors.insert(n + 2 - i, partner);
        }
    } else {
        let lo = n as usize / 2 - 2;
        let s6 = 1.0 / 6f64.sqrt();
        let s2 = 2f64.sqrt();
        let mut psi = ComplexVector::zeros(d);
        psi.set_component(0, Complex64::new(s2 * s6, 0.0));
        psi.set_component(lo, Complex64::new(s6, 0.0));
        psi.set_component(lo + 1, Complex64::new(s6, 0.0));
        psi.set_component(d - 1, Complex64::new(s2 * s6, 0.0));
        let mut v1 = psi.clone();
        v1.set_component(lo, Complex64::new(-s6, 0.0));
        v1.set_component(lo + 1, Complex64::new(-s6, 0.0));
        state = psi;
        vectors.insert(1, v1);
        vectors.insert(2, ComplexVector::basis_state(d, 0));
        let mut shared = ComplexVector::zeros(d);
        shared.set_component(lo, Complex64::new(-1.0 / s2, 0.0));
        shared.set_component(lo + 1, Complex64::new(1.0 / s2, 0.0));
        vectors.insert(n / 2 + 1, shared);
        let coeffs = simplex_rows(n as usize / 2 - 2, -4.0)?;
        for (row, i) in coeffs.rows().iter().zip(3..=n / 2) {
            vectors.insert(i, even_template(n, row).normalized()?);
        }
        // the shared vertex n/2+1 flips to itself up to sign; the rest pair up
        for i in 2..=n / 2 {
            let partner = vectors[&i].reversed();
            vectors.insert(n + 2 - i, partner);
        }
    }
    MeasurementFamily::new(n, vectors, state)
}

/// Least-squares coefficients of `state` in the span of the subset's vectors,
/// plus the Euclidean norm of the residual. Computed by modified Gram-Schmidt;
/// numerically dependent columns contribute zero coefficients.
pub fn decompose_state(
    state: &ComplexVector,
    family: &MeasurementFamily,
    subset: &[u32],
) -> Result<(Vec<Complex64>, f64)> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if state.dim() != family.d() {
        return Err(Error::DimensionMismatch { expected: family.d(), got: state.dim() });
    }
    let cols: Vec<&ComplexVector> = subset
        .iter()
        .map(|&v| family.vector(v))
        .collect::<Result<_>>()?;
    let m = cols.len();

    // Modified Gram-Schmidt QR with column dropping.
    let mut q: Vec<ComplexVector> = Vec::with_capacity(m);
    let mut r = vec![vec![Complex64::ZERO; m]; m];
    let mut kept = vec![true; m];
    for (j, col) in cols.iter().enumerate() {
        let mut w = (*col).clone();
        for (k, qk) in q.iter().enumerate() {
            if kept[k] {
                let proj = qk.inner(&w);
                r[k][j] = proj;
                w = w.sub(&qk.scaled(proj));
            }
        }
        let norm = w.norm();
        if norm <= 1e-12 * col.norm().max(1.0) {
            kept[j] = false;
            q.push(ComplexVector::zeros(state.dim()));
        } else {
            r[j][j] = Complex64::new(norm, 0.0);
            q.push(w.scaled(Complex64::new(1.0 / norm, 0.0)));
        }
    }

    // Back substitution of R c = Q^dagger state.
    let qdots: Vec<Complex64> = q.iter().map(|qk| qk.inner(state)).collect();
    let mut coeffs = vec![Complex64::ZERO; m];
    for j in (0..m).rev() {
        if !kept[j] {
            continue;
        }
        let mut rhs = qdots[j];
        for k in j + 1..m {
            rhs -= r[j][k] * coeffs[k];
        }
        coeffs[j] = rhs / r[j][j];
    }

    let mut reconstruction = ComplexVector::zeros(state.dim());
    for (c, col) in coeffs.iter().zip(&cols) {
        reconstruction = reconstruction.add(&col.scaled(*c));
    }
    let residual = state.sub(&reconstruction).norm();
    Ok((coeffs, residual))
}
