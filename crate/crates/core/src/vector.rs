//! Complex amplitude vectors and the amplitude-reversal (flip) operator.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A vector of complex amplitudes in a fixed computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    components: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(components: Vec<Complex64>) -> Self {
        Self { components }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::ZERO; dim])
    }

    /// The basis state with a single unit amplitude at `index`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.components[index] = Complex64::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn component(&self, index: usize) -> Complex64 {
        self.components[index]
    }

    pub fn set_component(&mut self, index: usize, value: Complex64) {
        self.components[index] = value;
    }

    /// Inner product conjugate-linear in `self`: sum of conj(self_k) * other_k.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Magnitude of the inner product with `other`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.components.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "addition dimension mismatch");
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "subtraction dimension mismatch");
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Amplitudes in reverse order: index k maps to d-1-k.
    pub fn reversed(&self) -> Self {
        let mut components = self.components.clone();
        components.reverse();
        Self::new(components)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// The linear involution that reverses the amplitude list.
///
/// Applying it twice is the identity; it maps basis state k to basis state d-1-k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipOperator {
    dim: usize,
}

impl FlipOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        Ok(v.reversed())
    }
}

/// Builds the amplitude-reversal operator in dimension `dim`.
pub fn flip_operator(dim: usize) -> Result<FlipOperator> {
    if dim < 1 {
        return Err(Error::DimensionTooSmall { min: 1, got: dim });
    }
    Ok(FlipOperator { dim })
}
