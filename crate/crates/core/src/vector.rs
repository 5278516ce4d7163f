//! Complex vectors of the spin factor and the scalar structure on them:
//! inner product, coordinate-wise conjugation, determinant and Euclidean norm.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_MAX_DIM;
use crate::error::{Result, SpinError};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// An element of the spin factor: `n >= 2` finite complex coordinates.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorJson", into = "VectorJson")]
pub struct SpinVector(DVector<Complex64>);

/// Canonical text form `{"re": [...], "im": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl SpinVector {
    /// Validates dimension (2 to the default cap) and finiteness.
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        Self::with_max_dim(coords, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(coords: Vec<Complex64>, max_dim: usize) -> Result<Self> {
        let n = coords.len();
        if n < 2 || n > max_dim {
            return Err(SpinError::InvalidDimension(n, max_dim));
        }
        if let Some(i) = coords
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(SpinError::NonFinite(i));
        }
        Ok(Self(DVector::from_vec(coords)))
    }

    pub fn from_real(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(SpinError::DimensionMismatch {
                expected: re.len(),
                found: im.len(),
            });
        }
        Self::new(
            re.iter()
                .zip(im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 2, "spin factor dimension must be at least 2");
        Self(DVector::zeros(n))
    }

    /// Natural basis vector `e_j` (zero-based index).
    pub fn basis(n: usize, j: usize) -> Self {
        assert!(j < n, "basis index {j} out of range for dimension {n}");
        let mut v = Self::zeros(n);
        v.0[j] = ONE;
        v
    }

    /// Wraps an already-validated column. Callers guarantee `len >= 2`.
    pub(crate) fn from_dvector(v: DVector<Complex64>) -> Self {
        debug_assert!(v.len() >= 2);
        Self(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn as_dvector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn coords(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(SpinError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    /// `<a|b> = sum a_i conj(b_i)`; linear in `self`, conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_dim(other)?;
        Ok(self.inner_unchecked(other))
    }

    #[inline]
    pub(crate) fn inner_unchecked(&self, other: &Self) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    /// `det a = <a|conj a> = sum a_i^2`.
    pub fn det(&self) -> Complex64 {
        self.0.iter().map(|z| z * z).sum()
    }

    /// Squared Euclidean norm `|a|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn euclid_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Coordinate-wise real part, as a real element of the spin factor.
    pub fn real_part(&self) -> Self {
        Self(self.0.map(|z| Complex64::new(z.re, 0.0)))
    }

    pub fn imag_part(&self) -> Self {
        Self(self.0.map(|z| Complex64::new(z.im, 0.0)))
    }

    /// True when every imaginary component is within `eps` of zero.
    pub fn is_real(&self, eps: f64) -> bool {
        self.0.iter().all(|z| z.im.abs() <= eps)
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.euclid_norm() <= eps
    }

    /// Euclidean distance `|a - b|`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_json(&self) -> VectorJson {
        VectorJson {
            re: self.0.iter().map(|z| z.re).collect(),
            im: self.0.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<VectorJson> for SpinVector {
    type Error = SpinError;

    fn try_from(v: VectorJson) -> Result<Self> {
        Self::from_parts(&v.re, &v.im)
    }
}

impl From<SpinVector> for VectorJson {
    fn from(v: SpinVector) -> Self {
        v.to_json()
    }
}

impl fmt::Debug for SpinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Index<usize> for SpinVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for &SpinVector {
    type Output = SpinVector;

    fn add(self, rhs: &SpinVector) -> SpinVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in addition");
        SpinVector(&self.0 + &rhs.0)
    }
}

impl Sub for &SpinVector {
    type Output = SpinVector;

    fn sub(self, rhs: &SpinVector) -> SpinVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in subtraction");
        SpinVector(&self.0 - &rhs.0)
    }
}

impl Add for SpinVector {
    type Output = SpinVector;

    fn add(self, rhs: SpinVector) -> SpinVector {
        &self + &rhs
    }
}

impl Sub for SpinVector {
    type Output = SpinVector;

    fn sub(self, rhs: SpinVector) -> SpinVector {
        &self - &rhs
    }
}

impl Neg for &SpinVector {
    type Output = SpinVector;

    fn neg(self) -> SpinVector {
        SpinVector(-&self.0)
    }
}

impl Neg for SpinVector {
    type Output = SpinVector;

    fn neg(self) -> SpinVector {
        -&self
    }
}

impl Mul<&SpinVector> for Complex64 {
    type Output = SpinVector;

    fn mul(self, rhs: &SpinVector) -> SpinVector {
        rhs.scale(self)
    }
}

impl Mul<&SpinVector> for f64 {
    type Output = SpinVector;

    fn mul(self, rhs: &SpinVector) -> SpinVector {
        rhs.scale_real(self)
    }
}

/// Shorthand for `Complex64::new(re, im)`.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, j: usize) -> SpinVector {
        SpinVector::basis(n, j)
    }

    #[test]
    fn basis_is_orthonormal() {
        assert_eq!(e(3, 0).inner(&e(3, 0)).unwrap(), ONE);
        assert_eq!(e(3, 0).inner(&e(3, 1)).unwrap(), ZERO);
    }

    #[test]
    fn inner_of_one_i_and_i_one_vanishes() {
        let a = SpinVector::new(vec![ONE, I]).unwrap();
        let b = SpinVector::new(vec![I, ONE]).unwrap();
        assert_eq!(a.inner(&b).unwrap(), ZERO);
    }

    #[test]
    fn inner_rejects_mismatched_dims() {
        let err = e(3, 0).inner(&e(4, 0)).unwrap_err();
        assert_eq!(
            err,
            SpinError::DimensionMismatch {
                expected: 3,
                found: 4
            }
        );
    }

    #[test]
    fn conjugation() {
        let a = SpinVector::new(vec![ONE, I, ZERO]).unwrap();
        assert_eq!(a.conjugate().coords(), &[ONE, -I, ZERO]);
        let r = SpinVector::from_real(&[1.0, -2.0, 0.5]).unwrap();
        assert_eq!(r.conjugate(), r);
        let v = SpinVector::new(vec![c(0.5, 0.0), c(0.0, 0.5), ZERO, ZERO]).unwrap();
        assert_eq!(
            v.conjugate().coords(),
            &[c(0.5, 0.0), c(0.0, -0.5), ZERO, ZERO]
        );
    }

    #[test]
    fn determinant_values() {
        assert_eq!(e(3, 0).det(), ONE);
        let v = SpinVector::new(vec![c(0.5, 0.0), c(0.0, 0.5), ZERO]).unwrap();
        assert_eq!(v.det(), ZERO);
        let a = SpinVector::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(a.det(), c(30.0, 0.0));
    }

    #[test]
    fn euclidean_norms() {
        assert_eq!(e(4, 2).euclid_norm(), 1.0);
        let v = SpinVector::new(vec![c(0.5, 0.0), c(0.0, 0.5), ZERO, ZERO]).unwrap();
        assert!((v.euclid_norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let a = SpinVector::new(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(a.euclid_norm(), 5.0);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            SpinVector::new(vec![ONE]).unwrap_err(),
            SpinError::InvalidDimension(1, DEFAULT_MAX_DIM)
        );
        assert_eq!(
            SpinVector::new(vec![ONE, c(f64::NAN, 0.0)]).unwrap_err(),
            SpinError::NonFinite(1)
        );
        assert_eq!(
            SpinVector::new(vec![c(0.0, f64::INFINITY), ONE]).unwrap_err(),
            SpinError::NonFinite(0)
        );
        assert!(SpinVector::with_max_dim(vec![ONE; 5], 4).is_err());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let a = SpinVector::new(vec![c(1.0, -0.5), c(0.0, 2.0)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"re":[1.0,0.0],"im":[-0.5,2.0]}"#);
        let back: SpinVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<SpinVector>(r#"{"re":[1,2],"im":[0]}"#).is_err());
    }
}
