//! Dense complex operators on the spin factor.
//!
//! Linear maps are stored as their matrix `M` (acting as `z -> M z`).
//! Conjugate-linear maps get their own type, stored as the matrix `M` of
//! `z -> M conj(z)`, so that composing two of them stays exact:
//! `(M1 conj)(M2 conj) z = M1 conj(M2) z`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::vector::SpinVector;

/// Row-major JSON form `{"re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        let n = self.re.len();
        if self.im.len() != n {
            return Err(SpinError::Parse("re/im row counts differ".into()));
        }
        let ncols = self.re.first().map_or(0, Vec::len);
        let mut m = DMatrix::zeros(n, ncols);
        for (i, (rr, ri)) in self.re.iter().zip(&self.im).enumerate() {
            if rr.len() != ncols || ri.len() != ncols {
                return Err(SpinError::Parse(format!("ragged row {i}")));
            }
            for j in 0..ncols {
                m[(i, j)] = Complex64::new(rr[j], ri[j]);
            }
        }
        Ok(m)
    }
}

fn validate_square(m: &DMatrix<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(SpinError::InvalidArgument(format!(
            "operator matrix must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if let Some(i) = m
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(SpinError::NonFinite(i));
    }
    Ok(())
}

/// A complex-linear map on the spin factor.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct LinearOperator(DMatrix<Complex64>);

impl LinearOperator {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        validate_square(&m)?;
        Ok(Self(m))
    }

    pub(crate) fn from_matrix(m: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SpinError::InvalidArgument("matrix must be square".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    /// Builds the operator whose `j`-th column is `f(e_j)`.
    pub fn from_columns<F>(n: usize, mut f: F) -> Self
    where
        F: FnMut(&SpinVector) -> SpinVector,
    {
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            let col = f(&SpinVector::basis(n, j));
            m.set_column(j, col.as_dvector());
        }
        Self(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn apply(&self, v: &SpinVector) -> Result<SpinVector> {
        if v.dim() != self.dim() {
            return Err(SpinError::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(SpinVector::from_dvector(&self.0 * v.as_dvector()))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Entry-wise complex conjugate of the matrix.
    pub fn conjugate(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_1(&self) -> f64 {
        (0..self.dim())
            .map(|j| self.0.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry-wise deviation from `other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.dim() == other.dim() && self.max_deviation(other) <= eps
    }

    pub fn is_antisymmetric(&self, eps: f64) -> bool {
        (&self.0 + self.0.transpose())
            .iter()
            .all(|z| z.norm() <= eps)
    }

    /// Matrix exponential by scaling and squaring with a [13/13] Padé approximant.
    pub fn exp(&self) -> Self {
        Self(expm(&self.0))
    }

    /// Reciprocal condition estimate in the 1-norm, zero for exactly singular input.
    pub fn rcond(&self) -> f64 {
        match self.0.clone().try_inverse() {
            Some(inv) => {
                let a = self.norm_1();
                let b = Self(inv).norm_1();
                if a == 0.0 || !b.is_finite() {
                    0.0
                } else {
                    1.0 / (a * b)
                }
            }
            None => 0.0,
        }
    }

    /// Solves `self x = b` with LU and partial pivoting.
    ///
    /// Fails with [`SpinError::Singular`] when the 1-norm condition estimate
    /// exceeds `1/eps`.
    pub fn solve(&self, b: &SpinVector, eps: f64) -> Result<SpinVector> {
        if b.dim() != self.dim() {
            return Err(SpinError::DimensionMismatch {
                expected: self.dim(),
                found: b.dim(),
            });
        }
        if self.rcond() < eps {
            return Err(SpinError::Singular);
        }
        let lu = self.0.clone().lu();
        lu.solve(b.as_dvector())
            .map(SpinVector::from_dvector)
            .ok_or(SpinError::Singular)
    }

    pub fn inverse(&self, eps: f64) -> Result<Self> {
        if self.rcond() < eps {
            return Err(SpinError::Singular);
        }
        self.0
            .clone()
            .try_inverse()
            .map(Self)
            .ok_or(SpinError::Singular)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(&self.0)
    }
}

impl TryFrom<MatrixJson> for LinearOperator {
    type Error = SpinError;

    fn try_from(m: MatrixJson) -> Result<Self> {
        Self::new(m.to_matrix()?)
    }
}

impl From<LinearOperator> for MatrixJson {
    fn from(op: LinearOperator) -> Self {
        op.to_json()
    }
}

impl fmt::Debug for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOperator{}", self.0)
    }
}

impl Add for &LinearOperator {
    type Output = LinearOperator;

    fn add(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &LinearOperator {
    type Output = LinearOperator;

    fn sub(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 - &rhs.0)
    }
}

impl Add for LinearOperator {
    type Output = LinearOperator;

    fn add(self, rhs: LinearOperator) -> LinearOperator {
        LinearOperator(self.0 + rhs.0)
    }
}

impl Sub for LinearOperator {
    type Output = LinearOperator;

    fn sub(self, rhs: LinearOperator) -> LinearOperator {
        LinearOperator(self.0 - rhs.0)
    }
}

impl Neg for &LinearOperator {
    type Output = LinearOperator;

    fn neg(self) -> LinearOperator {
        LinearOperator(-&self.0)
    }
}

impl Mul for &LinearOperator {
    type Output = LinearOperator;

    fn mul(self, rhs: &LinearOperator) -> LinearOperator {
        self.compose(rhs)
    }
}

impl Mul<&LinearOperator> for Complex64 {
    type Output = LinearOperator;

    fn mul(self, rhs: &LinearOperator) -> LinearOperator {
        rhs.scale(self)
    }
}

impl Mul<&LinearOperator> for f64 {
    type Output = LinearOperator;

    fn mul(self, rhs: &LinearOperator) -> LinearOperator {
        rhs.scale_real(self)
    }
}

/// A conjugate-linear map `z -> M conj(z)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ConjugateLinearOperator(DMatrix<Complex64>);

impl ConjugateLinearOperator {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        validate_square(&m)?;
        Ok(Self(m))
    }

    pub(crate) fn from_matrix(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn apply(&self, v: &SpinVector) -> Result<SpinVector> {
        if v.dim() != self.dim() {
            return Err(SpinError::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let conj: DVector<Complex64> = v.as_dvector().map(|z| z.conj());
        Ok(SpinVector::from_dvector(&self.0 * conj))
    }

    /// `self ∘ other`, which is complex-linear with matrix `M1 conj(M2)`.
    pub fn compose(&self, other: &Self) -> LinearOperator {
        LinearOperator(&self.0 * other.0.map(|z| z.conj()))
    }

    /// `self ∘ L`: conjugate-linear with matrix `M conj(L)`.
    pub fn compose_linear(&self, l: &LinearOperator) -> Self {
        Self(&self.0 * l.0.map(|z| z.conj()))
    }

    /// `L ∘ self`: conjugate-linear with matrix `L M`.
    pub fn after_linear(&self, l: &LinearOperator) -> Self {
        Self(&l.0 * &self.0)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(&self.0)
    }
}

impl TryFrom<MatrixJson> for ConjugateLinearOperator {
    type Error = SpinError;

    fn try_from(m: MatrixJson) -> Result<Self> {
        Self::new(m.to_matrix()?)
    }
}

impl From<ConjugateLinearOperator> for MatrixJson {
    fn from(op: ConjugateLinearOperator) -> Self {
        op.to_json()
    }
}

impl fmt::Debug for ConjugateLinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConjugateLinearOperator{}", self.0)
    }
}

// [13/13] Padé coefficients and the scaling threshold for double precision.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn norm_1(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(m: &DMatrix<Complex64>, s: f64) -> DMatrix<Complex64> {
    m.map(|z| z * s)
}

/// `exp(A)` for a dense complex square matrix.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = norm_1(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = scaled(a, 0.5f64.powi(squarings));

    let b = &PADE13;
    let ident = DMatrix::<Complex64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u_tail = scaled(&a6, b[7]) + scaled(&a4, b[5]) + scaled(&a2, b[3]) + scaled(&ident, b[1]);
    let u = &a * (&a6 * u_inner + u_tail);

    let v_inner = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * v_inner
        + scaled(&a6, b[6])
        + scaled(&a4, b[4])
        + scaled(&a2, b[2])
        + scaled(&ident, b[0]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular after scaling");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Eigenvalues of a Hermitian matrix, ascending.
/// Largest entry modulus of a complex matrix or vector.
pub fn max_entry<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<Complex64, R, C>>(
    m: &nalgebra::Matrix<Complex64, R, C, S>,
) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    match m.clone().try_schur(1e-15, 10_000) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            (0..t.nrows()).map(|i| t[(i, i)]).collect()
        }
        None => Vec::new(),
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::{c, I, ZERO};

    /// Truncated Taylor series with enough terms for small-norm input; an
    /// independent route to `exp(A)`.
    fn taylor_exp(a: &DMatrix<Complex64>, terms: usize) -> DMatrix<Complex64> {
        let n = a.nrows();
        let mut sum = DMatrix::<Complex64>::identity(n, n);
        let mut term = DMatrix::<Complex64>::identity(n, n);
        for k in 1..terms {
            term = &term * a / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn expm_matches_taylor_series() {
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.1, 0.2),
                c(-0.3, 0.0),
                c(0.05, -0.1),
                c(0.4, 0.1),
                c(0.0, 0.0),
                c(0.2, 0.3),
                c(-0.1, 0.0),
                c(0.3, -0.2),
                c(-0.2, 0.1),
            ],
        );
        assert!(max_dev(&expm(&a), &taylor_exp(&a, 40)) < 1e-14);
    }

    #[test]
    fn expm_of_large_rotation_uses_squaring() {
        // exp(t [[0,1],[-1,0]]) = [[cos t, sin t], [-sin t, cos t]]
        let t = 37.5_f64;
        let a = DMatrix::from_row_slice(2, 2, &[ZERO, c(t, 0.0), c(-t, 0.0), ZERO]);
        let want = DMatrix::from_row_slice(
            2,
            2,
            &[
                c(t.cos(), 0.0),
                c(t.sin(), 0.0),
                c(-t.sin(), 0.0),
                c(t.cos(), 0.0),
            ],
        );
        assert!(max_dev(&expm(&a), &want) < 1e-12);
    }

    #[test]
    fn expm_of_phase_generator() {
        let a = DMatrix::from_diagonal_element(3, 3, -I * 0.8);
        let want = DMatrix::from_diagonal_element(3, 3, (-I * 0.8).exp());
        assert!(max_dev(&expm(&a), &want) < 1e-15);
    }

    #[test]
    fn conjugate_linear_composition_is_linear() {
        let m1 = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 1.0), c(0.0, 2.0), c(-1.0, 0.0), c(0.5, -0.5)],
        );
        let m2 =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(2.0, -1.0), c(0.0, 0.0)]);
        let a = ConjugateLinearOperator::new(m1).unwrap();
        let b = ConjugateLinearOperator::new(m2).unwrap();
        let z = SpinVector::new(vec![c(0.3, -0.7), c(1.1, 0.4)]).unwrap();
        let direct = a.apply(&b.apply(&z).unwrap()).unwrap();
        let composed = a.compose(&b).apply(&z).unwrap();
        assert!(direct.distance(&composed) < 1e-15);
    }

    #[test]
    fn solve_and_singular_detection() {
        let op = LinearOperator::from_real(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        let b = SpinVector::from_real(&[3.0, 5.0]).unwrap();
        let x = op.solve(&b, 1e-9).unwrap();
        assert!(op.apply(&x).unwrap().distance(&b) < 1e-14);
        let sing = LinearOperator::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(sing.solve(&b, 1e-9).unwrap_err(), SpinError::Singular);
    }

    #[test]
    fn operator_json_schema() {
        let op = LinearOperator::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0), c(0.0, -1.0)],
        ))
        .unwrap();
        let s = serde_json::to_string(&op).unwrap();
        assert_eq!(
            s,
            r#"{"re":[[1.0,0.0],[3.0,0.0]],"im":[[0.0,2.0],[0.0,-1.0]]}"#
        );
        let back: LinearOperator = serde_json::from_str(&s).unwrap();
        assert_eq!(back, op);
        assert!(serde_json::from_str::<LinearOperator>(r#"{"re":[[1,2]],"im":[[0,0]]}"#).is_err());
    }
}
