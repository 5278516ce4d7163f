//! The geometric tri-product
//!
//! ```text
//! {a, b, c} = <a|b> c + <c|b> a - <a|conj c> conj b
//! ```
//!
//! and the operators built from it: `D(a,b) = {a, b, .}`, the bivector part
//! `a ∧ b = D(a,b) - <a|b> I`, the conjugate-linear `Q(a) = {a, ., a}`, the
//! Bergman operator, triple automorphisms and plane rotations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis;
use crate::config::Tolerance;
use crate::error::{Result, SpinError};
use crate::linalg::{ConjugateLinearOperator, LinearOperator};
use crate::rng::SpinRng;
use crate::vector::SpinVector;

pub fn triple_product(a: &SpinVector, b: &SpinVector, c: &SpinVector) -> Result<SpinVector> {
    a.check_dim(b)?;
    a.check_dim(c)?;
    Ok(triple_unchecked(a, b, c))
}

pub(crate) fn triple_unchecked(a: &SpinVector, b: &SpinVector, c: &SpinVector) -> SpinVector {
    let ab = a.inner_unchecked(b);
    let cb = c.inner_unchecked(b);
    // <a|conj c> = sum a_i c_i
    let ac: Complex64 = a.coords().iter().zip(c.coords()).map(|(x, y)| x * y).sum();
    SpinVector::from_dvector(DVector::from_fn(a.dim(), |i, _| {
        ab * c[i] + cb * a[i] - ac * b[i].conj()
    }))
}

/// Matrix of `z -> {a, b, z}`: `<a|b> I + a b* - conj(b) a^T`.
pub fn d_operator(a: &SpinVector, b: &SpinVector) -> Result<LinearOperator> {
    a.check_dim(b)?;
    let ab = a.inner_unchecked(b);
    let n = a.dim();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { ab } else { Complex64::new(0.0, 0.0) };
        diag + a[i] * b[j].conj() - b[i].conj() * a[j]
    });
    Ok(LinearOperator::from_matrix(m))
}

/// Bivector part of `D(a,b)`: `z -> <z|b> a - <a|conj z> conj b`.
pub fn wedge(a: &SpinVector, b: &SpinVector) -> Result<LinearOperator> {
    a.check_dim(b)?;
    let n = a.dim();
    let m = DMatrix::from_fn(n, n, |i, j| a[i] * b[j].conj() - b[i].conj() * a[j]);
    Ok(LinearOperator::from_matrix(m))
}

/// `Q(a) z = {a, z, a} = 2 <a|z> a - det(a) conj z`, stored as the matrix
/// `2 a a^T - det(a) I` applied after conjugation.
pub fn q_operator(a: &SpinVector) -> ConjugateLinearOperator {
    let n = a.dim();
    let det = a.det();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j {
            det
        } else {
            Complex64::new(0.0, 0.0)
        };
        2.0 * a[i] * a[j] - diag
    });
    ConjugateLinearOperator::from_matrix(m)
}

/// `B(a,b) = I - 2 D(a,b) + Q(a) Q(b)`.
pub fn bergman(a: &SpinVector, b: &SpinVector) -> Result<LinearOperator> {
    let d = d_operator(a, b)?;
    let qq = q_operator(a).compose(&q_operator(b));
    Ok(&(&LinearOperator::identity(a.dim()) - &d.scale_real(2.0)) + &qq)
}

/// `λ U` for unimodular `λ` and real orthogonal `U`.
pub fn make_automorphism(
    lambda: Complex64,
    u: &DMatrix<f64>,
    tol: Tolerance,
) -> Result<LinearOperator> {
    if !tol.close(lambda.norm(), 1.0) {
        return Err(SpinError::InvalidArgument(format!(
            "|lambda| = {} is not 1",
            lambda.norm()
        )));
    }
    let n = u.nrows();
    if n != u.ncols() || n < 2 {
        return Err(SpinError::InvalidArgument(
            "U must be square with n >= 2".into(),
        ));
    }
    let gram = u.transpose() * u - DMatrix::<f64>::identity(n, n);
    if gram.iter().any(|x| x.abs() > tol.eps()) {
        return Err(SpinError::InvalidArgument("U is not orthogonal".into()));
    }
    LinearOperator::new(u.map(|x| lambda * x))
}

/// Probabilistic check of `T{a,b,c} = {Ta, Tb, Tc}` on `trials` seeded random
/// triples of unit vectors. Residuals are compared relative to `max(1, |T|^3)`.
pub fn is_triple_automorphism(
    t: &LinearOperator,
    trials: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<bool> {
    let n = t.dim();
    if t.rcond() < tol.eps() {
        return Err(SpinError::Singular);
    }
    let scale = t.norm_1().powi(3).max(1.0);
    let mut rng = SpinRng::seeded(seed);
    for _ in 0..trials {
        let a = rng.unit_vector(n);
        let b = rng.unit_vector(n);
        let c = rng.unit_vector(n);
        let lhs = t.apply(&triple_unchecked(&a, &b, &c))?;
        let rhs = triple_unchecked(&t.apply(&a)?, &t.apply(&b)?, &t.apply(&c)?);
        if lhs.distance(&rhs) > tol.eps() * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `exp(θ D(u_l, u_k))`: rotation by `-θ` in `span_R{u_l, u_k}`.
///
/// The pair must satisfy the triple canonical anticommutation relations.
pub fn rotate_in_plane(
    u_l: &SpinVector,
    u_k: &SpinVector,
    theta: f64,
    tol: Tolerance,
) -> Result<LinearOperator> {
    u_l.check_dim(u_k)?;
    if let Some(v) = basis::tcar_violation(&[u_l.clone(), u_k.clone()], tol) {
        return Err(SpinError::InvalidArgument(format!(
            "vectors are not a TCAR pair: {v}"
        )));
    }
    Ok(d_operator(u_l, u_k)?.scale_real(theta).exp())
}
