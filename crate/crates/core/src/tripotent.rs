//! Tripotents and the rank-two spectral calculus of the spin factor.
//!
//! Every element has a singular decomposition `a = s1 v1 + s2 v2` with
//! `s1 >= s2 >= 0` and `v1, v2` algebraically orthogonal minimal tripotents.
//! The singular numbers have the closed form
//! `s1 ± s2 = sqrt(2|a|^2 ± 2|det a|)`; the tripotents are built by rotating
//! `a` so that its determinant is real and non-negative, after which the real
//! and imaginary parts are orthogonal.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerance;
use crate::error::{Result, SpinError};
use crate::linalg::LinearOperator;
use crate::triple::{d_operator, triple_unchecked};
use crate::vector::{SpinVector, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TripotentClass {
    NotTripotent,
    Minimal,
    Maximal,
}

impl TripotentClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::NotTripotent => "not-tripotent",
            Self::Minimal => "minimal",
            Self::Maximal => "maximal",
        }
    }
}

/// `|{u,u,u} - u|`.
pub fn tripotent_residual(u: &SpinVector) -> f64 {
    triple_unchecked(u, u, u).distance(u)
}

/// Classifies `u` by the tripotent identity and then by `|det u|`.
///
/// A tripotent whose determinant is neither within `sqrt(eps)` of 0 nor of 1
/// cannot exist in exact arithmetic, so that case is a structural error.
pub fn classify(u: &SpinVector, tol: Tolerance) -> Result<TripotentClass> {
    if u.is_zero(tol.eps()) || tripotent_residual(u) > tol.eps() {
        return Ok(TripotentClass::NotTripotent);
    }
    let det = u.det().norm();
    let band = tol.sqrt();
    if det <= band {
        Ok(TripotentClass::Minimal)
    } else if (det - 1.0).abs() <= band {
        Ok(TripotentClass::Maximal)
    } else {
        Err(SpinError::Structural(format!(
            "tripotent with |det| = {det} matches neither minimal nor maximal"
        )))
    }
}

fn require(u: &SpinVector, want: TripotentClass, tol: Tolerance) -> Result<()> {
    match classify(u, tol)? {
        c if c == want => Ok(()),
        TripotentClass::NotTripotent => Err(SpinError::NotTripotent(tripotent_residual(u))),
        _ if want == TripotentClass::Minimal => Err(SpinError::NotMinimal),
        _ => Err(SpinError::NotMaximal),
    }
}

/// `(s1, s2)` from `s1 ± s2 = sqrt(2|a|^2 ± 2|det a|)`.
pub fn singular_values(a: &SpinVector) -> (f64, f64) {
    let n2 = a.norm_sqr();
    let det = a.det().norm();
    let sum = (2.0 * n2 + 2.0 * det).sqrt();
    let diff = (2.0 * n2 - 2.0 * det).max(0.0).sqrt();
    (0.5 * (sum + diff), 0.5 * (sum - diff))
}

/// Operator norm `(|a|^2 + |det a|)^½ / √2 + (|a|^2 - |det a|)^½ / √2`.
pub fn operator_norm(a: &SpinVector) -> f64 {
    let n2 = a.norm_sqr();
    let det = a.det().norm();
    FRAC_1_SQRT_2 * ((n2 + det).sqrt() + (n2 - det).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularDecomposition {
    pub s1: f64,
    pub s2: f64,
    pub v1: SpinVector,
    pub v2: SpinVector,
    pub unique: bool,
}

impl SingularDecomposition {
    /// `s1 v1 + s2 v2`.
    pub fn reconstruct(&self) -> SpinVector {
        &self.v1.scale_real(self.s1) + &self.v2.scale_real(self.s2)
    }

    /// `f(s1) v1 + f(s2) v2`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> SpinVector {
        &self.v1.scale_real(f(self.s1)) + &self.v2.scale_real(f(self.s2))
    }
}

/// Lowest-index natural basis vector orthogonalised against the real unit `x`.
fn complement_direction(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    for j in 0..n {
        let mut y: Vec<f64> = x.iter().map(|&xi| -xi * x[j]).collect();
        y[j] += 1.0;
        let norm = y.iter().map(|t| t * t).sum::<f64>().sqrt();
        // at most one coordinate of a unit vector can exceed sqrt(3)/2
        if norm > 0.5 {
            return y.into_iter().map(|t| t / norm).collect();
        }
    }
    unreachable!("a unit vector in dimension >= 2 has a complement direction")
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

fn minimal_from(phase: Complex64, x: &[f64], y: &[f64], sign: f64) -> SpinVector {
    let coords = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| phase * Complex64::new(0.5 * xi, 0.5 * sign * yi))
        .collect();
    SpinVector::new(coords).expect("finite by construction")
}

/// Constructs `a = s1 v1 + s2 v2`.
///
/// * `det a ≈ 0` (relative to `|a|^2`): `v1 = a / (√2 |a|)`, `s2 = 0`,
///   `v2 = conj(v1)`, flagged non-unique.
/// * `a` a multiple of a maximal tripotent: the imaginary direction is the
///   lowest-index basis vector orthogonalised against the real direction,
///   flagged non-unique.
pub fn singular_decomposition(a: &SpinVector, tol: Tolerance) -> Result<SingularDecomposition> {
    let eps = tol.eps();
    let n2 = a.norm_sqr();
    if n2.sqrt() <= eps {
        return Err(SpinError::ZeroVector);
    }
    let det = a.det();
    if det.norm() <= eps * n2 {
        let s1 = std::f64::consts::SQRT_2 * n2.sqrt();
        let v1 = a.scale_real(1.0 / s1);
        let v2 = v1.conjugate();
        return Ok(SingularDecomposition {
            s1,
            s2: 0.0,
            v1,
            v2,
            unique: false,
        });
    }

    let mut theta = 0.5 * det.arg();
    let rotated = a.scale(Complex64::from_polar(1.0, -theta));
    let mut x: Vec<f64> = rotated.coords().iter().map(|z| z.re).collect();
    let mut y: Vec<f64> = rotated.coords().iter().map(|z| z.im).collect();
    // det(x + iy) = |x|^2 - |y|^2 + 2i x.y is real and positive here; guard
    // against rounding flipping the order of |x| and |y|.
    if norm(&y) > norm(&x) {
        theta += std::f64::consts::FRAC_PI_2;
        let nx = y.clone();
        let ny: Vec<f64> = x.iter().map(|t| -t).collect();
        x = nx;
        y = ny;
    }
    let nx = norm(&x);
    let ny = norm(&y);
    let xhat: Vec<f64> = x.iter().map(|t| t / nx).collect();
    let (yhat, degenerate) = if ny <= eps * nx {
        (complement_direction(&xhat), true)
    } else {
        let proj: f64 = y.iter().zip(&xhat).map(|(a, b)| a * b).sum();
        let mut yy: Vec<f64> = y.iter().zip(&xhat).map(|(a, b)| a - proj * b).collect();
        let nyy = norm(&yy);
        yy.iter_mut().for_each(|t| *t /= nyy);
        (yy, false)
    };
    let phase = Complex64::from_polar(1.0, theta);
    let s1 = nx + ny;
    let s2 = nx - ny;
    Ok(SingularDecomposition {
        s1,
        s2,
        v1: minimal_from(phase, &xhat, &yhat, 1.0),
        v2: minimal_from(phase, &xhat, &yhat, -1.0),
        unique: !degenerate && s1 - s2 > eps,
    })
}

/// `f(a) = f(s1) v1 + f(s2) v2`.
///
/// Well defined (independent of the decomposition choice) for odd `f`; other
/// `f` are applied to the computed decomposition as-is.
pub fn apply_odd_function<F: Fn(f64) -> f64>(
    a: &SpinVector,
    f: F,
    tol: Tolerance,
) -> Result<SpinVector> {
    if a.is_zero(tol.eps()) {
        return if tol.is_zero(f(0.0)) {
            Ok(SpinVector::zeros(a.dim()))
        } else {
            Err(SpinError::ZeroVector)
        };
    }
    Ok(singular_decomposition(a, tol)?.map(f))
}

/// `u ⟂ v`, checked both as `D(u,u) v = 0` and as `D(u,v) = 0`.
pub fn is_algebraically_orthogonal(u: &SpinVector, v: &SpinVector, tol: Tolerance) -> Result<bool> {
    u.check_dim(v)?;
    for w in [u, v] {
        if classify(w, tol)? == TripotentClass::NotTripotent {
            return Err(SpinError::NotTripotent(tripotent_residual(w)));
        }
    }
    let by_action = d_operator(u, u)?.apply(v)?.euclid_norm() <= tol.eps();
    let by_operator = d_operator(u, v)?.frobenius_norm() <= tol.eps();
    if by_action != by_operator {
        return Err(SpinError::Structural(
            "D(u,u)v = 0 and D(u,v) = 0 disagree".into(),
        ));
    }
    Ok(by_action)
}

/// Peirce projections of a minimal tripotent `v` onto the 1, ½ and 0
/// eigenspaces of `D(v,v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeirceProjections {
    pub p1: LinearOperator,
    pub p_half: LinearOperator,
    pub p0: LinearOperator,
}

impl PeirceProjections {
    pub fn get(&self, k: PeirceSpace) -> &LinearOperator {
        match k {
            PeirceSpace::One => &self.p1,
            PeirceSpace::Half => &self.p_half,
            PeirceSpace::Zero => &self.p0,
        }
    }
}

/// Index of a Peirce space, stored as twice its eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeirceSpace {
    One,
    Half,
    Zero,
}

impl PeirceSpace {
    pub const ALL: [PeirceSpace; 3] = [PeirceSpace::One, PeirceSpace::Half, PeirceSpace::Zero];

    pub fn twice(self) -> i32 {
        match self {
            Self::One => 2,
            Self::Half => 1,
            Self::Zero => 0,
        }
    }

    pub fn from_twice(k: i32) -> Option<Self> {
        match k {
            2 => Some(Self::One),
            1 => Some(Self::Half),
            0 => Some(Self::Zero),
            _ => None,
        }
    }

    pub fn eigenvalue(self) -> f64 {
        f64::from(self.twice()) / 2.0
    }

    /// Peirce rule: `{S_j, S_k, S_l} ⊂ S_{j-k+l}`, or `None` when the product vanishes.
    pub fn product(j: Self, k: Self, l: Self) -> Option<Self> {
        Self::from_twice(j.twice() - k.twice() + l.twice())
    }
}

/// Orthogonal projection onto the line through `w`.
fn line_projection(w: &SpinVector) -> LinearOperator {
    let n = w.dim();
    let s = 1.0 / w.norm_sqr();
    LinearOperator::from_columns(n, |z| w.scale(z.inner_unchecked(w) * s))
}

pub fn peirce_projections(v: &SpinVector, tol: Tolerance) -> Result<PeirceProjections> {
    require(v, TripotentClass::Minimal, tol)?;
    let p1 = line_projection(v);
    let p0 = line_projection(&v.conjugate());
    let p_half = &(&LinearOperator::identity(v.dim()) - &p1) - &p0;
    Ok(PeirceProjections { p1, p_half, p0 })
}

/// Real and imaginary parts `v = x + iy` of a minimal tripotent.
pub fn decompose_minimal(v: &SpinVector, tol: Tolerance) -> Result<(SpinVector, SpinVector)> {
    require(v, TripotentClass::Minimal, tol)?;
    Ok((v.real_part(), v.imag_part()))
}

/// `u = e^{iθ} r` with `r` real of unit length and `θ ∈ (-π/2, π/2]`.
pub fn maximal_phase(u: &SpinVector, tol: Tolerance) -> Result<(f64, SpinVector)> {
    require(u, TripotentClass::Maximal, tol)?;
    let theta = 0.5 * u.det().arg();
    let r = u.scale(Complex64::from_polar(1.0, -theta)).real_part();
    Ok((theta, r))
}

/// `e^{iθ} v`: the U(1) action.
pub fn phase_rotate(v: &SpinVector, theta: f64) -> SpinVector {
    v.scale((I * theta).exp())
}
