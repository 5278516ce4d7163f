//! Lorentz Lie algebra representations on the four-dimensional spin factor.
//!
//! `D_jk` is `D(u_j, u_k)` over the natural basis. The spin-1 representation
//! sends `J_k` to rotations `D_23, D_31, D_12` and `K_k` to `i D_0k`; the two
//! spin-1/2 representations are its self-dual and anti-self-dual parts.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{Antisymmetric4, Matrix2};
use crate::config::Tolerance;
use crate::error::{Result, SpinError};
use crate::linalg::{max_entry, LinearOperator};
use crate::triple::d_operator;
use crate::vector::{SpinVector, I, ZERO};

pub const DEFAULT_LIGHT_SPEED: f64 = 1.0;

/// Sign `σ₊` with `*π⁺(g) = σ₊ π⁺(g)` under [`hodge_star`].
pub const HODGE_PLUS_SIGN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LorentzGenerator {
    J1,
    J2,
    J3,
    K1,
    K2,
    K3,
}

impl LorentzGenerator {
    pub const ALL: [Self; 6] = [Self::J1, Self::J2, Self::J3, Self::K1, Self::K2, Self::K3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["J1", "J2", "J3", "K1", "K2", "K3"][self.index()]
    }

    pub fn is_boost(self) -> bool {
        self.index() >= 3
    }

    /// Spatial axis 1..=3.
    pub fn axis(self) -> usize {
        self.index() % 3 + 1
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepTag {
    Spin1,
    Plus,
    Minus,
}

impl RepTag {
    pub const ALL: [Self; 3] = [Self::Spin1, Self::Plus, Self::Minus];

    pub fn name(self) -> &'static str {
        match self {
            Self::Spin1 => "spin1",
            Self::Plus => "plus",
            Self::Minus => "minus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
    }
}

fn d_jk(j: usize, k: usize) -> LinearOperator {
    d_operator(&SpinVector::basis(4, j), &SpinVector::basis(4, k)).expect("same dimension")
}

fn build_table() -> [[LinearOperator; 6]; 3] {
    let rot = [d_jk(2, 3), d_jk(3, 1), d_jk(1, 2)];
    let boost = [d_jk(0, 1), d_jk(0, 2), d_jk(0, 3)];
    let spin1 = std::array::from_fn(|i| {
        if i < 3 {
            rot[i].clone()
        } else {
            boost[i - 3].scale(I)
        }
    });
    let plus_j: [LinearOperator; 3] =
        std::array::from_fn(|k| (&boost[k] + &rot[k]).scale_real(0.5));
    let minus_j: [LinearOperator; 3] =
        std::array::from_fn(|k| (&rot[k] - &boost[k]).scale_real(0.5));
    let with_boosts = |j: &[LinearOperator; 3]| {
        std::array::from_fn(|i| {
            if i < 3 {
                j[i].clone()
            } else {
                j[i - 3].scale(I)
            }
        })
    };
    [spin1, with_boosts(&plus_j), with_boosts(&minus_j)]
}

fn table() -> &'static [[LinearOperator; 6]; 3] {
    static TABLE: OnceLock<[[LinearOperator; 6]; 3]> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

pub fn generator(rep: RepTag, g: LorentzGenerator) -> LinearOperator {
    let r = match rep {
        RepTag::Spin1 => 0,
        RepTag::Plus => 1,
        RepTag::Minus => 2,
    };
    table()[r][g.index()].clone()
}

/// `exp(φ · generator(rep, g))`.
pub fn exp_generator(rep: RepTag, g: LorentzGenerator, phi: f64) -> LinearOperator {
    generator(rep, g).scale_real(phi).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FourVectorRole {
    Spacetime,
    Momentum,
}

/// Real four-vector: an event `(t, x, y, z)` or a momentum `(p0, p1, p2, p3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FourVectorJson", into = "FourVectorJson")]
pub struct FourVector {
    pub role: FourVectorRole,
    pub components: [f64; 4],
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum FourVectorJson {
    Spacetime { t: f64, x: f64, y: f64, z: f64 },
    Momentum { p0: f64, p1: f64, p2: f64, p3: f64 },
}

impl TryFrom<FourVectorJson> for FourVector {
    type Error = SpinError;

    fn try_from(j: FourVectorJson) -> Result<Self> {
        match j {
            FourVectorJson::Spacetime { t, x, y, z } => Self::spacetime(t, x, y, z),
            FourVectorJson::Momentum { p0, p1, p2, p3 } => Self::momentum(p0, p1, p2, p3),
        }
    }
}

impl From<FourVector> for FourVectorJson {
    fn from(v: FourVector) -> Self {
        let [a, b, c, d] = v.components;
        match v.role {
            FourVectorRole::Spacetime => Self::Spacetime {
                t: a,
                x: b,
                y: c,
                z: d,
            },
            FourVectorRole::Momentum => Self::Momentum {
                p0: a,
                p1: b,
                p2: c,
                p3: d,
            },
        }
    }
}

impl FourVector {
    fn build(role: FourVectorRole, components: [f64; 4]) -> Result<Self> {
        if let Some(i) = components.iter().position(|x| !x.is_finite()) {
            return Err(SpinError::NonFinite(i));
        }
        Ok(Self { role, components })
    }

    pub fn spacetime(t: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        Self::build(FourVectorRole::Spacetime, [t, x, y, z])
    }

    pub fn momentum(p0: f64, p1: f64, p2: f64, p3: f64) -> Result<Self> {
        Self::build(FourVectorRole::Momentum, [p0, p1, p2, p3])
    }

    fn expect_role(&self, role: FourVectorRole) -> Result<()> {
        if self.role == role {
            Ok(())
        } else {
            Err(SpinError::InvalidArgument(format!(
                "expected a {role:?} four-vector, got {:?}",
                self.role
            )))
        }
    }
}

fn check_light_speed(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(SpinError::InvalidArgument(format!(
            "light speed must be positive and finite, got {c}"
        )))
    }
}

fn psi(e: [f64; 4], c: f64) -> SpinVector {
    let [t, x, y, z] = e;
    SpinVector::from_dvector(DVector::from_vec(vec![
        Complex64::new(c * t, 0.0),
        Complex64::new(0.0, -x),
        Complex64::new(0.0, -y),
        Complex64::new(0.0, -z),
    ]))
}

fn psi_tilde(p: [f64; 4]) -> SpinVector {
    SpinVector::from_dvector(DVector::from_vec(vec![
        Complex64::new(0.0, p[0]),
        Complex64::new(p[1], 0.0),
        Complex64::new(p[2], 0.0),
        Complex64::new(p[3], 0.0),
    ]))
}

/// `ct u0 - ix u1 - iy u2 - iz u3`; its determinant is the interval `(ct)^2 - |x|^2`.
pub fn spacetime_embed(fv: &FourVector, c: f64) -> Result<SpinVector> {
    fv.expect_role(FourVectorRole::Spacetime)?;
    check_light_speed(c)?;
    Ok(psi(fv.components, c))
}

/// `i p0 u0 + p1 u1 + p2 u2 + p3 u3`; determinant `-p0^2 + |p|^2`.
pub fn momentum_embed(fv: &FourVector) -> Result<SpinVector> {
    fv.expect_role(FourVectorRole::Momentum)?;
    Ok(psi_tilde(fv.components))
}

/// Inverse of the space-time embedding on `M1`; errors off `M1`.
fn psi_inverse(w: &SpinVector, c: f64, eps: f64) -> Result<[f64; 4]> {
    let z = w.coords();
    let off = z[0]
        .im
        .abs()
        .max(z[1].re.abs())
        .max(z[2].re.abs())
        .max(z[3].re.abs());
    if off > eps {
        return Err(SpinError::NotInvariant(off));
    }
    Ok([z[0].re / c, -z[1].im, -z[2].im, -z[3].im])
}

fn psi_tilde_inverse(w: &SpinVector, eps: f64) -> Result<[f64; 4]> {
    let z = w.coords();
    let off = z[0]
        .re
        .abs()
        .max(z[1].im.abs())
        .max(z[2].im.abs())
        .max(z[3].im.abs());
    if off > eps {
        return Err(SpinError::NotInvariant(off));
    }
    Ok([z[0].im, z[1].re, z[2].re, z[3].re])
}

/// `Λ = Ψ⁻¹ T Ψ` as a real matrix acting on `(t, x, y, z)`.
pub fn induced_spacetime_transform(
    t: &LinearOperator,
    c: f64,
    tol: Tolerance,
) -> Result<DMatrix<f64>> {
    check_light_speed(c)?;
    check_four(t)?;
    let scale = t.max_abs().max(1.0);
    let mut out = DMatrix::zeros(4, 4);
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let img = t.apply(&psi(e, c))?;
        let col = psi_inverse(&img, c, tol.eps() * scale * c.max(1.0))?;
        for (i, x) in col.into_iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    Ok(out)
}

/// `Ψ̃⁻¹ T Ψ̃` as a real matrix acting on `(p0, p1, p2, p3)`.
pub fn induced_momentum_transform(t: &LinearOperator, tol: Tolerance) -> Result<DMatrix<f64>> {
    check_four(t)?;
    let scale = t.max_abs().max(1.0);
    let mut out = DMatrix::zeros(4, 4);
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let img = t.apply(&psi_tilde(e))?;
        let col = psi_tilde_inverse(&img, tol.eps() * scale)?;
        for (i, x) in col.into_iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    Ok(out)
}

fn check_four(t: &LinearOperator) -> Result<()> {
    if t.dim() == 4 {
        Ok(())
    } else {
        Err(SpinError::DimensionMismatch {
            expected: 4,
            found: t.dim(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSpaceModel {
    /// Event and `(E/c, p)`, scaled by a constant turning momentum into length.
    SpaceMomentum,
    /// Event and `(γ, γv/c)`, scaled by a constant turning velocity into length.
    SpaceVelocity,
}

/// `(ct + iκ q0) u0 + Σ (κ q_k - i x_k) u_k`, where `q` is `(E/c, p)` or
/// `(γ, γv/c)` according to `model` and `κ` is the model's constant.
pub fn phase_space_embed(
    _model: PhaseSpaceModel,
    event: &FourVector,
    q: [f64; 4],
    constant: f64,
    c: f64,
) -> Result<SpinVector> {
    event.expect_role(FourVectorRole::Spacetime)?;
    check_light_speed(c)?;
    if !(constant.is_finite() && constant > 0.0) {
        return Err(SpinError::InvalidArgument(format!(
            "phase-space constant must be positive, got {constant}"
        )));
    }
    if let Some(i) = q.iter().position(|x| !x.is_finite()) {
        return Err(SpinError::NonFinite(i));
    }
    let x = psi(event.components, c);
    let p = psi_tilde(q).scale_real(constant);
    Ok(&x + &p)
}

/// Field tensor from `E` and `B`: `E_k K_k + c B_k J_k` on momentum space,
/// with the time index lowered so the result is antisymmetric.
pub fn em_tensor(e: [f64; 3], b: [f64; 3], c: f64) -> Result<LinearOperator> {
    check_light_speed(c)?;
    let tol = Tolerance::default();
    let mut m = DMatrix::<f64>::zeros(4, 4);
    for k in 0..3 {
        let boost = LorentzGenerator::ALL[k + 3];
        let rot = LorentzGenerator::ALL[k];
        m += induced_momentum_transform(&generator(RepTag::Spin1, boost), tol)? * e[k];
        m += induced_momentum_transform(&generator(RepTag::Spin1, rot), tol)? * (c * b[k]);
    }
    let eta = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
    Ok(LinearOperator::from_matrix(
        (m * eta).map(|x| Complex64::new(x, 0.0)),
    ))
}

/// `Σ i F_k π⁺(J_k)` for the Faraday vector `F = E + icB`.
pub fn faraday_form(f: [Complex64; 3]) -> LinearOperator {
    let mut out = LinearOperator::zeros(4);
    for (k, fk) in f.iter().enumerate() {
        out = &out + &generator(RepTag::Plus, LorentzGenerator::ALL[k]).scale(I * fk);
    }
    out
}

fn levi_civita(p: [usize; 4]) -> f64 {
    let mut sign = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn require_antisymmetric(a: &LinearOperator, tol: Tolerance) -> Result<()> {
    check_four(a)?;
    let asym = (a + &a.transpose()).max_abs();
    if asym > tol.eps() {
        return Err(SpinError::Structural(format!(
            "operator is not antisymmetric: |A + A^T| = {asym:e}"
        )));
    }
    Ok(())
}

/// `(*A)_ij = ½ Σ ε_ijkl A_kl`.
pub fn hodge_star(a: &LinearOperator, tol: Tolerance) -> Result<LinearOperator> {
    require_antisymmetric(a, tol)?;
    let m = a.matrix();
    let h = DMatrix::from_fn(4, 4, |i, j| {
        let mut s = ZERO;
        for k in 0..4 {
            for l in 0..4 {
                s += m[(k, l)] * levi_civita([i, j, k, l]);
            }
        }
        s * 0.5
    });
    Ok(LinearOperator::from_matrix(h))
}

/// `T = plus + minus` with `*plus = σ₊ plus` and `*minus = -σ₊ minus`.
pub fn dual_split(t: &LinearOperator, tol: Tolerance) -> Result<(LinearOperator, LinearOperator)> {
    let star = hodge_star(t, tol)?.scale_real(HODGE_PLUS_SIGN);
    Ok(((t + &star).scale_real(0.5), (t - &star).scale_real(0.5)))
}

/// `Φ(Λ) T = Λ T Λ⁻¹`.
pub fn lift(lambda: &LinearOperator, t: &LinearOperator, tol: Tolerance) -> Result<LinearOperator> {
    if lambda.dim() != t.dim() {
        return Err(SpinError::DimensionMismatch {
            expected: lambda.dim(),
            found: t.dim(),
        });
    }
    let inv = lambda.inverse(tol.eps())?;
    Ok(lambda.compose(t).compose(&inv))
}

/// `{2π⁺(J_k)} ∪ {2π⁻(K_k)}`, a TCAR basis of the antisymmetric 4×4 matrices.
pub fn lifted_tcar_basis() -> [LinearOperator; 6] {
    std::array::from_fn(|i| {
        let (rep, g) = if i < 3 {
            (RepTag::Plus, LorentzGenerator::ALL[i])
        } else {
            (RepTag::Minus, LorentzGenerator::ALL[i])
        };
        generator(rep, g).scale_real(2.0)
    })
}

/// Matrix of `T ↦ Λ T Λ⁻¹` in [`lifted_tcar_basis`].
pub fn lift_matrix(lambda: &LinearOperator, tol: Tolerance) -> Result<DMatrix<Complex64>> {
    check_four(lambda)?;
    let basis = lifted_tcar_basis();
    let coords = basis
        .iter()
        .map(|b| Antisymmetric4::coordinates(b.matrix(), tol))
        .collect::<Result<Vec<_>>>()?;
    let frame = DMatrix::from_columns(&coords);
    let lu = frame.lu();
    let mut out = DMatrix::zeros(6, 6);
    for (j, b) in basis.iter().enumerate() {
        let img = lift(lambda, b, tol)?;
        let rhs = Antisymmetric4::coordinates(
            img.matrix(),
            Tolerance::new(tol.eps() * img.max_abs().max(1.0)).unwrap_or(tol),
        )?;
        let x = lu.solve(&rhs).ok_or(SpinError::Singular)?;
        out.set_column(j, &x);
    }
    Ok(out)
}

/// `v_{±1} = (u0 ± i u3)/2`, `v_{±2} = (u2 ± i u1)/2`, returned as
/// `(v1, v2, v_{-1}, v_{-2})`.
pub fn bispinor_basis() -> [SpinVector; 4] {
    let u = |k: usize| SpinVector::basis(4, k);
    let half = |a: SpinVector, b: SpinVector, s: f64| (&a + &b.scale(I * s)).scale_real(0.5);
    [
        half(u(0), u(3), 1.0),
        half(u(2), u(1), 1.0),
        half(u(0), u(3), -1.0),
        half(u(2), u(1), -1.0),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinorSubspace {
    /// `(v1, v2)`, invariant under π⁺.
    Upsilon1,
    /// `(v_{-1}, v_{-2})`, invariant under π⁺.
    Upsilon2,
    /// `(v_{-2}, v1)`, invariant under π⁻.
    UpsilonTilde1,
    /// `(v2, v_{-1})`, invariant under π⁻.
    UpsilonTilde2,
}

impl SpinorSubspace {
    pub const ALL: [Self; 4] = [
        Self::Upsilon1,
        Self::Upsilon2,
        Self::UpsilonTilde1,
        Self::UpsilonTilde2,
    ];

    pub fn basis(self) -> [SpinVector; 2] {
        let [v1, v2, vm1, vm2] = bispinor_basis();
        match self {
            Self::Upsilon1 => [v1, v2],
            Self::Upsilon2 => [vm1, vm2],
            Self::UpsilonTilde1 => [vm2, v1],
            Self::UpsilonTilde2 => [v2, vm1],
        }
    }
}

/// Matrix of `op` on a two-dimensional invariant subspace, in its ordered basis.
pub fn restrict(op: &LinearOperator, sub: SpinorSubspace, tol: Tolerance) -> Result<Matrix2> {
    check_four(op)?;
    let b = sub.basis();
    let mut m = [[ZERO; 2]; 2];
    let mut worst = 0.0_f64;
    for j in 0..2 {
        let img = op.apply(&b[j])?;
        let mut rest = img.clone();
        for i in 0..2 {
            // the bispinor basis is orthogonal with |v|^2 = 1/2
            let x = img.inner(&b[i])? * 2.0;
            m[i][j] = x;
            rest = &rest - &b[i].scale(x);
        }
        worst = worst.max(rest.euclid_norm());
    }
    if worst > tol.eps() * op.max_abs().max(1.0) {
        return Err(SpinError::NotInvariant(worst));
    }
    Ok(Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]))
}

/// `[X_a, X_b] = Σ_k f[a][b][k] X_k` for the spin-1 generators, solved
/// by least squares in the 16-dimensional operator space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureConstants {
    pub generators: Vec<String>,
    pub table: Vec<Vec<Vec<f64>>>,
    pub residual: f64,
}

fn flatten(ops: &[LinearOperator]) -> DMatrix<Complex64> {
    let cols: Vec<DVector<Complex64>> = ops
        .iter()
        .map(|o| DVector::from_iterator(16, o.matrix().iter().copied()))
        .collect();
    DMatrix::from_columns(&cols)
}

pub fn structure_constants() -> StructureConstants {
    let gens: Vec<LinearOperator> = LorentzGenerator::ALL
        .iter()
        .map(|&g| generator(RepTag::Spin1, g))
        .collect();
    let frame = flatten(&gens);
    let svd = frame.clone().svd(true, true);
    let mut table = vec![vec![vec![0.0; 6]; 6]; 6];
    let mut residual = 0.0_f64;
    for a in 0..6 {
        for b in 0..6 {
            let comm = gens[a].commutator(&gens[b]);
            let rhs = flatten(std::slice::from_ref(&comm)).column(0).into_owned();
            let x = svd.solve(&rhs, 1e-12).expect("svd carries both factors");
            residual = residual.max(max_entry(&(&frame * &x - &rhs)));
            for k in 0..6 {
                residual = residual.max(x[k].im.abs());
                table[a][b][k] = x[k].re;
            }
        }
    }
    StructureConstants {
        generators: LorentzGenerator::ALL
            .iter()
            .map(|g| g.name().to_string())
            .collect(),
        table,
        residual,
    }
}

/// Largest deviation of `[π(X_a), π(X_b)] - Σ f_abk π(X_k)` over all pairs.
pub fn homomorphism_residual(rep: RepTag, f: &StructureConstants) -> f64 {
    let gens: Vec<LinearOperator> = LorentzGenerator::ALL
        .iter()
        .map(|&g| generator(rep, g))
        .collect();
    let mut worst = 0.0_f64;
    for a in 0..6 {
        for b in 0..6 {
            let mut rhs = LinearOperator::zeros(4);
            for (k, gk) in gens.iter().enumerate() {
                rhs = &rhs + &gk.scale_real(f.table[a][b][k]);
            }
            worst = worst.max(gens[a].commutator(&gens[b]).max_deviation(&rhs));
        }
    }
    worst
}

/// `I` for the identity symbol in the multiplication table.
pub fn identity4() -> LinearOperator {
    LinearOperator::identity(4)
}
