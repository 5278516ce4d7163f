//! TCAR bases, spin grids and the matrix pictures of small spin factors.
//!
//! Grid checks are written against [`TripleSystem`], so the same code verifies
//! odd quadrangles in the spin factor, in 2×2 matrices and in antisymmetric
//! 4×4 matrices.

use nalgebra::{DMatrix, DVector, Matrix2 as NMatrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Tolerance, DEFAULT_MAX_DIM};
use crate::error::{Result, SpinError};
use crate::linalg::{LinearOperator, MatrixJson};
use crate::rng::SpinRng;
use crate::triple::{d_operator, triple_unchecked};
use crate::vector::{SpinVector, I, ONE, ZERO};

/// Pass/fail with the list of violated relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub violations: Vec<String>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<String>) -> Self {
        Self {
            pass: violations.is_empty(),
            violations,
        }
    }

    pub fn first(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

fn max_abs(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn deviation(a: &SpinVector, b: &SpinVector) -> f64 {
    max_abs(&(a.as_dvector() - b.as_dvector()))
}

/// First relation of the family that fails, as a readable message.
///
/// Checks `{e_l,e_k,e_l} = -e_k` for `k != l`, `{e_l,e_k,e_k} = {e_k,e_k,e_l} = e_l`
/// and `{e_l,e_k,e_m} = 0` for distinct indices.
pub fn tcar_violation(family: &[SpinVector], tol: Tolerance) -> Option<String> {
    let n = family.len();
    if let Some(first) = family.first() {
        if let Some(bad) = family.iter().position(|v| v.dim() != first.dim()) {
            return Some(format!("vector {bad} has dimension {}", family[bad].dim()));
        }
    }
    let t = |a: usize, b: usize, c: usize| triple_unchecked(&family[a], &family[b], &family[c]);
    for l in 0..n {
        for k in 0..n {
            if k != l {
                let r = deviation(&t(l, k, l), &-&family[k]);
                if r > tol.eps() {
                    return Some(format!("tbasis1 at (l={l}, k={k}): residual {r:e}"));
                }
            }
        }
    }
    for k in 0..n {
        for l in 0..n {
            let r = deviation(&t(l, k, k), &family[l]).max(deviation(&t(k, k, l), &family[l]));
            if r > tol.eps() {
                return Some(format!("tbasis2 at (l={l}, k={k}): residual {r:e}"));
            }
        }
    }
    for l in 0..n {
        for k in 0..n {
            for m in 0..n {
                if l != k && k != m && l != m {
                    let r = max_abs(t(l, k, m).as_dvector());
                    if r > tol.eps() {
                        return Some(format!("tbasis3 at (l={l}, k={k}, m={m}): residual {r:e}"));
                    }
                }
            }
        }
    }
    None
}

/// Checks that `basis` is a full TCAR basis of its spin factor.
pub fn verify_tcar(basis: &[SpinVector], tol: Tolerance) -> Result<VerificationReport> {
    let n = basis.len();
    for v in basis {
        if v.dim() != n {
            return Err(SpinError::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
    }
    if n < 2 {
        return Err(SpinError::InvalidDimension(n, DEFAULT_MAX_DIM));
    }
    Ok(VerificationReport::from_violations(
        tcar_violation(basis, tol).into_iter().collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TcarBasis {
    vectors: Vec<SpinVector>,
}

impl TcarBasis {
    pub fn new(vectors: Vec<SpinVector>, tol: Tolerance) -> Result<Self> {
        let report = verify_tcar(&vectors, tol)?;
        match report.first() {
            None => Ok(Self { vectors }),
            Some(v) => Err(SpinError::Structural(v.to_string())),
        }
    }

    pub fn natural(n: usize) -> Self {
        Self {
            vectors: (0..n).map(|j| SpinVector::basis(n, j)).collect(),
        }
    }

    pub fn vectors(&self) -> &[SpinVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn into_vectors(self) -> Vec<SpinVector> {
        self.vectors
    }
}

/// `λU e_j` for a seeded unimodular `λ` and orthogonal `U`.
pub fn random_tcar(n: usize, seed: u64) -> Result<TcarBasis> {
    if !(2..=DEFAULT_MAX_DIM).contains(&n) {
        return Err(SpinError::InvalidDimension(n, DEFAULT_MAX_DIM));
    }
    let mut rng = SpinRng::seeded(seed);
    let u = rng.orthogonal(n);
    let lambda = rng.unimodular();
    let vectors = (0..n)
        .map(|j| SpinVector::from_dvector(u.column(j).map(|x| lambda * x)))
        .collect();
    Ok(TcarBasis { vectors })
}

/// A complex vector space with a triple product, in fixed coordinates.
pub trait TripleSystem {
    fn dim(&self) -> usize;

    fn triple(
        &self,
        a: &DVector<Complex64>,
        b: &DVector<Complex64>,
        c: &DVector<Complex64>,
    ) -> DVector<Complex64>;

    /// Matrix of `x -> {a, b, x}`.
    fn d_matrix(&self, a: &DVector<Complex64>, b: &DVector<Complex64>) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = DVector::zeros(n);
            e[j] = ONE;
            m.set_column(j, &self.triple(a, b, &e));
        }
        m
    }
}

/// The spin factor of dimension `n` in its natural coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinFactor(pub usize);

impl TripleSystem for SpinFactor {
    fn dim(&self) -> usize {
        self.0
    }

    fn triple(
        &self,
        a: &DVector<Complex64>,
        b: &DVector<Complex64>,
        c: &DVector<Complex64>,
    ) -> DVector<Complex64> {
        let wrap = |v: &DVector<Complex64>| SpinVector::from_dvector(v.clone());
        triple_unchecked(&wrap(a), &wrap(b), &wrap(c))
            .as_dvector()
            .clone()
    }
}

fn matrix_triple(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    c: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let bs = b.adjoint();
    (a * &bs * c + c * &bs * a) * Complex64::new(0.5, 0.0)
}

/// 2×2 complex matrices, row-major coordinates, product `(ab*c + cb*a)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SquareTwo;

impl SquareTwo {
    fn to_matrix(v: &DVector<Complex64>) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, v.as_slice())
    }

    fn from_matrix(m: &DMatrix<Complex64>) -> DVector<Complex64> {
        DVector::from_vec(vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
    }
}

impl TripleSystem for SquareTwo {
    fn dim(&self) -> usize {
        4
    }

    fn triple(
        &self,
        a: &DVector<Complex64>,
        b: &DVector<Complex64>,
        c: &DVector<Complex64>,
    ) -> DVector<Complex64> {
        let m = matrix_triple(
            &Self::to_matrix(a),
            &Self::to_matrix(b),
            &Self::to_matrix(c),
        );
        Self::from_matrix(&m)
    }
}

/// Antisymmetric 4×4 complex matrices with product `(ab*c + cb*a)/2`.
///
/// Coordinates are the upper entries in the order of [`Antisymmetric4::PAIRS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Antisymmetric4;

impl Antisymmetric4 {
    pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

    pub fn to_matrix(v: &DVector<Complex64>) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(4, 4);
        for (idx, &(k, l)) in Self::PAIRS.iter().enumerate() {
            m[(k, l)] = v[idx];
            m[(l, k)] = -v[idx];
        }
        m
    }

    pub fn coordinates(m: &DMatrix<Complex64>, tol: Tolerance) -> Result<DVector<Complex64>> {
        if m.shape() != (4, 4) {
            return Err(SpinError::InvalidArgument(format!(
                "expected a 4x4 matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asym = (m + m.transpose())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > tol.eps() {
            return Err(SpinError::Structural(format!(
                "matrix is not antisymmetric: |m + m^T| = {asym:e}"
            )));
        }
        Ok(DVector::from_iterator(
            6,
            Self::PAIRS.iter().map(|&(k, l)| m[(k, l)]),
        ))
    }
}

impl TripleSystem for Antisymmetric4 {
    fn dim(&self) -> usize {
        6
    }

    fn triple(
        &self,
        a: &DVector<Complex64>,
        b: &DVector<Complex64>,
        c: &DVector<Complex64>,
    ) -> DVector<Complex64> {
        let m = matrix_triple(
            &Self::to_matrix(a),
            &Self::to_matrix(b),
            &Self::to_matrix(c),
        );
        DVector::from_iterator(6, Self::PAIRS.iter().map(|&(k, l)| m[(k, l)]))
    }
}

/// Peirce projections of a tripotent as polynomials in `D = D(v,v)`:
/// `P1 = D(2D - I)`, `P1/2 = 4D(I - D)`, `P0 = (I - D)(I - 2D)`.
fn peirce_polynomials(d: &DMatrix<Complex64>) -> [DMatrix<Complex64>; 3] {
    let n = d.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let two = Complex64::new(2.0, 0.0);
    let p1 = d * (d * two - &id);
    let ph = d * (&id - d) * Complex64::new(4.0, 0.0);
    let p0 = (&id - d) * (&id - d * two);
    [p1, ph, p0]
}

fn mat_max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

const GRID_NAMES: [&str; 4] = ["v", "v_bar", "w", "w_bar"];

/// Checks the four spin-grid conditions on `(v, v̄; w, w̄)` and reports every
/// failed one.
pub fn verify_grid_in<S: TripleSystem>(
    sys: &S,
    grid: [&DVector<Complex64>; 4],
    tol: Tolerance,
) -> VerificationReport {
    let eps = tol.eps();
    let mut violations = Vec::new();
    let [v, vb, w, wb] = grid;
    let half = Complex64::new(0.5, 0.0);

    // minimal compatible tripotents
    let mut projections = Vec::new();
    for (name, x) in GRID_NAMES.iter().zip(grid) {
        let r = max_abs(&(sys.triple(x, x, x) - x));
        if r > eps {
            violations.push(format!(
                "minimal: {name} is not a tripotent (residual {r:e})"
            ));
            continue;
        }
        let d = sys.d_matrix(x, x);
        let ps = peirce_polynomials(&d);
        let rank = ps[0].trace();
        if (rank - ONE).norm() > eps.sqrt() {
            violations.push(format!(
                "minimal: {name} has Peirce 1-space of rank {:.3}",
                rank.re
            ));
        }
        projections.extend(ps);
    }
    let mut worst = 0.0_f64;
    for (i, p) in projections.iter().enumerate() {
        for q in &projections[i + 1..] {
            worst = worst.max(mat_max_abs(&(p * q - q * p)));
        }
    }
    if worst > eps {
        violations.push(format!(
            "compatible: Peirce projections fail to commute ({worst:e})"
        ));
    }

    // algebraically orthogonal pairs
    for (a, b, na, nb) in [(v, vb, "v", "v_bar"), (w, wb, "w", "w_bar")] {
        let r = mat_max_abs(&sys.d_matrix(a, b));
        if r > eps {
            violations.push(format!("orthogonal: D({na},{nb}) = 0 fails ({r:e})"));
        }
    }

    // co-orthogonal pairs
    for (a, b, na, nb) in [
        (v, w, "v", "w"),
        (v, wb, "v", "w_bar"),
        (w, vb, "w", "v_bar"),
        (wb, vb, "w_bar", "v_bar"),
    ] {
        let r1 = max_abs(&(sys.triple(a, a, b) - b * half));
        let r2 = max_abs(&(sys.triple(b, b, a) - a * half));
        if r1.max(r2) > eps {
            violations.push(format!(
                "co-orthogonal: ({na},{nb}) fails ({:e})",
                r1.max(r2)
            ));
        }
    }

    // odd quadrangle
    let r = max_abs(&(sys.triple(w, v, wb) + vb * half));
    if r > eps {
        violations.push(format!("odd: {{w,v,w_bar}} = -v_bar/2 fails ({r:e})"));
    }
    let r = max_abs(&(sys.triple(v, w, vb) + wb * half));
    if r > eps {
        violations.push(format!("odd: {{v,w,v_bar}} = -w_bar/2 fails ({r:e})"));
    }

    VerificationReport::from_violations(violations)
}

/// Four elements `(v, v̄; w, w̄)` of the four-dimensional spin factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SpinVector>", into = "Vec<SpinVector>")]
pub struct SpinGrid4 {
    pub v: SpinVector,
    pub v_bar: SpinVector,
    pub w: SpinVector,
    pub w_bar: SpinVector,
}

impl SpinGrid4 {
    pub fn new(v: SpinVector, v_bar: SpinVector, w: SpinVector, w_bar: SpinVector) -> Result<Self> {
        for x in [&v, &v_bar, &w, &w_bar] {
            if x.dim() != 4 {
                return Err(SpinError::DimensionMismatch {
                    expected: 4,
                    found: x.dim(),
                });
            }
        }
        Ok(Self { v, v_bar, w, w_bar })
    }

    /// `v = (u0 ± iu1)/2`, `w = (u2 ± iu3)/2` from a TCAR basis of the 4-dim factor.
    pub fn from_tcar(u: &TcarBasis) -> Result<Self> {
        if u.dim() != 4 {
            return Err(SpinError::DimensionMismatch {
                expected: 4,
                found: u.dim(),
            });
        }
        let u = u.vectors();
        let pair = |a: &SpinVector, b: &SpinVector| {
            let ib = b.scale(I);
            ((a + &ib).scale_real(0.5), (a - &ib).scale_real(0.5))
        };
        let (v, v_bar) = pair(&u[0], &u[1]);
        let (w, w_bar) = pair(&u[2], &u[3]);
        Ok(Self { v, v_bar, w, w_bar })
    }

    pub fn canonical() -> Self {
        Self::from_tcar(&TcarBasis::natural(4)).expect("natural basis has dimension 4")
    }

    pub fn map(&self, op: &LinearOperator) -> Result<Self> {
        Self::new(
            op.apply(&self.v)?,
            op.apply(&self.v_bar)?,
            op.apply(&self.w)?,
            op.apply(&self.w_bar)?,
        )
    }

    pub fn elements(&self) -> [&SpinVector; 4] {
        [&self.v, &self.v_bar, &self.w, &self.w_bar]
    }
}

impl TryFrom<Vec<SpinVector>> for SpinGrid4 {
    type Error = SpinError;

    fn try_from(mut v: Vec<SpinVector>) -> Result<Self> {
        if v.len() != 4 {
            return Err(SpinError::InvalidArgument(format!(
                "a spin grid has 4 vectors, got {}",
                v.len()
            )));
        }
        let w_bar = v.pop().expect("len 4");
        let w = v.pop().expect("len 4");
        let v_bar = v.pop().expect("len 4");
        let vv = v.pop().expect("len 4");
        Self::new(vv, v_bar, w, w_bar)
    }
}

impl From<SpinGrid4> for Vec<SpinVector> {
    fn from(g: SpinGrid4) -> Self {
        vec![g.v, g.v_bar, g.w, g.w_bar]
    }
}

pub fn verify_spin_grid(g: &SpinGrid4, tol: Tolerance) -> VerificationReport {
    let [a, b, c, d] = g.elements();
    verify_grid_in(
        &SpinFactor(4),
        [
            a.as_dvector(),
            b.as_dvector(),
            c.as_dvector(),
            d.as_dvector(),
        ],
        tol,
    )
}

/// A 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix2(pub NMatrix2<Complex64>);

impl Matrix2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self(NMatrix2::new(a, b, c, d))
    }

    pub fn identity() -> Self {
        Self(NMatrix2::identity())
    }

    pub fn det(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0 * s)
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(2, 2, |i, j| self.0[(i, j)])
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `(ab*c + cb*a)/2`.
    pub fn triple(a: &Self, b: &Self, c: &Self) -> Self {
        let bs = b.0.adjoint();
        Self((a.0 * bs * c.0 + c.0 * bs * a.0) * Complex64::new(0.5, 0.0))
    }
}

impl TryFrom<MatrixJson> for Matrix2 {
    type Error = SpinError;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let m = j.to_matrix()?;
        if m.shape() != (2, 2) {
            return Err(SpinError::InvalidArgument("expected a 2x2 matrix".into()));
        }
        Ok(Self(NMatrix2::new(
            m[(0, 0)],
            m[(0, 1)],
            m[(1, 0)],
            m[(1, 1)],
        )))
    }
}

impl From<Matrix2> for MatrixJson {
    fn from(m: Matrix2) -> Self {
        MatrixJson::from_matrix(&m.to_dmatrix())
    }
}

/// `Σ a_j u_j = [[a0 - i a1, a2 - i a3], [-a2 - i a3, a0 + i a1]]`.
pub fn matrix_rep(a: &SpinVector) -> Result<Matrix2> {
    if a.dim() != 4 {
        return Err(SpinError::DimensionMismatch {
            expected: 4,
            found: a.dim(),
        });
    }
    let x = a.coords();
    Ok(Matrix2::new(
        x[0] - I * x[1],
        x[2] - I * x[3],
        -x[2] - I * x[3],
        x[0] + I * x[1],
    ))
}

/// Pauli matrix `σ_k`, `k ∈ {1, 2, 3}`.
pub fn pauli(k: usize) -> Result<Matrix2> {
    match k {
        1 => Ok(Matrix2::new(ZERO, ONE, ONE, ZERO)),
        2 => Ok(Matrix2::new(ZERO, -I, I, ZERO)),
        3 => Ok(Matrix2::new(ONE, ZERO, ZERO, -ONE)),
        _ => Err(SpinError::InvalidArgument(format!(
            "no Pauli matrix sigma_{k}"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliEntry {
    pub basis_index: usize,
    pub label: String,
    pub matrix: Matrix2,
}

/// Images of the natural basis: `u0 = I`, `u1 = -iσ3`, `u2 = iσ2`, `u3 = -iσ1`.
///
/// With `σ2 = [[0, -i], [i, 0]]` the image of `u2` is `[[0, 1], [-1, 0]] = iσ2`.
pub fn pauli_table() -> Vec<PauliEntry> {
    let minus_i = -I;
    let entry = |j: usize, label: &str, m: Matrix2| PauliEntry {
        basis_index: j,
        label: label.to_string(),
        matrix: m,
    };
    vec![
        entry(0, "I", Matrix2::identity()),
        entry(1, "-i sigma_3", pauli(3).expect("k=3").scale(minus_i)),
        entry(2, "i sigma_2", pauli(2).expect("k=2").scale(I)),
        entry(3, "-i sigma_1", pauli(1).expect("k=1").scale(minus_i)),
    ]
}

/// Scale between `D(u_k, u_l)` and the grid element `e_kl`.
///
/// `D(u_k, u_l) = E_kl - E_lk` already satisfies `{e,e,e} = e` under
/// `(ab*c + cb*a)/2`, so no rescaling is needed.
pub const S6_NORMALIZATION: f64 = 1.0;

/// The six grid elements of the six-dimensional factor as antisymmetric operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct S6Grid {
    pub e01: LinearOperator,
    pub e23: LinearOperator,
    pub e02: LinearOperator,
    pub e31: LinearOperator,
    pub e03: LinearOperator,
    pub e12: LinearOperator,
}

impl S6Grid {
    /// The three odd quadrangles, glued pairwise along a common pair.
    pub fn quadrangles(&self) -> [[&LinearOperator; 4]; 3] {
        [
            [&self.e01, &self.e23, &self.e02, &self.e31],
            [&self.e02, &self.e31, &self.e03, &self.e12],
            [&self.e01, &self.e23, &self.e03, &self.e12],
        ]
    }

    pub fn labelled(&self) -> [(&'static str, &LinearOperator); 6] {
        [
            ("e01", &self.e01),
            ("e23", &self.e23),
            ("e02", &self.e02),
            ("e31", &self.e31),
            ("e03", &self.e03),
            ("e12", &self.e12),
        ]
    }
}

pub fn s6_grid() -> S6Grid {
    let u = |k: usize| SpinVector::basis(4, k);
    let e = |k: usize, l: usize| {
        d_operator(&u(k), &u(l))
            .expect("equal dimensions")
            .scale_real(S6_NORMALIZATION)
    };
    S6Grid {
        e01: e(0, 1),
        e23: e(2, 3),
        e02: e(0, 2),
        e31: e(3, 1),
        e03: e(0, 3),
        e12: e(1, 2),
    }
}

/// Grid check of a quadrangle of antisymmetric 4×4 operators.
pub fn verify_s6_quadrangle(q: [&LinearOperator; 4], tol: Tolerance) -> Result<VerificationReport> {
    let coords = q
        .iter()
        .map(|op| Antisymmetric4::coordinates(op.matrix(), tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(verify_grid_in(
        &Antisymmetric4,
        [&coords[0], &coords[1], &coords[2], &coords[3]],
        tol,
    ))
}
