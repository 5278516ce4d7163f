//! Seeded property suites behind `spinfactor check`.
//!
//! Trial `i` of suite `k` draws from `SpinRng::for_trial(seed ^ salt(k), i)`, so a
//! suite's outcome depends only on the seed and the trial count.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{matrix_rep, random_tcar, verify_tcar, Matrix2, TcarBasis};
use crate::config::Tolerance;
use crate::dual::{hat, trace_norm};
use crate::error::{Result, SpinError};
use crate::geometry::{flow, flow_from_origin, invariant_metric, transvection_to, FlowConfig};
use crate::linalg::{eigenvalues, hermitian_eigenvalues, max_entry, LinearOperator};
use crate::lorentz::{exp_generator, generator, LorentzGenerator, RepTag};
use crate::rng::SpinRng;
use crate::triple::{d_operator, q_operator, rotate_in_plane, triple_product};
use crate::tripotent::{
    classify, operator_norm, singular_decomposition, singular_values, TripotentClass,
};
use crate::vector::{SpinVector, I};

/// Outcome of one trial: it passes when `residual <= bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub residual: f64,
    pub bound: f64,
}

impl Trial {
    pub fn new(residual: f64, bound: f64) -> Self {
        Self { residual, bound }
    }

    pub fn passed(self) -> bool {
        self.residual <= self.bound
    }

    /// The trial with the larger residual relative to its bound.
    pub fn worst(self, other: Self) -> Self {
        if other.ratio() > self.ratio() {
            other
        } else {
            self
        }
    }

    fn ratio(self) -> f64 {
        match (self.bound > 0.0, self.residual > 0.0) {
            (true, _) => self.residual / self.bound,
            (false, true) => f64::INFINITY,
            (false, false) => 0.0,
        }
    }
}

type TrialFn = fn(&mut SpinRng, Tolerance) -> Result<Trial>;

pub struct Suite {
    pub name: &'static str,
    pub module: &'static str,
    pub default_trials: usize,
    run: TrialFn,
}

impl Suite {
    pub fn run_trial(&self, rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
        (self.run)(rng, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub module: String,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_residual: f64,
    /// Index of the first failing trial and why it failed.
    pub first_failure: Option<(usize, String)>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteResult>,
}

macro_rules! suite {
    ($name:expr, $module:expr, $trials:expr, $f:expr) => {
        Suite {
            name: $name,
            module: $module,
            default_trials: $trials,
            run: $f,
        }
    };
}

pub static SUITES: &[Suite] = &[
    suite!("inner-linearity", "core", 1000, inner_linearity),
    suite!("det-scaling", "core", 1000, det_scaling),
    suite!("det-bound", "core", 1000, det_bound),
    suite!("outer-symmetry", "triple", 1000, outer_symmetry),
    suite!("main-identity", "triple", 1000, main_identity),
    suite!("phase-generator", "triple", 1000, phase_generator),
    suite!("half-turn", "triple", 1000, half_turn),
    suite!("double-reflection", "triple", 1000, double_reflection),
    suite!("reflection-form", "triple", 1000, reflection_form),
    suite!("d-spectrum", "triple", 1000, d_spectrum),
    suite!("reconstruction", "tripotent", 1000, reconstruction),
    suite!("det-product", "tripotent", 1000, det_product),
    suite!("norm-equivalence", "tripotent", 1000, norm_equivalence),
    suite!("spectral-identity", "tripotent", 1000, spectral_identity),
    suite!("phase-stability", "tripotent", 1000, phase_stability),
    suite!("duality-pairing", "dual", 100, duality_pairing),
    suite!("tcar-random", "basis", 100, tcar_random),
    suite!("matrix-rep", "basis", 500, matrix_rep_suite),
    suite!("lorentz-det", "lorentz", 500, lorentz_det),
    suite!("lorentz-commute", "lorentz", 100, lorentz_commute),
    suite!("flow-ball", "geometry", 200, flow_ball),
    suite!("flow-closed-form", "geometry", 100, flow_closed_form),
    suite!("transvection", "geometry", 100, transvection_round_trip),
    suite!("metric-positive", "geometry", 200, metric_positive),
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

fn salt(index: usize) -> u64 {
    (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs one suite for `trials` trials; errors inside a trial count as failures.
pub fn run_suite(suite: &Suite, seed: u64, trials: usize, tol: Tolerance) -> SuiteResult {
    let index = SUITES
        .iter()
        .position(|s| s.name == suite.name)
        .unwrap_or(0);
    let key = seed ^ salt(index);
    let mut out = SuiteResult {
        suite: suite.name.to_string(),
        module: suite.module.to_string(),
        trials,
        passed: 0,
        failed: 0,
        max_residual: 0.0,
        first_failure: None,
    };
    for i in 0..trials {
        let mut rng = SpinRng::for_trial(key, i as u64);
        let failure = match suite.run_trial(&mut rng, tol) {
            Ok(t) => {
                out.max_residual = out.max_residual.max(t.residual);
                (!t.passed()).then(|| format!("residual {:e} > {:e}", t.residual, t.bound))
            }
            Err(e) => Some(e.to_string()),
        };
        match failure {
            None => out.passed += 1,
            Some(msg) => {
                out.failed += 1;
                if out.first_failure.is_none() {
                    out.first_failure = Some((i, msg));
                }
            }
        }
    }
    out
}

/// Runs the named suite, or every suite when `name` is `None`. `trials`
/// overrides each suite's default count.
pub fn run_checks(
    name: Option<&str>,
    seed: u64,
    trials: Option<usize>,
    tol: Tolerance,
) -> Result<CheckReport> {
    let selected: Vec<&Suite> = match name {
        Some(n) => vec![find_suite(n)
            .ok_or_else(|| SpinError::InvalidArgument(format!("unknown suite '{n}'")))?],
        None => SUITES.iter().collect(),
    };
    let suites: Vec<SuiteResult> = selected
        .into_iter()
        .map(|s| run_suite(s, seed, trials.unwrap_or(s.default_trials), tol))
        .collect();
    Ok(CheckReport {
        seed,
        pass: suites.iter().all(SuiteResult::pass),
        suites,
    })
}

fn dim(rng: &mut SpinRng) -> usize {
    2 + rng.index(7)
}

fn inner_linearity(rng: &mut SpinRng, _tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let (a, b, c) = (rng.unit_vector(n), rng.unit_vector(n), rng.unit_vector(n));
    let (al, be) = (rng.complex_normal(), rng.complex_normal());
    let comb = &a.scale(al) + &b.scale(be);
    let left = comb.inner(&c)? - (al * a.inner(&c)? + be * b.inner(&c)?);
    let right = c.inner(&comb)? - (al.conj() * c.inner(&a)? + be.conj() * c.inner(&b)?);
    Ok(Trial::new(left.norm().max(right.norm()), 1e-12))
}

fn det_scaling(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let a = rng.vector(n);
    let l = rng.complex_normal();
    let r = (a.scale(l).det() - l * l * a.det()).norm();
    Ok(Trial::new(
        r,
        tol.eps() * (l.norm_sqr() * a.norm_sqr()).max(1.0),
    ))
}

fn det_bound(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let a = rng.vector(n);
    let excess = (a.det().norm() - a.norm_sqr()).max(0.0);
    Ok(Trial::new(excess, tol.eps() * a.norm_sqr().max(1.0)))
}

fn outer_symmetry(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let (a, b, c) = (rng.unit_vector(n), rng.unit_vector(n), rng.unit_vector(n));
    let r = triple_product(&a, &b, &c)?.distance(&triple_product(&c, &b, &a)?);
    Ok(Trial::new(r, tol.eps()))
}

/// Residual of `D(d,d){a,b,c} = {Da,b,c} - {a,Db,c} + {a,b,Dc}` on Gaussian draws.
pub fn main_identity_residual(
    a: &SpinVector,
    b: &SpinVector,
    c: &SpinVector,
    d: &SpinVector,
) -> Result<f64> {
    let dd = d_operator(d, d)?;
    let lhs = dd.apply(&triple_product(a, b, c)?)?;
    let t1 = triple_product(&dd.apply(a)?, b, c)?;
    let t2 = triple_product(a, &dd.apply(b)?, c)?;
    let t3 = triple_product(a, b, &dd.apply(c)?)?;
    Ok(lhs.distance(&(&(&t1 - &t2) + &t3)))
}

fn main_identity(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = if rng.index(2) == 0 { 4 } else { 6 };
    let (a, b, c, d) = (rng.vector(n), rng.vector(n), rng.vector(n), rng.vector(n));
    Ok(Trial::new(
        main_identity_residual(&a, &b, &c, &d)?,
        tol.eps(),
    ))
}

fn phase_generator(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let basis = random_tcar(n, rng.index(usize::MAX) as u64)?;
    let u = &basis.vectors()[rng.index(n)];
    let d = d_operator(u, &u.scale(I))?;
    let gen = (&d - &LinearOperator::identity(n).scale(-I)).max_abs();
    let theta = rng.uniform(-PI, PI);
    let a = rng.unit_vector(n);
    let rotated = d.scale_real(theta).exp().apply(&a)?;
    let act = rotated.distance(&a.scale(Complex64::from_polar(1.0, -theta)));
    Ok(Trial::new(gen, tol.eps()).worst(Trial::new(act, tol.eps())))
}

fn plane_pair(rng: &mut SpinRng) -> (usize, SpinVector, SpinVector) {
    let n = dim(rng);
    let l = rng.index(n);
    let k = (l + 1 + rng.index(n - 1)) % n;
    (n, SpinVector::basis(n, l), SpinVector::basis(n, k))
}

fn half_turn(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let (n, ul, uk) = plane_pair(rng);
    let a = rng.real_vector(n);
    let lhs = q_operator(&ul).apply(&q_operator(&uk).apply(&a)?)?;
    let rhs = rotate_in_plane(&ul, &uk, PI, tol)?.apply(&a)?;
    Ok(Trial::new(
        lhs.distance(&rhs),
        tol.eps() * a.euclid_norm().max(1.0),
    ))
}

fn double_reflection(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let (n, ul, uk) = plane_pair(rng);
    let theta = rng.uniform(-PI, PI);
    let a = rng.real_vector(n);
    let half = rotate_in_plane(&ul, &uk, theta / 2.0, tol)?.apply(&uk)?;
    let lhs = q_operator(&half).apply(&q_operator(&uk).apply(&a)?)?;
    let rhs = rotate_in_plane(&ul, &uk, theta, tol)?.apply(&a)?;
    Ok(Trial::new(
        lhs.distance(&rhs),
        tol.eps() * a.euclid_norm().max(1.0),
    ))
}

fn reflection_form(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let (u, a) = (rng.unit_vector(n), rng.unit_vector(n));
    let general = q_operator(&u)
        .apply(&a)?
        .distance(&triple_product(&u, &a, &u)?);
    let ur = rng.real_vector(n);
    let ur = ur.scale_real(1.0 / ur.euclid_norm());
    let ar = rng.real_vector(n);
    let simple = &ur.scale(ur.inner(&ar)? * 2.0) - &ar;
    let real = q_operator(&ur).apply(&ar)?.distance(&simple);
    Ok(Trial::new(general, tol.eps())
        .worst(Trial::new(real, tol.eps() * ar.euclid_norm().max(1.0))))
}

fn d_spectrum(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let d = rng.vector(n);
    let scale = d.norm_sqr().max(1.0);
    let ev = eigenvalues(d_operator(&d, &d)?.matrix());
    let negative = ev.iter().map(|z| (-z.re).max(0.0)).fold(0.0, f64::max);
    let imag = ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(Trial::new(negative.max(imag), tol.eps() * scale))
}

fn reconstruction(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let a = rng.vector(n);
    let sd = singular_decomposition(&a, tol)?;
    Ok(Trial::new(sd.reconstruct().distance(&a), tol.eps()))
}

fn det_product(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let a = rng.vector(n);
    let sd = singular_decomposition(&a, tol)?;
    let (s1, s2) = singular_values(&a);
    let prod = (sd.s1 * sd.s2 - a.det().norm()).abs();
    let formula = (sd.s1 - s1).abs().max((sd.s2 - s2).abs());
    Ok(Trial::new(prod, tol.eps()).worst(Trial::new(formula, tol.eps())))
}

fn norm_equivalence(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let a = rng.vector(n);
    let (e, o) = (a.euclid_norm(), operator_norm(&a));
    let excess = (e - o).max(o - SQRT_2 * e).max(0.0);
    Ok(Trial::new(excess, tol.eps() * e.max(1.0)))
}

fn spectral_identity(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let a = rng.unit_vector(n);
    let ev = hermitian_eigenvalues(d_operator(&a, &a)?.matrix());
    let top = ev.last().copied().unwrap_or(0.0);
    Ok(Trial::new(
        (operator_norm(&a).powi(2) - top).abs(),
        tol.eps(),
    ))
}

fn phase_stability(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let v = rng.minimal_tripotent(n);
    let phase = rng.unimodular();
    let w = v.scale(phase);
    let ok = classify(&w, tol)? == TripotentClass::Minimal;
    Ok(Trial::new(if ok { 0.0 } else { 1.0 }, 0.0))
}

fn duality_pairing(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let f = hat(&rng.vector(n));
    let norm = trace_norm(&f);
    let mut sup: f64 = 0.0;
    for _ in 0..2000 {
        let phase = rng.unimodular();
        let w = rng.with_operator_norm(n, 1.0).scale(phase);
        sup = sup.max(f.eval(&w)?.norm());
    }
    let sd = singular_decomposition(f.check(), tol)?;
    let attained = f.eval(&(&sd.v1 + &sd.v2))?.norm();
    Ok(Trial::new((sup - norm).max(0.0), tol.eps() * norm.max(1.0))
        .worst(Trial::new((attained - norm).abs(), 1e-3)))
}

fn tcar_random(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let basis: TcarBasis = random_tcar(n, rng.index(usize::MAX) as u64)?;
    let report = verify_tcar(basis.vectors(), tol)?;
    let u = basis.vectors();
    let mut gram: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            gram = gram.max((u[i].inner(&u[j])? - want).norm());
        }
    }
    let verdict = Trial::new(if report.pass { 0.0 } else { 1.0 }, 0.0);
    Ok(verdict.worst(Trial::new(gram, tol.eps())))
}

fn matrix_rep_suite(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let (a, b, c) = (rng.vector(4), rng.vector(4), rng.vector(4));
    let l = rng.complex_normal();
    let (ma, mb, mc) = (matrix_rep(&a)?, matrix_rep(&b)?, matrix_rep(&c)?);
    let det = (ma.det() - a.det()).norm();
    let comb = matrix_rep(&(&a.scale(l) + &b))?;
    let lin = comb.to_dmatrix() - (ma.to_dmatrix() * l + mb.to_dmatrix());
    let tri =
        matrix_rep(&triple_product(&a, &b, &c)?)?.max_deviation(&Matrix2::triple(&ma, &mb, &mc));
    let scale = (a.euclid_norm() * b.euclid_norm() * c.euclid_norm()).max(1.0);
    Ok(Trial::new(det, tol.eps() * a.norm_sqr().max(1.0))
        .worst(Trial::new(max_entry(&lin), tol.eps()))
        .worst(Trial::new(tri, 1e-10 * scale)))
}

fn lorentz_det(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let g = LorentzGenerator::ALL[rng.index(6)];
    let phi = rng.uniform(-2.0, 2.0);
    let t = exp_generator(RepTag::Spin1, g, phi);
    let a = rng.vector(4);
    let r = (t.apply(&a)?.det() - a.det()).norm();
    Ok(Trial::new(
        r,
        tol.eps() * a.norm_sqr().max(1.0) * phi.cosh().powi(2),
    ))
}

fn lorentz_commute(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let g = LorentzGenerator::ALL[rng.index(6)];
    let h = LorentzGenerator::ALL[rng.index(6)];
    let c = generator(RepTag::Plus, g).commutator(&generator(RepTag::Minus, h));
    Ok(Trial::new(c.max_abs(), tol.eps()))
}

fn flow_ball(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = 2 + rng.index(4);
    let r = rng.uniform(0.0, 2.0);
    let a = rng.with_operator_norm(n, r);
    let s = rng.uniform(0.0, 1.0);
    let z = rng.with_operator_norm(n, s);
    let tau = rng.uniform(0.0, 3.0);
    let cfg = FlowConfig {
        tolerance: tol,
        ..FlowConfig::default()
    };
    let end = operator_norm(&flow(&a, &z, tau, &cfg)?);
    Ok(Trial::new((end - 1.0).max(0.0), 10.0 * tol.eps()))
}

fn flow_closed_form(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = 2 + rng.index(4);
    let r = rng.uniform(0.0, 2.0);
    let a = rng.with_operator_norm(n, r);
    let tau = rng.uniform(0.0, 2.0);
    let cfg = FlowConfig {
        tolerance: tol,
        ..FlowConfig::default()
    };
    let numeric = flow(&a, &SpinVector::zeros(n), tau, &cfg)?;
    let closed = flow_from_origin(&a, tau, tol)?;
    Ok(Trial::new(numeric.distance(&closed), 1e-6))
}

fn transvection_round_trip(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = 2 + rng.index(4);
    let r = rng.uniform(0.0, 0.9);
    let b = rng.with_operator_norm(n, r);
    let a = transvection_to(&b, tol)?;
    let cfg = FlowConfig {
        tolerance: tol,
        ..FlowConfig::default()
    };
    let end = flow(&a, &SpinVector::zeros(n), 1.0, &cfg)?;
    Ok(Trial::new(end.distance(&b), 1e-5))
}

/// Smallest eigenvalue of the Gram matrix of `h_a` in the standard basis.
pub fn metric_min_eigenvalue(a: &SpinVector, tol: Tolerance) -> Result<f64> {
    let n = a.dim();
    let e: Vec<SpinVector> = (0..n).map(|j| SpinVector::basis(n, j)).collect();
    let mut g = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = invariant_metric(a, &e[j], &e[i], tol)?;
        }
    }
    let asym = max_entry(&(&g - g.adjoint()));
    if asym > tol.sqrt() {
        return Err(SpinError::Structural(format!(
            "metric Gram matrix is not Hermitian: {asym:e}"
        )));
    }
    Ok(hermitian_eigenvalues(&g)[0])
}

fn metric_positive(rng: &mut SpinRng, tol: Tolerance) -> Result<Trial> {
    let n = dim(rng);
    let r = rng.uniform(0.0, 0.9);
    let a = rng.with_operator_norm(n, r);
    let low = metric_min_eigenvalue(&a, tol)?;
    Ok(Trial::new((1e-6 - low).max(0.0), 0.0))
}
