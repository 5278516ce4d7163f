//! The unit ball of the spin factor: translation flows, transvections, the
//! invariant metric, curvature at the origin, and sampled 3-D sections.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerance;
use crate::dual::{hat, trace_norm};
use crate::error::{Result, SpinError};
use crate::linalg::LinearOperator;
use crate::triple::{bergman, d_operator, triple_product, triple_unchecked};
use crate::tripotent::{
    apply_odd_function, operator_norm, singular_decomposition, singular_values,
};
use crate::vector::SpinVector;

pub fn in_unit_ball(a: &SpinVector, tol: Tolerance) -> bool {
    operator_norm(a) <= 1.0 + tol.eps()
}

/// `ξ_a(w) = a - {w, a, w}`.
pub fn translation_field(a: &SpinVector, w: &SpinVector) -> Result<SpinVector> {
    Ok(a - &triple_product(w, a, w)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub step: f64,
    pub max_steps: usize,
    pub tolerance: Tolerance,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            max_steps: 1_000_000,
            tolerance: Tolerance::default(),
        }
    }
}

/// Solves `w' = ξ_a(w)`, `w(0) = z` up to time `tau` with fixed-step RK4.
pub fn flow(a: &SpinVector, z: &SpinVector, tau: f64, cfg: &FlowConfig) -> Result<SpinVector> {
    a.check_dim(z)?;
    if !(cfg.step.is_finite() && cfg.step > 0.0) || !tau.is_finite() {
        return Err(SpinError::InvalidArgument(format!(
            "flow needs a positive step and finite time, got step {} and tau {tau}",
            cfg.step
        )));
    }
    let eps = cfg.tolerance.eps();
    let start = operator_norm(z);
    if start > 1.0 + eps {
        return Err(SpinError::OutsideBall(start));
    }
    let steps = (tau.abs() / cfg.step).ceil() as usize;
    if steps > cfg.max_steps {
        return Err(SpinError::Integration(format!(
            "{steps} steps needed, limit is {}",
            cfg.max_steps
        )));
    }
    if steps == 0 {
        return Ok(z.clone());
    }
    let h = tau / steps as f64;
    let field = |w: &SpinVector| a - &triple_unchecked(w, a, w);
    let mut w = z.clone();
    for i in 0..steps {
        let k1 = field(&w);
        let k2 = field(&(&w + &k1.scale_real(h / 2.0)));
        let k3 = field(&(&w + &k2.scale_real(h / 2.0)));
        let k4 = field(&(&w + &k3.scale_real(h)));
        let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
        w = &w + &incr.scale_real(h / 6.0);
        if w.coords()
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(SpinError::Integration(format!("diverged at step {i}")));
        }
    }
    let end = operator_norm(&w);
    if start <= 1.0 + eps && end > 1.0 + 10.0 * eps {
        return Err(SpinError::Integration(format!(
            "flow left the closed ball: norm {end}"
        )));
    }
    Ok(w)
}

/// `Σ tanh(τ α_i) v_i` for `a = Σ α_i v_i`: the flow from the origin.
pub fn flow_from_origin(a: &SpinVector, tau: f64, tol: Tolerance) -> Result<SpinVector> {
    apply_odd_function(a, |s| (tau * s).tanh(), tol)
}

/// `a = artanh(s1) v1 + artanh(s2) v2`, so that the flow of `ξ_a` from the
/// origin reaches `b` at time 1.
pub fn transvection_to(b: &SpinVector, tol: Tolerance) -> Result<SpinVector> {
    let norm = operator_norm(b);
    if norm >= 1.0 {
        return Err(SpinError::OutsideBall(norm));
    }
    if b.is_zero(tol.eps()) {
        return Ok(SpinVector::zeros(b.dim()));
    }
    Ok(singular_decomposition(b, tol)?.map(f64::atanh))
}

/// `h_a(x, y) = <B(a,a)⁻¹ x | y>` via an LU solve.
pub fn invariant_metric(
    a: &SpinVector,
    x: &SpinVector,
    y: &SpinVector,
    tol: Tolerance,
) -> Result<Complex64> {
    a.check_dim(x)?;
    a.check_dim(y)?;
    let norm = operator_norm(a);
    if norm >= 1.0 {
        return Err(SpinError::OutsideBall(norm));
    }
    let b = bergman(a, a)?;
    b.solve(x, tol.eps())?.inner(y)
}

/// `R_0(x, y) = D(y, x) - D(x, y)`.
pub fn curvature_zero(x: &SpinVector, y: &SpinVector) -> Result<LinearOperator> {
    Ok(&d_operator(y, x)? - &d_operator(x, y)?)
}

pub const SECTION_EXTENT: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    /// `{(x, y, iz)}` with the operator norm.
    D1,
    /// Functionals `½(x, y, iz)` with the trace norm.
    Dual,
}

/// A cubic grid over `[-1.2, 1.2]^3` with a norm at each point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub kind: SectionKind,
    pub resolution: usize,
    pub spacing: f64,
    pub points: Vec<SectionPoint>,
}

impl Section {
    /// Points with `|norm - 1| <= spacing`.
    pub fn boundary(&self) -> impl Iterator<Item = &SectionPoint> {
        self.points
            .iter()
            .filter(move |p| (p.norm - 1.0).abs() <= self.spacing)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            w.serialize(p)
                .map_err(|e| SpinError::Parse(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| SpinError::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| SpinError::Parse(e.to_string()))
    }
}

pub fn section_vector(x: f64, y: f64, z: f64) -> SpinVector {
    SpinVector::from_parts(&[x, y, 0.0], &[0.0, 0.0, z]).expect("finite grid coordinates")
}

fn sample<F: Fn(f64, f64, f64) -> f64>(
    kind: SectionKind,
    resolution: usize,
    norm: F,
) -> Result<Section> {
    if resolution < 2 {
        return Err(SpinError::InvalidArgument(format!(
            "section resolution must be at least 2, got {resolution}"
        )));
    }
    let spacing = 2.0 * SECTION_EXTENT / (resolution - 1) as f64;
    let coord = |i: usize| -SECTION_EXTENT + spacing * i as f64;
    let mut points = Vec::with_capacity(resolution.pow(3));
    for i in 0..resolution {
        for j in 0..resolution {
            for k in 0..resolution {
                let (x, y, z) = (coord(i), coord(j), coord(k));
                points.push(SectionPoint {
                    x,
                    y,
                    z,
                    norm: norm(x, y, z),
                });
            }
        }
    }
    Ok(Section {
        kind,
        resolution,
        spacing,
        points,
    })
}

/// Operator norm on `(x, y, iz)`; the unit section is a double cone.
pub fn sample_section_d1(resolution: usize) -> Result<Section> {
    sample(SectionKind::D1, resolution, |x, y, z| {
        operator_norm(&section_vector(x, y, z))
    })
}

/// Trace norm of the functional with representative `½(x, y, iz)`; the unit
/// section is a cylinder.
pub fn sample_section_dual(resolution: usize) -> Result<Section> {
    sample(SectionKind::Dual, resolution, |x, y, z| {
        trace_norm(&hat(&section_vector(x, y, z).scale_real(0.5)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryClass {
    /// Within a grid step of a minimal tripotent (`s2 ≈ 0`).
    NearMinimal,
    /// Within a grid step of a maximal tripotent (`s1 ≈ s2`).
    NearMaximal,
    /// On a face of the boundary, away from the tripotents.
    Face,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedPoint {
    pub point: SectionPoint,
    pub class: BoundaryClass,
    /// Distance in `(x, y, z)` to the locus the class predicts: the circles
    /// `z = ±½, r = ½` for minimal, the points `(0, 0, ±1)` and the unit circle
    /// `z = 0` for maximal.
    pub locus_distance: f64,
}

/// Classifies the boundary points of a D1 section by their singular values.
pub fn classify_d1_boundary(section: &Section) -> Result<Vec<ClassifiedPoint>> {
    if section.kind != SectionKind::D1 {
        return Err(SpinError::InvalidArgument("expected a D1 section".into()));
    }
    let h = section.spacing;
    Ok(section
        .boundary()
        .map(|p| {
            let (s1, s2) = singular_values(&section_vector(p.x, p.y, p.z));
            let r = p.x.hypot(p.y);
            let az = p.z.abs();
            let (class, locus_distance) = if s2 <= h {
                (BoundaryClass::NearMinimal, (r - 0.5).hypot(az - 0.5))
            } else if s1 - s2 <= h {
                let poles = r.hypot(az - 1.0);
                let equator = (r - 1.0).hypot(az);
                (BoundaryClass::NearMaximal, poles.min(equator))
            } else {
                (BoundaryClass::Face, 0.0)
            };
            ClassifiedPoint {
                point: *p,
                class,
                locus_distance,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::rng::SpinRng;
    use crate::triple::{make_automorphism, wedge};
    use crate::tripotent::{classify, TripotentClass};
    use crate::vector::{c, ZERO};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn ball_membership() {
        assert!(in_unit_ball(&SpinVector::basis(3, 0), tol()));
        assert!(!in_unit_ball(
            &SpinVector::basis(3, 0).scale_real(1.01),
            tol()
        ));
        let v = SpinVector::new(vec![c(0.5, 0.0), c(0.0, 0.5), ZERO]).unwrap();
        assert!(in_unit_ball(&v, tol()));
        assert!(!in_unit_ball(&v.scale_real(1.1), tol()));
    }

    #[test]
    fn field_values() {
        let mut rng = SpinRng::seeded(5);
        let a = rng.vector(4);
        assert_eq!(translation_field(&a, &SpinVector::zeros(4)).unwrap(), a);
        let v = rng.minimal_tripotent(4);
        let (s, t) = (0.7, 0.4);
        let got = translation_field(&v.scale_real(s), &v.scale_real(t)).unwrap();
        assert!(got.distance(&v.scale_real(s - t * t * s)) < 1e-15);
        assert!(translation_field(&a, &SpinVector::zeros(3)).is_err());
    }

    #[test]
    fn flow_matches_closed_form_from_origin() {
        let mut rng = SpinRng::seeded(12);
        let cfg = FlowConfig::default();
        for _ in 0..20 {
            let n = 2 + rng.index(5);
            let a = rng.vector(n).scale_real(0.8);
            let tau = rng.uniform(0.0, 2.0);
            let num = flow(&a, &SpinVector::zeros(n), tau, &cfg).unwrap();
            let exact = flow_from_origin(&a, tau, tol()).unwrap();
            assert!(num.distance(&exact) < 1e-6);
        }
    }

    #[test]
    fn transvection_round_trip() {
        let mut rng = SpinRng::seeded(13);
        let v = rng.minimal_tripotent(3);
        let b = v.scale_real(0.6);
        let a = transvection_to(&b, tol()).unwrap();
        assert!(a.distance(&v.scale_real(0.6_f64.atanh())) < 1e-12);
        let back = flow(&a, &SpinVector::zeros(3), 1.0, &FlowConfig::default()).unwrap();
        assert!(back.distance(&b) < 1e-5);
        assert_eq!(
            transvection_to(&SpinVector::zeros(3), tol()).unwrap(),
            SpinVector::zeros(3)
        );
        assert!(matches!(
            transvection_to(&SpinVector::basis(3, 0), tol()),
            Err(SpinError::OutsideBall(_))
        ));
    }

    #[test]
    fn boundary_flows_stay_in_the_ball() {
        let mut rng = SpinRng::seeded(14);
        let cfg = FlowConfig::default();
        for _ in 0..10 {
            let n = 3 + rng.index(3);
            let z = rng.with_operator_norm(n, 1.0);
            let a = rng.vector(n);
            let w = flow(&a, &z, rng.uniform(0.0, 1.0), &cfg).unwrap();
            assert!(operator_norm(&w) <= 1.0 + 1e-8);
        }
        let outside = SpinVector::basis(3, 0).scale_real(1.5);
        assert!(matches!(
            flow(&SpinVector::basis(3, 1), &outside, 1.0, &cfg),
            Err(SpinError::OutsideBall(_))
        ));
        let tight = FlowConfig {
            max_steps: 10,
            ..cfg
        };
        assert!(matches!(
            flow(&SpinVector::basis(3, 1), &SpinVector::zeros(3), 1.0, &tight),
            Err(SpinError::Integration(_))
        ));
    }

    #[test]
    fn metric_at_origin_is_the_inner_product() {
        let mut rng = SpinRng::seeded(15);
        let (x, y) = (rng.vector(4), rng.vector(4));
        let h = invariant_metric(&SpinVector::zeros(4), &x, &y, tol()).unwrap();
        assert!((h - x.inner(&y).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn metric_is_hermitian_and_positive() {
        let mut rng = SpinRng::seeded(16);
        for _ in 0..50 {
            let n = 2 + rng.index(5);
            let radius = rng.uniform(0.0, 0.9);
            let a = rng.with_operator_norm(n, radius);
            let (x, y) = (rng.vector(n), rng.vector(n));
            let hxy = invariant_metric(&a, &x, &y, tol()).unwrap();
            let hyx = invariant_metric(&a, &y, &x, tol()).unwrap();
            assert!((hxy - hyx.conj()).norm() < 1e-10 * (1.0 + hxy.norm()));
            assert!(invariant_metric(&a, &x, &x, tol()).unwrap().re > 0.0);
            // eigenvalue oracle on the inverse Bergman operator
            let binv = bergman(&a, &a)
                .unwrap()
                .matrix()
                .clone()
                .try_inverse()
                .unwrap();
            let herm = (&binv + binv.adjoint()) * c(0.5, 0.0);
            assert!(hermitian_eigenvalues(&herm)[0] >= 1e-6);
        }
        let boundary = SpinVector::basis(3, 0);
        let x = SpinVector::basis(3, 1);
        assert!(matches!(
            invariant_metric(&boundary, &x, &x, tol()),
            Err(SpinError::OutsideBall(_))
        ));
    }

    #[test]
    fn metric_invariant_under_linear_automorphisms() {
        let mut rng = SpinRng::seeded(17);
        for _ in 0..20 {
            let t = make_automorphism(rng.unimodular(), &rng.orthogonal(4), tol()).unwrap();
            let a = rng.with_operator_norm(4, 0.7);
            let (x, y) = (rng.vector(4), rng.vector(4));
            let h = invariant_metric(&a, &x, &y, tol()).unwrap();
            let ta = t.apply(&a).unwrap();
            let th =
                invariant_metric(&ta, &t.apply(&x).unwrap(), &t.apply(&y).unwrap(), tol()).unwrap();
            assert!((h - th).norm() < 1e-10);
        }
    }

    #[test]
    fn curvature_values() {
        let e = |j| SpinVector::basis(3, j);
        assert_eq!(curvature_zero(&e(0), &e(0)).unwrap().max_abs(), 0.0);
        let r = curvature_zero(&e(0), &e(1)).unwrap();
        assert!(r.approx_eq(&wedge(&e(1), &e(0)).unwrap().scale_real(2.0), 0.0));
        let mut rng = SpinRng::seeded(18);
        let (x, y, z) = (rng.vector(4), rng.vector(4), rng.vector(4));
        let lhs = curvature_zero(&(&x.scale_real(2.0) + &z), &y).unwrap();
        let rhs =
            &curvature_zero(&x, &y).unwrap().scale_real(2.0) + &curvature_zero(&z, &y).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-12));
        let swapped = curvature_zero(&y, &x).unwrap();
        assert!(swapped.approx_eq(&-&curvature_zero(&x, &y).unwrap(), 1e-15));
    }

    #[test]
    fn section_norms_follow_the_cone_and_cylinder() {
        let d1 = sample_section_d1(11).unwrap();
        assert_eq!(d1.points.len(), 1331);
        for p in &d1.points {
            assert!((p.norm - (p.x.hypot(p.y) + p.z.abs())).abs() < 1e-12);
        }
        let dual = sample_section_dual(11).unwrap();
        for p in &dual.points {
            assert!((p.norm - p.x.hypot(p.y).max(p.z.abs())).abs() < 1e-12);
        }
        assert!(sample_section_d1(1).is_err());
    }

    #[test]
    fn boundary_tripotents_lie_on_the_circles() {
        let s = sample_section_d1(25).unwrap();
        let classified = classify_d1_boundary(&s).unwrap();
        let h = s.spacing;
        assert!(classified
            .iter()
            .any(|p| p.class == BoundaryClass::NearMinimal));
        assert!(classified
            .iter()
            .any(|p| p.class == BoundaryClass::NearMaximal));
        for p in &classified {
            assert!(p.locus_distance <= 2.0 * h, "{p:?}");
        }
        assert!(classify_d1_boundary(&sample_section_dual(5).unwrap()).is_err());
    }

    #[test]
    fn section_singular_geometry() {
        for (r, z, th) in [(0.8, 0.3, 0.4), (1.5, 0.2, -2.0), (0.6, 0.55, 3.0)] {
            let a = section_vector(r * f64::cos(th), r * f64::sin(th), z);
            let sd = singular_decomposition(&a, tol()).unwrap();
            assert!((sd.s1 - (r + z)).abs() < 1e-12);
            assert!((sd.s2 - (r - z)).abs() < 1e-12);
            let half = |sign: f64| section_vector(0.5 * th.cos(), 0.5 * th.sin(), 0.5 * sign);
            assert!(sd.v1.distance(&half(1.0)) < 1e-12);
            assert!(sd.v2.distance(&half(-1.0)) < 1e-12);
            assert_eq!(classify(&sd.v1, tol()).unwrap(), TripotentClass::Minimal);
        }
    }

    #[test]
    fn csv_has_a_header() {
        let s = sample_section_d1(2).unwrap();
        let text = s.to_csv().unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y,z,norm"));
        assert_eq!(lines.count(), 8);
    }
}
