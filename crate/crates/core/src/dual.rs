//! Linear functionals on the spin factor, stored by their representative
//! `f̌` with `f(w) = <w | 2 f̌>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerance;
use crate::error::{Result, SpinError};
use crate::tripotent::singular_decomposition;
use crate::vector::SpinVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    #[serde(rename = "functional")]
    rep: SpinVector,
}

impl Functional {
    /// The representative `f̌`; the factor 2 is applied only on evaluation.
    pub fn check(&self) -> &SpinVector {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// `f(w) = <w | 2 f̌>`.
    pub fn eval(&self, w: &SpinVector) -> Result<Complex64> {
        Ok(w.inner(&self.rep)? * 2.0)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            rep: self.rep.scale_real(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.rep.check_dim(&other.rep)?;
        Ok(Self {
            rep: &self.rep + &other.rep,
        })
    }
}

/// `â(w) = <w | 2a>`.
pub fn hat(a: &SpinVector) -> Functional {
    Functional { rep: a.clone() }
}

/// `|f|_* = s1 + s2 = sqrt(2|f̌|^2 + 2|det f̌|)`.
pub fn trace_norm(f: &Functional) -> f64 {
    let a = f.check();
    (2.0 * a.norm_sqr() + 2.0 * a.det().norm()).sqrt()
}

/// A norm-one functional as a convex combination of two orthogonal pure states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDecomposition {
    pub s1: f64,
    pub v1: SpinVector,
    pub s2: f64,
    pub v2: SpinVector,
}

impl StateDecomposition {
    /// `s1 v̂1 + s2 v̂2`.
    pub fn recombine(&self) -> Functional {
        hat(&(&self.v1.scale_real(self.s1) + &self.v2.scale_real(self.s2)))
    }
}

pub fn state_decomposition(f: &Functional, tol: Tolerance) -> Result<StateDecomposition> {
    let norm = trace_norm(f);
    if !tol.close(norm, 1.0) {
        return Err(SpinError::InvalidArgument(format!(
            "state decomposition needs trace norm 1, got {norm}"
        )));
    }
    let sd = singular_decomposition(f.check(), tol)?;
    Ok(StateDecomposition {
        s1: sd.s1,
        v1: sd.v1,
        s2: sd.s2,
        v2: sd.v2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SpinRng;
    use crate::tripotent::is_algebraically_orthogonal;
    use crate::vector::{c, ZERO};

    #[test]
    fn hat_of_minimal_tripotent_has_unit_trace_norm() {
        let mut rng = SpinRng::seeded(8);
        for n in 2..=8 {
            let v = rng.minimal_tripotent(n);
            assert!((trace_norm(&hat(&v)) - 1.0).abs() < 1e-14);
        }
        let v = SpinVector::new(vec![c(0.5, 0.0), ZERO, c(0.0, 0.5)]).unwrap();
        assert!((trace_norm(&hat(&v)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_norm_values() {
        assert!((trace_norm(&hat(&SpinVector::basis(3, 0))) - 2.0).abs() < 1e-15);
        assert_eq!(trace_norm(&hat(&SpinVector::zeros(3))), 0.0);
    }

    #[test]
    fn evaluation_carries_factor_two() {
        let e1 = SpinVector::basis(3, 0);
        assert_eq!(hat(&e1).eval(&e1).unwrap(), c(2.0, 0.0));
        let zero = hat(&SpinVector::zeros(3));
        assert_eq!(zero.eval(&e1).unwrap(), ZERO);
        assert_eq!(hat(&e1).check(), &e1);
    }

    #[test]
    fn state_decomposition_is_convex() {
        let mut rng = SpinRng::seeded(21);
        let tol = Tolerance::default();
        for _ in 0..200 {
            let n = 2 + rng.index(6);
            let a = rng.vector(n);
            let f = hat(&a).scale_real(1.0 / trace_norm(&hat(&a)));
            let st = state_decomposition(&f, tol).unwrap();
            assert!((st.s1 + st.s2 - 1.0).abs() < 1e-12);
            assert!(st.s1 >= 0.0 && st.s2 >= 0.0);
            assert!(st.recombine().check().distance(f.check()) < 1e-12);
            assert!(is_algebraically_orthogonal(&st.v1, &st.v2, tol).unwrap());
        }
        let bad = hat(&SpinVector::basis(3, 0));
        assert!(matches!(
            state_decomposition(&bad, tol),
            Err(SpinError::InvalidArgument(_))
        ));
    }

    #[test]
    fn json_wraps_the_vector() {
        let f = hat(&SpinVector::from_real(&[1.0, 0.0]).unwrap());
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"functional":{"re":[1.0,0.0],"im":[0.0,0.0]}}"#
        );
    }
}
