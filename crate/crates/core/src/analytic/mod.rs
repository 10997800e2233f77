//! Floating-point checks: theta functions, the function `A_g`, lattice
//! counts, Bergman kernels and Poincaré series coefficients.
//!
//! Every truncated sum returns an [`Estimate`] carrying an explicit bound on
//! what was dropped.

pub mod agfun;
pub mod bergman;
pub mod cosets;
pub mod poincare;
pub mod theta;

pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use agfun::{
    a_g, a_gamma_pair, count_c, count_cy, CountQuery, CountResult, COUNT_BUDGET, LEM_COUNT_CONSTANT,
};
pub use bergman::{
    bergman_geometric, bergman_majorant, bergman_scan, bergman_spectral_delta,
    petersson_norm_numeric,
};
pub use cosets::{coset_reps_gamma0, gamma0_equivalent};
pub use poincare::{
    bessel_j, deviation_envelope, kloosterman, kloosterman_residues, poincare_coeff,
    poincare_deviations,
};
pub use theta::{invariant_phi, theta_eval, vartheta, vartheta_scan, ScanGrid, ScanReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("{what}: tail bound {estimate:e} not reached within the term budget")]
    TailUnachievable { what: &'static str, estimate: f64 },
    #[error("enumeration needs more than {budget} candidates")]
    BudgetExceeded { budget: u64 },
    #[error("level {0} is not square-free")]
    NotSquareFree(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("quadrature did not converge (last relative change {0:e})")]
    Quadrature(f64),
    #[error("Jacobi form: {0}")]
    Jacobi(#[from] crate::jacobi::JacobiError),
}

/// A value with a bound on the dropped part of its defining series.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub tail_bound: f64,
}

/// Integer 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Adjugate; the inverse when `det = 1`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn to_real(&self) -> RMat2 {
        RMat2::new(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}

/// Real 2x2 matrix acting by Möbius transformations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RMat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RMat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &RMat2) -> RMat2 {
        RMat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> RMat2 {
        let det = self.det();
        RMat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    /// `j(g, tau) = c tau + d`.
    pub fn j(&self, tau: Complex64) -> Complex64 {
        tau * self.c + self.d
    }

    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (tau * self.a + self.b) / self.j(tau)
    }
}

pub(crate) fn check_upper(tau: Complex64) -> Result<(), AnalyticError> {
    if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
        Ok(())
    } else {
        Err(AnalyticError::InvalidInput(format!(
            "{tau} is not in the upper half-plane"
        )))
    }
}

/// `(n - 1)!` as a float.
pub(crate) fn gamma_int(n: u32) -> f64 {
    (1..n).map(f64::from).product()
}
