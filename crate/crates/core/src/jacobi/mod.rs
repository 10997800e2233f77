//! Jacobi forms of level 1, the index-raising operators `V_m`, the lift to
//! degree 2 and the checks run on its Fourier coefficients.

pub mod classnum;
pub mod form;
pub mod lift;
pub mod spinor;

use thiserror::Error;

pub use classnum::{cohen_h, hurwitz_class_number};
pub use form::{
    hecke_tp_index1, jacobi_cusp_basis, jacobi_eisenstein, theta_decompose, vm_coeff, vm_coeff_at,
    vm_direct_eval, JacobiForm, NumValue, ThetaDecomposition,
};
pub use lift::{maass_check, sk_lift, MaassReport, SiegelCoeffTable};
pub use spinor::{
    characterization_check, lam_symbol, petersson_transfer, spinor_coeffs, CharacterizationReport,
    EulerData,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobiError {
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(i64),
    #[error("unsupported weight {0}")]
    UnsupportedWeight(u32),
    #[error("requested discriminant {needed} exceeds the stored bound {dmax}")]
    PrecisionExhausted { needed: i64, dmax: i64 },
    #[error("construction is not cuspidal: {0}")]
    NotCuspidal(String),
    #[error("operation needs index 1, got index {0}")]
    IndexNotOne(u64),
    #[error("operation is implemented for level 1 only, got level {0}")]
    LevelNotOne(u64),
    #[error("index must be positive")]
    ZeroIndex,
    #[error("coefficients depend on more than (D, r mod 2m) at D={0}")]
    InconsistentReduction(i64),
    #[error("truncation estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Truncation { estimate: f64, tolerance: f64 },
    #[error("jmax must be at most 4, got {0}")]
    JmaxTooLarge(usize),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("level {0} is not square-free")]
    NotSquareFree(u64),
    #[error("invalid table: {0}")]
    InvalidTable(String),
}
