//! Exact and numeric verification laboratory for Saito-Kurokawa lifts of
//! square-free level.
//!
//! * [`exact`]: rationals, Laurent polynomials, q-series.
//! * [`hecke`]: Satake images of the degree-2 Hecke operators at `p`.
//! * [`inner`]: the inner-product matrix `M_p` and the old-basis formulas.
//! * [`jacobi`]: Jacobi forms of index 1, `V_m`, the lift and its checks.
//! * [`analytic`]: floating-point checks (theta, `A_g`, counts, kernels).

pub mod analytic;
pub mod exact;
pub mod hecke;
pub mod inner;
pub mod jacobi;
