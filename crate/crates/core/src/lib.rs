//! Dyadic polynomial frames, integral means, weighted Bloch-type norms and
//! coefficient criteria on the unit disk.
//!
//! Functions are represented by truncated Taylor series
//! ([`CoefficientSeries`]). Everything here needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod criteria;
mod error;
pub mod fft;
pub mod frame;
pub mod gauss;
pub mod operators;
pub mod quadrature;
pub mod series;
pub mod sum;

pub use criteria::{
    frame_norm_b1, frame_norm_bloch, frame_norm_loglog, k_alpha, little_bloch_profile,
    log_sum, monotone_check, s_alpha, CriterionValue, LogLogMode, MembershipVerdict,
    MonotoneCheck,
};
pub use error::{Error, Result};
pub use frame::{
    block_support, build_vn, bump_omega, delta_polynomial, phi, reconstruct, BumpFunction, Frame,
    FramePolynomial,
};
pub use num_complex::Complex64;
pub use operators::{
    cesaro, ell1_minus1_norm, hardy_inequality_gap, libera_coeff, libera_derivative_bound_gap,
    libera_integral, pairing, PairingValue,
};
pub use quadrature::{
    DiscretizationSides, GapExponents, MeanValue, NormResult, NormalFunction, NormalityReport, Quadrature, QuadratureConfig,
    RadialGrid, RadialProfile, WeightSpec,
};
pub use series::CoefficientSeries;
pub use sum::CompensatedSum;
