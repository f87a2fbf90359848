//! Exact construction and spectral certification of spline affine systems.
//!
//! The crate builds a family of antiperiodic spline generators by iterated
//! integration of the basic square wave, expands them over the Walsh system
//! grouped by square-wave chaos order, and certifies universal Riesz bounds
//! through exact Gram matrices of finite sections. All function data is exact
//! rational (or exact in Q[sqrt(2)] where dyadic normalizations appear);
//! floating point enters only inside the symmetric eigensolver, and every
//! certificate reports the achieved residual.

pub mod chaos;
pub mod error;
pub mod index;
pub mod jacobi;
pub mod operators;
pub mod poly;
pub mod quadratic;
pub mod rational;
pub mod riesz;
pub mod scaled;

pub use error::{Error, Result};
pub use index::{
    chaos_order, haar_fn, natural_index, natural_multiindex, paley_index, paley_multiindex,
    rademacher, walsh_fn, walsh_matrix, walsh_spectrum, MultiIndex, WalshMatrixLevel,
};
pub use operators::{
    affine_element, affine_haar_element, affine_walsh_element, build_spline, dilate,
    dilate_modulate, granados_element, granados_generator, integrate_antiperiodize,
    is_antiperiodic, is_smooth_up_to, sawtooth, square_wave, SplineSpec,
};
pub use poly::PiecewisePoly;
pub use quadratic::QuadraticNumber;
pub use rational::{decimal_string, pow2, rat, rat_int, Rational};
pub use scaled::ScaledPoly;

pub use chaos::{
    decompose, gamma, is_simple_spectrum, orthogonality_report, truncate_to_walsh_index,
    walsh_coeff, ChaosDecomposition, OrthogonalityReport,
};
pub use riesz::{
    deviation_norm, deviation_system, extreme_eigenvalues, full_report, gram, haar_system,
    norm_sum_certificate, norm_sum_from_decomposition, section_bounds, spline_system,
    BoundsCertificate, FullReport, GramMatrix, NormSumCertificate, SectionBounds,
};
