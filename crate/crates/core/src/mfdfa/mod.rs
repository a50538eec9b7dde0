//! Multifractal detrended fluctuation analysis.
//!
//! A profile is cut into boxes of size `s` (covering the series from both
//! ends when `s` does not divide its length), each box is detrended with a
//! least-squares polynomial, and the box RMS values are averaged with
//! generalized power means of order `q`. The log-log slopes of those means
//! give `H(q)`, from which `tau(q)`, `alpha(q)` and `f(alpha)` follow.

mod config;
mod detrend;
mod fluctuation;
mod profile;
mod spectrum;

pub use config::{log_scale_grid, q_grid, AnalysisConfig, DetrendOrder};
pub use detrend::{detrend_segment, PolynomialBasis};
pub use fluctuation::{
    fluctuation_surface, generalized_mean, local_fluctuation, overall_fluctuation,
    partition_segments, FluctuationSurface, GeneralizedMean, DEGENERATE_BOX_FLOOR,
};
pub use profile::{make_profile, Profile, ProfileKind};
pub use spectrum::{
    analyze, hurst_spectrum, mass_exponents, singularity_spectrum, HurstFit, MultifractalSpectrum,
    SingularityCurve,
};
