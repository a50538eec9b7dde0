//! Multifractal detrended fluctuation analysis (MF-DFA) of time series,
//! IAAFT surrogate ensembles, and the statistical tests that separate
//! intrinsic from apparent multifractality.
//!
//! The usual flow is: load prices ([`ingest`]), take log returns, build the
//! cumulative profile, compute the fluctuation surface and the multifractal
//! spectrum ([`mfdfa`]), generate surrogates ([`surrogate`]) and compare the
//! original spectrum against the surrogate ensemble ([`mftest`]). [`assess`]
//! wires all of that together for a single series.

pub mod assess;
pub mod error;
pub mod ingest;
pub mod mfdfa;
pub mod mftest;
pub mod regression;
pub mod rng;
pub mod surrogate;
pub mod synth;
pub mod tables;

pub use assess::{assess, Assessment, AssessmentSet, SurrogateSettings};
pub use error::{Error, ErrorKind, Result};
pub use ingest::{
    display_transform, load_price_csv, log_returns, ColumnSpec, PriceSeries, ReturnSeries,
};
pub use mfdfa::{
    analyze, fluctuation_surface, hurst_spectrum, make_profile, mass_exponents,
    singularity_spectrum, AnalysisConfig, DetrendOrder, FluctuationSurface, MultifractalSpectrum,
    Profile, ProfileKind,
};
pub use mftest::{
    ensemble_statistics, quadratic_tau_fit, shape_diagnostics, spectrum_difference_test, verdict,
    width_test, EnsembleStats, QuadFit, ShapeFlags, TestReport, Verdict,
};
pub use surrogate::{ensemble, iaaft, IaaftConfig, IaaftOutcome, SurrogateEnsemble};
