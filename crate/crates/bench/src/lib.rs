//! Shared inputs for the benchmarks.

use mfdfa_core::synth::{fgn, FbmSpec};
use mfdfa_core::{Profile, ProfileKind};

/// fGn increments with H = 0.6, the same series for every benchmark run.
pub fn fgn_increments(n: usize) -> Vec<f64> {
    fgn(&FbmSpec { n, hurst: 0.6, seed: 1 }).expect("valid fGn spec")
}

pub fn fgn_profile(n: usize) -> Profile {
    Profile::from_increments(&fgn_increments(n), ProfileKind::Cumulative).expect("non-empty profile")
}
