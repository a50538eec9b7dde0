//! Library side of the `mfdfa` command: run configuration, run directories,
//! order comparison and report rendering.

pub mod compare;
pub mod config;
pub mod pipeline;
pub mod report;

pub use compare::{compare_orders, OrderComparison, OrderRow};
pub use config::{GridParams, InputSource, RunConfig, SynthSpec};
pub use pipeline::{
    load_input, read_reports, run_pipeline, run_pipeline_cancellable, run_spectrum, sha256_hex,
    write_synth_csv, RunManifest, RunOutcome, StageTimings, INCOMPLETE_MARKER,
};

use mfdfa_core::ErrorKind;

/// Process exit status for a failure of the given kind.
pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Config => 2,
        ErrorKind::Data => 3,
        ErrorKind::Numeric => 4,
        ErrorKind::Interrupted => 130,
    }
}
