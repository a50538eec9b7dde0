use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mfdfa_cli::{
    compare_orders, exit_code, read_reports, run_pipeline_cancellable, run_spectrum, write_synth_csv, GridParams,
    InputSource, RunConfig, SynthSpec,
};
use mfdfa_core::mftest::ExternalRow;
use mfdfa_core::{DetrendOrder, Error, ProfileKind, Result};

static CANCEL: AtomicBool = AtomicBool::new(false);

#[derive(Parser)]
#[command(name = "mfdfa", version, about = "MF-DFA with IAAFT surrogate tests for intrinsic multifractality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: spectra, surrogate ensemble, tests and reports.
    Analyze(AnalyzeArgs),
    /// MF-DFA only, without surrogates.
    Spectrum(SpectrumArgs),
    /// Write a synthetic series as a price file.
    Synth(SynthArgs),
    /// Compare the two detrending orders of a finished run.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Cascade,
    Fgn,
    WhiteNoise,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Cumulative,
    Levels,
}

#[derive(Args)]
struct GeneratorArgs {
    /// Length for fgn and white-noise.
    #[arg(long, env = "MFDFA_SYNTH_N", default_value_t = 1 << 14)]
    n: usize,
    /// Hurst index for fgn.
    #[arg(long, env = "MFDFA_SYNTH_HURST", default_value_t = 0.5)]
    hurst: f64,
    /// Cascade weight p in (0, 0.5].
    #[arg(long, env = "MFDFA_SYNTH_P", default_value_t = 0.3)]
    p: f64,
    /// Cascade depth; the series has 2^levels points.
    #[arg(long, env = "MFDFA_SYNTH_LEVELS", default_value_t = 16)]
    levels: u32,
    /// Randomize the cascade weight side with this seed.
    #[arg(long, env = "MFDFA_SYNTH_SHUFFLE")]
    shuffle_seed: Option<u64>,
    /// Generator seed.
    #[arg(long, env = "MFDFA_SYNTH_SEED", default_value_t = 0)]
    synth_seed: u64,
}

impl GeneratorArgs {
    fn spec(&self, kind: Generator) -> SynthSpec {
        match kind {
            Generator::Cascade => SynthSpec::Cascade {
                levels: self.levels,
                p: self.p,
                shuffle_seed: self.shuffle_seed,
            },
            Generator::Fgn => SynthSpec::Fgn {
                n: self.n,
                hurst: self.hurst,
                seed: self.synth_seed,
            },
            Generator::WhiteNoise => SynthSpec::WhiteNoise {
                n: self.n,
                seed: self.synth_seed,
            },
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Price file with a header row.
    #[arg(long, env = "MFDFA_INPUT", conflicts_with = "synth", required_unless_present = "synth")]
    input: Option<PathBuf>,
    #[arg(long, env = "MFDFA_DATE_COL", default_value = "date")]
    date_col: String,
    #[arg(long, env = "MFDFA_VALUE_COL", default_value = "value")]
    value_col: String,
    /// Analyze a generated series instead of a file.
    #[arg(long, env = "MFDFA_SYNTH", value_enum)]
    synth: Option<Generator>,
    #[command(flatten)]
    generator: GeneratorArgs,
}

#[derive(Args)]
struct AnalysisArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Detrending orders (1, 2), comma separated.
    #[arg(long, env = "MFDFA_DETREND_ORDER", value_delimiter = ',', default_value = "1,2")]
    detrend_order: Vec<u8>,
    #[arg(long, env = "MFDFA_Q_MIN", default_value_t = -5.0, allow_hyphen_values = true)]
    q_min: f64,
    #[arg(long, env = "MFDFA_Q_MAX", default_value_t = 5.0, allow_hyphen_values = true)]
    q_max: f64,
    #[arg(long, env = "MFDFA_Q_STEP", default_value_t = 0.25)]
    q_step: f64,
    #[arg(long, env = "MFDFA_S_MIN", default_value_t = 20)]
    s_min: usize,
    #[arg(long, env = "MFDFA_S_MAX", default_value_t = 316)]
    s_max: usize,
    #[arg(long, env = "MFDFA_S_COUNT", default_value_t = 30)]
    s_count: usize,
    /// What gets detrended: the cumulative return path or price levels.
    #[arg(long, env = "MFDFA_PROFILE", value_enum, default_value = "cumulative")]
    profile: ProfileArg,
    /// Output directory for the run.
    #[arg(long, env = "MFDFA_OUT")]
    out: PathBuf,
    /// Threads for the parallel stages (default: all cores).
    #[arg(long, env = "MFDFA_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    analysis: AnalysisArgs,
    #[arg(long, env = "MFDFA_SURROGATES", default_value_t = 1000)]
    surrogates: usize,
    #[arg(long, env = "MFDFA_SEED", default_value_t = 0)]
    seed: u64,
    /// Significance level of the tests.
    #[arg(long, env = "MFDFA_ALPHA_LEVEL", default_value_t = 0.05)]
    alpha_level: f64,
    #[arg(long, env = "MFDFA_MAX_ITER", default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, env = "MFDFA_TOLERANCE", default_value_t = 1e-8)]
    tolerance: f64,
    /// Also write every surrogate series.
    #[arg(long, env = "MFDFA_EXPORT_SURROGATES")]
    export_surrogates: bool,
    /// JSON array of externally computed rows to show beside the results.
    #[arg(long, env = "MFDFA_EXTERNAL")]
    external: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(value_enum)]
    kind: Generator,
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Multiplier on the increments before they become log returns.
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long, env = "MFDFA_OUT")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Finished run directory holding order1/ and order2/.
    run_dir: PathBuf,
    /// Where to write the comparison (default: the run directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn input_source(a: &InputArgs) -> InputSource {
    match (&a.input, a.synth) {
        (_, Some(kind)) => InputSource::Synth {
            spec: a.generator.spec(kind),
        },
        (Some(path), None) => InputSource::Csv {
            path: path.clone(),
            date_col: a.date_col.clone(),
            value_col: a.value_col.clone(),
        },
        (None, None) => unreachable!("clap requires --input or --synth"),
    }
}

fn base_config(a: &AnalysisArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(input_source(&a.input), a.out.clone());
    cfg.orders = a
        .detrend_order
        .iter()
        .map(|&d| DetrendOrder::try_from(d))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidConfig(format!("{e}")))?;
    cfg.grid = GridParams {
        q_min: a.q_min,
        q_max: a.q_max,
        q_step: a.q_step,
        s_min: a.s_min,
        s_max: a.s_max,
        s_count: a.s_count,
    };
    cfg.profile = match a.profile {
        ProfileArg::Cumulative => ProfileKind::Cumulative,
        ProfileArg::Levels => ProfileKind::Levels { anchor: 100.0 },
    };
    cfg.workers = a.workers;
    Ok(cfg)
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let mut cfg = base_config(&args.analysis)?;
    cfg.ensemble_size = args.surrogates;
    cfg.base_seed = args.seed;
    cfg.significance = args.alpha_level;
    cfg.max_iterations = args.max_iter;
    cfg.spectrum_tolerance = args.tolerance;
    cfg.export_surrogates = args.export_surrogates;
    if let Some(path) = &args.external {
        let text = std::fs::read(path).map_err(|_| Error::FileNotFound(path.clone()))?;
        cfg.external = serde_json::from_slice::<Vec<ExternalRow>>(&text)?;
    }
    let outcome = run_pipeline_cancellable(&cfg, &CANCEL)?;
    for r in &outcome.reports {
        println!("{}", mfdfa_cli::report::render(r));
    }
    if let Some(c) = &outcome.comparison {
        println!("{}", c.to_text());
    }
    println!("artifacts in {}", outcome.out_dir.display());
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> Result<()> {
    let cfg = base_config(&args.analysis)?;
    let manifest = run_spectrum(&cfg)?;
    println!("{}: spectra written to {}", manifest.label, cfg.out_dir.display());
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let spec = args.generator.spec(args.kind);
    let inc = spec.increments()?;
    write_synth_csv(&args.out, &inc, args.scale.unwrap_or_else(|| spec.default_price_scale()))?;
    println!("{} points written to {}", inc.len() + 1, args.out.display());
    Ok(())
}

fn compare(args: CompareArgs) -> Result<()> {
    let reports = read_reports(&args.run_dir)?;
    let [a, b] = reports.as_slice() else {
        return Err(Error::InvalidConfig(format!(
            "{} does not hold reports for both detrending orders",
            args.run_dir.display()
        )));
    };
    let c = compare_orders(a, b)?;
    let out = args.out.unwrap_or(args.run_dir);
    std::fs::create_dir_all(&out)?;
    mfdfa_cli::pipeline::write_comparison(&out, &c)?;
    print!("{}", c.to_text());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = ctrlc::set_handler(|| CANCEL.store(true, Ordering::Relaxed)) {
        log::warn!("cannot install interrupt handler: {e}");
    }
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Synth(a) => synth(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()) as u8)
        }
    }
}
