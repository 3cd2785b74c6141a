//! Command-line front end for the `cvres` toolkit.

pub mod error;
pub mod files;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvres::channels::ChannelVerdict;
use cvres::maximizers::{
    balancing_beam_splitter, passive_search, qft_equidistribute, MaximizerOutcome, Objective, SearchOptions,
    DEFAULT_BUDGET, DEFAULT_SWEEPS,
};
use cvres::quantifiers::hierarchy_report;
use cvres::states::{random_state, RandomStateParams};
use cvres::symplectic::{bloch_messiah, stream_rng, williamson};
use cvres::{GaussianState, ModeTable};
use serde::Deserialize;
use serde_json::{json, Value};

pub use error::{CliError, ErrorKind};
use files::{matrix_rows, ChannelFile, StateFile, SymplecticFile};
pub use sweep::{run_sweep, run_sweep_with_threads, LogBaseFlag, SweepConfig};

#[derive(Debug, Parser)]
#[command(name = "cvres", version, about = "Resource quantifiers for multimode Gaussian states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalFlags {
    /// Tolerance for physicality checks and decomposition residuals.
    #[arg(long, global = true, default_value_t = cvres::DEFAULT_TOL)]
    pub tol: f64,
    /// Logarithm base of reported entropies.
    #[arg(long, global = true, value_enum)]
    pub log_base: Option<LogBaseFlag>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a state file; exit 0 iff the state is valid.
    Validate { file: PathBuf },
    /// All quantifiers and the hierarchy verdict as JSON.
    Report {
        file: PathBuf,
        /// Modes on one side of the cut for the entanglement entry.
        #[arg(long, value_delimiter = ',')]
        bipartition: Option<Vec<usize>>,
    },
    /// Williamson normal form of the covariance matrix.
    Williamson { file: PathBuf },
    /// Bloch-Messiah decomposition of a symplectic file, or of the
    /// Williamson symplectic of a state file.
    BlochMessiah { file: PathBuf },
    /// Look for a passive unitary maximising an objective.
    Maximize(MaximizeArgs),
    /// Apply a channel file to a state file.
    ChannelApply { state: PathBuf, channel: PathBuf },
    /// Seeded Monte-Carlo hierarchy sweep, as CSV.
    Sweep(SweepArgs),
    /// Sample a random state.
    RandomState(RandomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Balancing beam splitter for two modes, QFT for uncorrelated
    /// undisplaced states, search otherwise.
    Auto,
    Balance,
    Qft,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveFlag {
    Coherence,
    Discord,
    Entanglement,
}

#[derive(Debug, Args)]
pub struct MaximizeArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = ObjectiveFlag::Coherence)]
    pub objective: ObjectiveFlag,
    #[arg(long, value_delimiter = ',')]
    pub bipartition: Option<Vec<usize>>,
    /// Number of random candidates for the search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Coordinate-ascent sweeps after the random stage (0 disables it).
    #[arg(long, default_value_t = DEFAULT_SWEEPS)]
    pub sweeps: usize,
}

/// Mode layout flags shared by `sweep` and `random-state`.
#[derive(Debug, Args, Clone)]
pub struct ModeFlags {
    /// `<M_f>x<M_s>`: number of frequencies and spatial modes per frequency.
    #[arg(long)]
    pub modes: Option<String>,
    /// Comma-separated frequencies (default 1, 2, …, M_f).
    #[arg(long, value_delimiter = ',')]
    pub omegas: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub modes: ModeFlags,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub nbar_max: Option<f64>,
    #[arg(long)]
    pub displacement_scale: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub bipartition: Option<Vec<usize>>,
    /// Worker threads (default: all cores). Does not affect the output.
    #[arg(long)]
    pub threads: Option<usize>,
    /// JSON file with sweep parameters; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[command(flatten)]
    pub modes: ModeFlags,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = cvres::symplectic::DEFAULT_R_MAX)]
    pub r_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nbar_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub displacement_scale: f64,
}

/// Frequencies and spatial-mode count from `--modes` / `--omegas`.
pub fn resolve_modes(flags: &ModeFlags) -> Result<Option<(Vec<f64>, usize)>, CliError> {
    let parsed = match &flags.modes {
        None => None,
        Some(text) => {
            let (f, s) = text
                .split_once('x')
                .ok_or_else(|| CliError::invalid(format!("--modes expects <M_f>x<M_s>, got {text:?}")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::invalid(format!("--modes expects <M_f>x<M_s>, got {text:?}")))
            };
            Some((parse(f)?, parse(s)?))
        }
    };
    match (parsed, &flags.omegas) {
        (None, None) => Ok(None),
        (Some((mf, ms)), None) => Ok(Some(((1..=mf).map(|k| k as f64).collect(), ms))),
        (None, Some(omegas)) => Ok(Some((omegas.clone(), 1))),
        (Some((mf, ms)), Some(omegas)) => {
            if omegas.len() != mf {
                return Err(CliError::invalid(format!("--omegas lists {} frequencies but --modes says {mf}", omegas.len())));
            }
            Ok(Some((omegas.clone(), ms)))
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path, tol: f64) -> Result<GaussianState, CliError> {
    read_json::<StateFile>(path)?.to_state(tol)
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable");
    text.push('\n');
    text
}

/// Output of a successful command, plus the exit code to use (non-zero only
/// for `validate` on an invalid state).
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, exit_code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let base = g.log_base.unwrap_or_default();
    match &cli.command {
        Command::Validate { file } => validate(file, g.tol),
        Command::Report { file, bipartition } => {
            let s = load_state(file, g.tol)?;
            let report = hierarchy_report(&s, bipartition.as_deref(), base.base())?;
            Ok(Output::ok(pretty(&report)))
        }
        Command::Williamson { file } => {
            let s = load_state(file, g.tol)?;
            let w = williamson(s.covariance(), g.tol)?;
            Ok(Output::ok(pretty(&json!({
                "nu": w.nu,
                "symplectic": matrix_rows(&w.symplectic),
                "residual": w.residual,
                "symplectic_residual": w.symplectic_residual,
            }))))
        }
        Command::BlochMessiah { file } => {
            let matrix = symplectic_input(file, g.tol)?;
            let bm = bloch_messiah(&matrix, g.tol)?;
            Ok(Output::ok(pretty(&json!({
                "o1": matrix_rows(&bm.o1),
                "squeezing": bm.squeezing,
                "o2": matrix_rows(&bm.o2),
                "residual": bm.residual,
                "factor_defect": bm.factor_defect,
            }))))
        }
        Command::Maximize(args) => maximize(args, g.tol),
        Command::ChannelApply { state, channel } => {
            let s = load_state(state, g.tol)?;
            let ch = read_json::<ChannelFile>(channel)?.to_channel()?;
            match ch.validate(g.tol) {
                ChannelVerdict::Ok => {}
                ChannelVerdict::NotCp { min_eigenvalue } => {
                    return Err(CliError::new(
                        ErrorKind::Physicality,
                        format!("channel is not completely positive (min eigenvalue {min_eigenvalue:e})"),
                    ))
                }
                ChannelVerdict::Malformed(why) => return Err(CliError::invalid(why)),
            }
            let out = ch.map(&s)?;
            Ok(Output::ok(pretty(&StateFile::from_state(&out, None))))
        }
        Command::Sweep(args) => {
            let cfg = sweep_config(args, g)?;
            Ok(Output::ok(run_sweep_with_threads(&cfg, args.threads)?))
        }
        Command::RandomState(args) => {
            let (omegas, ms) = resolve_modes(&args.modes)?.unwrap_or((vec![1.0], 2));
            let modes = ModeTable::new(&omegas, ms)?;
            let params = RandomStateParams {
                r_max: args.r_max,
                nbar_max: args.nbar_max,
                displacement_scale: args.displacement_scale,
            };
            let s = random_state(&modes, &params, &mut stream_rng(args.seed, 0));
            let meta = json!({ "seed": args.seed, "r_max": args.r_max, "nbar_max": args.nbar_max,
                               "displacement_scale": args.displacement_scale });
            Ok(Output::ok(pretty(&StateFile::from_state(&s, Some(meta)))))
        }
    }
}

fn validate(file: &Path, tol: f64) -> Result<Output, CliError> {
    let raw = read_json::<StateFile>(file)?.to_raw_state()?;
    let verdict = raw.validate(tol);
    let violations: Vec<String> = verdict.violations.iter().map(ToString::to_string).collect();
    let text = pretty(&json!({ "ok": verdict.is_ok(), "violations": violations }));
    let exit_code = if verdict.is_ok() {
        0
    } else if verdict.is_physicality_failure() {
        ErrorKind::Physicality.exit_code()
    } else {
        ErrorKind::InvalidInput.exit_code()
    };
    Ok(Output { text, exit_code })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SymplecticSource {
    Matrix(SymplecticFile),
    State(StateFile),
}

fn symplectic_input(path: &Path, tol: f64) -> Result<nalgebra::DMatrix<f64>, CliError> {
    match read_json::<SymplecticSource>(path)? {
        SymplecticSource::Matrix(f) => Ok(f.to_matrix()?.1),
        SymplecticSource::State(f) => {
            let s = f.to_state(tol)?;
            Ok(williamson(s.covariance(), tol)?.symplectic)
        }
    }
}

fn maximize(args: &MaximizeArgs, tol: f64) -> Result<Output, CliError> {
    let s = load_state(&args.file, tol)?;
    let objective = match args.objective {
        ObjectiveFlag::Coherence => Objective::Coherence,
        ObjectiveFlag::Discord => Objective::Discord,
        ObjectiveFlag::Entanglement => Objective::EntanglementPure(
            args.bipartition.clone().ok_or_else(|| CliError::invalid("--objective entanglement needs --bipartition"))?,
        ),
    };
    let search = |objective: Objective| {
        let options = SearchOptions { budget: args.samples, seed: args.seed, refine: args.sweeps > 0, sweeps: args.sweeps };
        passive_search(&s, objective, &options)
    };
    let two_mode = s.num_modes() == 2 && s.modes().same_frequency(0, 1);
    let (method, result) = match (args.method, &objective) {
        (Method::Balance, _) | (Method::Qft, _) if objective != Objective::Coherence => {
            return Err(CliError::invalid("balance and qft only maximise coherence"))
        }
        (Method::Balance, _) => ("balance", balancing_beam_splitter(&s)?),
        (Method::Qft, _) => ("qft", qft_equidistribute(&s, tol)?),
        (Method::Search, _) => ("search", search(objective.clone())?),
        (Method::Auto, Objective::Coherence) if two_mode => ("balance", balancing_beam_splitter(&s)?),
        (Method::Auto, Objective::Coherence) => match qft_equidistribute(&s, tol) {
            Ok(out) => ("qft", out),
            Err(cvres::Error::Precondition(_)) => ("search", search(Objective::Coherence)?),
            Err(e) => return Err(e.into()),
        },
        (Method::Auto, _) => ("search", search(objective.clone())?),
    };
    Ok(Output::ok(pretty(&outcome_json(method, &result))))
}

fn outcome_json(method: &str, out: &MaximizerOutcome) -> Value {
    let u = out.transform.unitary();
    let re: Vec<Vec<f64>> = (0..u.nrows()).map(|i| (0..u.ncols()).map(|j| u[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..u.nrows()).map(|i| (0..u.ncols()).map(|j| u[(i, j)].im).collect()).collect();
    json!({
        "method": method,
        "objective": out.objective.name(),
        "achieved": out.achieved,
        "target": out.target,
        "gap": out.gap,
        "used_fallback": out.used_fallback,
        "unitary": { "re": re, "im": im },
        "orthogonal": matrix_rows(out.transform.orthogonal()),
        "output": StateFile::from_state(&out.output, None),
    })
}

fn sweep_config(args: &SweepArgs, g: &GlobalFlags) -> Result<SweepConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => read_json::<SweepConfig>(path)?,
        None => SweepConfig::default(),
    };
    if let Some((omegas, ms)) = resolve_modes(&args.modes)? {
        cfg.omegas = omegas;
        cfg.spatial_modes = ms;
    }
    if let Some(x) = args.samples {
        cfg.samples = x;
    }
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if let Some(x) = args.r_max {
        cfg.r_max = x;
    }
    if let Some(x) = args.nbar_max {
        cfg.nbar_max = x;
    }
    if let Some(x) = args.displacement_scale {
        cfg.displacement_scale = x;
    }
    if args.bipartition.is_some() {
        cfg.bipartition = args.bipartition.clone();
    }
    if let Some(b) = g.log_base {
        cfg.log_base = b;
    }
    cfg.tol = g.tol;
    Ok(cfg)
}

/// Runs the parsed command, writes its output, and returns the exit code.
/// Errors go to `stderr` as JSON.
pub fn main_with(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = run(cli).and_then(|out| {
        match &cli.global.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => stdout.write_all(out.text.as_bytes())?,
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
