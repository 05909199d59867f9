//! Command-line front end. Exit codes: 0 success, 1 computation failure or
//! failed validation, 2 usage or configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analytic::{CoverageModel, Method};
use crate::config::ConfigFile;
use crate::error::CoverageError;
use crate::experiments::{self, Axis, SweepParam, SweepSpec, ValidationSpec, PRESET_NAMES};
use crate::monte_carlo::Simulator;

#[derive(Debug, Parser)]
#[command(name = "uav-coverage", version, about = "Coverage probability of cellular networks serving aerial and ground users")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file, or `defaults` for the built-in reference scenario.
    #[arg(long, value_name = "PATH")]
    config: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Overrides `simulation.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coverage probability of the configured scenario.
    Coverage {
        #[command(flatten)]
        common: Common,
        /// analytic, rayleigh or monte-carlo.
        #[arg(long, default_value = "analytic")]
        method: String,
    },
    /// Parameter sweep written as CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Figure preset: figure2, figure3-ground, figure3-aerial or figure4.
        #[arg(long)]
        preset: Option<String>,
        /// Swept parameter; repeat for a second axis.
        #[arg(long = "sweep-param", value_name = "NAME")]
        sweep_param: Vec<String>,
        /// Grid of the matching --sweep-param: `start:stop:step` or a comma list.
        #[arg(long = "sweep-grid", value_name = "GRID")]
        sweep_grid: Vec<String>,
        /// Comma-separated methods.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// Leave wall_time_s empty so output is byte-reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Monte Carlo coverage estimate.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Analytic versus simulation cross-check report.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<CoverageError> for Failure {
    fn from(e: CoverageError) -> Self {
        match e {
            CoverageError::Config(_) | CoverageError::InvalidParameter { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Compute(format!("i/o error: {e}"))
}

fn load_config(common: &Common) -> Result<ConfigFile, Failure> {
    let mut cfg = match common.config.as_deref() {
        None | Some("defaults") => ConfigFile::default(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read config `{path}`: {e}")))?;
            ConfigFile::parse(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?
        }
    };
    if let Some(seed) = common.seed {
        cfg.simulation.seed = seed;
    }
    Ok(cfg)
}

fn parse_grid(param: SweepParam, grid: &str) -> Result<Axis, Failure> {
    let parts: Vec<&str> = grid.split(':').collect();
    if param != SweepParam::Fading && parts.len() == 3 {
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("bad number `{s}` in grid `{grid}`")))
        };
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0 && stop >= start) {
            return Err(Failure::Usage(format!("grid `{grid}` needs step > 0 and stop >= start")));
        }
        return Ok(Axis::range(param, start, stop, step));
    }
    let values = grid
        .split(',')
        .map(|v| param.parse_value(v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Axis::new(param, values))
}

fn sweep_spec(
    cfg: &ConfigFile,
    explicit_config: bool,
    preset: Option<&str>,
    params: &[String],
    grids: &[String],
    methods: &[String],
) -> Result<SweepSpec, Failure> {
    let base = cfg.scenario()?;
    let mut spec = match preset {
        Some(name) => {
            let mut spec = experiments::preset(name).ok_or_else(|| {
                Failure::Usage(format!("unknown preset `{name}`; expected one of {}", PRESET_NAMES.join(", ")))
            })?;
            if explicit_config {
                let ue_height = spec.base.ue_height;
                spec.base = base;
                if name.starts_with("figure3") {
                    spec.base.ue_height = ue_height;
                }
            }
            if !params.is_empty() {
                return Err(Failure::Usage("--preset cannot be combined with --sweep-param".into()));
            }
            spec
        }
        None => {
            if params.is_empty() || params.len() > 2 {
                return Err(Failure::Usage("give --preset or one or two --sweep-param/--sweep-grid pairs".into()));
            }
            if params.len() != grids.len() {
                return Err(Failure::Usage("every --sweep-param needs a matching --sweep-grid".into()));
            }
            let axes = params
                .iter()
                .zip(grids)
                .map(|(p, g)| {
                    let param = SweepParam::from_name(p).ok_or_else(|| {
                        let names: Vec<&str> = SweepParam::ALL.iter().map(|p| p.name()).collect();
                        Failure::Usage(format!("unknown sweep parameter `{p}`; expected one of {}", names.join(", ")))
                    })?;
                    parse_grid(param, g)
                })
                .collect::<Result<Vec<_>, _>>()?;
            SweepSpec::new("custom", base, axes, vec![Method::Analytic])
        }
    };
    if !methods.is_empty() {
        spec.methods = methods
            .iter()
            .map(|m| Method::from_name(m.trim()).ok_or_else(|| Failure::Usage(format!("unknown method `{m}`"))))
            .collect::<Result<_, _>>()?;
    }
    spec.quadrature = cfg.quadrature_spec();
    spec.simulation = cfg.simulation_spec()?;
    spec.validate()?;
    Ok(spec)
}

fn emit(common: &Common, text: &[u8], out: &mut dyn Write) -> Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, text).map_err(io_failure),
        None => out.write_all(text).map_err(io_failure),
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Coverage { common, method } => {
            let cfg = load_config(&common)?;
            let method = Method::from_name(&method).ok_or_else(|| Failure::Usage(format!("unknown method `{method}`")))?;
            let scn = cfg.scenario()?;
            let text = match method {
                Method::MonteCarlo => {
                    let est = Simulator::new(scn, cfg.simulation_spec()?)?.estimate_coverage();
                    format!(
                        "method = \"{method}\"\nprobability = {}\nerror_estimate = {}\nnum_drops = {}\n",
                        est.probability, est.std_error, est.num_drops
                    )
                }
                _ => {
                    let model = CoverageModel::new(scn, cfg.quadrature_spec())?;
                    let res = if method == Method::Analytic {
                        model.coverage()?
                    } else {
                        model.rayleigh_coverage()?
                    };
                    let d = &res.diagnostics;
                    format!(
                        "method = \"{method}\"\nprobability = {}\nerror_estimate = {}\nouter_radius = {}\ninner_radius = {}\nouter_evaluations = {}\ninner_evaluations = {}\ntruncation_capped = {}\n",
                        res.probability,
                        res.error_estimate,
                        d.outer_radius,
                        d.inner_radius,
                        d.outer_evaluations,
                        d.inner_evaluations,
                        d.truncation_capped
                    )
                }
            };
            emit(&common, text.as_bytes(), out)
        }
        Command::Sweep {
            common,
            preset,
            sweep_param,
            sweep_grid,
            methods,
            no_timing,
        } => {
            let cfg = load_config(&common)?;
            let explicit = common.config.as_deref().is_some_and(|c| c != "defaults");
            let mut spec = sweep_spec(&cfg, explicit, preset.as_deref(), &sweep_param, &sweep_grid, &methods)?;
            spec.record_timing = !no_timing;
            let result = experiments::sweep(&spec)?;
            let mut csv = Vec::new();
            result.write_csv(&mut csv).map_err(|e| Failure::Compute(e.to_string()))?;
            emit(&common, &csv, out)?;
            for (row, msg) in result.failures() {
                let _ = writeln!(err, "row {} {} {}: {msg}", row.param_1, row.param_2.map(|v| v.to_string()).unwrap_or_default(), row.method);
            }
            let assessments = match preset.as_deref() {
                Some("figure2") => experiments::assess_figure2(&result),
                Some("figure4") => experiments::assess_figure4(&result, spec.base.bs_height),
                Some("figure3-aerial") | Some("figure3-ground") => experiments::assess_plateau(&result, 0.01),
                _ => Vec::new(),
            };
            for a in &assessments {
                let _ = writeln!(err, "{a}");
            }
            if result.failures().next().is_some() {
                return Err(Failure::Compute("some sweep rows failed".into()));
            }
            Ok(())
        }
        Command::Simulate { common } => {
            let cfg = load_config(&common)?;
            let sim = Simulator::new(cfg.scenario()?, cfg.simulation_spec()?)?;
            let est = sim.estimate_coverage();
            let d = est.diagnostics;
            let text = format!(
                "probability = {}\nstd_error = {}\nnum_drops = {}\ndisk_radius = {}\nseed = {}\nmean_bs_count = {}\nempty_resamples = {}\nsingle_bs_drops = {}\n",
                est.probability,
                est.std_error,
                est.num_drops,
                sim.spec().disk_radius,
                sim.spec().seed,
                d.mean_bs_count,
                d.empty_resamples,
                d.single_bs_drops
            );
            emit(&common, text.as_bytes(), out)
        }
        Command::Validate { common } => {
            let cfg = load_config(&common)?;
            let simulation = cfg.simulation_spec()?;
            if simulation.conditioning != Default::default() {
                return Err(Failure::Usage("validate runs its own conditioning; remove serving_* from [simulation]".into()));
            }
            let spec = ValidationSpec {
                quadrature: cfg.quadrature_spec(),
                simulation,
                conditional_drops: simulation.num_drops,
                ..ValidationSpec::default()
            };
            let report = experiments::validate(&cfg.scenario()?, &spec)?;
            emit(&common, report.to_string().as_bytes(), out)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Compute("validation checks failed".into()))
            }
        }
    }
}

fn workers(cmd: &Command) -> Option<usize> {
    match cmd {
        Command::Coverage { common, .. }
        | Command::Sweep { common, .. }
        | Command::Simulate { common }
        | Command::Validate { common } => common.workers,
    }
}

/// Runs the program on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let threads = match workers(&cli.command) {
        Some(0) => {
            let _ = writeln!(err, "error: --workers must be >= 1");
            return 2;
        }
        Some(n) => n,
        None => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 1;
        }
    };
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let outcome = pool.install(|| execute(cli.command, &mut obuf, &mut ebuf));
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
