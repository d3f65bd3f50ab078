use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use grprep_core::apps::MAX_INTERFERENCE_QUBITS;
use grprep_core::dist::{DistSpec, ExponentialParams, GaussianParams, IntegrationBackend};
use grprep_core::quantum::MAX_QUBITS;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable naming the directory for relative output prefixes.
pub const OUTPUT_DIR_ENV: &str = "GRPREP_OUTPUT_DIR";

const DEFAULT_GRID_POINTS: usize = 1024;
const DEFAULT_ADAPTIVE_TOLERANCE: f64 = 1e-10;

const CSV_HELP: &str = "\
Output files are written as <output>.<ext>; a relative prefix is resolved
against $GRPREP_OUTPUT_DIR when it is set. Every file starts with the format
version and the resolved configuration (JSON keys, or `#` comment lines in
CSV). Reals carry 17 significant digits.

CSV columns:
  prepare, simulate    index,bits,real,imag,probability
  --shots counts       index,bits,count,probability
  synthesize           ry,cnot,multiplexed_ry,other,depth
  demo-grover          iteration,prior_success,uniform_success,closed_form
  demo-interference    j,bits,input,output,direct
  demo-fourier         k,magnitude,reference
  check-logconcave     passes,worst_point,worst_value,evaluated,skipped

`bits` lists qubit 0 first; qubit 0 is the most significant bit of `index`.

Exit codes: 0 success, 1 internal check failed, 2 usage or config error,
3 I/O error.";

#[derive(Debug, Parser)]
#[command(
    name = "grprep",
    version,
    about = "Amplitude encoding of probability densities by recursive bisection",
    after_long_help = CSV_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discretize a density and write the encoded state.
    Prepare(Opts),
    /// Compute rotation angles and the preparation circuit.
    Synthesize(Opts),
    /// Run the circuit on |0...0> and compare with direct preparation.
    Simulate(Opts),
    /// Amplitude amplification starting from the encoded prior.
    DemoGrover(Opts),
    /// Walsh-Hadamard interference of the encoded state.
    DemoInterference(Opts),
    /// Fourier components of the encoded state.
    DemoFourier(Opts),
    /// Log-concavity check of a density on a uniform grid.
    CheckLogconcave(Opts),
}

impl Command {
    pub fn split(self) -> (CommandName, Opts) {
        match self {
            Command::Prepare(o) => (CommandName::Prepare, o),
            Command::Synthesize(o) => (CommandName::Synthesize, o),
            Command::Simulate(o) => (CommandName::Simulate, o),
            Command::DemoGrover(o) => (CommandName::DemoGrover, o),
            Command::DemoInterference(o) => (CommandName::DemoInterference, o),
            Command::DemoFourier(o) => (CommandName::DemoFourier, o),
            Command::CheckLogconcave(o) => (CommandName::CheckLogconcave, o),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Prepare,
    Synthesize,
    Simulate,
    DemoGrover,
    DemoInterference,
    DemoFourier,
    CheckLogconcave,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Prepare => "prepare",
            CommandName::Synthesize => "synthesize",
            CommandName::Simulate => "simulate",
            CommandName::DemoGrover => "demo-grover",
            CommandName::DemoInterference => "demo-interference",
            CommandName::DemoFourier => "demo-fourier",
            CommandName::CheckLogconcave => "check-logconcave",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Uniform,
    Exponential,
    Gaussian,
    TruncatedGaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendName {
    Analytic,
    Adaptive,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Options shared by every subcommand. Each one may also be set in the
/// TOML file given by `--config`, under the same name; flags win.
#[derive(Clone, Debug, Default, Args)]
pub struct Opts {
    /// TOML file with default values for any of the options below.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Density family built from --mean/--stddev/--rate/--support.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, allow_negative_numbers = true)]
    pub mean: Option<f64>,
    #[arg(long)]
    pub stddev: Option<f64>,
    #[arg(long)]
    pub rate: Option<f64>,
    /// Support interval.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub support: Option<Vec<f64>>,
    /// Distribution spec as a JSON file path or inline JSON, e.g.
    /// '{"family":"gaussian","params":{"mean":0,"stddev":1}}'.
    #[arg(long, value_name = "PATH|JSON")]
    pub dist: Option<String>,
    /// Number of qubits.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_QUBITS as i64))]
    pub n: Option<u32>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendName>,
    /// Absolute tolerance of the integration backend.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Monte Carlo samples per integral.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Seed for Monte Carlo integration and measurement sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also sample this many measurements (prepare, simulate).
    #[arg(long)]
    pub shots: Option<u64>,
    /// Output path prefix. Defaults to the command name.
    #[arg(long, value_name = "PREFIX")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Marked basis indices, comma separated (demo-grover).
    #[arg(long, value_delimiter = ',')]
    pub marked: Option<Vec<usize>>,
    /// Grover iterations; defaults to the optimum for the prior.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Single Fourier index; all indices when absent (demo-fourier).
    #[arg(long)]
    pub k: Option<usize>,
    /// Grid size for log-concavity checks.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Lower multiplexed rotations to Ry and CNOT gates.
    #[arg(long)]
    pub decompose: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum DistSource {
    Text(String),
    Spec(DistSpec),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<FamilyName>,
    pub mean: Option<f64>,
    pub stddev: Option<f64>,
    pub rate: Option<f64>,
    pub support: Option<[f64; 2]>,
    pub dist: Option<DistSource>,
    pub n: Option<i64>,
    pub backend: Option<BackendName>,
    pub tolerance: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub marked: Option<Vec<usize>>,
    pub iterations: Option<usize>,
    pub k: Option<usize>,
    pub grid_points: Option<usize>,
    pub decompose: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("--config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }
}

/// Fully resolved run, echoed into every artifact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandName,
    pub dist: DistSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub backend: IntegrationBackend,
    pub output: PathBuf,
    pub format: Format,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub grid_points: usize,
    pub decompose: bool,
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Reads the config file named by `--config`, if any, and resolves.
pub fn load(command: CommandName, opts: Opts) -> CliResult<RunConfig> {
    let file = match &opts.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    resolve(
        command,
        opts,
        file,
        std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from),
    )
}

/// Where a distribution came from, for error messages.
struct Named<T> {
    value: T,
    name: &'static str,
}

fn pick<T>(
    flag: Option<T>,
    file: Option<T>,
    key: &'static str,
    flag_name: &'static str,
) -> Option<Named<T>> {
    match (flag, file) {
        (Some(value), _) => Some(Named {
            value,
            name: flag_name,
        }),
        (None, Some(value)) => Some(Named { value, name: key }),
        (None, None) => None,
    }
}

struct FamilyFields {
    family: Option<Named<FamilyName>>,
    mean: Option<Named<f64>>,
    stddev: Option<Named<f64>>,
    rate: Option<Named<f64>>,
    support: Option<Named<[f64; 2]>>,
}

impl FamilyFields {
    fn any(&self) -> bool {
        self.family.is_some()
            || self.mean.is_some()
            || self.stddev.is_some()
            || self.rate.is_some()
            || self.support.is_some()
    }

    fn into_spec(self) -> CliResult<DistSpec> {
        let Some(family) = self.family else {
            return usage("distribution flags given without --family");
        };
        let need = |field: Option<Named<f64>>, what: &str| match field {
            Some(f) => Ok(f.value),
            None => usage(format!(
                "--family {}: --{what} is required",
                family_str(family.value)
            )),
        };
        let forbid = |field: &Option<Named<f64>>| match field {
            Some(f) => usage(format!(
                "{} does not apply to --family {}",
                f.name,
                family_str(family.value)
            )),
            None => Ok(()),
        };
        let support = self.support.map(|s| s.value);
        Ok(match family.value {
            FamilyName::Uniform => {
                forbid(&self.mean)?;
                forbid(&self.stddev)?;
                forbid(&self.rate)?;
                let Some(support) = support else {
                    return usage("--family uniform: --support is required");
                };
                DistSpec::Uniform { support }
            }
            FamilyName::Exponential => {
                forbid(&self.mean)?;
                forbid(&self.stddev)?;
                DistSpec::Exponential {
                    params: ExponentialParams {
                        rate: need(self.rate, "rate")?,
                    },
                    support,
                }
            }
            FamilyName::Gaussian | FamilyName::TruncatedGaussian => {
                forbid(&self.rate)?;
                let params = GaussianParams {
                    mean: need(self.mean, "mean")?,
                    stddev: need(self.stddev, "stddev")?,
                };
                if family.value == FamilyName::Gaussian {
                    DistSpec::Gaussian { params, support }
                } else {
                    let Some(support) = support else {
                        return usage("--family truncated-gaussian: --support is required");
                    };
                    DistSpec::TruncatedGaussian { params, support }
                }
            }
        })
    }
}

fn family_str(f: FamilyName) -> &'static str {
    match f {
        FamilyName::Uniform => "uniform",
        FamilyName::Exponential => "exponential",
        FamilyName::Gaussian => "gaussian",
        FamilyName::TruncatedGaussian => "truncated-gaussian",
    }
}

fn parse_dist_text(text: &str, name: &str) -> CliResult<DistSpec> {
    let json = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        fs::read_to_string(text).map_err(|e| CliError::Io(format!("{name} {text}: {e}")))?
    };
    DistSpec::from_json(&json).map_err(|e| CliError::Usage(format!("{name}: {e}")))
}

fn support_pair(v: Option<Vec<f64>>) -> Option<[f64; 2]> {
    // clap enforces exactly two values
    v.map(|s| [s[0], s[1]])
}

/// Merges flags over file values and checks what `command` needs.
pub fn resolve(
    command: CommandName,
    opts: Opts,
    file: FileConfig,
    output_dir: Option<PathBuf>,
) -> CliResult<RunConfig> {
    let flag_fields = FamilyFields {
        family: pick(opts.family, None, "", "--family"),
        mean: pick(opts.mean, None, "", "--mean"),
        stddev: pick(opts.stddev, None, "", "--stddev"),
        rate: pick(opts.rate, None, "", "--rate"),
        support: pick(support_pair(opts.support), None, "", "--support"),
    };
    let file_fields = FamilyFields {
        family: pick(None, file.family, "config key `family`", ""),
        mean: pick(None, file.mean, "config key `mean`", ""),
        stddev: pick(None, file.stddev, "config key `stddev`", ""),
        rate: pick(None, file.rate, "config key `rate`", ""),
        support: pick(None, file.support, "config key `support`", ""),
    };

    // A distribution named on the command line replaces the file's one
    // wholesale; otherwise family fields merge key by key.
    let dist = if let Some(text) = &opts.dist {
        if flag_fields.any() {
            return usage(
                "--dist cannot be combined with --family/--mean/--stddev/--rate/--support",
            );
        }
        parse_dist_text(text, "--dist")?
    } else if let (false, Some(source)) = (flag_fields.any(), file.dist) {
        if file_fields.any() {
            return usage("config key `dist` cannot be combined with `family`, `mean`, `stddev`, `rate` or `support`");
        }
        match source {
            DistSource::Text(text) => parse_dist_text(&text, "config key `dist`")?,
            DistSource::Spec(spec) => spec,
        }
    } else {
        let merged = FamilyFields {
            family: flag_fields.family.or(file_fields.family),
            mean: flag_fields.mean.or(file_fields.mean),
            stddev: flag_fields.stddev.or(file_fields.stddev),
            rate: flag_fields.rate.or(file_fields.rate),
            support: flag_fields.support.or(file_fields.support),
        };
        if !merged.any() {
            return usage("no distribution given: use --family or --dist");
        }
        merged.into_spec()?
    };
    dist.build()
        .map_err(|e| CliError::Usage(format!("distribution: {e}")))?;

    let n = match (opts.n, file.n) {
        (Some(n), _) => Some(n as usize),
        (None, Some(n)) if (1..=MAX_QUBITS as i64).contains(&n) => Some(n as usize),
        (None, Some(n)) => {
            return usage(format!(
                "config key `n`: {n} is outside 1..={MAX_QUBITS} (simulation cap)"
            ))
        }
        (None, None) => None,
    };
    if command != CommandName::CheckLogconcave && n.is_none() {
        return usage(format!("{}: --n is required", command.as_str()));
    }
    if command == CommandName::DemoInterference && n.is_some_and(|n| n > MAX_INTERFERENCE_QUBITS) {
        return usage(format!(
            "--n: demo-interference supports at most {MAX_INTERFERENCE_QUBITS} qubits"
        ));
    }

    let seed = opts.seed.or(file.seed).unwrap_or(0);
    let backend_name = opts
        .backend
        .or(file.backend)
        .unwrap_or(BackendName::Analytic);
    let tolerance = opts.tolerance.or(file.tolerance);
    let mut backend = match backend_name {
        BackendName::Analytic => IntegrationBackend::analytic(),
        BackendName::Adaptive => IntegrationBackend::adaptive(DEFAULT_ADAPTIVE_TOLERANCE),
        BackendName::MonteCarlo => {
            IntegrationBackend::monte_carlo(opts.samples.or(file.samples).unwrap_or(10_000), seed)
        }
    };
    if let Some(t) = tolerance {
        backend.tolerance = t;
    }
    backend
        .validate()
        .map_err(|e| CliError::Usage(format!("backend: {e}")))?;

    let dim = n.map(|n| 1usize << n);
    let marked = opts.marked.or(file.marked);
    if command == CommandName::DemoGrover {
        match &marked {
            None => return usage("demo-grover: --marked is required"),
            Some(m) if m.is_empty() => return usage("--marked: empty list"),
            Some(m) => {
                if let Some(bad) = m.iter().find(|&&i| i >= dim.unwrap_or(0)) {
                    return usage(format!("--marked: index {bad} out of range for --n"));
                }
            }
        }
    }
    let k = opts.k.or(file.k);
    if let (Some(k), Some(dim)) = (k, dim) {
        if k >= dim {
            return usage(format!("--k: {k} out of range for --n"));
        }
    }
    let grid_points = opts
        .grid_points
        .or(file.grid_points)
        .unwrap_or(DEFAULT_GRID_POINTS);
    if grid_points < 3 {
        return usage("--grid-points: need at least 3");
    }
    let shots = opts.shots.or(file.shots);
    if shots == Some(0) {
        return usage("--shots: must be at least 1");
    }

    let prefix = opts
        .output
        .or(file.output)
        .unwrap_or_else(|| PathBuf::from(command.as_str()));
    let output = match output_dir {
        Some(dir) if prefix.is_relative() => dir.join(prefix),
        _ => prefix,
    };

    Ok(RunConfig {
        command,
        dist,
        n,
        backend,
        output,
        format: opts.format.or(file.format).unwrap_or_default(),
        seed,
        shots,
        marked,
        iterations: opts.iterations.or(file.iterations),
        k,
        grid_points,
        decompose: opts.decompose || file.decompose.unwrap_or(false),
    })
}
