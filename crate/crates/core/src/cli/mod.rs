//! The `ofdma-sim` command line.
//!
//! ```text
//! ofdma-sim run      [sim flags]                      one CSV row per algorithm and SNR point
//! ofdma-sim sweep    --axis ng|l|snr|users --values … one CSV row per sweep point and algorithm
//! ofdma-sim example                                   the two-user worked example
//! ofdma-sim validate [--seed N]                       oracle, invariant and determinism checks
//! ```
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad usage or configuration.

mod config;
pub mod csv;
pub mod example;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::allocator::{default_l, FairnessWeights};
use crate::link::LinkParams;
use crate::sim::{run_experiment, Algorithm, FairnessMemory, SimConfig};

pub use config::ConfigFile;
pub use csv::{MetricColumns, RunManifest, BASE_HEADER};
pub use example::cmd_example;
pub use validate::cmd_validate;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "OFDMA_SIM_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ofdma-sim", version, about = "Grouped-subcarrier OFDMA allocation simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one configuration and write the aggregate CSV.
    Run(SimArgs),
    /// Vary one parameter and write one row per point.
    Sweep(SweepArgs),
    /// Reproduce the two-user, four-group worked example.
    Example {
        /// Perturb the table to exercise the failure path.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Run the oracle, invariant and determinism checks.
    Validate {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Random instances compared against the exhaustive oracle.
        #[arg(long, default_value_t = 500)]
        instances: usize,
        /// Randomized cases per invariant check.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

/// Simulation flags shared by `run` and `sweep`. Unset flags fall back to
/// `--config`, then to the built-in reference configuration.
#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    /// key=value file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    users: Option<usize>,
    #[arg(long)]
    subcarriers: Option<usize>,
    #[arg(long = "group-size")]
    group_size: Option<usize>,
    /// Reporting threshold; `inf` reports every group.
    #[arg(long)]
    epsilon: Option<f64>,
    /// SNR gap (linear). Mutually exclusive with --ber.
    #[arg(long)]
    gap: Option<f64>,
    /// Target BER, converted to an SNR gap.
    #[arg(long)]
    ber: Option<f64>,
    /// Candidate-list length of the fairness pass (default round(K/4), at least 1).
    #[arg(long = "l-param")]
    l_param: Option<usize>,
    #[arg(long)]
    slots: Option<usize>,
    /// Mean SNR points in dB, comma separated.
    #[arg(long = "snr-db", value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Option<Vec<f64>>,
    /// Integer or real fairness weights, comma separated; normalized internally.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// variance, best_gain, decentralized, superiority (comma separated).
    #[arg(long, value_delimiter = ',')]
    algo: Option<Vec<String>>,
    /// Total transmit power budget.
    #[arg(long)]
    power: Option<f64>,
    /// Iteration budget of the variance pass (default: one per group).
    #[arg(long = "max-it")]
    max_it: Option<usize>,
    /// `window` (rates delivered so far in the window) or `slot`.
    #[arg(long = "fairness-memory")]
    fairness_memory: Option<String>,
    /// Worker threads; output bytes do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a `# timestamp=` manifest line.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// ng, l, snr or users.
    #[arg(long)]
    axis: String,
    /// Sweep points, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Columns to keep: all, throughput, jain or assigned.
    #[arg(long, default_value = "all")]
    metric: String,
    #[command(flatten)]
    sim: SimArgs,
}

/// Fully resolved simulation flags.
#[derive(Debug, Clone)]
struct Resolved {
    config: SimConfig,
    algorithms: Vec<Algorithm>,
    l_given: bool,
    alpha_given: Option<Vec<f64>>,
    threads: Option<usize>,
}

fn resolve(args: &SimArgs) -> Result<Resolved, CliError> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let reference = SimConfig::reference();
    let users = config::pick(args.users, &file, "users")?.unwrap_or(reference.users);
    let subcarriers = config::pick(args.subcarriers, &file, "subcarriers")?.unwrap_or(reference.subcarriers);
    let group_size = config::pick(args.group_size, &file, "group-size")?.unwrap_or(reference.group_size);
    if group_size == 0 || subcarriers == 0 || subcarriers % group_size != 0 {
        return Err(CliError::Usage(format!(
            "--group-size {group_size} does not divide --subcarriers {subcarriers}"
        )));
    }
    let epsilon = config::pick(args.epsilon, &file, "epsilon")?.unwrap_or(reference.epsilon);
    let gap = config::pick(args.gap, &file, "gap")?;
    let ber = config::pick(args.ber, &file, "ber")?;
    let link = match (gap, ber) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--gap and --ber are mutually exclusive".into()));
        }
        (Some(g), None) => LinkParams::with_gap(g).map_err(|e| CliError::Usage(format!("--gap: {e}")))?,
        (None, Some(b)) => LinkParams::from_ber(b).map_err(|e| CliError::Usage(format!("--ber: {e}")))?,
        (None, None) => reference.link,
    };
    let l_given = config::pick(args.l_param, &file, "l-param")?;
    let alpha_given = config::pick_list(args.alpha.clone(), &file, "alpha")?;
    let weights = match &alpha_given {
        Some(a) => {
            if a.len() != users {
                return Err(CliError::Usage(format!(
                    "--alpha has {} weights but --users is {users}",
                    a.len()
                )));
            }
            FairnessWeights::new(a.clone()).map_err(|e| CliError::Usage(format!("--alpha: {e}")))?
        }
        None if users == reference.users => reference.weights.clone(),
        None => FairnessWeights::uniform(users).map_err(|e| CliError::Usage(format!("--users: {e}")))?,
    };
    let algorithms = match config::pick_list::<String>(args.algo.clone(), &file, "algo")? {
        Some(list) if list.is_empty() => return Err(CliError::Usage("--algo is empty".into())),
        Some(list) => list
            .iter()
            .map(|a| a.parse::<Algorithm>().map_err(|e| CliError::Usage(format!("--algo: {e}"))))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![Algorithm::Variance],
    };
    let fairness_memory = match config::pick::<String>(args.fairness_memory.clone(), &file, "fairness-memory")? {
        Some(m) => m
            .parse::<FairnessMemory>()
            .map_err(|e| CliError::Usage(format!("--fairness-memory: {e}")))?,
        None => reference.fairness_memory,
    };
    let snr_db = config::pick_list(args.snr_db.clone(), &file, "snr-db")?.unwrap_or(reference.snr_db);
    if snr_db.is_empty() {
        return Err(CliError::Usage("--snr-db is empty".into()));
    }
    let config = SimConfig {
        users,
        subcarriers,
        group_size,
        epsilon,
        link,
        l: l_given.unwrap_or_else(|| default_l(users)),
        weights,
        slots: config::pick(args.slots, &file, "slots")?.unwrap_or(reference.slots),
        snr_db,
        algorithm: algorithms[0],
        seed: config::pick(args.seed, &file, "seed")?.unwrap_or(reference.seed),
        power_budget: config::pick(args.power, &file, "power")?.unwrap_or(reference.power_budget),
        max_it: config::pick(args.max_it, &file, "max-it")?,
        fairness_memory,
    };
    check_config(&config)?;
    let threads = match args.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{THREADS_ENV}: cannot parse '{v}'")))?,
            ),
            Err(_) => None,
        },
    };
    if threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(Resolved {
        config,
        algorithms,
        l_given: l_given.is_some(),
        alpha_given,
        threads,
    })
}

fn check_config(config: &SimConfig) -> Result<(), CliError> {
    if config.l == 0 || config.l > config.users {
        return Err(CliError::Usage(format!(
            "--l-param {} must lie in 1..={} (--users)",
            config.l, config.users
        )));
    }
    config
        .validate()
        .map(|_| ())
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("--threads {n}: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn manifest(command: &str, config: &SimConfig, algorithms: &[Algorithm], timestamp: bool) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        config: config.clone(),
        algorithms: algorithms.iter().map(|a| a.name().to_string()).collect(),
        timestamp: timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
        outputs: Vec::new(),
        sweep: None,
    }
}

/// Runs `config` once per algorithm and renders the CSV.
pub fn render_run(
    config: &SimConfig,
    algorithms: &[Algorithm],
    threads: Option<usize>,
    command: &str,
    timestamp: Option<bool>,
) -> Result<(String, RunManifest), CliError> {
    let mut results = Vec::new();
    for &algorithm in algorithms {
        let c = SimConfig { algorithm, ..config.clone() };
        let metrics = with_threads(threads, || run_experiment(&c))?
            .map_err(|e| CliError::Usage(e.to_string()))?;
        results.push((c, metrics));
    }
    let rows: Vec<csv::CsvRow<'_>> = results
        .iter()
        .flat_map(|(c, ms)| {
            ms.iter().map(move |m| csv::CsvRow {
                config: c,
                metrics: m,
                sweep_value: None,
            })
        })
        .collect();
    let manifest = manifest(command, config, algorithms, timestamp.unwrap_or(false));
    let text = csv::render(&manifest, &rows, None, MetricColumns::All);
    Ok((text, manifest))
}

fn emit(text: &str, out_path: Option<&PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match out_path {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::Usage(format!("--out {}: {e}", path.display())))?;
            writeln!(err, "wrote {}", path.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_run(args: &SimArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let r = resolve(args)?;
    let (text, mut manifest) = render_run(&r.config, &r.algorithms, r.threads, "run", Some(args.timestamp))?;
    manifest.outputs.push(
        args.out
            .as_ref()
            .map_or("stdout".to_string(), |p| p.display().to_string()),
    );
    emit(&text, args.out.as_ref(), out, err)?;
    Ok(0)
}

/// Sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    GroupSize,
    L,
    Snr,
    Users,
}

impl Axis {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "ng" | "group-size" => Ok(Axis::GroupSize),
            "l" => Ok(Axis::L),
            "snr" => Ok(Axis::Snr),
            "users" | "k" => Ok(Axis::Users),
            _ => Err(CliError::Usage(format!("--axis must be ng, l, snr or users, got '{s}'"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Axis::GroupSize => "ng",
            Axis::L => "l",
            Axis::Snr => "snr",
            Axis::Users => "users",
        }
    }
}

fn sweep_configs(r: &Resolved, axis: Axis, values: &[String]) -> Result<Vec<SimConfig>, CliError> {
    let int = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| CliError::Usage(format!("--values: '{v}' is not a positive integer")))
    };
    values
        .iter()
        .map(|v| {
            let base = r.config.clone();
            let c = match axis {
                Axis::GroupSize => SimConfig { group_size: int(v)?, ..base },
                Axis::L => SimConfig { l: int(v)?, ..base },
                Axis::Snr => SimConfig {
                    snr_db: vec![v
                        .parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("--values: '{v}' is not a number")))?],
                    ..base
                },
                Axis::Users => {
                    let users = int(v)?;
                    // a given weight pattern is repeated to cover every user
                    let weights = match &r.alpha_given {
                        Some(a) => FairnessWeights::new(a.iter().cycle().take(users).copied().collect()),
                        None => FairnessWeights::uniform(users),
                    }
                    .map_err(|e| CliError::Usage(format!("--values {v}: {e}")))?;
                    let l = if r.l_given { base.l.min(users) } else { default_l(users) };
                    SimConfig { users, weights, l, ..base }
                }
            };
            check_config(&c).map_err(|e| CliError::Usage(format!("sweep point {v}: {e}")))?;
            Ok(c)
        })
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let axis = Axis::parse(&args.axis)?;
    let metric = match args.metric.as_str() {
        "all" => MetricColumns::All,
        "throughput" => MetricColumns::Throughput,
        "jain" => MetricColumns::Jain,
        "assigned" => MetricColumns::Assigned,
        m => return Err(CliError::Usage(format!("--metric must be all, throughput, jain or assigned, got '{m}'"))),
    };
    let values: Vec<String> = args
        .values
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if values.is_empty() {
        return Err(CliError::Usage("--values is empty".into()));
    }
    let r = resolve(&args.sim)?;
    let configs = sweep_configs(&r, axis, &values)?;

    let mut results = Vec::new();
    for (config, value) in configs.iter().zip(&values) {
        for &algorithm in &r.algorithms {
            let c = SimConfig { algorithm, ..config.clone() };
            let metrics = with_threads(r.threads, || run_experiment(&c))?
                .map_err(|e| CliError::Usage(e.to_string()))?;
            results.push((c, metrics, value.clone()));
        }
    }
    let rows: Vec<csv::CsvRow<'_>> = results
        .iter()
        .flat_map(|(c, ms, v)| {
            ms.iter().map(move |m| csv::CsvRow {
                config: c,
                metrics: m,
                sweep_value: Some(v.clone()),
            })
        })
        .collect();
    let mut manifest = manifest("sweep", &r.config, &r.algorithms, args.sim.timestamp);
    manifest.sweep = Some((axis.name().to_string(), values));
    let text = csv::render(&manifest, &rows, Some(axis.name()), metric);
    emit(&text, args.sim.out.as_ref(), out, err)?;
    Ok(0)
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, out, err),
        Command::Sweep(args) => cmd_sweep(args, out, err),
        Command::Example { corrupt } => cmd_example(*corrupt, out),
        Command::Validate { seed, instances, cases } => cmd_validate(*seed, *instances, *cases, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
