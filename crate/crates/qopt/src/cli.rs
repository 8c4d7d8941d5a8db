//! `qopt` command line.
//!
//! Exit codes: 0 when every requested file was written, 2 for invalid
//! arguments or settings, 1 for any other failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qopt_core::bench::{generate_bv, oracle_min_depth, summarize, SummaryRow};
use qopt_core::qlearn::train;
use qopt_core::RewardKind;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{self, MetricsJson};
use crate::table1::run_table1;

#[derive(Debug, Parser)]
#[command(name = "qopt", version, about = "Q-learning of template rewrites for CNOT+H circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a benchmark circuit.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Print depth, gate count and interaction strength as JSON.
    Metrics {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Breadth-first search for the minimum depth reachable by rewrites.
    Oracle {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
    },
    /// Train an agent on one circuit and write the per-epoch series.
    Optimize(OptimizeArgs),
    /// Reward comparison experiments.
    Bench {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Bernstein-Vazirani circuit (all-ones hidden string).
    Bv {
        #[arg(long)]
        qubits: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RewardArg {
    Ratio,
    Rpow,
    Fosel,
}

impl From<RewardArg> for RewardKind {
    fn from(r: RewardArg) -> Self {
        match r {
            RewardArg::Ratio => RewardKind::Ratio,
            RewardArg::Rpow => RewardKind::Rpow,
            RewardArg::Fosel => RewardKind::Fosel,
        }
    }
}

/// Hyperparameter flags shared by `optimize` and `bench`.
#[derive(Debug, Clone, Default, Args)]
pub struct AgentArgs {
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eps0: Option<f64>,
    #[arg(long)]
    pub eps_min: Option<f64>,
    #[arg(long)]
    pub eps_decay_frac: Option<f64>,
    #[arg(long)]
    pub cost_c: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// JSON file with the same keys as the flags; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl AgentArgs {
    fn to_config(&self) -> RunConfig {
        RunConfig {
            epochs: self.epochs,
            alpha: self.alpha,
            gamma: self.gamma,
            eps0: self.eps0,
            eps_min: self.eps_min,
            eps_decay_frac: self.eps_decay_frac,
            cost_c: self.cost_c,
            max_steps: self.max_steps,
            ..Default::default()
        }
    }

    fn file_config(&self) -> anyhow::Result<RunConfig> {
        self.config.as_deref().map_or_else(|| Ok(RunConfig::default()), RunConfig::load)
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub reward: Option<RewardArg>,
    /// Falls back to QOPT_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-epoch CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary row as JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// First final circuit reaching the smallest final depth.
    #[arg(long)]
    pub best_circuit: Option<PathBuf>,
    #[command(flatten)]
    pub agent: AgentArgs,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Train on BV circuits for every size, reward and seed.
    Table1(Table1Args),
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, value_delimiter = ',', default_values_t = [3, 6, 9, 12])]
    pub sizes: Vec<u32>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [RewardArg::Ratio, RewardArg::Rpow])]
    pub rewards: Vec<RewardArg>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4, 5])]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Concurrent training runs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub agent: AgentArgs,
}

/// Invalid user input; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { family: Family::Bv { qubits, out } } => cmd_generate(qubits, &out),
        Command::Metrics { circuit } => cmd_metrics(&circuit),
        Command::Oracle { circuit, max_nodes } => cmd_oracle(&circuit, max_nodes),
        Command::Optimize(args) => cmd_optimize(&args),
        Command::Bench { experiment: Experiment::Table1(args) } => cmd_bench(&args),
    }
}

fn print_line(s: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}")?;
    out.flush()?;
    Ok(())
}

pub fn cmd_generate(qubits: u32, out: &Path) -> anyhow::Result<()> {
    let c = generate_bv(qubits).map_err(|e| usage(e.to_string()))?;
    output::write_circuit(out, &c)
}

pub fn cmd_metrics(path: &Path) -> anyhow::Result<()> {
    let c = output::read_circuit(path)?;
    print_line(&serde_json::to_string(&MetricsJson::of(&c))?)
}

pub fn cmd_oracle(path: &Path, max_nodes: usize) -> anyhow::Result<()> {
    let c = output::read_circuit(path)?;
    print_line(&output::oracle_json(&oracle_min_depth(&c, max_nodes)))
}

pub fn cmd_optimize(args: &OptimizeArgs) -> anyhow::Result<()> {
    let flags = RunConfig {
        circuit: args.circuit.clone(),
        reward: args.reward.map(RewardKind::from),
        seed: args.seed,
        out: args.out.clone(),
        summary: args.summary.clone(),
        best_circuit: args.best_circuit.clone(),
        ..args.agent.to_config()
    };
    let cfg = flags.over(args.agent.file_config()?);
    let circuit_path = cfg.circuit.clone().ok_or_else(|| usage("--circuit is required"))?;
    let reward = cfg.reward.ok_or_else(|| usage("--reward is required"))?;
    let out = cfg.out.clone().ok_or_else(|| usage("--out is required"))?;
    let seed = cfg.resolved_seed().map_err(|e| usage(e.0))?;

    let circuit = output::read_circuit(&circuit_path)?;
    let agent = cfg.agent_config(circuit.n_qubits(), reward, seed).map_err(|e| usage(e.0))?;
    let training = train(&circuit, &agent).context("training")?;

    let mut csv = Vec::new();
    output::write_epoch_csv(&mut csv, &training.records)?;
    output::write_file(&out, &csv)?;
    if let Some(path) = &cfg.summary {
        let row = summarize(&training.records, circuit.n_qubits(), reward, Some(seed));
        output::write_file(path, output::summary_json(row.as_ref()).as_bytes())?;
    }
    if let Some(path) = &cfg.best_circuit {
        let best = training.best.as_ref().unwrap_or(&circuit);
        output::write_circuit(path, best)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Table1Json<'a> {
    runs: Vec<&'a SummaryRow>,
    aggregates: &'a [SummaryRow],
}

pub fn cmd_bench(args: &Table1Args) -> anyhow::Result<()> {
    if args.sizes.is_empty() || args.rewards.is_empty() || args.seeds.is_empty() {
        return Err(usage("--sizes, --rewards and --seeds must be non-empty"));
    }
    if let Some(&n) = args.sizes.iter().find(|&&n| n < 2) {
        return Err(usage(format!("qubits must be >= 2, got {n}")));
    }
    let template = args.agent.to_config().over(args.agent.file_config()?);
    // surface range errors as usage errors before spending time training
    template.agent_config(args.sizes[0], RewardKind::Rpow, 0).map_err(|e| usage(e.0))?;

    let kinds: Vec<RewardKind> = args.rewards.iter().copied().map(RewardKind::from).collect();
    let table = run_table1(&args.sizes, &kinds, &template, &args.seeds, args.jobs)?;

    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    for run in &table.runs {
        let stem = output::run_file_stem(run.key.qubits, run.key.kind, run.key.seed);
        let mut csv = Vec::new();
        output::write_epoch_csv(&mut csv, &run.records)?;
        output::write_file(&args.out_dir.join(format!("{stem}.csv")), &csv)?;
        output::write_file(
            &args.out_dir.join(format!("{stem}.summary.json")),
            output::summary_json(run.row.as_ref()).as_bytes(),
        )?;
    }

    let rows: Vec<&SummaryRow> = table.runs.iter().filter_map(|r| r.row.as_ref()).collect();
    let json = serde_json::to_string_pretty(&Table1Json { runs: rows.clone(), aggregates: &table.aggregates })?;
    output::write_file(&args.out_dir.join("table1.json"), json.as_bytes())?;

    let mut md = String::from("## Per seed\n\n");
    md.push_str(&output::summary_markdown(&rows.into_iter().cloned().collect::<Vec<_>>()));
    md.push_str("\n## Median over seeds\n\n");
    md.push_str(&output::summary_markdown(&table.aggregates));
    output::write_file(&args.out_dir.join("table1.md"), md.as_bytes())
}
