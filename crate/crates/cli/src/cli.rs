//! Command-line interface.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use bigs_core::big::{build_big_tsbs, check_feasibility, write_big, AncestorRule, ObservationProcedure};
use bigs_core::BigsError;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ExperimentConfig, ModeConfig};
use crate::reproduce::reproduce;
use crate::run::{
    enumerate, enumerate_classes, export_csv, export_json, load_big_file, load_graph, motifs,
    parse_classes, parse_rule, run, sample, simulate,
};

/// Exit status for infeasible BIG representations.
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bigs", version, about = "Graph sampling through bipartite incidence graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate motifs of a graph with their diameters, or count them.
    Motifs(MotifsArgs),
    /// Build, check or export a BIG.
    #[command(subcommand)]
    Big(BigCommand),
    /// Realize one initial sample and evaluate the estimators on it.
    Sample(SampleArgs),
    /// Exact moments by enumerating every initial sample.
    Enumerate(ExperimentArgs),
    /// Monte Carlo moments.
    Simulate(ExperimentArgs),
    /// Reproduce a built-in worked example.
    Reproduce(ReproduceArgs),
    /// Run an experiment configuration file in its own mode.
    Run(RunArgs),
}

#[derive(Args, Debug)]
pub struct MotifsArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Motif class (k1, k2, s2, k3, k4, c4, s3, p3, component:<n>); repeatable.
    #[arg(long = "motif", required = true)]
    pub motifs: Vec<String>,
    /// Print counts per class instead of the motifs.
    #[arg(long)]
    pub count: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BigCommand {
    /// Build the BIG of snowball sampling from an edge list.
    Build(BuildArgs),
    /// Check feasibility, simulating snowball sampling when a graph is given.
    Check(CheckArgs),
    /// Export a BIG's edges as JSON or CSV.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub directed: bool,
    #[arg(long = "motif", required = true)]
    pub motifs: Vec<String>,
    /// full:<T>, motif-only or motif-plus:<t>.
    #[arg(long, default_value = "motif-only")]
    pub rule: String,
    /// Stage count for `full` or `t` for `motif-plus`.
    #[arg(long)]
    pub t: Option<u32>,
    /// BIG file to write; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// BIG file to check; built from `--edges` when absent.
    #[arg(long)]
    pub big: Option<PathBuf>,
    /// Population graph, used to simulate snowball sampling.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long = "motif")]
    pub motifs: Vec<String>,
    #[arg(long, default_value = "motif-only")]
    pub rule: String,
    #[arg(long)]
    pub t: Option<u32>,
    /// Snowball stages to simulate; the BIG's requirement when absent.
    #[arg(long)]
    pub stages: Option<u32>,
    /// SRSWOR sample size of the design to check against.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExportFormat {
    Json,
    Csv,
    Big,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long)]
    pub big: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Experiment settings; each flag overrides the config file.
#[derive(Args, Debug, Default)]
pub struct ExperimentArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub big: Option<PathBuf>,
    /// thompson1990 or table4-bigs.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub directed: bool,
    /// Grid values (`label value` lines) for ACS rules.
    #[arg(long)]
    pub values: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long = "motif")]
    pub motifs: Vec<String>,
    /// full:<T>, motif-only, motif-plus:<t>, acs-b, acs-bstar or acs-bdagger.
    #[arg(long)]
    pub rule: Option<String>,
    /// Stage count for `full`, `t` for `motif-plus`, or the table4-bigs case.
    #[arg(long)]
    pub t: Option<u32>,
    /// srswor or enumerated.
    #[arg(long)]
    pub design: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Support of an enumerated design: lines `p: id id ...`.
    #[arg(long)]
    pub design_file: Option<PathBuf>,
    /// ht, hh, hh:<weights>, modified-ht or rb:<estimator>; repeatable.
    #[arg(long = "estimator")]
    pub estimators: Vec<String>,
    /// equal-share or inv-alpha; repeatable.
    #[arg(long)]
    pub weights: Vec<String>,
    /// total or mean.
    #[arg(long)]
    pub scale: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<u64>,
    /// Output directory; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal places in CSV output.
    #[arg(long)]
    pub places: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Initial sample as frame labels; drawn with the seed when absent.
    #[arg(long, value_delimiter = ',')]
    pub s0: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// thompson1990 or table4-bigs.
    pub builtin: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How a subcommand sets the experiment mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Simulate when the file or flags ask for it.
    Keep,
    Enumerate,
    Simulate,
}

impl ExperimentArgs {
    /// The config file, if any, with every given flag applied on top.
    pub fn into_config(self, mode: Mode) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let input_flags = self.edges.is_some() || self.big.is_some() || self.builtin.is_some();
        if input_flags {
            c.input.edges = self.edges;
            c.input.big = self.big;
            c.input.builtin = self.builtin;
        }
        c.input.directed |= self.directed;
        if self.values.is_some() {
            c.input.values = self.values;
        }
        if self.threshold.is_some() {
            c.input.threshold = self.threshold;
        }
        if !self.motifs.is_empty() {
            c.motifs = self.motifs;
        }
        if self.rule.is_some() {
            c.rule = self.rule;
        }
        if self.t.is_some() {
            c.t = self.t;
        }
        if let Some(kind) = self.design {
            c.design.kind = kind;
        }
        if self.n.is_some() {
            c.design.n = self.n;
        }
        if self.design_file.is_some() {
            c.design.file = self.design_file;
            if c.design.kind == "srswor" {
                c.design.kind = "enumerated".into();
            }
        }
        if !self.estimators.is_empty() {
            c.estimators = self.estimators;
        }
        if !self.weights.is_empty() {
            c.weights = self.weights;
        }
        if let Some(scale) = self.scale {
            c.scale = scale;
        }
        if self.out.is_some() {
            c.output.dir = self.out;
        }
        if self.places.is_some() {
            c.output.places = self.places;
        }
        let (file_replicates, file_seed) = match c.mode {
            ModeConfig::Simulate { replicates, seed } => (Some(replicates), seed),
            ModeConfig::Enumerate => (None, None),
        };
        let simulate = match mode {
            Mode::Simulate => true,
            Mode::Enumerate => false,
            Mode::Keep => file_replicates.is_some() || self.replicates.is_some() || self.seed.is_some(),
        };
        c.mode = if simulate {
            ModeConfig::Simulate {
                replicates: self.replicates.or(file_replicates).unwrap_or(10_000),
                seed: self.seed.or(file_seed),
            }
        } else {
            ModeConfig::Enumerate
        };
        c.validate()?;
        Ok(c.with_seed())
    }
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tsbs_rule(rule: &str, t: Option<u32>) -> Result<AncestorRule> {
    let config = ExperimentConfig {
        rule: Some(rule.to_string()),
        t,
        ..ExperimentConfig::default()
    };
    let rule = parse_rule(&config)?.expect("rule given");
    if rule.is_acs() || rule == AncestorRule::Explicit {
        return Err(anyhow!("rule `{rule}` does not apply to snowball sampling"));
    }
    Ok(rule)
}

/// Runs one parsed command; returns the process exit status.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Motifs(a) => {
            let g = load_graph(&a.edges, a.directed)?;
            let classes = parse_classes(&a.motifs)?;
            motifs(&g, &classes, a.count)?.emit(a.out.as_deref())?;
        }
        Command::Big(BigCommand::Build(a)) => {
            let g = load_graph(&a.edges, a.directed)?;
            let set = enumerate_classes(&g, &parse_classes(&a.motifs)?);
            let big = build_big_tsbs(&g, &set, tsbs_rule(&a.rule, a.t)?)?;
            write_or_print(&write_big(&big), a.out.as_deref())?;
        }
        Command::Big(BigCommand::Check(a)) => {
            let graph = a.edges.as_ref().map(|p| load_graph(p, a.directed)).transpose()?;
            let big = match (&a.big, &graph) {
                (Some(path), _) => load_big_file(path)?,
                (None, Some(g)) => {
                    let classes = parse_classes(&a.motifs)?;
                    if classes.is_empty() {
                        return Err(anyhow!("no motif classes given (--motif)"));
                    }
                    build_big_tsbs(g, &enumerate_classes(g, &classes), tsbs_rule(&a.rule, a.t)?)?
                }
                (None, None) => return Err(anyhow!("give a BIG file (--big) or an edge list (--edges)")),
            };
            let design = bigs_core::Design::srswor(big.frame_size(), a.n)?;
            let op = graph.as_ref().map(|g| ObservationProcedure::Snowball { graph: g, stages: a.stages });
            let report = check_feasibility(&big, op, &design);
            let text = serde_json::to_string_pretty(&report)? + "\n";
            write_or_print(&text, a.out.as_deref())?;
            if !report.is_feasible() {
                eprintln!("error: the BIG is not a feasible representation ({} violations)", report.violations.len());
                return Ok(EXIT_INFEASIBLE);
            }
        }
        Command::Big(BigCommand::Export(a)) => {
            let big = load_big_file(&a.big)?;
            let text = match a.format {
                ExportFormat::Json => export_json(&big)?,
                ExportFormat::Csv => export_csv(&big)?,
                ExportFormat::Big => write_big(&big),
            };
            write_or_print(&text, a.out.as_deref())?;
        }
        Command::Sample(a) => {
            let mut config = a.experiment.into_config(Mode::Keep)?;
            if a.s0.is_none() && config.seed().is_none() {
                config.mode = ModeConfig::Simulate { replicates: 1, seed: None };
                config = config.with_seed();
            }
            sample(&config, a.s0.as_deref())?.emit(config.output.dir.as_deref())?;
        }
        Command::Enumerate(a) => {
            let config = a.into_config(Mode::Enumerate)?;
            enumerate(&config)?.emit(config.output.dir.as_deref())?;
        }
        Command::Simulate(a) => {
            let config = a.into_config(Mode::Simulate)?;
            simulate(&config)?.emit(config.output.dir.as_deref())?;
        }
        Command::Reproduce(a) => {
            reproduce(&a.builtin)?.emit(a.out.as_deref())?;
        }
        Command::Run(a) => {
            let args = ExperimentArgs {
                config: Some(a.config),
                out: a.out,
                ..ExperimentArgs::default()
            };
            let config = args.into_config(Mode::Keep)?;
            run(&config)?.emit(config.output.dir.as_deref())?;
        }
    }
    Ok(0)
}

/// Exit status for an error: infeasible representations get their own.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let infeasible = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<BigsError>(),
            Some(
                BigsError::NoAncestors { .. }
                    | BigsError::InfiniteObservationDiameter { .. }
                    | BigsError::AmbiguousEdgeGrid { .. }
            )
        )
    });
    if infeasible {
        EXIT_INFEASIBLE
    } else {
        1
    }
}
