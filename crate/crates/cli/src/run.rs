//! Resolves an experiment configuration into a BIG, a design and a list of
//! estimators, and produces report artifacts.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use bigs_core::big::{build_big_acs, build_big_tsbs, load_big, AcsPopulation, AncestorRule, Big};
use bigs_core::builtin::{table4_bigs, thompson1990};
use bigs_core::design::{first_order_inclusion, realize_sample_big, Design};
use bigs_core::estimator::{
    exact_moments, hh_estimate, ht_estimate, monte_carlo_moments, EstimatorReport, EstimatorSpec,
    Moments, MonteCarloMoments, PreparedEstimator, Scale, WeightScheme,
};
use bigs_core::graph::Graph;
use bigs_core::motif::{enumerate_motifs, MotifClass, MotifSet};
use bigs_core::rational::{format_decimal, format_rational, parse_rational};
use bigs_core::report::{estimates_csv, EstimateRow, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ExperimentConfig, ModeConfig};

const DEFAULT_PLACES: usize = 4;

/// One named report file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Report files of one command; `primary` is printed when no output
/// directory is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub primary: usize,
}

impl RunOutput {
    pub fn single(name: &str, contents: String) -> RunOutput {
        RunOutput {
            artifacts: vec![Artifact {
                name: name.into(),
                contents,
            }],
            primary: 0,
        }
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.artifacts
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.contents.as_str())
    }

    /// Writes every artifact into `dir`, or prints the primary one.
    pub fn emit(&self, dir: Option<&Path>) -> Result<()> {
        match dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("cannot create output directory {}", dir.display()))?;
                for a in &self.artifacts {
                    let path = dir.join(&a.name);
                    std::fs::write(&path, &a.contents)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    eprintln!("wrote {}", path.display());
                }
            }
            None => print!("{}", self.artifacts[self.primary].contents),
        }
        Ok(())
    }
}

/// The population an experiment runs on.
pub struct Population {
    pub big: Big,
    pub graph: Option<Graph>,
    pub acs: Option<AcsPopulation>,
    /// `|α_i|` in the complete BIG when the BIG holds only part of `Ω`.
    pub alpha_sizes: Option<Vec<u64>>,
    /// Sample size used when the configuration does not give one.
    pub default_n: Option<usize>,
}

pub fn parse_rule(config: &ExperimentConfig) -> Result<Option<AncestorRule>> {
    let Some(text) = &config.rule else {
        return Ok(None);
    };
    let name = text.split(':').next().unwrap_or("").trim().to_ascii_lowercase();
    let rule = match (name.as_str(), config.t) {
        ("full", Some(t)) => AncestorRule::Full(t),
        ("motif-plus", Some(t)) => AncestorRule::motif_plus(t)?,
        _ => text.parse()?,
    };
    Ok(Some(rule))
}

pub fn parse_classes(names: &[String]) -> Result<Vec<MotifClass>> {
    names
        .iter()
        .flat_map(|n| n.split(','))
        .filter(|n| !n.trim().is_empty())
        .map(|n| n.parse::<MotifClass>().map_err(Into::into))
        .collect()
}

pub fn load_graph(path: &Path, directed: bool) -> Result<Graph> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open edge list {}", path.display()))?;
    Graph::load_edge_list(std::io::BufReader::new(file), directed)
        .with_context(|| format!("in edge list {}", path.display()))
}

pub fn load_big_file(path: &Path) -> Result<Big> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open BIG file {}", path.display()))?;
    load_big(std::io::BufReader::new(file)).with_context(|| format!("in BIG file {}", path.display()))
}

pub fn enumerate_classes(g: &Graph, classes: &[MotifClass]) -> MotifSet {
    MotifSet::union(classes.iter().map(|&c| enumerate_motifs(g, c)))
}

fn load_values(path: &Path, g: &Graph) -> Result<Vec<bigs_core::BigRational>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read values file {}", path.display()))?;
    let mut values: Vec<Option<bigs_core::BigRational>> = vec![None; g.node_count()];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{}:{}", path.display(), lineno + 1);
        let (label, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| anyhow!("{}: expected `label value`", at()))?;
        let v = parse_rational(value.trim())
            .ok_or_else(|| anyhow!("{}: bad value `{}`", at(), value.trim()))?;
        let node = g
            .index_of(label)
            .ok_or_else(|| anyhow!("{}: `{label}` is not a grid of the contiguity graph", at()))?;
        values[node] = Some(v);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(v, y)| y.ok_or_else(|| anyhow!("grid `{}` has no value in {}", g.label(v), path.display())))
        .collect()
}

pub fn resolve_population(config: &ExperimentConfig) -> Result<Population> {
    config.validate()?;
    let rule = parse_rule(config)?;
    let input = &config.input;
    if let Some(path) = &input.big {
        if rule.is_some() {
            bail!("a BIG file carries its own ancestor sets; drop the rule");
        }
        return Ok(Population {
            big: load_big_file(path)?,
            graph: None,
            acs: None,
            alpha_sizes: None,
            default_n: None,
        });
    }
    if let Some(path) = &input.edges {
        let g = load_graph(path, input.directed)?;
        let rule = rule.unwrap_or(AncestorRule::MotifOnly);
        if rule.is_acs() {
            let values = input
                .values
                .as_ref()
                .ok_or_else(|| anyhow!("ACS rules need grid values (--values)"))?;
            let threshold = input
                .threshold
                .as_ref()
                .ok_or_else(|| anyhow!("ACS rules need a threshold (--threshold)"))?;
            let threshold = parse_rational(threshold).ok_or_else(|| anyhow!("bad threshold `{threshold}`"))?;
            let y = load_values(values, &g)?;
            let pop = AcsPopulation::new(g, y, threshold)?;
            return Ok(Population {
                big: build_big_acs(&pop, rule)?,
                graph: None,
                acs: Some(pop),
                alpha_sizes: None,
                default_n: None,
            });
        }
        let classes = parse_classes(&config.motifs)?;
        if classes.is_empty() {
            bail!("no motif classes given (--motif k3, c4, ...)");
        }
        let motifs = enumerate_classes(&g, &classes);
        return Ok(Population {
            big: build_big_tsbs(&g, &motifs, rule)?,
            graph: Some(g),
            acs: None,
            alpha_sizes: None,
            default_n: None,
        });
    }
    let name = input.builtin.as_deref().unwrap_or_default();
    match name {
        "thompson1990" => {
            let rule = rule.unwrap_or(AncestorRule::AcsBStar);
            if !rule.is_acs() {
                bail!("thompson1990 is an ACS population; use acs-b, acs-bstar or acs-bdagger");
            }
            let pop = thompson1990();
            Ok(Population {
                big: build_big_acs(&pop, rule)?,
                graph: None,
                acs: Some(pop),
                alpha_sizes: None,
                default_n: Some(2),
            })
        }
        "table4-bigs" => {
            if rule.is_some() {
                bail!("table4-bigs has fixed ancestor sets; choose the case with --t 2 or --t 4");
            }
            let stages = config.t.unwrap_or(2);
            let case = table4_bigs()?
                .into_iter()
                .find(|c| c.stages == stages)
                .ok_or_else(|| anyhow!("table4-bigs has cases for 2 and 4 stages, not {stages}"))?;
            Ok(Population {
                big: case.big,
                graph: None,
                acs: None,
                alpha_sizes: case.alpha_sizes,
                default_n: Some(2),
            })
        }
        other => bail!("unknown builtin `{other}`"),
    }
}

pub fn build_design(config: &ExperimentConfig, pop: &Population) -> Result<Design> {
    let frame = pop.big.frame_size();
    match config.design.kind.as_str() {
        "enumerated" => {
            let path = config.design.file.as_ref().expect("validated");
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read design file {}", path.display()))?;
            Design::parse_enumerated(&text, pop.big.frame())
                .with_context(|| format!("in design file {}", path.display()))
        }
        _ => {
            let n = config
                .design
                .n
                .or(pop.default_n)
                .ok_or_else(|| anyhow!("SRSWOR needs a sample size (--n)"))?;
            Ok(Design::srswor(frame, n)?)
        }
    }
}

fn parse_weights(name: &str, pop: &Population) -> Result<WeightScheme> {
    match name.trim().to_ascii_lowercase().as_str() {
        "equal-share" => Ok(WeightScheme::EqualShare),
        "inv-alpha" => Ok(match &pop.alpha_sizes {
            Some(sizes) => WeightScheme::InverseAlphaSizes(sizes.clone()),
            None => WeightScheme::InverseAlpha,
        }),
        other => bail!("unknown weight scheme `{other}` (expected equal-share or inv-alpha)"),
    }
}

fn expand(name: &str, weights: &[WeightScheme], pop: &Population) -> Result<Vec<EstimatorSpec>> {
    let name = name.trim().to_ascii_lowercase();
    if let Some(inner) = name.strip_prefix("rb:") {
        return Ok(expand(inner, weights, pop)?
            .into_iter()
            .map(|s| EstimatorSpec::RaoBlackwell(Box::new(s)))
            .collect());
    }
    if name == "hh" {
        return Ok(weights.iter().cloned().map(EstimatorSpec::Hh).collect());
    }
    if let Some(w) = name.strip_prefix("hh:") {
        return Ok(vec![EstimatorSpec::Hh(parse_weights(w, pop)?)]);
    }
    Ok(vec![name.parse()?])
}

pub fn estimator_specs(config: &ExperimentConfig, pop: &Population) -> Result<Vec<EstimatorSpec>> {
    let weights = config
        .weights
        .iter()
        .flat_map(|w| w.split(','))
        .filter(|w| !w.trim().is_empty())
        .map(|w| parse_weights(w, pop))
        .collect::<Result<Vec<_>>>()?;
    let mut specs = Vec::new();
    for name in config.estimators.iter().flat_map(|e| e.split(',')) {
        if name.trim().is_empty() {
            continue;
        }
        for spec in expand(name, &weights, pop)? {
            if !specs.contains(&spec) {
                specs.push(spec);
            }
        }
    }
    if specs.is_empty() {
        bail!("no estimators selected");
    }
    Ok(specs)
}

fn config_json(config: &ExperimentConfig) -> Result<serde_json::Value> {
    serde_json::to_value(config).context("cannot serialize configuration")
}

fn json<T: Serialize>(config: &ExperimentConfig, results: T) -> Result<String> {
    let report = Report::new(config_json(config)?, config.seed(), results);
    Ok(report.to_json()? + "\n")
}

#[derive(Serialize)]
struct InclusionRow {
    motif: String,
    ancestors: usize,
    pi: String,
    pi_exact: String,
}

#[derive(Serialize)]
struct NamedMoments {
    estimator: String,
    moments: Moments,
}

#[derive(Serialize)]
struct EnumerateResults {
    frame_size: usize,
    motif_count: usize,
    scale: Scale,
    rows: Vec<EstimateRow>,
    exact: Vec<NamedMoments>,
    inclusion: Vec<InclusionRow>,
}

#[derive(Serialize)]
struct SimulateResults {
    frame_size: usize,
    motif_count: usize,
    scale: Scale,
    rows: Vec<EstimateRow>,
    simulated: Vec<NamedSimulation>,
}

#[derive(Serialize)]
struct NamedSimulation {
    estimator: String,
    moments: MonteCarloMoments,
}

fn inclusion_rows(big: &Big, design: &Design, places: usize) -> Result<Vec<InclusionRow>> {
    (0..big.motif_count())
        .map(|k| {
            let pi = first_order_inclusion(design, big, k)?;
            Ok(InclusionRow {
                motif: big.motif_label(k).to_string(),
                ancestors: big.beta(k).len(),
                pi: format_decimal(&pi, places),
                pi_exact: format_rational(&pi),
            })
        })
        .collect()
}

fn inclusion_csv(rows: &[InclusionRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["motif", "ancestors", "pi", "pi_exact"])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

fn scale_of(config: &ExperimentConfig) -> Result<Scale> {
    Ok(config.scale.parse()?)
}

/// Runs the experiment in its configured mode.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    match config.mode {
        ModeConfig::Enumerate => enumerate(config),
        ModeConfig::Simulate { .. } => simulate(config),
    }
}

/// Exact moments of every estimator by enumerating the design.
pub fn enumerate(config: &ExperimentConfig) -> Result<RunOutput> {
    let pop = resolve_population(config)?;
    let design = build_design(config, &pop)?;
    let specs = estimator_specs(config, &pop)?;
    let scale = scale_of(config)?;
    let places = config.output.places.unwrap_or(DEFAULT_PLACES);
    let mut rows = Vec::new();
    let mut exact = Vec::new();
    for spec in &specs {
        let m = exact_moments(spec, &design, &pop.big, scale)
            .with_context(|| format!("estimator {spec}"))?;
        rows.push(EstimateRow::exact(&spec.to_string(), scale, &m, None, places));
        exact.push(NamedMoments {
            estimator: spec.to_string(),
            moments: m,
        });
    }
    let inclusion = inclusion_rows(&pop.big, &design, places)?;
    let csv = estimates_csv(&rows)?;
    let inclusion_text = inclusion_csv(&inclusion)?;
    let results = EnumerateResults {
        frame_size: pop.big.frame_size(),
        motif_count: pop.big.motif_count(),
        scale,
        rows,
        exact,
        inclusion,
    };
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "estimates.csv".into(), contents: csv },
            Artifact { name: "inclusion.csv".into(), contents: inclusion_text },
            Artifact { name: "report.json".into(), contents: json(config, results)? },
        ],
        primary: 0,
    })
}

/// Monte Carlo moments of every estimator.
pub fn simulate(config: &ExperimentConfig) -> Result<RunOutput> {
    let ModeConfig::Simulate { replicates, seed } = config.mode else {
        bail!("simulate needs simulation mode");
    };
    let seed = seed.ok_or_else(|| anyhow!("simulation needs a seed"))?;
    let pop = resolve_population(config)?;
    let design = build_design(config, &pop)?;
    let specs = estimator_specs(config, &pop)?;
    let scale = scale_of(config)?;
    let places = config.output.places.unwrap_or(DEFAULT_PLACES);
    let mut rows = Vec::new();
    let mut simulated = Vec::new();
    for spec in &specs {
        let m = monte_carlo_moments(spec, &design, &pop.big, scale, replicates, seed)
            .with_context(|| format!("estimator {spec}"))?;
        rows.push(EstimateRow::simulated(&spec.to_string(), scale, &m, places));
        simulated.push(NamedSimulation {
            estimator: spec.to_string(),
            moments: m,
        });
    }
    let csv = estimates_csv(&rows)?;
    let results = SimulateResults {
        frame_size: pop.big.frame_size(),
        motif_count: pop.big.motif_count(),
        scale,
        rows,
        simulated,
    };
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "estimates.csv".into(), contents: csv },
            Artifact { name: "report.json".into(), contents: json(config, results)? },
        ],
        primary: 0,
    })
}

#[derive(Serialize)]
struct SampleResults {
    s0: Vec<String>,
    observed_motifs: Vec<String>,
    out_of_sample_ancestors: Vec<String>,
    estimates: Vec<EstimatorReport>,
}

/// One realized sample: the initial sample is drawn with the seed unless
/// given explicitly.
pub fn sample(config: &ExperimentConfig, s0: Option<&[String]>) -> Result<RunOutput> {
    let pop = resolve_population(config)?;
    let design = build_design(config, &pop)?;
    let specs = estimator_specs(config, &pop)?;
    let scale = scale_of(config)?;
    let places = config.output.places.unwrap_or(DEFAULT_PLACES);
    let s0 = match s0 {
        Some(labels) => {
            let mut s = pop.big.resolve_frame(labels)?;
            s.sort_unstable();
            s.dedup();
            s
        }
        None => {
            let seed = config.seed().ok_or_else(|| anyhow!("drawing a sample needs a seed"))?;
            design.draw(&mut ChaCha8Rng::seed_from_u64(seed))
        }
    };
    let sb = realize_sample_big(&pop.big, &s0);
    let mut estimates = Vec::new();
    for spec in &specs {
        let report = match spec {
            EstimatorSpec::Ht => ht_estimate(&sb, &design, &pop.big, scale)?,
            EstimatorSpec::Hh(w) => hh_estimate(&sb, &design, &pop.big, w, scale)?,
            other => {
                let prepared = PreparedEstimator::new(other, &design, &pop.big)?;
                EstimatorReport {
                    estimator: other.to_string(),
                    scale,
                    estimate: scale.apply(prepared.estimate(&s0), &pop.big),
                    contributions: Vec::new(),
                }
            }
        };
        estimates.push(report);
    }
    let frame = pop.big.frame();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["estimator", "scale", "estimate", "estimate_exact"])?;
    for e in &estimates {
        w.write_record([
            e.estimator.clone(),
            e.scale.to_string(),
            format_decimal(&e.estimate, places),
            format_rational(&e.estimate),
        ])?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?;
    let results = SampleResults {
        s0: sb.s0.iter().map(|&i| frame[i].clone()).collect(),
        observed_motifs: sb.omega_s.iter().map(|&k| pop.big.motif_label(k).to_string()).collect(),
        out_of_sample_ancestors: sb.out_ancestors.iter().map(|&i| frame[i].clone()).collect(),
        estimates,
    };
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "sample.csv".into(), contents: csv },
            Artifact { name: "sample.json".into(), contents: json(config, results)? },
        ],
        primary: 0,
    })
}

/// Motif listing with `λ` and `φ`, or counts per class.
pub fn motifs(g: &Graph, classes: &[MotifClass], count: bool) -> Result<RunOutput> {
    if count {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["class", "count"])?;
        for &c in classes {
            w.write_record([c.to_string(), enumerate_motifs(g, c).len().to_string()])?;
        }
        let text = String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?;
        return Ok(RunOutput::single("counts.csv", text));
    }
    let set = enumerate_classes(g, classes);
    Ok(RunOutput::single("motifs.csv", bigs_core::report::motifs_csv(g, &set)?))
}

/// BIG edges as a JSON document.
pub fn export_json(big: &Big) -> Result<String> {
    #[derive(Serialize)]
    struct Export<'a> {
        rule: String,
        stages_required: Option<u32>,
        frame: &'a [String],
        motifs: &'a [bigs_core::big::MotifEntry],
        edges: Vec<(&'a str, &'a str)>,
    }
    let frame = big.frame();
    let doc = Export {
        rule: big.rule().to_string(),
        stages_required: big.stages_required(),
        frame,
        motifs: big.motifs(),
        edges: big
            .edges()
            .into_iter()
            .map(|(i, k)| (frame[i].as_str(), big.motif_label(k)))
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// BIG edges as `unit,motif` CSV rows.
pub fn export_csv(big: &Big) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["unit", "motif"])?;
    for (i, k) in big.edges() {
        w.write_record([big.frame()[i].as_str(), big.motif_label(k)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}
