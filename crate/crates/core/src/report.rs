//! CSV and JSON report emission with stable column order.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::builtin::StrategyTable;
use crate::error::{BigsError, Result};
use crate::estimator::{Moments, MonteCarloMoments, Scale};
use crate::graph::Graph;
use crate::motif::{MotifGeometry, MotifSet};
use crate::rational::{format_decimal, format_rational};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One row per estimator and scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub estimator: String,
    pub scale: Scale,
    /// Estimate from one realized sample, when there is one.
    pub estimate: Option<String>,
    pub theta: String,
    pub expectation: String,
    pub variance: String,
    pub mse: String,
    /// Monte Carlo standard errors of expectation and variance.
    pub se_expectation: Option<String>,
    pub se_variance: Option<String>,
}

impl EstimateRow {
    pub fn exact(estimator: &str, scale: Scale, m: &Moments, estimate: Option<&BigRational>, places: usize) -> Self {
        EstimateRow {
            estimator: estimator.to_string(),
            scale,
            estimate: estimate.map(|e| format_decimal(e, places)),
            theta: format_decimal(&m.theta, places),
            expectation: format_decimal(&m.expectation, places),
            variance: format_decimal(&m.variance, places),
            mse: format_decimal(&m.mse, places),
            se_expectation: None,
            se_variance: None,
        }
    }

    pub fn simulated(estimator: &str, scale: Scale, m: &MonteCarloMoments, places: usize) -> Self {
        let f = |v: f64| format!("{v:.places$}");
        EstimateRow {
            estimator: estimator.to_string(),
            scale,
            estimate: None,
            theta: f(m.theta),
            expectation: f(m.mean),
            variance: f(m.variance),
            mse: f(m.mse),
            se_expectation: Some(f(m.se_mean)),
            se_variance: Some(f(m.se_variance)),
        }
    }
}

fn io_error(e: impl std::fmt::Display) -> BigsError {
    BigsError::InvalidArgument(format!("report output failed: {e}"))
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(io_error)?;
    String::from_utf8(bytes).map_err(io_error)
}

const ESTIMATE_HEADER: [&str; 9] = [
    "estimator",
    "scale",
    "estimate",
    "theta",
    "expectation",
    "variance",
    "mse",
    "se_expectation",
    "se_variance",
];

pub fn estimates_csv(rows: &[EstimateRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ESTIMATE_HEADER).map_err(io_error)?;
    for r in rows {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        w.write_record([
            r.estimator.clone(),
            r.scale.to_string(),
            opt(&r.estimate),
            r.theta.clone(),
            r.expectation.clone(),
            r.variance.clone(),
            r.mse.clone(),
            opt(&r.se_expectation),
            opt(&r.se_variance),
        ])
        .map_err(io_error)?;
    }
    finish(w)
}

/// Motifs with their members, values, diameter `λ` and observation
/// diameter `φ`; header only when empty.
pub fn motifs_csv(g: &Graph, motifs: &MotifSet) -> Result<String> {
    let geometry = MotifGeometry::new(g);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "class", "order", "members", "y", "lambda", "phi"])
        .map_err(io_error)?;
    for (m, y) in motifs.motifs.iter().zip(&motifs.y) {
        w.write_record([
            m.id.to_string(),
            m.class.to_string(),
            m.order().to_string(),
            m.label(g),
            format_rational(y),
            geometry.diameter(&m.members).to_string(),
            geometry.observation_diameter(&m.members).to_string(),
        ])
        .map_err(io_error)?;
    }
    finish(w)
}

/// The strategy comparison with three decimals: one row per initial
/// sample, then a variance row.
pub fn strategy_table_csv(t: &StrategyTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["s0".to_string()];
    for s in &t.strategies {
        header.push(format!("{s} observed"));
        header.push(format!("{s} estimate"));
    }
    w.write_record(&header).map_err(io_error)?;
    for row in &t.rows {
        let mut record = vec![row.s0.join(" ")];
        for cell in &row.cells {
            let mut observed: Vec<String> = cell
                .observed
                .iter()
                .filter(|g| !cell.unused.contains(g))
                .cloned()
                .collect();
            observed.extend(cell.unused.iter().map(|g| format!("({g})")));
            record.push(observed.join(" "));
            record.push(format_decimal(&cell.estimate, 3));
        }
        w.write_record(&record).map_err(io_error)?;
    }
    let mut variance = vec!["variance".to_string()];
    for m in &t.moments {
        variance.push(String::new());
        variance.push(format_decimal(&m.variance, 1));
    }
    w.write_record(&variance).map_err(io_error)?;
    finish(w)
}

/// Report wrapper recording the producing version, configuration and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub results: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(config: serde_json::Value, seed: Option<u64>, results: T) -> Self {
        Report {
            tool: "bigs".into(),
            version: TOOL_VERSION.into(),
            config,
            seed,
            results,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(io_error)
    }
}
