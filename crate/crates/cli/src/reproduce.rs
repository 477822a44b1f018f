//! Reproductions of the built-in worked examples.

use anyhow::{anyhow, bail, Result};
use bigs_core::big::{build_big_acs, AncestorRule};
use bigs_core::builtin::{table4_bigs, thompson1990, thompson1990_strategies, StrategyTable};
use bigs_core::design::{first_order_inclusion, realize_sample_big, Design};
use bigs_core::estimator::{enumerate_estimates, hh_estimate, ht_estimate, EstimatorSpec, Scale, WeightScheme};
use bigs_core::rational::{format_decimal, format_rational};
use bigs_core::report::{strategy_table_csv, Report};
use serde::Serialize;

use crate::run::{Artifact, RunOutput};

#[derive(Serialize)]
struct RaoBlackwellRow {
    s0: Vec<String>,
    /// Estimates for the three strategies, three decimals.
    estimates: [String; 3],
}

#[derive(Serialize)]
struct Table1Results {
    table: StrategyTable,
    rao_blackwell: Vec<RaoBlackwellRow>,
}

fn csv_text(w: csv::Writer<Vec<u8>>) -> Result<String> {
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

fn report<T: Serialize>(name: &str, results: T) -> Result<String> {
    let config = serde_json::json!({ "command": "reproduce", "builtin": name });
    Ok(Report::new(config, None, results).to_json()? + "\n")
}

/// Every initial sample of the five-grid ACS example under the three
/// strategies, with their Rao-Blackwell versions.
pub fn thompson() -> Result<RunOutput> {
    let table = thompson1990_strategies()?;
    let pop = thompson1990();
    let design = Design::srswor(5, 2)?;
    let strategies = [
        (AncestorRule::AcsB, EstimatorSpec::ModifiedHt),
        (AncestorRule::AcsBStar, EstimatorSpec::Ht),
        (AncestorRule::AcsBDagger, EstimatorSpec::Ht),
    ];
    let mut columns = Vec::new();
    for (rule, spec) in strategies {
        let big = build_big_acs(&pop, rule)?;
        let rb = EstimatorSpec::RaoBlackwell(Box::new(spec));
        columns.push(enumerate_estimates(&rb, &design, &big, Scale::MeanPerUnit)?);
    }
    let labels = pop.grid().labels();
    let mut rb_rows = Vec::new();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["s0".to_string()];
    header.extend(table.strategies.iter().map(|s| format!("{s} rao-blackwell")));
    w.write_record(&header)?;
    for (row, sample) in columns[0].iter().enumerate() {
        let s0: Vec<String> = sample.s0.iter().map(|&i| labels[i].clone()).collect();
        let estimates = [0, 1, 2].map(|c| format_decimal(&columns[c][row].estimate, 3));
        let mut record = vec![s0.join(" ")];
        record.extend(estimates.iter().cloned());
        w.write_record(&record)?;
        rb_rows.push(RaoBlackwellRow { s0, estimates });
    }
    let rb_csv = csv_text(w)?;
    let table_csv = strategy_table_csv(&table)?;
    let results = Table1Results {
        table,
        rao_blackwell: rb_rows,
    };
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "table1.csv".into(), contents: table_csv },
            Artifact { name: "rao_blackwell.csv".into(), contents: rb_csv },
            Artifact { name: "report.json".into(), contents: report("thompson1990", results)? },
        ],
        primary: 0,
    })
}

#[derive(Serialize)]
struct Table4Row {
    stages: u32,
    quantity: String,
    id: String,
    value: String,
    exact: String,
}

/// Inclusion probabilities and estimates of the 4-cycle example at 2 and 4
/// stages.
pub fn table4() -> Result<RunOutput> {
    let mut rows = Vec::new();
    for case in table4_bigs()? {
        let push = |rows: &mut Vec<Table4Row>, quantity: &str, id: &str, v: &bigs_core::BigRational| {
            rows.push(Table4Row {
                stages: case.stages,
                quantity: quantity.into(),
                id: id.into(),
                value: format_decimal(v, 4),
                exact: format_rational(v),
            })
        };
        for k in 0..case.big.motif_count() {
            let pi = first_order_inclusion(&case.design, &case.big, k)?;
            push(&mut rows, "pi", case.big.motif_label(k), &pi);
        }
        let sb = realize_sample_big(&case.big, &case.s0);
        let ht = ht_estimate(&sb, &case.design, &case.big, Scale::Total)?;
        push(&mut rows, "theta_y", "", &ht.estimate);
        let beta = hh_estimate(&sb, &case.design, &case.big, &WeightScheme::EqualShare, Scale::Total)?;
        push(&mut rows, "theta_z_beta", "", &beta.estimate);
        if let Some(sizes) = &case.alpha_sizes {
            let w = WeightScheme::InverseAlphaSizes(sizes.clone());
            let alpha = hh_estimate(&sb, &case.design, &case.big, &w, Scale::Total)?;
            push(&mut rows, "theta_z_alpha", "", &alpha.estimate);
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r)?;
    }
    let text = csv_text(w)?;
    Ok(RunOutput {
        artifacts: vec![
            Artifact { name: "table4.csv".into(), contents: text },
            Artifact { name: "report.json".into(), contents: report("table4-bigs", &rows)? },
        ],
        primary: 0,
    })
}

pub fn reproduce(name: &str) -> Result<RunOutput> {
    match name {
        "thompson1990" => thompson(),
        "table4-bigs" => table4(),
        other => bail!("unknown builtin `{other}` (expected thompson1990 or table4-bigs)"),
    }
}
