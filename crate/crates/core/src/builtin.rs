//! Worked example populations shipped with the library.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::big::{build_big_acs, AcsPopulation, AncestorRule, Big, MotifEntry};
use crate::design::{acs_sample, realize_sample_big, AcsEntry, Design, DEFAULT_ENUMERATION_CAP};
use crate::error::{BigsError, Result};
use crate::estimator::{exact_moments, EstimatorSpec, PreparedEstimator, Scale};
use crate::graph::Graph;
use crate::rational::int;

pub const BUILTIN_NAMES: [&str; 2] = ["thompson1990", "table4-bigs"];

/// Five grids in a row with values 1, 0, 2, 10, 1000 (grids are labelled by
/// their values); a grid is above threshold when its value exceeds 5.
pub fn thompson1990() -> AcsPopulation {
    let values = [1, 0, 2, 10, 1000];
    let labels = values.iter().map(|v| v.to_string()).collect();
    let grid = Graph::with_labels(labels, &[(0, 1), (1, 2), (2, 3), (3, 4)], false)
        .expect("static contiguity graph");
    AcsPopulation::new(grid, values.map(int).to_vec(), int(5)).expect("one value per grid")
}

/// One observed cell of the strategy comparison table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyCell {
    /// Observed grids; grids observed but not used by the estimator are
    /// listed in `unused`.
    pub observed: Vec<String>,
    pub unused: Vec<String>,
    #[serde(with = "crate::rational::text")]
    pub estimate: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyRow {
    pub s0: Vec<String>,
    /// `(B, t*_HT)`, `(B*, t_HT)`, `(B†, t_HT)` in this order.
    pub cells: [StrategyCell; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyTable {
    pub strategies: [String; 3],
    pub rows: Vec<StrategyRow>,
    /// Design moments of each strategy (per-grid mean scale).
    pub moments: [StrategyMoments; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyMoments {
    #[serde(with = "crate::rational::text")]
    pub expectation: BigRational,
    #[serde(with = "crate::rational::text")]
    pub variance: BigRational,
}

/// Every initial sample of SRSWOR(5, 2) on the Thompson population under
/// the three ACS strategies, on the per-grid mean scale.
pub fn thompson1990_strategies() -> Result<StrategyTable> {
    let pop = thompson1990();
    let design = Design::srswor(5, 2)?;
    let scale = Scale::MeanPerUnit;
    let labels = pop.grid().labels().to_vec();
    let name = |v: &[usize]| v.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>();

    let full = build_big_acs(&pop, AncestorRule::AcsB)?;
    let star = build_big_acs(&pop, AncestorRule::AcsBStar)?;
    let dagger = build_big_acs(&pop, AncestorRule::AcsBDagger)?;
    let modified = PreparedEstimator::new(&EstimatorSpec::ModifiedHt, &design, &full)?;
    let ht_star = PreparedEstimator::new(&EstimatorSpec::Ht, &design, &star)?;
    let ht_dagger = PreparedEstimator::new(&EstimatorSpec::Ht, &design, &dagger)?;
    let structure = pop.structure();

    let mut rows = Vec::new();
    for point in design.enumerate(DEFAULT_ENUMERATION_CAP)? {
        let s0 = point.sample;
        let obs = acs_sample(&pop, &s0);
        let unused: Vec<usize> = obs
            .observed
            .iter()
            .filter(|&&(g, e)| structure.is_edge_grid(g) && e == AcsEntry::Adaptive)
            .map(|&(g, _)| g)
            .collect();
        let cell = |observed: &[usize], unused: &[usize], estimate: BigRational| StrategyCell {
            observed: name(observed),
            unused: name(unused),
            estimate: scale.apply(estimate, &full),
        };
        rows.push(StrategyRow {
            s0: name(&s0),
            cells: [
                cell(&obs.grids(), &unused, modified.estimate(&s0)),
                cell(&realize_sample_big(&star, &s0).omega_s, &[], ht_star.estimate(&s0)),
                cell(&realize_sample_big(&dagger, &s0).omega_s, &[], ht_dagger.estimate(&s0)),
            ],
        });
    }
    let moments = [
        exact_moments(&EstimatorSpec::ModifiedHt, &design, &full, scale)?,
        exact_moments(&EstimatorSpec::Ht, &design, &star, scale)?,
        exact_moments(&EstimatorSpec::Ht, &design, &dagger, scale)?,
    ];
    Ok(StrategyTable {
        strategies: ["B,t*HT", "B*,tHT", "Bdagger,tHT"].map(String::from),
        rows,
        moments: moments.map(|m| StrategyMoments {
            expectation: m.expectation,
            variance: m.variance,
        }),
    })
}

/// A partial BIG of 4-cycle motifs observed from the initial sample
/// `{3, 12}` in a 40-node graph, with SRSWOR(40, 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCase {
    pub stages: u32,
    pub big: Big,
    pub design: Design,
    pub s0: Vec<usize>,
    /// `|α_i|` in the complete BIG, where known.
    pub alpha_sizes: Option<Vec<u64>>,
}

const CYCLES: [(&str, [u32; 4]); 4] = [
    ("A", [3, 8, 21, 22]),
    ("B", [12, 13, 18, 31]),
    ("C", [12, 15, 18, 32]),
    ("D", [13, 18, 29, 32]),
];

fn cycle_case(stages: u32) -> Result<CycleCase> {
    let frame: Vec<String> = (1..=40).map(|i| i.to_string()).collect();
    let unit = |label: u32| (label - 1) as usize;
    // At T = 2 the ancestors are the motif nodes; at T = 4 the ancestor sets
    // have sizes 15, 16, 14, 12 and contain the motif nodes plus the seed
    // that observed them. Remaining members are filled with the smallest
    // labels other than the two seeds.
    let (count, sizes): (usize, [usize; 4]) = match stages {
        2 => (3, [4, 4, 4, 4]),
        4 => (4, [15, 16, 14, 12]),
        _ => {
            return Err(BigsError::InvalidArgument(format!(
                "the 4-cycle example is defined for 2 or 4 stages, not {stages}"
            )))
        }
    };
    let mut motifs = Vec::new();
    let mut edges = Vec::new();
    for (k, (id, members)) in CYCLES.iter().take(count).enumerate() {
        let mut beta: Vec<u32> = members.to_vec();
        let seed = if k == 0 { 3 } else { 12 };
        if !beta.contains(&seed) {
            beta.push(seed);
        }
        let mut filler = (1..=40).filter(|l| *l != 3 && *l != 12);
        while beta.len() < sizes[k] {
            let next = filler.next().expect("frame is large enough");
            if !beta.contains(&next) {
                beta.push(next);
            }
        }
        edges.extend(beta.iter().map(|&l| (unit(l), k)));
        motifs.push(MotifEntry {
            id: id.to_string(),
            y: int(1),
            members: members.iter().map(|m| m.to_string()).collect(),
        });
    }
    let rule = if stages == 2 {
        AncestorRule::MotifOnly
    } else {
        AncestorRule::MotifPlus(1)
    };
    let big = Big::new(frame, motifs, &edges, rule, Some(stages))?;
    let alpha_sizes = (stages == 2).then(|| {
        let mut sizes = vec![1u64; 40];
        for (label, size) in [(12, 2), (13, 2), (18, 3), (32, 2)] {
            sizes[unit(label)] = size;
        }
        sizes
    });
    Ok(CycleCase {
        stages,
        big,
        design: Design::srswor(40, 2)?,
        s0: vec![unit(3), unit(12)],
        alpha_sizes,
    })
}

/// The 4-cycle example at 2 and 4 snowball stages.
pub fn table4_bigs() -> Result<Vec<CycleCase>> {
    Ok(vec![cycle_case(2)?, cycle_case(4)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::first_order_inclusion;
    use crate::estimator::{hh_estimate, ht_estimate, WeightScheme};
    use crate::rational::format_decimal;

    #[test]
    fn strategy_table() {
        let table = thompson1990_strategies().unwrap();
        assert_eq!(table.rows.len(), 10);
        let row = table.rows.iter().find(|r| r.s0 == ["2", "10"]).unwrap();
        let values: Vec<String> = row.cells.iter().map(|c| format_decimal(&c.estimate, 3)).collect();
        assert_eq!(values, ["289.571", "289.571", "289.143"]);
        let row = table.rows.iter().find(|r| r.s0 == ["10", "1000"]).unwrap();
        assert_eq!(row.cells[0].unused, ["2"]);
        assert_eq!(format_decimal(&table.moments[1].variance, 1), "17418.4");
        assert_eq!(format_decimal(&table.moments[2].variance, 1), "17533.7");
    }

    #[test]
    fn cycle_cases() {
        let cases = table4_bigs().unwrap();
        let two = &cases[0];
        let sb = realize_sample_big(&two.big, &two.s0);
        assert_eq!(sb.omega_s, vec![0, 1, 2]);
        let ht = ht_estimate(&sb, &two.design, &two.big, Scale::Total).unwrap();
        assert_eq!(format_decimal(&ht.estimate, 1), "15.6");
        let zb = hh_estimate(&sb, &two.design, &two.big, &WeightScheme::EqualShare, Scale::Total).unwrap();
        assert_eq!(format_decimal(&zb.estimate, 1), "15.0");
        let sizes = WeightScheme::InverseAlphaSizes(two.alpha_sizes.clone().unwrap());
        let za = hh_estimate(&sb, &two.design, &two.big, &sizes, Scale::Total).unwrap();
        assert_eq!(format_decimal(&za.estimate, 1), "13.6");

        let four = &cases[1];
        let pis: Vec<String> = (0..4)
            .map(|k| format_decimal(&first_order_inclusion(&four.design, &four.big, k).unwrap(), 4))
            .collect();
        assert_eq!(pis, ["0.6154", "0.6462", "0.5833", "0.5154"]);
        let sb = realize_sample_big(&four.big, &four.s0);
        assert_eq!(sb.omega_s, vec![0, 1, 2, 3]);
        let ht = ht_estimate(&sb, &four.design, &four.big, Scale::Total).unwrap();
        assert_eq!(format_decimal(&ht.estimate, 2), "6.83");
        let zb = hh_estimate(&sb, &four.design, &four.big, &WeightScheme::EqualShare, Scale::Total).unwrap();
        assert_eq!(format_decimal(&zb.estimate, 2), "5.68");
    }
}
