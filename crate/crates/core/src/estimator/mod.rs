//! Horvitz-Thompson and Hansen-Hurwitz type estimators under BIG sampling,
//! their exact and simulated moments, and the variance-difference matrix.

mod moments;
mod variance;

pub use moments::{
    enumerate_estimates, exact_moments, monte_carlo_moments, Moments, MonteCarloMoments,
    SampleEstimate,
};
pub use variance::{
    delta_matrix, equal_share_delta_closed_form, hh_variance, ht_variance, induced_ht_moments,
    srswor_delta_closed_form, DeltaMatrix,
};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::big::{AcsStructure, Big};
use crate::design::{
    first_order_inclusion, realize_sample_big, AcsEntry, AcsObservation, Design, SampleBig,
    DEFAULT_ENUMERATION_CAP,
};
use crate::error::{BigsError, Result};
use crate::rational::{format_rational, int, to_f64};

/// Weights `ω_ik` sharing each motif's value among its ancestors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightScheme {
    /// `ω_ik = 1 / |β_k|`.
    EqualShare,
    /// `ω_ik ∝ 1 / |α_i|` normalized over `β_k`, with `|α_i|` from the BIG.
    InverseAlpha,
    /// As `InverseAlpha` with `|α_i|` supplied per frame unit, for BIGs that
    /// hold only part of `Ω`.
    InverseAlphaSizes(Vec<u64>),
    /// Explicit weights per motif, aligned with the sorted `β_k`.
    Custom(Vec<Vec<BigRational>>),
}

impl WeightScheme {
    pub fn name(&self) -> &'static str {
        match self {
            WeightScheme::EqualShare => "equal-share",
            WeightScheme::InverseAlpha | WeightScheme::InverseAlphaSizes(_) => "inv-alpha",
            WeightScheme::Custom(_) => "custom",
        }
    }

    /// The weight table for `b`, checking `Σ_{i∈β_k} ω_ik = 1` exactly.
    pub fn weights(&self, b: &Big) -> Result<WeightTable> {
        let inverse = |sizes: &dyn Fn(usize) -> u64| -> Result<Vec<Vec<BigRational>>> {
            (0..b.motif_count())
                .map(|k| {
                    let inv = b
                        .beta(k)
                        .iter()
                        .map(|&i| match sizes(i) {
                            0 => Err(BigsError::InvalidArgument(format!(
                                "unit `{}` has no successors, so 1/|alpha| is undefined",
                                b.frame()[i]
                            ))),
                            a => Ok(BigRational::new(1.into(), a.into())),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let total = inv.iter().fold(BigRational::zero(), |acc, v| acc + v);
                    Ok(inv.into_iter().map(|v| v / &total).collect())
                })
                .collect()
        };
        let rows = match self {
            WeightScheme::EqualShare => (0..b.motif_count())
                .map(|k| {
                    let m = b.beta(k).len() as i64;
                    vec![BigRational::new(1.into(), m.into()); m as usize]
                })
                .collect(),
            WeightScheme::InverseAlpha => inverse(&|i| b.alpha(i).len() as u64)?,
            WeightScheme::InverseAlphaSizes(sizes) => {
                if sizes.len() != b.frame_size() {
                    return Err(BigsError::InvalidArgument(format!(
                        "{} successor counts for a frame of {}",
                        sizes.len(),
                        b.frame_size()
                    )));
                }
                inverse(&|i| sizes[i])?
            }
            WeightScheme::Custom(rows) => {
                if rows.len() != b.motif_count() {
                    return Err(BigsError::InvalidArgument(format!(
                        "{} weight rows for {} motifs",
                        rows.len(),
                        b.motif_count()
                    )));
                }
                for (k, row) in rows.iter().enumerate() {
                    if row.len() != b.beta(k).len() {
                        return Err(BigsError::InvalidArgument(format!(
                            "motif `{}` has {} ancestors but {} weights",
                            b.motif_label(k),
                            b.beta(k).len(),
                            row.len()
                        )));
                    }
                }
                rows.clone()
            }
        };
        for (k, row) in rows.iter().enumerate() {
            let sum = row.iter().fold(BigRational::zero(), |acc, v| acc + v);
            if !sum.is_one() {
                return Err(BigsError::WeightConstraint {
                    motif: b.motif_label(k).to_string(),
                    sum: format_rational(&sum),
                });
            }
        }
        Ok(WeightTable { rows })
    }
}

/// `ω_ik` for every motif `k`, aligned with `β_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    rows: Vec<Vec<BigRational>>,
}

impl WeightTable {
    pub fn row(&self, k: usize) -> &[BigRational] {
        &self.rows[k]
    }

    /// `ω_ik`, zero when `i ∉ β_k`.
    pub fn get(&self, b: &Big, i: usize, k: usize) -> BigRational {
        match b.beta(k).binary_search(&i) {
            Ok(pos) => self.rows[k][pos].clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// `z_i = Σ_{k∈α_i} ω_ik y_k` for every frame unit.
    pub fn z_values(&self, b: &Big) -> Vec<BigRational> {
        let mut z = vec![BigRational::zero(); b.frame_size()];
        for k in 0..b.motif_count() {
            for (pos, &i) in b.beta(k).iter().enumerate() {
                z[i] += &self.rows[k][pos] * b.y(k);
            }
        }
        z
    }
}

/// Reporting scale of an estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Total,
    /// Total divided by the frame size.
    MeanPerUnit,
}

impl Scale {
    pub fn apply(self, total: BigRational, b: &Big) -> BigRational {
        match self {
            Scale::Total => total,
            Scale::MeanPerUnit => total / int(b.frame_size() as i64),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Total => "total",
            Scale::MeanPerUnit => "mean",
        })
    }
}

impl FromStr for Scale {
    type Err = BigsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "total" => Ok(Scale::Total),
            "mean" | "mean-per-unit" => Ok(Scale::MeanPerUnit),
            _ => Err(BigsError::InvalidArgument(format!(
                "unknown scale `{s}` (expected total or mean)"
            ))),
        }
    }
}

/// An estimator to evaluate over samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EstimatorSpec {
    /// `θ̂_y = Σ_{k∈Ω_s} y_k / π_(k)`.
    Ht,
    /// `θ̂_z = Σ_{i∈s0} z_i / π_i`.
    Hh(WeightScheme),
    /// HT over eligible grids of adaptive cluster sampling, where an edge
    /// grid counts only when selected directly.
    ModifiedHt,
    /// Conditional expectation of the inner estimator given `Ω_s`.
    RaoBlackwell(Box<EstimatorSpec>),
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorSpec::Ht => f.write_str("ht"),
            EstimatorSpec::Hh(w) => write!(f, "hh:{}", w.name()),
            EstimatorSpec::ModifiedHt => f.write_str("modified-ht"),
            EstimatorSpec::RaoBlackwell(inner) => write!(f, "rb:{inner}"),
        }
    }
}

impl FromStr for EstimatorSpec {
    type Err = BigsError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if let Some(inner) = s.strip_prefix("rb:") {
            return Ok(EstimatorSpec::RaoBlackwell(Box::new(inner.parse()?)));
        }
        match s.as_str() {
            "ht" => Ok(EstimatorSpec::Ht),
            "hh" | "hh:equal-share" => Ok(EstimatorSpec::Hh(WeightScheme::EqualShare)),
            "hh:inv-alpha" => Ok(EstimatorSpec::Hh(WeightScheme::InverseAlpha)),
            "modified-ht" => Ok(EstimatorSpec::ModifiedHt),
            _ => Err(BigsError::InvalidArgument(format!(
                "unknown estimator `{s}` (expected ht, hh:equal-share, hh:inv-alpha, modified-ht, rb:<estimator>)"
            ))),
        }
    }
}

/// One term of an estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    /// Motif id (HT) or frame unit (HH).
    pub id: String,
    /// `y_k` or `z_i`.
    #[serde(with = "crate::rational::text")]
    pub value: BigRational,
    /// `π_(k)` or `π_i`.
    #[serde(with = "crate::rational::text")]
    pub probability: BigRational,
    /// `value / probability`.
    #[serde(with = "crate::rational::text")]
    pub term: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub estimator: String,
    pub scale: Scale,
    #[serde(with = "crate::rational::text")]
    pub estimate: BigRational,
    pub contributions: Vec<Contribution>,
}

impl EstimatorReport {
    pub fn estimate_f64(&self) -> f64 {
        to_f64(&self.estimate)
    }
}

fn check_sample(sb: &SampleBig, b: &Big) -> Result<()> {
    for &k in &sb.omega_s {
        if k >= b.motif_count() {
            return Err(BigsError::AncestralViolation(format!(
                "observed motif index {k} is not in the BIG"
            )));
        }
        let beta = b.beta(k);
        if beta.is_empty() {
            return Err(BigsError::AncestralViolation(format!(
                "ancestors of motif `{}` are unknown",
                b.motif_label(k)
            )));
        }
        if let Some(&i) = beta
            .iter()
            .find(|i| sb.s0.binary_search(i).is_err() && sb.out_ancestors.binary_search(i).is_err())
        {
            return Err(BigsError::AncestralViolation(format!(
                "ancestor `{}` of motif `{}` was not observed",
                b.frame()[i],
                b.motif_label(k)
            )));
        }
    }
    Ok(())
}

fn check_frame(d: &Design, b: &Big) -> Result<()> {
    if d.frame_size() != b.frame_size() {
        return Err(BigsError::InvalidArgument(format!(
            "design frame of {} units, BIG frame of {}",
            d.frame_size(),
            b.frame_size()
        )));
    }
    Ok(())
}

fn finish(estimator: String, scale: Scale, b: &Big, contributions: Vec<Contribution>) -> EstimatorReport {
    let total = contributions.iter().fold(BigRational::zero(), |acc, c| acc + &c.term);
    EstimatorReport {
        estimator,
        scale,
        estimate: scale.apply(total, b),
        contributions,
    }
}

/// HT estimator `θ̂_y` from a realized sample BIG.
pub fn ht_estimate(sb: &SampleBig, d: &Design, b: &Big, scale: Scale) -> Result<EstimatorReport> {
    check_frame(d, b)?;
    check_sample(sb, b)?;
    let contributions = sb
        .omega_s
        .iter()
        .map(|&k| {
            let pi = first_order_inclusion(d, b, k)?;
            Ok(Contribution {
                id: b.motif_label(k).to_string(),
                value: b.y(k).clone(),
                term: b.y(k) / &pi,
                probability: pi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("ht".into(), scale, b, contributions))
}

/// HH-type estimator `θ̂_z` from a realized sample BIG.
pub fn hh_estimate(
    sb: &SampleBig,
    d: &Design,
    b: &Big,
    w: &WeightScheme,
    scale: Scale,
) -> Result<EstimatorReport> {
    check_frame(d, b)?;
    check_sample(sb, b)?;
    let table = w.weights(b)?;
    let contributions = sb
        .s0
        .iter()
        .map(|&i| {
            let z = b
                .alpha(i)
                .iter()
                .fold(BigRational::zero(), |acc, &k| acc + table.get(b, i, k) * b.y(k));
            let pi = d.inclusion(i);
            Contribution {
                id: b.frame()[i].clone(),
                term: &z / &pi,
                value: z,
                probability: pi,
            }
        })
        .collect();
    Ok(finish(format!("hh:{}", w.name()), scale, b, contributions))
}

fn acs_structure(b: &Big) -> Result<&AcsStructure> {
    b.acs().ok_or_else(|| {
        BigsError::InvalidArgument("the modified HT estimator needs a BIG built from an ACS population".into())
    })
}

/// Modified HT estimator of adaptive cluster sampling: grids observed only
/// as edge grids of a network are left out.
pub fn modified_ht_acs(
    observed: &AcsObservation,
    d: &Design,
    b: &Big,
    scale: Scale,
) -> Result<EstimatorReport> {
    check_frame(d, b)?;
    let s = acs_structure(b)?;
    let mut contributions = Vec::new();
    for &(k, entry) in &observed.observed {
        if s.is_edge_grid(k) && entry != AcsEntry::Selected {
            continue;
        }
        let pi = BigRational::one() - d.exclusion_probability(&s.eligibility_set(k))?;
        contributions.push(Contribution {
            id: b.motif_label(k).to_string(),
            value: b.y(k).clone(),
            term: b.y(k) / &pi,
            probability: pi,
        });
    }
    Ok(finish("modified-ht".into(), scale, b, contributions))
}

/// Rao-Blackwell version of `spec`: its average over every initial sample
/// producing the same observed motif set, weighted by `p(s0)`.
pub fn rao_blackwellize(
    spec: &EstimatorSpec,
    d: &Design,
    b: &Big,
    observed: &SampleBig,
    scale: Scale,
) -> Result<EstimatorReport> {
    let prepared = PreparedEstimator::new(spec, d, b)?;
    let mut weighted = BigRational::zero();
    let mut mass = BigRational::zero();
    for point in d.enumerate(DEFAULT_ENUMERATION_CAP)? {
        if realize_sample_big(b, &point.sample).omega_s == observed.omega_s {
            weighted += prepared.estimate(&point.sample) * &point.probability;
            mass += &point.probability;
        }
    }
    if mass.is_zero() {
        return Err(BigsError::InvalidArgument(
            "no initial sample of the design produces the observed motif set".into(),
        ));
    }
    Ok(EstimatorReport {
        estimator: format!("rb:{spec}"),
        scale,
        estimate: scale.apply(weighted / mass, b),
        contributions: Vec::new(),
    })
}

/// An estimator with its inclusion probabilities precomputed for one BIG and
/// design, ready to be evaluated on many initial samples.
#[derive(Clone, Debug)]
pub struct PreparedEstimator<'b> {
    big: &'b Big,
    kind: Prepared,
}

#[derive(Clone, Debug)]
enum Prepared {
    /// `y_k / π_(k)` per motif.
    Motif { term: Vec<BigRational>, term_f64: Vec<f64> },
    /// `z_i / π_i` per unit.
    Unit { term: Vec<BigRational>, term_f64: Vec<f64> },
    /// `y_k / π*_k` per grid with edge-grid flags.
    Eligible {
        term: Vec<BigRational>,
        term_f64: Vec<f64>,
        edge: Vec<bool>,
    },
    /// Conditional expectation per observed motif set.
    Conditional(HashMap<Vec<usize>, BigRational>),
}

impl<'b> PreparedEstimator<'b> {
    pub fn new(spec: &EstimatorSpec, d: &Design, b: &'b Big) -> Result<PreparedEstimator<'b>> {
        check_frame(d, b)?;
        let kind = match spec {
            EstimatorSpec::Ht => {
                let term = (0..b.motif_count())
                    .map(|k| Ok(b.y(k) / first_order_inclusion(d, b, k)?))
                    .collect::<Result<Vec<_>>>()?;
                Prepared::Motif {
                    term_f64: term.iter().map(to_f64).collect(),
                    term,
                }
            }
            EstimatorSpec::Hh(w) => {
                let z = w.weights(b)?.z_values(b);
                let term = z
                    .into_iter()
                    .enumerate()
                    .map(|(i, z)| {
                        let pi = d.inclusion(i);
                        if pi.is_zero() {
                            return Err(BigsError::InvalidDesign(format!(
                                "unit `{}` has zero inclusion probability",
                                b.frame()[i]
                            )));
                        }
                        Ok(z / pi)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Prepared::Unit {
                    term_f64: term.iter().map(to_f64).collect(),
                    term,
                }
            }
            EstimatorSpec::ModifiedHt => {
                let s = acs_structure(b)?;
                let term = (0..b.motif_count())
                    .map(|k| {
                        let pi = BigRational::one() - d.exclusion_probability(&s.eligibility_set(k))?;
                        Ok(b.y(k) / pi)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Prepared::Eligible {
                    term_f64: term.iter().map(to_f64).collect(),
                    term,
                    edge: (0..b.motif_count()).map(|k| s.is_edge_grid(k)).collect(),
                }
            }
            EstimatorSpec::RaoBlackwell(inner) => {
                let inner = PreparedEstimator::new(inner, d, b)?;
                let mut groups: HashMap<Vec<usize>, (BigRational, BigRational)> = HashMap::new();
                for point in d.enumerate(DEFAULT_ENUMERATION_CAP)? {
                    let key = realize_sample_big(b, &point.sample).omega_s;
                    let entry = groups.entry(key).or_insert_with(|| (BigRational::zero(), BigRational::zero()));
                    entry.0 += inner.estimate(&point.sample) * &point.probability;
                    entry.1 += &point.probability;
                }
                Prepared::Conditional(groups.into_iter().map(|(k, (w, m))| (k, w / m)).collect())
            }
        };
        Ok(PreparedEstimator { big: b, kind })
    }

    fn observed(&self, s0: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.big.motif_count()];
        for &i in s0 {
            for &k in self.big.alpha(i) {
                seen[k] = true;
            }
        }
        seen
    }

    /// Total-scale estimate for the initial sample `s0` (sorted, distinct).
    pub fn estimate(&self, s0: &[usize]) -> BigRational {
        match &self.kind {
            Prepared::Motif { term, .. } => self
                .observed(s0)
                .iter()
                .zip(term)
                .filter(|(seen, _)| **seen)
                .fold(BigRational::zero(), |acc, (_, t)| acc + t),
            Prepared::Unit { term, .. } => s0.iter().fold(BigRational::zero(), |acc, &i| acc + &term[i]),
            Prepared::Eligible { term, edge, .. } => self
                .observed(s0)
                .iter()
                .enumerate()
                .filter(|&(k, seen)| *seen && (!edge[k] || s0.contains(&k)))
                .fold(BigRational::zero(), |acc, (k, _)| acc + &term[k]),
            Prepared::Conditional(groups) => {
                let key: Vec<usize> = self
                    .observed(s0)
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| **s)
                    .map(|(k, _)| k)
                    .collect();
                groups.get(&key).cloned().unwrap_or_else(BigRational::zero)
            }
        }
    }

    /// Floating-point estimate for simulation.
    pub fn estimate_f64(&self, s0: &[usize]) -> f64 {
        match &self.kind {
            Prepared::Motif { term_f64, .. } => self
                .observed(s0)
                .iter()
                .zip(term_f64)
                .filter(|(seen, _)| **seen)
                .map(|(_, t)| t)
                .sum(),
            Prepared::Unit { term_f64, .. } => s0.iter().map(|&i| term_f64[i]).sum(),
            Prepared::Eligible { term_f64, edge, .. } => self
                .observed(s0)
                .iter()
                .enumerate()
                .filter(|&(k, seen)| *seen && (!edge[k] || s0.contains(&k)))
                .map(|(k, _)| term_f64[k])
                .sum(),
            Prepared::Conditional(_) => to_f64(&self.estimate(s0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big::{build_big_acs, AcsPopulation, AncestorRule, MotifEntry};
    use crate::design::acs_sample;
    use crate::graph::Graph;
    use crate::rational::{format_decimal, ratio};

    fn thompson() -> AcsPopulation {
        let grid = Graph::with_labels(
            ["1", "0", "2", "10", "1000"].map(String::from).to_vec(),
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
            false,
        )
        .unwrap();
        AcsPopulation::new(grid, [1, 0, 2, 10, 1000].map(int).to_vec(), int(5)).unwrap()
    }

    #[test]
    fn ht_under_each_strategy() {
        let pop = thompson();
        let d = Design::srswor(5, 2).unwrap();
        let star = build_big_acs(&pop, AncestorRule::AcsBStar).unwrap();
        let sb = realize_sample_big(&star, &[2, 3]);
        let est = ht_estimate(&sb, &d, &star, Scale::MeanPerUnit).unwrap();
        assert_eq!(format_decimal(&est.estimate, 3), "289.571");

        let sb = realize_sample_big(&star, &[3, 4]);
        assert_eq!(sb.omega_s, vec![3, 4]);

        let dagger = build_big_acs(&pop, AncestorRule::AcsBDagger).unwrap();
        assert_eq!(first_order_inclusion(&d, &dagger, 2).unwrap(), ratio(7, 10));
        assert_eq!(first_order_inclusion(&d, &star, 2).unwrap(), ratio(2, 5));
        let sb = realize_sample_big(&dagger, &[1, 2]);
        assert_eq!(sb.omega_s, vec![1]);
        let est = ht_estimate(&sb, &d, &dagger, Scale::MeanPerUnit).unwrap();
        assert_eq!(format_decimal(&est.estimate, 3), "0.000");
        let sb = realize_sample_big(&dagger, &[2, 3]);
        let est = ht_estimate(&sb, &d, &dagger, Scale::MeanPerUnit).unwrap();
        assert_eq!(format_decimal(&est.estimate, 3), "289.143");
    }

    #[test]
    fn modified_ht_eligibility() {
        let pop = thompson();
        let d = Design::srswor(5, 2).unwrap();
        let b = build_big_acs(&pop, AncestorRule::AcsB).unwrap();
        let est = modified_ht_acs(&acs_sample(&pop, &[3, 4]), &d, &b, Scale::MeanPerUnit).unwrap();
        assert_eq!(format_decimal(&est.estimate, 3), "288.571");
        assert_eq!(est.contributions.len(), 2);
        let est = modified_ht_acs(&acs_sample(&pop, &[2, 3]), &d, &b, Scale::MeanPerUnit).unwrap();
        assert_eq!(format_decimal(&est.estimate, 3), "289.571");
        let prepared = PreparedEstimator::new(&EstimatorSpec::ModifiedHt, &d, &b).unwrap();
        assert_eq!(prepared.estimate(&[3, 4]) / int(5), ratio(2020, 7));
    }

    #[test]
    fn rao_blackwell_on_the_full_strategy() {
        let pop = thompson();
        let d = Design::srswor(5, 2).unwrap();
        let b = build_big_acs(&pop, AncestorRule::AcsB).unwrap();
        let sb = realize_sample_big(&b, &[3, 4]);
        assert_eq!(sb.omega_s, vec![2, 3, 4]);
        let rb = rao_blackwellize(&EstimatorSpec::ModifiedHt, &d, &b, &sb, Scale::MeanPerUnit).unwrap();
        assert_eq!(format_decimal(&rb.estimate, 3), "289.238");
    }

    #[test]
    fn weight_schemes() {
        let frame: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let motifs = vec![
            MotifEntry { id: "p".into(), y: int(6), members: vec![] },
            MotifEntry { id: "q".into(), y: int(3), members: vec![] },
        ];
        let b = Big::new(frame, motifs, &[(0, 0), (1, 0), (1, 1), (2, 1)], AncestorRule::Explicit, None).unwrap();
        let eq = WeightScheme::EqualShare.weights(&b).unwrap();
        assert_eq!(eq.z_values(&b), vec![int(3), ratio(9, 2), ratio(3, 2)]);
        // |α| = (1, 2, 1): unit b gets 1/3 of each motif.
        let inv = WeightScheme::InverseAlpha.weights(&b).unwrap();
        assert_eq!(inv.get(&b, 1, 0), ratio(1, 3));
        assert_eq!(inv.get(&b, 2, 0), int(0));
        let bad = WeightScheme::Custom(vec![vec![ratio(1, 2), ratio(1, 3)], vec![int(1), int(0)]]);
        assert!(matches!(bad.weights(&b), Err(BigsError::WeightConstraint { .. })));
        assert!(WeightScheme::InverseAlphaSizes(vec![1, 0, 1]).weights(&b).is_err());
    }

    #[test]
    fn spec_text_round_trips() {
        for text in ["ht", "hh:equal-share", "hh:inv-alpha", "modified-ht", "rb:modified-ht"] {
            assert_eq!(text.parse::<EstimatorSpec>().unwrap().to_string(), text);
        }
        assert!("horvitz".parse::<EstimatorSpec>().is_err());
        assert_eq!("mean".parse::<Scale>().unwrap(), Scale::MeanPerUnit);
    }
}
