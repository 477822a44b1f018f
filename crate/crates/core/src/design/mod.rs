//! Initial-sample designs `p(s0)` over the frame, exact inclusion
//! probabilities, and the observation procedures that extend `s0`.

mod sampling;

pub use sampling::{
    acs_sample, induced_sample, realize_sample_big, snowball_sample, AcsEntry, AcsObservation,
    ReferenceSet, SampleBig, SampleGraph,
};

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::WeightedIndex;
use rand::prelude::*;

use crate::big::Big;
use crate::error::{BigsError, Result};
use crate::rational::{binomial, parse_rational, to_f64};

/// Largest number of support points `enumerate` will visit by default.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// One initial sample and its probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPoint {
    /// Sorted frame indices.
    pub sample: Vec<usize>,
    pub probability: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignKind {
    /// Simple random sampling without replacement of `n` units.
    Srswor { n: usize },
    /// Explicit list of samples with rational probabilities.
    Enumerated(Vec<SupportPoint>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    frame_size: usize,
    kind: DesignKind,
}

impl Design {
    pub fn srswor(frame_size: usize, n: usize) -> Result<Design> {
        if n == 0 || n > frame_size {
            return Err(BigsError::InvalidDesign(format!(
                "SRSWOR sample size {n} must be in 1..={frame_size}"
            )));
        }
        Ok(Design {
            frame_size,
            kind: DesignKind::Srswor { n },
        })
    }

    /// Validates that probabilities are positive and sum to one, that samples
    /// are distinct subsets of the frame, and that every unit can be selected.
    pub fn enumerated(frame_size: usize, points: Vec<SupportPoint>) -> Result<Design> {
        let mut seen = BTreeSet::new();
        let mut total = BigRational::zero();
        let mut covered = vec![false; frame_size];
        let mut normalized = Vec::with_capacity(points.len());
        for mut p in points {
            if !p.probability.is_positive() {
                return Err(BigsError::InvalidDesign(format!(
                    "non-positive probability {}",
                    p.probability
                )));
            }
            p.sample.sort_unstable();
            if p.sample.windows(2).any(|w| w[0] == w[1]) {
                return Err(BigsError::InvalidDesign("sample lists a unit twice".into()));
            }
            if let Some(&bad) = p.sample.iter().find(|&&i| i >= frame_size) {
                return Err(BigsError::InvalidDesign(format!(
                    "unit {bad} outside a frame of {frame_size}"
                )));
            }
            if !seen.insert(p.sample.clone()) {
                return Err(BigsError::InvalidDesign("duplicate support point".into()));
            }
            for &i in &p.sample {
                covered[i] = true;
            }
            total += &p.probability;
            normalized.push(p);
        }
        if !total.is_one() {
            return Err(BigsError::InvalidDesign(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(BigsError::InvalidDesign(format!(
                "frame unit {i} has zero inclusion probability"
            )));
        }
        Ok(Design {
            frame_size,
            kind: DesignKind::Enumerated(normalized),
        })
    }

    /// Parses lines `p: id id ...` with rational `p`, resolving ids against
    /// the frame labels. `#` starts a comment.
    pub fn parse_enumerated(text: &str, frame: &[String]) -> Result<Design> {
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| BigsError::Parse {
                line: lineno + 1,
                message,
            };
            let (p, ids) = line
                .split_once(':')
                .ok_or_else(|| err("expected `p: id id ...`".into()))?;
            let probability =
                parse_rational(p).ok_or_else(|| err(format!("bad probability `{}`", p.trim())))?;
            let sample = ids
                .split_whitespace()
                .map(|id| {
                    frame
                        .iter()
                        .position(|f| f == id)
                        .ok_or_else(|| err(format!("unknown frame unit `{id}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            points.push(SupportPoint {
                sample,
                probability,
            });
        }
        Design::enumerated(frame.len(), points)
    }

    pub fn frame_size(&self) -> usize {
        self.frame_size
    }

    pub fn kind(&self) -> &DesignKind {
        &self.kind
    }

    pub fn sample_size(&self) -> Option<usize> {
        match self.kind {
            DesignKind::Srswor { n } => Some(n),
            DesignKind::Enumerated(_) => None,
        }
    }

    /// Number of support points.
    pub fn support_size(&self) -> BigInt {
        match &self.kind {
            DesignKind::Srswor { n } => binomial(self.frame_size as u64, *n as u64),
            DesignKind::Enumerated(points) => BigInt::from(points.len()),
        }
    }

    fn check_subset(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&i| i >= self.frame_size) {
            Some(bad) => Err(BigsError::InvalidArgument(format!(
                "unit {bad} is not in a frame of {}",
                self.frame_size
            ))),
            None => Ok(()),
        }
    }

    /// Probability that `s0` misses every unit of `set`.
    pub fn exclusion_probability(&self, set: &[usize]) -> Result<BigRational> {
        self.check_subset(set)?;
        let distinct: BTreeSet<usize> = set.iter().copied().collect();
        Ok(match &self.kind {
            DesignKind::Srswor { n } => {
                let big_n = self.frame_size as u64;
                BigRational::new(
                    binomial(big_n - distinct.len() as u64, *n as u64),
                    binomial(big_n, *n as u64),
                )
            }
            DesignKind::Enumerated(points) => points
                .iter()
                .filter(|p| p.sample.iter().all(|i| !distinct.contains(i)))
                .fold(BigRational::zero(), |acc, p| acc + &p.probability),
        })
    }

    /// `π_i`.
    pub fn inclusion(&self, i: usize) -> BigRational {
        match &self.kind {
            DesignKind::Srswor { n } => BigRational::new((*n).into(), self.frame_size.into()),
            DesignKind::Enumerated(points) => points
                .iter()
                .filter(|p| p.sample.binary_search(&i).is_ok())
                .fold(BigRational::zero(), |acc, p| acc + &p.probability),
        }
    }

    /// `π_ij`, equal to `π_i` when `i == j`.
    pub fn joint_inclusion(&self, i: usize, j: usize) -> BigRational {
        if i == j {
            return self.inclusion(i);
        }
        match &self.kind {
            DesignKind::Srswor { n } => {
                let (n, big_n) = (*n as i64, self.frame_size as i64);
                BigRational::new((n * (n - 1)).into(), (big_n * (big_n - 1)).into())
            }
            DesignKind::Enumerated(points) => points
                .iter()
                .filter(|p| p.sample.binary_search(&i).is_ok() && p.sample.binary_search(&j).is_ok())
                .fold(BigRational::zero(), |acc, p| acc + &p.probability),
        }
    }

    /// Every support point exactly once, with exact probabilities. Refuses
    /// designs with more than `cap` points.
    pub fn enumerate(&self, cap: u64) -> Result<Box<dyn Iterator<Item = SupportPoint> + '_>> {
        let support = self.support_size();
        if support > BigInt::from(cap) {
            return Err(BigsError::EnumerationCap {
                support: support.to_string(),
                cap,
            });
        }
        Ok(match &self.kind {
            DesignKind::Srswor { n } => {
                let p = BigRational::new(BigInt::one(), support);
                Box::new(
                    (0..self.frame_size)
                        .combinations(*n)
                        .map(move |sample| SupportPoint {
                            sample,
                            probability: p.clone(),
                        }),
                )
            }
            DesignKind::Enumerated(points) => Box::new(points.iter().cloned()),
        })
    }

    /// Draws one initial sample (sorted).
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        match &self.kind {
            DesignKind::Srswor { n } => {
                let mut s = rand::seq::index::sample(rng, self.frame_size, *n).into_vec();
                s.sort_unstable();
                s
            }
            DesignKind::Enumerated(points) => {
                let weights: Vec<f64> = points.iter().map(|p| to_f64(&p.probability)).collect();
                let dist = WeightedIndex::new(&weights).expect("validated probabilities");
                points[dist.sample(rng)].sample.clone()
            }
        }
    }

    /// Support size as `u64` when it fits.
    pub fn support_len(&self) -> Option<u64> {
        self.support_size().to_u64()
    }
}

/// `π_(k) = 1 - P(β_k ∩ s0 = ∅)`.
pub fn first_order_inclusion(d: &Design, b: &Big, k: usize) -> Result<BigRational> {
    let beta = b.beta(k);
    if beta.is_empty() {
        return Err(BigsError::NoAncestors {
            motif: b.motif_label(k).to_string(),
            reason: "first-order inclusion needs a nonempty ancestor set".into(),
        });
    }
    Ok(BigRational::one() - d.exclusion_probability(beta)?)
}

/// `π_(kl) = 1 - (P̄(β_k) + P̄(β_l) - P̄(β_k ∪ β_l))`.
pub fn second_order_inclusion(d: &Design, b: &Big, k: usize, l: usize) -> Result<BigRational> {
    for m in [k, l] {
        if b.beta(m).is_empty() {
            return Err(BigsError::NoAncestors {
                motif: b.motif_label(m).to_string(),
                reason: "second-order inclusion needs nonempty ancestor sets".into(),
            });
        }
    }
    let union: Vec<usize> = b.beta(k).iter().chain(b.beta(l)).copied().collect();
    Ok(BigRational::one()
        - (d.exclusion_probability(b.beta(k))? + d.exclusion_probability(b.beta(l))?
            - d.exclusion_probability(&union)?))
}

/// Enumerated designs in the text form read by `parse_enumerated`.
pub fn format_enumerated(points: &[SupportPoint], frame: &[String]) -> String {
    points
        .iter()
        .map(|p| {
            let ids = p.sample.iter().map(|&i| frame[i].as_str()).join(" ");
            format!("{}: {}\n", crate::rational::format_rational(&p.probability), ids)
        })
        .collect()
}
