use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EstimatorSpec, PreparedEstimator, Scale};
use crate::big::Big;
use crate::design::{Design, DEFAULT_ENUMERATION_CAP};
use crate::error::{BigsError, Result};
use crate::rational::to_f64;

/// Replicates drawn from one RNG stream.
const BLOCK: u64 = 4096;

/// Exact design moments of an estimator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Moments {
    #[serde(with = "crate::rational::text")]
    pub theta: BigRational,
    #[serde(with = "crate::rational::text")]
    pub expectation: BigRational,
    /// Probability-weighted second central moment.
    #[serde(with = "crate::rational::text")]
    pub variance: BigRational,
    #[serde(with = "crate::rational::text")]
    pub mse: BigRational,
}

impl Moments {
    pub fn bias(&self) -> BigRational {
        &self.expectation - &self.theta
    }
}

/// Estimate for one support point of the design.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleEstimate {
    pub s0: Vec<usize>,
    #[serde(with = "crate::rational::text")]
    pub probability: BigRational,
    #[serde(with = "crate::rational::text")]
    pub estimate: BigRational,
}

/// Estimates over every support point of the design, in enumeration order.
pub fn enumerate_estimates(
    spec: &EstimatorSpec,
    d: &Design,
    b: &Big,
    scale: Scale,
) -> Result<Vec<SampleEstimate>> {
    let prepared = PreparedEstimator::new(spec, d, b)?;
    let points: Vec<_> = d.enumerate(DEFAULT_ENUMERATION_CAP)?.collect();
    Ok(points
        .into_par_iter()
        .map(|p| SampleEstimate {
            estimate: scale.apply(prepared.estimate(&p.sample), b),
            s0: p.sample,
            probability: p.probability,
        })
        .collect())
}

/// Expectation, variance and MSE by full enumeration of the design.
pub fn exact_moments(spec: &EstimatorSpec, d: &Design, b: &Big, scale: Scale) -> Result<Moments> {
    let prepared = PreparedEstimator::new(spec, d, b)?;
    let points: Vec<_> = d.enumerate(DEFAULT_ENUMERATION_CAP)?.collect();
    let zero = || (BigRational::zero(), BigRational::zero());
    let (first, second) = points
        .par_iter()
        .map(|p| {
            let e = scale.apply(prepared.estimate(&p.sample), b);
            (&e * &p.probability, &e * &e * &p.probability)
        })
        .reduce(zero, |a, b| (a.0 + b.0, a.1 + b.1));
    let theta = scale.apply(b.total(), b);
    let variance = &second - &first * &first;
    let bias = &first - &theta;
    Ok(Moments {
        mse: &variance + &bias * &bias,
        theta,
        expectation: first,
        variance,
    })
}

/// Simulated moments with Monte Carlo standard errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloMoments {
    pub replicates: u64,
    pub seed: u64,
    pub theta: f64,
    pub mean: f64,
    /// Sample variance of the replicate estimates (divisor `R - 1`).
    pub variance: f64,
    pub mse: f64,
    pub se_mean: f64,
    pub se_variance: f64,
    pub se_mse: f64,
}

/// Draws `replicates` initial samples and summarizes the estimates. Blocks
/// of replicates use independent ChaCha streams derived from `seed`, so the
/// result does not depend on the number of threads.
pub fn monte_carlo_moments(
    spec: &EstimatorSpec,
    d: &Design,
    b: &Big,
    scale: Scale,
    replicates: u64,
    seed: u64,
) -> Result<MonteCarloMoments> {
    if replicates == 0 {
        return Err(BigsError::InvalidArgument("replicates must be at least 1".into()));
    }
    let prepared = PreparedEstimator::new(spec, d, b)?;
    let factor = to_f64(&scale.apply(BigRational::from_integer(1.into()), b));
    let blocks = replicates.div_ceil(BLOCK);
    let estimates: Vec<f64> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let count = BLOCK.min(replicates - block * BLOCK);
            let prepared = &prepared;
            (0..count)
                .map(|_| prepared.estimate_f64(&d.draw(&mut rng)) * factor)
                .collect::<Vec<_>>()
        })
        .collect();

    let r = estimates.len() as f64;
    let theta = to_f64(&scale.apply(b.total(), b));
    let mean = estimates.iter().sum::<f64>() / r;
    let central = |p: i32| estimates.iter().map(|e| (e - mean).powi(p)).sum::<f64>() / r;
    let m2 = central(2);
    let m4 = central(4);
    let variance = if estimates.len() > 1 { m2 * r / (r - 1.0) } else { 0.0 };
    let sq_err: Vec<f64> = estimates.iter().map(|e| (e - theta).powi(2)).collect();
    let mse = sq_err.iter().sum::<f64>() / r;
    let mse_var = sq_err.iter().map(|s| (s - mse).powi(2)).sum::<f64>() / r;
    Ok(MonteCarloMoments {
        replicates,
        seed,
        theta,
        mean,
        variance,
        mse,
        se_mean: (m2 / r).sqrt(),
        se_variance: ((m4 - m2 * m2).max(0.0) / r).sqrt(),
        se_mse: (mse_var / r).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big::{build_big_acs, AcsPopulation, AncestorRule};
    use crate::graph::Graph;
    use crate::rational::{format_decimal, int};

    fn thompson(rule: AncestorRule) -> Big {
        let grid = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], false).unwrap();
        let pop = AcsPopulation::new(grid, [1, 0, 2, 10, 1000].map(int).to_vec(), int(5)).unwrap();
        build_big_acs(&pop, rule).unwrap()
    }

    #[test]
    fn table_variances() {
        let d = Design::srswor(5, 2).unwrap();
        let star = exact_moments(&EstimatorSpec::Ht, &d, &thompson(AncestorRule::AcsBStar), Scale::MeanPerUnit).unwrap();
        assert_eq!(star.expectation, star.theta);
        assert_eq!(format_decimal(&star.variance, 1), "17418.4");
        let dagger =
            exact_moments(&EstimatorSpec::Ht, &d, &thompson(AncestorRule::AcsBDagger), Scale::MeanPerUnit).unwrap();
        assert_eq!(format_decimal(&dagger.variance, 1), "17533.7");
        let b = thompson(AncestorRule::AcsB);
        let modified = exact_moments(&EstimatorSpec::ModifiedHt, &d, &b, Scale::MeanPerUnit).unwrap();
        assert_eq!(modified.variance, star.variance);
        let rb = EstimatorSpec::RaoBlackwell(Box::new(EstimatorSpec::ModifiedHt));
        let rb = exact_moments(&rb, &d, &b, Scale::MeanPerUnit).unwrap();
        assert_eq!(rb.expectation, rb.theta);
        assert!(rb.variance < modified.variance);
    }

    #[test]
    fn single_replicate_and_reproducibility() {
        let d = Design::srswor(5, 2).unwrap();
        let b = thompson(AncestorRule::AcsBStar);
        let one = monte_carlo_moments(&EstimatorSpec::Ht, &d, &b, Scale::Total, 1, 9).unwrap();
        assert_eq!(one.variance, 0.0);
        assert_eq!(one.mse, (one.mean - one.theta).powi(2));
        let a = monte_carlo_moments(&EstimatorSpec::Ht, &d, &b, Scale::Total, 10_000, 42).unwrap();
        let again = monte_carlo_moments(&EstimatorSpec::Ht, &d, &b, Scale::Total, 10_000, 42).unwrap();
        assert_eq!(a, again);
        assert!(monte_carlo_moments(&EstimatorSpec::Ht, &d, &b, Scale::Total, 0, 1).is_err());
    }
}
