use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Moments, WeightScheme, WeightTable};
use crate::big::Big;
use crate::design::{first_order_inclusion, second_order_inclusion, Design, DesignKind};
use crate::error::{BigsError, Result};
use crate::rational::binomial;

/// `Δ_kl` for every ordered motif pair, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMatrix {
    size: usize,
    entries: Vec<BigRational>,
}

impl DeltaMatrix {
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn get(&self, k: usize, l: usize) -> &BigRational {
        &self.entries[k * self.size + l]
    }

    /// `Σ_k Σ_l Δ_kl y_k y_l`, equal to `V(θ̂_z) - V(θ̂_y)`.
    pub fn quadratic_form(&self, y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for k in 0..self.size {
            for l in 0..self.size {
                acc += self.get(k, l) * &y[k] * &y[l];
            }
        }
        acc
    }
}

/// `π_(kl) / (π_(k) π_(l))` for every motif pair; a zero joint inclusion is
/// an error.
fn motif_ratios(b: &Big, d: &Design) -> Result<Vec<BigRational>> {
    let m = b.motif_count();
    let pi: Vec<BigRational> = (0..m).map(|k| first_order_inclusion(d, b, k)).collect::<Result<_>>()?;
    (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (k, l) = (idx / m, idx % m);
            let joint = second_order_inclusion(d, b, k, l)?;
            if joint.is_zero() {
                return Err(BigsError::ZeroJointInclusion(
                    b.motif_label(k).to_string(),
                    b.motif_label(l).to_string(),
                ));
            }
            Ok(joint / (&pi[k] * &pi[l]))
        })
        .collect()
}

/// `π_ij / (π_i π_j)` for every unit pair.
fn unit_ratios(d: &Design) -> Result<Vec<BigRational>> {
    let n = d.frame_size();
    let pi: Vec<BigRational> = (0..n).map(|i| d.inclusion(i)).collect();
    if let Some(i) = pi.iter().position(Zero::is_zero) {
        return Err(BigsError::InvalidDesign(format!("unit {i} has zero inclusion probability")));
    }
    Ok((0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            d.joint_inclusion(i, j) / (&pi[i] * &pi[j])
        })
        .collect())
}

/// General `Δ_kl` for any design.
pub fn delta_matrix(b: &Big, d: &Design, w: &WeightScheme) -> Result<DeltaMatrix> {
    let table = w.weights(b)?;
    let motif = motif_ratios(b, d)?;
    let unit = unit_ratios(d)?;
    let n = d.frame_size();
    let m = b.motif_count();
    let entries = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (k, l) = (idx / m, idx % m);
            let mut first = BigRational::zero();
            for (a, &i) in b.beta(k).iter().enumerate() {
                for (c, &j) in b.beta(l).iter().enumerate() {
                    first += &unit[i * n + j] * &table.row(k)[a] * &table.row(l)[c];
                }
            }
            first - &motif[idx]
        })
        .collect();
    Ok(DeltaMatrix { size: m, entries })
}

fn srswor_size(d: &Design) -> Result<usize> {
    match d.kind() {
        DesignKind::Srswor { n } => Ok(*n),
        DesignKind::Enumerated(_) => Err(BigsError::InvalidArgument(
            "the closed form applies to simple random sampling without replacement".into(),
        )),
    }
}

/// `π_(kl)/(π_(k) π_(l))` from ancestor set sizes under SRSWOR.
fn srswor_motif_ratio(big_n: u64, n: u64, mk: u64, ml: u64, mkl: u64) -> Option<BigRational> {
    let total = binomial(big_n, n);
    let excl = |size: u64| BigRational::new(binomial(big_n - size, n), total.clone());
    let (ek, el) = (excl(mk), excl(ml));
    let joint = BigRational::one() - (&ek + &el - excl(mk + ml - mkl));
    if joint.is_zero() {
        return None;
    }
    Some(joint / ((BigRational::one() - ek) * (BigRational::one() - el)))
}

fn closed_form(
    b: &Big,
    d: &Design,
    overlap: impl Fn(usize, usize) -> BigRational + Sync,
) -> Result<DeltaMatrix> {
    let n = srswor_size(d)? as u64;
    let big_n = d.frame_size() as u64;
    if big_n != b.frame_size() as u64 {
        return Err(BigsError::InvalidArgument("design and BIG frames differ".into()));
    }
    // Coefficients N/n for i = j and N(n-1)/(n(N-1)) for i != j.
    let same = BigRational::new(BigInt::from(big_n), BigInt::from(n));
    let other = if big_n > 1 {
        BigRational::new(BigInt::from(big_n * (n - 1)), BigInt::from(n * (big_n - 1)))
    } else {
        BigRational::zero()
    };
    let m = b.motif_count();
    let entries = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (k, l) = (idx / m, idx % m);
            let (bk, bl) = (b.beta(k), b.beta(l));
            let mkl = bk.iter().filter(|i| bl.binary_search(i).is_ok()).count() as u64;
            let ratio = srswor_motif_ratio(big_n, n, bk.len() as u64, bl.len() as u64, mkl).ok_or_else(|| {
                BigsError::ZeroJointInclusion(b.motif_label(k).to_string(), b.motif_label(l).to_string())
            })?;
            let shared = overlap(k, l);
            Ok(&same * &shared + &other * (BigRational::one() - &shared) - ratio)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeltaMatrix { size: m, entries })
}

/// `Δ_kl` specialized to SRSWOR: only `Σ_{i∈β_k∩β_l} ω_ik ω_il` and the
/// ancestor set sizes enter.
pub fn srswor_delta_closed_form(b: &Big, d: &Design, w: &WeightScheme) -> Result<DeltaMatrix> {
    let table: WeightTable = w.weights(b)?;
    closed_form(b, d, |k, l| {
        b.beta(k)
            .iter()
            .enumerate()
            .filter_map(|(a, i)| {
                b.beta(l)
                    .binary_search(i)
                    .ok()
                    .map(|c| &table.row(k)[a] * &table.row(l)[c])
            })
            .fold(BigRational::zero(), |acc, v| acc + v)
    })
}

/// `Δ_kl` for equal-share weights under SRSWOR, from `m_k`, `m_l`, `m_kl`.
pub fn equal_share_delta_closed_form(b: &Big, d: &Design) -> Result<DeltaMatrix> {
    closed_form(b, d, |k, l| {
        let (bk, bl) = (b.beta(k), b.beta(l));
        let mkl = bk.iter().filter(|i| bl.binary_search(i).is_ok()).count();
        BigRational::new(mkl.into(), (bk.len() * bl.len()).into())
    })
}

/// `V(θ̂_y) = Σ_kl π_(kl)/(π_(k) π_(l)) y_k y_l - θ²` without enumeration.
pub fn ht_variance(b: &Big, d: &Design) -> Result<BigRational> {
    let m = b.motif_count();
    let ratios = motif_ratios(b, d)?;
    let mut acc = BigRational::zero();
    for k in 0..m {
        for l in 0..m {
            acc += &ratios[k * m + l] * b.y(k) * b.y(l);
        }
    }
    let theta = b.total();
    Ok(acc - &theta * &theta)
}

/// `V(θ̂_z) = Σ_ij π_ij/(π_i π_j) z_i z_j - θ²` without enumeration.
pub fn hh_variance(b: &Big, d: &Design, w: &WeightScheme) -> Result<BigRational> {
    let z = w.weights(b)?.z_values(b);
    let unit = unit_ratios(d)?;
    let n = d.frame_size();
    let mut acc = BigRational::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &unit[i * n + j] * &z[i] * &z[j];
        }
    }
    let theta = b.total();
    Ok(acc - &theta * &theta)
}

/// Moments of the HT estimator under induced observation from SRSWOR(N, n):
/// a motif is observed iff all its nodes are sampled.
pub fn induced_ht_moments(
    members: &[Vec<usize>],
    y: &[BigRational],
    frame_size: usize,
    n: usize,
) -> Result<Moments> {
    if members.len() != y.len() {
        return Err(BigsError::InvalidArgument("one value per motif is required".into()));
    }
    let big_n = frame_size as u64;
    let total = binomial(big_n, n as u64);
    let all_in = |size: usize| -> BigRational {
        if size > n {
            BigRational::zero()
        } else {
            BigRational::new(binomial(big_n - size as u64, (n - size) as u64), total.clone())
        }
    };
    let pi: Vec<BigRational> = members.iter().map(|m| all_in(m.len())).collect();
    if let Some(k) = pi.iter().position(Zero::is_zero) {
        return Err(BigsError::InvalidArgument(format!(
            "motif {k} has more nodes than the sample size {n}"
        )));
    }
    let second: BigRational = (0..members.len())
        .into_par_iter()
        .map(|k| {
            let mut acc = BigRational::zero();
            for l in 0..members.len() {
                let union = members[k].len() + members[l].len()
                    - members[k].iter().filter(|v| members[l].binary_search(v).is_ok()).count();
                acc += all_in(union) / (&pi[k] * &pi[l]) * &y[k] * &y[l];
            }
            acc
        })
        .reduce(BigRational::zero, |a, b| a + b);
    let theta = y.iter().fold(BigRational::zero(), |acc, v| acc + v);
    let variance = second - &theta * &theta;
    Ok(Moments {
        expectation: theta.clone(),
        theta,
        mse: variance.clone(),
        variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big::{AncestorRule, MotifEntry};
    use crate::estimator::{exact_moments, EstimatorSpec, Scale};
    use crate::rational::int;

    fn small_big() -> Big {
        let frame: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
        let motifs = vec![
            MotifEntry { id: "p".into(), y: int(4), members: vec![] },
            MotifEntry { id: "q".into(), y: int(1), members: vec![] },
            MotifEntry { id: "r".into(), y: int(2), members: vec![] },
        ];
        Big::new(
            frame,
            motifs,
            &[(0, 0), (1, 0), (1, 1), (2, 1), (3, 1), (3, 2)],
            AncestorRule::Explicit,
            None,
        )
        .unwrap()
    }

    #[test]
    fn variance_difference_identity() {
        let b = small_big();
        let d = Design::srswor(4, 2).unwrap();
        let y: Vec<BigRational> = (0..3).map(|k| b.y(k).clone()).collect();
        for w in [WeightScheme::EqualShare, WeightScheme::InverseAlpha] {
            let delta = delta_matrix(&b, &d, &w).unwrap();
            let vz = exact_moments(&EstimatorSpec::Hh(w.clone()), &d, &b, Scale::Total).unwrap().variance;
            let vy = exact_moments(&EstimatorSpec::Ht, &d, &b, Scale::Total).unwrap().variance;
            assert_eq!(delta.quadratic_form(&y), &vz - &vy);
            assert_eq!(hh_variance(&b, &d, &w).unwrap(), vz);
            assert_eq!(ht_variance(&b, &d).unwrap(), vy);
            assert_eq!(srswor_delta_closed_form(&b, &d, &w).unwrap(), delta);
        }
        assert_eq!(
            equal_share_delta_closed_form(&b, &d).unwrap(),
            delta_matrix(&b, &d, &WeightScheme::EqualShare).unwrap()
        );
    }

    #[test]
    fn zero_joint_inclusion_aborts() {
        let b = small_big();
        let d = Design::srswor(4, 1).unwrap();
        assert!(matches!(
            delta_matrix(&b, &d, &WeightScheme::EqualShare),
            Err(BigsError::ZeroJointInclusion(..))
        ));
    }

    #[test]
    fn induced_pair() {
        // One edge motif {0,1} in a frame of 3 with n = 2: π = 1/3.
        let m = induced_ht_moments(&[vec![0, 1]], &[int(1)], 3, 2).unwrap();
        assert_eq!(m.variance, int(2));
        assert_eq!(m.mse, int(2));
        assert!(induced_ht_moments(&[vec![0, 1, 2]], &[int(1)], 3, 2).is_err());
    }
}
