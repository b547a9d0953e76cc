// SPDX-License-Identifier: Apache-2.0

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const PMF_TOLERANCE: f64 = 1e-9;

/// Probability mass function over set sizes `1..=max_size`.
///
/// `pmf[i]` is the probability of size `i + 1`. Mean and variance are cached.
/// Serialized as the bare pmf array.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SizeDistribution {
    pmf: Vec<f64>,
    mean: f64,
    variance: f64,
    sampler: WeightedIndex<f64>,
}

impl PartialEq for SizeDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.pmf == other.pmf
    }
}

impl TryFrom<Vec<f64>> for SizeDistribution {
    type Error = Error;

    fn try_from(pmf: Vec<f64>) -> Result<Self> {
        SizeDistribution::from_pmf(pmf)
    }
}

impl From<SizeDistribution> for Vec<f64> {
    fn from(d: SizeDistribution) -> Self {
        d.pmf
    }
}

impl SizeDistribution {
    pub fn from_pmf(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if let Some((i, &x)) = pmf
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_finite() || **x < 0.0)
        {
            return Err(Error::InvalidDistribution(format!(
                "probability of size {} is {x}",
                i + 1
            )));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let (mean, second) = pmf.iter().enumerate().fold((0.0, 0.0), |(m, s), (i, &w)| {
            let x = (i + 1) as f64;
            (m + w * x, s + w * x * x)
        });
        let variance = (second - mean * mean).max(0.0);
        let sampler =
            WeightedIndex::new(&pmf).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(SizeDistribution {
            pmf,
            mean,
            variance,
            sampler,
        })
    }

    /// All mass on `size`, supported on `1..=max_size`.
    pub fn point_mass(max_size: usize, size: usize) -> Result<Self> {
        if size == 0 || size > max_size {
            return Err(Error::InvalidDistribution(format!(
                "point mass at {size} outside 1..={max_size}"
            )));
        }
        let mut pmf = vec![0.0; max_size];
        pmf[size - 1] = 1.0;
        Self::from_pmf(pmf)
    }

    /// Uniform over `lo..=hi`, supported on `1..=max_size`.
    pub fn uniform(max_size: usize, lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || lo > hi || hi > max_size {
            return Err(Error::InvalidDistribution(format!(
                "uniform range {lo}..={hi} outside 1..={max_size}"
            )));
        }
        let w = 1.0 / (hi - lo + 1) as f64;
        let pmf = (1..=max_size)
            .map(|s| if (lo..=hi).contains(&s) { w } else { 0.0 })
            .collect();
        Self::from_pmf(pmf)
    }

    pub fn max_size(&self) -> usize {
        self.pmf.len()
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Probability of set size `size` (zero outside the support).
    pub fn prob(&self, size: usize) -> f64 {
        if size == 0 {
            0.0
        } else {
            self.pmf.get(size - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sample_size<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let d = SizeDistribution::uniform(4, 1, 2).unwrap();
        assert!((d.mean() - 1.5).abs() < 1e-12);
        assert!((d.variance() - 0.25).abs() < 1e-12);
        let p = SizeDistribution::point_mass(10, 7).unwrap();
        assert_eq!(p.mean(), 7.0);
        assert_eq!(p.variance(), 0.0);
    }

    #[test]
    fn rejects_bad_pmf() {
        assert!(SizeDistribution::from_pmf(vec![]).is_err());
        assert!(SizeDistribution::from_pmf(vec![0.5, 0.4]).is_err());
        assert!(SizeDistribution::from_pmf(vec![1.5, -0.5]).is_err());
        assert!(SizeDistribution::from_pmf(vec![f64::NAN, 1.0]).is_err());
        assert!(SizeDistribution::point_mass(3, 0).is_err());
        assert!(SizeDistribution::point_mass(3, 4).is_err());
    }

    #[test]
    fn accepts_within_tolerance() {
        assert!(SizeDistribution::from_pmf(vec![0.3, 0.7 + 1e-12]).is_ok());
    }

    #[test]
    fn serde_is_bare_pmf() {
        let d = SizeDistribution::uniform(3, 2, 3).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, "[0.0,0.5,0.5]");
        let back: SizeDistribution = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<SizeDistribution>("[0.2]").is_err());
    }
}
