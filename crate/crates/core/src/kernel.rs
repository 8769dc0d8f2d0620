//! Resampling kernels: probability mass over neighbor ranks.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which kernel a generator draws ranks from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// `(1/j) / H_k` over ranks `j = 1..=k`.
    Harmonic,
    /// Every rank equally likely.
    Uniform,
}

impl KernelKind {
    pub fn build(self, k: usize) -> Result<ResamplingKernel> {
        match self {
            KernelKind::Harmonic => ResamplingKernel::harmonic(k),
            KernelKind::Uniform => ResamplingKernel::uniform(k),
        }
    }
}

/// A probability mass function over neighbor ranks, rank 0 being the nearest.
#[derive(Clone, Debug)]
pub struct ResamplingKernel {
    probabilities: Vec<f64>,
    sampler: WeightedIndex<f64>,
}

impl ResamplingKernel {
    /// Harmonic kernel: rank `j` (1-based) gets mass `(1/j) / H_k`.
    pub fn harmonic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::NonPositive { name: "k" });
        }
        let weights: Vec<f64> = (1..=k).map(|j| 1.0 / j as f64).collect();
        let h_k: f64 = weights.iter().sum();
        Self::from_probabilities(weights.into_iter().map(|w| w / h_k).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::NonPositive { name: "k" });
        }
        Self::from_probabilities(vec![1.0 / k as f64; k])
    }

    /// Any user-supplied mass function; entries must be non-negative and sum to 1.
    pub fn from_probabilities(probabilities: Vec<f64>) -> Result<Self> {
        let total: f64 = probabilities.iter().sum();
        if probabilities.is_empty()
            || probabilities.iter().any(|p| !p.is_finite() || *p < 0.0)
            || (total - 1.0).abs() > 1e-9
        {
            return Err(Error::InvalidDistributionParams(
                "kernel probabilities must be non-negative and sum to 1".into(),
            ));
        }
        let sampler = WeightedIndex::new(&probabilities)
            .map_err(|e| Error::InvalidDistributionParams(e.to_string()))?;
        Ok(ResamplingKernel {
            probabilities,
            sampler,
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Draws a 0-based rank.
    pub fn sample_rank<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }
}
