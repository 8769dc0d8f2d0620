//! Directional alteration of series.
//!
//! * Incremental selection subtracts a random offset from every hour. Offsets
//!   are clamped to `[alpha_min * x, alpha_max * x]`, so with the default
//!   policy (`alpha_max = 1`, `alpha_min = -1`) a non-negative hour stays in
//!   `[0, 2x]` and a zero hour is never moved.
//! * Altered difference transfers the gap between a generally higher and a
//!   generally lower series onto the lower one: `R = low - alpha * (high - low)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::normal_below_probability;
use crate::series::{same_len, HourlySeries};
use crate::stats::{overage, summarize, underage, SummaryStats, Threshold};

/// Distribution of the per-hour offsets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OffsetDistribution {
    Normal {
        mean: f64,
        std_dev: f64,
        /// Probability that an altered value ends up below the original;
        /// moves the mean by `std_dev * z_p`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        below_probability: Option<f64>,
    },
    Exponential {
        mean: f64,
    },
}

impl OffsetDistribution {
    pub fn normal(mean: f64, std_dev: f64) -> Self {
        OffsetDistribution::Normal {
            mean,
            std_dev,
            below_probability: None,
        }
    }

    pub fn exponential(mean: f64) -> Self {
        OffsetDistribution::Exponential { mean }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OffsetDistribution::Normal {
                mean,
                std_dev,
                below_probability,
            } => {
                if !mean.is_finite() || !std_dev.is_finite() || std_dev <= 0.0 {
                    return Err(Error::InvalidDistributionParams(format!(
                        "normal needs finite mean and positive std_dev, got ({mean}, {std_dev})"
                    )));
                }
                if let Some(p) = below_probability {
                    if !(p > 0.0 && p < 1.0) {
                        return Err(Error::InvalidDistributionParams(format!(
                            "below_probability must lie in (0, 1), got {p}"
                        )));
                    }
                }
            }
            OffsetDistribution::Exponential { mean } => {
                if !(mean.is_finite() && mean > 0.0) {
                    return Err(Error::InvalidDistributionParams(format!(
                        "exponential mean must be positive, got {mean}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Mean the offsets are actually drawn with.
    pub fn effective_mean(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            OffsetDistribution::Normal {
                mean,
                std_dev,
                below_probability: Some(p),
            } => mean + normal_below_probability(std_dev, p)?,
            OffsetDistribution::Normal { mean, .. } => mean,
            OffsetDistribution::Exponential { mean } => mean,
        })
    }

    fn sampler(&self) -> Result<OffsetSampler> {
        let mean = self.effective_mean()?;
        Ok(match *self {
            OffsetDistribution::Normal { std_dev, .. } => OffsetSampler::Normal(
                Normal::new(mean, std_dev).map_err(|e| Error::InvalidDistributionParams(e.to_string()))?,
            ),
            OffsetDistribution::Exponential { .. } => OffsetSampler::Exp(
                Exp::new(1.0 / mean).map_err(|e| Error::InvalidDistributionParams(e.to_string()))?,
            ),
        })
    }
}

enum OffsetSampler {
    Normal(Normal<f64>),
    Exp(Exp<f64>),
}

impl OffsetSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            OffsetSampler::Normal(d) => d.sample(rng),
            OffsetSampler::Exp(d) => d.sample(rng),
        }
    }
}

/// Offset bounds as multiples of the observation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClampPolicy {
    pub alpha_max: f64,
    pub alpha_min: f64,
}

impl Default for ClampPolicy {
    fn default() -> Self {
        ClampPolicy {
            alpha_max: 1.0,
            alpha_min: -1.0,
        }
    }
}

impl ClampPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_max.is_finite() && self.alpha_min.is_finite() && self.alpha_max > self.alpha_min) {
            return Err(Error::InvalidClamp {
                alpha_max: self.alpha_max,
                alpha_min: self.alpha_min,
            });
        }
        Ok(())
    }

    /// Clamps offset `z` for an hour with observation `x`. For negative `x`
    /// the bounds swap roles so the interval stays well formed.
    pub fn clamp(&self, z: f64, x: f64) -> f64 {
        let a = self.alpha_min * x;
        let b = self.alpha_max * x;
        z.clamp(a.min(b), a.max(b))
    }
}

/// How an altered series was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Provenance {
    IncrementalSelection {
        distribution: OffsetDistribution,
        effective_mean: f64,
        clamp: ClampPolicy,
        seed: u64,
        source_checksum: String,
    },
    AlteredDifference {
        alpha: f64,
        delta_nonneg: bool,
        result_nonneg: bool,
        high_checksum: String,
        low_checksum: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlteredSeries {
    pub series: HourlySeries,
    pub provenance: Provenance,
}

/// Subtracts clamped random offsets, one per hour: `x' = x - clamp(z)`.
pub fn incremental_select(
    source: &HourlySeries,
    dist: &OffsetDistribution,
    clamp: &ClampPolicy,
    seed: u64,
) -> Result<AlteredSeries> {
    clamp.validate()?;
    let sampler = dist.sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = source
        .values()
        .iter()
        .map(|&x| x - clamp.clamp(sampler.sample(&mut rng), x))
        .collect();
    Ok(AlteredSeries {
        series: source.derive(values)?,
        provenance: Provenance::IncrementalSelection {
            distribution: *dist,
            effective_mean: dist.effective_mean()?,
            clamp: *clamp,
            seed,
            source_checksum: source.checksum(),
        },
    })
}

/// `R = low - alpha * delta` with `delta = high - low`.
///
/// `delta_nonneg` floors every delta at zero first; `result_nonneg` floors
/// the result at zero. The caller decides which input is the higher one.
pub fn altered_difference(
    high: &HourlySeries,
    low: &HourlySeries,
    alpha: f64,
    delta_nonneg: bool,
    result_nonneg: bool,
) -> Result<AlteredSeries> {
    same_len(high, low)?;
    if !alpha.is_finite() {
        return Err(Error::InvalidDistributionParams(format!("alpha must be finite, got {alpha}")));
    }
    let values = high
        .values()
        .iter()
        .zip(low.values())
        .map(|(&h, &l)| {
            let mut delta = h - l;
            if delta_nonneg {
                delta = delta.max(0.0);
            }
            let r = l - alpha * delta;
            if result_nonneg {
                r.max(0.0)
            } else {
                r
            }
        })
        .collect();
    Ok(AlteredSeries {
        series: low.derive(values)?,
        provenance: Provenance::AlteredDifference {
            alpha,
            delta_nonneg,
            result_nonneg,
            high_checksum: high.checksum(),
            low_checksum: low.checksum(),
        },
    })
}

/// Summary statistics of an altered series plus the number of days it falls
/// below 95% or rises above 105% of the source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionAudit {
    pub summary: SummaryStats,
    pub source_summary: SummaryStats,
    pub chunk_length: usize,
    pub threshold: Threshold,
    pub chunks_below: usize,
    pub chunks_above: usize,
    pub deficit: f64,
    pub surplus: f64,
}

pub fn direction_audit(altered: &HourlySeries, source: &HourlySeries) -> Result<DirectionAudit> {
    direction_audit_with(altered, source, 24, Threshold::Proportional(0.05), 24)
}

pub fn direction_audit_with(
    altered: &HourlySeries,
    source: &HourlySeries,
    chunk_length: usize,
    threshold: Threshold,
    autocorr_lag: usize,
) -> Result<DirectionAudit> {
    same_len(altered, source)?;
    let below = underage(source, altered, chunk_length, threshold)?;
    let above = overage(source, altered, chunk_length, threshold)?;
    Ok(DirectionAudit {
        summary: summarize(altered, autocorr_lag)?,
        source_summary: summarize(source, autocorr_lag)?,
        chunk_length,
        threshold,
        chunks_below: below.count,
        chunks_above: above.count,
        deficit: below.sum,
        surplus: above.sum,
    })
}
