//! Summary statistics and chunk-level exceedance estimators.
//!
//! Underage compares an original and a synthetic series chunk by chunk (days
//! when `l = 24`). A chunk counts when its deficit of synthetic energy is
//! positive and reaches the threshold; the underage sum adds those deficits.
//! Overage is the mirror image. Per-hour aggregation is the `l = 1` case.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{chunk_values, same_len, ChunkMode, HourlySeries};

/// Linear interpolation between order statistics; `sorted` must be ascending
/// and non-empty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn mean_of(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation; zero for a single value.
fn std_of(v: &[f64], mean: f64) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (v.len() - 1) as f64).sqrt()
}

/// Lag-`h` autocorrelation of the mean-centred series, without wrapping.
/// `None` when the series has no variance.
pub fn autocorrelation(values: &[f64], lag: usize) -> Option<f64> {
    if lag >= values.len() {
        return None;
    }
    let m = mean_of(values);
    let c0: f64 = values.iter().map(|x| (x - m) * (x - m)).sum();
    if c0 == 0.0 {
        return None;
    }
    let ch: f64 = values
        .iter()
        .zip(&values[lag..])
        .map(|(a, b)| (a - m) * (b - m))
        .sum();
    Some(ch / c0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub std: f64,
    /// `std / mean`; absent when the mean is zero.
    pub coeff_of_variation: Option<f64>,
    pub autocorr_lag: usize,
    /// Absent for a constant series.
    pub autocorr: Option<f64>,
}

pub fn summarize(series: &HourlySeries, autocorr_lag: usize) -> Result<SummaryStats> {
    let v = series.values();
    if v.len() <= autocorr_lag {
        return Err(Error::SeriesTooShort {
            len: v.len(),
            lag: autocorr_lag,
        });
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = mean_of(v);
    let std = std_of(v, mean);
    Ok(SummaryStats {
        min: sorted[0],
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
        mean,
        std,
        coeff_of_variation: (mean != 0.0).then(|| std / mean),
        autocorr_lag,
        autocorr: autocorrelation(v, autocorr_lag),
    })
}

/// Minimum chunk deficit (or surplus) that counts as an exceedance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    /// Fixed energy `e` per chunk.
    Absolute(f64),
    /// Fraction `alpha` of the original chunk total.
    Proportional(f64),
}

impl Threshold {
    pub fn validate(&self) -> Result<()> {
        let (Threshold::Absolute(x) | Threshold::Proportional(x)) = *self;
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidThreshold(format!("{self:?} must be finite and >= 0")));
        }
        Ok(())
    }

    pub fn for_chunk(&self, original_total: f64) -> f64 {
        match *self {
            Threshold::Absolute(e) => e,
            Threshold::Proportional(alpha) => alpha * original_total,
        }
    }
}

/// Total exceedance energy and the number of chunks contributing to it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Exceedance {
    pub sum: f64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Under,
    Over,
}

fn exceedance(
    original: &HourlySeries,
    synthetic: &HourlySeries,
    l: usize,
    threshold: Threshold,
    mode: ChunkMode,
    dir: Direction,
) -> Result<Exceedance> {
    same_len(original, synthetic)?;
    threshold.validate()?;
    let orig = chunk_values(original.values(), l, mode)?.totals();
    let syn = chunk_values(synthetic.values(), l, mode)?.totals();
    let mut out = Exceedance::default();
    for (o, s) in orig.into_iter().zip(syn) {
        let gap = match dir {
            Direction::Under => o - s,
            Direction::Over => s - o,
        };
        if gap > 0.0 && gap >= threshold.for_chunk(o) {
            out.sum += gap;
            out.count += 1;
        }
    }
    Ok(out)
}

/// Chunks where the synthetic series delivers at least the threshold less
/// energy than the original.
pub fn underage(original: &HourlySeries, synthetic: &HourlySeries, l: usize, threshold: Threshold) -> Result<Exceedance> {
    exceedance(original, synthetic, l, threshold, ChunkMode::Wrap, Direction::Under)
}

pub fn overage(original: &HourlySeries, synthetic: &HourlySeries, l: usize, threshold: Threshold) -> Result<Exceedance> {
    exceedance(original, synthetic, l, threshold, ChunkMode::Wrap, Direction::Over)
}

/// Number of consecutive non-overlapping `l`-hour periods in deficit.
pub fn contiguous_count(
    original: &HourlySeries,
    synthetic: &HourlySeries,
    l: usize,
    threshold: Threshold,
) -> Result<usize> {
    Ok(underage(original, synthetic, l, threshold)?.count)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceedanceParams {
    pub chunk_length: usize,
    pub under_threshold: Threshold,
    pub over_threshold: Threshold,
    #[serde(default)]
    pub chunk_mode: ChunkMode,
}

impl ExceedanceParams {
    /// Same threshold in both directions.
    pub fn new(chunk_length: usize, threshold: Threshold) -> Self {
        ExceedanceParams {
            chunk_length,
            under_threshold: threshold,
            over_threshold: threshold,
            chunk_mode: ChunkMode::Wrap,
        }
    }

    /// Daily chunks at 5% of the original.
    pub fn daily() -> Self {
        Self::new(24, Threshold::Proportional(0.05))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    UnderageSum,
    UnderageCount,
    OverageSum,
    OverageCount,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::UnderageSum,
        Statistic::UnderageCount,
        Statistic::OverageSum,
        Statistic::OverageCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::UnderageSum => "underage_sum",
            Statistic::UnderageCount => "underage_count",
            Statistic::OverageSum => "overage_sum",
            Statistic::OverageCount => "overage_count",
        }
    }
}

/// Mean, spread and quartiles of a list of values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Describe {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub fn describe(values: &[f64]) -> Option<Describe> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = mean_of(values);
    Some(Describe {
        mean,
        std: std_of(values, mean),
        min: sorted[0],
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Bootstrap distribution: probability `1/B` on each of `B` values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub statistic: Statistic,
    pub values: Vec<f64>,
    pub mass: f64,
    pub summary: Describe,
}

impl EmpiricalDistribution {
    pub fn new(statistic: Statistic, values: Vec<f64>) -> Result<Self> {
        let summary = describe(&values).ok_or(Error::EmptyEnsemble)?;
        Ok(EmpiricalDistribution {
            statistic,
            mass: 1.0 / values.len() as f64,
            values,
            summary,
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.mass * self.values.len() as f64
    }

    /// Distinct values, ascending, with their probabilities.
    pub fn histogram(&self) -> Vec<(f64, f64)> {
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        let mut out: Vec<(f64, f64)> = Vec::new();
        for v in sorted {
            match out.last_mut() {
                Some((last, p)) if *last == v => *p += self.mass,
                _ => out.push((v, self.mass)),
            }
        }
        out
    }

    pub fn write_histogram_csv<W: Write>(&self, writer: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([self.statistic.name(), "probability"])?;
        for (v, p) in self.histogram() {
            w.write_record([crate::series::format_value(v), crate::series::format_value(p)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-series underage and overage across an ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceReport {
    pub params: ExceedanceParams,
    pub num_chunks: usize,
    pub under: Vec<Exceedance>,
    pub over: Vec<Exceedance>,
}

impl ExceedanceReport {
    pub fn len(&self) -> usize {
        self.under.len()
    }

    pub fn is_empty(&self) -> bool {
        self.under.is_empty()
    }

    pub fn values(&self, statistic: Statistic) -> Vec<f64> {
        match statistic {
            Statistic::UnderageSum => self.under.iter().map(|e| e.sum).collect(),
            Statistic::UnderageCount => self.under.iter().map(|e| e.count as f64).collect(),
            Statistic::OverageSum => self.over.iter().map(|e| e.sum).collect(),
            Statistic::OverageCount => self.over.iter().map(|e| e.count as f64).collect(),
        }
    }

    pub fn distribution(&self, statistic: Statistic) -> Result<EmpiricalDistribution> {
        EmpiricalDistribution::new(statistic, self.values(statistic))
    }
}

pub fn empirical_distribution(
    original: &HourlySeries,
    ensemble: &[HourlySeries],
    params: &ExceedanceParams,
) -> Result<ExceedanceReport> {
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let l = params.chunk_length;
    let num_chunks = chunk_values(original.values(), l, params.chunk_mode)?.num_chunks();
    let pairs = ensemble
        .par_iter()
        .map(|s| {
            let u = exceedance(original, s, l, params.under_threshold, params.chunk_mode, Direction::Under)?;
            let o = exceedance(original, s, l, params.over_threshold, params.chunk_mode, Direction::Over)?;
            Ok((u, o))
        })
        .collect::<Result<Vec<_>>>()?;
    let (under, over) = pairs.into_iter().unzip();
    Ok(ExceedanceReport {
        params: *params,
        num_chunks,
        under,
        over,
    })
}

/// One statistic across the ensemble next to its value on the original.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub statistic: String,
    pub distribution: Option<Describe>,
    pub original: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub replicates: usize,
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn row(&self, statistic: &str) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.statistic == statistic)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["statistic", "mean", "std", "min", "25%", "50%", "75%", "max", "Original"])?;
        let cell = |v: Option<f64>| v.map(crate::series::format_value).unwrap_or_default();
        for r in &self.rows {
            let d = r.distribution;
            let mut rec = vec![r.statistic.clone()];
            rec.extend(
                [
                    d.map(|d| d.mean),
                    d.map(|d| d.std),
                    d.map(|d| d.min),
                    d.map(|d| d.q1),
                    d.map(|d| d.median),
                    d.map(|d| d.q3),
                    d.map(|d| d.max),
                    r.original,
                ]
                .map(cell),
            );
            w.write_record(rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

type Field = fn(&SummaryStats) -> Option<f64>;

fn summary_fields(lag: usize) -> Vec<(String, Field)> {
    vec![
        ("Min".into(), |s| Some(s.min)),
        ("25%".into(), |s| Some(s.q1)),
        ("50%".into(), |s| Some(s.median)),
        ("75%".into(), |s| Some(s.q3)),
        ("Max".into(), |s| Some(s.max)),
        ("Mean".into(), |s| Some(s.mean)),
        ("Std".into(), |s| Some(s.std)),
        ("Coeff. of Var.".into(), |s| s.coeff_of_variation),
        (format!("Autocorr. Lag: {lag}"), |s| s.autocorr),
    ]
}

/// Distribution of every summary statistic over the ensemble, one row per
/// statistic, with the original's value alongside.
pub fn ensemble_summary_table(
    original: &HourlySeries,
    ensemble: &[HourlySeries],
    autocorr_lag: usize,
) -> Result<SummaryTable> {
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let orig = summarize(original, autocorr_lag)?;
    let stats = ensemble
        .par_iter()
        .map(|s| summarize(s, autocorr_lag))
        .collect::<Result<Vec<_>>>()?;
    let rows = summary_fields(autocorr_lag)
        .into_iter()
        .map(|(name, f)| {
            let vals: Vec<f64> = stats.iter().filter_map(f).collect();
            SummaryRow {
                statistic: name,
                distribution: describe(&vals),
                original: f(&orig),
            }
        })
        .collect();
    Ok(SummaryTable {
        replicates: ensemble.len(),
        rows,
    })
}
