//! Renewable adequacy accounting.
//!
//! Solar and wind are scaled and summed into a VRE series, nuclear is added
//! as a must-run baseline, and the result is compared hour by hour against
//! load. Energy above load is curtailed. Curtailment is attributed to VRE and
//! never exceeds the VRE output of that hour, so surplus from nuclear alone
//! is not counted.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{chunk_values, same_len, ChunkMode, HourlySeries};
use crate::stats::{describe, Describe};

pub const DEFAULT_SHORTFALL_FRACTION: f64 = 0.9;
const DAY: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VreWeights {
    pub w_s: f64,
    pub w_w: f64,
}

impl VreWeights {
    pub fn new(w_s: f64, w_w: f64) -> Result<Self> {
        let w = VreWeights { w_s, w_w };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w_s.is_finite() && self.w_w.is_finite() && self.w_s >= 0.0 && self.w_w >= 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and >= 0, got ({}, {})",
                self.w_s, self.w_w
            )));
        }
        Ok(())
    }
}

/// `w_s * solar + w_w * wind`, hour by hour.
pub fn combine_vre(solar: &HourlySeries, wind: &HourlySeries, weights: VreWeights) -> Result<HourlySeries> {
    same_len(solar, wind)?;
    weights.validate()?;
    let values = solar
        .values()
        .iter()
        .zip(wind.values())
        .map(|(s, w)| weights.w_s * s + weights.w_w * w)
        .collect();
    Ok(solar.derive(values)?.with_label("vre"))
}

/// What curtailed energy is divided by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurtailmentBasis {
    /// Annual VRE energy.
    #[default]
    Vre,
    /// Annual VRE plus nuclear energy.
    TotalGeneration,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdequacyOptions {
    /// A day is short when its generation is at most this fraction of its load.
    pub shortfall_fraction: f64,
    #[serde(default)]
    pub curtailment_basis: CurtailmentBasis,
}

impl Default for AdequacyOptions {
    fn default() -> Self {
        AdequacyOptions {
            shortfall_fraction: DEFAULT_SHORTFALL_FRACTION,
            curtailment_basis: CurtailmentBasis::Vre,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdequacyResult {
    pub percent_supplied: f64,
    pub percent_curtailed: f64,
    pub shortfall_days: usize,
    pub days: usize,
}

pub fn adequacy(
    vre: &HourlySeries,
    nuclear: &HourlySeries,
    load: &HourlySeries,
    options: &AdequacyOptions,
) -> Result<AdequacyResult> {
    same_len(vre, nuclear)?;
    same_len(vre, load)?;
    let f = options.shortfall_fraction;
    if !(f.is_finite() && f >= 0.0) {
        return Err(Error::InvalidThreshold(format!("shortfall fraction {f} must be >= 0")));
    }
    let (v, n, l) = (vre.values(), nuclear.values(), load.values());
    let total_load: f64 = l.iter().sum();
    if total_load <= 0.0 {
        return Err(Error::ZeroLoad);
    }
    let mut met = 0.0;
    let mut curtailed = 0.0;
    let mut gen = Vec::with_capacity(v.len());
    for t in 0..v.len() {
        let g = v[t] + n[t];
        met += g.min(l[t]);
        curtailed += (g - l[t]).max(0.0).min(v[t].max(0.0));
        gen.push(g);
    }
    let basis: f64 = match options.curtailment_basis {
        CurtailmentBasis::Vre => v.iter().sum(),
        CurtailmentBasis::TotalGeneration => gen.iter().sum(),
    };
    let day = DAY.min(v.len());
    let gen_days = chunk_values(&gen, day, ChunkMode::Wrap)?.totals();
    let load_days = chunk_values(l, day, ChunkMode::Wrap)?.totals();
    let shortfall_days = gen_days
        .iter()
        .zip(&load_days)
        .filter(|(g, l)| **g <= f * **l)
        .count();
    Ok(AdequacyResult {
        percent_supplied: met / total_load,
        percent_curtailed: if basis > 0.0 { curtailed / basis } else { 0.0 },
        shortfall_days,
        days: gen_days.len(),
    })
}

/// Combines solar and wind with `weights`, then runs [`adequacy`].
pub fn weighted_adequacy(
    solar: &HourlySeries,
    wind: &HourlySeries,
    nuclear: &HourlySeries,
    load: &HourlySeries,
    weights: VreWeights,
    options: &AdequacyOptions,
) -> Result<AdequacyResult> {
    adequacy(&combine_vre(solar, wind, weights)?, nuclear, load, options)
}

/// Candidate solar and wind weights; every combination is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightGrid {
    pub solar: Vec<f64>,
    pub wind: Vec<f64>,
}

impl WeightGrid {
    /// `start, start + step, ...` up to and including `end`.
    pub fn steps(start: f64, end: f64, step: f64) -> Vec<f64> {
        if step.is_nan() || step <= 0.0 || end < start {
            return Vec::new();
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| start + i as f64 * step).collect()
    }

    pub fn points(&self) -> Vec<VreWeights> {
        self.solar
            .iter()
            .flat_map(|&w_s| self.wind.iter().map(move |&w_w| VreWeights { w_s, w_w }))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub weights: VreWeights,
    pub result: AdequacyResult,
}

/// Adequacy at every grid point, in grid order.
pub fn evaluate_grid(
    solar: &HourlySeries,
    wind: &HourlySeries,
    nuclear: &HourlySeries,
    load: &HourlySeries,
    grid: &WeightGrid,
    options: &AdequacyOptions,
) -> Result<Vec<SweepPoint>> {
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for w in &points {
        w.validate()?;
    }
    points
        .into_par_iter()
        .map(|weights| {
            Ok(SweepPoint {
                weights,
                result: weighted_adequacy(solar, wind, nuclear, load, weights, options)?,
            })
        })
        .collect()
}

/// Grid points with curtailment within `curtailment_cap`, best supplied
/// first; ties go to the smaller total weight.
pub fn weight_sweep(
    solar: &HourlySeries,
    wind: &HourlySeries,
    nuclear: &HourlySeries,
    load: &HourlySeries,
    curtailment_cap: f64,
    grid: &WeightGrid,
    options: &AdequacyOptions,
) -> Result<Vec<SweepPoint>> {
    let mut feasible: Vec<SweepPoint> = evaluate_grid(solar, wind, nuclear, load, grid, options)?
        .into_iter()
        .filter(|p| p.result.percent_curtailed <= curtailment_cap)
        .collect();
    feasible.sort_by(|a, b| {
        b.result
            .percent_supplied
            .total_cmp(&a.result.percent_supplied)
            .then((a.weights.w_s + a.weights.w_w).total_cmp(&(b.weights.w_s + b.weights.w_w)))
            .then(a.weights.w_s.total_cmp(&b.weights.w_s))
    });
    Ok(feasible)
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], writer: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["w_s", "w_w", "supplied", "curtailed", "shortfall_days"])?;
    for p in points {
        w.write_record([
            p.weights.w_s.to_string(),
            p.weights.w_w.to_string(),
            p.result.percent_supplied.to_string(),
            p.result.percent_curtailed.to_string(),
            p.result.shortfall_days.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Adequacy over randomly paired synthetic solar and wind series, each pair
/// carrying probability `1/B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdequacyDistribution {
    pub weights: VreWeights,
    pub pairing_seed: u64,
    /// `(solar index, wind index)` per draw.
    pub pairs: Vec<(usize, usize)>,
    pub results: Vec<AdequacyResult>,
    pub mass: f64,
    pub supplied: Describe,
    pub curtailed: Describe,
    pub shortfall: Describe,
}

impl AdequacyDistribution {
    /// Shortfall-day counts, ascending, with their probabilities.
    pub fn shortfall_histogram(&self) -> Vec<(usize, f64)> {
        let mut counts = std::collections::BTreeMap::new();
        for r in &self.results {
            *counts.entry(r.shortfall_days).or_insert(0.0) += self.mass;
        }
        counts.into_iter().collect()
    }

    pub fn write_shortfall_csv<W: Write>(&self, writer: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["shortfall_days", "probability"])?;
        for (d, p) in self.shortfall_histogram() {
            w.write_record([d.to_string(), p.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Draws `B = max(#solar, #wind)` pairs, indices uniform with replacement;
/// two single-member ensembles give the one pairing `(0, 0)`.
pub fn ensemble_adequacy(
    solar: &[HourlySeries],
    wind: &[HourlySeries],
    nuclear: &HourlySeries,
    load: &HourlySeries,
    weights: VreWeights,
    options: &AdequacyOptions,
    pairing_seed: u64,
) -> Result<AdequacyDistribution> {
    if solar.is_empty() || wind.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let b = solar.len().max(wind.len());
    let mut rng = ChaCha8Rng::seed_from_u64(pairing_seed);
    let pairs: Vec<(usize, usize)> = (0..b)
        .map(|_| (rng.random_range(0..solar.len()), rng.random_range(0..wind.len())))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(i, j)| weighted_adequacy(&solar[i], &wind[j], nuclear, load, weights, options))
        .collect::<Result<Vec<_>>>()?;
    let col = |f: fn(&AdequacyResult) -> f64| {
        describe(&results.iter().map(f).collect::<Vec<_>>()).expect("at least one pair")
    };
    Ok(AdequacyDistribution {
        weights,
        pairing_seed,
        supplied: col(|r| r.percent_supplied),
        curtailed: col(|r| r.percent_curtailed),
        shortfall: col(|r| r.shortfall_days as f64),
        mass: 1.0 / b as f64,
        pairs,
        results,
    })
}

/// Slices every series to `[start, start + duration)`.
pub fn seasonal_window(series: &[&HourlySeries], start: usize, duration: usize) -> Result<Vec<HourlySeries>> {
    series.iter().map(|s| s.slice(start..start + duration)).collect()
}

/// Adequacy restricted to one window of hours.
#[allow(clippy::too_many_arguments)]
pub fn windowed_adequacy(
    solar: &HourlySeries,
    wind: &HourlySeries,
    nuclear: &HourlySeries,
    load: &HourlySeries,
    weights: VreWeights,
    start: usize,
    duration: usize,
    options: &AdequacyOptions,
) -> Result<AdequacyResult> {
    let w = seasonal_window(&[solar, wind, nuclear, load], start, duration)?;
    weighted_adequacy(&w[0], &w[1], &w[2], &w[3], weights, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[f64]) -> HourlySeries {
        HourlySeries::new(v.to_vec()).unwrap()
    }

    fn opts() -> AdequacyOptions {
        AdequacyOptions::default()
    }

    #[test]
    fn combine_hand_example() {
        let v = combine_vre(&s(&[2.0, 0.0]), &s(&[1.0, 3.0]), VreWeights::new(45.0, 22.0).unwrap()).unwrap();
        assert_eq!(v.values(), &[112.0, 66.0]);
        let z = combine_vre(&s(&[2.0, 0.0]), &s(&[1.0, 3.0]), VreWeights::new(0.0, 0.0).unwrap()).unwrap();
        assert_eq!(z.values(), &[0.0, 0.0]);
        let solar = combine_vre(&s(&[2.0, 5.0]), &s(&[1.0, 3.0]), VreWeights::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(solar.values(), &[2.0, 5.0]);
    }

    #[test]
    fn negative_weights_rejected() {
        assert!(matches!(VreWeights::new(-1.0, 0.0), Err(Error::InvalidWeights(_))));
    }

    #[test]
    fn gen_equals_load() {
        let load = s(&[10.0; 48]);
        let r = adequacy(&s(&[4.0; 48]), &s(&[6.0; 48]), &load, &opts()).unwrap();
        assert_eq!(r.percent_supplied, 1.0);
        assert_eq!(r.percent_curtailed, 0.0);
        assert_eq!((r.shortfall_days, r.days), (0, 2));
    }

    #[test]
    fn curtailment_hand_example() {
        // hour 0: gen 15 vs load 10 -> 5 curtailed; hour 1: gen 5 vs 10
        let r = adequacy(&s(&[10.0, 0.0]), &s(&[5.0, 5.0]), &s(&[10.0, 10.0]), &opts()).unwrap();
        assert_eq!(r.percent_supplied, 0.75);
        assert_eq!(r.percent_curtailed, 0.5);
        let t = AdequacyOptions {
            curtailment_basis: CurtailmentBasis::TotalGeneration,
            ..opts()
        };
        assert_eq!(adequacy(&s(&[10.0, 0.0]), &s(&[5.0, 5.0]), &s(&[10.0, 10.0]), &t).unwrap().percent_curtailed, 0.25);
    }

    #[test]
    fn nuclear_surplus_is_not_vre_curtailment() {
        let r = adequacy(&s(&[1.0, 1.0]), &s(&[20.0, 0.0]), &s(&[10.0, 10.0]), &opts()).unwrap();
        assert_eq!(r.percent_curtailed, 0.5);
    }

    #[test]
    fn zero_load() {
        assert!(matches!(
            adequacy(&s(&[1.0]), &s(&[1.0]), &s(&[0.0]), &opts()),
            Err(Error::ZeroLoad)
        ));
    }

    #[test]
    fn shortfall_at_fraction_zero_counts_dark_days() {
        let mut vre = vec![0.0; 72];
        vre[30] = 1.0;
        let o = AdequacyOptions {
            shortfall_fraction: 0.0,
            ..opts()
        };
        let r = adequacy(&s(&vre), &s(&[0.0; 72]), &s(&[5.0; 72]), &o).unwrap();
        assert_eq!(r.shortfall_days, 2);
    }

    #[test]
    fn sweep_excludes_infeasible_and_ranks() {
        let solar = s(&[0.0, 2.0, 0.0, 2.0]);
        let wind = s(&[1.0, 1.0, 1.0, 1.0]);
        let zero = s(&[0.0; 4]);
        let load = s(&[2.0; 4]);
        let grid = WeightGrid {
            solar: vec![0.0, 1.0],
            wind: vec![0.0, 1.0, 2.0],
        };
        let ranked = weight_sweep(&solar, &wind, &zero, &load, 0.0, &grid, &opts()).unwrap();
        assert!(ranked.iter().all(|p| p.result.percent_curtailed == 0.0));
        assert_eq!(ranked[0].weights, VreWeights { w_s: 0.0, w_w: 2.0 });
        assert!(!ranked.iter().any(|p| p.weights == VreWeights { w_s: 1.0, w_w: 2.0 }));
        let empty = WeightGrid {
            solar: vec![],
            wind: vec![1.0],
        };
        assert!(matches!(
            weight_sweep(&solar, &wind, &zero, &load, 0.0, &empty, &opts()),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn grid_steps() {
        assert_eq!(WeightGrid::steps(0.0, 1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(WeightGrid::steps(1.0, 0.0, 1.0).is_empty());
    }

    #[test]
    fn singleton_ensembles_pair_once() {
        let x = s(&[1.0; 48]);
        let d = ensemble_adequacy(
            std::slice::from_ref(&x),
            std::slice::from_ref(&x),
            &x,
            &s(&[3.0; 48]),
            VreWeights::new(1.0, 1.0).unwrap(),
            &opts(),
            5,
        )
        .unwrap();
        assert_eq!(d.pairs, vec![(0, 0)]);
        assert_eq!(d.mass, 1.0);
        assert_eq!(d.shortfall_histogram(), vec![(0, 1.0)]);
    }

    #[test]
    fn full_window_equals_annual() {
        let solar = s(&(0..96).map(|h| ((h % 24) as f64 - 6.0).max(0.0)).collect::<Vec<_>>());
        let wind = s(&(0..96).map(|h| 3.0 + (h as f64 / 5.0).sin()).collect::<Vec<_>>());
        let nuc = s(&[2.0; 96]);
        let load = s(&(0..96).map(|h| 20.0 + (h % 24) as f64).collect::<Vec<_>>());
        let w = VreWeights::new(1.5, 2.0).unwrap();
        assert_eq!(
            windowed_adequacy(&solar, &wind, &nuc, &load, w, 0, 96, &opts()).unwrap(),
            weighted_adequacy(&solar, &wind, &nuc, &load, w, &opts()).unwrap()
        );
        assert!(matches!(
            windowed_adequacy(&solar, &wind, &nuc, &load, w, 90, 10, &opts()),
            Err(Error::OutOfRange { .. })
        ));
    }

    proptest! {
        #[test]
        fn fractions_in_unit_interval_and_scale_free(
            rows in prop::collection::vec((0.0f64..50.0, 0.0f64..30.0, 1.0f64..60.0), 1..120),
        ) {
            let vre = s(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
            let nuc = s(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
            let load = s(&rows.iter().map(|r| r.2).collect::<Vec<_>>());
            let r = adequacy(&vre, &nuc, &load, &opts()).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.percent_supplied));
            prop_assert!((0.0..=1.0).contains(&r.percent_curtailed));
            prop_assert!(r.shortfall_days <= r.days);
            let twice = |x: &HourlySeries| s(&x.values().iter().map(|v| 2.0 * v).collect::<Vec<_>>());
            let r2 = adequacy(&twice(&vre), &twice(&nuc), &twice(&load), &opts()).unwrap();
            prop_assert!((r.percent_supplied - r2.percent_supplied).abs() < 1e-12);
            prop_assert!((r.percent_curtailed - r2.percent_curtailed).abs() < 1e-12);
            prop_assert_eq!(r.shortfall_days, r2.shortfall_days);
        }

        #[test]
        fn supplied_monotone_in_weights(
            rows in prop::collection::vec((0.0f64..5.0, 0.0f64..5.0, 1.0f64..60.0), 24..96),
            w in 0.0f64..10.0,
        ) {
            let solar = s(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
            let wind = s(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
            let load = s(&rows.iter().map(|r| r.2).collect::<Vec<_>>());
            let nuc = s(&vec![5.0; rows.len()]);
            let grid = WeightGrid { solar: WeightGrid::steps(0.0, 10.0, 2.5), wind: vec![w] };
            let pts = evaluate_grid(&solar, &wind, &nuc, &load, &grid, &opts()).unwrap();
            for pair in pts.windows(2) {
                prop_assert!(pair[1].result.percent_supplied >= pair[0].result.percent_supplied - 1e-12);
            }
        }
    }
}
