//! Deterministic synthetic stand-ins for a year of hourly grid data.
#![allow(dead_code)]

pub mod oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use synthseries::HourlySeries;

use std::f64::consts::PI;

fn seasonal(day: usize, phase: f64) -> f64 {
    (2.0 * PI * (day as f64 + phase) / 365.0).cos()
}

/// Zero at night, a noisy bell in daylight; day length follows the season.
pub fn solar(days: usize, seed: u64) -> HourlySeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::with_capacity(days * 24);
    for d in 0..days {
        let half = 5.0 - 1.5 * seasonal(d, 10.0);
        let cloud: f64 = rng.random_range(0.3..1.0);
        let peak = 2200.0 * cloud * (1.0 - 0.35 * seasonal(d, 10.0));
        for h in 0..24 {
            let t = (h as f64 - 12.5) / half;
            v.push(if t.abs() < 1.0 {
                (peak * (PI * t / 2.0).cos().powi(2)).round()
            } else {
                0.0
            });
        }
    }
    HourlySeries::new(v).unwrap().with_label("solar")
}

/// Persistent, positive, winter-heavy.
pub fn wind(days: usize, seed: u64) -> HourlySeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level: f64 = 0.0;
    let mut v = Vec::with_capacity(days * 24);
    for d in 0..days {
        for _ in 0..24 {
            level = 0.97 * level + rng.random_range(-1.0..1.0) * 0.25;
            let base = 3200.0 + 900.0 * seasonal(d, 15.0);
            v.push((base * (1.0 + level).max(0.02)).round());
        }
    }
    HourlySeries::new(v).unwrap().with_label("wind")
}

/// Daily double hump, summer and winter peaks, small noise.
pub fn load(days: usize, seed: u64) -> HourlySeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::with_capacity(days * 24);
    for d in 0..days {
        let season = 1.0 + 0.12 * (4.0 * PI * (d as f64 - 20.0) / 365.0).cos();
        for h in 0..24 {
            let diurnal = 1.0 + 0.15 * (2.0 * PI * (h as f64 - 17.0) / 24.0).cos()
                + 0.05 * (4.0 * PI * (h as f64 - 8.0) / 24.0).cos();
            let noise: f64 = rng.random_range(-0.01..0.01);
            v.push((90_000.0 * season * diurnal * (1.0 + noise)).round());
        }
    }
    HourlySeries::new(v).unwrap().with_label("load")
}

pub fn nuclear(days: usize) -> HourlySeries {
    let v = (0..days * 24)
        .map(|t| if (2000..2700).contains(&t) { 30_000.0 } else { 33_000.0 })
        .collect();
    HourlySeries::new(v).unwrap().with_label("nuclear")
}

/// Random series for property tests: integers in `0..levels` so distance ties are common.
pub fn small_integers(rng: &mut ChaCha8Rng, n: usize, levels: u32) -> HourlySeries {
    HourlySeries::new((0..n).map(|_| rng.random_range(0..levels) as f64).collect()).unwrap()
}

pub fn small_reals(rng: &mut ChaCha8Rng, n: usize) -> HourlySeries {
    HourlySeries::new((0..n).map(|_| rng.random_range(0.0..100.0)).collect()).unwrap()
}
