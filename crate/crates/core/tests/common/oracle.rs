//! Brute-force reference implementations, written without the library's
//! matrices or neighbor search.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use synthseries::{
    altered_difference, build_lag_matrix, build_windows, find_neighbor_pools, find_window_pools, overage, underage,
    HourlySeries, NeighborTable, Threshold,
};

use super::{small_integers, small_reals};

fn at(x: &[f64], i: i64) -> f64 {
    let n = x.len() as i64;
    x[(((i % n) + n) % n) as usize]
}

/// Sorted `(index, distance)` candidates for every hour, self first when requested.
fn brute_pools(x: &[f64], offsets: &[i64], k: usize, include_self: bool) -> Vec<Vec<(usize, f64)>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut cands: Vec<(f64, usize)> = Vec::new();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let mut d2 = 0.0;
                for &o in offsets {
                    let diff = at(x, i as i64 + o) - at(x, j as i64 + o);
                    d2 += diff * diff;
                }
                cands.push((d2, j));
            }
            cands.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let mut out = Vec::new();
            if include_self {
                out.push((i, 0.0));
            }
            out.extend(cands.into_iter().map(|(d2, j)| (j, d2.sqrt())));
            out.truncate(k);
            out
        })
        .collect()
}

pub fn brute_nnlb_pools(x: &[f64], lag: usize, k: usize, include_self: bool) -> Vec<Vec<(usize, f64)>> {
    let offsets: Vec<i64> = (1..=lag as i64).rev().map(|m| -m).collect();
    brute_pools(x, &offsets, k, include_self)
}

pub fn brute_sbb_pools(x: &[f64], sash: usize, p: usize, include_self: bool) -> Vec<Vec<(usize, f64)>> {
    let s = sash as i64;
    let offsets: Vec<i64> = (-s..=s).collect();
    brute_pools(x, &offsets, p, include_self)
}

fn same_table(table: &NeighborTable, oracle: &[Vec<(usize, f64)>]) -> Result<(), String> {
    for (i, want) in oracle.iter().enumerate() {
        let idx: Vec<usize> = want.iter().map(|w| w.0).collect();
        if table.indices(i) != idx.as_slice() {
            return Err(format!("hour {i}: indices {:?} vs oracle {:?}", table.indices(i), idx));
        }
        for (got, w) in table.distances(i).iter().zip(want) {
            let scale = w.1.abs().max(1e-300);
            if (got - w.1).abs() > 1e-9 * scale && (got - w.1).abs() > 1e-300 {
                return Err(format!("hour {i}: distance {got} vs oracle {}", w.1));
            }
        }
    }
    Ok(())
}

fn instance(rng: &mut ChaCha8Rng) -> HourlySeries {
    let n = rng.random_range(8..=200);
    if rng.random_bool(0.5) {
        let levels = rng.random_range(2..6);
        small_integers(rng, n, levels)
    } else {
        small_reals(rng, n)
    }
}

pub fn check_nnlb_pools(instances: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..instances {
        let x = instance(&mut rng);
        let n = x.len();
        let lag = rng.random_range(1..n.min(12));
        let include_self = rng.random_bool(0.5);
        let k = rng.random_range(1..=if include_self { n } else { n - 1 }.min(30));
        let table = find_neighbor_pools(&build_lag_matrix(&x, lag).unwrap(), k, include_self).unwrap();
        same_table(&table, &brute_nnlb_pools(x.values(), lag, k, include_self))
            .map_err(|e| format!("case {case} (n={n}, l={lag}, k={k}, self={include_self}): {e}"))?;
    }
    Ok(())
}

pub fn check_sbb_pools(instances: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..instances {
        let x = instance(&mut rng);
        let n = x.len();
        let sash = rng.random_range(1..=((n - 1) / 2).min(6));
        let include_self = rng.random_bool(0.5);
        let p = rng.random_range(1..=if include_self { n } else { n - 1 }.min(30));
        let table = find_window_pools(&build_windows(&x, sash).unwrap(), p, include_self).unwrap();
        same_table(&table, &brute_sbb_pools(x.values(), sash, p, include_self))
            .map_err(|e| format!("case {case} (n={n}, sash={sash}, p={p}, self={include_self}): {e}"))?;
    }
    Ok(())
}

/// `(under_sum, under_count, over_sum, over_count)` by explicit double loop.
pub fn brute_exceedance(orig: &[f64], syn: &[f64], l: usize, threshold: Threshold) -> (f64, usize, f64, usize) {
    let n = orig.len();
    let chunks = n.div_ceil(l);
    let (mut us, mut uc, mut os, mut oc) = (0.0, 0, 0.0, 0);
    for c in 0..chunks {
        let (mut a, mut b) = (0.0, 0.0);
        for h in 0..l {
            let t = (c * l + h) % n;
            a += orig[t];
            b += syn[t];
        }
        let e = match threshold {
            Threshold::Absolute(e) => e,
            Threshold::Proportional(alpha) => alpha * a,
        };
        if a - b > 0.0 && a - b >= e {
            us += a - b;
            uc += 1;
        }
        if b - a > 0.0 && b - a >= e {
            os += b - a;
            oc += 1;
        }
    }
    (us, uc, os, oc)
}

pub fn check_exceedance(instances: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..instances {
        let a = instance(&mut rng);
        let b = HourlySeries::new(
            a.values()
                .iter()
                .map(|v| (v + rng.random_range(-8.0..8.0f64)).round().max(0.0))
                .collect(),
        )
        .unwrap();
        let l = rng.random_range(1..=a.len().min(30));
        let t = if rng.random_bool(0.5) {
            Threshold::Absolute(rng.random_range(0.0..20.0f64).round())
        } else {
            Threshold::Proportional(rng.random_range(0.0..0.2))
        };
        let u = underage(&a, &b, l, t).unwrap();
        let o = overage(&a, &b, l, t).unwrap();
        let want = brute_exceedance(a.values(), b.values(), l, t);
        if (u.sum, u.count, o.sum, o.count) != want {
            return Err(format!(
                "case {case} (n={}, l={l}, {t:?}): got ({}, {}, {}, {}) oracle {want:?}",
                a.len(),
                u.sum,
                u.count,
                o.sum,
                o.count
            ));
        }
    }
    Ok(())
}

pub fn check_altered_difference(instances: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..instances {
        let high = instance(&mut rng);
        let low = small_reals(&mut rng, high.len());
        let alpha = rng.random_range(-1.0..2.0);
        let (dn, rn) = (rng.random_bool(0.5), rng.random_bool(0.5));
        let got = altered_difference(&high, &low, alpha, dn, rn).unwrap();
        for t in 0..high.len() {
            let (x, y) = (high.values()[t], low.values()[t]);
            let delta = if dn && x < y { 0.0 } else { x - y };
            let mut r = y - alpha * delta;
            if rn && r < 0.0 {
                r = 0.0;
            }
            if got.series.values()[t] != r {
                return Err(format!("case {case} hour {t}: {} vs oracle {r}", got.series.values()[t]));
            }
        }
    }
    Ok(())
}
