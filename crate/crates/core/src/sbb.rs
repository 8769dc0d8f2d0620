//! Symmetric block bootstrap.
//!
//! Each hour `i` (the focal slot) is described by the window of `sash` hours
//! on either side of it, `1 + 2 * sash` values in all, wrapping circularly.
//! The `p` windows nearest to it form a pool, and the synthetic value at `i`
//! is the focal value of a pool member. Selection is uniform by default; any
//! [`ResamplingKernel`] can be plugged in instead.
//!
//! Since the window contains the focal value itself, an hour deep inside a
//! zero stretch (a solar night) only ever pools with other all-zero windows
//! as long as there are at least `p` of them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{Ensemble, GeneratorConfig, Resampler};
use crate::error::{Error, Result};
use crate::kernel::{KernelKind, ResamplingKernel};
use crate::neighbors::{nearest_rows, NeighborTable};
use crate::series::HourlySeries;

/// Per-hour lists of the most similar windows.
pub type WindowPools = NeighborTable;

/// `n x (1 + 2*sash)` matrix; row `i` is centred on hour `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowMatrix {
    data: Vec<f64>,
    sash: usize,
}

impl WindowMatrix {
    pub fn sash(&self) -> usize {
        self.sash
    }

    pub fn width(&self) -> usize {
        1 + 2 * self.sash
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.width()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.data[i * w..(i + 1) * w]
    }
}

pub fn build_windows(source: &HourlySeries, sash: usize) -> Result<WindowMatrix> {
    let n = source.len();
    if sash == 0 || 1 + 2 * sash > n {
        return Err(Error::InvalidSash { sash, series_len: n });
    }
    let s = sash as i64;
    let mut data = Vec::with_capacity(n * (1 + 2 * sash));
    for i in 0..n as i64 {
        data.extend((-s..=s).map(|off| source.circular_get(i + off)));
    }
    Ok(WindowMatrix { data, sash })
}

pub fn find_window_pools(windows: &WindowMatrix, p: usize, include_self: bool) -> Result<WindowPools> {
    let n = windows.rows();
    let max = if include_self { n } else { n - 1 };
    if p == 0 {
        return Err(Error::NonPositive { name: "p" });
    }
    if p > max {
        return Err(Error::PTooLarge { p, max });
    }
    Ok(nearest_rows(&windows.data, windows.width(), p, include_self))
}

/// Precomputed pools for one `(source, sash, p)`.
#[derive(Clone, Debug)]
pub struct SbbModel {
    source: HourlySeries,
    pools: WindowPools,
    kernel: ResamplingKernel,
}

impl SbbModel {
    pub fn fit(
        source: &HourlySeries,
        sash: usize,
        p: usize,
        kernel: ResamplingKernel,
        include_self: bool,
    ) -> Result<Self> {
        if kernel.len() != p {
            return Err(Error::KernelLength {
                kernel_len: kernel.len(),
                expected: p,
            });
        }
        let windows = build_windows(source, sash)?;
        let pools = find_window_pools(&windows, p, include_self)?;
        Ok(SbbModel {
            source: source.clone(),
            pools,
            kernel,
        })
    }

    pub fn pools(&self) -> &WindowPools {
        &self.pools
    }
}

impl Resampler for SbbModel {
    fn source(&self) -> &HourlySeries {
        &self.source
    }

    fn resample(&self, seed: u64) -> HourlySeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = self.source.values();
        let values = (0..src.len())
            .map(|i| src[self.pools.indices(i)[self.kernel.sample_rank(&mut rng)]])
            .collect();
        self.source
            .derive(values)
            .expect("resampled values are drawn from a valid source")
    }
}

/// One SBB series with uniform pool selection.
pub fn generate_sbb(
    source: &HourlySeries,
    sash: usize,
    p: usize,
    include_self: bool,
    seed: u64,
) -> Result<HourlySeries> {
    let kernel = ResamplingKernel::uniform(p)?;
    Ok(SbbModel::fit(source, sash, p, kernel, include_self)?.resample(seed))
}

pub fn generate_sbb_batch(
    source: &HourlySeries,
    sash: usize,
    pool: usize,
    kernel: KernelKind,
    include_self: bool,
    replicates: usize,
    master_seed: u64,
) -> Result<Ensemble> {
    let config = GeneratorConfig::Sbb {
        sash,
        pool,
        kernel,
        include_self,
    };
    crate::ensemble::generate_batch(source, &config, replicates, master_seed)
}
