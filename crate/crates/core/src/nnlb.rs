//! Nearest-neighbors lagged bootstrap.
//!
//! Every hour `i` is described by its lag vector, the `l` values preceding
//! it (circularly). The `k` hours whose lag vectors lie nearest to that of
//! `i` form its candidate pool; the synthetic value at `i` is the source
//! value of a candidate drawn by rank from a resampling kernel.
//!
//! Because the lag vector excludes the hour itself, two hours can look alike
//! by their history yet differ in value. On solar data this produces the
//! well-known artefact of generation at night right after a zero stretch.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{Ensemble, GeneratorConfig, Resampler};
use crate::error::{Error, Result};
use crate::kernel::{KernelKind, ResamplingKernel};
use crate::neighbors::{nearest_rows, NeighborTable};
use crate::series::HourlySeries;

/// Per-hour neighbor lists over lag vectors.
pub type NeighborPools = NeighborTable;

/// `n x l` matrix; row `i` holds `x[i-l], ..., x[i-1]` with circular wrap.
#[derive(Clone, Debug, PartialEq)]
pub struct LagMatrix {
    data: Vec<f64>,
    lag: usize,
}

impl LagMatrix {
    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.lag
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.lag..(i + 1) * self.lag]
    }
}

pub fn build_lag_matrix(source: &HourlySeries, lag: usize) -> Result<LagMatrix> {
    let n = source.len();
    if lag == 0 || lag >= n {
        return Err(Error::InvalidLag { lag, series_len: n });
    }
    let mut data = Vec::with_capacity(n * lag);
    for i in 0..n as i64 {
        data.extend((0..lag as i64).map(|j| source.circular_get(i - lag as i64 + j)));
    }
    Ok(LagMatrix { data, lag })
}

pub fn find_neighbor_pools(lags: &LagMatrix, k: usize, include_self: bool) -> Result<NeighborPools> {
    let n = lags.rows();
    let max = if include_self { n } else { n - 1 };
    if k == 0 {
        return Err(Error::NonPositive { name: "k" });
    }
    if k > max {
        return Err(Error::KTooLarge { k, max });
    }
    Ok(nearest_rows(&lags.data, lags.lag, k, include_self))
}

pub fn harmonic_kernel(k: usize) -> Result<ResamplingKernel> {
    ResamplingKernel::harmonic(k)
}

/// Precomputed pools and kernel for one `(source, l, k)`; generate many series from it.
#[derive(Clone, Debug)]
pub struct NnlbModel {
    source: HourlySeries,
    pools: NeighborPools,
    kernel: ResamplingKernel,
}

impl NnlbModel {
    pub fn fit(
        source: &HourlySeries,
        lag: usize,
        k: usize,
        kernel: ResamplingKernel,
        include_self: bool,
    ) -> Result<Self> {
        if kernel.len() != k {
            return Err(Error::KernelLength {
                kernel_len: kernel.len(),
                expected: k,
            });
        }
        let lags = build_lag_matrix(source, lag)?;
        let pools = find_neighbor_pools(&lags, k, include_self)?;
        Ok(NnlbModel {
            source: source.clone(),
            pools,
            kernel,
        })
    }

    pub fn pools(&self) -> &NeighborPools {
        &self.pools
    }

    pub fn kernel(&self) -> &ResamplingKernel {
        &self.kernel
    }
}

impl Resampler for NnlbModel {
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

pub fn generate_nnlb(
    source: &HourlySeries,
    lag: usize,
    k: usize,
    kernel: ResamplingKernel,
    include_self: bool,
    seed: u64,
) -> Result<HourlySeries> {
    Ok(NnlbModel::fit(source, lag, k, kernel, include_self)?.resample(seed))
}

/// `replicates` series from child seeds of `master_seed`.
pub fn generate_nnlb_batch(
    source: &HourlySeries,
    lag: usize,
    neighbors: usize,
    kernel: KernelKind,
    include_self: bool,
    replicates: usize,
    master_seed: u64,
) -> Result<Ensemble> {
    let config = GeneratorConfig::Nnlb {
        lag,
        neighbors,
        kernel,
        include_self,
    };
    crate::ensemble::generate_batch(source, &config, replicates, master_seed)
}
