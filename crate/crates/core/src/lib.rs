//! Synthetic hourly energy series by nearest-neighbor resampling.
//!
//! Two generators produce ensembles of plausible alternative years from one
//! observed hourly series:
//!
//! * [`nnlb`], the nearest-neighbors lagged bootstrap, picks each hour from
//!   hours whose preceding `l` values resemble the current ones;
//! * [`sbb`], the symmetric block bootstrap, picks each hour from hours whose
//!   surrounding window resembles the current one.
//!
//! [`perturb`] pushes series in a chosen direction, [`stats`] measures how far
//! an ensemble strays from its source, and [`adequacy`] scores scaled solar and
//! wind against load.
//!
//! ```
//! use synthseries::{generate_batch, GeneratorConfig, HourlySeries};
//!
//! let source = HourlySeries::new((0..240).map(|h| ((h % 24) as f64 - 8.0).max(0.0)).collect())?;
//! let ensemble = generate_batch(&source, &GeneratorConfig::sbb(2, 5), 4, 42)?;
//! assert_eq!(ensemble.len(), 4);
//! assert!(ensemble.iter().all(|s| s.len() == source.len()));
//! # Ok::<(), synthseries::Error>(())
//! ```

pub mod adequacy;
pub mod ensemble;
pub mod error;
pub mod kernel;
pub mod neighbors;
pub mod nnlb;
pub mod normal;
pub mod perturb;
pub mod sbb;
pub mod series;
pub mod stats;

pub use adequacy::{
    adequacy, combine_vre, ensemble_adequacy, evaluate_grid, seasonal_window, weight_sweep, weighted_adequacy,
    windowed_adequacy, AdequacyDistribution, AdequacyOptions, AdequacyResult, CurtailmentBasis, SweepPoint,
    VreWeights, WeightGrid,
};
pub use ensemble::{child_seed, generate_batch, Ensemble, GeneratorConfig, Resampler};
pub use error::{Error, Result};
pub use kernel::{KernelKind, ResamplingKernel};
pub use neighbors::NeighborTable;
pub use nnlb::{build_lag_matrix, find_neighbor_pools, generate_nnlb, generate_nnlb_batch, harmonic_kernel, NnlbModel};
pub use normal::{normal_below_probability, standard_normal_quantile};
pub use perturb::{
    altered_difference, direction_audit, direction_audit_with, incremental_select, AlteredSeries, ClampPolicy, DirectionAudit,
    OffsetDistribution,
};
pub use sbb::{build_windows, find_window_pools, generate_sbb, generate_sbb_batch, SbbModel};
pub use series::{chunk, chunk_with, load_csv, load_series_csv, ChunkMode, ChunkedSeries, HourlySeries};
pub use stats::{
    contiguous_count, empirical_distribution, ensemble_summary_table, overage, summarize, underage,
    EmpiricalDistribution, Exceedance, ExceedanceParams, ExceedanceReport, Statistic, SummaryStats, SummaryTable,
    Threshold,
};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/series.md")]
    struct Series;
    #[doc = include_str!("../../../book/src/nnlb.md")]
    struct Nnlb;
    #[doc = include_str!("../../../book/src/sbb.md")]
    struct Sbb;
    #[doc = include_str!("../../../book/src/ensembles.md")]
    struct Ensembles;
    #[doc = include_str!("../../../book/src/perturbation.md")]
    struct Perturbation;
    #[doc = include_str!("../../../book/src/exceedance.md")]
    struct Exceedance;
    #[doc = include_str!("../../../book/src/adequacy.md")]
    struct Adequacy;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
