//! Run configuration, read from a TOML file.
//!
//! Relative paths are resolved against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use synthseries::{
    AdequacyOptions, ChunkMode, ClampPolicy, CurtailmentBasis, GeneratorConfig, HourlySeries, OffsetDistribution,
    Threshold, VreWeights,
};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    /// Not recorded in run manifests: output does not depend on it.
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub generate: Option<GenerateSection>,
    pub perturb: Option<PerturbSection>,
    pub analyze: Option<AnalyzeSection>,
    pub vre: Option<VreSection>,
}

/// A series file: a bare path (reads the `value` column) or a table naming
/// the columns.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Input {
    Path(PathBuf),
    Columns {
        path: PathBuf,
        #[serde(default = "value_column")]
        column: String,
        #[serde(default)]
        timestamp_column: Option<String>,
    },
}

fn value_column() -> String {
    "value".into()
}

impl Input {
    pub fn path(&self) -> &Path {
        match self {
            Input::Path(p) | Input::Columns { path: p, .. } => p,
        }
    }

    fn resolve(&mut self, base: &Path) {
        let p = match self {
            Input::Path(p) | Input::Columns { path: p, .. } => p,
        };
        *p = resolve(base, p);
    }

    pub fn load(&self) -> CliResult<HourlySeries> {
        let s = match self {
            Input::Path(p) => synthseries::load_series_csv(p)?,
            Input::Columns {
                path,
                column,
                timestamp_column,
            } => synthseries::load_csv(path, column, timestamp_column.as_deref())?,
        };
        Ok(s)
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSection {
    pub input: Input,
    pub replicates: Option<usize>,
    pub generator: GeneratorConfig,
}

fn default_chunk() -> usize {
    24
}

fn default_threshold() -> Threshold {
    Threshold::Proportional(0.05)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerturbSection {
    #[serde(flatten)]
    pub method: PerturbMethod,
    /// Series the audit compares against; defaults to the perturbed input
    /// (or the low series for altered difference).
    #[serde(default)]
    pub audit_against: Option<Input>,
    #[serde(default = "default_chunk")]
    pub chunk_length: usize,
    #[serde(default = "default_threshold")]
    pub threshold: Threshold,
    #[serde(default = "default_chunk")]
    pub autocorr_lag: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum PerturbMethod {
    IncrementalSelection {
        input: Input,
        distribution: OffsetDistribution,
        #[serde(default)]
        clamp: ClampPolicy,
    },
    AlteredDifference {
        high: Input,
        low: Input,
        alpha: f64,
        #[serde(default)]
        delta_nonneg: bool,
        #[serde(default)]
        result_nonneg: bool,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeSection {
    pub original: Input,
    /// Ensemble directory written by `generate`.
    pub ensemble: PathBuf,
    #[serde(default = "default_chunk")]
    pub chunk_length: usize,
    #[serde(default)]
    pub chunk_mode: ChunkMode,
    #[serde(default = "default_threshold")]
    pub under_threshold: Threshold,
    #[serde(default = "default_threshold")]
    pub over_threshold: Threshold,
    #[serde(default = "default_chunk")]
    pub autocorr_lag: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub solar: Range,
    pub wind: Range,
    pub curtailment_cap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub solar: PathBuf,
    pub wind: PathBuf,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub start: usize,
    pub duration: usize,
}

fn default_fraction() -> f64 {
    synthseries::adequacy::DEFAULT_SHORTFALL_FRACTION
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VreSection {
    pub solar: Input,
    pub wind: Input,
    pub nuclear: Input,
    pub load: Input,
    pub weights: Option<VreWeights>,
    #[serde(default = "default_fraction")]
    pub shortfall_fraction: f64,
    #[serde(default)]
    pub curtailment_basis: CurtailmentBasis,
    pub sweep: Option<SweepSection>,
    pub ensemble: Option<EnsembleSection>,
    #[serde(default)]
    pub windows: Vec<WindowSection>,
}

impl VreSection {
    pub fn options(&self) -> AdequacyOptions {
        AdequacyOptions {
            shortfall_fraction: self.shortfall_fraction,
            curtailment_basis: self.curtailment_basis,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub replicates: Option<usize>,
    pub chunk_length: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        cfg.resolve_paths(&base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        if let Some(out) = &mut self.out {
            *out = resolve(base, out);
        }
        if let Some(g) = &mut self.generate {
            g.input.resolve(base);
        }
        if let Some(p) = &mut self.perturb {
            match &mut p.method {
                PerturbMethod::IncrementalSelection { input, .. } => input.resolve(base),
                PerturbMethod::AlteredDifference { high, low, .. } => {
                    high.resolve(base);
                    low.resolve(base);
                }
            }
            if let Some(a) = &mut p.audit_against {
                a.resolve(base);
            }
        }
        if let Some(a) = &mut self.analyze {
            a.original.resolve(base);
            a.ensemble = resolve(base, &a.ensemble);
        }
        if let Some(v) = &mut self.vre {
            for i in [&mut v.solar, &mut v.wind, &mut v.nuclear, &mut v.load] {
                i.resolve(base);
            }
            if let Some(e) = &mut v.ensemble {
                e.solar = resolve(base, &e.solar);
                e.wind = resolve(base, &e.wind);
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.threads.is_some() {
            self.threads = o.threads;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        if let (Some(r), Some(g)) = (o.replicates, &mut self.generate) {
            g.replicates = Some(r);
        }
        if let Some(l) = o.chunk_length {
            if let Some(a) = &mut self.analyze {
                a.chunk_length = l;
            }
            if let Some(p) = &mut self.perturb {
                p.chunk_length = l;
            }
        }
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::Config("a seed is required (set `seed` or pass --seed)".into()))
    }

    pub fn out(&self) -> CliResult<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| CliError::Config("an output directory is required (set `out` or pass --out)".into()))
    }

    pub fn threads(&self) -> CliResult<Option<usize>> {
        match self.threads {
            Some(0) => Err(CliError::Config("`threads` must be at least 1".into())),
            t => Ok(t),
        }
    }
}

pub fn section<'a, T>(s: &'a Option<T>, name: &str) -> CliResult<&'a T> {
    s.as_ref()
        .ok_or_else(|| CliError::Config(format!("config has no [{name}] section")))
}

pub fn require_file(p: &Path) -> CliResult<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(CliError::Config(format!("input file {} does not exist", p.display())))
    }
}

pub fn require_dir(p: &Path) -> CliResult<()> {
    if p.is_dir() {
        Ok(())
    } else {
        Err(CliError::Config(format!("ensemble directory {} does not exist", p.display())))
    }
}
