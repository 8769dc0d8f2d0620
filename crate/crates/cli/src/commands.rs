use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;
use synthseries::stats::EmpiricalDistribution;
use synthseries::{
    adequacy::write_sweep_csv, altered_difference, direction_audit_with, empirical_distribution,
    ensemble_adequacy, ensemble_summary_table, evaluate_grid, generate_batch, incremental_select, weight_sweep,
    weighted_adequacy, windowed_adequacy, Ensemble, ExceedanceParams, HourlySeries, Statistic, WeightGrid,
};

use crate::config::{require_dir, require_file, section, Input, PerturbMethod, RunConfig};
use crate::error::{CliError, CliResult};

pub const RUN_MANIFEST: &str = "run.json";

#[derive(Serialize)]
struct InputRecord {
    path: String,
    checksum: String,
    length: usize,
}

impl InputRecord {
    fn new(path: &Path, s: &HourlySeries) -> Self {
        InputRecord {
            path: path.display().to_string(),
            checksum: s.checksum(),
            length: s.len(),
        }
    }
}

#[derive(Serialize)]
struct RunManifest<'a, P: Serialize> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    inputs: Vec<InputRecord>,
    details: P,
}

fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path.display(), e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path.display(), e))
}

fn csv_err<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn make_out(cfg: &RunConfig) -> CliResult<&Path> {
    let out = cfg.out()?;
    fs::create_dir_all(out).map_err(|e| CliError::io(out.display(), e))?;
    Ok(out)
}

fn write_manifest<P: Serialize>(
    out: &Path,
    command: &str,
    cfg: &RunConfig,
    inputs: Vec<InputRecord>,
    details: P,
) -> CliResult<()> {
    write_json(
        &out.join(RUN_MANIFEST),
        &RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
            inputs,
            details,
        },
    )
}

fn load(input: &Input) -> CliResult<HourlySeries> {
    require_file(input.path())?;
    input.load()
}

pub fn generate(cfg: &RunConfig) -> CliResult<()> {
    let g = section(&cfg.generate, "generate")?;
    let seed = cfg.seed()?;
    let replicates = g
        .replicates
        .ok_or_else(|| CliError::Config("`replicates` is required (set it or pass --replicates)".into()))?;
    if replicates == 0 {
        return Err(CliError::Config("`replicates` must be at least 1".into()));
    }
    let source = load(&g.input)?;
    let out = make_out(cfg)?;
    let ensemble = generate_batch(&source, &g.generator, replicates, seed)?;
    ensemble.write_dir(out)?;
    write_manifest(
        out,
        "generate",
        cfg,
        vec![InputRecord::new(g.input.path(), &source)],
        serde_json::json!({ "ensemble_manifest": synthseries::ensemble::MANIFEST_FILE }),
    )?;
    eprintln!("wrote {replicates} series to {}", out.display());
    Ok(())
}

pub fn perturb(cfg: &RunConfig) -> CliResult<()> {
    let p = section(&cfg.perturb, "perturb")?;
    let (altered, inputs, default_ref) = match &p.method {
        PerturbMethod::IncrementalSelection {
            input,
            distribution,
            clamp,
        } => {
            let seed = cfg.seed()?;
            let source = load(input)?;
            let altered = incremental_select(&source, distribution, clamp, seed)?;
            (altered, vec![InputRecord::new(input.path(), &source)], source)
        }
        PerturbMethod::AlteredDifference {
            high,
            low,
            alpha,
            delta_nonneg,
            result_nonneg,
        } => {
            let h = load(high)?;
            let l = load(low)?;
            let altered = altered_difference(&h, &l, *alpha, *delta_nonneg, *result_nonneg)?;
            (
                altered,
                vec![InputRecord::new(high.path(), &h), InputRecord::new(low.path(), &l)],
                l,
            )
        }
    };
    let mut inputs = inputs;
    let reference = match &p.audit_against {
        Some(a) => {
            let r = load(a)?;
            inputs.push(InputRecord::new(a.path(), &r));
            r
        }
        None => default_ref,
    };
    let audit = direction_audit_with(&altered.series, &reference, p.chunk_length, p.threshold, p.autocorr_lag)?;
    let out = make_out(cfg)?;
    altered.series.write_csv(out.join("altered.csv"))?;
    write_json(&out.join("audit.json"), &audit)?;
    write_manifest(
        out,
        "perturb",
        cfg,
        inputs,
        serde_json::json!({
            "provenance": altered.provenance,
            "output": "altered.csv",
            "output_checksum": altered.series.checksum(),
        }),
    )?;
    eprintln!(
        "wrote altered series to {} ({} chunks below, {} above)",
        out.display(),
        audit.chunks_below,
        audit.chunks_above
    );
    Ok(())
}

#[derive(Serialize)]
struct ExceedanceOutput<'a> {
    original_checksum: String,
    ensemble_source_checksum: &'a str,
    report: &'a synthseries::ExceedanceReport,
    distributions: Vec<EmpiricalDistribution>,
}

pub fn analyze(cfg: &RunConfig) -> CliResult<()> {
    let a = section(&cfg.analyze, "analyze")?;
    let original = load(&a.original)?;
    require_dir(&a.ensemble)?;
    let ensemble = Ensemble::read_dir(&a.ensemble)?;
    let params = ExceedanceParams {
        chunk_length: a.chunk_length,
        under_threshold: a.under_threshold,
        over_threshold: a.over_threshold,
        chunk_mode: a.chunk_mode,
    };
    let table = ensemble_summary_table(&original, &ensemble.series, a.autocorr_lag)?;
    let report = empirical_distribution(&original, &ensemble.series, &params)?;
    let distributions = Statistic::ALL
        .iter()
        .map(|s| report.distribution(*s))
        .collect::<synthseries::Result<Vec<_>>>()?;

    let out = make_out(cfg)?;
    let path = out.join("summary_table.csv");
    table.write_csv(create(&path)?).map_err(csv_err(&path))?;
    write_json(&out.join("summary_table.json"), &table)?;
    for d in &distributions {
        let path = out.join(format!("histogram_{}.csv", d.statistic.name()));
        d.write_histogram_csv(create(&path)?).map_err(csv_err(&path))?;
    }
    write_json(
        &out.join("exceedance.json"),
        &ExceedanceOutput {
            original_checksum: original.checksum(),
            ensemble_source_checksum: &ensemble.source_checksum,
            report: &report,
            distributions,
        },
    )?;
    write_manifest(
        out,
        "analyze",
        cfg,
        vec![InputRecord::new(a.original.path(), &original)],
        serde_json::json!({
            "ensemble_dir": a.ensemble.display().to_string(),
            "ensemble_master_seed": ensemble.master_seed,
            "replicates": ensemble.len(),
        }),
    )?;
    eprintln!("wrote analysis of {} series to {}", ensemble.len(), out.display());
    Ok(())
}

pub fn vre(cfg: &RunConfig) -> CliResult<()> {
    let v = section(&cfg.vre, "vre")?;
    if v.weights.is_none() && v.sweep.is_none() {
        return Err(CliError::Config("[vre] needs `weights`, a [vre.sweep] table, or both".into()));
    }
    if v.ensemble.is_some() && v.weights.is_none() {
        return Err(CliError::Config("[vre.ensemble] requires `weights`".into()));
    }
    if !v.windows.is_empty() && v.weights.is_none() {
        return Err(CliError::Config("[[vre.windows]] requires `weights`".into()));
    }
    let pairing_seed = if v.ensemble.is_some() { Some(cfg.seed()?) } else { None };
    if let Some(e) = &v.ensemble {
        require_dir(&e.solar)?;
        require_dir(&e.wind)?;
    }
    let solar = load(&v.solar)?;
    let wind = load(&v.wind)?;
    let nuclear = load(&v.nuclear)?;
    let load_s = load(&v.load)?;
    let opts = v.options();
    let out = make_out(cfg)?;

    if let Some(w) = v.weights {
        let annual = weighted_adequacy(&solar, &wind, &nuclear, &load_s, w, &opts)?;
        let windows = v
            .windows
            .iter()
            .map(|win| {
                let r = windowed_adequacy(&solar, &wind, &nuclear, &load_s, w, win.start, win.duration, &opts)?;
                Ok(serde_json::json!({ "start": win.start, "duration": win.duration, "result": r }))
            })
            .collect::<CliResult<Vec<_>>>()?;
        write_json(
            &out.join("adequacy.json"),
            &serde_json::json!({ "weights": w, "options": opts, "annual": annual, "windows": windows }),
        )?;
        eprintln!(
            "weights ({}, {}): supplied {:.4}, curtailed {:.4}, shortfall days {}",
            w.w_s, w.w_w, annual.percent_supplied, annual.percent_curtailed, annual.shortfall_days
        );
    }

    if let Some(sw) = &v.sweep {
        let grid = WeightGrid {
            solar: WeightGrid::steps(sw.solar.start, sw.solar.end, sw.solar.step),
            wind: WeightGrid::steps(sw.wind.start, sw.wind.end, sw.wind.step),
        };
        let all = evaluate_grid(&solar, &wind, &nuclear, &load_s, &grid, &opts)?;
        let ranked = weight_sweep(&solar, &wind, &nuclear, &load_s, sw.curtailment_cap, &grid, &opts)?;
        let path = out.join("sweep.csv");
        write_sweep_csv(&ranked, create(&path)?).map_err(csv_err(&path))?;
        let path = out.join("sweep_all.csv");
        write_sweep_csv(&all, create(&path)?).map_err(csv_err(&path))?;
        eprintln!("sweep: {} of {} grid points within the curtailment cap", ranked.len(), all.len());
    }

    if let (Some(e), Some(w), Some(seed)) = (&v.ensemble, v.weights, pairing_seed) {
        let s = Ensemble::read_dir(&e.solar)?;
        let wi = Ensemble::read_dir(&e.wind)?;
        let dist = ensemble_adequacy(&s.series, &wi.series, &nuclear, &load_s, w, &opts, seed)?;
        write_json(&out.join("ensemble_adequacy.json"), &dist)?;
        let path = out.join("shortfall_histogram.csv");
        dist.write_shortfall_csv(create(&path)?).map_err(csv_err(&path))?;
        eprintln!(
            "ensemble: {} pairs, shortfall days {}..{}",
            dist.pairs.len(),
            dist.shortfall.min,
            dist.shortfall.max
        );
    }

    write_manifest(
        out,
        "vre",
        cfg,
        vec![
            InputRecord::new(v.solar.path(), &solar),
            InputRecord::new(v.wind.path(), &wind),
            InputRecord::new(v.nuclear.path(), &nuclear),
            InputRecord::new(v.load.path(), &load_s),
        ],
        serde_json::json!({ "pairing_seed": pairing_seed }),
    )
}
