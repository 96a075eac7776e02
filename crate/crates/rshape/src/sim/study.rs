//! Monte Carlo study harness: per-replicate records, deterministic
//! counter-based seeding, cell aggregation, and table/CSV emission.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{distance_in_measure, hausdorff_grids};
use crate::rconvex::{MembershipGrid, RConvexHull};
use crate::selector::{select_mm, select_rs, SelectorConfig, SelectorOutcome};
use crate::sim::{make_model, sample_uniform, SupportModel};

pub const DEFAULT_GRID_RESOLUTION: usize = 334;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyConfig {
    #[serde(default = "default_models")]
    pub models: Vec<String>,
    #[serde(default = "default_sizes")]
    pub sample_sizes: Vec<usize>,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// 200 keeps a desk run bounded; raise for tighter tables.
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default = "default_iterations")]
    pub max_iterations: u32,
    #[serde(default = "default_cycles")]
    pub max_cycles: usize,
    #[serde(default = "default_grid")]
    pub grid_resolution: usize,
    /// Report d_mu multiplied by ten in summary tables.
    #[serde(default = "default_times_ten")]
    pub times_ten: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_models() -> Vec<String> {
    vec!["ring".into()]
}
fn default_sizes() -> Vec<usize> {
    vec![100, 500, 1000, 1500]
}
fn default_alphas() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3, 1e-4]
}
fn default_replicates() -> usize {
    200
}
fn default_nu() -> f64 {
    0.95
}
fn default_iterations() -> u32 {
    20
}
fn default_cycles() -> usize {
    4
}
fn default_grid() -> usize {
    DEFAULT_GRID_RESOLUTION
}
fn default_times_ten() -> bool {
    true
}

impl Default for StudyConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config fills every default")
    }
}

impl StudyConfig {
    pub fn from_toml(text: &str) -> Result<StudyConfig> {
        let cfg: StudyConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Collects every problem at once instead of stopping at the first.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.models.is_empty() {
            problems.push("models list is empty".to_string());
        }
        for m in &self.models {
            if make_model(m).is_err() {
                problems.push(format!("unknown model '{m}'"));
            }
        }
        if self.sample_sizes.is_empty() {
            problems.push("sample_sizes list is empty".to_string());
        }
        for &n in &self.sample_sizes {
            if n < 10 {
                problems.push(format!("sample size {n} below the minimum of 10"));
            }
        }
        if self.alphas.is_empty() {
            problems.push("alphas list is empty".to_string());
        }
        for &a in &self.alphas {
            if !(a > 0.0 && a < 1.0) {
                problems.push(format!("alpha {a} outside (0, 1)"));
            }
        }
        if self.replicates < 1 {
            problems.push("replicates must be at least 1".to_string());
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            problems.push(format!("nu {} outside (0, 1]", self.nu));
        }
        if self.grid_resolution < 10 {
            problems.push(format!(
                "grid resolution {} below the minimum of 10",
                self.grid_resolution
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(problems.join("; ")))
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based per-replicate seed: master seed xor a hash of the cell
/// coordinates, so any cell replays independently of execution order.
pub fn replicate_seed(master: u64, model: &str, n: usize, replicate: usize) -> u64 {
    let mut h: u64 = 0x8422_6519_62b8_2f6b;
    for &b in model.as_bytes() {
        h = splitmix(h ^ b as u64);
    }
    h = splitmix(h ^ n as u64);
    h = splitmix(h ^ replicate as u64);
    master ^ h
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RsOutcome {
    pub alpha: f64,
    pub r_hat: f64,
    pub convex_fallback: bool,
    /// Symmetric-difference area of the hull at nu * r_hat vs the model.
    pub d_mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub model: String,
    pub n: usize,
    pub replicate: usize,
    pub seed: u64,
    pub mm_r: f64,
    pub rs: Vec<RsOutcome>,
    /// d_mu of the hull built at the true r0, the attainable floor.
    pub benchmark_d_mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellSummary {
    pub model: String,
    pub n: usize,
    pub replicates: usize,
    pub mean_mm: f64,
    pub benchmark_d_mu: f64,
    /// Per alpha, config order: (alpha, mean r_hat, mean d_mu).
    pub per_alpha: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub records: Vec<ReplicateRecord>,
    pub cells: Vec<CellSummary>,
    pub failures: Vec<String>,
}

fn selector_config(cloud: &crate::geom::PointCloud, cfg: &StudyConfig, alpha: f64) -> SelectorConfig {
    SelectorConfig {
        alpha,
        max_iterations: cfg.max_iterations,
        max_cycles: cfg.max_cycles,
        nu: cfg.nu,
        ..SelectorConfig::defaults_for(cloud)
    }
}

/// One full replicate: sample, both selectors, the smoothed estimate
/// per alpha, and the true-r0 benchmark, all scored against the model
/// raster. Pure function of (model, n, seed, knobs).
pub fn run_replicate(
    model: &SupportModel,
    model_grid: &MembershipGrid,
    cfg: &StudyConfig,
    n: usize,
    replicate: usize,
) -> Result<ReplicateRecord> {
    let seed = replicate_seed(cfg.seed, model.name(), n, replicate);
    let cloud = sample_uniform(model, n, seed)?;
    let mm_r = select_mm(&cloud)?;
    let score = |hull: &RConvexHull| -> Result<f64> {
        let grid = hull.rasterize(model.bbox(), cfg.grid_resolution);
        distance_in_measure(&grid, model_grid)
    };
    let mut rs = Vec::with_capacity(cfg.alphas.len());
    for &alpha in &cfg.alphas {
        let sel = selector_config(&cloud, cfg, alpha);
        let trace = select_rs(&cloud, &sel)?;
        let convex_fallback = matches!(trace.outcome, SelectorOutcome::ConvexHullFallback);
        let r_build = if convex_fallback {
            cloud.diameter()
        } else {
            cfg.nu * trace.r_hat
        };
        let hull = RConvexHull::build(&cloud, r_build)?;
        rs.push(RsOutcome {
            alpha,
            r_hat: trace.r_hat,
            convex_fallback,
            d_mu: score(&hull)?,
        });
    }
    let benchmark = RConvexHull::build(&cloud, model.true_r0())?;
    Ok(ReplicateRecord {
        model: model.name().to_string(),
        n,
        replicate,
        seed,
        mm_r,
        rs,
        benchmark_d_mu: score(&benchmark)?,
    })
}

/// All replicates of one (model, n) cell, concurrently. Failed
/// replicates become messages instead of aborting the cell.
pub fn run_cell(
    cfg: &StudyConfig,
    model_name: &str,
    n: usize,
) -> Result<(Vec<ReplicateRecord>, Vec<String>)> {
    let model = make_model(model_name)?;
    let model_grid = model.rasterize(cfg.grid_resolution);
    // collect() keeps index order, so the outcome is deterministic
    // regardless of scheduling.
    let results: Vec<Result<ReplicateRecord>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| run_replicate(&model, &model_grid, cfg, n, rep))
        .collect();
    let mut records = Vec::with_capacity(cfg.replicates);
    let mut failures = Vec::new();
    for (rep, res) in results.into_iter().enumerate() {
        match res {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(format!("{model_name} n={n} replicate={rep}: {e}")),
        }
    }
    Ok((records, failures))
}

/// Summaries from finished records, in (model, n, replicate) order as
/// listed in the config.
pub fn assemble_study(
    cfg: &StudyConfig,
    records: Vec<ReplicateRecord>,
    failures: Vec<String>,
) -> StudyResult {
    let mut cells = Vec::new();
    for model_name in &cfg.models {
        for &n in &cfg.sample_sizes {
            let cell: Vec<&ReplicateRecord> = records
                .iter()
                .filter(|r| r.model == *model_name && r.n == n)
                .collect();
            if !cell.is_empty() {
                cells.push(summarize_cell(&cell));
            }
        }
    }
    StudyResult {
        config: cfg.clone(),
        records,
        cells,
        failures,
    }
}

pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for model_name in &cfg.models {
        for &n in &cfg.sample_sizes {
            let (recs, fails) = run_cell(cfg, model_name, n)?;
            records.extend(recs);
            failures.extend(fails);
        }
    }
    Ok(assemble_study(cfg, records, failures))
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut k) = (0.0, 0usize);
    for v in values {
        s += v;
        k += 1;
    }
    if k == 0 {
        f64::NAN
    } else {
        s / k as f64
    }
}

fn summarize_cell(records: &[&ReplicateRecord]) -> CellSummary {
    let first = records[0];
    let per_alpha = first
        .rs
        .iter()
        .enumerate()
        .map(|(i, rs)| {
            (
                rs.alpha,
                mean(records.iter().map(|r| r.rs[i].r_hat)),
                mean(records.iter().map(|r| r.rs[i].d_mu)),
            )
        })
        .collect();
    CellSummary {
        model: first.model.clone(),
        n: first.n,
        replicates: records.len(),
        mean_mm: mean(records.iter().map(|r| r.mm_r)),
        benchmark_d_mu: mean(records.iter().map(|r| r.benchmark_d_mu)),
        per_alpha,
    }
}

/// One CSV row per replicate; per-alpha columns follow config order.
pub fn records_csv(result: &StudyResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# replicate records; seeds replay each row exactly");
    let mut header = String::from("model,n,replicate,seed,mm_r,benchmark_d_mu");
    for &a in &result.config.alphas {
        let _ = write!(header, ",r_hat_a{a:e},d_mu_a{a:e}");
    }
    out.push_str(&header);
    out.push('\n');
    for r in &result.records {
        let _ = write!(
            out,
            "{},{},{},{},{:.17e},{:.17e}",
            r.model, r.n, r.replicate, r.seed, r.mm_r, r.benchmark_d_mu
        );
        for rs in &r.rs {
            let _ = write!(out, ",{:.17e},{:.17e}", rs.r_hat, rs.d_mu);
        }
        out.push('\n');
    }
    out
}

/// Per-model summary tables in the layout of the reference tables:
/// smoothing means by (alpha, n) with the spacings baseline row, then
/// d_mu means with the true-r0 benchmark as the last row.
pub fn summary_tables(result: &StudyResult) -> String {
    let scale = if result.config.times_ten { 10.0 } else { 1.0 };
    let models: BTreeSet<&str> = result.cells.iter().map(|c| c.model.as_str()).collect();
    let mut out = String::new();
    for model in models {
        let cells: Vec<&CellSummary> =
            result.cells.iter().filter(|c| c.model == model).collect();
        let _ = writeln!(out, "model: {model}");
        let _ = write!(out, "{:<14}", "mean r_hat");
        for c in &cells {
            let _ = write!(out, " {:>10}", format!("n={}", c.n));
        }
        out.push('\n');
        for i in 0..result.config.alphas.len() {
            let _ = write!(out, "{:<14}", format!("alpha={:e}", result.config.alphas[i]));
            for c in &cells {
                let _ = write!(out, " {:>10.4}", c.per_alpha[i].1);
            }
            out.push('\n');
        }
        let _ = write!(out, "{:<14}", "max spacing");
        for c in &cells {
            let _ = write!(out, " {:>10.4}", c.mean_mm);
        }
        out.push('\n');
        let label = if result.config.times_ten {
            "mean d_mu x10"
        } else {
            "mean d_mu"
        };
        let _ = writeln!(out, "{label}");
        for i in 0..result.config.alphas.len() {
            let _ = write!(out, "{:<14}", format!("alpha={:e}", result.config.alphas[i]));
            for c in &cells {
                let _ = write!(out, " {:>10.4}", scale * c.per_alpha[i].2);
            }
            out.push('\n');
        }
        let _ = write!(out, "{:<14}", "true r0 hull");
        for c in &cells {
            let _ = write!(out, " {:>10.4}", scale * c.benchmark_d_mu);
        }
        out.push('\n');
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub sizes: Vec<usize>,
    pub mean_d_mu: Vec<f64>,
    pub mean_d_h: Vec<f64>,
    /// Log-log regression slopes of the means against n.
    pub slope_d_mu: f64,
    pub slope_d_h: f64,
}

fn loglog_slope(sizes: &[usize], means: &[f64]) -> f64 {
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = means.iter().map(|&m| m.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Decay rate of the true-r0 hull's error in n: builds the benchmark
/// hull per replicate and regresses the log mean distances on log n.
pub fn convergence_probe(
    model_name: &str,
    sizes: &[usize],
    replicates: usize,
    seed: u64,
    grid_resolution: usize,
) -> Result<ConvergenceReport> {
    if sizes.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "convergence probe needs at least 3 sizes, got {}",
            sizes.len()
        )));
    }
    let model = make_model(model_name)?;
    let model_grid = model.rasterize(grid_resolution);
    let mut mean_d_mu = Vec::with_capacity(sizes.len());
    let mut mean_d_h = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let pairs: Vec<Result<(f64, f64)>> = (0..replicates)
            .into_par_iter()
            .map(|rep| {
                let s = replicate_seed(seed, model.name(), n, rep);
                let cloud = sample_uniform(&model, n, s)?;
                let hull = RConvexHull::build(&cloud, model.true_r0())?;
                let grid = hull.rasterize(model.bbox(), grid_resolution);
                let d_mu = distance_in_measure(&grid, &model_grid)?;
                let d_h = hausdorff_grids(&grid, &model_grid)?;
                Ok((d_mu, d_h))
            })
            .collect();
        let mut ok = Vec::with_capacity(replicates);
        for p in pairs {
            ok.push(p?);
        }
        mean_d_mu.push(mean(ok.iter().map(|p| p.0)));
        mean_d_h.push(mean(ok.iter().map(|p| p.1)));
    }
    Ok(ConvergenceReport {
        sizes: sizes.to_vec(),
        slope_d_mu: loglog_slope(sizes, &mean_d_mu),
        slope_d_h: loglog_slope(sizes, &mean_d_h),
        mean_d_mu,
        mean_d_h,
    })
}
