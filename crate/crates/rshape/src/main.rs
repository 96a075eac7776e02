//! Command-line front end: estimate a support from a point CSV, pick a
//! smoothing radius, run the uniformity test, drive the Monte Carlo
//! study, compare shapes, and generate fixture samples.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rshape::geom::{BBox, PointCloud};
use rshape::io::{self, RunManifest};
use rshape::metrics::{distance_in_measure, hausdorff_grids, hausdorff_point_sets};
use rshape::rconvex::{MembershipGrid, RConvexHull};
use rshape::selector::{selector_by_name, SelectorConfig, SelectorOutcome};
use rshape::sim::{
    assemble_study, convergence_probe, make_model, records_csv, run_cell,
    sample_uniform, summary_tables, ReplicateRecord, StudyConfig,
};
use rshape::spacing::test_uniformity;
use rshape::{Error, Result};

#[derive(Parser)]
#[command(name = "rshape", version, about = "r-convex shape estimation from point clouds")]
struct Cli {
    /// Worker threads; default: all cores. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory for result files and the run manifest.
    #[arg(long, global = true, default_value = "rshape_out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select a smoothing radius and write the estimated support.
    Estimate(EstimateArgs),
    /// Run a smoothing-radius selector and report the radius.
    Select(SelectArgs),
    /// Test uniformity of a sample on its r-convex hull.
    Test(TestArgs),
    /// Run the Monte Carlo study from a config file.
    Study(StudyArgs),
    /// Compare two shapes (point CSVs, models, or saved grids).
    Metrics(MetricsArgs),
    /// Generate a uniform sample from a benchmark model.
    Sample(SampleArgs),
}

#[derive(Args)]
struct SelectorFlags {
    /// Test level for the radius search.
    #[arg(long, default_value_t = 1e-2)]
    alpha: f64,
    /// Scaling of the selected radius used for the final hull.
    #[arg(long, default_value_t = 0.95)]
    nu: f64,
    /// Bisection iterations.
    #[arg(long, default_value_t = 20)]
    iters: u32,
    /// Largest tolerated boundary cycle count at the lower bracket.
    #[arg(long, default_value_t = 4)]
    max_cycles: usize,
    /// Lower search bracket; default derives from nearest-neighbor scale.
    #[arg(long)]
    rmin: Option<f64>,
    /// Upper search bracket; default is the sample diameter.
    #[arg(long)]
    rmax: Option<f64>,
}

impl SelectorFlags {
    fn config(&self, cloud: &PointCloud) -> SelectorConfig {
        let mut cfg = SelectorConfig::defaults_for(cloud);
        cfg.alpha = self.alpha;
        cfg.nu = self.nu;
        cfg.max_iterations = self.iters;
        cfg.max_cycles = self.max_cycles;
        if let Some(r) = self.rmin {
            cfg.r_min = r;
        }
        if let Some(r) = self.rmax {
            cfg.r_max = r;
        }
        cfg
    }

    fn record(&self, m: &mut RunManifest) {
        m.flag("alpha", self.alpha)
            .flag("nu", self.nu)
            .flag("iters", self.iters)
            .flag("max-cycles", self.max_cycles);
        if let Some(r) = self.rmin {
            m.flag("rmin", r);
        }
        if let Some(r) = self.rmax {
            m.flag("rmax", r);
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// Point CSV (x,y per line, optional header, # comments).
    input: PathBuf,
    #[command(flatten)]
    selector: SelectorFlags,
    /// Boundary polyline resolution: samples per hull radius of arc.
    #[arg(long, default_value_t = 334)]
    grid: usize,
}

#[derive(Args)]
struct SelectArgs {
    input: PathBuf,
    /// Selection strategy.
    #[arg(long, default_value = "rs")]
    method: String,
    #[command(flatten)]
    selector: SelectorFlags,
}

#[derive(Args)]
struct TestArgs {
    input: PathBuf,
    /// Hull radius to test.
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 1e-2)]
    alpha: f64,
}

#[derive(Args)]
struct StudyArgs {
    /// TOML study config; omit to run the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Emit the convergence probe (slope of the benchmark error in n)
    /// instead of the full table study.
    #[arg(long)]
    convergence: bool,
}

#[derive(Args)]
struct MetricsArgs {
    /// First shape: points CSV, `model:NAME`, or `grid:FILE.json`.
    a: String,
    /// Second shape, same forms.
    b: String,
    /// Hull radius for point-CSV operands.
    #[arg(long)]
    r: Option<f64>,
    /// Raster resolution per axis.
    #[arg(long, default_value_t = 334)]
    grid: usize,
}

#[derive(Args)]
struct SampleArgs {
    /// Benchmark model name.
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: &Cli) -> Result<()> {
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Estimate(a) => cmd_estimate(cli, a),
        Command::Select(a) => cmd_select(cli, a),
        Command::Test(a) => cmd_test(cli, a),
        Command::Study(a) => cmd_study(cli, a),
        Command::Metrics(a) => cmd_metrics(cli, a),
        Command::Sample(a) => cmd_sample(cli, a),
    }
}

fn outcome_name(o: SelectorOutcome) -> &'static str {
    match o {
        SelectorOutcome::Bisection => "bisection",
        SelectorOutcome::ConvexHullFallback => "convex_hull_fallback",
        SelectorOutcome::CycleCapFallback => "cycle_cap_fallback",
    }
}

fn cmd_estimate(cli: &Cli, args: &EstimateArgs) -> Result<()> {
    let cloud = io::read_points_csv(&args.input)?;
    if cloud.len() < 10 {
        return Err(Error::TooFewPoints {
            need: 10,
            got: cloud.len(),
        });
    }
    let cfg = args.selector.config(&cloud);
    let trace = rshape::selector::select_rs(&cloud, &cfg)?;
    let r_build = match trace.outcome {
        SelectorOutcome::ConvexHullFallback => cloud.diameter(),
        _ => cfg.nu * trace.r_hat,
    };
    let hull = RConvexHull::build(&cloud, r_build)?;

    let report = json!({
        "r_hat": trace.r_hat,
        "r_build": r_build,
        "outcome": outcome_name(trace.outcome),
        "area": hull.area(),
        "cycles": hull.cycle_count(),
        "boundary_vertices": hull.boundary_vertex_count(),
        "points": cloud.len(),
        "trace": trace.iterations.iter().map(|(r, v, cycles)| json!({
            "r": r,
            "reject": v.reject,
            "max_clearance": v.m_r,
            "critical_radius": v.critical_radius,
            "cycles": cycles,
        })).collect::<Vec<_>>(),
    });
    std::fs::write(
        cli.out.join("estimate.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;

    // Boundary cycles as a plot-ready polyline CSV; blank line between
    // cycles.
    let step = std::f64::consts::TAU / args.grid as f64;
    let mut boundary = String::from("x,y\n");
    for cycle in hull.boundary_polylines(step) {
        for p in cycle {
            let _ = writeln!(boundary, "{},{}", p.x, p.y);
        }
        boundary.push('\n');
    }
    std::fs::write(cli.out.join("boundary.csv"), boundary)?;

    let mut m = RunManifest::new("estimate", 0);
    args.selector.record(&mut m);
    m.flag("grid", args.grid);
    m.input(&args.input)?;
    m.write(&cli.out.join("manifest.json"))?;

    println!(
        "r_hat = {:.6}  ({}), hull at {:.6}: area {:.6}, {} cycle(s)",
        trace.r_hat,
        outcome_name(trace.outcome),
        r_build,
        hull.area(),
        hull.cycle_count()
    );
    Ok(())
}

fn cmd_select(cli: &Cli, args: &SelectArgs) -> Result<()> {
    let cloud = io::read_points_csv(&args.input)?;
    let cfg = args.selector.config(&cloud);
    let selector = selector_by_name(&args.method)?;
    let sel = selector.select(&cloud, &cfg)?;
    let report = json!({
        "method": sel.method,
        "r_hat": sel.r_hat,
        "outcome": sel.trace.as_ref().map(|t| outcome_name(t.outcome)),
        "tested_radii": sel.trace.as_ref().map(|t| {
            t.iterations.iter().map(|(r, v, _)| json!({"r": r, "reject": v.reject})).collect::<Vec<_>>()
        }),
    });
    std::fs::write(
        cli.out.join("select.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    let mut m = RunManifest::new("select", 0);
    args.selector.record(&mut m);
    m.flag("method", &args.method);
    m.input(&args.input)?;
    m.write(&cli.out.join("manifest.json"))?;
    println!("{}: r_hat = {:.6}", sel.method, sel.r_hat);
    Ok(())
}

fn cmd_test(cli: &Cli, args: &TestArgs) -> Result<()> {
    let cloud = io::read_points_csv(&args.input)?;
    let verdict = test_uniformity(&cloud, args.r, args.alpha)?;
    let report = json!({
        "r": args.r,
        "alpha": args.alpha,
        "reject": verdict.reject,
        "max_clearance": verdict.m_r,
        "critical_radius": verdict.critical_radius,
        "candidates": verdict.candidate_count,
        "witness": verdict.witness.map(|p| json!([p.x, p.y])),
    });
    std::fs::write(
        cli.out.join("test.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    let mut m = RunManifest::new("test", 0);
    m.flag("r", args.r).flag("alpha", args.alpha);
    m.input(&args.input)?;
    m.write(&cli.out.join("manifest.json"))?;
    println!(
        "{}: max clearance {:.6} vs critical radius {:.6}",
        if verdict.reject { "reject" } else { "accept" },
        verdict.m_r,
        verdict.critical_radius
    );
    Ok(())
}

fn cell_cache_path(out: &Path, model: &str, n: usize) -> PathBuf {
    out.join(format!("cell_{model}_{n}.json"))
}

fn cmd_study(cli: &Cli, args: &StudyArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => StudyConfig::from_toml(&std::fs::read_to_string(path)?)?,
        None => StudyConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;

    let mut m = RunManifest::new("study", cfg.seed);
    if let Some(path) = &args.config {
        m.input(path)?;
    }
    m.flag("convergence", args.convergence);

    if args.convergence {
        let report = convergence_probe(
            &cfg.models[0],
            &cfg.sample_sizes,
            cfg.replicates,
            cfg.seed,
            cfg.grid_resolution,
        )?;
        std::fs::write(
            cli.out.join("convergence.json"),
            serde_json::to_string_pretty(&report).expect("report serializes"),
        )?;
        m.write(&cli.out.join("manifest.json"))?;
        println!(
            "slope d_mu = {:.4}, slope d_h = {:.4} over n = {:?}",
            report.slope_d_mu, report.slope_d_h, report.sizes
        );
        return Ok(());
    }

    // Resume by cell: each (model, n) cell is cached as JSON and reused
    // when its replicate count still matches the config.
    let mut records: Vec<ReplicateRecord> = Vec::new();
    let mut failures = Vec::new();
    for model in cfg.models.clone() {
        for &n in &cfg.sample_sizes.clone() {
            let cache = cell_cache_path(&cli.out, &model, n);
            let cached: Option<Vec<ReplicateRecord>> = std::fs::read(&cache)
                .ok()
                .and_then(|bytes| serde_json::from_slice(&bytes).ok())
                .filter(|recs: &Vec<ReplicateRecord>| recs.len() == cfg.replicates);
            let cell_records = match cached {
                Some(recs) => {
                    eprintln!("cell {model} n={n}: reusing {}", cache.display());
                    recs
                }
                None => {
                    eprintln!("cell {model} n={n}: running {} replicates", cfg.replicates);
                    let (recs, fails) = run_cell(&cfg, &model, n)?;
                    failures.extend(fails);
                    if recs.len() == cfg.replicates {
                        std::fs::write(
                            &cache,
                            serde_json::to_vec(&recs).expect("records serialize"),
                        )?;
                    }
                    recs
                }
            };
            records.extend(cell_records);
        }
    }
    let result = assemble_study(&cfg, records, failures);
    std::fs::write(cli.out.join("records.csv"), records_csv(&result))?;
    let tables = summary_tables(&result);
    std::fs::write(cli.out.join("summary.txt"), &tables)?;
    m.write(&cli.out.join("manifest.json"))?;
    if !result.failures.is_empty() {
        eprintln!("{} replicate(s) failed:", result.failures.len());
        for f in &result.failures {
            eprintln!("  {f}");
        }
    }
    print!("{tables}");
    Ok(())
}

/// A metrics operand rasterized on a shared box, plus its boundary
/// cells for the boundary Hausdorff distance.
fn operand_grid(spec: &str, r: Option<f64>, bbox: BBox, res: usize) -> Result<MembershipGrid> {
    if let Some(name) = spec.strip_prefix("model:") {
        let model = make_model(name)?;
        return Ok(MembershipGrid::from_fn(bbox, res, res, |p| {
            model.contains(p)
        }));
    }
    if let Some(path) = spec.strip_prefix("grid:") {
        let bytes = std::fs::read(Path::new(path))?;
        return serde_json::from_slice(&bytes)
            .map_err(|e| Error::Parse { line: 0, msg: e.to_string() });
    }
    let cloud = io::read_points_csv(Path::new(spec))?;
    let r = r.ok_or_else(|| {
        Error::InvalidConfig("point-CSV operands need --r for the hull radius".into())
    })?;
    let hull = RConvexHull::build(&cloud, r)?;
    Ok(hull.rasterize(bbox, res))
}

fn operand_bbox(spec: &str, r: Option<f64>) -> Result<Option<BBox>> {
    if spec.starts_with("model:") {
        let model = make_model(spec.trim_start_matches("model:"))?;
        return Ok(Some(model.bbox()));
    }
    if spec.starts_with("grid:") {
        return Ok(None); // carries its own box
    }
    let cloud = io::read_points_csv(Path::new(spec))?;
    let b = cloud.bbox();
    let pad = r.unwrap_or(0.0);
    Ok(Some(BBox {
        min_x: b.min_x - pad,
        min_y: b.min_y - pad,
        max_x: b.max_x + pad,
        max_y: b.max_y + pad,
    }))
}

/// Cell centers adjacent to the complement: a raster proxy for the
/// region boundary.
fn boundary_cells(g: &MembershipGrid) -> Vec<rshape::geom::Point2> {
    let at = |ix: i64, iy: i64| -> bool {
        if ix < 0 || iy < 0 || ix >= g.nx as i64 || iy >= g.ny as i64 {
            return false;
        }
        g.cells[iy as usize * g.nx + ix as usize]
    };
    g.occupied_centers()
        .into_iter()
        .zip(g.cells.iter().enumerate().filter(|(_, &b)| b))
        .filter(|(_, (i, _))| {
            let (ix, iy) = ((i % g.nx) as i64, (i / g.nx) as i64);
            !(at(ix - 1, iy) && at(ix + 1, iy) && at(ix, iy - 1) && at(ix, iy + 1))
        })
        .map(|(p, _)| p)
        .collect()
}

fn cmd_metrics(cli: &Cli, args: &MetricsArgs) -> Result<()> {
    // Shared box: union of the operands' natural boxes.
    let boxes: Vec<BBox> = [&args.a, &args.b]
        .iter()
        .filter_map(|s| operand_bbox(s, args.r).transpose())
        .collect::<Result<_>>()?;
    let bbox = boxes
        .into_iter()
        .reduce(|a, b| BBox {
            min_x: a.min_x.min(b.min_x),
            min_y: a.min_y.min(b.min_y),
            max_x: a.max_x.max(b.max_x),
            max_y: a.max_y.max(b.max_y),
        })
        .unwrap_or(BBox {
            min_x: 0.0,
            min_y: 0.0,
            max_x: 1.0,
            max_y: 1.0,
        });
    let ga = operand_grid(&args.a, args.r, bbox, args.grid)?;
    let gb = operand_grid(&args.b, args.r, bbox, args.grid)?;
    let d_mu = distance_in_measure(&ga, &gb)?;
    let d_h = if ga.occupied() == 0 && gb.occupied() == 0 {
        0.0
    } else {
        hausdorff_grids(&ga, &gb)?
    };
    let (ba, bb) = (boundary_cells(&ga), boundary_cells(&gb));
    let d_h_boundary = if ba.is_empty() && bb.is_empty() {
        0.0
    } else if ba.is_empty() || bb.is_empty() {
        return Err(Error::EmptyBoundary);
    } else {
        hausdorff_point_sets(&ba, &bb)
    };
    let report = json!({
        "d_mu": d_mu,
        "d_h": d_h,
        "d_h_boundary": d_h_boundary,
        "grid_resolution": args.grid,
    });
    std::fs::write(
        cli.out.join("metrics.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    let mut m = RunManifest::new("metrics", 0);
    m.flag("a", &args.a).flag("b", &args.b).flag("grid", args.grid);
    if let Some(r) = args.r {
        m.flag("r", r);
    }
    for spec in [&args.a, &args.b] {
        if !spec.starts_with("model:") {
            m.input(Path::new(spec.trim_start_matches("grid:")))?;
        }
    }
    m.write(&cli.out.join("manifest.json"))?;
    println!("d_mu = {d_mu:.6}, d_h = {d_h:.6}, d_h_boundary = {d_h_boundary:.6}");
    Ok(())
}

fn cmd_sample(cli: &Cli, args: &SampleArgs) -> Result<()> {
    let model = make_model(&args.model)?;
    let cloud = sample_uniform(&model, args.n, args.seed)?;
    let path = cli.out.join(format!("{}_{}_{}.csv", args.model, args.n, args.seed));
    io::write_points_csv(&path, cloud.points())?;
    let mut m = RunManifest::new("sample", args.seed);
    m.flag("model", &args.model).flag("n", args.n);
    m.write(&cli.out.join("manifest.json"))?;
    println!("wrote {} points to {}", cloud.len(), path.display());
    Ok(())
}
