//! Command-line experiments over the `anglelab` library. `RunConfig` is the
//! parsed command line; `execute` produces the report text and `run` writes it
//! and maps the outcome to an exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anglelab::anglefind::{
    almost_regular_triangle, near_extreme_witness, near_right_witness, supplementary_chain, Extreme,
};
use anglelab::content::{dyadic_content, microset_zoom, DyadicGrid, DEFAULT_CELL_BUDGET};
use anglelab::dimension::minkowski_dimension_estimate;
use anglelab::geom::{spectrum_hits, spectrum_reduce, triple_count, Sampling};
use anglelab::ifs::{
    avoidance_certificate, gasket_ifs, iterate_cloud, rectangle_in, Decision, HomotheticIfs, DEFAULT_POINT_BUDGET,
};
use anglelab::{AngleInterval, Error, Point, PointCloud, TripleWitness};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

mod svg;

pub use svg::scatter;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Triples a `spectrum` run may visit before it needs `--sample`.
pub const DEFAULT_TRIPLE_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "anglelab", version, about = "Angle and dimension experiments on point clouds and gaskets")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Two coordinates to plot for `--format svg`, e.g. `0,2` (default `0,1` for planar clouds).
    #[arg(long, global = true, value_delimiter = ',', value_name = "I,J")]
    pub project: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Args)]
pub struct CloudInput {
    /// Point cloud file, JSON or (with a `.csv` extension) CSV.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Iterate the simplex gasket from its vertices.
    Gasket {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        budget: u64,
    },
    /// Decide whether the gasket provably avoids the open window `(alpha - window, alpha + window)`.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        window: f64,
    },
    /// Angle histogram, and the first angle in `(alpha - window, alpha + window)` if a window is given.
    Spectrum {
        #[command(flatten)]
        cloud: CloudInput,
        #[arg(long, requires = "window")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        window: Option<f64>,
        /// Histogram bin width in degrees.
        #[arg(long, default_value_t = 1.0)]
        bin: f64,
        /// Most triples to visit.
        #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET)]
        budget: u64,
        /// Past the budget, visit a seeded random sample instead of failing.
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Slope of log2 packing number against scale.
    Minkdim {
        #[command(flatten)]
        cloud: CloudInput,
        #[arg(long, default_value_t = 2)]
        k_min: i32,
        #[arg(long, default_value_t = 6)]
        k_max: i32,
    },
    /// Triangle with longest/shortest side at most `1 + delta`.
    Triangle {
        #[command(flatten)]
        cloud: CloudInput,
        #[arg(long)]
        delta: f64,
    },
    /// Nearly right angle from the well-spread subset at scales `(k, l)`.
    Rightangle {
        #[command(flatten)]
        cloud: CloudInput,
        #[arg(long)]
        k: i32,
        #[arg(long)]
        l: i32,
    },
    /// Smallest or largest angle of the cloud.
    Extreme {
        #[command(flatten)]
        cloud: CloudInput,
        #[arg(long, value_enum)]
        target: Target,
    },
    /// Near-rectangle from the fixed points of two compositions.
    Rectangle {
        /// IFS JSON file; otherwise the gasket given by `--n` and `--delta`.
        #[arg(long, conflicts_with_all = ["n", "delta"])]
        ifs: Option<PathBuf>,
        #[arg(long, requires = "delta")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        f: usize,
        #[arg(long, default_value_t = 1)]
        g: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        budget: u64,
    },
    /// Dyadic Hausdorff content of a grid.
    Content {
        /// Grid JSON file, as written by `rasterize`.
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        s: f64,
    },
    /// Densest admissible cube for the reduced exponent `s - 2 delta`, rescaled.
    Zoom {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Occupied cells of the level-`m` dyadic grid.
    Rasterize {
        #[command(flatten)]
        cloud: CloudInput,
        #[arg(long)]
        m: u32,
        /// Map the cloud into the unit cube first.
        #[arg(long)]
        normalize: bool,
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        budget: u128,
    },
    /// Angle near `180 - alpha` from a chain of angles near `alpha` (heuristic).
    Supplementary {
        #[command(flatten)]
        cloud: CloudInput,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 16)]
        max_steps: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Zero,
    Straight,
}

/// Result of a successful run: the text to write and whether a witness (or a
/// positive certificate) was found.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub found: bool,
}

#[derive(Serialize)]
struct Envelope {
    kind: &'static str,
    found: bool,
    points: Vec<Vec<f64>>,
    metric: Option<f64>,
    params: Value,
    report: Value,
}

/// What a subcommand produced before formatting.
enum Product {
    /// A cloud, written in the cloud interchange formats.
    Cloud(PointCloud),
    /// A grid, written as grid JSON.
    Grid(DyadicGrid),
    Report { envelope: Envelope, background: Option<PointCloud> },
}

fn load_cloud(input: &CloudInput) -> anyhow::Result<PointCloud> {
    let path = &input.input;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    Ok(if csv { PointCloud::from_csv(&text)? } else { PointCloud::from_json(&text)? })
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn coords<'a>(points: impl IntoIterator<Item = &'a Point>) -> Vec<Vec<f64>> {
    points.into_iter().map(|p| p.coords().to_vec()).collect()
}

fn triple_points(t: &TripleWitness) -> Vec<Vec<f64>> {
    coords([&t.apex, &t.arm1, &t.arm2])
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn report(
    kind: &'static str,
    found: bool,
    points: Vec<Vec<f64>>,
    metric: Option<f64>,
    params: Value,
    report: Value,
    background: Option<PointCloud>,
) -> Product {
    Product::Report { envelope: Envelope { kind, found, points, metric, params, report }, background }
}

fn histogram(cloud: &PointCloud, bin: f64, sampling: Option<Sampling>) -> anglelab::Result<Vec<u64>> {
    let bins = (180.0 / bin).ceil() as usize;
    spectrum_reduce(
        cloud,
        sampling,
        || vec![0u64; bins],
        |mut h, e| {
            h[((e.angle / bin) as usize).min(bins - 1)] += 1;
            h
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// Dyadic covers overestimate the cube content by at most `2^(s + d)`: any
/// cube is covered by `2^d` dyadic cubes of at most twice its edge.
fn dyadic_factor(s: f64, grid: &DyadicGrid) -> f64 {
    (s + grid.dimension() as f64).exp2()
}

fn produce(command: &Command) -> anyhow::Result<Product> {
    Ok(match command {
        &Command::Gasket { n, delta, depth, budget } => {
            let ifs = gasket_ifs(n, delta)?;
            let cloud = iterate_cloud(&ifs, depth, &ifs.centers(), budget)?;
            Product::Cloud(cloud.with_label(format!("gasket n={n} delta={delta} depth={depth}")))
        }
        &Command::Certify { n, delta, alpha, window } => {
            let cert = avoidance_certificate(n, delta, &AngleInterval::new(alpha, window)?)?;
            let found = cert.decision == Decision::CertifiedAvoided;
            let params = json!({ "n": n, "delta": delta, "alpha": alpha, "window": window });
            report("certificate", found, vec![], Some(cert.epsilon), params, to_value(&cert), None)
        }
        Command::Spectrum { cloud, alpha, window, bin, budget, sample, seed } => {
            let c = load_cloud(cloud)?;
            if !(*bin > 0.0 && *bin <= 180.0) {
                bail!(Error::InvalidParameter(format!("bin width must be in (0, 180], got {bin}")));
            }
            let total = triple_count(c.len());
            let sampling = if total > *budget {
                if !sample {
                    bail!(Error::BudgetExceeded { requested: total as u128, budget: *budget as u128 });
                }
                Some(Sampling { max_triples: *budget, seed: *seed })
            } else {
                None
            };
            let counts = histogram(&c, *bin, sampling)?;
            let window = match (alpha, window) {
                (Some(a), Some(w)) => Some(AngleInterval::new(*a, *w)?),
                _ => None,
            };
            let hit = window.map(|w| spectrum_hits(&c, &w, sampling)).transpose()?.flatten();
            let found = window.is_none() || hit.is_some();
            let params = json!({
                "alpha": alpha, "window": window.map(|w| w.radius), "bin": bin,
                "budget": budget, "sample": sample, "seed": seed,
            });
            let body = json!({
                "triples": counts.iter().sum::<u64>(),
                "exhaustive": sampling.is_none(),
                "histogram": { "bin_width": bin, "counts": counts },
                "hit": hit,
            });
            let points = hit.as_ref().map(triple_points).unwrap_or_default();
            report("spectrum", found, points, hit.as_ref().map(|h| h.angle), params, body, Some(c))
        }
        Command::Minkdim { cloud, k_min, k_max } => {
            let c = load_cloud(cloud)?;
            let est = minkowski_dimension_estimate(&c, *k_min, *k_max)?;
            let params = json!({ "k_min": k_min, "k_max": k_max });
            report("minkowski-estimate", true, vec![], Some(est.slope), params, to_value(&est), Some(c))
        }
        Command::Triangle { cloud, delta } => {
            let c = load_cloud(cloud)?;
            let w = almost_regular_triangle(&c, *delta)?;
            let points = w.as_ref().map(|w| coords(&w.vertices)).unwrap_or_default();
            let metric = w.as_ref().map(|w| w.side_ratio);
            report("triangle", w.is_some(), points, metric, json!({ "delta": delta }), to_value(&w), Some(c))
        }
        Command::Rightangle { cloud, k, l } => {
            let c = load_cloud(cloud)?;
            let w = near_right_witness(&c, *k, *l)?;
            let params = json!({ "k": k, "l": l });
            report("right-angle", true, triple_points(&w.triple), Some(w.deviation), params, to_value(&w), Some(c))
        }
        Command::Extreme { cloud, target } => {
            let c = load_cloud(cloud)?;
            let t = match target {
                Target::Zero => Extreme::Zero,
                Target::Straight => Extreme::Straight,
            };
            let w = near_extreme_witness(&c, t)?;
            let params = json!({ "target": t });
            report("extreme-angle", true, triple_points(&w), Some(w.angle), params, to_value(&w), Some(c))
        }
        Command::Rectangle { ifs, n, delta, f, g, depth, budget } => {
            let (system, params) = match (ifs, n, delta) {
                (Some(path), _, _) => {
                    let text = read(path)?;
                    let system = HomotheticIfs::from_json(&text)?;
                    let raw: Value = serde_json::from_str(&text)?;
                    (system, json!({ "ifs": raw }))
                }
                (None, Some(n), Some(delta)) => (gasket_ifs(*n, *delta)?, json!({ "n": n, "delta": delta })),
                _ => bail!(Error::InvalidParameter("rectangle needs --ifs or both --n and --delta".into())),
            };
            let mut params = params;
            params["f"] = json!(f);
            params["g"] = json!(g);
            params["depth"] = json!(depth);
            let w = rectangle_in(&system, *f, *g, *depth, *budget)?;
            let background = iterate_cloud(&system, *depth, &system.centers(), *budget)?;
            report("rectangle", true, coords(&w.corners), Some(w.deviation), params, to_value(&w), Some(background))
        }
        Command::Content { grid, s } => {
            let grid = DyadicGrid::from_json(&read(grid)?)?;
            let r = dyadic_content(&grid, *s)?;
            let params = json!({ "s": s, "dyadic_factor": dyadic_factor(*s, &grid) });
            report("content", true, vec![], Some(r.value), params, to_value(&r), None)
        }
        Command::Zoom { grid, s, delta } => {
            let grid = DyadicGrid::from_json(&read(grid)?)?;
            let z = microset_zoom(&grid, *s, *delta)?;
            let params = json!({ "s": s, "delta": delta, "dyadic_factor": dyadic_factor(z.exponent, &grid) });
            report("zoom", z.meets_threshold, vec![], Some(z.normalized_content), params, to_value(&z), None)
        }
        Command::Rasterize { cloud, m, normalize, budget } => {
            let mut c = load_cloud(cloud)?;
            if *normalize {
                c = c.normalized()?.0;
            }
            Product::Grid(DyadicGrid::from_points(&c, *m, *budget)?)
        }
        Command::Supplementary { cloud, alpha, delta, epsilon, max_steps } => {
            let c = load_cloud(cloud)?;
            let w = supplementary_chain(&c, *alpha, *delta, *epsilon, *max_steps)?;
            let points = w.as_ref().map(|w| triple_points(&w.triple)).unwrap_or_default();
            let metric = w.as_ref().map(|w| w.epsilon_prime);
            let params = json!({ "alpha": alpha, "delta": delta, "epsilon": epsilon, "max_steps": max_steps });
            report("supplementary", w.is_some(), points, metric, params, to_value(&w), Some(c))
        }
    })
}

fn csv_row(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
}

/// Witness points as CSV rows, or `field,value` rows of the scalar report
/// fields when the report has no points.
fn envelope_csv(e: &Envelope) -> String {
    let mut out = String::new();
    if !e.points.is_empty() {
        for p in &e.points {
            out.push_str(&csv_row(p));
            out.push('\n');
        }
        return out;
    }
    let mut fields = vec![("found".to_string(), e.found.to_string())];
    if let Some(m) = e.metric {
        fields.push(("metric".into(), format!("{m:?}")));
    }
    if let Value::Object(map) = &e.report {
        for (k, v) in map {
            match v {
                Value::Number(_) | Value::Bool(_) => fields.push((k.clone(), v.to_string())),
                Value::String(s) => fields.push((k.clone(), s.clone())),
                _ => {}
            }
        }
    }
    for (k, v) in fields {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn plane(points: &[Vec<f64>], axes: (usize, usize)) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p[axes.0], p[axes.1]]).collect()
}

fn svg_axes(dimension: usize, project: &Option<Vec<usize>>) -> anyhow::Result<(usize, usize)> {
    let (a, b) = match project.as_deref() {
        Some(&[a, b]) => (a, b),
        Some(_) => bail!(Error::InvalidParameter("--project takes two coordinates".into())),
        None if dimension == 2 => (0, 1),
        None => bail!(Error::InvalidParameter(format!(
            "svg needs a planar cloud or --project, got dimension {dimension}"
        ))),
    };
    if a >= dimension || b >= dimension || a == b {
        bail!(Error::InvalidParameter(format!("cannot project dimension {dimension} onto axes {a},{b}")));
    }
    Ok((a, b))
}

/// Runs the subcommand and renders its report without touching the output path.
pub fn execute(config: &RunConfig) -> anyhow::Result<Output> {
    let product = produce(&config.command)?;
    let (text, found) = match (product, config.format) {
        (Product::Cloud(c), Format::Json) => (c.to_json(), true),
        (Product::Cloud(c), Format::Csv) => (c.to_csv(), true),
        (Product::Cloud(c), Format::Svg) => {
            let axes = svg_axes(c.dimension(), &config.project)?;
            (scatter(&plane(&coords(c.points()), axes), &[]), true)
        }
        (Product::Grid(g), Format::Json) => (g.to_json(), true),
        (Product::Grid(_), f) => bail!(Error::InvalidParameter(format!("grids are written as json, not {f:?}"))),
        (Product::Report { envelope, .. }, Format::Json) => {
            (serde_json::to_string_pretty(&envelope).expect("reports serialize"), envelope.found)
        }
        (Product::Report { envelope, .. }, Format::Csv) => (envelope_csv(&envelope), envelope.found),
        (Product::Report { envelope, background }, Format::Svg) => {
            let Some(bg) = background else {
                bail!(Error::InvalidParameter(format!("{} reports have no cloud to draw", envelope.kind)));
            };
            let axes = svg_axes(bg.dimension(), &config.project)?;
            (scatter(&plane(&coords(bg.points()), axes), &plane(&envelope.points, axes)), envelope.found)
        }
    };
    let text = if text.ends_with('\n') { text } else { text + "\n" };
    Ok(Output { text, found })
}

/// Exit code for a failed run: 3 when a budget was exceeded, 2 otherwise.
pub fn failure_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

/// Executes, writes the report to `--output` or stdout, and returns the exit code.
pub fn run(config: &RunConfig) -> i32 {
    let written = execute(config).and_then(|out| {
        match &config.output {
            Some(path) => fs::write(path, &out.text).with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(out.text.as_bytes())?,
        }
        Ok(out.found)
    });
    match written {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NOT_FOUND,
        Err(e) => {
            eprintln!("anglelab: {e:#}");
            failure_code(&e)
        }
    }
}
