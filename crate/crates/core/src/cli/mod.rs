//! Command-line front end: `generate`, `fit`, `grid` and `inspect`.
//!
//! Settings come from a preset, then an optional `key = value` file given
//! with `--config`, then flags, each layer overriding the one before.

mod params;
mod presets;
mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use params::Params;
pub use presets::{fit_config, generation_spec, grid_preset, FitPreset, GRID_PRESETS};
pub use report::{
    AssignmentRecord, ClusterSummary, FitArtifacts, FitReport, Network, NetworkEdge, NETWORK_LAGS,
};

use crate::error::{Error, Result};
use crate::eval::{nmi, run_grid, svg, ExperimentGrid, GridResult};
use crate::io::{load_dataset, save_dataset, save_json, Dataset, TimeUnit};
use crate::prior::PriorKind;
use crate::smc::Smc;
use crate::synth::{generate_dataset, Manifest};

#[derive(Debug, Parser)]
#[command(name = "mpdhp", version, about = "Streaming document clustering with Hawkes-process priors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labelled synthetic stream and its manifest.
    Generate(GenerateArgs),
    /// Cluster a stream and write assignments, tensors and a report.
    Fit(FitArgs),
    /// Run an experiment grid and write metric tables.
    Grid(GridArgs),
    /// Summarise a dataset, manifest, fit report or grid table.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Output stream (JSON Lines); the manifest goes next to it.
    #[arg(long, short)]
    pub out: PathBuf,
    /// `key = value` settings file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub vocab_size: Option<usize>,
    #[arg(long)]
    pub n_words: Option<usize>,
    #[arg(long)]
    pub n_events: Option<usize>,
    #[arg(long)]
    pub textual_overlap: Option<f64>,
    #[arg(long)]
    pub temporal_overlap: Option<f64>,
    /// Exogenous events per hour per cluster.
    #[arg(long)]
    pub immigrant_rate: Option<f64>,
    /// Self-excitation only.
    #[arg(long)]
    pub univariate: bool,
    /// Comma-separated kernel centres (hours).
    #[arg(long)]
    pub kernel_means: Option<String>,
    /// Comma-separated kernel widths (hours).
    #[arg(long)]
    pub kernel_sigmas: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Input stream (JSON Lines).
    pub input: PathBuf,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter preset: synthetic or news.
    #[arg(long)]
    pub preset: Option<String>,
    /// mpdhp, pdhp, dp or up.
    #[arg(long)]
    pub prior: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long)]
    pub alpha_dp: Option<f64>,
    #[arg(long)]
    pub n_particles: Option<usize>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub omega_thres: Option<f64>,
    #[arg(long)]
    pub beta0: Option<f64>,
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub kernel_means: Option<String>,
    #[arg(long)]
    pub kernel_sigmas: Option<String>,
    /// Drop cross-cluster influence.
    #[arg(long)]
    pub mask_cross: bool,
    /// Timestamp unit of the input: hours or seconds.
    #[arg(long)]
    pub ts_unit: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Score the fit against the labels in the input.
    #[arg(long)]
    pub eval: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    /// TOML grid specification.
    #[arg(long, conflicts_with = "preset")]
    pub spec: Option<PathBuf>,
    /// Built-in grid: fig2-desk, fig3-lambda0 or fig3-words.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub replications: Option<usize>,
    #[arg(long)]
    pub n_events: Option<usize>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Concurrent dataset jobs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Also draw NMI charts.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Dataset, manifest, fit directory or report, or grid directory.
    pub path: PathBuf,
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 success, 1 usage, 2 data error, 3 numerical failure.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing human-readable output to `out`. Returns
/// the exit code for commands that finish with partial failures.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a, out).map(|_| 0),
        Command::Fit(a) => cmd_fit(&a, out).map(|_| 0),
        Command::Grid(a) => cmd_grid(&a, out),
        Command::Inspect(a) => cmd_inspect(&a.path, out).map(|_| 0),
    }
}

fn layered(config: Option<&Path>) -> Result<Params> {
    match config {
        Some(p) => Params::load(p),
        None => Ok(Params::default()),
    }
}

/// Where `generate` puts the manifest for a stream written to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.manifest.json"))
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let mut p = layered(a.config.as_deref())?;
    p.set_opt("k", a.k);
    p.set_opt("vocab_size", a.vocab_size);
    p.set_opt("n_words", a.n_words);
    p.set_opt("n_events", a.n_events);
    p.set_opt("textual_overlap", a.textual_overlap);
    p.set_opt("temporal_overlap", a.temporal_overlap);
    p.set_opt("immigrant_rate", a.immigrant_rate);
    p.set_opt("kernel_means", a.kernel_means.as_ref());
    p.set_opt("kernel_sigmas", a.kernel_sigmas.as_ref());
    p.set_opt("seed", a.seed);
    if a.univariate {
        p.set("univariate", true);
    }
    let spec = generation_spec(&p)?;
    let generated = generate_dataset(&spec)?;
    save_dataset(&a.out, &generated.dataset)?;
    let manifest = generated.manifest();
    save_json(&manifest_path(&a.out), &manifest)?;
    writeln!(
        out,
        "{} events, V={}, K={}; temporal overlap {:.3} (target {}), textual overlap {:.3} (target {}, empirical {:.3})",
        manifest.n_events,
        spec.vocab_size,
        spec.n_clusters,
        manifest.achieved_temporal_overlap,
        spec.temporal_overlap,
        manifest.achieved_textual_overlap,
        spec.textual_overlap,
        manifest.empirical_textual_overlap,
    )?;
    Ok(())
}

pub fn cmd_fit(a: &FitArgs, out: &mut dyn Write) -> Result<FitReport> {
    let mut p = layered(a.config.as_deref())?;
    p.set_opt("preset", a.preset.as_ref());
    p.set_opt("prior", a.prior.as_ref());
    p.set_opt("r", a.r);
    p.set_opt("lambda0", a.lambda0);
    p.set_opt("alpha_dp", a.alpha_dp);
    p.set_opt("n_particles", a.n_particles);
    p.set_opt("n_samples", a.n_samples);
    p.set_opt("omega_thres", a.omega_thres);
    p.set_opt("beta0", a.beta0);
    p.set_opt("theta0", a.theta0);
    p.set_opt("kernel_means", a.kernel_means.as_ref());
    p.set_opt("kernel_sigmas", a.kernel_sigmas.as_ref());
    p.set_opt("ts_unit", a.ts_unit.as_ref());
    p.set_opt("seed", a.seed);
    if a.mask_cross {
        p.set("mask_cross", true);
    }
    let preset: FitPreset = p.get("preset")?.unwrap_or_default();
    let unit = p.get::<TimeUnit>("ts_unit")?.unwrap_or(preset.time_unit());
    let data = load_dataset(&a.input, unit)?;
    let config = fit_config(&p, data.header.vocab_size)?;

    let mut smc = Smc::new(config)?;
    let n = data.events.len();
    for (i, e) in data.events.iter().enumerate() {
        let counts = e.counts().map_err(|err| Error::data(i + 2, err.to_string()))?;
        let outcome = smc.process(e.time, &counts)?;
        if (i + 1) % 1000 == 0 {
            log::info!("{}/{n} events, {} active clusters", i + 1, outcome.active_clusters);
        }
    }
    let mut artifacts = FitArtifacts::from_smc(&smc, data.header.vocab_size)?;
    if a.eval {
        let labels = data
            .labels()
            .ok_or_else(|| Error::data(1, "--eval needs a cluster label on every event"))?;
        let pred: Vec<u64> = artifacts.assignments.iter().map(|r| r.cluster).collect();
        artifacts.report.nmi = Some(nmi(&labels, &pred)?);
    }
    write_fit(&a.out, &artifacts)?;
    let r = &artifacts.report;
    writeln!(
        out,
        "{} events, {} clusters opened, {} active at end, spectral radius {:.4}",
        r.n_events, r.clusters_opened, r.active_at_end, r.spectral_radius
    )?;
    if let Some(score) = r.nmi {
        writeln!(out, "NMI {score:.4}")?;
    }
    Ok(artifacts.report)
}

fn write_fit(dir: &Path, a: &FitArtifacts) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(dir.join("assignments.jsonl"))?);
    for r in &a.assignments {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    save_json(&dir.join("report.json"), &a.report)?;
    save_json(&dir.join("tensor.json"), &a.tensor)?;
    save_json(&dir.join("network.json"), &a.network)?;
    let mut csv = csv::Writer::from_path(dir.join("top_words.csv"))?;
    csv.write_record(["cluster", "population", "active", "rank", "token", "count"])?;
    for node in &a.network.nodes {
        for (rank, (token, count)) in node.top_words.iter().enumerate() {
            csv.write_record([
                node.id.to_string(),
                node.population.to_string(),
                node.active.to_string(),
                (rank + 1).to_string(),
                token.to_string(),
                count.to_string(),
            ])?;
        }
    }
    csv.flush()?;
    Ok(())
}

pub fn cmd_grid(a: &GridArgs, out: &mut dyn Write) -> Result<i32> {
    let mut grid = match (&a.spec, &a.preset) {
        (Some(path), _) => read_grid_spec(path)?,
        (None, Some(name)) => grid_preset(name)?,
        (None, None) => return Err(Error::input("give a grid with --spec or --preset")),
    };
    if let Some(v) = a.replications {
        grid.replications = v;
    }
    if let Some(v) = a.n_events {
        grid.n_events = v;
    }
    if let Some(v) = a.n_samples {
        grid.n_samples = vec![v];
    }
    if let Some(v) = a.seed {
        grid.seed = v;
    }
    let result = run_grid(&grid, a.jobs)?;
    result.write_csv(&a.out)?;
    if a.svg {
        write_charts(&a.out, &grid, &result)?;
    }
    let failures = result.failures();
    writeln!(
        out,
        "{} runs over {} cells, {failures} failed",
        result.rows.len(),
        result.aggregates.len()
    )?;
    for g in &result.aggregates {
        writeln!(
            out,
            "{:>5} r={} λ0={} text={} time={} k={} words={}: NMI {:.3} ± {:.3} ({} runs)",
            g.prior.as_str(),
            g.r,
            g.lambda0,
            g.textual_overlap,
            g.temporal_overlap,
            g.k,
            g.n_words,
            g.mean_nmi,
            g.stderr_nmi,
            g.runs
        )?;
    }
    Ok(if failures > 0 { 3 } else { 0 })
}

/// Reads a TOML grid, reporting the failing line as a data error.
pub fn read_grid_spec(path: &Path) -> Result<ExperimentGrid> {
    let text = std::fs::read_to_string(path)?;
    let grid: ExperimentGrid = toml::from_str(&text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(1);
        Error::data(line, e.message().to_string())
    })?;
    grid.validate()?;
    Ok(grid)
}

/// One NMI-versus-textual-overlap chart per distinct setting of the other
/// axes, with one line per prior kind.
fn write_charts(dir: &Path, grid: &ExperimentGrid, result: &GridResult) -> Result<()> {
    let mut charts: Vec<(String, Vec<svg::Series>)> = Vec::new();
    for g in &result.aggregates {
        let key = format!(
            "r{}_l{}_t{}_k{}_w{}_p{}_s{}",
            g.r, g.lambda0, g.temporal_overlap, g.k, g.n_words, g.n_particles, g.n_samples
        );
        let pos = match charts.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                charts.push((key, Vec::new()));
                charts.len() - 1
            }
        };
        let series = &mut charts[pos].1;
        let name = g.prior.as_str().to_uppercase();
        let line = match series.iter().position(|s| s.name == name) {
            Some(i) => &mut series[i],
            None => {
                series.push(svg::Series { name, points: Vec::new() });
                series.last_mut().expect("just pushed")
            }
        };
        line.points.push((g.textual_overlap, g.mean_nmi, g.stderr_nmi));
    }
    for (key, series) in charts {
        let title = format!("NMI vs textual overlap ({} events, {key})", grid.n_events);
        let chart = svg::line_chart(&title, "textual overlap", "NMI", &series);
        std::fs::write(dir.join(format!("nmi_{key}.svg")), chart)?;
    }
    Ok(())
}

pub fn cmd_inspect(path: &Path, out: &mut dyn Write) -> Result<()> {
    let path = if path.is_dir() {
        [path.join("report.json"), path.join("aggregate.csv")]
            .into_iter()
            .find(|p| p.exists())
            .ok_or_else(|| Error::data(1, format!("{} holds no fit or grid output", path.display())))?
    } else {
        path.to_path_buf()
    };
    if path.extension().is_some_and(|e| e == "csv") {
        return inspect_grid(&path, out);
    }
    let mut first = String::new();
    BufReader::new(File::open(&path)?).read_line(&mut first)?;
    if first.trim().is_empty() {
        return Err(Error::data(1, format!("{} is empty", path.display())));
    }
    let value: serde_json::Value = if path.extension().is_some_and(|e| e == "jsonl") {
        serde_json::from_str(&first).map_err(|e| Error::data(1, e.to_string()))?
    } else {
        let text = std::fs::read_to_string(&path)?;
        serde_json::from_str(&text).map_err(|e| Error::data(e.line(), e.to_string()))?
    };
    if value.get("clusters_opened").is_some() {
        let report: FitReport = serde_json::from_value(value)?;
        return inspect_report(&report, out);
    }
    if value.get("achieved_temporal_overlap").is_some() {
        let manifest: Manifest = serde_json::from_value(value)?;
        writeln!(
            out,
            "manifest: {} events, V={}, K={}, label counts {:?}",
            manifest.n_events, manifest.spec.vocab_size, manifest.spec.n_clusters, manifest.label_counts
        )?;
        writeln!(
            out,
            "temporal overlap {:.3}, textual overlap {:.3}, spectral radius {:.4}",
            manifest.achieved_temporal_overlap, manifest.achieved_textual_overlap, manifest.spectral_radius
        )?;
        return Ok(());
    }
    if value.get("vocab_size").is_some() {
        let data = load_dataset(&path, TimeUnit::Hours)?;
        return inspect_dataset(&data, out);
    }
    Err(Error::data(1, format!("{} is not a recognised artifact", path.display())))
}

fn inspect_dataset(data: &Dataset, out: &mut dyn Write) -> Result<()> {
    let n = data.events.len();
    match data.labels() {
        Some(labels) => {
            let mut counts = std::collections::BTreeMap::new();
            for l in labels {
                *counts.entry(l).or_insert(0usize) += 1;
            }
            writeln!(out, "{n} events, V={}, K={}", data.header.vocab_size, counts.len())?;
            for (label, c) in counts {
                writeln!(out, "  cluster {label}: {c} events")?;
            }
        }
        None => writeln!(out, "{n} events, V={}, unlabelled", data.header.vocab_size)?,
    }
    if let (Some(first), Some(last)) = (data.events.first(), data.events.last()) {
        writeln!(out, "time span {:.3} to {:.3} h", first.time, last.time)?;
    }
    Ok(())
}

fn inspect_report(r: &FitReport, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "fit: {} events, V={}, prior {}, seed {}",
        r.n_events, r.vocab_size, r.prior, r.seed
    )?;
    writeln!(
        out,
        "{} clusters opened, {} active at end, spectral radius {:.4}",
        r.clusters_opened, r.active_at_end, r.spectral_radius
    )?;
    if let Some(score) = r.nmi {
        writeln!(out, "NMI {score:.4}")?;
    }
    if !r.active_timeline.is_empty() {
        let max = r.active_timeline.iter().max().copied().unwrap_or(0);
        let mean = r.active_timeline.iter().map(|&c| c as f64).sum::<f64>() / r.active_timeline.len() as f64;
        writeln!(out, "active clusters: mean {mean:.2}, max {max}")?;
        let stride = r.active_timeline.len().div_ceil(10);
        let samples: Vec<String> = r
            .active_timeline
            .iter()
            .step_by(stride)
            .map(|c| c.to_string())
            .collect();
        writeln!(out, "timeline (every {stride} events): {}", samples.join(" "))?;
    }
    Ok(())
}

fn inspect_grid(path: &Path, out: &mut dyn Write) -> Result<()> {
    let mut reader = csv::Reader::from_path(path)?;
    let rows: Vec<crate::eval::GridAggregate> = reader.deserialize().collect::<std::result::Result<_, _>>()?;
    writeln!(out, "grid: {} cells", rows.len())?;
    for kind in PriorKind::ALL {
        let cells: Vec<_> = rows.iter().filter(|g| g.prior == kind).collect();
        if cells.is_empty() {
            continue;
        }
        let text: Vec<String> = cells
            .iter()
            .map(|g| format!("{}:{:.3}", g.textual_overlap, g.mean_nmi))
            .collect();
        writeln!(out, "  {}: {}", kind.as_str(), text.join(" "))?;
    }
    Ok(())
}
