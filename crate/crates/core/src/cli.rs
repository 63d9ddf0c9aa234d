//! Command-line front end: `graph`, `simulate`, `spectrum`, `figure`, and
//! `replay` (re-run a command from its manifest).
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 for runtime failures.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::dynamics::{
    analytic_trajectory, initial_phases, integrate_numerical, DynamicsError, Integrator,
    SimulationConfig, Trajectory,
};
use crate::experiments::{
    eigensystem_for, read_sweep_rows, run_fig1, run_fig2, run_fig3_with, run_fig4,
    sweep_line, ExperimentError, Fig1Options, Fig2Options, Fig4Options, FigureRun,
    RandomGraphVariant, SpectrumChoice, SweepOptions, SWEEP_HEADER,
};
use crate::graph::{
    gen_complete, gen_erdos_renyi, gen_ring, gen_watts_strogatz, AdjacencyMatrix, GraphError,
    GraphKind,
};
use crate::io::{fmt_f64, write_pgm, write_trajectory_csv};
use crate::spectral::{OverflowGuard, SpectralError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "kuramoto", version, about = "Kuramoto model: numerical and closed-form spectral evaluation")]
pub struct Cli {
    /// RNG seed for graphs and initial phases.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Graph(GraphCmd),
    /// Simulate one trajectory, numerically or in closed form.
    Simulate(SimulateCmd),
    /// Adjacency eigenvalues, closed-form and/or numerical.
    Spectrum(SpectrumCmd),
    /// Reproduce one of the comparison experiments.
    Figure(FigureCmd),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Ring,
    Complete,
    Er,
    Ws,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphSource {
    Ring,
    Complete,
    Er,
    Ws,
    File,
}

#[derive(Debug, Clone, Args)]
pub struct GenParams {
    #[arg(long)]
    pub n: Option<usize>,
    /// Ring radius (ring, ws).
    #[arg(long)]
    pub k: Option<usize>,
    /// Edge probability (er).
    #[arg(long)]
    pub p: Option<f64>,
    /// Rewiring probability (ws).
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GraphCmd {
    pub generator: Generator,
    #[command(flatten)]
    pub params: GenParams,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[arg(long = "graph", value_enum)]
    pub source: GraphSource,
    #[command(flatten)]
    pub params: GenParams,
    /// Edge-list file, with `--graph file`.
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct Coupling {
    /// Coupling strength κ (1/s).
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Coupling given as κ·N.
    #[arg(long)]
    pub kappa_over_n: Option<f64>,
}

impl Coupling {
    fn resolve(&self, n: usize) -> Option<f64> {
        self.kappa.or(self.kappa_over_n.map(|c| c / n as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Numerical,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Euler,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumArg {
    Auto,
    Cdt,
    Numerical,
}

#[derive(Debug, Args)]
pub struct SimulateCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub coupling: Coupling,
    /// Intrinsic frequency in Hz (ω = 2π·f).
    #[arg(long, default_value_t = 0.0)]
    pub omega_hz: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, value_enum, default_value_t = Method::Numerical)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = IntegratorArg::Euler)]
    pub integrator: IntegratorArg,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    /// Eigensystem for the analytic method; `auto` uses the closed form on
    /// ring and complete graphs.
    #[arg(long, value_enum, default_value_t = SpectrumArg::Auto)]
    pub spectrum: SpectrumArg,
    /// Disable overflow rescaling in the analytic method.
    #[arg(long)]
    pub no_guard: bool,
    /// Also write a grayscale PGM raster.
    #[arg(long)]
    pub raster: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumMode {
    Cdt,
    Numerical,
    Both,
}

#[derive(Debug, Args)]
pub struct SpectrumCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = SpectrumMode::Numerical)]
    pub mode: SpectrumMode,
    /// Also export eigenvectors.
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Er,
    Ws,
}

#[derive(Debug, Args)]
pub struct FigureCmd {
    /// Figure number, 1 to 4.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
    pub id: u8,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub coupling: Coupling,
    /// Random-graph variant for figure 4.
    #[arg(long, value_enum, default_value_t = VariantArg::Er)]
    pub variant: VariantArg,
    /// Number of κ grid points for figure 3.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Realizations per κ for figure 3.
    #[arg(long, default_value_t = 10)]
    pub realizations: usize,
    /// Full 1000-point κ grid for figure 3.
    #[arg(long)]
    pub full: bool,
    /// Continue a partial figure 3 sweep file in the output directory.
    #[arg(long)]
    pub resume: bool,
    /// Spectrum for figure 2.
    #[arg(long, value_enum, default_value_t = SpectrumArg::Cdt)]
    pub spectrum: SpectrumArg,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
}

#[derive(Debug, Args)]
pub struct ReplayCmd {
    pub manifest: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{stage} failed: {msg}")]
    Runtime { stage: &'static str, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime { .. } => 3,
        }
    }

    fn io(e: std::io::Error) -> Self {
        CliError::Runtime {
            stage: "output",
            msg: e.to_string(),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Runtime {
                stage: "graph",
                msg: other.to_string(),
            },
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        let stage = match e {
            SpectralError::Overflow { .. } => "propagator",
            _ => "eigensolver",
        };
        CliError::Runtime {
            stage,
            msg: e.to_string(),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::InvalidConfig(m) => CliError::Usage(m),
            DynamicsError::Spectral(s) => s.into(),
            other => CliError::Runtime {
                stage: "integration",
                msg: other.to_string(),
            },
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Graph(g) => g.into(),
            ExperimentError::Spectral(s) => s.into(),
            ExperimentError::Dynamics(d) => d.into(),
            ExperimentError::InvalidOption(m) => CliError::Usage(m),
            ExperimentError::Io(e) => CliError::io(e),
            ExperimentError::Shape(m) => CliError::Runtime {
                stage: "comparison",
                msg: m,
            },
        }
    }
}

/// Record of one invocation; re-readable by `replay`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub artifacts: Vec<PathBuf>,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read manifest {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid manifest {}: {e}", path.display())))
    }
}

/// Collects written artifact paths.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: PathBuf) -> Result<Self, CliError> {
        fs::create_dir_all(&dir).map_err(CliError::io)?;
        Ok(Outputs {
            dir,
            written: Vec::new(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn write<F>(&mut self, name: &str, f: F) -> Result<PathBuf, CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    {
        let path = self.path(name);
        let mut w = BufWriter::new(File::create(&path).map_err(CliError::io)?);
        f(&mut w).and_then(|_| w.flush()).map_err(CliError::io)?;
        self.record(path.clone());
        Ok(path)
    }

    fn record(&mut self, path: PathBuf) {
        if !self.written.contains(&path) {
            self.written.push(path);
        }
    }
}

struct Outcome {
    parameters: serde_json::Value,
    seeds: Vec<u64>,
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<(), CliError> {
    if let Command::Replay(r) = &cli.command {
        let manifest = RunManifest::read(&r.manifest)?;
        let mut full = vec!["kuramoto".to_string()];
        full.extend(manifest.argv.iter().cloned());
        let mut inner = Cli::try_parse_from(&full)
            .map_err(|e| CliError::Usage(format!("manifest arguments do not parse: {e}")))?;
        if matches!(inner.command, Command::Replay(_)) {
            return Err(CliError::Usage("manifest records another replay".into()));
        }
        if cli.out.is_some() {
            inner.out = cli.out.clone();
        }
        return execute(inner, manifest.argv);
    }

    let started = Instant::now();
    let mut out = Outputs::new(cli.out.clone().unwrap_or_else(|| PathBuf::from(".")))?;
    let (name, outcome) = match &cli.command {
        Command::Graph(c) => ("graph", cmd_graph(c, &cli, &mut out)?),
        Command::Simulate(c) => ("simulate", cmd_simulate(c, &cli, &mut out)?),
        Command::Spectrum(c) => ("spectrum", cmd_spectrum(c, &cli, &mut out)?),
        Command::Figure(c) => ("figure", cmd_figure(c, &cli, &mut out)?),
        Command::Replay(_) => unreachable!(),
    };
    let manifest_name = match &cli.command {
        Command::Figure(c) => format!("figure{}.manifest.json", c.id),
        Command::Simulate(c) => match c.method {
            Method::Numerical => "simulate_numerical.manifest.json".to_string(),
            Method::Analytic => "simulate_analytic.manifest.json".to_string(),
        },
        _ => format!("{name}.manifest.json"),
    };
    let manifest = RunManifest {
        command: name.to_string(),
        argv,
        parameters: outcome.parameters,
        seeds: outcome.seeds,
        artifacts: out.written.clone(),
        tool_version: VERSION.to_string(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let path = out.path(&manifest_name);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(CliError::io)?;
    for p in &manifest.artifacts {
        println!("wrote {}", p.display());
    }
    println!("manifest {}", path.display());
    Ok(())
}

fn require<T>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {what}")))
}

fn build_graph(gen: Generator, p: &GenParams, seed: u64) -> Result<AdjacencyMatrix, CliError> {
    let n = require(p.n, "n", "graph generation")?;
    Ok(match gen {
        Generator::Ring => gen_ring(n, require(p.k, "k", "ring graphs")?)?,
        Generator::Complete => gen_complete(n)?,
        Generator::Er => gen_erdos_renyi(n, require(p.p, "p", "Erdős–Rényi graphs")?, seed)?,
        Generator::Ws => gen_watts_strogatz(
            n,
            require(p.k, "k", "Watts–Strogatz graphs")?,
            require(p.q, "q", "Watts–Strogatz graphs")?,
            seed,
        )?,
    })
}

fn load_graph(g: &GraphArgs, seed: u64) -> Result<AdjacencyMatrix, CliError> {
    let gen = match g.source {
        GraphSource::File => {
            let path = require(g.edges.as_ref(), "edges", "--graph file")?;
            let f = File::open(path)
                .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
            return AdjacencyMatrix::read_edge_list(BufReader::new(f)).map_err(|e| match e {
                GraphError::Io(m) => CliError::Runtime { stage: "graph", msg: m },
                other => CliError::Usage(other.to_string()),
            });
        }
        GraphSource::Ring => Generator::Ring,
        GraphSource::Complete => Generator::Complete,
        GraphSource::Er => Generator::Er,
        GraphSource::Ws => Generator::Ws,
    };
    build_graph(gen, &g.params, seed)
}

fn graph_summary(a: &AdjacencyMatrix) -> serde_json::Value {
    json!({
        "kind": a.kind(),
        "n": a.n(),
        "edges": a.edge_count(),
        "params": a.params(),
    })
}

fn cmd_graph(c: &GraphCmd, cli: &Cli, out: &mut Outputs) -> Result<Outcome, CliError> {
    let a = build_graph(c.generator, &c.params, cli.seed)?;
    out.write("graph.edges", |w| {
        a.write_edge_list(w).map_err(|e| std::io::Error::other(e.to_string()))
    })?;
    println!("nodes {} edges {}", a.n(), a.edge_count());
    let seeds = match a.kind() {
        GraphKind::ErdosRenyi | GraphKind::WattsStrogatz => vec![cli.seed],
        _ => vec![],
    };
    Ok(Outcome {
        parameters: graph_summary(&a),
        seeds,
    })
}

fn spectrum_choice(arg: SpectrumArg, graph: &AdjacencyMatrix) -> SpectrumChoice {
    match arg {
        SpectrumArg::Cdt => SpectrumChoice::Cdt,
        SpectrumArg::Numerical => SpectrumChoice::Numerical,
        SpectrumArg::Auto if graph.generating_vector().is_some() => SpectrumChoice::Cdt,
        SpectrumArg::Auto => SpectrumChoice::Numerical,
    }
}

/// Sidecar describing how a trajectory was produced.
fn config_record(cfg: &SimulationConfig, method: &str, spectrum: Option<SpectrumChoice>) -> serde_json::Value {
    json!({
        "graph": graph_summary(&cfg.graph),
        "kappa": cfg.kappa,
        "gamma": cfg.gamma(),
        "omega": cfg.omega,
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "seed": cfg.seed,
        "integrator": cfg.integrator,
        "record_every": cfg.record_every,
        "overflow_guard": cfg.overflow_guard,
        "method": method,
        "spectrum": spectrum,
    })
}

fn write_trajectory(
    out: &mut Outputs,
    base: &str,
    traj: &Trajectory,
    meta: &serde_json::Value,
    raster: bool,
) -> Result<(), CliError> {
    out.write(&format!("{base}.csv"), |w| write_trajectory_csv(traj, w))?;
    out.write(&format!("{base}.meta"), |w| {
        serde_json::to_writer_pretty(&mut *w, meta)?;
        writeln!(w)
    })?;
    if raster {
        out.write(&format!("{base}.pgm"), |w| write_pgm(traj, w))?;
    }
    Ok(())
}

fn cmd_simulate(c: &SimulateCmd, cli: &Cli, out: &mut Outputs) -> Result<Outcome, CliError> {
    let graph = Arc::new(load_graph(&c.graph, cli.seed)?);
    let kappa = c.coupling.resolve(graph.n()).unwrap_or(1.0);
    let mut cfg = SimulationConfig::new(graph.clone(), kappa);
    cfg.omega = std::f64::consts::TAU * c.omega_hz;
    cfg.dt = c.dt;
    cfg.t_end = c.t_end;
    cfg.seed = cli.seed;
    cfg.integrator = match c.integrator {
        IntegratorArg::Euler => Integrator::Euler,
        IntegratorArg::Rk4 => Integrator::Rk4,
    };
    cfg.record_every = c.record_every;
    cfg.overflow_guard = if c.no_guard { OverflowGuard::Off } else { OverflowGuard::On };
    cfg.validate()?;

    let theta0 = initial_phases(graph.n(), cli.seed);
    let (traj, method, spectrum) = match c.method {
        Method::Numerical => (integrate_numerical(&cfg, &theta0)?, "numerical", None),
        Method::Analytic => {
            let choice = spectrum_choice(c.spectrum, &graph);
            let es = eigensystem_for(&graph, choice)?;
            (analytic_trajectory(&es, &cfg, &theta0)?, "analytic", Some(choice))
        }
    };
    let meta = config_record(&cfg, method, spectrum);
    write_trajectory(out, &format!("trajectory_{method}"), &traj, &meta, c.raster)?;
    println!("samples {} final_abs_r {}", traj.times.len(), fmt_f64(traj.order_parameter_series().last().copied().unwrap_or(0.0)));
    Ok(Outcome {
        parameters: meta,
        seeds: vec![cli.seed],
    })
}

fn cmd_spectrum(c: &SpectrumCmd, cli: &Cli, out: &mut Outputs) -> Result<Outcome, CliError> {
    let graph = load_graph(&c.graph, cli.seed)?;
    if matches!(c.mode, SpectrumMode::Cdt | SpectrumMode::Both) && graph.generating_vector().is_none() {
        return Err(CliError::Usage(format!(
            "--mode cdt needs a circulant (ring or complete) graph, got {}",
            graph.kind()
        )));
    }
    let mut systems = Vec::new();
    if matches!(c.mode, SpectrumMode::Cdt | SpectrumMode::Both) {
        systems.push(("cdt", eigensystem_for(&graph, SpectrumChoice::Cdt)?));
    }
    if matches!(c.mode, SpectrumMode::Numerical | SpectrumMode::Both) {
        systems.push(("numerical", eigensystem_for(&graph, SpectrumChoice::Numerical)?));
    }
    for (label, es) in &systems {
        out.write(&format!("spectrum_{label}.csv"), |w| es.write_csv(w))?;
        if c.vectors {
            out.write(&format!("eigenvectors_{label}.csv"), |w| es.write_eigenvectors_csv(w))?;
        }
        let sum: f64 = es.eigenvalues.iter().map(|l| l.re).sum();
        println!("{label}: lambda_max {} eigenvalue_sum {}", fmt_f64(es.lambda_max()), fmt_f64(sum));
    }
    let mut params = json!({ "graph": graph_summary(&graph), "mode": format!("{:?}", c.mode).to_lowercase() });
    if let [(_, a), (_, b)] = &systems[..] {
        let gap = a
            .sorted_eigenvalues()
            .iter()
            .zip(b.sorted_eigenvalues())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        println!("max_gap {}", fmt_f64(gap));
        params["max_gap"] = json!(gap);
    }
    let seeds = match graph.kind() {
        GraphKind::ErdosRenyi | GraphKind::WattsStrogatz => vec![cli.seed],
        _ => vec![],
    };
    Ok(Outcome { parameters: params, seeds })
}

fn write_figure_run(out: &mut Outputs, prefix: &str, run: &FigureRun, raster: bool) -> Result<(), CliError> {
    let num_meta = config_record(&run.config, "numerical", None);
    let ana_meta = config_record(&run.config, "analytic", None);
    write_trajectory(out, &format!("{prefix}_numerical"), &run.numerical, &num_meta, raster)?;
    write_trajectory(out, &format!("{prefix}_analytic"), &run.analytic, &ana_meta, raster)?;
    out.write(&format!("{prefix}_report.csv"), |w| run.report.write_csv(w))?;
    println!(
        "max_wrapped_deviation {} mean_abs_order_gap {} final_abs_r_numerical {} final_abs_r_analytic {}",
        fmt_f64(run.report.max_wrapped_deviation),
        fmt_f64(run.report.mean_abs_order_gap),
        fmt_f64(*run.report.order_param_numerical.last().unwrap_or(&0.0)),
        fmt_f64(*run.report.order_param_analytic.last().unwrap_or(&0.0)),
    );
    Ok(())
}

fn run_summary(run: &FigureRun) -> serde_json::Value {
    json!({
        "config": config_record(&run.config, "comparison", None),
        "max_wrapped_deviation": run.report.max_wrapped_deviation,
        "mean_abs_order_gap": run.report.mean_abs_order_gap,
    })
}

fn cmd_figure(c: &FigureCmd, cli: &Cli, out: &mut Outputs) -> Result<Outcome, CliError> {
    match c.id {
        1 => {
            let d = Fig1Options::default();
            let opts = Fig1Options {
                seed: cli.seed,
                t_end: c.t_end.unwrap_or(d.t_end),
                dt: c.dt.unwrap_or(d.dt),
                kappa: c.coupling.resolve(3).unwrap_or(d.kappa),
                record_every: c.record_every,
                ..d
            };
            let run = run_fig1(&opts)?;
            write_figure_run(out, "fig1", &run, false)?;
            Ok(Outcome {
                parameters: run_summary(&run),
                seeds: vec![cli.seed],
            })
        }
        2 => {
            let d = Fig2Options::default();
            let graph_stub = gen_ring(d.n, d.k)?;
            let opts = Fig2Options {
                seed: cli.seed,
                kappa: c.coupling.resolve(d.n),
                dt: c.dt.unwrap_or(d.dt),
                t_end: c.t_end.unwrap_or(d.t_end),
                spectrum: spectrum_choice(c.spectrum, &graph_stub),
                record_every: c.record_every,
                ..d
            };
            let run = run_fig2(&opts)?;
            write_figure_run(out, "fig2", &run, true)?;
            Ok(Outcome {
                parameters: run_summary(&run),
                seeds: vec![cli.seed],
            })
        }
        3 => cmd_sweep(c, cli, out),
        4 => {
            let variant = match c.variant {
                VariantArg::Er => RandomGraphVariant::Er,
                VariantArg::Ws => RandomGraphVariant::Ws,
            };
            let d = Fig4Options::new(variant);
            let opts = Fig4Options {
                seed: cli.seed,
                kappa: c.coupling.resolve(d.n),
                dt: c.dt.unwrap_or(d.dt),
                t_end: c.t_end.unwrap_or(d.t_end),
                record_every: c.record_every,
                ..d
            };
            let run = run_fig4(&opts)?;
            let prefix = match variant {
                RandomGraphVariant::Er => "fig4_er",
                RandomGraphVariant::Ws => "fig4_ws",
            };
            out.write(&format!("{prefix}.edges"), |w| {
                run.graph()
                    .write_edge_list(w)
                    .map_err(|e| std::io::Error::other(e.to_string()))
            })?;
            write_figure_run(out, prefix, &run, true)?;
            Ok(Outcome {
                parameters: run_summary(&run),
                seeds: vec![cli.seed],
            })
        }
        _ => unreachable!("clap restricts the figure id"),
    }
}

fn cmd_sweep(c: &FigureCmd, cli: &Cli, out: &mut Outputs) -> Result<Outcome, CliError> {
    let d = SweepOptions::default();
    let opts = SweepOptions {
        points: if c.full { 1000 } else { c.points },
        realizations: c.realizations,
        seed: cli.seed,
        jobs: cli.jobs,
        dt: c.dt.unwrap_or(d.dt),
        t_end: c.t_end.unwrap_or(d.t_end),
        ..d
    };
    let path = out.path("fig3_sweep.csv");
    let grid = opts.kappa_grid();
    let completed = if c.resume && path.exists() {
        let f = File::open(&path).map_err(CliError::io)?;
        read_sweep_rows(BufReader::new(f), &grid)?
    } else {
        Vec::new()
    };
    if completed.iter().enumerate().any(|(i, r)| r.index != i) {
        return Err(CliError::Usage(format!(
            "{} is not a prefix of this sweep's grid",
            path.display()
        )));
    }

    // Rewrite the completed prefix, then append rows as they are finalized.
    let mut w = BufWriter::new(File::create(&path).map_err(CliError::io)?);
    writeln!(w, "{SWEEP_HEADER}").map_err(CliError::io)?;
    for r in &completed {
        writeln!(w, "{}", sweep_line(r)).map_err(CliError::io)?;
    }
    w.flush().map_err(CliError::io)?;
    out.record(path.clone());

    let result = run_fig3_with(&opts, &completed, |row| {
        writeln!(w, "{}", sweep_line(row))?;
        w.flush()?;
        Ok(())
    })?;
    w.flush().map_err(CliError::io)?;

    let last = result.kappas.len() - 1;
    println!(
        "points {} realizations {} mean_r_num[first] {} mean_r_num[last] {} mean_curve_gap {}",
        result.kappas.len(),
        result.realizations,
        fmt_f64(result.mean_abs_r_numerical[0]),
        fmt_f64(result.mean_abs_r_numerical[last]),
        fmt_f64(result.mean_curve_gap()),
    );
    Ok(Outcome {
        parameters: json!({
            "n": opts.n,
            "k": opts.k,
            "points": opts.points,
            "realizations": opts.realizations,
            "kappa_min": opts.kappa_min,
            "kappa_max": opts.kappa_max,
            "dt": opts.dt,
            "t_end": opts.t_end,
            "mean_curve_gap": result.mean_curve_gap(),
        }),
        seeds: result.seeds,
    })
}
