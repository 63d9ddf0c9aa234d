//! Numerical-vs-analytic comparison runs.
//!
//! * [`run_fig1`]: K₃, κ = 1, ω/2π = 10 Hz, dt = 1 ms.
//! * [`run_fig2`]: K₂₀₀ as the ring with k = 100, κ = 6/N, closed-form
//!   circulant spectrum.
//! * [`run_fig3`]: time-averaged |r| against κ on a log grid, over several
//!   shared-seed realizations, run on a bounded worker pool.
//! * [`run_fig4`]: Erdős–Rényi (p = 0.2) and Watts–Strogatz (k = 10,
//!   q = 0.1) graphs on 200 nodes, κ = 50/N, Jacobi spectrum.
//!
//! Every comparison feeds one θ(0) to both evaluations.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::{BufRead, Write};
use std::sync::{mpsc, Arc};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    analytic_trajectory, initial_phases, integrate_numerical, wrapped_distance, DynamicsError,
    Integrator, PhaseState, SimulationConfig, Trajectory,
};
use crate::graph::{
    gen_erdos_renyi, gen_ring, gen_watts_strogatz, AdjacencyMatrix, GraphError,
};
use crate::io::fmt_f64;
use crate::spectral::{cdt_eigensystem, eigendecompose_symmetric, EigenSystem, SpectralError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("spectrum: {0}")]
    Spectral(#[from] SpectralError),
    #[error("dynamics: {0}")]
    Dynamics(#[from] DynamicsError),
    #[error("trajectory shapes differ: {0}")]
    Shape(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Agreement between two trajectories sampled at the same times.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub times: Vec<f64>,
    /// Per sample, the largest wrapped distance over nodes.
    pub per_time_deviation: Vec<f64>,
    pub max_wrapped_deviation: f64,
    pub order_param_numerical: Vec<f64>,
    pub order_param_analytic: Vec<f64>,
    /// Mean over samples of `||r_a(t)| − |r_b(t)||`.
    pub mean_abs_order_gap: f64,
}

impl ComparisonReport {
    /// `t,max_dev,abs_r_num,abs_r_ana`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,max_dev,abs_r_num,abs_r_ana")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_f64(self.times[i]),
                fmt_f64(self.per_time_deviation[i]),
                fmt_f64(self.order_param_numerical[i]),
                fmt_f64(self.order_param_analytic[i])
            )?;
        }
        Ok(())
    }
}

/// `a` is reported as the numerical side, `b` as the analytic side.
pub fn compare_trajectories(a: &Trajectory, b: &Trajectory) -> Result<ComparisonReport, ExperimentError> {
    if a.times.len() != b.times.len() || a.states.len() != b.states.len() {
        return Err(ExperimentError::Shape(format!(
            "{} vs {} samples",
            a.times.len(),
            b.times.len()
        )));
    }
    if a.times.iter().zip(&b.times).any(|(x, y)| x != y) {
        return Err(ExperimentError::Shape("sample times differ".into()));
    }
    if a.n() != b.n() || a.states.iter().chain(&b.states).any(|s| s.len() != a.n()) {
        return Err(ExperimentError::Shape(format!("{} vs {} nodes", a.n(), b.n())));
    }
    let per_time_deviation: Vec<f64> = a
        .states
        .iter()
        .zip(&b.states)
        .map(|(sa, sb)| {
            sa.as_slice()
                .iter()
                .zip(sb.as_slice())
                .map(|(&x, &y)| wrapped_distance(x, y))
                .fold(0.0, f64::max)
        })
        .collect();
    let max_wrapped_deviation = per_time_deviation.iter().copied().fold(0.0, f64::max);
    let ra = a.order_parameter_series();
    let rb = b.order_parameter_series();
    let mean_abs_order_gap = if ra.is_empty() {
        0.0
    } else {
        ra.iter().zip(&rb).map(|(x, y)| (x - y).abs()).sum::<f64>() / ra.len() as f64
    };
    Ok(ComparisonReport {
        times: a.times.clone(),
        per_time_deviation,
        max_wrapped_deviation,
        order_param_numerical: ra,
        order_param_analytic: rb,
        mean_abs_order_gap,
    })
}

/// Output of a single shared-seed comparison.
#[derive(Debug, Clone)]
pub struct FigureRun {
    pub config: SimulationConfig,
    pub theta0: PhaseState,
    pub numerical: Trajectory,
    pub analytic: Trajectory,
    pub report: ComparisonReport,
}

impl FigureRun {
    pub fn graph(&self) -> &AdjacencyMatrix {
        &self.config.graph
    }
}

/// Runs both evaluations from `theta0` (or from `cfg.seed` when absent).
pub fn run_comparison(
    cfg: SimulationConfig,
    es: &EigenSystem,
    theta0: Option<PhaseState>,
) -> Result<FigureRun, ExperimentError> {
    let theta0 = theta0.unwrap_or_else(|| initial_phases(cfg.n(), cfg.seed));
    let numerical = integrate_numerical(&cfg, &theta0)?;
    let analytic = analytic_trajectory(es, &cfg, &theta0)?;
    let report = compare_trajectories(&numerical, &analytic)?;
    Ok(FigureRun {
        config: cfg,
        theta0,
        numerical,
        analytic,
        report,
    })
}

/// Closed-form spectrum for circulant graphs, Jacobi otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumChoice {
    Cdt,
    Numerical,
}

pub fn eigensystem_for(graph: &AdjacencyMatrix, choice: SpectrumChoice) -> Result<EigenSystem, ExperimentError> {
    match choice {
        SpectrumChoice::Cdt => {
            let c = graph.generating_vector().ok_or_else(|| {
                ExperimentError::InvalidOption(format!(
                    "closed-form spectrum needs a ring or complete graph, got {}",
                    graph.kind()
                ))
            })?;
            Ok(cdt_eigensystem(&c)?)
        }
        SpectrumChoice::Numerical => Ok(eigendecompose_symmetric(graph)?),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Options {
    pub seed: u64,
    pub t_end: f64,
    pub dt: f64,
    pub kappa: f64,
    pub omega_hz: f64,
    pub integrator: Integrator,
    pub record_every: usize,
    /// Overrides the seeded initial condition.
    pub theta0: Option<PhaseState>,
}

impl Default for Fig1Options {
    fn default() -> Self {
        Fig1Options {
            seed: 0,
            t_end: 1.0,
            dt: 1e-3,
            kappa: 1.0,
            omega_hz: 10.0,
            integrator: Integrator::Euler,
            record_every: 1,
            theta0: None,
        }
    }
}

/// K₃ comparison.
pub fn run_fig1(opts: &Fig1Options) -> Result<FigureRun, ExperimentError> {
    let graph = Arc::new(gen_ring(3, 1)?);
    let es = eigensystem_for(&graph, SpectrumChoice::Cdt)?;
    let mut cfg = SimulationConfig::new(graph, opts.kappa);
    cfg.omega = TAU * opts.omega_hz;
    cfg.dt = opts.dt;
    cfg.t_end = opts.t_end;
    cfg.seed = opts.seed;
    cfg.integrator = opts.integrator;
    cfg.record_every = opts.record_every;
    run_comparison(cfg, &es, opts.theta0.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Options {
    pub seed: u64,
    pub n: usize,
    /// Ring radius; `n / 2` gives the complete graph.
    pub k: usize,
    /// Coupling; defaults to 6/N when absent.
    pub kappa: Option<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub spectrum: SpectrumChoice,
    pub record_every: usize,
}

impl Default for Fig2Options {
    fn default() -> Self {
        Fig2Options {
            seed: 0,
            n: 200,
            k: 100,
            kappa: None,
            dt: 1e-3,
            t_end: 1.0,
            spectrum: SpectrumChoice::Cdt,
            record_every: 1,
        }
    }
}

pub fn run_fig2(opts: &Fig2Options) -> Result<FigureRun, ExperimentError> {
    let graph = Arc::new(gen_ring(opts.n, opts.k)?);
    let es = eigensystem_for(&graph, opts.spectrum)?;
    let kappa = opts.kappa.unwrap_or(6.0 / opts.n as f64);
    let mut cfg = SimulationConfig::new(graph, kappa);
    cfg.dt = opts.dt;
    cfg.t_end = opts.t_end;
    cfg.seed = opts.seed;
    cfg.record_every = opts.record_every;
    run_comparison(cfg, &es, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomGraphVariant {
    Er,
    Ws,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Options {
    pub variant: RandomGraphVariant,
    pub seed: u64,
    pub n: usize,
    /// Erdős–Rényi edge probability.
    pub p: f64,
    /// Watts–Strogatz ring radius.
    pub k: usize,
    /// Watts–Strogatz rewiring probability.
    pub q: f64,
    /// Coupling; defaults to 50/N for both variants.
    pub kappa: Option<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
}

impl Fig4Options {
    pub fn new(variant: RandomGraphVariant) -> Self {
        Fig4Options {
            variant,
            seed: 0,
            n: 200,
            p: 0.2,
            k: 10,
            q: 0.1,
            kappa: None,
            dt: 1e-3,
            t_end: 1.0,
            record_every: 1,
        }
    }
}

/// Random-graph comparison. The graph and θ(0) are drawn from independent
/// streams of the same seed.
pub fn run_fig4(opts: &Fig4Options) -> Result<FigureRun, ExperimentError> {
    let graph = match opts.variant {
        RandomGraphVariant::Er => gen_erdos_renyi(opts.n, opts.p, opts.seed)?,
        RandomGraphVariant::Ws => gen_watts_strogatz(opts.n, opts.k, opts.q, opts.seed)?,
    };
    let graph = Arc::new(graph);
    let es = eigensystem_for(&graph, SpectrumChoice::Numerical)?;
    let kappa = opts.kappa.unwrap_or(50.0 / opts.n as f64);
    let mut cfg = SimulationConfig::new(graph, kappa);
    cfg.dt = opts.dt;
    cfg.t_end = opts.t_end;
    cfg.seed = opts.seed;
    cfg.record_every = opts.record_every;
    run_comparison(cfg, &es, None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub n: usize,
    pub k: usize,
    pub points: usize,
    pub realizations: usize,
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// Realization `r` uses seed `seed + r`.
    pub seed: u64,
    /// Worker threads; 0 means one per available core.
    pub jobs: usize,
    pub dt: f64,
    pub t_end: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            n: 200,
            k: 100,
            points: 100,
            realizations: 10,
            kappa_min: 1e-3,
            kappa_max: 1e1,
            seed: 0,
            jobs: 0,
            dt: 1e-3,
            t_end: 1.0,
        }
    }
}

impl SweepOptions {
    /// Log-spaced coupling grid, endpoints included.
    pub fn kappa_grid(&self) -> Vec<f64> {
        log_space(self.kappa_min, self.kappa_max, self.points)
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.realizations as u64).map(|r| self.seed.wrapping_add(r)).collect()
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.points == 0 || self.realizations == 0 {
            return Err(ExperimentError::InvalidOption(
                "points and realizations must be positive".into(),
            ));
        }
        if !(self.kappa_min > 0.0 && self.kappa_max >= self.kappa_min) {
            return Err(ExperimentError::InvalidOption(format!(
                "need 0 < kappa_min <= kappa_max, got {} and {}",
                self.kappa_min, self.kappa_max
            )));
        }
        Ok(())
    }
}

pub fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64)
            }
        })
        .collect()
}

/// One κ column of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub kappa: f64,
    pub mean_r_num: f64,
    pub std_r_num: f64,
    pub mean_r_ana: f64,
    pub std_r_ana: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kappas: Vec<f64>,
    pub mean_abs_r_numerical: Vec<f64>,
    pub std_numerical: Vec<f64>,
    pub mean_abs_r_analytic: Vec<f64>,
    pub std_analytic: Vec<f64>,
    pub realizations: usize,
    pub seeds: Vec<u64>,
}

pub const SWEEP_HEADER: &str = "kappa,mean_r_num,std_r_num,mean_r_ana,std_r_ana";

impl SweepResult {
    fn from_rows(rows: &[SweepRow], opts: &SweepOptions) -> Self {
        SweepResult {
            kappas: rows.iter().map(|r| r.kappa).collect(),
            mean_abs_r_numerical: rows.iter().map(|r| r.mean_r_num).collect(),
            std_numerical: rows.iter().map(|r| r.std_r_num).collect(),
            mean_abs_r_analytic: rows.iter().map(|r| r.mean_r_ana).collect(),
            std_analytic: rows.iter().map(|r| r.std_r_ana).collect(),
            realizations: opts.realizations,
            seeds: opts.seeds(),
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SWEEP_HEADER}")?;
        for i in 0..self.kappas.len() {
            writeln!(w, "{}", sweep_line(&self.row(i)))?;
        }
        Ok(())
    }

    pub fn row(&self, i: usize) -> SweepRow {
        SweepRow {
            index: i,
            kappa: self.kappas[i],
            mean_r_num: self.mean_abs_r_numerical[i],
            std_r_num: self.std_numerical[i],
            mean_r_ana: self.mean_abs_r_analytic[i],
            std_r_ana: self.std_analytic[i],
        }
    }

    /// Mean over the grid of the absolute gap between the two mean curves.
    pub fn mean_curve_gap(&self) -> f64 {
        let n = self.kappas.len() as f64;
        self.mean_abs_r_numerical
            .iter()
            .zip(&self.mean_abs_r_analytic)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / n
    }
}

pub fn sweep_line(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{}",
        fmt_f64(r.kappa),
        fmt_f64(r.mean_r_num),
        fmt_f64(r.std_r_num),
        fmt_f64(r.mean_r_ana),
        fmt_f64(r.std_r_ana)
    )
}

/// Parses the rows of a (possibly partial) sweep CSV, matching each
/// κ against `grid` by bit pattern. Rows that do not match the grid are
/// reported as an error.
pub fn read_sweep_rows<R: BufRead>(r: R, grid: &[f64]) -> Result<Vec<SweepRow>, ExperimentError> {
    let mut rows = Vec::new();
    let mut lines = r.lines();
    match lines.next().transpose()? {
        Some(h) if h.trim() == SWEEP_HEADER => {}
        Some(h) => return Err(ExperimentError::InvalidOption(format!("unexpected sweep header {h:?}"))),
        None => return Ok(rows),
    }
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| ExperimentError::InvalidOption(format!("bad sweep row {line:?}: {e}")))?;
        if v.len() != 5 {
            return Err(ExperimentError::InvalidOption(format!("bad sweep row {line:?}")));
        }
        let index = grid
            .iter()
            .position(|k| k.to_bits() == v[0].to_bits())
            .ok_or_else(|| ExperimentError::InvalidOption(format!("kappa {} not on the grid", v[0])))?;
        rows.push(SweepRow {
            index,
            kappa: v[0],
            mean_r_num: v[1],
            std_r_num: v[2],
            mean_r_ana: v[3],
            std_r_ana: v[4],
        });
    }
    Ok(rows)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn time_average(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

struct SweepContext {
    graph: Arc<AdjacencyMatrix>,
    es: EigenSystem,
    theta0: Vec<PhaseState>,
    grid: Vec<f64>,
    dt: f64,
    t_end: f64,
}

impl SweepContext {
    fn column(&self, index: usize) -> Result<SweepRow, ExperimentError> {
        let kappa = self.grid[index];
        let mut num = Vec::with_capacity(self.theta0.len());
        let mut ana = Vec::with_capacity(self.theta0.len());
        for th0 in &self.theta0 {
            let mut cfg = SimulationConfig::new(self.graph.clone(), kappa);
            cfg.dt = self.dt;
            cfg.t_end = self.t_end;
            let run = run_comparison(cfg, &self.es, Some(th0.clone()))?;
            num.push(time_average(&run.report.order_param_numerical));
            ana.push(time_average(&run.report.order_param_analytic));
        }
        let (mean_r_num, std_r_num) = mean_std(&num);
        let (mean_r_ana, std_r_ana) = mean_std(&ana);
        Ok(SweepRow {
            index,
            kappa,
            mean_r_num,
            std_r_num,
            mean_r_ana,
            std_r_ana,
        })
    }
}

/// Coupling sweep on the ring graph (complete by default).
pub fn run_fig3(opts: &SweepOptions) -> Result<SweepResult, ExperimentError> {
    run_fig3_with(opts, &[], |_| Ok(()))
}

/// Sweep that skips the κ columns in `completed` and hands every newly
/// finished column to `on_row` in grid order, as soon as all earlier
/// columns are available. Tasks run on a pool of `opts.jobs` threads; the
/// merged result does not depend on completion order.
pub fn run_fig3_with<F>(
    opts: &SweepOptions,
    completed: &[SweepRow],
    mut on_row: F,
) -> Result<SweepResult, ExperimentError>
where
    F: FnMut(&SweepRow) -> Result<(), ExperimentError>,
{
    opts.validate()?;
    let graph = Arc::new(gen_ring(opts.n, opts.k)?);
    let es = eigensystem_for(&graph, SpectrumChoice::Cdt)?;
    let ctx = SweepContext {
        theta0: opts.seeds().iter().map(|&s| initial_phases(opts.n, s)).collect(),
        graph,
        es,
        grid: opts.kappa_grid(),
        dt: opts.dt,
        t_end: opts.t_end,
    };

    let mut rows: BTreeMap<usize, SweepRow> = completed.iter().map(|r| (r.index, r.clone())).collect();
    let todo: Vec<usize> = (0..ctx.grid.len()).filter(|i| !rows.contains_key(i)).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| ExperimentError::InvalidOption(format!("worker pool: {e}")))?;

    let (tx, rx) = mpsc::channel::<Result<SweepRow, ExperimentError>>();
    let mut first_error = None;
    std::thread::scope(|scope| {
        let ctx = &ctx;
        let todo = &todo;
        scope.spawn(move || {
            pool.install(|| {
                todo.par_iter().for_each_with(tx, |tx, &idx| {
                    let _ = tx.send(ctx.column(idx));
                });
            });
        });

        let mut pending = BTreeMap::new();
        let mut next = todo.iter().peekable();
        for msg in rx {
            match msg {
                Ok(row) => {
                    pending.insert(row.index, row);
                }
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
            while let Some(&&idx) = next.peek() {
                let Some(row) = pending.remove(&idx) else { break };
                next.next();
                if first_error.is_none() {
                    if let Err(e) = on_row(&row) {
                        first_error = Some(e);
                    }
                }
                rows.insert(idx, row);
            }
        }
    });
    if let Some(e) = first_error {
        return Err(e);
    }
    let rows: Vec<SweepRow> = rows.into_values().collect();
    Ok(SweepResult::from_rows(&rows, opts))
}
