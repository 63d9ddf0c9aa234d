//! Kuramoto dynamics, numerically and in closed form.
//!
//! The numerical path integrates
//!
//! ```text
//! dθ_i/dt = ω + κ Σ_j a_ij sin(θ_j − θ_i)
//! ```
//!
//! with fixed-step Euler or classical RK4. The analytic path evaluates the
//! linear complex system `dx/dt = γ A x`, `x = e^{iθ}`, `γ = 2κ/π`, in the
//! frame rotating at `ω`, and reads the phase off as `arg x_i(t) + ω t`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::AdjacencyMatrix;
use crate::rng::{self, Purpose};
use crate::spectral::{EigenSystem, OverflowGuard, SpectralError};

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("non-finite phase value {0}")]
    NonFinitePhase(f64),
    #[error("non-finite state at step {step}")]
    NonFiniteState { step: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Wraps a finite angle into (−π, π]; −π maps to π.
pub fn wrap_phase(x: f64) -> Result<f64, DynamicsError> {
    if !x.is_finite() {
        return Err(DynamicsError::NonFinitePhase(x));
    }
    Ok(wrap(x))
}

#[inline]
fn wrap(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Geodesic distance on the circle, in [0, π].
#[inline]
pub fn wrapped_distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Phases wrapped to (−π, π].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState(Vec<f64>);

impl PhaseState {
    pub fn new(theta: Vec<f64>) -> Result<Self, DynamicsError> {
        theta
            .into_iter()
            .map(wrap_phase)
            .collect::<Result<Vec<_>, _>>()
            .map(PhaseState)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// `x = e^{iθ}`.
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(|&th| Complex64::from_polar(1.0, th)).collect()
    }
}

/// i.i.d. uniform phases on (−π, π].
pub fn initial_phases(n: usize, seed: u64) -> PhaseState {
    let mut rng = rng::stream(seed, Purpose::InitialPhases);
    // gen::<f64>() lies in [0, 1); reflecting gives (−π, π].
    PhaseState(
        (0..n)
            .map(|_| PI - TAU * rng.gen::<f64>())
            .collect(),
    )
}

/// `(1/N) Σ_j e^{iθ_j}`.
pub fn order_parameter(theta: &[f64]) -> Complex64 {
    let n = theta.len() as f64;
    theta
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &th| acc + Complex64::from_polar(1.0, th))
        / n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    Rk4,
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub graph: Arc<AdjacencyMatrix>,
    /// Coupling strength κ (1/s).
    pub kappa: f64,
    /// Homogeneous intrinsic angular frequency ω (rad/s).
    pub omega: f64,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub integrator: Integrator,
    /// Steps between recorded samples; the final step is always recorded.
    pub record_every: usize,
    pub overflow_guard: OverflowGuard,
}

impl SimulationConfig {
    /// Defaults: ω = 0, dt = 1 ms, 1 s, seed 0, Euler, every step recorded,
    /// overflow guard on.
    pub fn new(graph: Arc<AdjacencyMatrix>, kappa: f64) -> Self {
        SimulationConfig {
            graph,
            kappa,
            omega: 0.0,
            dt: 1e-3,
            t_end: 1.0,
            seed: 0,
            integrator: Integrator::Euler,
            record_every: 1,
            overflow_guard: OverflowGuard::On,
        }
    }

    /// `γ = 2κ/π`.
    pub fn gamma(&self) -> f64 {
        2.0 * self.kappa / PI
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |m: String| Err(DynamicsError::InvalidConfig(m));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        if !self.kappa.is_finite() {
            return bad(format!("kappa must be finite, got {}", self.kappa));
        }
        if !self.omega.is_finite() {
            return bad(format!("omega must be finite, got {}", self.omega));
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        let steps = (self.t_end / self.dt).round();
        if (steps * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) {
            return bad(format!(
                "t_end = {} is not a whole number of dt = {} steps",
                self.t_end, self.dt
            ));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Step indices at which a snapshot is recorded.
    pub fn sample_steps(&self) -> Vec<usize> {
        let steps = self.steps();
        let mut idx: Vec<usize> = (0..=steps).step_by(self.record_every).collect();
        if idx.last() != Some(&steps) {
            idx.push(steps);
        }
        idx
    }

    pub fn sample_times(&self) -> Vec<f64> {
        self.sample_steps()
            .into_iter()
            .map(|s| s as f64 * self.dt)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectorySource {
    Numerical,
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub source: TrajectorySource,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.states.first().map_or(0, PhaseState::len)
    }

    /// `|r(t)|` at each sample.
    pub fn order_parameter_series(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| order_parameter(s.as_slice()).norm())
            .collect()
    }

    pub fn final_state(&self) -> &PhaseState {
        self.states.last().expect("trajectory has at least one sample")
    }
}

/// Right-hand side evaluator with precomputed neighbour sums.
struct KuramotoField {
    neighbors: Vec<Vec<usize>>,
    complete: bool,
    kappa: f64,
    omega: f64,
    sin: Vec<f64>,
    cos: Vec<f64>,
}

impl KuramotoField {
    fn new(cfg: &SimulationConfig) -> Self {
        let g = &cfg.graph;
        let n = g.n();
        let complete = (0..n).all(|i| g.degree(i) == n - 1);
        KuramotoField {
            neighbors: if complete { Vec::new() } else { g.neighbors() },
            complete,
            kappa: cfg.kappa,
            omega: cfg.omega,
            sin: vec![0.0; n],
            cos: vec![0.0; n],
        }
    }

    /// Uses `sin(θ_j − θ_i) = sin θ_j cos θ_i − cos θ_j sin θ_i` so each
    /// step costs O(n) trigonometric calls plus neighbour sums.
    fn eval(&mut self, theta: &[f64], out: &mut [f64]) {
        for (i, &th) in theta.iter().enumerate() {
            let (s, c) = th.sin_cos();
            self.sin[i] = s;
            self.cos[i] = c;
        }
        let (sum_s, sum_c) = if self.complete {
            (self.sin.iter().sum::<f64>(), self.cos.iter().sum::<f64>())
        } else {
            (0.0, 0.0)
        };
        for i in 0..theta.len() {
            let (ns, nc) = if self.complete {
                (sum_s - self.sin[i], sum_c - self.cos[i])
            } else {
                self.neighbors[i].iter().fold((0.0, 0.0), |(a, b), &j| {
                    (a + self.sin[j], b + self.cos[j])
                })
            };
            out[i] = self.omega + self.kappa * (self.cos[i] * ns - self.sin[i] * nc);
        }
    }
}

/// `ω + κ Σ_j a_ij sin(θ_j − θ_i)` for each node.
pub fn km_rhs(theta: &PhaseState, cfg: &SimulationConfig) -> Result<Vec<f64>, DynamicsError> {
    check_len(cfg.n(), theta.len())?;
    let mut out = vec![0.0; theta.len()];
    KuramotoField::new(cfg).eval(theta.as_slice(), &mut out);
    Ok(out)
}

fn check_len(expected: usize, got: usize) -> Result<(), DynamicsError> {
    if expected != got {
        return Err(DynamicsError::Dimension { expected, got });
    }
    Ok(())
}

fn snapshot(theta: &[f64]) -> PhaseState {
    PhaseState(theta.iter().map(|&t| wrap(t)).collect())
}

/// Fixed-step integration. The internal state stays unwrapped; snapshots
/// are wrapped when recorded.
pub fn integrate_numerical(
    cfg: &SimulationConfig,
    theta0: &PhaseState,
) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    check_len(cfg.n(), theta0.len())?;
    let n = theta0.len();
    let dt = cfg.dt;
    let mut field = KuramotoField::new(cfg);
    let mut theta = theta0.as_slice().to_vec();
    let sample_steps = cfg.sample_steps();

    let mut times = Vec::with_capacity(sample_steps.len());
    let mut states = Vec::with_capacity(sample_steps.len());
    let mut next_sample = sample_steps.iter().peekable();

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    for step in 0..=cfg.steps() {
        if next_sample.peek() == Some(&&step) {
            next_sample.next();
            times.push(step as f64 * dt);
            states.push(snapshot(&theta));
        }
        if step == cfg.steps() {
            break;
        }
        match cfg.integrator {
            Integrator::Euler => {
                field.eval(&theta, &mut k1);
                for (th, d) in theta.iter_mut().zip(&k1) {
                    *th += dt * d;
                }
            }
            Integrator::Rk4 => {
                field.eval(&theta, &mut k1);
                for i in 0..n {
                    tmp[i] = theta[i] + 0.5 * dt * k1[i];
                }
                field.eval(&tmp, &mut k2);
                for i in 0..n {
                    tmp[i] = theta[i] + 0.5 * dt * k2[i];
                }
                field.eval(&tmp, &mut k3);
                for i in 0..n {
                    tmp[i] = theta[i] + dt * k3[i];
                }
                field.eval(&tmp, &mut k4);
                for i in 0..n {
                    theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(DynamicsError::NonFiniteState { step: step + 1 });
        }
    }

    Ok(Trajectory {
        times,
        states,
        source: TrajectorySource::Numerical,
    })
}

/// Closed-form trajectory on the configuration's sample grid.
pub fn analytic_trajectory(
    es: &EigenSystem,
    cfg: &SimulationConfig,
    theta0: &PhaseState,
) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    analytic_at_times(es, cfg, theta0, &cfg.sample_times())
}

/// Closed-form phases at arbitrary (increasing) times; each time is
/// evaluated directly, without stepping.
pub fn analytic_at_times(
    es: &EigenSystem,
    cfg: &SimulationConfig,
    theta0: &PhaseState,
    times: &[f64],
) -> Result<Trajectory, DynamicsError> {
    check_len(cfg.n(), theta0.len())?;
    check_len(cfg.n(), es.n())?;
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(DynamicsError::InvalidConfig("sample times must be strictly increasing".into()));
    }
    let modal = es.modal(&theta0.to_complex())?;
    let gamma = cfg.gamma();
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        if t == 0.0 {
            states.push(theta0.clone());
            continue;
        }
        let x = modal.at(gamma, t, cfg.overflow_guard)?;
        let rot = cfg.omega * t;
        states.push(PhaseState(x.iter().map(|v| wrap(v.arg() + rot)).collect()));
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        source: TrajectorySource::Analytic,
    })
}

/// Imaginary part of the complex phase, `θ_im = −ln|x_i(t)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitudes {
    /// `+∞` where `|x_i| = 0`.
    pub theta_im: Vec<f64>,
    /// With the guard on, values are relative to the dominant mode, i.e.
    /// shifted by `+shift` compared to the raw solution.
    pub guard: OverflowGuard,
    pub shift: f64,
}

pub fn analytic_amplitudes(
    es: &EigenSystem,
    cfg: &SimulationConfig,
    theta0: &PhaseState,
    t: f64,
) -> Result<Amplitudes, DynamicsError> {
    check_len(cfg.n(), theta0.len())?;
    check_len(cfg.n(), es.n())?;
    let modal = es.modal(&theta0.to_complex())?;
    let gamma = cfg.gamma();
    let x = modal.at(gamma, t, cfg.overflow_guard)?;
    let shift = match cfg.overflow_guard {
        OverflowGuard::On => modal.guard_shift(gamma, t),
        OverflowGuard::Off => 0.0,
    };
    Ok(Amplitudes {
        theta_im: x
            .iter()
            .map(|v| {
                let m = v.norm();
                if m == 0.0 {
                    f64::INFINITY
                } else {
                    -m.ln()
                }
            })
            .collect(),
        guard: cfg.overflow_guard,
        shift,
    })
}
