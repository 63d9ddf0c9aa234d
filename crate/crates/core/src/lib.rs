//! Kuramoto oscillators on finite graphs.
//!
//! The crate integrates the classical Kuramoto model numerically and
//! evaluates its exact complex-valued counterpart, `x(t) = e^{γtA} x(0)`
//! with `x = e^{iθ}` and `γ = 2κ/π`, through the eigenspectrum of the
//! adjacency matrix. Ring and complete graphs are circulant and are
//! diagonalized in closed form; other graphs go through a Jacobi solver.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod dynamics;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod rng;
pub mod spectral;

pub use dynamics::{
    analytic_amplitudes, analytic_at_times, analytic_trajectory, initial_phases,
    integrate_numerical, km_rhs, order_parameter, wrap_phase, wrapped_distance, Integrator,
    PhaseState, SimulationConfig, Trajectory,
};
pub use graph::{
    gen_complete, gen_erdos_renyi, gen_ring, gen_watts_strogatz, ring_generating_vector,
    AdjacencyMatrix, GeneratingVector, GraphKind,
};
pub use spectral::{
    apply_propagator, cdt_eigensystem, cdt_eigenvalues, cdt_fourier_matrix,
    eigendecompose_symmetric, EigenSystem, OverflowGuard,
};
