//! The linear propagator on its own: evaluates e^{γtA} x0 at a few times
//! from one modal decomposition, with and without the overflow guard.
//!
//!     cargo run --release --example propagator

use kuramoto_core::spectral::OverflowGuard;
use kuramoto_core::{eigendecompose_symmetric, gen_watts_strogatz, initial_phases};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = gen_watts_strogatz(40, 3, 0.2, 11)?;
    let es = eigendecompose_symmetric(&graph)?;
    let x0 = initial_phases(graph.n(), 11).to_complex();
    let modal = es.modal(&x0)?;
    let gamma = 2.0 * 0.5 / std::f64::consts::PI;

    println!("lambda_max = {:.6}", es.lambda_max());
    for t in [0.0, 1.0, 10.0, 100.0, 1000.0] {
        let guarded = modal.at(gamma, t, OverflowGuard::On)?;
        let raw = modal.at(gamma, t, OverflowGuard::Off);
        let phase0 = guarded[0].arg();
        match raw {
            Ok(v) => println!("t={t:>6}: arg x_0 = {phase0:+.6}, unguarded |x_0| = {:.3e}", v[0].norm()),
            Err(e) => println!("t={t:>6}: arg x_0 = {phase0:+.6}, unguarded: {e}"),
        }
    }
    Ok(())
}
