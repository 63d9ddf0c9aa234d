//! Erdős–Rényi and Watts–Strogatz networks with a numerically computed
//! spectrum.
//!
//!     cargo run --release --example random_graphs -- 3

use kuramoto_core::experiments::{run_fig4, Fig4Options, RandomGraphVariant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);

    for variant in [RandomGraphVariant::Er, RandomGraphVariant::Ws] {
        let run = run_fig4(&Fig4Options { seed, ..Fig4Options::new(variant) })?;
        let g = run.graph();
        let degrees: Vec<usize> = (0..g.n()).map(|i| g.degree(i)).collect();
        let r = &run.report.order_param_numerical;
        println!(
            "{variant:?}: {} edges, degree {}..={}, |r| {:.3} -> {:.3} (analytic {:.3}), mean gap {:.4}",
            g.edge_count(),
            degrees.iter().min().unwrap(),
            degrees.iter().max().unwrap(),
            r[0],
            r.last().unwrap(),
            run.report.order_param_analytic.last().unwrap(),
            run.report.mean_abs_order_gap,
        );
    }
    Ok(())
}
