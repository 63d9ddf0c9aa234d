//! Closed-form spectrum of a ring lattice next to the Jacobi result.
//!
//!     cargo run --release --example ring_spectrum -- 12 2

use kuramoto_core::{cdt_eigenvalues, eigendecompose_symmetric, gen_ring, ring_generating_vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(12);
    let k: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);

    let closed = cdt_eigenvalues(&ring_generating_vector(n, k)?)?;
    let mut closed: Vec<f64> = closed.iter().map(|l| l.re).collect();
    closed.sort_by(|a, b| b.total_cmp(a));

    let jacobi = eigendecompose_symmetric(&gen_ring(n, k)?)?;

    println!("ring n={n} k={k}");
    println!("{:>4} {:>22} {:>22} {:>10}", "r", "closed form", "jacobi", "gap");
    for (r, (c, j)) in closed.iter().zip(&jacobi.eigenvalues).enumerate() {
        println!("{r:>4} {c:>22.15} {:>22.15} {:>10.2e}", j.re, (c - j.re).abs());
    }
    Ok(())
}
