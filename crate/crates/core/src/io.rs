//! Text and raster output shared by the library and the CLI.

use std::f64::consts::PI;
use std::io::{self, Write};

use crate::dynamics::Trajectory;

/// Shortest decimal that round-trips to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// `t,theta_0,...,theta_{n-1}`, one row per sample.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, mut w: W) -> io::Result<()> {
    let n = traj.n();
    let mut header = String::from("t");
    for i in 0..n {
        header.push_str(&format!(",theta_{i}"));
    }
    writeln!(w, "{header}")?;
    for (t, state) in traj.times.iter().zip(&traj.states) {
        let mut line = fmt_f64(*t);
        for &th in state.as_slice() {
            line.push(',');
            line.push_str(&fmt_f64(th));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Maps a phase in (−π, π] linearly onto 0..=255 (−π dark, π light).
pub fn phase_to_gray(theta: f64) -> u8 {
    let v = ((theta + PI) / (2.0 * PI) * 255.0).round();
    v.clamp(0.0, 255.0) as u8
}

/// Binary PGM (P5): nodes along x, samples along y.
pub fn write_pgm<W: Write>(traj: &Trajectory, mut w: W) -> io::Result<()> {
    let width = traj.n();
    let height = traj.states.len();
    write!(w, "P5\n{width} {height}\n255\n")?;
    let mut row = Vec::with_capacity(width);
    for state in &traj.states {
        row.clear();
        row.extend(state.as_slice().iter().map(|&th| phase_to_gray(th)));
        w.write_all(&row)?;
    }
    Ok(())
}
