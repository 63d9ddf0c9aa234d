//! Eigen-machinery for the closed-form solution `x(t) = V e^{γtD} V⁻¹ x(0)`.
//!
//! Two independent routes produce an [`EigenSystem`]:
//!
//! * [`cdt_eigensystem`] diagonalizes a circulant matrix with the discrete
//!   Fourier basis, `u_rs = N^{-1/2} exp(-2πi (r-1)(s-1) / N)`, and the
//!   eigenvalues `E_r = Σ_j c_j exp(-2πi (r-1)(j-1) / N)` summed directly.
//! * [`eigendecompose_symmetric`] runs cyclic Jacobi rotations on any real
//!   symmetric matrix.
//!
//! The two are cross-checked against each other on ring graphs.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AdjacencyMatrix, GeneratingVector};
use crate::io::fmt_f64;

/// Largest exponent whose `exp` is finite.
const MAX_EXPONENT: f64 = 709.782_712_893_384;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("empty generating vector")]
    Empty,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("propagator overflow: exponent {exponent} for eigenvalue {eigenvalue} (enable the overflow guard)")]
    Overflow { exponent: f64, eigenvalue: f64 },
    #[error("invalid propagator argument: {0}")]
    InvalidArgument(String),
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(n: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), n * n);
        CMatrix {
            n,
            data: data.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        assert_eq!(n, other.n);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex64::new(0.0, 0.0), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    Cdt,
    Numerical,
}

/// Eigenvalues with eigenvector basis `V` (columns) and its inverse.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<Complex64>,
    pub basis: CMatrix,
    pub inverse_basis: CMatrix,
    pub source: SpectrumSource,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V · diag(λ) · V⁻¹`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.n();
        let mut scaled = self.basis.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= self.eigenvalues[j];
            }
        }
        scaled.matmul(&self.inverse_basis)
    }

    /// Largest real part among the eigenvalues.
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Eigenvalues ordered by descending real part (then imaginary part).
    pub fn sorted_eigenvalues(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        v
    }

    /// Projects `x0` onto the eigenbasis once so that the solution can be
    /// evaluated at many times for one matrix-vector product each.
    pub fn modal(&self, x0: &[Complex64]) -> Result<ModalState<'_>, SpectralError> {
        if x0.len() != self.n() {
            return Err(SpectralError::Dimension {
                expected: self.n(),
                got: x0.len(),
            });
        }
        Ok(ModalState {
            system: self,
            coefficients: self.inverse_basis.matvec(x0),
        })
    }

    /// Writes `lambda_re,lambda_im` rows in descending order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "lambda_re,lambda_im")?;
        for l in self.sorted_eigenvalues() {
            writeln!(w, "{},{}", fmt_f64(l.re), fmt_f64(l.im))?;
        }
        Ok(())
    }

    /// Eigenvector export, column-major: one line per eigenvector in
    /// storage order, interleaving real and imaginary parts.
    pub fn write_eigenvectors_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.n();
        let header: Vec<String> = (0..n).flat_map(|i| [format!("v{i}_re"), format!("v{i}_im")]).collect();
        writeln!(w, "lambda_re,lambda_im,{}", header.join(","))?;
        for col in 0..n {
            let l = self.eigenvalues[col];
            let mut fields = vec![fmt_f64(l.re), fmt_f64(l.im)];
            for row in 0..n {
                let v = self.basis[(row, col)];
                fields.push(fmt_f64(v.re));
                fields.push(fmt_f64(v.im));
            }
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// Overflow handling for `exp(γtλ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverflowGuard {
    /// Divide the whole state by the dominant growth factor. Moduli are
    /// rescaled uniformly, arguments are untouched.
    On,
    Off,
}

/// Initial condition expressed in eigen-coordinates, `y = V⁻¹ x(0)`.
#[derive(Debug, Clone)]
pub struct ModalState<'a> {
    system: &'a EigenSystem,
    coefficients: Vec<Complex64>,
}

impl ModalState<'_> {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Log of the factor removed by the guard: the largest `γtλ_r.re`.
    pub fn guard_shift(&self, gamma: f64, t: f64) -> f64 {
        self.system
            .eigenvalues
            .iter()
            .map(|l| gamma * t * l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `x(t) = V exp(γtD) y`, optionally divided by `exp(guard_shift)`.
    pub fn at(&self, gamma: f64, t: f64, guard: OverflowGuard) -> Result<Vec<Complex64>, SpectralError> {
        if !gamma.is_finite() {
            return Err(SpectralError::InvalidArgument(format!("gamma = {gamma}")));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(SpectralError::InvalidArgument(format!("t = {t}")));
        }
        let shift = match guard {
            OverflowGuard::On => self.guard_shift(gamma, t),
            OverflowGuard::Off => 0.0,
        };
        let mut z = Vec::with_capacity(self.coefficients.len());
        for (l, &y) in self.system.eigenvalues.iter().zip(&self.coefficients) {
            let exponent = gamma * t * l.re - shift;
            if exponent > MAX_EXPONENT {
                return Err(SpectralError::Overflow {
                    exponent,
                    eigenvalue: l.re,
                });
            }
            let growth = Complex64::from_polar(exponent.exp(), gamma * t * l.im);
            z.push(growth * y);
        }
        Ok(self.system.basis.matvec(&z))
    }
}

/// `V exp(γtD) V⁻¹ x0`.
pub fn apply_propagator(
    es: &EigenSystem,
    gamma: f64,
    t: f64,
    x0: &[Complex64],
    guard: OverflowGuard,
) -> Result<Vec<Complex64>, SpectralError> {
    es.modal(x0)?.at(gamma, t, guard)
}

/// `exp(-2πi · m / n)` with `m` reduced modulo `n` first.
fn root_of_unity(m: usize, n: usize) -> Complex64 {
    let angle = -2.0 * PI * ((m % n) as f64) / n as f64;
    Complex64::from_polar(1.0, angle)
}

/// Circulant eigenvalues by direct summation.
pub fn cdt_eigenvalues(c: &GeneratingVector) -> Result<Vec<Complex64>, SpectralError> {
    let n = c.len();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let c = c.as_slice();
    Ok((0..n)
        .map(|r| {
            c.iter()
                .enumerate()
                .filter(|(_, &cj)| cj != 0.0)
                .fold(Complex64::new(0.0, 0.0), |acc, (j, &cj)| acc + cj * root_of_unity(r * j, n))
        })
        .collect())
}

/// The unitary Fourier matrix `U` that diagonalizes every circulant.
pub fn cdt_fourier_matrix(n: usize) -> CMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    let mut u = CMatrix::zeros(n);
    for r in 0..n {
        for s in 0..n {
            u[(r, s)] = root_of_unity(r * s, n) * scale;
        }
    }
    u
}

/// Circulant eigensystem. With `C[i][j] = c[(j - i) mod n]`, column `r` of
/// `U` (which is symmetric) is the eigenvector for `E_r`, so `V = U` and
/// `V⁻¹ = Uᴴ`.
pub fn cdt_eigensystem(c: &GeneratingVector) -> Result<EigenSystem, SpectralError> {
    let eigenvalues = cdt_eigenvalues(c)?;
    let u = cdt_fourier_matrix(c.len());
    let inverse_basis = u.conj_transpose();
    Ok(EigenSystem {
        eigenvalues,
        basis: u,
        inverse_basis,
        source: SpectrumSource::Cdt,
    })
}

/// Eigenvalues and orthonormal eigenvectors of a real symmetric matrix by
/// cyclic Jacobi rotations. Eigenvalues are returned in descending order;
/// column `j` of the returned row-major `n × n` matrix is the eigenvector
/// of eigenvalue `j`.
pub fn jacobi_eigen(n: usize, a: &[f64]) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    assert_eq!(a.len(), n * n);
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            asym = asym.max((a[i * n + j] - a[j * n + i]).abs());
        }
    }
    if asym > SYMMETRY_TOL {
        return Err(SpectralError::NotSymmetric(asym));
    }

    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_REL_TOL * frob;

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&m) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(SpectralError::NoConvergence {
                sweeps,
                off_norm: off_norm(&m),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // Rotation angle chosen to annihilate m[p][q].
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        converged = off_norm(&m) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + dst] = v[k * n + src];
        }
    }
    Ok((values, vectors))
}

/// Numerical eigensystem of an adjacency matrix (Jacobi).
pub fn eigendecompose_symmetric(a: &AdjacencyMatrix) -> Result<EigenSystem, SpectralError> {
    let n = a.n();
    let (values, vectors) = jacobi_eigen(n, &a.to_f64())?;
    let basis = CMatrix::from_real(n, &vectors);
    let mut transposed = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            transposed[j * n + i] = vectors[i * n + j];
        }
    }
    Ok(EigenSystem {
        eigenvalues: values.into_iter().map(|l| Complex64::new(l, 0.0)).collect(),
        basis,
        inverse_basis: CMatrix::from_real(n, &transposed),
        source: SpectrumSource::Numerical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_ring, ring_generating_vector};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Brute-force DFT evaluated with an independent angle expression.
    fn dft_oracle(cv: &[f64]) -> Vec<Complex64> {
        let n = cv.len();
        (0..n)
            .map(|r| {
                cv.iter().enumerate().fold(c(0.0, 0.0), |acc, (j, &x)| {
                    let ang = -2.0 * PI * (r as f64) * (j as f64) / n as f64;
                    acc + x * c(ang.cos(), ang.sin())
                })
            })
            .collect()
    }

    fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() <= tol, "{x} vs {y}");
        }
    }

    #[test]
    fn cdt_eigenvalues_examples() {
        let k3 = cdt_eigenvalues(&GeneratingVector(vec![0., 1., 1.])).unwrap();
        assert_close(&k3, &[c(2., 0.), c(-1., 0.), c(-1., 0.)], 1e-12);

        let ring4 = GeneratingVector(vec![0., 1., 0., 1.]);
        let e = cdt_eigenvalues(&ring4).unwrap();
        assert_close(&e, &[c(2., 0.), c(0., 0.), c(-2., 0.), c(0., 0.)], 1e-12);
        assert_close(&e, &dft_oracle(&ring4.0), 1e-12);

        let zero = cdt_eigenvalues(&GeneratingVector(vec![0.; 3])).unwrap();
        assert_close(&zero, &[c(0., 0.); 3], 0.0);

        assert_eq!(cdt_eigenvalues(&GeneratingVector(vec![])), Err(SpectralError::Empty));
    }

    #[test]
    fn cdt_eigenvalues_real_for_symmetric_rings() {
        for n in 2..40 {
            for k in 1..=n / 2 {
                let e = cdt_eigenvalues(&ring_generating_vector(n, k).unwrap()).unwrap();
                assert!(e.iter().all(|l| l.im.abs() <= 1e-12));
            }
        }
    }

    #[test]
    fn fourier_matrix_small() {
        assert_close(&cdt_fourier_matrix(1).data, &[c(1., 0.)], 0.0);
        let h = 1.0 / 2f64.sqrt();
        assert_close(
            &cdt_fourier_matrix(2).data,
            &[c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)],
            1e-15,
        );
        for n in [4, 7, 32] {
            let u = cdt_fourier_matrix(n);
            let prod = u.matmul(&u.conj_transpose());
            assert!(prod.max_abs_diff(&CMatrix::identity(n)) <= 1e-12);
        }
    }

    #[test]
    fn cdt_eigensystem_reconstructs() {
        let k3 = GeneratingVector(vec![0., 1., 1.]);
        let es = cdt_eigensystem(&k3).unwrap();
        let a = CMatrix::from_real(3, &k3.circulant());
        assert!(es.reconstruct().max_abs_diff(&a) <= 1e-12);

        let ring5 = ring_generating_vector(5, 1).unwrap();
        let es = cdt_eigensystem(&ring5).unwrap();
        let mut got: Vec<f64> = es.eigenvalues.iter().map(|l| l.re).collect();
        got.sort_by(|a, b| b.total_cmp(a));
        let c1 = 2.0 * (2.0 * PI / 5.0).cos();
        let c2 = 2.0 * (4.0 * PI / 5.0).cos();
        let want = [2.0, c1, c1, c2, c2];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-12);
        }

        let zero = GeneratingVector(vec![0.; 4]);
        let es = cdt_eigensystem(&zero).unwrap();
        assert!(es.reconstruct().max_abs_diff(&CMatrix::zeros(4)) == 0.0);
    }

    #[test]
    fn cdt_eigensystem_handles_nonsymmetric_circulants() {
        let cv = GeneratingVector(vec![0.5, 2.0, -1.0, 0.0, 3.0]);
        let es = cdt_eigensystem(&cv).unwrap();
        let a = CMatrix::from_real(5, &cv.circulant());
        assert!(es.reconstruct().max_abs_diff(&a) <= 1e-12);
        let av = a.matmul(&es.basis);
        for col in 0..5 {
            for row in 0..5 {
                let want = es.basis[(row, col)] * es.eigenvalues[col];
                assert!((av[(row, col)] - want).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_two_by_two() {
        let es = eigendecompose_symmetric(&gen_complete(2).unwrap()).unwrap();
        assert_close(&es.eigenvalues, &[c(1., 0.), c(-1., 0.)], 1e-14);
        let h = 1.0 / 2f64.sqrt();
        let v0 = [es.basis[(0, 0)].re, es.basis[(1, 0)].re];
        let v1 = [es.basis[(0, 1)].re, es.basis[(1, 1)].re];
        assert!((v0[0].abs() - h).abs() < 1e-14 && (v0[0] - v0[1]).abs() < 1e-14);
        assert!((v1[0].abs() - h).abs() < 1e-14 && (v1[0] + v1[1]).abs() < 1e-14);
    }

    #[test]
    fn jacobi_complete_graph_spectrum() {
        for n in 2..=64 {
            let es = eigendecompose_symmetric(&gen_complete(n).unwrap()).unwrap();
            assert!((es.eigenvalues[0].re - (n as f64 - 1.0)).abs() <= 1e-9);
            assert!(es.eigenvalues[1..].iter().all(|l| (l.re + 1.0).abs() <= 1e-9));
            assert!(es.eigenvalues.iter().all(|l| l.im == 0.0));
        }
    }

    #[test]
    fn jacobi_invariants_on_ring() {
        let a = gen_ring(40, 3).unwrap();
        let es = eigendecompose_symmetric(&a).unwrap();
        let am = CMatrix::from_real(40, &a.to_f64());
        let mut vd = es.basis.clone();
        for i in 0..40 {
            for j in 0..40 {
                vd[(i, j)] *= es.eigenvalues[j];
            }
        }
        assert!(am.matmul(&es.basis).max_abs_diff(&vd) <= 1e-9 * 40.0);
        let id = es.basis.matmul(&es.inverse_basis);
        assert!(id.max_abs_diff(&CMatrix::identity(40)) <= 1e-9 * 40.0);
        let trace: f64 = es.eigenvalues.iter().map(|l| l.re).sum();
        assert!(trace.abs() <= 1e-9);
        assert!((es.lambda_max() - 6.0).abs() <= 1e-9);
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let a = [0.0, 1.0, 0.5, 0.0];
        assert!(matches!(jacobi_eigen(2, &a), Err(SpectralError::NotSymmetric(_))));
    }

    #[test]
    fn propagator_identity_at_zero() {
        let es = cdt_eigensystem(&ring_generating_vector(7, 2).unwrap()).unwrap();
        let x0: Vec<Complex64> = (0..7).map(|i| Complex64::from_polar(1.0, i as f64)).collect();
        let x = apply_propagator(&es, 0.7, 0.0, &x0, OverflowGuard::Off).unwrap();
        assert_close(&x, &x0, 1e-12);
    }

    #[test]
    fn propagator_uniform_eigenvector_on_k3() {
        let es = cdt_eigensystem(&GeneratingVector(vec![0., 1., 1.])).unwrap();
        let x0 = vec![Complex64::from_polar(1.0, 0.3); 3];
        let (gamma, t) = (2.0 / PI, 0.8);
        let x = apply_propagator(&es, gamma, t, &x0, OverflowGuard::Off).unwrap();
        let want: Vec<Complex64> = x0.iter().map(|v| v * (2.0 * gamma * t).exp()).collect();
        assert_close(&x, &want, 1e-12);
        let guarded = apply_propagator(&es, gamma, t, &x0, OverflowGuard::On).unwrap();
        assert_close(&guarded, &x0, 1e-12);
    }

    #[test]
    fn propagator_overflow_is_reported() {
        let es = eigendecompose_symmetric(&gen_complete(200).unwrap()).unwrap();
        let x0 = vec![c(1.0, 0.0); 200];
        let err = apply_propagator(&es, 10.0, 1.0, &x0, OverflowGuard::Off).unwrap_err();
        assert!(matches!(err, SpectralError::Overflow { .. }));
        let x = apply_propagator(&es, 10.0, 1.0, &x0, OverflowGuard::On).unwrap();
        assert!(x.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
    }

    #[test]
    fn propagator_rejects_bad_arguments() {
        let es = cdt_eigensystem(&GeneratingVector(vec![0., 1., 1.])).unwrap();
        let x0 = vec![c(1.0, 0.0); 3];
        assert!(apply_propagator(&es, 1.0, -1.0, &x0, OverflowGuard::On).is_err());
        assert!(apply_propagator(&es, f64::NAN, 1.0, &x0, OverflowGuard::On).is_err());
        assert!(matches!(
            apply_propagator(&es, 1.0, 1.0, &x0[..2], OverflowGuard::On),
            Err(SpectralError::Dimension { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn spectrum_csv_layout() {
        let es = cdt_eigensystem(&GeneratingVector(vec![0., 1., 1.])).unwrap();
        let mut buf = Vec::new();
        es.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda_re,lambda_im");
        assert_eq!(lines.len(), 4);
        let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
        assert!((first - 2.0).abs() < 1e-12);
    }
}
