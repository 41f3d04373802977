use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matkern::{validate_state, CMatrix, HermitianMatrix, StateMatrix};

/// Regularization added to generated states and to channel outputs.
pub const EPS_REG: f64 = 1e-9;

/// Deterministic generator for `(seed, stream)`; trials use their index as stream.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=64).contains(&n) {
        return Err(Error::DimensionError(format!("n must lie in [2, 64], got {n}")));
    }
    Ok(())
}

/// Complex Gaussian matrix with `E|gᵢⱼ|² = 1`.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    })
}

/// `G G* + ε I` from a complex Gaussian `G`, optionally trace-normalized.
pub fn sample_state<R: Rng + ?Sized>(rng: &mut R, n: usize, unit_trace: bool) -> Result<StateMatrix> {
    check_n(n)?;
    let g = gaussian_matrix(rng, n, n);
    let m = &g * g.adjoint() + CMatrix::identity(n, n).scale(EPS_REG);
    let mut h = HermitianMatrix::hermitian_part(m);
    if unit_trace {
        h = h.scale(1.0 / h.trace());
    }
    validate_state(&h, unit_trace)
}

pub fn random_state(n: usize, unit_trace: bool, seed: u64) -> Result<StateMatrix> {
    sample_state(&mut rng_for(seed, 0), n, unit_trace)
}

/// Diagonal state with exponential weights, optionally normalized.
pub fn sample_diagonal_state<R: Rng + ?Sized>(rng: &mut R, n: usize, unit_trace: bool) -> Result<StateMatrix> {
    check_n(n)?;
    let mut d: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-12).ln() + EPS_REG).collect();
    if unit_trace {
        let s: f64 = d.iter().sum();
        d.iter_mut().for_each(|x| *x /= s);
    }
    validate_state(&HermitianMatrix::diagonal(&d), unit_trace)
}

/// State with spectrum in roughly `[0.5, 0.5 + n]`, for finite-difference work.
pub fn sample_well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<StateMatrix> {
    check_n(n)?;
    let g = gaussian_matrix(rng, n, n);
    let m = (&g * g.adjoint()).scale(1.0 / n as f64) + CMatrix::identity(n, n).scale(0.5);
    validate_state(&HermitianMatrix::hermitian_part(m), false)
}

/// Hermitian part of a complex Gaussian, trace removed when `traceless`.
pub fn sample_tangent<R: Rng + ?Sized>(rng: &mut R, n: usize, traceless: bool) -> Result<HermitianMatrix> {
    check_n(n)?;
    let h = HermitianMatrix::hermitian_part(gaussian_matrix(rng, n, n));
    if !traceless {
        return Ok(h);
    }
    let shift = HermitianMatrix::identity(n).scale(h.trace() / n as f64);
    Ok(&h - &shift)
}

pub fn random_tangent(n: usize, traceless: bool, seed: u64) -> Result<HermitianMatrix> {
    sample_tangent(&mut rng_for(seed, 0), n, traceless)
}

/// Haar-distributed unitary (QR of a Gaussian with phases fixed).
pub fn sample_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}
