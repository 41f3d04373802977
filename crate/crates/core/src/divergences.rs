//! Geometric mean, quasi-entropies and generalized relative entropies, plus
//! the classical (commuting) distances they reduce to.

use crate::error::{Error, Result};
use crate::matkern::{validate_state, HermitianMatrix, ScalarFunctionSpec, StateMatrix};

/// Convex functions use the same representation as other scalar functions.
pub type ConvexFunctionSpec = ScalarFunctionSpec;

/// `ρ₀ # ρ₁ = ρ₀^{1/2} (ρ₀^{−1/2} ρ₁ ρ₀^{−1/2})^{1/2} ρ₀^{1/2}`.
pub fn geometric_mean(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<StateMatrix> {
    rho0.check_same_dim(rho1)?;
    let s = rho0.sqrt();
    let q = sandwich_sqrt(rho0, rho1)?;
    let m = s.as_matrix() * q.as_matrix() * s.as_matrix();
    validate_state(&HermitianMatrix::hermitian_part(m), false)
}

/// `(ρ₀^{−1/2} ρ₁ ρ₀^{−1/2})^{1/2}`.
pub(crate) fn sandwich_sqrt(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<HermitianMatrix> {
    let is = rho0.inv_sqrt();
    let inner = HermitianMatrix::hermitian_part(
        is.as_matrix() * rho1.matrix().as_matrix() * is.as_matrix(),
    );
    let inner = validate_state(&inner, false)?;
    Ok(inner.sqrt())
}

/// Trace of the geometric mean, `Tr ρ₀ # ρ₁`.
pub fn geometric_mean_trace(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    Ok(geometric_mean(rho0, rho1)?.trace())
}

/// Quasi-entropy `S_g(ρ, σ) = Tr ρ^{1/2} g(Δ_{σ,ρ})(ρ^{1/2})` with the relative
/// modular operator `Δ_{σ,ρ} = L_σ R_ρ^{−1}`.
///
/// With `σ = U diag(s) U*`, `ρ = V diag(r) V*` and `X = U* ρ^{1/2} V`, this is
/// `Σᵢⱼ g(sᵢ/rⱼ) |Xᵢⱼ|²`.
pub fn quasi_entropy_s(g: &ConvexFunctionSpec, rho: &StateMatrix, sigma: &StateMatrix) -> Result<f64> {
    rho.check_same_dim(sigma)?;
    g.validate()?;
    let u = &sigma.spectral().eigenvectors;
    let v = &rho.spectral().eigenvectors;
    let s = &sigma.spectral().eigenvalues;
    let r = &rho.spectral().eigenvalues;
    let x = u.adjoint() * rho.sqrt().as_matrix() * v;
    let mut acc = 0.0;
    for j in 0..r.len() {
        for i in 0..s.len() {
            acc += g.eval(s[i] / r[j])? * x[(i, j)].norm_sqr();
        }
    }
    Ok(acc)
}

/// Generalized relative entropy `H_g(ρ₀, ρ₁) = Tr ρ₀ g(ρ₀^{−1/2} ρ₁ ρ₀^{−1/2})`.
pub fn relative_entropy_h(g: &ConvexFunctionSpec, rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    rho0.check_same_dim(rho1)?;
    g.validate()?;
    let is = rho0.inv_sqrt();
    let inner = HermitianMatrix::hermitian_part(
        is.as_matrix() * rho1.matrix().as_matrix() * is.as_matrix(),
    );
    let inner = validate_state(&inner, false)?;
    let gm = inner.apply_fn(g)?;
    let prod = rho0.matrix().as_matrix() * gm.as_matrix();
    Ok(prod.trace().re)
}

fn check_positive_vector(p: &[f64], q: &[f64], err: fn(String) -> Error) -> Result<()> {
    if p.is_empty() || p.len() != q.len() {
        return Err(err(format!("vectors must be nonempty and of equal length ({} vs {})", p.len(), q.len())));
    }
    if let Some(v) = p.iter().chain(q).find(|v| !v.is_finite() || **v <= 0.0) {
        return Err(err(format!("entries must be strictly positive, found {v}")));
    }
    Ok(())
}

/// Bhattacharya distance `2 arccos Σ √(pᵢ qᵢ)` between probability vectors.
pub fn classical_bhattacharya(p: &[f64], q: &[f64]) -> Result<f64> {
    check_positive_vector(p, q, Error::InvalidDistribution)?;
    for v in [p, q] {
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!("entries sum to {s}, expected 1")));
        }
    }
    let bc: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    Ok(2.0 * bc.clamp(-1.0, 1.0).acos())
}

/// `d(p, q) = 2 (Σ (√pᵢ − √qᵢ)²)^{1/2}` between positive measures.
pub fn classical_hellinger_d(p: &[f64], q: &[f64]) -> Result<f64> {
    check_positive_vector(p, q, Error::InvalidMeasure)?;
    let s: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    Ok(2.0 * s.sqrt())
}
