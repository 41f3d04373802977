//! Dense Hermitian linear algebra: spectral decompositions, functional
//! calculus, first-order Fréchet derivatives and state validation.
//!
//! Every matrix function goes through [`eig_hermitian`]; at desk scale
//! (n up to a few dozen) spectral calculus is exact enough for all the
//! downstream oracles and keeps a single code path.

mod function;
mod json;

pub use function::{MonotoneCubic, ScalarFunctionSpec};
pub use json::MatrixJson;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Dense complex matrix used throughout.
pub type CMatrix = DMatrix<Complex64>;

/// Relative Hermitian symmetry tolerance (times the largest entry modulus).
pub const TOL_HERMITIAN: f64 = 1e-12;
/// Relative positivity threshold (times the largest eigenvalue, floored at 1).
pub const EPS_PD_REL: f64 = 1e-10;
/// Relative eigenvalue gap below which divided differences fall back to the derivative.
pub const EPS_DD: f64 = 1e-7;
/// Absolute tolerance on the trace of a density matrix.
pub const TOL_TRACE: f64 = 1e-10;

/// Positivity threshold for a spectrum whose largest eigenvalue is `max_eig`.
pub fn eps_pd(max_eig: f64) -> f64 {
    EPS_PD_REL * max_eig.max(1.0)
}

/// n×n complex matrix with Hermitian symmetry.
///
/// Constructed either from validated input ([`HermitianMatrix::new`]) or by
/// taking the Hermitian part of a computed product ([`HermitianMatrix::hermitian_part`]),
/// so the stored entries are exactly symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::DimensionError("matrix must be at least 1x1".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Format("non-finite matrix entry".into()));
        }
        let (defect, tolerance) = hermitian_defect(&m);
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(Self::hermitian_part(m))
    }

    /// Builds from real entries (real symmetric input).
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Format(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Self::new(CMatrix::from_row_iterator(
            n,
            n,
            entries.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    /// The Hermitian part `(m + m*)/2` of an arbitrary square matrix.
    pub fn hermitian_part(m: CMatrix) -> Self {
        let adj = m.adjoint();
        Self((m + adj).scale(0.5))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let v = DVector::from_iterator(d.len(), d.iter().map(|&x| Complex64::new(x, 0.0)));
        Self(CMatrix::from_diagonal(&v))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        max_abs(&self.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(c))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.0[(i, j)].norm() <= tol))
    }

    pub fn diagonal_values(&self) -> Vec<f64> {
        self.0.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        check_dims(self.dim(), other.dim())
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl AsRef<HermitianMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        self
    }
}

/// Eigenvalues (ascending) and unitary eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U · diag(f(dᵢ)) · U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&d| f(d)).collect();
        self.reconstruct_values(&values)
    }

    /// `U · diag(values) · U*`.
    pub fn reconstruct_values(&self, values: &[f64]) -> CMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= v);
        }
        scaled * u.adjoint()
    }

    /// `U* · x · U`, the matrix of `x` in the eigenbasis.
    pub fn to_eigenbasis(&self, x: &CMatrix) -> CMatrix {
        self.eigenvectors.adjoint() * x * &self.eigenvectors
    }

    /// `U · x · U*`.
    pub fn from_eigenbasis(&self, x: &CMatrix) -> CMatrix {
        &self.eigenvectors * x * self.eigenvectors.adjoint()
    }

    /// Applies an eigenbasis Schur multiplier `x̃ᵢⱼ ↦ x̃ᵢⱼ · w(dᵢ, dⱼ)` to `x`.
    pub fn schur_multiply(&self, x: &CMatrix, w: impl Fn(f64, f64) -> f64) -> CMatrix {
        let mut xt = self.to_eigenbasis(x);
        let d = &self.eigenvalues;
        for j in 0..d.len() {
            for i in 0..d.len() {
                xt[(i, j)] *= w(d[i], d[j]);
            }
        }
        self.from_eigenbasis(&xt)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let eig = nalgebra::SymmetricEigen::try_new(h.0.clone(), f64::EPSILON, 0)
        .ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Positive-definite Hermitian matrix, optionally flagged as a density matrix.
///
/// The spectral decomposition is computed once at validation and cached.
#[derive(Clone, Debug)]
pub struct StateMatrix {
    matrix: HermitianMatrix,
    unit_trace: bool,
    spectral: SpectralDecomposition,
}

impl StateMatrix {
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn is_unit_trace(&self) -> bool {
        self.unit_trace
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// `f(ρ)` via the cached spectrum.
    pub fn apply_fn(&self, f: &ScalarFunctionSpec) -> Result<HermitianMatrix> {
        mat_fn_spectral(&self.spectral, f)
    }

    /// `ρ^p` for real `p`; always defined on the open cone.
    pub fn power(&self, p: f64) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(self.spectral.reconstruct_with(|d| d.powf(p)))
    }

    pub fn sqrt(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(self.spectral.reconstruct_with(f64::sqrt))
    }

    pub fn inv_sqrt(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(self.spectral.reconstruct_with(|d| 1.0 / d.sqrt()))
    }

    pub fn inverse(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(self.spectral.reconstruct_with(|d| 1.0 / d))
    }

    /// The same state rescaled to unit trace.
    pub fn normalized(&self) -> Result<StateMatrix> {
        validate_state(&self.matrix.scale(1.0 / self.trace()), true)
    }

    pub fn check_same_dim(&self, other: &StateMatrix) -> Result<()> {
        check_dims(self.dim(), other.dim())
    }

    /// Hilbert–Schmidt norm of the commutator `[self, other]`.
    pub fn commutator_norm(&self, other: &StateMatrix) -> f64 {
        let a = self.matrix.as_matrix();
        let b = other.matrix.as_matrix();
        (a * b - b * a).norm()
    }
}

impl AsRef<HermitianMatrix> for StateMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        &self.matrix
    }
}

/// Accepts `m` as an element of the open positive cone, and of the density
/// matrices when `unit_trace` is set.
pub fn validate_state(m: &HermitianMatrix, unit_trace: bool) -> Result<StateMatrix> {
    let spectral = eig_hermitian(m)?;
    let threshold = eps_pd(spectral.max_eigenvalue());
    let min_eigenvalue = spectral.min_eigenvalue();
    if min_eigenvalue <= threshold {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue,
            threshold,
        });
    }
    if unit_trace {
        let trace = m.trace();
        if (trace - 1.0).abs() > TOL_TRACE {
            return Err(Error::TraceNotOne { trace });
        }
    }
    Ok(StateMatrix {
        matrix: m.clone(),
        unit_trace,
        spectral,
    })
}

/// `f(A) = U · diag(f(dᵢ)) · U*`.
pub fn mat_fn(a: &HermitianMatrix, f: &ScalarFunctionSpec) -> Result<HermitianMatrix> {
    mat_fn_spectral(&eig_hermitian(a)?, f)
}

fn mat_fn_spectral(s: &SpectralDecomposition, f: &ScalarFunctionSpec) -> Result<HermitianMatrix> {
    f.validate()?;
    let values = s
        .eigenvalues
        .iter()
        .map(|&d| f.eval(d))
        .collect::<Result<Vec<_>>>()?;
    Ok(HermitianMatrix::hermitian_part(s.reconstruct_values(&values)))
}

/// First divided difference `f[x, y]`, switching to `f'((x+y)/2)` when the
/// relative gap is below [`EPS_DD`].
pub fn divided_difference(f: &ScalarFunctionSpec, x: f64, y: f64) -> Result<f64> {
    if (x - y).abs() <= EPS_DD * x.abs().max(y.abs()) {
        return f.derivative(0.5 * (x + y));
    }
    f.divided_difference_exact(x, y)
}

/// Directional derivative `Df[A](h)` of the matrix function `f` at `A`.
///
/// In the eigenbasis of `A` this is the Schur product of `h̃` with the
/// matrix of first divided differences `f[dᵢ, dⱼ]`.
pub fn frechet_derivative(
    f: &ScalarFunctionSpec,
    a: &StateMatrix,
    h: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    f.validate()?;
    check_dims(a.dim(), h.dim())?;
    let d = &a.spectral.eigenvalues;
    let n = d.len();
    let mut weights = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let w = divided_difference(f, d[i], d[j])?;
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
    }
    let mut ht = a.spectral.to_eigenbasis(h.as_matrix());
    ht.zip_apply(&weights, |z, w| *z *= w);
    Ok(HermitianMatrix::hermitian_part(a.spectral.from_eigenbasis(&ht)))
}

/// Hilbert–Schmidt inner product `Tr x* y`.
pub fn hs_inner(x: &CMatrix, y: &CMatrix) -> Result<Complex64> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch {
            left: x.nrows(),
            right: y.nrows(),
        });
    }
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// Real part of `Tr(x y)` for Hermitian arguments.
pub fn trace_product(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    // Tr(xy) = Σ x_ij y_ji = Σ conj(x_ji) y_ji for Hermitian x.
    x.as_matrix()
        .iter()
        .zip(y.as_matrix().iter())
        .map(|(a, b)| (a.conj() * b).re)
        .sum()
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_defect(m: &CMatrix) -> (f64, f64) {
    let n = m.nrows();
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    (defect, TOL_HERMITIAN * max_abs(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let err = (a - b).norm();
        assert!(err <= tol, "matrices differ by {err:e}");
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let s = eig_hermitian(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);

        let s = eig_hermitian(&HermitianMatrix::diagonal(&[0.9, 0.1])).unwrap();
        assert!((s.eigenvalues[0] - 0.1).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 0.9).abs() < 1e-15);
        // ascending order moves e₂ to the first column
        assert!((s.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_pauli_x() {
        let h = HermitianMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = eig_hermitian(&h).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.1), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn mat_fn_examples() {
        let i3 = HermitianMatrix::identity(3);
        assert_close(
            mat_fn(&i3, &ScalarFunctionSpec::Sqrt).unwrap().as_matrix(),
            i3.as_matrix(),
            1e-15,
        );
        let r = mat_fn(&HermitianMatrix::diagonal(&[4.0, 9.0]), &ScalarFunctionSpec::Sqrt).unwrap();
        assert_close(r.as_matrix(), HermitianMatrix::diagonal(&[2.0, 3.0]).as_matrix(), 1e-14);
    }

    #[test]
    fn mat_fn_domain_errors() {
        let h = HermitianMatrix::diagonal(&[-1.0, 2.0]);
        assert!(matches!(mat_fn(&h, &ScalarFunctionSpec::Log), Err(Error::DomainError(_))));
        assert!(matches!(mat_fn(&h, &ScalarFunctionSpec::Sqrt), Err(Error::DomainError(_))));
        // integer powers are entire
        let sq = mat_fn(&h, &ScalarFunctionSpec::Power(2.0)).unwrap();
        assert_close(sq.as_matrix(), HermitianMatrix::diagonal(&[1.0, 4.0]).as_matrix(), 1e-14);
    }

    #[test]
    fn validate_state_examples() {
        assert!(validate_state(&HermitianMatrix::diagonal(&[0.5, 0.5]), true).is_ok());
        assert!(matches!(
            validate_state(&HermitianMatrix::diagonal(&[1.0, 0.0]), false),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            validate_state(&HermitianMatrix::diagonal(&[1.0, 0.0]), true),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            validate_state(&HermitianMatrix::diagonal(&[0.6, 0.6]), true),
            Err(Error::TraceNotOne { .. })
        ));
        // cone states need not be normalized
        assert!(validate_state(&HermitianMatrix::diagonal(&[0.6, 0.6]), false).is_ok());
    }

    #[test]
    fn frechet_sqrt_divided_difference() {
        let a = validate_state(&HermitianMatrix::diagonal(&[1.0, 4.0]), false).unwrap();
        let h = HermitianMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let d = frechet_derivative(&ScalarFunctionSpec::Sqrt, &a, &h).unwrap();
        let expected = HermitianMatrix::from_real(2, &[0.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]).unwrap();
        assert_close(d.as_matrix(), expected.as_matrix(), 1e-15);
    }

    #[test]
    fn frechet_identity_map() {
        let a = validate_state(&HermitianMatrix::from_real(2, &[2.0, 0.5, 0.5, 1.0]).unwrap(), false)
            .unwrap();
        let h = HermitianMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.0), c(0.1, -0.7), c(0.1, 0.7), c(-1.2, 0.0)],
        ))
        .unwrap();
        let d = frechet_derivative(&ScalarFunctionSpec::Power(1.0), &a, &h).unwrap();
        assert_close(d.as_matrix(), h.as_matrix(), 1e-14);
    }

    #[test]
    fn frechet_degenerate_spectrum_uses_derivative() {
        let a = validate_state(&HermitianMatrix::diagonal(&[2.0, 2.0]), false).unwrap();
        let h = HermitianMatrix::from_real(2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let d = frechet_derivative(&ScalarFunctionSpec::Log, &a, &h).unwrap();
        assert_close(d.as_matrix(), h.scale(0.5).as_matrix(), 1e-15);
    }

    #[test]
    fn hs_inner_examples() {
        let i2 = HermitianMatrix::identity(2);
        assert_eq!(hs_inner(i2.as_matrix(), i2.as_matrix()).unwrap(), c(2.0, 0.0));
        let z = HermitianMatrix::diagonal(&[1.0, -1.0]);
        assert_eq!(hs_inner(z.as_matrix(), i2.as_matrix()).unwrap(), c(0.0, 0.0));
        assert!(matches!(
            hs_inner(i2.as_matrix(), HermitianMatrix::identity(3).as_matrix()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hs_inner_conjugate_symmetric_and_linear() {
        let x = CMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0)]);
        let y = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(1.0, 1.0), c(-1.0, 0.0), c(0.0, 2.0)]);
        let xy = hs_inner(&x, &y).unwrap();
        let yx = hs_inner(&y, &x).unwrap();
        assert!((xy - yx.conj()).norm() < 1e-15);
        let a = c(0.3, -1.1);
        let lin = hs_inner(&x, &y.map(|z| z * a)).unwrap();
        assert!((lin - xy * a).norm() < 1e-14);
        assert!(hs_inner(&x, &x).unwrap().re >= 0.0);
    }
}
