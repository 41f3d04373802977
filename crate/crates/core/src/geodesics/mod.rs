//! Closed-form geodesics and distances on the positive cone and on density
//! matrices.
//!
//! Bures geodesics are images of straight lines between parallel amplitudes
//! `W` with `ρ = W W*`; Wigner–Yanase geodesics are squares of straight lines
//! between matrix square roots. The RLD bound comes from the dual lift
//! `ρ_t = W_t* W_t` of a Bures line.

mod curve;
mod export;

pub use curve::{
    curve_length, rld_geodesic_residual, Curve, CurveKind, CurveSpec, GeodesicResidual,
    PerturbedCurve,
};
pub use export::{write_curve_csv, write_curve_csv_at};

use crate::divergences::{geometric_mean_trace, sandwich_sqrt};
use crate::error::{Error, Result};
use crate::matkern::{
    check_dims, eig_hermitian, max_abs, trace_product, validate_state, CMatrix, HermitianMatrix,
    StateMatrix, TOL_TRACE,
};

/// Purification `W` of `ρ = W W*` (or of `σ = W* W` for the right action).
#[derive(Clone, Debug, PartialEq)]
pub struct Amplitude(CMatrix);

impl Amplitude {
    pub fn new(w: CMatrix) -> Result<Self> {
        if !w.is_square() {
            return Err(Error::NotSquare {
                rows: w.nrows(),
                cols: w.ncols(),
            });
        }
        Ok(Self(w))
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> Amplitude {
        Amplitude(self.0.adjoint())
    }

    /// `W W*`.
    pub fn left_state(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(&self.0 * self.0.adjoint())
    }

    /// `W* W`.
    pub fn right_state(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(self.0.adjoint() * &self.0)
    }
}

/// Tangent `Ẇ W* + W Ẇ*` of `ρ_t = W_t W_t*`.
pub fn amplitude_velocity_projection(w: &Amplitude, wdot: &CMatrix) -> Result<HermitianMatrix> {
    check_square_dims(w, wdot)?;
    let m = wdot * w.0.adjoint();
    Ok(HermitianMatrix::hermitian_part(m.scale(2.0)))
}

/// Outcome of a horizontality test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Horizontality {
    pub horizontal: bool,
    pub defect: f64,
}

const HORIZONTAL_TOL: f64 = 1e-9;

/// `W* Ẇ = Ẇ* W`, i.e. `Ẇ = g W` with `g` Hermitian.
pub fn is_horizontal(w: &Amplitude, wdot: &CMatrix) -> Result<Horizontality> {
    check_square_dims(w, wdot)?;
    let a = w.0.adjoint() * wdot;
    let defect = (&a - a.adjoint()).norm();
    Ok(Horizontality {
        horizontal: defect <= HORIZONTAL_TOL * w.0.norm() * wdot.norm(),
        defect,
    })
}

/// Horizontality for the right action: `Ẇ = W g` with `g` Hermitian,
/// equivalently `Ẇ*` horizontal at `W*`.
pub fn is_co_horizontal(w: &Amplitude, wdot: &CMatrix) -> Result<Horizontality> {
    is_horizontal(&w.adjoint(), &wdot.adjoint())
}

fn check_square_dims(w: &Amplitude, x: &CMatrix) -> Result<()> {
    if x.shape() != w.0.shape() {
        return Err(Error::DimensionMismatch {
            left: w.dim(),
            right: x.nrows(),
        });
    }
    Ok(())
}

/// The amplitude of `ρ₁` parallel to `W₀ = ρ₀^{1/2}`:
/// `W₁ = ρ₀^{−1/2} (ρ₀^{1/2} ρ₁ ρ₀^{1/2})^{1/2}`.
pub fn parallel_amplitude(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<Amplitude> {
    rho0.check_same_dim(rho1)?;
    let is = rho0.inv_sqrt();
    let root = fidelity_operator(rho0, rho1)?.sqrt();
    Amplitude::new(is.as_matrix() * root.as_matrix())
}

/// Deviation of `W₁* W₀` from a positive operator: the smallest eigenvalue of
/// its Hermitian part and the norm of its anti-Hermitian part.
pub fn parallelity_defect(w1: &Amplitude, w0: &Amplitude) -> Result<(f64, f64)> {
    check_dims(w1.dim(), w0.dim())?;
    let m = w1.0.adjoint() * &w0.0;
    let anti = (&m - m.adjoint()).scale(0.5).norm();
    let herm = HermitianMatrix::hermitian_part(m);
    Ok((eig_hermitian(&herm)?.min_eigenvalue(), anti))
}

/// `ρ₀^{1/2} ρ₁ ρ₀^{1/2}` as a state.
fn fidelity_operator(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<StateMatrix> {
    let s = rho0.sqrt();
    let m = HermitianMatrix::hermitian_part(s.as_matrix() * rho1.matrix().as_matrix() * s.as_matrix());
    validate_state(&m, false)
}

/// `Tr (ρ₀^{1/2} ρ₁ ρ₀^{1/2})^{1/2}`.
pub fn root_fidelity(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    rho0.check_same_dim(rho1)?;
    let f = fidelity_operator(rho0, rho1)?;
    Ok(f.spectral().eigenvalues.iter().map(|d| d.sqrt()).sum())
}

/// `Tr ρ₀^{1/2} ρ₁^{1/2}`.
pub fn wy_affinity(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    rho0.check_same_dim(rho1)?;
    Ok(trace_product(&rho0.sqrt(), &rho1.sqrt()))
}

fn require_density(rho: &StateMatrix) -> Result<()> {
    let trace = rho.trace();
    if (trace - 1.0).abs() > TOL_TRACE {
        return Err(Error::TraceNotOne { trace });
    }
    Ok(())
}

fn cone_distance(tr0: f64, tr1: f64, overlap: f64) -> f64 {
    2.0 * (tr0 + tr1 - 2.0 * overlap).max(0.0).sqrt()
}

fn arc_distance(overlap: f64) -> f64 {
    2.0 * overlap.clamp(-1.0, 1.0).acos()
}

/// Bures distance on the cone, `2 √(Tr ρ₀ + Tr ρ₁ − 2 Tr (ρ₀^{1/2} ρ₁ ρ₀^{1/2})^{1/2})`.
pub fn bures_distance_cone(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    Ok(cone_distance(rho0.trace(), rho1.trace(), root_fidelity(rho0, rho1)?))
}

/// Bures distance on density matrices, `2 arccos Tr (ρ₀^{1/2} ρ₁ ρ₀^{1/2})^{1/2}`.
pub fn bures_distance_density(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    require_density(rho0)?;
    require_density(rho1)?;
    Ok(arc_distance(root_fidelity(rho0, rho1)?))
}

/// Wigner–Yanase distance on the cone, `2 ‖ρ₀^{1/2} − ρ₁^{1/2}‖`.
pub fn wy_distance_cone(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    Ok(cone_distance(rho0.trace(), rho1.trace(), wy_affinity(rho0, rho1)?))
}

/// Wigner–Yanase distance on density matrices, `2 arccos Tr ρ₀^{1/2} ρ₁^{1/2}`.
pub fn wy_distance_density(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    require_density(rho0)?;
    require_density(rho1)?;
    Ok(arc_distance(wy_affinity(rho0, rho1)?))
}

/// Upper bound on every monotone geodesic distance on the cone,
/// `2 √(Tr ρ₀ + Tr ρ₁ − 2 Tr ρ₀ # ρ₁)`.
pub fn rld_upper_bound_cone(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    Ok(cone_distance(rho0.trace(), rho1.trace(), geometric_mean_trace(rho0, rho1)?))
}

/// Upper bound on every monotone geodesic distance on density matrices,
/// `2 arccos Tr ρ₀ # ρ₁`.
pub fn rld_upper_bound_density(rho0: &StateMatrix, rho1: &StateMatrix) -> Result<f64> {
    require_density(rho0)?;
    require_density(rho1)?;
    Ok(arc_distance(geometric_mean_trace(rho0, rho1)?))
}

fn curve_point(kind: CurveKind, rho0: &StateMatrix, rho1: &StateMatrix, t: f64, normalized: bool) -> Result<StateMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
    }
    let curve = CurveSpec::new(kind, rho0.clone(), rho1.clone(), normalized)?;
    validate_state(&curve.point(t)?, normalized)
}

/// Point at `t` of the Bures geodesic `(t W₁ + (1−t) W₀)(t W₁ + (1−t) W₀)*`,
/// trace-normalized when `normalized`.
pub fn bures_geodesic(rho0: &StateMatrix, rho1: &StateMatrix, t: f64, normalized: bool) -> Result<StateMatrix> {
    curve_point(CurveKind::BuresLine, rho0, rho1, t, normalized)
}

/// Point at `t` of the Wigner–Yanase geodesic `(t ρ₁^{1/2} + (1−t) ρ₀^{1/2})²`,
/// trace-normalized when `normalized`.
pub fn wy_geodesic(rho0: &StateMatrix, rho1: &StateMatrix, t: f64, normalized: bool) -> Result<StateMatrix> {
    curve_point(CurveKind::WyLine, rho0, rho1, t, normalized)
}

/// Point at `t` of `ρ₀^{1/2} (I + t(q − I))² ρ₀^{1/2}` with
/// `q = (ρ₀^{−1/2} ρ₁ ρ₀^{−1/2})^{1/2}`.
pub fn rld_dual_curve(rho0: &StateMatrix, rho1: &StateMatrix, t: f64) -> Result<StateMatrix> {
    curve_point(CurveKind::RldDual, rho0, rho1, t, false)
}

/// Amplitude endpoints `(B₀, B₁)` such that the curve is `B_t B_t*` with
/// `B_t = (1−t) B₀ + t B₁`.
pub(crate) fn amplitude_endpoints(kind: CurveKind, rho0: &StateMatrix, rho1: &StateMatrix) -> Result<(CMatrix, CMatrix)> {
    rho0.check_same_dim(rho1)?;
    let w0 = rho0.sqrt().into_matrix();
    Ok(match kind {
        CurveKind::BuresLine | CurveKind::BuresArc => {
            let w1 = parallel_amplitude(rho0, rho1)?;
            (w0, w1.0)
        }
        CurveKind::WyLine | CurveKind::WyArc => (w0, rho1.sqrt().into_matrix()),
        CurveKind::RldDual => {
            let q = sandwich_sqrt(rho0, rho1)?;
            let b1 = &w0 * q.as_matrix();
            (w0, b1)
        }
        CurveKind::LinearInterpolation => {
            return Err(Error::InvalidParameter("linear interpolation has no amplitude form".into()))
        }
    })
}

/// Largest relative entry deviation between two matrices.
pub fn relative_deviation(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    max_abs(&(a.as_matrix() - b.as_matrix())) / b.max_abs_entry().max(f64::MIN_POSITIVE)
}
