use rayon::prelude::*;

use super::amplitude_endpoints;
use crate::error::{Error, Result};
use crate::matkern::{hs_inner, validate_state, CMatrix, HermitianMatrix, StateMatrix};
use crate::metrics::{metric_eval, MetricKind};

/// Step used for central-difference derivatives of curves without an
/// analytic tangent.
pub const DIFF_STEP: f64 = 1e-4;

/// A smooth curve `t ∈ [0, 1] → ℳ`.
pub trait Curve: Sync {
    fn dim(&self) -> usize;

    fn point(&self, t: f64) -> Result<HermitianMatrix>;

    fn velocity(&self, t: f64) -> Result<HermitianMatrix> {
        let h = DIFF_STEP;
        let plus = self.point(t + h)?;
        let minus = self.point(t - h)?;
        Ok((&plus - &minus).scale(0.5 / h))
    }

    fn acceleration(&self, t: f64) -> Result<HermitianMatrix> {
        let h = DIFF_STEP;
        let plus = self.point(t + h)?;
        let mid = self.point(t)?;
        let minus = self.point(t - h)?;
        Ok((&(&plus + &minus) - &mid.scale(2.0)).scale(1.0 / (h * h)))
    }
}

/// Built-in curve families between two states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// Bures geodesic on the cone: image of the segment between parallel amplitudes.
    BuresLine,
    /// Trace-normalized Bures line (geodesic on density matrices).
    BuresArc,
    /// `(t ρ₁^{1/2} + (1−t) ρ₀^{1/2})²`.
    WyLine,
    /// Trace-normalized WY line.
    WyArc,
    /// `ρ₀^{1/2} (I + t(q − I))² ρ₀^{1/2}`, the dual lift of a Bures line.
    RldDual,
    /// `(1−t) ρ₀ + t ρ₁`.
    LinearInterpolation,
}

impl CurveKind {
    pub const ALL: [CurveKind; 6] = [
        CurveKind::BuresLine,
        CurveKind::BuresArc,
        CurveKind::WyLine,
        CurveKind::WyArc,
        CurveKind::RldDual,
        CurveKind::LinearInterpolation,
    ];

    /// Arc kinds always live on density matrices.
    pub fn forces_normalization(self) -> bool {
        matches!(self, CurveKind::BuresArc | CurveKind::WyArc)
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::BuresLine => "bures-line",
            CurveKind::BuresArc => "bures-arc",
            CurveKind::WyLine => "wy-line",
            CurveKind::WyArc => "wy-arc",
            CurveKind::RldDual => "rld-dual",
            CurveKind::LinearInterpolation => "linear",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown curve kind '{s}'")))
    }
}

#[derive(Clone, Debug)]
enum Shape {
    /// `B_t B_t*` with `B_t = B₀ + t Δ`.
    Amplitude { b0: CMatrix, delta: CMatrix },
    /// `ρ₀ + t Δ`.
    Linear { r0: CMatrix, delta: CMatrix },
}

/// An analytic curve between two states. Every built-in kind is quadratic in
/// `t` before normalization, so tangents and accelerations are exact.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    kind: CurveKind,
    rho0: StateMatrix,
    rho1: StateMatrix,
    normalized: bool,
    shape: Shape,
}

impl CurveSpec {
    pub fn new(kind: CurveKind, rho0: StateMatrix, rho1: StateMatrix, normalized: bool) -> Result<Self> {
        rho0.check_same_dim(&rho1)?;
        let normalized = normalized || kind.forces_normalization();
        if normalized {
            for r in [&rho0, &rho1] {
                let trace = r.trace();
                if (trace - 1.0).abs() > crate::matkern::TOL_TRACE {
                    return Err(Error::TraceNotOne { trace });
                }
            }
        }
        let shape = match kind {
            CurveKind::LinearInterpolation => {
                let r0 = rho0.matrix().as_matrix().clone();
                let delta = rho1.matrix().as_matrix() - &r0;
                Shape::Linear { r0, delta }
            }
            _ => {
                let (b0, b1) = amplitude_endpoints(kind, &rho0, &rho1)?;
                let delta = b1 - &b0;
                Shape::Amplitude { b0, delta }
            }
        };
        Ok(Self {
            kind,
            rho0,
            rho1,
            normalized,
            shape,
        })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn endpoints(&self) -> (&StateMatrix, &StateMatrix) {
        (&self.rho0, &self.rho1)
    }

    /// Unnormalized value with its first two derivatives.
    fn jet(&self, t: f64) -> [CMatrix; 3] {
        match &self.shape {
            Shape::Amplitude { b0, delta } => {
                let b = b0 + delta.scale(t);
                let n = &b * b.adjoint();
                let d1 = delta * b.adjoint();
                let nd = &d1 + d1.adjoint();
                let ndd = (delta * delta.adjoint()).scale(2.0);
                [n, nd, ndd]
            }
            Shape::Linear { r0, delta } => {
                let n = r0 + delta.scale(t);
                let nd = delta.clone();
                let ndd = CMatrix::zeros(n.nrows(), n.ncols());
                [n, nd, ndd]
            }
        }
    }

    /// `ρ_t`, `ρ̇_t`, `ρ̈_t`, after normalization when applicable.
    fn derivatives(&self, t: f64) -> [HermitianMatrix; 3] {
        let [n, nd, ndd] = self.jet(t);
        if !self.normalized {
            return [n, nd, ndd].map(HermitianMatrix::hermitian_part);
        }
        let tau = n.trace().re;
        let tau1 = nd.trace().re;
        let tau2 = ndd.trace().re;
        let rho = n.scale(1.0 / tau);
        let rho1 = nd.scale(1.0 / tau) - n.scale(tau1 / (tau * tau));
        let rho2 = ndd.scale(1.0 / tau) - nd.scale(2.0 * tau1 / (tau * tau)) - n.scale(tau2 / (tau * tau))
            + n.scale(2.0 * tau1 * tau1 / (tau * tau * tau));
        [rho, rho1, rho2].map(HermitianMatrix::hermitian_part)
    }

    /// Evaluates the curve at `samples` evenly spaced parameters in `[0, 1]`.
    pub fn sample(&self, samples: usize) -> Result<Vec<(f64, HermitianMatrix)>> {
        if samples < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 samples, got {samples}")));
        }
        (0..samples)
            .map(|k| {
                let t = k as f64 / (samples - 1) as f64;
                Ok((t, self.point(t)?))
            })
            .collect()
    }
}

impl Curve for CurveSpec {
    fn dim(&self) -> usize {
        self.rho0.dim()
    }

    fn point(&self, t: f64) -> Result<HermitianMatrix> {
        let [rho, _, _] = self.derivatives(t);
        Ok(rho)
    }

    fn velocity(&self, t: f64) -> Result<HermitianMatrix> {
        let [_, v, _] = self.derivatives(t);
        Ok(v)
    }

    fn acceleration(&self, t: f64) -> Result<HermitianMatrix> {
        let [_, _, a] = self.derivatives(t);
        Ok(a)
    }
}

/// A fixed-endpoint variation `ρ_t + ε sin(kπt) H` of another curve.
#[derive(Clone, Debug)]
pub struct PerturbedCurve<'a, C: Curve> {
    pub base: &'a C,
    pub direction: HermitianMatrix,
    pub amplitude: f64,
    pub mode: u32,
}

impl<C: Curve> PerturbedCurve<'_, C> {
    fn bump(&self, t: f64) -> (f64, f64) {
        let w = self.mode as f64 * std::f64::consts::PI;
        (self.amplitude * (w * t).sin(), self.amplitude * w * (w * t).cos())
    }
}

impl<C: Curve> Curve for PerturbedCurve<'_, C> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn point(&self, t: f64) -> Result<HermitianMatrix> {
        let (b, _) = self.bump(t);
        Ok(&self.base.point(t)? + &self.direction.scale(b))
    }

    fn velocity(&self, t: f64) -> Result<HermitianMatrix> {
        let (_, db) = self.bump(t);
        Ok(&self.base.velocity(t)? + &self.direction.scale(db))
    }
}

/// Length `∫₀¹ √λ_{ρ_t}(ρ̇_t, ρ̇_t) dt` by composite Simpson quadrature over
/// `panels` equal panels (one midpoint per panel).
pub fn curve_length<C: Curve + ?Sized>(m: &MetricKind, curve: &C, panels: usize) -> Result<f64> {
    if panels < 8 {
        return Err(Error::InvalidParameter(format!("panels must be at least 8, got {panels}")));
    }
    let nodes = 2 * panels + 1;
    let h = 1.0 / panels as f64;
    let speeds = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / (nodes - 1) as f64;
            let rho = validate_state(&curve.point(t)?, false)?;
            let v = curve.velocity(t)?;
            Ok(metric_eval(m, &rho, &v, &v)?.max(0.0).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    let sum: f64 = speeds
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let w = if k == 0 || k == nodes - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * s
        })
        .sum();
    Ok(sum * h / 6.0)
}

/// Residual of the RLD geodesic equation
/// `ρ̈ + (L_ρ + R_ρ)^{−1}(ρ̇²) − ρ̇ ρ^{−1} ρ̇ = a(t) ρ̇` at one parameter.
#[derive(Clone, Debug)]
pub struct GeodesicResidual {
    /// Left-hand side of the equation.
    pub residual: HermitianMatrix,
    /// Least-squares reparametrization coefficient `a(t)`.
    pub fitted_a: f64,
    /// `‖residual − a ρ̇‖`; zero iff the curve is a reparametrized geodesic at `t`.
    pub orthogonal_defect: f64,
}

pub fn rld_geodesic_residual<C: Curve + ?Sized>(curve: &C, t: f64) -> Result<GeodesicResidual> {
    let rho = validate_state(&curve.point(t)?, false)?;
    let v = curve.velocity(t)?;
    let acc = curve.acceleration(t)?;
    let vnorm = v.norm();
    if vnorm < 1e-12 {
        return Err(Error::DegenerateTangent { norm: vnorm });
    }
    let vm = v.as_matrix();
    let v2 = vm * vm;
    let s = rho.spectral();
    let lr_inv = s.schur_multiply(&v2, |x, y| 1.0 / (x + y));
    let vinv_v = vm * rho.inverse().as_matrix() * vm;
    let residual = HermitianMatrix::hermitian_part(acc.as_matrix() + lr_inv - vinv_v);
    let fitted_a = hs_inner(vm, residual.as_matrix())?.re / (vnorm * vnorm);
    let orthogonal_defect = (residual.as_matrix() - vm.scale(fitted_a)).norm();
    Ok(GeodesicResidual {
        residual,
        fitted_a,
        orthogonal_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::relative_deviation;
    use num_complex::Complex64;

    fn state(n: usize, re: &[f64], im: &[f64], unit: bool) -> StateMatrix {
        let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(re[i * n + j], im[i * n + j]));
        validate_state(&HermitianMatrix::new(m).unwrap(), unit).unwrap()
    }

    fn qubits() -> (StateMatrix, StateMatrix) {
        (
            state(2, &[0.7, 0.2, 0.2, 0.3], &[0.0, -0.1, 0.1, 0.0], true),
            state(2, &[0.4, -0.1, -0.1, 0.6], &[0.0, 0.25, -0.25, 0.0], true),
        )
    }

    struct Sampled(CurveSpec);

    impl Curve for Sampled {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn point(&self, t: f64) -> Result<HermitianMatrix> {
            self.0.point(t)
        }
    }

    #[test]
    fn endpoints_for_every_kind() {
        let (a, b) = qubits();
        for kind in CurveKind::ALL {
            for normalized in [false, true] {
                let c = CurveSpec::new(kind, a.clone(), b.clone(), normalized).unwrap();
                assert!(relative_deviation(&c.point(0.0).unwrap(), a.matrix()) < 1e-9, "{kind:?}");
                assert!(relative_deviation(&c.point(1.0).unwrap(), b.matrix()) < 1e-9, "{kind:?}");
            }
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let (a, b) = qubits();
        for kind in CurveKind::ALL {
            for normalized in [false, true] {
                let c = CurveSpec::new(kind, a.clone(), b.clone(), normalized).unwrap();
                let fd = Sampled(c.clone());
                for t in [0.2, 0.5, 0.9] {
                    let dv = (c.velocity(t).unwrap().as_matrix() - fd.velocity(t).unwrap().as_matrix()).norm();
                    let da = (c.acceleration(t).unwrap().as_matrix() - fd.acceleration(t).unwrap().as_matrix()).norm();
                    assert!(dv < 1e-7, "{kind:?} velocity {dv:e}");
                    assert!(da < 1e-5, "{kind:?} acceleration {da:e}");
                }
            }
        }
    }

    #[test]
    fn normalized_curves_have_unit_trace() {
        let (a, b) = qubits();
        let c = CurveSpec::new(CurveKind::BuresArc, a, b, false).unwrap();
        assert!(c.is_normalized());
        for (_, p) in c.sample(11).unwrap() {
            assert!((p.trace() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn normalized_requires_density_endpoints() {
        let a = validate_state(&HermitianMatrix::diagonal(&[1.0, 2.0]), false).unwrap();
        assert!(matches!(
            CurveSpec::new(CurveKind::WyArc, a.clone(), a, false),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn constant_curve_has_zero_length_and_degenerate_tangent() {
        let (a, _) = qubits();
        let c = CurveSpec::new(CurveKind::RldDual, a.clone(), a, false).unwrap();
        assert!(curve_length(&MetricKind::Bures, &c, 16).unwrap() < 1e-12);
        assert!(matches!(rld_geodesic_residual(&c, 0.5), Err(Error::DegenerateTangent { .. })));
    }

    #[test]
    fn rejects_too_few_panels() {
        let (a, b) = qubits();
        let c = CurveSpec::new(CurveKind::BuresLine, a, b, false).unwrap();
        assert!(curve_length(&MetricKind::Bures, &c, 7).is_err());
    }

    #[test]
    fn lengths_match_closed_forms() {
        let (a, b) = qubits();
        let bures = CurveSpec::new(CurveKind::BuresLine, a.clone(), b.clone(), false).unwrap();
        let l = curve_length(&MetricKind::Bures, &bures, 64).unwrap();
        let d = crate::geodesics::bures_distance_cone(&a, &b).unwrap();
        assert!((l - d).abs() < 1e-10 * d);

        let wy = CurveSpec::new(CurveKind::WyLine, a.clone(), b.clone(), false).unwrap();
        let l = curve_length(&MetricKind::Wy, &wy, 64).unwrap();
        let d = crate::geodesics::wy_distance_cone(&a, &b).unwrap();
        assert!((l - d).abs() < 1e-10 * d);

        let rld = CurveSpec::new(CurveKind::RldDual, a.clone(), b.clone(), false).unwrap();
        let l = curve_length(&MetricKind::Rld, &rld, 64).unwrap();
        let d = crate::geodesics::rld_upper_bound_cone(&a, &b).unwrap();
        assert!((l - d).abs() < 1e-10 * d);
    }

    #[test]
    fn residual_vanishes_for_commuting_rld_dual() {
        let p = validate_state(&HermitianMatrix::diagonal(&[0.2, 0.3, 0.5]), true).unwrap();
        let q = validate_state(&HermitianMatrix::diagonal(&[0.6, 0.1, 0.3]), true).unwrap();
        let c = CurveSpec::new(CurveKind::RldDual, p, q, false).unwrap();
        for t in [0.25, 0.5, 0.75] {
            let r = rld_geodesic_residual(&c, t).unwrap();
            assert!(r.orthogonal_defect < 1e-12);
            assert!(r.residual.norm() < 1e-12);
        }
    }

    #[test]
    fn residual_nonzero_for_noncommuting_rld_dual() {
        let (a, b) = qubits();
        let c = CurveSpec::new(CurveKind::RldDual, a, b, false).unwrap();
        let worst = [0.25, 0.5, 0.75]
            .iter()
            .map(|&t| rld_geodesic_residual(&c, t).unwrap().orthogonal_defect)
            .fold(0.0, f64::max);
        assert!(worst > 1e-4, "{worst:e}");
    }

    #[test]
    fn perturbation_keeps_endpoints_and_lengthens() {
        let (a, b) = qubits();
        let base = CurveSpec::new(CurveKind::BuresLine, a, b, false).unwrap();
        let dir = HermitianMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let p = PerturbedCurve {
            base: &base,
            direction: dir,
            amplitude: 0.02,
            mode: 2,
        };
        assert!(relative_deviation(&p.point(1.0).unwrap(), &base.point(1.0).unwrap()) < 1e-14);
        let l0 = curve_length(&MetricKind::Bures, &base, 128).unwrap();
        let l1 = curve_length(&MetricKind::Bures, &p, 128).unwrap();
        assert!(l1 > l0);
    }
}
