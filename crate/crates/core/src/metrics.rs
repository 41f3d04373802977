//! Monotone Riemannian metrics `λ_ρ(h, k) = Tr h J_ρ(k)`.
//!
//! Each metric is labelled by a symmetric, normalized operator-monotone
//! function `f`. In the eigenbasis of `ρ = Σ dᵢ |i⟩⟨i|` the operator `J_ρ`
//! acts as a Schur multiplier with the Morozova–Chentsov coefficients
//! `c(dᵢ, dⱼ) = 1 / (dⱼ f(dᵢ/dⱼ))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matkern::{
    check_dims, frechet_derivative, trace_product, HermitianMatrix, ScalarFunctionSpec, StateMatrix,
};

/// Sample grid used to check symmetry and normalization of custom functions.
pub fn symmetry_grid() -> Vec<f64> {
    (1..=100).map(|k| 0.1 * k as f64).collect()
}

/// Identifies a monotone metric through its operator-monotone function.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricKind {
    /// Smallest monotone metric, `f(t) = (1+t)/2`.
    Bures,
    /// Largest monotone metric, `f(t) = 2t/(1+t)`.
    Rld,
    /// Wigner–Yanase, `f(t) = ((1+√t)/2)²`.
    Wy,
    /// Bogoliubov–Kubo–Mori, `f(t) = (t−1)/log t`.
    Bkm,
    /// Wigner–Yanase–Dyson family, α ∈ [−3, 3].
    Wyd(f64),
    /// User-supplied `f`; symmetry and normalization are checked on a grid,
    /// operator monotonicity is not (and cannot be from samples).
    Custom(ScalarFunctionSpec),
}

impl MetricKind {
    pub fn wyd(alpha: f64) -> Result<Self> {
        WydFunction::new(alpha)?;
        Ok(Self::Wyd(alpha))
    }

    pub fn custom(spec: ScalarFunctionSpec) -> Result<Self> {
        spec.validate()?;
        let one = spec.eval(1.0)?;
        if (one - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("f(1) = {one}, expected 1")));
        }
        for t in symmetry_grid() {
            let lhs = spec.eval(t)?;
            let rhs = t * spec.eval(1.0 / t)?;
            if (lhs - rhs).abs() > 1e-10 * lhs.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "f is not symmetric at t = {t}: f(t) = {lhs}, t f(1/t) = {rhs}"
                )));
            }
        }
        Ok(Self::Custom(spec))
    }

    /// Parses a metric name; `alpha` is accepted only together with `wyd`.
    pub fn from_name(name: &str, alpha: Option<f64>) -> Result<Self> {
        let kind = match name.to_ascii_lowercase().as_str() {
            "bures" | "sld" => Self::Bures,
            "rld" => Self::Rld,
            "wy" => Self::Wy,
            "bkm" => Self::Bkm,
            "wyd" => {
                let a = alpha.ok_or_else(|| {
                    Error::InvalidParameter("metric wyd requires alpha".into())
                })?;
                return Self::wyd(a);
            }
            other => return Err(Error::InvalidParameter(format!("unknown metric kind '{other}'"))),
        };
        if alpha.is_some() {
            return Err(Error::InvalidParameter(format!(
                "alpha is only meaningful for metric wyd, not {name}"
            )));
        }
        Ok(kind)
    }

    /// The built-in kinds, with WYD at integer α from −3 to 3.
    pub fn builtins() -> Vec<Self> {
        let mut v = vec![Self::Bures, Self::Rld, Self::Wy, Self::Bkm];
        v.extend((-3..=3).map(|a| Self::Wyd(a as f64)));
        v
    }

    /// The operator-monotone function `f(t)`.
    pub fn f(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::DomainError(format!("f(t) requires t > 0, got {t}")));
        }
        Ok(match self {
            Self::Bures => 0.5 * (1.0 + t),
            Self::Rld => 2.0 * t / (1.0 + t),
            Self::Wy => {
                let s = 0.5 * (1.0 + t.sqrt());
                s * s
            }
            Self::Bkm => bkm_f(t),
            Self::Wyd(a) => WydFunction::new(*a)?.eval(t),
            Self::Custom(spec) => spec.eval(t)?,
        })
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bures => f.write_str("bures"),
            Self::Rld => f.write_str("rld"),
            Self::Wy => f.write_str("wy"),
            Self::Bkm => f.write_str("bkm"),
            Self::Wyd(a) => write!(f, "wyd({a})"),
            Self::Custom(s) => write!(f, "custom[{s}]"),
        }
    }
}

fn bkm_f(t: f64) -> f64 {
    let u = t - 1.0;
    if u.abs() < 1e-4 {
        // u / ln(1+u)
        1.0 + u / 2.0 - u * u / 12.0 + u * u * u / 24.0
    } else {
        u / t.ln()
    }
}

/// Operator-monotone function of the WYD(α) metric.
///
/// With `p = (1−α)/2`, matching the Morozova–Chentsov coefficient against
/// the mixed second derivative of `Tr f_α(ρ+th) f_{−α}(ρ+sk)` gives
///
/// ```text
/// f(t) = p(1−p) (t−1)² / ((t^p − 1)(t^(1−p) − 1)),
/// ```
///
/// continuous through p ∈ {0, 1} (the BKM limit) and t = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WydFunction {
    alpha: f64,
}

impl WydFunction {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(-3.0..=3.0).contains(&alpha) {
            return Err(Error::DomainError(format!("WYD alpha must lie in [-3, 3], got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eval(&self, t: f64) -> f64 {
        let l = t.ln();
        if l == 0.0 {
            return 1.0;
        }
        let p = 0.5 * (1.0 - self.alpha);
        // p / (t^p − 1), continuous at p = 0
        let phi = |p: f64| if p == 0.0 { 1.0 / l } else { p / (p * l).exp_m1() };
        let em = l.exp_m1();
        em * em * phi(p) * phi(1.0 - p)
    }
}

/// `f(t)` for any kind.
pub fn builtin_f(m: &MetricKind, t: f64) -> Result<f64> {
    m.f(t)
}

/// The operator-monotone function of the WYD(α) metric.
pub fn wyd_f(alpha: f64) -> Result<WydFunction> {
    WydFunction::new(alpha)
}

/// Morozova–Chentsov coefficient `c(x, y) = 1/(y f(x/y))`.
pub fn mc_coefficient(m: &MetricKind, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::DomainError(format!(
            "coefficient requires positive arguments, got ({x}, {y})"
        )));
    }
    if x == y {
        return Ok(1.0 / x);
    }
    Ok(1.0 / (y * m.f(x / y)?))
}

fn coefficient_table(m: &MetricKind, d: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut c = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..=j {
            let v = mc_coefficient(m, d[i], d[j])?;
            c[i * n + j] = v;
            c[j * n + i] = v;
        }
    }
    Ok(c)
}

/// `J_ρ(k)`: Schur multiplication by `c(dᵢ, dⱼ)` in the eigenbasis of `ρ`.
pub fn apply_j(m: &MetricKind, rho: &StateMatrix, k: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(rho.dim(), k.dim())?;
    let s = rho.spectral();
    let n = rho.dim();
    let c = coefficient_table(m, &s.eigenvalues)?;
    let mut kt = s.to_eigenbasis(k.as_matrix());
    for j in 0..n {
        for i in 0..n {
            kt[(i, j)] *= c[i * n + j];
        }
    }
    Ok(HermitianMatrix::hermitian_part(s.from_eigenbasis(&kt)))
}

/// `λ_ρ(h, k) = Σᵢⱼ conj(h̃ᵢⱼ) k̃ᵢⱼ c(dᵢ, dⱼ)`.
pub fn metric_eval(
    m: &MetricKind,
    rho: &StateMatrix,
    h: &HermitianMatrix,
    k: &HermitianMatrix,
) -> Result<f64> {
    check_dims(rho.dim(), h.dim())?;
    check_dims(rho.dim(), k.dim())?;
    let s = rho.spectral();
    let n = rho.dim();
    let c = coefficient_table(m, &s.eigenvalues)?;
    let ht = s.to_eigenbasis(h.as_matrix());
    let kt = if h == k { ht.clone() } else { s.to_eigenbasis(k.as_matrix()) };
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            acc += (ht[(i, j)].conj() * kt[(i, j)]).re * c[i * n + j];
        }
    }
    Ok(acc)
}

/// WYD metric as the mixed second derivative
/// `∂²/∂t∂s Tr f_α(ρ+th) f_{−α}(ρ+sk)` at zero, evaluated as
/// `Tr(Df_α[ρ](h) · Df_{−α}[ρ](k))`.
pub fn wyd_metric_hessian(
    alpha: f64,
    rho: &StateMatrix,
    h: &HermitianMatrix,
    k: &HermitianMatrix,
) -> Result<f64> {
    WydFunction::new(alpha)?;
    let dh = frechet_derivative(&ScalarFunctionSpec::f_alpha(alpha)?, rho, h)?;
    let dk = frechet_derivative(&ScalarFunctionSpec::f_alpha(-alpha)?, rho, k)?;
    Ok(trace_product(&dh, &dk))
}

/// Smallest margins of `f` to the universal bounds `2t/(1+t) ≤ f(t) ≤ (1+t)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FBoundsReport {
    /// `min f(t) − 2t/(1+t)` over the grid.
    pub lower_margin: f64,
    /// `min (1+t)/2 − f(t)` over the grid.
    pub upper_margin: f64,
}

impl FBoundsReport {
    pub fn within(&self, tol: f64) -> bool {
        self.lower_margin >= -tol && self.upper_margin >= -tol
    }
}

pub fn check_f_bounds(m: &MetricKind, grid: &[f64]) -> Result<FBoundsReport> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("bounds grid is empty".into()));
    }
    let mut report = FBoundsReport {
        lower_margin: f64::INFINITY,
        upper_margin: f64::INFINITY,
    };
    for &t in grid {
        let f = m.f(t)?;
        report.lower_margin = report.lower_margin.min(f - 2.0 * t / (1.0 + t));
        report.upper_margin = report.upper_margin.min(0.5 * (1.0 + t) - f);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkern::validate_state;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn normalization_at_one() {
        for m in MetricKind::builtins() {
            assert!(close(m.f(1.0).unwrap(), 1.0, 1e-15), "{m}");
        }
        assert_eq!(MetricKind::Wyd(0.37).f(1.0).unwrap(), 1.0);
    }

    #[test]
    fn builtin_values() {
        assert_eq!(builtin_f(&MetricKind::Bures, 3.0).unwrap(), 2.0);
        assert_eq!(builtin_f(&MetricKind::Rld, 3.0).unwrap(), 1.5);
        assert!(matches!(builtin_f(&MetricKind::Wy, 0.0), Err(Error::DomainError(_))));
        assert!(matches!(builtin_f(&MetricKind::Bkm, -1.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn builtins_are_symmetric() {
        for m in MetricKind::builtins() {
            for t in symmetry_grid() {
                let lhs = m.f(t).unwrap();
                let rhs = t * m.f(1.0 / t).unwrap();
                assert!(close(lhs, rhs, 1e-12), "{m} at {t}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn wyd_endpoints() {
        assert!(close(wyd_f(0.0).unwrap().eval(4.0), 2.25, 1e-14));
        assert!(close(wyd_f(3.0).unwrap().eval(3.0), 1.5, 1e-14));
        assert!(close(wyd_f(-3.0).unwrap().eval(3.0), 1.5, 1e-14));
        let e = std::f64::consts::E;
        assert!(close(wyd_f(1.0).unwrap().eval(e), e - 1.0, 1e-14));
        assert!(close(wyd_f(-1.0).unwrap().eval(e), e - 1.0, 1e-14));
        for t in symmetry_grid() {
            assert!(close(wyd_f(0.0).unwrap().eval(t), MetricKind::Wy.f(t).unwrap(), 1e-13));
            assert!(close(wyd_f(3.0).unwrap().eval(t), MetricKind::Rld.f(t).unwrap(), 1e-13));
            assert!(close(wyd_f(1.0).unwrap().eval(t), MetricKind::Bkm.f(t).unwrap(), 1e-13));
        }
        assert!(matches!(wyd_f(3.01), Err(Error::DomainError(_))));
    }

    #[test]
    fn wyd_continuous_near_bkm_and_one() {
        let bkm = wyd_f(1.0).unwrap();
        let near = wyd_f(1.0 - 1e-9).unwrap();
        for &t in &[0.2, 0.9, 1.0 + 1e-9, 7.0] {
            assert!(close(bkm.eval(t), near.eval(t), 1e-8));
        }
        assert!(close(wyd_f(2.0).unwrap().eval(1.0 + 1e-12), 1.0, 1e-10));
    }

    #[test]
    fn bkm_series_branch_is_continuous() {
        for &u in &[-1.1e-4, -0.9e-4, 0.9e-4, 1.1e-4] {
            let t: f64 = 1.0 + u;
            assert!(close(MetricKind::Bkm.f(t).unwrap(), u / t.ln(), 1e-12));
        }
    }

    #[test]
    fn coefficient_examples() {
        for m in MetricKind::builtins() {
            assert_eq!(mc_coefficient(&m, 0.5, 0.5).unwrap(), 2.0);
        }
        assert!(close(mc_coefficient(&MetricKind::Bures, 1.0, 3.0).unwrap(), 0.5, 1e-15));
        assert!(close(mc_coefficient(&MetricKind::Rld, 1.0, 3.0).unwrap(), 4.0 / 6.0, 1e-15));
        assert!(mc_coefficient(&MetricKind::Rld, 0.0, 3.0).is_err());
        for m in MetricKind::builtins() {
            let a = mc_coefficient(&m, 0.3, 2.2).unwrap();
            let b = mc_coefficient(&m, 2.2, 0.3).unwrap();
            assert!(close(a, b, 1e-14), "{m}");
        }
    }

    #[test]
    fn f_bounds() {
        let grid = symmetry_grid();
        let r = check_f_bounds(&MetricKind::Bures, &grid).unwrap();
        assert_eq!(r.upper_margin, 0.0);
        let r = check_f_bounds(&MetricKind::Rld, &grid).unwrap();
        assert!(r.lower_margin.abs() < 1e-15);
        for m in MetricKind::builtins() {
            assert!(check_f_bounds(&m, &grid).unwrap().within(1e-12), "{m}");
        }
        assert!(check_f_bounds(&MetricKind::Wyd(2.0), &grid).unwrap().within(0.0));
        assert!(check_f_bounds(&MetricKind::Bures, &[]).is_err());
    }

    #[test]
    fn custom_metric_validation() {
        // Bures f sampled on a grid is symmetric only up to interpolation error,
        // but a linear function is reproduced exactly by the cubic.
        let xs: Vec<f64> = (0..=200).map(|k| 0.05 + 0.05 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|t| 0.5 * (1.0 + t)).collect();
        let spec = ScalarFunctionSpec::custom_grid(xs.clone(), ys).unwrap();
        let m = MetricKind::custom(spec).unwrap();
        assert!(close(m.f(3.0).unwrap(), 2.0, 1e-14));

        let bad: Vec<f64> = xs.iter().map(|t| 0.3 + 0.7 * t).collect();
        assert!(MetricKind::custom(ScalarFunctionSpec::custom_grid(xs.clone(), bad).unwrap()).is_err());
        let asym: Vec<f64> = xs.iter().map(|t| t.powf(0.3)).collect();
        assert!(MetricKind::custom(ScalarFunctionSpec::custom_grid(xs, asym).unwrap()).is_err());
    }

    #[test]
    fn from_name() {
        assert_eq!(MetricKind::from_name("BURES", None).unwrap(), MetricKind::Bures);
        assert_eq!(MetricKind::from_name("wyd", Some(0.5)).unwrap(), MetricKind::Wyd(0.5));
        assert!(MetricKind::from_name("wyd", None).is_err());
        assert!(MetricKind::from_name("wyd", Some(4.0)).is_err());
        assert!(MetricKind::from_name("rld", Some(1.0)).is_err());
        assert!(MetricKind::from_name("fisher", None).is_err());
    }

    #[test]
    fn metric_on_maximally_mixed_qubit() {
        let rho = validate_state(&HermitianMatrix::diagonal(&[0.5, 0.5]), true).unwrap();
        let h = HermitianMatrix::diagonal(&[1.0, -1.0]);
        for m in MetricKind::builtins() {
            assert!(close(metric_eval(&m, &rho, &h, &h).unwrap(), 4.0, 1e-14), "{m}");
            let j = apply_j(&m, &rho, &h).unwrap();
            assert!((j.as_matrix() - h.scale(2.0).as_matrix()).norm() < 1e-14);
        }
        let zero = HermitianMatrix::zeros(2);
        assert_eq!(metric_eval(&MetricKind::Wy, &rho, &zero, &h).unwrap(), 0.0);
        assert_eq!(wyd_metric_hessian(0.7, &rho, &zero, &h).unwrap(), 0.0);
    }

    #[test]
    fn hessian_fisher_on_diagonal() {
        let p = [0.2, 0.3, 0.5];
        let x = [0.4, -0.1, 0.25];
        let rho = validate_state(&HermitianMatrix::diagonal(&p), true).unwrap();
        let h = HermitianMatrix::diagonal(&x);
        let fisher: f64 = x.iter().zip(&p).map(|(x, p)| x * x / p).sum();
        assert!(close(wyd_metric_hessian(0.0, &rho, &h, &h).unwrap(), fisher, 1e-13));
        assert!(close(wyd_metric_hessian(2.5, &rho, &h, &h).unwrap(), fisher, 1e-13));
    }

    #[test]
    fn dimension_mismatch() {
        let rho = validate_state(&HermitianMatrix::diagonal(&[0.5, 0.5]), true).unwrap();
        let h = HermitianMatrix::identity(3);
        assert!(matches!(
            metric_eval(&MetricKind::Bures, &rho, &h, &h),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(apply_j(&MetricKind::Rld, &rho, &h).is_err());
    }
}
