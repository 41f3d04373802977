use num_complex::Complex64;
use rand::Rng;

use super::random::{gaussian_matrix, rng_for, EPS_REG};
use crate::error::{Error, Result};
use crate::matkern::{check_dims, validate_state, CMatrix, HermitianMatrix, StateMatrix};
use crate::metrics::{metric_eval, MetricKind};

/// Trace-preservation tolerance on `Σ Kᵢ* Kᵢ − I`.
pub const TOL_TP: f64 = 1e-10;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct CptpMap {
    kraus: Vec<CMatrix>,
}

impl CptpMap {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let n = kraus
            .first()
            .ok_or_else(|| Error::DimensionError("a channel needs at least one Kraus operator".into()))?
            .nrows();
        for k in &kraus {
            if k.shape() != (n, n) {
                return Err(Error::DimensionMismatch { left: n, right: k.nrows() });
            }
        }
        let map = Self { kraus };
        let defect = map.trace_preservation_defect();
        if defect > TOL_TP {
            return Err(Error::InvalidParameter(format!(
                "Kraus operators are not trace preserving (defect {defect:e})"
            )));
        }
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        Self { kraus: vec![CMatrix::identity(n, n)] }
    }

    /// Depolarizing channel `x ↦ (1−p) x + p Tr(x) I/n`, via the Weyl
    /// (clock-and-shift) operators.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("depolarizing p must lie in [0, 1], got {p}")));
        }
        let omega = |k: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let mut kraus = vec![CMatrix::identity(n, n).scale((1.0 - p).sqrt())];
        let w = p.sqrt() / n as f64;
        for a in 0..n {
            for b in 0..n {
                // X^a Z^b: |j⟩ ↦ ω^{bj} |j + a⟩
                let op = CMatrix::from_fn(n, n, |r, c| {
                    if r == (c + a) % n {
                        omega(b * c % n) * w
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                kraus.push(op);
            }
        }
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn trace_preservation_defect(&self) -> f64 {
        let n = self.dim();
        let sum = self.kraus.iter().fold(CMatrix::zeros(n, n), |acc, k| acc + k.adjoint() * k);
        (sum - CMatrix::identity(n, n)).norm()
    }
}

/// Stacks `m` Gaussian `n×n` blocks into an `(mn)×n` matrix, orthonormalizes
/// its columns and slices the result into Kraus operators.
pub fn sample_cptp<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<CptpMap> {
    if m == 0 || n == 0 {
        return Err(Error::DimensionError(format!("need n >= 1 and m >= 1, got n = {n}, m = {m}")));
    }
    let stacked = gaussian_matrix(rng, m * n, n);
    let q = stacked.qr().q();
    let kraus = (0..m).map(|i| q.rows(i * n, n).into_owned()).collect();
    CptpMap::new(kraus)
}

pub fn random_cptp(n: usize, m: usize, seed: u64) -> Result<CptpMap> {
    sample_cptp(&mut rng_for(seed, 0), n, m)
}

/// `Σ Kᵢ x Kᵢ*`.
pub fn apply_cptp(t: &CptpMap, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(t.dim(), x.dim())?;
    let n = t.dim();
    let sum = t
        .kraus
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, k| acc + k * x.as_matrix() * k.adjoint());
    Ok(HermitianMatrix::hermitian_part(sum))
}

/// Contraction margin `λ_ρ(h, h) − λ_{T(ρ)}(T(h), T(h))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotonicityMargin {
    pub margin: f64,
    /// `λ_ρ(h, h)`.
    pub scale: f64,
    /// Whether `T(ρ)` needed `EPS_REG · I` to be faithful.
    pub regularized: bool,
}

impl MonotonicityMargin {
    pub const TOL: f64 = 1e-9;

    pub fn relative(&self) -> f64 {
        self.margin / self.scale.max(f64::MIN_POSITIVE)
    }

    pub fn passes(&self) -> bool {
        self.margin >= -Self::TOL * self.scale
    }
}

pub fn check_monotonicity(
    m: &MetricKind,
    t: &CptpMap,
    rho: &StateMatrix,
    h: &HermitianMatrix,
) -> Result<MonotonicityMargin> {
    let before = metric_eval(m, rho, h, h)?;
    let image = apply_cptp(t, rho.matrix())?;
    let (out, regularized) = match validate_state(&image, false) {
        Ok(s) => (s, false),
        Err(Error::NotPositiveDefinite { .. }) => {
            let reg = &image + &HermitianMatrix::identity(image.dim()).scale(EPS_REG);
            (validate_state(&reg, false)?, true)
        }
        Err(e) => return Err(e),
    };
    let th = apply_cptp(t, h)?;
    let after = metric_eval(m, &out, &th, &th)?;
    Ok(MonotonicityMargin {
        margin: before - after,
        scale: before,
        regularized,
    })
}
