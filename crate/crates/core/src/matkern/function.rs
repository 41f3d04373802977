use std::fmt;

use crate::error::{Error, Result};

/// Scalar functions that can be lifted to Hermitian matrices.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFunctionSpec {
    /// `x^p`.
    Power(f64),
    Log,
    Sqrt,
    /// `2/(1−α) · x^((1−α)/2)` for α ≠ 1, `log x` for α = 1.
    FAlpha(f64),
    /// `2 + 2x − 4√x`.
    G0,
    /// Monotone cubic interpolant through user-supplied samples.
    CustomGrid(MonotoneCubic),
}

impl ScalarFunctionSpec {
    pub fn f_alpha(alpha: f64) -> Result<Self> {
        let spec = Self::FAlpha(alpha);
        spec.validate()?;
        Ok(spec)
    }

    pub fn custom_grid(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Ok(Self::CustomGrid(MonotoneCubic::new(xs, ys)?))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Power(p) if !p.is_finite() => {
                Err(Error::InvalidParameter(format!("power exponent must be finite, got {p}")))
            }
            Self::FAlpha(a) if !(-3.0..=3.0).contains(&a) => {
                Err(Error::InvalidParameter(format!("alpha must lie in [-3, 3], got {a}")))
            }
            _ => Ok(()),
        }
    }

    fn check_domain(&self, x: f64, allow_zero: bool) -> Result<()> {
        let ok = match self {
            Self::Power(p) if p.fract() == 0.0 && *p >= 0.0 => x.is_finite(),
            Self::CustomGrid(g) => g.contains(x),
            _ if allow_zero => x >= 0.0,
            _ => x > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainError(format!("{self} is undefined at {x}")))
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let allow_zero = match self {
            Self::Sqrt | Self::G0 => true,
            Self::Power(p) => *p > 0.0,
            Self::FAlpha(a) => *a < 1.0,
            _ => false,
        };
        self.check_domain(x, allow_zero)?;
        Ok(match self {
            Self::Power(p) => x.powf(*p),
            Self::Log => x.ln(),
            Self::Sqrt => x.sqrt(),
            Self::FAlpha(a) if *a == 1.0 => x.ln(),
            Self::FAlpha(a) => 2.0 / (1.0 - a) * x.powf(0.5 * (1.0 - a)),
            Self::G0 => 2.0 + 2.0 * x - 4.0 * x.sqrt(),
            Self::CustomGrid(g) => g.eval(x),
        })
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x, false)?;
        Ok(match self {
            Self::Power(p) if *p == 0.0 => 0.0,
            Self::Power(p) => p * x.powf(p - 1.0),
            Self::Log => 1.0 / x,
            Self::Sqrt => 0.5 / x.sqrt(),
            Self::FAlpha(a) => x.powf(-0.5 * (1.0 + a)),
            Self::G0 => 2.0 - 2.0 / x.sqrt(),
            Self::CustomGrid(g) => g.derivative(x),
        })
    }

    /// `(f(x) − f(y))/(x − y)` for `x ≠ y`, in a cancellation-free form where
    /// one exists.
    pub(crate) fn divided_difference_exact(&self, x: f64, y: f64) -> Result<f64> {
        self.check_domain(x, false)?;
        self.check_domain(y, false)?;
        let positive = x > 0.0 && y > 0.0;
        Ok(match self {
            Self::Power(p) if positive => power_dd(*p, x, y),
            Self::FAlpha(a) if *a == 1.0 => log_dd(x, y),
            Self::FAlpha(a) => 2.0 / (1.0 - a) * power_dd(0.5 * (1.0 - a), x, y),
            Self::Log => log_dd(x, y),
            Self::Sqrt => 1.0 / (x.sqrt() + y.sqrt()),
            Self::G0 => 2.0 - 4.0 / (x.sqrt() + y.sqrt()),
            _ => (self.eval(x)? - self.eval(y)?) / (x - y),
        })
    }
}

// x^p − y^p = y^p·expm1(p·L) and x − y = y·expm1(L), with L = ln(x/y).
fn power_dd(p: f64, x: f64, y: f64) -> f64 {
    let l = (x / y).ln();
    if l == 0.0 {
        return p * y.powf(p - 1.0);
    }
    y.powf(p - 1.0) * (p * l).exp_m1() / l.exp_m1()
}

fn log_dd(x: f64, y: f64) -> f64 {
    let l = (x / y).ln();
    if l == 0.0 {
        return 1.0 / y;
    }
    l / (y * l.exp_m1())
}

impl fmt::Display for ScalarFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(p) => write!(f, "power({p})"),
            Self::Log => f.write_str("log"),
            Self::Sqrt => f.write_str("sqrt"),
            Self::FAlpha(a) => write!(f, "f_alpha({a})"),
            Self::G0 => f.write_str("g0"),
            Self::CustomGrid(g) => write!(f, "custom-grid({} points)", g.xs.len()),
        }
    }
}

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch–Carlson
/// slopes, harmonic-mean interior weights).
///
/// Defined only on `[xs[0], xs[last]]`; evaluation outside is a domain error.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::InvalidParameter(
                "custom grid needs at least two (x, y) points of equal count".into(),
            ));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("custom grid values must be finite".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "custom grid abscissae must be strictly increasing".into(),
            ));
        }
        let slopes = pchip_slopes(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.xs[0] && x <= self.xs[self.xs.len() - 1]
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.saturating_sub(1).min(self.xs.len() - 2)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let h = self.xs[k + 1] - self.xs[k];
        let s = (x - self.xs[k]) / h;
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let h = self.xs[k + 1] - self.xs[k];
        let s = (x - self.xs[k]) / h;
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h
    }
}

fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 * d1 > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
