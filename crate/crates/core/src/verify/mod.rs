//! Random instances, random channels, and property suites that check the
//! geometric claims numerically.
//!
//! Each suite runs `trials` independent trials. Trial `i` draws from the
//! ChaCha stream `i` of the master seed, so reports are reproducible and
//! independent of scheduling. Every check records a margin that must stay
//! at or above `−tolerance`; the report keeps the worst one.

mod channel;
mod random;
mod suites;

pub use channel::{apply_cptp, check_monotonicity, random_cptp, sample_cptp, CptpMap, MonotonicityMargin};
pub use random::{
    gaussian_matrix, random_state, random_tangent, rng_for, sample_diagonal_state, sample_state,
    sample_tangent, sample_unitary, sample_well_conditioned, EPS_REG,
};
pub use suites::{Observation, COMMUTATOR_THRESHOLD};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::Error;

/// Property suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Distance inequality chains on the cone and on density matrices.
    Chain,
    /// Contraction of every built-in metric under random channels.
    Monotonicity,
    /// Numerical curve lengths against closed-form distances.
    Lengths,
    /// RLD geodesic-equation residual of the dual curve.
    Residuals,
    /// WYD hessian against the Morozova–Chentsov evaluation.
    HessianCrosscheck,
    /// Fréchet derivatives against central differences.
    FrechetFd,
    /// Universal bounds on `f` and the induced metric ordering.
    BoundsF,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Chain,
        Suite::Monotonicity,
        Suite::Lengths,
        Suite::Residuals,
        Suite::HessianCrosscheck,
        Suite::FrechetFd,
        Suite::BoundsF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Chain => "chain",
            Suite::Monotonicity => "monotonicity",
            Suite::Lengths => "lengths",
            Suite::Residuals => "residuals",
            Suite::HessianCrosscheck => "hessian_crosscheck",
            Suite::FrechetFd => "frechet_fd",
            Suite::BoundsF => "bounds_f",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

/// Aggregated outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub worst_margin: f64,
    pub detail: String,
}

/// Serializable outcome of a suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

struct Aggregate {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    worst_trial: usize,
    count: usize,
    failures: usize,
    errors: usize,
    first_error: Option<String>,
}

impl Aggregate {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: f64::INFINITY,
            worst_trial: 0,
            count: 0,
            failures: 0,
            errors: 0,
            first_error: None,
        }
    }

    fn finish(self) -> CheckResult {
        let mut detail = format!(
            "{} observations, tolerance {:e}, worst at trial {}",
            self.count, self.tolerance, self.worst_trial
        );
        if self.failures > 0 {
            detail.push_str(&format!(", {} below tolerance", self.failures));
        }
        if let Some(e) = &self.first_error {
            detail.push_str(&format!(", {} errors (first: {e})", self.errors));
        }
        CheckResult {
            name: self.name.to_string(),
            pass: self.failures == 0 && self.errors == 0 && self.worst.is_finite(),
            worst_margin: if self.worst.is_finite() { self.worst } else { f64::MIN },
            detail,
        }
    }
}

/// Runs `suite` for `trials` trials from `seed`. Failures are recorded in the
/// report, never raised.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let per_trial: Vec<Vec<Observation>> = (0..trials)
        .into_par_iter()
        .map(|i| suites::run_trial(suite, &mut rng_for(seed, i as u64), i))
        .collect();

    let mut aggregates: Vec<Aggregate> = Vec::new();
    for (trial, observations) in per_trial.into_iter().enumerate() {
        for obs in observations {
            let idx = match aggregates.iter().position(|a| a.name == obs.name) {
                Some(i) => i,
                None => {
                    aggregates.push(Aggregate::new(obs.name, obs.tolerance));
                    aggregates.len() - 1
                }
            };
            let agg = &mut aggregates[idx];
            agg.count += 1;
            match obs.margin {
                Ok(m) => {
                    if m.is_nan() || m < -obs.tolerance {
                        agg.failures += 1;
                    }
                    if m < agg.worst || m.is_nan() {
                        agg.worst = if m.is_nan() { f64::NEG_INFINITY } else { m };
                        agg.worst_trial = trial;
                    }
                }
                Err(e) => {
                    agg.errors += 1;
                    agg.first_error.get_or_insert(e);
                }
            }
        }
    }

    VerificationReport {
        suite: suite.name().to_string(),
        seed,
        trials,
        checks: aggregates.into_iter().map(Aggregate::finish).collect(),
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_an_empty_pass() {
        for suite in Suite::ALL {
            let r = run_suite(suite, 0, 1);
            assert!(r.checks.is_empty());
            assert!(r.all_pass());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("chains".parse::<Suite>().is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = run_suite(Suite::BoundsF, 2, 3);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["suite", "seed", "trials", "checks", "runtime_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let check = &v["checks"][0];
        for key in ["name", "pass", "worst_margin", "detail"] {
            assert!(check.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = run_suite(Suite::Chain, 6, 42);
        let b = run_suite(Suite::Chain, 6, 42);
        let margins = |r: &VerificationReport| r.checks.iter().map(|c| c.worst_margin.to_bits()).collect::<Vec<_>>();
        assert_eq!(margins(&a), margins(&b));
    }

    #[test]
    fn small_runs_of_every_suite_pass() {
        for suite in Suite::ALL {
            let r = run_suite(suite, 3, 5);
            assert!(!r.checks.is_empty());
            for c in &r.checks {
                assert!(c.pass, "{suite}/{}: {} ({})", c.name, c.worst_margin, c.detail);
            }
        }
    }
}
