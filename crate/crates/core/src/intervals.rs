//! Observed-information (Wald) intervals and percentile parametric-bootstrap
//! intervals for `(alpha, lambda1, lambda2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::fit_mle;
use crate::model::{BjpcSample, Parameter, WeibullFit};
use crate::par::{map_reps, Execution};
use crate::rng::RngStream;
use crate::simulate::{scheme_id, simulate_spacings};
use crate::special::{std_normal_quantile, Probability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMethod {
    Asymptotic,
    Bootstrap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate {
    pub parameter: Parameter,
    pub lower: f64,
    pub upper: f64,
    pub level: Probability,
    pub method: IntervalMethod,
}

impl IntervalEstimate {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }
}

pub type Matrix3 = [[f64; 3]; 3];

/// Negative Hessian of the log-likelihood at the fit, ordered
/// `(alpha, lambda1, lambda2)`.
pub fn observed_information(sample: &BjpcSample, fit: &WeibullFit) -> Result<Matrix3> {
    if !(fit.lambda1 > 0.0 && fit.lambda2 > 0.0) {
        return Err(Error::Domain(
            "observed information needs interior scale estimates".into(),
        ));
    }
    let k = sample.k() as f64;
    let ps = sample.power_sums(fit.alpha);
    let cross = ps.a_prime();
    let aa = k / (fit.alpha * fit.alpha) + (fit.lambda1 + fit.lambda2) * ps.a_second();
    let l1 = sample.k1() as f64 / (fit.lambda1 * fit.lambda1);
    let l2 = sample.k2() as f64 / (fit.lambda2 * fit.lambda2);
    Ok([[aa, cross, cross], [cross, l1, 0.0], [cross, 0.0, l2]])
}

/// Lower Cholesky factor; fails unless `m` is positive definite.
pub fn cholesky(m: &Matrix3) -> Result<Matrix3> {
    let mut l = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let s: f64 = (0..j).map(|p| l[i][p] * l[j][p]).sum();
            if i == j {
                let d = m[i][i] - s;
                if !(d > 0.0 && d.is_finite()) {
                    return Err(Error::SingularInformation);
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Inverse of a symmetric positive-definite matrix through its Cholesky factor.
#[allow(clippy::needless_range_loop)]
pub fn spd_inverse(m: &Matrix3) -> Result<Matrix3> {
    let l = cholesky(m)?;
    let mut inv = [[0.0; 3]; 3];
    for col in 0..3 {
        let mut y = [0.0; 3];
        for i in 0..3 {
            let rhs = if i == col { 1.0 } else { 0.0 };
            y[i] = (rhs - (0..i).map(|p| l[i][p] * y[p]).sum::<f64>()) / l[i][i];
        }
        let mut x = [0.0; 3];
        for i in (0..3).rev() {
            x[i] = (y[i] - (i + 1..3).map(|p| l[p][i] * x[p]).sum::<f64>()) / l[i][i];
        }
        for i in 0..3 {
            inv[i][col] = x[i];
        }
    }
    Ok(inv)
}

/// `theta_hat -/+ z sqrt((I^-1)_jj)`, with scale lower limits clamped at 0.
pub fn asymptotic_ci(
    sample: &BjpcSample,
    fit: &WeibullFit,
    level: Probability,
) -> Result<[IntervalEstimate; 3]> {
    let cov = spd_inverse(&observed_information(sample, fit)?)?;
    let z = std_normal_quantile(1.0 - 0.5 * (1.0 - level.value()))?;
    Ok(std::array::from_fn(|j| {
        let p = Parameter::ALL[j];
        let centre = fit.get(p);
        let half = z * cov[j][j].sqrt();
        let mut lower = centre - half;
        if p != Parameter::Alpha {
            lower = lower.max(0.0);
        }
        IntervalEstimate {
            parameter: p,
            lower,
            upper: centre + half,
            level,
            method: IntervalMethod::Asymptotic,
        }
    }))
}

/// Percentile interval from replicate values: order statistics at indices
/// `ceil(q B)` for `q = (1 - level) / 2` and `1 - (1 - level) / 2`.
pub fn percentile_interval(values: &[f64], level: Probability) -> (f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let tail = 0.5 * (1.0 - level.value());
    let pick = |q: f64| {
        let idx = ((q * n as f64) - 1e-9).ceil() as usize;
        v[idx.clamp(1, n) - 1]
    };
    (pick(tail), pick(1.0 - tail))
}

/// Bootstrap intervals plus the number of discarded replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapOutcome {
    pub intervals: [IntervalEstimate; 3],
    pub failed: usize,
    pub reps: usize,
}

/// Parametric percentile bootstrap: resample from the fitted model under the
/// sample's scheme and refit by MLE.
pub fn bootstrap_ci(
    sample: &BjpcSample,
    fit: &WeibullFit,
    level: Probability,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<BootstrapOutcome> {
    if reps < 100 {
        return Err(Error::Domain(format!(
            "bootstrap needs at least 100 replications, got {reps}"
        )));
    }
    let params = fit.params()?;
    let scheme = sample.scheme();
    let id = scheme_id(scheme) ^ 0x424f_4f54;
    let refits = map_reps(exec, reps, |r| {
        let mut rng = RngStream::for_replication(seed, id, r as u64).rng();
        let boot = simulate_spacings(scheme, &params, &mut rng);
        fit_mle(&boot)
            .ok()
            .map(|(f, _)| [f.alpha, f.lambda1, f.lambda2])
    });
    let ok: Vec<[f64; 3]> = refits.iter().flatten().copied().collect();
    let failed = reps - ok.len();
    if failed * 20 > reps {
        return Err(Error::BootstrapFailures {
            failed,
            total: reps,
        });
    }
    let intervals = std::array::from_fn(|j| {
        let column: Vec<f64> = ok.iter().map(|v| v[j]).collect();
        let (lower, upper) = percentile_interval(&column, level);
        IntervalEstimate {
            parameter: Parameter::ALL[j],
            lower: if j == 0 { lower } else { lower.max(0.0) },
            upper,
            level,
            method: IntervalMethod::Bootstrap,
        }
    });
    Ok(BootstrapOutcome {
        intervals,
        failed,
        reps,
    })
}
