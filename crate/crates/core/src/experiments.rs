//! Simulation studies: estimator bias/MSE, interval coverage, exact-region
//! coverage and pivot draws.
//!
//! Replications whose sample has no failures from one population are redrawn
//! and counted in `discarded`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{fit_amle_from_constants, fit_mle, XiRule};
use crate::intervals::{asymptotic_ci, bootstrap_ci, IntervalEstimate};
use crate::model::{BjpcSample, CensoringScheme, Parameter, WeibullFit, WeibullParams};
use crate::par::{map_reps, Execution};
use crate::region::{
    alpha_confidence_interval, joint_region_with, lambda_sum_bounds, t1_pivot, t2_pivot,
    RegionLevels, DEFAULT_GRID,
};
use crate::rng::{mix, RngStream};
use crate::simulate::{scheme_id, simulate_spacings};
use crate::special::Probability;
use crate::stats::McEstimate;

const MAX_REDRAWS: usize = 10_000;

/// Draws until both populations have at least one failure.
pub fn draw_interior<R: Rng + ?Sized>(
    scheme: &CensoringScheme,
    truth: &WeibullParams,
    rng: &mut R,
) -> Result<(BjpcSample, usize)> {
    for redraws in 0..MAX_REDRAWS {
        let s = simulate_spacings(scheme, truth, rng);
        if s.k1() > 0 && s.k2() > 0 {
            return Ok((s, redraws));
        }
    }
    Err(Error::NoConvergence {
        what: "interior sample redraw",
        iterations: MAX_REDRAWS,
    })
}

/// Average estimate and mean squared error of one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamStats {
    pub parameter: Parameter,
    pub ae: f64,
    pub ae_se: f64,
    pub mse: f64,
    pub mse_se: f64,
}

impl ParamStats {
    fn new(parameter: Parameter, truth: f64, estimates: &[f64]) -> Self {
        let ae = McEstimate::from_values(estimates);
        let sq: Vec<f64> = estimates.iter().map(|e| (e - truth).powi(2)).collect();
        let mse = McEstimate::from_values(&sq);
        ParamStats {
            parameter,
            ae: ae.mean,
            ae_se: ae.std_error,
            mse: mse.mean,
            mse_se: mse.std_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationStudy {
    pub scheme: CensoringScheme,
    pub truth: WeibullParams,
    pub reps: usize,
    pub discarded: usize,
    /// AMLE replications that fell back to the MLE.
    pub amle_fallbacks: usize,
    pub mle: [ParamStats; 3],
    pub amle: [ParamStats; 3],
}

/// AE and MSE of the MLE and AMLE over `reps` simulated samples.
pub fn estimation_study(
    scheme: &CensoringScheme,
    truth: &WeibullParams,
    reps: usize,
    seed: u64,
    rule: XiRule,
    exec: Execution,
) -> Result<EstimationStudy> {
    let xi = rule.constants(scheme);
    let id = scheme_id(scheme) ^ 0x4553_5449;
    let rows = map_reps(
        exec,
        reps,
        |r| -> Result<(WeibullFit, WeibullFit, usize, bool)> {
            let mut rng = RngStream::for_replication(seed, id, r as u64).rng();
            let (sample, redraws) = draw_interior(scheme, truth, &mut rng)?;
            let (mle, _) = fit_mle(&sample)?;
            match fit_amle_from_constants(&sample, &xi) {
                Ok(amle) => Ok((mle, amle, redraws, false)),
                Err(Error::AmleDegenerate { .. }) => Ok((mle, mle, redraws, true)),
                Err(e) => Err(e),
            }
        },
    );
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let stats = |pick: fn(&(WeibullFit, WeibullFit, usize, bool)) -> &WeibullFit| {
        std::array::from_fn(|j| {
            let p = Parameter::ALL[j];
            let est: Vec<f64> = rows.iter().map(|row| pick(row).get(p)).collect();
            ParamStats::new(p, p.of(truth), &est)
        })
    };
    Ok(EstimationStudy {
        scheme: scheme.clone(),
        truth: *truth,
        reps,
        discarded: rows.iter().map(|r| r.2).sum(),
        amle_fallbacks: rows.iter().filter(|r| r.3).count(),
        mle: stats(|r| &r.0),
        amle: stats(|r| &r.1),
    })
}

/// Average length and coverage of one interval type for one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub parameter: Parameter,
    pub average_length: f64,
    /// Fraction in `[0, 1]`.
    pub coverage: f64,
    pub coverage_se: f64,
}

fn coverage_stats(p: Parameter, truth: f64, intervals: &[IntervalEstimate]) -> CoverageStats {
    let n = intervals.len() as f64;
    let cover = intervals.iter().filter(|i| i.contains(truth)).count() as f64 / n;
    CoverageStats {
        parameter: p,
        average_length: intervals.iter().map(|i| i.length()).sum::<f64>() / n,
        coverage: cover,
        coverage_se: (cover * (1.0 - cover) / n).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStudy {
    pub scheme: CensoringScheme,
    pub truth: WeibullParams,
    pub level: Probability,
    pub reps: usize,
    pub discarded: usize,
    /// Outer replications dropped because the asymptotic interval or the
    /// bootstrap failed.
    pub failed: usize,
    pub asymptotic: [CoverageStats; 3],
    pub bootstrap: Option<[CoverageStats; 3]>,
    pub boot_reps: Option<usize>,
}

/// Coverage of asymptotic (and optionally bootstrap) intervals.
///
/// Bootstrap replications inside each outer replication run sequentially;
/// the outer loop follows `exec`.
pub fn coverage_study(
    scheme: &CensoringScheme,
    truth: &WeibullParams,
    level: Probability,
    reps: usize,
    boot_reps: Option<usize>,
    seed: u64,
    exec: Execution,
) -> Result<CoverageStudy> {
    let id = scheme_id(scheme) ^ 0x434f_5645;
    type Row = Option<([IntervalEstimate; 3], Option<[IntervalEstimate; 3]>)>;
    let rows = map_reps(exec, reps, |r| -> Result<(Row, usize)> {
        let mut rng = RngStream::for_replication(seed, id, r as u64).rng();
        let (sample, redraws) = draw_interior(scheme, truth, &mut rng)?;
        let (fit, _) = fit_mle(&sample)?;
        let Ok(asym) = asymptotic_ci(&sample, &fit, level) else {
            return Ok((None, redraws));
        };
        let boot = match boot_reps {
            None => None,
            Some(b) => {
                let inner_seed = mix(seed ^ mix(r as u64 ^ id));
                match bootstrap_ci(&sample, &fit, level, b, inner_seed, Execution::Sequential) {
                    Ok(out) => Some(out.intervals),
                    Err(_) => return Ok((None, redraws)),
                }
            }
        };
        Ok((Some((asym, boot)), redraws))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let discarded = rows.iter().map(|r| r.1).sum();
    let ok: Vec<_> = rows.iter().filter_map(|r| r.0.as_ref()).collect();
    let failed = reps - ok.len();
    if ok.is_empty() {
        return Err(Error::NoConvergence {
            what: "coverage study",
            iterations: reps,
        });
    }
    let asymptotic = std::array::from_fn(|j| {
        let p = Parameter::ALL[j];
        let iv: Vec<IntervalEstimate> = ok.iter().map(|r| r.0[j]).collect();
        coverage_stats(p, p.of(truth), &iv)
    });
    let bootstrap = boot_reps.map(|_| {
        std::array::from_fn(|j| {
            let p = Parameter::ALL[j];
            let iv: Vec<IntervalEstimate> = ok
                .iter()
                .map(|r| r.1.expect("bootstrap requested")[j])
                .collect();
            coverage_stats(p, p.of(truth), &iv)
        })
    });
    Ok(CoverageStudy {
        scheme: scheme.clone(),
        truth: *truth,
        level,
        reps,
        discarded,
        failed,
        asymptotic,
        bootstrap,
        boot_reps,
    })
}

/// Empirical coverage of the exact sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactCoverage {
    pub reps: usize,
    /// Shape interval at level `1 - gamma`.
    pub alpha_interval: f64,
    /// Trapezoid at the true shape, level `1 - gamma`.
    pub lambda_set: f64,
    /// Joint region at overall level `1 - gamma` (balanced split).
    pub joint: f64,
}

pub fn exact_coverage_study(
    scheme: &CensoringScheme,
    truth: &WeibullParams,
    gamma: Probability,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<ExactCoverage> {
    let id = scheme_id(scheme) ^ 0x4558_4143;
    let joint_levels = RegionLevels::balanced(scheme.k(), gamma)?;
    let rows = map_reps(exec, reps, |r| -> Result<[bool; 3]> {
        let mut rng = RngStream::for_replication(seed, id, r as u64).rng();
        let sample = simulate_spacings(scheme, truth, &mut rng);
        let (lo, hi) = alpha_confidence_interval(&sample, gamma)?;
        let (l, u) = lambda_sum_bounds(&sample, truth.alpha, gamma)?;
        let region = joint_region_with(&sample, gamma, &joint_levels, DEFAULT_GRID)?;
        let s = truth.lambda_sum();
        Ok([
            lo <= truth.alpha && truth.alpha <= hi,
            l < s && s < u,
            region.contains(&sample, truth),
        ])
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let frac = |j: usize| rows.iter().filter(|r| r[j]).count() as f64 / reps as f64;
    Ok(ExactCoverage {
        reps,
        alpha_interval: frac(0),
        lambda_set: frac(1),
        joint: frac(2),
    })
}

/// `(T1(alpha), T2)` evaluated at the true parameters on simulated samples.
pub fn pivot_draws(
    scheme: &CensoringScheme,
    truth: &WeibullParams,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Vec<(f64, f64)> {
    let id = scheme_id(scheme) ^ 0x5049_564f;
    map_reps(exec, reps, |r| {
        let mut rng = RngStream::for_replication(seed, id, r as u64).rng();
        let sample = simulate_spacings(scheme, truth, &mut rng);
        (t1_pivot(&sample, truth.alpha), t2_pivot(&sample, truth))
    })
}
