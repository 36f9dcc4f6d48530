//! Point estimation: the exact MLE through the profile score in `alpha`, and
//! the closed-form approximate MLE (AMLE).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BjpcSample, CensoringScheme, FitMethod, WeibullFit};
use crate::roots::{bracket_increasing_positive, brent};

/// Bracket and iteration count of the profile-score root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileDiagnostics {
    pub alpha_bracket: (f64, f64),
    pub iterations: usize,
    pub score_at_root: f64,
}

/// `H(alpha) = sum c_i ln(w_i) w_i^alpha / sum c_i w_i^alpha`.
pub fn h_of_alpha(sample: &BjpcSample, alpha: f64) -> f64 {
    sample.power_sums(alpha).h()
}

/// Profile score `1/alpha - H(alpha) + mean(ln w)`; strictly decreasing in
/// `alpha` with a single zero at the MLE.
pub fn profile_score(sample: &BjpcSample, alpha: f64) -> f64 {
    1.0 / alpha - h_of_alpha(sample, alpha) + sample.sum_ln_w() / sample.k() as f64
}

/// Profile log-likelihood `k ln alpha - k ln A(alpha) + (alpha - 1) sum ln w_i`.
pub fn profile_log_likelihood(sample: &BjpcSample, alpha: f64) -> f64 {
    let k = sample.k() as f64;
    k * alpha.ln() - k * sample.power_sums(alpha).ln_a() + (alpha - 1.0) * sample.sum_ln_w()
}

/// Log-likelihood without the normalizing constant.
pub fn log_likelihood(sample: &BjpcSample, alpha: f64, lambda1: f64, lambda2: f64) -> f64 {
    let k = sample.k() as f64;
    k * alpha.ln() + sample.k1() as f64 * lambda1.ln() + sample.k2() as f64 * lambda2.ln()
        - (lambda1 + lambda2) * sample.a_of_alpha(alpha)
        + (alpha - 1.0) * sample.sum_ln_w()
}

/// Gradient of [`log_likelihood`] in `(alpha, lambda1, lambda2)`.
pub fn normal_equations(sample: &BjpcSample, alpha: f64, lambda1: f64, lambda2: f64) -> [f64; 3] {
    let ps = sample.power_sums(alpha);
    let a = ps.a();
    [
        sample.k() as f64 / alpha - (lambda1 + lambda2) * ps.a_prime() + sample.sum_ln_w(),
        sample.k1() as f64 / lambda1 - a,
        sample.k2() as f64 / lambda2 - a,
    ]
}

fn quantile_ratio_seed(sample: &BjpcSample) -> f64 {
    let k = sample.k();
    let upper = (3 * k).div_ceil(4);
    let lower = k.div_ceil(4).max(1);
    let ln_w = sample.ln_times();
    let spread = ln_w[upper - 1] - ln_w[lower - 1];
    let seed = ((4f64).ln().ln() - (4.0f64 / 3.0).ln().ln()) / spread;
    if spread > 0.0 && seed.is_finite() {
        seed
    } else {
        1.0
    }
}

const SCORE_TOL: f64 = 1e-8;

/// Shape MLE alone, valid whatever `k1` and `k2` are.
pub fn mle_alpha(sample: &BjpcSample) -> Result<(f64, ProfileDiagnostics)> {
    let mut neg_score = |a: f64| -profile_score(sample, a);
    let (lo, hi) = bracket_increasing_positive(&mut neg_score, quantile_ratio_seed(sample), 1100)?;
    let root = brent(neg_score, lo, hi, 1e-13 * hi)?;
    let score = profile_score(sample, root.x);
    let diag = ProfileDiagnostics {
        alpha_bracket: (lo, hi),
        iterations: root.iterations,
        score_at_root: score,
    };
    Ok((root.x, diag))
}

fn scales(sample: &BjpcSample, alpha: f64) -> (f64, f64) {
    let a = sample.a_of_alpha(alpha);
    (sample.k1() as f64 / a, sample.k2() as f64 / a)
}

fn check_interior(sample: &BjpcSample, alpha: f64, lambda1: f64, lambda2: f64) -> Result<()> {
    if sample.k1() == 0 || sample.k2() == 0 {
        return Err(Error::Boundary {
            alpha,
            lambda1,
            lambda2,
            k1: sample.k1(),
            k2: sample.k2(),
        });
    }
    Ok(())
}

/// Maximum likelihood fit.
///
/// Fails with [`Error::Boundary`] when either population has no failures.
pub fn fit_mle(sample: &BjpcSample) -> Result<(WeibullFit, ProfileDiagnostics)> {
    let (alpha, diag) = mle_alpha(sample)?;
    let (lambda1, lambda2) = scales(sample, alpha);
    check_interior(sample, alpha, lambda1, lambda2)?;
    let fit = WeibullFit {
        alpha,
        lambda1,
        lambda2,
        method: FitMethod::Mle,
        converged: diag.score_at_root.abs() <= SCORE_TOL,
        score_residual: diag.score_at_root,
    };
    if !fit.converged {
        return Err(Error::NoConvergence {
            what: "profile score",
            iterations: diag.iterations,
        });
    }
    Ok((fit, diag))
}

/// `xi_i = E(ln T_i)` with `T_i` the sum of independent exponentials of rates
/// `a_1 > ... > a_i` (the alive counts).
///
/// The partial-fraction closed form
/// `sum_j w_j (-gamma_E - ln a_j)`, `w_j = prod_{l != j} a_l / (a_l - a_j)`,
/// has alternating weights near `1e9` once `i` passes about 15, so this uses
/// the equivalent Frullani form
///
/// ```text
/// E ln T = int_0^inf (e^-t - prod_j a_j / (a_j + t)) dt / t
/// ```
///
/// with `t = e^u` and the trapezoid rule in `u`. The integrand is analytic in
/// the strip `|Im u| < pi/2`, so a step of 0.05 is accurate to machine precision.
pub fn xi_constants(scheme: &CensoringScheme) -> Vec<f64> {
    let a: Vec<f64> = scheme.alive().iter().map(|&v| v as f64).collect();
    (1..=a.len())
        .map(|i| expected_log_hypoexponential(&a[..i]))
        .collect()
}

const XI_STEP: f64 = 0.05;
const XI_U_MIN: f64 = -60.0;
const XI_U_MAX: f64 = 80.0;

/// `E(ln T)` for `T` a sum of independent exponentials with the given rates.
pub fn expected_log_hypoexponential(rates: &[f64]) -> f64 {
    let n = ((XI_U_MAX - XI_U_MIN) / XI_STEP).round() as usize;
    let mut total = 0.0;
    for s in 0..=n {
        let t = (XI_U_MIN + s as f64 * XI_STEP).exp();
        let ln_m: f64 = rates.iter().map(|&r| -(t / r).ln_1p()).sum();
        // both terms underflow to zero far out; the difference is the integrand
        total += (-t).exp() - ln_m.exp();
    }
    total * XI_STEP
}

/// `xi_i = ln E(T_i) = ln sum_{j <= i} 1 / a_j`.
pub fn xi_log_mean(scheme: &CensoringScheme) -> Vec<f64> {
    let mut acc = 0.0;
    scheme
        .alive()
        .iter()
        .map(|&a| {
            acc += 1.0 / a as f64;
            acc.ln()
        })
        .collect()
}

/// Expansion points of the AMLE linearization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiRule {
    /// `ln E(T_i)`; reproduces the published real-data AMLE values.
    #[default]
    LogOfMean,
    /// `E(ln T_i)`, the exact expected log (see [`xi_constants`]).
    MeanOfLog,
}

impl XiRule {
    pub fn constants(self, scheme: &CensoringScheme) -> Vec<f64> {
        match self {
            XiRule::LogOfMean => xi_log_mean(scheme),
            XiRule::MeanOfLog => xi_constants(scheme),
        }
    }
}

/// Coefficients of `q2 alpha^2 + q1 alpha - k = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmleQuadratic {
    pub q2: f64,
    pub q1: f64,
    pub k: f64,
}

impl AmleQuadratic {
    pub fn new(sample: &BjpcSample, xi: &[f64]) -> Self {
        let (mut e1, mut e2, mut e3, mut d2, mut cb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for ((&c, &v), &x) in sample
            .scheme()
            .weights()
            .iter()
            .zip(sample.ln_times())
            .zip(xi)
        {
            let c = c as f64;
            let ai = x.exp();
            let bi = ai * (1.0 - x);
            e1 += c * ai * v * v;
            e2 += c * ai * v;
            e3 += (c * bi - 1.0) * v;
            d2 += c * ai;
            cb += c * bi;
        }
        let k = sample.k() as f64;
        let d1 = e2;
        let d3 = k - cb;
        AmleQuadratic {
            q2: e1 - d1 * e2 / d2,
            q1: e3 + d3 * e2 / d2,
            k,
        }
    }

    /// The admissible positive root.
    ///
    /// With `q2 > 0` there is exactly one positive root. With `q2 < 0` and two
    /// positive roots the smaller is taken, which is the branch that tends to
    /// the linear solution `k / q1` as `q2 -> 0`.
    pub fn positive_root(&self) -> Result<f64> {
        let AmleQuadratic { q2, q1, k } = *self;
        let degenerate = || Error::AmleDegenerate { q2, q1 };
        if q2.abs() <= 1e-12 * q1.abs().max(1.0) {
            return if q1 > 0.0 {
                Ok(k / q1)
            } else {
                Err(degenerate())
            };
        }
        let disc = q1 * q1 + 4.0 * q2 * k;
        if disc < 0.0 {
            return Err(degenerate());
        }
        let sq = disc.sqrt();
        let root = if q2 > 0.0 {
            if q1 >= 0.0 {
                2.0 * k / (q1 + sq)
            } else {
                (sq - q1) / (2.0 * q2)
            }
        } else if q1 > 0.0 {
            2.0 * k / (q1 + sq)
        } else {
            return Err(degenerate());
        };
        if root > 0.0 && root.is_finite() {
            Ok(root)
        } else {
            Err(degenerate())
        }
    }
}

/// Approximate MLE with the default expansion points.
pub fn fit_amle(sample: &BjpcSample) -> Result<WeibullFit> {
    fit_amle_with(sample, XiRule::default())
}

pub fn fit_amle_with(sample: &BjpcSample, rule: XiRule) -> Result<WeibullFit> {
    fit_amle_from_constants(sample, &rule.constants(sample.scheme()))
}

/// AMLE with precomputed expansion points (one set per scheme).
pub fn fit_amle_from_constants(sample: &BjpcSample, xi: &[f64]) -> Result<WeibullFit> {
    let alpha = AmleQuadratic::new(sample, xi).positive_root()?;
    let (lambda1, lambda2) = scales(sample, alpha);
    check_interior(sample, alpha, lambda1, lambda2)?;
    Ok(WeibullFit {
        alpha,
        lambda1,
        lambda2,
        method: FitMethod::Amle,
        converged: true,
        score_residual: profile_score(sample, alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CensoringScheme;
    use crate::special::EULER_GAMMA;

    fn sample(w: &[f64], z: &[u8], m: usize, r: Vec<usize>) -> BjpcSample {
        let s = CensoringScheme::new(m, w.len(), r).unwrap();
        BjpcSample::new(s, w.to_vec(), z.iter().map(|&v| v == 1).collect()).unwrap()
    }

    fn toy() -> BjpcSample {
        sample(
            &[0.2, 0.5, 0.9, 1.4, 2.2, 3.1],
            &[1, 0, 1, 1, 0, 0],
            10,
            vec![1, 0, 1, 0, 0],
        )
    }

    #[test]
    fn first_xi_is_single_exponential() {
        let mut r = vec![0; 14];
        r[0] = 7;
        let s = CensoringScheme::new(25, 15, r).unwrap();
        let xi = xi_constants(&s);
        assert!((xi[0] - (-EULER_GAMMA - 25f64.ln())).abs() < 1e-12);
        assert!((xi[0] + 3.796_10).abs() < 1e-5);
    }

    fn partial_fraction_xi(a: &[f64]) -> f64 {
        (0..a.len())
            .map(|j| {
                let w: f64 = (0..a.len())
                    .filter(|&l| l != j)
                    .map(|l| a[l] / (a[l] - a[j]))
                    .product();
                w * (-EULER_GAMMA - a[j].ln())
            })
            .sum()
    }

    #[test]
    fn frullani_form_matches_partial_fractions_when_well_conditioned() {
        let s = CensoringScheme::new(25, 8, vec![3, 0, 2, 0, 0, 1, 0]).unwrap();
        let a: Vec<f64> = s.alive().iter().map(|&v| v as f64).collect();
        let xi = xi_constants(&s);
        for i in 1..=a.len() {
            assert!(
                (xi[i - 1] - partial_fraction_xi(&a[..i])).abs() < 1e-9,
                "i={i}"
            );
        }
        // 40-digit evaluation of the partial-fraction sum
        assert!((xi[6] + 0.985_674_848_783_534_3).abs() < 1e-14);
        assert!((xi[7] + 0.788_516_578_019_974_1).abs() < 1e-14);
    }

    #[test]
    fn xi_of_two_equal_rate_limit() {
        // Exp(1) + Exp(1) is Gamma(2): E ln = psi(2) = 1 - gamma_E
        let v = expected_log_hypoexponential(&[1.0 + 1e-7, 1.0]);
        assert!((v - (1.0 - EULER_GAMMA)).abs() < 1e-6);
    }

    #[test]
    fn h_constant_for_equal_times() {
        let s = CensoringScheme::new(6, 3, vec![0, 0]).unwrap();
        let smp = BjpcSample::from_parts(s, vec![2.5; 3], vec![true, false, true]);
        for a in [0.1, 1.0, 10.0] {
            assert!((h_of_alpha(&smp, a) - 2.5f64.ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn h_tends_to_log_of_last_time() {
        let smp = toy();
        assert!((h_of_alpha(&smp, 1e3) - 3.1f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn mle_zeroes_normal_equations() {
        let smp = toy();
        let (fit, diag) = fit_mle(&smp).unwrap();
        assert!(diag.score_at_root.abs() < 1e-10);
        let g = normal_equations(&smp, fit.alpha, fit.lambda1, fit.lambda2);
        for v in g {
            assert!(v.abs() < 1e-8, "{g:?}");
        }
        let p = profile_log_likelihood(&smp, fit.alpha);
        for d in [1e-3, 1e-2] {
            assert!(p >= profile_log_likelihood(&smp, fit.alpha * (1.0 + d)));
            assert!(p >= profile_log_likelihood(&smp, fit.alpha * (1.0 - d)));
        }
    }

    #[test]
    fn boundary_error_carries_estimates() {
        let s = CensoringScheme::new(6, 3, vec![0, 0]).unwrap();
        let smp = BjpcSample::new(s, vec![1.0, 2.0, 3.0], vec![true; 3]).unwrap();
        match fit_mle(&smp) {
            Err(Error::Boundary {
                alpha,
                lambda1,
                lambda2,
                k1,
                k2,
            }) => {
                assert!(alpha > 0.0 && lambda1 > 0.0);
                assert_eq!(lambda2, 0.0);
                assert_eq!((k1, k2), (3, 0));
            }
            other => panic!("expected boundary error, got {other:?}"),
        }
        assert!(matches!(fit_amle(&smp), Err(Error::Boundary { .. })));
    }

    #[test]
    fn quadratic_edge_cases() {
        let lin = AmleQuadratic {
            q2: 0.0,
            q1: 4.0,
            k: 8.0,
        };
        assert_eq!(lin.positive_root().unwrap(), 2.0);
        let bad = AmleQuadratic {
            q2: 0.0,
            q1: -1.0,
            k: 8.0,
        };
        assert!(matches!(
            bad.positive_root(),
            Err(Error::AmleDegenerate { .. })
        ));
        let neg = AmleQuadratic {
            q2: -1.0,
            q1: 1.0,
            k: 8.0,
        };
        assert!(neg.positive_root().is_err());
        let two = AmleQuadratic {
            q2: -1.0,
            q1: 6.0,
            k: 8.0,
        };
        assert!((two.positive_root().unwrap() - 2.0).abs() < 1e-12);
        let pos = AmleQuadratic {
            q2: 1.0,
            q1: -2.0,
            k: 8.0,
        };
        assert!((pos.positive_root().unwrap() - 4.0).abs() < 1e-12);
    }
}
