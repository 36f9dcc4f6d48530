//! Exact pivotal confidence sets.
//!
//! With `S_1 = m (l1 + l2) W_1^a` and `S_j = a_j (l1 + l2)(W_j^a - W_{j-1}^a)`
//! i.i.d. standard exponentials,
//!
//! * `T1(a) = sum c_i w_i^a / ((k - 1) m w_1^a) - 1/(k - 1)` is `F(2k-2, 2)`,
//!   free of the scales, and strictly increasing in `a`;
//! * `T2 = 2 (l1 + l2) A(a)` is `chi2(2k)`, independent of `T1`.
//!
//! Inverting `T1` gives an exact interval for the shape; inverting `T2` at a
//! given shape gives a trapezoid for `(l1, l2)`. Their product at levels
//! `(1 - g1)(1 - g2) = 1 - g` is a joint region whose volume is the design
//! criterion of [`crate::ocs`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::mle_alpha;
use crate::model::{BjpcSample, WeibullParams};
use crate::roots::brent;
use crate::special::{chi2_quantile, f_quantile, Probability};

/// Default number of trapezoid-rule nodes over the shape interval.
pub const DEFAULT_GRID: usize = 401;

/// `T1(alpha)`, evaluated in log space.
pub fn t1_pivot(sample: &BjpcSample, alpha: f64) -> f64 {
    let km1 = (sample.k() - 1) as f64;
    let ln_ratio = sample.power_sums(alpha).ln_a() - alpha * sample.ln_times()[0];
    (ln_ratio - (km1 * sample.scheme().m() as f64).ln()).exp() - 1.0 / km1
}

/// `T2 = 2 (lambda1 + lambda2) A(alpha)`.
pub fn t2_pivot(sample: &BjpcSample, params: &WeibullParams) -> f64 {
    2.0 * params.lambda_sum() * sample.a_of_alpha(params.alpha)
}

/// The unique `alpha > 0` with `T1(alpha) = t`, bracketing geometrically
/// outward from `start`.
pub fn phi_inverse_from(sample: &BjpcSample, t: f64, start: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "pivot value must be positive, got {t}"
        )));
    }
    let km1 = (sample.k() - 1) as f64;
    let target = (t + 1.0 / km1).ln() + (km1 * sample.scheme().m() as f64).ln();
    let ln_w1 = sample.ln_times()[0];
    // ln(sum c_i (w_i / w_1)^alpha) is increasing and ~linear for large alpha
    let g = |a: f64| sample.power_sums(a).ln_a() - a * ln_w1 - target;
    let start = if start > 0.0 && start.is_finite() {
        start
    } else {
        1.0
    };
    let (mut lo, mut hi) = (start, start);
    let g0 = g(start);
    const MAX_STEPS: usize = 1100;
    if g0 < 0.0 {
        let mut steps = 0;
        while g(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > MAX_STEPS || !hi.is_finite() {
                return Err(Error::Bracket(format!(
                    "phi({t}): upper bracket exceeds safe range"
                )));
            }
        }
    } else {
        let mut steps = 0;
        while g(lo) > 0.0 {
            hi = lo;
            lo *= 0.5;
            steps += 1;
            if steps > MAX_STEPS || lo == 0.0 {
                return Err(Error::Bracket(format!(
                    "phi({t}): lower bracket underflows"
                )));
            }
        }
    }
    Ok(brent(g, lo, hi, 1e-14 * hi)?.x)
}

/// [`phi_inverse_from`] started at the shape MLE (or 1 if that fails).
pub fn phi_inverse(sample: &BjpcSample, t: f64) -> Result<f64> {
    let start = mle_alpha(sample).map(|(a, _)| a).unwrap_or(1.0);
    phi_inverse_from(sample, t, start)
}

/// The four pivot quantiles needed for a region; they depend only on `k`
/// and the levels, so one instance serves every sample of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionLevels {
    pub k: usize,
    pub gamma1: Probability,
    pub gamma2: Probability,
    /// `F_{1 - g1/2, 2k-2, 2}` (upper-tail notation), lower pivot limit.
    pub f_lower: f64,
    /// `F_{g1/2, 2k-2, 2}`.
    pub f_upper: f64,
    /// `chi2_{1 - g2/2, 2k}`.
    pub chi2_lower: f64,
    /// `chi2_{g2/2, 2k}`.
    pub chi2_upper: f64,
}

impl RegionLevels {
    pub fn new(k: usize, gamma1: Probability, gamma2: Probability) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("k must be at least 2, got {k}")));
        }
        let d1 = (2 * k - 2) as f64;
        let dof = (2 * k) as f64;
        let g1 = gamma1.value();
        let g2 = gamma2.value();
        Ok(RegionLevels {
            k,
            gamma1,
            gamma2,
            f_lower: f_quantile(1.0 - 0.5 * g1, d1, 2.0)?,
            f_upper: f_quantile(0.5 * g1, d1, 2.0)?,
            chi2_lower: chi2_quantile(1.0 - 0.5 * g2, dof)?,
            chi2_upper: chi2_quantile(0.5 * g2, dof)?,
        })
    }

    /// Levels with `g1 = g2 = 1 - sqrt(1 - g)`.
    pub fn balanced(k: usize, gamma: Probability) -> Result<Self> {
        let (g1, g2) = balanced_split(gamma);
        RegionLevels::new(k, g1, g2)
    }

    /// `(chi2_upper^2 - chi2_lower^2) / 8`.
    pub fn area_factor(&self) -> f64 {
        (self.chi2_upper.powi(2) - self.chi2_lower.powi(2)) / 8.0
    }
}

/// `g1 = g2 = 1 - sqrt(1 - g)`, so that `(1 - g1)(1 - g2) = 1 - g`.
pub fn balanced_split(gamma: Probability) -> (Probability, Probability) {
    let g = 1.0 - (1.0 - gamma.value()).sqrt();
    let p = Probability::new(g).expect("1 - sqrt(1 - g) lies in (0, 1)");
    (p, p)
}

/// Exact `100(1 - g1)%` interval for the shape.
pub fn alpha_confidence_interval(sample: &BjpcSample, gamma1: Probability) -> Result<(f64, f64)> {
    let d1 = (2 * sample.k() - 2) as f64;
    let g1 = gamma1.value();
    let lo = f_quantile(1.0 - 0.5 * g1, d1, 2.0)?;
    let hi = f_quantile(0.5 * g1, d1, 2.0)?;
    alpha_interval_from_quantiles(sample, lo, hi)
}

fn alpha_interval_from_quantiles(sample: &BjpcSample, f_lo: f64, f_hi: f64) -> Result<(f64, f64)> {
    let start = mle_alpha(sample).map(|(a, _)| a).unwrap_or(1.0);
    let lo = phi_inverse_from(sample, f_lo, start)?;
    let hi = phi_inverse_from(sample, f_hi, lo.max(start))?;
    Ok((lo, hi))
}

/// Bounds on `lambda1 + lambda2` at a fixed shape:
/// `(chi2_{1-g2/2,2k}, chi2_{g2/2,2k}) / (2 A(alpha))`.
pub fn lambda_sum_bounds(
    sample: &BjpcSample,
    alpha: f64,
    gamma2: Probability,
) -> Result<(f64, f64)> {
    let dof = (2 * sample.k()) as f64;
    let g2 = gamma2.value();
    let lo = chi2_quantile(1.0 - 0.5 * g2, dof)?;
    let hi = chi2_quantile(0.5 * g2, dof)?;
    let two_a = 2.0 * sample.a_of_alpha(alpha);
    Ok((lo / two_a, hi / two_a))
}

/// Area of the trapezoid `{l1, l2 >= 0, lower < l1 + l2 < upper}` at `alpha`.
pub fn trapezoid_area(levels: &RegionLevels, sample: &BjpcSample, alpha: f64) -> f64 {
    levels.area_factor() * (-2.0 * sample.power_sums(alpha).ln_a()).exp()
}

/// Composite trapezoid rule for `int_lo^hi A(alpha)^-2 d alpha` on `nodes`
/// uniform points, with the Euler-Maclaurin end correction
/// `-h^2/12 (f'(hi) - f'(lo))`, where `f' = -2 H(alpha) A(alpha)^-2`.
///
/// `A^-2` changes by several orders of magnitude across a wide shape
/// interval, and the plain rule is then only good to about `1e-5` at 401 nodes.
pub fn inverse_square_integral(sample: &BjpcSample, lo: f64, hi: f64, nodes: usize) -> f64 {
    let n = nodes.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let f = |a: f64| (-2.0 * sample.power_sums(a).ln_a()).exp();
    let df = |a: f64| {
        let ps = sample.power_sums(a);
        -2.0 * ps.h() * (-2.0 * ps.ln_a()).exp()
    };
    let interior: f64 = (1..n - 1).map(|i| f(lo + i as f64 * h)).sum();
    h * (0.5 * (f(lo) + f(hi)) + interior) - h * h / 12.0 * (df(hi) - df(lo))
}

/// Joint region `{alpha in B(g1), (l1, l2) in C(g2; alpha)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointRegion {
    pub gamma: Probability,
    pub levels: RegionLevels,
    pub alpha_interval: (f64, f64),
    pub volume: f64,
}

impl JointRegion {
    pub fn gamma1(&self) -> Probability {
        self.levels.gamma1
    }

    pub fn gamma2(&self) -> Probability {
        self.levels.gamma2
    }

    /// Bounds on `lambda1 + lambda2` at `alpha`.
    pub fn sum_bounds(&self, sample: &BjpcSample, alpha: f64) -> (f64, f64) {
        let two_a = 2.0 * sample.a_of_alpha(alpha);
        (
            self.levels.chi2_lower / two_a,
            self.levels.chi2_upper / two_a,
        )
    }

    pub fn contains(&self, sample: &BjpcSample, p: &WeibullParams) -> bool {
        let (lo, hi) = self.alpha_interval;
        if !(lo <= p.alpha && p.alpha <= hi) {
            return false;
        }
        let (l, u) = self.sum_bounds(sample, p.alpha);
        l < p.lambda_sum() && p.lambda_sum() < u
    }
}

/// Assembles the joint region at overall level `1 - gamma`; `split` defaults
/// to the balanced split.
pub fn joint_region(
    sample: &BjpcSample,
    gamma: Probability,
    split: Option<(Probability, Probability)>,
    nodes: usize,
) -> Result<JointRegion> {
    let (g1, g2) = split.unwrap_or_else(|| balanced_split(gamma));
    let levels = RegionLevels::new(sample.k(), g1, g2)?;
    joint_region_with(sample, gamma, &levels, nodes)
}

/// [`joint_region`] with precomputed quantiles.
pub fn joint_region_with(
    sample: &BjpcSample,
    gamma: Probability,
    levels: &RegionLevels,
    nodes: usize,
) -> Result<JointRegion> {
    if levels.k != sample.k() {
        return Err(Error::Domain(format!(
            "levels computed for k = {}, sample has k = {}",
            levels.k,
            sample.k()
        )));
    }
    let alpha_interval = alpha_interval_from_quantiles(sample, levels.f_lower, levels.f_upper)?;
    let volume = levels.area_factor()
        * inverse_square_integral(sample, alpha_interval.0, alpha_interval.1, nodes);
    Ok(JointRegion {
        gamma,
        levels: *levels,
        alpha_interval,
        volume,
    })
}

/// Volume of the joint region at levels `(g1, g2)`.
pub fn region_volume(
    sample: &BjpcSample,
    gamma1: Probability,
    gamma2: Probability,
    nodes: usize,
) -> Result<f64> {
    let levels = RegionLevels::new(sample.k(), gamma1, gamma2)?;
    region_volume_with(sample, &levels, nodes)
}

pub fn region_volume_with(sample: &BjpcSample, levels: &RegionLevels, nodes: usize) -> Result<f64> {
    let (lo, hi) = alpha_interval_from_quantiles(sample, levels.f_lower, levels.f_upper)?;
    Ok(levels.area_factor() * inverse_square_integral(sample, lo, hi, nodes))
}

/// One row of region boundary output: the sum bounds at `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Boundary rows at the shape MLE and at the ends and midpoint of the shape interval.
pub fn default_boundary(sample: &BjpcSample, region: &JointRegion) -> Result<Vec<BoundaryRow>> {
    let (mle, _) = mle_alpha(sample)?;
    let (lo, hi) = region.alpha_interval;
    Ok([lo, 0.5 * (lo + hi), mle, hi]
        .into_iter()
        .map(|alpha| {
            let (lower, upper) = region.sum_bounds(sample, alpha);
            BoundaryRow {
                alpha,
                lower,
                upper,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CensoringScheme;

    fn toy() -> BjpcSample {
        let s = CensoringScheme::new(10, 6, vec![1, 0, 1, 0, 0]).unwrap();
        BjpcSample::new(
            s,
            vec![0.2, 0.5, 0.9, 1.4, 2.2, 3.1],
            vec![true, false, true, true, false, false],
        )
        .unwrap()
    }

    #[test]
    fn t1_vanishes_for_equal_times() {
        let s = CensoringScheme::new(10, 6, vec![1, 0, 1, 0, 0]).unwrap();
        let smp = BjpcSample::from_parts(s, vec![1.7; 6], vec![true; 6]);
        for a in [0.3, 1.0, 4.0] {
            assert!(t1_pivot(&smp, a).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_inverts_t1() {
        let smp = toy();
        for a in [0.5, 1.0, 2.0] {
            let t = t1_pivot(&smp, a);
            assert!((phi_inverse(&smp, t).unwrap() - a).abs() < 1e-8 * a);
        }
        assert!(phi_inverse(&smp, 1e-6).unwrap() < 1e-2);
        assert!(phi_inverse(&smp, 0.0).is_err());
    }

    #[test]
    fn balanced_split_value() {
        let (g1, g2) = balanced_split(Probability::new(0.1).unwrap());
        assert!((g1.value() - 0.051_316_7).abs() < 1e-6);
        assert!(((1.0 - g1.value()) * (1.0 - g2.value()) - 0.9).abs() < 1e-12);
    }
}
