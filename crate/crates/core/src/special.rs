//! Special functions and distribution quantiles.
//!
//! Chi-square and F quantiles follow the upper-tail convention: `chi2_quantile(p, n)`
//! returns `q` with `P(X > q) = p`. The normal quantile is lower-tail.
//!
//! Every quantile is obtained by Brent root finding on a high-accuracy CDF
//! (incomplete gamma by series / continued fraction, incomplete beta by continued
//! fraction), not by closed-form approximation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{bracket_increasing_positive, brent};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = 1e-16;
const FPMIN: f64 = f64::MIN_POSITIVE / EPS;
const MAX_ITER: usize = 100_000;

/// A probability strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Probability(value))
        } else {
            Err(Error::Domain(format!(
                "probability {value} is not in (0, 1)"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Probability::new(v)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

fn check_prob(p: f64) -> Result<()> {
    Probability::new(p).map(|_| ())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 671/128).
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma argument", x)?;
    Ok(ln_gamma_unchecked(x))
}

#[allow(clippy::excessive_precision)]
fn ln_gamma_unchecked(x: f64) -> f64 {
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn reg_gamma_lower(a: f64, x: f64) -> Result<f64> {
    check_positive("shape", a)?;
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("incomplete gamma argument {x} < 0")));
    }
    Ok(if x == 0.0 {
        0.0
    } else if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_cont_frac(a, x)
    })
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn reg_gamma_upper(a: f64, x: f64) -> Result<f64> {
    check_positive("shape", a)?;
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("incomplete gamma argument {x} < 0")));
    }
    Ok(if x == 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_cont_frac(a, x)
    })
}

fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma_unchecked(a)).exp()
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * gamma_prefactor(a, x)
}

fn gamma_cont_frac(a: f64, x: f64) -> f64 {
    // modified Lentz
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    gamma_prefactor(a, x) * h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn reg_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "incomplete beta argument {x} outside [0, 1]"
        )));
    }
    Ok(reg_beta_unchecked(x, a, b))
}

fn reg_beta_unchecked(x: f64, a: f64, b: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma_unchecked(a + b) - ln_gamma_unchecked(a) - ln_gamma_unchecked(b)
        + a * x.ln()
        + b * (-x).ln_1p();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cont_frac(x, a, b) / a
    } else {
        1.0 - ln_front.exp() * beta_cont_frac(1.0 - x, b, a) / b
    }
}

fn beta_cont_frac(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `P(X > q)` for `X ~ chi2(dof)`.
pub fn chi2_upper_tail(q: f64, dof: f64) -> Result<f64> {
    check_positive("dof", dof)?;
    if q <= 0.0 {
        return Ok(1.0);
    }
    reg_gamma_upper(0.5 * dof, 0.5 * q)
}

/// `P(X <= q)` for `X ~ chi2(dof)`.
pub fn chi2_cdf(q: f64, dof: f64) -> Result<f64> {
    check_positive("dof", dof)?;
    if q <= 0.0 {
        return Ok(0.0);
    }
    reg_gamma_lower(0.5 * dof, 0.5 * q)
}

/// `P(F > q)` for `F ~ F(d1, d2)`.
pub fn f_upper_tail(q: f64, d1: f64, d2: f64) -> Result<f64> {
    check_positive("d1", d1)?;
    check_positive("d2", d2)?;
    if q <= 0.0 {
        return Ok(1.0);
    }
    Ok(reg_beta_unchecked(d2 / (d2 + d1 * q), 0.5 * d2, 0.5 * d1))
}

/// `P(F <= q)` for `F ~ F(d1, d2)`.
pub fn f_cdf(q: f64, d1: f64, d2: f64) -> Result<f64> {
    check_positive("d1", d1)?;
    check_positive("d2", d2)?;
    if q <= 0.0 {
        return Ok(0.0);
    }
    Ok(reg_beta_unchecked(
        d1 * q / (d1 * q + d2),
        0.5 * d1,
        0.5 * d2,
    ))
}

/// Standard normal CDF, via `erfc(x) = Q(1/2, x^2)`.
pub fn normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let tail = 0.5 * gamma_tail_half(0.5 * z * z);
    if z < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

fn gamma_tail_half(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x < 1.5 {
        1.0 - gamma_series(0.5, x)
    } else {
        gamma_cont_frac(0.5, x)
    }
}

/// Upper-tail chi-square quantile: `q` with `P(chi2(dof) > q) = p`.
pub fn chi2_quantile(p: f64, dof: f64) -> Result<f64> {
    check_prob(p)?;
    check_positive("dof", dof)?;
    // p - Q(q) is increasing in q
    let mut g = |q: f64| p - reg_gamma_upper(0.5 * dof, 0.5 * q).unwrap_or(f64::NAN);
    let (lo, hi) = bracket_increasing_positive(&mut g, dof, 2100)?;
    let root = brent(g, lo, hi, 1e-13 * hi.clamp(1.0, 1e3))?;
    Ok(root.x)
}

/// Upper-tail F quantile: `q` with `P(F(d1, d2) > q) = p`.
pub fn f_quantile(p: f64, d1: f64, d2: f64) -> Result<f64> {
    check_prob(p)?;
    check_positive("d1", d1)?;
    check_positive("d2", d2)?;
    let mut g = |q: f64| p - reg_beta_unchecked(d2 / (d2 + d1 * q), 0.5 * d2, 0.5 * d1);
    let (lo, hi) = bracket_increasing_positive(&mut g, 1.0, 2100)?;
    let root = brent(g, lo, hi, 1e-13 * hi.clamp(1.0, 1e3))?;
    Ok(root.x)
}

/// Lower-tail standard normal quantile `Phi^{-1}(p)`.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    check_prob(p)?;
    if p == 0.5 {
        return Ok(0.0);
    }
    if p > 0.5 {
        // solve the upper tail directly to keep relative accuracy
        let q = 1.0 - p;
        let root = brent(|z| q - 0.5 * gamma_tail_half(0.5 * z * z), 0.0, 40.0, 1e-15)?;
        Ok(root.x)
    } else {
        let root = brent(|z| 0.5 * gamma_tail_half(0.5 * z * z) - p, 0.0, 40.0, 1e-15)?;
        Ok(-root.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!((ln_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-13);
        assert!((ln_gamma(10.0).unwrap() - 362_880f64.ln()).abs() < 1e-12);
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.0).is_err());
    }

    #[test]
    fn chi2_two_dof_median() {
        let q = chi2_quantile(0.5, 2.0).unwrap();
        assert!((q - 2.0 * 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn f_two_two_median_is_one() {
        assert!((f_quantile(0.5, 2.0, 2.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn normal_quantile_symmetry() {
        assert_eq!(std_normal_quantile(0.5).unwrap(), 0.0);
        let hi = std_normal_quantile(0.95).unwrap();
        let lo = std_normal_quantile(0.05).unwrap();
        assert!((hi + lo).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(chi2_quantile(0.0, 2.0).is_err());
        assert!(chi2_quantile(1.0, 2.0).is_err());
        assert!(chi2_quantile(0.5, 0.0).is_err());
        assert!(f_quantile(0.5, -1.0, 2.0).is_err());
        assert!(std_normal_quantile(1.2).is_err());
        assert!(Probability::new(0.0).is_err());
    }

    #[test]
    fn beta_symmetry() {
        let a = reg_beta(0.3, 2.5, 4.0).unwrap();
        let b = reg_beta(0.7, 4.0, 2.5).unwrap();
        assert!((a + b - 1.0).abs() < 1e-14);
    }
}
