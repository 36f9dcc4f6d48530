//! Special functions checked against an independent implementation and
//! against their own inverses.

use bjpc::special::{
    chi2_cdf, chi2_quantile, f_cdf, f_quantile, f_upper_tail, ln_gamma, normal_cdf, reg_beta,
    reg_gamma_lower, reg_gamma_upper, std_normal_quantile,
};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ln_gamma_matches_reference(x in 1e-3f64..200.0) {
        let want = statrs::function::gamma::ln_gamma(x);
        prop_assert!(close(ln_gamma(x).unwrap(), want, 1e-12));
    }

    #[test]
    fn incomplete_gamma_matches_reference(a in 0.1f64..80.0, x in 0.0f64..150.0) {
        let p = reg_gamma_lower(a, x).unwrap();
        let q = reg_gamma_upper(a, x).unwrap();
        prop_assert!((p - statrs::function::gamma::gamma_lr(a, x)).abs() < 1e-11);
        prop_assert!((p + q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_matches_reference(x in 0.0f64..=1.0, a in 0.1f64..60.0, b in 0.1f64..60.0) {
        let want = statrs::function::beta::beta_reg(a, b, x);
        prop_assert!((reg_beta(x, a, b).unwrap() - want).abs() < 1e-11);
    }

    #[test]
    fn chi2_quantile_round_trips(p in 1e-6f64..(1.0 - 1e-6), dof in 2u32..120) {
        let dof = dof as f64;
        let q = chi2_quantile(p, dof).unwrap();
        // upper-tail convention: P(X > q) = p
        prop_assert!((chi2_cdf(q, dof).unwrap() - (1.0 - p)).abs() < 1e-10);
        let reference = ChiSquared::new(dof).unwrap().inverse_cdf(1.0 - p);
        prop_assert!(close(q, reference, 1e-7));
    }

    #[test]
    fn f_quantile_round_trips(p in 1e-5f64..(1.0 - 1e-5), d1 in 2u32..80, d2 in 1u32..10) {
        let (d1, d2) = (d1 as f64, d2 as f64);
        let q = f_quantile(p, d1, d2).unwrap();
        prop_assert!((f_upper_tail(q, d1, d2).unwrap() - p).abs() < 1e-9);
        prop_assert!((f_cdf(q, d1, d2).unwrap() - (1.0 - p)).abs() < 1e-9);
        let want = FisherSnedecor::new(d1, d2).unwrap().sf(q);
        prop_assert!((want - p).abs() < 1e-8);
    }

    #[test]
    fn upper_quantiles_decrease_in_p(p in 1e-4f64..0.99, dp in 1e-4f64..0.009, dof in 2u32..60) {
        let dof = dof as f64;
        prop_assert!(chi2_quantile(p, dof).unwrap() > chi2_quantile(p + dp, dof).unwrap());
        prop_assert!(f_quantile(p, dof, 2.0).unwrap() > f_quantile(p + dp, dof, 2.0).unwrap());
    }

    #[test]
    fn normal_quantile_round_trips(p in 1e-9f64..(1.0 - 1e-9)) {
        let z = std_normal_quantile(p).unwrap();
        let tail = p.min(1.0 - p);
        let got = if p < 0.5 { normal_cdf(z) } else { 1.0 - normal_cdf(z) };
        prop_assert!((got - tail).abs() < 1e-9 * tail);
        let reference = Normal::standard().inverse_cdf(p);
        prop_assert!(close(z, reference, 1e-8));
    }
}

#[test]
fn region_level_quantiles() {
    // F(18, 2) and chi-square(20) quantiles used by the k = 10 joint region.
    let g = 1.0 - 0.9f64.sqrt();
    let f_hi = f_quantile(g / 2.0, 18.0, 2.0).unwrap();
    let f_lo = f_quantile(1.0 - g / 2.0, 18.0, 2.0).unwrap();
    assert!(
        (f_hi
            - FisherSnedecor::new(18.0, 2.0)
                .unwrap()
                .inverse_cdf(1.0 - g / 2.0))
        .abs()
            < 1e-6 * f_hi
    );
    assert!((f_lo - FisherSnedecor::new(18.0, 2.0).unwrap().inverse_cdf(g / 2.0)).abs() < 1e-9);
    assert!((chi2_quantile(0.025, 20.0).unwrap() - 34.16961).abs() < 1e-5);
    assert!((chi2_quantile(0.975, 20.0).unwrap() - 9.590777).abs() < 1e-5);
}

#[test]
fn domain_errors_are_reported() {
    assert!(ln_gamma(0.0).is_err());
    assert!(chi2_quantile(1.0, 4.0).is_err());
    assert!(chi2_quantile(0.5, 0.0).is_err());
    assert!(f_quantile(-0.1, 2.0, 2.0).is_err());
    assert!(reg_beta(1.5, 1.0, 1.0).is_err());
}
