//! BJPC sample generation.
//!
//! [`simulate_spacings`] is the production generator. With `a_j` units alive in
//! each population before the `j`-th failure, the `alpha`-power times satisfy
//! `W_i^alpha = G_1 + ... + G_i` where the `G_j` are independent exponentials
//! with rate `(lambda1 + lambda2) a_j`.
//!
//! The indicators are drawn as independent Bernoulli variables with success
//! probability `lambda1 / (lambda1 + lambda2)`, independent of the times. The
//! joint density factorizes as `lambda1^k1 lambda2^k2` times a function of
//! `(w, lambda1 + lambda2)` only, which is exactly the law of i.i.d.
//! Bernoulli labels attached to times whose law depends on the rate sum alone.
//!
//! [`simulate_mechanism`] runs the withdrawal protocol unit by unit and is kept
//! as an independent oracle for tests.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::model::{BjpcSample, CensoringScheme, WeibullParams};
use crate::par::{map_reps, Execution};
use crate::rng::{hash_words, RngStream};
use crate::stats::McEstimate;

/// Draws a BJPC sample through the exponential spacings representation.
pub fn simulate_spacings<R: Rng + ?Sized>(
    scheme: &CensoringScheme,
    params: &WeibullParams,
    rng: &mut R,
) -> BjpcSample {
    let k = scheme.k();
    let rate = params.lambda_sum();
    let p1 = params.lambda1 / rate;
    let inv_alpha = 1.0 / params.alpha;
    let mut w = Vec::with_capacity(k);
    let mut z = Vec::with_capacity(k);
    let mut cum = 0.0;
    for &a in scheme.alive() {
        let e: f64 = Exp1.sample(rng);
        cum += e / (rate * a as f64);
        w.push(cum.powf(inv_alpha));
    }
    for _ in 0..k {
        z.push(rng.random::<f64>() < p1);
    }
    BjpcSample::from_parts(scheme.clone(), w, z)
}

/// Pool sizes observed while running the withdrawal protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismTrace {
    /// `(alive in A, alive in B)` after each failure and its withdrawals.
    pub survivors: Vec<(usize, usize)>,
}

/// Simulates the experiment literally: two pools of `m` Weibull lifetimes,
/// withdrawing `R_i` random survivors from the failing pool and `R_i + 1`
/// from the other at each failure, and everything at the `k`-th failure.
pub fn simulate_mechanism<R: Rng + ?Sized>(
    scheme: &CensoringScheme,
    params: &WeibullParams,
    rng: &mut R,
) -> BjpcSample {
    simulate_mechanism_traced(scheme, params, rng).0
}

pub fn simulate_mechanism_traced<R: Rng + ?Sized>(
    scheme: &CensoringScheme,
    params: &WeibullParams,
    rng: &mut R,
) -> (BjpcSample, MechanismTrace) {
    let m = scheme.m();
    let k = scheme.k();
    let inv_alpha = 1.0 / params.alpha;
    let draw = |lambda: f64, rng: &mut R| -> Vec<f64> {
        (0..m)
            .map(|_| {
                let e: f64 = Exp1.sample(rng);
                (e / lambda).powf(inv_alpha)
            })
            .collect()
    };
    let mut pools = [draw(params.lambda1, rng), draw(params.lambda2, rng)];
    let mut w = Vec::with_capacity(k);
    let mut z = Vec::with_capacity(k);
    let mut survivors = Vec::with_capacity(k);

    for i in 0..k {
        let (pool, idx) = pools
            .iter()
            .enumerate()
            .flat_map(|(p, units)| units.iter().enumerate().map(move |(j, &t)| (p, j, t)))
            .min_by(|a, b| a.2.total_cmp(&b.2))
            .map(|(p, j, _)| (p, j))
            .expect("pools are non-empty before the k-th failure");
        let t = pools[pool].swap_remove(idx);
        w.push(t);
        z.push(pool == 0);
        if i + 1 == k {
            pools[0].clear();
            pools[1].clear();
        } else {
            let r = scheme.removals()[i];
            withdraw(&mut pools[pool], r, rng);
            withdraw(&mut pools[1 - pool], r + 1, rng);
        }
        survivors.push((pools[0].len(), pools[1].len()));
    }
    (
        BjpcSample::from_parts(scheme.clone(), w, z),
        MechanismTrace { survivors },
    )
}

fn withdraw<R: Rng + ?Sized>(pool: &mut Vec<f64>, count: usize, rng: &mut R) {
    let mut chosen = sample_indices(rng, pool.len(), count).into_vec();
    chosen.sort_unstable_by(|a, b| b.cmp(a));
    for i in chosen {
        pool.swap_remove(i);
    }
}

/// Stable experiment identifier for a scheme.
pub fn scheme_id(scheme: &CensoringScheme) -> u64 {
    hash_words(
        [scheme.m() as u64, scheme.k() as u64]
            .into_iter()
            .chain(scheme.removals().iter().map(|&r| r as u64)),
    )
}

/// Monte-Carlo estimate of the expected time on test `E(W_k)`.
pub fn expected_time_on_test(
    scheme: &CensoringScheme,
    params: &WeibullParams,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> McEstimate {
    let id = scheme_id(scheme) ^ 0x45_54_4f_54;
    let draws = map_reps(exec, reps, |r| {
        let mut rng = RngStream::for_replication(seed, id, r as u64).rng();
        *simulate_spacings(scheme, params, &mut rng)
            .times()
            .last()
            .unwrap()
    });
    McEstimate::from_values(&draws)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> WeibullParams {
        WeibullParams::new(1.3, 0.5, 1.0).unwrap()
    }

    #[test]
    fn pools_stay_balanced() {
        let scheme = CensoringScheme::new(12, 5, vec![2, 0, 3, 1]).unwrap();
        for r in 0..50 {
            let mut rng = RngStream::new(9, r).rng();
            let (sample, trace) = simulate_mechanism_traced(&scheme, &params(), &mut rng);
            for (i, &(a, b)) in trace.survivors.iter().enumerate() {
                assert_eq!(a, b);
                let expected = if i + 1 < scheme.k() {
                    scheme.alive()[i + 1]
                } else {
                    0
                };
                assert_eq!(a, expected);
            }
            assert!(sample.times().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn spacings_are_reproducible() {
        let scheme = CensoringScheme::new(12, 5, vec![2, 0, 3, 1]).unwrap();
        let s = RngStream::new(1, 2);
        let a = simulate_spacings(&scheme, &params(), &mut s.rng());
        let b = simulate_spacings(&scheme, &params(), &mut s.rng());
        assert_eq!(a, b);
    }

    #[test]
    fn etot_identical_across_execution_modes() {
        let scheme = CensoringScheme::new(12, 5, vec![2, 0, 3, 1]).unwrap();
        let a = expected_time_on_test(&scheme, &params(), 500, 3, Execution::Sequential);
        let b = expected_time_on_test(&scheme, &params(), 500, 3, Execution::Parallel);
        assert_eq!(a, b);
    }
}
