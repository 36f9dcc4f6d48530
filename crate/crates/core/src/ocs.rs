//! Optimum censoring scheme search by Monte-Carlo expected region volume.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CensoringScheme, WeibullParams};
use crate::par::{map_reps, Execution};
use crate::region::{region_volume_with, RegionLevels};
use crate::rng::RngStream;
use crate::simulate::{scheme_id, simulate_spacings};
use crate::special::Probability;
use crate::stats::McEstimate;

/// Default cap on exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Which schemes to consider for fixed `(m, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeFamily {
    /// Every `R >= 0` with `sum (R_i + 1) < m`.
    Exhaustive,
    /// One block of `size` removals at each position `1..k-1`.
    SingleBlock { size: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeEvaluation {
    pub scheme: CensoringScheme,
    pub expected_volume: f64,
    pub volume_se: f64,
    pub etot: f64,
    pub etot_se: f64,
    pub reps: usize,
}

/// Settings shared by every scheme in a search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub gamma: Probability,
    pub reps: usize,
    pub seed: u64,
    pub grid: usize,
    pub exec: Execution,
}

/// Number of schemes in the exhaustive family: `C(m - 1, k - 1)`.
pub fn exhaustive_count(m: usize, k: usize) -> u128 {
    if k == 0 || m < k {
        return 0;
    }
    let n = (m - 1) as u128;
    let r = (k - 1).min(m - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lists the schemes of a family.
pub fn enumerate_schemes(
    m: usize,
    k: usize,
    family: SchemeFamily,
    cap: u128,
) -> Result<Vec<CensoringScheme>> {
    // validates (m, k) through the all-zero plan
    CensoringScheme::new(m, k, vec![0; k.saturating_sub(1)])?;
    match family {
        SchemeFamily::SingleBlock { size } => (1..k)
            .map(|pos| CensoringScheme::single_block(m, k, pos, size))
            .collect(),
        SchemeFamily::Exhaustive => {
            let count = exhaustive_count(m, k);
            if count > cap {
                return Err(Error::TooManySchemes { count, cap });
            }
            let budget = m - k;
            let mut out = Vec::with_capacity(count as usize);
            let mut current = vec![0usize; k - 1];
            compositions(&mut current, 0, budget, &mut |r| {
                out.push(CensoringScheme::new(m, k, r.to_vec()).expect("within budget"));
            });
            Ok(out)
        }
    }
}

fn compositions(current: &mut [usize], pos: usize, left: usize, emit: &mut impl FnMut(&[usize])) {
    if pos == current.len() {
        emit(current);
        return;
    }
    for v in 0..=left {
        current[pos] = v;
        compositions(current, pos + 1, left - v, emit);
    }
    current[pos] = 0;
}

/// Monte-Carlo expected volume of the balanced-split joint region, together
/// with the expected time on test from the same draws.
pub fn evaluate_scheme(
    scheme: &CensoringScheme,
    params: &WeibullParams,
    config: &SearchConfig,
) -> Result<SchemeEvaluation> {
    if config.reps < 2 {
        return Err(Error::Domain(
            "at least two replications are required".into(),
        ));
    }
    let levels = RegionLevels::balanced(scheme.k(), config.gamma)?;
    let id = scheme_id(scheme);
    let draws = map_reps(config.exec, config.reps, |r| -> Result<(f64, f64)> {
        let mut rng = RngStream::for_replication(config.seed, id, r as u64).rng();
        let sample = simulate_spacings(scheme, params, &mut rng);
        let vol = region_volume_with(&sample, &levels, config.grid)?;
        Ok((vol, *sample.times().last().unwrap()))
    });
    let draws: Vec<(f64, f64)> = draws.into_iter().collect::<Result<_>>()?;
    let vol = McEstimate::from_values(&draws.iter().map(|d| d.0).collect::<Vec<_>>());
    let etot = McEstimate::from_values(&draws.iter().map(|d| d.1).collect::<Vec<_>>());
    Ok(SchemeEvaluation {
        scheme: scheme.clone(),
        expected_volume: vol.mean,
        volume_se: vol.std_error,
        etot: etot.mean,
        etot_se: etot.std_error,
        reps: config.reps,
    })
}

/// `E(V(D(gamma)))` with its standard error.
pub fn expected_volume(
    scheme: &CensoringScheme,
    params: &WeibullParams,
    config: &SearchConfig,
) -> Result<McEstimate> {
    let e = evaluate_scheme(scheme, params, config)?;
    Ok(McEstimate {
        mean: e.expected_volume,
        std_error: e.volume_se,
        n: e.reps,
    })
}

/// Sorts evaluations: smaller expected volume first, then smaller ETOT, then
/// lexicographically smaller removal vector.
pub fn rank(evals: &mut [SchemeEvaluation]) {
    evals.sort_by(|a, b| {
        a.expected_volume
            .total_cmp(&b.expected_volume)
            .then(a.etot.total_cmp(&b.etot))
            .then_with(|| a.scheme.removals().cmp(b.scheme.removals()))
    });
}

/// Evaluates every scheme of the family and ranks them.
pub fn search_optimum(
    m: usize,
    k: usize,
    params: &WeibullParams,
    family: SchemeFamily,
    config: &SearchConfig,
) -> Result<Vec<SchemeEvaluation>> {
    let schemes = enumerate_schemes(m, k, family, DEFAULT_ENUMERATION_CAP)?;
    search_schemes(&schemes, params, config)
}

/// Evaluates and ranks an explicit list of schemes.
pub fn search_schemes(
    schemes: &[CensoringScheme],
    params: &WeibullParams,
    config: &SearchConfig,
) -> Result<Vec<SchemeEvaluation>> {
    let mut evals = schemes
        .iter()
        .map(|s| evaluate_scheme(s, params, config))
        .collect::<Result<Vec<_>>>()?;
    rank(&mut evals);
    Ok(evals)
}
