//! Censoring schemes, parameters and observed BJPC samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A balanced joint progressive Type-II censoring plan: `m` units per
/// population, `k` observed failures and removal counts `R_1..R_{k-1}`.
///
/// At the `i`-th failure, `R_i` survivors are withdrawn from the failing
/// population and `R_i + 1` from the other one, so both pools always hold the
/// same number of units.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub struct CensoringScheme {
    m: usize,
    k: usize,
    removals: Vec<usize>,
    /// `c_i = R_i + 1` for `i < k`, `c_k = m - sum (R_i + 1)`.
    weights: Vec<usize>,
    /// Units alive in each population just before the `j`-th failure.
    alive: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SchemeRepr {
    m: usize,
    k: usize,
    #[serde(rename = "R")]
    removals: Vec<usize>,
}

impl TryFrom<SchemeRepr> for CensoringScheme {
    type Error = Error;
    fn try_from(r: SchemeRepr) -> Result<Self> {
        CensoringScheme::new(r.m, r.k, r.removals)
    }
}

impl From<CensoringScheme> for SchemeRepr {
    fn from(s: CensoringScheme) -> Self {
        SchemeRepr {
            m: s.m,
            k: s.k,
            removals: s.removals,
        }
    }
}

impl CensoringScheme {
    /// Validates `(m, k, R)` and derives the weights and alive counts.
    pub fn new(m: usize, k: usize, removals: Vec<usize>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidScheme(format!("k >= 2 violated: k = {k}")));
        }
        if m < k {
            return Err(Error::InvalidScheme(format!(
                "m >= k violated: m = {m}, k = {k}"
            )));
        }
        if removals.len() != k - 1 {
            return Err(Error::InvalidScheme(format!(
                "R must have k - 1 = {} entries, got {}",
                k - 1,
                removals.len()
            )));
        }
        let withdrawn: usize = removals.iter().map(|r| r + 1).sum();
        if withdrawn >= m {
            return Err(Error::InvalidScheme(format!(
                "sum (R_i + 1) < m violated: sum = {withdrawn}, m = {m}"
            )));
        }
        let mut weights: Vec<usize> = removals.iter().map(|r| r + 1).collect();
        weights.push(m - withdrawn);
        let mut alive = Vec::with_capacity(k);
        let mut left = m;
        alive.push(left);
        for r in &removals {
            left -= r + 1;
            alive.push(left);
        }
        Ok(CensoringScheme {
            m,
            k,
            removals,
            weights,
            alive,
        })
    }

    /// The scheme with a single removal block of `size` at 1-based `position`.
    pub fn single_block(m: usize, k: usize, position: usize, size: usize) -> Result<Self> {
        if position == 0 || position >= k {
            return Err(Error::InvalidScheme(format!(
                "block position {position} outside 1..={}",
                k.saturating_sub(1)
            )));
        }
        let mut r = vec![0; k - 1];
        r[position - 1] = size;
        CensoringScheme::new(m, k, r)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn removals(&self) -> &[usize] {
        &self.removals
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn alive(&self) -> &[usize] {
        &self.alive
    }

    /// Compact notation, e.g. `(0_(6),7,0_(7))`.
    pub fn notation(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.removals.len() {
            let v = self.removals[i];
            let mut j = i;
            while j < self.removals.len() && self.removals[j] == v {
                j += 1;
            }
            let run = j - i;
            if run == 1 {
                parts.push(v.to_string());
            } else {
                parts.push(format!("{v}_({run})"));
            }
            i = j;
        }
        format!("({})", parts.join(","))
    }
}

impl std::fmt::Display for CensoringScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m={},k={},R={}", self.m, self.k, self.notation())
    }
}

/// Common shape `alpha` and the two rate-type scale parameters of
/// `f(x) = alpha lambda x^(alpha-1) exp(-lambda x^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    pub alpha: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl WeibullParams {
    pub fn new(alpha: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("lambda1", lambda1), ("lambda2", lambda2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(WeibullParams {
            alpha,
            lambda1,
            lambda2,
        })
    }

    pub fn lambda_sum(&self) -> f64 {
        self.lambda1 + self.lambda2
    }
}

/// Observed data `(w, z)`: ordered failure times and population indicators
/// (`true` when the failure came from population A).
#[derive(Debug, Clone, PartialEq)]
pub struct BjpcSample {
    scheme: CensoringScheme,
    w: Vec<f64>,
    z: Vec<bool>,
    ln_w: Vec<f64>,
}

impl BjpcSample {
    /// Checks lengths, positivity and ordering.
    ///
    /// Times must be non-decreasing and the last time must exceed the first;
    /// tied interior times are accepted because recorded data is rounded.
    pub fn new(scheme: CensoringScheme, w: Vec<f64>, z: Vec<bool>) -> Result<Self> {
        let k = scheme.k();
        if w.len() != k || z.len() != k {
            return Err(Error::InvalidSample(format!(
                "expected {k} times and indicators, got {} and {}",
                w.len(),
                z.len()
            )));
        }
        if let Some(bad) = w.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::InvalidSample(format!(
                "failure time {bad} is not positive"
            )));
        }
        if let Some(i) = (1..k).find(|&i| w[i] < w[i - 1]) {
            return Err(Error::InvalidSample(format!(
                "failure times must be ordered: w[{}] = {} < w[{}] = {}",
                i + 1,
                w[i],
                i,
                w[i - 1]
            )));
        }
        if w[k - 1] <= w[0] {
            return Err(Error::InvalidSample("all failure times are equal".into()));
        }
        Ok(Self::from_parts(scheme, w, z))
    }

    /// Skips validation; used by the simulators, whose output is ordered by construction.
    pub(crate) fn from_parts(scheme: CensoringScheme, w: Vec<f64>, z: Vec<bool>) -> Self {
        let ln_w = w.iter().map(|t| t.ln()).collect();
        BjpcSample { scheme, w, z, ln_w }
    }

    pub fn scheme(&self) -> &CensoringScheme {
        &self.scheme
    }

    pub fn times(&self) -> &[f64] {
        &self.w
    }

    pub fn indicators(&self) -> &[bool] {
        &self.z
    }

    pub fn ln_times(&self) -> &[f64] {
        &self.ln_w
    }

    pub fn k(&self) -> usize {
        self.scheme.k()
    }

    /// Failures from population A.
    pub fn k1(&self) -> usize {
        self.z.iter().filter(|&&z| z).count()
    }

    /// Failures from population B.
    pub fn k2(&self) -> usize {
        self.k() - self.k1()
    }

    pub fn sum_ln_w(&self) -> f64 {
        self.ln_w.iter().sum()
    }

    /// Weighted power sums at `alpha`.
    pub fn power_sums(&self, alpha: f64) -> PowerSums {
        PowerSums::new(self.scheme.weights(), &self.ln_w, alpha)
    }

    /// `A(alpha) = sum c_i w_i^alpha`.
    pub fn a_of_alpha(&self, alpha: f64) -> f64 {
        self.power_sums(alpha).a()
    }

    /// Same sample with every time replaced by `f(w_i)`; `f` must be increasing.
    pub fn map_times(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        BjpcSample::new(
            self.scheme.clone(),
            self.w.iter().map(|&t| f(t)).collect(),
            self.z.clone(),
        )
    }
}

/// `sum c_i (ln w_i)^j w_i^alpha` for `j = 0, 1, 2`, each stored relative to a
/// common factor `exp(shift)` so that large `alpha` cannot overflow.
#[derive(Debug, Clone, Copy)]
pub struct PowerSums {
    pub shift: f64,
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
}

impl PowerSums {
    pub fn new(weights: &[usize], ln_w: &[f64], alpha: f64) -> Self {
        let shift = ln_w
            .iter()
            .map(|l| alpha * l)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (&c, &l) in weights.iter().zip(ln_w) {
            let t = c as f64 * (alpha * l - shift).exp();
            s0 += t;
            s1 += t * l;
            s2 += t * l * l;
        }
        PowerSums { shift, s0, s1, s2 }
    }

    /// `ln A(alpha)`.
    pub fn ln_a(&self) -> f64 {
        self.shift + self.s0.ln()
    }

    /// `A(alpha)`; may overflow to infinity where `ln_a` does not.
    pub fn a(&self) -> f64 {
        self.s0 * self.shift.exp()
    }

    /// `A'(alpha)`.
    pub fn a_prime(&self) -> f64 {
        self.s1 * self.shift.exp()
    }

    /// `A''(alpha)`.
    pub fn a_second(&self) -> f64 {
        self.s2 * self.shift.exp()
    }

    /// `H(alpha) = A'(alpha) / A(alpha)`.
    pub fn h(&self) -> f64 {
        self.s1 / self.s0
    }

    /// `A''(alpha) / A(alpha)`.
    pub fn second_ratio(&self) -> f64 {
        self.s2 / self.s0
    }
}

/// Point-estimation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FitMethod {
    Mle,
    Amle,
}

/// Fitted `(alpha, lambda1, lambda2)`. A scale estimate may be 0 when its
/// population contributed no failures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullFit {
    pub alpha: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub method: FitMethod,
    pub converged: bool,
    /// Profile score at `alpha`.
    pub score_residual: f64,
}

impl WeibullFit {
    pub fn params(&self) -> Result<WeibullParams> {
        WeibullParams::new(self.alpha, self.lambda1, self.lambda2)
    }

    pub fn get(&self, p: Parameter) -> f64 {
        match p {
            Parameter::Alpha => self.alpha,
            Parameter::Lambda1 => self.lambda1,
            Parameter::Lambda2 => self.lambda2,
        }
    }
}

/// Names the three model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Alpha,
    Lambda1,
    Lambda2,
}

impl Parameter {
    pub const ALL: [Parameter; 3] = [Parameter::Alpha, Parameter::Lambda1, Parameter::Lambda2];

    pub fn of(self, p: &WeibullParams) -> f64 {
        match self {
            Parameter::Alpha => p.alpha,
            Parameter::Lambda1 => p.lambda1,
            Parameter::Lambda2 => p.lambda2,
        }
    }
}

impl std::fmt::Display for Parameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parameter::Alpha => "alpha",
            Parameter::Lambda1 => "lambda1",
            Parameter::Lambda2 => "lambda2",
        })
    }
}
