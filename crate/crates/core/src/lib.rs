//! Inference for two Weibull populations with a common shape observed under
//! balanced joint progressive Type-II censoring (BJPC).
//!
//! * [`model`]: censoring schemes, parameters, samples.
//! * [`simulate`]: sample generation (spacings representation and a literal
//!   withdrawal-protocol simulator).
//! * [`estimate`]: MLE via the profile score and the closed-form AMLE.
//! * [`intervals`]: observed-information and parametric-bootstrap intervals.
//! * [`region`]: exact pivotal interval, trapezoid sets and joint region volume.
//! * [`ocs`]: expected-volume design criterion and scheme search.
//! * [`experiments`] and [`reproduce`]: simulation studies and reference tables.
//!
//! Monte-Carlo loops run on rayon with the default `parallel` feature and
//! sequentially without it; see [`par`].

pub mod dataset;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod intervals;
pub mod model;
pub mod ocs;
pub mod par;
pub mod region;
pub mod reproduce;
pub mod rng;
pub mod roots;
pub mod simulate;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use model::{BjpcSample, CensoringScheme, FitMethod, Parameter, WeibullFit, WeibullParams};
pub use par::Execution;
pub use special::Probability;
