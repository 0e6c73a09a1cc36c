//! Equilibria of disclosure games where managers choose how complex their
//! disclosures are.
//!
//! * [`dye`]: two-message baseline with an exogenous chance of silence.
//! * [`simple`]: one-parameter model with closed-form threshold.
//! * [`full`]: three-message model with sophisticated and unsophisticated
//!   investors, solved by belief fixed points.
//! * [`montecarlo`]: seeded simulation that checks analytic prices.
//! * [`statics`]: comparative statics and hypothesis checks.

// Negated comparisons such as `!(x > 0.0)` are used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod dye;
pub mod error;
pub mod figure;
pub mod full;
pub mod model;
pub mod montecarlo;
pub mod output;
pub mod roots;
pub mod schedule;
pub mod simple;
pub mod statics;
pub mod valuation;

pub use error::{Error, Result};
pub use model::{AnyEquilibrium, ModelSpec};
pub use schedule::{Message, MessageRegion, PriceLine};
pub use valuation::{Valuation, ValuationDistribution};
