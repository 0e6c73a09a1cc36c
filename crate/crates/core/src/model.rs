//! Either of the two models, for code that handles both.

use serde::{Deserialize, Serialize};

use crate::full::{FullEquilibrium, FullParams};
use crate::schedule::{Message, MessageRegion};
use crate::simple::{SimpleEquilibrium, SimpleParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Simple(SimpleParams),
    Full(FullParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum AnyEquilibrium {
    Simple(SimpleEquilibrium),
    Full(FullEquilibrium),
}

impl AnyEquilibrium {
    pub fn model_name(&self) -> &'static str {
        match self {
            AnyEquilibrium::Simple(_) => "simple",
            AnyEquilibrium::Full(_) => "full",
        }
    }

    /// Nonempty voluntary regions in increasing order of value.
    pub fn regions(&self) -> Vec<MessageRegion> {
        match self {
            AnyEquilibrium::Simple(eq) => eq.regions().into_iter().filter(|r| !r.is_empty()).collect(),
            AnyEquilibrium::Full(eq) => eq.regions(),
        }
    }

    /// Probability that `message` is sent, forced senders included.
    pub fn message_mass(&self, message: Message) -> f64 {
        match self {
            AnyEquilibrium::Simple(eq) => eq.message_mass(message),
            AnyEquilibrium::Full(eq) => eq.masses.get(message),
        }
    }

    pub fn prior_mean(&self) -> f64 {
        match self {
            AnyEquilibrium::Simple(_) => 0.5,
            AnyEquilibrium::Full(eq) => eq.params.prior_mean(),
        }
    }
}

impl From<SimpleEquilibrium> for AnyEquilibrium {
    fn from(eq: SimpleEquilibrium) -> Self {
        AnyEquilibrium::Simple(eq)
    }
}

impl From<FullEquilibrium> for AnyEquilibrium {
    fn from(eq: FullEquilibrium) -> Self {
        AnyEquilibrium::Full(eq)
    }
}
