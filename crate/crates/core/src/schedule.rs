//! Affine price schedules and the message regions they induce.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Messages a manager can choose, ordered by price sensitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Message {
    /// Complex uninformative disclosure.
    Obfuscate,
    Simple,
    /// Complex informative disclosure.
    Informative,
}

impl Message {
    pub const ALL: [Message; 3] = [Message::Obfuscate, Message::Simple, Message::Informative];

    pub fn as_str(self) -> &'static str {
        match self {
            Message::Obfuscate => "obfuscate",
            Message::Simple => "simple",
            Message::Informative => "informative",
        }
    }

    pub fn is_complex(self) -> bool {
        !matches!(self, Message::Simple)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Expected price `slope * y + intercept` of sending `message` with value `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceLine {
    pub message: Message,
    pub slope: f64,
    pub intercept: f64,
}

impl PriceLine {
    pub fn new(message: Message, slope: f64, intercept: f64) -> Self {
        PriceLine {
            message,
            slope,
            intercept,
        }
    }

    pub fn flat(message: Message, price: f64) -> Self {
        PriceLine {
            message,
            slope: 0.0,
            intercept: price,
        }
    }

    pub fn at(&self, y: f64) -> f64 {
        self.slope * y + self.intercept
    }

    /// Abscissa where two lines meet; `None` for parallel lines.
    pub fn crossing(&self, other: &PriceLine) -> Option<f64> {
        let ds = self.slope - other.slope;
        if ds == 0.0 {
            None
        } else {
            Some((other.intercept - self.intercept) / ds)
        }
    }
}

/// `[lo, hi)` on which `message` is sent. The region whose `hi` is the top
/// of the support also contains that endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MessageRegion {
    pub message: Message,
    pub lo: f64,
    pub hi: f64,
}

impl MessageRegion {
    pub fn new(message: Message, lo: f64, hi: f64) -> Self {
        MessageRegion { message, lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

/// Message chosen at `y` given an ordered partition of `[0, 1]`.
pub fn message_at(regions: &[MessageRegion], y: f64) -> Option<Message> {
    let last = regions.iter().rev().find(|r| !r.is_empty())?;
    regions
        .iter()
        .filter(|r| !r.is_empty())
        .find(|r| r.lo <= y && y < r.hi)
        .or_else(|| (y == last.hi).then_some(last))
        .map(|r| r.message)
}
