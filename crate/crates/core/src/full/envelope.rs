use serde::{Deserialize, Serialize};

use super::Menu;
use crate::error::{Error, Result};
use crate::schedule::{Message, MessageRegion, PriceLine};

/// Crossings closer than this are treated as a single triple crossing, so
/// the simple region is empty rather than a sliver of rounding noise.
const TRIPLE_CROSSING_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub t1: f64,
    pub t2: f64,
}

fn check_order(lines: &[PriceLine; 3]) -> Result<()> {
    let [o, s, i] = lines;
    let tagged = o.message == Message::Obfuscate && s.message == Message::Simple && i.message == Message::Informative;
    if !tagged || !(o.slope < s.slope && s.slope < i.slope) {
        return Err(Error::InvalidOrdering {
            obfuscated: o.slope,
            simple: s.slope,
            informative: i.slope,
        });
    }
    Ok(())
}

/// Switch points of the pointwise maximum of the three lines on `[0, 1]`.
///
/// With strictly increasing slopes the maximum over the real line visits
/// obfuscate, simple and informative in that order; simple appears only
/// when it crosses obfuscate before it crosses informative. Crossings are
/// clamped to `[0, 1]`.
pub fn envelope_thresholds(lines: &[PriceLine; 3], menu: Menu) -> Result<Thresholds> {
    check_order(lines)?;
    let [o, s, i] = lines;
    // Slopes differ, so every crossing exists.
    let y_oi = o.crossing(i).unwrap();
    if menu == Menu::Full {
        let y_os = o.crossing(s).unwrap();
        let y_si = s.crossing(i).unwrap();
        if y_os < y_si - TRIPLE_CROSSING_EPS * (1.0 + y_si.abs()) {
            return Ok(Thresholds {
                t1: y_os.clamp(0.0, 1.0),
                t2: y_si.clamp(0.0, 1.0),
            });
        }
    }
    let t = y_oi.clamp(0.0, 1.0);
    Ok(Thresholds { t1: t, t2: t })
}

pub(crate) fn regions_from_thresholds(t1: f64, t2: f64) -> Vec<MessageRegion> {
    [
        MessageRegion::new(Message::Obfuscate, 0.0, t1),
        MessageRegion::new(Message::Simple, t1, t2),
        MessageRegion::new(Message::Informative, t2, 1.0),
    ]
    .into_iter()
    .filter(|r| !r.is_empty())
    .collect()
}

/// Pointwise-argmax partition of `[0, 1]`, ties going to the steeper line.
/// Regions never attaining the maximum are omitted.
pub fn upper_envelope_regions(lines: &[PriceLine; 3]) -> Result<Vec<MessageRegion>> {
    let t = envelope_thresholds(lines, Menu::Full)?;
    Ok(regions_from_thresholds(t.t1, t.t2))
}
