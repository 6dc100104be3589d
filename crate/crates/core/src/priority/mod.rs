//! Final substitution priority, rankings, decision latency and what-if
//! queries.
//!
//! ```text
//! baseline = 100 · (1 − P_cum)
//! P_final  = clip(baseline + modifier · α, 0, 100)
//! ```

mod audit;
mod inputs;
mod latency;
mod whatif;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use audit::{audit_match, Auditor, MatchAudit, PostEntryTrack, PriorityResult, SliceAudit};
pub use inputs::FuzzyInputs;
pub use latency::{decision_latency, LatencyEntry};
pub use whatif::Overrides;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PriorityConfig {
    /// Scale applied to the fuzzy modifier.
    pub alpha: f64,
    /// `P_final` above this counts as a critical signal.
    pub critical_threshold: f64,
}

impl Default for PriorityConfig {
    fn default() -> Self {
        PriorityConfig { alpha: 0.25, critical_threshold: 90.0 }
    }
}

impl PriorityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(alloc::format!("alpha {} must be positive", self.alpha)));
        }
        if !(0.0..=100.0).contains(&self.critical_threshold) {
            return Err(Error::Config(alloc::format!(
                "critical_threshold {} outside [0, 100]",
                self.critical_threshold
            )));
        }
        Ok(())
    }
}

/// `100 · (1 − p_cum)`.
pub fn baseline(p_cum: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_cum) {
        return Err(Error::Domain { field: "p_cum".into(), value: p_cum, lo: 0.0, hi: 1.0 });
    }
    Ok(100.0 * (1.0 - p_cum))
}

/// `clip(baseline + modifier · alpha, 0, 100)`.
pub fn final_priority(baseline: f64, modifier: f64, cfg: &PriorityConfig) -> f64 {
    (baseline + modifier * cfg.alpha).clamp(0.0, 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_values() {
        assert_eq!(baseline(0.0).unwrap(), 100.0);
        assert_eq!(baseline(1.0).unwrap(), 0.0);
        assert_eq!(baseline(0.28).unwrap(), 72.0);
        assert!(matches!(baseline(1.2), Err(Error::Domain { .. })));
        assert!(baseline(f64::NAN).is_err());
    }

    #[test]
    fn clamps() {
        let c = PriorityConfig::default();
        assert_eq!(final_priority(72.0, 0.0, &c), 72.0);
        assert_eq!(final_priority(95.0, 60.0, &c), 100.0);
        assert_eq!(final_priority(10.0, -60.0, &c), 0.0);
    }

    #[test]
    fn config_checks() {
        assert!(PriorityConfig::default().validate().is_ok());
        assert!(PriorityConfig { alpha: 0.0, ..Default::default() }.validate().is_err());
        assert!(PriorityConfig { critical_threshold: 101.0, ..Default::default() }.validate().is_err());
    }
}
