use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::audit::MatchAudit;
use super::PriorityConfig;
use crate::events::PlayerId;

/// Gap between the first critical signal and the actual substitution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyEntry {
    pub player_id: PlayerId,
    /// Label of the first slice with `p_final` above the threshold.
    pub first_critical_minute: Option<u32>,
    pub substitution_minute: Option<u32>,
    /// `max(0, substitution - first_critical)` when both exist.
    pub latency_minutes: Option<u32>,
}

impl LatencyEntry {
    /// Critical at some point and never taken off.
    pub fn unresolved(&self) -> bool {
        self.first_critical_minute.is_some() && self.substitution_minute.is_none()
    }
}

/// One entry per audited player, ordered by player id.
pub fn decision_latency(audit: &MatchAudit, cfg: &PriorityConfig) -> Vec<LatencyEntry> {
    let mut first: BTreeMap<PlayerId, Option<u32>> = BTreeMap::new();
    for slice in &audit.slices {
        for r in &slice.results {
            let e = first.entry(r.player_id).or_insert(None);
            if e.is_none() && r.p_final > cfg.critical_threshold {
                *e = Some(slice.slice);
            }
        }
    }
    first
        .into_iter()
        .map(|(player_id, first_critical_minute)| {
            let substitution_minute = audit.substitutions.iter().find(|s| s.player_out == player_id).map(|s| s.minute);
            let latency_minutes = match (first_critical_minute, substitution_minute) {
                (Some(c), Some(s)) => Some(s.saturating_sub(c)),
                _ => None,
            };
            LatencyEntry { player_id, first_critical_minute, substitution_minute, latency_minutes }
        })
        .collect()
}
