//! Read-only audit store behind the HTTP service.

use std::collections::BTreeMap;

use subaudit_core::events::MatchId;
use subaudit_core::metrics::PlayerSliceState;
use subaudit_core::priority::{Auditor, MatchAudit};
use subaudit_core::system::SystemConfig;

use crate::Computed;

#[derive(Debug, Clone)]
pub struct StoredMatch {
    pub audit: MatchAudit,
    /// Slice states, kept so what-if queries can re-run inference.
    pub states: Vec<PlayerSliceState>,
}

impl StoredMatch {
    pub fn slice_states(&self, slice: u32) -> Vec<PlayerSliceState> {
        self.states.iter().filter(|s| s.tempo_partida == slice).cloned().collect()
    }
}

/// Precomputed audits plus the engine for what-if queries. Never mutated
/// after construction.
#[derive(Debug, Clone)]
pub struct AuditStore {
    pub auditor: Auditor,
    pub system: SystemConfig,
    pub matches: BTreeMap<MatchId, StoredMatch>,
}

impl AuditStore {
    pub fn new(computed: Computed) -> Self {
        let mut matches = BTreeMap::new();
        for audit in &computed.audits {
            let states = computed.states_of(audit);
            matches.insert(audit.match_id, StoredMatch { audit: audit.clone(), states });
        }
        AuditStore { auditor: computed.auditor, system: computed.system, matches }
    }

    pub fn get(&self, id: MatchId) -> Option<&StoredMatch> {
        self.matches.get(&id)
    }
}
