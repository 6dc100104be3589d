//! File formats, command line and HTTP service around `subaudit-core`.
//!
//! The usual flow is [`ingest::load_dir`] to read a directory of tables,
//! [`compute`] to build slice states and audits, then either the writers in
//! [`output`] or the [`api`] router over an [`store::AuditStore`].

pub mod api;
pub mod cli;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod report;
pub mod store;

pub use subaudit_core as core;

use subaudit_core::metrics::{compute_matches, MatchStates, PlayerSliceState};
use subaudit_core::priority::{Auditor, MatchAudit};
use subaudit_core::system::SystemConfig;

pub use config::RunConfig;
pub use error::{AppError, IngestError};
pub use ingest::Dataset;

/// Slice states and audits for every match of a dataset.
#[derive(Debug, Clone)]
pub struct Computed {
    pub states: MatchStates,
    pub audits: Vec<MatchAudit>,
    pub system: SystemConfig,
    pub auditor: Auditor,
}

impl Computed {
    pub fn states_of(&self, audit: &MatchAudit) -> Vec<PlayerSliceState> {
        self.states.states.iter().filter(|s| s.match_id == audit.match_id).cloned().collect()
    }
}

/// Runs the metric pipeline and the audit for every match in `data`.
pub fn compute(data: &Dataset, cfg: &RunConfig) -> Result<Computed, AppError> {
    let system = cfg.system()?;
    let auditor = Auditor::new(&system, cfg.priority)?;
    let states = compute_matches(&data.matches, &data.events, &data.players, &cfg.pipeline)?;
    for w in &states.warnings {
        match w.player_id {
            Some(p) => log::warn!("match {} player {}: {}", w.match_id, p, w.message),
            None => log::warn!("match {}: {}", w.match_id, w.message),
        }
    }
    if states.shootout_events > 0 {
        log::info!("dropped {} shootout events", states.shootout_events);
    }
    let mut audits = Vec::with_capacity(data.matches.len());
    for m in &data.matches {
        let mine: Vec<PlayerSliceState> = states.states.iter().filter(|s| s.match_id == m.match_id).cloned().collect();
        audits.push(auditor.audit_match(m.match_id, &mine, &m.substitutions)?);
    }
    Ok(Computed { states, audits, system, auditor })
}
