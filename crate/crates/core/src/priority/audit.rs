use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::inputs::FuzzyInputs;
use super::latency::{decision_latency, LatencyEntry};
use super::{baseline, final_priority, PriorityConfig};
use crate::error::{Error, Result};
use crate::events::{MatchId, PlayerId, Role, Substitution, TeamId};
use crate::fuzzy::{ActivationTrace, Engine};
use crate::metrics::PlayerSliceState;
use crate::system::SystemConfig;

/// Priority of one player in one slice, with everything needed to explain it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityResult {
    pub match_id: MatchId,
    pub player_id: PlayerId,
    pub team_id: TeamId,
    /// Slice label (minute at which the slice ends).
    pub slice: u32,
    pub p_cum: f64,
    pub baseline: f64,
    pub modifier: f64,
    pub p_final: f64,
    /// 1-based position within the slice.
    pub rank: u32,
    pub inputs: FuzzyInputs,
    /// Input fields replaced by a what-if query.
    #[serde(default)]
    pub overridden: Vec<String>,
    pub trace: ActivationTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceAudit {
    pub slice: u32,
    pub results: Vec<PriorityResult>,
}

/// A substitute's priority after entering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostEntryTrack {
    pub player_id: PlayerId,
    pub entry_minute: u32,
    /// `(slice, p_final)` in slice order.
    pub series: Vec<(u32, f64)>,
    /// Priority fell at every step after entry.
    pub high_impact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchAudit {
    pub match_id: MatchId,
    pub slices: Vec<SliceAudit>,
    pub substitutions: Vec<Substitution>,
    pub latency: Vec<LatencyEntry>,
    pub post_entry: Vec<PostEntryTrack>,
}

impl MatchAudit {
    pub fn empty(match_id: MatchId) -> Self {
        MatchAudit {
            match_id,
            slices: Vec::new(),
            substitutions: Vec::new(),
            latency: Vec::new(),
            post_entry: Vec::new(),
        }
    }

    pub fn results(&self) -> impl Iterator<Item = &PriorityResult> {
        self.slices.iter().flat_map(|s| s.results.iter())
    }

    pub fn result(&self, player: PlayerId, slice: u32) -> Option<&PriorityResult> {
        self.slices.iter().find(|s| s.slice == slice).and_then(|s| s.results.iter().find(|r| r.player_id == player))
    }

    /// `(slice, p_final)` for one player.
    pub fn series(&self, player: PlayerId) -> Vec<(u32, f64)> {
        self.results().filter(|r| r.player_id == player).map(|r| (r.slice, r.p_final)).collect()
    }
}

/// Rule engine plus priority settings; immutable and shareable.
#[derive(Debug, Clone)]
pub struct Auditor {
    engine: Engine,
    config: PriorityConfig,
}

impl Auditor {
    pub fn new(system: &SystemConfig, config: PriorityConfig) -> Result<Self> {
        config.validate()?;
        Ok(Auditor { engine: system.engine()?, config })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn config(&self) -> &PriorityConfig {
        &self.config
    }

    /// Unranked priority for explicit inputs; `p_cum` drives the baseline.
    pub fn score(&self, state: &PlayerSliceState, inputs: FuzzyInputs) -> Result<PriorityResult> {
        let base = baseline(inputs.p_cum)?;
        let (modifier, trace) = self.engine.evaluate(&inputs.to_crisp())?;
        Ok(PriorityResult {
            match_id: state.match_id,
            player_id: state.player_id,
            team_id: state.team_id,
            slice: state.tempo_partida,
            p_cum: inputs.p_cum,
            baseline: base,
            modifier,
            p_final: final_priority(base, modifier, &self.config),
            rank: 0,
            inputs,
            overridden: Vec::new(),
            trace,
        })
    }

    pub fn score_state(&self, state: &PlayerSliceState) -> Result<PriorityResult> {
        state.validate()?;
        self.score(state, FuzzyInputs::from_state(state))
    }

    /// Ranks the outfield players of one slice. Goalkeepers are skipped.
    pub fn audit_slice(&self, states: &[PlayerSliceState]) -> Result<Vec<PriorityResult>> {
        let mut out = Vec::with_capacity(states.len());
        for s in states.iter().filter(|s| s.player_position != Role::Goalkeeper) {
            out.push(self.score_state(s)?);
        }
        rank(&mut out);
        Ok(out)
    }

    pub fn audit_match(
        &self,
        match_id: MatchId,
        states: &[PlayerSliceState],
        substitutions: &[Substitution],
    ) -> Result<MatchAudit> {
        audit_match(self, match_id, states, substitutions)
    }
}

/// Descending `p_final`; ties go to the lower `p_cum`, then the lower id.
pub(crate) fn rank(results: &mut [PriorityResult]) {
    results.sort_by(|a, b| {
        b.p_final.total_cmp(&a.p_final).then(a.p_cum.total_cmp(&b.p_cum)).then(a.player_id.cmp(&b.player_id))
    });
    for (i, r) in results.iter_mut().enumerate() {
        r.rank = i as u32 + 1;
    }
}

/// Audits every slice of a match, then attaches substitutions, latency and
/// post-entry tracks.
pub fn audit_match(
    auditor: &Auditor,
    match_id: MatchId,
    states: &[PlayerSliceState],
    substitutions: &[Substitution],
) -> Result<MatchAudit> {
    let mut by_slice: BTreeMap<u32, Vec<PlayerSliceState>> = BTreeMap::new();
    for s in states {
        if s.match_id != match_id {
            return Err(Error::InvalidState {
                player_id: s.player_id.0,
                reason: alloc::format!("belongs to match {}, not {}", s.match_id, match_id),
            });
        }
        by_slice.entry(s.tempo_partida).or_default().push(s.clone());
    }
    let mut audit = MatchAudit::empty(match_id);
    for (slice, group) in by_slice {
        let results = auditor.audit_slice(&group)?;
        if !results.is_empty() {
            audit.slices.push(SliceAudit { slice, results });
        }
    }
    let mut subs = substitutions.to_vec();
    subs.sort_by_key(|s| s.minute);
    audit.substitutions = subs;
    audit.latency = decision_latency(&audit, auditor.config());
    audit.post_entry = audit
        .substitutions
        .iter()
        .filter_map(|s| {
            let series = audit.series(s.player_in);
            if series.is_empty() {
                return None;
            }
            let high_impact = series.len() >= 2 && series.windows(2).all(|w| w[1].1 < w[0].1);
            Some(PostEntryTrack { player_id: s.player_in, entry_minute: s.minute, series, high_impact })
        })
        .collect();
    Ok(audit)
}
