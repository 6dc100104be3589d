//! File formats written by the CLI.

use std::io::Write;

use serde::{Deserialize, Serialize};
use subaudit_core::events::{absolute_seconds, slice_index, slice_label, MatchId, PlayerId, RawEvent, TeamId};
use subaudit_core::metrics::PlayerSliceState;
use subaudit_core::priority::{LatencyEntry, MatchAudit, PriorityConfig};

use crate::ingest::TagDictionary;

/// The final per-slice table, one row per player and slice, with the
/// dataset's column names.
pub fn write_dataset<W: Write>(w: W, states: &[PlayerSliceState]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for s in states {
        out.serialize(s)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_dataset<R: std::io::Read>(r: R) -> csv::Result<Vec<PlayerSliceState>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

pub fn write_audit_json<W: Write>(w: W, audit: &MatchAudit) -> serde_json::Result<()> {
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, audit)?;
    w.write_all(b"\n").map_err(serde_json::Error::io)
}

/// One tidy row per audited player and slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub match_id: MatchId,
    pub slice: u32,
    pub rank: u32,
    pub player_id: PlayerId,
    pub team_id: TeamId,
    pub p_cum: f64,
    pub baseline: f64,
    pub modifier: f64,
    pub p_final: f64,
    pub critical: bool,
    /// `rule:strength` pairs of the firing rules, strongest first.
    pub active_rules: String,
}

pub fn audit_rows(audit: &MatchAudit, cfg: &PriorityConfig) -> Vec<AuditRow> {
    audit
        .results()
        .map(|r| AuditRow {
            match_id: r.match_id,
            slice: r.slice,
            rank: r.rank,
            player_id: r.player_id,
            team_id: r.team_id,
            p_cum: r.p_cum,
            baseline: r.baseline,
            modifier: r.modifier,
            p_final: r.p_final,
            critical: r.p_final > cfg.critical_threshold,
            active_rules: r
                .trace
                .active()
                .iter()
                .map(|a| format!("{}:{}", a.rule, a.strength))
                .collect::<Vec<_>>()
                .join("|"),
        })
        .collect()
}

pub fn write_audit_csv<W: Write>(w: W, audit: &MatchAudit, cfg: &PriorityConfig) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in audit_rows(audit, cfg) {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyRow {
    pub match_id: MatchId,
    pub player_id: PlayerId,
    pub first_critical_minute: Option<u32>,
    pub substitution_minute: Option<u32>,
    pub latency_minutes: Option<u32>,
    pub unresolved: bool,
}

impl LatencyRow {
    pub fn new(match_id: MatchId, e: &LatencyEntry) -> Self {
        LatencyRow {
            match_id,
            player_id: e.player_id,
            first_critical_minute: e.first_critical_minute,
            substitution_minute: e.substitution_minute,
            latency_minutes: e.latency_minutes,
            unresolved: e.unresolved(),
        }
    }
}

pub fn write_latency<'a, W: Write>(w: W, audits: impl IntoIterator<Item = &'a MatchAudit>) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for a in audits {
        for e in &a.latency {
            out.serialize(LatencyRow::new(a.match_id, e))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Plot-ready priority curve point. Substitution minutes are repeated on
/// every row of the player concerned so a plot needs only this table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelinePoint {
    pub match_id: MatchId,
    pub player_id: PlayerId,
    pub team_id: TeamId,
    pub minute: u32,
    pub p_final: f64,
    pub baseline: f64,
    pub modifier: f64,
    pub critical_threshold: f64,
    pub substituted_out: Option<u32>,
    pub substituted_in: Option<u32>,
}

pub fn write_timeline<'a, W: Write>(
    w: W,
    audits: impl IntoIterator<Item = &'a MatchAudit>,
    cfg: &PriorityConfig,
) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for a in audits {
        let mut rows: Vec<TimelinePoint> = a
            .results()
            .map(|r| TimelinePoint {
                match_id: a.match_id,
                player_id: r.player_id,
                team_id: r.team_id,
                minute: r.slice,
                p_final: r.p_final,
                baseline: r.baseline,
                modifier: r.modifier,
                critical_threshold: cfg.critical_threshold,
                substituted_out: a.substitutions.iter().find(|s| s.player_out == r.player_id).map(|s| s.minute),
                substituted_in: a.substitutions.iter().find(|s| s.player_in == r.player_id).map(|s| s.minute),
            })
            .collect();
        rows.sort_by_key(|p| (p.player_id, p.minute));
        for r in rows {
            out.serialize(r)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// An event with its position on the match clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedEvent {
    #[serde(flatten)]
    pub event: RawEvent,
    /// Absent for shootout events.
    pub absolute_sec: Option<f64>,
    pub slice: Option<u32>,
    pub tag_labels: Vec<String>,
}

impl NormalizedEvent {
    pub fn new(event: &RawEvent, dict: &TagDictionary) -> Self {
        let absolute_sec = absolute_seconds(event).ok();
        NormalizedEvent {
            event: event.clone(),
            absolute_sec,
            slice: absolute_sec.map(|t| slice_label(slice_index(t))),
            tag_labels: event.tags.iter().map(|t| dict.label(*t).unwrap_or("").to_string()).collect(),
        }
    }
}

/// JSON lines, one event per line.
pub fn write_events_jsonl<W: Write>(mut w: W, events: &[RawEvent], dict: &TagDictionary) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut w, &NormalizedEvent::new(e, dict))?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
