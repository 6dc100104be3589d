//! Events of one match to the per-slice player states fed to inference.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::config::{PercentileScope, PipelineConfig};
use super::network::{network_score, PassGraph};
use super::series::{cumulative_mean, momentum, raw_slice_score, role_percentile};
use super::state::PlayerSliceState;
use super::technical::{team_volume, technical_score};
use crate::error::Result;
use crate::events::{
    absolute_seconds, match_end_seconds, on_field_intervals, slice_index_with, slice_label_with, MatchId, MatchRecord,
    PlayerId, PlayerTable, RawEvent, Role, TeamId,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub match_id: MatchId,
    pub player_id: Option<PlayerId>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchStates {
    pub states: Vec<PlayerSliceState>,
    pub warnings: Vec<Warning>,
    /// Shootout events skipped because they have no slice.
    pub shootout_events: usize,
}

#[derive(Default)]
struct SliceTally {
    cards: u32,
    goals: u32,
    assists: u32,
}

/// Event with its absolute time and slice.
struct Timed<'a> {
    slice: u32,
    ev: &'a RawEvent,
}

/// Builds the final per-slice table for one match.
///
/// Only events whose `match_id` matches `record` are used. Rows come out
/// ordered by player id, then slice.
pub fn compute_match(
    record: &MatchRecord,
    events: &[RawEvent],
    players: &PlayerTable,
    cfg: &PipelineConfig,
) -> Result<MatchStates> {
    cfg.validate()?;
    let width = cfg.slice_seconds;
    let mid = record.match_id;
    let match_events: Vec<RawEvent> = events.iter().filter(|e| e.match_id == mid).cloned().collect();
    let mut out = MatchStates::default();

    let mut timed: Vec<(f64, Timed<'_>)> = Vec::with_capacity(match_events.len());
    for ev in &match_events {
        match absolute_seconds(ev) {
            Ok(t) => timed.push((t, Timed { slice: slice_index_with(t, width), ev })),
            Err(_) => out.shootout_events += 1,
        }
    }
    // stable: events sharing a timestamp keep their file order
    timed.sort_by(|a, b| a.0.total_cmp(&b.0));

    let intervals = on_field_intervals(record, &match_events, players)?;
    let end = match_end_seconds(&match_events);
    let n_slices = libm::ceil(end / f64::from(width)) as u32;

    // team membership: lineups, then substitutes, then whatever events say
    let mut team_of: BTreeMap<PlayerId, TeamId> = BTreeMap::new();
    for (team, lineup) in record.teams.iter().zip(&record.lineups) {
        for p in lineup {
            team_of.insert(*p, *team);
        }
    }
    for s in &record.substitutions {
        if let Some(t) = team_of.get(&s.player_out).copied() {
            team_of.entry(s.player_in).or_insert(t);
        }
    }
    for (_, t) in &timed {
        team_of.entry(t.ev.player_id).or_insert(t.ev.team_id);
    }

    // per (team, slice) event lists and pass graphs; per (player, slice) tallies
    let mut by_team: BTreeMap<(TeamId, u32), Vec<&RawEvent>> = BTreeMap::new();
    let mut graphs: BTreeMap<(TeamId, u32), PassGraph> = BTreeMap::new();
    let mut by_player: BTreeMap<(PlayerId, u32), Vec<&RawEvent>> = BTreeMap::new();
    let mut tallies: BTreeMap<(PlayerId, u32), SliceTally> = BTreeMap::new();
    let tags = cfg.tags;
    for (i, (_, t)) in timed.iter().enumerate() {
        let ev = t.ev;
        by_team.entry((ev.team_id, t.slice)).or_default().push(ev);
        by_player.entry((ev.player_id, t.slice)).or_default().push(ev);
        let g = graphs.entry((ev.team_id, t.slice)).or_default();
        g.add_node(ev.player_id);
        if ev.event_name == "Pass" && ev.has_tag(tags.accurate) {
            if let Some((_, next)) = timed.get(i + 1) {
                let n = next.ev;
                if n.team_id == ev.team_id && n.match_period == ev.match_period && n.player_id != ev.player_id {
                    g.add_pass(ev.player_id, n.player_id);
                }
            }
        }
        let tally = tallies.entry((ev.player_id, t.slice)).or_default();
        if ev.has_tag(tags.yellow_card) {
            tally.cards += 1;
        }
        if ev.event_name == "Shot" && (ev.sub_event_name == "Goal" || ev.has_tag(tags.goal)) {
            tally.goals += 1;
        }
        if ev.has_tag(tags.assist) {
            tally.assists += 1;
        }
    }

    let mut centrality: BTreeMap<(TeamId, u32), BTreeMap<PlayerId, f64>> = BTreeMap::new();
    for (key, g) in &graphs {
        centrality.insert(*key, network_score(g, &cfg.centrality)?);
    }
    let volumes: BTreeMap<(TeamId, u32), f64> =
        by_team.iter().map(|(k, evs)| (*k, team_volume(evs.iter().copied(), &cfg.technical_weights))).collect();

    // one block of rows per player
    let mut rows: Vec<PlayerSliceState> = Vec::new();
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    for iv in &intervals {
        let pid = iv.player_id;
        let Some(rec) = players.get(&pid) else {
            out.warnings.push(Warning {
                match_id: mid,
                player_id: Some(pid),
                message: "no player record; player skipped".into(),
            });
            continue;
        };
        let Some(team) = team_of.get(&pid).copied() else { continue };
        let age = match rec.birth_date {
            Some(b) => {
                let years = b.whole_years_until(&record.date);
                let clamped = years.clamp(15, 45);
                if clamped != years {
                    out.warnings.push(Warning {
                        match_id: mid,
                        player_id: Some(pid),
                        message: alloc::format!("age {years} clamped to {clamped}"),
                    });
                }
                clamped as u32
            }
            None => {
                out.warnings.push(Warning {
                    match_id: mid,
                    player_id: Some(pid),
                    message: alloc::format!("missing birth date; age set to {}", cfg.default_age),
                });
                cfg.default_age
            }
        };

        let start = rows.len();
        let (mut cards, mut goals, mut assists) = (0u32, 0u32, 0u32);
        let mut retained = 0u32;
        for k in 0..n_slices {
            if let Some(t) = tallies.get(&(pid, k)) {
                cards += t.cards;
                goals += t.goals;
                assists += t.assists;
            }
            if !iv.overlaps_slice(k, width) {
                continue;
            }
            retained += 1;
            let vol = volumes.get(&(team, k)).copied().unwrap_or(0.0);
            let mine = by_player.get(&(pid, k)).map(Vec::as_slice).unwrap_or(&[]);
            let tech = technical_score(mine.iter().copied(), vol, &cfg.technical_weights, cfg.normalization);
            let net = centrality.get(&(team, k)).and_then(|c| c.get(&pid)).copied().unwrap_or(0.0);
            rows.push(PlayerSliceState {
                match_id: mid,
                player_id: pid,
                team_id: team,
                tempo_partida: slice_label_with(k, width),
                minutes_played: retained * width / 60,
                playerank_fatia_raw: raw_slice_score(tech, net, cfg.alpha_net),
                playerank_acumulativo_media_raw: 0.0,
                score_tecnico_fatia: tech,
                score_rede_fatia: net,
                playerank_fatia_percentil: 0.0,
                playerank_acumulativo_media_percentil: 0.0,
                momentum_rate: 0.0,
                cartao_amarelo: u8::from(cards > 0),
                player_age: age,
                player_position: rec.role,
                goals_scored: goals,
                assists,
                position: rec.role,
            });
        }
        let raw: Vec<f64> = rows[start..].iter().map(|r| r.playerank_fatia_raw).collect();
        for (r, m) in rows[start..].iter_mut().zip(cumulative_mean(&raw)) {
            r.playerank_acumulativo_media_raw = m;
        }
        blocks.push((start, rows.len()));
    }

    // role-aware percentiles
    let mut groups: BTreeMap<(Role, u32), Vec<usize>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        let slice_key = match cfg.percentile_scope {
            PercentileScope::MatchRole => 0,
            PercentileScope::MatchRoleSlice => r.tempo_partida,
        };
        groups.entry((r.player_position, slice_key)).or_default().push(i);
    }
    for idx in groups.values() {
        let raw: Vec<f64> = idx.iter().map(|&i| rows[i].playerank_fatia_raw).collect();
        let cum: Vec<f64> = idx.iter().map(|&i| rows[i].playerank_acumulativo_media_raw).collect();
        for ((&i, p), q) in idx.iter().zip(role_percentile(&raw)).zip(role_percentile(&cum)) {
            rows[i].playerank_fatia_percentil = p;
            rows[i].playerank_acumulativo_media_percentil = q;
        }
    }

    for &(a, b) in &blocks {
        let p: Vec<f64> = rows[a..b].iter().map(|r| r.playerank_acumulativo_media_percentil).collect();
        for (r, m) in rows[a..b].iter_mut().zip(momentum(&p)) {
            r.momentum_rate = m;
        }
    }

    out.states = rows;
    Ok(out)
}

/// Runs [`compute_match`] for each record and concatenates the results.
pub fn compute_matches(
    records: &[MatchRecord],
    events: &[RawEvent],
    players: &PlayerTable,
    cfg: &PipelineConfig,
) -> Result<MatchStates> {
    let mut by_match: BTreeMap<MatchId, Vec<RawEvent>> = BTreeMap::new();
    for e in events {
        by_match.entry(e.match_id).or_default().push(e.clone());
    }
    let mut all = MatchStates::default();
    for rec in records {
        let evs = by_match.get(&rec.match_id).map(Vec::as_slice).unwrap_or(&[]);
        let m = compute_match(rec, evs, players, cfg)?;
        all.states.extend(m.states);
        all.warnings.extend(m.warnings);
        all.shootout_events += m.shootout_events;
    }
    Ok(all)
}
