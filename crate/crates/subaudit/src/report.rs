//! Descriptive summary of a computed dataset.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{Computed, Dataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Moments {
    fn of(v: &[f64]) -> Option<Moments> {
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Some(Moments {
            mean,
            std: var.sqrt(),
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub matches: usize,
    pub events: usize,
    pub players: usize,
    pub slice_rows: usize,
    pub rows_by_role: BTreeMap<String, usize>,
    pub p_cum: Option<Moments>,
    pub momentum: Option<Moments>,
    pub median_age: Option<f64>,
    pub audited_results: usize,
    pub critical_results: usize,
    pub substitutions: usize,
    pub unresolved_critical: usize,
}

pub fn summarize(data: &Dataset, computed: &Computed) -> Summary {
    let rows = &computed.states.states;
    let mut rows_by_role = BTreeMap::new();
    for r in rows {
        *rows_by_role.entry(r.player_position.to_string()).or_insert(0) += 1;
    }
    let p: Vec<f64> = rows.iter().map(|r| r.playerank_acumulativo_media_percentil).collect();
    let m: Vec<f64> = rows.iter().map(|r| r.momentum_rate).collect();
    // one age per player and match
    let mut seen = BTreeSet::new();
    let mut ages: Vec<f64> =
        rows.iter().filter(|r| seen.insert((r.match_id, r.player_id))).map(|r| f64::from(r.player_age)).collect();
    ages.sort_by(f64::total_cmp);
    let median_age = match ages.len() {
        0 => None,
        n if n % 2 == 1 => Some(ages[n / 2]),
        n => Some(0.5 * (ages[n / 2 - 1] + ages[n / 2])),
    };
    let threshold = computed.auditor.config().critical_threshold;
    Summary {
        matches: data.matches.len(),
        events: data.events.len(),
        players: seen.iter().map(|(_, p)| *p).collect::<BTreeSet<_>>().len(),
        slice_rows: rows.len(),
        rows_by_role,
        p_cum: Moments::of(&p),
        momentum: Moments::of(&m),
        median_age,
        audited_results: computed.audits.iter().map(|a| a.results().count()).sum(),
        critical_results: computed.audits.iter().flat_map(|a| a.results()).filter(|r| r.p_final > threshold).count(),
        substitutions: computed.audits.iter().map(|a| a.substitutions.len()).sum(),
        unresolved_critical: computed.audits.iter().flat_map(|a| &a.latency).filter(|e| e.unresolved()).count(),
    }
}
