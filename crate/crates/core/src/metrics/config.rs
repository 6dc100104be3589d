use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::RawEvent;

/// Wyscout tag codes the pipeline reads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagCodes {
    pub goal: u32,
    pub assist: u32,
    pub yellow_card: u32,
    pub accurate: u32,
}

impl Default for TagCodes {
    fn default() -> Self {
        TagCodes { goal: 101, assist: 302, yellow_card: 1702, accurate: 1801 }
    }
}

/// One row of the technical weight table. `event` may be `*`; `sub_event`
/// and `tag` are optional filters. The first matching row wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightRule {
    pub event: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_event: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<u32>,
    pub weight: f64,
}

impl WeightRule {
    fn new(event: &str, sub_event: Option<&str>, tag: Option<u32>, weight: f64) -> Self {
        WeightRule { event: event.into(), sub_event: sub_event.map(Into::into), tag, weight }
    }

    pub fn matches(&self, ev: &RawEvent) -> bool {
        (self.event == "*" || self.event == ev.event_name)
            && self.sub_event.as_ref().is_none_or(|s| *s == ev.sub_event_name)
            && self.tag.is_none_or(|t| ev.has_tag(t))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TechnicalWeights(pub Vec<WeightRule>);

impl TechnicalWeights {
    pub fn weight(&self, ev: &RawEvent) -> f64 {
        self.0.iter().find(|r| r.matches(ev)).map_or(0.0, |r| r.weight)
    }
}

impl Default for TechnicalWeights {
    /// Stand-in table until the original PlayeRank vector is supplied:
    /// rewards completed passes, shots on target, won duels, interceptions and
    /// clearances; penalises misplaced passes, lost duels and fouls.
    fn default() -> Self {
        TechnicalWeights(alloc::vec![
            WeightRule::new("Shot", None, Some(101), 3.0),
            WeightRule::new("Shot", None, Some(1801), 2.0),
            WeightRule::new("*", None, Some(1401), 1.0),
            WeightRule::new("Pass", None, Some(1801), 1.0),
            WeightRule::new("Pass", None, Some(1802), -1.0),
            WeightRule::new("Duel", None, Some(703), 1.0),
            WeightRule::new("Duel", None, Some(701), -1.0),
            WeightRule::new("Others on the ball", Some("Clearance"), None, 0.5),
            WeightRule::new("Foul", None, None, -1.0),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeamNormalization {
    /// Divide by the team's total absolute weighted volume in the slice.
    TeamVolume,
    /// Raw weighted sum.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    AverageRank,
}

/// Which rows share a percentile group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PercentileScope {
    /// Every slice of every player with the same role in the match.
    MatchRole,
    /// Only players with the same role in the same slice.
    MatchRoleSlice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralityConfig {
    pub teleport: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for CentralityConfig {
    fn default() -> Self {
        CentralityConfig { teleport: 0.01, max_iterations: 1000, tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub alpha_net: f64,
    pub technical_weights: TechnicalWeights,
    pub normalization: TeamNormalization,
    pub percentile_tie_rule: TieRule,
    pub percentile_scope: PercentileScope,
    pub slice_seconds: u32,
    pub centrality: CentralityConfig,
    pub tags: TagCodes,
    /// Age used when a birth date is missing.
    pub default_age: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            alpha_net: 0.2,
            technical_weights: TechnicalWeights::default(),
            normalization: TeamNormalization::TeamVolume,
            percentile_tie_rule: TieRule::AverageRank,
            percentile_scope: PercentileScope::MatchRole,
            slice_seconds: 300,
            centrality: CentralityConfig::default(),
            tags: TagCodes::default(),
            default_age: 26,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(0.0..=1.0).contains(&self.alpha_net) {
            return bad(alloc::format!("alpha_net {} outside [0, 1]", self.alpha_net));
        }
        if let Some(r) = self.technical_weights.0.iter().find(|r| !r.weight.is_finite()) {
            return bad(alloc::format!("non-finite technical weight for `{}`", r.event));
        }
        if self.slice_seconds == 0 || !self.slice_seconds.is_multiple_of(60) {
            return bad(alloc::format!("slice_seconds {} is not a positive multiple of 60", self.slice_seconds));
        }
        let c = &self.centrality;
        if c.teleport <= 0.0
            || !c.teleport.is_finite()
            || c.max_iterations == 0
            || c.tolerance.is_nan()
            || c.tolerance <= 0.0
        {
            return bad("centrality settings must be positive".into());
        }
        if !(15..=45).contains(&self.default_age) {
            return bad(alloc::format!("default_age {} outside [15, 45]", self.default_age));
        }
        Ok(())
    }
}
