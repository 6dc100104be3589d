use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::audit::{rank, Auditor, PriorityResult};
use super::inputs::FuzzyInputs;
use crate::error::{Error, Result};
use crate::events::{PlayerId, Role};
use crate::metrics::PlayerSliceState;

/// Hypothetical replacements for a player's inputs. Unset fields keep the
/// recorded value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default, alias = "playerank_acumulativo_media_percentil", skip_serializing_if = "Option::is_none")]
    pub p_cum: Option<f64>,
    #[serde(default, alias = "momentum_rate", skip_serializing_if = "Option::is_none")]
    pub momentum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minutes_played: Option<f64>,
    #[serde(default, alias = "cartao_amarelo", skip_serializing_if = "Option::is_none")]
    pub card_y: Option<f64>,
    #[serde(default, alias = "player_age", skip_serializing_if = "Option::is_none")]
    pub age: Option<f64>,
    #[serde(default, alias = "goals_scored", skip_serializing_if = "Option::is_none")]
    pub goals: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assists: Option<f64>,
    #[serde(default, alias = "player_position", skip_serializing_if = "Option::is_none")]
    pub position: Option<Role>,
}

fn check(field: &str, v: f64, lo: f64, hi: f64) -> Result<f64> {
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(Error::Domain { field: field.into(), value: v, lo, hi })
    }
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        *self == Overrides::default()
    }

    /// Applies the overrides, returning the new inputs and the names of the
    /// fields that were replaced.
    pub fn apply(&self, base: FuzzyInputs) -> Result<(FuzzyInputs, Vec<String>)> {
        let mut x = base;
        let mut touched = Vec::new();
        let mut mark = |name: &str| touched.push(String::from(name));
        if let Some(v) = self.p_cum {
            x.p_cum = check("p_cum", v, 0.0, 1.0)?;
            mark("p_cum");
        }
        if let Some(v) = self.momentum {
            x.momentum = check("momentum", v, -1.0, 1.0)?;
            mark("momentum");
        }
        if let Some(v) = self.minutes_played {
            x.min_played = check("minutes_played", v, 0.0, 100.0)?;
            mark("minutes_played");
        }
        if let Some(v) = self.card_y {
            x.card_y = check("card_y", v, 0.0, 1.0)?;
            mark("card_y");
        }
        if let Some(v) = self.age {
            x.age = check("age", v, 15.0, 45.0)?;
            mark("age");
        }
        if let Some(v) = self.goals {
            x.goals = check("goals", v, 0.0, 10.0)?;
            mark("goals");
        }
        if let Some(v) = self.assists {
            x.assists = check("assists", v, 0.0, 10.0)?;
            mark("assists");
        }
        if let Some(r) = self.position {
            let flag = |want: Role| if r == want { 1.0 } else { 0.0 };
            x.is_defender = flag(Role::Defender);
            x.is_midfielder = flag(Role::Midfielder);
            x.is_forward = flag(Role::Forward);
            mark("position");
        }
        Ok((x, touched))
    }
}

impl Auditor {
    /// Re-audits `slice` with `player`'s inputs overridden and returns that
    /// player's result, ranked against the unchanged peers. Nothing is
    /// stored.
    pub fn what_if(
        &self,
        slice: &[PlayerSliceState],
        player: PlayerId,
        overrides: &Overrides,
    ) -> Result<PriorityResult> {
        let target = slice.iter().find(|s| s.player_id == player).ok_or_else(|| Error::InvalidState {
            player_id: player.0,
            reason: "not on the pitch in this slice".into(),
        })?;
        if target.player_position == Role::Goalkeeper {
            return Err(Error::InvalidState { player_id: player.0, reason: "goalkeepers are not audited".into() });
        }
        target.validate()?;
        let (inputs, touched) = overrides.apply(FuzzyInputs::from_state(target))?;
        let mut results = Vec::with_capacity(slice.len());
        for s in slice.iter().filter(|s| s.player_position != Role::Goalkeeper) {
            if s.player_id == player {
                let mut r = self.score(s, inputs)?;
                r.overridden = touched.clone();
                results.push(r);
            } else {
                results.push(self.score_state(s)?);
            }
        }
        rank(&mut results);
        Ok(results.into_iter().find(|r| r.player_id == player).expect("target is in the slice"))
    }
}
