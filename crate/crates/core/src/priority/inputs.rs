use serde::{Deserialize, Serialize};

use crate::events::Role;
use crate::fuzzy::CrispInputs;
use crate::metrics::PlayerSliceState;

/// Crisp values handed to the rule system for one player-slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyInputs {
    pub p_cum: f64,
    pub momentum: f64,
    pub min_played: f64,
    pub age: f64,
    pub card_y: f64,
    pub goals: f64,
    pub assists: f64,
    pub is_defender: f64,
    pub is_midfielder: f64,
    pub is_forward: f64,
}

impl FuzzyInputs {
    /// Minutes, goals and assists are clipped to their universes; extra time
    /// saturates fatigue at 100.
    pub fn from_state(s: &PlayerSliceState) -> Self {
        let flag = |r: Role| if s.player_position == r { 1.0 } else { 0.0 };
        FuzzyInputs {
            p_cum: s.playerank_acumulativo_media_percentil,
            momentum: s.momentum_rate,
            min_played: f64::from(s.minutes_played).min(100.0),
            age: f64::from(s.player_age),
            card_y: f64::from(s.cartao_amarelo),
            goals: f64::from(s.goals_scored).min(10.0),
            assists: f64::from(s.assists).min(10.0),
            is_defender: flag(Role::Defender),
            is_midfielder: flag(Role::Midfielder),
            is_forward: flag(Role::Forward),
        }
    }

    pub fn to_crisp(&self) -> CrispInputs {
        let mut m = CrispInputs::new();
        for (k, v) in [
            ("P_cum", self.p_cum),
            ("Momentum", self.momentum),
            ("Min_played", self.min_played),
            ("Age", self.age),
            ("Card_Y", self.card_y),
            ("Goals", self.goals),
            ("Assists", self.assists),
            ("is_Defender", self.is_defender),
            ("is_Midfielder", self.is_midfielder),
            ("is_Forward", self.is_forward),
        ] {
            m.insert(k.into(), v);
        }
        m
    }
}
