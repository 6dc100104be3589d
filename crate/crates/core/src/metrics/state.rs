use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{MatchId, PlayerId, Role, TeamId};

/// One player's state at the end of one 5-minute slice. Field order and
/// serialized names match the published dataset columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerSliceState {
    #[serde(rename = "matchId")]
    pub match_id: MatchId,
    #[serde(rename = "playerId")]
    pub player_id: PlayerId,
    #[serde(rename = "teamId")]
    pub team_id: TeamId,
    /// Minute at which the slice ends.
    #[serde(rename = "Tempo_Partida")]
    pub tempo_partida: u32,
    pub minutes_played: u32,
    pub playerank_fatia_raw: f64,
    pub playerank_acumulativo_media_raw: f64,
    pub score_tecnico_fatia: f64,
    pub score_rede_fatia: f64,
    pub playerank_fatia_percentil: f64,
    /// Cumulative performance percentile (`P_cum`).
    pub playerank_acumulativo_media_percentil: f64,
    pub momentum_rate: f64,
    pub cartao_amarelo: u8,
    pub player_age: u32,
    pub player_position: Role,
    pub goals_scored: u32,
    pub assists: u32,
    /// Source position code, kept for compatibility.
    #[serde(with = "role_code")]
    pub position: Role,
}

impl PlayerSliceState {
    pub fn p_cum(&self) -> f64 {
        self.playerank_acumulativo_media_percentil
    }

    /// Checks the value ranges the inference layer relies on.
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidState { player_id: self.player_id.0, reason });
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.playerank_fatia_percentil) || !unit(self.playerank_acumulativo_media_percentil) {
            return fail("percentile outside [0, 1]".into());
        }
        if !unit(self.score_rede_fatia) {
            return fail("network score outside [0, 1]".into());
        }
        if !(-1.0..=1.0).contains(&self.momentum_rate) {
            return fail(alloc::format!("momentum {} outside [-1, 1]", self.momentum_rate));
        }
        if self.cartao_amarelo > 1 {
            return fail(alloc::format!("cartao_amarelo {} is not 0/1", self.cartao_amarelo));
        }
        if !(15..=45).contains(&self.player_age) {
            return fail(alloc::format!("age {} outside [15, 45]", self.player_age));
        }
        if ![self.playerank_fatia_raw, self.playerank_acumulativo_media_raw, self.score_tecnico_fatia]
            .iter()
            .all(|v| v.is_finite())
        {
            return fail("non-finite score".into());
        }
        Ok(())
    }
}

pub(crate) mod role_code {
    use crate::events::Role;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn code(r: Role) -> &'static str {
        match r {
            Role::Goalkeeper => "GK",
            Role::Defender => "DF",
            Role::Midfielder => "MD",
            Role::Forward => "FW",
        }
    }

    pub fn serialize<S: Serializer>(r: &Role, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(code(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Role, D::Error> {
        let s = <alloc::borrow::Cow<'de, str>>::deserialize(d)?;
        Role::parse(&s).ok_or_else(|| D::Error::custom(alloc::format!("unknown position `{s}`")))
    }
}
