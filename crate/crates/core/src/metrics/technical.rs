use super::config::{TeamNormalization, TechnicalWeights};
use crate::events::RawEvent;

/// Sum of absolute weights over all of a team's events in one slice.
pub fn team_volume<'a>(events: impl IntoIterator<Item = &'a RawEvent>, weights: &TechnicalWeights) -> f64 {
    events.into_iter().fold(0.0, |acc, e| acc + weights.weight(e).abs())
}

/// Weighted action score of one player in one slice, scaled by the team's
/// volume when `normalization` asks for it. Unknown actions weigh 0.
pub fn technical_score<'a>(
    player_events: impl IntoIterator<Item = &'a RawEvent>,
    team_volume: f64,
    weights: &TechnicalWeights,
    normalization: TeamNormalization,
) -> f64 {
    // fold from +0.0: an empty float sum is -0.0
    let sum = player_events.into_iter().fold(0.0, |acc, e| acc + weights.weight(e));
    match normalization {
        TeamNormalization::None => sum,
        TeamNormalization::TeamVolume if team_volume > 0.0 => sum / team_volume,
        TeamNormalization::TeamVolume => 0.0,
    }
}
