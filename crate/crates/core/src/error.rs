use alloc::string::String;

use crate::events::MatchPeriod;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("period {0} has no slice semantics")]
    UnslicedPeriod(MatchPeriod),
    #[error("match {match_id}: substitution references unknown player {player_id}")]
    UnknownSubstitutionPlayer { match_id: u64, player_id: u64 },
    #[error("match {match_id}: player {player_id} substituted out twice")]
    DuplicateSubstitution { match_id: u64, player_id: u64 },
    #[error("match {match_id}: substitution minute {minute} outside [0, 130]")]
    SubstitutionMinute { match_id: u64, minute: u32 },
    #[error("{0}")]
    Config(String),
    #[error("eigenvector centrality did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("unbound input variable `{0}`")]
    UnboundVariable(String),
    #[error("{field} = {value} outside [{lo}, {hi}]")]
    Domain { field: String, value: f64, lo: f64, hi: f64 },
    #[error("player {player_id}: invalid state: {reason}")]
    InvalidState { player_id: u64, reason: String },
    #[error(transparent)]
    Parse(#[from] crate::fuzzy::dsl::ParseError),
}
