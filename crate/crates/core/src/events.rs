//! Match time model: periods, absolute time, 5-minute slices and the
//! intervals during which each player was on the pitch.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width of one analysis slice.
pub const SLICE_SECONDS: u32 = 300;

/// Nominal period kickoffs in absolute seconds. Stoppage time is not
/// modelled, so late first-half events share label 45 with the first
/// seconds of the second half.
pub const SECOND_HALF_OFFSET: f64 = 2700.0;
pub const EXTRA_FIRST_OFFSET: f64 = 5400.0;
pub const EXTRA_SECOND_OFFSET: f64 = 6300.0;

/// Nominal end of regulation time.
pub const REGULATION_END: f64 = 5400.0;
/// Nominal end of extra time.
pub const EXTRA_TIME_END: f64 = 7200.0;

macro_rules! id_newtype {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(&self.0, f)
            }
        }

        impl From<u64> for $name {
            fn from(v: u64) -> Self {
                Self(v)
            }
        }
    };
}

id_newtype!(MatchId);
id_newtype!(TeamId);
id_newtype!(PlayerId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MatchPeriod {
    #[serde(rename = "1H")]
    FirstHalf,
    #[serde(rename = "2H")]
    SecondHalf,
    #[serde(rename = "E1")]
    ExtraFirst,
    #[serde(rename = "E2")]
    ExtraSecond,
    #[serde(rename = "P")]
    Penalties,
}

impl MatchPeriod {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchPeriod::FirstHalf => "1H",
            MatchPeriod::SecondHalf => "2H",
            MatchPeriod::ExtraFirst => "E1",
            MatchPeriod::ExtraSecond => "E2",
            MatchPeriod::Penalties => "P",
        }
    }

    /// Absolute offset of the period kickoff, `None` for the shootout.
    pub fn offset(self) -> Option<f64> {
        match self {
            MatchPeriod::FirstHalf => Some(0.0),
            MatchPeriod::SecondHalf => Some(SECOND_HALF_OFFSET),
            MatchPeriod::ExtraFirst => Some(EXTRA_FIRST_OFFSET),
            MatchPeriod::ExtraSecond => Some(EXTRA_SECOND_OFFSET),
            MatchPeriod::Penalties => None,
        }
    }
}

impl fmt::Display for MatchPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownPeriod(pub String);

impl FromStr for MatchPeriod {
    type Err = UnknownPeriod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1H" => Ok(MatchPeriod::FirstHalf),
            "2H" => Ok(MatchPeriod::SecondHalf),
            "E1" => Ok(MatchPeriod::ExtraFirst),
            "E2" => Ok(MatchPeriod::ExtraSecond),
            "P" => Ok(MatchPeriod::Penalties),
            other => Err(UnknownPeriod(other.into())),
        }
    }
}

/// Tactical role from the player metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Goalkeeper,
    Defender,
    Midfielder,
    Forward,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::Goalkeeper, Role::Defender, Role::Midfielder, Role::Forward];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Goalkeeper => "Goalkeeper",
            Role::Defender => "Defender",
            Role::Midfielder => "Midfielder",
            Role::Forward => "Forward",
        }
    }

    /// Accepts full names and the usual two/three letter codes
    /// (`GK`/`GKP`, `DF`/`DEF`, `MD`/`MID`, `FW`/`FWD`).
    pub fn parse(s: &str) -> Option<Role> {
        let t = s.trim();
        let eq = |k: &str| t.eq_ignore_ascii_case(k);
        if eq("goalkeeper") || eq("gk") || eq("gkp") {
            Some(Role::Goalkeeper)
        } else if eq("defender") || eq("df") || eq("def") {
            Some(Role::Defender)
        } else if eq("midfielder") || eq("md") || eq("mid") {
            Some(Role::Midfielder)
        } else if eq("forward") || eq("fw") || eq("fwd") {
            Some(Role::Forward)
        } else {
            None
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Calendar date without time zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Date {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl Date {
    pub fn new(year: i32, month: u8, day: u8) -> Option<Date> {
        if !(1..=12).contains(&month) || day == 0 || day > days_in_month(year, month) {
            return None;
        }
        Some(Date { year, month, day })
    }

    /// Parses the leading `YYYY-MM-DD` of a date or datetime string.
    pub fn parse_prefix(s: &str) -> Option<Date> {
        let s = s.trim();
        let head = s.get(..10)?;
        let mut it = head.split('-');
        let year = it.next()?.parse().ok()?;
        let month = it.next()?.parse().ok()?;
        let day = it.next()?.parse().ok()?;
        Date::new(year, month, day)
    }

    /// Completed years from `self` to `later`; negative if `later` precedes.
    pub fn whole_years_until(&self, later: &Date) -> i32 {
        let mut years = later.year - self.year;
        if (later.month, later.day) < (self.month, self.day) {
            years -= 1;
        }
        years
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        _ if (year % 4 == 0 && year % 100 != 0) || year % 400 == 0 => 29,
        _ => 28,
    }
}

/// One on-pitch action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawEvent {
    pub match_id: MatchId,
    pub team_id: TeamId,
    pub player_id: PlayerId,
    pub event_name: String,
    pub sub_event_name: String,
    pub tags: Vec<u32>,
    pub event_sec: f64,
    pub match_period: MatchPeriod,
}

impl RawEvent {
    pub fn has_tag(&self, tag: u32) -> bool {
        self.tags.contains(&tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Substitution {
    pub minute: u32,
    pub player_out: PlayerId,
    pub player_in: PlayerId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub match_id: MatchId,
    pub date: Date,
    pub teams: [TeamId; 2],
    /// Starting eleven per team, aligned with `teams`.
    pub lineups: [Vec<PlayerId>; 2],
    pub substitutions: Vec<Substitution>,
}

impl MatchRecord {
    pub fn substitution_out(&self, player: PlayerId) -> Option<&Substitution> {
        self.substitutions.iter().find(|s| s.player_out == player)
    }

    pub fn substitution_in(&self, player: PlayerId) -> Option<&Substitution> {
        self.substitutions.iter().find(|s| s.player_in == player)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRecord {
    pub player_id: PlayerId,
    pub birth_date: Option<Date>,
    pub role: Role,
}

pub type PlayerTable = BTreeMap<PlayerId, PlayerRecord>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnFieldInterval {
    pub player_id: PlayerId,
    pub match_id: MatchId,
    pub start_sec: f64,
    pub end_sec: f64,
}

impl OnFieldInterval {
    /// True when the half-open slice `[start, start + width)` overlaps the interval.
    pub fn overlaps_slice(&self, index: u32, width: u32) -> bool {
        let lo = f64::from(index) * f64::from(width);
        let hi = lo + f64::from(width);
        self.start_sec < hi && self.end_sec > lo
    }
}

/// Seconds since kickoff on the nominal match clock.
pub fn absolute_seconds(event: &RawEvent) -> Result<f64> {
    event.match_period.offset().map(|off| off + event.event_sec).ok_or(Error::UnslicedPeriod(event.match_period))
}

pub fn slice_index(abs_sec: f64) -> u32 {
    slice_index_with(abs_sec, SLICE_SECONDS)
}

pub fn slice_index_with(abs_sec: f64, width: u32) -> u32 {
    libm::floor(abs_sec / f64::from(width)) as u32
}

/// Reporting label of a slice: the minute at which it ends.
pub fn slice_label(index: u32) -> u32 {
    slice_label_with(index, SLICE_SECONDS)
}

pub fn slice_label_with(index: u32, width: u32) -> u32 {
    (index + 1) * width / 60
}

/// End of the match on the nominal clock: regulation (or extra-time) end,
/// stretched to the last recorded event.
pub fn match_end_seconds(events: &[RawEvent]) -> f64 {
    let mut end = REGULATION_END;
    for ev in events {
        if let Ok(t) = absolute_seconds(ev) {
            if matches!(ev.match_period, MatchPeriod::ExtraFirst | MatchPeriod::ExtraSecond) {
                end = end.max(EXTRA_TIME_END);
            }
            end = end.max(t);
        }
    }
    end
}

/// On-field intervals for everyone who took part in the match.
///
/// Substitutions are applied in minute order. Goalkeepers always receive the
/// whole match.
pub fn on_field_intervals(
    record: &MatchRecord,
    events: &[RawEvent],
    players: &PlayerTable,
) -> Result<Vec<OnFieldInterval>> {
    let end = match_end_seconds(events);
    let mid = record.match_id.0;

    let mut subs = record.substitutions.clone();
    subs.sort_by_key(|s| s.minute);

    // player -> (entry second, exit second)
    let mut spans: BTreeMap<PlayerId, (f64, Option<f64>)> = BTreeMap::new();
    for p in record.lineups.iter().flatten() {
        spans.insert(*p, (0.0, None));
    }
    let mut gone: BTreeSet<PlayerId> = BTreeSet::new();

    for s in &subs {
        if s.minute > 130 {
            return Err(Error::SubstitutionMinute { match_id: mid, minute: s.minute });
        }
        let at = f64::from(s.minute) * 60.0;
        if gone.contains(&s.player_out) {
            return Err(Error::DuplicateSubstitution { match_id: mid, player_id: s.player_out.0 });
        }
        match spans.get_mut(&s.player_out) {
            Some(span) => span.1 = Some(at),
            None => return Err(Error::UnknownSubstitutionPlayer { match_id: mid, player_id: s.player_out.0 }),
        }
        gone.insert(s.player_out);
        if spans.contains_key(&s.player_in) {
            return Err(Error::UnknownSubstitutionPlayer { match_id: mid, player_id: s.player_in.0 });
        }
        spans.insert(s.player_in, (at, None));
    }

    let mut out = Vec::with_capacity(spans.len());
    for (pid, (start, exit)) in spans {
        let goalkeeper = players.get(&pid).is_some_and(|p| p.role == Role::Goalkeeper);
        let (start, stop) = if goalkeeper { (0.0, end) } else { (start, exit.unwrap_or(end)) };
        if start < stop {
            out.push(OnFieldInterval { player_id: pid, match_id: record.match_id, start_sec: start, end_sec: stop });
        }
    }
    Ok(out)
}
