//! Delimited-table readers for events, matches, players and the tag
//! dictionary.
//!
//! Column names are matched loosely: case and underscores are ignored, so
//! `eventSec`, `event_sec` and `EVENTSEC` are the same column. Unknown
//! columns are ignored.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use subaudit_core::events::{
    Date, MatchId, MatchPeriod, MatchRecord, PlayerId, PlayerRecord, PlayerTable, RawEvent, Role, Substitution, TeamId,
};

use crate::error::IngestError;

/// Tag code to label, e.g. `1801 -> accurate`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TagDictionary {
    by_code: BTreeMap<u32, String>,
    by_label: BTreeMap<String, u32>,
}

impl TagDictionary {
    pub fn insert(&mut self, code: u32, label: impl Into<String>) {
        let label = label.into();
        self.by_label.insert(label.to_ascii_lowercase(), code);
        self.by_code.insert(code, label);
    }

    pub fn label(&self, code: u32) -> Option<&str> {
        self.by_code.get(&code).map(String::as_str)
    }

    pub fn code(&self, label: &str) -> Option<u32> {
        self.by_label.get(&label.to_ascii_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.by_code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_code.is_empty()
    }
}

fn norm(h: &str) -> String {
    h.chars().filter(|c| *c != '_' && !c.is_whitespace()).flat_map(char::to_lowercase).collect()
}

/// Header positions by normalised name.
struct Columns {
    file: String,
    index: BTreeMap<String, usize>,
}

impl Columns {
    fn new(file: &str, headers: &csv::StringRecord) -> Self {
        let index = headers.iter().enumerate().map(|(i, h)| (norm(h.trim_start_matches('\u{feff}')), i)).collect();
        Columns { file: file.into(), index }
    }

    /// Position of the first alias present.
    fn find(&self, aliases: &[&str]) -> Option<usize> {
        aliases.iter().find_map(|a| self.index.get(&norm(a)).copied())
    }

    fn require(&self, aliases: &[&str]) -> Result<usize, IngestError> {
        self.find(aliases)
            .ok_or_else(|| IngestError::MissingColumn { file: self.file.clone(), column: aliases[0].to_string() })
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(input)
}

/// 1-based data row of a record (the header is row 0).
fn row_of(rec: &csv::StringRecord, fallback: usize) -> usize {
    rec.position().map(|p| p.record() as usize).unwrap_or(fallback)
}

fn field(rec: &csv::StringRecord, i: usize) -> &str {
    rec.get(i).unwrap_or("")
}

fn bad(file: &str, row: usize, column: &str, value: &str, reason: &str) -> IngestError {
    IngestError::Row { file: file.into(), row, message: format!("column `{column}`: {reason} `{value}`") }
}

fn id(file: &str, row: usize, column: &str, s: &str) -> Result<u64, IngestError> {
    s.parse().map_err(|_| bad(file, row, column, s, "expected a non-negative integer, got"))
}

/// Tag codes from a cell. Digit runs are codes, so `1801;1802`,
/// `[1801, 1802]` and `[{'id': 1801}]` all work; other words are looked up
/// as labels and skipped when unknown.
pub fn parse_tags(cell: &str, dict: &TagDictionary) -> Vec<u32> {
    let mut out = Vec::new();
    for tok in cell.split(|c: char| !c.is_ascii_alphanumeric() && c != '_').filter(|t| !t.is_empty()) {
        if tok.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(code) = tok.parse() {
                out.push(code);
            }
        } else if let Some(code) = dict.code(tok) {
            out.push(code);
        }
    }
    out
}

/// Reads an event table. Rows keep their file order.
pub fn parse_event_log<R: Read>(input: R, dict: &TagDictionary) -> Result<Vec<RawEvent>, IngestError> {
    parse_event_log_named(input, dict, "events")
}

pub fn parse_event_log_named<R: Read>(
    input: R,
    dict: &TagDictionary,
    file: &str,
) -> Result<Vec<RawEvent>, IngestError> {
    let mut rdr = reader(input);
    let cols = Columns::new(file, rdr.headers().map_err(|e| IngestError::csv(file, e))?);
    let c_match = cols.require(&["matchId", "match_id"])?;
    let c_team = cols.require(&["teamId", "team_id"])?;
    let c_player = cols.require(&["playerId", "player_id"])?;
    let c_event = cols.require(&["eventName", "event_name"])?;
    let c_sub = cols.require(&["subEventName", "sub_event_name"])?;
    let c_tags = cols.require(&["tags"])?;
    let c_sec = cols.require(&["eventSec", "event_sec"])?;
    let c_period = cols.require(&["matchPeriod", "match_period"])?;

    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| IngestError::csv(file, e))?;
        let row = row_of(&rec, i + 1);
        let sec_s = field(&rec, c_sec);
        let event_sec: f64 = sec_s
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| bad(file, row, "eventSec", sec_s, "expected non-negative seconds, got"))?;
        let period_s = field(&rec, c_period);
        let match_period: MatchPeriod =
            period_s.parse().map_err(|_| bad(file, row, "matchPeriod", period_s, "unknown period"))?;
        out.push(RawEvent {
            match_id: MatchId(id(file, row, "matchId", field(&rec, c_match))?),
            team_id: TeamId(id(file, row, "teamId", field(&rec, c_team))?),
            player_id: PlayerId(id(file, row, "playerId", field(&rec, c_player))?),
            event_name: field(&rec, c_event).to_string(),
            sub_event_name: field(&rec, c_sub).to_string(),
            tags: parse_tags(field(&rec, c_tags), dict),
            event_sec,
            match_period,
        });
    }
    Ok(out)
}

/// Reads `Tag,Label[,Description]`.
pub fn parse_tag_dictionary<R: Read>(input: R) -> Result<TagDictionary, IngestError> {
    let file = "tags2name";
    let mut rdr = reader(input);
    let cols = Columns::new(file, rdr.headers().map_err(|e| IngestError::csv(file, e))?);
    let c_tag = cols.require(&["Tag", "code", "id"])?;
    let c_label = cols.require(&["Label", "name"])?;
    let mut dict = TagDictionary::default();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| IngestError::csv(file, e))?;
        let row = row_of(&rec, i + 1);
        let code = id(file, row, "Tag", field(&rec, c_tag))?;
        let code = u32::try_from(code).map_err(|_| bad(file, row, "Tag", field(&rec, c_tag), "tag code too large:"))?;
        dict.insert(code, field(&rec, c_label));
    }
    Ok(dict)
}

fn id_list(file: &str, row: usize, column: &str, s: &str) -> Result<Vec<PlayerId>, IngestError> {
    s.split(|c: char| c == ';' || c == '|' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| id(file, row, column, t).map(PlayerId))
        .collect()
}

/// Parses `minute:out>in` items separated by `;`.
fn substitutions(file: &str, row: usize, s: &str) -> Result<Vec<Substitution>, IngestError> {
    let mut out = Vec::new();
    for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let err = || bad(file, row, "substitutions", item, "expected `minute:out>in`, got");
        let (minute, pair) = item.split_once(':').ok_or_else(err)?;
        let (p_out, p_in) = pair.split_once('>').ok_or_else(err)?;
        out.push(Substitution {
            minute: minute.trim().parse().map_err(|_| err())?,
            player_out: PlayerId(p_out.trim().parse().map_err(|_| err())?),
            player_in: PlayerId(p_in.trim().parse().map_err(|_| err())?),
        });
    }
    Ok(out)
}

/// Reads a flat match table: `wyId, dateutc, team1, team2, lineup1,
/// lineup2, substitutions`. Lineups are `;`-separated player ids.
pub fn parse_matches<R: Read>(input: R) -> Result<Vec<MatchRecord>, IngestError> {
    let file = "matches";
    let mut rdr = reader(input);
    let cols = Columns::new(file, rdr.headers().map_err(|e| IngestError::csv(file, e))?);
    let c_id = cols.require(&["wyId", "matchId", "match_id"])?;
    let c_date = cols.require(&["dateutc", "date"])?;
    let c_t1 = cols.require(&["team1", "home_team_id"])?;
    let c_t2 = cols.require(&["team2", "away_team_id"])?;
    let c_l1 = cols.require(&["lineup1", "home_lineup"])?;
    let c_l2 = cols.require(&["lineup2", "away_lineup"])?;
    let c_subs = cols.find(&["substitutions"]);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| IngestError::csv(file, e))?;
        let row = row_of(&rec, i + 1);
        let date_s = field(&rec, c_date);
        out.push(MatchRecord {
            match_id: MatchId(id(file, row, "wyId", field(&rec, c_id))?),
            date: Date::parse_prefix(date_s).ok_or_else(|| bad(file, row, "dateutc", date_s, "invalid date"))?,
            teams: [
                TeamId(id(file, row, "team1", field(&rec, c_t1))?),
                TeamId(id(file, row, "team2", field(&rec, c_t2))?),
            ],
            lineups: [
                id_list(file, row, "lineup1", field(&rec, c_l1))?,
                id_list(file, row, "lineup2", field(&rec, c_l2))?,
            ],
            substitutions: match c_subs {
                Some(c) => substitutions(file, row, field(&rec, c))?,
                None => Vec::new(),
            },
        });
    }
    Ok(out)
}

/// Finds a role in free text such as `{'name': 'Defender', 'code2': 'DF'}`.
fn role_in(s: &str) -> Option<Role> {
    if let Some(r) = Role::parse(s) {
        return Some(r);
    }
    s.split(|c: char| !c.is_ascii_alphanumeric()).find_map(Role::parse)
}

/// Reads `wyId, birthDate, role`. An empty birth date is allowed.
pub fn parse_players<R: Read>(input: R) -> Result<PlayerTable, IngestError> {
    let file = "players";
    let mut rdr = reader(input);
    let cols = Columns::new(file, rdr.headers().map_err(|e| IngestError::csv(file, e))?);
    let c_id = cols.require(&["wyId", "playerId", "player_id"])?;
    let c_birth = cols.require(&["birthDate", "birth_date"])?;
    let c_role = cols.require(&["role", "position"])?;
    let mut out = PlayerTable::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| IngestError::csv(file, e))?;
        let row = row_of(&rec, i + 1);
        let player_id = PlayerId(id(file, row, "wyId", field(&rec, c_id))?);
        let birth_s = field(&rec, c_birth);
        let birth_date = if birth_s.is_empty() {
            None
        } else {
            Some(Date::parse_prefix(birth_s).ok_or_else(|| bad(file, row, "birthDate", birth_s, "invalid date"))?)
        };
        let role_s = field(&rec, c_role);
        let role = role_in(role_s).ok_or_else(|| bad(file, row, "role", role_s, "unknown role"))?;
        out.insert(player_id, PlayerRecord { player_id, birth_date, role });
    }
    Ok(out)
}

/// Everything read from one input directory.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub events: Vec<RawEvent>,
    pub matches: Vec<MatchRecord>,
    pub players: PlayerTable,
    pub tags: TagDictionary,
}

impl Dataset {
    /// Keeps only the listed matches (all when `ids` is empty).
    pub fn retain_matches(&mut self, ids: &[MatchId]) {
        if ids.is_empty() {
            return;
        }
        self.matches.retain(|m| ids.contains(&m.match_id));
        self.events.retain(|e| ids.contains(&e.match_id));
    }
}

fn open(path: &Path) -> Result<File, IngestError> {
    File::open(path).map_err(|e| IngestError::Io { path: path.to_path_buf(), source: e })
}

fn csv_files(dir: &Path, prefix: &str) -> Result<Vec<PathBuf>, IngestError> {
    let entries = std::fs::read_dir(dir).map_err(|e| IngestError::Io { path: dir.to_path_buf(), source: e })?;
    let mut out: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "csv")
                && p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with(prefix))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Loads `events*.csv`, `matches*.csv`, `players.csv` and, if present,
/// `tags2name.csv` from `dir`.
pub fn load_dir(dir: &Path) -> Result<Dataset, IngestError> {
    if !dir.is_dir() {
        return Err(IngestError::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "input directory not found"),
        });
    }
    let tags_path = dir.join("tags2name.csv");
    let tags = if tags_path.exists() { parse_tag_dictionary(open(&tags_path)?)? } else { TagDictionary::default() };
    let mut data = Dataset { tags, ..Default::default() };
    let event_files = csv_files(dir, "events")?;
    let match_files = csv_files(dir, "matches")?;
    if event_files.is_empty() || match_files.is_empty() {
        return Err(IngestError::MissingFile {
            dir: dir.to_path_buf(),
            pattern: "events*.csv and matches*.csv".into(),
        });
    }
    for p in &event_files {
        let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("events");
        data.events.extend(parse_event_log_named(open(p)?, &data.tags, name)?);
    }
    for p in &match_files {
        data.matches.extend(parse_matches(open(p)?)?);
    }
    data.players = parse_players(open(&dir.join("players.csv"))?)?;
    log::info!(
        "loaded {} events, {} matches, {} players from {}",
        data.events.len(),
        data.matches.len(),
        data.players.len(),
        dir.display()
    );
    Ok(data)
}
