//! Regenerates the bundled synthetic match under `fixtures/match_2057978`.
//!
//! ```text
//! cargo run -p subaudit --example make_fixture
//! ```
//!
//! Output is a pure function of the seed, so rerunning leaves the committed
//! files unchanged.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MATCH_ID: u64 = 2057978;
const HOME: u64 = 5001;
const AWAY: u64 = 5002;

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    Gk,
    Df,
    Md,
    Fw,
}

struct Player {
    id: u64,
    team: u64,
    pos: Pos,
    birth: &'static str,
    /// Relative share of the team's touches.
    activity: f64,
}

const fn p(id: u64, team: u64, pos: Pos, birth: &'static str, activity: f64) -> Player {
    Player { id, team, pos, birth, activity }
}

use Pos::*;

#[rustfmt::skip]
const PLAYERS: &[Player] = &[
    p(101, HOME, Gk, "1990-05-12", 0.4), p(102, HOME, Df, "1992-03-01", 1.0),
    p(103, HOME, Df, "1995-11-23", 1.1), p(104, HOME, Df, "1989-08-30", 1.0),
    p(105, HOME, Df, "1996-01-15", 0.9), p(106, HOME, Md, "1993-07-07", 1.6),
    p(107, HOME, Md, "1994-02-19", 1.5), p(108, HOME, Md, "1984-06-02", 0.6),
    p(109, HOME, Md, "1997-12-11", 1.3), p(110, HOME, Fw, "1991-09-09", 0.5),
    p(111, HOME, Fw, "1999-04-04", 1.0),
    p(112, HOME, Fw, "1998-10-10", 1.2), p(113, HOME, Md, "", 1.1),
    p(114, HOME, Df, "1993-03-03", 1.0),
    p(201, AWAY, Gk, "1988-01-20", 0.4), p(202, AWAY, Df, "1990-10-05", 1.0),
    p(203, AWAY, Df, "1992-12-24", 1.2), p(204, AWAY, Df, "1994-04-14", 1.0),
    p(205, AWAY, Df, "1987-02-28", 0.8), p(206, AWAY, Md, "1995-06-16", 1.5),
    p(207, AWAY, Md, "1993-09-29", 1.4), p(208, AWAY, Md, "1996-05-05", 1.2),
    p(209, AWAY, Md, "1986-11-11", 0.7), p(210, AWAY, Fw, "1993-05-13", 0.6),
    p(211, AWAY, Fw, "1995-08-08", 1.1),
    p(212, AWAY, Md, "2000-01-01", 1.2), p(213, AWAY, Fw, "1994-07-27", 1.1),
    p(214, AWAY, Df, "1991-12-12", 1.0),
];

/// (minute, out, in)
const SUBS: &[(u32, u64, u64)] = &[(58, 110, 112), (62, 209, 212), (75, 108, 113), (87, 210, 213)];

fn player(id: u64) -> &'static Player {
    PLAYERS.iter().find(|p| p.id == id).unwrap()
}

fn on_pitch(team: u64, abs_sec: f64) -> Vec<&'static Player> {
    let minute = abs_sec / 60.0;
    PLAYERS
        .iter()
        .filter(|p| p.team == team)
        .filter(|p| {
            let starter = (p.id % 100) <= 11;
            let out = SUBS.iter().find(|s| s.1 == p.id).map(|s| f64::from(s.0));
            let inn = SUBS.iter().find(|s| s.2 == p.id).map(|s| f64::from(s.0));
            match (starter, out, inn) {
                (true, Some(o), _) => minute < o,
                (true, None, _) => true,
                (false, _, Some(i)) => minute >= i,
                (false, _, None) => false,
            }
        })
        .collect()
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a Player], exclude: Option<u64>, outfield: bool) -> &'a Player {
    let cands: Vec<&Player> =
        pool.iter().copied().filter(|p| Some(p.id) != exclude && (!outfield || p.pos != Gk)).collect();
    let total: f64 = cands.iter().map(|p| p.activity).sum();
    let mut x = rng.random::<f64>() * total;
    for c in &cands {
        x -= c.activity;
        if x <= 0.0 {
            return c;
        }
    }
    cands[cands.len() - 1]
}

struct Ev {
    period: &'static str,
    sec: f64,
    team: u64,
    player: u64,
    name: &'static str,
    sub: &'static str,
    tags: Vec<u32>,
}

fn tags_cell(tags: &[u32]) -> String {
    let items: Vec<String> = tags.iter().map(|t| format!("{{'id': {t}}}")).collect();
    format!("[{}]", items.join(", "))
}

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/match_2057978"));
    std::fs::create_dir_all(&dir).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(MATCH_ID);
    let mut evs: Vec<Ev> = Vec::new();

    for (period, offset) in [("1H", 0.0), ("2H", 2700.0)] {
        let mut t: f64 = 2.0;
        let mut team = if period == "1H" { HOME } else { AWAY };
        let mut holder = pick(&mut rng, &on_pitch(team, offset + t), None, true).id;
        while t < 2690.0 {
            let abs = offset + t;
            let mine = on_pitch(team, abs);
            let other = if team == HOME { AWAY } else { HOME };
            let theirs = on_pitch(other, abs);
            if !mine.iter().any(|p| p.id == holder) {
                holder = pick(&mut rng, &mine, None, true).id;
            }
            let roll = rng.random::<f64>();
            let hp = player(holder);
            if roll < 0.62 {
                // pass; receiver becomes the next event's actor
                let accurate = rng.random_bool(if hp.pos == Df { 0.88 } else { 0.8 });
                let sub = if hp.pos == Fw || rng.random_bool(0.1) { "Cross" } else { "Simple pass" };
                evs.push(Ev {
                    period,
                    sec: t,
                    team,
                    player: holder,
                    name: "Pass",
                    sub,
                    tags: vec![if accurate { 1801 } else { 1802 }],
                });
                if accurate {
                    holder = pick(&mut rng, &mine, Some(holder), false).id;
                } else {
                    team = other;
                    holder = pick(&mut rng, &theirs, None, true).id;
                }
            } else if roll < 0.80 {
                // duel pair
                let opp = pick(&mut rng, &theirs, None, true).id;
                let won = rng.random_bool(0.5);
                evs.push(Ev {
                    period,
                    sec: t,
                    team,
                    player: holder,
                    name: "Duel",
                    sub: "Ground attacking duel",
                    tags: vec![if won { 703 } else { 701 }],
                });
                evs.push(Ev {
                    period,
                    sec: t + 0.4,
                    team: other,
                    player: opp,
                    name: "Duel",
                    sub: "Ground defending duel",
                    tags: vec![if won { 701 } else { 703 }],
                });
                if !won {
                    team = other;
                    holder = opp;
                }
            } else if roll < 0.87 {
                let opp = pick(&mut rng, &theirs, None, true);
                let (name, sub, tags) = if opp.pos == Df && rng.random_bool(0.6) {
                    ("Others on the ball", "Clearance", vec![])
                } else {
                    ("Others on the ball", "Touch", vec![1401])
                };
                evs.push(Ev { period, sec: t, team: other, player: opp.id, name, sub, tags });
                team = other;
                holder = opp.id;
            } else if roll < 0.91 && hp.pos != Gk {
                let on_target = rng.random_bool(0.4);
                evs.push(Ev {
                    period,
                    sec: t,
                    team,
                    player: holder,
                    name: "Shot",
                    sub: "Shot",
                    tags: vec![if on_target { 1801 } else { 1802 }],
                });
                let keeper = theirs.iter().find(|p| p.pos == Gk).unwrap();
                evs.push(Ev {
                    period,
                    sec: t + 1.5,
                    team: other,
                    player: keeper.id,
                    name: "Save attempt",
                    sub: "Reflexes",
                    tags: vec![if on_target { 1801 } else { 1802 }],
                });
                team = other;
                holder = keeper.id;
            } else if roll < 0.94 {
                let opp = pick(&mut rng, &theirs, None, true);
                evs.push(Ev { period, sec: t, team: other, player: opp.id, name: "Foul", sub: "Foul", tags: vec![] });
            } else {
                evs.push(Ev {
                    period,
                    sec: t,
                    team,
                    player: holder,
                    name: "Free Kick",
                    sub: "Free kick cross",
                    tags: vec![1801],
                });
                holder = pick(&mut rng, &mine, Some(holder), true).id;
            }
            t += rng.random_range(3.0..11.0);
        }
    }

    // scripted moments
    evs.push(Ev {
        period: "1H",
        sec: 1808.0,
        team: HOME,
        player: 107,
        name: "Pass",
        sub: "Smart pass",
        tags: vec![302, 1801],
    });
    evs.push(Ev {
        period: "1H",
        sec: 1811.0,
        team: HOME,
        player: 111,
        name: "Shot",
        sub: "Shot",
        tags: vec![101, 1801],
    });
    evs.push(Ev { period: "1H", sec: 2381.0, team: AWAY, player: 203, name: "Foul", sub: "Foul", tags: vec![1702] });
    evs.push(Ev {
        period: "2H",
        sec: 1502.0,
        team: AWAY,
        player: 206,
        name: "Pass",
        sub: "Cross",
        tags: vec![302, 1801],
    });
    evs.push(Ev {
        period: "2H",
        sec: 1505.0,
        team: AWAY,
        player: 211,
        name: "Shot",
        sub: "Shot",
        tags: vec![101, 1801],
    });
    evs.push(Ev { period: "2H", sec: 2101.0, team: HOME, player: 104, name: "Foul", sub: "Foul", tags: vec![1702] });
    // scripted events land on free timestamps so ordering is unambiguous
    evs.sort_by(|a, b| (a.period, a.sec).partial_cmp(&(b.period, b.sec)).unwrap());
    for w in evs.windows(2) {
        assert!(w[0].period != w[1].period || w[0].sec < w[1].sec, "duplicate timestamp {}", w[0].sec);
    }

    let mut csv =
        String::from("eventId,subEventName,tags,playerId,positions,matchId,eventName,teamId,matchPeriod,eventSec,id\n");
    for (i, e) in evs.iter().enumerate() {
        let event_id = match e.name {
            "Duel" => 1,
            "Foul" => 2,
            "Free Kick" => 3,
            "Others on the ball" => 7,
            "Pass" => 8,
            "Save attempt" => 9,
            "Shot" => 10,
            _ => 0,
        };
        writeln!(
            csv,
            "{event_id},{},\"{}\",{},\"[{{'y': 50, 'x': 50}}]\",{MATCH_ID},{},{},{},{:.6},{}",
            e.sub,
            tags_cell(&e.tags),
            e.player,
            e.name,
            e.team,
            e.period,
            e.sec,
            300_000_000 + i
        )
        .unwrap();
    }
    std::fs::write(dir.join("events.csv"), csv).unwrap();

    let lineup = |team: u64| -> String {
        PLAYERS
            .iter()
            .filter(|p| p.team == team && p.id % 100 <= 11)
            .map(|p| p.id.to_string())
            .collect::<Vec<_>>()
            .join(";")
    };
    let subs: Vec<String> = SUBS.iter().map(|(m, o, i)| format!("{m}:{o}>{i}")).collect();
    std::fs::write(
        dir.join("matches.csv"),
        format!(
            "wyId,dateutc,label,team1,team2,lineup1,lineup2,substitutions\n{MATCH_ID},2018-07-06 18:00:00,\"Home - Away, 1 - 1\",{HOME},{AWAY},{},{},{}\n",
            lineup(HOME),
            lineup(AWAY),
            subs.join(";")
        ),
    )
    .unwrap();

    let mut players = String::from("wyId,shortName,birthDate,role\n");
    for p in PLAYERS {
        let (code, name) = match p.pos {
            Gk => ("GK", "Goalkeeper"),
            Df => ("DF", "Defender"),
            Md => ("MD", "Midfielder"),
            Fw => ("FW", "Forward"),
        };
        writeln!(players, "{},P. {},{},\"{{'code2': '{code}', 'name': '{name}'}}\"", p.id, p.id, p.birth).unwrap();
    }
    std::fs::write(dir.join("players.csv"), players).unwrap();

    std::fs::write(
        dir.join("tags2name.csv"),
        "Tag,Label,Description\n101,Goal,Goal\n302,assist,Assist\n701,lost,Lost\n703,won,Won\n\
         1401,interception,Interception\n1702,yellow_card,Yellow card\n1801,accurate,Accurate\n1802,not_accurate,Not accurate\n",
    )
    .unwrap();
    println!("wrote {} events to {}", evs.len(), dir.display());
}
