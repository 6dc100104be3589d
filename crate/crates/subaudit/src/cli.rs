//! `subaudit` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 data or validation error, 3 internal.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use subaudit_core::events::MatchId;

use crate::config::{RunConfig, RunRecord};
use crate::error::AppError;
use crate::ingest::{self, Dataset};
use crate::{compute, output, report, store, Computed};

pub const DEFAULT_LISTEN: &str = "127.0.0.1:8080";

#[derive(Debug, Parser)]
#[command(name = "subaudit", version, about = "Substitution-priority audits from match event logs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Job {
    /// Directory with events*.csv, matches*.csv, players.csv and optionally
    /// tags2name.csv. Defaults to the bundled fixture.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Only these matches (repeatable).
    #[arg(long = "match", short = 'm', value_name = "ID")]
    pub matches: Vec<u64>,
    /// Run configuration (JSON).
    #[arg(long, short)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct Out {
    /// Output directory, created if missing.
    #[arg(long, short, default_value = "out")]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate the input tables.
    Ingest {
        #[command(flatten)]
        job: Job,
        /// Write the normalised event stream as JSON lines (`-` for stdout).
        #[arg(long, value_name = "FILE")]
        dump_events: Option<PathBuf>,
    },
    /// Build the per-slice player table (dataset.csv).
    Compute {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        out: Out,
    },
    /// Audit each match (audit_<id>.json and audit_<id>.csv).
    Audit {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        out: Out,
    },
    /// Decision latency table (latency.csv).
    Latency {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        out: Out,
    },
    /// Print a JSON summary of the computed dataset.
    Report {
        #[command(flatten)]
        job: Job,
    },
    /// Serve audits over HTTP.
    Serve {
        #[command(flatten)]
        job: Job,
        /// Listen address.
        #[arg(long, env = "SUBAUDIT_LISTEN", default_value = DEFAULT_LISTEN)]
        listen: String,
        /// Allowed CORS origin; any origin when unset.
        #[arg(long, env = "SUBAUDIT_CORS_ORIGIN")]
        cors_origin: Option<String>,
    },
    /// Plot-ready priority curves (timeline.csv).
    Export {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        out: Out,
    },
}

/// The bundled synthetic match, embedded so the CLI works without inputs.
pub mod fixture {
    use super::*;

    pub const MATCH_ID: u64 = 2057978;
    const EVENTS: &str = include_str!("../fixtures/match_2057978/events.csv");
    const MATCHES: &str = include_str!("../fixtures/match_2057978/matches.csv");
    const PLAYERS: &str = include_str!("../fixtures/match_2057978/players.csv");
    const TAGS: &str = include_str!("../fixtures/match_2057978/tags2name.csv");

    pub fn dataset() -> Dataset {
        let tags = ingest::parse_tag_dictionary(TAGS.as_bytes()).expect("bundled tags parse");
        Dataset {
            events: ingest::parse_event_log(EVENTS.as_bytes(), &tags).expect("bundled events parse"),
            matches: ingest::parse_matches(MATCHES.as_bytes()).expect("bundled matches parse"),
            players: ingest::parse_players(PLAYERS.as_bytes()).expect("bundled players parse"),
            tags,
        }
    }
}

fn load(job: &Job) -> Result<(Dataset, RunConfig), AppError> {
    let cfg = match &job.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut data = match &job.input {
        Some(dir) => ingest::load_dir(dir)?,
        None => fixture::dataset(),
    };
    let ids: Vec<MatchId> = job.matches.iter().copied().map(MatchId).collect();
    for id in &ids {
        if !data.matches.iter().any(|m| m.match_id == *id) {
            return Err(AppError::Data(format!("match {id} not found in input")));
        }
    }
    data.retain_matches(&ids);
    Ok((data, cfg))
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), AppError> {
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let path = dir.join(name);
    let f = File::create(&path).map_err(|e| AppError::io(&path, e))?;
    Ok((path, BufWriter::new(f)))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<(), AppError> {
    w.flush().map_err(|e| AppError::io(path, e))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn write_record(dir: &Path, command: &str, cfg: &RunConfig, computed: &Computed) -> Result<(), AppError> {
    let (path, mut w) = create(dir, "run_config.json")?;
    serde_json::to_writer_pretty(&mut w, &RunRecord::new(command, cfg, &computed.system))
        .map_err(|e| AppError::io(&path, e))?;
    w.write_all(b"\n").map_err(|e| AppError::io(&path, e))?;
    finish(&path, w)
}

fn execute(cmd: Command) -> Result<(), AppError> {
    match cmd {
        Command::Ingest { job, dump_events } => {
            let (data, _) = load(&job)?;
            for m in &data.matches {
                subaudit_core::events::on_field_intervals(m, &data.events, &data.players)?;
            }
            match dump_events.as_deref() {
                Some(p) if p == Path::new("-") => {
                    let stdout = std::io::stdout();
                    output::write_events_jsonl(stdout.lock(), &data.events, &data.tags)
                        .map_err(|e| AppError::Internal(e.to_string()))?;
                }
                Some(p) => {
                    let f = File::create(p).map_err(|e| AppError::io(p, e))?;
                    output::write_events_jsonl(BufWriter::new(f), &data.events, &data.tags)
                        .map_err(|e| AppError::io(p, e))?;
                }
                None => println!(
                    "{} events, {} matches, {} players, {} tags",
                    data.events.len(),
                    data.matches.len(),
                    data.players.len(),
                    data.tags.len()
                ),
            }
            Ok(())
        }
        Command::Compute { job, out } => {
            let (data, cfg) = load(&job)?;
            let computed = compute(&data, &cfg)?;
            let (path, mut w) = create(&out.output, "dataset.csv")?;
            output::write_dataset(&mut w, &computed.states.states).map_err(|e| AppError::io(&path, e))?;
            finish(&path, w)?;
            write_record(&out.output, "compute", &cfg, &computed)
        }
        Command::Audit { job, out } => {
            let (data, cfg) = load(&job)?;
            let computed = compute(&data, &cfg)?;
            for a in &computed.audits {
                let (path, mut w) = create(&out.output, &format!("audit_{}.json", a.match_id))?;
                output::write_audit_json(&mut w, a).map_err(|e| AppError::io(&path, e))?;
                finish(&path, w)?;
                let (path, mut w) = create(&out.output, &format!("audit_{}.csv", a.match_id))?;
                output::write_audit_csv(&mut w, a, &cfg.priority).map_err(|e| AppError::io(&path, e))?;
                finish(&path, w)?;
            }
            write_record(&out.output, "audit", &cfg, &computed)
        }
        Command::Latency { job, out } => {
            let (data, cfg) = load(&job)?;
            let computed = compute(&data, &cfg)?;
            let (path, mut w) = create(&out.output, "latency.csv")?;
            output::write_latency(&mut w, &computed.audits).map_err(|e| AppError::io(&path, e))?;
            finish(&path, w)?;
            write_record(&out.output, "latency", &cfg, &computed)
        }
        Command::Report { job } => {
            let (data, cfg) = load(&job)?;
            let computed = compute(&data, &cfg)?;
            let summary = report::summarize(&data, &computed);
            let text = serde_json::to_string_pretty(&summary).map_err(|e| AppError::Internal(e.to_string()))?;
            println!("{text}");
            Ok(())
        }
        Command::Export { job, out } => {
            let (data, cfg) = load(&job)?;
            let computed = compute(&data, &cfg)?;
            let (path, mut w) = create(&out.output, "timeline.csv")?;
            output::write_timeline(&mut w, &computed.audits, &cfg.priority).map_err(|e| AppError::io(&path, e))?;
            finish(&path, w)?;
            write_record(&out.output, "export", &cfg, &computed)
        }
        Command::Serve { job, listen, cors_origin } => {
            let (data, cfg) = load(&job)?;
            let computed = compute(&data, &cfg)?;
            let origin = cors_origin
                .map(|o| o.parse().map_err(|_| AppError::Usage(format!("invalid CORS origin `{o}`"))))
                .transpose()?;
            let store = store::AuditStore::new(computed);
            let rt = tokio::runtime::Runtime::new().map_err(|e| AppError::Internal(e.to_string()))?;
            rt.block_on(crate::api::serve(store, &listen, origin))
                .map_err(|e| AppError::Internal(format!("{listen}: {e}")))
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let _ = e.print();
            return match e.kind() {
                DisplayHelp | DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
