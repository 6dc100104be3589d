//! Run configuration and the per-run record written next to the outputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use subaudit_core::metrics::PipelineConfig;
use subaudit_core::priority::PriorityConfig;
use subaudit_core::system::{build_bundled_system, load_system, validate_system, Provenance, Source, SystemConfig};

use crate::error::AppError;

/// Settings for one run. Every field has a default, so `{}` is valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub priority: PriorityConfig,
    /// Variables document; the bundled one when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system_variables: Option<PathBuf>,
    /// Rule file; the bundled one when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rules: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, AppError> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
        // relative asset paths resolve against the config file
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.system_variables, &mut cfg.rules].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Builds and validates the rule system.
    pub fn system(&self) -> Result<SystemConfig, AppError> {
        let sys = match (&self.system_variables, &self.rules) {
            (None, None) => build_bundled_system(),
            (vars, rules) => {
                let read = |p: &Option<PathBuf>, fallback: &str| -> Result<String, AppError> {
                    match p {
                        Some(p) => {
                            std::fs::read_to_string(p).map_err(|e| AppError::Data(format!("{}: {e}", p.display())))
                        }
                        None => Ok(fallback.to_string()),
                    }
                };
                let v = read(vars, subaudit_core::system::BUNDLED_VARIABLES)?;
                let r = read(rules, subaudit_core::system::BUNDLED_RULES)?;
                load_system(&v, &r)?
            }
        };
        let report = validate_system(&sys);
        if !report.is_valid() {
            let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            return Err(AppError::Data(format!("rule system is invalid:\n  {}", lines.join("\n  "))));
        }
        self.pipeline.validate()?;
        self.priority.validate()?;
        Ok(sys)
    }
}

/// Chosen (not published) pipeline and priority settings, by config path.
const PIPELINE_DECISIONS: &[(&str, &str)] = &[
    ("pipeline.technical_weights", "weight table; the published model does not print its weight vector"),
    ("pipeline.normalization", "technical score divided by the team's absolute weighted volume in the slice"),
    ("pipeline.percentile_scope", "percentile groups are (match, role) over all retained slices"),
    ("pipeline.percentile_tie_rule", "ties share their average rank"),
    ("pipeline.centrality", "teleport 0.01 on every entry, max-normalised; no edges gives zeros"),
    ("pipeline.default_age", "age used when the birth date is missing"),
    ("pipeline.tags.goal", "goals counted from Shot events tagged 101 or with sub-event Goal"),
    ("ingest.period_offsets", "nominal offsets 0/2700/5400/6300 s; shootout events dropped"),
    ("ingest.pass_receiver", "accurate pass receiver is the next event of the same team and period"),
    ("priority.critical_threshold", "critical signal above 90"),
    ("priority.ranking", "ties by lower p_cum, then lower player id; goalkeepers not ranked"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub item: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Written as `run_config.json`: every setting used, plus the list of
/// parameters that were chosen rather than published.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub system: SystemRecord,
    pub decisions: Vec<Decision>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub output: String,
    pub variables: Vec<subaudit_core::fuzzy::LinguisticVariable>,
    pub rules: Vec<String>,
    pub provenance: Vec<Provenance>,
}

impl RunRecord {
    pub fn new(command: &str, config: &RunConfig, system: &SystemConfig) -> RunRecord {
        let mut decisions: Vec<Decision> = PIPELINE_DECISIONS
            .iter()
            .map(|(item, note)| Decision { item: item.to_string(), note: Some(note.to_string()) })
            .collect();
        decisions.extend(
            system
                .provenance
                .iter()
                .filter(|p| p.source == Source::Decision)
                .map(|p| Decision { item: format!("system.{}", p.item), note: p.note.clone() }),
        );
        RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
            system: SystemRecord {
                output: system.output.clone(),
                variables: system.variables.clone(),
                rules: system.rules.rules.iter().map(ToString::to_string).collect(),
                provenance: system.provenance.clone(),
            },
            decisions,
        }
    }
}
