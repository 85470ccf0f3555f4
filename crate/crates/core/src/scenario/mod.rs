// SPDX-License-Identifier: Apache-2.0

//! Declarative scenario runner: regenerates the figure data sets and runs
//! parameter sweeps, writing CSV tables, a gnuplot script and a JSON
//! manifest into one output directory.

mod config;
mod figures;
mod optimize;
mod output;

use std::path::PathBuf;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use config::{
    apply_parameter, ModeInit, Observable, RawConfig, ScenarioConfig, ScenarioOptions, Sweep,
    SweepScale, TimeGrid, SWEEP_PARAMETERS,
};
pub use optimize::{
    admissible_detunings, optimize_detuning, optimize_detuning_by, DetuningOptimum, Objective,
    DEFAULT_Q_MAX,
};
pub use output::{Cell, Conventions, Manifest, ResultBundle, Table};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Fig2,
    Fig3a,
    Fig3b,
    Fig3cLd,
    Fig3cDs,
    Fig4a,
    Fig4b,
    Fig4c,
    CustomSweep,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::Fig2,
        ScenarioKind::Fig3a,
        ScenarioKind::Fig3b,
        ScenarioKind::Fig3cLd,
        ScenarioKind::Fig3cDs,
        ScenarioKind::Fig4a,
        ScenarioKind::Fig4b,
        ScenarioKind::Fig4c,
        ScenarioKind::CustomSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Fig2 => "fig2",
            ScenarioKind::Fig3a => "fig3a",
            ScenarioKind::Fig3b => "fig3b",
            ScenarioKind::Fig3cLd => "fig3c_ld",
            ScenarioKind::Fig3cDs => "fig3c_ds",
            ScenarioKind::Fig4a => "fig4a",
            ScenarioKind::Fig4b => "fig4b",
            ScenarioKind::Fig4c => "fig4c",
            ScenarioKind::CustomSweep => "custom_sweep",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let key = if key == "custom" {
            "custom_sweep".to_string()
        } else {
            key
        };
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| {
                let names: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown scenario `{s}` (one of {})", names.join(", "))
            })
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ScenarioKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid config `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("unstable regime: {0}")]
    Unstable(String),

    #[error("cannot write {}: {message}", path.display())]
    Output { path: PathBuf, message: String },

    #[error(transparent)]
    Model(Error),
}

impl ScenarioError {
    /// Process exit status: 2 for configuration problems, 3 when a
    /// stationary quantity is requested in an unstable regime.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::InvalidConfig { .. } => 2,
            ScenarioError::Unstable(_) => 3,
            _ => 1,
        }
    }
}

impl From<Error> for ScenarioError {
    fn from(e: Error) -> Self {
        match e {
            Error::Unstable { .. } => ScenarioError::Unstable(e.to_string()),
            Error::UnsupportedCase(_)
            | Error::ZeroDetuning { .. }
            | Error::NegativeOccupation(_)
            | Error::InvalidParameter(_) => ScenarioError::InvalidConfig {
                field: "system".into(),
                message: e.to_string(),
            },
            other => ScenarioError::Model(other),
        }
    }
}

/// Computes the tables of `config` without touching the file system.
pub fn evaluate(config: &ScenarioConfig) -> Result<ResultBundle, ScenarioError> {
    let out = figures::evaluate(config)?;
    Ok(ResultBundle::new(config.clone(), out))
}

/// Evaluates `config` and writes CSV, plot script and manifest into
/// `config.output_dir`.
pub fn run(config: &ScenarioConfig) -> Result<ResultBundle, ScenarioError> {
    let mut bundle = evaluate(config)?;
    bundle.write(&config.output_dir)?;
    Ok(bundle)
}
