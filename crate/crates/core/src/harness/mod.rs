//! Experiment runner: ensembles of random deployments over a sweep of radii,
//! with CSV output and SVG drawings of individual instances.

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::GraphError;

mod experiment;
mod report;
mod svg;

pub use experiment::{default_r_values, run_experiment, run_trial, trial_seed, ExperimentConfig, ExperimentRecord, TrialResult};
pub use report::{emit_csv, read_csv, write_csv, CSV_COLUMNS};
pub use svg::{render_svg, svg_document};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
