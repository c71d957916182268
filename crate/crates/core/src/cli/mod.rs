//! Experiment runner behind the `qwalk` binary.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 fit failure.

mod config;
mod experiment;
mod output;

pub use config::{
    parse_config, parse_invocation, read_custom_file, ConfigLayer, Emit, ExperimentConfig, InitialKind, Invocation,
    Parsed, PhaseArg, CUSTOM_HEADER,
};
pub use experiment::{compare_exact_analytic, run_experiment, CompareReport, RunSummary, SeriesFit};
pub use output::{format_number, headers};

use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::analytic::AnalyticError;
use crate::observables::ObservableError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_FIT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("fit failed for {series}: {source}")]
    Fit {
        series: String,
        #[source]
        source: ObservableError,
    },

    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Analytic(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
            CliError::Fit { .. } => EXIT_FIT,
        }
    }
}

fn run_one(config: &ExperimentConfig, compare: bool) -> (i32, String) {
    let result = if compare {
        compare_exact_analytic(config).map(|r| (EXIT_OK, r.describe()))
    } else {
        run_experiment(config).map(|s| {
            let code = if s.fit_failed() { EXIT_FIT } else { EXIT_OK };
            (code, s.describe())
        })
    };
    result.unwrap_or_else(|e| (e.exit_code(), format!("error: {e}\n")))
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let invocation = match parse_invocation(args) {
        Ok(Parsed::Run(inv)) => inv,
        Ok(Parsed::Info(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(CliError::Usage(text)) => {
            eprint!("{text}");
            return EXIT_CONFIG;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };

    if invocation.dump_config {
        let docs: Vec<String> = invocation.experiments.iter().map(ExperimentConfig::to_toml).collect();
        print!("{}", docs.join("\n"));
        return EXIT_OK;
    }

    let outcomes: Vec<(i32, String)> = if invocation.jobs > 1 && invocation.experiments.len() > 1 {
        let pool = match rayon::ThreadPoolBuilder::new().num_threads(invocation.jobs).build() {
            Ok(pool) => pool,
            Err(e) => {
                eprintln!("error: cannot start worker pool: {e}");
                return EXIT_CONFIG;
            }
        };
        pool.install(|| {
            invocation
                .experiments
                .par_iter()
                .map(|c| run_one(c, invocation.compare))
                .collect()
        })
    } else {
        invocation
            .experiments
            .iter()
            .map(|c| run_one(c, invocation.compare))
            .collect()
    };

    let mut code = EXIT_OK;
    for (status, text) in outcomes {
        if status == EXIT_OK {
            print!("{text}");
        } else {
            eprint!("{text}");
        }
        code = code.max(status);
    }
    code
}
