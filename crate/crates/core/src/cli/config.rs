//! Experiment configuration: command-line flags layered over an optional
//! TOML file whose keys are the long flag names.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::walk::{InitialCondition, Phase, SiteAmplitudes, WalkError};

pub const DEFAULT_STEPS: u64 = 1000;
pub const DEFAULT_FIT_MIN: u64 = 100;
pub const DEFAULT_SMOOTHING: usize = 32;
pub const DEFAULT_OUTPUT_DIR: &str = "qwalk-out";
/// Runs longer than this record every fourth step by default.
pub const DENSE_RECORDING_LIMIT: u64 = 2000;
pub const CUSTOM_HEADER: &str = "x,a_re,a_im,b_re,b_im";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    Localized,
    Pair,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PhaseArg {
    Plus,
    Minus,
}

impl From<PhaseArg> for Phase {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Plus => Phase::Plus,
            PhaseArg::Minus => Phase::Minus,
        }
    }
}

impl From<Phase> for PhaseArg {
    fn from(p: Phase) -> Self {
        match p {
            Phase::Plus => PhaseArg::Plus,
            Phase::Minus => PhaseArg::Minus,
        }
    }
}

/// Outputs an experiment can write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Emit {
    Survival,
    Entropy,
    Variance,
    Profile,
    AnalyticSurvival,
    FitReport,
}

impl Emit {
    pub const ALL: [Emit; 6] = [
        Emit::Survival,
        Emit::Entropy,
        Emit::Variance,
        Emit::Profile,
        Emit::AnalyticSurvival,
        Emit::FitReport,
    ];
}

impl fmt::Display for Emit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Emit::Survival => "survival",
            Emit::Entropy => "entropy",
            Emit::Variance => "variance",
            Emit::Profile => "profile",
            Emit::AnalyticSurvival => "analytic_survival",
            Emit::FitReport => "fit_report",
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Hadamard walk on the line: survival decay, spread and coin entanglement"
)]
struct Flags {
    /// TOML file with the same keys as the long flags; repeat for batch runs.
    #[arg(long, value_name = "PATH")]
    config: Vec<PathBuf>,

    #[arg(long, value_enum)]
    initial: Option<InitialKind>,

    #[arg(long, allow_negative_numbers = true)]
    alpha_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta_im: Option<f64>,

    /// Half-distance between the two occupied sites of a pair.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<i64>,

    #[arg(long, value_enum)]
    phase: Option<PhaseArg>,

    /// CSV with header `x,a_re,a_im,b_re,b_im`.
    #[arg(long, value_name = "PATH")]
    custom_file: Option<PathBuf>,

    #[arg(long)]
    steps: Option<u64>,

    /// Half-width of the survival window [-s, s].
    #[arg(long)]
    s: Option<u64>,

    #[arg(long)]
    fit_min: Option<u64>,
    #[arg(long)]
    fit_max: Option<u64>,

    /// Block width for averaging before the log-log fit.
    #[arg(long)]
    smooth: Option<usize>,

    #[arg(long)]
    record_every: Option<u64>,

    /// Step at which to write a probability profile (repeatable).
    #[arg(long = "snapshot", value_name = "T")]
    snapshots: Vec<u64>,

    #[arg(long, value_enum, value_delimiter = ',')]
    emit: Vec<Emit>,

    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Print the resolved configuration as TOML and exit.
    #[arg(long)]
    dump_config: bool,

    /// Write the exact-versus-analytic survival comparison instead of a run.
    #[arg(long)]
    compare: bool,

    /// Worker threads for batches of --config files.
    #[arg(long)]
    jobs: Option<usize>,
}

/// One layer of settings; every field optional so layers can be merged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigLayer {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_every: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit: Option<Vec<Emit>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ConfigLayer {
    /// Fields set in `over` replace those in `self`.
    pub fn merged(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            initial: over.initial.or(self.initial),
            alpha_re: over.alpha_re.or(self.alpha_re),
            alpha_im: over.alpha_im.or(self.alpha_im),
            beta_re: over.beta_re.or(self.beta_re),
            beta_im: over.beta_im.or(self.beta_im),
            k: over.k.or(self.k),
            phase: over.phase.or(self.phase),
            custom_file: over.custom_file.or(self.custom_file),
            steps: over.steps.or(self.steps),
            s: over.s.or(self.s),
            fit_min: over.fit_min.or(self.fit_min),
            fit_max: over.fit_max.or(self.fit_max),
            smooth: over.smooth.or(self.smooth),
            record_every: over.record_every.or(self.record_every),
            snapshot: over.snapshot.or(self.snapshot),
            emit: over.emit.or(self.emit),
            out: over.out.or(self.out),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| {
            let key = e.span().map(|span| text[span].to_string()).unwrap_or_else(|| "config".into());
            CliError::config(key, format!("{}: {}", path.display(), e.message()))
        })
    }
}

impl From<&Flags> for ConfigLayer {
    fn from(f: &Flags) -> Self {
        ConfigLayer {
            initial: f.initial,
            alpha_re: f.alpha_re,
            alpha_im: f.alpha_im,
            beta_re: f.beta_re,
            beta_im: f.beta_im,
            k: f.k,
            phase: f.phase,
            custom_file: f.custom_file.clone(),
            steps: f.steps,
            s: f.s,
            fit_min: f.fit_min,
            fit_max: f.fit_max,
            smooth: f.smooth,
            record_every: f.record_every,
            snapshot: (!f.snapshots.is_empty()).then(|| f.snapshots.clone()),
            emit: (!f.emit.is_empty()).then(|| f.emit.clone()),
            out: f.out.clone(),
        }
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub initial: InitialCondition,
    /// Source of a `Custom` initial condition.
    pub custom_file: Option<PathBuf>,
    pub steps: u64,
    pub survival_s: u64,
    pub fit_window: (u64, u64),
    pub smoothing_width: usize,
    pub record_every: u64,
    pub snapshot_times: Vec<u64>,
    pub output_dir: PathBuf,
    pub emit: BTreeSet<Emit>,
}

impl ExperimentConfig {
    /// Resolves defaults and validates a merged layer.
    pub fn resolve(layer: ConfigLayer) -> Result<Self, CliError> {
        let kind = layer.initial.unwrap_or(InitialKind::Localized);
        let coin_given = [layer.alpha_re, layer.alpha_im, layer.beta_re, layer.beta_im]
            .iter()
            .any(Option::is_some);

        if kind != InitialKind::Pair {
            if layer.phase.is_some() {
                return Err(CliError::config("phase", "--phase requires --initial pair"));
            }
            if layer.k.is_some() {
                return Err(CliError::config("k", "--k requires --initial pair"));
            }
        }
        if kind != InitialKind::Localized && coin_given {
            return Err(CliError::config(
                "alpha-re",
                "coin amplitudes --alpha-*/--beta-* require --initial localized",
            ));
        }
        if kind != InitialKind::Custom && layer.custom_file.is_some() {
            return Err(CliError::config("custom-file", "--custom-file requires --initial custom"));
        }

        let (initial, custom_file) = match kind {
            InitialKind::Localized => {
                let (alpha, beta) = if coin_given {
                    (
                        Complex64::new(layer.alpha_re.unwrap_or(0.0), layer.alpha_im.unwrap_or(0.0)),
                        Complex64::new(layer.beta_re.unwrap_or(0.0), layer.beta_im.unwrap_or(0.0)),
                    )
                } else {
                    (Complex64::new(0.0, FRAC_1_SQRT_2), Complex64::new(FRAC_1_SQRT_2, 0.0))
                };
                (InitialCondition::Localized { alpha, beta }, None)
            }
            InitialKind::Pair => {
                let k = layer.k.unwrap_or(1);
                if k < 1 {
                    return Err(CliError::config("k", format!("must be a positive integer (got {k})")));
                }
                let phase = layer.phase.unwrap_or(PhaseArg::Plus).into();
                (InitialCondition::pair(k, phase), None)
            }
            InitialKind::Custom => {
                let path = layer
                    .custom_file
                    .clone()
                    .ok_or_else(|| CliError::config("custom-file", "--initial custom requires --custom-file"))?;
                (InitialCondition::Custom(read_custom_file(&path)?), Some(path))
            }
        };
        if let Err(e) = initial.entries() {
            let key = match (&e, kind) {
                (WalkError::InvalidPairDistance(_), _) => "k",
                (_, InitialKind::Custom) => "custom-file",
                _ => "alpha-re",
            };
            return Err(CliError::config(key, e.to_string()));
        }

        let steps = layer.steps.unwrap_or(DEFAULT_STEPS);
        if steps < 1 {
            return Err(CliError::config("steps", "must be at least 1"));
        }
        let survival_s = layer.s.unwrap_or_else(|| initial.reach() as u64);

        let fit_max = layer.fit_max.unwrap_or(steps);
        let fit_min = layer
            .fit_min
            .unwrap_or(if steps > DEFAULT_FIT_MIN { DEFAULT_FIT_MIN } else { 1 });
        if fit_min < 1 {
            return Err(CliError::config("fit-min", "must be at least 1"));
        }
        if fit_max > steps {
            return Err(CliError::config("fit-max", format!("must not exceed steps ({steps})")));
        }
        if fit_min >= fit_max {
            return Err(CliError::config(
                "fit-min",
                format!("must be below fit-max ({fit_min} >= {fit_max})"),
            ));
        }

        let smoothing_width = layer.smooth.unwrap_or(DEFAULT_SMOOTHING);
        if smoothing_width < 1 {
            return Err(CliError::config("smooth", "must be at least 1"));
        }
        let record_every = layer
            .record_every
            .unwrap_or(if steps <= DENSE_RECORDING_LIMIT { 1 } else { 4 });
        if record_every < 1 {
            return Err(CliError::config("record-every", "must be at least 1"));
        }

        let mut snapshot_times = layer.snapshot.unwrap_or_else(|| vec![steps]);
        snapshot_times.sort_unstable();
        snapshot_times.dedup();
        if let Some(&bad) = snapshot_times.iter().find(|&&t| t > steps) {
            return Err(CliError::config("snapshot", format!("{bad} exceeds steps ({steps})")));
        }

        let emit = match layer.emit {
            Some(list) => list.into_iter().collect(),
            None => Emit::ALL.into_iter().collect(),
        };

        Ok(ExperimentConfig {
            initial,
            custom_file,
            steps,
            survival_s,
            fit_window: (fit_min, fit_max),
            smoothing_width,
            record_every,
            snapshot_times,
            output_dir: layer.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            emit,
        })
    }

    /// The fully explicit layer that resolves back to this config.
    pub fn to_layer(&self) -> ConfigLayer {
        let mut layer = ConfigLayer {
            steps: Some(self.steps),
            s: Some(self.survival_s),
            fit_min: Some(self.fit_window.0),
            fit_max: Some(self.fit_window.1),
            smooth: Some(self.smoothing_width),
            record_every: Some(self.record_every),
            snapshot: Some(self.snapshot_times.clone()),
            emit: Some(self.emit.iter().copied().collect()),
            out: Some(self.output_dir.clone()),
            ..ConfigLayer::default()
        };
        match &self.initial {
            InitialCondition::Localized { alpha, beta } => {
                layer.initial = Some(InitialKind::Localized);
                layer.alpha_re = Some(alpha.re);
                layer.alpha_im = Some(alpha.im);
                layer.beta_re = Some(beta.re);
                layer.beta_im = Some(beta.im);
            }
            InitialCondition::SymmetricPair { k, phase } => {
                layer.initial = Some(InitialKind::Pair);
                layer.k = Some(*k);
                layer.phase = Some((*phase).into());
            }
            InitialCondition::Custom(_) => {
                layer.initial = Some(InitialKind::Custom);
                layer.custom_file = self.custom_file.clone();
            }
        }
        layer
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_layer()).expect("config layer serializes")
    }

    /// Trailing window `[⌈0.9 T⌉, T]` for long-time averages.
    pub fn trailing_window(&self) -> (u64, u64) {
        (self.steps - self.steps / 10, self.steps)
    }
}

/// Reads `x,a_re,a_im,b_re,b_im` rows.
pub fn read_custom_file(path: &Path) -> Result<Vec<(i64, SiteAmplitudes)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let malformed = |msg: String| CliError::config("custom-file", format!("{}: {msg}", path.display()));

    let header = reader.headers().map_err(|e| malformed(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != CUSTOM_HEADER {
        return Err(malformed(format!("expected header `{CUSTOM_HEADER}`")));
    }
    let mut entries = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| malformed(e.to_string()))?;
        let row = line + 2;
        if record.len() != 5 {
            return Err(malformed(format!("line {row}: expected 5 fields")));
        }
        let x: i64 = record[0]
            .parse()
            .map_err(|_| malformed(format!("line {row}: bad position `{}`", &record[0])))?;
        let mut vals = [0.0; 4];
        for (i, v) in vals.iter_mut().enumerate() {
            *v = record[i + 1]
                .parse()
                .map_err(|_| malformed(format!("line {row}: bad amplitude `{}`", &record[i + 1])))?;
        }
        entries.push((
            x,
            SiteAmplitudes::new(Complex64::new(vals[0], vals[1]), Complex64::new(vals[2], vals[3])),
        ));
    }
    Ok(entries)
}

/// Everything one invocation asks for.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub experiments: Vec<ExperimentConfig>,
    pub jobs: usize,
    pub dump_config: bool,
    pub compare: bool,
}

/// Outcome of parsing the command line.
#[derive(Debug)]
pub enum Parsed {
    Run(Invocation),
    /// `--help` / `--version` text to print before exiting successfully.
    Info(String),
}

pub fn parse_invocation<I, T>(args: I) -> Result<Parsed, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let flags = match Flags::try_parse_from(args) {
        Ok(f) => f,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Info(e.to_string())),
                _ => Err(CliError::Usage(e.to_string())),
            };
        }
    };
    let jobs = flags.jobs.unwrap_or(1);
    if jobs < 1 {
        return Err(CliError::config("jobs", "must be at least 1"));
    }
    let overrides = ConfigLayer::from(&flags);
    let bases = if flags.config.is_empty() {
        vec![ConfigLayer::default()]
    } else {
        flags
            .config
            .iter()
            .map(|p| ConfigLayer::load(p))
            .collect::<Result<Vec<_>, _>>()?
    };
    let experiments = bases
        .into_iter()
        .map(|base| ExperimentConfig::resolve(base.merged(overrides.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Parsed::Run(Invocation {
        experiments,
        jobs,
        dump_config: flags.dump_config,
        compare: flags.compare,
    }))
}

/// Parses a single experiment from command-line tokens (first token is the
/// program name).
pub fn parse_config<I, T>(args: I) -> Result<ExperimentConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_invocation(args)? {
        Parsed::Run(mut inv) if inv.experiments.len() == 1 => Ok(inv.experiments.remove(0)),
        Parsed::Run(_) => Err(CliError::config("config", "expected exactly one experiment")),
        Parsed::Info(_) => Err(CliError::Usage("no experiment requested".into())),
    }
}
