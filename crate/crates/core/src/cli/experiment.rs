use std::fmt::Write as _;
use std::path::PathBuf;

use super::config::{Emit, ExperimentConfig};
use super::output::{format_number, headers, series_rows, write_csv};
use super::CliError;
use crate::analytic::{analytic_pair_survival, analytic_survival, AnalyticInitial};
use crate::observables::{
    asymptotic_entropy, coin_density, entanglement_entropy, fit_decay_exponent, probability_profile, survival,
    variance, DecayFit, ObservableError, ProbabilityProfile, TimeSeries,
};
use crate::walk::{make_initial_with_horizon, InitialCondition, Walker};

/// A fitted series, or the reason the fit could not be made.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFit {
    pub series: String,
    pub result: Result<DecayFit, ObservableError>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub fits: Vec<SeriesFit>,
    /// Trailing window and mean coin entropy over it.
    pub asymptotic_entropy: Option<((u64, u64), f64)>,
}

impl RunSummary {
    pub fn fit_failed(&self) -> bool {
        self.fits.iter().any(|f| f.result.is_err())
    }

    pub fn fit(&self, series: &str) -> Option<&Result<DecayFit, ObservableError>> {
        self.fits.iter().find(|f| f.series == series).map(|f| &f.result)
    }

    pub fn describe(&self) -> String {
        let mut text = String::new();
        let _ = writeln!(text, "wrote {} file(s) to {}", self.files.len(), self.output_dir.display());
        for fit in &self.fits {
            let _ = match &fit.result {
                Ok(f) => writeln!(
                    text,
                    "{} exponent {:.4} over [{}, {}] (smoothing {}, rms residual {:.3e})",
                    fit.series, f.exponent, f.window.0, f.window.1, f.smoothing_width, f.rms_residual
                ),
                Err(e) => writeln!(text, "{} fit failed: {e}", fit.series),
            };
        }
        if let Some(((lo, hi), s)) = self.asymptotic_entropy {
            let _ = writeln!(text, "mean entropy over [{lo}, {hi}]: {s:.6} bits");
        }
        text
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub output_dir: PathBuf,
    pub exact_exponent: f64,
    pub analytic_exponent: f64,
    /// Mean exact survival over the fit window divided by the mean analytic one.
    pub ratio_of_means: f64,
}

impl CompareReport {
    pub fn exponent_difference(&self) -> f64 {
        self.exact_exponent - self.analytic_exponent
    }

    pub fn describe(&self) -> String {
        format!(
            "exact exponent {:.4}, analytic exponent {:.4}, difference {:.4}, ratio of means {:.4} ({})\n",
            self.exact_exponent,
            self.analytic_exponent,
            self.exponent_difference(),
            self.ratio_of_means,
            self.output_dir.display()
        )
    }
}

struct Recording {
    survival: TimeSeries,
    entropy: TimeSeries,
    variance: TimeSeries,
    profiles: Vec<ProbabilityProfile>,
}

fn measurement(series: &str) -> impl Fn(ObservableError) -> CliError + '_ {
    move |source| CliError::Fit {
        series: series.to_string(),
        source,
    }
}

fn simulate(config: &ExperimentConfig, with_entropy: bool) -> Result<Recording, CliError> {
    let initial = make_initial_with_horizon(&config.initial, config.steps)
        .map_err(|e| CliError::config("initial", e.to_string()))?;
    let mut walker = Walker::new(initial, config.steps);
    let mut rec = Recording {
        survival: TimeSeries::new("survival"),
        entropy: TimeSeries::new("entropy"),
        variance: TimeSeries::new("variance"),
        profiles: Vec::with_capacity(config.snapshot_times.len()),
    };
    let mut snapshots = config.snapshot_times.iter().peekable();

    for t in 0..=config.steps {
        let state = walker.state();
        if t % config.record_every == 0 {
            rec.survival
                .push(t, survival(state, config.survival_s))
                .map_err(measurement("survival"))?;
            rec.variance.push(t, variance(state)).map_err(measurement("variance"))?;
            if with_entropy {
                let s = entanglement_entropy(&coin_density(state)).map_err(measurement("entropy"))?;
                rec.entropy.push(t, s).map_err(measurement("entropy"))?;
            }
        }
        if snapshots.next_if_eq(&&t).is_some() {
            rec.profiles.push(probability_profile(state));
        }
        if t < config.steps {
            walker.step();
        }
    }
    Ok(rec)
}

/// Analytic survival on the recorded grid, skipping `t = 0`.
fn analytic_series(config: &ExperimentConfig, grid: &TimeSeries) -> Result<TimeSeries, CliError> {
    let generic = match &config.initial {
        InitialCondition::SymmetricPair { .. } => None,
        other => Some(AnalyticInitial::try_from(other)?),
    };
    let mut series = TimeSeries::new("analytic_survival");
    for &(t, _) in grid.samples().iter().filter(|(t, _)| *t > 0) {
        let value = match (&config.initial, &generic) {
            (InitialCondition::SymmetricPair { k, phase }, _) => {
                analytic_pair_survival(t, config.survival_s, *k, *phase)?
            }
            (_, Some(init)) => analytic_survival(t, config.survival_s, init)?,
            (_, None) => unreachable!("non-pair initial conditions carry generic entries"),
        };
        series.push(t, value).map_err(measurement("analytic_survival"))?;
    }
    Ok(series)
}

fn fit_row(config: &ExperimentConfig, fit: &SeriesFit) -> String {
    let (lo, hi) = config.fit_window;
    let head = format!("{},{lo},{hi},{}", fit.series, config.smoothing_width);
    match &fit.result {
        Ok(f) => format!(
            "{head},{},{},{}",
            format_number(f.exponent),
            format_number(f.intercept),
            format_number(f.rms_residual)
        ),
        Err(_) => format!("{head},NaN,NaN,NaN"),
    }
}

/// Evolves the configured state to `steps`, writing every requested output.
///
/// Fit failures are recorded in the summary and the fit report; the other
/// files are still written.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunSummary, CliError> {
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let rec = simulate(config, true)?;
    let wants = |e: Emit| config.emit.contains(&e);
    let analytic = if wants(Emit::AnalyticSurvival) {
        Some(analytic_series(config, &rec.survival)?)
    } else {
        None
    };

    let mut files = Vec::new();
    if wants(Emit::Survival) {
        files.push(write_csv(dir, "survival.csv", headers::SURVIVAL, series_rows(rec.survival.samples()))?);
    }
    if wants(Emit::Entropy) {
        files.push(write_csv(dir, "entropy.csv", headers::ENTROPY, series_rows(rec.entropy.samples()))?);
    }
    if wants(Emit::Variance) {
        files.push(write_csv(dir, "variance.csv", headers::VARIANCE, series_rows(rec.variance.samples()))?);
    }
    if wants(Emit::Profile) {
        for profile in &rec.profiles {
            let rows = profile.values.iter().map(|&(x, p)| format!("{x},{}", format_number(p)));
            files.push(write_csv(dir, &format!("profile_t{}.csv", profile.t), headers::PROFILE, rows)?);
        }
    }
    if let Some(series) = &analytic {
        files.push(write_csv(
            dir,
            "analytic_survival.csv",
            headers::ANALYTIC_SURVIVAL,
            series_rows(series.samples()),
        )?);
    }

    let mut fits = Vec::new();
    if wants(Emit::FitReport) {
        let fit = |series: &TimeSeries| SeriesFit {
            series: series.label().to_string(),
            result: fit_decay_exponent(series, config.fit_window, config.smoothing_width),
        };
        fits.push(fit(&rec.survival));
        if let Some(series) = &analytic {
            fits.push(fit(series));
        }
        fits.push(fit(&rec.variance));
        let rows = fits.iter().map(|f| fit_row(config, f));
        files.push(write_csv(dir, "fit_report.csv", headers::FIT_REPORT, rows)?);
    }

    let window = config.trailing_window();
    let asymptotic = asymptotic_entropy(&rec.entropy, window).ok().map(|s| (window, s));

    Ok(RunSummary {
        output_dir: dir.clone(),
        files,
        fits,
        asymptotic_entropy: asymptotic,
    })
}

/// Exact and analytic survival side by side, with both fitted exponents.
pub fn compare_exact_analytic(config: &ExperimentConfig) -> Result<CompareReport, CliError> {
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let rec = simulate(config, false)?;
    let analytic = analytic_series(config, &rec.survival)?;
    let exact = rec.survival.samples().iter().filter(|(t, _)| *t > 0);
    let rows = exact.zip(analytic.samples()).map(|(&(t, e), &(_, a))| {
        format!("{t},{},{},{}", format_number(e), format_number(a), format_number(e / a))
    });
    write_csv(dir, "compare.csv", headers::COMPARE, rows)?;

    let exact_fit = fit_decay_exponent(&rec.survival, config.fit_window, config.smoothing_width)
        .map_err(measurement("survival"))?;
    let analytic_fit = fit_decay_exponent(&analytic, config.fit_window, config.smoothing_width)
        .map_err(measurement("analytic_survival"))?;
    let mean = |s: &TimeSeries| {
        let w = s.window(config.fit_window);
        w.iter().map(|(_, v)| v).sum::<f64>() / w.len() as f64
    };
    let report = CompareReport {
        output_dir: dir.clone(),
        exact_exponent: exact_fit.exponent,
        analytic_exponent: analytic_fit.exponent,
        ratio_of_means: mean(&rec.survival) / mean(&analytic),
    };
    let (lo, hi) = config.fit_window;
    let row = format!(
        "{lo},{hi},{},{},{},{},{}",
        config.smoothing_width,
        format_number(report.exact_exponent),
        format_number(report.analytic_exponent),
        format_number(report.exponent_difference()),
        format_number(report.ratio_of_means)
    );
    write_csv(dir, "compare_fit.csv", headers::COMPARE_FIT, [row])?;
    Ok(report)
}
