use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::CliError;

pub mod headers {
    pub const SURVIVAL: &str = "t,p_surv";
    pub const ENTROPY: &str = "t,entropy_bits";
    pub const VARIANCE: &str = "t,variance";
    pub const PROFILE: &str = "x,p";
    pub const ANALYTIC_SURVIVAL: &str = "t,p_surv_analytic";
    pub const FIT_REPORT: &str = "series,t_min,t_max,smoothing,exponent,intercept,rms_residual";
    pub const COMPARE: &str = "t,p_surv,p_surv_analytic,ratio";
    pub const COMPARE_FIT: &str =
        "t_min,t_max,smoothing,exact_exponent,analytic_exponent,exponent_difference,ratio_of_means";
}

/// Shortest string that parses back to the same `f64`: positional notation
/// for magnitudes in `[1e-5, 1e16)`, scientific otherwise.
pub fn format_number(v: f64) -> String {
    let mag = v.abs();
    if mag == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&mag) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Writes `header` and `rows` with LF line endings.
pub(crate) fn write_csv<I>(dir: &Path, name: &str, header: &str, rows: I) -> Result<PathBuf, CliError>
where
    I: IntoIterator<Item = String>,
{
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    let mut out = BufWriter::new(file);
    let result = (|| {
        out.write_all(header.as_bytes())?;
        out.write_all(b"\n")?;
        for row in rows {
            out.write_all(row.as_bytes())?;
            out.write_all(b"\n")?;
        }
        out.flush()
    })();
    result.map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub(crate) fn series_rows(samples: &[(u64, f64)]) -> impl Iterator<Item = String> + '_ {
    samples.iter().map(|&(t, v)| format!("{t},{}", format_number(v)))
}
