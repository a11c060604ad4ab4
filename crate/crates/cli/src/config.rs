//! Run configuration: a flat `key = value` file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use entropic_core::geodesics::GeodesicForm;
use entropic_core::{Normalization, ProfileKind};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for {key}: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// constant | oscillatory | power-law | exponential
    #[arg(long)]
    pub scenario: Option<String>,
    /// Transverse amplitude Gamma/hbar (accepts forms like `1/2` or `pi/2`).
    #[arg(long = "gamma-over-hbar")]
    pub gamma_over_hbar: Option<String>,
    /// Fix Gamma = (h/4) lambda instead of --gamma-over-hbar.
    #[arg(long = "unit-peak")]
    pub unit_peak: bool,
    /// Profile rate lambda (> 0).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Longitudinal precession frequency (negative).
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<String>,
    /// Initial statistical coordinate for geodesics and the report.
    #[arg(long)]
    pub theta0: Option<String>,
    /// Initial coordinate velocity.
    #[arg(long)]
    pub thetadot0: Option<String>,
    /// Initial affine parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub xi0: Option<String>,
    /// End of the time (or theta) axis.
    #[arg(long = "t-max")]
    pub t_max: Option<String>,
    /// End of the affine-parameter window.
    #[arg(long = "xi-max", allow_hyphen_values = true)]
    pub xi_max: Option<String>,
    /// Propagator integration step.
    #[arg(long)]
    pub dt: Option<String>,
    /// Geodesic integration step.
    #[arg(long)]
    pub dxi: Option<String>,
    /// Finite-difference step for the numeric Fisher information.
    #[arg(long = "h-step")]
    pub h_step: Option<String>,
    /// Number of output samples (per axis for `region`).
    #[arg(long)]
    pub grid: Option<String>,
    /// fs | raw
    #[arg(long)]
    pub normalization: Option<String>,
    /// exact | paper (oscillatory geodesic only)
    #[arg(long)]
    pub form: Option<String>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pass/fail threshold for the command's error column.
    #[arg(long)]
    pub tolerance: Option<String>,
    /// Significant digits of emitted floats, 6..=17.
    #[arg(long)]
    pub precision: Option<String>,
    /// Lower end of the log-spaced lambda axis of `region`.
    #[arg(long = "lambda-min")]
    pub lambda_min: Option<String>,
    /// Upper end of the lambda axis.
    #[arg(long = "lambda-max")]
    pub lambda_max: Option<String>,
    /// Upper end of the theta0 axis of `region`.
    #[arg(long = "theta0-max")]
    pub theta0_max: Option<String>,
    /// Override the longitudinal field Omega/hbar (breaks resonance unless matched).
    #[arg(long, allow_hyphen_values = true)]
    pub longitudinal: Option<String>,
    /// Integrate even when the drive is not resonant.
    #[arg(long = "allow-off-resonance")]
    pub allow_off_resonance: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ProfileKind,
    pub gamma_over_hbar: f64,
    pub unit_peak: bool,
    pub lambda: f64,
    pub omega0: f64,
    pub theta0: f64,
    pub theta_dot0: f64,
    pub xi0: f64,
    pub t_max: f64,
    pub xi_max: f64,
    pub dt: f64,
    pub dxi: f64,
    pub h_step: Option<f64>,
    pub grid: Option<usize>,
    pub normalization: Normalization,
    pub form: GeodesicForm,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub precision: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub theta0_max: f64,
    pub longitudinal: Option<f64>,
    pub allow_off_resonance: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ProfileKind::Constant,
            gamma_over_hbar: 1.0,
            unit_peak: false,
            lambda: 1.0,
            omega0: -15.0 * PI,
            theta0: 0.0,
            theta_dot0: 1.0,
            xi0: 0.0,
            t_max: 10.0,
            xi_max: 1.0,
            dt: 1e-4,
            dxi: 1e-4,
            h_step: None,
            grid: None,
            normalization: Normalization::FubiniStudy,
            form: GeodesicForm::ExactForm,
            format: OutputFormat::Csv,
            out: None,
            tolerance: None,
            precision: 12,
            lambda_min: 1e-2,
            lambda_max: 1e2,
            theta0_max: 5.0,
            longitudinal: None,
            allow_off_resonance: false,
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file named by `--config`, then flags.
    pub fn resolve(flags: &Flags) -> Result<Self, ConfigError> {
        let mut entries = match &flags.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let overrides: [(&str, &Option<String>); 24] = [
            ("scenario", &flags.scenario),
            ("gamma-over-hbar", &flags.gamma_over_hbar),
            ("lambda", &flags.lambda),
            ("omega0", &flags.omega0),
            ("theta0", &flags.theta0),
            ("thetadot0", &flags.thetadot0),
            ("xi0", &flags.xi0),
            ("t-max", &flags.t_max),
            ("xi-max", &flags.xi_max),
            ("dt", &flags.dt),
            ("dxi", &flags.dxi),
            ("h-step", &flags.h_step),
            ("grid", &flags.grid),
            ("normalization", &flags.normalization),
            ("form", &flags.form),
            ("format", &flags.format),
            ("tolerance", &flags.tolerance),
            ("precision", &flags.precision),
            ("lambda-min", &flags.lambda_min),
            ("lambda-max", &flags.lambda_max),
            ("theta0-max", &flags.theta0_max),
            ("longitudinal", &flags.longitudinal),
            ("out", &flags.out.as_ref().map(|p| p.display().to_string())),
            ("unit-peak", &flags.unit_peak.then(|| "true".to_string())),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                entries.insert(key.to_string(), v.clone());
            }
        }
        if flags.allow_off_resonance {
            entries.insert("allow-off-resonance".into(), "true".into());
        }
        let mut config = Self::default();
        for (key, value) in &entries {
            config.apply(key, value)?;
        }
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |reason: String| ConfigError::Value {
            key: key.to_string(),
            value: value.to_string(),
            reason,
        };
        let num = || parse_scalar(value).map_err(bad);
        match key {
            "scenario" => self.scenario = value.parse().map_err(bad)?,
            "gamma-over-hbar" => self.gamma_over_hbar = num()?,
            "unit-peak" => self.unit_peak = parse_bool(value).map_err(bad)?,
            "lambda" => self.lambda = num()?,
            "omega0" => self.omega0 = num()?,
            "theta0" => self.theta0 = num()?,
            "thetadot0" => self.theta_dot0 = num()?,
            "xi0" => self.xi0 = num()?,
            "t-max" => self.t_max = num()?,
            "xi-max" => self.xi_max = num()?,
            "dt" => self.dt = num()?,
            "dxi" => self.dxi = num()?,
            "h-step" => self.h_step = Some(num()?),
            "grid" => self.grid = Some(value.trim().parse().map_err(|e| bad(format!("{e}")))?),
            "normalization" => self.normalization = value.parse().map_err(bad)?,
            "form" => self.form = value.parse().map_err(bad)?,
            "format" => {
                self.format = match value.trim() {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => return Err(bad("expected csv or json".into())),
                }
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "tolerance" => self.tolerance = Some(num()?),
            "precision" => self.precision = value.trim().parse().map_err(|e| bad(format!("{e}")))?,
            "lambda-min" => self.lambda_min = num()?,
            "lambda-max" => self.lambda_max = num()?,
            "theta0-max" => self.theta0_max = num()?,
            "longitudinal" => self.longitudinal = Some(num()?),
            "allow-off-resonance" => self.allow_off_resonance = parse_bool(value).map_err(bad)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let fail = |key: &str, value: String, reason: &str| {
            Err(ConfigError::Value {
                key: key.to_string(),
                value,
                reason: reason.to_string(),
            })
        };
        let positive = [
            ("gamma-over-hbar", self.gamma_over_hbar),
            ("lambda", self.lambda),
            ("thetadot0", self.theta_dot0),
            ("t-max", self.t_max),
            ("dt", self.dt),
            ("dxi", self.dxi),
            ("lambda-min", self.lambda_min),
            ("lambda-max", self.lambda_max),
            ("theta0-max", self.theta0_max),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return fail(key, v.to_string(), "must be positive");
            }
        }
        if let Some(h) = self.h_step {
            if !(h.is_finite() && h > 0.0) {
                return fail("h-step", h.to_string(), "must be positive");
            }
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return fail("tolerance", t.to_string(), "must be positive");
            }
        }
        if !(self.omega0.is_finite() && self.omega0 < 0.0) {
            return fail("omega0", self.omega0.to_string(), "must be negative");
        }
        if !(self.theta0.is_finite() && self.theta0 >= 0.0) {
            return fail("theta0", self.theta0.to_string(), "must be non-negative");
        }
        if !self.xi0.is_finite() || self.xi_max.is_nan() || self.xi_max <= self.xi0 {
            return fail("xi-max", self.xi_max.to_string(), "must exceed xi0");
        }
        if self.lambda_max <= self.lambda_min {
            return fail("lambda-max", self.lambda_max.to_string(), "must exceed lambda-min");
        }
        if self.grid == Some(0) {
            return fail("grid", "0".into(), "must be at least 1");
        }
        if !(6..=17).contains(&self.precision) {
            return fail("precision", self.precision.to_string(), "must lie in 6..=17");
        }
        Ok(())
    }

    /// Transverse amplitude `Gamma / hbar`, honouring the unit-peak convention.
    pub fn rate(&self) -> f64 {
        if self.unit_peak {
            PI / 2.0 * self.lambda
        } else {
            self.gamma_over_hbar
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1 });
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

/// A number, `pi`, or a product/quotient of those, e.g. `2/pi`, `-15*pi`.
pub fn parse_scalar(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let mut value = parse_product(num)?;
    if let Some(d) = den {
        value /= parse_product(d)?;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err("not a finite number".into())
    }
}

fn parse_product(text: &str) -> Result<f64, String> {
    text.split('*').try_fold(1.0, |acc, factor| {
        let f = factor.trim();
        let (sign, body) = match f.strip_prefix('-') {
            Some(rest) => (-1.0, rest.trim()),
            None => (1.0, f),
        };
        let v = if body.eq_ignore_ascii_case("pi") {
            PI
        } else {
            body.parse::<f64>().map_err(|_| format!("cannot parse `{f}`"))?
        };
        Ok(acc * sign * v)
    })
}

fn parse_bool(text: &str) -> Result<bool, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("expected a boolean, got `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("0.25").unwrap(), 0.25);
        assert_eq!(parse_scalar("2/pi").unwrap(), 2.0 / PI);
        assert_eq!(parse_scalar("-15*pi").unwrap(), -15.0 * PI);
        assert_eq!(parse_scalar("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_scalar("1e-4").unwrap(), 1e-4);
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("1/0").is_err());
    }

    #[test]
    fn file_then_flags() {
        let entries = parse_config_text("# fig 3\nlambda = 1/pi\ngamma_over_hbar = 0.5 # inline\n\nscenario=exponential\n").unwrap();
        assert_eq!(entries["gamma-over-hbar"], "0.5");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "lambda = 1/pi\nscenario = exponential\ntheta0 = 1\n").unwrap();
        let flags = Flags {
            config: Some(path),
            scenario: Some("power-law".into()),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.scenario, ProfileKind::PowerLaw);
        assert_eq!(cfg.lambda, 1.0 / PI);
        assert_eq!(cfg.theta0, 1.0);
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_config_text("lambda 3"), Err(ConfigError::Syntax { line: 1 })));
        let unknown = Flags {
            config: None,
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&unknown).is_ok());
        let bad = |f: Flags| RunConfig::resolve(&f).is_err();
        assert!(bad(Flags { dt: Some("0".into()), ..Flags::default() }));
        assert!(bad(Flags { precision: Some("5".into()), ..Flags::default() }));
        assert!(bad(Flags { omega0: Some("2".into()), ..Flags::default() }));
        assert!(bad(Flags { scenario: Some("linear".into()), ..Flags::default() }));
        assert!(bad(Flags { format: Some("xml".into()), ..Flags::default() }));
        assert!(bad(Flags { grid: Some("0".into()), ..Flags::default() }));
    }
}
