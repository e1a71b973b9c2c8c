//! Flat `key = value` preset files. `#` starts a comment.

use std::f64::consts::FRAC_PI_8;
use std::path::Path;

use crate::angle::parse_angle;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Config {
    pub theta_experimental: Option<f64>,
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut config = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::validation(format!("config line {}: expected key = value", lineno + 1)))?;
            match key.trim() {
                "theta_experimental_rad" => config.theta_experimental = Some(parse_angle(value)?),
                other => {
                    return Err(CliError::validation(format!(
                        "config line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Named mixing angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// θ = π/8.
    Pi8,
    /// θ read from the config file.
    Experimental,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pi8 => "pi8",
            Self::Experimental => "experimental",
        }
    }

    pub fn resolve(self, config: Option<&Config>) -> CliResult<f64> {
        match self {
            Self::Pi8 => Ok(FRAC_PI_8),
            Self::Experimental => config.and_then(|c| c.theta_experimental).ok_or(CliError::MissingPreset),
        }
    }
}
