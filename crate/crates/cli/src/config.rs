use crate::error::CliError;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "CAUSTICS_CONFIG";

/// Largest digit count the double-double scalar can honour.
pub const MAX_DIGITS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended { digits: u32 },
}

impl Precision {
    pub fn digits(self) -> u32 {
        match self {
            Precision::Double => 17,
            Precision::Extended { digits } => digits,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub precision: Precision,
    /// Largest mode index accepted by `modes` and `annihilate`.
    pub k_max: u64,
    /// Points of the periodic grid used by `modes` and `annihilate`.
    pub grid: usize,
    /// Points of the integrability profile.
    pub profile_grid: usize,
    /// Pass threshold for the tangency defect in `caustic-test`.
    pub tolerance: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: Precision::Double,
            k_max: caustics::modes::DEFAULT_K_MAX,
            grid: caustics::modes::DEFAULT_GRID,
            profile_grid: 64,
            tolerance: 1e-10,
            format: Format::Json,
            output: None,
            seed: 0,
        }
    }
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub precision: Option<String>,
    pub digits: Option<u32>,
    pub k_max: Option<u64>,
    pub grid: Option<usize>,
    pub profile_grid: Option<usize>,
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    /// Overlays `top` on `self`, key by key.
    pub fn merge(self, top: ConfigFile) -> ConfigFile {
        ConfigFile {
            precision: top.precision.or(self.precision),
            digits: top.digits.or(self.digits),
            k_max: top.k_max.or(self.k_max),
            grid: top.grid.or(self.grid),
            profile_grid: top.profile_grid.or(self.profile_grid),
            tolerance: top.tolerance.or(self.tolerance),
            format: top.format.or(self.format),
            output: top.output.or(self.output),
            seed: top.seed.or(self.seed),
        }
    }

    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let d = RunConfig::default();
        let precision = match self.precision.as_deref().unwrap_or("double") {
            "double" => {
                if self.digits.is_some_and(|n| n != 17) {
                    return invalid("digits applies to extended precision only");
                }
                Precision::Double
            }
            "extended" => {
                let digits = self.digits.unwrap_or(30);
                if !(25..=MAX_DIGITS).contains(&digits) {
                    return invalid(format!("extended precision needs 25 ≤ digits ≤ {MAX_DIGITS}, got {digits}"));
                }
                Precision::Extended { digits }
            }
            other => return invalid(format!("precision must be 'double' or 'extended', got '{other}'")),
        };
        let cfg = RunConfig {
            precision,
            k_max: self.k_max.unwrap_or(d.k_max),
            grid: self.grid.unwrap_or(d.grid),
            profile_grid: self.profile_grid.unwrap_or(d.profile_grid),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            format: self.format.unwrap_or(d.format),
            output: self.output,
            seed: self.seed.unwrap_or(d.seed),
        };
        if !(cfg.tolerance > 0.0) {
            return invalid(format!("tolerance must be positive, got {}", cfg.tolerance));
        }
        if cfg.k_max == 0 {
            return invalid("k_max must be positive");
        }
        if cfg.grid < 8 || !cfg.grid.is_multiple_of(2) || cfg.profile_grid < 8 {
            return invalid("grid sizes must be at least 8 and the mode grid even");
        }
        Ok(cfg)
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Validation(msg.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: ConfigFile = toml::from_str("precision = \"extended\"\ndigits = 28\ngrid = 512\nformat = \"csv\"").unwrap();
        let flags = ConfigFile { grid: Some(256), ..Default::default() };
        let cfg = file.merge(flags).resolve().unwrap();
        assert_eq!(cfg.precision, Precision::Extended { digits: 28 });
        assert_eq!(cfg.grid, 256);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |s: &str| toml::from_str::<ConfigFile>(s).map_err(|_| ()).and_then(|f| f.resolve().map_err(|_| ()));
        assert!(bad("precision = \"extended\"\ndigits = 20").is_err());
        assert!(bad("precision = \"extended\"\ndigits = 40").is_err());
        assert!(bad("tolerance = -1.0").is_err());
        assert!(bad("colour = 3").is_err());
        assert!(bad("precision = \"quad\"").is_err());
        assert!(bad("").is_ok());
    }
}
