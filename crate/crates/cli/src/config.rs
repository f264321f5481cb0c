//! Configuration resolution: CLI flags > config file (key=value) > defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::{usage_error, CliResult};

pub const DEFAULT_GAMMA: f64 = 0.95;
pub const DEFAULT_ALPHA_DB_KM: f64 = 0.2;
pub const DEFAULT_XI: f64 = 0.004;
pub const DEFAULT_LENGTH_KM: f64 = 25.0;

/// Parsed key=value config file. `#`-prefixed lines and blanks are ignored;
/// unknown keys are rejected so typos do not silently fall back to defaults.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

const KNOWN_KEYS: [&str; 6] = ["gamma", "alpha", "xi", "length_km", "threads", "out"];

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| crate::CliError::Usage(format!("cannot read config {path:?}: {e}")))?;
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return usage_error(format!("config line {} is not key=value: {line:?}", lineno + 1));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return usage_error(format!(
                    "unknown config key {key:?} (known: {})",
                    KNOWN_KEYS.join(", ")
                ));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn float(&self, key: &str) -> CliResult<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| crate::CliError::Usage(format!("config key {key} = {raw:?} is not a number"))),
        }
    }

    pub fn usize(&self, key: &str) -> CliResult<Option<usize>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| crate::CliError::Usage(format!("config key {key} = {raw:?} is not an integer"))),
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.values.get(key).map(PathBuf::from)
    }
}

/// Fully resolved run settings, after applying the precedence chain.
#[derive(Debug, Clone)]
pub struct Settings {
    pub gamma: f64,
    pub alpha_db_km: f64,
    pub xi: f64,
    pub length_km: f64,
    pub out_dir: PathBuf,
    pub threads: usize,
}

impl Settings {
    pub fn resolve(
        file: &FileConfig,
        gamma_flag: Option<f64>,
        out_flag: Option<PathBuf>,
        threads_flag: Option<usize>,
    ) -> CliResult<Self> {
        let gamma = gamma_flag
            .or(file.float("gamma")?)
            .unwrap_or(DEFAULT_GAMMA);
        if !(gamma > 0.0 && gamma <= 1.0) {
            return usage_error(format!("gamma = {gamma} outside (0, 1]"));
        }
        let alpha_db_km = file.float("alpha")?.unwrap_or(DEFAULT_ALPHA_DB_KM);
        if alpha_db_km < 0.0 {
            return usage_error(format!("alpha = {alpha_db_km} must be non-negative"));
        }
        let xi = file.float("xi")?.unwrap_or(DEFAULT_XI);
        if xi < 0.0 {
            return usage_error(format!("xi = {xi} must be non-negative"));
        }
        let length_km = file.float("length_km")?.unwrap_or(DEFAULT_LENGTH_KM);
        if length_km < 0.0 {
            return usage_error(format!("length_km = {length_km} must be non-negative"));
        }
        let out_dir = out_flag
            .or_else(|| file.path("out"))
            .unwrap_or_else(|| PathBuf::from("out"));
        let threads = crate::runner::thread_count(threads_flag, file.usize("threads")?);
        Ok(Settings {
            gamma,
            alpha_db_km,
            xi,
            length_km,
            out_dir,
            threads,
        })
    }

    pub fn protocol(&self) -> cvmdi_core::experiments::Protocol {
        cvmdi_core::experiments::Protocol {
            gamma: self.gamma,
            attenuation_db_km: self.alpha_db_km,
            bob_squeeze_db: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(name: &str, content: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!("cvmdi-cfg-{}-{name}.conf", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn precedence_flag_over_file_over_default() {
        let path = write_tmp("precedence", "gamma = 0.9\n# comment\nxi=0.002\n");
        let file = FileConfig::load(&path).unwrap();
        let s = Settings::resolve(&file, None, None, Some(1)).unwrap();
        assert_eq!(s.gamma, 0.9);
        assert_eq!(s.xi, 0.002);
        assert_eq!(s.length_km, DEFAULT_LENGTH_KM);
        let s = Settings::resolve(&file, Some(0.8), None, Some(1)).unwrap();
        assert_eq!(s.gamma, 0.8);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let path = write_tmp("unknown-key", "gama = 0.9\n");
        assert!(matches!(FileConfig::load(&path), Err(crate::CliError::Usage(_))));
        std::fs::remove_file(path).ok();
    }
}
