//! Flat `key = value` run configuration.
//!
//! Values are resolved in three layers: built-in defaults, then a config
//! file, then command-line flags. Every key is known up front; anything
//! else is rejected with the key named.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use fogsim_core::sagnac::{GyroGeometry, Squeezing, DEFAULT_RADIUS_M};
use fogsim_core::{DesignRegistry, FogDesign, Variant};

use crate::error::CliError;

/// `(key, default, description)`. An empty default means "unset".
pub const KEYS: &[(&str, &str, &str)] = &[
    ("wavelength_nm", "1550", "laser vacuum wavelength (nm)"),
    (
        "omega",
        "",
        "optical angular frequency (rad/s); overrides wavelength_nm",
    ),
    ("radius_m", "0.05", "coil radius (m)"),
    ("area_m2", "", "projected loop area (m²); defaults to πr²"),
    ("b", "0.5", "fiber loss (dB/km)"),
    ("design", "E", "design name: C, S, D, P, E or a long alias"),
    ("m", "1", "interferometer count M"),
    ("n_v", "1", "laser photons per interferometer"),
    ("squeeze_db", "10", "squeezing level in dB, or inf"),
    ("n_s", "", "total squeezed photons; overrides squeeze_db"),
    (
        "eta",
        "",
        "transmissivity; derived from length_km when unset",
    ),
    (
        "t",
        "",
        "time factor T (s); derived from length_km when unset",
    ),
    ("length_km", "", "total fiber length (km)"),
    ("phi", "0", "conjugate phase for simulate (rad)"),
    (
        "fix_length",
        "",
        "optimize: fixed total length (km), search over M",
    ),
    (
        "energy",
        "",
        "optimize: total photon budget N for the laser/squeezer split",
    ),
    ("m_max", "64", "optimize: largest M in the integer search"),
    ("samples", "0", "simulate: Monte-Carlo homodyne samples"),
    ("seed", "1", "simulate: sampling seed"),
    ("output", "", "csv or json; commands pick a default"),
    ("out", "", "output file; stdout when unset"),
    ("fig3a_n_min", "1", "figure 3a: smallest photon number"),
    ("fig3a_n_max", "1e6", "figure 3a: largest photon number"),
    ("fig3a_points", "61", "figure 3a: log-spaced grid points"),
    ("fig3b_l_min", "0.5", "figure 3b: shortest fiber (km)"),
    ("fig3b_l_max", "40", "figure 3b: longest fiber (km)"),
    ("fig3b_points", "80", "figure 3b: grid points"),
    (
        "fig3b_sigma_max",
        "40",
        "figure 3b: squeezing at the end of the optimum curve (dB)",
    ),
    ("fig_sigma_db", "10", "figures 5 and 6: squeezer level (dB)"),
    (
        "fig5_counts",
        "1,2,4,8,16",
        "figure 5: interferometer counts",
    ),
    (
        "fig6_lengths",
        "5,15,30",
        "figure 6: total fiber lengths (km)",
    ),
    ("fig6_m_max", "16", "figure 6: largest M"),
    ("fig7_length_km", "15", "figure 7: total fiber length (km)"),
    (
        "fig7_sigma_max",
        "20",
        "figure 7: largest squeezing level (dB)",
    ),
    ("fig7_sigma_points", "21", "figure 7: squeezing grid points"),
    ("fig7_m_max", "16", "figure 7: largest M"),
];

#[derive(Debug, Clone)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
    explicit: BTreeSet<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            values: KEYS
                .iter()
                .map(|(k, v, _)| (k.to_string(), v.to_string()))
                .collect(),
            explicit: BTreeSet::new(),
        }
    }
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = normalize(key);
        if !self.values.contains_key(&key) {
            return Err(CliError::Config(format!(
                "unknown configuration key '{key}'"
            )));
        }
        self.values.insert(key.clone(), value.trim().to_string());
        self.explicit.insert(key);
        Ok(())
    }

    /// Applies a config file body. `#` starts a comment; blank lines are
    /// skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "line {}: expected key = value, got '{line}'",
                    n + 1
                ))
            })?;
            self.set(key, value)
                .map_err(|e| CliError::Config(format!("line {}: {}", n + 1, e.message())))?;
        }
        Ok(())
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.values.get(key).is_some_and(|v| !v.is_empty())
    }

    pub fn is_explicit(&self, key: &str) -> bool {
        self.explicit.contains(key)
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("configuration key '{key}' is not declared"))
    }

    fn parse<T: FromStr>(&self, key: &str, what: &str) -> Result<T, CliError> {
        let raw = self.raw(key);
        raw.parse()
            .map_err(|_| CliError::Config(format!("{key}: expected {what}, got '{raw}'")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v: f64 = self.parse(key, "a number")?;
        if v.is_nan() {
            return Err(CliError::Config(format!("{key}: NaN is not allowed")));
        }
        Ok(v)
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        if self.is_set(key) {
            self.f64(key).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn positive(&self, key: &str) -> Result<f64, CliError> {
        let v = self.f64(key)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(CliError::Config(format!(
                "{key}: must be positive and finite, got {v}"
            )));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.parse(key, "a nonnegative integer")
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        self.parse(key, "a nonnegative integer")
    }

    pub fn list_f64(&self, key: &str) -> Result<Vec<f64>, CliError> {
        self.raw(key)
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    CliError::Config(format!(
                        "{key}: expected a comma-separated list, got '{}'",
                        self.raw(key)
                    ))
                })
            })
            .collect()
    }

    pub fn list_usize(&self, key: &str) -> Result<Vec<usize>, CliError> {
        self.raw(key)
            .split(',')
            .map(|s| {
                s.trim().parse::<usize>().map_err(|_| {
                    CliError::Config(format!(
                        "{key}: expected a comma-separated list, got '{}'",
                        self.raw(key)
                    ))
                })
            })
            .collect()
    }

    pub fn design(&self) -> Result<&'static dyn FogDesign, CliError> {
        DesignRegistry::builtin()
            .get(self.raw("design"))
            .map_err(|e| CliError::Config(format!("design: {e}")))
    }

    pub fn variant(&self) -> Result<Variant, CliError> {
        Ok(self.design()?.variant())
    }

    /// Squeezing for the configured design; designs without a squeezer get
    /// none regardless of the squeezing keys.
    pub fn squeezing(&self) -> Result<Squeezing, CliError> {
        if !self.variant()?.uses_squeezing() {
            return Ok(Squeezing::NONE);
        }
        self.squeezing_level()
    }

    /// The configured squeezing level, independent of the design.
    pub fn squeezing_level(&self) -> Result<Squeezing, CliError> {
        if self.is_set("n_s") {
            if self.is_explicit("squeeze_db") {
                return Err(CliError::Config(
                    "n_s and squeeze_db are mutually exclusive".into(),
                ));
            }
            let n = self.f64("n_s")?;
            return Squeezing::photons(n).map_err(|e| CliError::Config(format!("n_s: {e}")));
        }
        self.raw("squeeze_db")
            .parse()
            .map_err(|e| CliError::Config(format!("squeeze_db: {e}")))
    }

    pub fn geometry(&self) -> Result<GyroGeometry, CliError> {
        let radius = if self.is_set("radius_m") {
            self.positive("radius_m")?
        } else {
            DEFAULT_RADIUS_M
        };
        let base = if self.is_set("omega") {
            let omega = self.positive("omega")?;
            GyroGeometry::new(omega, radius, std::f64::consts::PI * radius * radius)
        } else {
            GyroGeometry::from_wavelength(self.positive("wavelength_nm")? * 1e-9, radius)
        }
        .map_err(|e| CliError::Config(e.to_string()))?;
        if self.is_set("area_m2") {
            GyroGeometry::new(base.omega, radius, self.positive("area_m2")?)
                .map_err(|e| CliError::Config(e.to_string()))
        } else {
            Ok(base)
        }
    }

    /// `key=value` pairs of every resolved setting, sorted by key.
    pub fn summary(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\n design = D \n\nm=4 # trailing\nsqueeze-db = inf\n")
            .unwrap();
        assert_eq!(cfg.variant().unwrap(), Variant::D);
        assert_eq!(cfg.usize("m").unwrap(), 4);
        assert_eq!(cfg.squeezing().unwrap(), Squeezing::NONE);
        cfg.set("design", "entangled").unwrap();
        assert_eq!(cfg.squeezing().unwrap(), Squeezing::Infinite);
    }

    #[test]
    fn unknown_key_is_named() {
        let mut cfg = RunConfig::default();
        let err = cfg.apply_text("b = 0.5\nlenght_km = 3\n").unwrap_err();
        assert!(err.message().contains("lenght_km") && err.message().contains("line 2"));
        assert!(cfg.apply_text("just words").is_err());
    }

    #[test]
    fn typed_access_names_the_field() {
        let mut cfg = RunConfig::default();
        cfg.set("m", "four").unwrap();
        assert!(cfg.usize("m").unwrap_err().message().starts_with("m:"));
        cfg.set("b", "-1").unwrap();
        assert!(cfg.positive("b").unwrap_err().message().starts_with("b:"));
    }

    #[test]
    fn squeezing_sources_conflict() {
        let mut cfg = RunConfig::default();
        cfg.set("n_s", "2").unwrap();
        assert_eq!(cfg.squeezing().unwrap(), Squeezing::Photons(2.0));
        cfg.set("squeeze_db", "3").unwrap();
        assert!(cfg.squeezing().is_err());
    }

    #[test]
    fn summary_is_sorted_and_complete() {
        let s = RunConfig::default().summary();
        assert_eq!(s.split(' ').count(), KEYS.len());
        assert!(s.starts_with("area_m2= b=0.5"));
    }
}
