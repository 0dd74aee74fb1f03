//! Flat `key = value` run configuration.
//!
//! ```text
//! # TMS reference rates
//! gamma_I_radps  = 0.41
//! gamma_II_radps = 0.20
//! J_hz           = 6.6
//! omega1_hz      = 21
//! n              = 12
//! t_start_s      = 0
//! t_end_s        = 1
//! samples        = 10001
//! ```
//!
//! `J` and `omega1` accept either a `_hz` key (multiplied by 2π on load) or a
//! `_radps` key, never both. Unknown or repeated keys are rejected.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::params::{ModelParams, TimeGrid};

const KNOWN_KEYS: [&str; 10] = [
    "gamma_I_radps",
    "gamma_II_radps",
    "J_hz",
    "J_radps",
    "omega1_hz",
    "omega1_radps",
    "n",
    "t_start_s",
    "t_end_s",
    "samples",
];

pub const DEFAULT_T_START: f64 = 0.0;
pub const DEFAULT_T_END: f64 = 1.0;
pub const DEFAULT_SAMPLES: usize = 10_001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: TimeGrid,
}

struct Entry {
    line: usize,
    value: String,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, Entry> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            let Some(&known) = KNOWN_KEYS.iter().find(|k| **k == key) else {
                return Err(Error::Config {
                    line,
                    msg: format!("unknown key `{key}`"),
                });
            };
            if entries.contains_key(known) {
                return Err(Error::Config {
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            entries.insert(
                known,
                Entry {
                    line,
                    value: value.trim().to_string(),
                },
            );
        }

        let gamma_i = take_f64(&entries, "gamma_I_radps")?.ok_or_else(|| missing("gamma_I_radps"))?;
        let gamma_ii =
            take_f64(&entries, "gamma_II_radps")?.ok_or_else(|| missing("gamma_II_radps"))?;
        let j = angular(&entries, "J")?.ok_or_else(|| missing("J_hz or J_radps"))?;
        let omega1 = angular(&entries, "omega1")?.unwrap_or(0.0);
        let n = take_usize(&entries, "n")?.ok_or_else(|| missing("n"))?;
        let t_start = take_f64(&entries, "t_start_s")?.unwrap_or(DEFAULT_T_START);
        let t_end = take_f64(&entries, "t_end_s")?.unwrap_or(DEFAULT_T_END);
        let samples = take_usize(&entries, "samples")?.unwrap_or(DEFAULT_SAMPLES);

        let params = ModelParams::new(gamma_i, gamma_ii, j, omega1, n).map_err(|e| Error::Config {
            line: 0,
            msg: e.to_string(),
        })?;
        let grid = TimeGrid::new(t_start, t_end, samples).map_err(|e| Error::Config {
            line: 0,
            msg: e.to_string(),
        })?;
        Ok(Self { params, grid })
    }

    /// Serializes with rad/s keys and 17 significant digits, so that
    /// `parse(to_text())` reproduces every float bit for bit.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let g = &self.grid;
        let mut out = String::new();
        for (key, value) in [
            ("gamma_I_radps", p.gamma_i),
            ("gamma_II_radps", p.gamma_ii),
            ("J_radps", p.j),
            ("omega1_radps", p.omega1),
        ] {
            let _ = writeln!(out, "{key} = {value:.16e}");
        }
        let _ = writeln!(out, "n = {}", p.n);
        let _ = writeln!(out, "t_start_s = {:.16e}", g.t_start);
        let _ = writeln!(out, "t_end_s = {:.16e}", g.t_end);
        let _ = writeln!(out, "samples = {}", g.samples);
        out
    }
}

fn missing(key: &str) -> Error {
    Error::Config {
        line: 0,
        msg: format!("missing required key `{key}`"),
    }
}

fn take_f64(entries: &BTreeMap<&str, Entry>, key: &str) -> Result<Option<f64>> {
    entries
        .get(key)
        .map(|e| {
            e.value.parse::<f64>().map_err(|_| Error::Config {
                line: e.line,
                msg: format!("`{key}` is not a number: `{}`", e.value),
            })
        })
        .transpose()
}

fn take_usize(entries: &BTreeMap<&str, Entry>, key: &str) -> Result<Option<usize>> {
    entries
        .get(key)
        .map(|e| {
            e.value.parse::<usize>().map_err(|_| Error::Config {
                line: e.line,
                msg: format!("`{key}` is not a non-negative integer: `{}`", e.value),
            })
        })
        .transpose()
}

fn angular(entries: &BTreeMap<&str, Entry>, stem: &str) -> Result<Option<f64>> {
    let hz_key = format!("{stem}_hz");
    let rad_key = format!("{stem}_radps");
    let hz = take_f64(entries, &hz_key)?;
    let rad = take_f64(entries, &rad_key)?;
    match (hz, rad) {
        (Some(_), Some(_)) => Err(Error::Config {
            line: entries[rad_key.as_str()].line,
            msg: format!("both `{hz_key}` and `{rad_key}` given"),
        }),
        (Some(f), None) => Ok(Some(TAU * f)),
        (None, r) => Ok(r),
    }
}
