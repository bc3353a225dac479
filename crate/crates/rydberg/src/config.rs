//! Parameter files: TOML with one `[[channel]]` table per orbital momentum.
//!
//! ```toml
//! schema_version = 1
//! element_symbol = "Rb"
//! z = 37
//! alpha_c = 9.076            # a_B^4 Ry
//! spin_orbit_scale = 2.0     # optional, default 1
//! provenance = "..."         # optional
//!
//! [[channel]]
//! l = 0
//! a1 = 3.69628474            # a_B^-1
//! a2 = 1.64915255
//! a3 = -9.86069196
//! a4 = 0.19579987
//! r_c = 1.66242117           # a_B
//! r_so = 0.0                 # optional, default 0
//! a3_scale = 1.0             # optional, default 1
//! ```
//!
//! Channels must be listed in order `l = 0, 1, 2, ...`; `l = 0..=3` are required.
//! The last channel also serves every higher `l`.

use std::fs;
use std::path::{Path, PathBuf};

use rydberg_core::{ChannelParams, PotentialParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

pub const RUBIDIUM_TOML: &str = include_str!("../data/rubidium.toml");
pub const HYDROGEN_TOML: &str = include_str!("../data/hydrogen.toml");
pub const CESIUM_TOML: &str = include_str!("../data/cesium.toml");

/// `r_so(l) / r_c(l)` for rubidium, `l = 1, 2, 3`.
const RB_CUTOFF_RATIOS: [f64; 3] = [0.0286294, 0.0585394, 0.135464];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: invalid field `{field}`: {reason}")]
    Schema {
        origin: String,
        field: String,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub schema_version: u32,
    pub element_symbol: String,
    pub z: u32,
    pub alpha_c: f64,
    #[serde(default = "one")]
    pub spin_orbit_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub channel: Vec<ChannelEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelEntry {
    pub l: u32,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub r_c: f64,
    #[serde(default)]
    pub r_so: f64,
    #[serde(default = "one")]
    pub a3_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl ParamsFile {
    pub fn from_params(params: &PotentialParams, provenance: Option<&str>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            element_symbol: params.element_symbol.clone(),
            z: params.z,
            alpha_c: params.alpha_c,
            spin_orbit_scale: params.spin_orbit_scale,
            provenance: provenance.map(str::to_owned),
            channel: params
                .channels
                .iter()
                .enumerate()
                .map(|(l, c)| ChannelEntry {
                    l: l as u32,
                    a1: c.a1,
                    a2: c.a2,
                    a3: c.a3,
                    a4: c.a4,
                    r_c: c.r_c,
                    r_so: c.r_so,
                    a3_scale: c.a3_scale,
                })
                .collect(),
        }
    }

    /// Validated parameter record.
    pub fn into_params(self, origin: &str) -> Result<PotentialParams, ConfigError> {
        let schema = |field: String, reason: String| ConfigError::Schema {
            origin: origin.to_owned(),
            field,
            reason,
        };
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version".into(),
                format!("expected {SCHEMA_VERSION}, found {}", self.schema_version),
            ));
        }
        for (k, c) in self.channel.iter().enumerate() {
            if c.l as usize != k {
                return Err(schema(
                    format!("channel[{k}].l"),
                    format!("channels must be listed as l = 0, 1, 2, ...; found l = {}", c.l),
                ));
            }
        }
        let params = PotentialParams {
            element_symbol: self.element_symbol,
            z: self.z,
            alpha_c: self.alpha_c,
            spin_orbit_scale: self.spin_orbit_scale,
            channels: self
                .channel
                .into_iter()
                .map(|c| ChannelParams {
                    a1: c.a1,
                    a2: c.a2,
                    a3: c.a3,
                    a4: c.a4,
                    r_c: c.r_c,
                    r_so: c.r_so,
                    a3_scale: c.a3_scale,
                })
                .collect(),
        };
        match params.validate() {
            Ok(()) => Ok(params),
            Err(rydberg_core::Error::Schema { field, reason }) => Err(schema(field, reason)),
            Err(e) => Err(schema("params".into(), e.to_string())),
        }
    }
}

/// Parses and validates a parameter file held in memory.
pub fn parse_params(text: &str, origin: &str) -> Result<PotentialParams, ConfigError> {
    let file: ParamsFile = toml::from_str(text).map_err(|e| ConfigError::Parse {
        origin: origin.to_owned(),
        message: e.to_string(),
    })?;
    let params = file.into_params(origin)?;
    for w in cutoff_warnings(&params) {
        log::warn!("{origin}: {w}");
    }
    Ok(params)
}

pub fn load_params(path: &Path) -> Result<PotentialParams, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_params(&text, &path.display().to_string())
}

/// Serializes `params` in the file schema; [`parse_params`] inverts it exactly.
pub fn write_params(params: &PotentialParams, provenance: Option<&str>) -> String {
    toml::to_string(&ParamsFile::from_params(params, provenance)).expect("parameter record serializes")
}

/// Built-in parameter sets by element symbol.
pub fn builtin_params(symbol: &str) -> Option<PotentialParams> {
    let text = match symbol {
        "Rb" => RUBIDIUM_TOML,
        "H" => HYDROGEN_TOML,
        "Cs" => CESIUM_TOML,
        _ => return None,
    };
    Some(parse_params(text, &format!("builtin:{symbol}")).expect("embedded parameter files are valid"))
}

/// Rubidium files whose `r_c(l)` deviates by more than 0.1% from
/// `r_so(l) / ratio(l)`, one message per channel.
pub fn cutoff_warnings(params: &PotentialParams) -> Vec<String> {
    if params.element_symbol != "Rb" {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (k, ratio) in RB_CUTOFF_RATIOS.iter().enumerate() {
        let l = k + 1;
        let Some(ch) = params.channels.get(l) else {
            continue;
        };
        let expected = ch.r_so / ratio;
        if ((ch.r_c - expected) / expected).abs() > 1e-3 {
            out.push(format!(
                "r_c({l}) = {} differs from r_so/{ratio} = {expected} by more than 0.1%",
                ch.r_c
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_sets_load() {
        let rb = builtin_params("Rb").unwrap();
        assert_eq!(rb.z, 37);
        assert_eq!(rb.channels.len(), 5);
        assert_eq!(rb.channels[3].a3_scale, 0.983431);
        assert_eq!(
            rb.channels.iter().map(|c| c.r_so).collect::<Vec<_>>(),
            [0.0, 0.043, 0.285, 0.650, 0.0]
        );
        assert!(cutoff_warnings(&rb).is_empty());
        assert!(builtin_params("H").is_some());
        assert!(builtin_params("Cs").is_some());
        assert!(builtin_params("Fr").is_none());
    }

    #[test]
    fn hydrogen_file_is_coulomb() {
        let h = builtin_params("H").unwrap();
        for k in 1..=100 {
            let r = 10.0 * f64::from(k);
            assert_eq!(rydberg_core::potential::effective_charge(r, 0, &h), 1.0);
        }
    }

    #[test]
    fn rejects_spin_orbit_cutoff_for_s() {
        let text = RUBIDIUM_TOML.replacen("r_c = 1.66242117", "r_c = 1.66242117\nr_so = 0.1", 1);
        match parse_params(&text, "test") {
            Err(ConfigError::Schema { field, .. }) => assert_eq!(field, "channel[0].r_so"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_and_gaps() {
        let text = RUBIDIUM_TOML.replacen("z = 37", "z = 37\ncolour = 1", 1);
        assert!(matches!(parse_params(&text, "t"), Err(ConfigError::Parse { .. })));
        let text = RUBIDIUM_TOML.replacen("l = 2", "l = 5", 1);
        assert!(matches!(parse_params(&text, "t"), Err(ConfigError::Schema { .. })));
        let short: String = HYDROGEN_TOML
            .split("[[channel]]")
            .take(4)
            .collect::<Vec<_>>()
            .join("[[channel]]");
        match parse_params(&short, "t") {
            Err(ConfigError::Schema { field, .. }) => assert_eq!(field, "channel[3]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_params("z = ", "t"), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn cutoff_ratio_warning() {
        let mut rb = builtin_params("Rb").unwrap();
        rb.channels[2].r_c *= 1.01;
        let w = cutoff_warnings(&rb);
        assert_eq!(w.len(), 1);
        assert!(w[0].starts_with("r_c(2)"));
    }
}
