//! Machine-readable run reports (JSON, schema version 1).
//!
//! Every float is written with 17 significant digits so reports round-trip
//! bit-exactly and diff cleanly between runs.

use std::io;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Label attached to counts produced with a user-chosen depth.
pub const HEURISTIC_NOTE: &str = "heuristic depth, no a priori epsilon guarantee";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    /// Subcommand and arguments as given.
    pub command: Vec<String>,
    /// SHA-256 of the canonical serialization of the input graph.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swapped: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    /// `"epsilon"` or `"heuristic"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ln_z: Option<f64>,
    /// Exact `Z` as a decimal string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ln_z_exact: Option<f64>,
    /// `|Ẑ/Z − 1|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_error: Option<f64>,
    /// Largest `|φ(R̂) − φ(R)|` over roots.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_phi_error: Option<f64>,
    /// Largest `|R̂ − R|` over roots.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios_in_range: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_interior: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_base: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_root_interior: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_envelope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// The only field expected to differ between identical runs.
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command,
            ..RunReport::default()
        }
    }
}

/// Compact JSON formatter writing floats as `d.dddddddddddddddde±x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes any value with [`Sig17Formatter`].
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}
