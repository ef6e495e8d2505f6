//! Curve emission: CSV with a `#`-prefixed metadata header, or JSON for
//! programmatic consumers. Output is deterministic for a fixed
//! configuration digest.

use serde::Serialize;
use sha2::{Digest, Sha256};
use vendinfo::SolverConfig;

/// A table of computed curve points plus the metadata identifying how it
/// was produced. Cells are `None` when the requested point is infeasible.
#[derive(Debug, Clone, Serialize)]
pub struct CurveEmission {
    pub instance: String,
    pub tool_version: String,
    pub config_digest: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CurveEmission {
    pub fn new(instance: &str, cfg: &SolverConfig, columns: &[&str]) -> Self {
        Self {
            instance: instance.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_digest: config_digest(instance, cfg),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// `true` if any cell carries the infeasible marker.
    pub fn has_infeasible(&self) -> bool {
        self.rows.iter().flatten().any(|c| c.is_none())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# instance: {}\n", self.instance));
        out.push_str(&format!("# tool: vendinfo {}\n", self.tool_version));
        out.push_str(&format!("# config: sha256:{}\n", self.config_digest));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Some(v) => format!("{v}"),
                    None => "infeasible".to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("emission serialization cannot fail")
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_csv()
        }
    }
}

/// Digest over the instance name and the solver configuration, so files
/// produced under different settings are distinguishable.
fn config_digest(instance: &str, cfg: &SolverConfig) -> String {
    let mut h = Sha256::new();
    h.update(instance.as_bytes());
    h.update(format!("{cfg:?}").as_bytes());
    let bytes = h.finalize();
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
