use serde::Serialize;

use crate::methods::ShuOsherRep;

/// JSON certification report.
///
/// `Ctilde` is `null` when the coefficient is effectively unbounded (still
/// feasible at the bracket cap) or was not computed.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub method: String,
    pub r_queried: f64,
    pub feasible: bool,
    pub certificate: Option<ShuOsherRep>,
    #[serde(rename = "Ctilde")]
    pub ctilde: Option<f64>,
    pub tolerance: f64,
    /// `|C̃ - r|` for the downwind family with parameter `r`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_check: Option<f64>,
}

impl CertificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}
