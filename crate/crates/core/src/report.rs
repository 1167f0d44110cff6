//! Machine-checkable verdicts shared by the certificate and homology layers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One verified claim: what was checked, with which parameters, whether it
/// holds, and the witnesses or counterexamples found. Parameters and
/// witnesses use ordered containers so serialized reports are byte-stable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateReport {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub pass: bool,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub timing_ms: u128,
}

impl CertificateReport {
    pub fn new(name: impl Into<String>) -> Self {
        CertificateReport {
            name: name.into(),
            parameters: BTreeMap::new(),
            pass: true,
            witnesses: Vec::new(),
            notes: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    /// Records a failed check together with its witness.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.pass = false;
        self.witnesses.push(witness.into());
    }
}
