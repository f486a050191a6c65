//! Audit records shared by every verification routine.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub identity_id: String,
    pub reference: String,
    pub status: Status,
    /// `"0"` on success, otherwise the first offending coordinates.
    pub max_abs_deviation: String,
}

impl AuditEntry {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub entries: Vec<AuditEntry>,
}

impl Audit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check; `deviation` is `None` when the identity holds.
    pub fn record(&mut self, id: impl Into<String>, reference: &str, deviation: Option<String>) {
        let (status, dev) = match deviation {
            None => (Status::Pass, "0".to_string()),
            Some(d) => (Status::Fail, d),
        };
        self.entries.push(AuditEntry { identity_id: id.into(), reference: reference.to_string(), status, max_abs_deviation: dev });
    }

    pub fn check(&mut self, id: impl Into<String>, reference: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.record(id, reference, if ok { None } else { Some(detail()) });
    }

    pub fn extend(&mut self, other: Audit) {
        self.entries.extend(other.entries);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(AuditEntry::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }

    pub fn first_failure(&self) -> Option<&AuditEntry> {
        self.failures().next()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by identity id, for deterministic output.
    pub fn sorted(mut self) -> Self {
        self.entries.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
        self
    }

    pub fn get(&self, id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.identity_id == id)
    }
}
