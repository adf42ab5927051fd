//! Structured verdicts. Every failing record carries concrete counterexamples
//! in element indices; witnesses of success are kept where they are small.

use serde::Serialize;
use serde_json::Value;

/// Listed counterexamples per record. The full count is in `violations`.
pub const MAX_LISTED: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub counterexamples: Vec<Value>,
    pub violations: u64,
    pub notes: Vec<String>,
    pub elapsed_ms: Option<u64>,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            anchor: anchor.into(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            counterexamples: Vec::new(),
            violations: 0,
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn violation(&mut self, counterexample: Value) {
        self.verdict = Verdict::Fail;
        self.violations += 1;
        if self.counterexamples.len() < MAX_LISTED {
            self.counterexamples.push(counterexample);
        }
    }

    pub fn witness(&mut self, witness: Value) {
        if self.witnesses.len() < MAX_LISTED {
            self.witnesses.push(witness);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Skipped;
        self.notes.push(reason.into());
        self
    }

    /// Merges another record's findings into this one.
    pub fn absorb(&mut self, other: CheckRecord) {
        if other.verdict.is_failure() {
            self.verdict = Verdict::Fail;
        }
        self.violations += other.violations;
        for cx in other.counterexamples {
            if self.counterexamples.len() < MAX_LISTED {
                self.counterexamples.push(cx);
            }
        }
        for w in other.witnesses {
            self.witness(w);
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict.is_failure()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupReport {
    pub group: String,
    pub verdict: Verdict,
    pub records: Vec<CheckRecord>,
}

impl GroupReport {
    pub fn new(group: impl Into<String>, records: Vec<CheckRecord>) -> Self {
        let verdict = if records.iter().any(CheckRecord::failed) {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        Self {
            group: group.into(),
            verdict,
            records,
        }
    }

    pub fn record(&self, check: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == check)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: Value,
    pub groups: Vec<GroupReport>,
    pub summary: Verdict,
}

impl VerificationReport {
    pub fn new(subject: Value, groups: Vec<GroupReport>) -> Self {
        let summary = if groups.iter().any(|g| g.verdict.is_failure()) {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        Self {
            subject,
            groups,
            summary,
        }
    }

    pub fn group(&self, name: &str) -> Option<&GroupReport> {
        self.groups.iter().find(|g| g.group == name)
    }

    pub fn record(&self, check: &str) -> Option<&CheckRecord> {
        self.groups.iter().find_map(|g| g.record(check))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
