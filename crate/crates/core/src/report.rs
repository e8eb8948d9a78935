//! Findings produced by the verification routines. A failed check always
//! carries a witness small enough to check by hand.

use std::fmt;

use serde::Serialize;

use crate::exact::{Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A leading principal minor that is not a positive rational.
    Minor { size: usize, value: Scalar, gram: Matrix },
    /// Vectors exhibiting the failure (e.g. a vector mapped outside a step).
    Vectors { vectors: Vec<Vec<Scalar>> },
    /// A matrix identity `lhs = rhs` that does not hold.
    Identity { identity: String, lhs: Matrix, rhs: Matrix },
    /// A dimension count that came out wrong.
    Dimensions { expected: usize, found: usize },
    /// Free-form witness for conditions that are not a single object.
    Text { text: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub detail: String,
    pub witness: Witness,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)?;
        match &self.witness {
            Witness::Minor { size, value, .. } => write!(f, " [minor {size} = {value}]"),
            Witness::Vectors { vectors } => {
                let shown: Vec<String> = vectors
                    .iter()
                    .map(|v| {
                        let parts: Vec<String> = v.iter().map(Scalar::to_string).collect();
                        format!("({})", parts.join(", "))
                    })
                    .collect();
                write!(f, " [{}]", shown.join("; "))
            }
            Witness::Identity { identity, .. } => write!(f, " [{identity}]"),
            Witness::Dimensions { expected, found } => {
                write!(f, " [expected dim {expected}, found {found}]")
            }
            Witness::Text { text } => write!(f, " [{text}]"),
        }
    }
}

/// Accumulates findings; a report passes iff it has none.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub findings: Vec<Finding>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn fail(&mut self, check: impl Into<String>, detail: impl Into<String>, witness: Witness) {
        self.findings.push(Finding { check: check.into(), detail: detail.into(), witness });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Appends the findings of `other`, prefixing their check names.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut f in other.findings {
            f.check = format!("{prefix}/{}", f.check);
            self.findings.push(f);
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
    }

    pub fn first(&self) -> Option<&Finding> {
        self.findings.first()
    }
}

pub(crate) fn identity_witness(identity: &str, lhs: Matrix, rhs: Matrix) -> Witness {
    Witness::Identity { identity: identity.to_string(), lhs, rhs }
}
