//! The JSON fixture format.
//!
//! A file holds named structures and a list of checks against them. Scalars
//! are strings in the canonical `a/b+c/d*i` grammar, vectors are arrays of
//! scalars and matrices are arrays of rows. Maps are ordered, so a canonical
//! file is exactly `to_canonical_string(parse(file))`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Scalar, Subspace};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::hodge::SesquilinearForm;
use crate::nilpotent::Grading;

pub const FORMAT_VERSION: u32 = 1;

pub type Vector = Vec<Scalar>;
pub type Rows = Vec<Vec<Scalar>>;
/// Filtration or grading steps: index to spanning vectors.
pub type Steps = BTreeMap<i64, Vec<Vector>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default)]
    pub structures: BTreeMap<String, Entry>,
    #[serde(default)]
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingData {
    pub gram: Rows,
    pub twist: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiPiece {
    pub bidegree: [i64; 2],
    pub span: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Entry {
    Matrix {
        rows: Rows,
    },
    Subspace {
        dim: usize,
        span: Vec<Vector>,
    },
    Pairing(PairingData),
    Pure {
        dim: usize,
        weight: i64,
        #[serde(deserialize_with = "de_steps")]
        fprime: Steps,
        #[serde(deserialize_with = "de_steps")]
        fsecond: Steps,
    },
    Mixed {
        dim: usize,
        #[serde(deserialize_with = "de_steps")]
        fprime: Steps,
        #[serde(deserialize_with = "de_steps")]
        fsecond: Steps,
        #[serde(deserialize_with = "de_steps")]
        weightfil: Steps,
    },
    Sl2 {
        dim: usize,
        central_weight: i64,
        #[serde(deserialize_with = "de_steps")]
        fprime: Steps,
        #[serde(deserialize_with = "de_steps")]
        fsecond: Steps,
        #[serde(deserialize_with = "de_steps")]
        grading: Steps,
        /// The lowering operator; `X` and `H` are completed from the grading.
        lowering: Rows,
    },
    Bisl2 {
        dim: usize,
        central_weight: i64,
        #[serde(deserialize_with = "de_steps")]
        fprime: Steps,
        #[serde(deserialize_with = "de_steps")]
        fsecond: Steps,
        bigrading: Vec<BiPiece>,
        lowering1: Rows,
        lowering2: Rows,
    },
    HodgeLefschetz {
        dim: usize,
        central_weight: i64,
        #[serde(deserialize_with = "de_steps")]
        fprime: Steps,
        #[serde(deserialize_with = "de_steps")]
        fsecond: Steps,
        n: Rows,
    },
    Cone {
        dim: usize,
        #[serde(deserialize_with = "de_steps")]
        fprime: Steps,
        #[serde(deserialize_with = "de_steps")]
        fsecond: Steps,
        #[serde(deserialize_with = "de_steps")]
        weightfil: Steps,
        pairing: PairingData,
        generators: Vec<Rows>,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_budget")]
        sample_budget: usize,
    },
}

/// Inside the tagged `Entry` enum map keys reach us as strings, so integer
/// keys are parsed by hand.
fn de_steps<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Steps, D::Error> {
    let raw = BTreeMap::<String, Vec<Vector>>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            let k = k.parse::<i64>().map_err(|_| serde::de::Error::custom(format!("index {k:?} is not an integer")))?;
            Ok((k, v))
        })
        .collect()
}

fn default_budget() -> usize {
    crate::sl2hodge::DEFAULT_SAMPLE_BUDGET
}

impl Entry {
    pub fn kind(&self) -> &'static str {
        match self {
            Entry::Matrix { .. } => "matrix",
            Entry::Subspace { .. } => "subspace",
            Entry::Pairing(_) => "pairing",
            Entry::Pure { .. } => "pure",
            Entry::Mixed { .. } => "mixed",
            Entry::Sl2 { .. } => "sl2",
            Entry::Bisl2 { .. } => "bisl2",
            Entry::HodgeLefschetz { .. } => "hodge_lefschetz",
            Entry::Cone { .. } => "cone",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A guaranteed property failed on valid input, or two equivalent
    /// criteria disagreed.
    Alarm,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Alarm => "alarm",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub op: String,
    #[serde(default)]
    pub args: BTreeMap<String, Value>,
    pub expect: Verdict,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    pub fn new(op: &str, args: &[(&str, Value)], expect: Verdict) -> Check {
        Check {
            op: op.into(),
            args: args.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect(),
            expect,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: &str) -> Check {
        self.note = note.into();
        self
    }
}

pub fn parse_fixture(text: &str) -> Result<FixtureFile> {
    let f: FixtureFile = serde_json::from_str(text).map_err(|e| {
        HodgeError::Fixture(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    if f.format_version != FORMAT_VERSION {
        return Err(HodgeError::Fixture(format!("unsupported format_version {}", f.format_version)));
    }
    Ok(f)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_canonical_string(f: &FixtureFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("fixture serializes");
    s.push('\n');
    s
}

// conversions between file data and library types

pub fn matrix(rows: &Rows, cols: usize) -> Result<Matrix> {
    Matrix::from_rows_with_cols(rows.clone(), cols)
}

pub fn square(rows: &Rows) -> Result<Matrix> {
    let m = matrix(rows, rows.len())?;
    if !m.is_square() {
        return Err(HodgeError::DimensionMismatch("matrix is not square".into()));
    }
    Ok(m)
}

pub fn rows_of(m: &Matrix) -> Rows {
    m.row_vecs()
}

pub fn subspace(dim: usize, span: &[Vector]) -> Result<Subspace> {
    Subspace::from_vectors(dim, span)
}

fn step_map(dim: usize, steps: &Steps) -> Result<BTreeMap<i64, Subspace>> {
    steps.iter().map(|(&k, span)| Ok((k, subspace(dim, span)?))).collect()
}

pub fn decreasing(dim: usize, steps: &Steps) -> Result<DecreasingFiltration> {
    DecreasingFiltration::from_steps(dim, step_map(dim, steps)?)
}

pub fn increasing(dim: usize, steps: &Steps) -> Result<IncreasingFiltration> {
    IncreasingFiltration::from_steps(dim, step_map(dim, steps)?)
}

pub fn grading(dim: usize, steps: &Steps) -> Result<Grading> {
    Grading::new(dim, step_map(dim, steps)?)
}

pub fn pairing(p: &PairingData) -> Result<SesquilinearForm> {
    SesquilinearForm::new(square(&p.gram)?, p.twist)
}

pub fn pairing_data(s: &SesquilinearForm) -> PairingData {
    PairingData { gram: rows_of(&s.gram), twist: s.target_twist }
}

pub fn steps_of_decreasing(f: &DecreasingFiltration) -> Steps {
    f.jumps().iter().map(|(&k, s)| (k, s.basis_vectors())).collect()
}

pub fn steps_of_increasing(f: &IncreasingFiltration) -> Steps {
    f.jumps().iter().map(|(&k, s)| (k, s.basis_vectors())).collect()
}

pub fn steps_of_grading(g: &Grading) -> Steps {
    g.pieces().iter().map(|(&k, s)| (k, s.basis_vectors())).collect()
}
