use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    adjunction, check_sl2_hodge, check_sl2_polarization, primitive_polarization, splitting_failure,
    structure_on, Sl2HodgeData,
};
use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Subspace};
use crate::filtration::DecreasingFiltration;
use crate::hodge::{check_decreasing_map, check_pure, SesquilinearForm};
use crate::nilpotent::{Grading, Sl2Triple};
use crate::report::{identity_witness, CheckReport, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiSl2HodgeData {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    pub central_weight: i64,
    /// `H_{i,j}`: the `i`-eigenspace of `H₁` meets the `j`-eigenspace of `H₂`.
    pub bigrading: BTreeMap<(i64, i64), Subspace>,
    pub triple1: Sl2Triple,
    pub triple2: Sl2Triple,
}

impl BiSl2HodgeData {
    pub fn dim(&self) -> usize {
        self.fprime.ambient_dim()
    }

    pub fn piece(&self, i: i64, j: i64) -> Subspace {
        self.bigrading.get(&(i, j)).cloned().unwrap_or_else(|| Subspace::zero(self.dim()))
    }

    fn collapse(&self, key: impl Fn(i64, i64) -> i64) -> Result<Grading> {
        let n = self.dim();
        let mut pieces: BTreeMap<i64, Subspace> = BTreeMap::new();
        for (&(i, j), s) in &self.bigrading {
            let acc = pieces.entry(key(i, j)).or_insert_with(|| Subspace::zero(n));
            *acc = acc.sum(s)?;
        }
        let count: usize = self.bigrading.values().map(Subspace::dim).sum();
        if count != n {
            return Err(HodgeError::InvalidInput("bigraded pieces do not form a direct sum".into()));
        }
        Grading::new(n, pieces)
    }

    pub fn grading1(&self) -> Result<Grading> {
        self.collapse(|i, _| i)
    }

    pub fn grading2(&self) -> Result<Grading> {
        self.collapse(|_, j| j)
    }

    pub fn total_grading(&self) -> Result<Grading> {
        self.collapse(|i, j| i + j)
    }

    /// The diagonal structure `(X₁+X₂, H₁+H₂, Y₁+Y₂)` with the total grading.
    pub fn diagonal(&self) -> Result<Sl2HodgeData> {
        Ok(Sl2HodgeData {
            fprime: self.fprime.clone(),
            fsecond: self.fsecond.clone(),
            central_weight: self.central_weight,
            grading: self.total_grading()?,
            triple: self.triple1.add(&self.triple2),
        })
    }
}

pub fn check_bisl2_hodge(d: &BiSl2HodgeData) -> CheckReport {
    let mut report = CheckReport::new();
    let (g1, g2) = match (d.grading1(), d.grading2()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            report.fail("bigrading", e.to_string(), Witness::Text { text: "bigrading".into() });
            return report;
        }
    };
    report.absorb("triple1", d.triple1.check(&g1));
    report.absorb("triple2", d.triple2.check(&g2));
    if !d.triple1.commutes_with(&d.triple2) {
        report.fail(
            "commuting",
            "the two triples do not commute",
            identity_witness("[X₁, X₂] = 0", d.triple1.x.bracket(&d.triple2.x), Matrix::zeros(d.dim(), d.dim())),
        );
    }
    for (name, f) in [("F'", &d.fprime), ("F''", &d.fsecond)] {
        if let Some(p) = splitting_failure(f, d.bigrading.values()) {
            report.fail(
                "splitting",
                format!("{name}^{p} is not the sum of its intersections with the bigraded pieces"),
                Witness::Vectors { vectors: f.step(p).basis_vectors() },
            );
            return report;
        }
    }
    for (&(i, j), s) in &d.bigrading {
        if s.is_zero() {
            continue;
        }
        match structure_on(&d.fprime, &d.fsecond, s, d.central_weight + i + j) {
            Ok(h) => {
                let r = check_pure(&h);
                if !r.passed() {
                    report.absorb(&format!("H_{i},{j}"), r.report);
                }
            }
            Err(e) => report.fail("pure", e.to_string(), Witness::Text { text: format!("H_{i},{j}") }),
        }
    }
    for (name, op, twist) in [
        ("X1", &d.triple1.x, 1),
        ("Y1", &d.triple1.y, -1),
        ("X2", &d.triple2.x, 1),
        ("Y2", &d.triple2.y, -1),
    ] {
        let mut r = CheckReport::new();
        check_decreasing_map(&mut r, "F'", op, &d.fprime, &d.fprime, twist);
        check_decreasing_map(&mut r, "F''", op, &d.fsecond, &d.fsecond, twist);
        report.absorb(name, r);
    }
    report
}

/// `S(X₁^i X₂^j x, ȳ)` polarizes `P₁P₂H_{−i,−j}` for all `i, j ≥ 0`.
pub fn check_bisl2_polarization(d: &BiSl2HodgeData, s: &SesquilinearForm) -> Result<CheckReport> {
    if s.dim() != d.dim() {
        return Err(HodgeError::DimensionMismatch("pairing".into()));
    }
    if s.target_twist != d.central_weight {
        return Err(HodgeError::TwistMismatch { expected: d.central_weight, found: s.target_twist });
    }
    let mut report = CheckReport::new();
    if !s.is_hermitian() {
        report.fail(
            "hermitian",
            "Gram matrix differs from its conjugate transpose",
            identity_witness("G = G*", s.gram.clone(), s.gram.adjoint()),
        );
    }
    for (suffix, t) in [("1", &d.triple1), ("2", &d.triple2)] {
        adjunction(&mut report, &format!("H{suffix}"), &t.h, s, -1);
        adjunction(&mut report, &format!("X{suffix}"), &t.x, s, 1);
        adjunction(&mut report, &format!("Y{suffix}"), &t.y, s, 1);
    }
    for (&(i, j), piece) in &d.bigrading {
        if i > 0 || j > 0 || piece.is_zero() {
            continue;
        }
        let (a, b) = ((-i) as u32, (-j) as u32);
        let prim = piece.kernel_of_power(&d.triple1.x, a + 1)?.kernel_of_power(&d.triple2.x, b + 1)?;
        let op = d.triple1.x.pow(a).mul(&d.triple2.x.pow(b));
        let op_gram = op.transpose().mul(&s.gram);
        let weight = d.central_weight - i64::from(a) - i64::from(b);
        primitive_polarization(&mut report, &format!("P1P2H_{i},{j}"), &d.fprime, &d.fsecond, &prim, &op_gram, weight)?;
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct MergeOutcome {
    pub merged: Sl2HodgeData,
    pub hodge_report: CheckReport,
    pub polarization_report: Option<CheckReport>,
    /// The merged structure failed a check that merging should preserve.
    pub alarm: bool,
}

/// Passes to the diagonal sl2 of a bi-sl2-Hodge structure. Invalid input is
/// an error; a failing output on valid input raises the alarm.
pub fn merge_bisl2(d: &BiSl2HodgeData, s: Option<&SesquilinearForm>) -> Result<MergeOutcome> {
    let input = check_bisl2_hodge(d);
    if let Some(f) = input.first() {
        return Err(HodgeError::InvalidInput(format!("not a bi-sl2-Hodge structure: {f}")));
    }
    if let Some(s) = s {
        let pol = check_bisl2_polarization(d, s)?;
        if let Some(f) = pol.first() {
            return Err(HodgeError::InvalidInput(format!("pairing does not polarize the input: {f}")));
        }
    }
    let merged = d.diagonal()?;
    let hodge_report = check_sl2_hodge(&merged);
    let polarization_report = s.map(|s| check_sl2_polarization(&merged, s)).transpose()?;
    let alarm = !hodge_report.passed() || polarization_report.as_ref().is_some_and(|r| !r.passed());
    Ok(MergeOutcome { merged, hodge_report, polarization_report, alarm })
}
