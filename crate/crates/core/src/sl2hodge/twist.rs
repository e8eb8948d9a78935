use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{splitting_failure, structure_on};
use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Subspace};
use crate::filtration::DecreasingFiltration;
use crate::hodge::{check_decreasing_map, check_pure};
use crate::nilpotent::{Grading, NilpotentOp};
use crate::report::CheckReport;

/// The summand-wise twisted structure `⊕_j H_j(j)`. The piece `H_j` now has
/// weight `−j`, so the raising operator becomes a lowering one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedStructure {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    /// The original grading, keyed by the original weights `j`.
    pub grading: Grading,
    pub lowering: NilpotentOp,
    /// Midpoint of the twisted weights.
    pub center: i64,
}

fn twisted(f: &DecreasingFiltration, grading: &Grading) -> Result<DecreasingFiltration> {
    let n = grading.dim();
    let mut keys = BTreeSet::new();
    for j in grading.degrees() {
        for &p in f.jumps().keys() {
            keys.insert(p - j);
        }
    }
    let mut steps = BTreeMap::new();
    for p in keys {
        let mut acc = Subspace::zero(n);
        for (&j, piece) in grading.pieces() {
            acc = acc.sum(&f.step(p + j).intersect(piece)?)?;
        }
        steps.insert(p, acc);
    }
    DecreasingFiltration::from_steps(n, steps)
}

/// Twists each `H_j` by `j` so that a raising Lefschetz operator `L`
/// (degree `+2`, `L F^p ⊆ F^{p+1}`) becomes a morphism to the `(−1)`-twist.
pub fn twist_by_grading(
    fprime: &DecreasingFiltration,
    fsecond: &DecreasingFiltration,
    grading: &Grading,
    l: &Matrix,
) -> Result<TwistedStructure> {
    let n = grading.dim();
    if fprime.ambient_dim() != n || fsecond.ambient_dim() != n || l.rows() != n || l.cols() != n {
        return Err(HodgeError::DimensionMismatch("graded structure and operator".into()));
    }
    for (name, f) in [("F'", fprime), ("F''", fsecond)] {
        if let Some(p) = splitting_failure(f, grading.pieces().values()) {
            return Err(HodgeError::InvalidInput(format!("{name}^{p} does not split along the grading")));
        }
    }
    for (&j, piece) in grading.pieces() {
        if piece.is_zero() {
            continue;
        }
        let r = check_pure(&structure_on(fprime, fsecond, piece, j)?);
        if let Some(f) = r.report.first() {
            return Err(HodgeError::NotPure(format!("H_{j}: {f}")));
        }
    }
    if grading.homogeneity_violation(l, 2).is_some() {
        return Err(HodgeError::InvalidInput("L does not raise the grading by 2".into()));
    }
    let mut r = CheckReport::new();
    check_decreasing_map(&mut r, "F'", l, fprime, fprime, 1);
    check_decreasing_map(&mut r, "F''", l, fsecond, fsecond, 1);
    if let Some(f) = r.first() {
        return Err(HodgeError::InvalidInput(format!("L is not a morphism to the (1)-twist: {f}")));
    }
    let lowering = NilpotentOp::new(l.clone())?;
    let degs: Vec<i64> = grading.pieces().iter().filter(|(_, s)| !s.is_zero()).map(|(&j, _)| j).collect();
    let center = match (degs.first(), degs.last()) {
        (Some(lo), Some(hi)) if (lo + hi) % 2 != 0 => {
            return Err(HodgeError::InvalidInput("weights do not have a common parity midpoint".into()))
        }
        (Some(lo), Some(hi)) => -(lo + hi) / 2,
        _ => 0,
    };
    Ok(TwistedStructure {
        fprime: twisted(fprime, grading)?,
        fsecond: twisted(fsecond, grading)?,
        grading: grading.clone(),
        lowering,
        center,
    })
}
