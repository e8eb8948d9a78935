use std::collections::BTreeMap;

use serde::Serialize;

use super::{adjunction, check_sl2_hodge, check_sl2_polarization, structure_on, Sl2HodgeData};
use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Scalar, Subquotient};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::hodge::{check_decreasing_map, check_mixed, check_polarization, restrict_gram, MixedHodge, SesquilinearForm};
use crate::nilpotent::{complete_sl2, weight_filtration, Grading, NilpotentOp};
use crate::report::{identity_witness, CheckReport, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeLefschetzData {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    pub central_weight: i64,
    pub n: NilpotentOp,
}

/// `gr^W` of a space with filtrations, a lowering operator and optionally a
/// pairing. Coordinates on `gr` are the concatenated coordinates of the
/// nonzero graded pieces in increasing order of weight.
#[derive(Clone, Debug)]
pub struct GradedLimit {
    pub weightfil: IncreasingFiltration,
    pub pieces: Vec<(i64, Subquotient)>,
    /// Offset of each weight inside the `gr` coordinates.
    pub offsets: BTreeMap<i64, usize>,
    /// Column `a` lifts the `a`-th `gr` basis vector.
    pub lifts: Matrix,
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    /// `gr_{c+k}` sits in degree `k`.
    pub grading: Grading,
    /// The map induced by the lowering operator.
    pub y: Matrix,
    /// Pairs `gr_{c+k}` with `gr_{c−k}` through lifts.
    pub form: Option<SesquilinearForm>,
}

impl GradedLimit {
    /// Embeds coordinates on `gr_k` into `gr` coordinates.
    pub fn embed(&self, k: i64, coords: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::default(); self.lifts.cols()];
        if let Some(&off) = self.offsets.get(&k) {
            out[off..off + coords.len()].clone_from_slice(coords);
        }
        out
    }

    pub fn piece(&self, k: i64) -> Option<&Subquotient> {
        self.pieces.iter().find(|(j, _)| *j == k).map(|(_, sq)| sq)
    }
}

pub fn graded_limit(
    fprime: &DecreasingFiltration,
    fsecond: &DecreasingFiltration,
    lowering: &Matrix,
    w: &IncreasingFiltration,
    center: i64,
    s: Option<&SesquilinearForm>,
) -> Result<GradedLimit> {
    let n = w.ambient_dim();
    let pieces = w.graded_pieces();
    let mut offsets = BTreeMap::new();
    let mut degrees = Vec::with_capacity(n);
    let mut lift_rows = Matrix::zeros(0, n);
    let mut fp = DecreasingFiltration::from_steps(0, BTreeMap::new())?;
    let mut fpp = fp.clone();
    for (k, sq) in &pieces {
        offsets.insert(*k, degrees.len());
        degrees.extend(std::iter::repeat_n(k - center, sq.dim()));
        lift_rows = lift_rows.vstack(sq.lifts());
        fp = fp.direct_sum(&fprime.induced_on(sq)?);
        fpp = fpp.direct_sum(&fsecond.induced_on(sq)?);
    }
    let mut y = Matrix::zeros(n, n);
    for (k, sq) in &pieces {
        let target = w.graded_piece(k - 2);
        let block = sq.induced_map(lowering, &target)?;
        if let Some(&row0) = offsets.get(&(k - 2)) {
            let col0 = offsets[k];
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    y[(row0 + r, col0 + c)] = block[(r, c)].clone();
                }
            }
        }
    }
    let lifts = lift_rows.transpose();
    let form = s.map(|s| {
        let mut g = lifts.transpose().mul(&s.gram).mul(&lifts.conj());
        for a in 0..n {
            for b in 0..n {
                if degrees[a] + degrees[b] != 0 {
                    g[(a, b)] = Scalar::default();
                }
            }
        }
        SesquilinearForm { gram: g, target_twist: s.target_twist }
    });
    Ok(GradedLimit {
        weightfil: w.clone(),
        pieces,
        offsets,
        lifts,
        fprime: fp,
        fsecond: fpp,
        grading: Grading::from_degrees(&degrees),
        y,
        form,
    })
}

/// `(−1)^k S(N^k x, ȳ)` polarizes the primitive part `ker N^{k+1}` of
/// `gr_{c+k}` for each `k ≥ 0`, computed on lifts in the original space.
fn lifted_polarization(
    d: &HodgeLefschetzData,
    w: &IncreasingFiltration,
    s: &SesquilinearForm,
) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let c = d.central_weight;
    let a = d.n.matrix();
    for (k_abs, sq) in w.graded_pieces() {
        let k = k_abs - c;
        if k < 0 {
            continue;
        }
        let inside = w.step(k_abs).intersect(&w.step(c - k - 3).preimage_under(&a.pow(k as u32 + 1))?)?;
        let prim = sq.project_subspace(&inside)?;
        if prim.is_zero() {
            continue;
        }
        let fp = d.fprime.induced_on(&sq)?;
        let fpp = d.fsecond.induced_on(&sq)?;
        let h = structure_on(&fp, &fpp, &prim, k_abs)?;
        let lifted: Vec<Vec<Scalar>> = prim.basis_vectors().iter().map(|v| sq.lift(v)).collect();
        let rows = Matrix::from_rows_with_cols(lifted, w.ambient_dim())?;
        let op_gram = a.pow(k as u32).transpose().mul(&s.gram).scale(&Scalar::sign_power(k));
        let form = SesquilinearForm { gram: restrict_gram(&op_gram, &rows), target_twist: k_abs };
        let r = check_polarization(&h, &form)?;
        if !r.passed() {
            report.absorb(&format!("Pgr_{k_abs}"), r);
        }
    }
    Ok(report)
}

/// Checks a (polarized) Hodge-Lefschetz structure both as a mixed Hodge
/// structure with `W(N)` and as an sl2-Hodge structure on `gr^{W(N)}`. The
/// two formulations must agree.
pub fn check_hodge_lefschetz(d: &HodgeLefschetzData, s: Option<&SesquilinearForm>) -> Result<CheckReport> {
    let n = d.n.dim();
    if d.fprime.ambient_dim() != n || d.fsecond.ambient_dim() != n {
        return Err(HodgeError::DimensionMismatch("filtrations and operator".into()));
    }
    if let Some(s) = s {
        if s.dim() != n {
            return Err(HodgeError::DimensionMismatch("pairing".into()));
        }
        if s.target_twist != d.central_weight {
            return Err(HodgeError::TwistMismatch { expected: d.central_weight, found: s.target_twist });
        }
    }
    let a = d.n.matrix();
    let w = weight_filtration(&d.n, d.central_weight)?;

    let mut shared = CheckReport::new();
    check_decreasing_map(&mut shared, "F'", a, &d.fprime, &d.fprime, -1);
    check_decreasing_map(&mut shared, "F''", a, &d.fsecond, &d.fsecond, -1);
    let mut pairing = CheckReport::new();
    if let Some(s) = s {
        if !s.is_hermitian() {
            pairing.fail(
                "hermitian",
                "Gram matrix differs from its conjugate transpose",
                identity_witness("G = G*", s.gram.clone(), s.gram.adjoint()),
            );
        }
        adjunction(&mut pairing, "N", a, s, 1);
    }

    let mhs = check_mixed(&MixedHodge::new(d.fprime.clone(), d.fsecond.clone(), w.clone())?);
    let gl = graded_limit(&d.fprime, &d.fsecond, a, &w, d.central_weight, s)?;
    let (gr, gr_data) = match complete_sl2(&gl.grading, &gl.y) {
        Ok(triple) => {
            let data = Sl2HodgeData {
                fprime: gl.fprime.clone(),
                fsecond: gl.fsecond.clone(),
                central_weight: d.central_weight,
                grading: gl.grading.clone(),
                triple,
            };
            (check_sl2_hodge(&data), Some(data))
        }
        Err(e) => {
            let mut r = CheckReport::new();
            r.fail("sl2", e.to_string(), Witness::Text { text: "gr N".into() });
            (r, None)
        }
    };
    if shared.passed() && mhs.passed() != gr.passed() {
        return Err(HodgeError::CriterionDisagreement(format!(
            "mixed Hodge check {} but gr sl2-Hodge check {}",
            if mhs.passed() { "passes" } else { "fails" },
            if gr.passed() { "passes" } else { "fails" },
        )));
    }

    let mut report = CheckReport::new();
    report.absorb("N", shared.clone());
    report.absorb("pairing", pairing.clone());
    report.absorb("mhs", mhs.clone());
    report.absorb("gr", gr.clone());
    if let (Some(s), true) = (s, mhs.passed() && gr.passed()) {
        let lifted = lifted_polarization(d, &w, s)?;
        let data = gr_data.expect("gr check passed");
        let on_gr = check_sl2_polarization(&data, gl.form.as_ref().expect("pairing given"))?;
        if shared.passed() && pairing.passed() && lifted.passed() != on_gr.passed() {
            return Err(HodgeError::CriterionDisagreement(format!(
                "polarization of primitive parts {} on lifts but {} on gr",
                if lifted.passed() { "passes" } else { "fails" },
                if on_gr.passed() { "passes" } else { "fails" },
            )));
        }
        report.absorb("mhs_polarization", lifted);
        report.absorb("gr_polarization", on_gr);
    }
    Ok(report)
}
