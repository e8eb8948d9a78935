//! sl2-Hodge structures and their polarizations, bi-sl2 structures,
//! Hodge-Lefschetz structures and polarizing cones.

mod bisl2;
mod cone;
mod lefschetz;
mod twist;

pub use bisl2::{check_bisl2_hodge, check_bisl2_polarization, merge_bisl2, BiSl2HodgeData, MergeOutcome};
pub use cone::{
    check_cone_polarization, reduce_cone, reduce_fully, reducible_degrees, ConeData, ConeReport,
    ConeSample, PolarizedCone, Reduction, DEFAULT_SAMPLE_BUDGET,
};
pub use lefschetz::{check_hodge_lefschetz, graded_limit, GradedLimit, HodgeLefschetzData};
pub use twist::{twist_by_grading, TwistedStructure};

use serde::Serialize;

use crate::error::{HodgeError, Result};
use crate::exact::poly::{characteristic_polynomial, count_roots, Poly, RootCount};
use crate::exact::{Matrix, Scalar, Subquotient, Subspace};
use crate::filtration::DecreasingFiltration;
use crate::hodge::{check_decreasing_map, check_polarization, check_pure, restrict_gram, PureHodge, SesquilinearForm};
use crate::nilpotent::{coprimitive_subspace, primitive_subspace, Grading, Sl2Triple};
use crate::report::{identity_witness, CheckReport, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2HodgeData {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    pub central_weight: i64,
    pub grading: Grading,
    pub triple: Sl2Triple,
}

impl Sl2HodgeData {
    pub fn dim(&self) -> usize {
        self.grading.dim()
    }

    /// `H_k` with the induced filtrations, weight `w + k`, in the
    /// coordinates of the basis of `H_k`.
    pub fn piece_structure(&self, k: i64) -> Result<PureHodge> {
        structure_on(&self.fprime, &self.fsecond, &self.grading.piece(k), self.central_weight + k)
    }

    pub fn transform(&self, p: &Matrix) -> Result<Self> {
        let p_inv = p.inverse().ok_or_else(|| HodgeError::InvalidInput("singular basis change".into()))?;
        Ok(Sl2HodgeData {
            fprime: self.fprime.transform(p),
            fsecond: self.fsecond.transform(p),
            central_weight: self.central_weight,
            grading: self.grading.transform(p),
            triple: self.triple.transform(p, &p_inv),
        })
    }
}

pub(crate) fn structure_on(
    fprime: &DecreasingFiltration,
    fsecond: &DecreasingFiltration,
    sub: &Subspace,
    weight: i64,
) -> Result<PureHodge> {
    let sq = Subquotient::of_subspace(sub.clone());
    Ok(PureHodge { fprime: fprime.induced_on(&sq)?, fsecond: fsecond.induced_on(&sq)?, weight })
}

/// First index `p` at which `F^p ≠ ⊕ (F^p ∩ piece)`.
pub(crate) fn splitting_failure<'a>(
    f: &DecreasingFiltration,
    pieces: impl Iterator<Item = &'a Subspace> + Clone,
) -> Option<i64> {
    for (&p, step) in f.jumps() {
        let total: usize =
            pieces.clone().map(|s| step.intersect(s).map(|x| x.dim()).unwrap_or(usize::MAX / 4)).sum();
        if total != step.dim() {
            return Some(p);
        }
    }
    None
}

fn check_dims(report: &mut CheckReport, n: usize, what: &[(&str, usize)]) -> bool {
    for (name, d) in what {
        if *d != n {
            report.fail("dimensions", format!("{name} has dimension {d}, expected {n}"), Witness::Dimensions { expected: n, found: *d });
            return false;
        }
    }
    true
}

pub fn check_sl2_hodge(d: &Sl2HodgeData) -> CheckReport {
    let mut report = CheckReport::new();
    let n = d.dim();
    if !check_dims(
        &mut report,
        n,
        &[("F'", d.fprime.ambient_dim()), ("F''", d.fsecond.ambient_dim()), ("triple", d.triple.dim())],
    ) {
        return report;
    }
    report.absorb("triple", d.triple.check(&d.grading));
    for (name, f) in [("F'", &d.fprime), ("F''", &d.fsecond)] {
        if let Some(p) = splitting_failure(f, d.grading.pieces().values()) {
            report.fail(
                "splitting",
                format!("{name}^{p} is not the sum of its intersections with the graded pieces"),
                Witness::Vectors { vectors: f.step(p).basis_vectors() },
            );
            return report;
        }
    }
    for k in d.grading.degrees() {
        match d.piece_structure(k) {
            Ok(h) => {
                let r = check_pure(&h);
                if !r.passed() {
                    report.absorb(&format!("H_{k}"), r.report);
                }
            }
            Err(e) => report.fail("pure", e.to_string(), Witness::Text { text: format!("H_{k}") }),
        }
    }
    for (name, op, twist) in [("X", &d.triple.x, 1), ("Y", &d.triple.y, -1)] {
        let mut r = CheckReport::new();
        check_decreasing_map(&mut r, "F'", op, &d.fprime, &d.fprime, twist);
        check_decreasing_map(&mut r, "F''", op, &d.fsecond, &d.fsecond, twist);
        report.absorb(name, r);
    }
    report
}

/// `AᵀG = sign·G·conj(A)`, i.e. `S(Ax, ȳ) = sign·S(x, conj(Ay))`.
pub(crate) fn adjunction(report: &mut CheckReport, name: &str, a: &Matrix, s: &SesquilinearForm, sign: i64) {
    let lhs = a.transpose().mul(&s.gram);
    let rhs = s.gram.mul(&a.conj()).scale(&Scalar::from_int(sign));
    if lhs != rhs {
        let identity = if sign > 0 {
            format!("S({name}x, ȳ) = S(x, conj({name}y))")
        } else {
            format!("S({name}x, ȳ) = -S(x, conj({name}y))")
        };
        report.fail("adjunction", format!("{identity} fails"), identity_witness(&identity, lhs, rhs));
    }
}

fn check_form_basics(d: &Sl2HodgeData, s: &SesquilinearForm) -> Result<CheckReport> {
    if s.dim() != d.dim() {
        return Err(HodgeError::DimensionMismatch(format!("pairing of size {} on a space of dimension {}", s.dim(), d.dim())));
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
    adjunction(&mut report, "H", &d.triple.h, s, -1);
    adjunction(&mut report, "X", &d.triple.x, s, 1);
    adjunction(&mut report, "Y", &d.triple.y, s, 1);
    // compatibility with the weight filtration induced by the grading:
    // S(H_j, H_k) = 0 whenever j + k < 0
    let pieces: Vec<(i64, &Subspace)> = d.grading.pieces().iter().map(|(&k, s)| (k, s)).collect();
    'outer: for &(j, a) in &pieces {
        for &(k, b) in &pieces {
            if j + k < 0 && !a.basis().mul(&s.gram).mul(&b.basis().adjoint()).is_zero() {
                report.fail(
                    "weight",
                    format!("S pairs H_{j} with H_{k} nontrivially"),
                    Witness::Vectors { vectors: vec![a.basis_vectors()[0].clone(), b.basis_vectors()[0].clone()] },
                );
                break 'outer;
            }
        }
    }
    Ok(report)
}

/// Polarization of one primitive piece by the Gram matrix `op_gram`
/// (the matrix `opᵀ·G`), restricted to `prim`.
pub(crate) fn primitive_polarization(
    report: &mut CheckReport,
    label: &str,
    fprime: &DecreasingFiltration,
    fsecond: &DecreasingFiltration,
    prim: &Subspace,
    op_gram: &Matrix,
    weight: i64,
) -> Result<()> {
    if prim.is_zero() {
        return Ok(());
    }
    let h = structure_on(fprime, fsecond, prim, weight)?;
    let form = SesquilinearForm { gram: restrict_gram(op_gram, prim.basis()), target_twist: weight };
    let r = check_polarization(&h, &form)?;
    if !r.passed() {
        report.absorb(label, r);
    }
    Ok(())
}

/// `S(X^k x, ȳ)` polarizes `PH_{−k}` for every `k ≥ 0`, plus the adjunction
/// identities.
pub fn check_sl2_polarization(d: &Sl2HodgeData, s: &SesquilinearForm) -> Result<CheckReport> {
    let mut report = check_form_basics(d, s)?;
    let w = d.central_weight;
    for k in d.grading.degrees().filter(|&k| k <= 0).map(|k| -k).collect::<Vec<_>>() {
        let prim = match primitive_subspace(&d.triple, &d.grading, k) {
            Ok(p) => p,
            Err(e) => {
                report.fail("primitive", e.to_string(), Witness::Text { text: format!("PH_{}", -k) });
                continue;
            }
        };
        let op_gram = d.triple.x.pow(k as u32).transpose().mul(&s.gram);
        primitive_polarization(&mut report, &format!("PH_{}", -k), &d.fprime, &d.fsecond, &prim, &op_gram, w - k)?;
    }
    Ok(report)
}

/// The equivalent criterion: `(−1)^k S(Y^k x, ȳ)` polarizes
/// `PH_k = ker X ∩ H_k` for every `k ≥ 0`.
pub fn check_sl2_polarization_lowering(d: &Sl2HodgeData, s: &SesquilinearForm) -> Result<CheckReport> {
    let mut report = check_form_basics(d, s)?;
    let w = d.central_weight;
    for k in d.grading.degrees().filter(|&k| k >= 0).collect::<Vec<_>>() {
        let prim = match coprimitive_subspace(&d.triple, &d.grading, k) {
            Ok(p) => p,
            Err(e) => {
                report.fail("primitive", e.to_string(), Witness::Text { text: format!("PH_{k}") });
                continue;
            }
        };
        let op_gram = d.triple.y.pow(k as u32).transpose().mul(&s.gram).scale(&Scalar::sign_power(k));
        primitive_polarization(&mut report, &format!("PH_{k}"), &d.fprime, &d.fsecond, &prim, &op_gram, w + k)?;
    }
    Ok(report)
}

/// Runs both polarization criteria and returns their common verdict; a
/// disagreement is an error.
pub fn check_equivalent_polarization_criterion(d: &Sl2HodgeData, s: &SesquilinearForm) -> Result<bool> {
    let raising = check_sl2_polarization(d, s)?;
    let lowering = check_sl2_polarization_lowering(d, s)?;
    if raising.passed() != lowering.passed() {
        let detail = raising.first().or(lowering.first()).map(ToString::to_string).unwrap_or_default();
        return Err(HodgeError::CriterionDisagreement(format!(
            "X-side {} but Y-side {}: {detail}",
            verdict(raising.passed()),
            verdict(lowering.passed())
        )));
    }
    Ok(raising.passed())
}

fn verdict(b: bool) -> &'static str {
    if b {
        "passes"
    } else {
        "fails"
    }
}

/// `X^k: H_{−k} → H_k` is bijective for every `k > 0`.
pub fn check_hard_lefschetz(d: &Sl2HodgeData) -> CheckReport {
    let mut report = CheckReport::new();
    let top = d.grading.degrees().map(i64::abs).max().unwrap_or(0);
    for k in 1..=top {
        let low = d.grading.piece(-k);
        let high = d.grading.piece(k);
        let image = low.image_under(&d.triple.x.pow(k as u32)).expect("square operator");
        if low.dim() != high.dim() || image != high {
            report.fail(
                "hard_lefschetz",
                format!("X^{k}: H_{} → H_{k} is not an isomorphism", -k),
                Witness::Dimensions { expected: high.dim(), found: image.dim() },
            );
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueReport {
    /// Characteristic polynomial of `L⁻¹η` on the domain.
    pub char_poly: Poly,
    pub roots: Option<RootCount>,
    pub all_positive_real: bool,
}

/// Eigenvalue positivity of `L⁻¹η` for two isomorphisms
/// `L, η: domain → codomain`.
pub fn lefschetz_eigenvalues(
    l: &Matrix,
    eta: &Matrix,
    domain: &Subspace,
    codomain: &Subspace,
) -> Result<EigenvalueReport> {
    let block = |op: &Matrix| -> Result<Matrix> {
        let cols = domain
            .basis_vectors()
            .iter()
            .map(|v| {
                codomain.coordinates(&op.apply(v)).ok_or_else(|| {
                    HodgeError::NotContained("operator leaves the target space".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows_with_cols(cols, codomain.dim())?.transpose())
    };
    let lb = block(l)?;
    let eb = block(eta)?;
    let inv = lb.inverse().ok_or_else(|| HodgeError::InvalidInput("L is not an isomorphism".into()))?;
    let char_poly = characteristic_polynomial(&inv.mul(&eb));
    let roots = count_roots(&char_poly);
    let all_positive_real = roots.as_ref().is_some_and(RootCount::all_roots_positive_real);
    Ok(EigenvalueReport { char_poly, roots, all_positive_real })
}

#[cfg(test)]
mod tests;
