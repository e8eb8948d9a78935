//! Pure and mixed Hodge structures given by two decreasing filtrations,
//! Tate twists, the Deligne-Weil operator, morphisms and polarizations.
//!
//! Pairings are stored by their Gram matrix `G[a][b] = S(e_a, conj(e_b))`,
//! so `S(x, conj(y)) = xᵀ G conj(y)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{HodgeError, Result};
use crate::exact::{sylvester, Matrix, Scalar, Subquotient, Subspace};
use crate::filtration::{is_w_opposed, DecreasingFiltration, IncreasingFiltration};
use crate::report::{identity_witness, CheckReport, Witness};

/// Tensoring with `ℤ(l) = (2πi)^l ℤ`. Purely formal: nothing is ever
/// multiplied by a power of `2πi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistTag {
    pub l: i64,
}

impl TwistTag {
    pub fn new(l: i64) -> Self {
        TwistTag { l }
    }

    pub fn weight(self, w: i64) -> i64 {
        w - 2 * self.l
    }

    /// Index under which the step `F^p` appears after twisting.
    pub fn filtration_index(self, p: i64) -> i64 {
        p - self.l
    }

    pub fn compose(self, other: TwistTag) -> TwistTag {
        TwistTag { l: self.l + other.l }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PureHodge {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedHodge {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    pub weightfil: IncreasingFiltration,
}

/// An antilinear involution `v ↦ J·conj(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealStructureWitness {
    pub j: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesquilinearForm {
    pub gram: Matrix,
    /// The form takes values in `ℂ(−target_twist)`.
    pub target_twist: i64,
}

fn same_dim(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(HodgeError::DimensionMismatch(format!("{what}: {a} vs {b}")));
    }
    Ok(())
}

impl PureHodge {
    pub fn new(fprime: DecreasingFiltration, fsecond: DecreasingFiltration, weight: i64) -> Result<Self> {
        same_dim(fprime.ambient_dim(), fsecond.ambient_dim(), "filtrations")?;
        Ok(PureHodge { fprime, fsecond, weight })
    }

    /// Everything of type `(p, p)`; the weight is `2p`.
    pub fn hodge_tate(dim: usize, p: i64) -> Self {
        let f = DecreasingFiltration::trivial(dim, p);
        PureHodge { fprime: f.clone(), fsecond: f, weight: 2 * p }
    }

    pub fn dim(&self) -> usize {
        self.fprime.ambient_dim()
    }

    pub fn as_mixed(&self) -> MixedHodge {
        MixedHodge {
            fprime: self.fprime.clone(),
            fsecond: self.fsecond.clone(),
            weightfil: IncreasingFiltration::trivial(self.dim(), self.weight),
        }
    }

    /// The Hodge pieces `H^{p,q}`, keyed by `(p, q)`.
    pub fn pieces(&self) -> Result<BTreeMap<(i64, i64), Subspace>> {
        let o = is_w_opposed(&self.fprime, &self.fsecond, self.weight)?;
        if !o.opposed {
            return Err(HodgeError::NotPure(format!(
                "filtrations are not {}-opposed",
                self.weight
            )));
        }
        Ok(o.pieces)
    }

    pub fn induced_on(&self, sq: &Subquotient, weight: i64) -> Result<PureHodge> {
        Ok(PureHodge {
            fprime: self.fprime.induced_on(sq)?,
            fsecond: self.fsecond.induced_on(sq)?,
            weight,
        })
    }

    pub fn transform(&self, p: &Matrix) -> Self {
        PureHodge {
            fprime: self.fprime.transform(p),
            fsecond: self.fsecond.transform(p),
            weight: self.weight,
        }
    }
}

impl MixedHodge {
    pub fn new(
        fprime: DecreasingFiltration,
        fsecond: DecreasingFiltration,
        weightfil: IncreasingFiltration,
    ) -> Result<Self> {
        same_dim(fprime.ambient_dim(), fsecond.ambient_dim(), "filtrations")?;
        same_dim(fprime.ambient_dim(), weightfil.ambient_dim(), "weight filtration")?;
        Ok(MixedHodge { fprime, fsecond, weightfil })
    }

    pub fn dim(&self) -> usize {
        self.fprime.ambient_dim()
    }
}

impl SesquilinearForm {
    pub fn new(gram: Matrix, target_twist: i64) -> Result<Self> {
        if !gram.is_square() {
            return Err(HodgeError::DimensionMismatch("Gram matrix is not square".into()));
        }
        Ok(SesquilinearForm { gram, target_twist })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// `S(x, conj(y))`.
    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let gy = self.gram.apply(&y.iter().map(Scalar::conj).collect::<Vec<_>>());
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn is_hermitian(&self) -> bool {
        self.gram.is_hermitian()
    }

    pub fn negate(&self) -> Self {
        SesquilinearForm { gram: self.gram.neg(), target_twist: self.target_twist }
    }

    /// Gram matrix of the form on the span of the given rows.
    pub fn gram_on(&self, rows: &Matrix) -> Matrix {
        restrict_gram(&self.gram, rows)
    }

    /// The form `(x, y) ↦ S(op·x, conj(y))`.
    pub fn precompose(&self, op: &Matrix, target_twist: i64) -> Self {
        SesquilinearForm { gram: op.transpose().mul(&self.gram), target_twist }
    }

    /// Gram matrix in the basis given by the columns of `p`.
    pub fn in_basis(&self, p: &Matrix) -> Self {
        SesquilinearForm {
            gram: p.transpose().mul(&self.gram).mul(&p.conj()),
            target_twist: self.target_twist,
        }
    }
}

/// `B·G·B*` for a matrix `B` whose rows span the subspace.
pub fn restrict_gram(g: &Matrix, rows: &Matrix) -> Matrix {
    rows.mul(g).mul(&rows.adjoint())
}

/// Result of `check_pure`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityReport {
    pub report: CheckReport,
    pub hodge_numbers: BTreeMap<(i64, i64), usize>,
}

impl PurityReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

pub fn check_pure(h: &PureHodge) -> PurityReport {
    let mut report = CheckReport::new();
    let o = match is_w_opposed(&h.fprime, &h.fsecond, h.weight) {
        Ok(o) => o,
        Err(e) => {
            report.fail("pure", e.to_string(), Witness::Text { text: "dimensions".into() });
            return PurityReport { report, hodge_numbers: BTreeMap::new() };
        }
    };
    let hodge_numbers: BTreeMap<(i64, i64), usize> =
        o.pieces.iter().map(|(&pq, s)| (pq, s.dim())).collect();
    if !o.opposed {
        let detail = format!("filtrations are not {}-opposed", h.weight);
        let witness = if o.total_dim != h.dim() {
            Witness::Dimensions { expected: h.dim(), found: o.total_dim }
        } else {
            // right total dimension, but the pieces overlap
            Witness::Vectors {
                vectors: o.pieces.values().flat_map(|s| s.basis_vectors()).collect(),
            }
        };
        report.fail("pure", detail, witness);
    }
    PurityReport { report, hodge_numbers }
}

pub fn tate_twist(h: &PureHodge, l: i64) -> PureHodge {
    let t = TwistTag::new(l);
    PureHodge {
        fprime: h.fprime.shift(l),
        fsecond: h.fsecond.shift(l),
        weight: t.weight(h.weight),
    }
}

pub fn tate_twist_mixed(h: &MixedHodge, l: i64) -> MixedHodge {
    MixedHodge {
        fprime: h.fprime.shift(l),
        fsecond: h.fsecond.shift(l),
        weightfil: h.weightfil.shift(2 * l),
    }
}

/// Multiplication by `(−1)^q` on `H^{p,q}`.
pub fn deligne_weil(h: &PureHodge) -> Result<Matrix> {
    let pieces = h.pieces()?;
    let n = h.dim();
    let mut basis = Matrix::zeros(0, n);
    let mut signs = Vec::with_capacity(n);
    for (&(_, q), s) in &pieces {
        basis = basis.vstack(s.basis());
        signs.extend(std::iter::repeat_n(Scalar::sign_power(q), s.dim()));
    }
    let p = basis.transpose();
    let p_inv = p.inverse().expect("Hodge pieces form a basis");
    Ok(p.mul(&Matrix::diagonal(&signs)).mul(&p_inv))
}

/// First basis vector of `src` whose image under `f` leaves `dst`.
pub(crate) fn escaping_vector(f: &Matrix, src: &Subspace, dst: &Subspace) -> Option<Vec<Scalar>> {
    src.basis_vectors().into_iter().find(|v| !dst.contains_vector(&f.apply(v)))
}

pub(crate) fn check_decreasing_map(
    report: &mut CheckReport,
    name: &str,
    f: &Matrix,
    src: &DecreasingFiltration,
    dst: &DecreasingFiltration,
    twist: i64,
) {
    for &p in src.jumps().keys() {
        let target = dst.step(p + twist);
        if let Some(v) = escaping_vector(f, &src.step(p), &target) {
            report.fail(
                "morphism",
                format!("{name}^{p} is not mapped into {name}^{}", p + twist),
                Witness::Vectors { vectors: vec![v] },
            );
            return;
        }
    }
}

pub(crate) fn check_increasing_map(
    report: &mut CheckReport,
    f: &Matrix,
    src: &IncreasingFiltration,
    dst: &IncreasingFiltration,
    shift: i64,
) {
    for &k in src.jumps().keys() {
        if let Some(v) = escaping_vector(f, &src.step(k), &dst.step(k + shift)) {
            report.fail(
                "morphism",
                format!("W_{k} is not mapped into W_{}", k + shift),
                Witness::Vectors { vectors: vec![v] },
            );
            return;
        }
    }
}

/// Anything carrying the data needed by `check_morphism`.
pub trait FilteredSpace {
    fn fprime(&self) -> &DecreasingFiltration;
    fn fsecond(&self) -> &DecreasingFiltration;
    fn weight_filtration(&self) -> IncreasingFiltration;
    fn dim(&self) -> usize {
        self.fprime().ambient_dim()
    }
}

impl FilteredSpace for PureHodge {
    fn fprime(&self) -> &DecreasingFiltration {
        &self.fprime
    }
    fn fsecond(&self) -> &DecreasingFiltration {
        &self.fsecond
    }
    fn weight_filtration(&self) -> IncreasingFiltration {
        IncreasingFiltration::trivial(self.dim(), self.weight)
    }
}

impl FilteredSpace for MixedHodge {
    fn fprime(&self) -> &DecreasingFiltration {
        &self.fprime
    }
    fn fsecond(&self) -> &DecreasingFiltration {
        &self.fsecond
    }
    fn weight_filtration(&self) -> IncreasingFiltration {
        self.weightfil.clone()
    }
}

/// Whether `f` is a morphism `src → dst(twist)`: `f F^p ⊆ F^{p+twist}` for
/// both filtrations and `f W_k ⊆ W_{k+2·twist}`.
pub fn check_morphism(
    f: &Matrix,
    src: &(impl FilteredSpace + ?Sized),
    dst: &(impl FilteredSpace + ?Sized),
    twist: i64,
) -> Result<CheckReport> {
    same_dim(f.cols(), src.dim(), "map source")?;
    same_dim(f.rows(), dst.dim(), "map target")?;
    let mut report = CheckReport::new();
    check_decreasing_map(&mut report, "F'", f, src.fprime(), dst.fprime(), twist);
    check_decreasing_map(&mut report, "F''", f, src.fsecond(), dst.fsecond(), twist);
    check_increasing_map(
        &mut report,
        f,
        &src.weight_filtration(),
        &dst.weight_filtration(),
        2 * twist,
    );
    Ok(report)
}

pub fn check_polarization(h: &PureHodge, s: &SesquilinearForm) -> Result<CheckReport> {
    same_dim(h.dim(), s.dim(), "pairing")?;
    if s.target_twist != h.weight {
        return Err(HodgeError::TwistMismatch { expected: h.weight, found: s.target_twist });
    }
    let mut report = CheckReport::new();
    if !s.is_hermitian() {
        report.fail(
            "hermitian",
            "Gram matrix differs from its conjugate transpose",
            identity_witness("G = G*", s.gram.clone(), s.gram.adjoint()),
        );
    }
    let purity = check_pure(h);
    if !purity.passed() {
        report.absorb("polarization", purity.report);
        return Ok(report);
    }
    let pieces = h.pieces()?;
    let keys: Vec<&(i64, i64)> = pieces.keys().collect();
    'outer: for (a, ka) in keys.iter().enumerate() {
        for kb in keys.iter().skip(a + 1) {
            let block = pieces[*ka].basis().mul(&s.gram).mul(&pieces[*kb].basis().adjoint());
            if !block.is_zero() {
                report.fail(
                    "type",
                    format!("H^{:?} and H^{:?} are not orthogonal", ka, kb),
                    Witness::Vectors {
                        vectors: vec![pieces[*ka].basis_vectors()[0].clone(), pieces[*kb].basis_vectors()[0].clone()],
                    },
                );
                break 'outer;
            }
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    let c = deligne_weil(h)?;
    let positive_form = c.transpose().mul(&s.gram);
    let verdict = sylvester(&positive_form)?;
    if let Some((size, value)) = verdict.failing_minor {
        report.fail(
            "positivity",
            "S(C x, conj(y)) is not positive definite",
            Witness::Minor { size, value, gram: positive_form },
        );
    }
    Ok(report)
}

pub fn check_mixed(h: &MixedHodge) -> CheckReport {
    let mut report = CheckReport::new();
    for (k, sq) in h.weightfil.graded_pieces() {
        let piece = match (h.fprime.induced_on(&sq), h.fsecond.induced_on(&sq)) {
            (Ok(fp), Ok(fpp)) => PureHodge { fprime: fp, fsecond: fpp, weight: k },
            (Err(e), _) | (_, Err(e)) => {
                report.fail("mixed", e.to_string(), Witness::Text { text: format!("gr_{k}") });
                continue;
            }
        };
        let purity = check_pure(&piece);
        if !purity.passed() {
            report.absorb(&format!("gr_{k}"), purity.report);
        }
    }
    report
}

/// `J·conj(J) = I` and `F''^p = J(F'^p)` for all `p`, so that `J` swaps
/// `H^{p,q}` and `H^{q,p}`.
pub fn check_real_structure(h: &PureHodge, r: &RealStructureWitness) -> Result<CheckReport> {
    same_dim(h.dim(), r.j.rows(), "real structure")?;
    let mut report = CheckReport::new();
    let square = r.j.mul(&r.j.conj());
    if square != Matrix::identity(h.dim()) {
        report.fail(
            "involution",
            "J is not an antilinear involution",
            identity_witness("J·conj(J) = I", square, Matrix::identity(h.dim())),
        );
        return Ok(report);
    }
    let apply_j = |s: &Subspace| -> Result<Subspace> {
        let rows = s.basis().conj().mul(&r.j.transpose());
        Subspace::span(h.dim(), &rows)
    };
    let keys = h.fprime.jumps().keys().chain(h.fsecond.jumps().keys());
    for &p in keys {
        for p in [p, p + 1] {
            if apply_j(&h.fprime.step(p))? != h.fsecond.step(p) {
                report.fail(
                    "real",
                    format!("F''^{p} is not the conjugate of F'^{p}"),
                    Witness::Vectors { vectors: h.fprime.step(p).basis_vectors() },
                );
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Zero test on `S(x, conj(y))` for all `x ∈ a`, `y ∈ b`.
pub fn orthogonal(s: &SesquilinearForm, a: &Subspace, b: &Subspace) -> bool {
    a.basis().mul(&s.gram).mul(&b.basis().adjoint()).is_zero()
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;

    fn span(n: usize, vs: &[Vec<Scalar>]) -> Subspace {
        Subspace::from_vectors(n, vs).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn flag(n: usize, top: i64, line: Subspace) -> DecreasingFiltration {
        let steps = [(top - 1, Subspace::full(n)), (top, line)].into_iter().collect();
        DecreasingFiltration::from_steps(n, steps).unwrap()
    }

    pub(crate) fn elliptic() -> (PureHodge, SesquilinearForm) {
        let i = Scalar::i();
        let h10 = span(2, &[vec![Scalar::from_int(1), i.clone()]]);
        let h01 = span(2, &[vec![Scalar::from_int(1), -i.clone()]]);
        let h = PureHodge::new(flag(2, 1, h10), flag(2, 1, h01), 1).unwrap();
        let g = Matrix::from_rows(vec![
            vec![Scalar::zero(), i.clone()],
            vec![-i, Scalar::zero()],
        ]);
        (h, SesquilinearForm::new(g, 1).unwrap())
    }

    #[test]
    fn trivial_weight_zero_structure() {
        let h = PureHodge::hodge_tate(3, 0);
        let r = check_pure(&h);
        assert!(r.passed());
        assert_eq!(r.hodge_numbers, [((0, 0), 3)].into_iter().collect());
        assert_eq!(deligne_weil(&h).unwrap(), Matrix::identity(3));
        let s = SesquilinearForm::new(Matrix::identity(3), 0).unwrap();
        assert!(check_polarization(&h, &s).unwrap().passed());
    }

    #[test]
    fn elliptic_curve_is_polarized() {
        let (h, s) = elliptic();
        let r = check_pure(&h);
        assert!(r.passed());
        assert_eq!(r.hodge_numbers, [((0, 1), 1), ((1, 0), 1)].into_iter().collect());
        let c = deligne_weil(&h).unwrap();
        assert_eq!(c.mul(&c), Matrix::identity(2));
        let i = Scalar::i();
        assert_eq!(c.apply(&[Scalar::from_int(1), i.clone()]), vec![Scalar::from_int(1), i.clone()]);
        assert!(check_polarization(&h, &s).unwrap().passed());
        let flipped = check_polarization(&h, &s.negate()).unwrap();
        assert_eq!(flipped.first().unwrap().check, "positivity");
    }

    #[test]
    fn misaligned_flags_are_not_pure() {
        let line = span(2, &[ints(&[1, 0])]);
        let h = PureHodge::new(flag(2, 1, line.clone()), flag(2, 1, line), 1).unwrap();
        assert!(!check_pure(&h).passed());
        assert!(deligne_weil(&h).is_err());
    }

    #[test]
    fn self_pairing_of_h10_breaks_type_condition() {
        let (h, _) = elliptic();
        // S(x, conj(y)) = x0·conj(y0): H^{1,0} and H^{0,1} are not orthogonal
        let g = Matrix::from_rows(vec![
            vec![Scalar::from_int(1), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero()],
        ]);
        let r = check_polarization(&h, &SesquilinearForm::new(g, 1).unwrap()).unwrap();
        assert_eq!(r.first().unwrap().check, "type");
    }

    #[test]
    fn twist_mismatch_is_an_error() {
        let (h, s) = elliptic();
        let s = SesquilinearForm { target_twist: 0, ..s };
        assert!(matches!(check_polarization(&h, &s), Err(HodgeError::TwistMismatch { .. })));
    }

    #[test]
    fn tate_object_is_twist_of_trivial_structure() {
        let z1 = PureHodge::hodge_tate(1, -1);
        assert_eq!(z1.weight, -2);
        assert_eq!(tate_twist(&PureHodge::hodge_tate(1, 0), 1), z1);
        let (h, _) = elliptic();
        assert_eq!(tate_twist(&tate_twist(&h, 3), -3), h);
        assert_eq!(tate_twist(&h, 0), h);
    }

    #[test]
    fn deligne_weil_of_weight_two() {
        let e = |k: usize| Subspace::coordinate(3, &[k]);
        let fp = DecreasingFiltration::from_steps(
            3,
            [(0, Subspace::full(3)), (1, e(0).sum(&e(1)).unwrap()), (2, e(0))].into_iter().collect(),
        )
        .unwrap();
        let fpp = DecreasingFiltration::from_steps(
            3,
            [(0, Subspace::full(3)), (1, e(2).sum(&e(1)).unwrap()), (2, e(2))].into_iter().collect(),
        )
        .unwrap();
        let h = PureHodge::new(fp, fpp, 2).unwrap();
        let c = deligne_weil(&h).unwrap();
        assert_eq!(c, Matrix::diagonal(&ints(&[1, -1, 1])));
        let twisted = deligne_weil(&tate_twist(&h, 1)).unwrap();
        assert_eq!(twisted, c.neg());
    }

    #[test]
    fn morphism_checks() {
        let (h, _) = elliptic();
        assert!(check_morphism(&Matrix::identity(2), &h, &h, 0).unwrap().passed());
        assert!(check_morphism(&Matrix::zeros(2, 2), &h, &h, 5).unwrap().passed());
        assert!(!check_morphism(&Matrix::identity(2), &h, &h, 1).unwrap().passed());
    }

    #[test]
    fn real_structure_of_elliptic_curve() {
        let (h, _) = elliptic();
        let r = RealStructureWitness { j: Matrix::identity(2) };
        assert!(check_real_structure(&h, &r).unwrap().passed());
        let bad = RealStructureWitness { j: Matrix::diagonal(&ints(&[1, -1])) };
        assert!(!check_real_structure(&h, &bad).unwrap().passed());
    }

    #[test]
    fn pure_as_mixed() {
        let (h, _) = elliptic();
        assert!(check_mixed(&h.as_mixed()).passed());
        let mut shifted = h.as_mixed();
        shifted.weightfil = shifted.weightfil.shift(1);
        assert!(!check_mixed(&shifted).passed());
    }
}
