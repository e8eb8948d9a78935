//! Nilpotent operators, monodromy weight filtrations, gradings and
//! sl2-triples.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Scalar, Subspace};
use crate::filtration::IncreasingFiltration;
use crate::report::{identity_witness, CheckReport, Witness};

/// The matrix of `2πi·N` for a nilpotent `N: H → H(−1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentOp {
    a: Matrix,
}

impl NilpotentOp {
    pub fn new(a: Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(HodgeError::DimensionMismatch("operator is not square".into()));
        }
        if a.nilpotency_index().is_none() {
            return Err(HodgeError::NotNilpotent);
        }
        Ok(NilpotentOp { a })
    }

    pub fn zero(n: usize) -> Self {
        NilpotentOp { a: Matrix::zeros(n, n) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn into_matrix(self) -> Matrix {
        self.a
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Smallest `k` with `a^k = 0`.
    pub fn index(&self) -> u32 {
        self.a.nilpotency_index().expect("checked at construction")
    }

    /// `twist` is always −1: the operator is a morphism `H → H(−1)`.
    pub fn twist(&self) -> i64 {
        -1
    }
}

/// The monodromy weight filtration of `n` centered at `center`.
pub fn weight_filtration(n: &NilpotentOp, center: i64) -> Result<IncreasingFiltration> {
    let dim = n.dim();
    let mut steps = BTreeMap::new();
    if dim > 0 {
        fill_weight_steps(n.matrix(), Subspace::full(dim), Subspace::zero(dim), center, &mut steps)?;
    }
    let w = IncreasingFiltration::from_steps(dim, steps)?;
    let check = verify_weight_filtration(n.matrix(), &w, center);
    if let Some(f) = check.first() {
        return Err(HodgeError::InvalidFiltration(format!("weight filtration self-check: {f}")));
    }
    Ok(w)
}

// Fills the steps of W on the N-stable subquotient `a / b`.
fn fill_weight_steps(
    n: &Matrix,
    a: Subspace,
    b: Subspace,
    center: i64,
    steps: &mut BTreeMap<i64, Subspace>,
) -> Result<()> {
    if a == b {
        return Ok(());
    }
    // m = least exponent with N^{m+1} a ⊆ b; top = N^m a
    let mut top = a.clone();
    let mut next = a.image_under(n)?;
    let mut m: i64 = 0;
    while !b.contains(&next) {
        top = next;
        next = top.image_under(n)?;
        m += 1;
    }
    if m == 0 {
        steps.insert(center, a);
        steps.insert(center - 1, b);
        return Ok(());
    }
    let power = n.pow(m as u32);
    let inner_top = a.intersect(&b.preimage_under(&power)?)?;
    let inner_bottom = top.sum(&b)?;
    steps.insert(center + m, a);
    steps.insert(center + m - 1, inner_top.clone());
    steps.insert(center - m, inner_bottom.clone());
    steps.insert(center - m - 1, b);
    fill_weight_steps(n, inner_top, inner_bottom, center, steps)
}

/// Re-asserts the defining properties: `a·W_k ⊆ W_{k−2}` and
/// `a^k: gr_{c+k} → gr_{c−k}` bijective for `k ≥ 0`.
pub fn verify_weight_filtration(a: &Matrix, w: &IncreasingFiltration, center: i64) -> CheckReport {
    let mut report = CheckReport::new();
    for &k in w.jumps().keys() {
        let target = w.step(k - 2);
        if let Some(v) = w.step(k).basis_vectors().into_iter().find(|v| !target.contains_vector(&a.apply(v))) {
            report.fail(
                "weight/lowering",
                format!("N·W_{k} is not inside W_{}", k - 2),
                Witness::Vectors { vectors: vec![v] },
            );
            return report;
        }
    }
    let reach = w
        .jumps()
        .keys()
        .map(|&k| (k - center).abs())
        .max()
        .unwrap_or(0);
    for k in 0..=reach + 1 {
        let hi = w.graded_piece(center + k);
        let lo = w.graded_piece(center - k);
        if hi.dim() != lo.dim() {
            report.fail(
                "weight/symmetry",
                format!("dim gr_{} ≠ dim gr_{}", center + k, center - k),
                Witness::Dimensions { expected: hi.dim(), found: lo.dim() },
            );
            return report;
        }
        let ak = a.pow(k as u32);
        match hi.induced_map(&ak, &lo) {
            Ok(m) if m.rank() == hi.dim() => {}
            Ok(m) => {
                report.fail(
                    "weight/isomorphism",
                    format!("N^{k}: gr_{} → gr_{} is not bijective", center + k, center - k),
                    Witness::Dimensions { expected: hi.dim(), found: m.rank() },
                );
                return report;
            }
            Err(e) => {
                report.fail(
                    "weight/isomorphism",
                    e.to_string(),
                    Witness::Text { text: format!("N^{k} on gr_{}", center + k) },
                );
                return report;
            }
        }
    }
    report
}

/// A direct sum decomposition `H = ⊕ H_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    dim: usize,
    /// Nonzero pieces only.
    pieces: BTreeMap<i64, Subspace>,
}

impl Grading {
    pub fn new(dim: usize, pieces: BTreeMap<i64, Subspace>) -> Result<Self> {
        let mut total = Subspace::zero(dim);
        let mut count = 0;
        for (k, s) in &pieces {
            if s.ambient_dim() != dim {
                return Err(HodgeError::DimensionMismatch(format!("grade {k} has the wrong ambient dimension")));
            }
            total = total.sum(s)?;
            count += s.dim();
        }
        if count != dim || !total.is_full() {
            return Err(HodgeError::InvalidInput(
                "graded pieces do not form a direct sum decomposition".into(),
            ));
        }
        let pieces = pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        Ok(Grading { dim, pieces })
    }

    /// Coordinate grading: basis vector `i` has degree `degrees[i]`.
    pub fn from_degrees(degrees: &[i64]) -> Self {
        let n = degrees.len();
        let mut idx: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &d) in degrees.iter().enumerate() {
            idx.entry(d).or_default().push(i);
        }
        let pieces = idx.into_iter().map(|(d, is)| (d, Subspace::coordinate(n, &is))).collect();
        Grading { dim: n, pieces }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &BTreeMap<i64, Subspace> {
        &self.pieces
    }

    pub fn piece(&self, k: i64) -> Subspace {
        self.pieces.get(&k).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.pieces.keys().copied()
    }

    /// Columns form a basis adapted to the grading (increasing degree), and
    /// the degree of each column.
    pub fn adapted_basis(&self) -> (Matrix, Vec<i64>) {
        let mut rows = Matrix::zeros(0, self.dim);
        let mut degs = Vec::with_capacity(self.dim);
        for (&k, s) in &self.pieces {
            rows = rows.vstack(s.basis());
            degs.extend(std::iter::repeat_n(k, s.dim()));
        }
        (rows.transpose(), degs)
    }

    /// Multiplication by `k` on `H_k`.
    pub fn operator(&self) -> Matrix {
        let (p, degs) = self.adapted_basis();
        let d: Vec<Scalar> = degs.iter().map(|&k| Scalar::from_int(k)).collect();
        p.mul(&Matrix::diagonal(&d)).mul(&p.inverse().expect("adapted basis"))
    }

    /// Projection onto `H_k` along the other pieces.
    pub fn projector(&self, k: i64) -> Matrix {
        let (p, degs) = self.adapted_basis();
        let d: Vec<Scalar> =
            degs.iter().map(|&j| if j == k { Scalar::from_int(1) } else { Scalar::zero() }).collect();
        p.mul(&Matrix::diagonal(&d)).mul(&p.inverse().expect("adapted basis"))
    }

    pub fn negate(&self) -> Self {
        Grading { dim: self.dim, pieces: self.pieces.iter().map(|(&k, s)| (-k, s.clone())).collect() }
    }

    pub fn shift(&self, by: i64) -> Self {
        Grading { dim: self.dim, pieces: self.pieces.iter().map(|(&k, s)| (k + by, s.clone())).collect() }
    }

    pub fn transform(&self, p: &Matrix) -> Self {
        Grading { dim: self.dim, pieces: self.pieces.iter().map(|(&k, s)| (k, s.transform(p))).collect() }
    }

    /// First basis vector of some `H_k` not sent into `H_{k+degree}`.
    pub fn homogeneity_violation(&self, op: &Matrix, degree: i64) -> Option<Vec<Scalar>> {
        for (&k, s) in &self.pieces {
            let target = self.piece(k + degree);
            for v in s.basis_vectors() {
                if !target.contains_vector(&op.apply(&v)) {
                    return Some(v);
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2Triple {
    pub x: Matrix,
    pub h: Matrix,
    pub y: Matrix,
}

impl Sl2Triple {
    pub fn zero(n: usize) -> Self {
        Sl2Triple { x: Matrix::zeros(n, n), h: Matrix::zeros(n, n), y: Matrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn add(&self, other: &Sl2Triple) -> Sl2Triple {
        Sl2Triple { x: self.x.add(&other.x), h: self.h.add(&other.h), y: self.y.add(&other.y) }
    }

    pub fn transform(&self, p: &Matrix, p_inv: &Matrix) -> Sl2Triple {
        let conj = |m: &Matrix| p.mul(m).mul(p_inv);
        Sl2Triple { x: conj(&self.x), h: conj(&self.h), y: conj(&self.y) }
    }

    /// Bracket relations, and `h` acting as the grading operator.
    pub fn check(&self, grading: &Grading) -> CheckReport {
        let mut report = CheckReport::new();
        let two = Scalar::from_int(2);
        let relations = [
            ("H = grading", self.h.clone(), grading.operator()),
            ("[H,X] = 2X", self.h.bracket(&self.x), self.x.scale(&two)),
            ("[H,Y] = -2Y", self.h.bracket(&self.y), self.y.scale(&two).neg()),
            ("[X,Y] = H", self.x.bracket(&self.y), self.h.clone()),
        ];
        for (name, lhs, rhs) in relations {
            if lhs != rhs {
                report.fail("sl2", format!("{name} fails"), identity_witness(name, lhs, rhs));
            }
        }
        report
    }

    pub fn commutes_with(&self, other: &Sl2Triple) -> bool {
        let a = [&self.x, &self.h, &self.y];
        let b = [&other.x, &other.h, &other.y];
        a.iter().all(|p| b.iter().all(|q| p.bracket(q).is_zero()))
    }
}

/// Completes `(grading, lowering)` to an sl2-triple `(X, H, Y)` with
/// `Y = lowering` and `H` the grading operator, solving `[X, Y] = H` for a
/// degree 2 operator `X`.
pub fn complete_sl2(grading: &Grading, lowering: &Matrix) -> Result<Sl2Triple> {
    let n = grading.dim();
    if lowering.rows() != n || lowering.cols() != n {
        return Err(HodgeError::DimensionMismatch("lowering operator".into()));
    }
    if let Some(v) = grading.homogeneity_violation(lowering, -2) {
        return Err(HodgeError::InvalidInput(format!(
            "lowering operator does not have degree −2 (vector {})",
            fmt_vec(&v)
        )));
    }
    // In an sl2-module the highest weight vectors of weight k are exactly
    // ker Y^{k+1} ∩ H_k, so Y and H already fix X on every string
    // u, Yu, .., Y^k u: X·Y^j u = j(k − j + 1)·Y^{j−1} u. This also makes
    // the completion unique whenever it exists.
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    // raise[c] = (r, λ): X sends column c to λ times column r
    let mut raise: Vec<Option<(usize, Scalar)>> = Vec::new();
    for k in grading.degrees().filter(|&k| k >= 0) {
        let top = grading.piece(k).kernel_of_power(lowering, k as u32 + 1)?;
        for u in top.basis_vectors() {
            let mut v = u;
            for j in 0..=k {
                raise.push((j > 0).then(|| (columns.len() - 1, Scalar::from_int(j * (k - j + 1)))));
                let next = lowering.apply(&v);
                columns.push(v);
                v = next;
            }
        }
    }
    if columns.len() != n {
        return Err(HodgeError::NoSl2Completion(format!(
            "the strings through ker Y^(k+1) ∩ H_k span {} dimensions out of {n}",
            columns.len()
        )));
    }
    let p = Matrix::from_rows(columns).transpose();
    let p_inv = p.inverse().ok_or_else(|| {
        HodgeError::NoSl2Completion("the strings through ker Y^(k+1) ∩ H_k are dependent".into())
    })?;
    let mut x = Matrix::zeros(n, n);
    for (col, r) in raise.into_iter().enumerate() {
        if let Some((row, c)) = r {
            x[(row, col)] = c;
        }
    }
    let triple = Sl2Triple { x: p.mul(&x).mul(&p_inv), h: grading.operator(), y: lowering.clone() };
    let check = triple.check(grading);
    if let Some(f) = check.first() {
        return Err(HodgeError::NoSl2Completion(f.to_string()));
    }
    Ok(triple)
}

/// As `complete_sl2`, but starting from the raising operator `X`.
pub fn complete_sl2_from_raising(grading: &Grading, raising: &Matrix) -> Result<Sl2Triple> {
    let t = complete_sl2(&grading.negate(), raising)?;
    Ok(Sl2Triple { x: raising.clone(), h: t.h.neg(), y: t.x })
}

/// `PH_{−k} = ker X^{k+1} ∩ H_{−k}`, cross-checked against `ker Y ∩ H_{−k}`.
pub fn primitive_subspace(t: &Sl2Triple, grading: &Grading, k: i64) -> Result<Subspace> {
    if k < 0 {
        return Err(HodgeError::InvalidInput("primitive degree must be ≥ 0".into()));
    }
    let piece = grading.piece(-k);
    let via_x = piece.kernel_of_power(&t.x, k as u32 + 1)?;
    let via_y = piece.kernel_of_power(&t.y, 1)?;
    if via_x != via_y {
        return Err(HodgeError::InvalidSl2(format!(
            "ker X^{} and ker Y differ on H_{}",
            k + 1,
            -k
        )));
    }
    Ok(via_x)
}

/// Highest weight vectors `ker X ∩ H_k`, cross-checked against
/// `ker Y^{k+1} ∩ H_k`.
pub fn coprimitive_subspace(t: &Sl2Triple, grading: &Grading, k: i64) -> Result<Subspace> {
    if k < 0 {
        return Err(HodgeError::InvalidInput("primitive degree must be ≥ 0".into()));
    }
    let piece = grading.piece(k);
    let via_x = piece.kernel_of_power(&t.x, 1)?;
    let via_y = piece.kernel_of_power(&t.y, k as u32 + 1)?;
    if via_x != via_y {
        return Err(HodgeError::InvalidSl2(format!(
            "ker X and ker Y^{} differ on H_{k}",
            k + 1
        )));
    }
    Ok(via_x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzPiece {
    /// Primitive degree: the piece is `X^j·PH_{−k}`.
    pub k: i64,
    pub j: i64,
    pub subspace: Subspace,
}

pub fn lefschetz_decomposition(t: &Sl2Triple, grading: &Grading) -> Result<Vec<LefschetzPiece>> {
    let n = grading.dim();
    let mut out = Vec::new();
    let mut total = Subspace::zero(n);
    let mut count = 0;
    for d in grading.degrees().filter(|&d| d <= 0).collect::<Vec<_>>() {
        let k = -d;
        let prim = primitive_subspace(t, grading, k)?;
        if prim.is_zero() {
            continue;
        }
        let mut img = prim;
        for j in 0..=k {
            count += img.dim();
            total = total.sum(&img)?;
            out.push(LefschetzPiece { k, j, subspace: img.clone() });
            img = img.image_under(&t.x)?;
        }
    }
    if count != n || !total.is_full() {
        return Err(HodgeError::InvalidSl2(format!(
            "Lefschetz pieces span {} dimensions out of {n}",
            total.dim()
        )));
    }
    Ok(out)
}

fn fmt_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Nilpotent Jordan block of size `n`: `e_{i+1} ↦ e_i`, `e_0 ↦ 0`.
pub fn jordan_block(n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        m[(i, i + 1)] = Scalar::from_int(1);
    }
    m
}

/// Direct sum of Jordan blocks of the given sizes.
pub fn jordan_matrix(sizes: &[usize]) -> Matrix {
    let blocks: Vec<Matrix> = sizes.iter().map(|&s| jordan_block(s)).collect();
    Matrix::block_diag(&blocks.iter().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::kernel;

    fn op(m: Matrix) -> NilpotentOp {
        NilpotentOp::new(m).unwrap()
    }

    #[test]
    fn zero_operator_has_single_jump() {
        let w = weight_filtration(&NilpotentOp::zero(3), 4).unwrap();
        assert_eq!(w.graded_dims(), [(4, 3)].into_iter().collect());
    }

    #[test]
    fn jordan_three() {
        let n = op(jordan_block(3));
        let w = weight_filtration(&n, 0).unwrap();
        assert_eq!(w.graded_dims(), [(-2, 1), (0, 1), (2, 1)].into_iter().collect());
        let a2 = n.matrix().pow(2);
        assert_eq!(w.step(1), kernel(&a2));
        assert_eq!(w.step(0), kernel(&a2));
        assert_eq!(w.step(-1), crate::exact::image(&a2));
        assert_eq!(w.step(-2), crate::exact::image(&a2));
    }

    #[test]
    fn jordan_two_plus_one() {
        let w = weight_filtration(&op(jordan_matrix(&[2, 1])), 0).unwrap();
        assert_eq!(w.graded_dims(), [(-1, 1), (0, 1), (1, 1)].into_iter().collect());
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        assert_eq!(NilpotentOp::new(Matrix::identity(2)), Err(HodgeError::NotNilpotent));
    }

    #[test]
    fn centering_is_reindexing() {
        let n = op(jordan_matrix(&[3, 2, 2, 1]));
        let w0 = weight_filtration(&n, 0).unwrap();
        let w5 = weight_filtration(&n, 5).unwrap();
        assert_eq!(w0, w5.shift(5));
    }

    #[test]
    fn completion_of_trivial_data() {
        let g = Grading::from_degrees(&[0, 0]);
        let t = complete_sl2(&g, &Matrix::zeros(2, 2)).unwrap();
        assert_eq!(t, Sl2Triple::zero(2));
    }

    #[test]
    fn completion_of_defining_representation() {
        let g = Grading::from_degrees(&[-1, 1]);
        // Y e1 = e0
        let y = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        let t = complete_sl2(&g, &y).unwrap();
        assert_eq!(t.x, Matrix::from_ints(&[&[0, 0], &[1, 0]]));
        assert_eq!(t.h, Matrix::from_ints(&[&[-1, 0], &[0, 1]]));
    }

    #[test]
    fn completion_of_jordan_three() {
        let g = Grading::from_degrees(&[-2, 0, 2]);
        let y = jordan_block(3);
        let t = complete_sl2(&g, &y).unwrap();
        assert_eq!(t.x, Matrix::from_ints(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0]]));
        assert!(t.check(&g).passed());
        let back = complete_sl2_from_raising(&g, &t.x).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn hard_lefschetz_failure_has_no_completion() {
        // grades −1, 1 with Y = 0 cannot come from sl2
        let g = Grading::from_degrees(&[-1, 1]);
        assert!(matches!(complete_sl2(&g, &Matrix::zeros(2, 2)), Err(HodgeError::NoSl2Completion(_))));
    }

    #[test]
    fn primitive_pieces_of_irreps() {
        let g = Grading::from_degrees(&[-2, 0, 2]);
        let t = complete_sl2(&g, &jordan_block(3)).unwrap();
        assert_eq!(primitive_subspace(&t, &g, 2).unwrap().dim(), 1);
        assert!(primitive_subspace(&t, &g, 0).unwrap().is_zero());
        let pieces = lefschetz_decomposition(&t, &g).unwrap();
        assert_eq!(pieces.iter().map(|p| (p.k, p.j)).collect::<Vec<_>>(), vec![(2, 0), (2, 1), (2, 2)]);

        // V_2 ⊕ V_0
        let g = Grading::from_degrees(&[-2, 0, 2, 0]);
        let y = jordan_matrix(&[3, 1]);
        let t = complete_sl2(&g, &y).unwrap();
        let p0 = primitive_subspace(&t, &g, 0).unwrap();
        assert_eq!(p0, Subspace::coordinate(4, &[3]));
    }
}
