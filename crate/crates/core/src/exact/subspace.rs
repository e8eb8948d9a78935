//! Subspaces of ℚ(i)^n in canonical (reduced row echelon) form, and
//! subquotients `sub / quot` with explicit coordinates.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{Matrix, Scalar};
use crate::error::{HodgeError, Result};

/// A subspace, stored by the nonzero rows of its reduced row echelon basis.
/// Two subspaces are equal iff their canonical bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    #[serde(skip)]
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {}; ", self.dim(), self.ambient_dim)?;
        f.debug_list().entries(self.basis.row_vecs()).finish()?;
        write!(f, ")")
    }
}

impl Subspace {
    /// Span of the rows of `spanning`.
    pub fn span(ambient_dim: usize, spanning: &Matrix) -> Result<Self> {
        if spanning.rows() > 0 && spanning.cols() != ambient_dim {
            return Err(HodgeError::DimensionMismatch(format!(
                "vectors of length {} in ambient dimension {}",
                spanning.cols(),
                ambient_dim
            )));
        }
        if spanning.rows() == 0 {
            return Ok(Self::zero(ambient_dim));
        }
        let r = spanning.rref();
        let keep: Vec<usize> = (0..r.rank).collect();
        let all: Vec<usize> = (0..ambient_dim).collect();
        Ok(Subspace { ambient_dim, basis: r.matrix.submatrix(&keep, &all), pivots: r.pivots })
    }

    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let m = Matrix::from_rows_with_cols(vectors.to_vec(), ambient_dim)?;
        Self::span(ambient_dim, &m)
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let vecs: Vec<Vec<Scalar>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Scalar::zero(); ambient_dim];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Self::from_vectors(ambient_dim, &vecs).expect("indices in range")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(HodgeError::DimensionMismatch(format!(
                "subspaces of ambient dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, b) in v.iter_mut().zip(self.basis.row(r)) {
                if !b.is_zero() {
                    *x -= &(&c * b);
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && other.dim() <= self.dim()
            && (0..other.dim()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Subspace::span(self.ambient_dim, &self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        if other.contains(self) {
            return Ok(self.clone());
        }
        if self.contains(other) {
            return Ok(other.clone());
        }
        // x = Aᵀc lies in `other` iff its reduction modulo `other` vanishes.
        let at = self.basis.transpose();
        let reduced = other.reduction_matrix().mul(&at);
        let coeffs = reduced.null_space();
        let vecs = coeffs.mul(&self.basis);
        Subspace::span(self.ambient_dim, &vecs)
    }

    /// Matrix of the linear map `v ↦ reduce(v)`; its kernel is the subspace.
    fn reduction_matrix(&self) -> Matrix {
        let n = self.ambient_dim;
        let mut r = Matrix::identity(n);
        for (row, &p) in self.pivots.iter().enumerate() {
            for i in 0..n {
                let b = &self.basis[(row, i)];
                if !b.is_zero() {
                    r[(i, p)] -= b;
                }
            }
        }
        r
    }

    /// Image of the subspace under the operator `op`.
    pub fn image_under(&self, op: &Matrix) -> Result<Subspace> {
        if op.cols() != self.ambient_dim {
            return Err(HodgeError::DimensionMismatch(format!(
                "operator with {} columns applied to subspace of ambient dimension {}",
                op.cols(),
                self.ambient_dim
            )));
        }
        Subspace::span(op.rows(), &self.basis.mul(&op.transpose()))
    }

    /// `{v ∈ self : op^power·v = 0}`, solved in coordinates of the basis so
    /// the linear system has only `dim` unknowns.
    pub fn kernel_of_power(&self, op: &Matrix, power: u32) -> Result<Subspace> {
        if op.cols() != self.ambient_dim || !op.is_square() {
            return Err(HodgeError::DimensionMismatch(format!(
                "operator of size {}x{} on ambient dimension {}",
                op.rows(),
                op.cols(),
                self.ambient_dim
            )));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let opt = op.transpose();
        let mut images = self.basis.clone();
        for _ in 0..power {
            images = images.mul(&opt);
        }
        let coeffs = images.transpose().null_space();
        Subspace::span(self.ambient_dim, &coeffs.mul(&self.basis))
    }

    /// `{v : op·v ∈ self}`.
    pub fn preimage_under(&self, op: &Matrix) -> Result<Subspace> {
        if op.rows() != self.ambient_dim {
            return Err(HodgeError::DimensionMismatch(format!(
                "operator with {} rows pulled back to ambient dimension {}",
                op.rows(),
                self.ambient_dim
            )));
        }
        Ok(kernel(&self.reduction_matrix().mul(op)))
    }

    /// Vectors of `self` whose classes form a basis of `self / sub`.
    pub fn quotient_basis(&self, sub: &Subspace) -> Result<Matrix> {
        self.check_same_ambient(sub)?;
        if !self.contains(sub) {
            return Err(HodgeError::NotContained(
                "quotient_basis needs the second subspace inside the first".into(),
            ));
        }
        let mut acc = sub.clone();
        let mut chosen = Vec::new();
        for i in 0..self.dim() {
            let v = self.basis.row(i);
            if !acc.contains_vector(v) {
                chosen.push(v.to_vec());
                acc = acc.sum(&Subspace::from_vectors(self.ambient_dim, &[v.to_vec()])?)?;
            }
        }
        Matrix::from_rows_with_cols(chosen, self.ambient_dim)
    }

    /// Transports the subspace along a change of coordinates `v ↦ p·v`.
    pub fn transform(&self, p: &Matrix) -> Subspace {
        self.image_under(p).expect("square change of basis")
    }
}

/// `{v : m·v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    Subspace::span(m.cols(), &m.null_space()).expect("null space has matching width")
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m.rows(), &m.transpose()).expect("columns have matching length")
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

pub fn quotient_basis(a: &Subspace, b: &Subspace) -> Result<Matrix> {
    a.quotient_basis(b)
}

/// The subquotient `sub / quot` with a fixed basis of lifts.
#[derive(Clone, Debug)]
pub struct Subquotient {
    sub: Subspace,
    quot: Subspace,
    lifts: Matrix,
    // coordinates of a vector of `sub` in the basis (lifts, quot basis) are
    // read off from the entries at `select` through `solver`
    select: Vec<usize>,
    solver: Matrix,
}

impl Subquotient {
    pub fn new(sub: Subspace, quot: Subspace) -> Result<Self> {
        let lifts = sub.quotient_basis(&quot)?;
        let full = lifts.vstack(quot.basis());
        // pivot columns of `full` give an invertible square block
        let select = full.rref().pivots;
        debug_assert_eq!(select.len(), full.rows());
        let all: Vec<usize> = (0..full.rows()).collect();
        let square = full.submatrix(&all, &select).transpose();
        let solver = square.inverse().expect("pivot columns give an invertible block");
        Ok(Subquotient { sub, quot, lifts, select, solver })
    }

    /// `sub` itself, with no quotient.
    pub fn of_subspace(sub: Subspace) -> Self {
        let quot = Subspace::zero(sub.ambient_dim());
        Self::new(sub, quot).expect("zero is contained in everything")
    }

    pub fn dim(&self) -> usize {
        self.lifts.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.sub.ambient_dim()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn quot(&self) -> &Subspace {
        &self.quot
    }

    /// Lifts of the subquotient basis, one per row.
    pub fn lifts(&self) -> &Matrix {
        &self.lifts
    }

    /// Coordinates of the class of `v`; `v` must lie in `sub`.
    pub fn coords(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.sub.contains_vector(v) {
            return Err(HodgeError::NotContained(
                "vector is not in the numerator of the subquotient".into(),
            ));
        }
        let picked: Vec<Scalar> = self.select.iter().map(|&i| v[i].clone()).collect();
        let c = self.solver.apply(&picked);
        Ok(c[..self.dim()].to_vec())
    }

    pub fn lift(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![Scalar::zero(); self.ambient_dim()];
        for (c, r) in coords.iter().zip(0..self.dim()) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.lifts.row(r)) {
                *o += &(c * x);
            }
        }
        out
    }

    /// Image of `(s ∩ sub) + quot` in subquotient coordinates.
    pub fn project_subspace(&self, s: &Subspace) -> Result<Subspace> {
        let inside = s.intersect(&self.sub)?;
        let vecs: Vec<Vec<Scalar>> =
            inside.basis_vectors().iter().map(|v| self.coords(v)).collect::<Result<_>>()?;
        Subspace::from_vectors(self.dim(), &vecs)
    }

    /// Matrix of the map induced by `op` from this subquotient to `target`.
    /// `op` must map `sub` into `target.sub` and `quot` into `target.quot`.
    pub fn induced_map(&self, op: &Matrix, target: &Subquotient) -> Result<Matrix> {
        let q_image = self.quot.image_under(op)?;
        if !target.quot.contains(&q_image) {
            return Err(HodgeError::NotContained(
                "operator does not map the quotient into the target quotient".into(),
            ));
        }
        let mut out = Matrix::zeros(target.dim(), self.dim());
        for j in 0..self.dim() {
            let image = op.apply(self.lifts.row(j));
            let c = target.coords(&image)?;
            for (i, x) in c.into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn axes_intersect_trivially() {
        let x = Subspace::from_vectors(2, &[v(&[1, 0])]).unwrap();
        let y = Subspace::from_vectors(2, &[v(&[0, 1])]).unwrap();
        assert!(x.intersect(&y).unwrap().is_zero());
        assert!(x.sum(&y).unwrap().is_full());
    }

    #[test]
    fn kernel_of_jordan_block_is_a_line() {
        let j3 = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let k = kernel(&j3);
        assert_eq!(k.dim(), 1);
        assert!(k.contains_vector(&v(&[1, 0, 0])));
        assert_eq!(image(&j3).dim(), 2);
    }

    #[test]
    fn canonical_form_makes_equality_syntactic() {
        let a = Subspace::from_vectors(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        let b = Subspace::from_vectors(3, &[v(&[1, 2, 1]), v(&[1, 0, -1])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_basis_requires_containment() {
        let a = Subspace::from_vectors(3, &[v(&[1, 0, 0])]).unwrap();
        let b = Subspace::from_vectors(3, &[v(&[0, 1, 0])]).unwrap();
        assert!(matches!(a.quotient_basis(&b), Err(HodgeError::NotContained(_))));
        let full = Subspace::full(3);
        assert_eq!(full.quotient_basis(&a).unwrap().rows(), 2);
        let c = Subspace::zero(2);
        assert!(matches!(a.sum(&c), Err(HodgeError::DimensionMismatch(_))));
    }

    #[test]
    fn preimage_and_image() {
        let j3 = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let line = Subspace::coordinate(3, &[0]);
        let pre = line.preimage_under(&j3).unwrap();
        assert_eq!(pre, Subspace::coordinate(3, &[0, 1]));
        assert_eq!(pre.image_under(&j3).unwrap(), line);
    }

    #[test]
    fn subquotient_coordinates_round_trip() {
        let sub = Subspace::coordinate(3, &[0, 1]);
        let quot = Subspace::coordinate(3, &[0]);
        let sq = Subquotient::new(sub, quot).unwrap();
        assert_eq!(sq.dim(), 1);
        let c = sq.coords(&v(&[5, 2, 0])).unwrap();
        assert_eq!(c, v(&[2]));
        assert!(sq.coords(&v(&[0, 0, 1])).is_err());
        let lifted = sq.lift(&c);
        assert_eq!(sq.coords(&lifted).unwrap(), c);
    }
}
