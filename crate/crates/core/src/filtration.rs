//! Decreasing (Hodge-type) and increasing (weight-type) filtrations.
//!
//! Both are stored by their jump indices only. A decreasing filtration is the
//! whole space below its lowest jump and zero above its highest; an
//! increasing one is zero below its lowest jump and the whole space above
//! its highest.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Scalar, Subquotient, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecreasingFiltration {
    ambient_dim: usize,
    /// `p ↦ F^p` for every `p` with `F^p ≠ F^{p+1}`.
    jumps: BTreeMap<i64, Subspace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncreasingFiltration {
    ambient_dim: usize,
    /// `k ↦ W_k` for every `k` with `W_k ≠ W_{k-1}`.
    jumps: BTreeMap<i64, Subspace>,
}

fn check_ambient(ambient_dim: usize, steps: &BTreeMap<i64, Subspace>) -> Result<()> {
    if let Some((k, s)) = steps.iter().find(|(_, s)| s.ambient_dim() != ambient_dim) {
        return Err(HodgeError::DimensionMismatch(format!(
            "step {k} lives in dimension {} instead of {ambient_dim}",
            s.ambient_dim()
        )));
    }
    Ok(())
}

impl DecreasingFiltration {
    /// Builds a filtration from explicitly listed steps. Unlisted indices take
    /// the value of the next listed index above them; indices above the last
    /// listed one are zero, indices below the first are the whole space.
    pub fn from_steps(ambient_dim: usize, steps: BTreeMap<i64, Subspace>) -> Result<Self> {
        check_ambient(ambient_dim, &steps)?;
        let listed: Vec<(&i64, &Subspace)> = steps.iter().collect();
        for w in listed.windows(2) {
            let ((p, lo), (q, hi)) = (w[0], w[1]);
            if !lo.contains(hi) {
                return Err(HodgeError::InvalidFiltration(format!(
                    "F^{q} is not contained in F^{p}"
                )));
            }
        }
        let mut jumps = BTreeMap::new();
        let Some((&first, _)) = steps.iter().next() else {
            if ambient_dim > 0 {
                return Err(HodgeError::InvalidFiltration(
                    "a filtration of a nonzero space needs at least one step".into(),
                ));
            }
            return Ok(DecreasingFiltration { ambient_dim, jumps });
        };
        let full = Subspace::full(ambient_dim);
        let mut above = Subspace::zero(ambient_dim);
        for (&p, s) in steps.iter().rev() {
            if *s != above {
                jumps.insert(p, s.clone());
            }
            above = s.clone();
        }
        if above != full {
            jumps.insert(first - 1, full);
        }
        Ok(DecreasingFiltration { ambient_dim, jumps })
    }

    /// `F^p` is everything for `p ≤ at` and zero above.
    pub fn trivial(ambient_dim: usize, at: i64) -> Self {
        let mut jumps = BTreeMap::new();
        if ambient_dim > 0 {
            jumps.insert(at, Subspace::full(ambient_dim));
        }
        DecreasingFiltration { ambient_dim, jumps }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn jumps(&self) -> &BTreeMap<i64, Subspace> {
        &self.jumps
    }

    pub fn min_index(&self) -> Option<i64> {
        self.jumps.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.jumps.keys().next_back().copied()
    }

    pub fn step(&self, p: i64) -> Subspace {
        match self.jumps.range(p..).next() {
            Some((_, s)) => s.clone(),
            None => Subspace::zero(self.ambient_dim),
        }
    }

    /// Reindexes `F^p ↦ F^{p+l}`, the effect of a Tate twist by `l`.
    pub fn shift(&self, l: i64) -> Self {
        DecreasingFiltration {
            ambient_dim: self.ambient_dim,
            jumps: self.jumps.iter().map(|(&p, s)| (p - l, s.clone())).collect(),
        }
    }

    /// Transports the filtration along `v ↦ p·v`.
    pub fn transform(&self, p: &Matrix) -> Self {
        DecreasingFiltration {
            ambient_dim: self.ambient_dim,
            jumps: self.jumps.iter().map(|(&k, s)| (k, s.transform(p))).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let keys = self.jumps.keys().chain(other.jumps.keys()).copied();
        let steps = keys
            .map(|p| (p, direct_sum_subspace(&self.step(p), &other.step(p))))
            .collect();
        Self::from_steps(self.ambient_dim + other.ambient_dim, steps)
            .expect("direct sum of filtrations is a filtration")
    }

    /// `F^p(A⊗B) = Σ_{a+b=p} F^a A ⊗ F^b B`.
    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.ambient_dim * other.ambient_dim;
        let (Some(a0), Some(a1), Some(b0), Some(b1)) =
            (self.min_index(), self.max_index(), other.min_index(), other.max_index())
        else {
            return DecreasingFiltration { ambient_dim: n, jumps: BTreeMap::new() };
        };
        let mut steps = BTreeMap::new();
        for p in a0 + b0..=a1 + b1 {
            let mut acc = Subspace::zero(n);
            for a in a0..=a1 {
                let piece = tensor_subspace(&self.step(a), &other.step(p - a));
                acc = acc.sum(&piece).expect("same ambient");
            }
            steps.insert(p, acc);
        }
        Self::from_steps(n, steps).expect("tensor of filtrations is a filtration")
    }

    /// Filtration induced on `sub / quot_by`: step `p` is the image of
    /// `F^p ∩ sub`, in the coordinates of `Subquotient::new(sub, quot_by)`.
    pub fn induced_on_subquotient(&self, sub: &Subspace, quot_by: &Subspace) -> Result<Self> {
        let sq = Subquotient::new(sub.clone(), quot_by.clone())?;
        self.induced_on(&sq)
    }

    pub fn induced_on(&self, sq: &Subquotient) -> Result<Self> {
        if sq.ambient_dim() != self.ambient_dim {
            return Err(HodgeError::DimensionMismatch(
                "subquotient of a different space".into(),
            ));
        }
        let steps = self
            .jumps
            .keys()
            .map(|&p| Ok((p, sq.project_subspace(&self.step(p))?)))
            .collect::<Result<_>>()?;
        Self::from_steps(sq.dim(), steps)
    }
}

impl IncreasingFiltration {
    /// Builds a filtration from explicitly listed steps. Unlisted indices take
    /// the value of the closest listed index below them; indices below the
    /// first listed one are zero, indices above the last are the whole space.
    pub fn from_steps(ambient_dim: usize, steps: BTreeMap<i64, Subspace>) -> Result<Self> {
        check_ambient(ambient_dim, &steps)?;
        let listed: Vec<(&i64, &Subspace)> = steps.iter().collect();
        for w in listed.windows(2) {
            let ((k, lo), (l, hi)) = (w[0], w[1]);
            if !hi.contains(lo) {
                return Err(HodgeError::InvalidFiltration(format!(
                    "W_{k} is not contained in W_{l}"
                )));
            }
        }
        let mut jumps = BTreeMap::new();
        let Some((&last, _)) = steps.iter().next_back() else {
            if ambient_dim > 0 {
                return Err(HodgeError::InvalidFiltration(
                    "a filtration of a nonzero space needs at least one step".into(),
                ));
            }
            return Ok(IncreasingFiltration { ambient_dim, jumps });
        };
        let full = Subspace::full(ambient_dim);
        let mut below = Subspace::zero(ambient_dim);
        for (&k, s) in &steps {
            if *s != below {
                jumps.insert(k, s.clone());
            }
            below = s.clone();
        }
        if below != full {
            jumps.insert(last + 1, full);
        }
        Ok(IncreasingFiltration { ambient_dim, jumps })
    }

    /// `W_k` is zero for `k < at` and everything from `at` on.
    pub fn trivial(ambient_dim: usize, at: i64) -> Self {
        let mut jumps = BTreeMap::new();
        if ambient_dim > 0 {
            jumps.insert(at, Subspace::full(ambient_dim));
        }
        IncreasingFiltration { ambient_dim, jumps }
    }

    /// The filtration `W_k = ⊕_{j ≤ k} pieces[j]` of a grading.
    pub fn from_grading(ambient_dim: usize, pieces: &BTreeMap<i64, Subspace>) -> Result<Self> {
        let mut acc = Subspace::zero(ambient_dim);
        let mut steps = BTreeMap::new();
        for (&k, s) in pieces {
            acc = acc.sum(s)?;
            steps.insert(k, acc.clone());
        }
        Self::from_steps(ambient_dim, steps)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn jumps(&self) -> &BTreeMap<i64, Subspace> {
        &self.jumps
    }

    pub fn min_index(&self) -> Option<i64> {
        self.jumps.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.jumps.keys().next_back().copied()
    }

    pub fn step(&self, k: i64) -> Subspace {
        match self.jumps.range(..=k).next_back() {
            Some((_, s)) => s.clone(),
            None => Subspace::zero(self.ambient_dim),
        }
    }

    /// Reindexes `W_k ↦ W_{k+by}`, so the new `W_k` is the old `W_{k+by}`.
    pub fn shift(&self, by: i64) -> Self {
        IncreasingFiltration {
            ambient_dim: self.ambient_dim,
            jumps: self.jumps.iter().map(|(&k, s)| (k - by, s.clone())).collect(),
        }
    }

    pub fn transform(&self, p: &Matrix) -> Self {
        IncreasingFiltration {
            ambient_dim: self.ambient_dim,
            jumps: self.jumps.iter().map(|(&k, s)| (k, s.transform(p))).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let keys = self.jumps.keys().chain(other.jumps.keys()).copied();
        let steps = keys
            .map(|k| (k, direct_sum_subspace(&self.step(k), &other.step(k))))
            .collect();
        Self::from_steps(self.ambient_dim + other.ambient_dim, steps)
            .expect("direct sum of filtrations is a filtration")
    }

    /// `gr_k = W_k / W_{k-1}` with lift and projection data.
    pub fn graded_piece(&self, k: i64) -> Subquotient {
        Subquotient::new(self.step(k), self.step(k - 1)).expect("filtration steps are nested")
    }

    /// Nonzero graded pieces, in increasing order of index.
    pub fn graded_pieces(&self) -> Vec<(i64, Subquotient)> {
        self.jumps.keys().map(|&k| (k, self.graded_piece(k))).collect()
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut prev = 0;
        self.jumps
            .iter()
            .map(|(&k, s)| {
                let d = s.dim() - prev;
                prev = s.dim();
                (k, d)
            })
            .collect()
    }

    pub fn induced_on(&self, sq: &Subquotient) -> Result<Self> {
        if sq.ambient_dim() != self.ambient_dim {
            return Err(HodgeError::DimensionMismatch(
                "subquotient of a different space".into(),
            ));
        }
        let steps = self
            .jumps
            .keys()
            .map(|&k| Ok((k, sq.project_subspace(&self.step(k))?)))
            .collect::<Result<_>>()?;
        Self::from_steps(sq.dim(), steps)
    }
}

pub fn graded_piece(w: &IncreasingFiltration, k: i64) -> Subquotient {
    w.graded_piece(k)
}

pub fn induced_on_subquotient(
    f: &DecreasingFiltration,
    sub: &Subspace,
    quot_by: &Subspace,
) -> Result<DecreasingFiltration> {
    f.induced_on_subquotient(sub, quot_by)
}

/// Bigraded pieces `H^{p,w-p} = F'^p ∩ F''^{w-p}` and whether they decompose
/// the space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Opposedness {
    pub opposed: bool,
    /// Nonzero pieces keyed by `(p, q)`.
    pub pieces: BTreeMap<(i64, i64), Subspace>,
    pub total_dim: usize,
}

pub fn is_w_opposed(
    fp: &DecreasingFiltration,
    fpp: &DecreasingFiltration,
    w: i64,
) -> Result<Opposedness> {
    if fp.ambient_dim() != fpp.ambient_dim() {
        return Err(HodgeError::DimensionMismatch("filtrations of different spaces".into()));
    }
    let n = fp.ambient_dim();
    let mut pieces = BTreeMap::new();
    if let (Some(top1), Some(top2)) = (fp.max_index(), fpp.max_index()) {
        for p in (w - top2)..=top1 {
            let piece = fp.step(p).intersect(&fpp.step(w - p))?;
            if !piece.is_zero() {
                pieces.insert((p, w - p), piece);
            }
        }
    }
    let total_dim: usize = pieces.values().map(Subspace::dim).sum();
    let mut span = Subspace::zero(n);
    for s in pieces.values() {
        span = span.sum(s)?;
    }
    Ok(Opposedness { opposed: total_dim == n && span.is_full(), pieces, total_dim })
}

pub fn direct_sum_subspace(a: &Subspace, b: &Subspace) -> Subspace {
    let (n, m) = (a.ambient_dim(), b.ambient_dim());
    let mut vecs = Vec::with_capacity(a.dim() + b.dim());
    for v in a.basis_vectors() {
        let mut x = v;
        x.extend(std::iter::repeat_n(Scalar::default(), m));
        vecs.push(x);
    }
    for v in b.basis_vectors() {
        let mut x = vec![Scalar::default(); n];
        x.extend(v);
        vecs.push(x);
    }
    Subspace::from_vectors(n + m, &vecs).expect("consistent lengths")
}

/// Span of `a ⊗ b` for basis vectors, matching `Matrix::kron` ordering.
pub fn tensor_subspace(a: &Subspace, b: &Subspace) -> Subspace {
    let n = a.ambient_dim() * b.ambient_dim();
    let mut vecs = Vec::with_capacity(a.dim() * b.dim());
    for x in a.basis_vectors() {
        for y in b.basis_vectors() {
            vecs.push(x.iter().flat_map(|xi| y.iter().map(move |yj| xi * yj)).collect());
        }
    }
    Subspace::from_vectors(n, &vecs).expect("consistent lengths")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Scalar;

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        let vecs: Vec<Vec<Scalar>> =
            vs.iter().map(|v| v.iter().map(|&x| Scalar::from_int(x)).collect()).collect();
        Subspace::from_vectors(n, &vecs).unwrap()
    }

    fn dec(n: usize, steps: Vec<(i64, Subspace)>) -> DecreasingFiltration {
        DecreasingFiltration::from_steps(n, steps.into_iter().collect()).unwrap()
    }

    #[test]
    fn queries_clamp_outside_support() {
        let f = dec(2, vec![(1, span(2, &[&[1, 0]]))]);
        assert!(f.step(0).is_full());
        assert!(f.step(-7).is_full());
        assert_eq!(f.step(1).dim(), 1);
        assert!(f.step(2).is_zero());
        assert_eq!(f.min_index(), Some(0));
    }

    #[test]
    fn gaps_take_the_next_listed_step() {
        let f = dec(2, vec![(-2, Subspace::full(2)), (3, span(2, &[&[0, 1]]))]);
        assert_eq!(f.step(0).dim(), 1);
        assert_eq!(f.step(3).dim(), 1);
        assert!(f.step(4).is_zero());
        assert!(f.step(-3).is_full());
    }

    #[test]
    fn rejects_non_nested_steps() {
        let steps = [(0, span(2, &[&[1, 0]])), (1, span(2, &[&[0, 1]]))].into_iter().collect();
        assert!(DecreasingFiltration::from_steps(2, steps).is_err());
        let steps = [(0, span(2, &[&[1, 0]])), (1, span(2, &[&[0, 1]]))].into_iter().collect();
        assert!(IncreasingFiltration::from_steps(2, steps).is_err());
    }

    #[test]
    fn trivial_weight_filtration_has_one_graded_piece() {
        let w = IncreasingFiltration::trivial(3, 0);
        assert_eq!(w.graded_piece(0).dim(), 3);
        assert_eq!(w.graded_piece(1).dim(), 0);
        assert_eq!(w.graded_piece(-1).dim(), 0);
    }

    #[test]
    fn full_flag_has_one_dimensional_pieces() {
        let steps = [
            (-1, span(3, &[&[1, 0, 0]])),
            (0, span(3, &[&[1, 0, 0], &[0, 1, 0]])),
            (1, Subspace::full(3)),
        ]
        .into_iter()
        .collect();
        let w = IncreasingFiltration::from_steps(3, steps).unwrap();
        let dims = w.graded_dims();
        assert_eq!(dims, [(-1, 1), (0, 1), (1, 1)].into_iter().collect());
        assert_eq!(dims.values().sum::<usize>(), 3);
    }

    #[test]
    fn induced_filtration_on_whole_space_is_unchanged() {
        let f = dec(2, vec![(0, Subspace::full(2)), (1, span(2, &[&[1, 0]]))]);
        let g = f.induced_on_subquotient(&Subspace::full(2), &Subspace::zero(2)).unwrap();
        assert_eq!(g, f);
        // sub = F^1 gives a one-step filtration of a line
        let h = f.induced_on_subquotient(&f.step(1), &Subspace::zero(2)).unwrap();
        assert_eq!(h.ambient_dim(), 1);
        assert_eq!(h.jumps().len(), 1);
        assert!(h.step(1).is_full());
        assert!(h.step(2).is_zero());
    }

    #[test]
    fn opposedness_examples() {
        let h0 = DecreasingFiltration::trivial(3, 0);
        let o = is_w_opposed(&h0, &h0, 0).unwrap();
        assert!(o.opposed);
        assert_eq!(o.pieces.len(), 1);
        assert_eq!(o.pieces[&(0, 0)].dim(), 3);

        let fp = dec(2, vec![(0, Subspace::full(2)), (1, span(2, &[&[1, 0]]))]);
        let fpp = dec(2, vec![(0, Subspace::full(2)), (1, span(2, &[&[0, 1]]))]);
        let o = is_w_opposed(&fp, &fpp, 1).unwrap();
        assert!(o.opposed);
        assert_eq!(o.pieces[&(1, 0)], span(2, &[&[1, 0]]));
        assert_eq!(o.pieces[&(0, 1)], span(2, &[&[0, 1]]));

        let o = is_w_opposed(&fp, &fp, 1).unwrap();
        assert!(!o.opposed);
        assert_eq!(o.total_dim, 2);
    }

    #[test]
    fn tensor_of_hodge_tate_flags() {
        // F^0 = everything, F^1 = first coordinate
        let f = dec(2, vec![(0, Subspace::full(2)), (1, span(2, &[&[0, 1]]))]);
        let t = f.tensor(&f);
        assert_eq!(t.step(0).dim(), 4);
        assert_eq!(t.step(1).dim(), 3);
        assert_eq!(t.step(2).dim(), 1);
        assert!(t.step(3).is_zero());
    }
}
