//! Brute-force oracle for the monodromy weight filtration.
//!
//! Enumerates every increasing chain of subspaces drawn from the lattice
//! generated by kernels and images of powers of `N` and keeps those with the
//! two defining properties. Exponential; meant for dimension ≤ 6.

use std::collections::BTreeMap;

use crate::error::{HodgeError, Result};
use crate::exact::{kernel, Matrix, Subspace};
use crate::filtration::IncreasingFiltration;
use crate::nilpotent::NilpotentOp;

pub const ORACLE_MAX_DIM: usize = 6;

fn canonical_subspaces(a: &Matrix, index: u32) -> Result<Vec<Subspace>> {
    let n = a.rows();
    let mut basic = Vec::new();
    for p in 0..=index {
        let k = kernel(&a.pow(p));
        for q in 0..=index {
            let im = Subspace::full(n).image_under(&a.pow(q))?;
            basic.push(k.intersect(&im)?);
        }
    }
    let mut all: Vec<Subspace> = Vec::new();
    for s in basic {
        if !all.contains(&s) {
            all.push(s);
        }
    }
    // close under sums; the lattice of a single nilpotent is finite
    loop {
        let mut fresh = Vec::new();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let s = all[i].sum(&all[j])?;
                if !all.contains(&s) && !fresh.contains(&s) {
                    fresh.push(s);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        all.extend(fresh);
    }
    all.sort_by_key(Subspace::dim);
    Ok(all)
}

struct Search<'a> {
    a: &'a Matrix,
    center: i64,
    m: i64,
    candidates: Vec<Subspace>,
    chain: Vec<Subspace>,
    found: Vec<Vec<Subspace>>,
}

impl Search<'_> {
    /// `chain[t]` is `W_{center − m + t}` for `t = 0..2m`; `W_{center+m}` is
    /// the whole space and everything below `center − m` vanishes.
    fn step(&self, t: usize) -> Subspace {
        let n = self.a.rows();
        if t >= self.chain.len() {
            Subspace::full(n)
        } else {
            self.chain[t].clone()
        }
    }

    fn below(&self, k: i64) -> Subspace {
        let t = k - (self.center - self.m);
        if t < 0 {
            Subspace::zero(self.a.rows())
        } else {
            self.step(t as usize)
        }
    }

    fn go(&mut self) {
        let len = 2 * self.m as usize;
        if self.chain.len() == len {
            if self.lefschetz_ok() {
                self.found.push(self.chain.clone());
            }
            return;
        }
        let t = self.chain.len();
        let k = self.center - self.m + t as i64;
        let prev = if t == 0 { Subspace::zero(self.a.rows()) } else { self.chain[t - 1].clone() };
        for c in self.candidates.clone() {
            if !c.contains(&prev) {
                continue;
            }
            // N W_k ⊆ W_{k−2}
            let target = self.below(k - 2);
            if !target.contains(&c.image_under(self.a).expect("square")) {
                continue;
            }
            self.chain.push(c);
            self.go();
            self.chain.pop();
        }
    }

    fn lefschetz_ok(&self) -> bool {
        let full = Subspace::full(self.a.rows());
        // the top step must also be compatible with N
        if !self.below(self.center + self.m - 2).contains(&full.image_under(self.a).expect("square")) {
            return false;
        }
        for l in 0..=self.m {
            let hi = self.below(self.center + l);
            let hi_prev = self.below(self.center + l - 1);
            let lo = self.below(self.center - l);
            let lo_prev = self.below(self.center - l - 1);
            if hi.dim() - hi_prev.dim() != lo.dim() - lo_prev.dim() {
                return false;
            }
            // injective on gr: {x ∈ W_{c+l} : N^l x ∈ W_{c−l−1}} = W_{c+l−1}
            let p = self.a.pow(l as u32);
            let kernel_part = hi.intersect(&lo_prev.preimage_under(&p).expect("square")).expect("same ambient");
            if kernel_part != hi_prev {
                return false;
            }
        }
        true
    }
}

/// Every filtration with `N W_k ⊆ W_{k−2}` and `N^l: gr_{c+l} ≅ gr_{c−l}`
/// whose steps lie in the kernel/image lattice of `N`. Uniqueness of `W(N)`
/// means exactly one is expected.
pub fn oracle_candidates(n: &NilpotentOp, center: i64) -> Result<Vec<IncreasingFiltration>> {
    let dim = n.dim();
    if dim > ORACLE_MAX_DIM {
        return Err(HodgeError::InvalidInput(format!("oracle limited to dimension {ORACLE_MAX_DIM}")));
    }
    let a = n.matrix();
    let index = n.index();
    if dim == 0 || index <= 1 {
        return Ok(vec![IncreasingFiltration::trivial(dim, center)]);
    }
    let m = i64::from(index) - 1;
    let mut search = Search {
        a,
        center,
        m,
        candidates: canonical_subspaces(a, index)?,
        chain: Vec::new(),
        found: Vec::new(),
    };
    search.go();
    search
        .found
        .into_iter()
        .map(|chain| {
            let mut steps = BTreeMap::new();
            for (t, s) in chain.into_iter().enumerate() {
                steps.insert(center - m + t as i64, s);
            }
            steps.insert(center + m, Subspace::full(dim));
            IncreasingFiltration::from_steps(dim, steps)
        })
        .collect()
}

/// The unique solution found by exhaustive search; none or several is an
/// error.
pub fn oracle_weight_filtration(n: &NilpotentOp, center: i64) -> Result<IncreasingFiltration> {
    let mut found = oracle_candidates(n, center)?;
    match found.len() {
        1 => Ok(found.pop().expect("one element")),
        0 => Err(HodgeError::CriterionDisagreement("oracle found no weight filtration".into())),
        k => Err(HodgeError::CriterionDisagreement(format!("oracle found {k} weight filtrations"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::{jordan_block, jordan_matrix, weight_filtration};

    fn op(m: Matrix) -> NilpotentOp {
        NilpotentOp::new(m).unwrap()
    }

    #[test]
    fn zero_operator_single_jump() {
        let w = oracle_weight_filtration(&NilpotentOp::zero(3), 2).unwrap();
        assert_eq!(w.graded_dims(), [(2, 3)].into_iter().collect());
    }

    #[test]
    fn j3_matches() {
        let n = op(jordan_block(3));
        let w = oracle_weight_filtration(&n, 0).unwrap();
        assert_eq!(w.graded_dims(), [(-2, 1), (0, 1), (2, 1)].into_iter().collect());
        assert_eq!(w, weight_filtration(&n, 0).unwrap());
    }

    #[test]
    fn j2_plus_j2_and_mixed_types_match() {
        for sizes in [vec![2, 2], vec![3, 1], vec![2, 1, 1], vec![3, 2], vec![4, 2], vec![3, 3]] {
            let n = op(jordan_matrix(&sizes));
            assert_eq!(oracle_weight_filtration(&n, 1).unwrap(), weight_filtration(&n, 1).unwrap(), "{sizes:?}");
        }
    }
}
