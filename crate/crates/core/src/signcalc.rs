//! Formal sign calculus: the pushforward sign `ε(k)`, Koszul reordering of
//! graded tensor factors, and the sign defect of the Godement comparison
//! diagram for a composition of pushforwards.
//!
//! Nothing here carries sheaf or module data. Objects are multidegree symbols
//! and maps are sign rules; the single axiom is Deligne's rule
//! `φ(α⊗β) = (−1)^{an} α⊗β` for `α ∈ G^a K^m`, `β ∈ G^b L^n`.

use serde::Serialize;

/// `(−1)^e` as `±1`.
pub fn parity_sign(e: i64) -> i8 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `ε(k) = (−1)^{k(k−1)/2}`.
pub fn epsilon(k: i64) -> i8 {
    // k(k−1)/2 mod 2 depends only on k mod 4
    match k.rem_euclid(4) {
        0 | 1 => 1,
        _ => -1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleViolation {
    pub i: i64,
    pub j: i64,
    pub lhs: i8,
    pub rhs: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub bound: i64,
    pub checked: usize,
    pub violations: Vec<CocycleViolation>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `ε(i+j) = ε(i)ε(j)(−1)^{ij}` for `|i|, |j| ≤ bound`.
pub fn check_epsilon_cocycle(bound: u32) -> CocycleReport {
    let b = i64::from(bound);
    let mut violations = Vec::new();
    let mut checked = 0;
    for i in -b..=b {
        for j in -b..=b {
            checked += 1;
            let lhs = epsilon(i + j);
            let rhs = epsilon(i) * epsilon(j) * parity_sign(i * j);
            if lhs != rhs {
                violations.push(CocycleViolation { i, j, lhs, rhs });
            }
        }
    }
    CocycleReport { bound: b, checked, violations }
}

/// A graded symbol carrying a sign. `degrees` lists the layers of a nested
/// object from the outside in; the total degree is their sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FormalTerm {
    pub symbol: String,
    pub degrees: Vec<i64>,
    pub sign: i8,
}

impl FormalTerm {
    pub fn new(symbol: impl Into<String>, degrees: Vec<i64>) -> Self {
        FormalTerm { symbol: symbol.into(), degrees, sign: 1 }
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn with_sign(mut self, s: i8) -> Self {
        self.sign *= s;
        self
    }
}

/// A named map of formal terms, acting by a sign that depends on the
/// multidegrees of its inputs.
#[derive(Clone, Copy)]
pub struct SignRule {
    pub name: &'static str,
    pub sign: fn(&[FormalTerm]) -> i8,
}

impl SignRule {
    pub fn eval(&self, inputs: &[FormalTerm]) -> i8 {
        (self.sign)(inputs)
    }
}

impl std::fmt::Debug for SignRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

/// Sign of the permutation taking `factors` to the order `perm` (the new
/// position `p` holds the old factor `perm[p]`), by the Koszul rule.
pub fn koszul_sign(factors: &[FormalTerm], perm: &[usize]) -> i8 {
    assert_eq!(factors.len(), perm.len(), "permutation of the wrong length");
    let mut sign = 1;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                sign *= parity_sign(factors[perm[a]].total_degree() * factors[perm[b]].total_degree());
            }
        }
    }
    sign
}

/// The reordering `(A⊗B)⊗(C⊗D) → (A⊗C)⊗(B⊗D)` comparing the pairing on an
/// iterated pushforward term of bidegree `(i, j)` with the pairing on the
/// single pushforward of the same total degree.
pub fn pushforward_pairing_sign_model(i: i64, j: i64) -> i8 {
    let factors = [
        FormalTerm::new("A", vec![i]),
        FormalTerm::new("B", vec![j]),
        FormalTerm::new("C", vec![i]),
        FormalTerm::new("D", vec![j]),
    ];
    koszul_sign(&factors, &[0, 2, 1, 3])
}

/// For three pushforwards of degrees `i, j, k`, whether grouping as
/// `(ij)k` and as `i(jk)` gives the same sign once each side carries its ε
/// factors, and whether both match `ε(i+j+k)`.
pub fn associativity_holds(i: i64, j: i64, k: i64) -> bool {
    let left = epsilon(i) * epsilon(j) * epsilon(k) * pushforward_pairing_sign_model(i, j)
        * pushforward_pairing_sign_model(i + j, k);
    let right = epsilon(i) * epsilon(j) * epsilon(k) * pushforward_pairing_sign_model(j, k)
        * pushforward_pairing_sign_model(i, j + k);
    left == right && left == epsilon(i + j + k)
}

/// Deligne's rule for the tensor map of Godement resolutions at one layer:
/// inputs are `α ∈ G^a K^m` and `β ∈ G^b L^n` written as nested terms whose
/// first layer is the Godement degree and whose remaining layers make up the
/// degree inside the complex.
pub const PHI: SignRule = SignRule {
    name: "phi",
    sign: |inputs| {
        let (alpha, beta) = (&inputs[0], &inputs[1]);
        let a = alpha.degrees[0];
        let n: i64 = beta.degrees[1..].iter().sum();
        parity_sign(a * n)
    },
};

/// The natural identification `G^i f_* G^j ↪ (g∘f)_* G^{i+j}`, sign free.
pub const FLATTEN: SignRule = SignRule { name: "flatten", sign: |_| 1 };

fn flatten(t: &FormalTerm) -> FormalTerm {
    FormalTerm { symbol: t.symbol.clone(), degrees: vec![t.total_degree(), 0], sign: t.sign * FLATTEN.eval(std::slice::from_ref(t)) }
}

/// Merges two nested sections layer by layer, outside in, applying `φ` at
/// each layer to the tails starting there.
fn merge_nested(alpha: &FormalTerm, beta: &FormalTerm) -> FormalTerm {
    assert_eq!(alpha.degrees.len(), beta.degrees.len(), "sections of different depth");
    let mut sign = alpha.sign * beta.sign;
    let mut degrees = Vec::with_capacity(alpha.degrees.len());
    for t in 0..alpha.degrees.len() {
        let a = FormalTerm::new(alpha.symbol.clone(), alpha.degrees[t..].to_vec());
        let b = FormalTerm::new(beta.symbol.clone(), beta.degrees[t..].to_vec());
        if a.degrees.len() > 1 {
            sign *= PHI.eval(&[a, b]);
        }
        degrees.push(alpha.degrees[t] + beta.degrees[t]);
    }
    FormalTerm { symbol: format!("{}⊗{}", alpha.symbol, beta.symbol), degrees, sign }
}

/// Signs of the two routes around the comparison diagram for a section
/// `α⊗β ∈ g_*G^i f_*G^j A ⊗ g_*G^k f_*G^l B` of sheaves `A, B` in degree 0.
/// The top route first identifies each factor with a single Godement
/// resolution for `g∘f` and then merges. The bottom route merges the outer
/// layer, then the inner one, then identifies.
pub fn godement_routes(i: i64, j: i64, k: i64, l: i64) -> (i8, i8) {
    // innermost layer: the sheaves sit in complex degree 0
    let alpha = FormalTerm::new("α", vec![i, j, 0]);
    let beta = FormalTerm::new("β", vec![k, l, 0]);
    let top = {
        let (a, b) = (flatten(&alpha), flatten(&beta));
        merge_nested(&a, &b).sign
    };
    let bottom = flatten(&merge_nested(&alpha, &beta)).sign;
    (top, bottom)
}

/// Product of the signs of the two routes; `+1` means the diagram commutes
/// on this section.
pub fn godement_diagram_defect(i: u32, j: u32, k: u32, l: u32) -> i8 {
    let (top, bottom) = godement_routes(i.into(), j.into(), k.into(), l.into());
    top * bottom
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GodementRow {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub l: u32,
    pub defect: i8,
}

/// All defects with `0 ≤ i, j, k, l ≤ bound`.
pub fn godement_sweep(bound: u32) -> Vec<GodementRow> {
    let mut rows = Vec::new();
    for i in 0..=bound {
        for j in 0..=bound {
            for k in 0..=bound {
                for l in 0..=bound {
                    rows.push(GodementRow { i, j, k, l, defect: godement_diagram_defect(i, j, k, l) });
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_values() {
        let got: Vec<i8> = (-1..=4).map(epsilon).collect();
        assert_eq!(got, vec![-1, 1, 1, -1, -1, 1]);
        for k in -20..20 {
            let e = k * (k - 1) / 2;
            assert_eq!(epsilon(k), parity_sign(e), "k = {k}");
        }
    }

    #[test]
    fn cocycle_has_no_violations() {
        let r = check_epsilon_cocycle(10);
        assert!(r.passed());
        assert_eq!(r.checked, 21 * 21);
        assert_eq!(epsilon(2), epsilon(1) * epsilon(1) * parity_sign(1));
    }

    #[test]
    fn pairing_model_matches_swap_sign() {
        for i in -6..=6 {
            for j in -6..=6 {
                let d = pushforward_pairing_sign_model(i, j);
                assert_eq!(d, parity_sign(i * j), "({i}, {j})");
                assert_eq!(epsilon(i) * epsilon(j) * d, epsilon(i + j));
            }
            assert_eq!(pushforward_pairing_sign_model(0, i), 1);
        }
        assert_eq!(pushforward_pairing_sign_model(1, 1), -1);
    }

    #[test]
    fn triple_compositions_are_path_independent() {
        for i in -4..=4 {
            for j in -4..=4 {
                for k in -4..=4 {
                    assert!(associativity_holds(i, j, k), "({i}, {j}, {k})");
                }
            }
        }
    }

    #[test]
    fn koszul_sign_of_transposition() {
        let t = [FormalTerm::new("x", vec![1]), FormalTerm::new("y", vec![3]), FormalTerm::new("z", vec![2])];
        assert_eq!(koszul_sign(&t, &[1, 0, 2]), -1);
        assert_eq!(koszul_sign(&t, &[0, 2, 1]), 1);
        assert_eq!(koszul_sign(&t, &[2, 1, 0]), -1);
    }

    #[test]
    fn godement_defect_is_il_sign() {
        assert_eq!(godement_diagram_defect(1, 0, 0, 1), -1);
        let rows = godement_sweep(3);
        assert_eq!(rows.len(), 256);
        for r in &rows {
            assert_eq!(r.defect, parity_sign(i64::from(r.i * r.l)), "{r:?}");
        }
    }

    #[test]
    fn godement_defect_ignores_j_and_k() {
        for i in 0..4 {
            for l in 0..4 {
                let d = godement_diagram_defect(i, 0, 0, l);
                for j in 0..4 {
                    for k in 0..4 {
                        assert_eq!(godement_diagram_defect(i, j, k, l), d);
                    }
                }
            }
        }
    }
}
