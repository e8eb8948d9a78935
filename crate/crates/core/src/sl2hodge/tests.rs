use super::*;
use crate::harness::generators::{generate_polarized_fixture, lefschetz_pair, Block, Summand};
use crate::hodge::{check_pure, check_polarization};
use crate::nilpotent::{complete_sl2, jordan_block, NilpotentOp};

fn ints(rows: &[&[i64]]) -> Matrix {
    Matrix::from_ints(rows)
}

fn coord_flag(n: usize, steps: &[(i64, &[usize])]) -> DecreasingFiltration {
    let steps = steps.iter().map(|&(p, idx)| (p, Subspace::coordinate(n, idx))).collect();
    DecreasingFiltration::from_steps(n, steps).unwrap()
}

/// `H^*(ℙ¹)` centered at weight 1: `e0` of type (0,0) in degree −1 and the
/// class of a point `e1` of type (1,1) in degree 1.
fn p1() -> (Sl2HodgeData, SesquilinearForm) {
    let f = coord_flag(2, &[(0, &[0, 1]), (1, &[1])]);
    let grading = Grading::from_degrees(&[-1, 1]);
    let y = ints(&[&[0, 1], &[0, 0]]);
    let triple = complete_sl2(&grading, &y).unwrap();
    let d = Sl2HodgeData { fprime: f.clone(), fsecond: f, central_weight: 1, grading, triple };
    (d, SesquilinearForm::new(ints(&[&[0, 1], &[1, 0]]), 1).unwrap())
}

/// Limiting structure of a degenerating family with a single Jordan block of
/// size 3, Hodge-Tate, centered at 0.
fn j3() -> (HodgeLefschetzData, SesquilinearForm) {
    let f = coord_flag(3, &[(-1, &[0, 1, 2]), (0, &[1, 2]), (1, &[2])]);
    let n = NilpotentOp::new(jordan_block(3)).unwrap();
    let d = HodgeLefschetzData { fprime: f.clone(), fsecond: f, central_weight: 0, n };
    let g = ints(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
    (d, SesquilinearForm::new(g, 0).unwrap())
}

#[test]
fn p1_completion_matches_hand_computation() {
    let (d, _) = p1();
    assert_eq!(d.triple.x, ints(&[&[0, 0], &[1, 0]]));
    assert_eq!(d.triple.h, ints(&[&[-1, 0], &[0, 1]]));
}

#[test]
fn p1_is_polarized_by_both_criteria() {
    let (d, s) = p1();
    assert!(check_sl2_hodge(&d).passed());
    assert!(check_sl2_polarization(&d, &s).unwrap().passed());
    assert!(check_sl2_polarization_lowering(&d, &s).unwrap().passed());
    assert!(check_equivalent_polarization_criterion(&d, &s).unwrap());
    assert!(check_hard_lefschetz(&d).passed());
}

#[test]
fn p1_sign_flip_fails_both_criteria() {
    let (d, s) = p1();
    let r = check_sl2_polarization(&d, &s.negate()).unwrap();
    assert!(!r.passed());
    assert!(!check_equivalent_polarization_criterion(&d, &s.negate()).unwrap());
}

#[test]
fn p1_with_filtration_breaking_raising_operator_fails() {
    let (mut d, _) = p1();
    // swapping the roles of e0 and e1 sends F^1 = ⟨e1⟩ to ⟨e0⟩ ⊄ F^2
    d.triple = complete_sl2(&Grading::from_degrees(&[1, -1]), &ints(&[&[0, 0], &[1, 0]])).unwrap();
    d.grading = Grading::from_degrees(&[1, -1]);
    assert!(!check_sl2_hodge(&d).passed());
}

#[test]
fn pairing_of_wrong_twist_is_an_error() {
    let (d, s) = p1();
    let s = SesquilinearForm { target_twist: 0, ..s };
    assert!(matches!(check_sl2_polarization(&d, &s), Err(HodgeError::TwistMismatch { .. })));
}

#[test]
fn j3_is_a_polarized_hodge_lefschetz_structure() {
    let (d, s) = j3();
    let r = check_hodge_lefschetz(&d, Some(&s)).unwrap();
    assert!(r.passed(), "{:?}", r.first());
    let neg = check_hodge_lefschetz(&d, Some(&s.negate())).unwrap();
    assert!(!neg.passed());
}

#[test]
fn j3_completion_doubles() {
    let (d, _) = j3();
    let g = Grading::from_degrees(&[-2, 0, 2]);
    let t = complete_sl2(&g, d.n.matrix()).unwrap();
    assert_eq!(t.x, ints(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0]]));
}

#[test]
fn j3_with_misplaced_hodge_filtration_fails() {
    let (mut d, _) = j3();
    // N must lower F by one step; putting e0 into F^1 breaks it
    d.fprime = coord_flag(3, &[(-1, &[0, 1, 2]), (0, &[0, 1]), (1, &[0])]);
    d.fsecond = d.fprime.clone();
    assert!(!check_hodge_lefschetz(&d, None).unwrap().passed());
}

#[test]
fn p1xp1_bisl2_merges() {
    let b = Block::irrep(1).tensor(&Block::irrep(1).swap());
    let (d, s) = (b.bisl2(), b.pairing());
    assert!(check_bisl2_hodge(&d).passed());
    assert!(check_bisl2_polarization(&d, &s).unwrap().passed());
    let out = merge_bisl2(&d, Some(&s)).unwrap();
    assert!(!out.alarm);
    let merged = out.merged;
    assert!(check_equivalent_polarization_criterion(&merged, &s).unwrap());
    // the primitive part of the middle degree is one-dimensional
    let prim = crate::nilpotent::primitive_subspace(&merged.triple, &merged.grading, 0).unwrap();
    assert_eq!(prim.dim(), 1);
    assert_eq!(merged.grading.piece(0).dim(), 2);
}

#[test]
fn merge_rejects_invalid_input() {
    let b = Block::irrep(1).tensor(&Block::irrep(1).swap());
    let d = b.bisl2();
    assert!(matches!(merge_bisl2(&d, Some(&b.pairing().negate())), Err(HodgeError::InvalidInput(_))));
    let mut broken = d.clone();
    broken.triple2.x = broken.triple2.x.scale(&Scalar::from_int(2));
    assert!(matches!(merge_bisl2(&broken, None), Err(HodgeError::InvalidInput(_))));
}

#[test]
fn scrambled_merge_without_alarm() {
    for seed in 0..3 {
        let f = generate_polarized_fixture(seed, &[Summand::new(2, 1), Summand { elliptic: true, ..Summand::new(0, 2) }])
            .unwrap();
        let (d, s) = f.bisl2();
        let out = merge_bisl2(&d, Some(&s)).unwrap();
        assert!(!out.alarm, "seed {seed}: {:?}", out.polarization_report);
    }
}

#[test]
fn twist_of_single_grade_is_identity() {
    // (E ⊗ E)(1) has weight 0
    let h = Block::elliptic().tensor(&Block::elliptic()).twist(1);
    let g = Grading::from_degrees(&[0; 4]);
    let t = twist_by_grading(&h.fprime, &h.fsecond, &g, &Matrix::zeros(4, 4)).unwrap();
    assert_eq!(t.fprime, h.fprime);
    assert_eq!(t.fsecond, h.fsecond);
    assert_eq!(t.center, 0);
}

#[test]
fn twist_turns_cup_product_into_lowering_operator() {
    // H^0(ℙ¹) in weight 0 and H^2(ℙ¹) in weight 2, L the point class
    let f = coord_flag(2, &[(0, &[0, 1]), (1, &[1])]);
    let g = Grading::from_degrees(&[0, 2]);
    let l = ints(&[&[0, 0], &[1, 0]]);
    let t = twist_by_grading(&f, &f, &g, &l).unwrap();
    // both pieces become Hodge-Tate of type (0,0) and (−1,−1)
    assert_eq!(t.fprime, coord_flag(2, &[(-1, &[0, 1]), (0, &[0])]));
    assert_eq!(t.center, -1);
    let hl = HodgeLefschetzData { fprime: t.fprime, fsecond: t.fsecond, central_weight: t.center, n: t.lowering };
    assert!(check_hodge_lefschetz(&hl, None).unwrap().passed());
}

#[test]
fn twist_rejects_operator_of_wrong_degree() {
    let f = coord_flag(2, &[(0, &[0, 1]), (1, &[1])]);
    let g = Grading::from_degrees(&[0, 2]);
    assert!(twist_by_grading(&f, &f, &g, &ints(&[&[0, 1], &[0, 0]])).is_err());
}

#[test]
fn p1xp1_twist_feeds_hodge_lefschetz() {
    let b = Block::irrep(1).tensor(&Block::irrep(1).swap());
    let d = b.sl2();
    let g = d.grading.shift(d.central_weight);
    let t = twist_by_grading(&d.fprime, &d.fsecond, &g, &d.triple.x).unwrap();
    assert_eq!(t.center, -2);
    let hl = HodgeLefschetzData { fprime: t.fprime, fsecond: t.fsecond, central_weight: t.center, n: t.lowering };
    assert!(check_hodge_lefschetz(&hl, None).unwrap().passed());
}

fn jordan_tensor_cone() -> PolarizedCone {
    Block::irrep(1).tensor(&Block::irrep(1).swap()).cone()
}

#[test]
fn jordan_tensor_cone_is_polarized() {
    let c = jordan_tensor_cone();
    let r = check_cone_polarization(&c, DEFAULT_SAMPLE_BUDGET, 7).unwrap();
    assert!(r.passed(), "{:?}", r.report.first());
    assert!(r.sampled);
    assert_eq!(r.samples.len(), 2 + 1 + DEFAULT_SAMPLE_BUDGET);
    let bad = PolarizedCone { pairing: c.pairing.negate(), ..c };
    assert!(!check_cone_polarization(&bad, 2, 7).unwrap().passed());
}

#[test]
fn noncommuting_generators_fail() {
    let mut c = jordan_tensor_cone();
    c.cone.generators.push(NilpotentOp::new(Matrix::identity(2).kron(&jordan_block(2)).transpose()).unwrap());
    let r = check_cone_polarization(&c, 1, 0).unwrap();
    assert_eq!(r.report.first().unwrap().check, "commuting");
}

#[test]
fn reduction_of_jordan_tensor_cone() {
    let c = jordan_tensor_cone();
    assert_eq!(reducible_degrees(&c).unwrap(), vec![-1, 1]);
    for h in [-1, 1] {
        let r = reduce_cone(&c, h, 3, 11).unwrap();
        assert!(!r.alarm, "h = {h}: {:?}", r.report.report.first());
        assert_eq!(r.structure.dim(), 2);
        assert_eq!(r.structure.cone.generators.len(), 1);
        assert_eq!(r.structure.center(), 2 + h);
    }
    let (leaves, steps) = reduce_fully(&c, 3, 11).unwrap();
    assert!(steps.iter().all(|r| !r.alarm));
    assert!(!leaves.is_empty());
    for (path, leaf) in &leaves {
        let h = crate::hodge::PureHodge::new(leaf.fprime.clone(), leaf.fsecond.clone(), leaf.center()).unwrap();
        assert!(check_pure(&h).passed(), "{path:?}");
        assert!(check_polarization(&h, &leaf.pairing).unwrap().passed(), "{path:?}");
    }
}

#[test]
fn reduction_with_single_generator_gives_classical_polarization() {
    let c = Block::irrep(2).tensor(&Block::elliptic()).cone();
    assert_eq!(c.cone.generators.len(), 1);
    for h in reducible_degrees(&c).unwrap() {
        let r = reduce_cone(&c, h, 2, 1).unwrap();
        assert!(!r.alarm, "h = {h}");
        assert!(r.structure.cone.generators.is_empty());
    }
}

#[test]
fn degenerate_offset_gives_zero_structure() {
    let c = jordan_tensor_cone();
    let r = reduce_cone(&c, 0, 1, 0).unwrap();
    assert_eq!(r.structure.dim(), 0);
    assert!(!r.alarm);
}

#[test]
fn reduction_requires_a_generator_and_valid_input() {
    let b = Block::elliptic();
    assert!(matches!(reduce_cone(&b.cone(), 0, 1, 0), Err(HodgeError::InvalidInput(_))));
    let c = jordan_tensor_cone();
    let bad = PolarizedCone { pairing: c.pairing.negate(), ..c };
    assert!(matches!(reduce_cone(&bad, 1, 1, 0), Err(HodgeError::InvalidInput(_))));
}

#[test]
fn zero_generator_cone_is_a_polarized_pure_structure() {
    let c = Block::elliptic().cone();
    assert!(check_cone_polarization(&c, 5, 0).unwrap().passed());
}

#[test]
fn lefschetz_eigenvalues_are_positive_for_positive_multiplier() {
    let m = ints(&[&[2, 1], &[1, 3]]);
    let pair = lefschetz_pair(&m);
    let r = lefschetz_eigenvalues(&pair.l, &pair.eta, &pair.domain, &pair.codomain).unwrap();
    assert!(r.all_positive_real);
    let neg = lefschetz_pair(&m.neg());
    let r = lefschetz_eigenvalues(&neg.l, &neg.eta, &neg.domain, &neg.codomain).unwrap();
    assert!(!r.all_positive_real);
}

#[test]
fn hard_lefschetz_on_irreps_and_failure_on_truncation() {
    for m in 0..5 {
        assert!(check_hard_lefschetz(&Block::irrep(m).sl2()).passed());
    }
    let (mut d, _) = p1();
    d.triple.x = Matrix::zeros(2, 2);
    assert!(!check_hard_lefschetz(&d).passed());
}

#[test]
fn transform_preserves_verdicts() {
    let (d, s) = p1();
    let p = Matrix::from_rows(vec![
        vec![Scalar::from_int(1), Scalar::gaussian(1, 1)],
        vec![Scalar::from_int(0), Scalar::from_int(2)],
    ]);
    let d2 = d.transform(&p).unwrap();
    let s2 = s.in_basis(&p.inverse().unwrap());
    assert!(check_sl2_hodge(&d2).passed());
    assert!(check_equivalent_polarization_criterion(&d2, &s2).unwrap());
}
