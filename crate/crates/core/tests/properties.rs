use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hodgecalc::exact::kernel;
use hodgecalc::harness::generators::{Block, Frame};
use hodgecalc::harness::oracle::oracle_weight_filtration;
use hodgecalc::nilpotent::{complete_sl2, verify_weight_filtration, weight_filtration, NilpotentOp};
use hodgecalc::signcalc::{epsilon, godement_diagram_defect, parity_sign};
use hodgecalc::sl2hodge::{check_sl2_hodge, check_sl2_polarization};
use hodgecalc::{Matrix, Scalar, Subspace};

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn scalar() -> impl Strategy<Value = (i64, i64, i64)> {
    let part = prop_oneof![-20i64..=20, (1i64 << 40)..(1i64 << 62), -(1i64 << 62)..-(1i64 << 40)];
    (part.clone(), part, prop_oneof![1i64..=12, (1i64 << 40)..(1i64 << 62)])
}

fn to_scalar((a, b, d): (i64, i64, i64)) -> Scalar {
    &Scalar::gaussian(a, b) / &Scalar::from_int(d)
}

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-range..=range, rows * cols)
        .prop_map(move |v| Matrix::new(rows, cols, v.into_iter().map(Scalar::from_int).collect()))
}

/// Strictly upper triangular with entries in {−1, 0, 1}, then conjugated by
/// a random integral frame.
fn nilpotent() -> impl Strategy<Value = Matrix> {
    (1usize..=5, any::<u64>()).prop_flat_map(|(n, seed)| {
        prop::collection::vec(-1i64..=1, n * n).prop_map(move |v| {
            let mut m = Matrix::zeros(n, n);
            for r in 0..n {
                for c in r + 1..n {
                    m[(r, c)] = Scalar::from_int(v[r * n + c]);
                }
            }
            Frame::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).operator(&m)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_arithmetic_matches_big_rationals(x in scalar(), y in scalar()) {
        let (s, t) = (to_scalar(x), to_scalar(y));
        let (xr, xi) = (big(x.0, x.2), big(x.1, x.2));
        let (yr, yi) = (big(y.0, y.2), big(y.1, y.2));
        let sum = &s + &t;
        prop_assert_eq!(sum.re(), &xr + &yr);
        prop_assert_eq!(sum.im(), &xi + &yi);
        let prod = &s * &t;
        prop_assert_eq!(prod.re(), &xr * &yr - &xi * &yi);
        prop_assert_eq!(prod.im(), &xr * &yi + &xi * &yr);
        prop_assert_eq!(&(&s - &t) + &t, s.clone());
        if !t.is_zero() {
            prop_assert_eq!(&(&s / &t) * &t, s.clone());
        }
        // equal values compare equal whichever representation they landed in
        prop_assert_eq!(Scalar::new(xr, xi), s.clone());
        prop_assert_eq!((&s * &t).conj(), &s.conj() * &t.conj());
    }

    #[test]
    fn subspace_dimension_formula(a in matrix(3, 5, 2), b in matrix(3, 5, 2)) {
        let (a, b) = (Subspace::span(5, &a).unwrap(), Subspace::span(5, &b).unwrap());
        let sum = a.sum(&b).unwrap();
        let meet = a.intersect(&b).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(sum.contains(&a) && sum.contains(&b));
        prop_assert!(a.contains(&meet) && b.contains(&meet));
    }

    #[test]
    fn kernel_of_power_is_a_restricted_kernel(s in matrix(3, 4, 2), op in matrix(4, 4, 1), k in 1u32..=3) {
        let s = Subspace::span(4, &s).unwrap();
        let direct = kernel(&op.pow(k)).intersect(&s).unwrap();
        prop_assert_eq!(s.kernel_of_power(&op, k).unwrap(), direct);
    }

    #[test]
    fn weight_filtration_properties(m in nilpotent(), center in -3i64..=3) {
        let n = NilpotentOp::new(m.clone()).unwrap();
        let w = weight_filtration(&n, center).unwrap();
        prop_assert!(verify_weight_filtration(&m, &w, center).passed());
        prop_assert_eq!(&oracle_weight_filtration(&n, center).unwrap(), &w);
        let dims = w.graded_dims();
        for (&k, &d) in &dims {
            prop_assert_eq!(dims.get(&(2 * center - k)).copied().unwrap_or(0), d, "gr dims not symmetric");
        }
        let moved = weight_filtration(&n, center + 2).unwrap();
        prop_assert_eq!(moved, w.shift(-2));
    }

    #[test]
    fn weight_filtration_is_equivariant(m in nilpotent(), center in -2i64..=2, seed in any::<u64>()) {
        let f = Frame::random(m.rows(), &mut ChaCha8Rng::seed_from_u64(seed));
        let w = weight_filtration(&NilpotentOp::new(m.clone()).unwrap(), center).unwrap();
        let moved = weight_filtration(&NilpotentOp::new(f.operator(&m)).unwrap(), center).unwrap();
        prop_assert_eq!(moved, w.transform(&f.p));
    }

    #[test]
    fn sl2_completion_and_polarization_survive_a_frame(a in 0u32..=3, b in 0u32..=2, seed in any::<u64>()) {
        let block = Block::irrep(a).tensor(&Block::irrep(b).swap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Frame::random(block.dim(), &mut rng);
        let d = f.sl2(&block.sl2());
        let s = f.form(&block.pairing());
        let t = complete_sl2(&d.grading, &d.triple.y).unwrap();
        prop_assert_eq!(&t.x, &d.triple.x);
        prop_assert!(check_sl2_hodge(&d).passed());
        prop_assert!(check_sl2_polarization(&d, &s).unwrap().passed());
        prop_assert!(!check_sl2_polarization(&d, &s.negate()).unwrap().passed() || d.dim() == 0);
    }

    #[test]
    fn epsilon_is_a_twisted_cocycle(i in -1000i64..=1000, j in -1000i64..=1000) {
        prop_assert_eq!(epsilon(i + j), epsilon(i) * epsilon(j) * parity_sign(i * j));
        prop_assert_eq!(epsilon(i + 4), epsilon(i));
        prop_assert_eq!(epsilon(i) * epsilon(-i), parity_sign(i));
    }

    #[test]
    fn godement_defect_depends_on_outer_degrees(i in 0u32..6, j in 0u32..6, k in 0u32..6, l in 0u32..6) {
        let d = godement_diagram_defect(i, j, k, l);
        prop_assert_eq!(d, parity_sign(i64::from(i * l)));
        prop_assert_eq!(d, godement_diagram_defect(i, 0, 0, l));
    }
}
