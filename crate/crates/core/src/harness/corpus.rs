//! The bundled fixture corpus and the builders behind it.
//!
//! Each bundled file under `fixtures/` is the canonical serialization of the
//! corresponding builder here; a test keeps the two in sync. Set
//! `HODGECALC_BLESS=1` while running that test to rewrite the files.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::format::{self, BiPiece, Check, Entry, FixtureFile, Verdict, FORMAT_VERSION};
use super::generators::{generate_polarized_fixture, lefschetz_pair, random_summands, Block};
use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Subspace};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::hodge::{tate_twist, PureHodge, SesquilinearForm};
use crate::nilpotent::{jordan_block, NilpotentOp};
use crate::sl2hodge::{BiSl2HodgeData, HodgeLefschetzData, PolarizedCone, Sl2HodgeData};

/// Bundled fixtures by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("p1", include_str!("../../fixtures/p1.fixture")),
    ("p1xp1", include_str!("../../fixtures/p1xp1.fixture")),
    ("elliptic", include_str!("../../fixtures/elliptic.fixture")),
    ("j3", include_str!("../../fixtures/j3.fixture")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

// library values to file entries

pub fn matrix_entry(m: &Matrix) -> Entry {
    Entry::Matrix { rows: format::rows_of(m) }
}

pub fn subspace_entry(s: &Subspace) -> Entry {
    Entry::Subspace { dim: s.ambient_dim(), span: s.basis_vectors() }
}

pub fn pairing_entry(s: &SesquilinearForm) -> Entry {
    Entry::Pairing(format::pairing_data(s))
}

pub fn pure_entry(h: &PureHodge) -> Entry {
    Entry::Pure {
        dim: h.dim(),
        weight: h.weight,
        fprime: format::steps_of_decreasing(&h.fprime),
        fsecond: format::steps_of_decreasing(&h.fsecond),
    }
}

pub fn mixed_entry(f1: &DecreasingFiltration, f2: &DecreasingFiltration, w: &IncreasingFiltration) -> Entry {
    Entry::Mixed {
        dim: f1.ambient_dim(),
        fprime: format::steps_of_decreasing(f1),
        fsecond: format::steps_of_decreasing(f2),
        weightfil: format::steps_of_increasing(w),
    }
}

pub fn sl2_entry(d: &Sl2HodgeData) -> Entry {
    Entry::Sl2 {
        dim: d.dim(),
        central_weight: d.central_weight,
        fprime: format::steps_of_decreasing(&d.fprime),
        fsecond: format::steps_of_decreasing(&d.fsecond),
        grading: format::steps_of_grading(&d.grading),
        lowering: format::rows_of(&d.triple.y),
    }
}

pub fn bisl2_entry(d: &BiSl2HodgeData) -> Entry {
    Entry::Bisl2 {
        dim: d.dim(),
        central_weight: d.central_weight,
        fprime: format::steps_of_decreasing(&d.fprime),
        fsecond: format::steps_of_decreasing(&d.fsecond),
        bigrading: d
            .bigrading
            .iter()
            .map(|(&(a, b), s)| BiPiece { bidegree: [a, b], span: s.basis_vectors() })
            .collect(),
        lowering1: format::rows_of(&d.triple1.y),
        lowering2: format::rows_of(&d.triple2.y),
    }
}

pub fn hodge_lefschetz_entry(d: &HodgeLefschetzData) -> Entry {
    Entry::HodgeLefschetz {
        dim: d.n.dim(),
        central_weight: d.central_weight,
        fprime: format::steps_of_decreasing(&d.fprime),
        fsecond: format::steps_of_decreasing(&d.fsecond),
        n: format::rows_of(d.n.matrix()),
    }
}

pub fn cone_entry(c: &PolarizedCone, seed: u64, sample_budget: usize) -> Entry {
    Entry::Cone {
        dim: c.dim(),
        fprime: format::steps_of_decreasing(&c.fprime),
        fsecond: format::steps_of_decreasing(&c.fsecond),
        weightfil: format::steps_of_increasing(&c.cone.weightfil),
        pairing: format::pairing_data(&c.pairing),
        generators: c.cone.generators.iter().map(|g| format::rows_of(g.matrix())).collect(),
        seed,
        sample_budget,
    }
}

struct Builder {
    file: FixtureFile,
}

impl Builder {
    fn new(description: &str) -> Builder {
        Builder {
            file: FixtureFile {
                format_version: FORMAT_VERSION,
                description: description.into(),
                structures: BTreeMap::new(),
                checks: Vec::new(),
            },
        }
    }

    fn put(&mut self, name: &str, e: Entry) -> &mut Self {
        self.file.structures.insert(name.into(), e);
        self
    }

    fn check(&mut self, op: &str, args: &[(&str, Value)], expect: Verdict, note: &str) -> &mut Self {
        self.file.checks.push(Check::new(op, args, expect).with_note(note));
        self
    }

    fn on(&mut self, op: &str, structure: &str, pairing: Option<&str>, expect: Verdict, note: &str) -> &mut Self {
        let mut args = vec![("structure", json!(structure))];
        if let Some(p) = pairing {
            args.push(("pairing", json!(p)));
        }
        self.check(op, &args, expect, note)
    }

    fn finish(&mut self) -> FixtureFile {
        self.file.clone()
    }
}

fn coord_flag(n: usize, steps: &[(i64, &[usize])]) -> DecreasingFiltration {
    let steps = steps.iter().map(|&(p, idx)| (p, Subspace::coordinate(n, idx))).collect();
    DecreasingFiltration::from_steps(n, steps).expect("coordinate flag")
}

/// `H^*(ℙ¹)` as an sl2-Hodge structure: `H^0 = ℂ(0)` in degree −1,
/// `H^2 = ℂ(−1)` in degree 1, lowering `H^2 → H^0` dual to cup product.
pub fn p1_structure() -> (Sl2HodgeData, SesquilinearForm) {
    let b = Block::irrep(1);
    (b.sl2(), b.pairing())
}

pub fn p1() -> FixtureFile {
    let (d, s) = p1_structure();
    let mut bad = d.clone();
    // the raising direction used as a lowering operator breaks the grading
    bad.triple.y = d.triple.x.clone();
    let top = PureHodge::hodge_tate(1, 1);
    Builder::new("H^*(P^1): hard Lefschetz and polarization, with sign flips that must fail")
        .put("H", sl2_entry(&d))
        .put("S", pairing_entry(&s))
        .put("S_neg", pairing_entry(&s.negate()))
        .put("H_bad_lowering", sl2_entry(&bad))
        .put("H2", pure_entry(&top))
        .put("S_H2", pairing_entry(&SesquilinearForm::new(Matrix::from_ints(&[&[-1]]), 2).expect("1x1")))
        .put("S_H2_neg", pairing_entry(&SesquilinearForm::new(Matrix::from_ints(&[&[1]]), 2).expect("1x1")))
        .on("check_sl2_hodge", "H", None, Verdict::Pass, "")
        .on("check_hard_lefschetz", "H", None, Verdict::Pass, "")
        .on("check_sl2_polarization", "H", Some("S"), Verdict::Pass, "")
        .on("check_sl2_polarization_lowering", "H", Some("S"), Verdict::Pass, "")
        .on("check_polarization_criteria", "H", Some("S"), Verdict::Pass, "")
        .on("check_sl2_polarization", "H", Some("S_neg"), Verdict::Fail, "sign flip")
        .on("check_sl2_polarization_lowering", "H", Some("S_neg"), Verdict::Fail, "sign flip")
        .on("check_polarization_criteria", "H", Some("S_neg"), Verdict::Fail, "sign flip")
        .on("check_sl2_hodge", "H_bad_lowering", None, Verdict::Fail, "lowering raises degree")
        .on("check_pure", "H2", None, Verdict::Pass, "")
        .on("check_polarization", "H2", Some("S_H2"), Verdict::Pass, "type (1,1) in Deligne's convention")
        .on("check_polarization", "H2", Some("S_H2_neg"), Verdict::Fail, "sign flip")
        .finish()
}

pub fn p1xp1_block() -> Block {
    Block::irrep(1).tensor(&Block::irrep(1).swap())
}

pub fn p1xp1() -> FixtureFile {
    let b = p1xp1_block();
    let pair = lefschetz_pair(&Matrix::from_ints(&[&[1]]));
    let twisted = lefschetz_pair(&Matrix::from_ints(&[&[2, 1], &[1, 3]]));
    let negative = lefschetz_pair(&Matrix::from_ints(&[&[-2, -1], &[-1, -3]]));
    let n = b.cone().cone.generators.iter().fold(Matrix::zeros(4, 4), |acc, g| acc.add(g.matrix()));
    let shifted = b.cone();
    let shifted = PolarizedCone {
        cone: crate::sl2hodge::ConeData { weightfil: shifted.cone.weightfil.shift(2), ..shifted.cone.clone() },
        ..shifted
    };
    let mut f = Builder::new("H^*(P^1 x P^1): the two Lefschetz classes as a bi-sl2 structure and as a cone");
    f.put("H", bisl2_entry(&b.bisl2()))
        .put("H_diag", sl2_entry(&b.sl2()))
        .put("S", pairing_entry(&b.pairing()))
        .put("S_neg", pairing_entry(&b.pairing().negate()))
        .put("C", cone_entry(&b.cone(), 7, 5))
        .put("C_neg", cone_entry(&PolarizedCone { pairing: b.pairing().negate(), ..b.cone() }, 7, 5))
        .put("C_shifted", cone_entry(&shifted, 7, 5))
        .put("N", matrix_entry(&n));
    for (tag, p) in [("", &pair), ("_m", &twisted), ("_neg", &negative)] {
        f.put(&format!("L{tag}"), matrix_entry(&p.l))
            .put(&format!("eta{tag}"), matrix_entry(&p.eta))
            .put(&format!("dom{tag}"), subspace_entry(&p.domain))
            .put(&format!("cod{tag}"), subspace_entry(&p.codomain));
    }
    let eig = |tag: &str| {
        vec![
            ("l", json!(format!("L{tag}"))),
            ("eta", json!(format!("eta{tag}"))),
            ("domain", json!(format!("dom{tag}"))),
            ("codomain", json!(format!("cod{tag}"))),
        ]
    };
    f.on("check_bisl2_hodge", "H", None, Verdict::Pass, "")
        .on("check_bisl2_polarization", "H", Some("S"), Verdict::Pass, "")
        .on("check_bisl2_polarization", "H", Some("S_neg"), Verdict::Fail, "sign flip")
        .on("merge_bisl2", "H", Some("S"), Verdict::Pass, "")
        .on("check_sl2_hodge", "H_diag", None, Verdict::Pass, "")
        .on("check_hard_lefschetz", "H_diag", None, Verdict::Pass, "")
        .on("check_sl2_polarization", "H_diag", Some("S"), Verdict::Pass, "")
        .on("check_polarization_criteria", "H_diag", Some("S"), Verdict::Pass, "")
        .on("check_polarization_criteria", "H", Some("S"), Verdict::Pass, "diagonal structure")
        .on("check_sl2_polarization", "H_diag", Some("S_neg"), Verdict::Fail, "sign flip")
        .on("check_cone_polarization", "C", None, Verdict::Pass, "")
        .on("check_cone_polarization", "C_neg", None, Verdict::Fail, "sign flip")
        .on("check_cone_polarization", "C_shifted", None, Verdict::Fail, "weight filtration shifted by 2")
        .check("reduce_cone", &[("structure", json!("C")), ("h", json!(-1))], Verdict::Pass, "")
        .check("reduce_cone", &[("structure", json!("C")), ("h", json!(1))], Verdict::Pass, "")
        .check(
            "weight_filtration",
            &[("operator", json!("N")), ("center", json!(2)), ("graded_dims", json!({"0": 1, "2": 2, "4": 1}))],
            Verdict::Pass,
            "N = N1 + N2",
        )
        .check(
            "weight_filtration",
            &[("operator", json!("N")), ("center", json!(2)), ("graded_dims", json!({"1": 1, "3": 2, "5": 1}))],
            Verdict::Fail,
            "shifted weights",
        )
        .check("eigenvalues_positive", &eig(""), Verdict::Pass, "eta = L")
        .check("eigenvalues_positive", &eig("_m"), Verdict::Pass, "eta = M L with M positive definite")
        .check("eigenvalues_positive", &eig("_neg"), Verdict::Fail, "M negative definite");
    f.finish()
}

pub fn elliptic_structure() -> (PureHodge, SesquilinearForm) {
    let b = Block::elliptic();
    let h = PureHodge::new(b.fprime.clone(), b.fsecond.clone(), 1).expect("elliptic curve");
    (h, b.pairing())
}

pub fn elliptic() -> FixtureFile {
    let (h, s) = elliptic_structure();
    let b = Block::elliptic();
    let degenerate = PureHodge { fsecond: h.fprime.clone(), ..h.clone() };
    let twisted = tate_twist(&h, -1);
    Builder::new("H^1 of an elliptic curve, with H^{1,0} spanned by (1, i)")
        .put("E", pure_entry(&h))
        .put("E_even", pure_entry(&PureHodge { weight: 2, ..h.clone() }))
        .put("E_degenerate", pure_entry(&degenerate))
        .put("E_twisted", pure_entry(&twisted))
        .put("S", pairing_entry(&s))
        .put("S_neg", pairing_entry(&s.negate()))
        .put("id", matrix_entry(&Matrix::identity(2)))
        .put("E_sl2", sl2_entry(&b.sl2()))
        .on("check_pure", "E", None, Verdict::Pass, "")
        .on("check_pure", "E_even", None, Verdict::Fail, "shifted weight")
        .on("check_pure", "E_degenerate", None, Verdict::Fail, "F'' = F' is not opposed")
        .on("check_polarization", "E", Some("S"), Verdict::Pass, "")
        .on("check_polarization", "E", Some("S_neg"), Verdict::Fail, "sign flip")
        .check(
            "check_morphism",
            &[("map", json!("id")), ("source", json!("E")), ("target", json!("E")), ("twist", json!(0))],
            Verdict::Pass,
            "",
        )
        .check(
            "check_morphism",
            &[("map", json!("id")), ("source", json!("E")), ("target", json!("E_twisted")), ("twist", json!(1))],
            Verdict::Pass,
            "E_twisted is E(-1), so E = E_twisted(1)",
        )
        .check(
            "check_morphism",
            &[("map", json!("id")), ("source", json!("E")), ("target", json!("E")), ("twist", json!(1))],
            Verdict::Fail,
            "",
        )
        .on("check_sl2_hodge", "E_sl2", None, Verdict::Pass, "trivial sl2 action")
        .on("check_sl2_polarization", "E_sl2", Some("S"), Verdict::Pass, "")
        .on("check_polarization_criteria", "E_sl2", Some("S"), Verdict::Pass, "")
        .on("check_hard_lefschetz", "E_sl2", None, Verdict::Pass, "")
        .finish()
}

/// Limiting structure of a degeneration with one Jordan block of size 3,
/// Hodge-Tate, centered at 0.
pub fn j3_structure() -> (HodgeLefschetzData, SesquilinearForm) {
    let f = coord_flag(3, &[(-1, &[0, 1, 2]), (0, &[1, 2]), (1, &[2])]);
    let n = NilpotentOp::new(jordan_block(3)).expect("nilpotent");
    let d = HodgeLefschetzData { fprime: f.clone(), fsecond: f, central_weight: 0, n };
    let g = Matrix::from_ints(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
    (d, SesquilinearForm::new(g, 0).expect("square"))
}

pub fn j3() -> FixtureFile {
    let (d, s) = j3_structure();
    let w = crate::nilpotent::weight_filtration(&d.n, 0).expect("nilpotent");
    Builder::new("Jordan block of size 3: limiting mixed Hodge structure of weight 0")
        .put("H", hodge_lefschetz_entry(&d))
        .put("S", pairing_entry(&s))
        .put("S_neg", pairing_entry(&s.negate()))
        .put("N", matrix_entry(d.n.matrix()))
        .put("H_mixed", mixed_entry(&d.fprime, &d.fsecond, &w))
        .put("H_mixed_shifted", mixed_entry(&d.fprime, &d.fsecond, &w.shift(1)))
        .on("check_hodge_lefschetz", "H", Some("S"), Verdict::Pass, "")
        .on("check_hodge_lefschetz", "H", Some("S_neg"), Verdict::Fail, "sign flip")
        .on("check_mixed", "H", None, Verdict::Pass, "with W = W(N)")
        .on("check_mixed", "H_mixed", None, Verdict::Pass, "")
        .on("check_mixed", "H_mixed_shifted", None, Verdict::Fail, "W shifted by 1")
        .check(
            "weight_filtration",
            &[("operator", json!("N")), ("center", json!(0)), ("graded_dims", json!({"-2": 1, "0": 1, "2": 1}))],
            Verdict::Pass,
            "",
        )
        .check(
            "check_morphism",
            &[("map", json!("N")), ("source", json!("H")), ("target", json!("H")), ("twist", json!(-1))],
            Verdict::Pass,
            "N: H -> H(-1)",
        )
        .check(
            "check_morphism",
            &[("map", json!("N")), ("source", json!("H")), ("target", json!("H")), ("twist", json!(0))],
            Verdict::Fail,
            "N is not a morphism H -> H",
        )
        .check("epsilon_cocycle", &[("bound", json!(10))], Verdict::Pass, "")
        .check("godement_defect", &[("bound", json!(3))], Verdict::Pass, "")
        .finish()
}

pub type FixtureBuilder = fn() -> FixtureFile;

/// Builders of the bundled fixtures, in the order of `BUNDLED`.
pub fn builders() -> Vec<(&'static str, FixtureBuilder)> {
    vec![("p1", p1), ("p1xp1", p1xp1), ("elliptic", elliptic), ("j3", j3)]
}

/// A generated structure in scrambled coordinates, with every check it must
/// pass and a sign flip that must fail.
pub fn scrambled_fixture(seed: u64, max_dim: usize) -> Result<FixtureFile> {
    let summands = random_summands(seed, max_dim);
    let g = generate_polarized_fixture(seed, &summands)?;
    let (bi, s) = g.bisl2();
    let (sl2, _) = g.sl2();
    let cone = g.cone();
    let description = format!("seed {seed}: {}", serde_json::to_string(&summands).map_err(|e| HodgeError::Fixture(e.to_string()))?);
    let mut b = Builder::new(&description);
    b.put("H", bisl2_entry(&bi))
        .put("H_diag", sl2_entry(&sl2))
        .put("S", pairing_entry(&s))
        .put("S_neg", pairing_entry(&s.negate()))
        .on("check_bisl2_hodge", "H", None, Verdict::Pass, "")
        .on("check_bisl2_polarization", "H", Some("S"), Verdict::Pass, "")
        .on("merge_bisl2", "H", Some("S"), Verdict::Pass, "")
        .on("check_sl2_hodge", "H_diag", None, Verdict::Pass, "")
        .on("check_sl2_polarization", "H_diag", Some("S"), Verdict::Pass, "")
        .on("check_polarization_criteria", "H_diag", Some("S"), Verdict::Pass, "")
        .on("check_hard_lefschetz", "H_diag", None, Verdict::Pass, "")
        .on("check_sl2_polarization", "H_diag", Some("S_neg"), Verdict::Fail, "sign flip");
    if !cone.cone.generators.is_empty() {
        b.put("C", cone_entry(&cone, seed, 2)).on("check_cone_polarization", "C", None, Verdict::Pass, "");
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::runner::run_file;

    fn fixture_path(name: &str) -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.fixture"))
    }

    #[test]
    fn bundled_files_match_builders() {
        let bless = std::env::var_os("HODGECALC_BLESS").is_some();
        for ((name, text), (bname, build)) in BUNDLED.iter().zip(builders()) {
            assert_eq!(*name, bname);
            let want = format::to_canonical_string(&build());
            if bless {
                std::fs::write(fixture_path(name), &want).unwrap();
            } else {
                assert_eq!(*text, want, "{name}.fixture is stale; rerun with HODGECALC_BLESS=1");
            }
        }
    }

    #[test]
    fn bundled_files_round_trip() {
        for (name, text) in BUNDLED {
            let f = format::parse_fixture(text).unwrap();
            assert_eq!(format::to_canonical_string(&f), *text, "{name}");
        }
    }

    #[test]
    fn bundled_expectations_all_match() {
        for (name, build) in builders() {
            let r = run_file(name, &build()).unwrap();
            assert!(r.all_matched(), "{r}");
            assert!(r.outcomes.iter().any(|o| o.expect == Verdict::Fail), "{name} has no expected failure");
        }
    }

    #[test]
    fn scrambled_regenerations_pass() {
        for seed in 0..8 {
            let f = scrambled_fixture(seed, 8).unwrap();
            let text = format::to_canonical_string(&f);
            let back = format::parse_fixture(&text).unwrap();
            let r = run_file("scrambled", &back).unwrap();
            assert!(r.all_matched(), "{r}");
        }
    }
}
