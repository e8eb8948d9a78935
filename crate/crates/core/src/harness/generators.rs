//! Polarized sl2 and bi-sl2 Hodge structures assembled from irreducible
//! pieces, optionally written in scrambled coordinates.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Scalar, Subspace};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::hodge::SesquilinearForm;
use crate::nilpotent::{Grading, NilpotentOp, Sl2Triple};
use crate::sl2hodge::{BiSl2HodgeData, ConeData, PolarizedCone, Sl2HodgeData};

/// A polarized bi-sl2 Hodge structure in a basis of bihomogeneous vectors.
/// Either factor may act trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    pub weight: i64,
    /// Bidegree of each coordinate vector.
    pub degrees: Vec<(i64, i64)>,
    pub x: [Matrix; 2],
    pub y: [Matrix; 2],
    pub gram: Matrix,
}

fn coordinate_flag(n: usize, level: impl Fn(usize) -> i64) -> DecreasingFiltration {
    let levels: Vec<i64> = (0..n).map(&level).collect();
    let mut steps = BTreeMap::new();
    for &p in &levels {
        let idx: Vec<usize> = (0..n).filter(|&i| levels[i] >= p).collect();
        steps.insert(p, Subspace::coordinate(n, &idx));
    }
    DecreasingFiltration::from_steps(n, steps).expect("coordinate flag")
}

impl Block {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// The irreducible sl2 representation of highest weight `m` acting through
    /// the first factor, with `v_j` of type `(j, j)` and degree `2j − m`.
    pub fn irrep(m: u32) -> Block {
        let n = m as usize + 1;
        let mut x = Matrix::zeros(n, n);
        let mut y = Matrix::zeros(n, n);
        let mut gram = Matrix::zeros(n, n);
        for j in 0..n {
            if j + 1 < n {
                x[(j + 1, j)] = Scalar::from_int(((j + 1) * (n - 1 - j)) as i64);
                y[(j, j + 1)] = Scalar::from_int(1);
            }
            gram[(j, n - 1 - j)] = Scalar::from_int(1);
        }
        let f = coordinate_flag(n, |j| j as i64);
        Block {
            fprime: f.clone(),
            fsecond: f,
            weight: i64::from(m),
            degrees: (0..n).map(|j| (2 * j as i64 - i64::from(m), 0)).collect(),
            x: [x, Matrix::zeros(n, n)],
            y: [y, Matrix::zeros(n, n)],
            gram,
        }
    }

    /// `ℂ(t)`: one dimension of type `(−t, −t)`.
    pub fn tate(t: i64) -> Block {
        let f = DecreasingFiltration::trivial(1, -t);
        Block {
            fprime: f.clone(),
            fsecond: f,
            weight: -2 * t,
            degrees: vec![(0, 0)],
            x: [Matrix::zeros(1, 1), Matrix::zeros(1, 1)],
            y: [Matrix::zeros(1, 1), Matrix::zeros(1, 1)],
            gram: Matrix::from_ints(&[&[(-1i64).pow(t.rem_euclid(2) as u32)]]),
        }
    }

    /// `H¹` of an elliptic curve with `H^{1,0}` spanned by `(1, i)`.
    pub fn elliptic() -> Block {
        let i = Scalar::i();
        let one = Scalar::from_int(1);
        let line = |v: Vec<Scalar>| {
            let steps = [(0, Subspace::full(2)), (1, Subspace::from_vectors(2, &[v]).expect("line"))];
            DecreasingFiltration::from_steps(2, steps.into_iter().collect()).expect("flag")
        };
        Block {
            fprime: line(vec![one.clone(), i.clone()]),
            fsecond: line(vec![one, -i.clone()]),
            weight: 1,
            degrees: vec![(0, 0); 2],
            x: [Matrix::zeros(2, 2), Matrix::zeros(2, 2)],
            y: [Matrix::zeros(2, 2), Matrix::zeros(2, 2)],
            gram: Matrix::from_rows(vec![
                vec![Scalar::default(), i.clone()],
                vec![-i, Scalar::default()],
            ]),
        }
    }

    /// Exchanges the two sl2 factors.
    pub fn swap(mut self) -> Block {
        self.x.swap(0, 1);
        self.y.swap(0, 1);
        self.degrees = self.degrees.iter().map(|&(a, b)| (b, a)).collect();
        self
    }

    pub fn tensor(&self, other: &Block) -> Block {
        let (ia, ib) = (Matrix::identity(self.dim()), Matrix::identity(other.dim()));
        let op = |a: &Matrix, b: &Matrix| a.kron(&ib).add(&ia.kron(b));
        let mut degrees = Vec::with_capacity(self.dim() * other.dim());
        for &(a1, a2) in &self.degrees {
            for &(b1, b2) in &other.degrees {
                degrees.push((a1 + b1, a2 + b2));
            }
        }
        Block {
            fprime: self.fprime.tensor(&other.fprime),
            fsecond: self.fsecond.tensor(&other.fsecond),
            weight: self.weight + other.weight,
            degrees,
            x: [op(&self.x[0], &other.x[0]), op(&self.x[1], &other.x[1])],
            y: [op(&self.y[0], &other.y[0]), op(&self.y[1], &other.y[1])],
            gram: self.gram.kron(&other.gram),
        }
    }

    pub fn direct_sum(&self, other: &Block) -> Result<Block> {
        if self.weight != other.weight {
            return Err(HodgeError::InvalidInput(format!(
                "cannot add blocks of weights {} and {}",
                self.weight, other.weight
            )));
        }
        let bd = |a: &Matrix, b: &Matrix| Matrix::block_diag(&[a, b]);
        Ok(Block {
            fprime: self.fprime.direct_sum(&other.fprime),
            fsecond: self.fsecond.direct_sum(&other.fsecond),
            weight: self.weight,
            degrees: self.degrees.iter().chain(&other.degrees).copied().collect(),
            x: [bd(&self.x[0], &other.x[0]), bd(&self.x[1], &other.x[1])],
            y: [bd(&self.y[0], &other.y[0]), bd(&self.y[1], &other.y[1])],
            gram: bd(&self.gram, &other.gram),
        })
    }

    pub fn twist(&self, t: i64) -> Block {
        self.tensor(&Block::tate(t))
    }

    /// Multiplies the pairing by a positive rational.
    pub fn scale_pairing(mut self, c: &Scalar) -> Block {
        self.gram = self.gram.scale(c);
        self
    }

    fn grading_by(&self, key: impl Fn((i64, i64)) -> i64) -> Grading {
        let degs: Vec<i64> = self.degrees.iter().map(|&d| key(d)).collect();
        Grading::from_degrees(&degs)
    }

    fn triple(&self, k: usize) -> Sl2Triple {
        let h = Matrix::diagonal(
            &self.degrees.iter().map(|&(a, b)| Scalar::from_int(if k == 0 { a } else { b })).collect::<Vec<_>>(),
        );
        Sl2Triple { x: self.x[k].clone(), h, y: self.y[k].clone() }
    }

    pub fn pairing(&self) -> SesquilinearForm {
        SesquilinearForm { gram: self.gram.clone(), target_twist: self.weight }
    }

    pub fn bisl2(&self) -> BiSl2HodgeData {
        let n = self.dim();
        let mut bigrading: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, &d) in self.degrees.iter().enumerate() {
            bigrading.entry(d).or_default().push(i);
        }
        BiSl2HodgeData {
            fprime: self.fprime.clone(),
            fsecond: self.fsecond.clone(),
            central_weight: self.weight,
            bigrading: bigrading.into_iter().map(|(k, idx)| (k, Subspace::coordinate(n, &idx))).collect(),
            triple1: self.triple(0),
            triple2: self.triple(1),
        }
    }

    /// The diagonal sl2-Hodge structure.
    pub fn sl2(&self) -> Sl2HodgeData {
        Sl2HodgeData {
            fprime: self.fprime.clone(),
            fsecond: self.fsecond.clone(),
            central_weight: self.weight,
            grading: self.grading_by(|(a, b)| a + b),
            triple: self.triple(0).add(&self.triple(1)),
        }
    }

    /// The cone spanned by the lowering operators of the nontrivial factors.
    pub fn cone(&self) -> PolarizedCone {
        let weightfil = IncreasingFiltration::from_grading(
            self.dim(),
            self.grading_by(|(a, b)| a + b + self.weight).pieces(),
        )
        .expect("grading is a direct sum");
        let generators = self
            .y
            .iter()
            .filter(|y| !y.is_zero())
            .map(|y| NilpotentOp::new(y.clone()).expect("lowering operators are nilpotent"))
            .collect();
        PolarizedCone {
            fprime: self.fprime.clone(),
            fsecond: self.fsecond.clone(),
            pairing: self.pairing(),
            cone: ConeData { generators, weightfil },
        }
    }
}

/// A change of coordinates `v ↦ P v` together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub p: Matrix,
    pub p_inv: Matrix,
}

impl Frame {
    pub fn identity(n: usize) -> Frame {
        Frame { p: Matrix::identity(n), p_inv: Matrix::identity(n) }
    }

    /// `P = L·U` with unit triangular factors of small Gaussian integers, so
    /// that `P⁻¹` is again integral. Factors are sparse in large dimension:
    /// dense ones make the entries of `P⁻¹` grow exponentially.
    pub fn random(n: usize, rng: &mut impl Rng) -> Frame {
        let mut l = Matrix::identity(n);
        let mut u = Matrix::identity(n);
        let density = (3.0 / n as f64).min(1.0);
        for r in 0..n {
            for c in 0..r {
                if rng.random_bool(density) {
                    l[(r, c)] = Scalar::gaussian(rng.random_range(-2..=2), rng.random_range(-1..=1));
                }
                if rng.random_bool(density) {
                    u[(c, r)] = Scalar::gaussian(rng.random_range(-2..=2), rng.random_range(-1..=1));
                }
            }
        }
        let p = l.mul(&u);
        let p_inv = p.inverse().expect("unit triangular factors");
        Frame { p, p_inv }
    }

    pub fn operator(&self, a: &Matrix) -> Matrix {
        self.p.mul(a).mul(&self.p_inv)
    }

    pub fn form(&self, s: &SesquilinearForm) -> SesquilinearForm {
        s.in_basis(&self.p_inv)
    }

    pub fn sl2(&self, d: &Sl2HodgeData) -> Sl2HodgeData {
        Sl2HodgeData {
            fprime: d.fprime.transform(&self.p),
            fsecond: d.fsecond.transform(&self.p),
            central_weight: d.central_weight,
            grading: d.grading.transform(&self.p),
            triple: d.triple.transform(&self.p, &self.p_inv),
        }
    }

    pub fn bisl2(&self, d: &BiSl2HodgeData) -> BiSl2HodgeData {
        BiSl2HodgeData {
            fprime: d.fprime.transform(&self.p),
            fsecond: d.fsecond.transform(&self.p),
            central_weight: d.central_weight,
            bigrading: d.bigrading.iter().map(|(&k, s)| (k, s.transform(&self.p))).collect(),
            triple1: d.triple1.transform(&self.p, &self.p_inv),
            triple2: d.triple2.transform(&self.p, &self.p_inv),
        }
    }

    pub fn cone(&self, c: &PolarizedCone) -> PolarizedCone {
        PolarizedCone {
            fprime: c.fprime.transform(&self.p),
            fsecond: c.fsecond.transform(&self.p),
            pairing: self.form(&c.pairing),
            cone: ConeData {
                generators: c
                    .cone
                    .generators
                    .iter()
                    .map(|g| NilpotentOp::new(self.operator(g.matrix())).expect("conjugate of a nilpotent"))
                    .collect(),
                weightfil: c.cone.weightfil.transform(&self.p),
            },
        }
    }
}

/// One summand `V_a ⊠ V_b ⊗ E` of a generated structure, where `E` is either
/// trivial or an elliptic curve, rescaled by a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub first: u32,
    pub second: u32,
    #[serde(default)]
    pub elliptic: bool,
    #[serde(default = "one")]
    pub scale: u32,
}

fn one() -> u32 {
    1
}

impl Summand {
    pub fn new(first: u32, second: u32) -> Summand {
        Summand { first, second, elliptic: false, scale: 1 }
    }

    fn weight(&self) -> i64 {
        i64::from(self.first + self.second) + i64::from(self.elliptic)
    }

    fn block(&self) -> Block {
        let mut b = Block::irrep(self.first).tensor(&Block::irrep(self.second).swap());
        if self.elliptic {
            b = b.tensor(&Block::elliptic());
        }
        b.scale_pairing(&Scalar::from_int(i64::from(self.scale.max(1))))
    }
}

/// A generated structure: the block in adapted coordinates and the frame
/// taking it to the scrambled coordinates.
#[derive(Clone, Debug)]
pub struct GeneratedFixture {
    pub block: Block,
    pub frame: Frame,
}

impl GeneratedFixture {
    pub fn sl2(&self) -> (Sl2HodgeData, SesquilinearForm) {
        (self.frame.sl2(&self.block.sl2()), self.frame.form(&self.block.pairing()))
    }

    pub fn bisl2(&self) -> (BiSl2HodgeData, SesquilinearForm) {
        (self.frame.bisl2(&self.block.bisl2()), self.frame.form(&self.block.pairing()))
    }

    pub fn cone(&self) -> PolarizedCone {
        self.frame.cone(&self.block.cone())
    }
}

/// Direct sum of the given summands, Tate-twisted to a common weight, in
/// coordinates scrambled by a frame drawn from `seed`. All summands must have
/// weights of the same parity.
pub fn generate_polarized_fixture(seed: u64, summands: &[Summand]) -> Result<GeneratedFixture> {
    let Some(top) = summands.iter().map(Summand::weight).max() else {
        return Err(HodgeError::InvalidInput("no summands".into()));
    };
    let mut acc: Option<Block> = None;
    for s in summands {
        let gap = top - s.weight();
        if gap % 2 != 0 {
            return Err(HodgeError::InvalidInput("summand weights differ in parity".into()));
        }
        let b = s.block().twist(-gap / 2);
        acc = Some(match acc {
            None => b,
            Some(a) => a.direct_sum(&b)?,
        });
    }
    let block = acc.expect("at least one summand");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = Frame::random(block.dim(), &mut rng);
    Ok(GeneratedFixture { block, frame })
}

/// A random list of summands of total dimension at most `max_dim`, all of
/// even weight or all of odd weight.
pub fn random_summands(seed: u64, max_dim: usize) -> Vec<Summand> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let parity = rng.random_range(0..2u32);
    let mut out = Vec::new();
    let mut used = 0;
    for _ in 0..4 {
        let elliptic = rng.random_bool(0.3);
        let first = rng.random_range(0..=3u32);
        let mut second = rng.random_range(0..=2u32);
        if (first + second + u32::from(elliptic)) % 2 != parity {
            second = if second == 0 { 1 } else { second - 1 };
        }
        let dim = (first as usize + 1) * (second as usize + 1) * if elliptic { 2 } else { 1 };
        if used + dim > max_dim {
            continue;
        }
        used += dim;
        out.push(Summand { first, second, elliptic, scale: rng.random_range(1..=3) });
    }
    if out.is_empty() {
        out.push(Summand::new(parity, 0));
    }
    out
}

/// The bigraded structure behind the eigenvalue argument: `V ⊗ U` where `U`
/// is the irrep of highest weight 1, `L = I ⊗ X_U` and `η = M ⊗ X_U` for an
/// operator `M` on `V` commuting with the sl2 action on `V`.
#[derive(Clone, Debug)]
pub struct LefschetzPair {
    pub block: Block,
    pub l: Matrix,
    pub eta: Matrix,
    /// `H_{*,−1}` and `H_{*,1}`.
    pub domain: Subspace,
    pub codomain: Subspace,
}

/// `V = V_1 ⊗ ℂ^2` with the multiplicity space polarized by the identity and
/// `M = I ⊗ m`; `m` should be hermitian.
pub fn lefschetz_pair(m: &Matrix) -> LefschetzPair {
    let k = m.rows();
    let mult = Block {
        fprime: DecreasingFiltration::trivial(k, 0),
        fsecond: DecreasingFiltration::trivial(k, 0),
        weight: 0,
        degrees: vec![(0, 0); k],
        x: [Matrix::zeros(k, k), Matrix::zeros(k, k)],
        y: [Matrix::zeros(k, k), Matrix::zeros(k, k)],
        gram: Matrix::identity(k),
    };
    let v = Block::irrep(1).tensor(&mult);
    let u = Block::irrep(1).swap();
    let block = v.tensor(&u);
    let xu = &u.x[1];
    let l = Matrix::identity(v.dim()).kron(xu);
    let eta = Matrix::identity(2).kron(m).kron(xu);
    let n = block.dim();
    let pick = |j: i64| {
        let idx: Vec<usize> = (0..n).filter(|&i| block.degrees[i].1 == j).collect();
        Subspace::coordinate(n, &idx)
    };
    LefschetzPair { l, eta, domain: pick(-1), codomain: pick(1), block }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2hodge::{
        check_bisl2_hodge, check_bisl2_polarization, check_cone_polarization, check_sl2_hodge,
        check_sl2_polarization,
    };

    #[test]
    fn irreps_are_polarized() {
        for m in 0..5 {
            let b = Block::irrep(m);
            assert!(check_sl2_hodge(&b.sl2()).passed(), "V_{m}");
            assert!(check_sl2_polarization(&b.sl2(), &b.pairing()).unwrap().passed(), "V_{m}");
        }
    }

    #[test]
    fn tate_twist_keeps_polarization() {
        for t in -2..=2 {
            let b = Block::irrep(2).tensor(&Block::elliptic()).twist(t);
            assert_eq!(b.weight, 3 - 2 * t);
            assert!(check_sl2_polarization(&b.sl2(), &b.pairing()).unwrap().passed(), "t = {t}");
        }
    }

    #[test]
    fn trivial_spec_is_one_dimensional() {
        let f = generate_polarized_fixture(1, &[Summand::new(0, 0)]).unwrap();
        assert_eq!(f.block.dim(), 1);
        let (d, s) = f.sl2();
        assert!(check_sl2_polarization(&d, &s).unwrap().passed());
    }

    #[test]
    fn scrambled_fixtures_pass() {
        for seed in 0..6 {
            let f = generate_polarized_fixture(seed, &random_summands(seed, 12)).unwrap();
            let (d, s) = f.sl2();
            assert!(check_sl2_hodge(&d).passed(), "seed {seed}");
            assert!(check_sl2_polarization(&d, &s).unwrap().passed(), "seed {seed}");
            let (b, s) = f.bisl2();
            assert!(check_bisl2_hodge(&b).passed(), "seed {seed}");
            assert!(check_bisl2_polarization(&b, &s).unwrap().passed(), "seed {seed}");
        }
    }

    #[test]
    fn jordan_tensor_cone_passes() {
        let f = generate_polarized_fixture(3, &[Summand::new(1, 1)]).unwrap();
        let r = check_cone_polarization(&f.cone(), 3, 9).unwrap();
        assert!(r.passed(), "{:?}", r.report.first());
        assert!(r.sampled);
    }

    #[test]
    fn mixed_parity_is_rejected() {
        assert!(generate_polarized_fixture(0, &[Summand::new(1, 0), Summand::new(0, 0)]).is_err());
    }
}
