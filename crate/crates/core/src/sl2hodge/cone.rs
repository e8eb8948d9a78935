use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lefschetz::{check_hodge_lefschetz, graded_limit, HodgeLefschetzData};
use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Scalar, Subquotient, Subspace};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::hodge::{restrict_gram, SesquilinearForm};
use crate::nilpotent::{complete_sl2, weight_filtration, NilpotentOp};
use crate::report::{identity_witness, CheckReport, Witness};

pub const DEFAULT_SAMPLE_BUDGET: usize = 5;

/// Commuting nilpotent generators of an open cone, together with the weight
/// filtration every element of the cone is supposed to share.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeData {
    pub generators: Vec<NilpotentOp>,
    pub weightfil: IncreasingFiltration,
}

/// A mixed Hodge structure together with a pairing and a cone that are
/// claimed to polarize it. The center is the pairing's target twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizedCone {
    pub fprime: DecreasingFiltration,
    pub fsecond: DecreasingFiltration,
    pub pairing: SesquilinearForm,
    pub cone: ConeData,
}

impl PolarizedCone {
    pub fn dim(&self) -> usize {
        self.fprime.ambient_dim()
    }

    pub fn center(&self) -> i64 {
        self.pairing.target_twist
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeSample {
    pub label: String,
    pub coefficients: Vec<Scalar>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub report: CheckReport,
    pub samples: Vec<ConeSample>,
    /// Always true: the open cone is sampled, never enumerated.
    pub sampled: bool,
}

impl ConeReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn denominator(c: &Scalar) -> i64 {
    i64::try_from(c.re().denom()).expect("sample denominators are at most 10")
}

fn sample_points(k: usize, budget: usize, seed: u64) -> Vec<(String, Vec<Scalar>)> {
    // a lone generator lies on the boundary of the open cone once k ≥ 2, so
    // each generator (and each pair) is sampled with weight 10 against 1
    let weighted = |hot: &[usize]| -> Vec<Scalar> {
        (0..k).map(|j| Scalar::from_int(if hot.contains(&j) { 10 } else { 1 })).collect()
    };
    let mut out = Vec::new();
    if k > 1 {
        out.push(("sum".to_string(), weighted(&[])));
    }
    for a in 0..k {
        out.push((format!("near N{}", a + 1), weighted(&[a])));
    }
    if k > 2 {
        for a in 0..k {
            for b in a + 1..k {
                out.push((format!("near N{}+N{}", a + 1, b + 1), weighted(&[a, b])));
            }
        }
    }
    if k > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in 0..budget {
            let v = (0..k)
                .map(|_| Scalar::frac(rng.random_range(1..=10), rng.random_range(1..=10)))
                .collect();
            out.push((format!("random#{r}"), v));
        }
    }
    if out.is_empty() {
        out.push(("0".into(), Vec::new()));
    }
    out
}

/// Samples the open cone (points weighted towards each generator and each
/// pair, the plain sum, and `sample_budget` random positive combinations)
/// and checks `W(N) = W` and the polarized Hodge-Lefschetz condition at
/// each sample.
pub fn check_cone_polarization(c: &PolarizedCone, sample_budget: usize, seed: u64) -> Result<ConeReport> {
    let n = c.dim();
    let mut report = CheckReport::new();
    if c.fsecond.ambient_dim() != n || c.pairing.dim() != n || c.cone.weightfil.ambient_dim() != n {
        return Err(HodgeError::DimensionMismatch("cone structure".into()));
    }
    if let Some(g) = c.cone.generators.iter().find(|g| g.dim() != n) {
        return Err(HodgeError::DimensionMismatch(format!("generator of size {}", g.dim())));
    }
    let gens = &c.cone.generators;
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let br = gens[a].matrix().bracket(gens[b].matrix());
            if !br.is_zero() {
                report.fail(
                    "commuting",
                    format!("N{} and N{} do not commute", a + 1, b + 1),
                    identity_witness("[Na, Nb] = 0", br, Matrix::zeros(n, n)),
                );
            }
        }
    }
    if !report.passed() {
        return Ok(ConeReport { report, samples: Vec::new(), sampled: true });
    }
    let w = c.center();
    let mut samples = Vec::new();
    for (label, coeffs) in sample_points(gens.len(), sample_budget, seed) {
        // the checks only see the ray through N, and clearing denominators
        // keeps the arithmetic integral
        let scale = Scalar::from_int(coeffs.iter().map(denominator).fold(1, num_integer::lcm));
        let mut m = Matrix::zeros(n, n);
        for (g, l) in gens.iter().zip(&coeffs) {
            m = m.add(&g.matrix().scale(&(l * &scale)));
        }
        let op = NilpotentOp::new(m)?;
        let mut r = CheckReport::new();
        let wn = weight_filtration(&op, w)?;
        if wn != c.cone.weightfil {
            r.fail(
                "weight",
                "W(N) differs from the weight filtration of the structure",
                Witness::Text {
                    text: format!("gr dims of W(N) {:?} vs W {:?}", wn.graded_dims(), c.cone.weightfil.graded_dims()),
                },
            );
        }
        let hl = HodgeLefschetzData { fprime: c.fprime.clone(), fsecond: c.fsecond.clone(), central_weight: w, n: op };
        r.absorb("hodge_lefschetz", check_hodge_lefschetz(&hl, Some(&c.pairing))?);
        samples.push(ConeSample { label: label.clone(), coefficients: coeffs, passed: r.passed() });
        report.absorb(&label, r);
    }
    report.note(format!("sampled {} elements of the cone", samples.len()));
    Ok(ConeReport { report, samples, sampled: true })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub h: i64,
    pub structure: PolarizedCone,
    /// Verification of the reduced structure against the reduced cone.
    pub report: ConeReport,
    /// The reduced structure failed although the input passed.
    pub alarm: bool,
    /// For `h > 0`: whether reading the pairing as `S(N₁^h x, ȳ)`, without
    /// the sign `(−1)^h`, gives the same verdict.
    pub literal_reading_agrees: Option<bool>,
}

/// Reduction of variables along the first generator at weight offset `h`.
pub fn reduce_cone(c: &PolarizedCone, h: i64, sample_budget: usize, seed: u64) -> Result<Reduction> {
    let Some(n1) = c.cone.generators.first() else {
        return Err(HodgeError::InvalidInput("reduction needs at least one generator".into()));
    };
    let input = check_cone_polarization(c, sample_budget, seed)?;
    if let Some(f) = input.report.first() {
        return Err(HodgeError::InvalidInput(format!("input is not polarized by its cone: {f}")));
    }
    let w = c.center();
    let a = n1.matrix();
    let w1 = weight_filtration(n1, w)?;
    let gl = graded_limit(&c.fprime, &c.fsecond, a, &w1, w, Some(&c.pairing))?;
    let triple = complete_sl2(&gl.grading, &gl.y)?;
    let g_gr = &gl.form.as_ref().expect("pairing given").gram;

    let sq = w1.graded_piece(w + h);
    let piece = gl.grading.piece(h);
    let power = if h <= 0 { 1 } else { h as u32 + 1 };
    let prim_gr = piece.kernel_of_power(&triple.y, power)?;
    // the same subspace in coordinates of gr_{w+h}
    let off = gl.offsets.get(&(w + h)).copied().unwrap_or(0);
    let prim_vecs: Vec<Vec<Scalar>> =
        prim_gr.basis_vectors().into_iter().map(|v| v[off..off + sq.dim()].to_vec()).collect();
    let prim = Subspace::from_vectors(sq.dim(), &prim_vecs)?;
    let sq_p = Subquotient::of_subspace(prim.clone());

    let reduced_twist = w + h;
    let fprime = c.fprime.induced_on(&sq)?.induced_on(&sq_p)?;
    let fsecond = c.fsecond.induced_on(&sq)?.induced_on(&sq_p)?;
    let weightfil = c.cone.weightfil.induced_on(&sq)?.induced_on(&sq_p)?;
    let mut generators = Vec::new();
    for g in &c.cone.generators[1..] {
        let on_piece = sq.induced_map(g.matrix(), &sq)?;
        generators.push(NilpotentOp::new(sq_p.induced_map(&on_piece, &sq_p)?)?);
    }
    let rows: Vec<Vec<Scalar>> =
        sq_p.lifts().row_vecs().iter().map(|v| gl.embed(w + h, v)).collect();
    let rows = Matrix::from_rows_with_cols(rows, gl.lifts.cols())?;
    let op = if h <= 0 {
        triple.x.pow((-h) as u32)
    } else {
        triple.y.pow(h as u32).scale(&Scalar::sign_power(h))
    };
    let gram = restrict_gram(&op.transpose().mul(g_gr), &rows);
    let structure = PolarizedCone {
        fprime,
        fsecond,
        pairing: SesquilinearForm { gram, target_twist: reduced_twist },
        cone: ConeData { generators, weightfil },
    };
    let report = match check_cone_polarization(&structure, sample_budget, seed) {
        Ok(r) => r,
        Err(e) => {
            let mut r = CheckReport::new();
            r.fail("reduced", e.to_string(), Witness::Text { text: format!("h = {h}") });
            ConeReport { report: r, samples: Vec::new(), sampled: true }
        }
    };
    let literal_reading_agrees = if h > 0 && h % 2 != 0 && !prim.is_zero() {
        let literal = PolarizedCone {
            pairing: SesquilinearForm { gram: structure.pairing.gram.neg(), target_twist: reduced_twist },
            ..structure.clone()
        };
        let verdict = check_cone_polarization(&literal, sample_budget, seed).map(|r| r.passed()).unwrap_or(false);
        Some(verdict == report.passed())
    } else if h > 0 {
        Some(true)
    } else {
        None
    };
    let alarm = !report.passed();
    Ok(Reduction { h, structure, report, alarm, literal_reading_agrees })
}

/// Offsets `h` at which the primitive part of `gr_{w+h}^{W(N₁)}` is nonzero.
pub fn reducible_degrees(c: &PolarizedCone) -> Result<Vec<i64>> {
    let Some(n1) = c.cone.generators.first() else {
        return Ok(Vec::new());
    };
    let w = c.center();
    let w1 = weight_filtration(n1, w)?;
    let gl = graded_limit(&c.fprime, &c.fsecond, n1.matrix(), &w1, w, None)?;
    let mut out = Vec::new();
    for h in gl.grading.degrees() {
        let power = if h <= 0 { 1 } else { h as u32 + 1 };
        if !gl.grading.piece(h).kernel_of_power(&gl.y, power)?.is_zero() {
            out.push(h);
        }
    }
    Ok(out)
}

/// Terminal structures of `reduce_fully`, keyed by the offsets `h` taken.
pub type Leaves = BTreeMap<Vec<i64>, PolarizedCone>;

/// Reduces along every generator in turn, following every `h` with nonzero
/// primitive part. Returns the terminal structures keyed by the sequence of
/// offsets used, and every intermediate reduction.
pub fn reduce_fully(
    c: &PolarizedCone,
    sample_budget: usize,
    seed: u64,
) -> Result<(Leaves, Vec<Reduction>)> {
    let mut leaves = BTreeMap::new();
    let mut steps = Vec::new();
    let mut stack = vec![(Vec::new(), c.clone())];
    while let Some((path, cur)) = stack.pop() {
        if cur.cone.generators.is_empty() {
            leaves.insert(path, cur);
            continue;
        }
        for h in reducible_degrees(&cur)? {
            let r = reduce_cone(&cur, h, sample_budget, seed)?;
            let mut next = path.clone();
            next.push(h);
            if !r.alarm {
                stack.push((next, r.structure.clone()));
            }
            steps.push(r);
        }
    }
    Ok((leaves, steps))
}
