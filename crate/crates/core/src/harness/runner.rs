//! Executes fixture files and compares verdicts with expectations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use super::format::{self, Check, Entry, FixtureFile, Verdict};
use super::oracle::{oracle_weight_filtration, ORACLE_MAX_DIM};
use crate::error::{HodgeError, Result};
use crate::exact::{Matrix, Subspace};
use crate::hodge::{check_mixed, check_morphism, check_polarization, check_pure, FilteredSpace, MixedHodge, PureHodge, SesquilinearForm};
use crate::nilpotent::{complete_sl2, verify_weight_filtration, weight_filtration, NilpotentOp, Sl2Triple};
use crate::report::{CheckReport, Witness};
use crate::signcalc::{check_epsilon_cocycle, godement_sweep, parity_sign};
use crate::sl2hodge::{
    check_bisl2_hodge, check_bisl2_polarization, check_cone_polarization, check_equivalent_polarization_criterion,
    check_hard_lefschetz, check_hodge_lefschetz, check_sl2_hodge, check_sl2_polarization,
    check_sl2_polarization_lowering, lefschetz_eigenvalues, merge_bisl2, reduce_cone, BiSl2HodgeData, ConeData,
    HodgeLefschetzData, PolarizedCone, Sl2HodgeData,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub index: usize,
    pub op: String,
    pub expect: Verdict,
    pub verdict: Verdict,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub micros: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub path: String,
    pub outcomes: Vec<CheckOutcome>,
    pub millis: u128,
}

impl Report {
    pub fn all_matched(&self) -> bool {
        self.outcomes.iter().all(|o| o.matched)
    }

    pub fn mismatches(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.matched).count()
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{} ({} checks, {} ms)", self.path, self.outcomes.len(), self.millis)?;
        for o in &self.outcomes {
            let mark = if o.matched { "ok  " } else { "MISMATCH" };
            write!(f, "  {mark} #{} {}: {} (expected {})", o.index, o.op, o.verdict, o.expect)?;
            if let Some(d) = &o.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
            if let (false, Some(w)) = (o.matched, &o.witness) {
                writeln!(f, "      witness: {}", serde_json::to_string(w).unwrap_or_default())?;
            }
        }
        Ok(())
    }
}

/// Outcome of one check before comparison with its expectation.
struct Evaluated {
    verdict: Verdict,
    detail: Option<String>,
    witness: Option<Witness>,
}

impl Evaluated {
    fn from_report(r: &CheckReport) -> Evaluated {
        match r.first() {
            None => Evaluated { verdict: Verdict::Pass, detail: None, witness: None },
            Some(f) => Evaluated {
                verdict: Verdict::Fail,
                detail: Some(format!("{}: {}", f.check, f.detail)),
                witness: Some(f.witness.clone()),
            },
        }
    }

    fn pass_if(ok: bool, detail: String) -> Evaluated {
        Evaluated {
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail: (!ok).then_some(detail),
            witness: None,
        }
    }

    fn alarm(detail: String) -> Evaluated {
        Evaluated { verdict: Verdict::Alarm, detail: Some(detail), witness: None }
    }
}

fn from_result(r: Result<Evaluated>) -> Evaluated {
    match r {
        Ok(e) => e,
        Err(HodgeError::CriterionDisagreement(d)) => Evaluated::alarm(d),
        Err(e) => Evaluated {
            verdict: Verdict::Fail,
            detail: Some(format!("error: {e}")),
            witness: Some(Witness::Text { text: e.to_string() }),
        },
    }
}

/// Ops and the argument names each one requires; optional ones are read
/// with defaults.
const OPS: &[(&str, &[&str])] = &[
    ("check_pure", &["structure"]),
    ("check_polarization", &["structure", "pairing"]),
    ("check_mixed", &["structure"]),
    ("check_morphism", &["map", "source", "target", "twist"]),
    ("weight_filtration", &["operator", "center"]),
    ("check_sl2_hodge", &["structure"]),
    ("check_sl2_polarization", &["structure", "pairing"]),
    ("check_sl2_polarization_lowering", &["structure", "pairing"]),
    ("check_polarization_criteria", &["structure", "pairing"]),
    ("check_hard_lefschetz", &["structure"]),
    ("check_bisl2_hodge", &["structure"]),
    ("check_bisl2_polarization", &["structure", "pairing"]),
    ("merge_bisl2", &["structure"]),
    ("check_hodge_lefschetz", &["structure"]),
    ("check_cone_polarization", &["structure"]),
    ("reduce_cone", &["structure", "h"]),
    ("eigenvalues_positive", &["l", "eta", "domain", "codomain"]),
    ("epsilon_cocycle", &["bound"]),
    ("godement_defect", &["bound"]),
];

/// Names that must refer to structures, and the kinds each may have.
const NAME_ARGS: &[(&str, &[&str])] = &[
    ("structure", &[]),
    ("pairing", &["pairing"]),
    ("map", &["matrix"]),
    ("operator", &["matrix"]),
    ("source", &["pure", "mixed", "hodge_lefschetz"]),
    ("target", &["pure", "mixed", "hodge_lefschetz"]),
    ("l", &["matrix"]),
    ("eta", &["matrix"]),
    ("domain", &["subspace"]),
    ("codomain", &["subspace"]),
];

fn structure_kinds(op: &str) -> &'static [&'static str] {
    match op {
        "check_pure" | "check_polarization" => &["pure"],
        "check_mixed" => &["mixed", "hodge_lefschetz"],
        "check_sl2_hodge" | "check_sl2_polarization" | "check_sl2_polarization_lowering"
        | "check_polarization_criteria" | "check_hard_lefschetz" => &["sl2", "bisl2"],
        "check_bisl2_hodge" | "check_bisl2_polarization" | "merge_bisl2" => &["bisl2"],
        "check_hodge_lefschetz" => &["hodge_lefschetz"],
        "check_cone_polarization" | "reduce_cone" => &["cone"],
        _ => &[],
    }
}

/// Checks that every op is known and every referenced name resolves to an
/// entry of an accepted kind.
pub fn validate(f: &FixtureFile) -> Result<()> {
    for (i, c) in f.checks.iter().enumerate() {
        let Some((_, required)) = OPS.iter().find(|(op, _)| *op == c.op) else {
            return Err(HodgeError::Fixture(format!("check #{i}: unknown op {:?}", c.op)));
        };
        for r in *required {
            if !c.args.contains_key(*r) {
                return Err(HodgeError::Fixture(format!("check #{i} ({}): missing argument {r:?}", c.op)));
            }
        }
        for (arg, kinds) in NAME_ARGS {
            let Some(v) = c.args.get(*arg) else { continue };
            let Some(name) = v.as_str() else {
                return Err(HodgeError::Fixture(format!("check #{i}: argument {arg:?} must be a name")));
            };
            let Some(entry) = f.structures.get(name) else {
                return Err(HodgeError::Fixture(format!("check #{i}: unknown structure {name:?}")));
            };
            let kinds = if *arg == "structure" { structure_kinds(&c.op) } else { kinds };
            if !kinds.is_empty() && !kinds.contains(&entry.kind()) {
                return Err(HodgeError::Fixture(format!(
                    "check #{i}: {name:?} is a {} but {} needs one of {kinds:?}",
                    entry.kind(),
                    c.op
                )));
            }
        }
    }
    Ok(())
}

struct Ctx<'a> {
    file: &'a FixtureFile,
}

fn int_arg(c: &Check, name: &str) -> Result<Option<i64>> {
    match c.args.get(name) {
        None => Ok(None),
        Some(Value::Number(n)) => n
            .as_i64()
            .map(Some)
            .ok_or_else(|| HodgeError::Fixture(format!("argument {name:?} is not an integer"))),
        Some(_) => Err(HodgeError::Fixture(format!("argument {name:?} is not an integer"))),
    }
}

fn req_int(c: &Check, name: &str) -> Result<i64> {
    int_arg(c, name)?.ok_or_else(|| HodgeError::Fixture(format!("missing argument {name:?}")))
}

impl Ctx<'_> {
    fn entry(&self, c: &Check, arg: &str) -> Result<&Entry> {
        let name = c
            .args
            .get(arg)
            .and_then(Value::as_str)
            .ok_or_else(|| HodgeError::Fixture(format!("missing argument {arg:?}")))?;
        self.file.structures.get(name).ok_or_else(|| HodgeError::Fixture(format!("unknown structure {name:?}")))
    }

    fn matrix(&self, c: &Check, arg: &str) -> Result<Matrix> {
        match self.entry(c, arg)? {
            Entry::Matrix { rows } => format::square(rows),
            e => Err(HodgeError::Fixture(format!("{arg} is a {}", e.kind()))),
        }
    }

    fn subspace(&self, c: &Check, arg: &str) -> Result<Subspace> {
        match self.entry(c, arg)? {
            Entry::Subspace { dim, span } => format::subspace(*dim, span),
            e => Err(HodgeError::Fixture(format!("{arg} is a {}", e.kind()))),
        }
    }

    fn pairing(&self, c: &Check) -> Result<Option<SesquilinearForm>> {
        if !c.args.contains_key("pairing") {
            return Ok(None);
        }
        match self.entry(c, "pairing")? {
            Entry::Pairing(p) => Ok(Some(format::pairing(p)?)),
            e => Err(HodgeError::Fixture(format!("pairing is a {}", e.kind()))),
        }
    }

    fn req_pairing(&self, c: &Check) -> Result<SesquilinearForm> {
        self.pairing(c)?.ok_or_else(|| HodgeError::Fixture("missing argument \"pairing\"".into()))
    }
}

fn pure_of(e: &Entry) -> Result<PureHodge> {
    match e {
        Entry::Pure { dim, weight, fprime, fsecond } => {
            PureHodge::new(format::decreasing(*dim, fprime)?, format::decreasing(*dim, fsecond)?, *weight)
        }
        e => Err(HodgeError::Fixture(format!("expected a pure structure, found {}", e.kind()))),
    }
}

fn mixed_of(e: &Entry) -> Result<MixedHodge> {
    match e {
        Entry::Mixed { dim, fprime, fsecond, weightfil } => MixedHodge::new(
            format::decreasing(*dim, fprime)?,
            format::decreasing(*dim, fsecond)?,
            format::increasing(*dim, weightfil)?,
        ),
        Entry::HodgeLefschetz { .. } => {
            let d = hodge_lefschetz_of(e)?;
            MixedHodge::new(d.fprime, d.fsecond, weight_filtration(&d.n, d.central_weight)?)
        }
        e => Err(HodgeError::Fixture(format!("expected a mixed structure, found {}", e.kind()))),
    }
}

pub fn sl2_of(e: &Entry) -> Result<Sl2HodgeData> {
    match e {
        Entry::Sl2 { dim, central_weight, fprime, fsecond, grading, lowering } => {
            let grading = format::grading(*dim, grading)?;
            let triple = complete_sl2(&grading, &format::square(lowering)?)?;
            Ok(Sl2HodgeData {
                fprime: format::decreasing(*dim, fprime)?,
                fsecond: format::decreasing(*dim, fsecond)?,
                central_weight: *central_weight,
                grading,
                triple,
            })
        }
        Entry::Bisl2 { .. } => bisl2_of(e)?.diagonal(),
        e => Err(HodgeError::Fixture(format!("expected an sl2 structure, found {}", e.kind()))),
    }
}

pub fn bisl2_of(e: &Entry) -> Result<BiSl2HodgeData> {
    match e {
        Entry::Bisl2 { dim, central_weight, fprime, fsecond, bigrading, lowering1, lowering2 } => {
            let bigrading = bigrading
                .iter()
                .map(|p| Ok(((p.bidegree[0], p.bidegree[1]), format::subspace(*dim, &p.span)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            let mut d = BiSl2HodgeData {
                fprime: format::decreasing(*dim, fprime)?,
                fsecond: format::decreasing(*dim, fsecond)?,
                central_weight: *central_weight,
                bigrading,
                triple1: Sl2Triple::zero(*dim),
                triple2: Sl2Triple::zero(*dim),
            };
            d.triple1 = complete_sl2(&d.grading1()?, &format::square(lowering1)?)?;
            d.triple2 = complete_sl2(&d.grading2()?, &format::square(lowering2)?)?;
            Ok(d)
        }
        e => Err(HodgeError::Fixture(format!("expected a bi-sl2 structure, found {}", e.kind()))),
    }
}

pub fn hodge_lefschetz_of(e: &Entry) -> Result<HodgeLefschetzData> {
    match e {
        Entry::HodgeLefschetz { dim, central_weight, fprime, fsecond, n } => Ok(HodgeLefschetzData {
            fprime: format::decreasing(*dim, fprime)?,
            fsecond: format::decreasing(*dim, fsecond)?,
            central_weight: *central_weight,
            n: NilpotentOp::new(format::square(n)?)?,
        }),
        e => Err(HodgeError::Fixture(format!("expected a Hodge-Lefschetz structure, found {}", e.kind()))),
    }
}

pub fn cone_of(e: &Entry) -> Result<(PolarizedCone, u64, usize)> {
    match e {
        Entry::Cone { dim, fprime, fsecond, weightfil, pairing, generators, seed, sample_budget } => {
            let generators = generators
                .iter()
                .map(|g| NilpotentOp::new(format::matrix(g, *dim)?))
                .collect::<Result<Vec<_>>>()?;
            let c = PolarizedCone {
                fprime: format::decreasing(*dim, fprime)?,
                fsecond: format::decreasing(*dim, fsecond)?,
                pairing: format::pairing(pairing)?,
                cone: ConeData { generators, weightfil: format::increasing(*dim, weightfil)? },
            };
            Ok((c, *seed, *sample_budget))
        }
        e => Err(HodgeError::Fixture(format!("expected a cone, found {}", e.kind()))),
    }
}

fn morphism(ctx: &Ctx, c: &Check) -> Result<Evaluated> {
    let f = ctx.matrix(c, "map")?;
    let twist = req_int(c, "twist")?;
    let load = |arg: &str| -> Result<Box<dyn FilteredSpace>> {
        match ctx.entry(c, arg)? {
            e @ Entry::Pure { .. } => Ok(Box::new(pure_of(e)?)),
            e => Ok(Box::new(mixed_of(e)?)),
        }
    };
    let (src, dst) = (load("source")?, load("target")?);
    Ok(Evaluated::from_report(&check_morphism(&f, src.as_ref(), dst.as_ref(), twist)?))
}

fn weight_filtration_check(ctx: &Ctx, c: &Check) -> Result<Evaluated> {
    let n = NilpotentOp::new(ctx.matrix(c, "operator")?)?;
    let center = req_int(c, "center")?;
    let w = weight_filtration(&n, center)?;
    let verified = verify_weight_filtration(n.matrix(), &w, center);
    if let Some(f) = verified.first() {
        return Ok(Evaluated::alarm(format!("output violates the defining properties: {f}")));
    }
    if n.dim() <= ORACLE_MAX_DIM {
        let o = oracle_weight_filtration(&n, center)?;
        if o != w {
            return Ok(Evaluated::alarm("main algorithm and oracle disagree".into()));
        }
    }
    if let Some(Value::Object(dims)) = c.args.get("graded_dims") {
        let want: BTreeMap<i64, usize> = dims
            .iter()
            .map(|(k, v)| {
                let k = k.parse().map_err(|_| HodgeError::Fixture(format!("bad weight {k:?}")))?;
                let v = v.as_u64().ok_or_else(|| HodgeError::Fixture("bad dimension".into()))? as usize;
                Ok((k, v))
            })
            .collect::<Result<_>>()?;
        let got = w.graded_dims();
        return Ok(Evaluated::pass_if(got == want, format!("graded dimensions {got:?}, expected {want:?}")));
    }
    Ok(Evaluated::pass_if(true, String::new()))
}

fn evaluate(ctx: &Ctx, c: &Check) -> Result<Evaluated> {
    let report = |r: CheckReport| Ok(Evaluated::from_report(&r));
    match c.op.as_str() {
        "check_pure" => report(check_pure(&pure_of(ctx.entry(c, "structure")?)?).report),
        "check_polarization" => {
            report(check_polarization(&pure_of(ctx.entry(c, "structure")?)?, &ctx.req_pairing(c)?)?)
        }
        "check_mixed" => report(check_mixed(&mixed_of(ctx.entry(c, "structure")?)?)),
        "check_morphism" => morphism(ctx, c),
        "weight_filtration" => weight_filtration_check(ctx, c),
        "check_sl2_hodge" => report(check_sl2_hodge(&sl2_of(ctx.entry(c, "structure")?)?)),
        "check_sl2_polarization" => {
            report(check_sl2_polarization(&sl2_of(ctx.entry(c, "structure")?)?, &ctx.req_pairing(c)?)?)
        }
        "check_sl2_polarization_lowering" => {
            report(check_sl2_polarization_lowering(&sl2_of(ctx.entry(c, "structure")?)?, &ctx.req_pairing(c)?)?)
        }
        "check_polarization_criteria" => {
            let ok = check_equivalent_polarization_criterion(&sl2_of(ctx.entry(c, "structure")?)?, &ctx.req_pairing(c)?)?;
            Ok(Evaluated::pass_if(ok, "both criteria fail".into()))
        }
        "check_hard_lefschetz" => report(check_hard_lefschetz(&sl2_of(ctx.entry(c, "structure")?)?)),
        "check_bisl2_hodge" => report(check_bisl2_hodge(&bisl2_of(ctx.entry(c, "structure")?)?)),
        "check_bisl2_polarization" => {
            report(check_bisl2_polarization(&bisl2_of(ctx.entry(c, "structure")?)?, &ctx.req_pairing(c)?)?)
        }
        "merge_bisl2" => {
            let out = merge_bisl2(&bisl2_of(ctx.entry(c, "structure")?)?, ctx.pairing(c)?.as_ref())?;
            if out.alarm {
                let f = out.hodge_report.first().or(out.polarization_report.as_ref().and_then(CheckReport::first));
                return Ok(Evaluated::alarm(format!("merged structure fails: {}", f.map(ToString::to_string).unwrap_or_default())));
            }
            Ok(Evaluated::pass_if(true, String::new()))
        }
        "check_hodge_lefschetz" => {
            report(check_hodge_lefschetz(&hodge_lefschetz_of(ctx.entry(c, "structure")?)?, ctx.pairing(c)?.as_ref())?)
        }
        "check_cone_polarization" => {
            let (cone, seed, budget) = cone_of(ctx.entry(c, "structure")?)?;
            let seed = int_arg(c, "seed")?.map_or(seed, |s| s as u64);
            let budget = int_arg(c, "samples")?.map_or(budget, |s| s as usize);
            report(check_cone_polarization(&cone, budget, seed)?.report)
        }
        "reduce_cone" => {
            let (cone, seed, budget) = cone_of(ctx.entry(c, "structure")?)?;
            let seed = int_arg(c, "seed")?.map_or(seed, |s| s as u64);
            let budget = int_arg(c, "samples")?.map_or(budget, |s| s as usize);
            let r = reduce_cone(&cone, req_int(c, "h")?, budget, seed)?;
            if r.alarm {
                let f = r.report.report.first().map(ToString::to_string).unwrap_or_default();
                return Ok(Evaluated::alarm(format!("reduced structure fails: {f}")));
            }
            Ok(Evaluated::pass_if(true, String::new()))
        }
        "eigenvalues_positive" => {
            let r = lefschetz_eigenvalues(
                &ctx.matrix(c, "l")?,
                &ctx.matrix(c, "eta")?,
                &ctx.subspace(c, "domain")?,
                &ctx.subspace(c, "codomain")?,
            )?;
            Ok(Evaluated::pass_if(r.all_positive_real, format!("characteristic polynomial {}", r.char_poly)))
        }
        "epsilon_cocycle" => {
            let r = check_epsilon_cocycle(req_int(c, "bound")?.max(0) as u32);
            Ok(Evaluated::pass_if(r.passed(), format!("{} violations", r.violations.len())))
        }
        "godement_defect" => {
            let rows = godement_sweep(req_int(c, "bound")?.max(0) as u32);
            let bad = rows.iter().filter(|r| r.defect != parity_sign(i64::from(r.i * r.l))).count();
            Ok(Evaluated::pass_if(bad == 0, format!("{bad} tuples differ from (−1)^(il)")))
        }
        op => Err(HodgeError::Fixture(format!("unknown op {op:?}"))),
    }
}

/// Runs every check of an already parsed file, sequentially.
pub fn run_file(path: &str, f: &FixtureFile) -> Result<Report> {
    validate(f)?;
    let start = Instant::now();
    let ctx = Ctx { file: f };
    let mut outcomes = Vec::with_capacity(f.checks.len());
    for (index, c) in f.checks.iter().enumerate() {
        let t = Instant::now();
        let e = from_result(evaluate(&ctx, c));
        outcomes.push(CheckOutcome {
            index,
            op: c.op.clone(),
            expect: c.expect,
            verdict: e.verdict,
            matched: e.verdict == c.expect,
            detail: e.detail,
            witness: e.witness,
            micros: t.elapsed().as_micros(),
        });
    }
    Ok(Report { path: path.to_string(), outcomes, millis: start.elapsed().as_millis() })
}

pub fn run_fixture(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HodgeError::Fixture(format!("{}: {e}", path.display())))?;
    let f = format::parse_fixture(&text)
        .map_err(|e| HodgeError::Fixture(format!("{}: {e}", path.display())))?;
    run_file(&path.display().to_string(), &f)
}

/// Runs several files concurrently, one thread per file; results come back
/// in input order.
pub fn run_fixtures(paths: &[PathBuf]) -> Vec<Result<Report>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = paths.iter().map(|p| s.spawn(move || run_fixture(p))).collect();
        handles.into_iter().map(|h| h.join().expect("fixture thread panicked")).collect()
    })
}
