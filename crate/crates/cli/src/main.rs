use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use hodgecalc::harness::corpus;
use hodgecalc::harness::format::{self, Entry, FixtureFile, Rows};
use hodgecalc::harness::oracle::{oracle_weight_filtration, ORACLE_MAX_DIM};
use hodgecalc::harness::runner::{self, cone_of, Report};
use hodgecalc::nilpotent::{verify_weight_filtration, weight_filtration, NilpotentOp};
use hodgecalc::signcalc::{check_epsilon_cocycle, epsilon, godement_sweep, parity_sign};
use hodgecalc::sl2hodge::reduce_cone;
use hodgecalc::HodgeError;

#[derive(Parser)]
#[command(name = "hodgecalc", version, about = "Exact checks for polarized Hodge and sl2-Hodge structures")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run fixture files and compare every verdict with its expectation.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Monodromy weight filtration of a nilpotent matrix.
    Weightfil {
        /// JSON array of rows, or a `{"kind": "matrix", ...}` entry.
        matrix_file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: i64,
    },
    /// Reduce a polarized cone along its first generator.
    Reduce {
        /// A cone entry, or a fixture file holding exactly one cone.
        cone_file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Tabulate the pushforward sign and the Godement diagram defect.
    Signs {
        #[arg(long = "box", default_value_t = 3)]
        bound: u32,
    },
    /// Run a bundled fixture.
    Demo {
        /// One of p1, p1xp1, elliptic, j3; `list` prints the names.
        name: String,
    },
}

/// Bad input: unreadable files, parse or name-resolution errors.
struct InputError(String);

impl From<HodgeError> for InputError {
    fn from(e: HodgeError) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text)
        .map_err(|e| InputError(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))
}

fn print_reports(reports: &[Report], json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(reports).expect("reports serialize"));
    } else {
        for r in reports {
            print!("{r}");
        }
        let total: usize = reports.iter().map(|r| r.outcomes.len()).sum();
        let bad: usize = reports.iter().map(Report::mismatches).sum();
        println!("{} file(s), {total} check(s), {bad} mismatch(es)", reports.len());
    }
}

fn verify(files: &[PathBuf], json: bool) -> Outcome {
    let mut reports = Vec::new();
    for r in runner::run_fixtures(files) {
        reports.push(r?);
    }
    print_reports(&reports, json);
    Ok(reports.iter().all(Report::all_matched))
}

fn demo(name: &str, json: bool) -> Outcome {
    if name == "list" {
        for n in corpus::bundled_names() {
            println!("{n}");
        }
        return Ok(true);
    }
    let Some(text) = corpus::bundled(name) else {
        return Err(InputError(format!(
            "no bundled fixture {name:?}; available: {}",
            corpus::bundled_names().join(", ")
        )));
    };
    let f = format::parse_fixture(text)?;
    let r = runner::run_file(&format!("{name}.fixture"), &f)?;
    let ok = r.all_matched();
    print_reports(&[r], json);
    Ok(ok)
}

fn weightfil(path: &Path, center: i64, json: bool) -> Outcome {
    let text = read(path)?;
    let rows: Rows = match parse_json::<Entry>(path, &text) {
        Ok(Entry::Matrix { rows }) => rows,
        Ok(e) => return Err(InputError(format!("expected a matrix, found a {}", e.kind()))),
        Err(_) => parse_json(path, &text)?,
    };
    let n = NilpotentOp::new(format::square(&rows)?)?;
    let w = weight_filtration(&n, center)?;
    let verified = verify_weight_filtration(n.matrix(), &w, center);
    let oracle = if n.dim() <= ORACLE_MAX_DIM {
        Some(oracle_weight_filtration(&n, center).map(|o| o == w).unwrap_or(false))
    } else {
        None
    };
    let ok = verified.passed() && oracle != Some(false);
    if json {
        let out = json!({
            "center": center,
            "graded_dims": w.graded_dims(),
            "steps": format::steps_of_increasing(&w),
            "verified": verified.passed(),
            "oracle_agrees": oracle,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    } else {
        println!("W(N) centered at {center}, dimension {}", n.dim());
        for (k, s) in w.jumps() {
            let vecs: Vec<String> = s
                .basis_vectors()
                .iter()
                .map(|v| format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
                .collect();
            println!("  W_{k}: dim {} {}", s.dim(), vecs.join(" "));
        }
        let dims: Vec<String> = w.graded_dims().iter().map(|(k, d)| format!("{k}:{d}")).collect();
        println!("graded dimensions {}", dims.join(" "));
        match verified.first() {
            None => println!("defining properties hold"),
            Some(f) => println!("defining properties FAIL: {f}"),
        }
        match oracle {
            Some(true) => println!("oracle agrees"),
            Some(false) => println!("oracle DISAGREES"),
            None => println!("oracle skipped above dimension {ORACLE_MAX_DIM}"),
        }
    }
    Ok(ok)
}

fn load_cone(path: &Path) -> Result<Entry, InputError> {
    let text = read(path)?;
    if let Ok(e @ Entry::Cone { .. }) = parse_json::<Entry>(path, &text) {
        return Ok(e);
    }
    let f: FixtureFile = format::parse_fixture(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let mut cones = f.structures.into_values().filter(|e| matches!(e, Entry::Cone { .. }));
    match (cones.next(), cones.next()) {
        (Some(c), None) => Ok(c),
        (None, _) => Err(InputError(format!("{}: no cone structure", path.display()))),
        (Some(_), Some(_)) => Err(InputError(format!("{}: more than one cone structure", path.display()))),
    }
}

fn reduce(path: &Path, h: i64, seed: Option<u64>, samples: Option<usize>, json: bool) -> Outcome {
    let (cone, file_seed, file_budget) = cone_of(&load_cone(path)?)?;
    let (seed, budget) = (seed.unwrap_or(file_seed), samples.unwrap_or(file_budget));
    let r = reduce_cone(&cone, h, budget, seed)?;
    if json {
        let out = json!({
            "h": h,
            "structure": corpus::cone_entry(&r.structure, seed, budget),
            "passed": r.report.passed(),
            "alarm": r.alarm,
            "literal_reading_agrees": r.literal_reading_agrees,
            "samples": r.report.samples,
            "report": r.report.report,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    } else {
        let s = &r.structure;
        println!(
            "reduced at h = {h}: dimension {}, weight {}, {} generator(s)",
            s.dim(),
            s.center(),
            s.cone.generators.len()
        );
        println!("checked on {} sampled cone element(s)", r.report.samples.len());
        match r.report.report.first() {
            None => println!("reduced structure is polarized by the reduced cone"),
            Some(f) => println!("ALARM: reduced structure fails: {f}"),
        }
        if r.literal_reading_agrees == Some(false) {
            println!("note: reading the pairing without the sign (-1)^h changes the verdict");
        }
    }
    Ok(!r.alarm)
}

fn signs(bound: u32, json: bool) -> Outcome {
    let cocycle = check_epsilon_cocycle(bound);
    let rows = godement_sweep(bound);
    let bad = rows.iter().filter(|r| r.defect != parity_sign(i64::from(r.i * r.l))).count();
    let b = i64::from(bound);
    if json {
        let eps: Vec<_> = (-b..=b).map(|k| json!({"k": k, "epsilon": epsilon(k)})).collect();
        let out = json!({
            "epsilon": eps,
            "cocycle": cocycle,
            "godement": rows,
            "godement_matches_il_sign": bad == 0,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    } else {
        println!("k        {}", (-b..=b).map(|k| format!("{k:>3}")).collect::<String>());
        println!("eps(k)   {}", (-b..=b).map(|k| format!("{:>3}", epsilon(k))).collect::<String>());
        println!(
            "cocycle eps(i+j) = eps(i)eps(j)(-1)^(ij): {} pairs, {} violation(s)",
            cocycle.checked,
            cocycle.violations.len()
        );
        println!("   i   j   k   l  defect");
        for r in &rows {
            println!("{:>4}{:>4}{:>4}{:>4}{:>8}", r.i, r.j, r.k, r.l, r.defect);
        }
        println!("{} tuple(s), {bad} differ from (-1)^(il)", rows.len());
    }
    Ok(cocycle.passed() && bad == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { files } => verify(files, cli.json),
        Command::Weightfil { matrix_file, center } => weightfil(matrix_file, *center, cli.json),
        Command::Reduce { cone_file, h, seed, samples } => reduce(cone_file, *h, *seed, *samples, cli.json),
        Command::Signs { bound } => signs(*bound, cli.json),
        Command::Demo { name } => demo(name, cli.json),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
