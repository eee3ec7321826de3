//! Command-line workbench.
//!
//! Four commands: `verify` (accept or reject an instance file, with
//! witnesses), `sharpen` (run the full certification pipeline and emit the
//! certificate), `generate` (seeded instance construction: split-form
//! pairs, the twisted non-sharp family, scalar restriction of an existing
//! instance), and `oracle subspaces` (exhaustive invariant-subspace search
//! cross-checked against the randomized test, within hard bounds).
//!
//! Exit codes are a stable scripting contract: 0 accepted, 2 rejected with
//! witness, 3 corrupted certificate, 4 inconclusive, 1 usage or parse
//! error. The `TD_TRIAL_BUDGET` environment variable overrides the trial
//! budget of every randomized decision procedure.

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::field::{Field, FieldElement};
use crate::generate::{
    restrict_scalars, seeded_restriction_pair, seeded_split_params, split_form_pair,
    twisted_diameter1_nonsharp,
    GenerateError, TwistedParams,
};
use crate::instance::{
    certificate_json, emit_instance, encode_element, instance_digest, parse_instance,
    record_json, InstanceFile,
};
use crate::matrix::ExactMatrix;
use crate::meataxe::{
    bruteforce_invariant_subspaces, norton_irreducible, verify_invariant, within_brute_bounds,
    IrreducibilityOutcome,
};
use crate::report::{Outcome, ReportEnvelope};
use crate::sharpen::{sharpen_pipeline, SharpenError};
use crate::td::{
    verify_td_system, TdSystemRecord, VerificationFailure, VerifyError, DEFAULT_TRIAL_BUDGET,
};

pub const USAGE_EXIT: i32 = 1;

/// Seed for commands without a `--seed` flag, so runs are reproducible.
const FIXED_SEED: u64 = 0x7d5e_ed00;

#[derive(Parser)]
#[command(
    name = "tdsharp",
    about = "Exact verification and sharpening of tridiagonal pairs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an instance file holds a tridiagonal pair; print the
    /// certified record or the rejection witness.
    Verify {
        /// Instance file, or a directory of .json instances with --batch.
        file: PathBuf,
        /// Treat FILE as a directory and verify every .json file in it.
        #[arg(long)]
        batch: bool,
        /// Write a JSON report here (a directory in batch mode).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the full sharpening pipeline and emit the certificate.
    Sharpen {
        file: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Seed for witness sampling and the randomized module test.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Construct instances.
    Generate {
        #[command(subcommand)]
        what: GenerateCmd,
    },
    /// Exhaustive cross-checks.
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Seeded bidiagonal pair over GF(p^k) of the requested diameter.
    Split {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Non-sharp 4-dimensional pair over GF(p) from a twisted 2x2 seed
    /// over GF(p^2).
    Twisted {
        #[arg(long)]
        p: u64,
        /// theta0,theta1,thetastar0,thetastar1,gamma with gamma written
        /// like "1+i", "2i", or "i" (i denotes a root of the default
        /// quadratic modulus of GF(p^2); that is a square root of -1
        /// whenever x^2+1 is irreducible, e.g. for p = 3 mod 4).
        #[arg(long)]
        params: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite an extension-field instance over its prime field.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Enumerate all proper invariant subspaces by brute force (bounds:
    /// field order <= 4, dimension <= 4) and compare with the randomized
    /// test.
    Subspaces { file: PathBuf },
}

/// Trial budget for randomized procedures, overridable via
/// TD_TRIAL_BUDGET.
pub fn trial_budget() -> usize {
    std::env::var("TD_TRIAL_BUDGET")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|b| *b > 0)
        .unwrap_or(DEFAULT_TRIAL_BUDGET)
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap's own rendering through (it handles --help/--version
            // with success exit codes).
            let _ = e.print();
            return if e.use_stderr() { USAGE_EXIT } else { 0 };
        }
    };
    match cli.command {
        Command::Verify { file, batch, json } => {
            if batch {
                cmd_verify_batch(&file, json.as_deref())
            } else {
                cmd_verify(&file, json.as_deref())
            }
        }
        Command::Sharpen { file, json, seed } => cmd_sharpen(&file, json.as_deref(), seed),
        Command::Generate { what } => match what {
            GenerateCmd::Split { p, k, d, seed, out } => {
                cmd_generate_split(p, k, d, seed, out.as_deref())
            }
            GenerateCmd::Twisted { p, params, out } => {
                cmd_generate_twisted(p, &params, out.as_deref())
            }
            GenerateCmd::Restrict { file, out } => cmd_generate_restrict(&file, out.as_deref()),
        },
        Command::Oracle { what } => match what {
            OracleCmd::Subspaces { file } => cmd_oracle_subspaces(&file),
        },
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn load_instance(path: &Path) -> Result<InstanceFile, String> {
    let bytes =
        std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_instance(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

/// Exit code for a pair that did not verify: the same mapping `verify`
/// itself uses, so rejected candidates exit 2 rather than 1.
fn verify_error_exit(e: &VerifyError) -> i32 {
    match e {
        VerifyError::Rejected(_) => Outcome::Rejected.exit_code(),
        VerifyError::Corrupted(_) => Outcome::Corrupted.exit_code(),
        VerifyError::Inconclusive(_) => Outcome::Inconclusive.exit_code(),
    }
}

fn failure_json(failure: &VerificationFailure) -> Value {
    let witness = match failure {
        VerificationFailure::NotDiagonalizableA(w)
        | VerificationFailure::NotDiagonalizableAStar(w) => {
            json!({ "factor": format!("{w:?}") })
        }
        VerificationFailure::NoStandardOrderingA { edges }
        | VerificationFailure::NoStandardOrderingAStar { edges } => {
            json!({ "edges": edges })
        }
        VerificationFailure::Reducible(w) => {
            let basis: Vec<Value> = w
                .basis
                .iter()
                .map(|v| Value::Array(v.iter().map(encode_element).collect()))
                .collect();
            json!({ "basis": basis })
        }
    };
    json!({
        "failure": failure.tag(),
        "detail": failure.to_string(),
        "witness": witness,
    })
}

/// Verify one parsed instance; returns the outcome, the payload, and a
/// one-line human summary.
fn verify_outcome(instance: &InstanceFile) -> (Outcome, Value, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(FIXED_SEED);
    match verify_td_system(&instance.a, &instance.a_star, &mut rng, trial_budget()) {
        Ok(record) => {
            let line = format!(
                "accepted: n={} d={} shape={:?} sharp={}",
                record.n(),
                record.d,
                record.shape,
                record.sharp
            );
            (Outcome::Accepted, record_json(&record), line)
        }
        Err(VerifyError::Rejected(f)) => {
            let line = format!("rejected: {f}");
            (Outcome::Rejected, failure_json(&f), line)
        }
        Err(VerifyError::Corrupted(m)) => {
            (Outcome::Corrupted, json!({ "error": m }), format!("corrupted: {m}"))
        }
        Err(VerifyError::Inconclusive(m)) => (
            Outcome::Inconclusive,
            json!({ "error": m }),
            format!("inconclusive: {m}"),
        ),
    }
}

fn write_report(
    path: &Path,
    command: &str,
    digest: &str,
    outcome: Outcome,
    payload: Value,
    wall_ms: u128,
    seed: Option<u64>,
) -> Result<(), String> {
    let envelope = ReportEnvelope {
        command: command.into(),
        digest: digest.into(),
        outcome,
        payload,
        wall_ms,
        seed,
    };
    envelope
        .write_atomic(path)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn cmd_verify(file: &Path, json_out: Option<&Path>) -> i32 {
    let started = Instant::now();
    let instance = match load_instance(file) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{e}");
            return USAGE_EXIT;
        }
    };
    let digest = instance_digest(&instance);
    let (outcome, payload, line) = verify_outcome(&instance);
    println!("{}: {line}", file.display());
    if let Some(out) = json_out {
        if let Err(e) = write_report(
            out,
            "verify",
            &digest,
            outcome,
            payload,
            started.elapsed().as_millis(),
            None,
        ) {
            eprintln!("{e}");
            return USAGE_EXIT;
        }
    }
    outcome.exit_code()
}

fn cmd_verify_batch(dir: &Path, json_dir: Option<&Path>) -> i32 {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
            .collect(),
        Err(e) => {
            eprintln!("cannot read directory {}: {e}", dir.display());
            return USAGE_EXIT;
        }
    };
    files.sort();
    if files.is_empty() {
        eprintln!("no .json instances in {}", dir.display());
        return USAGE_EXIT;
    }
    if let Some(d) = json_dir {
        if let Err(e) = std::fs::create_dir_all(d) {
            eprintln!("cannot create {}: {e}", d.display());
            return USAGE_EXIT;
        }
    }
    // Per-file isolation: each file is parsed and verified independently;
    // one malformed file does not stop the batch.
    let results: Vec<(PathBuf, i32, String)> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let started = Instant::now();
                    match load_instance(path) {
                        Ok(instance) => {
                            let digest = instance_digest(&instance);
                            let (outcome, payload, line) = verify_outcome(&instance);
                            let mut code = outcome.exit_code();
                            if let Some(d) = json_dir {
                                let stem = path
                                    .file_stem()
                                    .map(|s| s.to_string_lossy().into_owned())
                                    .unwrap_or_else(|| "instance".into());
                                let out = d.join(format!("{stem}.report.json"));
                                if let Err(e) = write_report(
                                    &out,
                                    "verify",
                                    &digest,
                                    outcome,
                                    payload,
                                    started.elapsed().as_millis(),
                                    None,
                                ) {
                                    return (path.clone(), USAGE_EXIT, e);
                                }
                                code = outcome.exit_code();
                            }
                            (path.clone(), code, line)
                        }
                        Err(e) => (path.clone(), USAGE_EXIT, format!("parse error: {e}")),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut worst = 0;
    for (path, code, line) in &results {
        println!("{}: {line}", path.display());
        // Severity order: corrupted > inconclusive > rejected > usage > ok.
        let rank = |c: i32| match c {
            3 => 4,
            4 => 3,
            2 => 2,
            1 => 1,
            _ => 0,
        };
        if rank(*code) > rank(worst) {
            worst = *code;
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// sharpen
// ---------------------------------------------------------------------------

fn sharpen_failure(e: &SharpenError) -> (Outcome, Value, i32) {
    match e {
        SharpenError::Verify(VerifyError::Rejected(f)) => {
            (Outcome::Rejected, failure_json(f), 2)
        }
        SharpenError::Verify(VerifyError::Corrupted(m)) => {
            (Outcome::Corrupted, json!({ "error": m }), 3)
        }
        SharpenError::Verify(VerifyError::Inconclusive(m)) => {
            (Outcome::Inconclusive, json!({ "error": m }), 4)
        }
        SharpenError::Corrupted { lemma, message } => (
            Outcome::Corrupted,
            json!({ "lemma": lemma, "error": message }),
            3,
        ),
        SharpenError::Inconclusive(m) => (Outcome::Inconclusive, json!({ "error": m }), 4),
        SharpenError::Unsupported(m) => (Outcome::Corrupted, json!({ "error": m }), USAGE_EXIT),
    }
}

fn cmd_sharpen(file: &Path, json_out: Option<&Path>, seed: u64) -> i32 {
    let started = Instant::now();
    let instance = match load_instance(file) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{e}");
            return USAGE_EXIT;
        }
    };
    let digest = instance_digest(&instance);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (outcome, payload, line, code) =
        match sharpen_pipeline(&instance.a, &instance.a_star, &mut rng, trial_budget()) {
            Ok(cert) => {
                let line = format!(
                    "accepted: rho={} T_dim={} sharpened to {}x{} over degree-{} field, shape {:?}",
                    cert.rho,
                    cert.t_dim,
                    cert.sharpened.n(),
                    cert.sharpened.n(),
                    cert.sharpened.field.degree(),
                    cert.sharpened.shape
                );
                (
                    Outcome::Accepted,
                    certificate_json(&cert, &digest),
                    line,
                    0,
                )
            }
            Err(e) => {
                let (outcome, payload, code) = sharpen_failure(&e);
                (outcome, payload, format!("{}: {e}", outcome.as_str()), code)
            }
        };
    println!("{}: {line}", file.display());
    if let Some(out) = json_out {
        if let Err(e) = write_report(
            out,
            "sharpen",
            &digest,
            outcome,
            payload,
            started.elapsed().as_millis(),
            Some(seed),
        ) {
            eprintln!("{e}");
            return USAGE_EXIT;
        }
    }
    code
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

fn emit_generated(
    instance: &InstanceFile,
    out: Option<&Path>,
    summary: &str,
) -> i32 {
    let text = emit_instance(instance);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return USAGE_EXIT;
            }
            println!(
                "{}: {summary} (digest {})",
                path.display(),
                instance_digest(instance)
            );
        }
        None => print!("{text}"),
    }
    0
}

fn provenance(generator: &str, params: Value, seed: Option<u64>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("generator".into(), json!(generator));
    m.insert("params".into(), params);
    m.insert(
        "seed".into(),
        match seed {
            Some(s) => json!(s),
            None => Value::Null,
        },
    );
    m
}

fn cmd_generate_split(p: u64, k: usize, d: usize, seed: u64, out: Option<&Path>) -> i32 {
    let field = match Field::finite(p, k, None) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("cannot build GF({p}^{k}): {e}");
            return USAGE_EXIT;
        }
    };
    // Over an extension field the point of generating is to restrict
    // later, so draw a candidate whose eigenvalue data stays in the base
    // field (a Kronecker sum of twisted diameter-1 factors once d >= 2);
    // over a prime field draw split-form parameters directly.
    let drawn = if k >= 2 {
        seeded_restriction_pair(&field, d, seed)
    } else {
        seeded_split_params(&field, d, seed).map(|params| split_form_pair(&params))
    };
    let (a, a_star) = match drawn {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("cannot draw a candidate pair: {e}");
            return USAGE_EXIT;
        }
    };
    // Generators emit candidates; re-verify before writing anything.
    let mut rng = ChaCha8Rng::seed_from_u64(FIXED_SEED);
    let record = match verify_td_system(&a, &a_star, &mut rng, trial_budget()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("generated candidate failed verification: {e}");
            return verify_error_exit(&e);
        }
    };
    let instance = InstanceFile {
        field,
        a,
        a_star,
        provenance: Some(provenance(
            "split",
            json!({ "p": p, "k": k as u64, "d": d as u64 }),
            Some(seed),
        )),
    };
    emit_generated(
        &instance,
        out,
        &format!(
            "split-form pair, n={} d={} shape={:?}",
            record.n(),
            record.d,
            record.shape
        ),
    )
}

/// Parse an element of GF(p^2) written as `a`, `bi`, `i`, or `a+bi` /
/// `a-bi`, where `i` denotes the adjoined root of the default quadratic
/// modulus (a square root of -1 exactly when x^2+1 is that modulus, as
/// for p = 3 mod 4; for other p the default is the lexicographically
/// smallest irreducible quadratic).
fn parse_gaussian(s: &str) -> Result<(i64, i64), String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty element".into());
    }
    let parse_int = |t: &str, what: &str| -> Result<i64, String> {
        t.parse::<i64>()
            .map_err(|_| format!("malformed {what} part {t:?}"))
    };
    if let Some(body) = s.strip_suffix('i') {
        // Split the real part from the i-coefficient at the last interior
        // sign character (one that follows a digit, so leading signs and
        // the sign of the real part are not separators).
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| {
                (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit()
            });
        match split {
            Some(i) => {
                let a = parse_int(&body[..i], "real")?;
                let sign = if body[i..].starts_with('-') { -1 } else { 1 };
                let mag = &body[i + 1..];
                let b = if mag.is_empty() { 1 } else { parse_int(mag, "imaginary")? };
                Ok((a, sign * b))
            }
            None => {
                let b = match body {
                    "" => 1,
                    "-" => -1,
                    "+" => 1,
                    _ => parse_int(body, "imaginary")?,
                };
                Ok((0, b))
            }
        }
    } else {
        Ok((parse_int(&s, "real")?, 0))
    }
}

fn cmd_generate_twisted(p: u64, params: &str, out: Option<&Path>) -> i32 {
    let parts: Vec<&str> = params.split(',').collect();
    if parts.len() != 5 {
        eprintln!(
            "--params needs theta0,theta1,thetastar0,thetastar1,gamma (got {} parts)",
            parts.len()
        );
        return USAGE_EXIT;
    }
    let mut ints = Vec::with_capacity(4);
    for part in &parts[..4] {
        match part.trim().parse::<i64>() {
            Ok(v) => ints.push(v),
            Err(_) => {
                eprintln!("malformed eigenvalue {part:?}");
                return USAGE_EXIT;
            }
        }
    }
    let gamma = match parse_gaussian(parts[4]) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("malformed gamma: {e}");
            return USAGE_EXIT;
        }
    };
    let twisted_params =
        match TwistedParams::from_integers(p, (ints[0], ints[1]), (ints[2], ints[3]), gamma) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("invalid parameters: {e}");
                return USAGE_EXIT;
            }
        };
    let built = match twisted_diameter1_nonsharp(&twisted_params) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("construction rejected: {e}");
            return USAGE_EXIT;
        }
    };
    let field = built.a.field().clone();
    let instance = InstanceFile {
        field,
        a: built.a,
        a_star: built.a_star,
        provenance: Some(provenance("twisted", json!({ "p": p, "params": params }), None)),
    };
    emit_generated(
        &instance,
        out,
        &format!(
            "twisted non-sharp pair, n={} seed shape {:?}",
            instance.a.rows(),
            built.seed.shape
        ),
    )
}

fn cmd_generate_restrict(file: &Path, out: Option<&Path>) -> i32 {
    let instance = match load_instance(file) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{e}");
            return USAGE_EXIT;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(FIXED_SEED);
    let record = match verify_td_system(&instance.a, &instance.a_star, &mut rng, trial_budget()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("source instance failed verification: {e}");
            return verify_error_exit(&e);
        }
    };
    let (a, a_star) = match restrict_scalars(&record) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("restriction failed: {e}");
            return USAGE_EXIT;
        }
    };
    let restricted = InstanceFile {
        field: a.field().clone(),
        a,
        a_star,
        provenance: Some(provenance(
            "restrict",
            json!({ "source": instance_digest(&instance) }),
            None,
        )),
    };
    emit_generated(
        &restricted,
        out,
        &format!(
            "restriction to the prime field, n={}",
            restricted.a.rows()
        ),
    )
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

fn cmd_oracle_subspaces(file: &Path) -> i32 {
    let instance = match load_instance(file) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{e}");
            return USAGE_EXIT;
        }
    };
    let n = instance.a.rows();
    if !within_brute_bounds(&instance.field, n) {
        eprintln!(
            "exhaustive search bounds exceeded: need field order <= 4 and dimension <= 4, \
             got order {:?} and dimension {n}",
            instance.field.order()
        );
        return USAGE_EXIT;
    }
    let gens = vec![instance.a.clone(), instance.a_star.clone()];
    let subspaces = match bruteforce_invariant_subspaces(&gens) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("exhaustive search failed: {e}");
            return USAGE_EXIT;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(FIXED_SEED);
    let fast = match norton_irreducible(&gens, &mut rng, trial_budget()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("randomized test failed: {e}");
            return USAGE_EXIT;
        }
    };
    match (&fast, subspaces.is_empty()) {
        (IrreducibilityOutcome::Irreducible, true) => {
            println!(
                "{}: no proper invariant subspace; agrees with the randomized test",
                file.display()
            );
            0
        }
        (IrreducibilityOutcome::Reducible(w), false) => {
            if !verify_invariant(&gens, w) {
                eprintln!("randomized witness is not actually invariant");
                return 3;
            }
            println!(
                "{}: {} proper invariant subspace(s); randomized witness of dimension {} \
                 verified invariant; agrees",
                file.display(),
                subspaces.len(),
                w.dim()
            );
            2
        }
        (IrreducibilityOutcome::Inconclusive { trials }, true) => {
            println!(
                "{}: exhaustive search found nothing; randomized test inconclusive \
                 after {trials} trials",
                file.display()
            );
            4
        }
        (IrreducibilityOutcome::Inconclusive { trials }, false) => {
            println!(
                "{}: {} invariant subspace(s) found; randomized test inconclusive \
                 after {trials} trials",
                file.display(),
                subspaces.len()
            );
            2
        }
        _ => {
            eprintln!(
                "{}: DISAGREEMENT between exhaustive search and the randomized test",
                file.display()
            );
            3
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers for examples and tests
// ---------------------------------------------------------------------------

/// Verify a pair directly (used by examples; same seed policy as the CLI).
pub fn verify_pair_default(
    a: &ExactMatrix,
    a_star: &ExactMatrix,
) -> Result<TdSystemRecord, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(FIXED_SEED);
    verify_td_system(a, a_star, &mut rng, trial_budget())
}

/// Build the flagship instance value in memory (the file produced by
/// `generate twisted --p 3 --params 0,1,0,1,1+i`).
pub fn flagship_instance() -> Result<InstanceFile, GenerateError> {
    let params = TwistedParams::from_integers(3, (0, 1), (0, 1), (1, 1))?;
    let built = twisted_diameter1_nonsharp(&params)?;
    Ok(InstanceFile {
        field: built.a.field().clone(),
        a: built.a,
        a_star: built.a_star,
        provenance: Some(provenance(
            "twisted",
            json!({ "p": 3, "params": "0,1,0,1,1+i" }),
            None,
        )),
    })
}

/// Convenience used in a few examples: an element rendered like the
/// instance file encodes it.
pub fn element_json(x: &FieldElement) -> Value {
    encode_element(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("tdsharp-cli-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn run(args: &[&str]) -> i32 {
        run_from(args.iter().map(|s| s.to_string()))
    }

    #[test]
    fn gaussian_parser_accepts_the_documented_forms() {
        assert_eq!(parse_gaussian("1+i").unwrap(), (1, 1));
        assert_eq!(parse_gaussian("1-i").unwrap(), (1, -1));
        assert_eq!(parse_gaussian("2i").unwrap(), (0, 2));
        assert_eq!(parse_gaussian("i").unwrap(), (0, 1));
        assert_eq!(parse_gaussian("-i").unwrap(), (0, -1));
        assert_eq!(parse_gaussian("7").unwrap(), (7, 0));
        assert_eq!(parse_gaussian("1+2i").unwrap(), (1, 2));
        assert_eq!(parse_gaussian("-1-2i").unwrap(), (-1, -2));
        assert_eq!(parse_gaussian(" 2 + 2i ").unwrap(), (2, 2));
        assert!(parse_gaussian("").is_err());
        assert!(parse_gaussian("x+i").is_err());
    }

    #[test]
    fn twisted_generation_verify_and_sharpen_chain() {
        let dir = tmpdir("chain");
        let inst = dir.join("flagship.json");
        let report = dir.join("verify.json");
        let cert = dir.join("sharpen.json");

        assert_eq!(
            run(&[
                "tdsharp", "generate", "twisted", "--p", "3", "--params", "0,1,0,1,1+i",
                "--out", inst.to_str().unwrap()
            ]),
            0
        );
        let written = std::fs::read_to_string(&inst).unwrap();
        assert_eq!(written, emit_instance(&flagship_instance().unwrap()));

        assert_eq!(
            run(&[
                "tdsharp", "verify", inst.to_str().unwrap(), "--json",
                report.to_str().unwrap()
            ]),
            0
        );
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(v["outcome"], json!("accepted"));
        assert_eq!(v["payload"]["shape"], json!([2, 2]));
        assert_eq!(v["payload"]["sharp"], json!(false));

        assert_eq!(
            run(&[
                "tdsharp", "sharpen", inst.to_str().unwrap(), "--json",
                cert.to_str().unwrap(), "--seed", "7"
            ]),
            0
        );
        let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
        assert_eq!(c["outcome"], json!("accepted"));
        assert_eq!(c["seed"], json!(7));
        assert_eq!(c["payload"]["rho"], json!(2));
        assert_eq!(c["payload"]["lemma_passes"].as_object().unwrap().len(), 13);
        assert_eq!(c["payload"]["sharpened"]["shape"], json!([1, 1]));

        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn reducible_instance_exits_2_with_witness() {
        let dir = tmpdir("reducible");
        let path = dir.join("diag.json");
        std::fs::write(
            &path,
            r#"{"version":1,"field":{"kind":"prime","p":3,"k":1,"modulus":[]},
               "A":[[[0],[0]],[[0],[1]]],"Astar":[[[0],[0]],[[0],[1]]]}"#,
        )
        .unwrap();
        let report = dir.join("report.json");
        assert_eq!(
            run(&["tdsharp", "verify", path.to_str().unwrap(), "--json", report.to_str().unwrap()]),
            2
        );
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(v["outcome"], json!("rejected"));
        assert_eq!(v["payload"]["failure"], json!("reducible"));
        assert!(v["payload"]["witness"]["basis"].is_array());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn oracle_agrees_on_flagship_and_enforces_bounds() {
        let dir = tmpdir("oracle");
        let flagship = dir.join("flagship.json");
        std::fs::write(&flagship, emit_instance(&flagship_instance().unwrap())).unwrap();
        assert_eq!(run(&["tdsharp", "oracle", "subspaces", flagship.to_str().unwrap()]), 0);

        let diag = dir.join("diag.json");
        std::fs::write(
            &diag,
            r#"{"version":1,"field":{"kind":"prime","p":3,"k":1,"modulus":[]},
               "A":[[[0],[0]],[[0],[1]]],"Astar":[[[0],[0]],[[0],[1]]]}"#,
        )
        .unwrap();
        assert_eq!(run(&["tdsharp", "oracle", "subspaces", diag.to_str().unwrap()]), 2);

        let big = dir.join("big.json");
        std::fs::write(
            &big,
            r#"{"version":1,"field":{"kind":"prime","p":5,"k":1,"modulus":[]},
               "A":[[[0],[0]],[[1],[1]]],"Astar":[[[0],[1]],[[0],[1]]]}"#,
        )
        .unwrap();
        assert_eq!(run(&["tdsharp", "oracle", "subspaces", big.to_str().unwrap()]), 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn split_then_restrict_produces_a_verifying_prime_field_instance() {
        let dir = tmpdir("restrict");
        let seed_file = dir.join("seed.json");
        let restricted = dir.join("restricted.json");
        assert_eq!(
            run(&[
                "tdsharp", "generate", "split", "--p", "3", "--k", "2", "--d", "1",
                "--seed", "1", "--out", seed_file.to_str().unwrap()
            ]),
            0
        );
        assert_eq!(
            run(&[
                "tdsharp", "generate", "restrict", seed_file.to_str().unwrap(),
                "--out", restricted.to_str().unwrap()
            ]),
            0
        );
        let parsed = parse_instance(&std::fs::read(&restricted).unwrap()).unwrap();
        assert_eq!(parsed.field.degree(), 1);
        assert_eq!(parsed.field.characteristic(), 3);
        assert_eq!(parsed.a.rows(), 4);
        assert_eq!(run(&["tdsharp", "verify", restricted.to_str().unwrap()]), 0);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn batch_mode_reports_the_worst_outcome() {
        let dir = tmpdir("batch");
        let good = dir.join("a_good.json");
        std::fs::write(&good, emit_instance(&flagship_instance().unwrap())).unwrap();
        let bad = dir.join("b_bad.json");
        std::fs::write(
            &bad,
            r#"{"version":1,"field":{"kind":"prime","p":3,"k":1,"modulus":[]},
               "A":[[[0],[0]],[[0],[1]]],"Astar":[[[0],[0]],[[0],[1]]]}"#,
        )
        .unwrap();
        let reports = dir.join("reports");
        assert_eq!(
            run(&[
                "tdsharp", "verify", dir.to_str().unwrap(), "--batch", "--json",
                reports.to_str().unwrap()
            ]),
            2
        );
        let good_report: Value = serde_json::from_str(
            &std::fs::read_to_string(reports.join("a_good.report.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(good_report["outcome"], json!("accepted"));
        let bad_report: Value = serde_json::from_str(
            &std::fs::read_to_string(reports.join("b_bad.report.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(bad_report["outcome"], json!("rejected"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn malformed_files_and_bad_arguments_exit_1() {
        let dir = tmpdir("usage");
        let junk = dir.join("junk.json");
        std::fs::write(&junk, "not json").unwrap();
        assert_eq!(run(&["tdsharp", "verify", junk.to_str().unwrap()]), 1);
        assert_eq!(run(&["tdsharp", "no-such-command"]), 1);
        assert_eq!(
            run(&["tdsharp", "generate", "twisted", "--p", "3", "--params", "0,1,0,1"]),
            1
        );
        assert_eq!(
            run(&["tdsharp", "generate", "twisted", "--p", "3", "--params", "0,1,0,1,2"]),
            1
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn trial_budget_reads_the_environment() {
        std::env::set_var("TD_TRIAL_BUDGET", "17");
        assert_eq!(trial_budget(), 17);
        std::env::set_var("TD_TRIAL_BUDGET", "not-a-number");
        assert_eq!(trial_budget(), DEFAULT_TRIAL_BUDGET);
        std::env::remove_var("TD_TRIAL_BUDGET");
        assert_eq!(trial_budget(), DEFAULT_TRIAL_BUDGET);
    }
}
