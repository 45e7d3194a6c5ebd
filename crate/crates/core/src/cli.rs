//! Command-line front end: parses matrix files, dispatches to the
//! verification and computation operations, and emits human-readable or
//! JSON reports.
//!
//! Exit codes: 0 when the requested property is verified or the
//! computation succeeds, 1 when a verification comes back negative, 2 on
//! I/O, parse, or precondition errors.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::braid::{self, BraidWord, DEFAULT_BUDGET};
use crate::builtin;
use crate::mat::Mat;
use crate::nomura;
use crate::pair;
use crate::sampling;
use crate::scalar::{set_float_tolerance, Ctx, Scalar};
use crate::spin;
use crate::textio;

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser)]
#[command(
    name = "jptool",
    about = "Exact verification toolkit for Jones pairs, Nomura algebras, and spin models"
)]
struct Cli {
    /// Tolerance for float-mode comparisons (also via JPTOOL_TOLERANCE)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the Jones pair property of (A, B) by all three methods
    CheckPair {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Require the two-sided (Jones pair) property, not just one-sided
        #[arg(long)]
        two_sided: bool,
    },
    /// Compute the Nomura algebra of (A, B)
    Nomura {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Test membership of this matrix and print its eigenvalue matrix
        #[arg(long)]
        theta_of: Option<PathBuf>,
        /// Extract the association scheme of the algebra
        #[arg(long)]
        scheme: bool,
    },
    /// Build the 2n x 2n block matrix W and emit its dual pair of schemes
    DualScheme {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Four-weight spin model operations
    Spinmodel {
        #[command(subcommand)]
        op: SpinCommand,
    },
    /// Evaluate the trace of a braid word
    Braid {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Braid word, whitespace-separated tokens s<k> / -s<k>
        #[arg(long)]
        word: String,
        #[arg(long)]
        strands: usize,
        /// Normalize the pair by the Markov trace scalar first
        #[arg(long)]
        normalize: bool,
        /// Square root of n, required with --normalize
        #[arg(long)]
        d: Option<String>,
        /// Cap on the tensor space dimension n^m
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Extract the regular two-graph of a dimension-2 symmetric pair
    Twograph {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Run the built-in verification suite
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ModelFiles {
    #[arg(long)]
    w1: PathBuf,
    #[arg(long)]
    w2: PathBuf,
    #[arg(long)]
    w3: PathBuf,
    #[arg(long)]
    w4: PathBuf,
    /// Square root of n, in the matrix entry grammar
    #[arg(long)]
    d: String,
}

#[derive(Subcommand)]
enum SpinCommand {
    /// Check the four axiom families of a four-weight spin model
    Check {
        #[command(flatten)]
        files: ModelFiles,
    },
    /// Build the model (DA, nB^{-1}, DA^{-1}, B; D) from an invertible Jones pair
    FromPair {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        d: String,
    },
    /// Recover the pair (D^{-1} W1, W4) from a model
    ToPair {
        #[command(flatten)]
        files: ModelFiles,
    },
}

struct Report {
    json: bool,
    start: Instant,
}

impl Report {
    fn new(json: bool) -> Report {
        Report { json, start: Instant::now() }
    }

    fn emit(&self, command: &str, exit: i32, mut body: Value) -> i32 {
        let elapsed_ms = self.start.elapsed().as_secs_f64() * 1e3;
        if self.json {
            let obj = body.as_object_mut().expect("body is an object");
            obj.insert("command".into(), json!(command));
            obj.insert("exit".into(), json!(exit));
            obj.insert("elapsed_ms".into(), json!(elapsed_ms));
            println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
        } else {
            print_text(&body, 0);
        }
        exit
    }
}

fn print_text(v: &Value, indent: usize) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{}{}:", " ".repeat(indent), k);
                        print_text(val, indent + 2);
                    }
                    _ => println!("{}{}: {}", " ".repeat(indent), k, val),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => print_text(item, indent),
                    _ => println!("{}{}", " ".repeat(indent), item),
                }
            }
        }
        other => println!("{}{}", " ".repeat(indent), other),
    }
}

fn mat_json(m: &Mat) -> Value {
    let n = m.order();
    let rows: Vec<Value> = (0..n)
        .map(|i| {
            let row: Vec<String> = (0..n).map(|j| m.at(i, j).to_string()).collect();
            json!(row)
        })
        .collect();
    json!(rows)
}

fn load(path: &PathBuf) -> Result<Mat, String> {
    textio::parse_matrix_file(path, None).map_err(|e| format!("{}: {}", path.display(), e))
}

fn load_scalar(text: &str, ctx: &Ctx) -> Result<Scalar, String> {
    textio::parse_scalar(text, ctx).ok_or_else(|| format!("cannot parse scalar {:?}", text))
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(tol) = cli.tolerance {
        set_float_tolerance(tol);
    } else if let Ok(t) = std::env::var("JPTOOL_TOLERANCE") {
        if let Ok(tol) = t.parse::<f64>() {
            set_float_tolerance(tol);
        }
    }
    let report = Report::new(cli.json);
    match dispatch(&cli.command, &report) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            EXIT_ERROR
        }
    }
}

fn dispatch(command: &Command, out: &Report) -> Result<i32, String> {
    match command {
        Command::CheckPair { a, b, two_sided } => {
            let a = load(a)?;
            let b = load(b)?;
            let rep = pair::check_pair(&a, &b).map_err(|e| e.to_string())?;
            let verdict = if *two_sided { rep.two_sided } else { rep.one_sided };
            let exit = if verdict { EXIT_VERIFIED } else { EXIT_NEGATIVE };
            Ok(out.emit(
                "check-pair",
                exit,
                json!({
                    "n": rep.n,
                    "one_sided": rep.one_sided,
                    "two_sided": rep.two_sided,
                    "invertible": rep.invertible,
                    "method_operator": rep.method_operator,
                    "method_eigenvector": rep.method_eigenvector,
                    "method_diagonal": rep.method_diagonal,
                    "a_invertible": rep.a_invertible,
                    "b_schur_invertible": rep.b_schur_invertible,
                    "a_schur_invertible": rep.a_schur_invertible,
                    "b_invertible": rep.b_invertible,
                    "a_type_ii": rep.a_type_ii,
                    "b_type_ii": rep.b_type_ii,
                    "diag_of_a_constant": rep.diag_of_a_constant,
                    "trace_of_a": rep.trace_of_a.to_string(),
                    "column_sums_of_b": rep.column_sums_of_b.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Nomura { a, b, theta_of, scheme } => {
            let a = load(a)?;
            let b = load(b)?;
            let alg = nomura::nomura_algebra(&a, &b).map_err(|e| e.to_string())?;
            let mut body = json!({
                "dimension": alg.dimension,
                "used_fast_path": alg.used_fast_path,
                "contains_identity": alg.contains_identity,
                "contains_a": alg.contains_a,
                "schur_closed": alg.schur_closed,
                "transpose_closed": alg.transpose_closed,
                "mult_commutative": alg.mult_commutative,
                "is_bose_mesner": alg.is_bose_mesner,
                "basis": alg.basis.iter().map(mat_json).collect::<Vec<_>>(),
                "theta_images": alg.theta_images.iter().map(mat_json).collect::<Vec<_>>(),
            });
            let mut exit = EXIT_VERIFIED;
            if let Some(path) = theta_of {
                let r = load(path)?;
                match nomura::theta_of(&alg, &r) {
                    Ok(s) => {
                        body["theta_of"] = mat_json(&s);
                        body["member"] = json!(true);
                    }
                    Err(nomura::NomuraError::NotInAlgebra) => {
                        body["member"] = json!(false);
                        exit = EXIT_NEGATIVE;
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            if *scheme {
                match nomura::bose_mesner_extract(&alg.basis) {
                    Ok(s) => body["scheme"] = scheme_json(&s),
                    Err(reason) => {
                        body["scheme_failure"] = json!(reason.to_string());
                        exit = EXIT_NEGATIVE;
                    }
                }
            }
            Ok(out.emit("nomura", exit, body))
        }
        Command::DualScheme { a, b } => {
            let a = load(a)?;
            let b = load(b)?;
            let w = nomura::build_w(&a, &b).map_err(|e| e.to_string())?;
            let structure = nomura::w_structure(&a, &b).map_err(|e| e.to_string())?;
            let duality = nomura::duality_check(&w).map_err(|e| e.to_string())?;
            let mut body = json!({
                "w": mat_json(&w),
                "dim_w": structure.dim_w,
                "block_pattern_ok": structure.block_pattern_ok,
                "f_memberships_ok": structure.f_memberships_ok,
                "r_memberships_ok": structure.r_memberships_ok,
                "theta_block_formula_ok": structure.theta_block_formula_ok,
            });
            let mut exit = if structure.structure_holds() { EXIT_VERIFIED } else { EXIT_NEGATIVE };
            match (&duality.scheme, &duality.dual_scheme) {
                (Some(s), Some(d)) => {
                    body["scheme"] = scheme_json(s);
                    body["dual_scheme"] = scheme_json(d);
                }
                _ => exit = EXIT_NEGATIVE,
            }
            Ok(out.emit("dual-scheme", exit, body))
        }
        Command::Spinmodel { op } => run_spin(op, out),
        Command::Braid { a, b, word, strands, normalize, d, budget } => {
            let a = load(a)?;
            let b = load(b)?;
            let word = BraidWord::parse(*strands, word).map_err(|e| e.to_string())?;
            let lambda = if *normalize {
                let d_text = d.as_ref().ok_or("--normalize requires --d")?;
                let d = load_scalar(d_text, &a.ctx())?;
                let norm = spin::markov_normalize(&a, &b, &d).map_err(|e| e.to_string())?;
                if !norm.all_hold() {
                    return Err("normalization conditions failed".into());
                }
                norm.lambda
            } else {
                Scalar::one(&a.ctx())
            };
            let trace =
                braid::braid_trace(&a, &b, &word, &lambda, *budget).map_err(|e| e.to_string())?;
            Ok(out.emit(
                "braid",
                EXIT_VERIFIED,
                json!({
                    "strands": strands,
                    "word_length": word.letters.len(),
                    "lambda": lambda.to_string(),
                    "trace": trace.to_string(),
                }),
            ))
        }
        Command::Twograph { a, b } => {
            let a = load(a)?;
            let b = load(b)?;
            let rep = spin::two_graph_analysis(&a, &b).map_err(|e| e.to_string())?;
            let exit = if rep.passes { EXIT_VERIFIED } else { EXIT_NEGATIVE };
            Ok(out.emit(
                "twograph",
                exit,
                json!({
                    "lambda": rep.lambda.to_string(),
                    "gamma": rep.gamma.to_string(),
                    "c": mat_json(&rep.c),
                    "delta": rep.delta,
                    "schur_square_in_ij_span": rep.schur_square_in_ij_span,
                    "passes": rep.passes,
                }),
            ))
        }
        Command::Selftest { seed } => Ok(run_selftest(*seed, out)),
    }
}

fn scheme_json(s: &nomura::AssociationScheme) -> Value {
    json!({
        "n": s.n,
        "num_classes": s.num_classes,
        "symmetric": s.symmetric_scheme,
        "imprimitive": s.imprimitive,
        "classes": s.classes.iter().map(mat_json).collect::<Vec<_>>(),
        "intersection_numbers": s.p,
    })
}

fn load_model(files: &ModelFiles) -> Result<spin::FourWeightSpinModel, String> {
    let w1 = load(&files.w1)?;
    let w2 = load(&files.w2)?;
    let w3 = load(&files.w3)?;
    let w4 = load(&files.w4)?;
    let d = load_scalar(&files.d, &w1.ctx())?;
    spin::FourWeightSpinModel::new(w1, w2, w3, w4, d).map_err(|e| e.to_string())
}

fn run_spin(op: &SpinCommand, out: &Report) -> Result<i32, String> {
    match op {
        SpinCommand::Check { files } => {
            let model = load_model(files)?;
            let rep = spin::check_four_weight(&model);
            let exit = if rep.passes() { EXIT_VERIFIED } else { EXIT_NEGATIVE };
            Ok(out.emit(
                "spinmodel-check",
                exit,
                json!({
                    "schur_pairings": rep.schur_pairings,
                    "inverse_pairings": rep.inverse_pairings,
                    "type3a": rep.type3a,
                    "type3b": rep.type3b,
                    "passes": rep.passes(),
                    "first_failure": rep.first_failure.as_ref().map(|f| f.to_string()),
                }),
            ))
        }
        SpinCommand::FromPair { a, b, d } => {
            let a = load(a)?;
            let b = load(b)?;
            let d = load_scalar(d, &a.ctx())?;
            match spin::pair_to_spinmodel(&a, &b, &d) {
                Ok(model) => Ok(out.emit(
                    "spinmodel-from-pair",
                    EXIT_VERIFIED,
                    json!({
                        "w1": mat_json(&model.w1),
                        "w2": mat_json(&model.w2),
                        "w3": mat_json(&model.w3),
                        "w4": mat_json(&model.w4),
                        "d": model.d.to_string(),
                    }),
                )),
                Err(spin::SpinError::NotInvertibleJonesPair) => Ok(out.emit(
                    "spinmodel-from-pair",
                    EXIT_NEGATIVE,
                    json!({ "verdict": "not an invertible Jones pair" }),
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        SpinCommand::ToPair { files } => {
            let model = load_model(files)?;
            match spin::spinmodel_to_pair(&model) {
                Ok((a, b)) => Ok(out.emit(
                    "spinmodel-to-pair",
                    EXIT_VERIFIED,
                    json!({ "a": mat_json(&a), "b": mat_json(&b) }),
                )),
                Err(spin::SpinError::AxiomsFail(f)) => Ok(out.emit(
                    "spinmodel-to-pair",
                    EXIT_NEGATIVE,
                    json!({ "verdict": format!("axioms fail: {}", f) }),
                )),
                Err(e) => Err(e.to_string()),
            }
        }
    }
}

fn run_selftest(seed: u64, out: &Report) -> i32 {
    let mut results: Vec<(String, bool)> = Vec::new();
    let mut check = |name: &str, ok: bool| results.push((name.to_string(), ok));

    let ctx = Ctx::exact(8);
    for n in 1..=4 {
        let (i, j) = builtin::trivial_pair(n, ctx);
        let rep = pair::check_pair(&i, &j).expect("well-formed");
        check(&format!("trivial pair n={}", n), rep.two_sided && rep.methods_agree());
    }

    let (a, b, d) = builtin::derived_pair_2x2();
    let rep = pair::check_pair(&a, &b).expect("well-formed");
    check("derived 2x2 pair invertible", rep.invertible);

    let model = spin::pair_to_spinmodel(&a, &b, &d).expect("model");
    check("spin model roundtrip", spin::spinmodel_to_pair(&model).is_ok());

    let h4 = builtin::sylvester_hadamard(4, ctx);
    match nomura::duality_check(&h4) {
        Ok(dual) => {
            check("Hadamard-4 duality", dual.all_hold());
            check(
                "Hadamard-4 scheme classes",
                dual.scheme.as_ref().map_or(false, |s| s.num_classes == 3),
            );
        }
        Err(_) => check("Hadamard-4 duality", false),
    }

    match braid::verify_braid_relations(&a, &b, 5, 3, DEFAULT_BUDGET) {
        Ok(rel) => check("braid relations r=5", rel.representation() && rel.jones_pair),
        Err(_) => check("braid relations r=5", false),
    }

    let norm = spin::markov_normalize(&a, &b, &d).expect("normalizable");
    check("Markov normalization", norm.all_hold());

    // seeded random method agreement
    let mut rng = sampling::rng(seed);
    let sctx = Ctx::exact(4);
    let mut agree = true;
    for round in 0..20usize {
        let n = 2 + (seed as usize + round) % 2;
        let ra = sampling::random_invertible_matrix(&mut rng, n, &sctx);
        let rb = sampling::random_unit_matrix(&mut rng, n, &sctx);
        if let Ok(rep) = pair::check_pair(&ra, &rb) {
            if !rep.methods_agree() {
                agree = false;
            }
        }
    }
    check("random method agreement", agree);

    let all_ok = results.iter().all(|(_, ok)| *ok);
    let body = json!({
        "seed": seed,
        "results": results
            .iter()
            .map(|(name, ok)| json!({ "name": name, "ok": ok }))
            .collect::<Vec<_>>(),
        "all_ok": all_ok,
    });
    out.emit("selftest", if all_ok { EXIT_VERIFIED } else { EXIT_NEGATIVE }, body)
}
