//! Command implementations behind the `symcheck` binary. Each command
//! returns an [`Outcome`]: a JSON report, a short human summary and the
//! process exit code.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use symcheck_core::algebra::{GaussianRational, MultiPoly, Rational};
use symcheck_core::analysis::{
    compute_w, elliptic_over_c, elliptic_over_r, find_witness, kernel_inclusion, quotient_spec,
    rank_profile, search_factorization, verify_factor_on_w, AnalysisError, InclusionCertificate,
    RealVerdict, Witness, DEFAULT_SEED, DEFAULT_S_MAX,
};
use symcheck_core::numerics::{
    bb_ratio_experiment, counterexample_blowup, korn_constant_p2, sobolev_ratio_experiment,
    BbConfig, ExperimentStatus, NumericsError, SobolevConfig,
};
use symcheck_core::operators::{
    catalog_with, parse_op, serialize_op, CatalogParams, DiffOp, OperatorPair, PairMode,
};

const COMPONENT_COUNT_NOTE: &str = "fields carry one component per multi-index |β| = k, binom(N+k−1, N−1) in total; the alternative count binom(N+k−1, N) does not match the number of such multi-indices";
pub const SCHEMA: &str = "symcheck-report/1";
const NO_REFERENCE_CONSTANT: &str = "no reference constant available: the inequality constants are existential, so only stability is measured";

pub mod exit {
    pub const OK: i32 = 0;
    pub const HYPOTHESIS: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const INPUT: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "symcheck", version, about = "Exact symbol analysis for constant-coefficient operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, ellipticity and cancellation of one operator
    Analyze(AnalyzeArgs),
    /// Kernel inclusion, factorization certificate or witness for a pair
    Compare(CompareArgs),
    /// Numerical experiments
    #[command(subcommand)]
    Experiment(ExperimentKind),
    /// Write a catalog operator as an operator file
    Catalog(CatalogArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Report path; without it the report goes to stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub op: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Operator on the right of the inequality (𝒜)
    #[arg(short = 'a', long = "cal-a")]
    pub cal_a: PathBuf,
    /// Operator on the left of the inequality (A)
    #[arg(short = 'A', long = "op-a")]
    pub a: PathBuf,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_parser = parse_mode)]
    pub mode: PairMode,
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    pub s_max: u32,
    #[command(flatten)]
    pub common: Common,
}

fn parse_mode(s: &str) -> Result<PairMode, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
pub enum ExperimentKind {
    /// p = 2 Korn constant on the torus
    Korn2 {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        refine: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Plane-wave counterexample family from a kernel-inclusion witness
    Blowup {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        modes: Vec<u32>,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Duality ratios for fields with vanishing k-th divergence
    Bb {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 3)]
        modes_per_trial: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sobolev-type ratios modulo the polynomial quotient space
    Sobolev {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        modes_per_trial: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    pub name: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub components: Option<usize>,
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of running one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Report JSON, or the operator file for `catalog`.
    pub document: String,
    pub summary: String,
    pub exit_code: i32,
    pub out: Option<PathBuf>,
}

struct LoadedOp {
    op: DiffOp,
    path: String,
    sha256: String,
}

impl LoadedOp {
    fn reference(&self) -> Value {
        json!({ "name": self.op.name(), "file": self.path, "sha256": self.sha256 })
    }
}

struct InputError(String);

fn load_op(path: &Path) -> Result<LoadedOp, InputError> {
    let bytes = fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| InputError(format!("{}: not valid UTF-8", path.display())))?;
    let op = parse_op(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(LoadedOp {
        op,
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn rationals(v: &[Rational]) -> Value {
    Value::from(v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn gaussians(v: &[GaussianRational]) -> Value {
    Value::from(v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn poly(p: &MultiPoly) -> Value {
    Value::from(p.to_string_with("ξ"))
}

fn op_json(op: &DiffOp) -> Value {
    serde_json::from_str(&serialize_op(op)).expect("serialized operator is JSON")
}

fn real_verdict(v: &RealVerdict) -> Value {
    match v {
        RealVerdict::CertifiedNo(p) => json!({ "status": v.label(), "witness": rationals(p) }),
        _ => json!({ "status": v.label() }),
    }
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "xi": gaussians(&w.xi),
        "v": gaussians(&w.v),
        "residual": gaussians(&w.residual),
        "real": w.is_real(),
    })
}

/// True when the report involves fields indexed by multi-indices `|β| = k`.
fn uses_multi_index_components(config: &Value, operators: &Value) -> bool {
    let named = |v: &Value| v["name"].as_str().is_some_and(|n| n.starts_with("div_k"));
    config["kind"] == "bb" || operators.as_object().is_some_and(|o| o.values().any(named))
}

fn report(command: &str, config: Value, operators: Value, status: &str, results: Value, notes: &[&str]) -> String {
    let mut notes: Vec<&str> = notes.to_vec();
    if uses_multi_index_components(&config, &operators) {
        notes.push(COMPONENT_COUNT_NOTE);
    }
    let doc = json!({
        "schema": SCHEMA,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "operators": operators,
        "status": status,
        "results": results,
        "notes": notes,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serialisation");
    s.push('\n');
    s
}

fn input_error(command: &str, config: Value, err: InputError, out: Option<PathBuf>) -> Outcome {
    Outcome {
        document: report(command, config, json!({}), "INPUT_ERROR", json!({ "error": err.0 }), &[]),
        summary: format!("input error: {}", err.0),
        exit_code: exit::INPUT,
        out,
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Experiment(kind) => cmd_experiment(&kind),
        Command::Catalog(args) => cmd_catalog(&args),
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Outcome {
    let config = json!({ "op": args.op.display().to_string(), "seed": args.common.seed });
    let out = args.common.out.clone();
    let loaded = match load_op(&args.op) {
        Ok(l) => l,
        Err(e) => return input_error("analyze", config, e, out),
    };
    let op = &loaded.op;
    let seed = args.common.seed;
    let profile = rank_profile(op, seed);
    let elliptic_c = elliptic_over_c(op);
    let elliptic_r = elliptic_over_r(op, seed);
    let mut notes = Vec::new();
    let (cancelling, w_json) = if profile.constant_rank_r.is_yes() {
        let w = compute_w(op, seed);
        let basis: Vec<Value> = w.basis.iter().map(|v| rationals(v)).collect();
        (
            Value::from(w.cancelling()),
            json!({ "dim": w.basis.len(), "basis": basis, "samples": w.samples }),
        )
    } else {
        notes.push("real rank is not constant, so W is not computed");
        (Value::Null, Value::Null)
    };
    let results = json!({
        "N": op.n(), "d": op.d(), "l": op.l(), "k": op.k(),
        "generic_rank": profile.generic_rank,
        "r": profile.kernel_dim,
        "constant_rank_C": profile.constant_rank_c,
        "constant_rank_R": real_verdict(&profile.constant_rank_r),
        "elliptic_C": elliptic_c,
        "elliptic_R": real_verdict(&elliptic_r),
        "cancelling": cancelling,
        "W": w_json,
    });
    let summary = format!(
        "{}: rank {} (r = {}), constant rank C: {}, R: {}; elliptic C: {}, R: {}; cancelling: {}",
        op.name(),
        profile.generic_rank,
        profile.kernel_dim,
        profile.constant_rank_c,
        profile.constant_rank_r.label(),
        elliptic_c,
        elliptic_r.label(),
        cancelling
    );
    Outcome {
        document: report("analyze", config, json!({ "op": loaded.reference() }), "OK", results, &notes),
        summary,
        exit_code: exit::OK,
        out,
    }
}

fn load_pair(pair: &PairArgs) -> Result<(LoadedOp, LoadedOp), InputError> {
    let cal_a = load_op(&pair.cal_a)?;
    let a = load_op(&pair.a)?;
    if cal_a.op.n() != a.op.n() || cal_a.op.d() != a.op.d() {
        return Err(InputError(format!(
            "operators act on different fields: (N, d) = ({}, {}) vs ({}, {})",
            cal_a.op.n(),
            cal_a.op.d(),
            a.op.n(),
            a.op.d()
        )));
    }
    Ok((cal_a, a))
}

fn pair_refs(cal_a: &LoadedOp, a: &LoadedOp) -> Value {
    json!({ "cal_a": cal_a.reference(), "a": a.reference() })
}

fn pair_config(pair: &PairArgs) -> Value {
    json!({ "cal_a": pair.cal_a.display().to_string(), "a": pair.a.display().to_string() })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

const HYPOTHESES_NOTE: &str = "𝒜 lacks the complex constant rank property; kernel inclusion is not decided and no inequality is claimed (Δ² against D²∘Δ is the standard counterexample)";

fn hypotheses_results(err: &AnalysisError) -> Value {
    match err {
        AnalysisError::HypothesesNotMet {
            profile,
            stacked_minors_vanish,
        } => json!({
            "generic_rank": profile.generic_rank,
            "r": profile.kernel_dim,
            "constant_rank_C": profile.constant_rank_c,
            "constant_rank_R": real_verdict(&profile.constant_rank_r),
            "stacked_minors_vanish": stacked_minors_vanish,
        }),
        other => json!({ "error": other.to_string() }),
    }
}

pub fn cmd_compare(args: &CompareArgs) -> Outcome {
    let config = merge(
        pair_config(&args.pair),
        json!({ "mode": args.mode, "s_max": args.s_max, "seed": args.common.seed }),
    );
    let out = args.common.out.clone();
    let (cal_a, a) = match load_pair(&args.pair) {
        Ok(p) => p,
        Err(e) => return input_error("compare", config, e, out),
    };
    if let Err(e) = OperatorPair::new(cal_a.op.clone(), a.op.clone(), args.mode) {
        return input_error("compare", config, InputError(e.to_string()), out);
    }
    let refs = pair_refs(&cal_a, &a);
    let seed = args.common.seed;
    let verdict = match kernel_inclusion(&cal_a.op, &a.op, seed) {
        Ok(v) => v,
        Err(e @ AnalysisError::HypothesesNotMet { .. }) => {
            return Outcome {
                document: report("compare", config, refs, "HYPOTHESES_NOT_MET", hypotheses_results(&e), &[HYPOTHESES_NOTE]),
                summary: format!("HYPOTHESES_NOT_MET: {e}"),
                exit_code: exit::HYPOTHESIS,
                out,
            }
        }
        Err(e) => return input_error("compare", config, InputError(e.to_string()), out),
    };
    match verdict.certificate {
        InclusionCertificate::MinorsVanish { checked } => {
            let cert = match search_factorization(&cal_a.op, &a.op, args.s_max) {
                Ok(Some(c)) => c,
                Ok(None) => {
                    let results = json!({
                        "inclusion": { "holds": true, "rank": verdict.rank, "minors_checked": checked },
                        "s_max": args.s_max,
                    });
                    return Outcome {
                        document: report("compare", config, refs, "S_MAX_EXCEEDED", results, &["kernel inclusion holds, so a factorization exists with larger s; raise --s-max"]),
                        summary: format!("inclusion holds but no factorization with s <= {}", args.s_max),
                        exit_code: exit::BUDGET,
                        out,
                    };
                }
                Err(e) => return input_error("compare", config, InputError(e.to_string()), out),
            };
            let q = quotient_spec(cal_a.op.n(), cal_a.op.d(), cal_a.op.k(), cert.s);
            let mut results = json!({
                "inclusion": { "holds": true, "rank": verdict.rank, "minors_checked": checked },
                "factorization": {
                    "s": cert.s,
                    "verified": cert.verified,
                    "L": op_json(&cert.factor),
                },
                "quotient": { "degree_bound": q.degree_bound, "dimension": q.dimension() },
            });
            if args.mode == PairMode::Sobolev {
                let w = compute_w(&cal_a.op, seed);
                let check = verify_factor_on_w(&cert.factor, cert.s, &w.basis);
                results["factor_on_W"] = json!({
                    "W_dim": w.basis.len(),
                    "identically_zero": check.identically_zero,
                    "precondition_s_ge_1": check.precondition_met,
                });
            }
            let status = if cert.verified { "OK" } else { "INTERNAL_ERROR" };
            Outcome {
                document: report("compare", config, refs, status, results, &[]),
                summary: format!(
                    "kernel inclusion holds; D^{}∘A = L∘𝒜 with L of order {} (verified: {}); quotient degree bound {}",
                    cert.s,
                    cert.factor.k(),
                    cert.verified,
                    q.degree_bound
                ),
                exit_code: if cert.verified { exit::OK } else { exit::HYPOTHESIS },
                out,
            }
        }
        InclusionCertificate::NonzeroMinor { rows, cols, minor } => {
            let inclusion = json!({
                "holds": false,
                "rank": verdict.rank,
                "nonzero_minor": { "rows": rows, "cols": cols, "value": poly(&minor) },
            });
            match find_witness(&cal_a.op, &a.op, &minor, seed) {
                Ok(w) => {
                    let results = json!({
                        "inclusion": inclusion,
                        "witness": witness_json(&w),
                        "counterexample": {
                            "command": "experiment blowup",
                            "modes": [1, 2, 4, 8],
                            "grid": 256,
                            "domain": if w.is_real() { "torus" } else { "cube" },
                        },
                    });
                    Outcome {
                        document: report("compare", config, refs, "OK", results, &[]),
                        summary: format!("kernel inclusion fails; witness {w}"),
                        exit_code: exit::OK,
                        out,
                    }
                }
                Err(e) => Outcome {
                    document: report("compare", config, refs, "SAMPLE_BUDGET_EXCEEDED", json!({ "inclusion": inclusion, "error": e.to_string() }), &[]),
                    summary: e.to_string(),
                    exit_code: exit::BUDGET,
                    out,
                },
            }
        }
    }
}

fn status_name(s: ExperimentStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn status_exit(s: ExperimentStatus) -> i32 {
    match s {
        ExperimentStatus::Ok | ExperimentStatus::Bounded | ExperimentStatus::InfiniteRatio => exit::OK,
        ExperimentStatus::Unstable | ExperimentStatus::UnboundedSuspected => exit::HYPOTHESIS,
    }
}

fn numerics_failure(command: &str, config: Value, refs: Value, err: NumericsError, out: Option<PathBuf>) -> Outcome {
    let (status, code) = match &err {
        NumericsError::NyquistViolation { .. } => ("NYQUIST_VIOLATION", exit::INPUT),
        NumericsError::ComplexModeCap { .. } | NumericsError::InvalidParameter(_) | NumericsError::InvalidWitness => ("INPUT_ERROR", exit::INPUT),
        NumericsError::IllConditionedQuotient { .. } => ("ILL_CONDITIONED_QUOTIENT", exit::BUDGET),
        NumericsError::Analysis(AnalysisError::HypothesesNotMet { .. }) => ("HYPOTHESES_NOT_MET", exit::HYPOTHESIS),
        NumericsError::Analysis(AnalysisError::InclusionFails) => ("INCLUSION_FAILS", exit::HYPOTHESIS),
        NumericsError::Analysis(AnalysisError::SMaxExceeded { .. }) => ("S_MAX_EXCEEDED", exit::BUDGET),
        NumericsError::Analysis(_) => ("INPUT_ERROR", exit::INPUT),
    };
    Outcome {
        document: report(command, config, refs, status, json!({ "error": err.to_string() }), &[]),
        summary: format!("{status}: {err}"),
        exit_code: code,
        out,
    }
}

pub fn cmd_experiment(kind: &ExperimentKind) -> Outcome {
    match kind {
        ExperimentKind::Korn2 { pair, samples, refine, common } => {
            let config = merge(
                pair_config(pair),
                json!({ "kind": "korn2", "samples": samples, "refine": refine, "seed": common.seed }),
            );
            let (cal_a, a) = match load_pair(pair) {
                Ok(p) => p,
                Err(e) => return input_error("experiment", config, e, common.out.clone()),
            };
            let refs = pair_refs(&cal_a, &a);
            match korn_constant_p2(&cal_a.op, &a.op, *samples, *refine, common.seed) {
                Ok(k) => Outcome {
                    document: report("experiment", config, refs, &status_name(k.status), serde_json::to_value(&k).expect("json"), &[]),
                    summary: match k.estimate {
                        Some(c) => format!("p = 2 torus constant ≈ {c:.6} ({} evaluations)", k.evaluations),
                        None => "UNBOUNDED_SUSPECTED: A does not vanish on ker 𝒜 at some real frequency".into(),
                    },
                    exit_code: status_exit(k.status),
                    out: common.out.clone(),
                },
                Err(e) => numerics_failure("experiment", config, refs, e, common.out.clone()),
            }
        }
        ExperimentKind::Blowup { pair, modes, grid, common } => {
            let config = merge(
                pair_config(pair),
                json!({ "kind": "blowup", "modes": modes, "grid": grid, "seed": common.seed }),
            );
            let out = common.out.clone();
            let (cal_a, a) = match load_pair(pair) {
                Ok(p) => p,
                Err(e) => return input_error("experiment", config, e, out),
            };
            let refs = pair_refs(&cal_a, &a);
            let verdict = match kernel_inclusion(&cal_a.op, &a.op, common.seed) {
                Ok(v) => v,
                Err(e) => return numerics_failure("experiment", config, refs, e.into(), out),
            };
            let InclusionCertificate::NonzeroMinor { minor, .. } = verdict.certificate else {
                return Outcome {
                    document: report("experiment", config, refs, "INCLUSION_HOLDS", json!({ "inclusion": { "holds": true } }), &["no witness exists, so there is no counterexample family"]),
                    summary: "kernel inclusion holds; nothing to blow up".into(),
                    exit_code: exit::HYPOTHESIS,
                    out,
                };
            };
            let w = match find_witness(&cal_a.op, &a.op, &minor, common.seed) {
                Ok(w) => w,
                Err(e) => {
                    return Outcome {
                        document: report("experiment", config, refs, "SAMPLE_BUDGET_EXCEEDED", json!({ "error": e.to_string() }), &[]),
                        summary: e.to_string(),
                        exit_code: exit::BUDGET,
                        out,
                    }
                }
            };
            match counterexample_blowup(&cal_a.op, &a.op, &w, modes, *grid) {
                Ok(r) => {
                    let results = json!({ "witness": witness_json(&w), "blowup": r });
                    let slope = r.slope.map_or("n/a".to_string(), |s| format!("{s:.4}"));
                    Outcome {
                        document: report("experiment", config, refs, &status_name(r.status), results, &[]),
                        summary: format!(
                            "𝒜u_n ≡ 0 symbolically: {}; log-log slope of ‖Au_n‖: {slope} (order {}); Gram rank {}/{}",
                            r.denominator_symbolic_zero,
                            r.expected_slope,
                            r.gram_rank,
                            r.modes.len()
                        ),
                        exit_code: status_exit(r.status),
                        out,
                    }
                }
                Err(e) => numerics_failure("experiment", config, refs, e, out),
            }
        }
        ExperimentKind::Bb { n, k, trials, grid, modes_per_trial, common } => {
            let cfg = BbConfig {
                k: *k,
                dim: *n,
                trials: *trials,
                n_grid: *grid,
                seed: common.seed,
                modes_per_trial: *modes_per_trial,
            };
            let config = json!({ "kind": "bb", "config": cfg });
            match bb_ratio_experiment(&cfg) {
                Ok(r) => Outcome {
                    summary: format!(
                        "max ratio {:.6}, median {:.6}, all finite: {}, max constraint residual {:.2e}",
                        r.max_ratio, r.median_ratio, r.all_finite, r.max_constraint_residual
                    ),
                    document: report("experiment", config, json!({}), &status_name(r.status), serde_json::to_value(&r).expect("json"), &[NO_REFERENCE_CONSTANT]),
                    exit_code: status_exit(r.status),
                    out: common.out.clone(),
                },
                Err(e) => numerics_failure("experiment", config, json!({}), e, common.out.clone()),
            }
        }
        ExperimentKind::Sobolev { pair, p, trials, grid, modes_per_trial, common } => {
            let cfg = SobolevConfig {
                p: *p,
                trials: *trials,
                grid: *grid,
                seed: common.seed,
                modes_per_trial: *modes_per_trial,
            };
            let config = merge(pair_config(pair), json!({ "kind": "sobolev", "config": cfg }));
            let out = common.out.clone();
            let (cal_a, a) = match load_pair(pair) {
                Ok(p) => p,
                Err(e) => return input_error("experiment", config, e, out),
            };
            let refs = pair_refs(&cal_a, &a);
            match sobolev_ratio_experiment(&cal_a.op, &a.op, &cfg, common.seed) {
                Ok(r) => Outcome {
                    summary: format!(
                        "max ratio {:.6} (grid {}), {:.6} (grid {}): {}",
                        r.max_ratio,
                        grid,
                        r.max_ratio_refined,
                        2 * grid,
                        status_name(r.status)
                    ),
                    document: report("experiment", config, refs, &status_name(r.status), serde_json::to_value(&r).expect("json"), &[NO_REFERENCE_CONSTANT]),
                    exit_code: status_exit(r.status),
                    out,
                },
                Err(e) => numerics_failure("experiment", config, refs, e, out),
            }
        }
    }
}

pub fn cmd_catalog(args: &CatalogArgs) -> Outcome {
    let params = CatalogParams {
        components: args.components,
        order: args.order,
    };
    match catalog_with(&args.name, args.n, params) {
        Ok(op) => Outcome {
            summary: format!("{} (N={}, d={}, l={}, k={})", op.name(), op.n(), op.d(), op.l(), op.k()),
            document: serialize_op(&op),
            exit_code: exit::OK,
            out: args.out.clone(),
        },
        Err(e) => Outcome {
            summary: format!("input error: {e}"),
            document: String::new(),
            exit_code: exit::INPUT,
            out: None,
        },
    }
}
