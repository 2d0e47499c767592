//! Command-line surface. The binary is a one-liner over [`run_cli`]; keeping
//! the dispatch here makes the exit-code contract unit-testable.
//!
//! Exit codes: 0 success / positive answer, 1 definite negative answer,
//! 2 input or precondition error, 3 internal invariant violation.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::hf::{parse_hf, HfSet};
use crate::names::PName;
use crate::order::Quasiorder;
use crate::sigma::{
    check_generic_generated, classify_by_bound, lambda_star, Caps, SigmaError,
    SigmaInstance, StepVariant, Supercondition,
};
use crate::spec_file::{parse_spec, ForcingSpec};
use crate::verify::verify_instance;

pub const SCHEMA_VERSION: u32 = 1;

const EXIT_OK: i32 = 0;
const EXIT_NEGATIVE: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(name = "forcelab", version, about = "Forcing over finite quasi-orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Successor-step requirement reading.
    #[arg(long, global = true, value_enum, default_value_t = StepArg::Separated)]
    step: StepArg,

    /// Emit a JSON report instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Dump every iteration level.
    #[arg(long, global = true)]
    trace: bool,

    /// Attach the brute-force cross-check to the answer.
    #[arg(long, global = true)]
    oracle: bool,

    /// Cap on the number of conditions.
    #[arg(long, global = true, value_name = "N")]
    max_poset: Option<usize>,

    /// Cap on the number of potential elements of the name.
    #[arg(long, global = true, value_name = "N")]
    max_pe: Option<usize>,

    /// Cap on the number of elements of X.
    #[arg(long, global = true, value_name = "N")]
    max_x: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StepArg {
    Separated,
    Coupled,
}

impl From<StepArg> for StepVariant {
    fn from(v: StepArg) -> StepVariant {
        match v {
            StepArg::Separated => StepVariant::Separated,
            StepArg::Coupled => StepVariant::Coupled,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    /// Spec file describing the forcing notion and its names.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,

    /// Name id within the spec; defaults to `t`, else the last definition.
    #[arg(long, value_name = "ID")]
    name: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether X is the value of the name under some generic filter.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Candidate transitive set, in braces notation.
        #[arg(long, value_name = "SET")]
        x: String,
    },
    /// List every generic filter and the value it gives the name.
    Generics {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Classify all transitive sets within bounds, using the uniform bound.
    Survey {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 3)]
        max_rank: u32,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
    /// Compute the uniform stabilization bound of the name.
    LambdaStar {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Construct a generic filter witnessing X = t[G], with the fusion steps.
    BuildGeneric {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_name = "SET")]
        x: String,
        /// Start from a fixpoint member at this condition (default: least).
        #[arg(long, value_name = "ID")]
        start_cond: Option<String>,
    },
    /// Check whether every generic inside the fixpoint's condition
    /// projection interprets the name as X.
    Probe {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_name = "SET")]
        x: String,
    },
    /// Run the full per-instance check battery.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 3)]
        max_rank: u32,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
}

pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version requests are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return code;
        }
    };
    let caps = build_caps(&cli);
    let variant: StepVariant = cli.step.into();
    match dispatch(&cli, variant, caps) {
        Ok(code) => code,
        Err(CliError { code, msg }) => {
            if cli.json {
                println!(
                    "{}",
                    json!({ "schema_version": SCHEMA_VERSION, "error": msg, "exit_code": code })
                );
            } else {
                eprintln!("error: {msg}");
            }
            code
        }
    }
}

struct CliError {
    code: i32,
    msg: String,
}

fn input_err(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, msg: msg.into() }
}

impl From<SigmaError> for CliError {
    fn from(e: SigmaError) -> CliError {
        let code = match e {
            SigmaError::FixpointViolation(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        CliError { code, msg: e.to_string() }
    }
}

fn build_caps(cli: &Cli) -> Caps {
    let mut caps = Caps::default();
    let defaults = Caps::default();
    if let Some(n) = cli.max_poset {
        if n > defaults.max_conditions {
            eprintln!(
                "warning: --max-poset {n} exceeds the default {}; \
                 the supercondition space grows steeply",
                defaults.max_conditions
            );
        }
        caps.max_conditions = n;
    }
    if let Some(n) = cli.max_pe {
        if n > defaults.max_potential_elements {
            eprintln!(
                "warning: --max-pe {n} exceeds the default {}; \
                 the supercondition space grows steeply",
                defaults.max_potential_elements
            );
        }
        caps.max_potential_elements = n;
    }
    if let Some(n) = cli.max_x {
        if n > defaults.max_x_elements {
            eprintln!(
                "warning: --max-x {n} exceeds the default {}; \
                 the supercondition space grows steeply",
                defaults.max_x_elements
            );
        }
        caps.max_x_elements = n;
    }
    caps
}

fn load_instance(args: &InstanceArgs) -> Result<(ForcingSpec, String, PName), CliError> {
    let path = args
        .spec
        .as_ref()
        .ok_or_else(|| input_err("--spec <FILE> is required"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    let spec = parse_spec(&text).map_err(|e| input_err(e.to_string()))?;
    let (id, t) = match &args.name {
        Some(id) => {
            let t = spec
                .name(id)
                .ok_or_else(|| input_err(format!("no name `{id}` in the spec")))?;
            (id.clone(), t.clone())
        }
        None => {
            let (id, t) = spec
                .default_name()
                .ok_or_else(|| input_err("the spec defines no names"))?;
            (id.to_string(), t.clone())
        }
    };
    Ok((spec, id, t))
}

fn parse_x(text: &str) -> Result<HfSet, CliError> {
    let x = parse_hf(text).map_err(|e| input_err(format!("bad set literal: {e}")))?;
    if !x.is_transitive() {
        return Err(input_err("X is not transitive"));
    }
    Ok(x)
}

fn name_label(spec: &ForcingSpec) -> impl Fn(&PName) -> String + '_ {
    |n: &PName| {
        spec.id_of_name(n)
            .map(str::to_string)
            .unwrap_or_else(|| format!("<name/{} entries>", n.entries().len()))
    }
}

fn sc_json(sc: &Supercondition, order: &Quasiorder, spec: &ForcingSpec) -> serde_json::Value {
    let label = name_label(spec);
    json!({
        "cond": order.id(sc.cond),
        "assign": sc.assign.iter()
            .map(|(n, v)| (label(n), json!(v.to_string())))
            .collect::<serde_json::Map<String, serde_json::Value>>(),
    })
}

fn level_json(
    level: &BTreeSet<Supercondition>,
    order: &Quasiorder,
    spec: &ForcingSpec,
) -> serde_json::Value {
    json!(level.iter().map(|sc| sc_json(sc, order, spec)).collect::<Vec<_>>())
}

fn dispatch(cli: &Cli, variant: StepVariant, caps: Caps) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { instance, x } => {
            // X is validated before the spec so a malformed candidate is
            // reported even without one.
            let x = parse_x(x)?;
            let (spec, name_id, t) = load_instance(instance)?;
            let inst = SigmaInstance::new(&spec.poset, &t, &x, caps)?;
            let trace = inst.sigma_fixpoint(variant);
            let verdict =
                check_generic_generated(&spec.poset, &t, &x, variant, cli.oracle, caps)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "check",
                        "name": name_id,
                        "x": x.to_string(),
                        "step": variant.to_string(),
                        "generic_generated": verdict.generic_generated,
                        "lambda": verdict.lambda,
                        "witness": verdict.witness.as_ref()
                            .map(|sc| sc_json(sc, &spec.poset, &spec)),
                        "oracle_agreement": verdict.oracle_agreement,
                        "trace": cli.trace.then(|| {
                            trace.levels.iter()
                                .map(|l| level_json(l, &spec.poset, &spec))
                                .collect::<Vec<_>>()
                        }),
                    })
                );
            } else {
                if verdict.generic_generated {
                    println!("GENERIC-GENERATED, lambda={}", verdict.lambda);
                    if let Some(w) = &verdict.witness {
                        println!("witness: {}", w.render(&spec.poset, name_label(&spec)));
                    }
                } else {
                    println!("NOT generic-generated, lambda={}", verdict.lambda);
                }
                if let Some(agree) = verdict.oracle_agreement {
                    println!("oracle agrees: {agree}");
                }
                if cli.trace {
                    print_trace(&trace.levels, &spec);
                }
            }
            Ok(if verdict.generic_generated { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Generics { instance } => {
            let (spec, name_id, t) = load_instance(instance)?;
            let filters = spec.poset.generic_filters();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "generics",
                        "name": name_id,
                        "count": filters.len(),
                        "generics": filters.iter().map(|g| json!({
                            "filter": g.indices().iter()
                                .map(|&p| spec.poset.id(p)).collect::<Vec<_>>(),
                            "value": t.interpret(g).to_string(),
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("{} generic filter(s)", filters.len());
                for g in &filters {
                    println!("  {}  ->  {}", g.render(&spec.poset), t.interpret(g));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Survey { instance, max_rank, max_size } => {
            let (spec, name_id, t) = load_instance(instance)?;
            let table =
                classify_by_bound(&spec.poset, &t, *max_rank, *max_size, variant, caps)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "survey",
                        "name": name_id,
                        "step": variant.to_string(),
                        "lambda_star": table.lambda_star,
                        "rows": table.rows.iter().map(|r| json!({
                            "x": r.x.to_string(),
                            "generic_generated": r.generic_generated,
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("lambda* = {}", table.lambda_star);
                for row in &table.rows {
                    let tag = if row.generic_generated {
                        "GENERIC-GENERATED"
                    } else {
                        "not generated"
                    };
                    println!("  {}  {}", row.x, tag);
                }
            }
            Ok(EXIT_OK)
        }
        Command::LambdaStar { instance } => {
            let (spec, name_id, t) = load_instance(instance)?;
            let bound = lambda_star(&spec.poset, &t, variant, caps)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "lambda-star",
                        "name": name_id,
                        "step": variant.to_string(),
                        "lambda_star": bound,
                    })
                );
            } else {
                println!("lambda* = {bound}");
            }
            Ok(EXIT_OK)
        }
        Command::BuildGeneric { instance, x, start_cond } => {
            let x = parse_x(x)?;
            let (spec, name_id, t) = load_instance(instance)?;
            let inst = SigmaInstance::new(&spec.poset, &t, &x, caps)?;
            let trace = inst.sigma_fixpoint(variant);
            let start_filter: Option<usize> = match start_cond {
                Some(id) => Some(spec.poset.index_of(id).ok_or_else(|| {
                    input_err(format!("unknown condition id `{id}`"))
                })?),
                None => None,
            };
            let start = trace
                .fixpoint
                .iter()
                .find(|sc| start_filter.is_none_or(|p| sc.cond == p));
            let Some(start) = start else {
                if cli.json {
                    println!(
                        "{}",
                        json!({
                            "schema_version": SCHEMA_VERSION,
                            "command": "build-generic",
                            "name": name_id,
                            "x": x.to_string(),
                            "step": variant.to_string(),
                            "generic_generated": false,
                        })
                    );
                } else {
                    println!("NOT generic-generated: no usable fixpoint member");
                }
                return Ok(EXIT_NEGATIVE);
            };
            let build = inst.build_generic(start, variant)?;
            let label = name_label(&spec);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "build-generic",
                        "name": name_id,
                        "x": x.to_string(),
                        "step": variant.to_string(),
                        "generic_generated": true,
                        "start": sc_json(start, &spec.poset, &spec),
                        "filter": build.filter.indices().iter()
                            .map(|&p| spec.poset.id(p)).collect::<Vec<_>>(),
                        "assignment": build.assignment.iter()
                            .map(|(n, v)| (label(n), json!(v.to_string())))
                            .collect::<serde_json::Map<String, serde_json::Value>>(),
                        "steps": build.steps.iter().map(|s| json!({
                            "requirement": s.requirement,
                            "chosen": sc_json(&s.chosen, &spec.poset, &spec),
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("start: {}", start.render(&spec.poset, name_label(&spec)));
                for step in &build.steps {
                    println!(
                        "  {}\n    -> {}",
                        step.requirement,
                        step.chosen.render(&spec.poset, name_label(&spec))
                    );
                }
                println!("generic filter: {}", build.filter.render(&spec.poset));
                println!("t[G] = {x}");
            }
            Ok(EXIT_OK)
        }
        Command::Probe { instance, x } => {
            let x = parse_x(x)?;
            let (spec, name_id, t) = load_instance(instance)?;
            let inst = SigmaInstance::new(&spec.poset, &t, &x, caps)?;
            let report = inst.probe_open_question(variant)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "probe",
                        "name": name_id,
                        "x": x.to_string(),
                        "step": variant.to_string(),
                        "entries": report.entries.iter().map(|e| json!({
                            "filter": e.filter.indices().iter()
                                .map(|&p| spec.poset.id(p)).collect::<Vec<_>>(),
                            "value": e.interpretation.to_string(),
                            "matches": e.matches,
                        })).collect::<Vec<_>>(),
                        "counterexample": report.counterexample
                            .map(|g| g.indices().iter()
                                .map(|&p| spec.poset.id(p).to_string())
                                .collect::<Vec<_>>()),
                    })
                );
            } else {
                for e in &report.entries {
                    println!(
                        "  {}  ->  {}  {}",
                        e.filter.render(&spec.poset),
                        e.interpretation,
                        if e.matches { "ok" } else { "MISMATCH" }
                    );
                }
                match report.counterexample {
                    Some(g) => println!("counterexample: {}", g.render(&spec.poset)),
                    None => println!("all generics inside the projection match"),
                }
            }
            Ok(if report.counterexample.is_none() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Verify { instance, max_rank, max_size } => {
            let (spec, name_id, t) = load_instance(instance)?;
            let report =
                verify_instance(&spec.poset, &t, variant, *max_rank, *max_size, caps)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "verify",
                        "name": name_id,
                        "step": variant.to_string(),
                        "all_passed": report.all_passed(),
                        "checks": report.checks.iter().map(|c| json!({
                            "name": c.name,
                            "passed": c.passed,
                            "detail": c.detail,
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                for c in &report.checks {
                    println!(
                        "{} {} — {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    );
                }
            }
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn print_trace(levels: &[BTreeSet<Supercondition>], spec: &ForcingSpec) {
    for (gamma, level) in levels.iter().enumerate() {
        println!("Sigma_{gamma} ({} member(s)):", level.len());
        for sc in level {
            println!("  {}", sc.render(&spec.poset, name_label(spec)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_error_is_exit_2() {
        assert_eq!(run_cli(["forcelab", "frobnicate"]), EXIT_INPUT);
        assert_eq!(run_cli(["forcelab"]), EXIT_INPUT);
    }

    #[test]
    fn help_is_exit_0() {
        assert_eq!(run_cli(["forcelab", "--help"]), EXIT_OK);
    }

    #[test]
    fn nontransitive_x_without_spec() {
        assert_eq!(run_cli(["forcelab", "check", "--x", "{{{}}}"]), EXIT_INPUT);
    }

    #[test]
    fn missing_spec_file() {
        assert_eq!(
            run_cli(["forcelab", "check", "--spec", "/no/such/file", "--x", "{}"]),
            EXIT_INPUT
        );
    }
}
