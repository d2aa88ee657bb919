//! `orlicz`: command-line front end for orlicz-core.
//!
//! Every subcommand prints one JSON document `{"v":1,"value":...}` (plus
//! command-specific fields) to stdout or `--out`. Exit codes: 0 success,
//! 1 verification failure, 2 unparsable input, 3 domain error.

mod input;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use orlicz_core::interp::{self, CalderonInstance, Method};
use orlicz_core::verify::{self, RunOptions};
use orlicz_core::{MeasureSpec, OrliczSpace, SpaceSpec, VectorMeasure, YoungFunction, YoungSpec};
use serde_json::{json, Value};

use input::{atom_set, function, json_arg, resolve_carrier, FnInput};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(orlicz_core::Error),
    VerifyFailed(Value),
}

impl From<orlicz_core::Error> for CliError {
    fn from(e: orlicz_core::Error) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Parser)]
#[command(name = "orlicz", version, about = "Orlicz spaces over quasi-Banach function spaces on atomic measure spaces")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-norm of a function in a space given by a space spec.
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long = "fn")]
        f: String,
        #[arg(long)]
        carrier: Option<String>,
    },
    /// Semivariation of a vector measure on a set of atoms (default: all).
    Semivar {
        #[arg(long)]
        measure: String,
        /// JSON list of atom labels.
        #[arg(long)]
        set: Option<String>,
    },
    /// Distribution function t ↦ ‖m‖([|f| > t]) and the Choquet norm.
    Distfn {
        #[arg(long)]
        measure: String,
        #[arg(long = "fn")]
        f: String,
        /// CSV output with columns t,value.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// SVG staircase plot.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Luxemburg quasi-norm of f in X^Φ.
    Luxemburg {
        #[arg(long)]
        base: String,
        #[arg(long)]
        phi: String,
        #[arg(long = "fn")]
        f: String,
        #[arg(long)]
        carrier: Option<String>,
        /// Bisection bracket width, relative.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Upper bound on the Calderón product quasi-norm with its factorization.
    Calderon {
        #[arg(long)]
        x0: String,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        theta: f64,
        #[arg(long = "fn")]
        f: String,
        /// orlicz-constructive, alternating or grid-oracle.
        #[arg(long, default_value = "alternating")]
        method: String,
        #[arg(long)]
        carrier: Option<String>,
    },
    /// Interpolated Orlicz space between X^Φ₀ and X^Φ₁, after certifying
    /// L-convexity of X.
    Interpolate {
        #[arg(long)]
        base: String,
        #[arg(long)]
        phi0: String,
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        theta: f64,
        /// Optional function whose norm in the interpolated space is reported.
        #[arg(long = "fn")]
        f: Option<String>,
        #[arg(long)]
        carrier: Option<String>,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs the randomized check registry, or replays one instance.
    Verify {
        /// Check group (young, qbfs, semivar, orlicz, vector, interp);
        /// same as --group.
        #[arg(conflicts_with = "group")]
        target: Option<String>,
        /// Glob over check ids, e.g. "lem-*".
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per check; defaults to each check's own budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Replay a single check id at --index instead of running the suite.
        #[arg(long, requires = "index")]
        replay: Option<String>,
        #[arg(long)]
        index: Option<u64>,
        /// List the registered checks and exit.
        #[arg(long)]
        list: bool,
    },
}

fn young(what: &str, arg: &str) -> Result<YoungFunction, CliError> {
    let spec: YoungSpec = json_arg(what, arg)?;
    Ok(YoungFunction::from_spec(&spec)?)
}

fn run(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Norm { space, f, carrier } => {
            let spec: SpaceSpec = json_arg("--space", &space)?;
            let f: FnInput = json_arg("--fn", &f)?;
            let carrier = resolve_carrier(carrier.as_deref(), Some(&f), &[spec.implied_carrier()])?;
            let x = spec.build(&carrier)?;
            let value = x.qnorm(&function(&carrier, &f)?)?;
            Ok(json!({"v": 1, "value": value, "space": x.name()}))
        }
        Command::Semivar { measure, set } => {
            let spec: MeasureSpec = json_arg("--measure", &measure)?;
            let m = VectorMeasure::from_spec(&spec, None)?;
            let a = atom_set(m.space(), set.as_deref())?;
            Ok(json!({"v": 1, "value": m.semivariation(&a)?, "set": a.ids(m.space())}))
        }
        Command::Distfn { measure, f, csv, svg } => {
            let spec: MeasureSpec = json_arg("--measure", &measure)?;
            let f: FnInput = json_arg("--fn", &f)?;
            let carrier = resolve_carrier(None, Some(&f), &[Some(&spec)])?;
            let m = VectorMeasure::from_spec(&spec, Some(carrier.clone()))?;
            let step = m.distribution_function(&function(&carrier, &f)?)?;
            if let Some(path) = csv {
                write_file(&path, &plot::csv(&step))?;
            }
            if let Some(path) = svg {
                write_file(&path, &plot::svg(&step))?;
            }
            Ok(json!({
                "v": 1,
                "value": step.integral(),
                "breakpoints": step.breakpoints(),
                "values": step.values(),
            }))
        }
        Command::Luxemburg { base, phi, f, carrier, tol } => {
            let spec: SpaceSpec = json_arg("--base", &base)?;
            let phi = young("--phi", &phi)?;
            let f: FnInput = json_arg("--fn", &f)?;
            let carrier = resolve_carrier(carrier.as_deref(), Some(&f), &[spec.implied_carrier()])?;
            let mut os = OrliczSpace::new(spec.build(&carrier)?, phi);
            if let Some(t) = tol {
                os = os.with_tol(t)?;
            }
            let f = function(&carrier, &f)?;
            Ok(json!({"v": 1, "value": os.luxemburg(&f)?, "modular": finite_or_null(os.modular(&f))}))
        }
        Command::Calderon { x0, x1, theta, f, method, carrier } => {
            let s0: SpaceSpec = json_arg("--x0", &x0)?;
            let s1: SpaceSpec = json_arg("--x1", &x1)?;
            let method: Method = method.parse().map_err(|e: orlicz_core::Error| CliError::Parse(e.to_string()))?;
            let f: FnInput = json_arg("--fn", &f)?;
            let carrier = resolve_carrier(
                carrier.as_deref(),
                Some(&f),
                &[s0.implied_carrier(), s1.implied_carrier()],
            )?;
            let inst = CalderonInstance::new(s0.build(&carrier)?, s1.build(&carrier)?, theta)?;
            let f = function(&carrier, &f)?;
            let (lambda, fact) = interp::calderon_norm_upper(&inst, &f, method)?;
            let check = fact.check(&inst, &f)?;
            Ok(json!({
                "v": 1,
                "value": lambda,
                "method": method,
                "f0": fact.f0.values(),
                "f1": fact.f1.values(),
                "check": check,
            }))
        }
        Command::Interpolate { base, phi0, phi1, theta, f, carrier, eps, trials, n_max, seed } => {
            let spec: SpaceSpec = json_arg("--base", &base)?;
            let phi0 = young("--phi0", &phi0)?;
            let phi1 = young("--phi1", &phi1)?;
            let f: Option<FnInput> = f.map(|a| json_arg("--fn", &a)).transpose()?;
            let carrier = resolve_carrier(carrier.as_deref(), f.as_ref(), &[spec.implied_carrier()])?;
            let x = spec.build(&carrier)?;
            let cert = interp::l_convexity_search(&x, eps, trials, n_max, seed)?;
            let space = interp::complex_interpolation(&x, &phi0, &phi1, theta, &cert)?;
            let value = match &f {
                Some(f) => Some(space.luxemburg(&function(&carrier, f)?)?),
                None => None,
            };
            Ok(json!({
                "v": 1,
                "value": value,
                "phi": space.phi().spec(),
                "power_exponent": space.phi().power_exponent(),
                "certificate": cert,
            }))
        }
        Command::Verify { target, filter, group, suite, seed, budget, replay, index, list } => {
            let group = group.or(target);
            if list {
                let checks: Vec<Value> = verify::registry()
                    .iter()
                    .map(|c| {
                        json!({
                            "id": c.id, "group": c.group, "suite": c.suite,
                            "statement": c.statement, "tolerance": c.tolerance,
                            "default_budget": c.default_budget,
                        })
                    })
                    .collect();
                return Ok(json!({"v": 1, "value": checks}));
            }
            if let Some(id) = replay {
                let rec = verify::replay(&id, seed, index.expect("clap enforces --index"))?;
                let doc = json!({"v": 1, "value": rec});
                return if rec.pass { Ok(doc) } else { Err(CliError::VerifyFailed(doc)) };
            }
            let report = verify::run_suite(&RunOptions { filter, group, suite, seed, budget })?;
            let pass = report.pass;
            let doc = json!({"v": 1, "value": report});
            if pass {
                Ok(doc)
            } else {
                Err(CliError::VerifyFailed(doc))
            }
        }
    }
}

fn finite_or_null(r: orlicz_core::Result<f64>) -> Value {
    match r {
        Ok(v) if v.is_finite() => json!(v),
        _ => Value::Null,
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Parse(format!("cannot write `{}`: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, doc: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string(doc).expect("serializable document") + "\n";
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ORLICZ_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Parse(format!("ORLICZ_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Parse(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli.command));
    let outcome = match result {
        Ok(doc) => emit(cli.out.as_ref(), &doc).map(|()| ExitCode::SUCCESS),
        Err(CliError::VerifyFailed(doc)) => emit(cli.out.as_ref(), &doc).map(|()| ExitCode::from(1)),
        Err(e) => Err(e),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::VerifyFailed(_)) => unreachable!("handled above"),
    }
}
