use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use k3pic::indexcheck::{verify_certificate, Certificate};
use k3pic::pipeline::{parse_mode, parse_rat, RunConfig, Stage};
use k3pic::stages::{run, run_stage, Context};
use k3pic::Error;

#[derive(Parser)]
#[command(name = "k3pic", version, about = "Picard lattice of the double sextic w^2 = x^6 + y^6 + z^6 + t x^2 y^2 z^2")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Rational parameter of the fiber, e.g. 7 or -3/2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    t0: Option<String>,
    /// Characteristic of the finite field.
    #[arg(short = 'p', global = true)]
    p: Option<u64>,
    /// Extension degree of the finite field.
    #[arg(short = 'm', global = true)]
    m: Option<u32>,
    /// Directory for cached intersection numbers.
    #[arg(long, global = true, env = "K3PIC_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Recheck random intersection numbers at this prime.
    #[arg(long, global = true)]
    second_prime: Option<u64>,
    /// Subgroups swept by the cohomology stage: normal or all.
    #[arg(long, global = true)]
    subgroup_mode: Option<String>,
    /// Comma-separated stages for `run`.
    #[arg(long, global = true)]
    stages: Option<String>,
    /// Configuration file of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// The five base divisors.
    Catalog,
    /// The orbit of the base divisors under H.
    Orbit,
    /// Intersection matrix of the orbit and the Gram matrix of the lattice.
    Gram,
    /// Rank, signature, determinant and discriminant group.
    Lattice,
    /// Comparison with U + E8(-1) + A5(-1) + A2(-1) + A2(-4).
    Nikulin,
    /// Proof that the lattice is saturated, as a certificate.
    IndexCheck,
    /// Structure of the Galois group and of H.
    Galois,
    /// Cohomology of the Galois module.
    Cohomology,
    /// Singularities of the fiber over t0.
    Fibers,
    /// Tritangent lines of the branch sextic over t0.
    Tritangent,
    /// Identities relating the surface to an elliptic curve.
    Inose,
    /// Every requested stage and a summary.
    Run,
    /// Rechecks a certificate using integer arithmetic only.
    VerifyCert { path: PathBuf },
}

fn config(o: &Opts) -> Result<RunConfig, Error> {
    let mut c = match &o.config {
        Some(p) => RunConfig::from_kv(&fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    if let Some(t) = &o.t0 {
        c.t0 = parse_rat(t)?;
    }
    if let Some(p) = o.p {
        c.p = p;
    }
    if let Some(m) = o.m {
        c.m = m;
    }
    if o.cache_dir.is_some() {
        c.cache_dir = o.cache_dir.clone();
    }
    if o.second_prime.is_some() {
        c.second_prime = o.second_prime;
    }
    if let Some(s) = &o.subgroup_mode {
        c.subgroup_mode = parse_mode(s)?;
    }
    if let Some(s) = &o.stages {
        c.stages = s.split(',').map(|x| Stage::parse(x.trim())).collect::<Result<_, _>>()?;
    }
    Ok(c)
}

fn emit(v: &Value, out: Option<&Path>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// A certificate, either bare or inside a report.
fn find_certificate(v: &Value) -> Option<Certificate> {
    if let Ok(c) = serde_json::from_value::<Certificate>(v.clone()) {
        return Some(c);
    }
    match v {
        Value::Object(m) => m.values().find_map(find_certificate),
        Value::Array(a) => a.iter().find_map(find_certificate),
        _ => None,
    }
}

fn stage_of(v: &Verb) -> Option<Stage> {
    Some(match v {
        Verb::Catalog => Stage::Catalog,
        Verb::Orbit => Stage::Orbit,
        Verb::Gram => Stage::Gram,
        Verb::Lattice => Stage::Lattice,
        Verb::Nikulin => Stage::Nikulin,
        Verb::IndexCheck => Stage::Index,
        Verb::Galois => Stage::Galois,
        Verb::Cohomology => Stage::Cohomology,
        Verb::Fibers => Stage::Fibers,
        Verb::Tritangent => Stage::Tritangent,
        Verb::Inose => Stage::Inose,
        Verb::Run | Verb::VerifyCert { .. } => return None,
    })
}

fn execute(cli: &Cli) -> Result<bool, Error> {
    let out = cli.opts.json_out.as_deref();
    if let Verb::VerifyCert { path } = &cli.verb {
        let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        let cert = find_certificate(&v).ok_or_else(|| Error::Config(format!("no certificate in {}", path.display())))?;
        let res = verify_certificate(&cert);
        let report = serde_json::json!({"path": path, "accepted": res.is_ok(), "error": res.as_ref().err().map(|e| e.to_string())});
        emit(&report, out)?;
        return Ok(res.is_ok());
    }
    let cfg = config(&cli.opts)?;
    if let Some(stage) = stage_of(&cli.verb) {
        let mut ctx = Context::new(cfg.clone())?;
        let r = run_stage(&mut ctx, stage)?;
        let v = serde_json::json!({"tool_version": env!("CARGO_PKG_VERSION"), "config": cfg, "report": r});
        emit(&v, out)?;
        return Ok(r.pass);
    }
    let report = run(cfg)?;
    emit(&serde_json::to_value(&report)?, out)?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
