//! Command-line front end: verification suites, hypersurface evaluation
//! and sampling, point solving, representation checking, and lift
//! enumeration, with JSON on stdout.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 usage or IO error.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use whitehead_sl3::constants::DEFAULT_SEED;
use whitehead_sl3::hypersurface::{
    f_eval, sample, FreeVar, TraceCoords, TraceCoordsWire,
};
use whitehead_sl3::reconstruct::{enumerate_lifts, is_irreducible, pipeline_from_a, solve_point, SolveOpts};
use whitehead_sl3::verify::run_all;
use whitehead_sl3::wire::{mat_from_wire, LiftSetWire, MatWire, SolveReportWire, SCHEMA};
use whitehead_sl3::{coords_of, check_relation, Error, Exec, Mat3, SeedStream};

mod complexarg;
use complexarg::parse_complex;

#[derive(Parser)]
#[command(name = "whitehead-sl3", version, about = "Hypersurface identities and representation solving for a symmetric SL(3,C) trace variety")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Root seed for all randomness in the subcommand
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Samples per batch suite
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Solver convergence tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Solver restarts
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    /// Solver iterations per restart
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    max_iter: u64,
    /// Machine output only; suppress the stderr summary
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CoordInput {
    /// JSON file with the coordinate object, or "-" for stdin
    #[arg(long)]
    input: Option<String>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    t: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    tbar: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    sbar: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    r: Option<Complex64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every identity suite and the exact certificates
    Verify {
        #[command(flatten)]
        common: Common,
        /// Force single-threaded execution
        #[arg(long)]
        serial: bool,
    },
    /// Evaluate the defining polynomial at one coordinate point
    Eval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coords: CoordInput,
    },
    /// Solve the hypersurface cubic in one free coordinate
    Sample {
        #[command(flatten)]
        common: Common,
        /// Fixed coordinates, e.g. "t=1,tbar=1,sbar=0,r=0"
        #[arg(long)]
        fix: String,
        /// The free coordinate: s or sbar
        #[arg(long)]
        free: String,
    },
    /// Recover a representation over one coordinate point
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coords: CoordInput,
    },
    /// Re-verify a solve output: relation, irreducibility, coordinates
    Check {
        #[command(flatten)]
        common: Common,
        /// JSON file with a solve report or a {"y":..,"z":..} pair, "-" for stdin
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Enumerate the six lifts over a solved point
    Lift {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coords: CoordInput,
    },
}

enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Json(_) | Error::Invalid(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Math(other),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::DetGuard { .. } => "det_guard",
        Error::NotSkew { .. } => "not_skew",
        Error::DegeneratePencil { .. } => "degenerate_pencil",
        Error::NoKernel { .. } => "no_kernel",
        Error::NonOrdinaryCommutator => "non_ordinary_commutator",
        Error::SingularY { .. } => "singular_y",
        Error::Reducible => "reducible",
        Error::CoordinateCollision { .. } => "coordinate_collision",
        Error::Convergence { .. } => "convergence",
        Error::RelationResidual { .. } => "relation_residual",
        Error::Invalid(_) => "invalid",
        Error::Json(_) => "json",
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }
}

fn coords_from_input(ci: &CoordInput) -> Result<TraceCoords, Failure> {
    if let Some(path) = &ci.input {
        let text = read_input(path)?;
        let wire: TraceCoordsWire = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("coordinate JSON: {e}")))?;
        return Ok(TraceCoords::from(&wire));
    }
    let need = |v: Option<Complex64>, name: &str| {
        v.ok_or_else(|| Failure::Usage(format!("missing --{name} (or use --input)")))
    };
    Ok(TraceCoords::new(
        need(ci.t, "t")?,
        need(ci.tbar, "tbar")?,
        need(ci.s, "s")?,
        need(ci.sbar, "sbar")?,
        need(ci.r, "r")?,
    ))
}

fn solve_opts(common: &Common) -> SolveOpts {
    SolveOpts {
        restarts: common.restarts as usize,
        max_iter: common.max_iter as usize,
        tol: common.tol,
    }
}

fn emit(value: &serde_json::Value) {
    println!("{value}");
}

fn cmd_verify(common: &Common, serial: bool) -> Result<i32, Failure> {
    let exec = if serial { Exec::Serial } else { Exec::default() };
    let reports = run_all(common.seed, common.samples as usize, exec);
    let passed = reports.iter().all(|r| r.passed);
    if !common.json {
        for r in &reports {
            eprintln!(
                "{:6} {:32} samples={:<6} failures={:<4} max_err={:.3e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite,
                r.samples,
                r.failures,
                r.max_residual
            );
        }
    }
    emit(&json!({
        "schema": SCHEMA,
        "seed": common.seed,
        "samples": common.samples,
        "suites": reports,
        "passed": passed,
    }));
    Ok(if passed { 0 } else { 1 })
}

fn cmd_eval(common: &Common, ci: &CoordInput) -> Result<i32, Failure> {
    let coords = coords_from_input(ci)?;
    let f = f_eval(&coords);
    if !common.json {
        eprintln!("F = {f}");
    }
    emit(&json!({
        "schema": SCHEMA,
        "coords": TraceCoordsWire::from(&coords),
        "F": [f.re, f.im],
        "on_hypersurface": coords.on_hypersurface(1e-10),
    }));
    Ok(0)
}

fn cmd_sample(common: &Common, fix: &str, free: &str) -> Result<i32, Failure> {
    let free = match free {
        "s" => FreeVar::S,
        "sbar" => FreeVar::Sbar,
        other => return Err(Failure::Usage(format!("--free must be s or sbar, got {other}"))),
    };
    let mut template = TraceCoords::all(0.0);
    for part in fix.split(',').filter(|p| !p.trim().is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--fix entry {part:?} is not name=value")))?;
        let value = parse_complex(value.trim()).map_err(Failure::Usage)?;
        match name.trim() {
            "t" => template.t = value,
            "tbar" => template.tbar = value,
            "s" => template.s = value,
            "sbar" => template.sbar = value,
            "r" => template.r = value,
            other => return Err(Failure::Usage(format!("unknown coordinate {other:?}"))),
        }
    }
    let points = sample(&template, free);
    if !common.json {
        for p in &points {
            eprintln!("root residual {:.3e}", p.residual);
        }
    }
    let wires: Vec<TraceCoordsWire> = points
        .iter()
        .map(|p| {
            let mut w = TraceCoordsWire::from(&p.coords);
            w.residual = Some(p.residual);
            w
        })
        .collect();
    emit(&json!({
        "schema": SCHEMA,
        "free": match free { FreeVar::S => "s", FreeVar::Sbar => "sbar" },
        "points": wires,
    }));
    Ok(0)
}

fn math_failure(common: &Common, e: &Error) -> i32 {
    if !common.json {
        eprintln!("error: {e}");
    }
    emit(&json!({
        "schema": SCHEMA,
        "error": { "kind": error_kind(e), "message": e.to_string() },
    }));
    1
}

fn cmd_solve(common: &Common, ci: &CoordInput) -> Result<i32, Failure> {
    let coords = coords_from_input(ci)?;
    let mut stream = SeedStream::new(common.seed);
    match solve_point(&coords, &mut stream, &solve_opts(common)) {
        Ok(report) => {
            if !common.json {
                eprintln!(
                    "solved in {} restarts; relation residual {:.3e}",
                    report.restarts_used, report.representation.relation_residual
                );
            }
            emit(&serde_json::to_value(SolveReportWire::from(&report)).expect("serializable"));
            Ok(0)
        }
        Err(e) => Ok(math_failure(common, &e)),
    }
}

fn cmd_check(common: &Common, input: &str) -> Result<i32, Failure> {
    let text = read_input(input)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("check input: {e}")))?;
    // Accept either a full solve report or a bare {"y":..,"z":..} pair.
    let pair = if value.get("representation").is_some() {
        value.get("representation").cloned()
    } else {
        Some(value.clone())
    };
    let pair = pair.ok_or_else(|| Failure::Usage("no matrices in input".into()))?;
    let get_mat = |key: &str| -> Result<Mat3, Failure> {
        let raw = pair
            .get(key)
            .ok_or_else(|| Failure::Usage(format!("missing {key:?} matrix")))?;
        let wire: MatWire = serde_json::from_value(raw.clone())
            .map_err(|e| Failure::Usage(format!("{key}: {e}")))?;
        Ok(mat_from_wire(&wire))
    };
    let y = get_mat("y")?;
    let z = get_mat("z")?;
    match check_pair(&y, &z, common.tol) {
        Ok(out) => {
            let passed = out["passed"].as_bool().unwrap_or(false);
            if !common.json {
                eprintln!("check {}", if passed { "passed" } else { "failed" });
            }
            emit(&out);
            Ok(if passed { 0 } else { 1 })
        }
        Err(e) => Ok(math_failure(common, &e)),
    }
}

fn check_pair(y: &Mat3, z: &Mat3, tol: f64) -> Result<serde_json::Value, Error> {
    let relation_residual = check_relation(y, z)?;
    let irreducible = is_irreducible(y, z, 1e-8);
    // a = y^-1 z recovers the underlying coordinate point.
    let a = y.adjugate() * *z;
    let coords = coords_of(&a, &a.transpose())?;
    let passed = relation_residual <= tol.max(1e-6) && irreducible;
    Ok(json!({
        "schema": SCHEMA,
        "relation_residual": relation_residual,
        "irreducible": irreducible,
        "coords": TraceCoordsWire::from(&coords),
        "on_hypersurface": coords.on_hypersurface(1e-6),
        "passed": passed,
    }))
}

fn cmd_lift(common: &Common, ci: &CoordInput) -> Result<i32, Failure> {
    // Accept either coordinates (solve first) or a prior solve report.
    let report = if let Some(path) = &ci.input {
        let text = read_input(path)?;
        if let Ok(wire) = serde_json::from_str::<SolveReportWire>(&text) {
            match pipeline_from_a(&mat_from_wire(&wire.a)) {
                Ok(r) => r,
                Err(e) => return Ok(math_failure(common, &e)),
            }
        } else {
            let coords = coords_from_input(ci)?;
            let mut stream = SeedStream::new(common.seed);
            match solve_point(&coords, &mut stream, &solve_opts(common)) {
                Ok(r) => r,
                Err(e) => return Ok(math_failure(common, &e)),
            }
        }
    } else {
        let coords = coords_from_input(ci)?;
        let mut stream = SeedStream::new(common.seed);
        match solve_point(&coords, &mut stream, &solve_opts(common)) {
            Ok(r) => r,
            Err(e) => return Ok(math_failure(common, &e)),
        }
    };
    match enumerate_lifts(&report) {
        Ok(lifts) => {
            if !common.json {
                eprintln!("6 lifts over the point");
            }
            let mut value =
                serde_json::to_value(LiftSetWire::from(&lifts)).expect("serializable");
            value["target"] =
                serde_json::to_value(TraceCoordsWire::from(&report.target)).expect("serializable");
            emit(&value);
            Ok(0)
        }
        Err(e) => Ok(math_failure(common, &e)),
    }
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    match &cli.cmd {
        Cmd::Verify { common, serial } => cmd_verify(common, *serial),
        Cmd::Eval { common, coords } => cmd_eval(common, coords),
        Cmd::Sample { common, fix, free } => cmd_sample(common, fix, free),
        Cmd::Solve { common, coords } => cmd_solve(common, coords),
        Cmd::Check { common, input } => cmd_check(common, input),
        Cmd::Lift { common, coords } => cmd_lift(common, coords),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            emit(&json!({
                "schema": SCHEMA,
                "error": { "kind": error_kind(&e), "message": e.to_string() },
            }));
            1
        }
    };
    std::process::exit(code);
}
