//! The subcommands. Each returns the process exit code.

use std::fs;
use std::path::Path;

use schemex_core::graph::{distance_data, is_distance_regular, spectral_excess_report};
use schemex_core::{
    build_scheme_with, detect_with, generate, DetectConfig, DetectError, FamilySpec, GraphError, Validation, Verdict,
};

use crate::formats::{parse_edges, parse_scheme, write_scheme};
use crate::report;

pub const OK: u8 = 0;
pub const PARSE: u8 = 1;
pub const INVALID: u8 = 2;
pub const NO: u8 = 3;
pub const PRECONDITION: u8 = 4;
pub const INTERNAL: u8 = 5;

fn read(path: &Path) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        PARSE
    })
}

fn write(path: &Path, text: &str) -> Result<(), u8> {
    fs::write(path, text).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        PARSE
    })
}

fn load_scheme(path: &Path, validation: Validation) -> Result<schemex_core::AssociationScheme, u8> {
    let rm = parse_scheme(&read(path)?).map_err(|e| {
        eprintln!("parse error: {}: {e}", path.display());
        PARSE
    })?;
    build_scheme_with(rm, validation).map_err(|e| {
        let debug = format!("{e:?}");
        let kind = debug.split([' ', '{', '(']).next().unwrap_or_default();
        println!("INVALID {kind}: {e}");
        INVALID
    })
}

pub fn validate(path: &Path, fast: bool) -> u8 {
    let validation = if fast { Validation::Fast } else { Validation::Full };
    match load_scheme(path, validation) {
        Ok(s) => {
            println!("VALID n={} d={}", s.n(), s.d());
            OK
        }
        Err(code) => code,
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn detect(path: &Path, json: Option<&Path>, tol: f64) -> u8 {
    let s = match load_scheme(path, Validation::Full) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let cfg = DetectConfig { route_tol: tol, krein_tol: tol, ..DetectConfig::default() };
    let report = match detect_with::<f64>(&s, &cfg) {
        Ok(r) => r,
        Err(e @ DetectError::RouteDisagreement(_)) => {
            eprintln!("error: {e}");
            return INTERNAL;
        }
        Err(e) => {
            eprintln!("error: analysis failed: {e}");
            return INTERNAL;
        }
    };
    for r in report.routes() {
        let mut line = format!("{:<12} {}", r.route.to_string(), r.verdict);
        if let Some(o) = &r.ordering {
            line += &format!(" ordering={}", join(o));
        }
        if let Some(l) = r.l {
            line += &format!(" l={l} residual={:.3e}", r.max_residual);
        }
        if let Some(w) = &r.witness {
            line += &format!(" ({w})");
        }
        println!("{line}");
    }
    let outcome = report.outcome();
    let mut summary = format!("consensus={outcome}");
    if let Some(o) = report.ordering() {
        summary += &format!(" ordering={}", join(o));
    }
    if let Some(l) = report.l() {
        summary += &format!(" l={l}");
    }
    println!("{summary}");
    if let Some(out) = json {
        if let Err(code) = write(out, &report::render(&report::detection(&report, tol))) {
            return code;
        }
    }
    match outcome {
        Verdict::Yes => OK,
        Verdict::No => NO,
        Verdict::PreconditionFailed => PRECONDITION,
    }
}

fn parse_family(family: &str, params: &[String]) -> Result<FamilySpec, String> {
    let nums: Vec<usize> = params
        .iter()
        .map(|p| p.parse().map_err(|_| format!("not a non-negative integer: {p:?}")))
        .collect::<Result<_, _>>()?;
    let arity = |k: usize| -> Result<(), String> {
        if nums.len() == k {
            Ok(())
        } else {
            Err(format!("{family} takes {k} parameter(s), got {}", nums.len()))
        }
    };
    Ok(match family {
        "hamming" => {
            arity(2)?;
            FamilySpec::Hamming { n: nums[0], q: nums[1] }
        }
        "johnson" => {
            arity(2)?;
            FamilySpec::Johnson { v: nums[0], k: nums[1] }
        }
        "cycle" => {
            arity(1)?;
            FamilySpec::Cycle { n: nums[0] }
        }
        "complete" => {
            arity(1)?;
            FamilySpec::Complete { n: nums[0] }
        }
        "disjoint_cliques" => {
            arity(2)?;
            FamilySpec::DisjointCliques { cliques: nums[0], size: nums[1] }
        }
        "cyclotomic13" => {
            arity(0)?;
            FamilySpec::Cyclotomic13
        }
        "petersen" => {
            arity(0)?;
            FamilySpec::Petersen
        }
        "hypercube_reordered" => FamilySpec::HypercubeReordered { perm: nums },
        other => return Err(format!("unknown family {other:?}")),
    })
}

pub fn gen(family: &str, params: &[String], out: Option<&Path>) -> u8 {
    let scheme = parse_family(family, params).and_then(|spec| generate(&spec).map_err(|e| e.to_string()));
    let s = match scheme {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return PARSE;
        }
    };
    let text = write_scheme(&s);
    match out {
        Some(path) => match write(path, &text) {
            Ok(()) => OK,
            Err(code) => code,
        },
        None => {
            print!("{text}");
            OK
        }
    }
}

fn summarize_excess(excess: &[usize]) -> String {
    let min = excess.iter().min().copied().unwrap_or(0);
    let max = excess.iter().max().copied().unwrap_or(0);
    if min == max {
        format!("{min}")
    } else {
        format!("{min}..{max}")
    }
}

pub fn graph(path: &Path, json: Option<&Path>) -> u8 {
    let g = match read(path).and_then(|t| {
        parse_edges(&t).map_err(|e| {
            eprintln!("parse error: {}: {e}", path.display());
            PARSE
        })
    }) {
        Ok(g) => g,
        Err(code) => return code,
    };
    println!("n={} m={}", g.n(), g.edges().len());
    let r = match spectral_excess_report(&g) {
        Ok(r) => r,
        Err(e @ (GraphError::NotRegular { .. } | GraphError::Disconnected { .. })) => {
            if let Ok(dd) = distance_data(&g) {
                println!("diameter={} excess={}", dd.diameter, summarize_excess(&dd.excess));
            }
            if let Ok(drg) = is_distance_regular(&g) {
                println!("drg={drg}");
            }
            eprintln!("error: {e}");
            return PRECONDITION;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return INTERNAL;
        }
    };
    let spectrum: Vec<String> = r
        .spectrum
        .theta()
        .iter()
        .zip(r.spectrum.multiplicities())
        .map(|(t, m)| format!("{t:.6}^{m}"))
        .collect();
    println!("spectrum: {}", spectrum.join(" "));
    println!("diameter={} d={}", r.diameter, r.d);
    println!("excess={} p_d(theta0)={:.6}", summarize_excess(&r.excess), r.pd_at_theta0);
    println!("excess mean={:.6} harmonic_mean={:.6}", r.arithmetic_mean, r.harmonic_mean);
    match &r.obstruction {
        Some(why) => println!("drg=false ({why})"),
        None => println!("drg=true"),
    }
    if let Some(out) = json {
        if let Err(code) = write(out, &report::render(&report::graph(g.n(), &r))) {
            return code;
        }
    }
    if r.distance_regular {
        OK
    } else {
        NO
    }
}
