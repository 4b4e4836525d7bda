mod args;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use args::{Cli, Command, FamilyArg, Format, Grid, NormArg, ParamArgs, ProblemArgs};
use output::{cell, json, opt_cell, opt_plain, plain};
use wright_radii::normalized::{g_coefficient, h_coefficient};
use wright_radii::verify::{CrossOracleSummary, LemmaSummary};
use wright_radii::{
    check_radius, cross_oracle_suite, lemma_inequality_suite, locate_zeros, solve_radius, Error, Family,
    Normalization, RadiusProblem, RadiusResult, VerificationReport, WrightParams, ZeroTable,
};

const EXIT_FAILED: u8 = 1;
const EXIT_ZERO_SEARCH: u8 = 2;
const EXIT_INVALID_PROBLEM: u8 = 3;
const EXIT_BRACKET: u8 = 4;
const EXIT_USAGE: u8 = 64;

pub const CSV_HEADER: [&str; 12] = [
    "mu", "a", "nu", "b", "family", "norm", "beta", "gamma", "alpha", "radius", "residual", "verified",
];

/// Failure of a command, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ZeroSearchFailure { .. } => EXIT_ZERO_SEARCH,
            Error::InvalidProblem(_) => EXIT_INVALID_PROBLEM,
            Error::BracketFailure { .. } => EXIT_BRACKET,
            Error::InvalidParams(_) => EXIT_USAGE,
            _ => EXIT_FAILED,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Zeros(a) => cmd_zeros(a),
        Command::Radius(a) => cmd_radius(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Table(a) => cmd_table(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn params(p: &ParamArgs) -> Result<WrightParams, Failure> {
    WrightParams::new(p.mu, p.a, p.nu, p.b).map_err(|e| Failure::usage(e.to_string()))
}

fn norm(n: NormArg) -> Normalization {
    match n {
        NormArg::F => Normalization::F,
        NormArg::G => Normalization::G,
        NormArg::H => Normalization::H,
    }
}

/// Zeros for `p`, from the cache file when it holds at least `count` zeros
/// of the same parameters at the same or finer tolerance.
fn zero_table(p: &WrightParams, count: usize, refine_tol: f64, cache: Option<&Path>) -> Result<ZeroTable, Failure> {
    if let Some(path) = cache {
        if path.exists() {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read zero cache {}: {e}", path.display())))?;
            let table: ZeroTable = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("invalid zero cache {}: {e}", path.display())))?;
            if table.params() == p && table.len() >= count && table.refine_tol() <= refine_tol {
                return Ok(table.truncated(count)?);
            }
        }
    }
    let table = locate_zeros(p, count, refine_tol)?;
    if let Some(path) = cache {
        let text = serde_json::to_string_pretty(&table).expect("zero table serializes");
        fs::write(path, text + "\n")
            .map_err(|e| Failure::usage(format!("cannot write zero cache {}: {e}", path.display())))?;
    }
    Ok(table)
}

fn cmd_zeros(a: args::ZerosArgs) -> CmdResult {
    let p = params(&a.params)?;
    let count = a.count as usize;
    let t = zero_table(&p, count, a.common.refine_tol, a.common.zero_cache.as_deref())?;
    let mut out = io::stdout().lock();
    match a.common.format {
        Format::Json => writeln!(out, "{}", json(&t)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "psi", "psi_deriv"]).and_then(|_| {
                for n in 0..count {
                    w.write_record([(n + 1).to_string(), cell(t.psi()[n]), cell(t.psi_deriv()[n])])?;
                }
                w.flush().map_err(csv::Error::from)
            })
            .map_err(io::Error::other)
        }
        Format::Plain => (|| {
            writeln!(out, "{:>4}  {:>18}  {:>18}", "n", "psi", "psi_deriv")?;
            for n in 0..count {
                writeln!(out, "{:>4}  {:>18}  {:>18}", n + 1, plain(t.psi()[n]), plain(t.psi_deriv()[n]))?;
            }
            Ok(())
        })(),
    }
    .map_err(|e| Failure::usage(format!("write failed: {e}")))?;
    Ok(0)
}

fn family(kind: FamilyArg, beta: Option<f64>, gamma: Option<f64>, alpha: Option<f64>) -> Result<Family, Failure> {
    let need = |x: Option<f64>, name: &str| x.ok_or_else(|| Failure::usage(format!("--{name} is required for this family")));
    let fam = match kind {
        FamilyArg::Star => Family::StarPhi { beta: need(beta, "beta")? },
        FamilyArg::Convex => Family::ConvexPhi { beta: need(beta, "beta")? },
        FamilyArg::ExpStar => Family::ExpStar,
        FamilyArg::ExpConvex => Family::ExpConvex,
        FamilyArg::Spiral => Family::Spiral {
            gamma: need(gamma, "gamma")?,
            alpha: alpha.unwrap_or(0.0),
        },
    };
    match fam {
        Family::StarPhi { beta } | Family::ConvexPhi { beta } if !(beta > 0.0 && beta <= 1.0) => {
            Err(Failure::usage(format!("beta must lie in (0, 1], got {beta}")))
        }
        Family::Spiral { gamma, alpha } if !(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2).contains(&gamma) || !(0.0..1.0).contains(&alpha) => {
            Err(Failure::usage(format!(
                "spiral needs gamma in (-pi/2, pi/2) and alpha in [0, 1), got gamma = {gamma}, alpha = {alpha}"
            )))
        }
        _ => Ok(fam),
    }
}

#[derive(Serialize)]
struct RadiusOutput {
    problem: RadiusProblem,
    result: RadiusResult,
    /// The family's own equation has the same root within 10·tol.
    literal_agrees: bool,
    verification: Option<VerificationReport>,
}

fn solve_one(prob: &RadiusProblem, t: &ZeroTable, pa: &ProblemArgs, verify: bool) -> Result<RadiusOutput, Error> {
    let result = solve_radius(prob, t, pa.tol)?;
    let verification = if verify {
        Some(check_radius(prob, &result, t, pa.samples as usize, pa.eps)?)
    } else {
        None
    };
    Ok(RadiusOutput {
        problem: *prob,
        literal_agrees: (result.literal_radius - result.radius).abs() <= 10.0 * pa.tol,
        result,
        verification,
    })
}

fn cmd_radius(a: args::RadiusArgs) -> CmdResult {
    let p = params(&a.params)?;
    let fam = family(a.problem.family, a.beta, a.gamma, a.alpha)?;
    let prob = RadiusProblem::new(fam, norm(a.problem.norm), p)?;
    let t = zero_table(&p, a.problem.zero_count as usize, a.common.refine_tol, a.common.zero_cache.as_deref())?;
    let out = solve_one(&prob, &t, &a.problem, a.verify)?;
    let passed = out.verification.as_ref().is_none_or(|v| v.passed());

    let mut w = io::stdout().lock();
    let r = &out.result;
    match a.common.format {
        Format::Json => writeln!(w, "{}", json(&out)),
        Format::Csv => {
            let row = csv_row(&prob, Some(r), out.verification.as_ref().map(|v| v.passed()));
            let mut cw = csv::Writer::from_writer(w);
            cw.write_record(CSV_HEADER)
                .and_then(|_| cw.write_record(&row))
                .and_then(|_| cw.flush().map_err(csv::Error::from))
                .map_err(io::Error::other)
        }
        Format::Plain => (|| {
            writeln!(w, "family          {}", fam.name())?;
            writeln!(w, "norm            {}", prob.norm())?;
            writeln!(w, "beta            {}", plain(prob.beta()))?;
            writeln!(w, "radius          {}", plain(r.radius))?;
            writeln!(w, "bracket         [{}, {}]", plain(r.bracket.0), plain(r.bracket.1))?;
            writeln!(w, "residual        {:.3e}", r.residual)?;
            writeln!(w, "iterations      {}", r.iterations)?;
            writeln!(w, "interval_bound  {}", plain(r.interval_bound))?;
            writeln!(w, "literal_radius  {}", plain(r.literal_radius))?;
            if !out.literal_agrees {
                writeln!(w, "note            literal equation root differs from the radius")?;
            }
            if let Some(s) = r.statement_radius {
                writeln!(w, "statement_root  {}", plain(s))?;
            }
            if let Some(v) = &out.verification {
                writeln!(w, "inner_ok        {}", v.inner_margin_ok)?;
                writeln!(w, "outer_violated  {}", v.outer_violation_found)?;
                writeln!(w, "sharpness       {:.3e}", v.sharpness_residual)?;
                writeln!(w, "min_margin      {:.3e}", v.min_functional_inner)?;
                for n in &v.notes {
                    writeln!(w, "note            {n}")?;
                }
                writeln!(w, "verified        {}", v.passed())?;
            }
            Ok(())
        })(),
    }
    .map_err(|e| Failure::usage(format!("write failed: {e}")))?;
    if r.statement_radius.is_some_and(|s| (s - r.radius).abs() > 10.0 * a.problem.tol) {
        eprintln!(
            "note: the root of r f''(r) + beta ab f'(r) = 0 is {}, not the radius {}",
            plain(r.statement_radius.unwrap_or(f64::NAN)),
            plain(r.radius)
        );
    }
    Ok(if passed { 0 } else { EXIT_FAILED })
}

fn csv_row(prob: &RadiusProblem, r: Option<&RadiusResult>, verified: Option<bool>) -> Vec<String> {
    let p = prob.params();
    let fam = prob.family();
    let (_, gamma, alpha) = fam.inputs();
    vec![
        cell(p.mu()),
        cell(p.a()),
        cell(p.nu()),
        cell(p.b()),
        fam.name().to_string(),
        prob.norm().to_string(),
        cell(prob.beta()),
        opt_cell(gamma),
        opt_cell(alpha),
        opt_cell(r.map(|r| r.radius)),
        opt_cell(r.map(|r| r.residual)),
        verified.map(|v| v.to_string()).unwrap_or_default(),
    ]
}

fn thread_count() -> Result<Option<usize>, Failure> {
    match std::env::var("WRIGHT_RADII_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::usage(format!("WRIGHT_RADII_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

#[derive(Serialize)]
struct SweepRow {
    mu: f64,
    a: f64,
    nu: f64,
    b: f64,
    family: &'static str,
    norm: String,
    beta: f64,
    gamma: Option<f64>,
    alpha: Option<f64>,
    radius: Option<f64>,
    residual: Option<f64>,
    verified: bool,
    error: Option<String>,
}

fn cmd_sweep(a: args::SweepArgs) -> CmdResult {
    let grid = |g: &Option<Grid>| g.as_ref().map(|g| g.0.clone());
    let fam_values: Vec<(Option<f64>, Option<f64>, Option<f64>)> = match a.problem.family {
        FamilyArg::Star | FamilyArg::Convex => {
            let betas = grid(&a.beta).ok_or_else(|| Failure::usage("--beta is required for this family"))?;
            betas.into_iter().map(|b| (Some(b), None, None)).collect()
        }
        FamilyArg::ExpStar | FamilyArg::ExpConvex => vec![(None, None, None)],
        FamilyArg::Spiral => {
            let gammas = grid(&a.gamma).ok_or_else(|| Failure::usage("--gamma is required for spiral"))?;
            let alphas = grid(&a.alpha).unwrap_or_else(|| vec![0.0]);
            gammas
                .iter()
                .flat_map(|&g| alphas.iter().map(move |&al| (None, Some(g), Some(al))))
                .collect()
        }
    };
    let mut param_sets = Vec::new();
    for &mu in &a.mu.0 {
        for &pa in &a.a.0 {
            for &nu in &a.nu.0 {
                for &pb in &a.b.0 {
                    param_sets.push((mu, pa, nu, pb));
                }
            }
        }
    }
    if param_sets.is_empty() || fam_values.is_empty() {
        return Err(Failure::usage("the sweep grid is empty"));
    }
    let mut params_list = Vec::with_capacity(param_sets.len());
    for &(mu, pa, nu, pb) in &param_sets {
        params_list.push(WrightParams::new(mu, pa, nu, pb).map_err(|e| Failure::usage(e.to_string()))?);
    }
    let mut families = Vec::with_capacity(fam_values.len());
    for &(beta, gamma, alpha) in &fam_values {
        families.push(family(a.problem.family, beta, gamma, alpha)?);
    }
    let nm = norm(a.problem.norm);
    let count = a.problem.zero_count as usize;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::usage(format!("cannot start worker threads: {e}")))?;

    let rows: Vec<(SweepRow, Option<Failure>)> = pool.install(|| {
        let tables: Vec<Result<ZeroTable, Error>> = params_list
            .par_iter()
            .map(|p| locate_zeros(p, count, a.refine_tol))
            .collect();
        let points: Vec<(usize, Family)> = (0..params_list.len())
            .flat_map(|i| families.iter().map(move |f| (i, *f)))
            .collect();
        points
            .par_iter()
            .map(|&(i, fam)| {
                let p = params_list[i];
                let (_, gamma, alpha) = fam.inputs();
                let outcome = tables[i].clone().and_then(|t| {
                    let prob = RadiusProblem::new(fam, nm, p)?;
                    solve_one(&prob, &t, &a.problem, true)
                });
                let (radius, residual, verified, err) = match outcome {
                    Ok(o) => (
                        Some(o.result.radius),
                        Some(o.result.residual),
                        o.verification.as_ref().is_some_and(|v| v.passed()),
                        None,
                    ),
                    Err(e) => (None, None, false, Some(Failure::from(e))),
                };
                let row = SweepRow {
                    mu: p.mu(),
                    a: p.a(),
                    nu: p.nu(),
                    b: p.b(),
                    family: fam.name(),
                    norm: nm.to_string(),
                    beta: fam.canonical_beta(),
                    gamma,
                    alpha,
                    radius,
                    residual,
                    verified,
                    error: err.as_ref().map(|f| f.message.clone()),
                };
                (row, err)
            })
            .collect()
    });

    for (i, (_, err)) in rows.iter().enumerate() {
        if let Some(f) = err {
            eprintln!("row {}: {}", i + 1, f.message);
        }
    }
    let mut w = io::stdout().lock();
    match a.format {
        Format::Json => {
            let plain_rows: Vec<&SweepRow> = rows.iter().map(|(r, _)| r).collect();
            writeln!(w, "{}", json(&plain_rows))
        }
        Format::Csv | Format::Plain => {
            let mut cw = csv::Writer::from_writer(w);
            let mut res = cw.write_record(CSV_HEADER);
            for (r, _) in &rows {
                if res.is_err() {
                    break;
                }
                res = cw.write_record([
                    cell(r.mu),
                    cell(r.a),
                    cell(r.nu),
                    cell(r.b),
                    r.family.to_string(),
                    r.norm.clone(),
                    cell(r.beta),
                    opt_cell(r.gamma),
                    opt_cell(r.alpha),
                    opt_cell(r.radius),
                    opt_cell(r.residual),
                    r.verified.to_string(),
                ]);
            }
            res.and_then(|_| cw.flush().map_err(csv::Error::from)).map_err(io::Error::other)
        }
    }
    .map_err(|e| Failure::usage(format!("write failed: {e}")))?;

    match rows.into_iter().map(|(_, e)| e).collect::<Option<Vec<Failure>>>() {
        Some(mut all_failed) if !all_failed.is_empty() => Ok(all_failed.swap_remove(0).code),
        _ => Ok(0),
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    seed: u64,
    lemmas: LemmaSummary,
    cross_oracle: CrossOracleSummary,
    passed: bool,
}

/// Largest accepted disagreement between the zero-sum and series paths.
const CROSS_TOL: f64 = 1e-9;

fn cmd_verify(a: args::VerifyArgs) -> CmdResult {
    let p = params(&a.params)?;
    let t = zero_table(&p, a.zero_count as usize, a.common.refine_tol, a.common.zero_cache.as_deref())?;
    let lemmas = lemma_inequality_suite(a.seed, a.trials as usize);
    let cross = cross_oracle_suite(&t, a.seed, a.points as usize)?;
    let passed = lemmas.violations() == 0 && cross.worst() <= CROSS_TOL && cross.product_monotone;
    let out = VerifyOutput {
        seed: a.seed,
        lemmas,
        cross_oracle: cross,
        passed,
    };
    let mut w = io::stdout().lock();
    match a.common.format {
        Format::Json => writeln!(w, "{}", json(&out)),
        Format::Csv => (|| {
            writeln!(w, "check,trials,violations,worst")?;
            let l = &out.lemmas;
            for (name, c) in [
                ("two_pole", l.two_pole),
                ("product", l.product),
                ("mobius", l.mobius),
                ("mobius_pair", l.mobius_pair),
            ] {
                writeln!(w, "{name},{},{},{}", c.trials, c.violations, cell(c.worst_excess))?;
            }
            let c = &out.cross_oracle;
            for (name, v) in [("star_f", c.star[0]), ("star_g", c.star[1]), ("star_h", c.star[2]), ("convex_f", c.convex_f)] {
                writeln!(w, "{name},{},{},{}", c.samples, u8::from(v > CROSS_TOL), cell(v))?;
            }
            Ok(())
        })(),
        Format::Plain => (|| {
            let l = &out.lemmas;
            for (name, c) in [
                ("two-pole bound", l.two_pole),
                ("product bound", l.product),
                ("Möbius bound", l.mobius),
                ("two-term Möbius bound", l.mobius_pair),
            ] {
                writeln!(
                    w,
                    "{name:<22} {} trials, {} violations, worst excess {:.3e}",
                    c.trials, c.violations, c.worst_excess
                )?;
            }
            let c = &out.cross_oracle;
            writeln!(
                w,
                "zero-sum vs series     f {:.3e}  g {:.3e}  h {:.3e}  convex f {:.3e}",
                c.star[0], c.star[1], c.star[2], c.convex_f
            )?;
            for (n, e) in &c.product_errors {
                writeln!(w, "partial product N={n:<3} max error {}", opt_plain(Some(*e)))?;
            }
            writeln!(w, "passed                 {}", out.passed)
        })(),
    }
    .map_err(|e| Failure::usage(format!("write failed: {e}")))?;
    Ok(if passed { 0 } else { EXIT_FAILED })
}

#[derive(Serialize)]
struct Coefficient {
    k: usize,
    g: f64,
    h: f64,
}

fn cmd_table(a: args::TableArgs) -> CmdResult {
    let p = params(&a.params)?;
    let rows: Vec<Coefficient> = (0..a.terms as usize)
        .map(|k| Coefficient {
            k,
            g: g_coefficient(&p, k),
            h: h_coefficient(&p, k),
        })
        .collect();
    let mut w = io::stdout().lock();
    match a.format {
        Format::Json => writeln!(w, "{}", json(&rows)),
        Format::Csv => (|| {
            writeln!(w, "k,g,h")?;
            for r in &rows {
                writeln!(w, "{},{},{}", r.k, cell(r.g), cell(r.h))?;
            }
            Ok(())
        })(),
        Format::Plain => (|| {
            writeln!(w, "g(z) = z Σ g_k z^(2k),  h(z) = z Σ h_k z^k")?;
            for r in &rows {
                writeln!(w, "{:>4}  {:>18}  {:>18}", r.k, plain(r.g), plain(r.h))?;
            }
            Ok(())
        })(),
    }
    .map_err(|e| Failure::usage(format!("write failed: {e}")))?;
    Ok(0)
}
