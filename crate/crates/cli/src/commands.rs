use std::io::Write;

use anyhow::{Context, Result};
use hsplit_core::{
    decompose_unchecked, grid, parse, verify_reference_identities, Decomposition, QuadratureConfig,
    ReportEntry, ScalarField, VerificationReport,
};
use serde::Serialize;

use crate::format::{csv_writer, sig12};
use crate::{DecomposeFormat, ReportFormat};

#[derive(Serialize)]
struct Sample {
    x: f64,
    fluctuation: f64,
    lift: f64,
}

/// `decompose --format json`; a superset of the verification report schema.
#[derive(Serialize)]
struct DecomposeDocument<'a> {
    function: &'a str,
    quadrature: QuadratureConfig,
    tolerance: f64,
    mean_part: f64,
    samples: Vec<Sample>,
    entries: Vec<ReportEntry>,
    overall_passed: bool,
}

/// Human-facing sample grid: x = 0.0, 0.1, ..., 1.0.
const SAMPLE_POINTS: usize = 11;

fn load_function(source: &str) -> Result<ScalarField> {
    let expr = parse(source).with_context(|| format!("cannot parse function `{source}`"))?;
    Ok(expr.into())
}

fn defect_entries(d: &Decomposition, tol: f64) -> Vec<ReportEntry> {
    vec![
        ReportEntry::new(
            "orthogonality: <Pf, Qf> = 0",
            "orthogonality of P and Q",
            d.orthogonality_defect,
            tol,
        ),
        ReportEntry::new(
            "pythagoras: ||f||^2 = ||Pf||^2 + ||Qf||^2",
            "Pythagorean identity",
            d.pythagoras_defect,
            tol,
        ),
        ReportEntry::new(
            "trace: psi(0) = psi(1) = 0",
            "traceless lift",
            d.trace_defect,
            tol,
        ),
    ]
}

pub fn decompose(
    out: &mut impl Write,
    function: &str,
    quadrature: QuadratureConfig,
    tol: f64,
    format: DecomposeFormat,
) -> Result<bool> {
    let f = load_function(function)?;
    let rule = quadrature.rule()?;
    let d = decompose_unchecked(&f, &rule);
    let entries = defect_entries(&d, tol);
    let passed = entries.iter().all(|e| e.passed);
    let samples: Vec<(f64, f64, f64)> = grid(SAMPLE_POINTS)
        .into_iter()
        .map(|x| (x, d.fluctuation.value(x), d.lift.value(x)))
        .collect();

    match format {
        DecomposeFormat::Json => {
            let doc = DecomposeDocument {
                function,
                quadrature,
                tolerance: tol,
                mean_part: d.mean_part,
                samples: samples
                    .iter()
                    .map(|&(x, fluctuation, lift)| Sample {
                        x,
                        fluctuation,
                        lift,
                    })
                    .collect(),
                entries,
                overall_passed: passed,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        DecomposeFormat::Csv => {
            let mut w = csv_writer(&mut *out);
            w.write_record(["kind", "name", "x", "value", "tolerance", "passed"])?;
            w.write_record(["mean", "mean_part", "", &d.mean_part.to_string(), "", ""])?;
            for &(x, q, psi) in &samples {
                w.write_record([
                    "sample",
                    "fluctuation",
                    &x.to_string(),
                    &q.to_string(),
                    "",
                    "",
                ])?;
                w.write_record(["sample", "lift", &x.to_string(), &psi.to_string(), "", ""])?;
            }
            for e in &entries {
                w.write_record([
                    "defect",
                    e.identity.as_str(),
                    "",
                    &e.defect.to_string(),
                    &e.tolerance.to_string(),
                    &e.passed.to_string(),
                ])?;
            }
            w.flush()?;
        }
        DecomposeFormat::Plain => {
            writeln!(out, "function:   {function}")?;
            writeln!(out, "quadrature: {quadrature}")?;
            writeln!(out, "mean_part:  {}", sig12(d.mean_part))?;
            writeln!(out)?;
            writeln!(out, "{:>5}  {:>20}  {:>20}", "x", "fluctuation", "lift")?;
            for &(x, q, psi) in &samples {
                writeln!(out, "{:>5.2}  {:>20}  {:>20}", x, sig12(q), sig12(psi))?;
            }
            writeln!(out)?;
            for e in &entries {
                writeln!(
                    out,
                    "{:<44} defect {:<20} tol {:<10} {}",
                    e.identity,
                    sig12(e.defect),
                    sig12(e.tolerance),
                    if e.passed { "pass" } else { "FAIL" }
                )?;
            }
            writeln!(out, "result: {}", if passed { "PASS" } else { "FAIL" })?;
        }
    }
    Ok(passed)
}

pub fn verify_paper(
    out: &mut impl Write,
    quadrature: QuadratureConfig,
    tol: f64,
    format: ReportFormat,
) -> Result<bool> {
    let rule = quadrature.rule()?;
    let report: VerificationReport = verify_reference_identities(&rule, tol);
    match format {
        ReportFormat::Json => writeln!(out, "{}", report.to_json())?,
        ReportFormat::Csv => write!(out, "{}", report.to_csv())?,
    }
    Ok(report.overall_passed)
}

pub fn table(
    out: &mut impl Write,
    function: &str,
    points: usize,
    quadrature: QuadratureConfig,
) -> Result<()> {
    anyhow::ensure!(points >= 2, "--points must be at least 2");
    let f = load_function(function)?;
    let rule = quadrature.rule()?;
    let d = decompose_unchecked(&f, &rule);
    let mut w = csv_writer(&mut *out);
    w.write_record(["x", "f", "P_f", "Q_f", "psi"])?;
    for x in grid(points) {
        w.serialize((
            x,
            f.value(x),
            d.mean_part,
            d.fluctuation.value(x),
            d.lift.value(x),
        ))?;
    }
    w.flush()?;
    Ok(())
}
