use std::fs;
use std::path::PathBuf;

use dominance_core::measures::properties::{run_property_suite, PropertyTrialConfig};
use dominance_core::{c_d_analytic, c_p_analytic, classify, reference_measure, MeasureId, MixtureModel};

use crate::compare::{run_compare, summary_line, CompareOptions};
use crate::input::{label, read_mixture};
use crate::CliError;

const CLASSIFY_PROBES: usize = 2000;

pub struct AnalyticArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub tol: f64,
    pub n: Option<usize>,
    pub seed: u64,
}

pub fn analytic(args: &AnalyticArgs) -> Result<(), CliError> {
    let a = read_mixture(&args.a)?;
    let b = read_mixture(&args.b)?;
    print_analytic(&a, &b, args.tol)?;
    if let Some(n) = args.n {
        let sa = a.sample(n, args.seed)?;
        let sb = b.sample(n, args.seed.wrapping_add(1))?;
        let opts = CompareOptions {
            alpha: 0.05,
            resamples: dominance_core::bootstrap::DEFAULT_RESAMPLES,
            seed: args.seed,
            maximize: false,
            out: None,
            report: None,
            csv: None,
            verify: false,
            labels: (label(&args.a), label(&args.b)),
        };
        let report = run_compare(sa, sb, &opts)?;
        println!("empirical (n = {n}): {}", summary_line(&report));
    }
    Ok(())
}

fn print_analytic(a: &MixtureModel, b: &MixtureModel, tol: f64) -> Result<(), CliError> {
    let c_p = c_p_analytic(a, b, tol)?;
    println!("c_p = {:.9}  (error estimate {:.1e})", c_p.value, c_p.quadrature_error_estimate);
    match c_d_analytic(a, b, tol) {
        Ok(c_d) => println!("c_d = {:.9}  (error estimate {:.1e})", c_d.value, c_d.quadrature_error_estimate),
        Err(e) => println!("c_d = undefined ({e})"),
    }
    println!("verdict = {}", classify(a, b, CLASSIFY_PROBES, tol)?);
    for id in MeasureId::ALL {
        if matches!(id, MeasureId::CP | MeasureId::CD) {
            continue;
        }
        let m = reference_measure(a, b, id, tol)?;
        if m.infinite {
            println!("{id} = inf");
        } else {
            println!("{id} = {:.9}", m.value);
        }
    }
    Ok(())
}

pub struct PropertiesArgs {
    pub measure: String,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub report: Option<PathBuf>,
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "✗"
    }
}

pub fn properties(args: &PropertiesArgs) -> Result<(), CliError> {
    let measures: Vec<MeasureId> = if args.measure == "all" {
        vec![
            MeasureId::CP,
            MeasureId::CD,
            MeasureId::Tv,
            MeasureId::Hellinger,
            MeasureId::Kl,
            MeasureId::Js,
            MeasureId::Wasserstein,
        ]
    } else {
        vec![args.measure.parse().map_err(|e| CliError::Input(format!("{e}")))?]
    };
    let cfg = PropertyTrialConfig { trials: args.trials, seed: args.seed, tolerance: args.tol, ..Default::default() };
    cfg.validate()?;

    println!("{:<20} 1 2 3 4 5 6 7 8  table", "measure");
    let mut reports = Vec::new();
    let mut mismatches = Vec::new();
    for id in measures {
        let report = run_property_suite(id, &cfg)?;
        let cells: Vec<&str> = report.passed().into_iter().map(mark).collect();
        let status = match report.matches_expectation {
            Some(true) => "match",
            Some(false) => "MISMATCH",
            None => "-",
        };
        println!("{:<20} {}  {status}", id.name(), cells.join(" "));
        if let Some(expected) = &report.expected {
            for (o, e) in report.outcomes.iter().zip(expected) {
                if o.passed != *e {
                    let why = o.witness.as_ref().map(|w| format!(": trial {}, {}", w.trial, w.description));
                    mismatches.push(format!(
                        "{id} property {}: expected {}, observed {}{}",
                        o.property,
                        mark(*e),
                        mark(o.passed),
                        why.unwrap_or_default()
                    ));
                }
            }
        }
        reports.push(report);
    }
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
        fs::write(path, json).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        for m in &mismatches {
            eprintln!("{m}");
        }
        Err(CliError::TableMismatch(mismatches.len()))
    }
}
