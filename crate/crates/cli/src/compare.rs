use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use dominance_core::oracle::brute_c_p;
use dominance_core::{
    band_bounds, bootstrap_band, build_quantile_pair, c_d_from_diff, c_p_from_diff, curve_verdict, estimate_c_d,
    estimate_c_p, export_report, render_svg, Estimates, PlotSpec, Report, SampleSet,
};

use crate::CliError;

/// Below this many samples per side the estimates are too noisy to trust.
const SMALL_SAMPLE_WARNING: usize = 100;

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub alpha: f64,
    pub resamples: usize,
    pub seed: u64,
    pub maximize: bool,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub verify: bool,
    pub labels: (String, String),
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn fmt_interval(v: Option<[f64; 2]>) -> String {
    match v {
        Some([lo, hi]) => format!("[{lo:.6},{hi:.6}]"),
        None => "[n/a]".into(),
    }
}

pub fn summary_line(r: &Report) -> String {
    format!(
        "C_P={:.6} {}  C_D={:.6} {}  verdict={}",
        r.c_p,
        fmt_interval(r.c_p_interval),
        r.c_d,
        fmt_interval(r.c_d_interval),
        r.verdict
    )
}

/// Runs the full empirical pipeline and writes every requested output.
pub fn run_compare(a: SampleSet, b: SampleSet, opts: &CompareOptions) -> Result<Report, CliError> {
    let (a, b) = if opts.maximize { (a.negated(), b.negated()) } else { (a, b) };
    if a.len() != b.len() {
        return Err(CliError::Input(format!("sample sizes differ: |A| = {}, |B| = {}", a.len(), b.len())));
    }
    if a.len() < SMALL_SAMPLE_WARNING {
        eprintln!("warning: n = {} is below the recommended minimum of {SMALL_SAMPLE_WARNING}", a.len());
    }

    let curve = build_quantile_pair(&a, &b)?.diff_curve();
    let estimates = Estimates { c_p: estimate_c_p(&a, &b)?, c_d: estimate_c_d(&a, &b)?, n: a.len() };
    let band = bootstrap_band(&a, &b, opts.alpha, opts.resamples, opts.seed)?;

    let mut paths = BTreeMap::new();
    for (key, p) in [("svg", &opts.out), ("csv", &opts.csv), ("report", &opts.report)] {
        if let Some(p) = p {
            paths.insert(key.to_string(), p.display().to_string());
        }
    }
    let report = export_report(&estimates, &curve, Some(&band), curve_verdict(&curve), &paths);

    if let Some(path) = &opts.out {
        let spec = PlotSpec {
            label_a: opts.labels.0.clone(),
            label_b: opts.labels.1.clone(),
            alpha: Some(opts.alpha),
            ..PlotSpec::default()
        };
        write(path, &render_svg(&curve, Some(&band), &spec)?)?;
    }
    if let Some(path) = &opts.csv {
        write(path, band.to_csv().as_bytes())?;
    }
    if let Some(path) = &opts.report {
        write(path, (report.to_json() + "\n").as_bytes())?;
    }

    if opts.verify {
        let mut failures = Vec::new();
        let mut check = |name: &str, got: f64, want: f64, tol: f64| {
            if (got - want).abs() > tol {
                failures.push(format!("{name}: {got} vs {want}"));
            }
        };
        check("c_p vs pairwise count", estimates.c_p, brute_c_p(&a, &b)?, 1e-12);
        check("c_p vs plot area", c_p_from_diff(&curve), estimates.c_p, 1e-9);
        check("c_d vs plot sign lengths", c_d_from_diff(&curve), estimates.c_d, 1e-9);
        let bounds = band_bounds(&band);
        if !(bounds.c_p_low <= estimates.c_p && estimates.c_p <= bounds.c_p_high) {
            failures.push(format!("c_p {} outside [{}, {}]", estimates.c_p, bounds.c_p_low, bounds.c_p_high));
        }
        if !(bounds.c_d_low <= estimates.c_d && estimates.c_d <= bounds.c_d_high) {
            failures.push(format!("c_d {} outside [{}, {}]", estimates.c_d, bounds.c_d_low, bounds.c_d_high));
        }
        if band.diff() != curve.values() {
            failures.push("band grid does not carry the observed curve".into());
        }
        if !failures.is_empty() {
            return Err(CliError::Verify(failures.join("; ")));
        }
        eprintln!("verify: ok");
    }
    Ok(report)
}
