//! Bootstrap confidence band for the cumulative difference curve.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantile::{build_quantile_pair, c_d_from_diff, c_p_from_diff, diff_knots, DiffCurve};
use crate::rng::stream_rng;
use crate::sample::{check_equal_sizes, merge_runs, SampleSet};

pub const DEFAULT_RESAMPLES: usize = 1000;
/// Replicate curves held in memory at once, in f64 values.
const CHUNK_BUDGET: usize = 8 << 20;

/// Pointwise envelopes of the difference curve on the knots `j/2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBand {
    pub alpha: f64,
    pub resamples: usize,
    pub seed: u64,
    lower: Vec<f64>,
    diff: Vec<f64>,
    upper: Vec<f64>,
}

/// Half-height of the feasible triangle at `x`.
fn feasible(x: f64) -> f64 {
    (2.0 * x).min(2.0 - 2.0 * x)
}

impl ConfidenceBand {
    pub fn from_parts(
        alpha: f64,
        resamples: usize,
        seed: u64,
        lower: Vec<f64>,
        diff: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        if lower.len() != diff.len() || upper.len() != diff.len() {
            return Err(Error::GridMismatch { curve: diff.len(), band: lower.len().max(upper.len()) });
        }
        if diff.len() < 2 {
            return Err(Error::InvalidArgument("a band needs at least two knots".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l.is_nan() || u.is_nan() || l > u) {
            return Err(Error::InvalidArgument("lower envelope exceeds upper".into()));
        }
        Ok(Self { alpha, resamples, seed, lower, diff, upper })
    }

    pub fn len(&self) -> usize {
        self.diff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diff.is_empty()
    }

    pub fn knot(&self, j: usize) -> f64 {
        j as f64 / (self.diff.len() - 1) as f64
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// The observed difference curve the band was built around.
    pub fn diff(&self) -> &[f64] {
        &self.diff
    }

    pub fn contains(&self, j: usize, value: f64) -> bool {
        self.lower[j] <= value && value <= self.upper[j]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,lower,diff,upper\n");
        for j in 0..self.diff.len() {
            writeln!(s, "{},{},{},{}", self.knot(j), self.lower[j], self.diff[j], self.upper[j])
                .expect("writing to a String");
        }
        s
    }
}

/// Linear-interpolation sample quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn resample_counts<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut counts = vec![0usize; n];
    for _ in 0..n {
        counts[rng.random_range(0..n)] += 1;
    }
    counts
}

/// Bootstrap band at overall level `1 − alpha`.
///
/// Each replicate resamples both samples with replacement, re-derives the
/// pooled ranks, and evaluates `G_{Y_A}` and `G_{Y_B}` on the original knots.
/// Per-knot quantile intervals at level `√(1 − alpha)` for each variable are
/// combined as `[loA − hiB, hiA − loB]` and clamped to the feasible triangle.
pub fn bootstrap_band(a: &SampleSet, b: &SampleSet, alpha: f64, resamples: usize, seed: u64) -> Result<ConfidenceBand> {
    band_with_budget(a, b, alpha, resamples, seed, CHUNK_BUDGET)
}

fn band_with_budget(
    a: &SampleSet,
    b: &SampleSet,
    alpha: f64,
    resamples: usize,
    seed: u64,
    budget: usize,
) -> Result<ConfidenceBand> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if resamples < 100 {
        return Err(Error::InvalidArgument(format!("at least 100 resamples required, got {resamples}")));
    }
    let n = check_equal_sizes(a, b)?;
    let observed = build_quantile_pair(a, b)?.diff_curve().values().to_vec();
    let (sa, sb) = (a.sorted(), b.sorted());
    let knots = 2 * n + 1;
    let level = (1.0 - alpha).sqrt();
    let (q_lo, q_hi) = ((1.0 - level) / 2.0, (1.0 + level) / 2.0);

    let mut lower = vec![0.0; knots];
    let mut upper = vec![0.0; knots];
    let chunk = (budget / resamples).clamp(1, knots);
    for start in (0..knots).step_by(chunk) {
        let end = (start + chunk).min(knots);
        let width = end - start;
        // Row r holds G_{Y_A} of replicate r on knots start..end.
        let mut rows = vec![0.0; resamples * width];
        rows.par_chunks_mut(width).enumerate().for_each(|(r, row)| {
            let mut rng = stream_rng(seed, r as u64);
            let ca = resample_counts(n, &mut rng);
            let cb = resample_counts(n, &mut rng);
            let runs = |s: &[f64], c: &[usize]| s.iter().copied().zip(c.iter().copied()).collect::<Vec<_>>();
            let blocks = merge_runs(&runs(&sa, &ca), &runs(&sb, &cb));
            let mut d = vec![0.0; knots];
            diff_knots(n, &blocks, &mut d);
            for (k, v) in row.iter_mut().enumerate() {
                let x = (start + k) as f64 / (knots - 1) as f64;
                // G_{Y_A} + G_{Y_B} = 2x and G_{Y_A} − G_{Y_B} = d.
                *v = x + 0.5 * d[start + k];
            }
        });
        let envelopes: Vec<(f64, f64)> = (0..width)
            .into_par_iter()
            .map(|k| {
                let j = start + k;
                let x = j as f64 / (knots - 1) as f64;
                let mut ga: Vec<f64> = (0..resamples).map(|r| rows[r * width + k]).collect();
                ga.sort_by(f64::total_cmp);
                let mut gb: Vec<f64> = ga.iter().rev().map(|g| 2.0 * x - g).collect();
                gb.sort_by(f64::total_cmp);
                let (lo_a, hi_a) = (quantile_sorted(&ga, q_lo), quantile_sorted(&ga, q_hi));
                let (lo_b, hi_b) = (quantile_sorted(&gb, q_lo), quantile_sorted(&gb, q_hi));
                let cap = feasible(x);
                ((lo_a - hi_b).clamp(-cap, cap), (hi_a - lo_b).clamp(-cap, cap))
            })
            .collect();
        for (k, (l, u)) in envelopes.into_iter().enumerate() {
            lower[start + k] = l;
            upper[start + k] = u.max(l);
        }
    }
    lower[0] = 0.0;
    upper[0] = 0.0;
    lower[knots - 1] = 0.0;
    upper[knots - 1] = 0.0;
    Ok(ConfidenceBand { alpha, resamples, seed, lower, diff: observed, upper })
}

/// Interval bounds on `C_P` and `C_D` read off the band envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandBounds {
    pub c_p_low: f64,
    pub c_p_high: f64,
    pub c_d_low: f64,
    pub c_d_high: f64,
}

/// Both measures are nondecreasing in the curve, so the envelopes bound them.
/// Envelopes are widened to include the observed curve so each interval
/// contains the point estimate.
pub fn band_bounds(band: &ConfidenceBand) -> BandBounds {
    let low: Vec<f64> = band.lower.iter().zip(&band.diff).map(|(l, d)| l.min(*d)).collect();
    let high: Vec<f64> = band.upper.iter().zip(&band.diff).map(|(u, d)| u.max(*d)).collect();
    let low = DiffCurve::new(low).expect("band knots are finite");
    let high = DiffCurve::new(high).expect("band knots are finite");
    BandBounds {
        c_p_low: c_p_from_diff(&low),
        c_p_high: c_p_from_diff(&high),
        c_d_low: c_d_from_diff(&low),
        c_d_high: c_d_from_diff(&high),
    }
}
