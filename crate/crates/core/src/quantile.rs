//! Quantile random variables `Y_A`, `Y_B` and the cumulative difference curve.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::half_plus;
use crate::sample::{check_equal_sizes, pooled_blocks, Block, SampleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Piecewise-constant densities of `Y_A` and `Y_B` over the `2n` bins
/// `[j/2n, (j+1)/2n)` of the unit interval.
///
/// A pooled value tied `m_A` times in A and `m_B` times in B owns a block of
/// `m_A + m_B` consecutive bins, split in proportion to the multiplicities, so
/// the two densities always add up to 2.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantilePair {
    n: usize,
    values: Vec<f64>,
    counts: Vec<usize>,
    density_a: Vec<f64>,
    density_b: Vec<f64>,
    cdf_a: Vec<f64>,
    cdf_b: Vec<f64>,
    diff: Vec<f64>,
}

pub fn build_quantile_pair(a: &SampleSet, b: &SampleSet) -> Result<QuantilePair> {
    let n = check_equal_sizes(a, b)?;
    Ok(QuantilePair::from_blocks(n, &pooled_blocks(&a.sorted(), &b.sorted())))
}

/// Writes `G_{Y_A} − G_{Y_B}` at the knots `j/2n` into `out` (length `2n + 1`).
///
/// Each value is an integer ratio, so exact zeros stay exact.
pub(crate) fn diff_knots(n: usize, blocks: &[Block], out: &mut [f64]) {
    debug_assert_eq!(out.len(), 2 * n + 1);
    let mut start = 0usize;
    let mut p = 0i64;
    out[0] = 0.0;
    for blk in blocks {
        let m = blk.size() as i64;
        let slope = blk.m_a as i64 - blk.m_b as i64;
        let den = (m as f64) * (n as f64);
        for t in 1..=m {
            out[start + t as usize] = (p * m + t * slope) as f64 / den;
        }
        start += m as usize;
        p += slope;
    }
}

impl QuantilePair {
    pub(crate) fn from_blocks(n: usize, blocks: &[Block]) -> Self {
        let bins = 2 * n;
        let mut density_a = Vec::with_capacity(bins);
        let mut density_b = Vec::with_capacity(bins);
        let mut cdf_a = Vec::with_capacity(bins + 1);
        let mut cdf_b = Vec::with_capacity(bins + 1);
        let mut counts = Vec::with_capacity(blocks.len() + 1);
        cdf_a.push(0.0);
        cdf_b.push(0.0);
        counts.push(0);
        let (mut cum_a, mut cum_b, mut total) = (0usize, 0usize, 0usize);
        for blk in blocks {
            let m = blk.size();
            let (da, db) = (2.0 * blk.m_a as f64 / m as f64, 2.0 * blk.m_b as f64 / m as f64);
            let den = (m * n) as f64;
            for t in 1..=m {
                density_a.push(da);
                density_b.push(db);
                cdf_a.push((cum_a * m + t * blk.m_a) as f64 / den);
                cdf_b.push((cum_b * m + t * blk.m_b) as f64 / den);
            }
            cum_a += blk.m_a;
            cum_b += blk.m_b;
            total += m;
            counts.push(total);
        }
        let mut diff = vec![0.0; bins + 1];
        diff_knots(n, blocks, &mut diff);
        Self { n, values: blocks.iter().map(|b| b.value).collect(), counts, density_a, density_b, cdf_a, cdf_b, diff }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn density(&self, side: Side) -> &[f64] {
        match side {
            Side::A => &self.density_a,
            Side::B => &self.density_b,
        }
    }

    /// Unique pooled values in rank order; rank `k` (1-based) is `values()[k − 1]`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// 1-based pooled rank of a value, if it occurs in either sample.
    pub fn rank(&self, value: f64) -> Option<usize> {
        let v = value + 0.0;
        self.values.binary_search_by(|x| x.total_cmp(&v)).ok().map(|i| i + 1)
    }

    /// Cumulative rank counts: entry `k` is the number of pooled items with rank ≤ `k`.
    pub fn cumulative_counts(&self) -> &[usize] {
        &self.counts
    }

    /// `G_{Y_A}` or `G_{Y_B}` at `x ∈ [0, 1]`.
    pub fn cumulative(&self, side: Side, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidArgument(format!("x = {x} outside [0, 1]")));
        }
        let (cdf, density) = match side {
            Side::A => (&self.cdf_a, &self.density_a),
            Side::B => (&self.cdf_b, &self.density_b),
        };
        let bins = 2 * self.n;
        let pos = x * bins as f64;
        let j = (pos.floor() as usize).min(bins - 1);
        let frac = pos - j as f64;
        if frac == 0.0 {
            return Ok(cdf[j]);
        }
        Ok(cdf[j] + density[j] * frac / bins as f64)
    }

    /// Knot values of `G_{Y_A}` or `G_{Y_B}` at `j/2n`.
    pub fn cumulative_knots(&self, side: Side) -> &[f64] {
        match side {
            Side::A => &self.cdf_a,
            Side::B => &self.cdf_b,
        }
    }

    pub fn diff_curve(&self) -> DiffCurve {
        DiffCurve { values: self.diff.clone() }
    }
}

pub fn diff_curve(q: &QuantilePair) -> DiffCurve {
    q.diff_curve()
}

/// Piecewise-linear curve on the uniform grid `x_j = j/(len − 1)` of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffCurve {
    values: Vec<f64>,
}

/// A maximal interval on which the difference curve keeps one sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignInterval {
    pub start: f64,
    pub end: f64,
    pub sign: i8,
}

impl DiffCurve {
    /// Curve through arbitrary knot values, as used for band envelopes.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument("a curve needs at least two knots".into()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.values.len() - 1) as f64
    }

    pub fn knot(&self, j: usize) -> f64 {
        j as f64 / (self.values.len() - 1) as f64
    }

    /// Linear interpolation at `x ∈ [0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let segs = self.values.len() - 1;
        let pos = (x.clamp(0.0, 1.0)) * segs as f64;
        let j = (pos.floor() as usize).min(segs - 1);
        let t = pos - j as f64;
        self.values[j] * (1.0 - t) + self.values[j + 1] * t
    }

    /// Positive and negative lengths, splitting segments at interior zeros.
    fn sign_lengths(&self) -> (f64, f64) {
        let h = self.step();
        let (mut pos, mut neg) = (0.0, 0.0);
        for w in self.values.windows(2) {
            let (d0, d1) = (w[0], w[1]);
            if d0 >= 0.0 && d1 >= 0.0 {
                if d0 > 0.0 || d1 > 0.0 {
                    pos += h;
                }
            } else if d0 <= 0.0 && d1 <= 0.0 {
                neg += h;
            } else {
                let before = h * d0 / (d0 - d1);
                if d0 < 0.0 {
                    neg += before;
                    pos += h - before;
                } else {
                    pos += before;
                    neg += h - before;
                }
            }
        }
        (pos, neg)
    }

    /// Maximal sign intervals in increasing order; `sign` is −1, 0 or 1.
    pub fn sign_intervals(&self) -> Vec<SignInterval> {
        let mut out: Vec<SignInterval> = Vec::new();
        let mut push = |start: f64, end: f64, sign: i8| {
            if end <= start {
                return;
            }
            match out.last_mut() {
                Some(last) if last.sign == sign => last.end = end,
                _ => out.push(SignInterval { start, end, sign }),
            }
        };
        for (j, w) in self.values.windows(2).enumerate() {
            let (x0, x1) = (self.knot(j), self.knot(j + 1));
            let (d0, d1) = (w[0], w[1]);
            let s0 = d0.partial_cmp(&0.0).map_or(0, |o| o as i8);
            let s1 = d1.partial_cmp(&0.0).map_or(0, |o| o as i8);
            if s0 * s1 < 0 {
                let root = x0 + (x1 - x0) * d0 / (d0 - d1);
                push(x0, root, s0);
                push(root, x1, s1);
            } else {
                push(x0, x1, if s0 != 0 { s0 } else { s1 });
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,diff\n");
        for (j, v) in self.values.iter().enumerate() {
            writeln!(s, "{},{}", self.knot(j), v).expect("writing to a String");
        }
        s
    }
}

/// `0.5 + ∫₀¹ diff`, exact for a piecewise-linear curve.
pub fn c_p_from_diff(d: &DiffCurve) -> f64 {
    let h = d.step();
    let area: f64 = d.values.windows(2).map(|w| 0.5 * (w[0] + w[1]) * h).sum();
    (0.5 + area).clamp(0.0, 1.0)
}

/// Dominance rate read off the sign lengths of the curve: the positive share of
/// the length where the curve is nonzero, or 0.5 if it vanishes identically.
pub fn c_d_from_diff(d: &DiffCurve) -> f64 {
    let (pos, neg) = d.sign_lengths();
    if pos + neg == 0.0 {
        return 0.5;
    }
    half_plus(pos - neg, pos + neg)
}
