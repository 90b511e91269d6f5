//! Empirical estimators of C_P and C_D from two equal-size samples.

use crate::error::{Error, Result};
use crate::sample::{check_equal_sizes, pooled_blocks, Block, SampleSet};

/// `0.5 + 0.5·num/den`, evaluated so that swapping the sign of `num`
/// yields exactly one minus the result.
pub(crate) fn half_plus(num: f64, den: f64) -> f64 {
    if num >= 0.0 {
        0.5 + 0.5 * (num / den)
    } else {
        1.0 - (0.5 + 0.5 * (-num / den))
    }
}

/// Signed pair count `Σ_{i,k} sign(b_k − a_i)` from tie blocks.
pub(crate) fn sign_sum(blocks: &[Block]) -> i64 {
    let (mut below_a, mut below_b) = (0i64, 0i64);
    let mut sum = 0i64;
    for blk in blocks {
        sum += blk.m_b as i64 * below_a - blk.m_a as i64 * below_b;
        below_a += blk.m_a as i64;
        below_b += blk.m_b as i64;
    }
    sum
}

/// Estimated probability that an A-observation is lower than a B-observation,
/// `Σ sign(b_k − a_i)/2n² + 1/2`, in O(n log n).
pub fn estimate_c_p(a: &SampleSet, b: &SampleSet) -> Result<f64> {
    let n = check_equal_sizes(a, b)?;
    let s = sign_sum(&pooled_blocks(&a.sorted(), &b.sorted()));
    Ok(half_plus(s as f64, (n as f64) * (n as f64)))
}

/// Tie-aware estimated dominance rate.
pub fn estimate_c_d(a: &SampleSet, b: &SampleSet) -> Result<f64> {
    Ok(PsiTable::new(a, b)?.c_d())
}

/// Dominance rate estimated with empirical CDFs treated as equal when they
/// differ by less than `delta`.
pub fn estimate_c_d_delta(a: &SampleSet, b: &SampleSet, delta: f64) -> Result<f64> {
    Ok(PsiTable::with_delta(a, b, delta)?.c_d())
}

/// One unique pooled value `c_d` and its contribution to the estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiRow {
    pub value: f64,
    /// `[A_n = c_d]`
    pub mult_a: usize,
    /// `[B_n = c_d]`
    pub mult_b: usize,
    /// `Ĝ_A(c_d)`
    pub cdf_a: f64,
    /// `Ĝ_B(c_d)`
    pub cdf_b: f64,
    pub psi: f64,
    /// Fraction of the tied block that lies before the CDFs cross; only set on crossing blocks.
    pub gamma: Option<f64>,
}

/// Per-value ψ contributions of the pooled sample.
///
/// Each pooled observation carries the ψ of its value, so a row with
/// multiplicity `m` contributes `m·ψ` to `Σ_j ψ(c_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiTable {
    n: usize,
    delta: Option<f64>,
    rows: Vec<PsiRow>,
    positive: f64,
    negative: f64,
}

impl PsiTable {
    pub fn new(a: &SampleSet, b: &SampleSet) -> Result<Self> {
        let n = check_equal_sizes(a, b)?;
        Ok(Self::from_blocks(n, &pooled_blocks(&a.sorted(), &b.sorted()), None))
    }

    pub fn with_delta(a: &SampleSet, b: &SampleSet, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
        }
        let n = check_equal_sizes(a, b)?;
        Ok(Self::from_blocks(n, &pooled_blocks(&a.sorted(), &b.sorted()), Some(delta)))
    }

    pub(crate) fn from_blocks(n: usize, blocks: &[Block], delta: Option<f64>) -> Self {
        let nf = n as f64;
        // Sign of a count difference, with the δ band mapping small gaps to zero.
        let sign = |d: i64| -> i64 {
            match delta {
                Some(delta) if (d.abs() as f64) / nf < delta => 0,
                _ => d.signum(),
            }
        };
        let mut rows = Vec::with_capacity(blocks.len());
        let (mut cum_a, mut cum_b) = (0i64, 0i64);
        let (mut positive, mut negative) = (0.0, 0.0);
        for blk in blocks {
            let p = cum_a - cum_b;
            cum_a += blk.m_a as i64;
            cum_b += blk.m_b as i64;
            let q = cum_a - cum_b;
            let m = blk.size() as f64;
            let (psi, gamma, pos, neg) = match (sign(p), sign(q)) {
                (0, 0) => (0.0, None, 0.0, 0.0),
                (sp, sq) if sp >= 0 && sq >= 0 => (1.0, None, m, 0.0),
                (sp, sq) if sp <= 0 && sq <= 0 => (-1.0, None, 0.0, m),
                (sp, _) => {
                    // p and q have strict opposite signs, so m_A ≠ m_B.
                    let width = (q - p).unsigned_abs();
                    debug_assert!(width > 0);
                    let gamma = p.unsigned_abs() as f64 / width as f64;
                    let before = m * gamma;
                    let after = m - before;
                    if sp < 0 {
                        (1.0 - 2.0 * gamma, Some(gamma), after, before)
                    } else {
                        (2.0 * gamma - 1.0, Some(gamma), before, after)
                    }
                }
            };
            positive += pos;
            negative += neg;
            rows.push(PsiRow {
                value: blk.value,
                mult_a: blk.m_a,
                mult_b: blk.m_b,
                cdf_a: cum_a as f64 / nf,
                cdf_b: cum_b as f64 / nf,
                psi,
                gamma,
            });
        }
        Self { n, delta, rows, positive, negative }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn rows(&self) -> &[PsiRow] {
        &self.rows
    }

    /// `Σ_j ψ(c_j)` over all 2n pooled observations.
    pub fn psi_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.psi * (r.mult_a + r.mult_b) as f64).sum()
    }

    /// Fraction of pooled observations whose block has a nonzero CDF difference.
    ///
    /// A crossing block with `γ = ½` has ψ = 0 yet still counts: its CDF gap is
    /// nonzero everywhere except the crossing point.
    pub fn k_c(&self) -> f64 {
        ((self.positive + self.negative) / (2 * self.n) as f64).min(1.0)
    }

    /// `(Σψ/2n / k_c + 1)/2`, or 0.5 when `k_c = 0`.
    pub fn c_d(&self) -> f64 {
        let total = self.positive + self.negative;
        if total == 0.0 {
            return 0.5;
        }
        half_plus(self.positive - self.negative, total)
    }
}
