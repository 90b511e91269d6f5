//! Independent brute-force references for the primary algorithms.

use crate::analytic::MixtureModel;
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::sample::{check_equal_sizes, SampleSet};

/// Literal double loop over all pairs: `Σ sign(b_k − a_i)/2n² + 1/2`.
pub fn brute_c_p(a: &SampleSet, b: &SampleSet) -> Result<f64> {
    let n = check_equal_sizes(a, b)?;
    let mut sum = 0i64;
    for &x in a.values() {
        for &y in b.values() {
            sum += if y > x {
                1
            } else if y < x {
                -1
            } else {
                0
            };
        }
    }
    Ok(sum as f64 / (2.0 * (n as f64) * (n as f64)) + 0.5)
}

/// Midpoint-rule `C_P` and `C_D` on a uniform grid over the truncated support.
pub fn grid_dominance(a: &MixtureModel, b: &MixtureModel, gridsize: usize) -> Result<(f64, f64)> {
    if gridsize < 10_000 {
        return Err(Error::InvalidArgument(format!("gridsize must be at least 1e4, got {gridsize}")));
    }
    let (lo_a, hi_a) = a.truncated_range();
    let (lo_b, hi_b) = b.truncated_range();
    let (lo, hi) = (lo_a.min(lo_b), hi_a.max(hi_b));
    let h = (hi - lo) / gridsize as f64;
    let (mut c_p, mut mass_a_pos, mut mass_b_neg, mut mass_a_any, mut mass_b_any) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..gridsize {
        let x = lo + (i as f64 + 0.5) * h;
        let (ga, gb) = (a.pdf(x), b.pdf(x));
        let big_a = a.cdf(x);
        let d = big_a - b.cdf(x);
        c_p += gb * big_a * h;
        if d > 1e-10 {
            mass_a_pos += ga * h;
            mass_a_any += ga * h;
            mass_b_any += gb * h;
        } else if d < -1e-10 {
            mass_b_neg += gb * h;
            mass_a_any += ga * h;
            mass_b_any += gb * h;
        }
    }
    let c_d = if mass_a_any + mass_b_any <= 0.0 {
        0.5
    } else {
        let pos = if mass_a_any > 0.0 { mass_a_pos / mass_a_any } else { 0.0 };
        let neg = if mass_b_any > 0.0 { mass_b_neg / mass_b_any } else { 0.0 };
        0.5 * (pos - neg) + 0.5
    };
    Ok((c_p, c_d))
}

/// Fraction of independent draw pairs with `x_a < x_b`.
pub fn monte_carlo_c_p(a: &MixtureModel, b: &MixtureModel, draws: usize, seed: u64) -> Result<f64> {
    if draws < 10_000 {
        return Err(Error::InvalidArgument(format!("draws must be at least 1e4, got {draws}")));
    }
    let mut ra = stream_rng(seed, 1);
    let mut rb = stream_rng(seed, 2);
    let mut below = 0usize;
    for _ in 0..draws {
        if a.draw_one(&mut ra) < b.draw_one(&mut rb) {
            below += 1;
        }
    }
    Ok(below as f64 / draws as f64)
}
