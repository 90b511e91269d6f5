//! Analytic dominance measures, dominance classification and reference divergences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::MixtureModel;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

pub mod properties;

/// CDFs closer than this are treated as equal.
pub const CDF_EQUALITY_BAND: f64 = 1e-10;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Mass of `g_A` outside the support of `g_B` above which KL is reported infinite.
pub const KL_ESCAPE_MASS: f64 = 1e-9;

const SIGN_PROBES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureId {
    CP,
    CD,
    Kl,
    Js,
    Tv,
    Hellinger,
    Wasserstein,
    SignedWasserstein,
    CI,
}

impl MeasureId {
    pub const ALL: [MeasureId; 9] = [
        MeasureId::CP,
        MeasureId::CD,
        MeasureId::Kl,
        MeasureId::Js,
        MeasureId::Tv,
        MeasureId::Hellinger,
        MeasureId::Wasserstein,
        MeasureId::SignedWasserstein,
        MeasureId::CI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::CP => "c_p",
            MeasureId::CD => "c_d",
            MeasureId::Kl => "kl",
            MeasureId::Js => "js",
            MeasureId::Tv => "tv",
            MeasureId::Hellinger => "hellinger",
            MeasureId::Wasserstein => "wasserstein",
            MeasureId::SignedWasserstein => "signed_wasserstein",
            MeasureId::CI => "c_i",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub measure_id: MeasureId,
    pub value: f64,
    pub quadrature_error_estimate: f64,
    /// Set when the value is `+∞` because the divergence does not exist.
    pub infinite: bool,
}

impl MeasureValue {
    fn finite(measure_id: MeasureId, value: f64, error: f64) -> Self {
        Self { measure_id, value, quadrature_error_estimate: error, infinite: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    ADominates,
    BDominates,
    Cross,
    Equal,
}

impl fmt::Display for DominanceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DominanceVerdict::ADominates => "a_dominates",
            DominanceVerdict::BDominates => "b_dominates",
            DominanceVerdict::Cross => "cross",
            DominanceVerdict::Equal => "equal",
        })
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

fn joint_range(a: &MixtureModel, b: &MixtureModel) -> (f64, f64) {
    let (la, ha) = a.truncated_range();
    let (lb, hb) = b.truncated_range();
    (la.min(lb), ha.max(hb))
}

fn joint_breakpoints(a: &MixtureModel, b: &MixtureModel) -> Vec<f64> {
    let mut pts = a.breakpoints();
    pts.extend(b.breakpoints());
    pts
}

fn integrate_pair<F: Fn(f64) -> f64>(a: &MixtureModel, b: &MixtureModel, f: F, tol: f64) -> Result<(f64, f64)> {
    let (lo, hi) = joint_range(a, b);
    let r = integrate(f, lo, hi, &joint_breakpoints(a, b), tol)?;
    Ok((r.value, r.error))
}

fn sign_of(d: f64) -> i8 {
    if d > CDF_EQUALITY_BAND {
        1
    } else if d < -CDF_EQUALITY_BAND {
        -1
    } else {
        0
    }
}

/// Probability that `X_A < X_B`: `∫ g_B G_A`.
pub fn c_p_analytic(a: &MixtureModel, b: &MixtureModel, tol: f64) -> Result<MeasureValue> {
    check_tol(tol)?;
    let (v, e) = integrate_pair(a, b, |x| b.pdf(x) * a.cdf(x), tol)?;
    Ok(MeasureValue::finite(MeasureId::CP, v.clamp(0.0, 1.0), e))
}

/// Maximal intervals on which `sign(G_A − G_B)` is constant, with the mass
/// of each variable on the nonzero ones.
///
/// Masses come from CDF increments, so only the interval ends carry error.
#[derive(Debug, Clone, PartialEq)]
pub struct SignRegions {
    pub intervals: Vec<(f64, f64, i8)>,
    /// A-mass where `G_A > G_B`.
    pub a_positive: f64,
    /// A-mass where `G_A ≠ G_B`.
    pub a_nonzero: f64,
    /// B-mass where `G_A < G_B`.
    pub b_negative: f64,
    /// B-mass where `G_A ≠ G_B`.
    pub b_nonzero: f64,
    pub error: f64,
}

/// Probe points: both models' breakpoints, a uniform grid, and pooled-quantile
/// points read off that grid.
fn sign_probes(a: &MixtureModel, b: &MixtureModel) -> Vec<f64> {
    let (lo, hi) = joint_range(a, b);
    let mut grid: Vec<f64> = (0..=SIGN_PROBES)
        .map(|i| lo + (hi - lo) * i as f64 / SIGN_PROBES as f64)
        .chain(joint_breakpoints(a, b).into_iter().filter(|x| *x > lo && *x < hi))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let pooled: Vec<f64> = grid.iter().map(|&x| 0.5 * (a.cdf(x) + b.cdf(x))).collect();
    let mut probes = grid.clone();
    let mut k = 0;
    for i in 1..SIGN_PROBES {
        let p = i as f64 / SIGN_PROBES as f64;
        while k + 1 < grid.len() && pooled[k + 1] < p {
            k += 1;
        }
        if k + 1 < grid.len() && pooled[k + 1] > pooled[k] {
            let t = ((p - pooled[k]) / (pooled[k + 1] - pooled[k])).clamp(0.0, 1.0);
            probes.push(grid[k] + t * (grid[k + 1] - grid[k]));
        }
    }
    probes.sort_by(f64::total_cmp);
    probes.dedup();
    probes
}

pub fn sign_regions(a: &MixtureModel, b: &MixtureModel) -> SignRegions {
    let d = |x: f64| a.cdf(x) - b.cdf(x);
    let probes = sign_probes(a, b);
    let signs: Vec<i8> = probes.iter().map(|&x| sign_of(d(x))).collect();

    // Boundaries between runs of equal sign, refined by bisection.
    let mut cuts = vec![probes[0]];
    let mut run_signs = vec![signs[0]];
    let mut error = 0.0;
    for i in 1..probes.len() {
        if signs[i] == signs[i - 1] {
            continue;
        }
        let (mut l, mut r) = (probes[i - 1], probes[i]);
        for _ in 0..200 {
            let m = 0.5 * (l + r);
            if m <= l || m >= r {
                break;
            }
            if sign_of(d(m)) == signs[i - 1] {
                l = m;
            } else {
                r = m;
            }
        }
        let cut = 0.5 * (l + r);
        error += (r - l) * (a.pdf(cut) + b.pdf(cut));
        cuts.push(cut);
        run_signs.push(signs[i]);
    }
    cuts.push(*probes.last().expect("probes are never empty"));

    let mut out = SignRegions {
        intervals: Vec::with_capacity(run_signs.len()),
        a_positive: 0.0,
        a_nonzero: 0.0,
        b_negative: 0.0,
        b_nonzero: 0.0,
        error,
    };
    for (k, &s) in run_signs.iter().enumerate() {
        let (l, r) = (cuts[k], cuts[k + 1]);
        out.intervals.push((l, r, s));
        if s == 0 {
            continue;
        }
        let ma = a.cdf(r) - a.cdf(l);
        let mb = b.cdf(r) - b.cdf(l);
        out.a_nonzero += ma;
        out.b_nonzero += mb;
        if s > 0 {
            out.a_positive += ma;
        } else {
            out.b_negative += mb;
        }
    }
    out
}

impl SignRegions {
    fn is_null(&self) -> bool {
        self.a_nonzero <= 0.0 && self.b_nonzero <= 0.0
    }

    fn c_d(&self) -> f64 {
        if self.is_null() {
            return 0.5;
        }
        let pos = if self.a_nonzero > 0.0 { self.a_positive / self.a_nonzero } else { 0.0 };
        let neg = if self.b_nonzero > 0.0 { self.b_negative / self.b_nonzero } else { 0.0 };
        (0.5 * (pos - neg) + 0.5).clamp(0.0, 1.0)
    }
}

/// Dominance density at `x`: `g_A·k_A` where `G_A > G_B`, `−g_B·k_B` where
/// `G_A < G_B`, zero where the CDFs agree.
pub fn dominance_density(a: &MixtureModel, b: &MixtureModel, x: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let regions = sign_regions(a, b);
    if regions.is_null() {
        return Err(Error::UndefinedDensity);
    }
    Ok(match sign_of(a.cdf(x) - b.cdf(x)) {
        1 => a.pdf(x) / regions.a_nonzero,
        -1 => -b.pdf(x) / regions.b_nonzero,
        _ => 0.0,
    })
}

/// Dominance rate `0.5·∫D + 0.5`, or 0.5 for equal models.
///
/// `∫D` is assembled from the masses of each sign region rather than by
/// integrating the discontinuous density.
pub fn c_d_analytic(a: &MixtureModel, b: &MixtureModel, tol: f64) -> Result<MeasureValue> {
    check_tol(tol)?;
    let regions = sign_regions(a, b);
    Ok(MeasureValue::finite(MeasureId::CD, regions.c_d(), regions.error))
}

/// Stochastic-dominance verdict from the CDF difference on `probes`
/// pooled-quantile points plus the component breakpoints.
pub fn classify(a: &MixtureModel, b: &MixtureModel, probes: usize, tol: f64) -> Result<DominanceVerdict> {
    if probes < 100 {
        return Err(Error::InvalidArgument(format!("at least 100 probes required, got {probes}")));
    }
    check_tol(tol)?;
    let pooled = MixtureModel::mix(&[(a, 0.5), (b, 0.5)])?;
    let (mut above, mut below) = (false, false);
    // Component breakpoints catch thin tails that fall between quantile probes.
    let quantiles = (0..probes).map(|i| pooled.quantile((i as f64 + 0.5) / probes as f64));
    for x in quantiles.chain(joint_breakpoints(a, b)) {
        let d = a.cdf(x) - b.cdf(x);
        above |= d > tol;
        below |= d < -tol;
    }
    Ok(match (above, below) {
        (true, true) => DominanceVerdict::Cross,
        (true, false) => DominanceVerdict::ADominates,
        (false, true) => DominanceVerdict::BDominates,
        (false, false) => DominanceVerdict::Equal,
    })
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((x - m).exp() + (y - m).exp()).ln()
}

/// `KL(P‖Q) = ∫ p ln(p/q)` from log densities.
fn kl_divergence(
    p: &dyn Fn(f64) -> f64,
    q: &dyn Fn(f64) -> f64,
    a: &MixtureModel,
    b: &MixtureModel,
    tol: f64,
) -> Result<(f64, f64, bool)> {
    let (escaped, e0) = integrate_pair(
        a,
        b,
        |x| {
            let lp = p(x);
            if lp > f64::NEG_INFINITY && q(x) == f64::NEG_INFINITY {
                lp.exp()
            } else {
                0.0
            }
        },
        tol,
    )?;
    if escaped > KL_ESCAPE_MASS {
        return Ok((f64::INFINITY, e0, true));
    }
    let (v, e) = integrate_pair(
        a,
        b,
        |x| {
            let (lp, lq) = (p(x), q(x));
            if lp == f64::NEG_INFINITY || lq == f64::NEG_INFINITY {
                0.0
            } else {
                lp.exp() * (lp - lq)
            }
        },
        tol,
    )?;
    Ok((v.max(0.0), e0 + e, false))
}

/// Appendix reference measures plus the two dominance measures.
pub fn reference_measure(a: &MixtureModel, b: &MixtureModel, measure_id: MeasureId, tol: f64) -> Result<MeasureValue> {
    check_tol(tol)?;
    let fin = |(v, e): (f64, f64)| MeasureValue::finite(measure_id, v, e);
    Ok(match measure_id {
        MeasureId::CP => c_p_analytic(a, b, tol)?,
        MeasureId::CD => c_d_analytic(a, b, tol)?,
        MeasureId::Kl => {
            let (v, e, infinite) = kl_divergence(&|x| a.ln_pdf(x), &|x| b.ln_pdf(x), a, b, tol)?;
            MeasureValue { measure_id, value: v, quadrature_error_estimate: e, infinite }
        }
        MeasureId::Js => {
            let ln_m = |x: f64| log_add_exp(a.ln_pdf(x), b.ln_pdf(x)) - std::f64::consts::LN_2;
            let (va, ea, _) = kl_divergence(&|x| a.ln_pdf(x), &ln_m, a, b, 0.5 * tol)?;
            let (vb, eb, _) = kl_divergence(&|x| b.ln_pdf(x), &ln_m, a, b, 0.5 * tol)?;
            MeasureValue::finite(measure_id, va + vb, ea + eb)
        }
        MeasureId::Tv => {
            let (v, e) = integrate_pair(a, b, |x| 0.5 * (a.pdf(x) - b.pdf(x)).abs(), tol)?;
            MeasureValue::finite(measure_id, v.clamp(0.0, 1.0), e)
        }
        MeasureId::Hellinger => {
            let (v, e) = integrate_pair(a, b, |x| (a.pdf(x).sqrt() - b.pdf(x).sqrt()).powi(2), tol)?;
            let h = v.max(0.0).sqrt();
            // d√v = dv / (2√v); bounded by √e near zero.
            let err = if h > 0.0 { (e / (2.0 * h)).min(e.sqrt()) } else { e.sqrt() };
            MeasureValue::finite(measure_id, h, err)
        }
        MeasureId::Wasserstein => fin(integrate_pair(a, b, |x| (a.cdf(x) - b.cdf(x)).abs(), tol)?),
        MeasureId::SignedWasserstein => fin(integrate_pair(a, b, |x| a.cdf(x) - b.cdf(x), tol)?),
        MeasureId::CI => {
            let (v, e) = integrate_pair(a, b, |x| (a.cdf(x) - b.cdf(x)).max(0.0) * b.pdf(x), tol)?;
            MeasureValue::finite(measure_id, v.clamp(0.0, 0.5), e)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{AffineTransform, Component};
    use crate::oracle::grid_dominance;
    use proptest::prelude::*;

    const TOL: f64 = 1e-8;

    fn g(m: f64, s: f64) -> MixtureModel {
        MixtureModel::gaussian(m, s).unwrap()
    }

    fn u(lo: f64, hi: f64) -> MixtureModel {
        MixtureModel::uniform(lo, hi).unwrap()
    }

    fn prop2_b() -> MixtureModel {
        MixtureModel::mix(&[(&u(0.1, 1.0), 0.9), (&u(-0.5, 0.0), 0.1)]).unwrap()
    }

    fn case1() -> (MixtureModel, MixtureModel) {
        let a = MixtureModel::new(vec![
            (Component::gaussian(0.05, 0.00125), 0.489),
            (Component::gaussian(0.07, 0.00125), 0.511),
        ])
        .unwrap();
        let b = MixtureModel::new(vec![
            (Component::gaussian(0.06, 0.00125), 0.511),
            (Component::gaussian(0.08, 0.00125), 0.489),
        ])
        .unwrap();
        (a, b)
    }

    #[test]
    fn c_p_examples() {
        assert!((c_p_analytic(&g(0.0, 1.0), &g(0.0, 1.0), TOL).unwrap().value - 0.5).abs() < 1e-8);
        let v = c_p_analytic(&g(0.0, 1.0), &g(1.0, 1.0), TOL).unwrap().value;
        assert!((v - 0.760_249_938_906_523).abs() < 1e-8, "{v}");
        let v = c_p_analytic(&u(0.0, 1.0), &prop2_b(), TOL).unwrap().value;
        assert!((v - 0.495).abs() < 1e-8, "{v}");
        assert!(c_p_analytic(&u(0.0, 1.0), &prop2_b(), 0.0).is_err());
    }

    #[test]
    fn dominance_density_examples() {
        let v = dominance_density(&g(0.0, 1.0), &g(1.0, 1.0), 0.0, TOL).unwrap();
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-8);
        let v = dominance_density(&u(0.0, 1.0), &prop2_b(), -0.25, TOL).unwrap();
        assert!((v + 2.0).abs() < 1e-8, "{v}");
        assert_eq!(dominance_density(&u(0.0, 1.0), &prop2_b(), 0.5, TOL).unwrap(), 0.0);
        assert_eq!(dominance_density(&g(0.0, 1.0), &g(0.0, 1.0), 0.0, TOL), Err(Error::UndefinedDensity));
    }

    #[test]
    fn c_d_examples() {
        assert_eq!(c_d_analytic(&prop2_b(), &prop2_b(), TOL).unwrap().value, 0.5);
        assert!((c_d_analytic(&u(0.0, 1.0), &u(0.1, 1.0), TOL).unwrap().value - 1.0).abs() < 1e-9);
        assert!(c_d_analytic(&u(0.0, 1.0), &prop2_b(), TOL).unwrap().value.abs() < 1e-9);
        assert!((c_d_analytic(&g(0.0, 1.0), &g(1.0, 1.0), TOL).unwrap().value - 1.0).abs() < 1e-9);
        // Equal location, different spread: symmetric crossing.
        assert!((c_d_analytic(&g(0.0, 1.0), &g(0.0, 2.0), TOL).unwrap().value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn classify_examples() {
        let band = CDF_EQUALITY_BAND;
        assert_eq!(classify(&g(0.0, 1.0), &g(1.0, 1.0), 1000, band).unwrap(), DominanceVerdict::ADominates);
        assert_eq!(classify(&g(1.0, 1.0), &g(0.0, 1.0), 1000, band).unwrap(), DominanceVerdict::BDominates);
        let (a, b) = case1();
        assert_eq!(classify(&a, &b, 1000, band).unwrap(), DominanceVerdict::Cross);
        assert_eq!(classify(&a, &a, 1000, band).unwrap(), DominanceVerdict::Equal);
        assert!(classify(&a, &b, 10, band).is_err());
    }

    #[test]
    fn reference_examples() {
        let (g0, g1) = (g(0.0, 1.0), g(1.0, 1.0));
        assert!(reference_measure(&g0, &g0, MeasureId::Tv, TOL).unwrap().value < 1e-8);
        assert!((reference_measure(&g0, &g1, MeasureId::Kl, TOL).unwrap().value - 0.5).abs() < 1e-7);
        assert!((reference_measure(&g0, &g1, MeasureId::Wasserstein, TOL).unwrap().value - 1.0).abs() < 1e-7);
        assert!((reference_measure(&g0, &g1, MeasureId::SignedWasserstein, TOL).unwrap().value - 1.0).abs() < 1e-7);
        // TV of unit-shifted standard normals: 2Φ(½) − 1.
        let tv = reference_measure(&g0, &g1, MeasureId::Tv, TOL).unwrap().value;
        assert!((tv - 0.382_924_922_548_026).abs() < 1e-7, "{tv}");
        // Hellinger: H² = 2(1 − exp(−Δμ²/8)).
        let h = reference_measure(&g0, &g1, MeasureId::Hellinger, TOL).unwrap().value;
        assert!((h * h - 2.0 * (1.0 - (-1.0f64 / 8.0).exp())).abs() < 1e-7, "{h}");
        assert_eq!(
            reference_measure(&g0, &g1, MeasureId::CP, TOL).unwrap().value,
            c_p_analytic(&g0, &g1, TOL).unwrap().value
        );
    }

    #[test]
    fn kl_support_violation_is_infinite() {
        let v = reference_measure(&g(0.5, 1.0), &u(0.0, 1.0), MeasureId::Kl, TOL).unwrap();
        assert!(v.infinite && v.value == f64::INFINITY);
        let fine = reference_measure(&u(0.2, 0.8), &u(0.0, 1.0), MeasureId::Kl, TOL).unwrap();
        assert!(!fine.infinite);
        assert!((fine.value - (1.0f64 / 0.6).ln()).abs() < 1e-8);
    }

    #[test]
    fn js_of_disjoint_laws_is_two_ln_two() {
        let v = reference_measure(&u(0.0, 1.0), &u(2.0, 3.0), MeasureId::Js, TOL).unwrap().value;
        assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-8);
    }

    #[test]
    fn c_i_is_half_when_a_lies_below_b() {
        let v = reference_measure(&u(0.0, 1.0), &u(2.0, 3.0), MeasureId::CI, TOL).unwrap().value;
        assert!((v - 0.5).abs() < 1e-8);
        let v = reference_measure(&g(0.0, 1.0), &g(1.0, 1.0), MeasureId::CI, TOL).unwrap().value;
        assert!(v < 0.5 - 1e-3);
    }

    #[test]
    fn measure_ids_round_trip() {
        for m in MeasureId::ALL {
            assert_eq!(m.name().parse::<MeasureId>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("bogus".parse::<MeasureId>().is_err());
    }

    #[test]
    fn grid_oracle_agrees_on_case1() {
        let (a, b) = case1();
        let (c_p, c_d) = grid_dominance(&a, &b, 400_000).unwrap();
        assert!((c_p - c_p_analytic(&a, &b, TOL).unwrap().value).abs() < 1e-4);
        assert!((c_d - c_d_analytic(&a, &b, TOL).unwrap().value).abs() < 1e-3);
    }

    fn arb_model() -> impl Strategy<Value = MixtureModel> {
        prop::collection::vec((any::<bool>(), -2.0f64..2.0, 0.05f64..1.0, 0.1f64..1.0), 1..=3).prop_map(|parts| {
            let total: f64 = parts.iter().map(|p| p.3).sum();
            let mut comps: Vec<(Component, f64)> = parts
                .iter()
                .map(|&(gauss, m, s, w)| {
                    let c = if gauss { Component::gaussian(m, s) } else { Component::uniform(m - s, m + s) };
                    (c, w / total)
                })
                .collect();
            let sum: f64 = comps.iter().map(|c| c.1).sum();
            comps[0].1 += 1.0 - sum;
            MixtureModel::new(comps).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn antisymmetry(a in arb_model(), b in arb_model()) {
            let ab = c_p_analytic(&a, &b, TOL).unwrap().value;
            let ba = c_p_analytic(&b, &a, TOL).unwrap().value;
            prop_assert!((ab + ba - 1.0).abs() <= 2.0 * TOL);
            let r = sign_regions(&a, &b);
            if !r.is_null() {
                let ab = c_d_analytic(&a, &b, TOL).unwrap().value;
                let ba = c_d_analytic(&b, &a, TOL).unwrap().value;
                prop_assert!((ab + ba - 1.0).abs() <= 1e-6);
            }
        }

        #[test]
        fn inversion_and_invariance(a in arb_model(), b in arb_model(), shift in -3.0f64..3.0, scale in 0.2f64..5.0) {
            let neg = AffineTransform::negation();
            let moved = AffineTransform::new(scale, shift).unwrap();
            let cp = c_p_analytic(&a, &b, TOL).unwrap().value;
            let cd = c_d_analytic(&a, &b, TOL).unwrap().value;
            let (na, nb) = (a.transform(neg).unwrap(), b.transform(neg).unwrap());
            prop_assert!((c_p_analytic(&na, &nb, TOL).unwrap().value - (1.0 - cp)).abs() <= 2.0 * TOL);
            prop_assert!((c_d_analytic(&na, &nb, TOL).unwrap().value - (1.0 - cd)).abs() <= 1e-6);
            let (ma, mb) = (a.transform(moved).unwrap(), b.transform(moved).unwrap());
            prop_assert!((c_p_analytic(&ma, &mb, TOL).unwrap().value - cp).abs() <= 2.0 * TOL);
            prop_assert!((c_d_analytic(&ma, &mb, TOL).unwrap().value - cd).abs() <= 1e-6);
        }

        #[test]
        fn implication_chain(a in arb_model(), b in arb_model()) {
            let cp = c_p_analytic(&a, &b, TOL).unwrap().value;
            let cd = c_d_analytic(&a, &b, TOL).unwrap().value;
            if (cd - 1.0).abs() <= TOL {
                prop_assert!(cp > 0.5);
            }
            if (cp - 1.0).abs() <= TOL {
                prop_assert!((cd - 1.0).abs() <= TOL);
            }
            if classify(&a, &b, 400, CDF_EQUALITY_BAND).unwrap() == DominanceVerdict::ADominates {
                prop_assert!((cd - 1.0).abs() <= 1e-6, "{cd}");
            }
        }

        #[test]
        fn ranges(a in arb_model(), b in arb_model()) {
            for m in MeasureId::ALL {
                let v = reference_measure(&a, &b, m, TOL).unwrap();
                match m {
                    MeasureId::CP | MeasureId::CD | MeasureId::Tv => prop_assert!((0.0..=1.0).contains(&v.value)),
                    MeasureId::CI => prop_assert!((0.0..=0.5).contains(&v.value)),
                    MeasureId::Kl | MeasureId::Js | MeasureId::Hellinger | MeasureId::Wasserstein => {
                        prop_assert!(v.value >= 0.0)
                    }
                    MeasureId::SignedWasserstein => {}
                }
            }
        }
    }
}
