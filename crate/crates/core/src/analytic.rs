//! Analytic continuous random variables as finite mixtures of parametric components.

use std::f64::consts::{PI, SQRT_2};

use rand::Rng;
use rand_distr::{Beta as BetaDist, Distribution, LogNormal as LogNormalDist, Normal};
use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::sample::SampleSet;

/// Standard-normal quantile at 1e−12; used to truncate unbounded tails.
const TAIL_Z: f64 = 7.034_483_825_301_131;
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

fn ln_normal_pdf(z: f64) -> f64 {
    -0.5 * z * z - 0.5 * (2.0 * PI).ln()
}

/// One parametric building block of a [`MixtureModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component {
    Gaussian {
        mean: f64,
        sd: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Beta(alpha, beta) stretched onto `[lo, hi]`.
    Beta {
        alpha: f64,
        beta: f64,
        lo: f64,
        hi: f64,
    },
    /// `shift + exp(mu + sigma·Z)`, or `shift − exp(mu + sigma·Z)` when `reflected`.
    LogNormal {
        mu: f64,
        sigma: f64,
        shift: f64,
        reflected: bool,
    },
}

impl Component {
    pub fn gaussian(mean: f64, sd: f64) -> Self {
        Component::Gaussian { mean, sd }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        Component::Uniform { lo, hi }
    }

    /// Standard beta on `[0, 1]`.
    pub fn beta(alpha: f64, beta: f64) -> Self {
        Component::Beta { alpha, beta, lo: 0.0, hi: 1.0 }
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Self {
        Component::LogNormal { mu, sigma, shift: 0.0, reflected: false }
    }

    pub fn kind(&self) -> ComponentKind {
        match self {
            Component::Gaussian { .. } => ComponentKind::Gaussian,
            Component::Uniform { .. } => ComponentKind::Uniform,
            Component::Beta { .. } => ComponentKind::Beta,
            Component::LogNormal { .. } => ComponentKind::Lognormal,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let ok = match *self {
            Component::Gaussian { mean, sd } => finite(&[mean, sd]) && sd > 0.0,
            Component::Uniform { lo, hi } => finite(&[lo, hi]) && lo < hi,
            Component::Beta { alpha, beta, lo, hi } => {
                finite(&[alpha, beta, lo, hi]) && alpha > 0.0 && beta > 0.0 && lo < hi
            }
            Component::LogNormal { mu, sigma, shift, .. } => finite(&[mu, sigma, shift]) && sigma > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!("invalid parameters for component {self:?}")))
        }
    }

    /// Natural log of the density; `−∞` outside the support.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        match *self {
            Component::Gaussian { mean, sd } => ln_normal_pdf((x - mean) / sd) - sd.ln(),
            Component::Uniform { lo, hi } => {
                if x >= lo && x <= hi {
                    -(hi - lo).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Component::Beta { alpha, beta, lo, hi } => {
                let width = hi - lo;
                let u = (x - lo) / width;
                if !(u > 0.0 && u < 1.0) {
                    return f64::NEG_INFINITY;
                }
                (alpha - 1.0) * u.ln() + (beta - 1.0) * (-u).ln_1p() - ln_beta(alpha, beta) - width.ln()
            }
            Component::LogNormal { mu, sigma, shift, reflected } => {
                let y = if reflected { shift - x } else { x - shift };
                if y <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let ly = y.ln();
                ln_normal_pdf((ly - mu) / sigma) - sigma.ln() - ly
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Component::Gaussian { mean, sd } => normal_cdf((x - mean) / sd),
            Component::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Component::Beta { alpha, beta, lo, hi } => {
                let u = (x - lo) / (hi - lo);
                if u <= 0.0 {
                    0.0
                } else if u >= 1.0 {
                    1.0
                } else {
                    beta_reg(alpha, beta, u)
                }
            }
            Component::LogNormal { mu, sigma, shift, reflected } => {
                if reflected {
                    let y = shift - x;
                    if y <= 0.0 {
                        1.0
                    } else {
                        normal_cdf(-(y.ln() - mu) / sigma)
                    }
                } else {
                    let y = x - shift;
                    if y <= 0.0 {
                        0.0
                    } else {
                        normal_cdf((y.ln() - mu) / sigma)
                    }
                }
            }
        }
    }

    /// Closed support; infinite ends for unbounded kinds.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Component::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Component::Uniform { lo, hi } | Component::Beta { lo, hi, .. } => (lo, hi),
            Component::LogNormal { shift, reflected: false, .. } => (shift, f64::INFINITY),
            Component::LogNormal { shift, reflected: true, .. } => (f64::NEG_INFINITY, shift),
        }
    }

    /// Finite range holding all but 1e−12 of the mass in each unbounded tail.
    pub fn truncated_range(&self) -> (f64, f64) {
        match *self {
            Component::Gaussian { mean, sd } => (mean - TAIL_Z * sd, mean + TAIL_Z * sd),
            Component::Uniform { lo, hi } | Component::Beta { lo, hi, .. } => (lo, hi),
            Component::LogNormal { mu, sigma, shift, reflected } => {
                let near = (mu - TAIL_Z * sigma).exp();
                let far = (mu + TAIL_Z * sigma).exp();
                if reflected {
                    (shift - far, shift - near)
                } else {
                    (shift + near, shift + far)
                }
            }
        }
    }

    /// Points where integrands built from this component change character.
    pub fn breakpoints(&self) -> Vec<f64> {
        const Z: [f64; 11] = [-7.0, -5.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 5.0, 7.0];
        match *self {
            Component::Gaussian { mean, sd } => Z.iter().map(|z| mean + z * sd).collect(),
            Component::Uniform { lo, hi } => vec![lo, hi],
            Component::Beta { lo, hi, .. } => {
                [0.0, 0.02, 0.1, 0.25, 0.5, 0.75, 0.9, 0.98, 1.0].iter().map(|u| lo + u * (hi - lo)).collect()
            }
            Component::LogNormal { mu, sigma, shift, reflected } => {
                let mut pts: Vec<f64> = Z
                    .iter()
                    .map(|z| {
                        let y = (mu + z * sigma).exp();
                        if reflected {
                            shift - y
                        } else {
                            shift + y
                        }
                    })
                    .collect();
                pts.push(shift);
                pts
            }
        }
    }

    fn transform(&self, t: AffineTransform) -> Self {
        let AffineTransform { scale, shift: offset } = t;
        match *self {
            Component::Gaussian { mean, sd } => {
                Component::Gaussian { mean: scale * mean + offset, sd: scale.abs() * sd }
            }
            Component::Uniform { lo, hi } => {
                let (p, q) = (scale * lo + offset, scale * hi + offset);
                Component::Uniform { lo: p.min(q), hi: p.max(q) }
            }
            Component::Beta { alpha, beta, lo, hi } => {
                let (p, q) = (scale * lo + offset, scale * hi + offset);
                if scale > 0.0 {
                    Component::Beta { alpha, beta, lo: p, hi: q }
                } else {
                    Component::Beta { alpha: beta, beta: alpha, lo: q, hi: p }
                }
            }
            Component::LogNormal { mu, sigma, shift, reflected } => Component::LogNormal {
                mu: mu + scale.abs().ln(),
                sigma,
                shift: scale * shift + offset,
                reflected: reflected ^ (scale < 0.0),
            },
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Component::Gaussian { mean, sd } => Normal::new(mean, sd).expect("validated").sample(rng),
            Component::Uniform { lo, hi } => rng.random_range(lo..hi),
            Component::Beta { alpha, beta, lo, hi } => {
                lo + (hi - lo) * BetaDist::new(alpha, beta).expect("validated").sample(rng)
            }
            Component::LogNormal { mu, sigma, shift, reflected } => {
                let y = LogNormalDist::new(mu, sigma).expect("validated").sample(rng);
                if reflected {
                    shift - y
                } else {
                    shift + y
                }
            }
        }
    }

    /// Parameter vector in the mixture-spec file layout.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            Component::Gaussian { mean, sd } => vec![mean, sd],
            Component::Uniform { lo, hi } => vec![lo, hi],
            Component::Beta { alpha, beta, lo, hi } => {
                if lo == 0.0 && hi == 1.0 {
                    vec![alpha, beta]
                } else {
                    vec![alpha, beta, lo, hi]
                }
            }
            Component::LogNormal { mu, sigma, shift, reflected } => match (shift == 0.0, reflected) {
                (true, false) => vec![mu, sigma],
                (false, false) => vec![mu, sigma, shift],
                (_, true) => vec![mu, sigma, shift, -1.0],
            },
        }
    }

    pub fn from_params(kind: ComponentKind, p: &[f64]) -> Result<Self> {
        let bad = || Error::Spec(format!("{kind:?} takes {} parameters, got {}", kind.arity(), p.len()));
        let c = match (kind, p) {
            (ComponentKind::Gaussian, &[mean, sd]) => Component::Gaussian { mean, sd },
            (ComponentKind::Uniform, &[lo, hi]) => Component::Uniform { lo, hi },
            (ComponentKind::Beta, &[alpha, beta]) => Component::Beta { alpha, beta, lo: 0.0, hi: 1.0 },
            (ComponentKind::Beta, &[alpha, beta, lo, hi]) => Component::Beta { alpha, beta, lo, hi },
            (ComponentKind::Lognormal, &[mu, sigma]) => {
                Component::LogNormal { mu, sigma, shift: 0.0, reflected: false }
            }
            (ComponentKind::Lognormal, &[mu, sigma, shift]) => {
                Component::LogNormal { mu, sigma, shift, reflected: false }
            }
            (ComponentKind::Lognormal, &[mu, sigma, shift, direction]) => {
                if direction != 1.0 && direction != -1.0 {
                    return Err(Error::Spec("lognormal direction must be 1 or -1".into()));
                }
                Component::LogNormal { mu, sigma, shift, reflected: direction < 0.0 }
            }
            _ => return Err(bad()),
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Gaussian,
    Uniform,
    Beta,
    Lognormal,
}

impl ComponentKind {
    fn arity(self) -> &'static str {
        match self {
            ComponentKind::Gaussian | ComponentKind::Uniform => "2",
            ComponentKind::Beta => "2 or 4",
            ComponentKind::Lognormal => "2 to 4",
        }
    }
}

/// `x ↦ scale·x + shift` with a nonzero scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTransform {
    pub scale: f64,
    pub shift: f64,
}

impl AffineTransform {
    pub fn new(scale: f64, shift: f64) -> Result<Self> {
        if scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::InvalidTransform);
        }
        Ok(Self { scale, shift })
    }

    pub fn translation(shift: f64) -> Result<Self> {
        Self::new(1.0, shift)
    }

    pub fn negation() -> Self {
        Self { scale: -1.0, shift: 0.0 }
    }

    pub fn inverse(&self) -> Self {
        Self { scale: 1.0 / self.scale, shift: -self.shift / self.scale }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedComponent {
    pub component: Component,
    pub weight: f64,
}

/// A continuous random variable whose density is a weighted sum of components.
///
/// Immutable after construction; all evaluation methods are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel {
    components: Vec<WeightedComponent>,
    support: (f64, f64),
}

impl MixtureModel {
    pub fn new(parts: Vec<(Component, f64)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidModel("a mixture needs at least one component".into()));
        }
        let mut total = 0.0;
        for (c, w) in &parts {
            c.validate()?;
            if !(w.is_finite() && *w > 0.0 && *w <= 1.0) {
                return Err(Error::InvalidModel(format!("weight {w} outside (0, 1]")));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidModel(format!("weights sum to {total}, expected 1")));
        }
        let components: Vec<WeightedComponent> =
            parts.into_iter().map(|(component, weight)| WeightedComponent { component, weight }).collect();
        let support = components.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), wc| {
            let (a, b) = wc.component.support();
            (lo.min(a), hi.max(b))
        });
        Ok(Self { components, support })
    }

    pub fn single(component: Component) -> Result<Self> {
        Self::new(vec![(component, 1.0)])
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        Self::single(Component::gaussian(mean, sd))
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::single(Component::uniform(lo, hi))
    }

    /// Mixture of mixtures: `Σ weight_i · model_i`, flattened.
    pub fn mix(parts: &[(&MixtureModel, f64)]) -> Result<Self> {
        let flat =
            parts.iter().flat_map(|(m, w)| m.components.iter().map(move |wc| (wc.component, wc.weight * w))).collect();
        Self::new(flat)
    }

    pub fn components(&self) -> &[WeightedComponent] {
        &self.components
    }

    /// Hull of the component supports (may be infinite).
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.components.iter().map(|wc| wc.weight * wc.component.pdf(x)).sum()
    }

    /// Log density via log-sum-exp, so far tails do not underflow to zero.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let terms: Vec<f64> = self.components.iter().map(|wc| wc.weight.ln() + wc.component.ln_pdf(x)).collect();
        let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return max;
        }
        max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let v: f64 = self.components.iter().map(|wc| wc.weight * wc.component.cdf(x)).sum();
        v.clamp(0.0, 1.0)
    }

    /// Finite integration range: exact ends for bounded components, 1e−12 tail
    /// quantiles for unbounded ones.
    pub fn truncated_range(&self) -> (f64, f64) {
        self.components.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), wc| {
            let (a, b) = wc.component.truncated_range();
            (lo.min(a), hi.max(b))
        })
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.components.iter().flat_map(|wc| wc.component.breakpoints()).collect()
    }

    /// Inverse CDF by bisection on the truncated range.
    pub fn quantile(&self, p: f64) -> f64 {
        let (mut lo, mut hi) = self.truncated_range();
        if p <= 0.0 {
            return lo;
        }
        if p >= 1.0 {
            return hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn mean(&self) -> f64 {
        self.components
            .iter()
            .map(|wc| {
                let m = match wc.component {
                    Component::Gaussian { mean, .. } => mean,
                    Component::Uniform { lo, hi } => 0.5 * (lo + hi),
                    Component::Beta { alpha, beta, lo, hi } => lo + (hi - lo) * alpha / (alpha + beta),
                    Component::LogNormal { mu, sigma, shift, reflected } => {
                        let m = (mu + 0.5 * sigma * sigma).exp();
                        if reflected {
                            shift - m
                        } else {
                            shift + m
                        }
                    }
                };
                wc.weight * m
            })
            .sum()
    }

    /// `n` i.i.d. draws; deterministic for a fixed seed.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleSet> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample size must be positive".into()));
        }
        let mut rng = stream_rng(seed, 0);
        SampleSet::new(self.draw(n, &mut rng))
    }

    pub(crate) fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.draw_one(rng)).collect()
    }

    pub(crate) fn draw_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let last = self.components.len() - 1;
        for (i, wc) in self.components.iter().enumerate() {
            acc += wc.weight;
            if u < acc || i == last {
                return wc.component.sample(rng);
            }
        }
        unreachable!()
    }

    /// Law of `scale·X + shift`.
    pub fn transform(&self, t: AffineTransform) -> Result<Self> {
        AffineTransform::new(t.scale, t.shift)?;
        Self::new(self.components.iter().map(|wc| (wc.component.transform(t), wc.weight)).collect())
    }

    pub fn to_spec(&self) -> MixtureSpec {
        MixtureSpec {
            components: self
                .components
                .iter()
                .map(|wc| ComponentSpec { kind: wc.component.kind(), params: wc.component.params(), weight: wc.weight })
                .collect(),
        }
    }

    pub fn from_spec(spec: &MixtureSpec) -> Result<Self> {
        let parts = spec
            .components
            .iter()
            .map(|c| Ok((Component::from_params(c.kind, &c.params)?, c.weight)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MixtureSpec = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("mixture spec serializes")
    }
}

/// On-disk mixture specification:
/// `{"components":[{"kind":"gaussian","params":[mu,sigma],"weight":w}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub kind: ComponentKind,
    pub params: Vec<f64>,
    pub weight: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn prop2_b() -> MixtureModel {
        MixtureModel::new(vec![(Component::uniform(0.1, 1.0), 0.9), (Component::uniform(-0.5, 0.0), 0.1)]).unwrap()
    }

    fn zoo() -> Vec<MixtureModel> {
        vec![
            MixtureModel::uniform(0.0, 1.0).unwrap(),
            MixtureModel::gaussian(0.0, 1.0).unwrap(),
            prop2_b(),
            MixtureModel::single(Component::beta(2.0, 5.0)).unwrap(),
            MixtureModel::single(Component::beta(0.7, 1.6)).unwrap(),
            MixtureModel::single(Component::lognormal(0.0, 0.5)).unwrap(),
            MixtureModel::new(vec![
                (Component::gaussian(0.211325, 0.002), 0.5),
                (Component::lognormal(-1.0, 0.3), 0.3),
                (Component::Beta { alpha: 3.0, beta: 2.0, lo: -1.0, hi: 0.5 }, 0.2),
            ])
            .unwrap(),
        ]
    }

    #[test]
    fn pdf_examples() {
        assert_eq!(MixtureModel::uniform(0.0, 1.0).unwrap().pdf(0.5), 1.0);
        let m =
            MixtureModel::new(vec![(Component::uniform(0.0, 1.0), 0.5), (Component::uniform(1.0, 2.0), 0.5)]).unwrap();
        assert!((m.pdf(1.5) - 0.5).abs() < 1e-15);
        let g = MixtureModel::gaussian(0.0, 1.0).unwrap();
        assert!((g.pdf(0.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert_eq!(MixtureModel::uniform(0.0, 1.0).unwrap().pdf(1.5), 0.0);
    }

    #[test]
    fn cdf_examples() {
        assert!((MixtureModel::uniform(0.0, 1.0).unwrap().cdf(0.25) - 0.25).abs() < 1e-15);
        assert!((MixtureModel::gaussian(0.0, 1.0).unwrap().cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((prop2_b().cdf(0.05) - 0.1).abs() < 1e-15);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-13);
        assert!((normal_cdf(-5.0) - 2.866_515_718_791_933e-7).abs() < 1e-20);
    }

    #[test]
    fn sample_examples() {
        let u = MixtureModel::uniform(0.0, 1.0).unwrap();
        let s = u.sample(5, 7).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.values().iter().all(|v| *v > 0.0 && *v < 1.0));
        assert_eq!(s, u.sample(5, 7).unwrap());
        assert_ne!(s, u.sample(5, 8).unwrap());

        let g = MixtureModel::gaussian(0.0, 1.0).unwrap().sample(100_000, 1).unwrap();
        let mean = g.values().iter().sum::<f64>() / 1e5;
        assert!(mean.abs() < 3.0 / (1e5f64).sqrt(), "mean {mean}");
        assert!(mean.abs() < 0.02);
        assert!(MixtureModel::gaussian(0.0, 1.0).unwrap().sample(0, 1).is_err());
    }

    #[test]
    fn sample_mean_matches_model_mean() {
        for m in zoo() {
            let n = 200_000;
            let s = m.sample(n, 3).unwrap();
            let mean = s.values().iter().sum::<f64>() / n as f64;
            let var = s.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            assert!((mean - m.mean()).abs() < 5.0 * (var / n as f64).sqrt(), "{m:?}");
        }
    }

    #[test]
    fn transform_examples() {
        let u = MixtureModel::uniform(0.0, 1.0).unwrap();
        assert_eq!(
            u.transform(AffineTransform::new(1.0, 2.0).unwrap()).unwrap(),
            MixtureModel::uniform(2.0, 3.0).unwrap()
        );
        assert_eq!(u.transform(AffineTransform::negation()).unwrap(), MixtureModel::uniform(-1.0, 0.0).unwrap());
        let g = MixtureModel::gaussian(1.0, 2.0).unwrap();
        assert_eq!(
            g.transform(AffineTransform::new(3.0, -1.0).unwrap()).unwrap(),
            MixtureModel::gaussian(2.0, 6.0).unwrap()
        );
        assert_eq!(AffineTransform::new(0.0, 1.0), Err(Error::InvalidTransform));
        assert!(u.transform(AffineTransform { scale: 0.0, shift: 0.0 }).is_err());
    }

    #[test]
    fn transform_moves_cdf() {
        for m in zoo() {
            for t in [AffineTransform::new(2.5, -1.0).unwrap(), AffineTransform::new(-0.7, 0.3).unwrap()] {
                let mt = m.transform(t).unwrap();
                for i in 0..50 {
                    let x = m.quantile((i as f64 + 0.5) / 50.0);
                    let y = t.scale * x + t.shift;
                    let expected = if t.scale > 0.0 { m.cdf(x) } else { 1.0 - m.cdf(x) };
                    assert!((mt.cdf(y) - expected).abs() < 1e-10, "{m:?} {t:?} x={x}");
                }
            }
        }
    }

    #[test]
    fn transform_round_trip() {
        for m in zoo() {
            for (a, b) in [(3.0, 1.0), (-2.0, 0.5), (0.25, -4.0)] {
                let t = AffineTransform::new(a, b).unwrap();
                let back = m.transform(t).unwrap().transform(t.inverse()).unwrap();
                let (lo, hi) = m.truncated_range();
                for i in 0..100 {
                    let x = lo + (hi - lo) * i as f64 / 99.0;
                    assert!((back.cdf(x) - m.cdf(x)).abs() < 1e-10, "{m:?} {t:?}");
                }
            }
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        for m in zoo() {
            let (lo, hi) = m.truncated_range();
            let r = integrate(|x| m.pdf(x), lo, hi, &m.breakpoints(), 1e-11).unwrap();
            assert!((r.value - 1.0).abs() < 1e-8, "{m:?}: {}", r.value);
        }
    }

    #[test]
    fn cdf_is_antiderivative_and_monotone() {
        let h = 1e-5;
        for m in zoo() {
            let mut prev = 0.0;
            for i in 1..200 {
                let p = i as f64 / 200.0;
                let x = m.quantile(p);
                let c = m.cdf(x);
                assert!(c >= prev);
                prev = c;
                // Skip kinks: points within h of a support endpoint.
                if m.breakpoints().iter().any(|b| (b - x).abs() < 2.0 * h)
                    && m.components().iter().any(|wc| matches!(wc.component, Component::Uniform { .. }))
                {
                    continue;
                }
                let fd = (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h);
                let tol = 1e-4 * m.pdf(x).max(1.0);
                assert!((fd - m.pdf(x)).abs() < tol, "{m:?} at {x}: {fd} vs {}", m.pdf(x));
            }
        }
    }

    #[test]
    fn ln_pdf_survives_far_tails() {
        let g = MixtureModel::gaussian(0.0, 0.05).unwrap();
        assert_eq!(g.pdf(10.0), 0.0);
        let l = g.ln_pdf(10.0);
        assert!(l.is_finite() && l < -10_000.0);
        assert_eq!(MixtureModel::uniform(0.0, 1.0).unwrap().ln_pdf(2.0), f64::NEG_INFINITY);
    }

    #[test]
    fn weight_and_parameter_validation() {
        assert!(MixtureModel::new(vec![(Component::uniform(0.0, 1.0), 0.5)]).is_err());
        assert!(MixtureModel::new(vec![(Component::uniform(1.0, 1.0), 1.0)]).is_err());
        assert!(MixtureModel::gaussian(0.0, 0.0).is_err());
        assert!(MixtureModel::single(Component::beta(0.0, 1.0)).is_err());
        assert!(MixtureModel::single(Component::lognormal(0.0, -1.0)).is_err());
        assert!(MixtureModel::new(vec![]).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"components":[{"kind":"gaussian","params":[0.21875,0.002],"weight":0.925},
                                     {"kind":"gaussian","params":[0.04875,0.002],"weight":0.075}]}"#;
        let m = MixtureModel::from_json(text).unwrap();
        assert_eq!(m.components().len(), 2);
        assert_eq!(MixtureModel::from_json(&m.to_json()).unwrap(), m);
        for model in zoo() {
            let t = model.transform(AffineTransform::new(-1.5, 2.0).unwrap()).unwrap();
            assert_eq!(MixtureModel::from_json(&t.to_json()).unwrap(), t);
        }
        let bad_weights = r#"{"components":[{"kind":"uniform","params":[0,1],"weight":0.6}]}"#;
        assert!(matches!(MixtureModel::from_json(bad_weights), Err(Error::InvalidModel(_))));
        let bad_arity = r#"{"components":[{"kind":"gaussian","params":[0],"weight":1}]}"#;
        assert!(matches!(MixtureModel::from_json(bad_arity), Err(Error::Spec(_))));
        let bad_kind = r#"{"components":[{"kind":"cauchy","params":[0,1],"weight":1}]}"#;
        assert!(matches!(MixtureModel::from_json(bad_kind), Err(Error::Spec(_))));
    }

    #[test]
    fn quantile_inverts_cdf() {
        for m in zoo() {
            for p in [1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-6] {
                assert!((m.cdf(m.quantile(p)) - p).abs() < 1e-9);
            }
        }
    }
}
