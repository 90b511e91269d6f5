//! Randomized checks of the eight dominance-measure properties.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, reference_measure, DominanceVerdict, MeasureId, CDF_EQUALITY_BAND, DEFAULT_TOL};
use crate::analytic::{AffineTransform, Component, MixtureModel, MixtureSpec};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

pub const PROPERTY_COUNT: u8 = 8;

/// Parameters for one property's randomized trials.
///
/// `tau`, `rho`, `lambda`, `lambda1` and `lambda2` fix the first trial; later
/// trials draw their own parameters from the seeded stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyTrialConfig {
    pub property_id: u8,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub tau: f64,
    pub rho: f64,
    pub lambda: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Default for PropertyTrialConfig {
    fn default() -> Self {
        Self {
            property_id: 1,
            trials: 50,
            seed: 0,
            tolerance: 1e-4,
            tau: 0.1,
            rho: 0.3,
            lambda: 2.0,
            lambda1: 1.2,
            lambda2: 0.5,
        }
    }
}

impl PropertyTrialConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(1..=PROPERTY_COUNT).contains(&self.property_id) {
            return bad("property_id must be in 1..=8");
        }
        if self.trials < 10 {
            return bad("at least 10 trials required");
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return bad("tolerance must be positive");
        }
        let unit = 0.0..1.0;
        if !unit.contains(&self.tau) || self.tau == 0.0 || !unit.contains(&self.rho) || self.rho == 0.0 {
            return bad("tau and rho must lie strictly inside (0, 1)");
        }
        if self.lambda1.is_nan()
            || self.lambda1 <= 0.0
            || !self.lambda.is_finite()
            || self.lambda == 0.0
            || !self.lambda2.is_finite()
        {
            return bad("lambda must be nonzero and lambda1 positive");
        }
        Ok(())
    }
}

/// Inputs and values of the first failing trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub description: String,
    pub models: Vec<(String, MixtureSpec)>,
    pub values: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: u8,
    pub passed: bool,
    pub trials: usize,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub measure: MeasureId,
    pub outcomes: Vec<PropertyOutcome>,
    /// Reference-table pattern for the measure, if it has a row.
    pub expected: Option<Vec<bool>>,
    pub matches_expectation: Option<bool>,
}

impl PropertyReport {
    pub fn passed(&self) -> Vec<bool> {
        self.outcomes.iter().map(|o| o.passed).collect()
    }
}

/// Which properties each measure is known to satisfy (properties 1 through 8).
pub fn table_expectation(measure: MeasureId) -> Option<[bool; 8]> {
    const T: bool = true;
    const F: bool = false;
    Some(match measure {
        MeasureId::Kl | MeasureId::Js => [F, F, F, T, T, T, F, T],
        MeasureId::Tv | MeasureId::Hellinger => [F, F, F, T, T, T, T, T],
        MeasureId::Wasserstein => [F, F, F, T, T, F, F, F],
        MeasureId::CP => [F, T, T, T, T, T, T, T],
        MeasureId::CD => [T, T, T, T, T, T, F, T],
        MeasureId::SignedWasserstein | MeasureId::CI => return None,
    })
}

/// Runs properties 1..=8 with `cfg`'s trial count, seed, tolerance and parameters.
pub fn run_property_suite(measure: MeasureId, cfg: &PropertyTrialConfig) -> Result<PropertyReport> {
    let outcomes = (1..=PROPERTY_COUNT)
        .map(|p| run_property(measure, &PropertyTrialConfig { property_id: p, ..*cfg }))
        .collect::<Result<Vec<_>>>()?;
    let expected = table_expectation(measure).map(|e| e.to_vec());
    let matches_expectation = expected.as_ref().map(|e| e.iter().zip(&outcomes).all(|(x, o)| *x == o.passed));
    Ok(PropertyReport { measure, outcomes, expected, matches_expectation })
}

/// Runs `cfg.trials` seeded trials of one property; the witness is the
/// lowest-indexed failing trial, independent of execution order.
pub fn run_property(measure: MeasureId, cfg: &PropertyTrialConfig) -> Result<PropertyOutcome> {
    cfg.validate()?;
    let failures: Vec<Witness> = (0..cfg.trials)
        .into_par_iter()
        .filter_map(|t| {
            let mut rng = stream_rng(cfg.seed, ((cfg.property_id as u64) << 32) | t as u64);
            let trial = Trial::build(cfg, t, &mut rng);
            trial.check(measure, cfg.tolerance).err().map(|mut w| {
                w.trial = t;
                w
            })
        })
        .collect();
    let witness = failures.into_iter().min_by_key(|w| w.trial);
    Ok(PropertyOutcome { property: cfg.property_id, passed: witness.is_none(), trials: cfg.trials, witness })
}

/// Draws from the property-suite random family: 1–3 Gaussian or uniform
/// components, centers in [−2, 2], scales in [0.05, 1].
pub fn random_model<R: Rng + ?Sized>(rng: &mut R) -> MixtureModel {
    let k = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut parts: Vec<(Component, f64)> = raw
        .iter()
        .map(|w| {
            let center = rng.random_range(-2.0..2.0);
            let scale = rng.random_range(0.05..1.0);
            let c = if rng.random_bool(0.5) {
                Component::gaussian(center, scale)
            } else {
                Component::uniform(center - scale, center + scale)
            };
            (c, w / total)
        })
        .collect();
    let head: f64 = parts[1..].iter().map(|p| p.1).sum();
    parts[0].1 = 1.0 - head;
    MixtureModel::new(parts).expect("random family is valid")
}

fn unit_model<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> MixtureModel {
    let c = if rng.random_bool(0.5) {
        Component::uniform(lo, hi)
    } else {
        Component::Beta { alpha: rng.random_range(0.5..5.0), beta: rng.random_range(0.5..5.0), lo, hi }
    };
    MixtureModel::single(c).expect("valid")
}

fn shift(m: &MixtureModel, by: f64) -> MixtureModel {
    m.transform(AffineTransform::new(1.0, by).expect("finite shift")).expect("valid")
}

/// Same law, components listed in reverse order.
fn relisted(m: &MixtureModel) -> MixtureModel {
    MixtureModel::new(m.components().iter().rev().map(|wc| (wc.component, wc.weight)).collect()).expect("valid")
}

enum Check {
    /// `value(a, b)` must equal `target` (1 or 0).
    Equals { a: MixtureModel, b: MixtureModel, target: f64 },
    /// `value(a, b)` must lie strictly inside (0, 1).
    Inside { a: MixtureModel, b: MixtureModel },
    /// `value(a, b) + value(c, d)` must equal 1.
    SumToOne { ab: (MixtureModel, MixtureModel), cd: (MixtureModel, MixtureModel) },
    /// `value(a, b)` must equal `value(c, d)`.
    Same { ab: (MixtureModel, MixtureModel), cd: (MixtureModel, MixtureModel) },
    /// `|value(a, b) − value(c, d)| ≤ bound`.
    Within { ab: (MixtureModel, MixtureModel), cd: (MixtureModel, MixtureModel), bound: f64 },
}

struct Trial {
    description: String,
    check: Check,
}

fn eval(measure: MeasureId, a: &MixtureModel, b: &MixtureModel) -> f64 {
    match reference_measure(a, b, measure, DEFAULT_TOL) {
        Ok(v) => v.value,
        Err(Error::NumericFailure { best_estimate, .. }) => best_estimate,
        Err(_) => f64::NAN,
    }
}

/// Equality that also accepts two infinities of the same sign.
fn close(x: f64, y: f64, tol: f64) -> bool {
    if x.is_infinite() || y.is_infinite() {
        return x == y;
    }
    (x - y).abs() <= tol
}

impl Trial {
    fn build(cfg: &PropertyTrialConfig, t: usize, rng: &mut ChaCha8Rng) -> Self {
        let first = t == 0;
        match cfg.property_id {
            1 => Self::bounds(t, rng),
            2 => {
                let (a, b) = (random_model(rng), random_model(rng));
                Trial {
                    description: "C(A,B) + C(B,A) = 1".into(),
                    check: Check::SumToOne { ab: (a.clone(), b.clone()), cd: (b, a) },
                }
            }
            3 => {
                let (a, b) = (random_model(rng), random_model(rng));
                let neg = AffineTransform::negation();
                let (na, nb) = (a.transform(neg).expect("valid"), b.transform(neg).expect("valid"));
                Trial {
                    description: "C(−A,−B) = 1 − C(A,B)".into(),
                    check: Check::SumToOne { ab: (na, nb), cd: (a, b) },
                }
            }
            4 => {
                let a = random_model(rng);
                let b = relisted(&a);
                Trial {
                    description: "A = B ⇒ C(A,B) = C(B,A)".into(),
                    check: Check::Same { ab: (a.clone(), b.clone()), cd: (b, a) },
                }
            }
            5 => {
                let (a, b) = (random_model(rng), random_model(rng));
                let lambda = if first { cfg.lambda } else { rng.random_range(-3.0..3.0) };
                let m = AffineTransform::new(1.0, lambda).expect("finite");
                Trial {
                    description: format!("C(A+λ,B+λ) = C(A,B), λ = {lambda}"),
                    check: Check::Same {
                        ab: (a.transform(m).expect("valid"), b.transform(m).expect("valid")),
                        cd: (a, b),
                    },
                }
            }
            6 => {
                let (a, b) = (random_model(rng), random_model(rng));
                let lambda = if first { cfg.lambda.abs() } else { rng.random_range(0.2..5.0) };
                let m = AffineTransform::new(lambda, 0.0).expect("positive");
                Trial {
                    description: format!("C(λA,λB) = C(A,B), λ = {lambda}"),
                    check: Check::Same {
                        ab: (a.transform(m).expect("valid"), b.transform(m).expect("valid")),
                        cd: (a, b),
                    },
                }
            }
            7 => Self::mixture_portion(cfg, t, rng),
            _ => Self::partial_move(cfg, t, rng),
        }
    }

    /// Dominating, dominated and crossing constructions in turn.
    fn bounds(t: usize, rng: &mut ChaCha8Rng) -> Self {
        match t % 3 {
            0 => {
                let (a, b) = if t == 0 {
                    (MixtureModel::gaussian(0.0, 1.0).unwrap(), MixtureModel::gaussian(1.0, 1.0).unwrap())
                } else {
                    let a = random_model(rng);
                    let by = rng.random_range(0.2..2.0);
                    let b = shift(&a, by);
                    (a, b)
                };
                Trial { description: "A ≻ B ⇒ C(A,B) = 1".into(), check: Check::Equals { a, b, target: 1.0 } }
            }
            1 => {
                let b = random_model(rng);
                let a = shift(&b, rng.random_range(0.2..2.0));
                Trial { description: "B ≻ A ⇒ C(A,B) = 0".into(), check: Check::Equals { a, b, target: 0.0 } }
            }
            _ => {
                // Stretching about the median makes the CDFs cross there.
                let a = random_model(rng);
                let median = a.quantile(0.5);
                let k = rng.random_range(1.5..3.0);
                let b = a.transform(AffineTransform::new(k, median * (1.0 - k)).unwrap()).expect("valid");
                Trial { description: "A ≶ B ⇒ C(A,B) ∈ (0,1)".into(), check: Check::Inside { a, b } }
            }
        }
    }

    /// `|C(A, M(B1, B2)) − C(A, B1)| ≤ τ` over three families: the uniform
    /// counterexample family, unconstrained triples, and `B2 = A` with `B1` far away.
    fn mixture_portion(cfg: &PropertyTrialConfig, t: usize, rng: &mut ChaCha8Rng) -> Self {
        let tau = if t == 0 { cfg.tau } else { rng.random_range(0.05..0.45) };
        let (a, b1, b2, family) = match t % 3 {
            0 => {
                let depth = if t == 0 { 0.5 } else { rng.random_range(0.1..1.0) };
                let a = MixtureModel::uniform(0.0, 1.0).unwrap();
                let b1 = MixtureModel::uniform(tau, 1.0).unwrap();
                let b2 = MixtureModel::uniform(-depth, 0.0).unwrap();
                if t == 0 {
                    (a, b1, b2, "uniform counterexample")
                } else {
                    let m = AffineTransform::new(rng.random_range(0.2..5.0), rng.random_range(-3.0..3.0)).unwrap();
                    let tr = |x: MixtureModel| x.transform(m).expect("valid");
                    (tr(a), tr(b1), tr(b2), "uniform counterexample")
                }
            }
            1 => (random_model(rng), random_model(rng), random_model(rng), "random triple"),
            _ => {
                let a = random_model(rng);
                let b1 = shift(&a, rng.random_range(6.0..10.0));
                (a.clone(), b1, a, "B2 = A, B1 far")
            }
        };
        let b = MixtureModel::mix(&[(&b1, 1.0 - tau), (&b2, tau)]).expect("valid");
        Trial {
            description: format!("|C(A,B) − C(A,B1)| ≤ τ, τ = {tau} ({family})"),
            check: Check::Within { ab: (a.clone(), b), cd: (a, b1), bound: tau },
        }
    }

    /// Moving a mixture part whose support stays clear of `A` leaves `C` unchanged.
    fn partial_move(cfg: &PropertyTrialConfig, t: usize, rng: &mut ChaCha8Rng) -> Self {
        let (rho, l1, l2) = if t == 0 {
            (cfg.rho, cfg.lambda1, cfg.lambda2)
        } else {
            (rng.random_range(0.05..0.95), rng.random_range(0.5..1.5), rng.random_range(0.0..1.0))
        };
        let a = unit_model(rng, 0.0, 1.0);
        let b1 = random_model(rng);
        let b2 = unit_model(rng, 3.0, 4.0);
        let moved = b2.transform(AffineTransform::new(l1, l2).expect("valid")).expect("valid");
        let b = MixtureModel::mix(&[(&b1, 1.0 - rho), (&b2, rho)]).expect("valid");
        let b_moved = MixtureModel::mix(&[(&b1, 1.0 - rho), (&moved, rho)]).expect("valid");
        Trial {
            description: format!("C(A, M(B1,B2)) = C(A, M(B1, λ1·B2 + λ2)), ρ = {rho}, λ1 = {l1}, λ2 = {l2}"),
            check: Check::Same { ab: (a.clone(), b), cd: (a, b_moved) },
        }
    }

    fn check(&self, measure: MeasureId, tol: f64) -> std::result::Result<(), Witness> {
        let v = |a: &MixtureModel, b: &MixtureModel| eval(measure, a, b);
        let witness = |models: Vec<(&str, &MixtureModel)>, values: Vec<(&str, f64)>| Witness {
            trial: 0,
            description: self.description.clone(),
            models: models.into_iter().map(|(k, m)| (k.to_string(), m.to_spec())).collect(),
            values: values.into_iter().map(|(k, x)| (k.to_string(), x)).collect(),
        };
        match &self.check {
            Check::Equals { a, b, target } => {
                let x = v(a, b);
                if close(x, *target, tol) {
                    return Ok(());
                }
                Err(witness(vec![("A", a), ("B", b)], vec![("C(A,B)", x), ("expected", *target)]))
            }
            Check::Inside { a, b } => {
                let x = v(a, b);
                let crossing = classify(a, b, 400, CDF_EQUALITY_BAND).ok() == Some(DominanceVerdict::Cross);
                if crossing && x > tol && x < 1.0 - tol {
                    return Ok(());
                }
                Err(witness(vec![("A", a), ("B", b)], vec![("C(A,B)", x)]))
            }
            Check::SumToOne { ab, cd } => {
                let (x, y) = (v(&ab.0, &ab.1), v(&cd.0, &cd.1));
                if close(x, 1.0 - y, tol) {
                    return Ok(());
                }
                Err(witness(
                    vec![("A", &ab.0), ("B", &ab.1), ("C", &cd.0), ("D", &cd.1)],
                    vec![("C(A,B)", x), ("C(C,D)", y)],
                ))
            }
            Check::Same { ab, cd } => {
                let (x, y) = (v(&ab.0, &ab.1), v(&cd.0, &cd.1));
                if close(x, y, tol) {
                    return Ok(());
                }
                Err(witness(
                    vec![("A", &ab.0), ("B", &ab.1), ("C", &cd.0), ("D", &cd.1)],
                    vec![("C(A,B)", x), ("C(C,D)", y)],
                ))
            }
            Check::Within { ab, cd, bound } => {
                let (x, y) = (v(&ab.0, &ab.1), v(&cd.0, &cd.1));
                let ok = if x.is_infinite() || y.is_infinite() { x == y } else { (x - y).abs() <= bound + tol };
                if ok {
                    return Ok(());
                }
                Err(witness(
                    vec![("A", &ab.0), ("B", &ab.1), ("B1", &cd.1)],
                    vec![("C(A,B)", x), ("C(A,B1)", y), ("tau", *bound)],
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(property_id: u8) -> PropertyTrialConfig {
        PropertyTrialConfig { property_id, trials: 12, ..Default::default() }
    }

    #[test]
    fn c_d_satisfies_bounds() {
        assert!(run_property(MeasureId::CD, &cfg(1)).unwrap().passed);
    }

    #[test]
    fn c_p_fails_bounds_on_gaussian_shift() {
        let out = run_property(MeasureId::CP, &cfg(1)).unwrap();
        assert!(!out.passed);
        let w = out.witness.unwrap();
        assert_eq!(w.trial, 0);
        assert!((w.values[0].1 - 0.760_249_938_906_523).abs() < 1e-6);
    }

    #[test]
    fn mixture_portion_splits_c_p_and_c_d() {
        assert!(run_property(MeasureId::CP, &cfg(7)).unwrap().passed);
        let out = run_property(MeasureId::CD, &cfg(7)).unwrap();
        assert!(!out.passed);
        let w = out.witness.unwrap();
        assert_eq!(w.trial, 0);
        assert!(w.values[0].1.abs() < 1e-6 && (w.values[1].1 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_reports() {
        let a = run_property(MeasureId::Wasserstein, &cfg(6)).unwrap();
        let b = run_property(MeasureId::Wasserstein, &cfg(6)).unwrap();
        assert_eq!(a, b);
        assert!(!a.passed);
    }

    #[test]
    fn config_validation() {
        assert!(run_property(MeasureId::CP, &PropertyTrialConfig { trials: 5, ..cfg(1) }).is_err());
        assert!(run_property(MeasureId::CP, &PropertyTrialConfig { tau: 1.0, ..cfg(1) }).is_err());
        assert!(run_property(MeasureId::CP, &PropertyTrialConfig { property_id: 9, ..cfg(1) }).is_err());
    }

    #[test]
    fn close_handles_infinities() {
        assert!(close(f64::INFINITY, f64::INFINITY, 1e-4));
        assert!(!close(f64::INFINITY, 1.0, 1e-4));
        assert!(!close(f64::NAN, f64::NAN, 1e-4));
    }

    #[test]
    fn report_serializes() {
        let r = run_property_suite(MeasureId::Wasserstein, &PropertyTrialConfig { trials: 10, ..Default::default() })
            .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"measure\":\"wasserstein\""));
        assert_eq!(r.matches_expectation, Some(true));
    }
}
