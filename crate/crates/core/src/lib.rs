//! Two-sample comparison through first-order stochastic dominance.
//!
//! The crate computes the probability that one variable takes lower values than
//! another (`C_P`) and the dominance rate (`C_D`), both analytically for mixture
//! models and empirically from samples, builds the quantile random variables and
//! the cumulative difference curve, wraps it in a bootstrap confidence band, and
//! renders the result as a deterministic SVG.

pub mod analytic;
pub mod bootstrap;
pub mod error;
pub mod estimators;
pub mod measures;
pub mod oracle;
pub mod plot;
pub mod quadrature;
pub mod quantile;
pub mod rng;
pub mod sample;

pub use analytic::{AffineTransform, Component, ComponentKind, MixtureModel, MixtureSpec};
pub use bootstrap::{band_bounds, bootstrap_band, BandBounds, ConfidenceBand};
pub use error::{Error, Result};
pub use estimators::{estimate_c_d, estimate_c_d_delta, estimate_c_p, PsiRow, PsiTable};
pub use measures::{
    c_d_analytic, c_p_analytic, classify, dominance_density, reference_measure, DominanceVerdict, MeasureId,
    MeasureValue,
};
pub use plot::{curve_verdict, export_report, render_svg, Estimates, PlotSpec, Report};
pub use quantile::{
    build_quantile_pair, c_d_from_diff, c_p_from_diff, diff_curve, DiffCurve, QuantilePair, Side, SignInterval,
};
pub use sample::SampleSet;
