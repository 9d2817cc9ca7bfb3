//! Spatially varying coefficient fields: uniform convexity constants across
//! a family of symbols, and a numerical audit of the pointwise decay bound.
//!
//! A frozen-coefficient argument controls the variable-coefficient kernel by
//! the worst constant along the field, so the field-level data is the
//! largest sharp k (equivalently the smallest sigma) over the samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finsler::distance_d0;
use crate::quadrature::{QuadratureSpec, green_function};
use crate::saddle::{AsymptoticEstimate, OscillationForm, contour_shift_for, estimate_at};
use crate::symbol::{Branch, Coefficients, classify, convexity_data};
use crate::vec2::{RealVec2, scale};

/// One sampled point of a coefficient field a(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: RealVec2,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// A coefficient field given either analytically or by samples.
#[derive(Debug, Clone)]
pub enum CoefficientField {
    /// alpha = gamma = 1 with beta ramping linearly (inclusive) over n >= 2
    /// samples placed at x = (i/(n-1), 0).
    BetaRamp {
        beta_min: f64,
        beta_max: f64,
        n: usize,
    },
    Grid(Vec<FieldSample>),
}

impl CoefficientField {
    fn samples(&self) -> Result<Vec<FieldSample>> {
        match self {
            CoefficientField::BetaRamp {
                beta_min,
                beta_max,
                n,
            } => {
                if *n < 2 {
                    return Err(Error::InvalidInput(format!(
                        "a ramp needs at least two samples, got {n}"
                    )));
                }
                let last = (*n - 1) as f64;
                Ok((0..*n)
                    .map(|i| {
                        let f = i as f64 / last;
                        FieldSample {
                            x: [f, 0.0],
                            alpha: 1.0,
                            beta: beta_min + f * (beta_max - beta_min),
                            gamma: 1.0,
                        }
                    })
                    .collect())
            }
            CoefficientField::Grid(samples) => Ok(samples.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub subconvex: usize,
    pub strongly_convex: usize,
    pub superconvex: usize,
}

/// Uniform constants for a whole field.
#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    /// Largest sharp Garding constant along the field; any single k that
    /// works everywhere must reach it.
    pub k_star: f64,
    /// Uniform decay rate (3/4)(1/(4 k*))^(1/3), the worst pointwise sigma.
    pub sigma_star: f64,
    pub q_range: (f64, f64),
    pub regime_histogram: Histogram,
}

pub fn analyze_field(field: &CoefficientField) -> Result<FieldReport> {
    let samples = field.samples()?;
    if samples.is_empty() {
        return Err(Error::InvalidInput("field has no samples".into()));
    }
    let mut k_star = f64::NEG_INFINITY;
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    let mut histogram = Histogram::default();
    for (i, s) in samples.iter().enumerate() {
        let c = Coefficients::new(s.alpha, s.beta, s.gamma).map_err(|e| {
            Error::InvalidInput(format!(
                "sample {i} at x = ({}, {}) is not elliptic: {e}",
                s.x[0], s.x[1]
            ))
        })?;
        let data = convexity_data(&c);
        k_star = k_star.max(data.k);
        q_min = q_min.min(data.q);
        q_max = q_max.max(data.q);
        match classify(data.q).branch {
            Branch::Subconvex => histogram.subconvex += 1,
            Branch::StronglyConvex => histogram.strongly_convex += 1,
            Branch::Superconvex => histogram.superconvex += 1,
        }
    }
    Ok(FieldReport {
        k_star,
        sigma_star: crate::symbol::sharp_sigma(k_star),
        q_range: (q_min, q_max),
        regime_histogram: histogram,
    })
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    x1: f64,
    x2: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
}

/// Reads field samples from a CSV file with header x1,x2,alpha,beta,gamma.
pub fn read_field_csv(path: &std::path::Path) -> Result<Vec<FieldSample>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut samples = Vec::new();
    for row in reader.deserialize() {
        let row: CsvRow = row?;
        samples.push(FieldSample {
            x: [row.x1, row.x2],
            alpha: row.alpha,
            beta: row.beta,
            gamma: row.gamma,
        });
    }
    if samples.is_empty() {
        return Err(Error::InvalidInput(format!(
            "field file {} has no samples",
            path.display()
        )));
    }
    Ok(samples)
}

/// Result of fitting the kernel's decay exponent against the predicted one.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateFit {
    /// Slope of ln(|G| t^{1/3}) against -d0^{4/3} t^{-1/3} from two samples.
    pub fitted_rate: f64,
    /// The sharp constant sigma of the symbol.
    pub predicted_rate: f64,
    /// The two times actually evaluated (peak-snapped when oscillatory).
    pub t_used: [f64; 2],
    pub d0: f64,
}

impl RateFit {
    pub fn rel_error(&self) -> f64 {
        (self.fitted_rate - self.predicted_rate).abs() / self.predicted_rate.abs()
    }
}

fn time_model(c: &Coefficients, x: RealVec2) -> Result<AsymptoticEstimate> {
    Ok(estimate_at(c, x)?.pair().g_space)
}

fn green_at(c: &Coefficients, x: RealVec2, t: f64) -> Result<f64> {
    const TOL: f64 = 1e-6;
    // Late times are smooth for the direct grid; early times oscillate and
    // cancel, so ride the saddle contour whenever one is known.
    let lambda = (4.0 * t).powf(-1.0 / 3.0);
    let spec = if lambda > 8.0 {
        match contour_shift_for(c, x) {
            Ok(eta_unit) => {
                QuadratureSpec::for_green_shifted(c, x, t, scale(lambda, eta_unit), TOL)
            }
            Err(Error::Unsupported(_)) => QuadratureSpec::for_green(c, x, t, TOL),
            Err(e) => return Err(e),
        }
    } else {
        QuadratureSpec::for_green(c, x, t, TOL)
    };
    Ok(green_function(c, x, t, &spec)?.value)
}

/// Fits the decay exponent of G(x, t) over the two smallest sweep times and
/// compares it with the sharp rate sigma.
///
/// ln(|G| t^{1/3}) is affine in w = d0^{4/3} t^{-1/3} with slope -sigma at
/// leading order, provided the oscillation factor is held fixed; when the
/// model oscillates, the sample times snap to the nearest cosine peaks
/// (distinct ones) before fitting.
pub fn gaussian_bound_check(c: &Coefficients, x: RealVec2, t_sweep: &[f64]) -> Result<RateFit> {
    let mut times: Vec<f64> = t_sweep
        .iter()
        .copied()
        .filter(|t| t.is_finite() && *t > 0.0)
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    if times.len() < 2 {
        return Err(Error::InvalidInput(
            "rate fit needs at least two distinct positive times".into(),
        ));
    }
    let model = time_model(c, x)?;
    let mut t_used = [times[0], times[1]];
    if model.oscillation_form != OscillationForm::None {
        // Peak n of cos(freq u + phase) sits at u_n = (2 pi n - phase)/freq.
        let peak_index = |t: f64| {
            let u = t.powf(-1.0 / 3.0);
            (((model.oscillation_freq * u + model.oscillation_phase) / (2.0 * std::f64::consts::PI))
                .round() as i64)
                .max(1)
        };
        let mut n_small = peak_index(times[0]);
        let n_large = peak_index(times[1]);
        if n_small == n_large {
            n_small += 1;
        }
        let u_at = |n: i64| {
            (2.0 * std::f64::consts::PI * n as f64 - model.oscillation_phase)
                / model.oscillation_freq
        };
        t_used = [u_at(n_small).powi(-3), u_at(n_large).powi(-3)];
    }
    let d0 = distance_d0(c, x)?;
    let w = [
        d0.powf(4.0 / 3.0) * t_used[0].powf(-1.0 / 3.0),
        d0.powf(4.0 / 3.0) * t_used[1].powf(-1.0 / 3.0),
    ];
    let v0 = (green_at(c, x, t_used[0])?.abs() * t_used[0].powf(1.0 / 3.0)).ln();
    let v1 = (green_at(c, x, t_used[1])?.abs() * t_used[1].powf(1.0 / 3.0)).ln();
    Ok(RateFit {
        fitted_rate: (v0 - v1) / (w[1] - w[0]),
        predicted_rate: convexity_data(c).sigma,
        t_used,
        d0,
    })
}
