//! Critical points of the phase phi(z) = i x.z - A(z)/4 in C^2, the
//! steepest-descent estimates they generate, and the contour heights used by
//! the shifted quadrature.
//!
//! Closed forms for the critical points are known on the coordinate axes
//! (coupling Q >= 3) and the diagonals (Q <= 0) for symmetric unit
//! coefficients, and across the whole interior window 0 < Q < 3 for general
//! coefficients via the stationary point q of the real symbol. At the
//! boundary couplings Q = 0 and Q = 3 the contributing set bifurcates from
//! two points to four, and the interference of the extra pair turns the
//! estimate's oscillation factor into 1 + cos, which touches zero.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finsler::solve_q;
use crate::symbol::{Coefficients, eval_symbol_complex, eval_symbol_real, real_part_expansion};
use crate::vec2::{ComplexVec2, RealVec2, scale};

/// phi(z) = i x.z - A(z)/4.
pub fn phi(c: &Coefficients, x: RealVec2, z: ComplexVec2) -> Complex64 {
    let xz = z[0] * x[0] + z[1] * x[1];
    Complex64::new(0.0, 1.0) * xz - eval_symbol_complex(c, z) * 0.25
}

/// grad phi(z) = i x - (1/4) grad A(z).
pub fn grad_phi(c: &Coefficients, x: RealVec2, z: ComplexVec2) -> ComplexVec2 {
    let (z1, z2) = (z[0], z[1]);
    let g1 = z1 * z1 * z1 * c.alpha() + z1 * z2 * z2 * c.beta();
    let g2 = z1 * z1 * z2 * c.beta() + z2 * z2 * z2 * c.gamma();
    [
        Complex64::new(0.0, x[0]) - g1,
        Complex64::new(0.0, x[1]) - g2,
    ]
}

/// Determinant of the Hessian of phi at z.
///
/// phi_zz = -(1/4) Hess A, and for a 2x2 matrix det(-M) = det(M), so this is
/// det of [[3a z1^2 + b z2^2, 2b z1 z2], [2b z1 z2, b z1^2 + 3g z2^2]].
pub fn hessian_det_phi(c: &Coefficients, z: ComplexVec2) -> Complex64 {
    let (s1, s2) = (z[0] * z[0], z[1] * z[1]);
    let h11 = s1 * (3.0 * c.alpha()) + s2 * c.beta();
    let h12 = z[0] * z[1] * (2.0 * c.beta());
    let h22 = s1 * c.beta() + s2 * (3.0 * c.gamma());
    h11 * h22 - h12 * h12
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleKind {
    /// Present throughout the regime; carries the leading exponential order.
    DominantPair,
    /// The extra pair appearing exactly at the bifurcation couplings
    /// Q = 0 and Q = 3, at the same exponential order as the dominant pair.
    BifurcationExtraPair,
}

impl std::fmt::Display for SaddleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SaddleKind::DominantPair => "dominant_pair",
            SaddleKind::BifurcationExtraPair => "bifurcation_extra_pair",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SaddlePoint {
    pub location: ComplexVec2,
    pub phi_value: Complex64,
    pub hessian_det: Complex64,
    pub kind: SaddleKind,
}

/// The two special directions with closed-form saddle sets for symmetric
/// unit coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// x = (1, 0); closed forms require beta >= 3.
    Axis,
    /// x = (1, 1); closed forms require beta <= 0.
    Bisector,
}

fn require_unit_symmetric(c: &Coefficients) -> Result<()> {
    if c.alpha() == 1.0 && c.gamma() == 1.0 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "closed-form saddle data is stated for alpha = gamma = 1, got alpha = {}, gamma = {}",
            c.alpha(),
            c.gamma()
        )))
    }
}

// Both bifurcation couplings share the same extra pair shape: components of
// z*+ equal e^{i pi/6} times a real pattern, phi(z*-) and det(z*-) are the
// conjugates of the plus member, and |det| = 9 with argument 2 pi / 3.

fn axis_extra_pair() -> [SaddlePoint; 2] {
    let half_r3 = 3f64.sqrt() / 2.0;
    let plus = SaddlePoint {
        location: [Complex64::new(half_r3, 0.5), Complex64::new(0.0, 0.0)],
        phi_value: Complex64::new(-3.0 / 8.0, 3.0 * 3f64.sqrt() / 8.0),
        hessian_det: Complex64::from_polar(9.0, 2.0 * PI / 3.0),
        kind: SaddleKind::BifurcationExtraPair,
    };
    let minus = SaddlePoint {
        location: [Complex64::new(-half_r3, 0.5), Complex64::new(0.0, 0.0)],
        phi_value: plus.phi_value.conj(),
        hessian_det: plus.hessian_det.conj(),
        kind: SaddleKind::BifurcationExtraPair,
    };
    [plus, minus]
}

fn bisector_extra_pair() -> [SaddlePoint; 2] {
    let half_r3 = 3f64.sqrt() / 2.0;
    let w = Complex64::new(half_r3, 0.5);
    let plus = SaddlePoint {
        location: [w, w],
        phi_value: Complex64::new(-0.75, 3.0 * 3f64.sqrt() / 4.0),
        hessian_det: Complex64::from_polar(9.0, 2.0 * PI / 3.0),
        kind: SaddleKind::BifurcationExtraPair,
    };
    let minus = SaddlePoint {
        location: [-w.conj(), -w.conj()],
        phi_value: plus.phi_value.conj(),
        hessian_det: plus.hessian_det.conj(),
        kind: SaddleKind::BifurcationExtraPair,
    };
    [plus, minus]
}

/// The set of critical points contributing to the deformed contour for
/// x = (1, 0) (axis, beta >= 3) or x = (1, 1) (bisector, beta <= 0), for
/// symmetric unit coefficients.
///
/// The dominant pair comes first. Exactly at beta = 3 (axis) and beta = 0
/// (bisector) the set has four members, all at the same contour height and
/// the same Re phi.
pub fn saddle_set(c: &Coefficients, direction: Direction) -> Result<Vec<SaddlePoint>> {
    require_unit_symmetric(c)?;
    let beta = c.beta();
    match direction {
        Direction::Axis => {
            if beta < 3.0 {
                return Err(Error::Unsupported(format!(
                    "axis saddle set needs beta >= 3, got beta = {beta}"
                )));
            }
            // z0+- = (i cand, +-sqrt(beta) cand) with cand = (beta^2-1)^(-1/3):
            // then cand^3 (beta^2 - 1) = 1 makes grad phi vanish, and
            // A(z0) = -cand, phi = -(3/4) cand, det = 6 beta cand.
            let cand = (beta * beta - 1.0).powf(-1.0 / 3.0);
            let xi2 = beta.sqrt() * cand;
            let phi_value = Complex64::new(-0.75 * cand, 0.0);
            let hessian_det = Complex64::new(6.0 * beta * cand, 0.0);
            let mut set = vec![
                SaddlePoint {
                    location: [Complex64::new(0.0, cand), Complex64::new(xi2, 0.0)],
                    phi_value,
                    hessian_det,
                    kind: SaddleKind::DominantPair,
                },
                SaddlePoint {
                    location: [Complex64::new(0.0, cand), Complex64::new(-xi2, 0.0)],
                    phi_value,
                    hessian_det,
                    kind: SaddleKind::DominantPair,
                },
            ];
            if beta == 3.0 {
                set.extend(axis_extra_pair());
            }
            Ok(set)
        }
        Direction::Bisector => {
            if beta > 0.0 {
                return Err(Error::Unsupported(format!(
                    "bisector saddle set needs beta <= 0, got beta = {beta}"
                )));
            }
            // Half-height eta_m = (1/2) r^(1/3), r = (1+beta)/(1-beta); the
            // real offset xi_m makes z0+- = (+-xi_m + i eta_m, -+xi_m + i eta_m)
            // critical. Re A(z0) = -2 eta_m and phi = -(3/2) eta_m, both real.
            let ratio = ((1.0 + beta) / (1.0 - beta)).powf(1.0 / 3.0);
            let eta_m = 0.5 * ratio;
            let xi_m = 0.5
                * (3.0 - beta).sqrt()
                * (1.0 + beta).powf(-1.0 / 6.0)
                * (1.0 - beta).powf(-1.0 / 3.0);
            let phi_value = Complex64::new(-0.75 * ratio, 0.0);
            let hessian_det = Complex64::new(
                3.0 * (3.0 - beta) * (1.0 + beta).powf(1.0 / 3.0) * (1.0 - beta).powf(-1.0 / 3.0),
                0.0,
            );
            let mut set = vec![
                SaddlePoint {
                    location: [Complex64::new(xi_m, eta_m), Complex64::new(-xi_m, eta_m)],
                    phi_value,
                    hessian_det,
                    kind: SaddleKind::DominantPair,
                },
                SaddlePoint {
                    location: [Complex64::new(-xi_m, eta_m), Complex64::new(xi_m, eta_m)],
                    phi_value,
                    hessian_det,
                    kind: SaddleKind::DominantPair,
                },
            ];
            if beta == 0.0 {
                set.extend(bisector_extra_pair());
            }
            Ok(set)
        }
    }
}

/// Steepest-descent contribution (2 pi / lambda) det^(-1/2) e^{lambda phi}
/// of one saddle, with the principal square root.
pub fn contribution(sp: &SaddlePoint, lambda: f64) -> Result<Complex64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "contribution needs lambda > 0, got {lambda}"
        )));
    }
    if sp.hessian_det == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput(
            "degenerate saddle: Hessian determinant vanishes".into(),
        ));
    }
    Ok((sp.phi_value * lambda).exp() / sp.hessian_det.sqrt() * (2.0 * PI / lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSpace {
    /// Argument is lambda; envelope e^{-rate lambda}, prefactor lambda^power.
    Lambda,
    /// Argument is t; envelope e^{-rate t^(-1/3)}, prefactor t^power.
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OscillationForm {
    None,
    OnePlusCos,
    Cos,
}

/// Leading-order model amplitude * arg^power * e^{-rate u} * osc(freq u +
/// phase), where u = lambda in Lambda space and u = t^(-1/3) in Time space.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymptoticEstimate {
    pub space: ModelSpace,
    pub exp_rate: f64,
    pub power: f64,
    pub amplitude: f64,
    pub oscillation_freq: f64,
    pub oscillation_phase: f64,
    pub oscillation_form: OscillationForm,
}

impl AsymptoticEstimate {
    fn u(&self, arg: f64) -> f64 {
        match self.space {
            ModelSpace::Lambda => arg,
            ModelSpace::Time => arg.powf(-1.0 / 3.0),
        }
    }

    /// The oscillation factor alone (1 for non-oscillatory regimes).
    pub fn osc_factor(&self, arg: f64) -> f64 {
        let angle = self.oscillation_freq * self.u(arg) + self.oscillation_phase;
        match self.oscillation_form {
            OscillationForm::None => 1.0,
            OscillationForm::OnePlusCos => 1.0 + angle.cos(),
            OscillationForm::Cos => angle.cos(),
        }
    }

    pub fn evaluate(&self, arg: f64) -> f64 {
        self.amplitude
            * arg.powf(self.power)
            * (-self.exp_rate * self.u(arg)).exp()
            * self.osc_factor(arg)
    }

    /// The model with the power and exponential factors stripped:
    /// amplitude times the oscillation factor. Comparing it against
    /// F lambda e^{rate lambda} puts numerics and model on one O(1) scale.
    pub fn scaled(&self, arg: f64) -> f64 {
        self.amplitude * self.osc_factor(arg)
    }
}

/// The same estimate in both integral normalizations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EstimatePair {
    pub f_space: AsymptoticEstimate,
    pub g_space: AsymptoticEstimate,
}

fn lambda_model(
    amplitude: f64,
    exp_rate: f64,
    oscillation_freq: f64,
    oscillation_phase: f64,
    oscillation_form: OscillationForm,
) -> AsymptoticEstimate {
    AsymptoticEstimate {
        space: ModelSpace::Lambda,
        exp_rate,
        power: -1.0,
        amplitude,
        oscillation_freq,
        oscillation_phase,
        oscillation_form,
    }
}

/// Pushes a Lambda-space model through G = (2 pi)^-2 (4t)^{-2/3} F((4t)^{-1/3}):
/// every per-lambda coefficient picks up 4^{-1/3}, the power becomes -1/3,
/// and the amplitude additionally divides by (2 pi)^2.
fn to_time(est: &AsymptoticEstimate) -> AsymptoticEstimate {
    let third_root = 4f64.powf(-1.0 / 3.0);
    AsymptoticEstimate {
        space: ModelSpace::Time,
        exp_rate: est.exp_rate * third_root,
        power: -1.0 / 3.0,
        amplitude: est.amplitude * third_root / (4.0 * PI * PI),
        oscillation_freq: est.oscillation_freq * third_root,
        oscillation_phase: est.oscillation_phase,
        oscillation_form: est.oscillation_form,
    }
}

/// Rescales a model from the unit pattern x-hat to x = s x-hat, using
/// F(lambda, s x-hat) = s^(2/3) F(s^(4/3) lambda, x-hat): per-argument
/// coefficients gain s^(4/3) and the flattened amplitude gains s^(-2/3),
/// identically in both spaces.
fn apply_point_scale(est: &mut AsymptoticEstimate, s: f64) {
    let s43 = s.powf(4.0 / 3.0);
    est.amplitude *= s.powf(-2.0 / 3.0);
    est.exp_rate *= s43;
    est.oscillation_freq *= s43;
}

fn pair_from_lambda(f_space: AsymptoticEstimate, s: f64) -> EstimatePair {
    let mut pair = EstimatePair {
        f_space,
        g_space: to_time(&f_space),
    };
    if s != 1.0 {
        apply_point_scale(&mut pair.f_space, s);
        apply_point_scale(&mut pair.g_space, s);
    }
    pair
}

/// Leading-order estimates at x = s * pattern for the special directions.
///
/// `x` must be one of the exact unit patterns (+-1, 0), (0, +-1) with
/// beta >= 3, or (+-1, +-1) with beta <= 0, for symmetric unit coefficients;
/// the positive scale s carries the magnitude. At the bifurcation couplings
/// the four-point interference gives the 1 + cos form; inside the regimes
/// the estimate is monotone (no oscillation factor).
pub fn special_direction_estimate(c: &Coefficients, x: RealVec2, s: f64) -> Result<EstimatePair> {
    require_unit_symmetric(c)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "scale must be positive, got {s}"
        )));
    }
    let beta = c.beta();
    let axis = (x[0].abs() == 1.0 && x[1] == 0.0) || (x[0] == 0.0 && x[1].abs() == 1.0);
    let bisector = x[0].abs() == 1.0 && x[1].abs() == 1.0;
    let third = 1.0 / 3.0;
    let f_model = if axis {
        if beta < 3.0 {
            return Err(Error::Unsupported(format!(
                "axis estimate needs beta >= 3 (got beta = {beta}); interior couplings go through interior_estimate"
            )));
        }
        if beta == 3.0 {
            lambda_model(
                4.0 * PI / 3.0,
                3.0 / 8.0,
                3.0 * 3f64.sqrt() / 8.0,
                -PI / 3.0,
                OscillationForm::OnePlusCos,
            )
        } else {
            let amp = 4.0 * PI * (6.0 * beta).powf(-0.5) * (beta * beta - 1.0).powf(1.0 / 6.0);
            lambda_model(
                amp,
                0.75 * (beta * beta - 1.0).powf(-third),
                0.0,
                0.0,
                OscillationForm::None,
            )
        }
    } else if bisector {
        if beta > 0.0 {
            return Err(Error::Unsupported(format!(
                "bisector estimate needs beta <= 0 (got beta = {beta}); interior couplings go through interior_estimate"
            )));
        }
        if beta == 0.0 {
            lambda_model(
                4.0 * PI / 3.0,
                0.75,
                3.0 * 3f64.sqrt() / 4.0,
                -PI / 3.0,
                OscillationForm::OnePlusCos,
            )
        } else {
            let amp = 4.0 * PI * (1.0 - beta).powf(1.0 / 6.0)
                / (3f64.sqrt() * (3.0 - beta).sqrt() * (1.0 + beta).powf(1.0 / 6.0));
            lambda_model(
                amp,
                0.75 * ((1.0 + beta) / (1.0 - beta)).powf(third),
                0.0,
                0.0,
                OscillationForm::None,
            )
        }
    } else {
        return Err(Error::InvalidInput(format!(
            "x must be a unit axis or diagonal pattern, got ({}, {})",
            x[0], x[1]
        )));
    };
    Ok(pair_from_lambda(f_model, s))
}

/// Estimate data at a general interior point: 0 < Q < 3, any elliptic
/// coefficients, any x != 0.
#[derive(Debug, Clone, Copy)]
pub struct InteriorEstimate {
    /// Stationary point of the real symbol: (1/4) grad A(q) = x.
    pub q: RealVec2,
    /// A(q) = p*(x)^(4/3); sets the decay rate and oscillation frequency.
    pub symbol_at_q: f64,
    /// h = det((1/4) Hess A(q))^(3/4); the amplitude is 4 pi h^(-2/3).
    pub h: f64,
    pub saddle: SaddlePoint,
    pub estimate: EstimatePair,
}

/// Steepest-descent estimate through the single dominant pair at
/// z*+ = e^{i pi/6} q.
///
/// Euler's identity for the degree-4 symbol gives x.q = A(q), hence
/// phi(z*+) = (3/4) e^{2 pi i/3} A(q) and det phi_zz(z*+) =
/// e^{2 pi i/3} det((1/4) Hess A(q)) with a positive real determinant
/// throughout the window; the argument is checked against 2 pi / 3 as a
/// numerical tripwire.
pub fn interior_estimate(c: &Coefficients, x: RealVec2) -> Result<InteriorEstimate> {
    let q = solve_q(c, x)?;
    let aq = eval_symbol_real(c, q);
    let omega = Complex64::from_polar(1.0, PI / 6.0);
    let location = [omega * q[0], omega * q[1]];
    let hessian_det = hessian_det_phi(c, location);
    let arg_gap = (hessian_det.arg() - 2.0 * PI / 3.0).abs();
    if arg_gap > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "saddle Hessian determinant argument is {:.12}, expected 2 pi / 3",
            hessian_det.arg()
        )));
    }
    let (q1s, q2s) = (q[0] * q[0], q[1] * q[1]);
    let det_real = 3.0
        * (c.alpha() * c.beta() * q1s * q1s
            + (3.0 * c.alpha() * c.gamma() - c.beta() * c.beta()) * q1s * q2s
            + c.beta() * c.gamma() * q2s * q2s);
    let saddle = SaddlePoint {
        location,
        phi_value: Complex64::new(-3.0 / 8.0, 3.0 * 3f64.sqrt() / 8.0) * aq,
        hessian_det,
        kind: SaddleKind::DominantPair,
    };
    let f_model = lambda_model(
        4.0 * PI * det_real.powf(-0.5),
        3.0 / 8.0 * aq,
        3.0 * 3f64.sqrt() / 8.0 * aq,
        -PI / 3.0,
        OscillationForm::Cos,
    );
    Ok(InteriorEstimate {
        q,
        symbol_at_q: aq,
        h: det_real.powf(0.75),
        saddle,
        estimate: pair_from_lambda(f_model, 1.0),
    })
}

/// An estimate routed by regime: through the stationary point q inside
/// 0 < Q < 3, through the special-direction closed forms outside.
#[derive(Debug, Clone)]
pub enum PointEstimate {
    Interior(Box<InteriorEstimate>),
    Special(EstimatePair),
}

impl PointEstimate {
    pub fn pair(&self) -> &EstimatePair {
        match self {
            PointEstimate::Interior(i) => &i.estimate,
            PointEstimate::Special(p) => p,
        }
    }
}

/// Decomposes x into sign pattern and magnitude when it lies on an axis or
/// a diagonal.
fn pattern_of(x: RealVec2) -> Option<(RealVec2, f64)> {
    if x == [0.0, 0.0] {
        None
    } else if x[1] == 0.0 {
        Some(([x[0].signum(), 0.0], x[0].abs()))
    } else if x[0] == 0.0 {
        Some(([0.0, x[1].signum()], x[1].abs()))
    } else if x[0].abs() == x[1].abs() {
        Some(([x[0].signum(), x[1].signum()], x[0].abs()))
    } else {
        None
    }
}

/// Leading-order estimate at an arbitrary point, choosing the applicable
/// construction from the coupling regime.
pub fn estimate_at(c: &Coefficients, x: RealVec2) -> Result<PointEstimate> {
    let q = c.q();
    if q > 0.0 && q < 3.0 {
        return Ok(PointEstimate::Interior(Box::new(interior_estimate(c, x)?)));
    }
    match pattern_of(x) {
        Some((pattern, s)) => Ok(PointEstimate::Special(special_direction_estimate(
            c, pattern, s,
        )?)),
        None => Err(Error::Unsupported(format!(
            "no closed-form estimate at x = ({}, {}) for coupling Q = {q}",
            x[0], x[1]
        ))),
    }
}

/// Contour height for the shifted form of F(lambda, x): the imaginary part
/// of the dominant critical points.
///
/// Interior window 0 < Q < 3: eta0 = q(x)/2 for any coefficients (the saddle
/// sits at e^{i pi/6} q, whose imaginary part is q/2). Outside the window the
/// closed forms cover the special directions for symmetric unit
/// coefficients, scaled cube-root-homogeneously in |x|.
pub fn contour_shift_for(c: &Coefficients, x: RealVec2) -> Result<RealVec2> {
    if x == [0.0, 0.0] {
        return Err(Error::InvalidInput("contour shift needs x != 0".into()));
    }
    let q = c.q();
    if q > 0.0 && q < 3.0 {
        return Ok(scale(0.5, solve_q(c, x)?));
    }
    require_unit_symmetric(c)?;
    let beta = c.beta();
    if q >= 3.0 {
        let cand = (beta * beta - 1.0).powf(-1.0 / 3.0);
        if x[1] == 0.0 {
            return Ok([x[0].signum() * x[0].abs().powf(1.0 / 3.0) * cand, 0.0]);
        }
        if x[0] == 0.0 {
            return Ok([0.0, x[1].signum() * x[1].abs().powf(1.0 / 3.0) * cand]);
        }
        Err(Error::Unsupported(format!(
            "no closed-form contour shift off the axes for Q = {q} >= 3"
        )))
    } else {
        if x[0].abs() == x[1].abs() {
            let eta_m = 0.5 * ((1.0 + beta) / (1.0 - beta)).powf(1.0 / 3.0);
            let m = x[0].abs().powf(1.0 / 3.0) * eta_m;
            return Ok([x[0].signum() * m, x[1].signum() * m]);
        }
        Err(Error::Unsupported(format!(
            "no closed-form contour shift off the diagonals for Q = {q} <= 0"
        )))
    }
}

/// Numerical audit of the pointwise bound behind the contour shift.
#[derive(Debug, Clone, Serialize)]
pub struct LocusReport {
    /// The contour height eta0 at the unit pattern.
    pub shift: RealVec2,
    /// Real parts of the contributing saddles: the predicted zero set of f.
    pub expected_zeros: Vec<RealVec2>,
    /// f evaluated exactly at the predicted zeros.
    pub values_at_zeros: Vec<f64>,
    pub grid_min: f64,
    pub grid_argmin: RealVec2,
    pub argmin_near_expected_zero: bool,
    /// How far f dips below zero anywhere on the grid (0 when it never does).
    pub negative_violation: f64,
}

impl LocusReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.argmin_near_expected_zero
            && self.negative_violation <= tol
            && self.values_at_zeros.iter().all(|v| v.abs() <= tol)
    }
}

/// Checks that f(xi) = Re A(xi + i eta0) + |Re A(z0)| is nonnegative on a
/// 200 x 200 grid and vanishes exactly at the saddle projections.
///
/// This is the pointwise statement that makes the shifted contour optimal:
/// along Im z = eta0 the integrand magnitude never exceeds its value at the
/// saddles. The grid square [-L, L]^2 takes L twice the largest predicted
/// zero coordinate (at least 2).
pub fn equality_locus_check(c: &Coefficients, direction: Direction) -> Result<LocusReport> {
    let set = saddle_set(c, direction)?;
    let shift = [set[0].location[0].im, set[0].location[1].im];
    let floor = -eval_symbol_complex(c, set[0].location).re;
    let expected_zeros: Vec<RealVec2> = set
        .iter()
        .map(|sp| [sp.location[0].re, sp.location[1].re])
        .collect();

    let max_coord = expected_zeros
        .iter()
        .flat_map(|z| z.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let half_side = (2.0 * max_coord).max(2.0);
    const N: usize = 200;
    let step = 2.0 * half_side / (N as f64 - 1.0);

    let f = |xi: RealVec2| real_part_expansion(c, xi, shift) + floor;
    let mut grid_min = f64::INFINITY;
    let mut grid_argmin = [0.0, 0.0];
    for i in 0..N {
        for j in 0..N {
            let xi = [-half_side + i as f64 * step, -half_side + j as f64 * step];
            let v = f(xi);
            if v < grid_min {
                grid_min = v;
                grid_argmin = xi;
            }
        }
    }
    let values_at_zeros: Vec<f64> = expected_zeros.iter().map(|&z| f(z)).collect();
    let argmin_near_expected_zero = expected_zeros.iter().any(|z| {
        let d = ((z[0] - grid_argmin[0]).powi(2) + (z[1] - grid_argmin[1]).powi(2)).sqrt();
        d <= 2.0 * step
    });
    Ok(LocusReport {
        shift,
        expected_zeros,
        values_at_zeros,
        grid_min,
        grid_argmin,
        argmin_near_expected_zero,
        negative_violation: (-grid_min).max(0.0),
    })
}
