//! The quartic symbol A, its convexity regimes, and the exact sum-of-squares
//! identities behind the sharp constant k.
//!
//! Everything in this module is closed-form polynomial algebra. The
//! identities are exact over the reals, so tests hold them to rounding error
//! relative to [`identity_scale`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vec2::{ComplexVec2, RealVec2};

/// Coefficients (alpha, beta, gamma) of the quartic symbol
/// `A(xi) = alpha xi1^4 + 2 beta xi1^2 xi2^2 + gamma xi2^4`.
///
/// Constructed only through [`Coefficients::new`], which enforces uniform
/// ellipticity: alpha > 0, gamma > 0 and Q = beta / sqrt(alpha gamma) > -1.
#[derive(Debug, Clone, Copy)]
pub struct Coefficients {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl Coefficients {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let elliptic = alpha.is_finite()
            && beta.is_finite()
            && gamma.is_finite()
            && alpha > 0.0
            && gamma > 0.0
            && beta / (alpha * gamma).sqrt() > -1.0;
        if elliptic {
            Ok(Self { alpha, beta, gamma })
        } else {
            Err(Error::NonElliptic { alpha, beta, gamma })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The normalized coupling Q = beta / sqrt(alpha gamma).
    pub fn q(&self) -> f64 {
        self.beta / (self.alpha * self.gamma).sqrt()
    }

    /// A constant c with A(xi) >= c |xi|^4.
    ///
    /// From 2 xi1^2 xi2^2 <= xi1^4 + xi2^4 one gets
    /// c = min(1, (1+Q)/2) * min(alpha, gamma). Quadrature tail bounds
    /// rely on it.
    pub fn ellipticity_constant(&self) -> f64 {
        1.0f64.min(0.5 * (1.0 + self.q())) * self.alpha.min(self.gamma)
    }
}

/// The three open convexity branches of the coupling Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// -1 < Q < 0: the quartic root of A is not convex, cross term negative.
    Subconvex,
    /// 0 <= Q <= 3: A^(1/4) is convex.
    StronglyConvex,
    /// Q > 3: strong positive coupling, again non-convex quartic root.
    Superconvex,
}

/// Couplings where the contributing saddle set bifurcates from two points to
/// four. Both belong to the closed strongly convex interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bifurcation {
    QZero,
    QThree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub branch: Branch,
    pub on_boundary: Option<Bifurcation>,
}

/// Branch classification as a pure function of Q. The boundary values Q = 0
/// and Q = 3 classify as strongly convex with the boundary marker set.
pub fn classify(q: f64) -> Regime {
    if q < 0.0 {
        Regime {
            branch: Branch::Subconvex,
            on_boundary: None,
        }
    } else if q == 0.0 {
        Regime {
            branch: Branch::StronglyConvex,
            on_boundary: Some(Bifurcation::QZero),
        }
    } else if q < 3.0 {
        Regime {
            branch: Branch::StronglyConvex,
            on_boundary: None,
        }
    } else if q == 3.0 {
        Regime {
            branch: Branch::StronglyConvex,
            on_boundary: Some(Bifurcation::QThree),
        }
    } else {
        Regime {
            branch: Branch::Superconvex,
            on_boundary: None,
        }
    }
}

/// Sharp lower-bound constant k(Q) with Re A(xi + i eta) >= -k A(eta).
///
/// Continuous across the branch boundaries: both adjacent formulas give 8 at
/// Q = 0 and at Q = 3.
pub fn sharp_k(q: f64) -> f64 {
    if q < 0.0 {
        8.0 * (1.0 - q) / ((1.0 + q) * (1.0 + q))
    } else if q <= 3.0 {
        8.0
    } else {
        q * q - 1.0
    }
}

/// Sharp Gaussian constant sigma = (3/4) (1/(4k))^(1/3).
pub fn sharp_sigma(k: f64) -> f64 {
    0.75 * (0.25 / k).cbrt()
}

#[derive(Debug, Clone, Copy)]
pub struct ConvexityData {
    pub q: f64,
    pub regime: Regime,
    pub k: f64,
    pub sigma: f64,
}

pub fn convexity_data(c: &Coefficients) -> ConvexityData {
    let q = c.q();
    let k = sharp_k(q);
    ConvexityData {
        q,
        regime: classify(q),
        k,
        sigma: sharp_sigma(k),
    }
}

/// A(xi) over the real plane.
pub fn eval_symbol_real(c: &Coefficients, xi: RealVec2) -> f64 {
    let (x1, x2) = (xi[0], xi[1]);
    let (s1, s2) = (x1 * x1, x2 * x2);
    c.alpha * s1 * s1 + 2.0 * c.beta * s1 * s2 + c.gamma * s2 * s2
}

/// A(z) over C^2, the same polynomial with complex arithmetic.
pub fn eval_symbol_complex(c: &Coefficients, z: ComplexVec2) -> Complex64 {
    let (s1, s2) = (z[0] * z[0], z[1] * z[1]);
    s1 * s1 * c.alpha + s1 * s2 * (2.0 * c.beta) + s2 * s2 * c.gamma
}

/// The explicit ten-term expansion of Re A(xi + i eta).
///
/// Agrees with the real part of [`eval_symbol_complex`] to machine precision;
/// kept separate because the decomposition identities are stated against it.
pub fn real_part_expansion(c: &Coefficients, xi: RealVec2, eta: RealVec2) -> f64 {
    let (x1, x2) = (xi[0], xi[1]);
    let (h1, h2) = (eta[0], eta[1]);
    let ta = x1.powi(4) - 6.0 * x1 * x1 * h1 * h1 + h1.powi(4);
    let tb = x1 * x1 * x2 * x2 - x1 * x1 * h2 * h2 - x2 * x2 * h1 * h1 - 4.0 * x1 * x2 * h1 * h2
        + h1 * h1 * h2 * h2;
    let tc = x2.powi(4) - 6.0 * x2 * x2 * h2 * h2 + h2.powi(4);
    c.alpha * ta + 2.0 * c.beta * tb + c.gamma * tc
}

/// One term `coefficient * base^2` of a sum-of-squares certificate.
#[derive(Debug, Clone, Copy)]
pub struct SquareTerm {
    pub coefficient: f64,
    pub base: f64,
}

impl SquareTerm {
    pub fn value(&self) -> f64 {
        self.coefficient * self.base * self.base
    }
}

/// Certificate that Re A(xi + i eta) + k A(eta) is a weighted sum of squares
/// with nonnegative weights in the regime where the identity applies.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Re A(xi + i eta) + k A(eta).
    pub lhs: f64,
    pub terms: Vec<SquareTerm>,
}

impl Decomposition {
    /// Sum of the square terms, in their fixed order.
    pub fn reconstruct(&self) -> f64 {
        self.terms.iter().map(SquareTerm::value).sum()
    }

    pub fn residual(&self) -> f64 {
        (self.lhs - self.reconstruct()).abs()
    }
}

// The three exact identities. Each list of terms sums to
// Re A(xi + i eta) + k(Q) A(eta); the weights are nonnegative exactly on the
// branch's Q interval.

fn terms_subconvex(c: &Coefficients, xi: RealVec2, eta: RealVec2) -> Vec<SquareTerm> {
    let q = c.q();
    let (x1, x2, h1, h2) = (xi[0], xi[1], eta[0], eta[1]);
    let (sa, sg) = (c.alpha.sqrt(), c.gamma.sqrt());
    let sag = (c.alpha * c.gamma).sqrt();
    // cc = (3 - Q)/(1 + Q) is the eta-weight inside the first two squares.
    let cc = (3.0 - q) / (1.0 + q);
    vec![
        SquareTerm {
            coefficient: (q + 1.0) * c.alpha,
            base: x1 * x1 - cc * h1 * h1,
        },
        SquareTerm {
            coefficient: (q + 1.0) * c.gamma,
            base: x2 * x2 - cc * h2 * h2,
        },
        SquareTerm {
            coefficient: -q,
            base: sa * x1 * x1 - sg * x2 * x2,
        },
        SquareTerm {
            coefficient: -2.0 * q,
            base: sa * x1 * h1 + sg * x2 * h2,
        },
        SquareTerm {
            coefficient: -2.0 * q * sag,
            base: x1 * h2 + x2 * h1,
        },
        SquareTerm {
            coefficient: -q * cc * cc,
            base: sa * h1 * h1 - sg * h2 * h2,
        },
    ]
}

fn terms_strongly_convex(c: &Coefficients, xi: RealVec2, eta: RealVec2) -> Vec<SquareTerm> {
    let q = c.q();
    let (x1, x2, h1, h2) = (xi[0], xi[1], eta[0], eta[1]);
    let (sa, sg) = (c.alpha.sqrt(), c.gamma.sqrt());
    let sag = (c.alpha * c.gamma).sqrt();
    let b1 = x1 * x1 - 3.0 * h1 * h1;
    let b2 = x2 * x2 - 3.0 * h2 * h2;
    vec![
        SquareTerm {
            coefficient: q / 3.0,
            base: sa * b1 + sg * b2,
        },
        SquareTerm {
            coefficient: 4.0 * q / 3.0 * sag,
            base: x1 * x2 - 3.0 * h1 * h2,
        },
        SquareTerm {
            coefficient: (3.0 - q) / 3.0 * c.alpha,
            base: b1,
        },
        SquareTerm {
            coefficient: (3.0 - q) / 3.0 * c.gamma,
            base: b2,
        },
    ]
}

fn terms_superconvex(c: &Coefficients, xi: RealVec2, eta: RealVec2) -> Vec<SquareTerm> {
    let q = c.q();
    let (x1, x2, h1, h2) = (xi[0], xi[1], eta[0], eta[1]);
    let (sa, sg) = (c.alpha.sqrt(), c.gamma.sqrt());
    let sag = (c.alpha * c.gamma).sqrt();
    vec![
        SquareTerm {
            coefficient: 2.0 * (q - 3.0),
            base: sa * x1 * h1 - sg * x2 * h2,
        },
        SquareTerm {
            coefficient: 1.0,
            base: sa * (x1 * x1 - q * h1 * h1) + sg * (x2 * x2 - q * h2 * h2),
        },
        SquareTerm {
            coefficient: 2.0 * (q - 1.0) * sag,
            base: x1 * x2 - (q + 3.0) / (q - 1.0) * h1 * h2,
        },
        SquareTerm {
            coefficient: 2.0 * (q - 3.0) * (q + 1.0) * (q * q + 3.0) / (q - 1.0) * sag,
            base: h1 * h2,
        },
    ]
}

fn branch_applies(branch: Branch, q: f64) -> bool {
    match branch {
        Branch::Subconvex => q > -1.0 && q <= 0.0,
        Branch::StronglyConvex => (0.0..=3.0).contains(&q),
        Branch::Superconvex => q >= 3.0,
    }
}

/// Sum-of-squares certificate in the regime-appropriate branch.
pub fn sos_decomposition(c: &Coefficients, xi: RealVec2, eta: RealVec2) -> Decomposition {
    let data = convexity_data(c);
    let terms = match data.regime.branch {
        Branch::Subconvex => terms_subconvex(c, xi, eta),
        Branch::StronglyConvex => terms_strongly_convex(c, xi, eta),
        Branch::Superconvex => terms_superconvex(c, xi, eta),
    };
    let lhs = real_part_expansion(c, xi, eta) + data.k * eval_symbol_real(c, eta);
    Decomposition { lhs, terms }
}

/// Like [`sos_decomposition`] but with the branch chosen by the caller. At
/// the boundary couplings Q = 0 and Q = 3 both adjacent branches apply and
/// produce the same value.
pub fn sos_decomposition_in(
    c: &Coefficients,
    branch: Branch,
    xi: RealVec2,
    eta: RealVec2,
) -> Result<Decomposition> {
    let q = c.q();
    if !branch_applies(branch, q) {
        return Err(Error::Unsupported(format!(
            "branch {branch:?} does not apply at Q = {q}"
        )));
    }
    let terms = match branch {
        Branch::Subconvex => terms_subconvex(c, xi, eta),
        Branch::StronglyConvex => terms_strongly_convex(c, xi, eta),
        Branch::Superconvex => terms_superconvex(c, xi, eta),
    };
    let lhs = real_part_expansion(c, xi, eta) + sharp_k(q) * eval_symbol_real(c, eta);
    Ok(Decomposition { lhs, terms })
}

/// Six-component vector feeding the sesquilinear form; trailing components
/// are zero where the regime's formula prescribes fewer than six.
pub type FormVector = [f64; 6];

pub fn complexify(p: &FormVector) -> [Complex64; 6] {
    p.map(|v| Complex64::new(v, 0.0))
}

fn p_vector_branch(c: &Coefficients, branch: Branch, xi: RealVec2, eta: RealVec2) -> FormVector {
    let q = c.q();
    let (x1, x2, h1, h2) = (xi[0], xi[1], eta[0], eta[1]);
    let (sa, sg) = (c.alpha.sqrt(), c.gamma.sqrt());
    let q4 = (c.alpha * c.gamma).powf(0.25);
    match branch {
        Branch::Subconvex => {
            let cc = (3.0 - q) / (1.0 + q);
            [
                sa * (x1 * x1 - cc * h1 * h1),
                sg * (x2 * x2 - cc * h2 * h2),
                sa * x1 * x1 - sg * x2 * x2,
                sa * x1 * h1 + sg * x2 * h2,
                q4 * (x1 * h2 + x2 * h1),
                sa * h1 * h1 - sg * h2 * h2,
            ]
        }
        Branch::StronglyConvex => [
            sa * (x1 * x1 - 3.0 * h1 * h1),
            sg * (x2 * x2 - 3.0 * h2 * h2),
            q4 * (x1 * x2 - 3.0 * h1 * h2),
            0.0,
            0.0,
            0.0,
        ],
        Branch::Superconvex => [
            sa * x1 * h1 - sg * x2 * h2,
            sa * (x1 * x1 - q * h1 * h1) + sg * (x2 * x2 - q * h2 * h2),
            q4 * (x1 * x2 - (q + 3.0) / (q - 1.0) * h1 * h2),
            q4 * h1 * h2,
            0.0,
            0.0,
        ],
    }
}

/// The regime-dispatched vector p(xi, eta) with
/// `Re A(xi + i eta) + k A(eta) = form(p, p)`.
pub fn p_vector(c: &Coefficients, xi: RealVec2, eta: RealVec2) -> FormVector {
    p_vector_branch(c, classify(c.q()).branch, xi, eta)
}

/// Branch-explicit variant for boundary cross-checks.
pub fn p_vector_in(
    c: &Coefficients,
    branch: Branch,
    xi: RealVec2,
    eta: RealVec2,
) -> Result<FormVector> {
    let q = c.q();
    if !branch_applies(branch, q) {
        return Err(Error::Unsupported(format!(
            "branch {branch:?} does not apply at Q = {q}"
        )));
    }
    Ok(p_vector_branch(c, branch, xi, eta))
}

fn form_branch(
    c: &Coefficients,
    branch: Branch,
    p: &[Complex64; 6],
    q_vec: &[Complex64; 6],
) -> Complex64 {
    let q = c.q();
    let pair = |i: usize| p[i] * q_vec[i].conj();
    match branch {
        Branch::Subconvex => {
            let cc = (3.0 - q) / (1.0 + q);
            (pair(0) + pair(1)) * (q + 1.0)
                - pair(2) * q
                - (pair(3) + pair(4)) * (2.0 * q)
                - pair(5) * (q * cc * cc)
        }
        Branch::StronglyConvex => {
            let cross = (p[0] + p[1]) * (q_vec[0] + q_vec[1]).conj();
            (pair(0) + pair(1)) * ((3.0 - q) / 3.0) + cross * (q / 3.0) + pair(2) * (4.0 * q / 3.0)
        }
        Branch::Superconvex => {
            pair(0) * (2.0 * (q - 3.0))
                + pair(1)
                + pair(2) * (2.0 * (q - 1.0))
                + pair(3) * (2.0 * (q - 3.0) * (q + 1.0) * (q * q + 3.0) / (q - 1.0))
        }
    }
}

/// The sesquilinear form associated with the sum-of-squares identity.
///
/// Hermitian with nonnegative diagonal: `form(p, q) = conj(form(q, p))` and
/// `form(p, p) >= 0` for every complex p in the regime's validity interval.
pub fn sesquilinear_form(c: &Coefficients, p: &[Complex64; 6], q: &[Complex64; 6]) -> Complex64 {
    form_branch(c, classify(c.q()).branch, p, q)
}

/// Branch-explicit variant for boundary cross-checks.
pub fn sesquilinear_form_in(
    c: &Coefficients,
    branch: Branch,
    p: &[Complex64; 6],
    q: &[Complex64; 6],
) -> Result<Complex64> {
    let qq = c.q();
    if !branch_applies(branch, qq) {
        return Err(Error::Unsupported(format!(
            "branch {branch:?} does not apply at Q = {qq}"
        )));
    }
    Ok(form_branch(c, branch, p, q))
}

/// Residual |(Re A(xi + i eta) + k A(eta)) - form(p, p)| of the identity that
/// ties the quadratic form to the p-vector. Exact algebra, so the residual is
/// rounding noise relative to [`identity_scale`].
pub fn check_form_identity(c: &Coefficients, xi: RealVec2, eta: RealVec2) -> f64 {
    let k = sharp_k(c.q());
    let lhs = real_part_expansion(c, xi, eta) + k * eval_symbol_real(c, eta);
    let p = complexify(&p_vector(c, xi, eta));
    let g = sesquilinear_form(c, &p, &p);
    (lhs - g.re).abs() + g.im.abs()
}

/// Branch-explicit variant of [`check_form_identity`].
pub fn check_form_identity_in(
    c: &Coefficients,
    branch: Branch,
    xi: RealVec2,
    eta: RealVec2,
) -> Result<f64> {
    let k = sharp_k(c.q());
    let lhs = real_part_expansion(c, xi, eta) + k * eval_symbol_real(c, eta);
    let p = complexify(&p_vector_in(c, branch, xi, eta)?);
    let g = sesquilinear_form_in(c, branch, &p, &p)?;
    Ok((lhs - g.re).abs() + g.im.abs())
}

/// Magnitude against which identity residuals are judged:
/// max(|lhs|, k A(eta), 1).
pub fn identity_scale(c: &Coefficients, eta: RealVec2, lhs: f64) -> f64 {
    let k = sharp_k(c.q());
    lhs.abs().max(k * eval_symbol_real(c, eta)).max(1.0)
}
