//! Tiny fixed-size vector helpers for points of the frequency plane.

use num_complex::Complex64;

/// A point of the real plane (frequency variable xi/eta or space variable x).
pub type RealVec2 = [f64; 2];

/// A point of C^2.
pub type ComplexVec2 = [Complex64; 2];

pub fn dot(a: RealVec2, b: RealVec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm_sq(a: RealVec2) -> f64 {
    dot(a, a)
}

pub fn norm(a: RealVec2) -> f64 {
    norm_sq(a).sqrt()
}

pub fn scale(s: f64, a: RealVec2) -> RealVec2 {
    [s * a[0], s * a[1]]
}

pub fn sub(a: RealVec2, b: RealVec2) -> RealVec2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Unit vector at polar angle `theta`.
pub fn unit(theta: f64) -> RealVec2 {
    [theta.cos(), theta.sin()]
}

/// Combine real and imaginary parts into a point of C^2: `xi + i eta`.
pub fn combine(xi: RealVec2, eta: RealVec2) -> ComplexVec2 {
    [Complex64::new(xi[0], eta[0]), Complex64::new(xi[1], eta[1])]
}
