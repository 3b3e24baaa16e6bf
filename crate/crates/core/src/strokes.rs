//! Energy-minimizing strokes.
//!
//! For a prescribed net displacement `δp`, the cheapest stroke at leading
//! order is an origin-centered ellipse `ξ(t) = cos(t) u + sin(t) v`,
//! `t ∈ [0, 2π]`, whose dissipated energy is `|ω|` with
//!
//! ```text
//! ω = diag(√(g₁g₂)/(√2 α), √(g₁g₂)/(√2 α), g₁/(√3 γ)) δp
//! ```
//!
//! and `u, v = U Λ^{-1/2} ς₁,₂ / √(2π)` for an orthogonal pair `ς₁, ς₂`
//! orthogonal to `(ω₁, ω₂, −ω₃)` with `|ςᵢ|² = |ω|`, `U = (τᵢ/|τᵢ|)`,
//! `Λ = diag(g₁, g₁, g₂)`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::control::{skew_action, AsymptoticCoefficients};
use crate::error::{Error, Result};
use crate::kinematics::{tau_frame, SwimmerGeometry};

const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Net displacement `(δx, δy, δθ)` requested after one stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementTarget(pub Vector3<f64>);

impl DisplacementTarget {
    pub fn new(dx: f64, dy: f64, dtheta: f64) -> Self {
        Self(Vector3::new(dx, dy, dtheta))
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }
}

/// Elliptic stroke `ξ(t) = cos(t) u + sin(t) v` with period `2π` and the
/// constant angular rate `σ` it induces at leading order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticStroke {
    pub u: Vector3<f64>,
    pub v: Vector3<f64>,
    pub sigma: f64,
}

impl EllipticStroke {
    /// Stroke with `σ = u · M₃ v` taken from the coefficients.
    pub fn new(u: Vector3<f64>, v: Vector3<f64>, coeffs: &AsymptoticCoefficients) -> Self {
        let sigma = rotation_rate(coeffs, &u, &v);
        Self { u, v, sigma }
    }

    pub fn from_axes(u: Vector3<f64>, v: Vector3<f64>, sigma: f64) -> Self {
        Self { u, v, sigma }
    }

    pub fn period(&self) -> f64 {
        2.0 * PI
    }

    pub fn shape_at(&self, t: f64) -> Vector3<f64> {
        let (s, c) = t.sin_cos();
        self.u * c + self.v * s
    }

    pub fn rate_at(&self, t: f64) -> Vector3<f64> {
        let (s, c) = t.sin_cos();
        self.v * c - self.u * s
    }

    /// Same ellipse traversed backwards from the same starting point (`t → −t`).
    pub fn reversed(&self) -> Self {
        Self {
            u: self.u,
            v: -self.v,
            sigma: -self.sigma,
        }
    }

    /// Both semi-axes scaled by `factor`; the induced rate scales quadratically.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            u: self.u * factor,
            v: self.v * factor,
            sigma: self.sigma * factor * factor,
        }
    }

    /// Largest excursion `max_t |ξᵢ(t)| = √(uᵢ² + vᵢ²)` of each arm.
    pub fn amplitudes(&self) -> Vector3<f64> {
        Vector3::from_fn(|i, _| self.u[i].hypot(self.v[i]))
    }

    /// Checks that every arm stays above the overlap bound along the whole loop.
    pub fn check_admissible(&self, geom: &SwimmerGeometry) -> Result<()> {
        let limit = geom.min_arm_length() + geom.margin();
        for (i, amp) in self.amplitudes().iter().enumerate() {
            let min_length = geom.arm_length() - amp;
            if min_length.is_nan() || min_length <= limit {
                return Err(Error::Amplitude {
                    arm: i + 1,
                    min_length,
                    limit,
                });
            }
        }
        Ok(())
    }
}

fn rotation_rate(coeffs: &AsymptoticCoefficients, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.dot(&skew_action(3, coeffs, v).expect("index 3 is valid"))
}

fn check_coefficients(coeffs: &AsymptoticCoefficients) -> Result<()> {
    for (name, value) in [
        ("alpha", coeffs.alpha),
        ("gamma", coeffs.gamma),
        ("g1", coeffs.g1),
        ("g2", coeffs.g2),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stroke construction needs {name} > 0, got {value}"
            )));
        }
    }
    Ok(())
}

/// Scaled target `ω` whose norm is the minimal loop energy.
pub fn omega_vector(coeffs: &AsymptoticCoefficients, target: &DisplacementTarget) -> Result<Vector3<f64>> {
    check_coefficients(coeffs)?;
    let translation = (coeffs.g1 * coeffs.g2).sqrt() / (SQRT2 * coeffs.alpha);
    let rotation = coeffs.g1 / (SQRT3 * coeffs.gamma);
    let dp = target.as_vector();
    Ok(Vector3::new(translation * dp.x, translation * dp.y, rotation * dp.z))
}

/// Orthogonal pair spanning the plane orthogonal to `ω`, both with squared norm `|ω|`.
fn orthogonal_pair(omega: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let norm = omega.norm();
    let dir = omega / norm;
    // first standard basis vector not parallel to ω
    let w = (0..3)
        .map(|i| Vector3::ith(i, 1.0))
        .find(|e| dir.cross(e).norm() > 1e-6)
        .expect("some basis vector is not parallel to a unit vector");
    let s1 = (w - dir * w.dot(&dir)).normalize();
    let s2 = dir.cross(&s1).normalize();
    let scale = norm.sqrt();
    (s1 * scale, s2 * scale)
}

/// Energy-minimizing elliptic stroke producing `target` at leading order.
pub fn optimal_stroke(
    coeffs: &AsymptoticCoefficients,
    target: &DisplacementTarget,
    geom: &SwimmerGeometry,
) -> Result<EllipticStroke> {
    let omega = omega_vector(coeffs, target)?;
    if omega.norm() == 0.0 {
        return Err(Error::DegenerateTarget);
    }
    // M₃ acts as τ₃ × ξ while M₁, M₂ act as ξ × τₖ: mirror the rotation component
    // so that one traversal direction realizes all three components with the right sign
    let mirrored = Vector3::new(omega.x, omega.y, -omega.z);
    let (s1, s2) = orthogonal_pair(&mirrored);
    let lambda_inv_sqrt = Matrix3::from_diagonal(&Vector3::new(
        1.0 / coeffs.g1.sqrt(),
        1.0 / coeffs.g1.sqrt(),
        1.0 / coeffs.g2.sqrt(),
    ));
    let map = tau_frame() * lambda_inv_sqrt / (2.0 * PI).sqrt();
    let mut stroke = EllipticStroke::new(map * s1, map * s2, coeffs);

    // the pair fixes the ellipse; traversal direction picks ±δp
    if realized_displacement(coeffs, &stroke).dot(target.as_vector()) < 0.0 {
        stroke = EllipticStroke::new(stroke.v, stroke.u, coeffs);
    }
    stroke.check_admissible(geom)?;
    Ok(stroke)
}

/// Net displacement `δpₖ = 2π u · Mₖ v` after one loop of the expanded system
/// (symmetric parts and the `F₀` term integrate to zero over a closed loop).
pub fn realized_displacement(coeffs: &AsymptoticCoefficients, stroke: &EllipticStroke) -> Vector3<f64> {
    Vector3::from_fn(|k, _| {
        let action = skew_action(k + 1, coeffs, &stroke.v).expect("index in 1..=3");
        2.0 * PI * stroke.u.dot(&action)
    })
}
