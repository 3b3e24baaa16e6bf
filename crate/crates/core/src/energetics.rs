//! Dissipation along a stroke.
//!
//! The instantaneous power is a quadratic form in the shape rates,
//! `𝒫 = ν G(ξ) ξ̇ · ξ̇`. `G` is reported divided by `ν` so that its entries are
//! dimensionless; multiply by [`SwimmerGeometry::drag`] for physical power.

use std::f64::consts::PI;

use log::warn;
use nalgebra::Matrix3;

use crate::control::{control_matrix_exact, resistance, ForceLaw};
use crate::error::{Error, Result};
use crate::kinematics::{pose_matrix_y, shape_matrix_x, ShapeState, SwimmerGeometry};
use crate::linalg;
use crate::strokes::EllipticStroke;

/// Relative size of the skew part of the raw assembly above which a warning is logged.
pub const SKEW_TOLERANCE: f64 = 1e-10;

/// Unsymmetrized `(𝓧 + 𝓨F)ᵀ K (𝓧 + 𝓨F)` at orientation `theta`, normalized by `ν`.
pub fn assemble_gram(geom: &SwimmerGeometry, shape: &ShapeState, theta: f64) -> Result<Matrix3<f64>> {
    let f = control_matrix_exact(geom, shape, theta)?;
    let k = resistance(geom, shape, theta, ForceLaw::LeadingOrder)?;
    let velocity_map = shape_matrix_x(theta) + pose_matrix_y(geom, shape, theta) * f;
    Ok(velocity_map.transpose() * k * velocity_map)
}

/// Dissipation matrix `G(ξ)`, assembled at `θ = 0` and symmetrized.
pub fn gram_matrix(geom: &SwimmerGeometry, shape: &ShapeState) -> Result<Matrix3<f64>> {
    let raw = assemble_gram(geom, shape, 0.0)?;
    let skew = linalg::skew_part(&raw).norm() / raw.norm();
    if skew > SKEW_TOLERANCE {
        warn!("dissipation assembly has relative skew part {skew:.3e}");
    }
    Ok(linalg::sym_part(&raw))
}

/// `G₀ = G(0)` with its two-parameter structure `κ I + h (𝟙 − I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationForm {
    pub g0: Matrix3<f64>,
    pub kappa: f64,
    pub h: f64,
    /// Double eigenvalue `κ − h` (plane orthogonal to τ₃).
    pub g1: f64,
    /// Simple eigenvalue `κ + 2h` (along τ₃).
    pub g2: f64,
    /// Relative residual of the structure fit.
    pub residual: f64,
}

impl DissipationForm {
    pub fn from_parameters(kappa: f64, h: f64) -> Self {
        let g0 = Matrix3::from_element(h) + Matrix3::identity() * (kappa - h);
        Self {
            g0,
            kappa,
            h,
            g1: kappa - h,
            g2: kappa + 2.0 * h,
            residual: 0.0,
        }
    }

    /// Fits `κ` (mean diagonal) and `h` (mean off-diagonal) to a symmetric matrix.
    pub fn fit(g0: Matrix3<f64>) -> Self {
        let kappa = g0.trace() / 3.0;
        let h = (g0.sum() - g0.trace()) / 6.0;
        let template = Self::from_parameters(kappa, h);
        let residual = (g0 - template.g0).norm() / g0.norm();
        Self {
            g0,
            residual,
            ..template
        }
    }
}

pub fn extract_g0(geom: &SwimmerGeometry) -> Result<DissipationForm> {
    Ok(DissipationForm::fit(gram_matrix(geom, &ShapeState::reference())?))
}

/// Loop energy by quadrature, with the closed form for an ellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopDissipation {
    pub quadrature: f64,
    /// `π (G₀u·u + G₀v·v)`.
    pub closed_form: f64,
}

/// `∫₀^{2π} G₀ ξ̇ · ξ̇ dt` over one period of the stroke (normalized by `ν`).
///
/// Composite trapezoid on `n_steps` nodes; exact for the trigonometric
/// integrand once `n_steps > 4`.
pub fn loop_dissipation(g0: &Matrix3<f64>, stroke: &EllipticStroke, n_steps: usize) -> Result<LoopDissipation> {
    if n_steps < 16 {
        return Err(Error::InvalidParameter(format!(
            "loop quadrature needs at least 16 nodes, got {n_steps}"
        )));
    }
    let dt = 2.0 * PI / n_steps as f64;
    let quadrature = (0..n_steps)
        .map(|k| {
            let rate = stroke.rate_at(k as f64 * dt);
            (g0 * rate).dot(&rate)
        })
        .sum::<f64>()
        * dt;
    let closed_form = PI * ((g0 * stroke.u).dot(&stroke.u) + (g0 * stroke.v).dot(&stroke.v));
    Ok(LoopDissipation {
        quadrature,
        closed_form,
    })
}
