//! Stokeslet interactions between the balls and the force/velocity relation
//! `u = (𝓘/ν + 𝓛) f`.
//!
//! Only the stokeslet (long-arm) form of the mobility is modelled. Forces and
//! velocities live in the plane of the arms; the full 3×3 stokeslet is kept
//! for reference and tests.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::kinematics::SwimmerGeometry;
use crate::linalg;
use crate::{Matrix6, Vector6};

/// Drag coefficient `ν = 6πμa` of an isolated ball.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DragCoefficient(f64);

impl DragCoefficient {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter(format!(
                "drag coefficient must be positive, got {value}"
            )))
        }
    }

    pub fn of(geom: &SwimmerGeometry) -> Self {
        Self(geom.drag())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `𝓢(x) = (I/|x| + x⊗x/|x|³) / (8πμ)`.
pub fn stokeslet(x: &Vector3<f64>, viscosity: f64) -> Result<Matrix3<f64>> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::StokesletSingularity);
    }
    Ok((Matrix3::identity() / r + x * x.transpose() / (r * r * r)) / (8.0 * PI * viscosity))
}

/// In-plane 2×2 block of [`stokeslet`] for a planar displacement.
pub fn stokeslet_planar(x: &Vector2<f64>, viscosity: f64) -> Result<Matrix2<f64>> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::StokesletSingularity);
    }
    Ok((Matrix2::identity() / r + x * x.transpose() / (r * r * r)) / (8.0 * PI * viscosity))
}

/// Mutual interaction matrix `𝓛`: zero diagonal blocks, `𝓢(bᵢ − bⱼ)` off the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionMatrix(Matrix6);

impl InteractionMatrix {
    /// Assembles `𝓛` for the given ball centers; centers closer than `2a` are rejected.
    pub fn new(geom: &SwimmerGeometry, centers: &[Vector2<f64>; 3]) -> Result<Self> {
        let min_distance = 2.0 * geom.radius();
        let mut l = Matrix6::zeros();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = centers[i] - centers[j];
                let distance = d.norm();
                if distance.is_nan() || distance <= min_distance {
                    return Err(Error::Overlap {
                        i: i + 1,
                        j: j + 1,
                        distance,
                        min_distance,
                    });
                }
                let s = stokeslet_planar(&d, geom.viscosity())?;
                l.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(&s);
                l.fixed_view_mut::<2, 2>(2 * j, 2 * i).copy_from(&s);
            }
        }
        Ok(Self(l))
    }

    /// Decoupled balls, `𝓛 = 0`.
    pub fn zero() -> Self {
        Self(Matrix6::zeros())
    }

    pub fn matrix(&self) -> &Matrix6 {
        &self.0
    }

    /// Planar 2×2 block `(i, j)`, zero-based.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }
}

/// Mobility matrix `𝓘/ν + 𝓛`.
pub fn mobility_matrix(l: &InteractionMatrix, drag: DragCoefficient) -> Matrix6 {
    Matrix6::identity() / drag.value() + l.matrix()
}

/// First-order inversion `f = (ν𝓘 − ν²𝓛) u`.
pub fn forces_leading_order(u: &Vector6, l: &InteractionMatrix, drag: DragCoefficient) -> Vector6 {
    let nu = drag.value();
    u * nu - l.matrix() * u * (nu * nu)
}

/// Solves `u = (𝓘/ν + 𝓛) f` for `f` with a dense 6×6 solve.
pub fn forces_exact(u: &Vector6, l: &InteractionMatrix, drag: DragCoefficient) -> Result<Vector6> {
    // Scale by ν so the matrix is O(1): (𝓘 + ν𝓛) f = ν u.
    let nu = drag.value();
    let m = Matrix6::identity() + l.matrix() * nu;
    linalg::solve("mobility", &m, &(u * nu))
}

/// Instantaneous dissipated power `𝒫 = f · u`.
pub fn instantaneous_power(f: &Vector6, u: &Vector6) -> f64 {
    f.dot(u)
}
