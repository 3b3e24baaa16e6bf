//! Geometry of the swimmer: rotations, arm directions, ball centers and the
//! matrices that express ball velocities linearly in the shape and pose rates.
//!
//! All planar vectors are stored as 2-vectors; the 2D cross product is the
//! determinant `b × f = b_x f_y − b_y f_x`, so `b × f = (R(π/2) b) · f`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::{Matrix3x6, Matrix6x3, Vector6};

/// Physical parameters of the swimmer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwimmerGeometry {
    radius: f64,
    arm_length: f64,
    viscosity: f64,
    margin: f64,
}

impl SwimmerGeometry {
    /// Relative safety margin on the admissibility bound, in units of the arm length.
    pub const DEFAULT_MARGIN: f64 = 1e-12;

    /// Ball radius `a`, reference arm length `ξ₀` and viscosity `μ`.
    pub fn new(radius: f64, arm_length: f64, viscosity: f64) -> Result<Self> {
        for (name, value) in [("radius", radius), ("arm_length", arm_length), ("viscosity", viscosity)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        let geom = Self {
            radius,
            arm_length,
            viscosity,
            margin: Self::DEFAULT_MARGIN * arm_length,
        };
        if arm_length <= geom.min_arm_length() {
            return Err(Error::InvalidParameter(format!(
                "arm_length {arm_length} must exceed 2a/sqrt(3) = {}",
                geom.min_arm_length()
            )));
        }
        Ok(geom)
    }

    /// Overrides the absolute admissibility margin (length units).
    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin.max(0.0);
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn arm_length(&self) -> f64 {
        self.arm_length
    }

    pub fn viscosity(&self) -> f64 {
        self.viscosity
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// `a / ξ₀`, the only parameter the dimensionless results depend on.
    pub fn ratio(&self) -> f64 {
        self.radius / self.arm_length
    }

    /// Stokes drag coefficient `ν = 6πμa` of one ball.
    pub fn drag(&self) -> f64 {
        6.0 * PI * self.viscosity * self.radius
    }

    /// Lower bound `2a/√3` on every arm length.
    pub fn min_arm_length(&self) -> f64 {
        2.0 * self.radius / 3f64.sqrt()
    }

    /// Checks `ξ₀ + ξᵢ > 2a/√3 + margin` for every arm.
    pub fn check_shape(&self, xi: &Vector3<f64>) -> Result<()> {
        let limit = self.min_arm_length() + self.margin;
        for (arm, offset) in xi.iter().enumerate() {
            let length = self.arm_length + offset;
            if length.is_nan() || length <= limit {
                return Err(Error::Inadmissible {
                    arm: arm + 1,
                    length,
                    min_length: limit,
                });
            }
        }
        Ok(())
    }
}

/// Shape variables: arm-length offsets `ξ`, so that arm `i` has length `ξ₀ + ξᵢ`.
///
/// Only constructible for admissible shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeState(Vector3<f64>);

impl ShapeState {
    pub fn new(geom: &SwimmerGeometry, xi: Vector3<f64>) -> Result<Self> {
        geom.check_shape(&xi)?;
        Ok(Self(xi))
    }

    /// Equal arms, `ξ = 0`.
    pub fn reference() -> Self {
        Self(Vector3::zeros())
    }

    pub fn offsets(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn arm_lengths(&self, geom: &SwimmerGeometry) -> Vector3<f64> {
        self.0.add_scalar(geom.arm_length)
    }
}

/// Position variables: planar center `c` and orientation `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub c: Vector2<f64>,
    pub theta: f64,
}

impl Pose {
    pub fn new(c: Vector2<f64>, theta: f64) -> Self {
        Self { c, theta }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.c.x, self.c.y, self.theta)
    }
}

/// Rotation through `phi` about the vertical axis.
pub fn rotation(phi: f64) -> Matrix3<f64> {
    let (s, c) = phi.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Planar restriction of [`rotation`].
pub fn rotation2(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Fixed unit arm directions `z₁ = (1,0)`, `z₂ = R(−2π/3) z₁`, `z₃ = R(2π/3) z₁`.
pub fn arm_directions() -> [Vector2<f64>; 3] {
    let z1 = Vector2::new(1.0, 0.0);
    [z1, rotation2(-2.0 * PI / 3.0) * z1, rotation2(2.0 * PI / 3.0) * z1]
}

/// `zᵢ⊥ = R(π/2) zᵢ`.
pub fn arm_normals() -> [Vector2<f64>; 3] {
    let q = rotation2(FRAC_PI_2);
    arm_directions().map(|z| q * z)
}

/// Orthogonal basis `τ₁ = (0,−1,1)`, `τ₂ = (−2,1,1)/√3`, `τ₃ = (1,1,1)` of shape space.
pub fn tau_basis() -> [Vector3<f64>; 3] {
    let s = 1.0 / 3f64.sqrt();
    [
        Vector3::new(0.0, -1.0, 1.0),
        Vector3::new(-2.0 * s, s, s),
        Vector3::new(1.0, 1.0, 1.0),
    ]
}

/// Orthogonal matrix with columns `τᵢ/|τᵢ|`.
pub fn tau_frame() -> Matrix3<f64> {
    let [t1, t2, t3] = tau_basis();
    Matrix3::from_columns(&[t1.normalize(), t2.normalize(), t3.normalize()])
}

/// Ball centers `bᵢ = c + (ξ₀ + ξᵢ) R(θ) zᵢ`.
pub fn ball_centers(geom: &SwimmerGeometry, shape: &ShapeState, pose: &Pose) -> [Vector2<f64>; 3] {
    let rot = rotation2(pose.theta);
    let lengths = shape.arm_lengths(geom);
    let z = arm_directions();
    [0, 1, 2].map(|i| pose.c + lengths[i] * (rot * z[i]))
}

/// Shape matrix `𝓧(θ)`: block-diagonal columns `R(θ) zᵢ`.
pub fn shape_matrix_x(theta: f64) -> Matrix6x3 {
    let rot = rotation2(theta);
    let mut x = Matrix6x3::zeros();
    for (i, z) in arm_directions().iter().enumerate() {
        x.fixed_view_mut::<2, 1>(2 * i, i).copy_from(&(rot * z));
    }
    x
}

/// Pose matrix `𝓨(ξ, θ)` with rows `[I₂ | (ξ₀ + ξᵢ) R(θ) zᵢ⊥]`.
pub fn pose_matrix_y(geom: &SwimmerGeometry, shape: &ShapeState, theta: f64) -> Matrix6x3 {
    let rot = rotation2(theta);
    let lengths = shape.arm_lengths(geom);
    let mut y = Matrix6x3::zeros();
    for (i, zp) in arm_normals().iter().enumerate() {
        y.fixed_view_mut::<2, 2>(2 * i, 0).copy_from(&Matrix2::identity());
        y.fixed_view_mut::<2, 1>(2 * i, 2).copy_from(&(lengths[i] * (rot * zp)));
    }
    y
}

/// Balance matrix `𝓦(ξ, θ)`: `𝓦 f = (Σ fᵢ, Σ bᵢ × fᵢ)`.
///
/// Centers are taken relative to `c`; the torque balance does not depend on
/// the reference point once the total force vanishes.
pub fn balance_matrix_w(geom: &SwimmerGeometry, shape: &ShapeState, theta: f64) -> Matrix3x6 {
    let q = rotation2(FRAC_PI_2);
    let centers = ball_centers(geom, shape, &Pose::new(Vector2::zeros(), theta));
    let mut w = Matrix3x6::zeros();
    for (i, b) in centers.iter().enumerate() {
        w.fixed_view_mut::<2, 2>(0, 2 * i).copy_from(&Matrix2::identity());
        w.fixed_view_mut::<1, 2>(2, 2 * i).copy_from(&(q * b).transpose());
    }
    w
}

/// Stacked ball velocities `u = 𝓧(θ) ξ̇ + 𝓨(ξ, θ) ṗ`.
pub fn ball_velocities(
    geom: &SwimmerGeometry,
    shape: &ShapeState,
    theta: f64,
    xi_dot: &Vector3<f64>,
    p_dot: &Vector3<f64>,
) -> Vector6 {
    shape_matrix_x(theta) * xi_dot + pose_matrix_y(geom, shape, theta) * p_dot
}
