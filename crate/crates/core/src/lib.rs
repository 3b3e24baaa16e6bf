//! Numerical model of the three-sphere "parking" swimmer (sPr3) at low Reynolds number.
//!
//! Three equal balls slide along coplanar telescopic arms that meet at a common
//! center with fixed angles of 2π/3. The fluid couples the balls through planar
//! stokeslet interactions; eliminating the forces with the force and torque
//! balance gives a linear control system `ṗ = R(θ) F(ξ) ξ̇` from shape rates to
//! pose rates.
//!
//! The crate is organized bottom-up:
//!
//! - [`kinematics`]: rotations, arm frame, ball positions, shape/pose/balance matrices.
//! - [`hydrodynamics`]: stokeslets, the mutual interaction matrix, force laws, power.
//! - [`control`]: the control matrix `F`, its small-stroke expansion and the
//!   closed-form long-arm coefficient series.
//! - [`energetics`]: the dissipation form `G(ξ)` and loop energy.
//! - [`strokes`]: energy-minimizing elliptic strokes for a prescribed displacement.
//! - [`dynamics`]: fixed-step RK4 trajectories for the leading-order and exact systems.

pub mod control;
pub mod dynamics;
pub mod energetics;
mod error;
pub mod hydrodynamics;
pub mod kinematics;
pub mod linalg;
pub mod strokes;

pub use control::{AsymptoticCoefficients, ControlExpansion, ForceLaw};
pub use dynamics::{IntegratorSettings, Sample, Trajectory};
pub use energetics::DissipationForm;
pub use error::{Error, Result};
pub use kinematics::{Pose, ShapeState, SwimmerGeometry};
pub use strokes::{DisplacementTarget, EllipticStroke};

/// 6×3 matrix acting on shape or pose rates and returning stacked planar ball velocities.
pub type Matrix6x3 = nalgebra::SMatrix<f64, 6, 3>;
/// 3×6 matrix mapping stacked planar forces to (total force, total torque).
pub type Matrix3x6 = nalgebra::SMatrix<f64, 3, 6>;
/// Stacked planar quantities of the three balls.
pub type Vector6 = nalgebra::SVector<f64, 6>;
/// 6×6 block matrix of planar 2×2 blocks.
pub type Matrix6 = nalgebra::SMatrix<f64, 6, 6>;
