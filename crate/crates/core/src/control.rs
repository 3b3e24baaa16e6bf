//! The control system `ṗ = F(ξ, θ) ξ̇` obtained by eliminating the forces with
//! the force and torque balance, and its expansion about the equal-arm shape:
//!
//! ```text
//! F(ξ) ξ̇ = F₀ ξ̇ + Σₖ (Aₖ ξ̇ · ξ) eₖ
//! ```
//!
//! `F₀` and the correctors `Aₖ` can be extracted numerically from the exact
//! control matrix, or assembled from the closed-form long-arm coefficient
//! series in `a/ξ₀`. Both routes are kept so they can be checked against each
//! other.

use log::warn;
use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use crate::energetics;
use crate::error::{Error, Result};
use crate::hydrodynamics::InteractionMatrix;
use crate::kinematics::{
    balance_matrix_w, ball_centers, pose_matrix_y, rotation, shape_matrix_x, tau_basis, Pose, ShapeState,
    SwimmerGeometry,
};
use crate::linalg;
use crate::Matrix6;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Force law used to eliminate the forces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForceLaw {
    /// Truncated inverse `f = (ν𝓘 − ν²𝓛) u`.
    #[default]
    LeadingOrder,
    /// Dense inverse `f = (𝓘/ν + 𝓛)⁻¹ u`.
    ExactMobility,
}

/// Resistance operator `K` normalized by `ν`, so that `f = ν K u`.
pub(crate) fn resistance(geom: &SwimmerGeometry, shape: &ShapeState, theta: f64, law: ForceLaw) -> Result<Matrix6> {
    let centers = ball_centers(geom, shape, &Pose::new(Default::default(), theta));
    let l = InteractionMatrix::new(geom, &centers)?;
    let nul = l.matrix() * geom.drag();
    match law {
        ForceLaw::LeadingOrder => Ok(Matrix6::identity() - nul),
        ForceLaw::ExactMobility => {
            let m = Matrix6::identity() + nul;
            linalg::solve("mobility", &m, &Matrix6::identity())
        }
    }
}

/// `F(ξ, θ) = −(𝓦 K 𝓨)⁻¹ 𝓦 K 𝓧` for the chosen force law.
pub fn control_matrix(geom: &SwimmerGeometry, shape: &ShapeState, theta: f64, law: ForceLaw) -> Result<Matrix3<f64>> {
    let k = resistance(geom, shape, theta, law)?;
    let wk = balance_matrix_w(geom, shape, theta) * k;
    let lhs = wk * pose_matrix_y(geom, shape, theta);
    let rhs = wk * shape_matrix_x(theta);
    Ok(-linalg::solve("control", &lhs, &rhs)?)
}

/// Control matrix with the leading-order force law.
pub fn control_matrix_exact(geom: &SwimmerGeometry, shape: &ShapeState, theta: f64) -> Result<Matrix3<f64>> {
    control_matrix(geom, shape, theta, ForceLaw::LeadingOrder)
}

/// Control matrix with the dense mobility inverse instead of the truncated one.
pub fn control_matrix_exact_full_inversion(
    geom: &SwimmerGeometry,
    shape: &ShapeState,
    theta: f64,
) -> Result<Matrix3<f64>> {
    control_matrix(geom, shape, theta, ForceLaw::ExactMobility)
}

/// `F₀ = F(0, 0)`.
pub fn extract_f0(geom: &SwimmerGeometry) -> Result<Matrix3<f64>> {
    control_matrix_exact(geom, &ShapeState::reference(), 0.0)
}

/// Template of `F₀ / φ`.
pub fn f0_template() -> Matrix3<f64> {
    Matrix3::new(-2.0, 1.0, 1.0, 0.0, SQRT3, -SQRT3, 0.0, 0.0, 0.0)
}

/// Least-squares fit of a template scaling, with the relative residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarFit {
    pub value: f64,
    /// `‖M − value·T‖_F / ‖M‖_F`.
    pub residual: f64,
}

fn fit_scalar(m: &Matrix3<f64>, template: &Matrix3<f64>) -> ScalarFit {
    let value = m.dot(template) / template.norm_squared();
    let norm = m.norm();
    let residual = if norm > 0.0 {
        (m - template * value).norm() / norm
    } else {
        0.0
    };
    ScalarFit { value, residual }
}

/// Fits `φ` to `F₀ = φ [[−2,1,1],[0,√3,−√3],[0,0,0]]`.
pub fn fit_f0(f0: &Matrix3<f64>) -> ScalarFit {
    fit_scalar(f0, &f0_template())
}

/// Default finite-difference step, relative to `ξ₀`.
pub const DEFAULT_FD_STEP_RATIO: f64 = 1e-4;
/// Relative error above which corrector extraction logs a warning.
pub const DEFAULT_FD_TOLERANCE: f64 = 1e-6;

/// Correctors `A₁, A₂, A₃` from central differences with one Richardson level.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectorExtraction {
    pub correctors: [Matrix3<f64>; 3],
    pub step: f64,
    /// Largest relative error estimate over the three correctors.
    pub error_estimate: f64,
    pub warning: Option<String>,
}

fn central_difference(geom: &SwimmerGeometry, step: f64) -> Result<[Matrix3<f64>; 3]> {
    let mut d = [Matrix3::zeros(); 3];
    for (i, di) in d.iter_mut().enumerate() {
        let e = Vector3::ith(i, step);
        let plus = control_matrix_exact(geom, &ShapeState::new(geom, e)?, 0.0)?;
        let minus = control_matrix_exact(geom, &ShapeState::new(geom, -e)?, 0.0)?;
        *di = (plus - minus) / (2.0 * step);
    }
    Ok(d)
}

/// Rearranges `Dᵢ = ∂F/∂ξᵢ` into correctors: `Aₖ[i][j] = Dᵢ[k][j]`.
fn to_correctors(d: &[Matrix3<f64>; 3]) -> [Matrix3<f64>; 3] {
    let mut a = [Matrix3::zeros(); 3];
    for (k, ak) in a.iter_mut().enumerate() {
        for (i, di) in d.iter().enumerate() {
            ak.set_row(i, &di.row(k));
        }
    }
    a
}

/// Extracts `A₁, A₂, A₃` from [`control_matrix_exact`] by central differences
/// at steps `fd_step` and `fd_step/2`, combined by Richardson extrapolation.
/// A third difference at `fd_step/4` provides the error estimate.
pub fn extract_correctors(geom: &SwimmerGeometry, fd_step: f64) -> Result<CorrectorExtraction> {
    extract_correctors_with_tolerance(geom, fd_step, DEFAULT_FD_TOLERANCE)
}

pub fn extract_correctors_with_tolerance(
    geom: &SwimmerGeometry,
    fd_step: f64,
    tolerance: f64,
) -> Result<CorrectorExtraction> {
    if !(fd_step.is_finite() && fd_step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {fd_step}"
        )));
    }
    let d1 = to_correctors(&central_difference(geom, fd_step)?);
    let d2 = to_correctors(&central_difference(geom, fd_step / 2.0)?);
    let d4 = to_correctors(&central_difference(geom, fd_step / 4.0)?);

    let f_scale = extract_f0(geom)?.amax().max(f64::MIN_POSITIVE);
    let roundoff = 4.0 * f64::EPSILON * f_scale / (fd_step / 2.0);
    let mut correctors = [Matrix3::zeros(); 3];
    let mut truncation_rel: f64 = 0.0;
    let mut roundoff_rel: f64 = 0.0;
    for k in 0..3 {
        correctors[k] = (d2[k] * 4.0 - d1[k]) / 3.0;
        // the O(h⁴) remainder of the extrapolation, from one more halving
        let finer = (d4[k] * 4.0 - d2[k]) / 3.0;
        let scale = correctors[k].norm().max(f64::MIN_POSITIVE);
        truncation_rel = truncation_rel.max((correctors[k] - finer).norm() * 16.0 / 15.0 / scale);
        roundoff_rel = roundoff_rel.max(3.0 * roundoff / scale);
    }
    let error_estimate = truncation_rel + roundoff_rel;

    let warning = (error_estimate > tolerance).then(|| {
        let cause = if roundoff_rel > truncation_rel {
            "small (cancellation)"
        } else {
            "large (nonlinearity)"
        };
        let msg = format!(
            "corrector extraction at step {fd_step:.3e}: estimated relative error \
             {error_estimate:.3e} exceeds {tolerance:.1e}; the step is too {cause}"
        );
        warn!("{msg}");
        msg
    });

    Ok(CorrectorExtraction {
        correctors,
        step: fd_step,
        error_estimate,
        warning,
    })
}

/// Coefficients of the long-arm expansion.
///
/// `φ`, `κ`, `h`, `g₁`, `g₂` are dimensionless; `α`, `β`, `λ` scale as
/// 1/length and `γ` as 1/length².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoefficients {
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub h: f64,
    pub g1: f64,
    pub g2: f64,
}

impl AsymptoticCoefficients {
    /// Two-term series in `ε = a/ξ₀`.
    pub fn series(geom: &SwimmerGeometry) -> Self {
        let eps = geom.ratio();
        let xi0 = geom.arm_length();
        Self {
            phi: 1.0 / 6.0 - eps / (16.0 * SQRT3),
            alpha: eps / (32.0 * SQRT3 * xi0),
            beta: eps / (16.0 * SQRT3 * xi0),
            lambda: 5.0 * eps / (48.0 * SQRT3 * xi0),
            gamma: 1.0 / (6.0 * SQRT3 * xi0 * xi0),
            kappa: 2.0 / 3.0 + eps / SQRT3,
            h: 1.0 / 6.0 + 7.0 * eps / (16.0 * SQRT3),
            g1: 0.5 + 3.0 * SQRT3 * eps / 16.0,
            g2: 1.0 + 5.0 * SQRT3 * eps / 8.0,
        }
    }

    /// The nine coefficients in a fixed order, paired with their names.
    pub fn named(&self) -> [(&'static str, f64); 9] {
        [
            ("phi", self.phi),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("lambda", self.lambda),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("h", self.h),
            ("g1", self.g1),
            ("g2", self.g2),
        ]
    }
}

/// Basis matrices of the (α, β, λ) templates for `A₁` and `A₂`.
fn translation_templates() -> [[Matrix3<f64>; 3]; 2] {
    let t = 1.0 / 3.0;
    let a1 = [
        Matrix3::new(0.0, 1.0, 1.0, -1.0, 0.0, 0.0, -1.0, 0.0, 0.0),
        Matrix3::new(0.0, t, t, t, 0.0, -2.0 * t, t, -2.0 * t, 0.0),
        Matrix3::new(-1.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5),
    ];
    let a2 = [
        Matrix3::new(0.0, t, -t, -t, 0.0, -2.0 * t, t, 2.0 * t, 0.0) * SQRT3,
        Matrix3::new(0.0, -t, t, -t, 0.0, 0.0, t, 0.0, 0.0) * SQRT3,
        Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, -0.5) * SQRT3,
    ];
    [a1, a2]
}

/// Template of `A₃ / γ`.
pub fn a3_template() -> Matrix3<f64> {
    Matrix3::new(0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0)
}

/// Assembles `A₁, A₂, A₃` from `(α, β, λ, γ)`.
pub fn build_correctors(coeffs: &AsymptoticCoefficients) -> [Matrix3<f64>; 3] {
    let [t1, t2] = translation_templates();
    let params = [coeffs.alpha, coeffs.beta, coeffs.lambda];
    let combine = |t: &[Matrix3<f64>; 3]| -> Matrix3<f64> { t.iter().zip(params).map(|(m, p)| m * p).sum() };
    [combine(&t1), combine(&t2), a3_template() * coeffs.gamma]
}

/// Template fit of numerically extracted correctors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectorFit {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub gamma: f64,
    /// Relative residual of the joint `A₁, A₂` fit.
    pub translation_residual: f64,
    /// Relative residual of the `A₃` fit.
    pub rotation_residual: f64,
}

fn stack(a1: &Matrix3<f64>, a2: &Matrix3<f64>) -> SVector<f64, 18> {
    SVector::<f64, 18>::from_iterator(a1.iter().chain(a2.iter()).copied())
}

/// Least-squares fit of `(α, β, λ)` to `A₁, A₂` and of `γ` to `A₃`.
pub fn fit_correctors(a: &[Matrix3<f64>; 3]) -> CorrectorFit {
    let [t1, t2] = translation_templates();
    let design =
        SMatrix::<f64, 18, 3>::from_columns(&[stack(&t1[0], &t2[0]), stack(&t1[1], &t2[1]), stack(&t1[2], &t2[2])]);
    let target = stack(&a[0], &a[1]);
    // templates are orthogonal-ish and well conditioned; normal equations suffice
    let normal = design.transpose() * design;
    let params = normal
        .lu()
        .solve(&(design.transpose() * target))
        .expect("template design matrix has full rank");
    let norm = target.norm();
    let translation_residual = if norm > 0.0 {
        (target - design * params).norm() / norm
    } else {
        0.0
    };
    let gamma = fit_scalar(&a[2], &a3_template());
    CorrectorFit {
        alpha: params[0],
        beta: params[1],
        lambda: params[2],
        gamma: gamma.value,
        translation_residual,
        rotation_residual: gamma.residual,
    }
}

/// Skew-symmetric action `Mₖ ξ` of the corrector `Aₖ` (k = 1, 2, 3):
/// `M₁ξ = α ξ×τ₁`, `M₂ξ = α ξ×τ₂`, `M₃ξ = γ τ₃×ξ`.
///
/// The sign of `M₃` follows from the `A₃` template (`A₃ξ = γ (ξ₃−ξ₂, ξ₁−ξ₃, ξ₂−ξ₁)`).
pub fn skew_action(k: usize, coeffs: &AsymptoticCoefficients, xi: &Vector3<f64>) -> Result<Vector3<f64>> {
    let tau = tau_basis();
    match k {
        1 | 2 => Ok(xi.cross(&tau[k - 1]) * coeffs.alpha),
        3 => Ok(tau[2].cross(xi) * coeffs.gamma),
        _ => Err(Error::InvalidParameter(format!(
            "corrector index must be 1, 2 or 3, got {k}"
        ))),
    }
}

/// `F₀` together with the first-order correctors and their skew parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlExpansion {
    pub f0: Matrix3<f64>,
    pub a: [Matrix3<f64>; 3],
    pub m: [Matrix3<f64>; 3],
}

impl ControlExpansion {
    pub fn new(f0: Matrix3<f64>, a: [Matrix3<f64>; 3]) -> Self {
        let m = a.map(|ak| linalg::skew_part(&ak));
        Self { f0, a, m }
    }

    /// Expansion assembled from the coefficient templates.
    pub fn from_coefficients(coeffs: &AsymptoticCoefficients) -> Self {
        Self::new(f0_template() * coeffs.phi, build_correctors(coeffs))
    }

    /// Expansion extracted numerically from the exact control matrix.
    pub fn extract(geom: &SwimmerGeometry, fd_step: f64) -> Result<Self> {
        let f0 = extract_f0(geom)?;
        let a = extract_correctors(geom, fd_step)?.correctors;
        Ok(Self::new(f0, a))
    }

    /// `F₀ ξ̇ + Σₖ (Aₖ ξ̇ · ξ) eₖ`.
    pub fn apply(&self, xi: &Vector3<f64>, xi_dot: &Vector3<f64>) -> Vector3<f64> {
        let mut p_dot = self.f0 * xi_dot;
        for (k, ak) in self.a.iter().enumerate() {
            p_dot[k] += (ak * xi_dot).dot(xi);
        }
        p_dot
    }
}

/// Everything recovered from the exact model at one geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientExtraction {
    pub coefficients: AsymptoticCoefficients,
    pub expansion: ControlExpansion,
    pub f0_fit: ScalarFit,
    pub corrector_fit: CorrectorFit,
    pub g0_residual: f64,
    pub fd_error_estimate: f64,
    pub fd_warning: Option<String>,
}

/// Extracts all coefficients numerically, using the default finite-difference step.
pub fn extract_coefficients(geom: &SwimmerGeometry) -> Result<CoefficientExtraction> {
    extract_coefficients_with_step(geom, DEFAULT_FD_STEP_RATIO * geom.arm_length())
}

pub fn extract_coefficients_with_step(geom: &SwimmerGeometry, fd_step: f64) -> Result<CoefficientExtraction> {
    let f0 = extract_f0(geom)?;
    let f0_fit = fit_f0(&f0);
    let fd = extract_correctors(geom, fd_step)?;
    let corrector_fit = fit_correctors(&fd.correctors);
    let g0 = energetics::extract_g0(geom)?;
    let coefficients = AsymptoticCoefficients {
        phi: f0_fit.value,
        alpha: corrector_fit.alpha,
        beta: corrector_fit.beta,
        lambda: corrector_fit.lambda,
        gamma: corrector_fit.gamma,
        kappa: g0.kappa,
        h: g0.h,
        g1: g0.g1,
        g2: g0.g2,
    };
    Ok(CoefficientExtraction {
        coefficients,
        expansion: ControlExpansion::new(f0, fd.correctors),
        f0_fit,
        corrector_fit,
        g0_residual: g0.residual,
        fd_error_estimate: fd.error_estimate,
        fd_warning: fd.warning,
    })
}

/// Pose rates `ṗ = R(θ) F(ξ) ξ̇`, using the rotational factorization.
pub fn pose_rates(
    geom: &SwimmerGeometry,
    shape: &ShapeState,
    theta: f64,
    xi_dot: &Vector3<f64>,
) -> Result<Vector3<f64>> {
    Ok(rotation(theta) * control_matrix_exact(geom, shape, 0.0)? * xi_dot)
}
