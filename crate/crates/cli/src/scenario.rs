//! Scenario pipeline: coefficients, optimal stroke, integration and diagnostics.

use log::{info, warn};
use serde::Serialize;
use spr3_core::control::{extract_coefficients, CoefficientExtraction};
use spr3_core::dynamics::{integrate_exact, integrate_leading_order, net_displacement};
use spr3_core::kinematics::tau_basis;
use spr3_core::strokes::{omega_vector, optimal_stroke, realized_displacement};
use spr3_core::{
    AsymptoticCoefficients, ControlExpansion, EllipticStroke, IntegratorSettings, SwimmerGeometry, Trajectory,
};

use crate::config::{CoefficientSource, ScenarioConfig, Variant};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientTable {
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

impl From<&AsymptoticCoefficients> for CoefficientTable {
    fn from(c: &AsymptoticCoefficients) -> Self {
        Self {
            phi: c.phi,
            alpha: c.alpha,
            beta: c.beta,
            lambda: c.lambda,
            gamma: c.gamma,
            kappa: c.kappa,
            h: c.h,
            g1: c.g1,
            g2: c.g2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometrySummary {
    pub radius: f64,
    pub arm_length: f64,
    pub viscosity: f64,
    pub ratio: f64,
    pub drag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegratorSummary {
    pub steps_per_loop: usize,
    pub loops: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrokeSummary {
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopEnergy {
    /// Energy per loop divided by the drag coefficient.
    pub normalized: f64,
    pub physical: f64,
    /// `|normalized − |ω|| / |ω|`.
    pub relative_deviation_from_omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientPair {
    pub numeric: CoefficientTable,
    pub series: CoefficientTable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrokePlane {
    pub u_dot_tau: [f64; 3],
    pub v_dot_tau: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Closed-form loop holonomy of the constructed stroke.
    pub predicted_displacement: [f64; 3],
    /// `|realized − target| / |target|`.
    pub relative_error: f64,
    /// `realized − target`.
    pub displacement_error: [f64; 3],
    pub stroke_plane: StrokePlane,
    pub f0_fit_residual: f64,
    pub corrector_translation_residual: f64,
    pub corrector_rotation_residual: f64,
    pub g0_fit_residual: f64,
    pub finite_difference_error: f64,
    pub warnings: Vec<String>,
}

/// Machine-readable run summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub geometry: GeometrySummary,
    pub scenario: Option<String>,
    pub target: [f64; 3],
    pub variant: Variant,
    pub coefficient_source: CoefficientSource,
    pub integrator: IntegratorSummary,
    pub omega_norm: f64,
    pub stroke: StrokeSummary,
    pub realized_displacement: [f64; 3],
    pub loop_energy: LoopEnergy,
    pub coefficients: CoefficientPair,
    pub diagnostics: Diagnostics,
}

/// Everything a run produces before it is written out.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub geometry: SwimmerGeometry,
    pub stroke: EllipticStroke,
    pub trajectory: Trajectory,
    pub summary: Summary,
}

fn array(v: &nalgebra::Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Runs one scenario end to end without touching the filesystem.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutcome> {
    config.validate()?;
    let geom = config.geometry()?;
    let target = config.displacement_target()?;
    let mut warnings = Vec::new();
    if let Some(w) = config.regime_warning() {
        warn!("{w}");
        warnings.push(w);
    }

    let extraction: CoefficientExtraction = extract_coefficients(&geom)?;
    if let Some(w) = &extraction.fd_warning {
        warnings.push(w.clone());
    }
    let series = AsymptoticCoefficients::series(&geom);
    let (coeffs, expansion) = match config.coefficients {
        CoefficientSource::Extracted => (extraction.coefficients, extraction.expansion),
        CoefficientSource::Series => (series, ControlExpansion::from_coefficients(&series)),
    };

    let omega = omega_vector(&coeffs, &target)?;
    let stroke = optimal_stroke(&coeffs, &target, &geom)?;
    info!(
        "stroke u = {:?}, v = {:?}, sigma = {:e}",
        stroke.u, stroke.v, stroke.sigma
    );

    let settings = IntegratorSettings::new(config.integrator.steps_per_loop, config.integrator.loops);
    let trajectory = match config.variant {
        Variant::LeadingOrder => integrate_leading_order(&coeffs, &expansion, &stroke, &settings)?,
        Variant::Exact => integrate_exact(&geom, &stroke, &settings)?,
    };
    let realized = net_displacement(&trajectory)?;
    let loops = config.integrator.loops as f64;
    let expected = target.0 * loops;
    let error = realized - expected;

    let energy = trajectory.dissipated_energy() / loops;
    let omega_norm = omega.norm();
    let tau = tau_basis();
    let fit = &extraction.corrector_fit;

    let summary = Summary {
        geometry: GeometrySummary {
            radius: geom.radius(),
            arm_length: geom.arm_length(),
            viscosity: geom.viscosity(),
            ratio: geom.ratio(),
            drag: geom.drag(),
        },
        scenario: config.effective_scenario().map(|s| s.name().to_string()),
        target: array(&target.0),
        variant: config.variant,
        coefficient_source: config.coefficients,
        integrator: IntegratorSummary {
            steps_per_loop: config.integrator.steps_per_loop,
            loops: config.integrator.loops,
        },
        omega_norm,
        stroke: StrokeSummary {
            u: array(&stroke.u),
            v: array(&stroke.v),
            sigma: stroke.sigma,
        },
        realized_displacement: array(&realized),
        loop_energy: LoopEnergy {
            normalized: energy,
            physical: energy * geom.drag(),
            relative_deviation_from_omega: (energy - omega_norm).abs() / omega_norm,
        },
        coefficients: CoefficientPair {
            numeric: (&extraction.coefficients).into(),
            series: (&series).into(),
        },
        diagnostics: Diagnostics {
            predicted_displacement: array(&realized_displacement(&coeffs, &stroke)),
            relative_error: error.norm() / expected.norm(),
            displacement_error: array(&error),
            stroke_plane: StrokePlane {
                u_dot_tau: tau.map(|t| stroke.u.dot(&t)),
                v_dot_tau: tau.map(|t| stroke.v.dot(&t)),
            },
            f0_fit_residual: extraction.f0_fit.residual,
            corrector_translation_residual: fit.translation_residual,
            corrector_rotation_residual: fit.rotation_residual,
            g0_fit_residual: extraction.g0_residual,
            finite_difference_error: extraction.fd_error_estimate,
            warnings,
        },
    };
    Ok(ScenarioOutcome {
        geometry: geom,
        stroke,
        trajectory,
        summary,
    })
}
