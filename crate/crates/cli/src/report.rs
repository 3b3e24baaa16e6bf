//! Numeric coefficients against the long-arm series over a sweep of `a/ξ₀`.

use rayon::prelude::*;
use serde::Serialize;
use spr3_core::control::extract_coefficients;
use spr3_core::linalg::log_log_slope;
use spr3_core::{AsymptoticCoefficients, SwimmerGeometry};

use crate::error::{CliError, Result};
use crate::scenario::CoefficientTable;

/// Deviations at or below this multiple of `|value|` are treated as round-off.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

pub const NAMES: [&str; 9] = ["phi", "alpha", "beta", "lambda", "gamma", "kappa", "h", "g1", "g2"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub ratio: f64,
    pub radius: f64,
    pub numeric: CoefficientTable,
    pub series: CoefficientTable,
    /// `|numeric − series|`.
    pub deviation: CoefficientTable,
    pub f0_fit_residual: f64,
    pub corrector_translation_residual: f64,
    pub corrector_rotation_residual: f64,
    pub finite_difference_error: f64,
}

/// Convergence of one coefficient's deviation with `a/ξ₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub name: &'static str,
    /// Least-squares slope of `ln |deviation|` against `ln(a/ξ₀)`; absent when
    /// fewer than two ratios are given or the deviation is at round-off.
    pub slope: Option<f64>,
    pub at_roundoff: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientsReport {
    pub arm_length: f64,
    pub viscosity: f64,
    pub rows: Vec<ReportRow>,
    pub convergence: Vec<Convergence>,
}

fn values(c: &AsymptoticCoefficients) -> [f64; 9] {
    c.named().map(|(_, v)| v)
}

fn table(v: [f64; 9]) -> CoefficientTable {
    CoefficientTable {
        phi: v[0],
        alpha: v[1],
        beta: v[2],
        lambda: v[3],
        gamma: v[4],
        kappa: v[5],
        h: v[6],
        g1: v[7],
        g2: v[8],
    }
}

fn row(arm_length: f64, viscosity: f64, ratio: f64) -> Result<(ReportRow, [f64; 9], [f64; 9])> {
    let geom = SwimmerGeometry::new(ratio * arm_length, arm_length, viscosity)?;
    let ext = extract_coefficients(&geom)?;
    let numeric = values(&ext.coefficients);
    let series = values(&AsymptoticCoefficients::series(&geom));
    let deviation: [f64; 9] = std::array::from_fn(|i| (numeric[i] - series[i]).abs());
    let row = ReportRow {
        ratio,
        radius: geom.radius(),
        numeric: table(numeric),
        series: table(series),
        deviation: table(deviation),
        f0_fit_residual: ext.f0_fit.residual,
        corrector_translation_residual: ext.corrector_fit.translation_residual,
        corrector_rotation_residual: ext.corrector_fit.rotation_residual,
        finite_difference_error: ext.fd_error_estimate,
    };
    Ok((row, numeric, deviation))
}

/// Extracts the coefficients at every ratio (in parallel) and fits convergence slopes.
pub fn coefficients_report(arm_length: f64, viscosity: f64, ratios: &[f64]) -> Result<CoefficientsReport> {
    if ratios.is_empty() {
        return Err(CliError::Config("coefficient sweep needs at least one ratio".into()));
    }
    let results: Vec<_> = ratios
        .par_iter()
        .map(|&r| row(arm_length, viscosity, r))
        .collect::<Result<_>>()?;

    let convergence = NAMES
        .iter()
        .enumerate()
        .map(|(i, &name)| {
            let at_roundoff = results
                .iter()
                .all(|(_, numeric, dev)| dev[i] <= ROUNDOFF_FLOOR * numeric[i].abs().max(f64::MIN_POSITIVE));
            let slope = (ratios.len() >= 2 && !at_roundoff).then(|| {
                let devs: Vec<f64> = results.iter().map(|(_, _, d)| d[i]).collect();
                log_log_slope(ratios, &devs)
            });
            Convergence {
                name,
                slope,
                at_roundoff,
            }
        })
        .collect();

    Ok(CoefficientsReport {
        arm_length,
        viscosity,
        rows: results.into_iter().map(|(r, _, _)| r).collect(),
        convergence,
    })
}
