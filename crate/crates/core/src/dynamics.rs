//! Trajectories of the swimmer driven by a prescribed elliptic stroke.
//!
//! Two systems are integrated with the classical fixed-step RK4 scheme:
//!
//! - the leading-order system, `θ(t) = θ₀ + σt` and
//!   `ċ = R(θ)[F₀ξ̇ + Σ_{j=1,2}(Aⱼξ̇ · ξ) eⱼ]`;
//! - the exact system `ṗ = R(θ) F(ξ) ξ̇`, with `θ` as a state variable.
//!
//! The shape is an input: `ξ(t)` and `ξ̇(t)` are evaluated analytically from the
//! stroke at every stage.

use std::f64::consts::PI;

use nalgebra::{SVector, Vector2, Vector3};

use crate::control::{control_matrix_exact, AsymptoticCoefficients, ControlExpansion};
use crate::energetics::{gram_matrix, DissipationForm};
use crate::error::{Error, Result};
use crate::kinematics::{rotation, rotation2, Pose, ShapeState, SwimmerGeometry};
use crate::strokes::EllipticStroke;

/// Fixed-step integration parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    pub steps_per_loop: usize,
    pub loops: usize,
    /// Stroke played at `time_scale` loops per `2π` time units.
    pub time_scale: f64,
    pub initial: Pose,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            steps_per_loop: 256,
            loops: 1,
            time_scale: 1.0,
            initial: Pose::default(),
        }
    }
}

impl IntegratorSettings {
    pub fn new(steps_per_loop: usize, loops: usize) -> Self {
        Self {
            steps_per_loop,
            loops,
            ..Self::default()
        }
    }

    pub fn with_time_scale(mut self, time_scale: f64) -> Self {
        self.time_scale = time_scale;
        self
    }

    pub fn with_initial(mut self, initial: Pose) -> Self {
        self.initial = initial;
        self
    }

    /// Duration of one loop.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.time_scale
    }

    fn validate(&self, min_steps: usize) -> Result<()> {
        if self.steps_per_loop < min_steps {
            return Err(Error::InvalidParameter(format!(
                "need at least {min_steps} steps per loop, got {}",
                self.steps_per_loop
            )));
        }
        if self.loops == 0 {
            return Err(Error::InvalidParameter("need at least one loop".into()));
        }
        if !(self.time_scale.is_finite() && self.time_scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time scale must be positive, got {}",
                self.time_scale
            )));
        }
        Ok(())
    }
}

/// State of the swimmer at one sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub xi: Vector3<f64>,
    pub c: Vector2<f64>,
    pub theta: f64,
    /// Instantaneous power divided by `ν`.
    pub power: f64,
}

/// Sampled trajectory, one sample per integrator step including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stroke: EllipticStroke,
    pub settings: IntegratorSettings,
}

impl Trajectory {
    /// Trapezoid integral of the sampled power (divided by `ν`).
    pub fn dissipated_energy(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| 0.5 * (w[0].power + w[1].power) * (w[1].t - w[0].t))
            .sum()
    }
}

/// One classical RK4 step for `ẏ = f(t, y)`.
fn rk4_step<const N: usize, F>(f: &mut F, t: f64, y: &SVector<f64, N>, h: f64) -> Result<SVector<f64, N>>
where
    F: FnMut(f64, &SVector<f64, N>) -> Result<SVector<f64, N>>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &(y + k1 * (0.5 * h)))?;
    let k3 = f(t + 0.5 * h, &(y + k2 * (0.5 * h)))?;
    let k4 = f(t + h, &(y + k3 * h))?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Shape and shape rate at physical time `t`.
fn shape_kinematics(stroke: &EllipticStroke, time_scale: f64, t: f64) -> (Vector3<f64>, Vector3<f64>) {
    let phase = time_scale * t;
    (stroke.shape_at(phase), stroke.rate_at(phase) * time_scale)
}

/// Integrates the leading-order system with `θ = θ₀ + σt` and RK4 for `c`.
///
/// Power is sampled as `G₀ ξ̇ · ξ̇` with `G₀` built from `coeffs.kappa`, `coeffs.h`.
pub fn integrate_leading_order(
    coeffs: &AsymptoticCoefficients,
    expansion: &ControlExpansion,
    stroke: &EllipticStroke,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    settings.validate(64)?;
    let g0 = DissipationForm::from_parameters(coeffs.kappa, coeffs.h).g0;
    let scale = settings.time_scale;
    let theta0 = settings.initial.theta;
    let theta_at = |t: f64| theta0 + stroke.sigma * scale * t;

    let mut rhs = |t: f64, _c: &Vector2<f64>| -> Result<Vector2<f64>> {
        let (xi, xi_dot) = shape_kinematics(stroke, scale, t);
        let body = expansion.f0 * xi_dot;
        let mut v = Vector2::new(body.x, body.y);
        for j in 0..2 {
            v[j] += (expansion.a[j] * xi_dot).dot(&xi);
        }
        Ok(rotation2(theta_at(t)) * v)
    };

    let n = settings.steps_per_loop * settings.loops;
    let h = settings.period() / settings.steps_per_loop as f64;
    let mut c = settings.initial.c;
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = k as f64 * h;
        let (xi, xi_dot) = shape_kinematics(stroke, scale, t);
        samples.push(Sample {
            t,
            xi,
            c,
            theta: theta_at(t),
            power: (g0 * xi_dot).dot(&xi_dot),
        });
        if k < n {
            c = rk4_step(&mut rhs, t, &c, h)?;
        }
    }
    Ok(Trajectory {
        samples,
        stroke: *stroke,
        settings: *settings,
    })
}

/// Integrates `ṗ = R(θ) F(ξ) ξ̇` with the exact control matrix.
pub fn integrate_exact(
    geom: &SwimmerGeometry,
    stroke: &EllipticStroke,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    settings.validate(1)?;
    stroke.check_admissible(geom)?;
    let scale = settings.time_scale;
    let shape_at = |t: f64, xi: Vector3<f64>| {
        ShapeState::new(geom, xi).map_err(|e| Error::InadmissibleAt {
            time: t,
            source: Box::new(e),
        })
    };

    let mut rhs = |t: f64, p: &Vector3<f64>| -> Result<Vector3<f64>> {
        let (xi, xi_dot) = shape_kinematics(stroke, scale, t);
        let f = control_matrix_exact(geom, &shape_at(t, xi)?, 0.0)?;
        Ok(rotation(p.z) * (f * xi_dot))
    };

    let n = settings.steps_per_loop * settings.loops;
    let h = settings.period() / settings.steps_per_loop as f64;
    let mut p = settings.initial.as_vector();
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = k as f64 * h;
        let (xi, xi_dot) = shape_kinematics(stroke, scale, t);
        let g = gram_matrix(geom, &shape_at(t, xi)?)?;
        samples.push(Sample {
            t,
            xi,
            c: Vector2::new(p.x, p.y),
            theta: p.z,
            power: (g * xi_dot).dot(&xi_dot),
        });
        if k < n {
            p = rk4_step(&mut rhs, t, &p, h)?;
        }
    }
    Ok(Trajectory {
        samples,
        stroke: *stroke,
        settings: *settings,
    })
}

/// `(c(T) − c(0), θ(T) − θ(0))` over a trajectory made of whole loops.
pub fn net_displacement(traj: &Trajectory) -> Result<Vector3<f64>> {
    let period = traj.settings.period();
    let (first, last) = match (traj.samples.first(), traj.samples.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::PartialLoop {
                final_time: 0.0,
                period,
            })
        }
    };
    let elapsed = last.t - first.t;
    let loops = (elapsed / period).round();
    if loops < 1.0 || (elapsed - loops * period).abs() > 1e-9 * period {
        return Err(Error::PartialLoop {
            final_time: last.t,
            period,
        });
    }
    let dc = last.c - first.c;
    Ok(Vector3::new(dc.x, dc.y, last.theta - first.theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::extract_coefficients;
    use crate::energetics::loop_dissipation;
    use crate::linalg::log_log_slope;
    use crate::strokes::{optimal_stroke, realized_displacement, DisplacementTarget};
    use approx::assert_relative_eq;

    struct Setup {
        geom: SwimmerGeometry,
        coeffs: AsymptoticCoefficients,
        expansion: ControlExpansion,
    }

    fn setup(ratio: f64) -> Setup {
        let geom = SwimmerGeometry::new(ratio, 1.0, 1.0).unwrap();
        let ext = extract_coefficients(&geom).unwrap();
        Setup {
            geom,
            coeffs: ext.coefficients,
            expansion: ext.expansion,
        }
    }

    impl Setup {
        fn stroke(&self, dp: Vector3<f64>) -> EllipticStroke {
            optimal_stroke(&self.coeffs, &DisplacementTarget(dp), &self.geom).unwrap()
        }

        fn leading(&self, stroke: &EllipticStroke, settings: IntegratorSettings) -> Vector3<f64> {
            let traj = integrate_leading_order(&self.coeffs, &self.expansion, stroke, &settings).unwrap();
            net_displacement(&traj).unwrap()
        }
    }

    #[test]
    fn zero_stroke_stays_put() {
        let s = setup(0.1);
        let zero = EllipticStroke::from_axes(Vector3::zeros(), Vector3::zeros(), 0.0);
        let settings = IntegratorSettings::default().with_initial(Pose::new(Vector2::new(0.2, -0.1), 0.3));
        let traj = integrate_leading_order(&s.coeffs, &s.expansion, &zero, &settings).unwrap();
        for sample in &traj.samples {
            assert_eq!(sample.c, Vector2::new(0.2, -0.1));
            assert_eq!(sample.theta, 0.3);
        }
        assert_eq!(net_displacement(&traj).unwrap(), Vector3::zeros());
        let exact = integrate_exact(&s.geom, &zero, &IntegratorSettings::new(64, 1)).unwrap();
        assert_eq!(net_displacement(&exact).unwrap(), Vector3::zeros());
    }

    #[test]
    fn translation_keeps_orientation() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.01, 0.0, 0.0));
        assert!(stroke.sigma.abs() < 1e-15);
        let traj = integrate_leading_order(&s.coeffs, &s.expansion, &stroke, &IntegratorSettings::default()).unwrap();
        assert!(traj.samples.iter().all(|x| x.theta.abs() < 1e-12));
        let dp = net_displacement(&traj).unwrap();
        assert!((dp - Vector3::new(0.01, 0.0, 0.0)).norm() <= 1e-10 * 0.01);
    }

    #[test]
    fn rotation_target_round_trip() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.0, 0.0, 0.01));
        let dp = s.leading(&stroke, IntegratorSettings::default());
        assert_relative_eq!(dp.z, 2.0 * PI * stroke.sigma, max_relative = 1e-12);
        assert_relative_eq!(dp.z, realized_displacement(&s.coeffs, &stroke).z, max_relative = 1e-10);
        assert!((dp.z - 0.01).abs() <= 1e-8);
        // The rotating frame makes c drift by R(δθ)-rotated F₀u: to first order in δθ,
        // δc ≈ δθ · R(π/2) (F₀u)_xy. Check magnitude and direction against that oracle.
        let f0u = s.expansion.f0 * stroke.u;
        let predicted = rotation2(PI / 2.0) * Vector2::new(f0u.x, f0u.y) * 0.01;
        let drift = Vector2::new(dp.x, dp.y);
        assert!(
            (drift - predicted).norm() <= 0.05 * predicted.norm(),
            "{drift:?} vs {predicted:?}"
        );
    }

    #[test]
    fn rk4_is_fourth_order() {
        // σ ≠ 0 so the rotated integrand is not periodic and the error is not spectral
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.0, 0.0, 0.5)).scaled(1.0);
        let reference = s.leading(&stroke, IntegratorSettings::new(8192, 3));
        let steps = [128usize, 256, 512];
        let errors: Vec<f64> = steps
            .iter()
            .map(|&n| {
                (s.leading(&stroke, IntegratorSettings::new(n, 3)) - reference)
                    .xy()
                    .norm()
            })
            .collect();
        let h: Vec<f64> = steps.iter().map(|&n| 1.0 / n as f64).collect();
        let slope = log_log_slope(&h, &errors);
        assert!((3.7..=4.3).contains(&slope), "slope {slope}, errors {errors:?}");
    }

    #[test]
    fn power_bookkeeping() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.004, -0.002, 0.006));
        let traj = integrate_leading_order(&s.coeffs, &s.expansion, &stroke, &IntegratorSettings::default()).unwrap();
        let g0 = DissipationForm::from_parameters(s.coeffs.kappa, s.coeffs.h).g0;
        let expected = loop_dissipation(&g0, &stroke, 256).unwrap();
        assert_relative_eq!(traj.dissipated_energy(), expected.quadrature, max_relative = 1e-9);
    }

    #[test]
    fn exact_matches_leading_order_for_small_strokes() {
        let s = setup(0.1);
        let base = s.stroke(Vector3::new(0.003, 0.002, 0.004));
        let mut gaps = Vec::new();
        for factor in [1.0, 0.5, 0.25] {
            let stroke = base.scaled(factor);
            let lo = s.leading(&stroke, IntegratorSettings::default());
            let exact =
                net_displacement(&integrate_exact(&s.geom, &stroke, &IntegratorSettings::default()).unwrap()).unwrap();
            gaps.push((exact - lo).norm() / lo.norm());
        }
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn reversal_and_loop_additivity() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.002, 0.001, 0.002)).scaled(0.5);
        let settings = IntegratorSettings::new(128, 1);
        let fwd = net_displacement(&integrate_exact(&s.geom, &stroke, &settings).unwrap()).unwrap();
        let back = net_displacement(&integrate_exact(&s.geom, &stroke.reversed(), &settings).unwrap()).unwrap();
        assert!((fwd + back).norm() <= 0.05 * fwd.norm(), "{fwd:?} {back:?}");
        let two =
            net_displacement(&integrate_exact(&s.geom, &stroke, &IntegratorSettings::new(128, 2)).unwrap()).unwrap();
        assert!((two - fwd * 2.0).norm() <= 0.05 * fwd.norm(), "{two:?} {fwd:?}");
    }

    #[test]
    fn rate_independence() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.003, -0.002, 0.004));
        let slow = integrate_exact(&s.geom, &stroke, &IntegratorSettings::new(128, 1)).unwrap();
        let fast = integrate_exact(&s.geom, &stroke, &IntegratorSettings::new(128, 1).with_time_scale(2.0)).unwrap();
        let a = net_displacement(&slow).unwrap();
        let b = net_displacement(&fast).unwrap();
        assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300) + 1e-18);
        assert_relative_eq!(fast.samples.last().unwrap().t, PI, epsilon = 1e-12);
    }

    #[test]
    fn shape_samples_on_ellipse() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.0, 0.003, 0.002));
        let traj = integrate_exact(&s.geom, &stroke, &IntegratorSettings::new(64, 2)).unwrap();
        assert_eq!(traj.samples.len(), 129);
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        for sample in &traj.samples {
            assert!((sample.xi - stroke.shape_at(sample.t)).norm() < 1e-12);
            assert!(sample.power > 0.0);
        }
    }

    #[test]
    fn invalid_inputs() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.0, 0.0, 0.01));
        assert!(integrate_leading_order(&s.coeffs, &s.expansion, &stroke, &IntegratorSettings::new(32, 1)).is_err());
        assert!(integrate_leading_order(&s.coeffs, &s.expansion, &stroke, &IntegratorSettings::new(64, 0)).is_err());
        let huge = stroke.scaled(50.0);
        assert!(matches!(
            integrate_exact(&s.geom, &huge, &IntegratorSettings::default()),
            Err(Error::Amplitude { .. })
        ));
    }

    #[test]
    fn partial_loops_rejected() {
        let s = setup(0.1);
        let stroke = s.stroke(Vector3::new(0.0, 0.0, 0.01));
        let mut traj =
            integrate_leading_order(&s.coeffs, &s.expansion, &stroke, &IntegratorSettings::default()).unwrap();
        traj.samples.truncate(100);
        assert!(matches!(net_displacement(&traj), Err(Error::PartialLoop { .. })));
        traj.samples.clear();
        assert!(net_displacement(&traj).is_err());
    }

    #[test]
    fn exact_rejects_shapes_leaving_admissible_set() {
        // a stroke crossing the overlap bound is rejected before integrating
        let geom = SwimmerGeometry::new(0.1, 1.0, 1.0).unwrap();
        let reach = geom.arm_length() - geom.min_arm_length();
        let stroke = EllipticStroke::from_axes(Vector3::new(-reach * 1.01, 0.0, 0.0), Vector3::zeros(), 0.0);
        let err = integrate_exact(&geom, &stroke, &IntegratorSettings::new(64, 1)).unwrap_err();
        assert!(matches!(err, Error::Amplitude { arm: 1, .. }));
    }
}
