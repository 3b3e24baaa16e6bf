//! Static SVG figure: shape-space ellipse, path of the center, swimmer snapshots.

use std::f64::consts::PI;
use std::fmt::Write;

use nalgebra::{Vector2, Vector3};
use spr3_core::kinematics::{ball_centers, Pose, ShapeState};
use spr3_core::{EllipticStroke, Result, SwimmerGeometry, Trajectory};

const PANEL: f64 = 320.0;
const PAD: f64 = 24.0;
const COLORS: [&str; 5] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"];

/// Axis-aligned bounding box mapped onto a square panel with equal scales.
struct Frame {
    x0: f64,
    min: Vector2<f64>,
    scale: f64,
}

impl Frame {
    fn fit(x0: f64, points: &[Vector2<f64>]) -> Self {
        let mut min = Vector2::repeat(f64::INFINITY);
        let mut max = Vector2::repeat(f64::NEG_INFINITY);
        for p in points {
            min = min.inf(p);
            max = max.sup(p);
        }
        let span = (max - min).max().max(1e-300);
        let center = (min + max) / 2.0;
        let scale = (PANEL - 2.0 * PAD) / span;
        Self {
            x0,
            min: center - Vector2::repeat(span / 2.0),
            scale,
        }
    }

    fn map(&self, p: &Vector2<f64>) -> (f64, f64) {
        let q = (p - self.min) * self.scale;
        (self.x0 + PAD + q.x, PANEL - PAD - q.y)
    }
}

fn polyline(out: &mut String, frame: &Frame, points: &[Vector2<f64>], color: &str) {
    let coords: Vec<String> = points
        .iter()
        .map(|p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
        coords.join(" ")
    );
}

fn title(out: &mut String, x0: f64, text: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="16" font-family="sans-serif" font-size="12" text-anchor="middle">{text}</text>"#,
        x0 + PANEL / 2.0
    );
}

/// Coordinates of the stroke in its own plane (orthonormal basis built from `u`, `v`).
fn in_plane(stroke: &EllipticStroke, xi: &Vector3<f64>) -> Vector2<f64> {
    let e1 = stroke.u.try_normalize(0.0).unwrap_or_else(Vector3::x);
    let e2 = (stroke.v - e1 * stroke.v.dot(&e1))
        .try_normalize(0.0)
        .unwrap_or_else(|| e1.cross(&Vector3::z()));
    Vector2::new(xi.dot(&e1), xi.dot(&e2))
}

/// Renders the three panels as a standalone SVG document.
pub fn render(geom: &SwimmerGeometry, traj: &Trajectory) -> Result<String> {
    let stroke = &traj.stroke;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        3.0 * PANEL,
        PANEL,
        3.0 * PANEL,
        PANEL
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let ellipse: Vec<Vector2<f64>> = (0..=128)
        .map(|k| in_plane(stroke, &stroke.shape_at(2.0 * PI * k as f64 / 128.0)))
        .collect();
    let frame = Frame::fit(0.0, &ellipse);
    title(&mut out, 0.0, "shape stroke (in its plane)");
    polyline(&mut out, &frame, &ellipse, "#333333");
    let (sx, sy) = frame.map(&ellipse[0]);
    let _ = writeln!(out, r##"<circle cx="{sx:.3}" cy="{sy:.3}" r="3" fill="#d95f02"/>"##);

    let path: Vec<Vector2<f64>> = traj.samples.iter().map(|s| s.c).collect();
    let frame = Frame::fit(PANEL, &path);
    title(&mut out, PANEL, "center position c(t)");
    polyline(&mut out, &frame, &path, "#1f78b4");

    // snapshots at five equally spaced times over the run
    let n = traj.samples.len() - 1;
    let snapshots: Vec<usize> = (0..5).map(|k| k * n / 4).collect();
    let mut configurations = Vec::new();
    for &i in &snapshots {
        let s = &traj.samples[i];
        let shape = ShapeState::new(geom, s.xi)?;
        configurations.push((s.c, ball_centers(geom, &shape, &Pose::new(s.c, s.theta))));
    }
    let reach = geom.arm_length() + geom.radius();
    let extent: Vec<Vector2<f64>> = configurations
        .iter()
        .flat_map(|(c, _)| [c - Vector2::repeat(reach), c + Vector2::repeat(reach)])
        .collect();
    let frame = Frame::fit(2.0 * PANEL, &extent);
    title(&mut out, 2.0 * PANEL, "swimmer at t = 0, T/4, T/2, 3T/4, T");
    let radius = geom.radius() * frame.scale;
    for ((c, balls), color) in configurations.iter().zip(COLORS) {
        let (cx, cy) = frame.map(c);
        for b in balls {
            let (bx, by) = frame.map(b);
            let _ = writeln!(
                out,
                r#"<line x1="{cx:.3}" y1="{cy:.3}" x2="{bx:.3}" y2="{by:.3}" stroke="{color}" stroke-width="0.8"/>"#
            );
            let _ = writeln!(
                out,
                r#"<circle cx="{bx:.3}" cy="{by:.3}" r="{radius:.3}" fill="none" stroke="{color}" stroke-width="1"/>"#
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
