//! The carpenter's-square curve.
//!
//! Implicitly the curve is `F(x, y) = x²(3 − y) − (y − 2)²(y + 1) = 0`. The
//! compass draws only part of it. That part is parametrized by the trisection
//! parameter `t ∈ (0, π/2]`:
//!
//! ```text
//! D(t) = (cos 3t / sin t, sin 3t / sin t)
//! ```
//!
//! so `D(t)` sits at polar angle `3t` and distance `csc t` from the origin.
//! Its reflection `x → −x` also satisfies `F = 0` but is never drawn.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use thiserror::Error;

use crate::geom::{self, angle_distance, wrap_positive, Point};

/// Default lower sampling bound for `t`; `x ~ 1/t` blows up below it.
pub const DEFAULT_T_MIN: f64 = 0.005;

/// Largest trisectable angle, 270°.
pub const MAX_ANGLE: f64 = 1.5 * PI;

/// Slack admitted when comparing against the closed ends of parameter ranges.
pub(crate) const ENDPOINT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CurveError {
    #[error("value {0} outside the curve's domain")]
    OutOfDomain(f64),
    #[error("bad sampling range")]
    BadRange,
    #[error("angle {0} rad outside (0, 3π/2]")]
    OutOfRange(f64),
    #[error("no on-trace intersection found for angle {0} rad")]
    NoTraceRoot(f64),
}

/// Trisection parameter in `(0, π/2]`; equals one third of the angle whose
/// trisection point it names.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TraceParam(f64);

impl TraceParam {
    pub fn new(t: f64) -> Result<Self, CurveError> {
        if t > 0.0 && t <= FRAC_PI_2 + ENDPOINT_SLACK {
            Ok(TraceParam(t.min(FRAC_PI_2)))
        } else {
            Err(CurveError::OutOfDomain(t))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveIntersection {
    pub point: Point,
    /// Distance from the origin along the query ray.
    pub r: f64,
    pub on_trace: bool,
    pub multiplicity: usize,
}

/// Residual scale `1 + |x|³`; `F` grows cubically along the asymptote.
pub fn residual_scale(p: Point) -> f64 {
    1.0 + p.x.abs().powi(3)
}

pub fn implicit_value(p: Point) -> f64 {
    let (x, y) = (p.x, p.y);
    let ym2 = y - 2.0;
    x * x * (3.0 - y) - ym2 * ym2 * (y + 1.0)
}

/// `(∂F/∂x, ∂F/∂y)`.
pub fn implicit_gradient(p: Point) -> (f64, f64) {
    let (x, y) = (p.x, p.y);
    let ym2 = y - 2.0;
    (
        2.0 * x * (3.0 - y),
        -x * x - 2.0 * ym2 * (y + 1.0) - ym2 * ym2,
    )
}

/// Horizontal offset `a = √((3 − y)(y + 1))` from the tracing pencil to the
/// pencil on `y = 1`.
pub fn half_chord(y: f64) -> Result<f64, CurveError> {
    if !(-1.0..=3.0).contains(&y) {
        return Err(CurveError::OutOfDomain(y));
    }
    Ok(((3.0 - y) * (y + 1.0)).sqrt())
}

pub fn trace_point(t: TraceParam) -> Point {
    let t = t.get();
    let s = t.sin();
    Point::new((3.0 * t).cos() / s, 3.0 - 4.0 * s * s)
}

/// Trace parameter for height `y`, clamped to `(0, π/2]`.
fn param_for_height(y: f64) -> f64 {
    let v = ((3.0 - y) / 4.0).clamp(0.0, 1.0);
    v.sqrt().asin()
}

fn trace_residuals(p: Point) -> Option<(f64, f64)> {
    if !p.is_finite() || p.y >= 3.0 {
        return None;
    }
    let f = implicit_value(p).abs() / residual_scale(p);
    let t = param_for_height(p.y);
    let theta = match geom::polar_angle(p) {
        Ok(a) => wrap_positive(a),
        Err(_) => return None,
    };
    Some((f, angle_distance(theta, 3.0 * t)))
}

/// Whether `p` lies on the branch the compass draws.
///
/// Requires `|F(p)| ≤ tol·(1 + |x|³)` and that the polar angle of `p` equals
/// `3t` within `tol`, where `t ∈ (0, π/2]` is the parameter whose trace point
/// has height `p.y`.
pub fn on_trace(p: Point, tol: f64) -> Result<bool, CurveError> {
    if p.y < -1.0 - ENDPOINT_SLACK {
        return Err(CurveError::OutOfDomain(p.y));
    }
    Ok(match trace_residuals(p) {
        Some((f, ang)) => f <= tol && ang <= tol,
        None => false,
    })
}

/// `n` points of the trace at uniformly spaced `t`, both ends included.
pub fn sample_trace(
    t_min: TraceParam,
    t_max: TraceParam,
    n: usize,
) -> Result<Vec<(f64, Point)>, CurveError> {
    if n < 2 || !(t_min.get() < t_max.get()) {
        return Err(CurveError::BadRange);
    }
    let (a, b) = (t_min.get(), t_max.get());
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let t = if i == n - 1 { b } else { a + step * i as f64 };
            (t, trace_point(TraceParam(t)))
        })
        .collect())
}

pub(crate) fn check_angle(phi: f64) -> Result<f64, CurveError> {
    if phi > 0.0 && phi <= MAX_ANGLE + ENDPOINT_SLACK {
        Ok(phi.min(MAX_ANGLE))
    } else {
        Err(CurveError::OutOfRange(phi))
    }
}

/// Intersections of the ray from the origin at angle `phi` with the curve.
///
/// Along the ray `F(r cos φ, r sin φ) = −sin φ·r³ + 3r² − 4`. Roots with
/// `r > 0` and height in `[−1, 3)` are kept, merged by multiplicity, and
/// classified against the drawn branch. Exactly one result is on the trace.
pub fn intersect_ray(phi: f64) -> Result<Vec<CurveIntersection>, CurveError> {
    let phi = check_angle(phi)?;
    let (sin, cos) = phi.sin_cos();
    let roots = geom::solve_cubic(-sin, 3.0, 0.0, -4.0).expect("quadratic coefficient is nonzero");

    let mut merged: Vec<(f64, usize)> = Vec::new();
    for r in roots {
        match merged.last_mut() {
            Some((prev, m)) if (r - *prev).abs() <= 1e-7 * prev.abs().max(1.0) => *m += 1,
            _ => merged.push((r, 1)),
        }
    }

    let mut out = Vec::new();
    let mut residuals = Vec::new();
    for (r, multiplicity) in merged {
        if !(r > 0.0) {
            continue;
        }
        let mut point = Point::new(r * cos, r * sin);
        if point.y < -1.0 - 1e-9 || point.y >= 3.0 {
            continue;
        }
        point.y = point.y.max(-1.0);
        let res = trace_residuals(point).map_or(f64::INFINITY, |(f, a)| f.max(a));
        residuals.push(res);
        out.push(CurveIntersection {
            point,
            r,
            on_trace: false,
            multiplicity,
        });
    }

    // At most one root can be the drawn one; take the best fit if it passes.
    let best = residuals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .filter(|(_, res)| **res <= 1e-9)
        .map(|(i, _)| i)
        .ok_or(CurveError::NoTraceRoot(phi))?;
    out[best].on_trace = true;
    Ok(out)
}

/// The trisection point `D` on ray `phi`: the unique on-trace intersection.
pub fn pick_trisection_point(phi: f64) -> Result<Point, CurveError> {
    intersect_ray(phi)?
        .into_iter()
        .find(|c| c.on_trace)
        .map(|c| c.point)
        .ok_or(CurveError::NoTraceRoot(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_6;

    fn tp(t: f64) -> TraceParam {
        TraceParam::new(t).unwrap()
    }

    #[test]
    fn implicit_examples() {
        assert_eq!(implicit_value(Point::new(0.0, 2.0)), 0.0);
        assert_eq!(implicit_value(Point::new(0.0, -1.0)), 0.0);
        assert_eq!(implicit_value(Point::new(0.0, 0.0)), -4.0);
        assert_eq!(implicit_value(Point::new(2.0, 1.0)), 6.0);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(implicit_gradient(Point::new(0.0, 2.0)), (0.0, 0.0));
        assert_eq!(implicit_gradient(Point::new(2.0, 1.0)), (8.0, -1.0));
        assert_eq!(implicit_gradient(Point::new(0.0, 0.0)), (0.0, 0.0));
    }

    #[test]
    fn half_chord_examples() {
        assert_abs_diff_eq!(half_chord(2.0).unwrap(), 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(half_chord(-1.0).unwrap(), 0.0);
        assert_eq!(half_chord(1.0).unwrap(), 2.0);
        assert_eq!(half_chord(3.5), Err(CurveError::OutOfDomain(3.5)));
        assert_eq!(half_chord(-1.5), Err(CurveError::OutOfDomain(-1.5)));
    }

    #[test]
    fn trace_examples() {
        let p = trace_point(tp(FRAC_PI_6));
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 2.0, epsilon = 1e-15);
        let p = trace_point(tp(FRAC_PI_2));
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_eq!(p.y, -1.0);
        let p = trace_point(tp(PI / 18.0));
        assert_abs_diff_eq!(p.x, 4.987241, epsilon = 1e-6);
        assert_abs_diff_eq!(p.y, 2.879385, epsilon = 1e-6);
    }

    #[test]
    fn trace_param_domain() {
        assert!(TraceParam::new(0.0).is_err());
        assert!(TraceParam::new(-0.1).is_err());
        assert!(TraceParam::new(1.6).is_err());
        assert_eq!(TraceParam::new(FRAC_PI_2).unwrap().get(), FRAC_PI_2);
    }

    #[test]
    fn on_trace_examples() {
        assert!(on_trace(Point::new(0.0, 2.0), 1e-9).unwrap());
        assert!(!on_trace(Point::new(-1.4619, 2.5321), 1e-3).unwrap());
        assert!(on_trace(Point::new(1.4619, 2.5321), 1e-3).unwrap());
        let t20 = trace_point(tp(20f64.to_radians()));
        assert!(on_trace(t20, 1e-9).unwrap());
        assert!(!on_trace(Point::new(-t20.x, t20.y), 1e-9).unwrap());
        assert!(on_trace(Point::new(0.0, -1.0), 1e-9).unwrap());
        assert!(!on_trace(Point::new(5.0, 3.0), 1e-9).unwrap());
        assert!(!on_trace(Point::new(1.0, 1.0), 1e-9).unwrap());
        assert_eq!(
            on_trace(Point::new(0.0, -2.0), 1e-9),
            Err(CurveError::OutOfDomain(-2.0))
        );
    }

    #[test]
    fn sampling() {
        assert_eq!(
            sample_trace(tp(FRAC_PI_6), tp(FRAC_PI_6), 2),
            Err(CurveError::BadRange)
        );
        assert_eq!(sample_trace(tp(0.1), tp(0.5), 1), Err(CurveError::BadRange));
        let s = sample_trace(tp(PI / 18.0), tp(FRAC_PI_2), 3).unwrap();
        assert_eq!(s.len(), 3);
        assert_abs_diff_eq!(s[0].1.x, 4.987241, epsilon = 1e-6);
        assert_abs_diff_eq!(s[0].1.y, 2.879385, epsilon = 1e-6);
        assert_abs_diff_eq!(s[1].0, (PI / 18.0 + FRAC_PI_2) / 2.0, epsilon = 1e-15);
        assert_eq!(s[2].0, FRAC_PI_2);
        assert_abs_diff_eq!(s[2].1.x, 0.0, epsilon = 1e-15);
        assert_eq!(s[2].1.y, -1.0);
    }

    #[test]
    fn dense_sampling_stays_on_trace() {
        let s = sample_trace(tp(0.001), tp(FRAC_PI_2), 10_000).unwrap();
        for (t, p) in s {
            assert!(on_trace(p, 1e-9).unwrap(), "t = {t}, p = {p:?}");
        }
    }

    #[test]
    fn ray_at_right_angle_hits_node() {
        let hits = intersect_ray(FRAC_PI_2).unwrap();
        assert_eq!(hits.len(), 1);
        let h = hits[0];
        assert!(h.on_trace);
        assert_eq!(h.multiplicity, 2);
        assert_abs_diff_eq!(h.r, 2.0, epsilon = 1e-7);
        assert_abs_diff_eq!(h.point.y, 2.0, epsilon = 1e-7);
    }

    #[test]
    fn ray_at_thirty_degrees() {
        let hits = intersect_ray(FRAC_PI_6).unwrap();
        assert_eq!(hits.len(), 2);
        let on: Vec<_> = hits.iter().filter(|h| h.on_trace).collect();
        assert_eq!(on.len(), 1);
        assert_abs_diff_eq!(on[0].point.x, 4.987241, epsilon = 1e-6);
        assert_abs_diff_eq!(on[0].point.y, 2.879385, epsilon = 1e-6);
        let mirror = hits.iter().find(|h| !h.on_trace).unwrap();
        // bisection on r³ − 6r² + 8 over [1, 2]
        assert_abs_diff_eq!(mirror.r, 1.305_407_289_332_278_6, epsilon = 1e-12);
        assert_abs_diff_eq!(mirror.point.x, 1.130_515_874_847_136, epsilon = 1e-12);
        assert_abs_diff_eq!(mirror.point.y, 0.652_703_644_666_139_3, epsilon = 1e-12);
        assert!(implicit_value(mirror.point).abs() <= 1e-9 * residual_scale(mirror.point));
    }

    #[test]
    fn ray_at_straight_angle() {
        let d = pick_trisection_point(PI).unwrap();
        assert_abs_diff_eq!(d.x, -1.1547005, epsilon = 1e-7);
        assert_abs_diff_eq!(d.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ray_at_closure() {
        let d = pick_trisection_point(MAX_ANGLE).unwrap();
        assert_abs_diff_eq!(d.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.y, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn pick_examples() {
        let d = pick_trisection_point(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(d.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.y, 2.0, epsilon = 1e-7);
        let d = pick_trisection_point(2.0 * PI / 3.0).unwrap();
        assert_abs_diff_eq!(d.x, -0.777862, epsilon = 5e-7);
        assert_abs_diff_eq!(d.y, 1.347296, epsilon = 5e-7);
        assert!(implicit_value(d).abs() <= 1e-12);
    }

    #[test]
    fn angle_range() {
        assert_eq!(intersect_ray(0.0), Err(CurveError::OutOfRange(0.0)));
        assert!(intersect_ray(MAX_ANGLE + 1e-6).is_err());
        assert!(pick_trisection_point(-1.0).is_err());
    }

    #[test]
    fn distance_is_cosecant_of_third() {
        for deg in 1..=270 {
            let phi = (deg as f64).to_radians();
            let d = pick_trisection_point(phi).unwrap();
            let want = 1.0 / (phi / 3.0).sin();
            assert!((d.norm() - want).abs() <= 1e-9 * want, "phi = {deg}°");
        }
    }
}
