//! End-to-end trisection pipelines and their verification.
//!
//! Two independent routes produce the trisecting rays of an angle `φ` laid off
//! counterclockwise from the positive x-axis:
//!
//! - **curve**: intersect the side `OB` with the drawn curve at `D`, swing a
//!   radius-2 circle about `D` onto `y = 1`, take the right-most hit as `C`,
//!   and bisect `∠COD`.
//! - **scudder**: place the square directly by solving for the leg angle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{self, CurveError};
use crate::geom::{
    self, angle_distance, bisect_angle, intersect_circle_line, wrap_positive, Circle, GeomError,
    Line, Point, Ray,
};
use crate::linkage::{self, LinkageError};

/// Default verification tolerance for the curve route, radians.
pub const CURVE_TOL: f64 = 1e-9;
/// Default verification tolerance for the placement route, radians.
pub const SCUDDER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ConstructError {
    #[error("angle {0} rad outside (0, 3π/2]")]
    OutOfRange(f64),
    #[error("radius-2 circle about D misses the line y = 1")]
    EmptyIntersection,
    #[error("bad sweep range")]
    BadRange,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Linkage(#[from] LinkageError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Curve,
    Scudder,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Curve => "curve",
            Method::Scudder => "scudder",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Method::Curve => CURVE_TOL,
            Method::Scudder => SCUDDER_TOL,
        }
    }

    pub fn trisect(self, phi: f64) -> Result<TrisectionResult, ConstructError> {
        match self {
            Method::Curve => trisect_via_curve(phi),
            Method::Scudder => trisect_via_scudder(phi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrisectionResult {
    pub phi: f64,
    pub method: Method,
    /// Claimed to sit at `φ/3`.
    pub ray1: Ray,
    /// Claimed to sit at `2φ/3`.
    pub ray2: Ray,
    pub c: Point,
    pub d: Point,
    /// Point of the T's leg at the middle of `CD`.
    pub e: Point,
    pub residual_rad: f64,
}

impl TrisectionResult {
    /// Worst deviation of either ray from its target, radians.
    pub fn angle_error(&self) -> f64 {
        angle_distance(self.ray1.angle, self.phi / 3.0)
            .max(angle_distance(self.ray2.angle, 2.0 * self.phi / 3.0))
    }
}

/// Named residuals with a single tolerance; passes iff every residual does.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub residuals: BTreeMap<String, f64>,
    pub pass: bool,
    pub tolerance: f64,
}

impl Certificate {
    pub fn new(tolerance: f64) -> Self {
        Certificate {
            residuals: BTreeMap::new(),
            pass: true,
            tolerance,
        }
    }

    pub fn insert(&mut self, name: &str, residual: f64) {
        self.residuals.insert(name.to_owned(), residual);
        self.pass = self.residuals.values().all(|r| *r <= self.tolerance);
    }

    /// Names of the residuals over tolerance (NaN counts as over).
    pub fn failures(&self) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(_, r)| !(**r <= self.tolerance))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

fn check_angle(phi: f64) -> Result<f64, ConstructError> {
    curve::check_angle(phi).map_err(|_| ConstructError::OutOfRange(phi))
}

/// Builds the rays from given witness points: `OC` is the first trisector
/// and the bisector of `∠COD` the second.
pub fn complete_construction(
    phi: f64,
    method: Method,
    c: Point,
    d: Point,
) -> Result<TrisectionResult, ConstructError> {
    let ray1 = Ray::through(Point::ORIGIN, c)?;
    let ray_d = Ray::through(Point::ORIGIN, d)?;
    let ray2 = bisect_angle(&ray1, &ray_d)?;
    Ok(TrisectionResult {
        phi,
        method,
        ray1,
        ray2,
        c,
        d,
        e: c.midpoint(d),
        residual_rad: angle_distance(ray1.angle, phi / 3.0),
    })
}

/// Both intersections of the radius-`2w` circle about `d` with `y = w`,
/// ascending in x.
pub fn chord_candidates(d: Point, width: f64) -> Result<Vec<Point>, ConstructError> {
    let circle = Circle::new(d, 2.0 * width)?;
    Ok(intersect_circle_line(&circle, &Line::horizontal(width)))
}

/// Completes the curve construction from a chosen point `d` on the side `OB`.
pub fn trisect_from_pencil(phi: f64, d: Point) -> Result<TrisectionResult, ConstructError> {
    let c = *chord_candidates(d, 1.0)?
        .last()
        .ok_or(ConstructError::EmptyIntersection)?;
    complete_construction(phi, Method::Curve, c, d)
}

pub fn trisect_via_curve(phi: f64) -> Result<TrisectionResult, ConstructError> {
    let phi = check_angle(phi)?;
    let d = curve::pick_trisection_point(phi)?;
    trisect_from_pencil(phi, d)
}

/// The curve construction for a device of straightedge width `width`: every
/// length scales, the angles do not.
pub fn trisect_via_curve_scaled(phi: f64, width: f64) -> Result<TrisectionResult, ConstructError> {
    let phi = check_angle(phi)?;
    let d = curve::pick_trisection_point(phi)? * width;
    let c = *chord_candidates(d, width)?
        .last()
        .ok_or(ConstructError::EmptyIntersection)?;
    complete_construction(phi, Method::Curve, c, d)
}

pub fn trisect_via_scudder(phi: f64) -> Result<TrisectionResult, ConstructError> {
    let phi = check_angle(phi)?;
    let sol = linkage::scudder_place(phi)?;
    let st = sol.state;
    let ray1 = Ray::through(Point::ORIGIN, st.c)?;
    // The inside edge runs along the leg.
    let ray2 = Ray::new(Point::ORIGIN, st.u);
    Ok(TrisectionResult {
        phi,
        method: Method::Scudder,
        ray1,
        ray2,
        c: st.c,
        d: st.d,
        e: st.e,
        residual_rad: angle_distance(ray1.angle, phi / 3.0),
    })
}

/// Checks a result against the target thirds and the construction's
/// metric constraints.
pub fn verify_trisection(res: &TrisectionResult, tol: f64) -> Certificate {
    let mut cert = Certificate::new(tol);
    let phi = res.phi;
    cert.insert("ray1", angle_distance(res.ray1.angle, phi / 3.0));
    cert.insert("ray2", angle_distance(res.ray2.angle, 2.0 * phi / 3.0));
    let a1 = wrap_positive(res.ray1.angle);
    let a2 = wrap_positive(res.ray2.angle);
    let sectors = [a1, a2 - a1, phi - a2];
    let hi = sectors.iter().copied().fold(f64::MIN, f64::max);
    let lo = sectors.iter().copied().fold(f64::MAX, f64::min);
    cert.insert("equal_sectors", hi - lo);
    let d_angle = geom::polar_angle(res.d)
        .map(wrap_positive)
        .unwrap_or(f64::NAN);
    cert.insert("d_on_ray", angle_distance(d_angle, phi));
    cert.insert("c_on_line", (res.c.y - 1.0).abs());
    cert.insert("cd_length", (res.c.distance(res.d) - 2.0).abs());
    cert
}

/// Right-triangle congruence residuals (`COF ≅ COE ≅ DOE`) for any result.
pub fn congruence_certificate(res: &TrisectionResult, tol: f64) -> Certificate {
    let mut cert = linkage::congruence_checks(res.c, res.d, res.e, tol);
    let d_angle = geom::polar_angle(res.d)
        .map(wrap_positive)
        .unwrap_or(f64::NAN);
    cert.insert("d_on_ray", angle_distance(d_angle, res.phi));
    cert
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSweep {
    pub method: Method,
    pub count: usize,
    pub tolerance: f64,
    pub max_error_rad: f64,
    pub mean_error_rad: f64,
    pub argmax_deg: f64,
    /// Angles, in degrees, whose construction failed or did not verify.
    pub failures: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub phi_min_deg: f64,
    pub phi_max_deg: f64,
    pub step_deg: f64,
    pub methods: Vec<MethodSweep>,
}

impl SweepReport {
    pub fn pass(&self) -> bool {
        self.methods.iter().all(|m| m.failures.is_empty())
    }
}

/// The inclusive degree grid `min, min + step, …` up to `max`.
pub fn sweep_grid(min_deg: f64, max_deg: f64, step_deg: f64) -> Result<Vec<f64>, ConstructError> {
    let ok = min_deg > 0.0
        && min_deg <= max_deg
        && max_deg < 270.0
        && step_deg > 0.0
        && step_deg.is_finite();
    if !ok {
        return Err(ConstructError::BadRange);
    }
    let n = ((max_deg - min_deg) / step_deg + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| min_deg + step_deg * i as f64).collect())
}

fn sweep_method(grid: &[f64], method: Method, tol: f64) -> MethodSweep {
    let mut max_error = 0.0;
    let mut argmax = grid[0];
    let mut total = 0.0;
    let mut failures = Vec::new();
    for &deg in grid {
        let phi = deg.to_radians();
        match method.trisect(phi) {
            Ok(res) => {
                let err = res.angle_error();
                total += err;
                if err > max_error {
                    max_error = err;
                    argmax = deg;
                }
                if !verify_trisection(&res, tol).pass {
                    failures.push(deg);
                }
            }
            Err(_) => failures.push(deg),
        }
    }
    MethodSweep {
        method,
        count: grid.len(),
        tolerance: tol,
        max_error_rad: max_error,
        mean_error_rad: total / grid.len() as f64,
        argmax_deg: argmax,
        failures,
    }
}

pub fn sweep_verify(
    phi_min_deg: f64,
    phi_max_deg: f64,
    step_deg: f64,
    method: Method,
) -> Result<SweepReport, ConstructError> {
    sweep_verify_methods(phi_min_deg, phi_max_deg, step_deg, &[method], None)
}

/// Sweeps several methods over one grid. `tol` overrides each method's
/// default tolerance.
pub fn sweep_verify_methods(
    phi_min_deg: f64,
    phi_max_deg: f64,
    step_deg: f64,
    methods: &[Method],
    tol: Option<f64>,
) -> Result<SweepReport, ConstructError> {
    let grid = sweep_grid(phi_min_deg, phi_max_deg, step_deg)?;
    let methods = methods
        .iter()
        .map(|m| sweep_method(&grid, *m, tol.unwrap_or(m.default_tolerance())))
        .collect();
    Ok(SweepReport {
        phi_min_deg,
        phi_max_deg,
        step_deg,
        methods,
    })
}
