//! Kinematics of the T-compass and the carpenter's-square placement.
//!
//! The T's leg passes through a ring at the origin at angle `u` and slides so
//! that the midpoint `E` of its two-unit top sits at distance `s` from the
//! ring. One end of the top, `C`, rides on the straightedge line `y = 1`; the
//! other end, `D`, is the tracing pencil:
//!
//! ```text
//! E = s·(cos u, sin u)
//! C = E + (sin u, −cos u)
//! D = E − (sin u, −cos u)
//! ```
//!
//! `C.y = 1` forces `s·sin u − cos u = 1`, i.e. `s = cot(u/2)`.
//!
//! Nothing here uses the closed forms of [`crate::curve`]; the two are checked
//! against each other in tests.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::curve::MAX_ANGLE;
use crate::geom::{self, foot_of_perpendicular, wrap_positive, Line, Point};

/// Bracket margin for the leg-angle solve.
pub const BRACKET_EPS: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 200;
/// Convergence target on the angle residual, radians.
pub const ANGLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LinkageError {
    #[error("angle {0} rad out of range")]
    OutOfRange(f64),
    #[error("bad leg-angle range")]
    BadRange,
    #[error("root bracket failed for angle {0} rad")]
    BracketFailure(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkageState {
    /// Leg angle from the origin.
    pub u: f64,
    /// Slide distance `|OE|`.
    pub s: f64,
    pub c: Point,
    pub d: Point,
    pub e: Point,
}

impl LinkageState {
    /// Largest violation of the mechanism's constraints: top length 2, `E`
    /// the midpoint, leg ⊥ top, `C` on `y = 1`.
    pub fn constraint_residual(&self) -> f64 {
        let cd = self.d - self.c;
        let leg = Point::new(self.u.cos(), self.u.sin());
        [
            (cd.norm() - 2.0).abs(),
            self.e.distance(self.c.midpoint(self.d)),
            leg.dot(cd).abs(),
            (self.c.y - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlacementSolution {
    pub state: LinkageState,
    /// The angle being trisected.
    pub phi: f64,
    /// Final angle residual of the root-find, radians.
    pub residual: f64,
    pub iterations: usize,
}

pub fn state_from_leg_angle(u: f64) -> Result<LinkageState, LinkageError> {
    if !(u > 0.0 && u < PI) {
        return Err(LinkageError::OutOfRange(u));
    }
    Ok(state_unchecked(u))
}

fn state_unchecked(u: f64) -> LinkageState {
    let (sin, cos) = u.sin_cos();
    let s = 1.0 / (0.5 * u).tan();
    let e = Point::new(s * cos, s * sin);
    let half_top = Point::new(sin, -cos);
    LinkageState {
        u,
        s,
        c: e + half_top,
        d: e - half_top,
        e,
    }
}

/// States at `steps` uniformly spaced leg angles, both ends included.
pub fn trace_curve(
    u_min: f64,
    u_max: f64,
    steps: usize,
) -> Result<Vec<LinkageState>, LinkageError> {
    if steps < 2 || !(u_min > 0.0 && u_min < u_max && u_max < PI) {
        return Err(LinkageError::BadRange);
    }
    let h = (u_max - u_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let u = if i == steps - 1 {
                u_max
            } else {
                u_min + h * i as f64
            };
            state_unchecked(u)
        })
        .collect())
}

/// Polar angle of the tracing pencil, in [0, 2π).
fn pencil_angle(u: f64) -> f64 {
    let d = state_unchecked(u).d;
    geom::polar_angle(d).map(wrap_positive).unwrap_or(0.0)
}

/// Checks once that the pencil angle increases strictly with `u`; the
/// bracketed solve depends on it.
fn pencil_angle_is_monotone() -> bool {
    static MONOTONE: OnceLock<bool> = OnceLock::new();
    *MONOTONE.get_or_init(|| {
        let n = 4096;
        let lo = BRACKET_EPS;
        let hi = PI - BRACKET_EPS;
        let mut prev = pencil_angle(lo);
        (1..=n).all(|i| {
            let a = pencil_angle(lo + (hi - lo) * i as f64 / n as f64);
            let ok = a > prev;
            prev = a;
            ok
        })
    })
}

struct Root {
    x: f64,
    fx: f64,
    iterations: usize,
}

/// Bisection with secant acceleration on a sign-changing bracket.
fn bracketed_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, ftol: f64) -> Option<Root> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(Root {
            x: a,
            fx: fa,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Some(Root {
            x: b,
            fx: fb,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut best = if fa.abs() < fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    for it in 1..=MAX_ITERATIONS {
        let mid = 0.5 * (a + b);
        let secant = b - fb * (b - a) / (fb - fa);
        // Accept the secant point only when it falls well inside the bracket.
        let lo = a.min(b);
        let hi = a.max(b);
        let margin = 0.05 * (hi - lo);
        let x = if secant.is_finite() && secant > lo + margin && secant < hi - margin {
            secant
        } else {
            mid
        };
        let fx = f(x);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 || best.1.abs() <= ftol * 1e-3 || (hi - lo) <= 4.0 * f64::EPSILON * hi.abs() {
            return Some(Root {
                x: best.0,
                fx: best.1,
                iterations: it,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // After a secant step, also bisect if the bracket barely shrank.
        if x == secant {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm.abs() < best.1.abs() {
                best = (m, fm);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
    }
    (best.1.abs() <= ftol).then_some(Root {
        x: best.0,
        fx: best.1,
        iterations: MAX_ITERATIONS,
    })
}

/// Places the square for the angle `phi`: finds the leg angle whose tracing
/// pencil lies on the ray at `phi`, with the corner on `y = 1` and the inside
/// edge through the origin.
pub fn scudder_place(phi: f64) -> Result<PlacementSolution, LinkageError> {
    if !(phi > 0.0 && phi <= MAX_ANGLE + 1e-12) {
        return Err(LinkageError::OutOfRange(phi));
    }
    let phi = phi.min(MAX_ANGLE);
    if !pencil_angle_is_monotone() {
        return Err(LinkageError::BracketFailure(phi));
    }
    let g = |u: f64| pencil_angle(u) - phi;
    let lo = BRACKET_EPS;
    let mut hi = PI - BRACKET_EPS;
    // At the 270° closure the root sits at the u → π limit; widen the upper
    // end to the last representable leg angle below π.
    if g(hi) < 0.0 {
        hi = PI.next_down();
    }
    let root = match bracketed_root(g, lo, hi, ANGLE_TOL) {
        Some(r) => r,
        None => {
            let end = g(hi);
            if end.abs() <= ANGLE_TOL {
                Root {
                    x: hi,
                    fx: end,
                    iterations: 0,
                }
            } else {
                return Err(LinkageError::BracketFailure(phi));
            }
        }
    };
    if root.fx.abs() > ANGLE_TOL {
        return Err(LinkageError::BracketFailure(phi));
    }
    Ok(PlacementSolution {
        state: state_unchecked(root.x),
        phi,
        residual: root.fx.abs(),
        iterations: root.iterations,
    })
}

/// Congruence checks on a placed square; see [`crate::construct::Certificate`].
pub fn verify_placement(sol: &PlacementSolution, tol: f64) -> crate::construct::Certificate {
    let st = &sol.state;
    let mut cert = congruence_checks(st.c, st.d, st.e, tol);
    let d_angle = geom::polar_angle(st.d)
        .map(wrap_positive)
        .unwrap_or(f64::NAN);
    cert.insert("d_on_ray", geom::angle_distance(d_angle, sol.phi));
    cert
}

/// Residuals of the right-triangle congruence `COF ≅ COE ≅ DOE` for pencil
/// points `C`, `D` and leg point `E`.
pub(crate) fn congruence_checks(
    c: Point,
    d: Point,
    e: Point,
    tol: f64,
) -> crate::construct::Certificate {
    let mut cert = crate::construct::Certificate::new(tol);
    let cd = d - c;
    let cd_len = cd.norm();
    cert.insert("cd_length", (cd_len - 2.0).abs());
    cert.insert("c_on_line", (c.y - 1.0).abs());
    cert.insert("e_midpoint", e.distance(c.midpoint(d)));
    // E lies on the line through O perpendicular to CD.
    cert.insert("leg_perpendicular", e.dot(cd).abs() / cd_len);
    let f = foot_of_perpendicular(c, &Line::x_axis());
    cert.insert("cf_length", (c.distance(f) - 1.0).abs());
    cert.insert("oc_equals_od", (c.norm() - d.norm()).abs());

    // Leg direction from the top, so the check survives E → O at 270°.
    let leg = (c - d).perp();
    let angle = |p: Point| geom::polar_angle(p).map(wrap_positive).unwrap_or(f64::NAN);
    let (ac, ae, ad) = (angle(c), angle(leg), angle(d));
    let sectors = [ac, wrap_positive(ae - ac), wrap_positive(ad - ae)];
    let hi = sectors.iter().copied().fold(f64::MIN, f64::max);
    let lo = sectors.iter().copied().fold(f64::MAX, f64::min);
    cert.insert("equal_sectors", hi - lo);
    cert
}
