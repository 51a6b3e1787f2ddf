//! Plane-geometry kernel: points, rays, lines, circles, their intersections,
//! and a real-cubic solver.
//!
//! Lengths are dimensionless multiples of the straightedge width. Angles are
//! radians throughout.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Determinant threshold below which two lines count as parallel.
pub const PARALLEL_TOL: f64 = 1e-12;

/// Relative discriminant threshold (in units of radius²) for circle–line tangency.
pub const TANGENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("lines are parallel")]
    ParallelLines,
    #[error("the origin has no polar angle")]
    OriginHasNoAngle,
    #[error("rays do not share an origin")]
    DistinctOrigins,
    #[error("all polynomial coefficients are zero")]
    AllCoefficientsZero,
    #[error("degenerate line: normal vector is zero")]
    DegenerateLine,
    #[error("circle radius must be finite and positive")]
    BadRadius,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point::new(r * c, r * s)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    /// Rotation by +90°.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Wraps an angle into (−π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Wraps an angle into [0, 2π).
pub fn wrap_positive(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Smallest absolute difference between two angles, in [0, π].
pub fn angle_distance(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub origin: Point,
    /// Direction in (−π, π].
    pub angle: f64,
}

impl Ray {
    pub fn new(origin: Point, angle: f64) -> Self {
        Ray {
            origin,
            angle: normalize_angle(angle),
        }
    }

    /// Ray from `origin` through `p`.
    pub fn through(origin: Point, p: Point) -> Result<Self, GeomError> {
        let angle = polar_angle(p - origin)?;
        Ok(Ray { origin, angle })
    }

    pub fn direction(&self) -> Point {
        Point::from_polar(1.0, self.angle)
    }

    pub fn point_at(&self, d: f64) -> Point {
        self.origin + self.direction() * d
    }
}

/// A line `a·x + b·y = c` with `a² + b² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    a: f64,
    b: f64,
    c: f64,
}

impl Line {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeomError> {
        let n = a.hypot(b);
        if !(n > 0.0) || !n.is_finite() || !c.is_finite() {
            return Err(GeomError::DegenerateLine);
        }
        Ok(Line {
            a: a / n,
            b: b / n,
            c: c / n,
        })
    }

    /// The line `y = y0`.
    pub fn horizontal(y0: f64) -> Self {
        Line {
            a: 0.0,
            b: 1.0,
            c: y0,
        }
    }

    /// The line `x = x0`.
    pub fn vertical(x0: f64) -> Self {
        Line {
            a: 1.0,
            b: 0.0,
            c: x0,
        }
    }

    pub fn x_axis() -> Self {
        Line::horizontal(0.0)
    }

    pub fn y_axis() -> Self {
        Line::vertical(0.0)
    }

    pub fn through(p: Point, q: Point) -> Result<Self, GeomError> {
        let d = q - p;
        Line::new(-d.y, d.x, -d.y * p.x + d.x * p.y)
    }

    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    pub fn normal(&self) -> Point {
        Point::new(self.a, self.b)
    }

    /// Signed distance from `p`, positive on the side the normal points to.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.a * p.x + self.b * p.y - self.c
    }

    pub fn translated(&self, by: Point) -> Self {
        Line {
            a: self.a,
            b: self.b,
            c: self.c + self.a * by.x + self.b * by.y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GeomError::BadRadius);
        }
        Ok(Circle { center, radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

pub fn intersect_lines(l1: &Line, l2: &Line) -> Result<Point, GeomError> {
    let det = l1.a * l2.b - l2.a * l1.b;
    if det.abs() < PARALLEL_TOL {
        return Err(GeomError::ParallelLines);
    }
    let x = (l1.c * l2.b - l2.c * l1.b) / det;
    let y = (l1.a * l2.c - l2.a * l1.c) / det;
    Ok(Point::new(x, y))
}

/// Intersections of a circle with a line, sorted by ascending x then y.
///
/// A discriminant within [`TANGENCY_TOL`]·r² of zero yields the single
/// tangent point.
pub fn intersect_circle_line(c: &Circle, l: &Line) -> Vec<Point> {
    let r = c.radius;
    let d = l.signed_distance(c.center);
    let foot = c.center - l.normal() * d;
    let disc = r * r - d * d;
    if disc.abs() <= TANGENCY_TOL * r * r {
        return vec![foot];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let ad = d.abs();
    let h = ((r - ad) * (r + ad)).sqrt();
    let dir = l.normal().perp();
    let mut pts = vec![foot + dir * h, foot - dir * h];
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    pts
}

/// Polar angle of `p` about the origin, in (−π, π].
pub fn polar_angle(p: Point) -> Result<f64, GeomError> {
    if p.x == 0.0 && p.y == 0.0 {
        return Err(GeomError::OriginHasNoAngle);
    }
    let a = p.y.atan2(p.x);
    Ok(if a <= -PI { PI } else { a })
}

pub fn foot_of_perpendicular(p: Point, l: &Line) -> Point {
    p - l.normal() * l.signed_distance(p)
}

/// Bisector of the counterclockwise sweep from `r1` to `r2`.
pub fn bisect_angle(r1: &Ray, r2: &Ray) -> Result<Ray, GeomError> {
    if r1.origin.distance(r2.origin) > 1e-12 {
        return Err(GeomError::DistinctOrigins);
    }
    let sweep = wrap_positive(r2.angle - r1.angle);
    Ok(Ray::new(r1.origin, r1.angle + 0.5 * sweep))
}

fn eval_cubic(c: [f64; 4], r: f64) -> f64 {
    ((c[0] * r + c[1]) * r + c[2]) * r + c[3]
}

fn eval_cubic_deriv(c: [f64; 4], r: f64) -> f64 {
    (3.0 * c[0] * r + 2.0 * c[1]) * r + c[2]
}

/// Roots of the monic cubic `x³ + b·x² + c·x + d`, closed form.
fn monic_cubic_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    let shift = b / 3.0;
    let p = c - b * shift;
    let q = 2.0 * shift * shift * shift - shift * c + d;
    if p == 0.0 && q == 0.0 {
        return vec![-shift; 3];
    }
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let cube = third_p * third_p * third_p;
    let disc = half_q * half_q + cube;
    // Rounding can push a true zero discriminant slightly positive; treat that
    // as the repeated-root case.
    if p < 0.0 && disc <= 1e-14 * cube.abs() {
        let m = 2.0 * (-third_p).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        return (0..3)
            .map(|k| m * (theta - TAU * k as f64 / 3.0).cos() - shift)
            .collect();
    }
    // One real root; pick the sign that avoids cancellation.
    let sq = disc.sqrt();
    let w = if half_q >= 0.0 {
        -half_q - sq
    } else {
        -half_q + sq
    };
    let u = w.cbrt();
    let y = if u == 0.0 { 0.0 } else { u - third_p / u };
    vec![y - shift]
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc.abs() <= 1e-14 * (b * b).max((4.0 * a * c).abs()) {
            let r = -b / (2.0 * a);
            return vec![r, r];
        }
        return Vec::new();
    }
    if disc == 0.0 {
        let r = -b / (2.0 * a);
        return vec![r, r];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b == 0 and c == 0
        return vec![0.0, 0.0];
    }
    let mut v = vec![q / a, c / q];
    v.sort_by(f64::total_cmp);
    v
}

fn polish(coef: [f64; 4], mut r: f64) -> f64 {
    let mut fr = eval_cubic(coef, r);
    for _ in 0..8 {
        if fr == 0.0 {
            break;
        }
        let df = eval_cubic_deriv(coef, r);
        if df == 0.0 || !df.is_finite() {
            break;
        }
        let next = r - fr / df;
        let fnext = eval_cubic(coef, next);
        if !(fnext.abs() < fr.abs()) {
            break;
        }
        r = next;
        fr = fnext;
    }
    r
}

/// Real roots of `c3·r³ + c2·r² + c1·r + c0`, ascending, repeated roots
/// listed with multiplicity.
///
/// Uses the trigonometric form when all three roots are real and Cardano's
/// formula otherwise, then Newton-polishes each root against the original
/// coefficients. A vanishing leading coefficient degrades to the quadratic or
/// linear case. When `c3` is tiny relative to the other coefficients the
/// reversed polynomial is solved instead, so the small roots keep full
/// precision.
pub fn solve_cubic(c3: f64, c2: f64, c1: f64, c0: f64) -> Result<Vec<f64>, GeomError> {
    if c3 == 0.0 {
        if c2 == 0.0 {
            if c1 == 0.0 {
                return if c0 == 0.0 {
                    Err(GeomError::AllCoefficientsZero)
                } else {
                    Ok(Vec::new())
                };
            }
            return Ok(vec![-c0 / c1]);
        }
        return Ok(quadratic_roots(c2, c1, c0));
    }
    let coef = [c3, c2, c1, c0];
    let rest = c2.abs().max(c1.abs()).max(c0.abs());
    let raw = if c3.abs() < 1e-6 * rest && c0 != 0.0 {
        // Roots of c0·w³ + c1·w² + c2·w + c3 are reciprocals.
        monic_cubic_roots(c1 / c0, c2 / c0, c3 / c0)
            .into_iter()
            .filter(|w| *w != 0.0)
            .map(|w| 1.0 / w)
            .collect()
    } else {
        monic_cubic_roots(c2 / c3, c1 / c3, c0 / c3)
    };
    let mut roots: Vec<f64> = raw.into_iter().map(|r| polish(coef, r)).collect();
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}
