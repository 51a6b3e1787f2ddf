//! Command-line front end: argument parsing, CSV/SVG/JSON emission, and the
//! exit-status contract (0 pass, 1 verification failure, 2 usage error).

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::construct::{self, ConstructError, Method, TrisectionResult};
use crate::curve::{self, CurveError, TraceParam, DEFAULT_T_MIN};
use crate::geom::{wrap_positive, Point};
use crate::linkage::{self, LinkageError, LinkageState};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("angle {0}° outside (0, 270]")]
    OutOfRange(f64),
    #[error("construction failed: {0}")]
    Construct(#[from] ConstructError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            // Internal inconsistencies surface as verification failures.
            CliError::Construct(
                ConstructError::EmptyIntersection
                | ConstructError::Curve(CurveError::NoTraceRoot(_))
                | ConstructError::Linkage(LinkageError::BracketFailure(_)),
            ) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "trisectrix",
    version,
    about = "Trace and verify the carpenter's-square trisectrix"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the drawn branch of the curve.
    Curve(CurveArgs),
    /// Trisect one angle.
    Trisect(TrisectArgs),
    /// Run the drawing compass over a range of leg angles.
    Simulate(SimulateArgs),
    /// Trisect and verify every angle on a degree grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Curve,
    Scudder,
    Both,
}

impl MethodArg {
    fn methods(self) -> &'static [Method] {
        match self {
            MethodArg::Curve => &[Method::Curve],
            MethodArg::Scudder => &[Method::Scudder],
            MethodArg::Both => &[Method::Curve, Method::Scudder],
        }
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = DEFAULT_T_MIN.to_degrees())]
    pub t_min_deg: f64,
    #[arg(long, default_value_t = 90.0)]
    pub t_max_deg: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrisectArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub angle_deg: f64,
    #[arg(long, value_enum, default_value = "curve")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the diagram here when the main output is JSON.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub u_min_deg: f64,
    #[arg(long, default_value_t = 179.0)]
    pub u_max_deg: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    pub from_deg: f64,
    #[arg(long, default_value_t = 269.0)]
    pub to_deg: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step_deg: f64,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    /// Overrides the per-method default (1e-9 curve, 1e-7 scudder).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Drawing parameters for SVG output. The world window maps to the canvas
/// with one uniform scale and y pointing up.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub width_px: u32,
    pub height_px: u32,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub stroke_px: f64,
    pub thin_stroke_px: f64,
    pub curve_color: &'static str,
    pub construction_color: &'static str,
    pub ray_color: &'static str,
    pub axis_color: &'static str,
    pub precision: usize,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width_px: 900,
            height_px: 600,
            x_min: -3.0,
            x_max: 6.0,
            y_min: -2.0,
            y_max: 4.0,
            stroke_px: 2.0,
            thin_stroke_px: 1.0,
            curve_color: "#1f5fa8",
            construction_color: "#888888",
            ray_color: "#c0392b",
            axis_color: "#000000",
            precision: 6,
        }
    }
}

impl RenderSpec {
    pub fn with_precision(precision: usize) -> Result<Self, CliError> {
        let spec = RenderSpec {
            precision,
            ..RenderSpec::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check_precision(self.precision)?;
        let ok = self.x_max > self.x_min
            && self.y_max > self.y_min
            && self.width_px > 0
            && self.height_px > 0;
        if !ok {
            return Err(CliError::Usage("degenerate render window".into()));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        (self.width_px as f64 / (self.x_max - self.x_min))
            .min(self.height_px as f64 / (self.y_max - self.y_min))
    }

    fn to_screen(&self, p: Point) -> (f64, f64) {
        let k = self.scale();
        ((p.x - self.x_min) * k, (self.y_max - p.y) * k)
    }

    fn num(&self, v: f64) -> String {
        fmt_fixed(v, self.precision)
    }

    fn xy(&self, p: Point) -> (String, String) {
        let (x, y) = self.to_screen(p);
        (self.num(x), self.num(y))
    }
}

fn check_precision(p: usize) -> Result<(), CliError> {
    if (1..=15).contains(&p) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("precision {p} outside [1, 15]")))
    }
}

/// Fixed-point formatting that never emits a negative zero.
pub fn fmt_fixed(v: f64, precision: usize) -> String {
    let s = format!("{v:.precision$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_owned()
    } else {
        s
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig12(n.as_f64().unwrap_or(0.0));
            Value::from(if x == 0.0 { 0.0 } else { x })
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = round_json(serde_json::to_value(value)?);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportPoints {
    pub c: Point,
    pub d: Point,
    pub e: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub angle_deg: f64,
    pub method: Method,
    pub ray1_deg: f64,
    pub ray2_deg: f64,
    /// Largest verification residual.
    pub error_rad: f64,
    pub points: ReportPoints,
    pub tolerance: f64,
    pub pass: bool,
}

impl Report {
    pub fn new(angle_deg: f64, res: &TrisectionResult, tol: f64) -> Self {
        let cert = construct::verify_trisection(res, tol);
        let error_rad = cert.max_residual();
        Report {
            angle_deg,
            method: res.method,
            ray1_deg: wrap_positive(res.ray1.angle).to_degrees(),
            ray2_deg: wrap_positive(res.ray2.angle).to_degrees(),
            error_rad,
            points: ReportPoints {
                c: res.c,
                d: res.d,
                e: res.e,
            },
            tolerance: tol,
            pass: cert.pass && error_rad <= tol,
        }
    }
}

pub fn curve_csv(samples: &[(f64, Point)], precision: usize) -> String {
    let mut out = String::from("t_deg,x,y\n");
    for (t, p) in samples {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_fixed(t.to_degrees(), precision),
            fmt_fixed(p.x, precision),
            fmt_fixed(p.y, precision)
        );
    }
    out
}

pub fn simulate_csv(states: &[LinkageState], precision: usize) -> String {
    let mut out = String::from("u_deg,s,Cx,Cy,Dx,Dy,Ex,Ey\n");
    for st in states {
        let cols = [
            st.u.to_degrees(),
            st.s,
            st.c.x,
            st.c.y,
            st.d.x,
            st.d.y,
            st.e.x,
            st.e.y,
        ];
        let row: Vec<String> = cols.iter().map(|v| fmt_fixed(*v, precision)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn svg_open(spec: &RenderSpec, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = spec.width_px,
        h = spec.height_px
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(
        s,
        r#"<rect class="background" x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        spec.width_px, spec.height_px
    );
    s
}

fn svg_line(s: &mut String, spec: &RenderSpec, a: Point, b: Point, class: &str, style: &str) {
    let (x1, y1) = spec.xy(a);
    let (x2, y2) = spec.xy(b);
    let _ = writeln!(
        s,
        r#"<line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>"#
    );
}

fn svg_polyline(s: &mut String, spec: &RenderSpec, pts: &[Point]) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = spec.xy(*p);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline class="trace" points="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
        coords.join(" "),
        spec.curve_color,
        spec.num(spec.stroke_px)
    );
}

fn svg_marker(s: &mut String, spec: &RenderSpec, p: Point, class: &str) {
    let (x, y) = spec.to_screen(p);
    let half = 3.0;
    let _ = writeln!(
        s,
        r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
        spec.num(x - half),
        spec.num(y - half),
        spec.num(2.0 * half),
        spec.num(2.0 * half),
        spec.axis_color
    );
}

fn svg_label(s: &mut String, spec: &RenderSpec, p: Point, text: &str) {
    let (x, y) = spec.to_screen(p);
    let _ = writeln!(
        s,
        r#"<text class="label" x="{}" y="{}" font-family="serif" font-size="16">{text}</text>"#,
        spec.num(x + 6.0),
        spec.num(y - 6.0)
    );
}

fn svg_axes(s: &mut String, spec: &RenderSpec) {
    let style = format!(
        r#"stroke="{}" stroke-width="{}""#,
        spec.axis_color,
        spec.num(spec.thin_stroke_px)
    );
    svg_line(
        s,
        spec,
        Point::new(spec.x_min, 0.0),
        Point::new(spec.x_max, 0.0),
        "axis",
        &style,
    );
    svg_line(
        s,
        spec,
        Point::new(0.0, spec.y_min),
        Point::new(0.0, spec.y_max),
        "axis",
        &style,
    );
}

fn dashed(spec: &RenderSpec) -> String {
    format!(
        r#"stroke="{}" stroke-width="{}" stroke-dasharray="6 4""#,
        spec.construction_color,
        spec.num(spec.thin_stroke_px)
    )
}

/// The sampled trace with axes, the asymptote `y = 3`, and the node.
pub fn curve_svg(samples: &[(f64, Point)], spec: &RenderSpec) -> String {
    let mut s = svg_open(spec, "carpenter's square curve");
    svg_axes(&mut s, spec);
    svg_line(
        &mut s,
        spec,
        Point::new(spec.x_min, 3.0),
        Point::new(spec.x_max, 3.0),
        "asymptote",
        &dashed(spec),
    );
    let pts: Vec<Point> = samples.iter().map(|(_, p)| *p).collect();
    svg_polyline(&mut s, spec, &pts);
    svg_marker(&mut s, spec, Point::new(0.0, 2.0), "node");
    s.push_str("</svg>\n");
    s
}

/// The construction for one trisection.
pub fn trisect_svg(res: &TrisectionResult, spec: &RenderSpec) -> Result<String, CliError> {
    let mut s = svg_open(spec, "trisection");
    let o = Point::ORIGIN;
    let reach = (spec.x_max - spec.x_min).hypot(spec.y_max - spec.y_min);
    let side = format!(
        r#"stroke="{}" stroke-width="{}""#,
        spec.axis_color,
        spec.num(spec.stroke_px)
    );
    let a = Point::new(reach, 0.0);
    let b = Point::from_polar(reach, res.phi);
    svg_line(&mut s, spec, o, a, "side", &side);
    svg_line(&mut s, spec, o, b, "side", &side);
    svg_line(
        &mut s,
        spec,
        Point::new(spec.x_min, 1.0),
        Point::new(spec.x_max, 1.0),
        "offset-line",
        &dashed(spec),
    );

    let t_min = TraceParam::new(DEFAULT_T_MIN).map_err(ConstructError::from)?;
    let t_max = TraceParam::new(FRAC_PI_2).map_err(ConstructError::from)?;
    let trace = curve::sample_trace(t_min, t_max, 600).map_err(ConstructError::from)?;
    let pts: Vec<Point> = trace.iter().map(|(_, p)| *p).collect();
    svg_polyline(&mut s, spec, &pts);

    match res.method {
        Method::Curve => {
            let (cx, cy) = spec.xy(res.d);
            let _ = writeln!(
                s,
                r#"<circle class="construction" cx="{cx}" cy="{cy}" r="{}" fill="none" {}/>"#,
                spec.num(2.0 * spec.scale()),
                dashed(spec)
            );
        }
        Method::Scudder => {
            let tool = format!(
                r#"stroke="{}" stroke-width="{}""#,
                spec.construction_color,
                spec.num(spec.stroke_px)
            );
            svg_line(&mut s, spec, res.c, res.d, "tool", &tool);
            svg_line(&mut s, spec, o, res.e, "tool", &tool);
        }
    }

    let ray = format!(
        r#"stroke="{}" stroke-width="{}""#,
        spec.ray_color,
        spec.num(spec.stroke_px)
    );
    for r in [res.ray1, res.ray2] {
        svg_line(&mut s, spec, o, r.point_at(reach), "trisector", &ray);
    }

    let labelled = [
        (o, "O"),
        (Point::new(0.8 * spec.x_max, 0.0), "A"),
        (Point::from_polar(2.5, res.phi), "B"),
        (res.c, "C"),
        (res.d, "D"),
        (res.e, "E"),
    ];
    for (p, name) in labelled {
        svg_marker(&mut s, spec, p, "point");
        svg_label(&mut s, spec, p, name);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes `contents` to `path` through a temp file and rename, or to stdout.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| e.error)?;
        }
    }
    Ok(())
}

pub fn cmd_curve(args: &CurveArgs) -> Result<Outcome, CliError> {
    let (lo, hi) = (args.t_min_deg, args.t_max_deg);
    if !(lo > 0.0 && lo < hi && hi <= 90.0) || args.samples < 2 {
        return Err(CliError::BadRange(format!(
            "need 0 < t-min-deg < t-max-deg <= 90 and samples >= 2, got {lo}, {hi}, {}",
            args.samples
        )));
    }
    check_precision(args.precision)?;
    let bad = |_| CliError::BadRange("trace parameter".into());
    let t_min = TraceParam::new(lo.to_radians()).map_err(bad)?;
    let t_max = TraceParam::new(hi.to_radians()).map_err(bad)?;
    let samples = curve::sample_trace(t_min, t_max, args.samples).map_err(bad)?;
    let all_on = samples
        .iter()
        .all(|(_, p)| curve::on_trace(*p, 1e-9).unwrap_or(false));
    let text = match args.format {
        Format::Csv => curve_csv(&samples, args.precision),
        Format::Svg => curve_svg(&samples, &RenderSpec::with_precision(args.precision)?),
        Format::Json => return Err(CliError::Usage("curve writes csv or svg".into())),
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(Outcome::from_pass(all_on))
}

pub fn cmd_trisect(args: &TrisectArgs) -> Result<Outcome, CliError> {
    let deg = args.angle_deg;
    if !(deg > 0.0 && deg <= 270.0) {
        return Err(CliError::OutOfRange(deg));
    }
    if !(args.tol > 0.0) {
        return Err(CliError::Usage("tol must be positive".into()));
    }
    let method = match args.method {
        MethodArg::Curve => Method::Curve,
        MethodArg::Scudder => Method::Scudder,
        MethodArg::Both => return Err(CliError::Usage("trisect takes curve or scudder".into())),
    };
    let res = method.trisect(deg.to_radians())?;
    let report = Report::new(deg, &res, args.tol);
    let spec = RenderSpec::with_precision(args.precision)?;
    match args.format {
        Format::Json => write_output(args.out.as_deref(), &to_json(&report)?)?,
        Format::Svg => write_output(args.out.as_deref(), &trisect_svg(&res, &spec)?)?,
        Format::Csv => return Err(CliError::Usage("trisect writes json or svg".into())),
    }
    if let Some(svg) = &args.svg {
        write_output(Some(svg), &trisect_svg(&res, &spec)?)?;
    }
    Ok(Outcome::from_pass(report.pass))
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let (lo, hi) = (args.u_min_deg, args.u_max_deg);
    if !(lo > 0.0 && lo < hi && hi < 180.0) || args.steps < 2 {
        return Err(CliError::BadRange(format!(
            "need 0 < u-min-deg < u-max-deg < 180 and steps >= 2, got {lo}, {hi}, {}",
            args.steps
        )));
    }
    check_precision(args.precision)?;
    let states = linkage::trace_curve(lo.to_radians(), hi.to_radians(), args.steps)
        .map_err(|_| CliError::BadRange("leg angle".into()))?;
    let ok = states.iter().all(|st| st.constraint_residual() <= 1e-12);
    write_output(args.out.as_deref(), &simulate_csv(&states, args.precision))?;
    Ok(Outcome::from_pass(ok))
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    if args.format != Format::Json {
        return Err(CliError::Usage("sweep writes json".into()));
    }
    if matches!(args.tol, Some(t) if !(t > 0.0)) {
        return Err(CliError::Usage("tol must be positive".into()));
    }
    let report = construct::sweep_verify_methods(
        args.from_deg,
        args.to_deg,
        args.step_deg,
        args.method.methods(),
        args.tol,
    )
    .map_err(|e| match e {
        ConstructError::BadRange => CliError::BadRange(format!(
            "need 0 < from-deg <= to-deg < 270 and step-deg > 0, got {}, {}, {}",
            args.from_deg, args.to_deg, args.step_deg
        )),
        other => other.into(),
    })?;
    write_output(args.out.as_deref(), &to_json(&report)?)?;
    Ok(Outcome::from_pass(report.pass()))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Curve(a) => cmd_curve(a),
        Command::Trisect(a) => cmd_trisect(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}
