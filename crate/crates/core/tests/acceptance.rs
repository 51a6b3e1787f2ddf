//! Acceptance suite. Every criterion prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trisectrix::construct::{
    self, congruence_certificate, trisect_from_pencil, trisect_via_curve, trisect_via_scudder,
    verify_trisection,
};
use trisectrix::curve::{
    self, half_chord, implicit_gradient, implicit_value, trace_point, TraceParam,
};
use trisectrix::geom::{polar_angle, solve_cubic, Point};
use trisectrix::linkage::{self, verify_placement, MAX_ITERATIONS};

const TIME_LIMIT: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sweep_grid() -> impl Iterator<Item = (u32, f64)> {
    (1..=269u32).map(|d| (d, f64::from(d).to_radians()))
}

fn trace(t: f64) -> Point {
    trace_point(TraceParam::new(t).unwrap())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac01_curve_sweep() -> Outcome {
    let mut worst: f64 = 0.0;
    for (deg, phi) in sweep_grid() {
        let r = trisect_via_curve(phi).map_err(|e| format!("{deg}°: {e}"))?;
        let e1 = (r.ray1.angle - phi / 3.0).abs();
        let e2 = (r.ray2.angle - 2.0 * phi / 3.0).abs();
        worst = worst.max(e1).max(e2);
        ensure(e1 <= 1e-9 && e2 <= 1e-9, || {
            format!("{deg}°: errors {e1:e}, {e2:e}")
        })?;
        ensure(verify_trisection(&r, 1e-9).pass, || {
            format!("{deg}°: certificate failed")
        })?;
    }
    Ok(format!("max error {worst:.2e} rad, 0 failures"))
}

fn ac02_scudder_sweep() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut most_iters = 0;
    for (deg, phi) in sweep_grid() {
        let sol = linkage::scudder_place(phi).map_err(|e| format!("{deg}°: {e}"))?;
        most_iters = most_iters.max(sol.iterations);
        let r = trisect_via_scudder(phi).map_err(|e| format!("{deg}°: {e}"))?;
        let e1 = (r.ray1.angle - phi / 3.0).abs();
        let e2 = (r.ray2.angle - 2.0 * phi / 3.0).abs();
        worst = worst.max(e1).max(e2);
        ensure(e1 <= 1e-7 && e2 <= 1e-7, || {
            format!("{deg}°: errors {e1:e}, {e2:e}")
        })?;
        ensure(verify_trisection(&r, 1e-7).pass, || {
            format!("{deg}°: certificate failed")
        })?;
    }
    ensure(most_iters <= MAX_ITERATIONS, || {
        format!("{most_iters} iterations")
    })?;
    Ok(format!(
        "max error {worst:.2e} rad, at most {most_iters} iterations"
    ))
}

fn ac03_method_agreement() -> Outcome {
    let mut worst: f64 = 0.0;
    for (deg, phi) in sweep_grid() {
        let a = trisect_via_curve(phi).map_err(|e| e.to_string())?;
        let b = trisect_via_scudder(phi).map_err(|e| e.to_string())?;
        let gap = a.c.distance(b.c);
        worst = worst.max(gap);
        ensure(gap <= 1e-6, || format!("{deg}°: C points {gap:e} apart"))?;
    }
    Ok(format!("max |C_curve − C_scudder| {worst:.2e}"))
}

fn ac04_implicit_parametric() -> Outcome {
    let n = 10_000;
    let (mut worst_f, mut worst_y): (f64, f64) = (0.0, 0.0);
    for i in 0..n {
        let t = 0.005 + (FRAC_PI_2 - 0.005) * i as f64 / (n - 1) as f64;
        let p = trace(t);
        let f = implicit_value(p).abs() / (1.0 + p.x.abs().powi(3));
        let dy = (p.y - (3.0 - 4.0 * t.sin().powi(2)))
            .abs()
            .max((p.y - (3.0 * t).sin() / t.sin()).abs());
        worst_f = worst_f.max(f);
        worst_y = worst_y.max(dy);
        ensure(f <= 1e-9, || format!("t = {t}: scaled |F| = {f:e}"))?;
        ensure(dy <= 1e-12, || format!("t = {t}: y off by {dy:e}"))?;
    }
    Ok(format!(
        "scaled |F| ≤ {worst_f:.2e}, y error ≤ {worst_y:.2e}"
    ))
}

fn ac05_node() -> Outcome {
    let node = Point::new(0.0, 2.0);
    ensure(implicit_value(node) == 0.0, || "F(0,2) ≠ 0".into())?;
    ensure(implicit_gradient(node) == (0.0, 0.0), || {
        "∇F(0,2) ≠ 0".into()
    })?;
    let p = trace(FRAC_PI_6);
    let gap = p.distance(node);
    ensure(gap <= 1e-12, || {
        format!("trace(π/6) is {gap:e} from the node")
    })?;
    Ok(format!(
        "F = 0, ∇F = (0, 0), |trace(π/6) − node| = {gap:.1e}"
    ))
}

fn ac06_asymptote() -> Outcome {
    let p = trace(0.01);
    let gap = (p.y - 3.0).abs();
    ensure(gap <= 4.1e-4, || format!("|y − 3| = {gap:e}"))?;
    ensure(p.x.abs() >= 99.0, || format!("|x| = {}", p.x.abs()))?;
    Ok(format!("|y − 3| = {gap:.3e}, x = {:.3}", p.x))
}

fn ac07_half_chord() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let y = -1.0 + 4.0 * i as f64 / 999.0;
        let a = half_chord(y).map_err(|e| e.to_string())?;
        let r = (a * a + (1.0 - y).powi(2) - 4.0).abs();
        worst = worst.max(r);
        ensure(r <= 1e-12, || format!("y = {y}: residual {r:e}"))?;
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn ac08_congruence() -> Outcome {
    let checks = [
        "cd_length",
        "cf_length",
        "oc_equals_od",
        "leg_perpendicular",
        "equal_sectors",
    ];
    let mut worst: f64 = 0.0;
    for deg in [30.0, 90.0, 120.0, 180.0, 260.0, 270.0] {
        let phi = f64::to_radians(deg);
        let placed = linkage::scudder_place(phi).map_err(|e| e.to_string())?;
        let curve_res = trisect_via_curve(phi).map_err(|e| e.to_string())?;
        let certs = [
            ("scudder", verify_placement(&placed, 1e-9)),
            ("curve", congruence_certificate(&curve_res, 1e-9)),
        ];
        for (route, cert) in certs {
            for name in checks {
                let r = cert.residuals[name];
                worst = worst.max(r);
                ensure(r <= 1e-9, || format!("{deg}° {route}: {name} = {r:e}"))?;
            }
            ensure(cert.pass, || {
                format!("{deg}° {route}: failed {:?}", cert.failures())
            })?;
        }
    }
    Ok(format!("max residual {worst:.2e} over both routes"))
}

fn ac09_spurious_branch() -> Outcome {
    let mut notes = Vec::new();
    for deg in [30.0, 120.0] {
        let phi = f64::to_radians(deg);
        let hits = curve::intersect_ray(phi).map_err(|e| e.to_string())?;
        ensure(hits.len() >= 2, || {
            format!("{deg}°: only {} candidates", hits.len())
        })?;
        let on = hits.iter().filter(|h| h.on_trace).count();
        ensure(on == 1, || format!("{deg}°: {on} on-trace candidates"))?;
        for h in &hits {
            let predicate = curve::on_trace(h.point, 1e-9).map_err(|e| e.to_string())?;
            ensure(predicate == h.on_trace, || {
                format!("{deg}°: classification mismatch")
            })?;
        }
        for h in hits.iter().filter(|h| !h.on_trace) {
            let forced = trisect_from_pencil(phi, h.point).map_err(|e| e.to_string())?;
            let cert = verify_trisection(&forced, 1e-9);
            ensure(!cert.pass, || {
                format!("{deg}°: mirror root {:?} verified", h.point)
            })?;
            notes.push(format!(
                "{deg}° rejects ({:.4}, {:.4})",
                h.point.x, h.point.y
            ));
        }
    }
    Ok(notes.join("; "))
}

fn ac10_cubic_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7215_ec72);
    let mut worst: f64 = 0.0;
    for k in 0..10_000 {
        let mut roots = [0.0f64; 3];
        for r in &mut roots {
            *r = rng.gen_range(-10.0..=10.0);
        }
        roots.sort_by(f64::total_cmp);
        let [r1, r2, r3] = roots;
        let got = solve_cubic(
            1.0,
            -(r1 + r2 + r3),
            r1 * r2 + r1 * r3 + r2 * r3,
            -r1 * r2 * r3,
        )
        .map_err(|e| e.to_string())?;
        ensure(got.len() == 3, || {
            format!("cubic {k}: {got:?} for roots {roots:?}")
        })?;
        for (g, w) in got.iter().zip(roots) {
            let e = (g - w).abs();
            worst = worst.max(e);
            ensure(e <= 1e-8, || format!("cubic {k}: {got:?} vs {roots:?}"))?;
        }
    }
    Ok(format!("10000 cubics, max root error {worst:.2e}"))
}

fn ac11_tangency() -> Outcome {
    let phi = 1.5 * PI;
    let d = curve::pick_trisection_point(phi).map_err(|e| e.to_string())?;
    let cands = construct::chord_candidates(d, 1.0).map_err(|e| e.to_string())?;
    ensure(cands.len() == 1, || {
        format!("{} intersections", cands.len())
    })?;
    let c = cands[0];
    ensure(c.distance(Point::new(0.0, 1.0)) <= 1e-9, || {
        format!("C = {c:?}")
    })?;
    let r = trisect_via_curve(phi).map_err(|e| e.to_string())?;
    let e1 = (r.ray1.angle - FRAC_PI_2).abs();
    let e2 = (r.ray2.angle - PI).abs();
    ensure(e1 <= 1e-9 && e2 <= 1e-9, || {
        format!("ray errors {e1:e}, {e2:e}")
    })?;
    Ok(format!(
        "single C = ({:.1e}, {}), rays at 90° and 180°",
        c.x, c.y
    ))
}

fn ac12_simulator() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 1..=1000 {
        let u = PI * i as f64 / 1001.0;
        let st = linkage::state_from_leg_angle(u).map_err(|e| e.to_string())?;
        let gap = st.d.distance(trace(0.5 * u));
        worst = worst.max(gap);
        ensure(gap <= 1e-9, || format!("u = {u}: |D − trace| = {gap:e}"))?;
        ensure((st.c.y - 1.0).abs() <= 1e-12, || {
            format!("u = {u}: C.y = {}", st.c.y)
        })?;
    }
    Ok(format!("max |D − trace(u/2)| {worst:.2e}"))
}

fn cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_trisectrix"))
        .args(args)
        .output()
        .expect("spawn trisectrix");
    (o.status.code(), o.stdout)
}

fn ac13_determinism() -> Outcome {
    let runs: [&[&str]; 6] = [
        &["curve", "--samples", "500"],
        &["curve", "--samples", "500", "--format", "svg"],
        &["trisect", "--angle-deg", "100"],
        &["trisect", "--angle-deg", "100", "--format", "svg"],
        &["simulate", "--steps", "300"],
        &["sweep", "--from-deg", "1", "--to-deg", "269"],
    ];
    for args in runs {
        let (c1, a) = cli(args);
        let (c2, b) = cli(args);
        ensure(c1 == Some(0) && c2 == Some(0), || {
            format!("{args:?}: exit {c1:?}/{c2:?}")
        })?;
        ensure(!a.is_empty() && a == b, || {
            format!("{args:?}: outputs differ")
        })?;
    }
    let (fail, _) = cli(&["sweep", "--method", "scudder", "--tol", "1e-30"]);
    ensure(fail == Some(1), || {
        format!("verification failure exited {fail:?}")
    })?;
    let (usage, _) = cli(&["trisect", "--angle-deg", "271"]);
    ensure(usage == Some(2), || format!("usage error exited {usage:?}"))?;
    Ok("6 byte-identical reruns; exit statuses 0/1/2".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 13] = [
        ("1  curve sweep 1°..269° within 1e-9 rad", ac01_curve_sweep),
        (
            "2  scudder sweep 1°..269° within 1e-7 rad",
            ac02_scudder_sweep,
        ),
        ("3  method agreement, C within 1e-6", ac03_method_agreement),
        (
            "4  implicit–parametric consistency",
            ac04_implicit_parametric,
        ),
        ("5  node at (0, 2)", ac05_node),
        ("6  horizontal asymptote y = 3", ac06_asymptote),
        ("7  half-chord identity", ac07_half_chord),
        ("8  congruence certificate", ac08_congruence),
        ("9  spurious-branch rejection", ac09_spurious_branch),
        ("10 cubic solver oracle", ac10_cubic_oracle),
        ("11 tangency at 270°", ac11_tangency),
        ("12 simulator equivalence", ac12_simulator),
        ("13 determinism and exit statuses", ac13_determinism),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > TIME_LIMIT => Err(format!("{detail} but took {elapsed:?}")),
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("PASS  AC-{name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                println!("FAIL  AC-{name}: {why} [{elapsed:.2?}]");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn polar_angle_wraps_for_reflex_angles() {
    // The pipelines compare angles in [0, 2π); D for φ > π has negative atan2.
    let d = curve::pick_trisection_point(f64::to_radians(200.0)).unwrap();
    let a = polar_angle(d).unwrap();
    assert!(a < 0.0);
    assert!((a.rem_euclid(TAU) - f64::to_radians(200.0)).abs() <= 1e-12);
}
