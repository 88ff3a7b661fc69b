//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs without the libtest harness so the lines always show.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use macro_core::control::{
    estimate_pressure_constant, stanley_rws, PressureGeometry, StanleyGains, SteeringConvention,
};
use macro_core::harness::{load_scenario, run_scenario, RunArtifacts};
use macro_core::mechanics::{
    compute_cop, normality_residual, normalize_angle, wrench_to_twist, LimitSurfaceModel, NormalContact, Pose2, Vec2,
    Wrench,
};
use macro_core::modes::{
    dual_top_allocate, dual_top_wrench, orthogonal_allocate, orthogonal_min_bias, orthogonal_wrench, unicycle_regions,
    virtual_axle_top, ContactForce, ContactForceSet, ContactMode, CopStrategy, DualTopConfig, ModeGeometry,
};
use macro_core::world::{step, EpisodeStatus, Integrator, ObjectParams, ObjectState, SimConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// 1: virtual-axle invariance
const VA_SPREAD_TOL: f64 = 1e-12;
const VA_EXACT_TOL: f64 = 1e-12;
// 2: press-and-slide geometry
const LEVER_EXPECTED: f64 = 0.054;
const LEVER_TOL: f64 = 0.001;
const VA_DIST_EXPECTED: f64 = 0.667;
const VA_DIST_TOL: f64 = 0.005;
// 3: press-and-slide convergence
const UNICYCLE_POS_TOL: f64 = 0.005;
const UNICYCLE_ANG_TOL_DEG: f64 = 1.0;
const UNICYCLE_SIM_LIMIT: f64 = 60.0;
const UNICYCLE_WALL_LIMIT: Duration = Duration::from_secs(30);
// 4: rear-push convergence
const REAR_POS_TOL: f64 = 0.015;
const REAR_ANG_TOL_DEG: f64 = 2.0;
// 5: allocator identities
const DUAL_TOP_TOL: f64 = 1e-9;
const ORTHO_TOL: f64 = 1e-12;
// 6: region geometry
const REGION_TOL: f64 = 1e-12;
// 7: pressure constant
const C_SYNTHETIC: f64 = 0.43;
const C_REL_TOL: f64 = 0.05;
// 8: simulator oracle
const NORMALITY_TOL: f64 = 1e-9;
const MIDPOINT_RATIO_MIN: f64 = 3.5;
// 9: pivot and move
const PIVOT_ANGLE_DEG: f64 = 90.0;
const PIVOT_ANGLE_TOL_DEG: f64 = 1.0;
const PIVOT_COP_TOL: f64 = 0.01;
const FAR_PRESS_TOL: f64 = 1e-3;
const TRANSLATION: f64 = 0.5;
const TRANSLATION_TOL: f64 = 0.01;
const MOVE_POS_TOL: f64 = 0.01;
// 10: Stanley
const STANLEY_TOL: f64 = 0.0;
const STANLEY_HALVING_TOL: f64 = 1e-12;

const FAST: Duration = Duration::from_secs(1);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn timed(f: impl FnOnce() -> Outcome, limit: Option<Duration>) -> Outcome {
    let t = Instant::now();
    let out = f();
    let elapsed = t.elapsed();
    let out = match limit {
        Some(l) if elapsed >= l => Err(format!("{} (took {elapsed:?}, limit {l:?})", out.unwrap_or_else(|e| e))),
        _ => out,
    };
    out.map(|m| format!("{m} [{:.3} s]", elapsed.as_secs_f64()))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn run_bundled(name: &str, overrides: &[&str]) -> Result<RunArtifacts, String> {
    let text = std::fs::read_to_string(scenario(name)).map_err(|e| e.to_string())?;
    let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    let s = load_scenario(&text, &overrides).map_err(|e| e.to_string())?;
    run_scenario(&s).map_err(|e| e.to_string())
}

fn virtual_axle_invariance() -> Outcome {
    let (c, r0, d) = (0.6, 0.1f64.sqrt(), 0.054);
    let model = LimitSurfaceModel::new(0.5, 10.943, c, r0, 0.5).map_err(|e| e.to_string())?;
    let expected = -(c * r0).powi(2) / d;
    let reported = virtual_axle_top(c, r0, d).map_err(|e| e.to_string())?.position.x;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let limit = model.mu() * model.n_total();
    let mut xs = Vec::new();
    while xs.len() < 100 {
        let f = Vec2::new(rng.random_range(-limit..limit), rng.random_range(-limit..limit));
        if f.norm() > limit || f.y.abs() < 1e-6 {
            continue;
        }
        let nu = wrench_to_twist(&Wrench::from_force_at(Vec2::new(d, 0.0), f), &model);
        xs.push(-nu.vy / nu.omega);
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let worst = xs.iter().map(|x| (x - expected).abs()).fold(0.0, f64::max);
    check(
        hi - lo <= VA_SPREAD_TOL && worst <= VA_EXACT_TOL && (reported - expected).abs() <= VA_EXACT_TOL,
        format!("spread {:.2e}, max |x - (-(c r0)^2/d)| {worst:.2e}, x = {expected:.6} m", hi - lo),
    )
}

fn press_and_slide_geometry() -> Outcome {
    let object = ObjectParams { mass: 0.3, footprint: [0.6, 0.2], mu: 0.5, c: 0.6, r0: 0.1f64.sqrt(), lambda: 0.5 };
    let cop = compute_cop(
        &NormalContact::new(Vec2::zeros(), object.weight()),
        &[NormalContact::new(Vec2::new(0.2, 0.0), 8.0)],
    )
    .map_err(|e| e.to_string())?;
    let lever = 0.2 - cop.cop.x;
    let va = virtual_axle_top(object.c, object.r0, lever).map_err(|e| e.to_string())?.position.x;
    check(
        (lever - LEVER_EXPECTED).abs() <= LEVER_TOL && (va.abs() - VA_DIST_EXPECTED).abs() <= VA_DIST_TOL,
        format!("lever {lever:.4} m, unicycle point {:.4} m from the CoP", va.abs()),
    )
}

fn press_and_slide_convergence() -> Outcome {
    let a = run_bundled("unicycle_v2", &[])?;
    let pos = a.summary.final_pos_error.unwrap_or(f64::INFINITY);
    let ang = a.summary.final_ang_error.unwrap_or(f64::INFINITY);
    check(
        a.status() == EpisodeStatus::Converged
            && pos < UNICYCLE_POS_TOL
            && ang < UNICYCLE_ANG_TOL_DEG.to_radians()
            && a.log.final_time <= UNICYCLE_SIM_LIMIT,
        format!(
            "{:?} at t = {:.2} s, errors {:.2} mm / {:.3} deg",
            a.status(),
            a.log.final_time,
            pos * 1e3,
            ang.to_degrees()
        ),
    )
}

fn rear_push_convergence() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["rear_push_left", "rear_push_rear"] {
        let a = run_bundled(name, &[])?;
        let pos = a.summary.final_pos_error.unwrap_or(f64::INFINITY);
        let ang = a.summary.final_ang_error.unwrap_or(f64::INFINITY);
        ok &= a.status() == EpisodeStatus::Converged && pos <= REAR_POS_TOL && ang <= REAR_ANG_TOL_DEG.to_radians();
        parts.push(format!("{name} {:?} {:.1} mm / {:.2} deg", a.status(), pos * 1e3, ang.to_degrees()));
    }
    check(ok, parts.join(", "))
}

fn allocator_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (p_l, p_r) = (Vec2::new(-0.1, 0.08), Vec2::new(0.12, -0.05));
    let cfg = DualTopConfig {
        mu: 0.5,
        n_obj: 2.943,
        n_budget: 500.0,
        margin: 0.1,
        min_press: 0.0,
        strategy: CopStrategy::Balanced,
    };
    let (mu, d) = (0.5, 0.15);
    let (mut dual_err, mut tau_err, mut res_err) = (0.0f64, 0.0f64, 0.0f64);
    let (mut min_normal, mut min_slack) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..1000 {
        let w = Wrench::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-1.0..1.0));
        let a = dual_top_allocate(&w, &p_l, &p_r, &cfg).map_err(|e| format!("dual-top: {e}"))?;
        let f = &a.forces.forces;
        let back = dual_top_wrench(&f[0].tangential, &f[1].tangential, &p_l, &p_r);
        for (x, y) in back.as_array().iter().zip(w.as_array()) {
            dual_err = dual_err.max((x - y).abs());
        }
        min_normal = min_normal.min(a.forces.min_normal());
        min_slack = min_slack.min(a.forces.min_slack());

        let bias = orthogonal_min_bias(&w, d, 0.1, Some(mu)) + rng.random_range(0.0..2.0);
        let o = orthogonal_allocate(&w, d, bias, mu).map_err(|e| format!("orthogonal: {e}"))?;
        let back = orthogonal_wrench(o.f_xb, o.f_yb, o.f_xl, o.f_yl, d).map_err(|e| e.to_string())?;
        tau_err = tau_err.max((back.tau - w.tau).abs());
        res_err = res_err.max((back.fx - w.fx - bias).abs()).max((back.fy - w.fy + bias).abs());
        res_err = res_err.max((o.residual.fx - bias).abs()).max((o.residual.fy + bias).abs());
        min_normal = min_normal.min(o.forces.min_normal());
        min_slack = min_slack.min(o.forces.min_slack());
    }
    check(
        dual_err <= DUAL_TOP_TOL
            && tau_err <= ORTHO_TOL
            && res_err <= ORTHO_TOL
            && min_normal >= 0.0
            && min_slack >= 0.0,
        format!(
            "dual-top max error {dual_err:.1e}, orthogonal torque error {tau_err:.1e}, residual error {res_err:.1e}, \
             min normal {min_normal:.3} N, min slack {min_slack:.3e} N"
        ),
    )
}

fn region_geometry() -> Outcome {
    let model = LimitSurfaceModel::new(0.5, 10.0, 0.6, 0.1, 0.5).map_err(|e| e.to_string())?;
    let d = 0.2;
    let r = unicycle_regions(0.5, &model, d).map_err(|e| e.to_string())?;
    let k = r.k_base;
    let low = r.d_min / k;
    let high = r.d_max / k;
    let bike = r.bicycle_point / k;
    let high_mu = unicycle_regions(0.8, &model, d).map_err(|e| e.to_string())?;
    check(
        (low - 3.0).abs() <= REGION_TOL
            && (high - 5.0).abs() <= REGION_TOL
            && (bike - 2.0).abs() <= REGION_TOL
            && !r.bicycle_point_in_region
            && high_mu.bicycle_point_in_region,
        format!(
            "mu 0.5: d_min/K {low:.12}, d_max/K {high:.12}, bicycle {bike:.12} K inside: {}; mu 0.8 inside: {}",
            r.bicycle_point_in_region, high_mu.bicycle_point_in_region
        ),
    )
}

fn pressure_constant() -> Outcome {
    let a = run_bundled("unicycle_v2", &[&format!("object.c={C_SYNTHETIC}"), "sim.log_stride=1"])?;
    let geom = PressureGeometry { contact: Vec2::new(0.2, 0.0), r0: 0.1f64.sqrt(), omega_min: 1e-6 };
    let est = estimate_pressure_constant(&a.log.records, &geom).map_err(|e| e.to_string())?;
    check(
        (est.c - C_SYNTHETIC).abs() <= C_REL_TOL * C_SYNTHETIC,
        format!("estimated c = {:.5} +/- {:.1e} from {} samples", est.c, est.std_error, est.samples),
    )
}

fn midpoint_error(dt: f64, total: f64) -> Result<f64, String> {
    let object = ObjectParams { mass: 0.3, footprint: [0.6, 0.2], mu: 0.5, c: 0.6, r0: 0.1f64.sqrt(), lambda: 0.5 };
    let mode = ContactMode::new(ModeGeometry::TopPressSingle { contact: Vec2::new(0.2, 0.0), press_force: 8.0 })
        .map_err(|e| e.to_string())?;
    let forces = ContactForceSet::new(vec![ContactForce::new(Vec2::new(1.5, 2.5), 8.0)], object.mu);
    let cfg = SimConfig { dt, integrator: Integrator::Midpoint, ..SimConfig::default() };
    let start = ObjectState { pose: Pose2::new(0.1, -0.2, 0.3), params: object };
    let (_, first) = step(&start, &forces, &mode, &cfg).map_err(|e| e.to_string())?;
    let mut state = start;
    for _ in 0..(total / dt).round() as usize {
        state = step(&state, &forces, &mode, &cfg).map_err(|e| e.to_string())?.0;
    }
    let exact = start.pose.exp_step(&first.twist_origin, total);
    let (pos, ang) = state.pose.error_to(&exact);
    Ok(pos + ang)
}

fn simulator_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut steps = 0usize;
    for name in ["unicycle_v2", "pivot_and_move", "orthogonal_translate_rotate", "rear_push_rear"] {
        let a = run_bundled(name, &["sim.log_stride=1"])?;
        for r in &a.log.records {
            let model = a.log.object.model(r.n_total).map_err(|e| e.to_string())?;
            if r.wrench.norm() == 0.0 {
                continue;
            }
            worst = worst.max(normality_residual(&r.wrench, &r.twist, &model));
            steps += 1;
        }
    }
    let coarse = midpoint_error(0.02, 1.0)?;
    let fine = midpoint_error(0.01, 1.0)?;
    let ratio = coarse / fine;
    let noisy = ["sim.noise_std=0.3", "pi={}", "seed=21", "sim.max_steps=5000"];
    let a = run_bundled("unicycle_v2", &noisy)?;
    let b = run_bundled("unicycle_v2", &noisy)?;
    let identical = a.log.to_csv() == b.log.to_csv() && a.log.to_json() == b.log.to_json();
    check(
        worst <= NORMALITY_TOL && ratio >= MIDPOINT_RATIO_MIN && identical,
        format!(
            "normality residual {worst:.1e} over {steps} steps, midpoint halving ratio {ratio:.3}, \
             same-seed logs identical: {identical}"
        ),
    )
}

fn pivot_and_move() -> Outcome {
    let a = run_bundled("pivot_and_move", &["sim.log_stride=1"])?;
    if a.status() != EpisodeStatus::Converged {
        return Err(format!("{:?}: {:?}", a.status(), a.log.error));
    }
    let p_l = Vec2::new(-0.1, 0.15);
    let pivot: Vec<_> = a.log.records.iter().filter(|r| r.stage == 0).collect();
    let moved: Vec<_> = a.log.records.iter().filter(|r| r.stage == 1).collect();
    let (Some(first), Some(last), Some(end)) = (pivot.first(), pivot.last(), moved.last()) else {
        return Err("missing stage records".into());
    };
    let start = a.log.start_pose;
    let turn = normalize_angle(last.pose.theta - start.theta).to_degrees();
    let cop_dev = pivot.iter().map(|r| (r.cop - p_l).norm()).fold(0.0, f64::max);
    let far = pivot.iter().map(|r| r.contacts[1].press).fold(0.0, f64::max);
    let anchor_drift = (last.pose.transform_point(&p_l) - first.pose.transform_point(&p_l)).norm();
    let travelled = (end.pose.position() - last.pose.position()).norm();
    let goal = a.log.stages[1].goal;
    let (final_pos, _) = a.log.final_pose.error_to(&goal);
    check(
        (turn - PIVOT_ANGLE_DEG).abs() <= PIVOT_ANGLE_TOL_DEG
            && cop_dev <= PIVOT_COP_TOL
            && far <= FAR_PRESS_TOL
            && (travelled - TRANSLATION).abs() <= TRANSLATION_TOL
            && final_pos <= MOVE_POS_TOL,
        format!(
            "turn {turn:.2} deg, CoP within {:.1} mm of p_L (anchor drift {:.1} mm), far press {far:.1e} N, \
             translated {travelled:.3} m, final error {:.1} mm",
            cop_dev * 1e3,
            anchor_drift * 1e3,
            final_pos * 1e3
        ),
    )
}

fn stanley_checks() -> Outcome {
    let gains =
        |k: f64| StanleyGains { k, v_nominal: 0.1, delta_max: 0.5f64.atan(), convention: SteeringConvention::Push };
    let on_path = stanley_rws(0.0, 0.0, 0.37, &gains(4.2)).map_err(|e| e.to_string())?;
    let quarter = stanley_rws(0.0, 0.1, 0.1, &gains(1.0)).map_err(|e| e.to_string())?;
    let slow = stanley_rws(0.0, 0.1, 0.2, &gains(1.0)).map_err(|e| e.to_string())?;
    let fast = stanley_rws(0.0, 0.1, 0.4, &gains(1.0)).map_err(|e| e.to_string())?;
    let halved = ((-fast.raw).tan() - 0.5 * (-slow.raw).tan()).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations = 0;
    for _ in 0..10_000 {
        let e: f64 = rng.random_range(-1.0..1.0);
        let v: f64 = rng.random_range(1e-3..3.0);
        let k: f64 = rng.random_range(1e-2..20.0);
        let s = stanley_rws(0.0, e, v, &gains(k)).map_err(|e| e.to_string())?;
        if e != 0.0 && s.delta.signum() != -e.signum() {
            violations += 1;
        }
    }
    check(
        on_path.raw == 0.0
            && (quarter.raw + FRAC_PI_4).abs() <= STANLEY_TOL
            && halved <= STANLEY_HALVING_TOL
            && violations == 0,
        format!(
            "on-path {:.1}, (0, 0.1, 0.1, k=1) -> {:.16} (-pi/4 = {:.16}), halving error {halved:.1e}, \
             sign violations {violations}/10000",
            on_path.raw, quarter.raw, -FRAC_PI_4
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("virtual-axle force invariance", virtual_axle_invariance, Some(FAST)),
        ("press-and-slide geometry", press_and_slide_geometry, Some(FAST)),
        ("press-and-slide convergence", press_and_slide_convergence, Some(UNICYCLE_WALL_LIMIT)),
        ("rear-push convergence", rear_push_convergence, None),
        ("allocator identities", allocator_identities, Some(FAST)),
        ("unicycle-region geometry", region_geometry, Some(FAST)),
        ("pressure-constant estimation", pressure_constant, None),
        ("simulator oracle properties", simulator_oracle, None),
        ("pivot and move", pivot_and_move, None),
        ("Stanley law unit checks", stanley_checks, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        match timed(f, limit) {
            Ok(msg) => println!("PASS criterion {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
