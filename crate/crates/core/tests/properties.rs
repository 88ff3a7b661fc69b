use macro_core::control::{
    pi_normal_force, plan_path, stanley_rws, PathConstraint, PiGains, PiState, PlanOptions, StanleyGains,
    SteeringConvention,
};
use macro_core::mechanics::{
    compute_cop, cross2, normality_residual, rescale_mobility, twist_to_wrench, wrench_to_twist, LimitSurfaceModel,
    NormalContact, Pose2, Twist, Vec2, Wrench,
};
use macro_core::modes::{
    curvature_bound, diff_drive_twist, dual_top_allocate, dual_top_wrench, orthogonal_allocate, orthogonal_wrench,
    unicycle_regions, vfa_rear_push, virtual_axle_top, CopStrategy, DualTopConfig,
};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = LimitSurfaceModel> {
    (0.05..1.5f64, 0.5..200.0f64, 0.05..1.0f64, 0.01..0.5f64, 0.1..2.0f64)
        .prop_map(|(mu, n, c, r0, l)| LimitSurfaceModel::new(mu, n, c, r0, l).unwrap())
}

fn wrench(scale: f64) -> impl Strategy<Value = Wrench> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(x, y, t)| Wrench::new(x, y, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normality_holds_for_any_wrench(m in model(), w in wrench(50.0)) {
        prop_assume!(w.norm() > 1e-6);
        let nu = wrench_to_twist(&w, &m);
        prop_assert!(normality_residual(&w, &nu, &m) <= 1e-12);
        let ratio = m.alpha() / m.beta();
        prop_assert!((ratio - (m.c() * m.r0()).powi(2)).abs() <= 1e-12 * ratio);
    }

    #[test]
    fn twist_wrench_round_trip(m in model(), w in wrench(50.0)) {
        let back = twist_to_wrench(&wrench_to_twist(&w, &m), &m);
        for (a, b) in back.as_array().iter().zip(w.as_array()) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn rescaling_there_and_back_restores(m in model(), k in 0.1..10.0f64) {
        let n = m.n_total();
        let back = rescale_mobility(&rescale_mobility(&m, n * k).unwrap(), n).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn cop_lies_in_the_weighted_triangle(
        w in 0.1..20.0f64,
        f1 in 0.0..50.0f64, f2 in 0.0..50.0f64,
        p1 in (-1.0..1.0f64, -1.0..1.0f64), p2 in (-1.0..1.0f64, -1.0..1.0f64),
    ) {
        let (a, b) = (Vec2::new(p1.0, p1.1), Vec2::new(p2.0, p2.1));
        let r = compute_cop(&NormalContact::new(Vec2::zeros(), w), &[NormalContact::new(a, f1), NormalContact::new(b, f2)])
            .unwrap();
        prop_assert!((r.n_total - (w + f1 + f2)).abs() < 1e-12);
        let o = Vec2::zeros();
        let area = cross2(&(a - o), &(b - o));
        prop_assume!(area.abs() > 1e-3);
        let s = area.signum();
        let tol = 1e-9;
        prop_assert!(s * cross2(&(a - o), &(r.cop - o)) >= -tol);
        prop_assert!(s * cross2(&(b - a), &(r.cop - a)) >= -tol);
        prop_assert!(s * cross2(&(o - b), &(r.cop - b)) >= -tol);
    }

    #[test]
    fn virtual_axle_is_force_invariant(m in model(), d in 0.01..0.5f64, ang in -std::f64::consts::PI..std::f64::consts::PI, mag in 0.01..1.0f64) {
        let f = Vec2::new(ang.cos(), ang.sin()) * mag * m.mu() * m.n_total();
        prop_assume!(f.y.abs() > 1e-9);
        // contact at +d from the CoP
        let nu = wrench_to_twist(&Wrench::from_force_at(Vec2::new(d, 0.0), f), &m);
        let x = -nu.vy / nu.omega;
        let va = virtual_axle_top(m.c(), m.r0(), d).unwrap().position.x;
        prop_assert!((x - va).abs() <= 1e-12 * va.abs().max(1.0));
    }

    #[test]
    fn vfa_has_no_lateral_slip(m in model(), d in 0.01..0.5f64, fx in 0.01..10.0f64, t in -1.0..1.0f64) {
        let fy = t * m.mu() * fx;
        let nu = wrench_to_twist(&Wrench::from_force_at(Vec2::new(-d, 0.0), Vec2::new(fx, fy)), &m);
        let x = vfa_rear_push(m.c(), m.r0(), d).unwrap().position.x;
        prop_assert!((nu.vy + x * nu.omega).abs() <= 1e-12 * nu.vy.abs().max(1e-300).max(1.0));
    }

    #[test]
    fn orthogonal_round_trip(w in wrench(5.0), d in 0.05..0.5f64, extra in 0.0..5.0f64) {
        let shear = -w.tau / (2.0 * d);
        let bias = (shear - w.fx).max(w.fy - shear).max(0.0) + extra;
        let a = orthogonal_allocate(&w, d, bias, 1e6).unwrap();
        let back = orthogonal_wrench(a.f_xb, a.f_yb, a.f_xl, a.f_yl, d).unwrap();
        prop_assert!((back.tau - w.tau).abs() <= 1e-12 * w.tau.abs().max(1.0));
        prop_assert!((back.fx - (w.fx + bias)).abs() <= 1e-12 * (w.fx.abs() + bias).max(1.0));
        prop_assert!((back.fy - (w.fy - bias)).abs() <= 1e-12 * (w.fy.abs() + bias).max(1.0));
        prop_assert!(a.f_xb >= 0.0 && a.f_yl >= 0.0);
    }

    #[test]
    fn dual_top_round_trip(w in wrench(2.0), y in 0.05..0.3f64, x in -0.2..0.2f64, margin in 0.0..0.5f64) {
        let (p_l, p_r) = (Vec2::new(x, y), Vec2::new(-x, -y));
        let cfg = DualTopConfig {
            mu: 0.5, n_obj: 3.0, n_budget: 1e4, margin, min_press: 0.0, strategy: CopStrategy::Balanced,
        };
        let a = dual_top_allocate(&w, &p_l, &p_r, &cfg).unwrap();
        let f = &a.forces.forces;
        let back = dual_top_wrench(&f[0].tangential, &f[1].tangential, &p_l, &p_r);
        for (u, v) in back.as_array().iter().zip(w.as_array()) {
            prop_assert!((u - v).abs() <= 1e-9);
        }
        prop_assert!(a.forces.min_normal() >= 0.0);
        prop_assert!(a.forces.min_slack() >= -1e-12);
    }

    #[test]
    fn regions_are_ordered_and_disjoint(mu in 0.01..0.99f64, m in model(), d in 0.01..0.5f64) {
        let r = unicycle_regions(mu, &m, d).unwrap();
        prop_assert!(r.d_min < r.d_max);
        let probe = Vec2::new(1.0, 1.0).normalize() * (r.d_min + r.d_max) / 2.0;
        prop_assert!(r.ccw_region.contains(&probe) && !r.cw_region.contains(&probe));
        prop_assert!(r.cw_region.contains(&-probe) && !r.ccw_region.contains(&-probe));
        if mu <= 0.6 {
            prop_assert!(!r.bicycle_point_in_region);
        }
    }

    #[test]
    fn diff_drive_never_slips_sideways(m in model(), l in 0.0..10.0f64, r in 0.0..10.0f64, w in 0.01..0.5f64) {
        let nu = diff_drive_twist(l, r, &m, w).unwrap();
        prop_assert_eq!(nu.vy, 0.0);
        let swapped = diff_drive_twist(r, l, &m, w).unwrap();
        prop_assert_eq!(swapped.omega, -nu.omega);
    }

    #[test]
    fn curvature_peaks_at_the_cone_edge(mu in 0.05..1.5f64, d in 0.01..0.5f64, c in 0.1..1.0f64, r0 in 0.01..0.5f64, t in -1.0..1.0f64) {
        let edge = curvature_bound(mu.atan(), d, c, r0).abs();
        let inner = curvature_bound(t * mu.atan(), d, c, r0);
        prop_assert!(inner.abs() <= edge * (1.0 + 1e-12));
        if t != 0.0 {
            prop_assert_eq!(inner.signum(), -t.signum());
        }
    }

    #[test]
    fn stanley_sign(e in -2.0..2.0f64, v in 0.001..3.0f64, k in 0.01..20.0f64) {
        let g = StanleyGains { k, v_nominal: v, delta_max: 0.5f64.atan(), convention: SteeringConvention::Push };
        let s = stanley_rws(0.0, e, v, &g).unwrap();
        if e != 0.0 {
            prop_assert_eq!(s.delta.signum(), -e.signum());
        }
        prop_assert!(s.delta.abs() <= g.delta_max);
    }

    #[test]
    fn pi_integral_stays_bounded(meas in prop::collection::vec(-50.0..50.0f64, 1..200), cmd in 0.0..20.0f64) {
        let mut pi = PiState::new(PiGains { kp: 0.5, ki: 2.0, windup_limit: 0.7 });
        for m in meas {
            let out = pi_normal_force(cmd, m, &mut pi, 0.05);
            prop_assert!(pi.integral.abs() <= 0.7);
            prop_assert!(out >= 0.0);
        }
    }

    #[test]
    fn planned_paths_respect_the_curvature_bound(
        x in -2.0..2.0f64, y in -2.0..2.0f64, th in -3.1..3.1f64, kappa_max in 0.5..20.0f64,
    ) {
        let goal = Pose2::new(x, y, th);
        let opts = PlanOptions { budget: 100.0, ..PlanOptions::default() };
        let path = plan_path(&Pose2::IDENTITY, &goal, &PathConstraint::BoundedCurvature { kappa_max }, &opts).unwrap();
        for s in &path.samples {
            prop_assert!(s.kappa.abs() <= kappa_max + 1e-12);
        }
        prop_assert!((path.end().position() - goal.position()).norm() < 1e-6);
    }

    #[test]
    fn exponential_step_composes(vx in -1.0..1.0f64, vy in -1.0..1.0f64, w in -3.0..3.0f64, dt in 1e-4..0.1f64) {
        let nu = Twist::new(vx, vy, w);
        let p = Pose2::new(0.3, -0.2, 0.7);
        let two = p.exp_step(&nu, dt).exp_step(&nu, dt);
        let one = p.exp_step(&nu, 2.0 * dt);
        prop_assert!((two.position() - one.position()).norm() < 1e-12);
        prop_assert!((two.theta - one.theta).abs() < 1e-12);
        prop_assert!(one.theta > -std::f64::consts::PI && one.theta <= std::f64::consts::PI);
    }
}
