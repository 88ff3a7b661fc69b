use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::mechanics::{cross2, normalize_angle, Pose2, Vec2};
use crate::modes::{curvature_bound, ContactMode, ModeGeometry};
use crate::world::ObjectParams;

/// One sample of a reference path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    /// Arc length from the start (m).
    pub s: f64,
    pub pose: Pose2,
    /// Signed curvature of the segment leaving this sample (1/m). In-place
    /// turns carry an infinite curvature of the turn's sign.
    pub kappa: f64,
}

/// Sampled reference path with its curvature bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferencePath {
    pub samples: Vec<PathSample>,
    pub kappa_max: f64,
    /// Name of the segment sequence, e.g. `"LSR"`.
    pub word: String,
}

/// Tracked point relative to a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub index: usize,
    pub s: f64,
    pub point: Vec2,
    pub heading: f64,
    pub kappa: f64,
    /// Positive when the path lies to the left of the projected point.
    pub lateral: f64,
}

impl ReferencePath {
    pub fn length(&self) -> f64 {
        self.samples.last().map_or(0.0, |p| p.s)
    }

    pub fn start(&self) -> Pose2 {
        self.samples[0].pose
    }

    pub fn end(&self) -> Pose2 {
        self.samples[self.samples.len() - 1].pose
    }

    pub fn positions(&self) -> Vec<Vec2> {
        self.samples.iter().map(|p| p.pose.position()).collect()
    }

    pub fn max_abs_curvature(&self) -> f64 {
        self.samples.iter().map(|p| p.kappa.abs()).fold(0.0, f64::max)
    }

    /// Appends a straight run of `length` along the final heading.
    pub fn extend_straight(&mut self, length: f64, ds: f64) {
        let end = *self.samples.last().expect("non-empty path");
        if let Some(last) = self.samples.last_mut() {
            last.kappa = 0.0;
        }
        let n = (length / ds).ceil().max(1.0) as usize;
        for i in 1..=n {
            let l = length * i as f64 / n as f64;
            let p = end.pose.transform_point(&Vec2::new(l, 0.0));
            self.samples.push(PathSample { s: end.s + l, pose: Pose2::new(p.x, p.y, end.pose.theta), kappa: 0.0 });
        }
    }

    /// Closest point on the polyline, searching segments `from..to`.
    pub fn project(&self, point: &Vec2, from: usize, to: usize) -> Projection {
        let last = self.samples.len() - 1;
        if last == 0 {
            let p = self.samples[0];
            let lateral = cross2(&Vec2::new(p.pose.theta.cos(), p.pose.theta.sin()), &(point - p.pose.position()));
            return Projection {
                index: 0,
                s: 0.0,
                point: p.pose.position(),
                heading: p.pose.theta,
                kappa: p.kappa,
                lateral: -lateral,
            };
        }
        let to = to.min(last);
        let from = from.min(to.saturating_sub(1));
        let mut best: Option<(f64, Projection)> = None;
        for i in from..to.max(from + 1) {
            let (a, b) = (self.samples[i], self.samples[i + 1]);
            let (pa, pb) = (a.pose.position(), b.pose.position());
            let seg = pb - pa;
            let len2 = seg.norm_squared();
            let u = if len2 > 0.0 { ((point - pa).dot(&seg) / len2).clamp(0.0, 1.0) } else { 0.0 };
            let q = pa + seg * u;
            let dist = (point - q).norm();
            if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                let heading = a.pose.theta + normalize_angle(b.pose.theta - a.pose.theta) * u;
                let tangent = Vec2::new(heading.cos(), heading.sin());
                best = Some((
                    dist,
                    Projection {
                        index: i,
                        s: a.s + (b.s - a.s) * u,
                        point: q,
                        heading: normalize_angle(heading),
                        kappa: a.kappa,
                        lateral: cross2(&tangent, &(q - point)),
                    },
                ));
            }
        }
        best.expect("at least one segment").1
    }
}

/// Motion constraint a mode imposes on its tracking point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PathConstraint {
    BoundedCurvature { kappa_max: f64 },
    TurnDriveTurn,
    Holonomic,
}

impl PathConstraint {
    /// Car modes: `κ_max` from the curvature bound at `δ = atan μ`.
    pub fn for_mode(mode: &ContactMode, object: &ObjectParams) -> Result<Self> {
        let delta = object.mu.atan();
        Ok(match *mode.geometry() {
            ModeGeometry::RearPushSingle { d, .. } => {
                Self::BoundedCurvature { kappa_max: curvature_bound(delta, d, object.c, object.r0).abs() }
            }
            ModeGeometry::DualRearBicycle { d_x, .. } => {
                Self::BoundedCurvature { kappa_max: curvature_bound(delta, d_x, object.c, object.r0).abs() }
            }
            ModeGeometry::DualRearDiffDrive { .. } => Self::TurnDriveTurn,
            ModeGeometry::TopPressSingle { .. } => Self::TurnDriveTurn,
            ModeGeometry::OrthogonalBimanual { .. } | ModeGeometry::DualTopPress { .. } => Self::Holonomic,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanOptions {
    /// Longest acceptable path (m).
    pub budget: f64,
    /// Sample spacing (m).
    pub ds: f64,
    /// Fraction of `κ_max` the planner may use, in `(0, 1]`.
    pub curvature_fraction: f64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self { budget: 10.0, ds: 0.002, curvature_fraction: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Seg {
    L,
    S,
    R,
}

/// Dubins word with normalized segment lengths (radians or radius units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DubinsWord {
    pub name: &'static str,
    segs: [Seg; 3],
    pub lengths: [f64; 3],
}

impl DubinsWord {
    pub fn total(&self) -> f64 {
        self.lengths.iter().sum()
    }
}

fn mod2pi(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

/// All geometrically valid Dubins words from `start` to `goal` at turning
/// radius `rho`, lengths normalized by `rho`.
pub fn dubins_words(start: &Pose2, goal: &Pose2, rho: f64) -> Vec<DubinsWord> {
    let dx = goal.x - start.x;
    let dy = goal.y - start.y;
    let d = dx.hypot(dy) / rho;
    let th = if d > 0.0 { dy.atan2(dx) } else { 0.0 };
    let a = mod2pi(start.theta - th);
    let b = mod2pi(goal.theta - th);
    let (sa, ca, sb, cb) = (a.sin(), a.cos(), b.sin(), b.cos());
    let cab = (a - b).cos();
    let mut out = Vec::new();
    use Seg::*;

    let p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb);
    if p2 >= 0.0 {
        let tmp = (cb - ca).atan2(d + sa - sb);
        out.push(DubinsWord { name: "LSL", segs: [L, S, L], lengths: [mod2pi(-a + tmp), p2.sqrt(), mod2pi(b - tmp)] });
    }
    let p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa);
    if p2 >= 0.0 {
        let tmp = (ca - cb).atan2(d - sa + sb);
        out.push(DubinsWord { name: "RSR", segs: [R, S, R], lengths: [mod2pi(a - tmp), p2.sqrt(), mod2pi(-b + tmp)] });
    }
    let p2 = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb);
    if p2 >= 0.0 {
        let p = p2.sqrt();
        let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
        out.push(DubinsWord { name: "LSR", segs: [L, S, R], lengths: [mod2pi(-a + tmp), p, mod2pi(-b + tmp)] });
    }
    let p2 = -2.0 + d * d + 2.0 * cab - 2.0 * d * (sa + sb);
    if p2 >= 0.0 {
        let p = p2.sqrt();
        let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
        out.push(DubinsWord { name: "RSL", segs: [R, S, L], lengths: [mod2pi(a - tmp), p, mod2pi(b - tmp)] });
    }
    let tmp = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
    if tmp.abs() <= 1.0 {
        let p = mod2pi(TAU - tmp.acos());
        let t = mod2pi(a - (ca - cb).atan2(d - sa + sb) + p / 2.0);
        out.push(DubinsWord { name: "RLR", segs: [R, L, R], lengths: [t, p, mod2pi(a - b - t + p)] });
    }
    let tmp = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
    if tmp.abs() <= 1.0 {
        let p = mod2pi(TAU - tmp.acos());
        let t = mod2pi(-a - (ca - cb).atan2(d + sa - sb) + p / 2.0);
        out.push(DubinsWord { name: "LRL", segs: [L, R, L], lengths: [t, p, mod2pi(b - a - t + p)] });
    }
    out
}

/// Pose after travelling `l` from `p` at constant curvature `kappa`.
fn advance(p: &Pose2, kappa: f64, l: f64) -> Pose2 {
    let phi = kappa * l;
    let (dx, dy) = if phi.abs() < 1e-9 {
        (l * (1.0 - phi * phi / 6.0), l * phi / 2.0)
    } else {
        (phi.sin() / kappa, (1.0 - phi.cos()) / kappa)
    };
    p.compose(&Pose2::new(dx, dy, phi))
}

fn sample_word(start: &Pose2, word: &DubinsWord, rho: f64, ds: f64, kappa_max: f64) -> ReferencePath {
    let mut samples = vec![PathSample { s: 0.0, pose: *start, kappa: 0.0 }];
    let mut seg_start = *start;
    let mut s0 = 0.0;
    for (seg, &len) in word.segs.iter().zip(&word.lengths) {
        let length = len * rho;
        if length <= 1e-12 {
            continue;
        }
        let kappa = match seg {
            Seg::L => 1.0 / rho,
            Seg::S => 0.0,
            Seg::R => -1.0 / rho,
        };
        if let Some(last) = samples.last_mut() {
            last.kappa = kappa;
        }
        let n = (length / ds).ceil() as usize;
        for i in 1..=n {
            let l = length * i as f64 / n as f64;
            samples.push(PathSample { s: s0 + l, pose: advance(&seg_start, kappa, l), kappa });
        }
        seg_start = advance(&seg_start, kappa, length);
        s0 += length;
    }
    if let Some(last) = samples.last_mut() {
        last.kappa = 0.0;
    }
    ReferencePath { samples, kappa_max, word: word.name.into() }
}

/// Shortest path between two poses of a tracked point under `constraint`.
pub fn plan_path(
    start: &Pose2,
    goal: &Pose2,
    constraint: &PathConstraint,
    opts: &PlanOptions,
) -> Result<ReferencePath> {
    require_positive("budget", opts.budget)?;
    require_positive("ds", opts.ds)?;
    if !(opts.curvature_fraction > 0.0 && opts.curvature_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("curvature_fraction in (0, 1] (got {})", opts.curvature_fraction)));
    }
    let path = match *constraint {
        PathConstraint::BoundedCurvature { kappa_max } => {
            require_positive("kappa_max", kappa_max)?;
            let rho = 1.0 / (kappa_max * opts.curvature_fraction);
            let mut words = dubins_words(start, goal, rho);
            words.sort_by(|x, y| x.total().total_cmp(&y.total()));
            let best = words.into_iter().find(|w| w.total() * rho <= opts.budget).ok_or_else(|| {
                Error::Unreachable(format!(
                    "no Dubins word at |kappa| <= {:.4} 1/m fits the {} m budget",
                    1.0 / rho,
                    opts.budget
                ))
            })?;
            sample_word(start, &best, rho, opts.ds, kappa_max)
        }
        PathConstraint::TurnDriveTurn => turn_drive_turn(start, goal, opts.ds),
        PathConstraint::Holonomic => linear(start, goal, opts.ds),
    };
    if path.length() > opts.budget {
        return Err(Error::Unreachable(format!("path of {:.4} m exceeds the {} m budget", path.length(), opts.budget)));
    }
    Ok(path)
}

fn turn_drive_turn(start: &Pose2, goal: &Pose2, ds: f64) -> ReferencePath {
    let delta = goal.position() - start.position();
    let dist = delta.norm();
    let mut samples = vec![PathSample { s: 0.0, pose: *start, kappa: 0.0 }];
    let push_turn = |samples: &mut Vec<PathSample>, to: f64| {
        let last = *samples.last().expect("non-empty");
        let turn = normalize_angle(to - last.pose.theta);
        if turn != 0.0 {
            samples.last_mut().expect("non-empty").kappa = f64::INFINITY.copysign(turn);
            samples.push(PathSample { s: last.s, pose: Pose2::new(last.pose.x, last.pose.y, to), kappa: 0.0 });
        }
    };
    if dist > 0.0 {
        let heading = delta.y.atan2(delta.x);
        push_turn(&mut samples, heading);
        let base = *samples.last().expect("non-empty");
        let n = (dist / ds).ceil() as usize;
        for i in 1..=n {
            let l = dist * i as f64 / n as f64;
            let p = start.position() + delta * (l / dist);
            samples.push(PathSample { s: base.s + l, pose: Pose2::new(p.x, p.y, heading), kappa: 0.0 });
        }
        let end = samples.last_mut().expect("non-empty");
        end.pose = Pose2::new(goal.x, goal.y, heading);
    }
    push_turn(&mut samples, goal.theta);
    ReferencePath { samples, kappa_max: f64::INFINITY, word: "TDT".into() }
}

fn linear(start: &Pose2, goal: &Pose2, ds: f64) -> ReferencePath {
    let delta = goal.position() - start.position();
    let dist = delta.norm();
    let turn = normalize_angle(goal.theta - start.theta);
    let kappa = if dist > 0.0 {
        turn / dist
    } else if turn != 0.0 {
        f64::INFINITY.copysign(turn)
    } else {
        0.0
    };
    let n = ((dist / ds).ceil() as usize).max(usize::from(turn != 0.0));
    let mut samples = vec![PathSample { s: 0.0, pose: *start, kappa }];
    for i in 1..=n {
        let u = i as f64 / n as f64;
        let p = start.position() + delta * u;
        samples.push(PathSample { s: dist * u, pose: Pose2::new(p.x, p.y, start.theta + turn * u), kappa });
    }
    samples.last_mut().expect("non-empty").kappa = 0.0;
    ReferencePath { samples, kappa_max: f64::INFINITY, word: "LIN".into() }
}

/// Pose of a body point carried with heading offset `frame_angle`.
pub fn tracking_pose(pose: &Pose2, point: &Vec2, frame_angle: f64) -> Pose2 {
    pose.compose(&Pose2::new(point.x, point.y, frame_angle))
}

/// Plans the path of the mode's tracking point between two object poses.
pub fn plan_reference(
    start: &Pose2,
    goal: &Pose2,
    mode: &ContactMode,
    object: &ObjectParams,
    opts: &PlanOptions,
) -> Result<ReferencePath> {
    let constraint = PathConstraint::for_mode(mode, object)?;
    let tp = mode.tracking_point(object.c, object.r0, object.weight())?.position;
    let frame = mode.frame().theta;
    plan_path(&tracking_pose(start, &tp, frame), &tracking_pose(goal, &tp, frame), &constraint, opts)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn aligned_goal_is_straight() {
        let c = PathConstraint::BoundedCurvature { kappa_max: 2.0 };
        let p = plan_path(&Pose2::IDENTITY, &Pose2::new(1.0, 0.0, 0.0), &c, &PlanOptions::default()).unwrap();
        assert!((p.length() - 1.0).abs() < 1e-12);
        assert_eq!(p.max_abs_curvature(), 0.0);
        assert!(p.samples.iter().all(|s| s.pose.y.abs() < 1e-12));
    }

    #[test]
    fn every_word_reaches_goal() {
        let start = Pose2::new(0.1, -0.3, 0.7);
        for goal in [Pose2::new(1.0, 0.4, -2.0), Pose2::new(0.2, -0.1, PI), Pose2::new(-0.5, 0.8, 1.0)] {
            for w in dubins_words(&start, &goal, 0.3) {
                let p = sample_word(&start, &w, 0.3, 0.01, 1.0 / 0.3);
                let (pos, ang) = p.end().error_to(&goal);
                assert!(pos < 1e-9 && ang < 1e-9, "{} {pos} {ang}", w.name);
            }
        }
    }

    #[test]
    fn turn_drive_turn_ends_at_goal() {
        let goal = Pose2::new(0.3, 0.4, -1.0);
        let p = plan_path(&Pose2::IDENTITY, &goal, &PathConstraint::TurnDriveTurn, &PlanOptions::default()).unwrap();
        assert_eq!(p.end(), goal);
        assert!((p.length() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn linear_interpolates_heading() {
        let goal = Pose2::new(0.4, 0.0, 1.0);
        let p = plan_path(&Pose2::IDENTITY, &goal, &PathConstraint::Holonomic, &PlanOptions::default()).unwrap();
        let mid = p.samples[p.samples.len() / 2].pose;
        assert!((mid.theta - 0.5).abs() < 1e-12);
        assert!((p.end().theta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_sign_follows_side() {
        let c = PathConstraint::BoundedCurvature { kappa_max: 2.0 };
        let p = plan_path(&Pose2::IDENTITY, &Pose2::new(1.0, 0.0, 0.0), &c, &PlanOptions::default()).unwrap();
        let right = p.project(&Vec2::new(0.5, -0.1), 0, usize::MAX);
        assert!((right.lateral - 0.1).abs() < 1e-12);
        assert!((right.s - 0.5).abs() < 1e-12);
        let left = p.project(&Vec2::new(0.5, 0.1), 0, usize::MAX);
        assert!((left.lateral + 0.1).abs() < 1e-12);
    }
}
