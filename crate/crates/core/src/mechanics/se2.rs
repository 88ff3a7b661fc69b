use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::spatial::{Twist, Vec2};

/// Wraps an angle into `(-π, π]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// World-frame pose `(x, y, θ)` of a body frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl From<[f64; 3]> for Pose2 {
    fn from(a: [f64; 3]) -> Self {
        Pose2::new(a[0], a[1], a[2])
    }
}

impl From<Pose2> for [f64; 3] {
    fn from(p: Pose2) -> Self {
        [p.x, p.y, p.theta]
    }
}

/// `sin(φ)/φ` and `(1 − cos φ)/φ`, accurate near zero.
fn sinc_terms(phi: f64) -> (f64, f64) {
    if phi.abs() < 1e-4 {
        let p2 = phi * phi;
        (1.0 - p2 / 6.0 + p2 * p2 / 120.0, phi / 2.0 - phi * p2 / 24.0)
    } else {
        (phi.sin() / phi, (1.0 - phi.cos()) / phi)
    }
}

impl Pose2 {
    pub const IDENTITY: Pose2 = Pose2 { x: 0.0, y: 0.0, theta: 0.0 };

    /// Builds a pose, normalising the heading.
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta: normalize_angle(theta) }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Rotates a body-frame vector into the world frame.
    pub fn rotate(&self, v: &Vec2) -> Vec2 {
        let (s, c) = self.theta.sin_cos();
        Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    /// Rotates a world-frame vector into the body frame.
    pub fn unrotate(&self, v: &Vec2) -> Vec2 {
        let (s, c) = self.theta.sin_cos();
        Vec2::new(c * v.x + s * v.y, -s * v.x + c * v.y)
    }

    /// Maps a body-frame point to world coordinates.
    pub fn transform_point(&self, p: &Vec2) -> Vec2 {
        self.position() + self.rotate(p)
    }

    /// Maps a world point into the body frame.
    pub fn inverse_transform_point(&self, p: &Vec2) -> Vec2 {
        self.unrotate(&(p - self.position()))
    }

    /// `self ∘ other`: `other` is expressed in this pose's frame.
    pub fn compose(&self, other: &Pose2) -> Pose2 {
        let p = self.transform_point(&other.position());
        Pose2::new(p.x, p.y, self.theta + other.theta)
    }

    pub fn inverse(&self) -> Pose2 {
        let p = self.unrotate(&-self.position());
        Pose2::new(p.x, p.y, -self.theta)
    }

    /// Pose of `other` relative to this one (`self⁻¹ ∘ other`).
    pub fn between(&self, other: &Pose2) -> Pose2 {
        self.inverse().compose(other)
    }

    /// Flow of a constant body twist (about the frame origin) for `dt`.
    pub fn exp_step(&self, nu: &Twist, dt: f64) -> Pose2 {
        let phi = nu.omega * dt;
        let (s, c) = sinc_terms(phi);
        let dx = (s * nu.vx - c * nu.vy) * dt;
        let dy = (c * nu.vx + s * nu.vy) * dt;
        self.compose(&Pose2::new(dx, dy, phi))
    }

    /// Forward Euler on the world-frame kinematics.
    pub fn euler_step(&self, nu: &Twist, dt: f64) -> Pose2 {
        let v = self.rotate(&nu.velocity());
        Pose2::new(self.x + v.x * dt, self.y + v.y * dt, self.theta + nu.omega * dt)
    }

    /// Explicit midpoint (RK2) on the world-frame kinematics.
    pub fn midpoint_step(&self, nu: &Twist, dt: f64) -> Pose2 {
        let mid = Pose2 { x: self.x, y: self.y, theta: self.theta + 0.5 * nu.omega * dt };
        let v = mid.rotate(&nu.velocity());
        Pose2::new(self.x + v.x * dt, self.y + v.y * dt, self.theta + nu.omega * dt)
    }

    /// Euclidean position distance and absolute wrapped heading difference.
    pub fn error_to(&self, goal: &Pose2) -> (f64, f64) {
        ((self.position() - goal.position()).norm(), normalize_angle(self.theta - goal.theta).abs())
    }
}
