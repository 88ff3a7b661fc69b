use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Planar point or vector in metres (or newtons for forces).
pub type Vec2 = nalgebra::Vector2<f64>;

/// z-component of the planar cross product `a × b`.
#[inline]
pub fn cross2(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Rotates a vector by +90° (`ẑ × v`).
#[inline]
pub fn perp(v: &Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// Planar wrench `[fx, fy, tau]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Wrench {
    pub fx: f64,
    pub fy: f64,
    pub tau: f64,
}

impl Wrench {
    pub const ZERO: Wrench = Wrench { fx: 0.0, fy: 0.0, tau: 0.0 };

    pub fn new(fx: f64, fy: f64, tau: f64) -> Self {
        Self { fx, fy, tau }
    }

    /// Wrench of a single force `force` applied at `point`, taken about the origin.
    pub fn from_force_at(point: Vec2, force: Vec2) -> Self {
        Self::new(force.x, force.y, cross2(&point, &force))
    }

    pub fn force(&self) -> Vec2 {
        Vec2::new(self.fx, self.fy)
    }

    /// Re-expresses a wrench taken about `from` as one taken about `to`:
    /// `τ' = τ − (to − from) × F`.
    pub fn transport(&self, from: Vec2, to: Vec2) -> Self {
        let r = to - from;
        Self::new(self.fx, self.fy, self.tau - cross2(&r, &self.force()))
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.fx, self.fy, self.tau]
    }

    pub fn is_finite(&self) -> bool {
        self.fx.is_finite() && self.fy.is_finite() && self.tau.is_finite()
    }

    pub fn norm(&self) -> f64 {
        (self.fx * self.fx + self.fy * self.fy + self.tau * self.tau).sqrt()
    }
}

impl Add for Wrench {
    type Output = Wrench;
    fn add(self, o: Wrench) -> Wrench {
        Wrench::new(self.fx + o.fx, self.fy + o.fy, self.tau + o.tau)
    }
}

impl Sub for Wrench {
    type Output = Wrench;
    fn sub(self, o: Wrench) -> Wrench {
        Wrench::new(self.fx - o.fx, self.fy - o.fy, self.tau - o.tau)
    }
}

impl Mul<f64> for Wrench {
    type Output = Wrench;
    fn mul(self, k: f64) -> Wrench {
        Wrench::new(self.fx * k, self.fy * k, self.tau * k)
    }
}

impl Neg for Wrench {
    type Output = Wrench;
    fn neg(self) -> Wrench {
        self * -1.0
    }
}

impl std::iter::Sum for Wrench {
    fn sum<I: Iterator<Item = Wrench>>(iter: I) -> Wrench {
        iter.fold(Wrench::ZERO, |a, b| a + b)
    }
}

/// Planar body twist `[vx, vy, omega]`: the velocity of one body point plus
/// the angular rate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Twist {
    pub vx: f64,
    pub vy: f64,
    pub omega: f64,
}

impl Twist {
    pub const ZERO: Twist = Twist { vx: 0.0, vy: 0.0, omega: 0.0 };

    pub fn new(vx: f64, vy: f64, omega: f64) -> Self {
        Self { vx, vy, omega }
    }

    pub fn velocity(&self) -> Vec2 {
        Vec2::new(self.vx, self.vy)
    }

    /// Velocity of body point `to`, given this twist describes point `from`:
    /// `v' = v + ω ẑ × (to − from)`.
    pub fn transport(&self, from: Vec2, to: Vec2) -> Self {
        let r = to - from;
        Self::new(self.vx - self.omega * r.y, self.vy + self.omega * r.x, self.omega)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.vx, self.vy, self.omega]
    }

    pub fn is_finite(&self) -> bool {
        self.vx.is_finite() && self.vy.is_finite() && self.omega.is_finite()
    }

    /// Instantaneous centre of rotation relative to the twist's point, or
    /// `None` for pure translation.
    pub fn icr(&self) -> Option<Vec2> {
        if self.omega == 0.0 {
            None
        } else {
            Some(Vec2::new(-self.vy / self.omega, self.vx / self.omega))
        }
    }
}

impl Mul<f64> for Twist {
    type Output = Twist;
    fn mul(self, k: f64) -> Twist {
        Twist::new(self.vx * k, self.vy * k, self.omega * k)
    }
}
