use serde::Serialize;

use super::spatial::{Twist, Wrench};
use crate::error::{require_positive, Error, Result};

/// Ellipsoidal limit surface `Wᵀ A W = 1` with `A = diag(a, a, b)` and the
/// mobilities it induces under the normality rule.
///
/// Only the ratio `alpha / beta = (c r0)²` shapes trajectories; `lambda_scale`
/// sets the (otherwise free) quasi-static time scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSurfaceModel {
    mu: f64,
    n_total: f64,
    c: f64,
    r0: f64,
    lambda_scale: f64,
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
}

impl LimitSurfaceModel {
    /// Builds the model, rejecting non-finite or non-positive inputs and `c > 1`.
    pub fn new(mu: f64, n_total: f64, c: f64, r0: f64, lambda_scale: f64) -> Result<Self> {
        require_positive("mu", mu)?;
        require_positive("n_total", n_total)?;
        require_positive("c", c)?;
        require_positive("r0", r0)?;
        require_positive("lambda_scale", lambda_scale)?;
        if c > 1.0 {
            return Err(Error::InvalidParameter(format!("c <= 1 (got {c})")));
        }
        let friction = mu * n_total;
        let a = 1.0 / (friction * friction);
        let b = 1.0 / ((c * r0 * friction) * (c * r0 * friction));
        Ok(Self { mu, n_total, c, r0, lambda_scale, a, b, alpha: 2.0 * lambda_scale * a, beta: 2.0 * lambda_scale * b })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn n_total(&self) -> f64 {
        self.n_total
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn r0(&self) -> f64 {
        self.r0
    }
    pub fn lambda_scale(&self) -> f64 {
        self.lambda_scale
    }
    /// Inverse-squared force semi-axis (N⁻²).
    pub fn a(&self) -> f64 {
        self.a
    }
    /// Inverse-squared torque semi-axis ((N·m)⁻²).
    pub fn b(&self) -> f64 {
        self.b
    }
    /// Translational mobility (m/(s·N)).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// Rotational mobility (rad/(s·N·m)).
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Characteristic squared length `(c r0)²`, equal to `alpha / beta`.
    pub fn length_sq(&self) -> f64 {
        (self.c * self.r0) * (self.c * self.r0)
    }

    /// Gradient `2 A W` of the limit surface at `w`.
    pub fn gradient(&self, w: &Wrench) -> [f64; 3] {
        [2.0 * self.a * w.fx, 2.0 * self.a * w.fy, 2.0 * self.b * w.tau]
    }
}

/// `H(W) = Wᵀ A W`; 1 on the slip boundary.
pub fn ls_value(w: &Wrench, model: &LimitSurfaceModel) -> f64 {
    model.a * (w.fx * w.fx + w.fy * w.fy) + model.b * w.tau * w.tau
}

/// Normality rule `ν = 2λ A W`, i.e. `(α Fx, α Fy, β τ)`.
pub fn wrench_to_twist(w: &Wrench, model: &LimitSurfaceModel) -> Twist {
    Twist::new(model.alpha * w.fx, model.alpha * w.fy, model.beta * w.tau)
}

/// Componentwise inverse of [`wrench_to_twist`].
pub fn twist_to_wrench(nu: &Twist, model: &LimitSurfaceModel) -> Wrench {
    Wrench::new(nu.vx / model.alpha, nu.vy / model.alpha, nu.omega / model.beta)
}

/// Rebuilds the model for a new total normal force; `a, b, alpha, beta` scale
/// by `(n_total / new_n_total)²`.
pub fn rescale_mobility(model: &LimitSurfaceModel, new_n_total: f64) -> Result<LimitSurfaceModel> {
    require_positive("new_n_total", new_n_total)?;
    LimitSurfaceModel::new(model.mu, new_n_total, model.c, model.r0, model.lambda_scale)
}

/// Relative deviation of `nu` from being a positive multiple of `2 A W`.
///
/// Returns `‖ν × g‖ / (‖ν‖ ‖g‖)` when the two point the same way and
/// `f64::INFINITY` when they oppose. Zero for a zero wrench with zero twist.
pub fn normality_residual(w: &Wrench, nu: &Twist, model: &LimitSurfaceModel) -> f64 {
    let g = model.gradient(w);
    let v = nu.as_array();
    let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if gn == 0.0 && vn == 0.0 {
        return 0.0;
    }
    if gn == 0.0 || vn == 0.0 {
        return f64::INFINITY;
    }
    let dot: f64 = g.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    if dot <= 0.0 {
        return f64::INFINITY;
    }
    let cross = [v[1] * g[2] - v[2] * g[1], v[2] * g[0] - v[0] * g[2], v[0] * g[1] - v[1] * g[0]];
    cross.iter().map(|x| x * x).sum::<f64>().sqrt() / (gn * vn)
}
