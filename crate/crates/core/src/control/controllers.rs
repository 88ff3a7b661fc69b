use serde::{Deserialize, Serialize};

use super::lookahead::{lookahead_unicycle, LookaheadParams, UnicycleAxle};
use super::pose::{pose_pd_wrench, PoseGains};
use super::reference::{plan_reference, tracking_pose, PlanOptions, ReferencePath};
use super::stanley::{stanley_rws, StanleyGains, SteeringConvention};
use crate::error::{Error, Result};
use crate::mechanics::{compute_cop, cross2, normalize_angle, NormalContact, Pose2, Twist, Vec2, Wrench};
use crate::modes::{
    dual_top_allocate, orthogonal_allocate, orthogonal_min_bias, ContactForce, ContactForceSet, ContactMode,
    CopStrategy, DualTopConfig, ModeGeometry, PivotSide, DEFAULT_MIN_NORMAL,
};
use crate::world::{Controller, ObjectParams, Observation};

fn default_curvature_fraction() -> f64 {
    0.5
}
fn default_extension() -> f64 {
    0.3
}
fn default_budget() -> f64 {
    10.0
}
fn default_margin() -> f64 {
    0.1
}
fn default_min_normal() -> f64 {
    DEFAULT_MIN_NORMAL
}

/// Controller choice and gains as written in a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControllerSpec {
    /// Stanley steering of the virtual front axle along a Dubins reference.
    StanleyRws {
        k: f64,
        v_nominal: f64,
        /// Defaults to 0.9·atan μ.
        #[serde(default)]
        delta_max: Option<f64>,
        #[serde(default)]
        convention: SteeringConvention,
        #[serde(default = "default_curvature_fraction")]
        curvature_fraction: f64,
        /// Straight run appended past the goal (m).
        #[serde(default = "default_extension")]
        extension: f64,
        #[serde(default = "default_budget")]
        budget: f64,
    },
    /// Look-ahead regulation of a unicycle tracking point.
    LookaheadUnicycle {
        params: LookaheadParams,
        /// Fraction of the friction circle held in reserve.
        #[serde(default = "default_margin")]
        margin: f64,
    },
    /// Decoupled PD wrench about the mode's wrench reference point.
    PosePd {
        gains: PoseGains,
        /// Smallest pusher normal in orthogonal pushing (N).
        #[serde(default = "default_min_normal")]
        min_normal: f64,
        /// Fixed internal squeeze for orthogonal pushing (N); the smallest
        /// feasible one is used when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f_bias: Option<f64>,
        #[serde(default = "default_margin")]
        margin: f64,
    },
    /// Commands zero force on every contact.
    Zero,
}

impl ControllerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ControllerSpec::StanleyRws { .. } => "stanley_rws",
            ControllerSpec::LookaheadUnicycle { .. } => "lookahead_unicycle",
            ControllerSpec::PosePd { .. } => "pose_pd",
            ControllerSpec::Zero => "zero",
        }
    }
}

/// Instantiates a controller for `mode`, rejecting unsupported pairings.
pub fn build_controller(
    spec: &ControllerSpec,
    mode: &ContactMode,
    object: &ObjectParams,
) -> Result<Box<dyn Controller>> {
    let mismatch = || Error::ModeMismatch(format!("controller {} does not drive mode {}", spec.name(), mode.kind()));
    match *spec {
        ControllerSpec::Zero => Ok(Box::new(ZeroController)),
        ControllerSpec::StanleyRws { k, v_nominal, delta_max, convention, curvature_fraction, extension, budget } => {
            let lever = match *mode.geometry() {
                ModeGeometry::RearPushSingle { d, .. } => d,
                ModeGeometry::DualRearBicycle { d_x, .. } => d_x,
                _ => return Err(mismatch()),
            };
            let gains =
                StanleyGains { k, v_nominal, delta_max: delta_max.unwrap_or(0.9 * object.mu.atan()), convention };
            gains.validate(object.mu)?;
            if !(extension.is_finite() && extension >= 0.0) {
                return Err(Error::InvalidParameter(format!("extension >= 0 (got {extension})")));
            }
            let opts = PlanOptions { budget, curvature_fraction, ..PlanOptions::default() };
            let alpha = object.nominal_model()?.alpha();
            Ok(Box::new(StanleyController {
                gains,
                opts,
                extension,
                lever,
                push: v_nominal / alpha,
                path: None,
                point: Vec2::zeros(),
                frame: 0.0,
                hint: 0,
                error: None,
            }))
        }
        ControllerSpec::LookaheadUnicycle { params, margin } => {
            params.validate()?;
            check_margin(margin)?;
            match mode.geometry() {
                ModeGeometry::TopPressSingle { .. } | ModeGeometry::DualRearDiffDrive { .. } => {}
                _ => return Err(mismatch()),
            }
            Ok(Box::new(LookaheadController {
                params,
                margin,
                axle: UnicycleAxle { point: Vec2::zeros(), forward: Vec2::new(1.0, 0.0) },
                reference: Vec::new(),
            }))
        }
        ControllerSpec::PosePd { gains, min_normal, f_bias, margin } => {
            if let Some(b) = f_bias {
                if !(b.is_finite() && b >= 0.0) {
                    return Err(Error::InvalidParameter(format!("f_bias >= 0 (got {b})")));
                }
            }
            gains.validate()?;
            check_margin(margin)?;
            if !(min_normal.is_finite() && min_normal >= 0.0) {
                return Err(Error::InvalidParameter(format!("min_normal >= 0 (got {min_normal})")));
            }
            match mode.geometry() {
                ModeGeometry::OrthogonalBimanual { .. } | ModeGeometry::DualTopPress { .. } => {}
                _ => return Err(mismatch()),
            }
            Ok(Box::new(PosePdController {
                gains,
                min_normal,
                f_bias,
                desired: None,
                margin,
                point: Vec2::zeros(),
                line: (Vec2::zeros(), Vec2::zeros()),
                error: None,
            }))
        }
    }
}

fn check_margin(margin: f64) -> Result<()> {
    if (0.0..1.0).contains(&margin) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("margin in [0, 1) (got {margin})")))
    }
}

/// Keeps at most `max` evenly spread points, always including the last.
fn decimate(points: Vec<Vec2>, max: usize) -> Vec<Vec2> {
    if points.len() <= max {
        return points;
    }
    let stride = points.len().div_ceil(max);
    let mut out: Vec<Vec2> = points.iter().step_by(stride).copied().collect();
    if let Some(last) = points.last() {
        if out.last() != Some(last) {
            out.push(*last);
        }
    }
    out
}

struct ZeroController;

impl Controller for ZeroController {
    fn command(&mut self, obs: &Observation) -> Result<ContactForceSet> {
        Ok(ContactForceSet::new(vec![ContactForce::default(); obs.mode.contacts().len()], obs.object.mu))
    }
}

struct StanleyController {
    gains: StanleyGains,
    opts: PlanOptions,
    extension: f64,
    lever: f64,
    /// Total pusher normal force (N).
    push: f64,
    path: Option<ReferencePath>,
    point: Vec2,
    frame: f64,
    hint: usize,
    error: Option<f64>,
}

impl Controller for StanleyController {
    fn begin(&mut self, obs: &Observation) -> Result<()> {
        let o = obs.object;
        self.point = obs.mode.tracking_point(o.c, o.r0, o.weight())?.position;
        self.frame = obs.mode.frame().theta;
        let mut path = plan_reference(&obs.pose, &obs.goal, obs.mode, o, &self.opts)?;
        path.extend_straight(self.extension, self.opts.ds);
        self.path = Some(path);
        self.hint = 0;
        Ok(())
    }

    fn command(&mut self, obs: &Observation) -> Result<ContactForceSet> {
        let path = self.path.as_ref().ok_or_else(|| Error::Invariant("controller not started".into()))?;
        let o = obs.object;
        let here = tracking_pose(&obs.pose, &self.point, self.frame);
        // a window ahead of the last projection keeps progress monotone
        let window = (0.4 / self.opts.ds) as usize;
        let proj = path.project(&here.position(), self.hint.saturating_sub(window / 8), self.hint + window);
        self.hint = proj.index;
        self.error = Some(proj.lateral.abs());

        let cr0_sq = (o.c * o.r0).powi(2);
        let feedforward = if proj.kappa.is_finite() { (-proj.kappa * cr0_sq / self.lever).atan() } else { 0.0 };
        let theta_e = normalize_angle(proj.heading - here.theta);
        let steer = stanley_rws(theta_e, proj.lateral, self.gains.v_nominal, &self.gains)?;
        let delta = (feedforward + steer.raw).clamp(-self.gains.delta_max, self.gains.delta_max);

        let frame = Pose2::new(0.0, 0.0, self.frame);
        let contacts = obs.mode.contacts().len();
        let share = self.push / contacts as f64;
        let shear = frame.rotate(&Vec2::new(0.0, share * delta.tan()));
        let forces = vec![ContactForce::new(shear, share); contacts];
        Ok(ContactForceSet::new(forces, o.mu))
    }

    fn tracking_point(&self) -> Vec2 {
        self.point
    }

    fn reference(&self) -> Vec<Vec2> {
        self.path.as_ref().map(|p| decimate(p.positions(), 400)).unwrap_or_default()
    }

    fn path_error(&self) -> Option<f64> {
        self.error
    }
}

struct LookaheadController {
    params: LookaheadParams,
    margin: f64,
    axle: UnicycleAxle,
    reference: Vec<Vec2>,
}

impl LookaheadController {
    fn press(mode: &ContactMode) -> Option<(Vec2, f64)> {
        match *mode.geometry() {
            ModeGeometry::TopPressSingle { contact, press_force } => Some((contact, press_force)),
            _ => None,
        }
    }
}

impl Controller for LookaheadController {
    fn begin(&mut self, obs: &Observation) -> Result<()> {
        let o = obs.object;
        let point = obs.mode.tracking_point(o.c, o.r0, o.weight())?.position;
        let forward = match Self::press(obs.mode) {
            Some((contact, press)) => {
                let weight = NormalContact::new(Vec2::zeros(), o.weight());
                let cop = compute_cop(&weight, &[NormalContact::new(contact, press)])?.cop;
                (contact - cop).normalize()
            }
            None => Vec2::new(1.0, 0.0),
        };
        self.axle = UnicycleAxle { point, forward };
        let start = self.axle.pose(&obs.pose).position();
        let goal = self.axle.pose(&obs.goal);
        let far = self.params.lookahead_at(f64::INFINITY, o.footprint[0]);
        let beyond = goal.transform_point(&Vec2::new(far, 0.0));
        self.reference = vec![start, goal.position(), beyond];
        Ok(())
    }

    fn command(&mut self, obs: &Observation) -> Result<ContactForceSet> {
        let o = obs.object;
        let length = o.footprint[0];
        match Self::press(obs.mode) {
            Some((_, press)) => {
                let f_max = o.mu * (1.0 - self.margin) * press;
                let f = lookahead_unicycle(&obs.pose, &obs.goal, &self.axle, &self.params, length, f_max);
                Ok(ContactForceSet::new(vec![ContactForce::new(f, press)], o.mu))
            }
            None => {
                let f_max = 2.0 * self.params.f_long;
                let f = lookahead_unicycle(&obs.pose, &obs.goal, &self.axle, &self.params, length, f_max);
                let drive = f.x.max(0.0);
                let left = ((drive - f.y) / 2.0).max(0.0);
                let right = ((drive + f.y) / 2.0).max(0.0);
                Ok(ContactForceSet::new(
                    vec![ContactForce::new(Vec2::zeros(), left), ContactForce::new(Vec2::zeros(), right)],
                    o.mu,
                ))
            }
        }
    }

    fn tracking_point(&self) -> Vec2 {
        self.axle.point
    }

    fn reference(&self) -> Vec<Vec2> {
        self.reference.clone()
    }
}

struct PosePdController {
    gains: PoseGains,
    min_normal: f64,
    f_bias: Option<f64>,
    desired: Option<Wrench>,
    margin: f64,
    point: Vec2,
    line: (Vec2, Vec2),
    error: Option<f64>,
}

fn segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let u = if len2 > 0.0 { ((p - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * u)).norm()
}

impl PosePdController {
    fn allocate(&mut self, w_ref: &Wrench, obs: &Observation) -> Result<ContactForceSet> {
        let o = obs.object;
        let w = w_ref.transport(self.point, Vec2::zeros());
        match *obs.mode.geometry() {
            ModeGeometry::OrthogonalBimanual { d } => {
                let bias = self
                    .f_bias
                    .unwrap_or_else(|| orthogonal_min_bias(&w, d, self.min_normal, Some(o.mu * (1.0 - self.margin))));
                self.desired = Some(w);
                Ok(orthogonal_allocate(&w, d, bias, o.mu)?.forces)
            }
            ModeGeometry::DualTopPress { p_l, p_r, n_budget, margin, min_press, strategy } => {
                let cfg = DualTopConfig { mu: o.mu, n_obj: o.weight(), n_budget, margin, min_press, strategy };
                let w = match strategy {
                    CopStrategy::Pivot { about, push_point, push_normal } => {
                        let anchor = if about == PivotSide::Left { p_l } else { p_r };
                        let n = push_normal.normalize();
                        let denom = cross2(&(push_point - anchor), &n);
                        // the pusher cannot pull: clip the torque at zero push
                        let idle = cross2(&anchor, &w.force());
                        let tau = if denom > 0.0 { w.tau.max(idle) } else { w.tau.min(idle) };
                        Wrench::new(w.fx, w.fy, tau)
                    }
                    _ => w,
                };
                let mut scale = 1.0;
                loop {
                    match dual_top_allocate(&(w * scale), &p_l, &p_r, &cfg) {
                        Ok(a) => {
                            self.desired = Some(w * scale);
                            return Ok(a.forces);
                        }
                        Err(Error::BudgetExceeded { .. }) if scale > 1e-3 => scale *= 0.5,
                        Err(e) => return Err(e),
                    }
                }
            }
            _ => Err(Error::ModeMismatch(format!("pose_pd does not drive mode {}", obs.mode.kind()))),
        }
    }
}

impl Controller for PosePdController {
    fn begin(&mut self, obs: &Observation) -> Result<()> {
        let o = obs.object;
        self.point = obs.mode.tracking_point(o.c, o.r0, o.weight())?.position;
        self.line = (obs.pose.transform_point(&self.point), obs.goal.transform_point(&self.point));
        Ok(())
    }

    fn command(&mut self, obs: &Observation) -> Result<ContactForceSet> {
        let here = tracking_pose(&obs.pose, &self.point, 0.0);
        let target = tracking_pose(&obs.goal, &self.point, 0.0);
        self.error = Some(segment_distance(&here.position(), &self.line.0, &self.line.1));
        let velocity = obs.last.map_or(Twist::ZERO, |l| l.twist.transport(l.cop, self.point));
        let w = pose_pd_wrench(&here, &target, &velocity, &self.gains);
        self.allocate(&w, obs)
    }

    fn tracking_point(&self) -> Vec2 {
        self.point
    }

    fn reference(&self) -> Vec<Vec2> {
        vec![self.line.0, self.line.1]
    }

    fn path_error(&self) -> Option<f64> {
        self.error
    }

    fn desired_wrench(&self) -> Option<Wrench> {
        self.desired
    }
}
