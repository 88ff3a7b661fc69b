use super::log::{ContactRecord, EpisodeStatus, StageLog, StepRecord, TrajectoryLog, LOG_SCHEMA};
use super::noise::measure_normal;
use super::object::{ObjectParams, ObjectState, SimConfig};
use super::step::{step, StepOutcome};
use crate::control::{pi_normal_force, PiGains, PiState};
use crate::error::Result;
use crate::mechanics::{Pose2, Vec2, Wrench};
use crate::modes::{ContactForce, ContactForceSet, ContactMode};

/// What a controller sees at the start of a step.
pub struct Observation<'a> {
    pub time: f64,
    pub dt: f64,
    pub pose: Pose2,
    pub goal: Pose2,
    pub object: &'a ObjectParams,
    pub mode: &'a ContactMode,
    /// Outcome of the previous step of this stage.
    pub last: Option<&'a StepOutcome>,
}

/// A stateful feedback law producing contact force commands for one mode.
pub trait Controller: Send {
    /// Called once when the controller's stage starts.
    fn begin(&mut self, _obs: &Observation) -> Result<()> {
        Ok(())
    }

    fn command(&mut self, obs: &Observation) -> Result<ContactForceSet>;

    /// Tracking point in the body frame.
    fn tracking_point(&self) -> Vec2 {
        Vec2::zeros()
    }

    /// Reference path of the tracking point in the world frame.
    fn reference(&self) -> Vec<Vec2> {
        Vec::new()
    }

    /// Current distance of the tracking point from the reference path.
    fn path_error(&self) -> Option<f64> {
        None
    }

    /// Wrench about the body origin the last command was allocated for.
    fn desired_wrench(&self) -> Option<Wrench> {
        None
    }
}

pub struct EpisodeStage {
    pub name: String,
    pub mode: ContactMode,
    pub goal: Pose2,
    pub eps_pos: f64,
    pub eps_ang: f64,
    pub controller: Box<dyn Controller>,
}

pub struct Episode {
    pub name: String,
    pub object: ObjectParams,
    pub start: Pose2,
    pub stages: Vec<EpisodeStage>,
    /// Normal-force regulation; `None` realizes commands exactly.
    pub pi: Option<PiGains>,
}

/// Runs the stages in order until the last goal tolerance holds, the step
/// budget runs out, or a step fails. Failures end the log rather than panic.
pub fn run_episode(episode: Episode, cfg: &SimConfig) -> TrajectoryLog {
    let mut log = TrajectoryLog {
        schema: LOG_SCHEMA.into(),
        scenario: episode.name.clone(),
        seed: cfg.seed,
        dt: cfg.dt,
        status: EpisodeStatus::Timeout,
        error: None,
        object: episode.object,
        start_pose: episode.start,
        final_pose: episode.start,
        final_time: 0.0,
        stages: Vec::new(),
        records: Vec::new(),
    };
    let mut state = ObjectState { pose: episode.start, params: episode.object };
    let mut step_index: u64 = 0;
    if let Err(e) = drive(episode, cfg, &mut state, &mut step_index, &mut log) {
        log.status = EpisodeStatus::Error;
        log.error = Some(e.to_string());
    }
    log.final_pose = state.pose;
    log.final_time = step_index as f64 * cfg.dt;
    log
}

fn drive(
    episode: Episode,
    cfg: &SimConfig,
    state: &mut ObjectState,
    k: &mut u64,
    log: &mut TrajectoryLog,
) -> Result<()> {
    cfg.validate()?;
    episode.object.validate()?;
    if episode.stages.is_empty() {
        return Err(crate::error::Error::InvalidParameter("episode needs at least one stage".into()));
    }
    let mut rng = cfg.rng();
    let n_stages = episode.stages.len();
    for (si, mut stage) in episode.stages.into_iter().enumerate() {
        let time = *k as f64 * cfg.dt;
        let obs = Observation {
            time,
            dt: cfg.dt,
            pose: state.pose,
            goal: stage.goal,
            object: &episode.object,
            mode: &stage.mode,
            last: None,
        };
        log.stages.push(StageLog {
            name: stage.name.clone(),
            mode: stage.mode.kind(),
            frame: stage.mode.frame().theta,
            goal: stage.goal,
            contacts: stage.mode.contacts().iter().map(|c| c.position).collect(),
            tracking_point: Vec2::zeros(),
            reference: Vec::new(),
            start_time: time,
            end_time: time,
            converged: false,
        });
        stage.controller.begin(&obs)?;
        {
            let entry = log.stages.last_mut().expect("stage pushed");
            entry.tracking_point = stage.controller.tracking_point();
            entry.reference = stage.controller.reference();
        }

        let n_contacts = stage.mode.contacts().len();
        let mut pi: Vec<PiState> = episode.pi.map(|g| vec![PiState::new(g); n_contacts]).unwrap_or_default();
        let mut last_realized: Option<Vec<f64>> = None;
        let mut last: Option<StepOutcome> = None;

        loop {
            let time = *k as f64 * cfg.dt;
            let (err_pos, err_ang) = state.pose.error_to(&stage.goal);
            if err_pos <= stage.eps_pos && err_ang <= stage.eps_ang {
                let entry = log.stages.last_mut().expect("stage pushed");
                entry.converged = true;
                entry.end_time = time;
                if si + 1 == n_stages {
                    log.status = EpisodeStatus::Converged;
                }
                break;
            }
            if *k >= cfg.max_steps {
                log.stages.last_mut().expect("stage pushed").end_time = time;
                log.status = EpisodeStatus::Timeout;
                return Ok(());
            }

            let obs = Observation {
                time,
                dt: cfg.dt,
                pose: state.pose,
                goal: stage.goal,
                object: &episode.object,
                mode: &stage.mode,
                last: last.as_ref(),
            };
            let commanded = stage.controller.command(&obs)?;

            let realized = if pi.is_empty() {
                commanded.clone()
            } else {
                let prev = last_realized.take().unwrap_or_else(|| commanded.forces.iter().map(|f| f.normal).collect());
                let forces: Vec<ContactForce> = commanded
                    .forces
                    .iter()
                    .zip(prev.iter())
                    .zip(pi.iter_mut())
                    .map(|((f, &p), state_i)| {
                        let meas = measure_normal(p, cfg, &mut rng);
                        ContactForce::new(f.tangential, pi_normal_force(f.normal, meas, state_i, cfg.dt))
                    })
                    .collect();
                last_realized = Some(forces.iter().map(|f| f.normal).collect());
                ContactForceSet::new(forces, episode.object.mu)
            };

            let (next, outcome) = step(state, &realized, &stage.mode, cfg)?;

            if k.is_multiple_of(cfg.log_stride) {
                let contacts = stage
                    .mode
                    .contacts()
                    .iter()
                    .zip(&realized.forces)
                    .zip(&commanded.forces)
                    .zip(&outcome.slack)
                    .map(|(((p, f), c), &slack)| {
                        let planar = p.planar_force(f);
                        ContactRecord {
                            fx: planar.x,
                            fy: planar.y,
                            f_n: f.normal,
                            fn_cmd: c.normal,
                            press: p.pressing_force(f),
                            slack,
                        }
                    })
                    .collect();
                log.records.push(StepRecord {
                    time,
                    stage: si,
                    pose: state.pose,
                    contacts,
                    wrench: outcome.wrench,
                    twist: outcome.twist,
                    cop: outcome.cop,
                    n_total: outcome.n_total,
                    slack_min: outcome.slack.iter().copied().fold(f64::INFINITY, f64::min),
                    err_pos,
                    err_ang,
                    tracking_point: state.pose.transform_point(&stage.controller.tracking_point()),
                    path_error: stage.controller.path_error(),
                    desired_wrench: stage.controller.desired_wrench(),
                });
            }

            *state = next;
            last = Some(outcome);
            *k += 1;
        }
    }
    Ok(())
}
