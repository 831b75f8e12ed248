use serde::{Deserialize, Serialize};

use super::{mu_at, rise_state, AngleSchedule, CamConfig, CamError, CamLaw, FollowerState};

/// One step of an actuation sequence. Durations in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    /// Raise the follower by `law.lift`.
    Deploy { law: CamLaw, duration: f64 },
    /// Hold the follower.
    Dwell { duration: f64 },
    /// Hold the follower while the plates rotate at `rate` deg/s.
    Scrape { rate: f64, duration: f64 },
    /// Lower the follower by `law.lift` along the reversed law.
    Retract { law: CamLaw, duration: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseKind {
    Deploy,
    Dwell,
    Scrape,
    Retract,
}

impl PhaseKind {
    pub fn label(self) -> &'static str {
        match self {
            PhaseKind::Deploy => "deploy",
            PhaseKind::Dwell => "dwell",
            PhaseKind::Scrape => "scrape",
            PhaseKind::Retract => "retract",
        }
    }
}

impl std::fmt::Display for PhaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for PhaseKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deploy" => Ok(PhaseKind::Deploy),
            "dwell" => Ok(PhaseKind::Dwell),
            "scrape" => Ok(PhaseKind::Scrape),
            "retract" => Ok(PhaseKind::Retract),
            other => Err(format!("unknown phase '{other}'")),
        }
    }
}

impl Phase {
    pub fn kind(&self) -> PhaseKind {
        match self {
            Phase::Deploy { .. } => PhaseKind::Deploy,
            Phase::Dwell { .. } => PhaseKind::Dwell,
            Phase::Scrape { .. } => PhaseKind::Scrape,
            Phase::Retract { .. } => PhaseKind::Retract,
        }
    }

    pub fn duration(&self) -> f64 {
        match *self {
            Phase::Deploy { duration, .. }
            | Phase::Dwell { duration }
            | Phase::Scrape { duration, .. }
            | Phase::Retract { duration, .. } => duration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionProgram {
    pub phases: Vec<Phase>,
}

/// Per-phase bookkeeping resolved once before sampling.
#[derive(Debug, Clone, Copy)]
struct Segment {
    phase: Phase,
    start: f64,
    /// Follower level above `s0` when the phase begins.
    level: f64,
    /// Net cam rotation when the phase begins, rad.
    cam_angle: f64,
    /// Accumulated scrape rotation when the phase begins, deg.
    scrape_angle: f64,
    schedule: Option<AngleSchedule>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProgramSample {
    pub t: f64,
    pub phase_index: usize,
    pub kind: PhaseKind,
    pub state: FollowerState,
    /// Net cam rotation from the start of the program, rad.
    pub cam_angle: f64,
    /// Accumulated plate rotation from scrape phases, deg.
    pub scrape_angle: f64,
}

impl MotionProgram {
    pub fn new(phases: Vec<Phase>) -> Self {
        Self { phases }
    }

    /// Deploy, scrape, retract with the same law on both strokes.
    pub fn deploy_scrape_retract(
        law: CamLaw,
        stroke_time: f64,
        scrape_rate: f64,
        scrape_time: f64,
    ) -> Self {
        Self::new(vec![
            Phase::Deploy {
                law,
                duration: stroke_time,
            },
            Phase::Scrape {
                rate: scrape_rate,
                duration: scrape_time,
            },
            Phase::Retract {
                law,
                duration: stroke_time,
            },
        ])
    }

    pub fn total_duration(&self) -> f64 {
        self.phases.iter().map(Phase::duration).sum()
    }

    /// Highest follower level above `s0` reached by the program.
    pub fn peak_level(&self) -> f64 {
        let mut level: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for phase in &self.phases {
            match phase {
                Phase::Deploy { law, .. } => level += law.lift,
                Phase::Retract { law, .. } => level -= law.lift,
                _ => {}
            }
            peak = peak.max(level);
        }
        peak
    }

    pub fn validate(&self) -> Result<(), CamError> {
        if self.phases.is_empty() {
            return Err(CamError::InvalidProgram("program has no phases".into()));
        }
        let mut level = 0.0;
        for (i, phase) in self.phases.iter().enumerate() {
            let d = phase.duration();
            if !(d > 0.0 && d.is_finite()) {
                return Err(CamError::InvalidProgram(format!(
                    "phase {i} ({}) needs a positive duration (got {d})",
                    phase.kind()
                )));
            }
            match phase {
                Phase::Deploy { law, .. } => {
                    law.validate()
                        .map_err(|e| CamError::InvalidProgram(format!("phase {i}: {e}")))?;
                    level += law.lift;
                }
                Phase::Retract { law, .. } => {
                    law.validate()
                        .map_err(|e| CamError::InvalidProgram(format!("phase {i}: {e}")))?;
                    level -= law.lift;
                    if level < -1e-9 {
                        return Err(CamError::InvalidProgram(format!(
                            "phase {i} retracts below the rest position"
                        )));
                    }
                }
                Phase::Scrape { rate, .. } if !rate.is_finite() => {
                    return Err(CamError::InvalidProgram(format!(
                        "phase {i} has a non-finite scrape rate"
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn segments(&self, config: &CamConfig) -> Result<Vec<Segment>, CamError> {
        self.validate()?;
        config.validate()?;
        let mut out = Vec::with_capacity(self.phases.len());
        let (mut start, mut level, mut cam_angle, mut scrape_angle) = (0.0, 0.0, 0.0, 0.0);
        for phase in &self.phases {
            let schedule = match phase {
                Phase::Deploy { law, duration } | Phase::Retract { law, duration } => Some(
                    AngleSchedule::with_duration(config.omega, law.rise_angle, *duration)?,
                ),
                _ => None,
            };
            out.push(Segment {
                phase: *phase,
                start,
                level,
                cam_angle,
                scrape_angle,
                schedule,
            });
            start += phase.duration();
            match phase {
                Phase::Deploy { law, .. } => {
                    level += law.lift;
                    cam_angle += law.rise_angle;
                }
                Phase::Retract { law, .. } => {
                    level -= law.lift;
                    cam_angle -= law.rise_angle;
                }
                Phase::Scrape { rate, duration } => scrape_angle += rate * duration,
                Phase::Dwell { .. } => {}
            }
        }
        Ok(out)
    }

    /// State `tau` seconds into phase `index` (clamped to the phase).
    pub fn evaluate_in_phase(
        &self,
        config: &CamConfig,
        index: usize,
        tau: f64,
    ) -> Result<ProgramSample, CamError> {
        let segments = self.segments(config)?;
        let seg = segments
            .get(index)
            .ok_or_else(|| CamError::InvalidProgram(format!("no phase with index {index}")))?;
        sample_segment(config, seg, index, tau)
    }
}

fn sample_segment(
    config: &CamConfig,
    seg: &Segment,
    index: usize,
    tau: f64,
) -> Result<ProgramSample, CamError> {
    let tau = tau.clamp(0.0, seg.phase.duration());
    let t = seg.start + tau;
    let hold = |scrape_angle: f64| -> Result<ProgramSample, CamError> {
        let y = config.s0 + seg.level;
        Ok(ProgramSample {
            t,
            phase_index: index,
            kind: seg.phase.kind(),
            state: FollowerState {
                phi: 0.0,
                y,
                y_dot: 0.0,
                y_ddot: 0.0,
                mu: mu_at(config.e, y)?,
            },
            cam_angle: seg.cam_angle,
            scrape_angle,
        })
    };
    match seg.phase {
        Phase::Dwell { .. } => hold(seg.scrape_angle),
        Phase::Scrape { rate, .. } => hold(seg.scrape_angle + rate * tau),
        Phase::Deploy { law, .. } | Phase::Retract { law, .. } => {
            let schedule = seg.schedule.expect("stroke phases carry a schedule");
            let sign = if seg.phase.kind() == PhaseKind::Deploy {
                1.0
            } else {
                -1.0
            };
            let state = rise_state(config, &law, &schedule, tau, seg.level, sign)?;
            Ok(ProgramSample {
                t,
                phase_index: index,
                kind: seg.phase.kind(),
                state,
                cam_angle: seg.cam_angle + sign * state.phi,
                scrape_angle: seg.scrape_angle,
            })
        }
    }
}

/// Samples the program at `t = k dt`. A phase owns its start instant; the
/// final instant belongs to the last phase. When `dt` does not divide the
/// total duration a closing sample is added at the exact end time.
pub fn run_motion_program(
    program: &MotionProgram,
    config: &CamConfig,
    dt: f64,
) -> Result<Vec<ProgramSample>, CamError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CamError::InvalidParams(format!(
            "dt must be > 0 (got {dt})"
        )));
    }
    let segments = program.segments(config)?;
    let total = program.total_duration();
    let steps = (total / dt + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    if total - steps as f64 * dt > 1e-9 * total.max(1.0) {
        times.push(total);
    }

    let mut out = Vec::with_capacity(times.len());
    let mut index = 0;
    for t in times {
        let tol = 1e-9 * t.abs().max(1.0);
        while index + 1 < segments.len() && segments[index + 1].start <= t + tol {
            index += 1;
        }
        let seg = &segments[index];
        let mut sample = sample_segment(config, seg, index, t - seg.start)?;
        sample.t = t;
        out.push(sample);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cam::{LawFamily, SpeedProfile};
    use std::f64::consts::PI;

    fn cyc() -> CamLaw {
        CamLaw::new(LawFamily::Cycloidal, 3.0, PI).unwrap()
    }

    #[test]
    fn deploy_then_retract_returns_home() {
        let config = CamConfig::default();
        let p = MotionProgram::new(vec![
            Phase::Deploy {
                law: cyc(),
                duration: 1.0,
            },
            Phase::Retract {
                law: cyc(),
                duration: 1.0,
            },
        ]);
        let samples = run_motion_program(&p, &config, 0.01).unwrap();
        assert_eq!(samples.len(), 201);
        let last = samples.last().unwrap();
        assert!((last.state.y - config.s0).abs() < 1e-9);
        assert!(last.cam_angle.abs() < 1e-12);
        assert_eq!(last.kind, PhaseKind::Retract);
    }

    #[test]
    fn scrape_rotation_integrates_rate() {
        let config = CamConfig::default();
        let p = MotionProgram::new(vec![Phase::Scrape {
            rate: 120.0,
            duration: 3.5,
        }]);
        let samples = run_motion_program(&p, &config, 0.001).unwrap();
        assert_eq!(samples.len(), 3501);
        assert!((samples.last().unwrap().scrape_angle - 420.0).abs() < 1e-9);
    }

    #[test]
    fn holds_at_full_lift_between_strokes() {
        let config = CamConfig::default();
        let p = MotionProgram::new(vec![
            Phase::Deploy {
                law: cyc(),
                duration: 1.0,
            },
            Phase::Dwell { duration: 0.5 },
            Phase::Scrape {
                rate: 90.0,
                duration: 1.0,
            },
            Phase::Retract {
                law: cyc(),
                duration: 1.0,
            },
        ]);
        for s in run_motion_program(&p, &config, 0.005).unwrap() {
            if matches!(s.kind, PhaseKind::Dwell | PhaseKind::Scrape) {
                assert_eq!(s.state.y, config.s0 + 3.0);
                assert_eq!(s.state.y_dot, 0.0);
            }
        }
    }

    #[test]
    fn position_is_continuous_across_phase_boundaries() {
        for omega in [
            SpeedProfile::Constant { omega: PI },
            SpeedProfile::Trapezoidal {
                omega_max: 4.0,
                ramp_fraction: 0.3,
            },
        ] {
            let config = CamConfig {
                omega,
                ..Default::default()
            };
            for family in LawFamily::ALL {
                let law = CamLaw::new(family, 3.0, PI).unwrap();
                let p = MotionProgram::deploy_scrape_retract(law, 1.0, 120.0, 3.5);
                for i in 0..p.phases.len() - 1 {
                    let end = p
                        .evaluate_in_phase(&config, i, p.phases[i].duration())
                        .unwrap();
                    let next = p.evaluate_in_phase(&config, i + 1, 0.0).unwrap();
                    assert!((end.state.y - next.state.y).abs() < 1e-9, "{family} {i}");
                    assert!((end.scrape_angle - next.scrape_angle).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn boundary_instants_belong_to_the_next_phase() {
        let config = CamConfig::default();
        let p = MotionProgram::deploy_scrape_retract(cyc(), 1.0, 120.0, 3.5);
        let samples = run_motion_program(&p, &config, 0.001).unwrap();
        assert_eq!(samples.len(), 5501);
        assert_eq!(samples[999].kind, PhaseKind::Deploy);
        assert_eq!(samples[1000].kind, PhaseKind::Scrape);
        assert_eq!(samples[4500].kind, PhaseKind::Retract);
        assert_eq!(samples[5500].kind, PhaseKind::Retract);
    }

    #[test]
    fn uneven_dt_gets_a_closing_sample() {
        let config = CamConfig::default();
        let p = MotionProgram::new(vec![
            Phase::Deploy {
                law: cyc(),
                duration: 1.0,
            },
            Phase::Retract {
                law: cyc(),
                duration: 1.0,
            },
        ]);
        let samples = run_motion_program(&p, &config, 0.3).unwrap();
        assert_eq!(samples.len(), 8);
        assert_eq!(samples.last().unwrap().t, 2.0);
        assert!((samples.last().unwrap().state.y - config.s0).abs() < 1e-9);
    }

    #[test]
    fn invalid_programs() {
        let config = CamConfig::default();
        assert!(run_motion_program(&MotionProgram::new(vec![]), &config, 0.01).is_err());
        let neg = MotionProgram::new(vec![Phase::Dwell { duration: 0.0 }]);
        assert!(matches!(neg.validate(), Err(CamError::InvalidProgram(_))));
        let under = MotionProgram::new(vec![Phase::Retract {
            law: cyc(),
            duration: 1.0,
        }]);
        assert!(under.validate().is_err());
        let ok = MotionProgram::new(vec![Phase::Dwell { duration: 1.0 }]);
        assert!(run_motion_program(&ok, &config, 0.0).is_err());
    }

    #[test]
    fn emitted_pressure_angles_match_position() {
        let config = CamConfig::default();
        let p = MotionProgram::deploy_scrape_retract(
            CamLaw::new(LawFamily::ModifiedSine, 3.0, PI).unwrap(),
            1.0,
            120.0,
            1.0,
        );
        for s in run_motion_program(&p, &config, 0.01).unwrap() {
            assert_eq!(s.state.mu, (config.e / s.state.y).atan());
        }
    }
}
