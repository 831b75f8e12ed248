//! Offset translating roller follower driven by a rotating cam.
//!
//! With lateral offset `e` and initial vertical distance `s0`, the follower
//! sits at `y = s0 + s(phi)` and the pressure angle is `atan(e / y)`.
//! Velocity and acceleration follow from the chain rule on the cam's angular
//! speed profile, including the `ds/dphi * d(omega)/dt` term on speed ramps.

mod law;
mod profile;
mod program;

pub use law::{law_eval, CamLaw, LawFamily};
pub use profile::{cam_profile, check_constraints, pitch_curve, ConstraintReport, PitchCurve};
pub use program::{run_motion_program, MotionProgram, Phase, PhaseKind, ProgramSample};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CamError {
    #[error("invalid cam parameters: {0}")]
    InvalidParams(String),
    #[error("cam angle {phi} rad outside [0, {rise_angle}]")]
    AngleOutOfRange { phi: f64, rise_angle: f64 },
    #[error("time {t} s outside [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },
    #[error(
        "undercut: roller radius {roller_radius} mm exceeds minimum pitch radius of curvature {min_radius} mm"
    )]
    Undercut { roller_radius: f64, min_radius: f64 },
    #[error("cam profile self-intersects ({count} crossing edge pairs)")]
    SelfIntersecting { count: usize },
    #[error("invalid motion program: {0}")]
    InvalidProgram(String),
}

/// Cam angular speed over a rise, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpeedProfile {
    Constant {
        omega: f64,
    },
    /// Accelerate at constant rate for `ramp_fraction` of the rise time,
    /// cruise at `omega_max`, then decelerate symmetrically.
    Trapezoidal {
        omega_max: f64,
        ramp_fraction: f64,
    },
}

impl SpeedProfile {
    fn validate(&self) -> Result<(), CamError> {
        match *self {
            SpeedProfile::Constant { omega } if !(omega > 0.0 && omega.is_finite()) => Err(
                CamError::InvalidParams(format!("omega must be > 0 (got {omega})")),
            ),
            SpeedProfile::Trapezoidal {
                omega_max,
                ramp_fraction,
            } => {
                if !(omega_max > 0.0 && omega_max.is_finite()) {
                    Err(CamError::InvalidParams(format!(
                        "omega_max must be > 0 (got {omega_max})"
                    )))
                } else if !(ramp_fraction > 0.0 && ramp_fraction <= 0.5) {
                    Err(CamError::InvalidParams(format!(
                        "ramp fraction must lie in (0, 0.5] (got {ramp_fraction})"
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Cam angle as a function of time over one rise of `rise_angle` radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSchedule {
    pub rise_angle: f64,
    pub duration: f64,
    pub ramp_time: f64,
    pub omega_max: f64,
}

impl AngleSchedule {
    /// Timing implied by running `profile` over `rise_angle`.
    pub fn new(profile: SpeedProfile, rise_angle: f64) -> Result<Self, CamError> {
        profile.validate()?;
        Ok(match profile {
            SpeedProfile::Constant { omega } => Self {
                rise_angle,
                duration: rise_angle / omega,
                ramp_time: 0.0,
                omega_max: omega,
            },
            SpeedProfile::Trapezoidal {
                omega_max,
                ramp_fraction,
            } => {
                let duration = rise_angle / (omega_max * (1.0 - ramp_fraction));
                Self {
                    rise_angle,
                    duration,
                    ramp_time: ramp_fraction * duration,
                    omega_max,
                }
            }
        })
    }

    /// Same speed-profile shape, rescaled so the rise takes `duration` seconds.
    pub fn with_duration(
        profile: SpeedProfile,
        rise_angle: f64,
        duration: f64,
    ) -> Result<Self, CamError> {
        profile.validate()?;
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(CamError::InvalidParams(format!(
                "duration must be > 0 (got {duration})"
            )));
        }
        let ramp_fraction = match profile {
            SpeedProfile::Constant { .. } => 0.0,
            SpeedProfile::Trapezoidal { ramp_fraction, .. } => ramp_fraction,
        };
        Ok(Self {
            rise_angle,
            duration,
            ramp_time: ramp_fraction * duration,
            omega_max: rise_angle / (duration * (1.0 - ramp_fraction)),
        })
    }

    fn accel(&self) -> f64 {
        if self.ramp_time > 0.0 {
            self.omega_max / self.ramp_time
        } else {
            0.0
        }
    }

    /// `(phi, omega, omega_dot)` at `t`, clamped to `[0, duration]`.
    pub fn at(&self, t: f64) -> (f64, f64, f64) {
        let t = t.clamp(0.0, self.duration);
        let tr = self.ramp_time;
        let alpha = self.accel();
        if tr > 0.0 && t < tr {
            (0.5 * alpha * t * t, alpha * t, alpha)
        } else if tr > 0.0 && t > self.duration - tr {
            let left = self.duration - t;
            (
                self.rise_angle - 0.5 * alpha * left * left,
                alpha * left,
                -alpha,
            )
        } else {
            let ramp_angle = 0.5 * self.omega_max * tr;
            (ramp_angle + self.omega_max * (t - tr), self.omega_max, 0.0)
        }
    }

    /// Inverse of [`AngleSchedule::at`] for the angle.
    pub fn time_at(&self, phi: f64) -> f64 {
        let phi = phi.clamp(0.0, self.rise_angle);
        let tr = self.ramp_time;
        let ramp_angle = 0.5 * self.omega_max * tr;
        if tr > 0.0 && phi < ramp_angle {
            (2.0 * phi / self.accel()).sqrt()
        } else if tr > 0.0 && phi > self.rise_angle - ramp_angle {
            self.duration - (2.0 * (self.rise_angle - phi) / self.accel()).sqrt()
        } else {
            tr + (phi - ramp_angle) / self.omega_max
        }
    }
}

/// Mechanism constants of the offset roller follower. Lengths in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CamConfig {
    pub e: f64,
    pub s0: f64,
    pub roller_radius: f64,
    pub omega: SpeedProfile,
}

impl Default for CamConfig {
    /// Sized for a 17 mm capsule bore; one half-turn rise per second.
    fn default() -> Self {
        Self {
            e: 2.0,
            s0: 4.0,
            roller_radius: 0.8,
            omega: SpeedProfile::Constant { omega: PI },
        }
    }
}

impl CamConfig {
    pub fn validate(&self) -> Result<(), CamError> {
        if !(self.e >= 0.0 && self.e.is_finite()) {
            return Err(CamError::InvalidParams(format!(
                "e >= 0 violated (e = {})",
                self.e
            )));
        }
        if !(self.s0 > 0.0 && self.s0.is_finite()) {
            return Err(CamError::InvalidParams(format!(
                "s0 > 0 violated (s0 = {})",
                self.s0
            )));
        }
        if !(self.roller_radius >= 0.0 && self.roller_radius.is_finite()) {
            return Err(CamError::InvalidParams(format!(
                "roller_radius >= 0 violated (roller_radius = {})",
                self.roller_radius
            )));
        }
        self.omega.validate()
    }
}

/// Default rise: 3 mm cycloidal over half a turn.
pub fn default_law() -> CamLaw {
    CamLaw {
        family: LawFamily::Cycloidal,
        lift: 3.0,
        rise_angle: PI,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FollowerState {
    /// Cam angle within the current law, rad.
    pub phi: f64,
    pub y: f64,
    pub y_dot: f64,
    pub y_ddot: f64,
    /// Pressure angle, rad.
    pub mu: f64,
}

/// `atan(e / (s0 + s))` in radians.
pub fn pressure_angle(config: &CamConfig, s: f64) -> Result<f64, CamError> {
    mu_at(config.e, config.s0 + s)
}

/// Follower state `t` seconds into a rise driven by `config.omega`.
pub fn follower_kinematics(
    config: &CamConfig,
    law: &CamLaw,
    t: f64,
) -> Result<FollowerState, CamError> {
    config.validate()?;
    law.validate()?;
    let schedule = AngleSchedule::new(config.omega, law.rise_angle)?;
    if !(t >= 0.0 && t <= schedule.duration) {
        return Err(CamError::TimeOutOfRange {
            t,
            duration: schedule.duration,
        });
    }
    rise_state(config, law, &schedule, t, 0.0, 1.0)
}

/// Kinematics of a rise (`sign = 1`) or return (`sign = -1`) starting from
/// follower level `base` above `s0`.
pub(crate) fn rise_state(
    config: &CamConfig,
    law: &CamLaw,
    schedule: &AngleSchedule,
    t: f64,
    base: f64,
    sign: f64,
) -> Result<FollowerState, CamError> {
    let (phi, omega, omega_dot) = schedule.at(t);
    let (s, ds, dds) = law.eval_unchecked(phi.min(law.rise_angle));
    let y = config.s0 + base + sign * s;
    Ok(FollowerState {
        phi,
        y,
        y_dot: sign * ds * omega,
        y_ddot: sign * (dds * omega * omega + ds * omega_dot),
        mu: mu_at(config.e, y)?,
    })
}

pub(crate) fn mu_at(e: f64, y: f64) -> Result<f64, CamError> {
    if y.is_nan() || y <= 0.0 {
        return Err(CamError::InvalidParams(format!(
            "follower position must be > 0 (got {y})"
        )));
    }
    Ok((e / y).atan())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pressure_angle_examples() {
        let mut c = CamConfig {
            e: 0.0,
            ..Default::default()
        };
        for s in [0.0, 1.0, 5.0] {
            assert_eq!(pressure_angle(&c, s).unwrap(), 0.0);
        }
        c.e = 2.0;
        c.s0 = 4.0;
        assert!((pressure_angle(&c, 0.0).unwrap().to_degrees() - 26.5651).abs() < 1e-4);
        c.e = 4.0;
        assert!((pressure_angle(&c, 0.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!(pressure_angle(&c, -4.0).is_err());
    }

    #[test]
    fn start_of_rise_is_at_rest() {
        let c = CamConfig::default();
        for family in LawFamily::ALL {
            let law = CamLaw::new(family, 3.0, PI).unwrap();
            let st = follower_kinematics(&c, &law, 0.0).unwrap();
            assert_eq!(st.y, c.s0);
            assert_eq!(st.y_dot, 0.0);
        }
    }

    #[test]
    fn constant_speed_matches_chain_rule() {
        let omega = 2.5;
        let c = CamConfig {
            omega: SpeedProfile::Constant { omega },
            ..Default::default()
        };
        let law = CamLaw::new(LawFamily::Poly4567, 3.0, 2.0).unwrap();
        for i in 0..=20 {
            let t = 0.8 * i as f64 / 20.0;
            let st = follower_kinematics(&c, &law, t).unwrap();
            let (s, ds, dds) = law.eval(omega * t).unwrap();
            assert_eq!(st.y, c.s0 + s);
            assert_eq!(st.y_dot, ds * omega);
            assert_eq!(st.y_ddot, dds * omega * omega);
            assert_eq!(st.mu, (c.e / st.y).atan());
        }
    }

    #[test]
    fn time_past_the_rise_is_rejected() {
        let c = CamConfig::default();
        let law = default_law();
        assert!(follower_kinematics(&c, &law, 1.0).is_ok());
        assert!(matches!(
            follower_kinematics(&c, &law, 1.0 + 1e-9),
            Err(CamError::TimeOutOfRange { .. })
        ));
        assert!(follower_kinematics(&c, &law, -0.1).is_err());
    }

    #[test]
    fn trapezoidal_acceleration_matches_finite_differences() {
        let c = CamConfig {
            omega: SpeedProfile::Trapezoidal {
                omega_max: 4.0,
                ramp_fraction: 0.25,
            },
            ..Default::default()
        };
        let law = CamLaw::new(LawFamily::Cycloidal, 3.0, PI).unwrap();
        let sched = AngleSchedule::new(c.omega, law.rise_angle).unwrap();
        let h = 1e-5;
        let y = |t: f64| follower_kinematics(&c, &law, t).unwrap().y;
        // inside the ramp-up, the cruise, and the ramp-down
        for frac in [0.1, 0.15, 0.5, 0.85, 0.9] {
            let t = frac * sched.duration;
            let st = follower_kinematics(&c, &law, t).unwrap();
            let fd_v = (y(t + h) - y(t - h)) / (2.0 * h);
            let fd_a = (y(t + h) - 2.0 * y(t) + y(t - h)) / (h * h);
            assert!((st.y_dot - fd_v).abs() <= 1e-4 * st.y_dot.abs().max(1.0));
            assert!(
                (st.y_ddot - fd_a).abs() <= 1e-4 * st.y_ddot.abs().max(1.0),
                "t={t} analytic={} fd={fd_a}",
                st.y_ddot
            );
        }
    }

    #[test]
    fn schedule_inverse_and_endpoints() {
        let profile = SpeedProfile::Trapezoidal {
            omega_max: 3.0,
            ramp_fraction: 0.2,
        };
        let s = AngleSchedule::new(profile, 2.0).unwrap();
        assert_eq!(s.at(0.0).0, 0.0);
        assert!((s.at(s.duration).0 - 2.0).abs() < 1e-15);
        for i in 0..=50 {
            let phi = 2.0 * i as f64 / 50.0;
            assert!((s.at(s.time_at(phi)).0 - phi).abs() < 1e-12);
        }
        let d = AngleSchedule::with_duration(profile, 2.0, 1.5).unwrap();
        assert!((d.at(1.5).0 - 2.0).abs() < 1e-12);
        assert!((d.ramp_time - 0.3).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(CamConfig::default().validate().is_ok());
        assert!(CamConfig {
            s0: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(CamConfig {
            e: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        let bad = CamConfig {
            omega: SpeedProfile::Trapezoidal {
                omega_max: 1.0,
                ramp_fraction: 0.7,
            },
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
