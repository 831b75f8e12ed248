//! End-to-end actuation chain: motor pulses, cam angle, follower lift, skin
//! strain, flap angle and penetration depth over a motion program.

use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cam::{run_motion_program, CamConfig, CamError, CamLaw, MotionProgram, PhaseKind};
use crate::drive::{pulses_for_angle, CalibrationFit, DriveError};
use crate::format::fixed;
use crate::geometry::KirigamiParams;
use crate::mechanics::{
    penetration_depth, spike_length_with, strain_from_expansion, DeploymentModel, MechanicsError,
    SpikePolicy, DEFAULT_REFERENCE_LENGTH, MAX_STRAIN,
};

/// Default sampling interval, s.
pub const DEFAULT_DT: f64 = 1e-3;

pub const TRACE_HEADER: &str = "t,pulses,phi,y,strain,theta,depth,scrape_angle,phase";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Cam(#[from] CamError),
    #[error(transparent)]
    Mechanics(#[from] MechanicsError),
    #[error(transparent)]
    Drive(#[from] DriveError),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapsuleConfig {
    pub kirigami: KirigamiParams,
    pub cam_config: CamConfig,
    /// The rise used when a program is built from defaults.
    pub deploy_law: CamLaw,
    pub program: MotionProgram,
    pub calibration: CalibrationFit,
    /// Gauge length for strain, mm.
    pub strain_reference_length: f64,
    pub spike_policy: SpikePolicy,
    pub deployment: DeploymentModel,
}

impl Default for CapsuleConfig {
    /// One-second cycloidal deploy, 3.5 s scrape at 120 deg/s, one-second
    /// retract, on the default cam and kirigami strip.
    fn default() -> Self {
        let deploy_law = crate::cam::default_law();
        Self {
            kirigami: KirigamiParams::default(),
            cam_config: CamConfig::default(),
            deploy_law,
            program: MotionProgram::deploy_scrape_retract(deploy_law, 1.0, 120.0, 3.5),
            calibration: CalibrationFit::default(),
            strain_reference_length: DEFAULT_REFERENCE_LENGTH,
            spike_policy: SpikePolicy::default(),
            deployment: DeploymentModel::default(),
        }
    }
}

impl CapsuleConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.kirigami.validate().map_err(MechanicsError::from)?;
        self.cam_config.validate()?;
        self.deploy_law.validate()?;
        self.program.validate()?;
        if !(self.strain_reference_length > 0.0 && self.strain_reference_length.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "strain_reference_length must be > 0 (got {})",
                self.strain_reference_length
            )));
        }
        if self.calibration.slope.is_nan() || self.calibration.slope <= 0.0 {
            return Err(DriveError::InvalidFit(format!(
                "slope must be positive (got {})",
                self.calibration.slope
            ))
            .into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    /// Pulses issued so far for the cam's total travel.
    pub pulses: u64,
    /// Net cam rotation, deg.
    pub phi: f64,
    pub y: f64,
    pub strain: f64,
    /// Flap opening angle, deg.
    pub theta: f64,
    pub depth: f64,
    /// Plate rotation, deg.
    pub scrape_angle: f64,
    pub phase: PhaseKind,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SimTrace {
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSummary {
    pub peak_strain: f64,
    pub peak_theta: f64,
    pub peak_depth: f64,
    pub spike_length: f64,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn summary(&self, spike_length: f64) -> TraceSummary {
        let peak = |f: fn(&TraceRow) -> f64| self.rows.iter().map(f).fold(0.0, f64::max);
        TraceSummary {
            peak_strain: peak(|r| r.strain),
            peak_theta: peak(|r| r.theta),
            peak_depth: peak(|r| r.depth),
            spike_length,
        }
    }
}

/// Runs the motion program and pushes each follower sample through the
/// strain, deployment and penetration models.
///
/// Fails with [`SimError::Infeasible`] when the program's peak lift would
/// stretch the skin beyond the calibrated deployment range.
pub fn simulate(config: &CapsuleConfig, dt: f64) -> Result<SimTrace, SimError> {
    config.validate()?;
    let peak_strain = config.program.peak_level() / config.strain_reference_length;
    if peak_strain > MAX_STRAIN {
        return Err(SimError::Infeasible(format!(
            "peak strain {peak_strain:.4} exceeds {MAX_STRAIN}"
        )));
    }
    let spike = spike_length_with(&config.kirigami, config.spike_policy)?;
    let samples = run_motion_program(&config.program, &config.cam_config, dt)?;

    let mut rows = Vec::with_capacity(samples.len());
    let mut travel_rad = 0.0;
    let mut last_cam = 0.0;
    for s in samples {
        travel_rad += (s.cam_angle - last_cam).abs();
        last_cam = s.cam_angle;
        let motor_deg = travel_rad.to_degrees() + s.scrape_angle.abs();
        // lift can dip a few ulps below zero at the ends of a stroke
        let lift = (s.state.y - config.cam_config.s0).max(0.0);
        let strain = strain_from_expansion(lift, config.strain_reference_length)?.min(MAX_STRAIN);
        let theta = config.deployment.opening_angle(strain)?;
        rows.push(TraceRow {
            t: s.t,
            pulses: pulses_for_angle(&config.calibration, motor_deg)?,
            phi: s.cam_angle.to_degrees(),
            y: s.state.y,
            strain,
            theta,
            depth: penetration_depth(&spike, theta)?,
            scrape_angle: s.scrape_angle,
            phase: s.kind,
        });
    }
    Ok(SimTrace { rows })
}

/// CSV with [`TRACE_HEADER`] and six decimals per real-valued column.
pub fn export_trace(trace: &SimTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.rows.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in &trace.rows {
        let fields = [
            fixed(r.t, 6),
            r.pulses.to_string(),
            fixed(r.phi, 6),
            fixed(r.y, 6),
            fixed(r.strain, 6),
            fixed(r.theta, 6),
            fixed(r.depth, 6),
            fixed(r.scrape_angle, 6),
            r.phase.label().to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Parses a CSV written by [`export_trace`].
pub fn parse_trace(text: &str) -> Result<SimTrace, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRACE_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(format!("line {}: expected 9 fields", i + 2));
        }
        let num =
            |k: usize| f64::from_str(f[k]).map_err(|e| format!("line {}: field {k}: {e}", i + 2));
        rows.push(TraceRow {
            t: num(0)?,
            pulses: f[1]
                .parse()
                .map_err(|e| format!("line {}: pulses: {e}", i + 2))?,
            phi: num(2)?,
            y: num(3)?,
            strain: num(4)?,
            theta: num(5)?,
            depth: num(6)?,
            scrape_angle: num(7)?,
            phase: f[8].parse().map_err(|e| format!("line {}: {e}", i + 2))?,
        });
    }
    Ok(SimTrace { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cam::{LawFamily, Phase};
    use std::f64::consts::PI;

    fn operating_point() -> CapsuleConfig {
        // 7.5 mm of stretch on the 50 mm strip: 15 % strain
        let law = CamLaw::new(LawFamily::Cycloidal, 7.5, PI).unwrap();
        CapsuleConfig {
            deploy_law: law,
            program: MotionProgram::deploy_scrape_retract(law, 1.0, 120.0, 3.5),
            ..Default::default()
        }
    }

    #[test]
    fn default_cycle_row_count_and_reset() {
        let trace = simulate(&CapsuleConfig::default(), DEFAULT_DT).unwrap();
        assert_eq!(trace.len(), 5501);
        let last = trace.rows.last().unwrap();
        assert!(last.theta < 1e-6);
        assert_eq!(last.phase, PhaseKind::Retract);
    }

    #[test]
    fn zero_lift_never_deploys() {
        let law = CamLaw::new(LawFamily::Poly345, 0.0, PI).unwrap();
        let config = CapsuleConfig {
            program: MotionProgram::deploy_scrape_retract(law, 1.0, 120.0, 1.0),
            ..Default::default()
        };
        let trace = simulate(&config, 0.01).unwrap();
        assert!(trace.rows.iter().all(|r| r.theta == 0.0 && r.depth == 0.0));
    }

    #[test]
    fn operating_point_reaches_the_anchor() {
        let config = operating_point();
        let trace = simulate(&config, DEFAULT_DT).unwrap();
        let spike = spike_length_with(&config.kirigami, config.spike_policy).unwrap();
        let sum = trace.summary(spike.length);
        assert!((sum.peak_strain - 0.15).abs() < 1e-12);
        assert!((sum.peak_theta - 34.0).abs() < 1e-9);
        let expect = spike.length * 34f64.to_radians().sin();
        assert!((sum.peak_depth - expect).abs() < 1e-9);
    }

    #[test]
    fn phases_behave() {
        let trace = simulate(&operating_point(), DEFAULT_DT).unwrap();
        let mut prev: Option<&TraceRow> = None;
        for r in &trace.rows {
            assert!(r.strain >= 0.0);
            if let Some(p) = prev {
                if p.phase == PhaseKind::Deploy && r.phase == PhaseKind::Deploy {
                    assert!(r.theta >= p.theta);
                }
                if p.phase == PhaseKind::Scrape && r.phase == PhaseKind::Scrape {
                    assert_eq!(r.y, p.y);
                    assert_eq!(r.theta, p.theta);
                    assert!(r.scrape_angle > p.scrape_angle);
                }
                assert!(r.pulses >= p.pulses);
            }
            prev = Some(r);
        }
        let scrape_end = trace
            .rows
            .iter()
            .rev()
            .find(|r| r.phase == PhaseKind::Retract)
            .unwrap();
        assert!((scrape_end.scrape_angle - 420.0).abs() < 1e-9);
    }

    #[test]
    fn trace_is_time_symmetric() {
        let trace = simulate(&operating_point(), DEFAULT_DT).unwrap();
        let n = trace.len();
        for k in 0..n {
            let a = &trace.rows[k];
            let b = &trace.rows[n - 1 - k];
            assert!((a.y - b.y).abs() < 1e-9, "row {k}: {} vs {}", a.y, b.y);
        }
    }

    #[test]
    fn oversized_lift_is_infeasible() {
        let law = CamLaw::new(LawFamily::Cycloidal, 16.0, PI).unwrap();
        let config = CapsuleConfig {
            program: MotionProgram::new(vec![Phase::Deploy { law, duration: 1.0 }]),
            ..Default::default()
        };
        assert!(matches!(
            simulate(&config, 0.01),
            Err(SimError::Infeasible(_))
        ));
    }

    #[test]
    fn csv_round_trip_and_determinism() {
        let config = operating_point();
        let a = export_trace(&simulate(&config, 0.005).unwrap());
        let b = export_trace(&simulate(&config, 0.005).unwrap());
        assert_eq!(a, b);
        let trace = simulate(&config, 0.005).unwrap();
        let back = parse_trace(&a).unwrap();
        assert_eq!(back.len(), trace.len());
        for (x, y) in trace.rows.iter().zip(&back.rows) {
            for (u, v) in [
                (x.t, y.t),
                (x.phi, y.phi),
                (x.y, y.y),
                (x.strain, y.strain),
                (x.theta, y.theta),
                (x.depth, y.depth),
                (x.scrape_angle, y.scrape_angle),
            ] {
                assert!((u - v).abs() <= 5e-7 + 1e-12);
            }
            assert_eq!(x.pulses, y.pulses);
            assert_eq!(x.phase, y.phase);
        }
        assert_eq!(
            export_trace(&SimTrace::default()),
            format!("{TRACE_HEADER}\n")
        );
    }
}
