//! Pulse-driven stepper abstraction: pulse/angle calibration and four-phase
//! energization sequences.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DriveError {
    #[error("degenerate calibration data: {0}")]
    DegenerateData(String),
    #[error("invalid calibration fit: {0}")]
    InvalidFit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSample {
    pub pulses: u64,
    /// Measured rotation, degrees.
    pub angle: f64,
}

impl CalibrationSample {
    pub fn new(pulses: u64, angle: f64) -> Self {
        Self { pulses, angle }
    }
}

/// Linear pulse-to-angle map `angle = slope * pulses + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFit {
    /// Degrees per pulse.
    pub slope: f64,
    /// Degrees.
    pub intercept: f64,
    #[serde(default = "one")]
    pub r2: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for CalibrationFit {
    /// The bench calibration of the capsule motor: 18.1 degrees per pulse.
    fn default() -> Self {
        Self {
            slope: 18.1,
            intercept: 0.0,
            r2: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMode {
    /// Ordinary least squares with a free intercept.
    #[default]
    Ordinary,
    /// Least squares forced through the origin.
    ThroughOrigin,
}

pub fn fit_pulse_angle(samples: &[CalibrationSample]) -> Result<CalibrationFit, DriveError> {
    fit_pulse_angle_with(samples, FitMode::Ordinary)
}

/// Least-squares line through the samples.
///
/// `r2 = 1 - SS_res / SS_tot` with `SS_tot` taken about the mean angle. When
/// every angle is identical `SS_tot` vanishes and `r2` is reported as 1 if the
/// line reproduces the data exactly. In through-origin mode `r2` can be
/// negative.
pub fn fit_pulse_angle_with(
    samples: &[CalibrationSample],
    mode: FitMode,
) -> Result<CalibrationFit, DriveError> {
    if samples.len() < 2 {
        return Err(DriveError::DegenerateData(format!(
            "need at least 2 samples (got {})",
            samples.len()
        )));
    }
    if samples.iter().any(|s| !s.angle.is_finite()) {
        return Err(DriveError::DegenerateData("non-finite angle".into()));
    }
    let first = samples[0].pulses;
    if samples.iter().all(|s| s.pulses == first) {
        return Err(DriveError::DegenerateData(
            "all samples share the same pulse count".into(),
        ));
    }
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.pulses as f64).sum::<f64>() / n;
    let mean_y = samples.iter().map(|s| s.angle).sum::<f64>() / n;

    let (slope, intercept) = match mode {
        FitMode::Ordinary => {
            let mut sxx = 0.0;
            let mut sxy = 0.0;
            for s in samples {
                let dx = s.pulses as f64 - mean_x;
                sxx += dx * dx;
                sxy += dx * (s.angle - mean_y);
            }
            let slope = sxy / sxx;
            (slope, mean_y - slope * mean_x)
        }
        FitMode::ThroughOrigin => {
            let sxx: f64 = samples.iter().map(|s| (s.pulses as f64).powi(2)).sum();
            let sxy: f64 = samples.iter().map(|s| s.pulses as f64 * s.angle).sum();
            (sxy / sxx, 0.0)
        }
    };

    let ss_res: f64 = samples
        .iter()
        .map(|s| (s.angle - (slope * s.pulses as f64 + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = samples.iter().map(|s| (s.angle - mean_y).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res <= f64::EPSILON * mean_y.abs().max(1.0) {
        1.0
    } else {
        0.0
    };
    Ok(CalibrationFit {
        slope,
        intercept,
        r2,
    })
}

/// Pulses needed to reach `target` degrees, rounded half away from zero and
/// clamped at zero.
pub fn pulses_for_angle(fit: &CalibrationFit, target: f64) -> Result<u64, DriveError> {
    if !(fit.slope > 0.0 && fit.slope.is_finite() && fit.intercept.is_finite()) {
        return Err(DriveError::InvalidFit(format!(
            "slope must be positive and finite (got {})",
            fit.slope
        )));
    }
    if !target.is_finite() {
        return Err(DriveError::InvalidFit(format!(
            "target {target} is not finite"
        )));
    }
    let n = ((target - fit.intercept) / fit.slope).round();
    Ok(n.max(0.0) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Positive polarity: deploy and scrape.
    Forward,
    /// Reversed polarity: retract.
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMode {
    Full,
    Half,
}

/// Set of energized windings, bit 0 = A through bit 3 = D.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coils(u8);

impl Coils {
    pub const A: Coils = Coils(0b0001);
    pub const B: Coils = Coils(0b0010);
    pub const C: Coils = Coils(0b0100);
    pub const D: Coils = Coils(0b1000);

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn union(self, other: Coils) -> Coils {
        Coils(self.0 | other.0)
    }

    /// Swaps A with D and B with C: the same pattern seen with reversed polarity.
    pub fn mirrored(self) -> Coils {
        let b = self.0;
        Coils(((b & 1) << 3) | ((b & 2) << 1) | ((b & 4) >> 1) | ((b & 8) >> 3))
    }
}

impl std::fmt::Display for Coils {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, name) in ["A", "B", "C", "D"].iter().enumerate() {
            if self.0 & (1 << i) != 0 {
                f.write_str(name)?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for Coils {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Coils({self})")
    }
}

impl Serialize for Coils {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

const FULL_STEP: [Coils; 4] = [Coils::A, Coils::B, Coils::C, Coils::D];
const HALF_STEP: [Coils; 8] = [
    Coils::A,
    Coils::A.union(Coils::B),
    Coils::B,
    Coils::B.union(Coils::C),
    Coils::C,
    Coils::C.union(Coils::D),
    Coils::D,
    Coils::D.union(Coils::A),
];

/// Energization pattern for `n_pulses` steps. Forward full-step cycles
/// A, B, C, D; reverse is the mirror image D, C, B, A. Half-step interleaves
/// the two-coil states.
pub fn step_sequence(n_pulses: usize, direction: Direction, mode: StepMode) -> Vec<Coils> {
    let cycle: &[Coils] = match mode {
        StepMode::Full => &FULL_STEP,
        StepMode::Half => &HALF_STEP,
    };
    cycle
        .iter()
        .cycle()
        .take(n_pulses)
        .map(|&c| match direction {
            Direction::Forward => c,
            Direction::Reverse => c.mirrored(),
        })
        .collect()
}

/// Net rotor travel, in pulses, of consecutive runs `(direction, pulses)`.
pub fn net_pulses(runs: &[(Direction, u64)]) -> i64 {
    runs.iter()
        .map(|&(d, n)| match d {
            Direction::Forward => n as i64,
            Direction::Reverse => -(n as i64),
        })
        .sum()
}
