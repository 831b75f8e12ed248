//! Flap deployment, spike geometry, penetration depth and a reduced-order
//! thickness/stiffness trend for the kirigami skin.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, KirigamiParams};

/// Largest strain for which the deployment curve is defined.
pub const MAX_STRAIN: f64 = 0.30;

/// Young's modulus of the base polyimide film, MPa.
pub const PI_FILM_MODULUS_MPA: f64 = 20.0;

/// Default gauge length for strain: the full strip width, mm.
pub const DEFAULT_REFERENCE_LENGTH: f64 = 50.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MechanicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("strain {0} outside [0, {MAX_STRAIN}]")]
    StrainOutOfRange(f64),
    #[error("angle {0} deg outside [0, 90]")]
    AngleOutOfRange(f64),
    #[error("invalid deployment anchors: {0}")]
    InvalidAnchors(String),
}

/// Flap opening angle as a function of strain.
///
/// A monotone piecewise-cubic Hermite interpolant through measured
/// `(strain, angle)` anchors, held flat at the last anchor's angle beyond it.
#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentModel {
    strains: Vec<f64>,
    angles: Vec<f64>,
    slopes: Vec<f64>,
}

impl Default for DeploymentModel {
    /// Anchors (0, 0), (0.15, 34 deg), (0.20, 38 deg).
    fn default() -> Self {
        Self::new(&[(0.0, 0.0), (0.15, 34.0), (0.20, 38.0)]).expect("built-in anchors are valid")
    }
}

impl DeploymentModel {
    pub fn new(anchors: &[(f64, f64)]) -> Result<Self, MechanicsError> {
        if anchors.len() < 2 {
            return Err(MechanicsError::InvalidAnchors(
                "need at least two anchors".into(),
            ));
        }
        if anchors[0] != (0.0, 0.0) {
            return Err(MechanicsError::InvalidAnchors(
                "first anchor must be (0, 0)".into(),
            ));
        }
        for w in anchors.windows(2) {
            if w[1].0.is_nan() || w[1].0 <= w[0].0 {
                return Err(MechanicsError::InvalidAnchors(
                    "strains must be strictly increasing".into(),
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(MechanicsError::InvalidAnchors(
                    "angles must be nondecreasing".into(),
                ));
            }
        }
        let last = anchors[anchors.len() - 1];
        if last.0 > MAX_STRAIN || last.1 > 90.0 {
            return Err(MechanicsError::InvalidAnchors(
                "anchors must stay within strain 0.30 and 90 deg".into(),
            ));
        }
        let strains: Vec<f64> = anchors.iter().map(|a| a.0).collect();
        let angles: Vec<f64> = anchors.iter().map(|a| a.1).collect();
        let slopes = pchip_slopes(&strains, &angles);
        Ok(Self {
            strains,
            angles,
            slopes,
        })
    }

    pub fn anchors(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.strains
            .iter()
            .copied()
            .zip(self.angles.iter().copied())
    }

    pub fn saturation_angle(&self) -> f64 {
        *self.angles.last().unwrap()
    }

    /// Opening angle in degrees at `strain`.
    pub fn opening_angle(&self, strain: f64) -> Result<f64, MechanicsError> {
        if !(0.0..=MAX_STRAIN).contains(&strain) {
            return Err(MechanicsError::StrainOutOfRange(strain));
        }
        let n = self.strains.len();
        if strain >= self.strains[n - 1] {
            return Ok(self.saturation_angle());
        }
        // strains[0] == 0 so the partition point is at least 1
        let k = self.strains.partition_point(|&s| s <= strain) - 1;
        let (x0, x1) = (self.strains[k], self.strains[k + 1]);
        let (y0, y1) = (self.angles[k], self.angles[k + 1]);
        let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
        let h = x1 - x0;
        let u = (strain - x0) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        Ok(h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1)
    }
}

pub fn opening_angle(model: &DeploymentModel, strain: f64) -> Result<f64, MechanicsError> {
    model.opening_angle(strain)
}

/// Fritsch-Butland node slopes with the shape-preserving one-sided end rule.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m[0] = end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// How spike length is derived from the cut geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpikePolicy {
    /// `H = ((l - delta) / 2) tan(gamma)`: apex height of an isosceles flap
    /// with base `l - delta` and base angle `gamma`.
    #[default]
    HalfBaseTan,
    /// `H = (l - delta) / (2 tan(gamma))`.
    HalfBaseCot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikeGeometry {
    /// Spike length `H`, mm.
    pub length: f64,
    pub source_params: KirigamiParams,
    pub policy: SpikePolicy,
}

pub fn spike_length(params: &KirigamiParams) -> Result<SpikeGeometry, MechanicsError> {
    spike_length_with(params, SpikePolicy::default())
}

pub fn spike_length_with(
    params: &KirigamiParams,
    policy: SpikePolicy,
) -> Result<SpikeGeometry, MechanicsError> {
    params.validate()?;
    let base = params.l - params.delta;
    let tan = params.gamma_rad().tan();
    let length = match policy {
        SpikePolicy::HalfBaseTan => 0.5 * base * tan,
        SpikePolicy::HalfBaseCot => 0.5 * base / tan,
    };
    if !(length > 0.0 && length < params.l) {
        return Err(MechanicsError::InvalidParams(format!(
            "spike length {length} mm must lie in (0, l = {})",
            params.l
        )));
    }
    Ok(SpikeGeometry {
        length,
        source_params: *params,
        policy,
    })
}

/// Out-of-plane reach `H sin(theta)` of a flap opened by `theta` degrees.
pub fn penetration_depth(spike: &SpikeGeometry, theta: f64) -> Result<f64, MechanicsError> {
    if !(0.0..=90.0).contains(&theta) {
        return Err(MechanicsError::AngleOutOfRange(theta));
    }
    Ok(spike.length * theta.to_radians().sin())
}

/// Relative hinge stiffness `E t^3 / (12 delta^2)` in N/mm.
///
/// The ligament `delta` is taken as the hinge length; `t` overrides the film
/// thickness stored in `params`.
pub fn effective_stiffness(
    modulus_mpa: f64,
    t: f64,
    params: &KirigamiParams,
) -> Result<f64, MechanicsError> {
    if !(modulus_mpa > 0.0 && modulus_mpa.is_finite()) {
        return Err(MechanicsError::InvalidParams(format!(
            "modulus must be > 0 (got {modulus_mpa})"
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(MechanicsError::InvalidParams(format!(
            "thickness must be > 0 (got {t})"
        )));
    }
    params.validate()?;
    Ok(modulus_mpa * t.powi(3) / (12.0 * params.delta * params.delta))
}

pub fn strain_from_expansion(
    delta_length: f64,
    reference_length: f64,
) -> Result<f64, MechanicsError> {
    if !(reference_length > 0.0 && reference_length.is_finite()) {
        return Err(MechanicsError::InvalidParams(format!(
            "reference length must be > 0 (got {reference_length})"
        )));
    }
    if !(delta_length >= 0.0 && delta_length.is_finite()) {
        return Err(MechanicsError::InvalidParams(format!(
            "expansion must be >= 0 (got {delta_length})"
        )));
    }
    Ok(delta_length / reference_length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn anchors_are_reproduced() {
        let m = DeploymentModel::default();
        assert_eq!(m.opening_angle(0.0).unwrap(), 0.0);
        assert!((m.opening_angle(0.15).unwrap() - 34.0).abs() < 1e-9);
        assert!((m.opening_angle(0.20).unwrap() - 38.0).abs() < 1e-9);
        let mid = m.opening_angle(0.175).unwrap();
        assert!(mid > 34.0 && mid < 38.0, "{mid}");
    }

    #[test]
    fn saturates_after_last_anchor() {
        let m = DeploymentModel::default();
        assert_eq!(m.opening_angle(0.25).unwrap(), 38.0);
        assert_eq!(m.opening_angle(0.30).unwrap(), 38.0);
        assert!(matches!(
            m.opening_angle(0.31),
            Err(MechanicsError::StrainOutOfRange(_))
        ));
        assert!(m.opening_angle(-0.01).is_err());
    }

    #[test]
    fn bad_anchors_rejected() {
        assert!(DeploymentModel::new(&[(0.0, 0.0)]).is_err());
        assert!(DeploymentModel::new(&[(0.01, 0.0), (0.1, 10.0)]).is_err());
        assert!(DeploymentModel::new(&[(0.0, 0.0), (0.1, 10.0), (0.1, 12.0)]).is_err());
        assert!(DeploymentModel::new(&[(0.0, 0.0), (0.1, 10.0), (0.2, 8.0)]).is_err());
        let two = DeploymentModel::new(&[(0.0, 0.0), (0.2, 20.0)]).unwrap();
        assert!((two.opening_angle(0.1).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn spike_length_default_strip() {
        let p = KirigamiParams::default();
        let s = spike_length(&p).unwrap();
        assert!((s.length - 1.0488745).abs() < 1e-7);

        // Apex of an isosceles triangle with base (l - delta) and base angle
        // gamma, built from its vertices.
        let base = p.l - p.delta;
        let g = p.gamma.to_radians();
        let left = (0.0, 0.0);
        let apex_x = base / 2.0;
        let apex_y = apex_x * g.tan();
        let side = ((apex_x - left.0).powi(2) + (apex_y - left.1).powi(2)).sqrt();
        assert!((apex_y / side - g.sin()).abs() < 1e-12);
        assert!((s.length - apex_y).abs() < 1e-12);

        let cot = spike_length_with(&p, SpikePolicy::HalfBaseCot).unwrap();
        assert!((cot.length - 1.25 / 40f64.to_radians().tan()).abs() < 1e-12);
    }

    #[test]
    fn spike_vanishes_in_the_limits() {
        let p = KirigamiParams {
            delta: 3.0 - 1e-9,
            ..Default::default()
        };
        assert!(spike_length(&p).unwrap().length < 1e-8);
        let p = KirigamiParams {
            gamma: 1e-7,
            ..Default::default()
        };
        assert!(spike_length(&p).unwrap().length < 1e-8);
        // tan(89 deg) blows the flap past the notch length
        let p = KirigamiParams {
            gamma: 89.0,
            ..Default::default()
        };
        assert!(spike_length(&p).is_err());
    }

    #[test]
    fn penetration_depth_values() {
        let s = spike_length(&KirigamiParams::default()).unwrap();
        assert_eq!(penetration_depth(&s, 0.0).unwrap(), 0.0);
        assert!((penetration_depth(&s, 34.0).unwrap() - 0.58652).abs() < 1e-5);
        assert!((penetration_depth(&s, 90.0).unwrap() - s.length).abs() < 1e-15);
        assert!(penetration_depth(&s, 90.5).is_err());
        assert!(penetration_depth(&s, -1.0).is_err());
    }

    #[test]
    fn stiffness_scaling() {
        let p = KirigamiParams::default();
        let k = |e, t| effective_stiffness(e, t, &p).unwrap();
        assert!((k(20.0, 0.1) / k(20.0, 0.05) - 8.0).abs() < 1e-12);
        assert!((k(20.0, 0.2) / k(20.0, 0.05) - 64.0).abs() < 1e-12);
        assert!((k(40.0, 0.1) / k(20.0, 0.1) - 2.0).abs() < 1e-12);
        let grid = [0.05, 0.1, 0.15, 0.2];
        assert!(grid
            .windows(2)
            .all(|w| k(PI_FILM_MODULUS_MPA, w[0]) < k(PI_FILM_MODULUS_MPA, w[1])));
        assert!(effective_stiffness(0.0, 0.1, &p).is_err());
        assert!(effective_stiffness(20.0, 0.0, &p).is_err());
    }

    #[test]
    fn strain_values() {
        assert_eq!(strain_from_expansion(0.0, 50.0).unwrap(), 0.0);
        assert!((strain_from_expansion(7.5, 50.0).unwrap() - 0.15).abs() < 1e-15);
        assert!((strain_from_expansion(10.0, 50.0).unwrap() - 0.20).abs() < 1e-15);
        assert!(strain_from_expansion(1.0, 0.0).is_err());
        assert!(strain_from_expansion(-1.0, 50.0).is_err());
    }

    proptest! {
        #[test]
        fn opening_angle_is_monotone(a in 0.0..=MAX_STRAIN, b in 0.0..=MAX_STRAIN) {
            let m = DeploymentModel::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(m.opening_angle(lo).unwrap() <= m.opening_angle(hi).unwrap());
        }

        #[test]
        fn depth_is_bounded_and_monotone(a in 0.0..=90.0f64, b in 0.0..=90.0f64) {
            let s = spike_length(&KirigamiParams::default()).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (dlo, dhi) = (penetration_depth(&s, lo).unwrap(), penetration_depth(&s, hi).unwrap());
            prop_assert!(dlo <= dhi);
            prop_assert!(dhi <= s.length);
            prop_assert!(dlo >= 0.0);
        }
    }
}
