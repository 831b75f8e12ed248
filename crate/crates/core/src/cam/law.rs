use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::CamError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LawFamily {
    #[serde(rename = "cycloidal")]
    Cycloidal,
    #[serde(rename = "modified-sine")]
    ModifiedSine,
    #[serde(rename = "poly-3-4-5")]
    Poly345,
    #[serde(rename = "poly-4-5-6-7")]
    Poly4567,
}

impl LawFamily {
    pub const ALL: [LawFamily; 4] = [
        LawFamily::Cycloidal,
        LawFamily::ModifiedSine,
        LawFamily::Poly345,
        LawFamily::Poly4567,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawFamily::Cycloidal => "cycloidal",
            LawFamily::ModifiedSine => "modified-sine",
            LawFamily::Poly345 => "poly-3-4-5",
            LawFamily::Poly4567 => "poly-4-5-6-7",
        }
    }

    /// Normalised rise on `x` in [0, 1]: `(s, ds/dx, d2s/dx2)` for unit lift.
    pub fn unit(self, x: f64) -> (f64, f64, f64) {
        match self {
            LawFamily::Cycloidal => {
                let (sin, cos) = (2.0 * PI * x).sin_cos();
                (x - sin / (2.0 * PI), 1.0 - cos, 2.0 * PI * sin)
            }
            LawFamily::ModifiedSine => modified_sine(x),
            LawFamily::Poly345 => {
                let (x2, x3) = (x * x, x * x * x);
                (
                    x3 * (10.0 - 15.0 * x + 6.0 * x2),
                    x2 * (30.0 - 60.0 * x + 30.0 * x2),
                    x * (60.0 - 180.0 * x + 120.0 * x2),
                )
            }
            LawFamily::Poly4567 => {
                let (x2, x3) = (x * x, x * x * x);
                (
                    x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x3),
                    x3 * (140.0 - 420.0 * x + 420.0 * x2 - 140.0 * x3),
                    x2 * (420.0 - 1680.0 * x + 2100.0 * x2 - 840.0 * x3),
                )
            }
        }
    }
}

impl std::fmt::Display for LawFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LawFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LawFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown law family '{s}'"))
    }
}

/// Modified sine on three segments of the unit rise:
///
/// * `[0, 1/8]`: quarter sine acceleration ramp, `x k - sin(4 pi x) / (4 (4 + pi))`
/// * `[1/8, 7/8]`: half sine of period 3/2, centred on the midpoint
/// * `[7/8, 1]`: mirror of the first segment
///
/// with `k = pi / (4 + pi)`. Peak acceleration is `4 pi^2 / (4 + pi)`.
fn modified_sine(x: f64) -> (f64, f64, f64) {
    let c = 4.0 + PI;
    let k = PI / c;
    let acc = 4.0 * PI * PI / c;
    if x <= 0.125 {
        let (sin, cos) = (4.0 * PI * x).sin_cos();
        (k * x - sin / (4.0 * c), k * (1.0 - cos), acc * sin)
    } else if x <= 0.875 {
        let (sin, cos) = (PI / 3.0 + 4.0 * PI * x / 3.0).sin_cos();
        (
            2.0 / c + k * x - 9.0 * sin / (4.0 * c),
            k * (1.0 - 3.0 * cos),
            acc * sin,
        )
    } else {
        let (sin, cos) = (4.0 * PI * x).sin_cos();
        (
            4.0 / c + k * x - sin / (4.0 * c),
            k * (1.0 - cos),
            acc * sin,
        )
    }
}

/// A rise of `lift` mm over `rise_angle` radians of cam rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CamLaw {
    pub family: LawFamily,
    pub lift: f64,
    pub rise_angle: f64,
}

impl CamLaw {
    pub fn new(family: LawFamily, lift: f64, rise_angle: f64) -> Result<Self, CamError> {
        let law = Self {
            family,
            lift,
            rise_angle,
        };
        law.validate()?;
        Ok(law)
    }

    /// `lift` may be zero: the degenerate law whose follower never moves.
    pub fn validate(&self) -> Result<(), CamError> {
        if !(self.lift >= 0.0 && self.lift.is_finite()) {
            return Err(CamError::InvalidParams(format!(
                "lift must be >= 0 (got {})",
                self.lift
            )));
        }
        if !(self.rise_angle > 0.0 && self.rise_angle <= 2.0 * PI) {
            return Err(CamError::InvalidParams(format!(
                "rise angle must lie in (0, 2 pi] (got {})",
                self.rise_angle
            )));
        }
        Ok(())
    }

    /// `(s, ds/dphi, d2s/dphi2)` at cam angle `phi` in `[0, rise_angle]`.
    pub fn eval(&self, phi: f64) -> Result<(f64, f64, f64), CamError> {
        if !(0.0..=self.rise_angle).contains(&phi) {
            return Err(CamError::AngleOutOfRange {
                phi,
                rise_angle: self.rise_angle,
            });
        }
        Ok(self.eval_unchecked(phi))
    }

    pub(crate) fn eval_unchecked(&self, phi: f64) -> (f64, f64, f64) {
        let beta = self.rise_angle;
        let (s, ds, dds) = self.family.unit(phi / beta);
        (
            self.lift * s,
            self.lift * ds / beta,
            self.lift * dds / (beta * beta),
        )
    }
}

pub fn law_eval(law: &CamLaw, phi: f64) -> Result<(f64, f64, f64), CamError> {
    law.eval(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_conditions_for_every_family() {
        for family in LawFamily::ALL {
            let law = CamLaw::new(family, 3.0, 2.0).unwrap();
            let (s0, v0, a0) = law.eval(0.0).unwrap();
            let (s1, v1, a1) = law.eval(2.0).unwrap();
            assert!(s0.abs() < 1e-12 && v0.abs() < 1e-12, "{family}");
            assert!((s1 - 3.0).abs() < 1e-12 && v1.abs() < 1e-12, "{family}");
            assert!(a0.abs() < 1e-9 && a1.abs() < 1e-9, "{family}: {a0} {a1}");
        }
    }

    #[test]
    fn cycloidal_midpoint_and_peak_velocity() {
        let law = CamLaw::new(LawFamily::Cycloidal, 10.0, PI).unwrap();
        let (s, ds, _) = law.eval(PI / 2.0).unwrap();
        assert!((s - 5.0).abs() < 1e-12);
        assert!((ds - 6.3662).abs() < 1e-4);
        assert!((ds - 20.0 / PI).abs() < 1e-12);
        // dense scan oracle
        let n = 100_000;
        let scan = (0..=n)
            .map(|i| law.eval(PI * i as f64 / n as f64).unwrap().1)
            .fold(f64::MIN, f64::max);
        assert!((scan - 20.0 / PI).abs() < 1e-9);
    }

    #[test]
    fn poly345_acceleration_vanishes_at_end() {
        // d2/dx2 of 10x^3 - 15x^4 + 6x^5 = 60x - 180x^2 + 120x^3; at x = 1: 0
        let law = CamLaw::new(LawFamily::Poly345, 1.0, 1.0).unwrap();
        let (s, ds, dds) = law.eval(1.0).unwrap();
        assert_eq!((s, ds, dds), (1.0, 0.0, 0.0));
    }

    #[test]
    fn modified_sine_segments_join() {
        for x in [0.125, 0.875] {
            let e = 1e-12;
            let lo = modified_sine(x - e);
            let hi = modified_sine(x + e);
            assert!((lo.0 - hi.0).abs() < 1e-9);
            assert!((lo.1 - hi.1).abs() < 1e-9);
            assert!((lo.2 - hi.2).abs() < 1e-9);
        }
        let (s, _, _) = modified_sine(0.5);
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_angle() {
        let law = CamLaw::new(LawFamily::Cycloidal, 1.0, 1.0).unwrap();
        assert!(matches!(
            law.eval(1.5),
            Err(CamError::AngleOutOfRange { .. })
        ));
        assert!(law.eval(-1e-9).is_err());
        assert!(CamLaw::new(LawFamily::Cycloidal, -1.0, 1.0).is_err());
        assert!(CamLaw::new(LawFamily::Cycloidal, 1.0, 0.0).is_err());
        assert!(CamLaw::new(LawFamily::Cycloidal, 1.0, 7.0).is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in LawFamily::ALL {
            assert_eq!(f.name().parse::<LawFamily>().unwrap(), f);
            assert_eq!(
                serde_json::to_string(&f).unwrap(),
                format!("\"{}\"", f.name())
            );
        }
    }
}
