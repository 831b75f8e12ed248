//! Pitch curve, roller-offset cam profile and design-constraint checks.
//!
//! Over one revolution the follower rises over `[0, beta]` and returns with the
//! same law family over the remaining `2 pi - beta`. In cam-fixed coordinates
//! the roller centre is `R(-phi) (e, y(phi))`, traversed clockwise.

use std::f64::consts::PI;

use serde::Serialize;

use super::{mu_at, AngleSchedule, CamConfig, CamError, CamLaw};
use crate::geometry::{polyline_self_intersections, Vec2};

/// Minimum number of samples on a pitch curve.
pub const MIN_PITCH_SAMPLES: usize = 64;
/// Minimum number of uniform cam-angle samples in a constraint check.
pub const CONSTRAINT_SAMPLES: usize = 1024;

const CURVATURE_GRID: usize = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct PitchCurve {
    /// Roller-centre positions, closed implicitly (last joins first).
    pub points: Vec<Vec2>,
    /// Unit tangents in traversal direction, one per point.
    pub tangents: Vec<Vec2>,
    /// Smallest radius of curvature over the portions bending toward the cam
    /// centre; infinite when there are none.
    pub min_convex_radius: f64,
}

/// Follower lift over a full revolution and its first two derivatives.
struct Revolution {
    rise: CamLaw,
    ret: CamLaw,
}

impl Revolution {
    fn new(law: &CamLaw) -> Result<Self, CamError> {
        law.validate()?;
        let ret_angle = 2.0 * PI - law.rise_angle;
        if ret_angle <= 1e-9 {
            return Err(CamError::InvalidParams(
                "a closed cam needs rise angle < 2 pi to return".into(),
            ));
        }
        Ok(Self {
            rise: *law,
            ret: CamLaw {
                rise_angle: ret_angle,
                ..*law
            },
        })
    }

    fn lift(&self, phi: f64) -> (f64, f64, f64) {
        let beta = self.rise.rise_angle;
        if phi <= beta {
            self.rise.eval_unchecked(phi.max(0.0))
        } else {
            let (s, ds, dds) = self
                .ret
                .eval_unchecked((phi - beta).min(self.ret.rise_angle));
            (self.rise.lift - s, -ds, -dds)
        }
    }

    /// Position, first and second derivative of the pitch point w.r.t. `phi`,
    /// expressed in the follower frame (rotation by `-phi` is applied by the
    /// caller; it preserves lengths and cross products).
    fn local(&self, config: &CamConfig, phi: f64) -> (Vec2, Vec2, Vec2) {
        let (s, ds, dds) = self.lift(phi);
        let y = config.s0 + s;
        let q = Vec2::new(config.e, y);
        // d/dphi R(-phi) q = R(-phi) (q' - J q), with J the +90 degree rotation
        let d1 = Vec2::new(y, ds - config.e);
        let d2 = Vec2::new(2.0 * ds - config.e, dds - y);
        (q, d1, d2)
    }
}

fn rotate(p: Vec2, angle: f64) -> Vec2 {
    let (sin, cos) = angle.sin_cos();
    Vec2::new(cos * p.x - sin * p.y, sin * p.x + cos * p.y)
}

/// Radius of curvature where the curve bends toward the cam centre.
/// The curve runs clockwise, so that is where the signed curvature is negative.
fn convex_radius(d1: Vec2, d2: Vec2) -> f64 {
    let cross = d1.cross(d2);
    if cross < 0.0 {
        d1.norm().powi(3) / -cross
    } else {
        f64::INFINITY
    }
}

fn min_convex_radius(rev: &Revolution, config: &CamConfig) -> f64 {
    let radius = |phi: f64| {
        let (_, d1, d2) = rev.local(config, phi);
        convex_radius(d1, d2)
    };
    let step = 2.0 * PI / CURVATURE_GRID as f64;
    let (mut best_phi, mut best) = (0.0, f64::INFINITY);
    for i in 0..CURVATURE_GRID {
        let phi = i as f64 * step;
        let r = radius(phi);
        if r < best {
            best = r;
            best_phi = phi;
        }
    }
    if !best.is_finite() {
        return best;
    }
    // golden-section refinement around the best grid point
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_phi - step, best_phi + step);
    let wrap = |phi: f64| phi.rem_euclid(2.0 * PI);
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if radius(wrap(c)) < radius(wrap(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    best.min(radius(wrap(0.5 * (a + b))))
}

/// Roller-centre locus sampled at `n_samples` uniform cam angles.
pub fn pitch_curve(
    config: &CamConfig,
    law: &CamLaw,
    n_samples: usize,
) -> Result<PitchCurve, CamError> {
    config.validate()?;
    if n_samples < MIN_PITCH_SAMPLES {
        return Err(CamError::InvalidParams(format!(
            "pitch curve needs at least {MIN_PITCH_SAMPLES} samples (got {n_samples})"
        )));
    }
    let rev = Revolution::new(law)?;
    let mut points = Vec::with_capacity(n_samples);
    let mut tangents = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let phi = 2.0 * PI * i as f64 / n_samples as f64;
        let (q, d1, _) = rev.local(config, phi);
        points.push(rotate(q, -phi));
        let t = rotate(d1, -phi);
        tangents.push((1.0 / t.norm()) * t);
    }
    Ok(PitchCurve {
        points,
        tangents,
        min_convex_radius: min_convex_radius(&rev, config),
    })
}

/// Cam surface: the pitch curve offset toward the cam centre by the roller
/// radius.
pub fn cam_profile(pitch: &PitchCurve, roller_radius: f64) -> Result<Vec<Vec2>, CamError> {
    if !(roller_radius >= 0.0 && roller_radius.is_finite()) {
        return Err(CamError::InvalidParams(format!(
            "roller radius must be >= 0 (got {roller_radius})"
        )));
    }
    if roller_radius > pitch.min_convex_radius {
        return Err(CamError::Undercut {
            roller_radius,
            min_radius: pitch.min_convex_radius,
        });
    }
    // outward normal of a clockwise curve is the tangent turned by +90 degrees
    let profile: Vec<Vec2> = pitch
        .points
        .iter()
        .zip(&pitch.tangents)
        .map(|(&p, &t)| p - roller_radius * t.perp())
        .collect();
    let crossings = polyline_self_intersections(&profile);
    if !crossings.is_empty() {
        return Err(CamError::SelfIntersecting {
            count: crossings.len(),
        });
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub samples: usize,
    /// Largest pressure angle over the rise, rad.
    pub max_mu: f64,
    /// Largest follower acceleration magnitude over the rise, mm/s^2.
    pub max_accel: f64,
    /// `None` when the law covers a full turn and no closed cam exists.
    pub min_radius_of_curvature: Option<f64>,
    pub undercut: bool,
    pub mu_max: f64,
    pub a_max: f64,
    pub mu_ok: bool,
    pub accel_ok: bool,
}

impl ConstraintReport {
    pub fn passed(&self) -> bool {
        self.mu_ok && self.accel_ok && !self.undercut
    }

    /// Names of the bounds that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.mu_ok {
            out.push("pressure-angle");
        }
        if !self.accel_ok {
            out.push("acceleration");
        }
        if self.undercut {
            out.push("undercut");
        }
        out
    }
}

/// Samples the rise at [`CONSTRAINT_SAMPLES`] uniform cam angles and checks
/// the pressure-angle and acceleration bounds plus roller undercut.
pub fn check_constraints(
    config: &CamConfig,
    law: &CamLaw,
    mu_max: f64,
    a_max: f64,
) -> Result<ConstraintReport, CamError> {
    config.validate()?;
    law.validate()?;
    if !(mu_max > 0.0 && mu_max < PI / 2.0) {
        return Err(CamError::InvalidParams(format!(
            "mu_max must lie in (0, pi/2) (got {mu_max})"
        )));
    }
    if a_max.is_nan() || a_max <= 0.0 {
        return Err(CamError::InvalidParams(format!(
            "a_max must be > 0 (got {a_max})"
        )));
    }
    let schedule = AngleSchedule::new(config.omega, law.rise_angle)?;
    let n = CONSTRAINT_SAMPLES;
    let (mut max_mu, mut max_accel) = (0.0f64, 0.0f64);
    for i in 0..n {
        let phi = law.rise_angle * i as f64 / (n - 1) as f64;
        let (s, ds, dds) = law.eval_unchecked(phi);
        let (_, omega, omega_dot) = schedule.at(schedule.time_at(phi));
        max_mu = max_mu.max(mu_at(config.e, config.s0 + s)?.abs());
        max_accel = max_accel.max((dds * omega * omega + ds * omega_dot).abs());
    }
    let min_radius = match Revolution::new(law) {
        Ok(rev) => Some(min_convex_radius(&rev, config)),
        Err(_) => None,
    };
    let undercut = min_radius.is_some_and(|r| config.roller_radius > r);
    Ok(ConstraintReport {
        samples: n,
        max_mu,
        max_accel,
        min_radius_of_curvature: min_radius,
        undercut,
        mu_max,
        a_max,
        mu_ok: max_mu <= mu_max,
        accel_ok: max_accel <= a_max,
    })
}
