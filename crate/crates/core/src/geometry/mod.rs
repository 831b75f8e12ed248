//! Triangular-lattice kirigami cut patterns.
//!
//! Coordinates are strip-local millimetres: the lower-left corner of the strip
//! is the origin, `x` runs along the width `w` and `y` along the height `h`.
//! The opening angle is given in degrees at the interface and converted to
//! radians only inside [`LatticeBasis::from_angle`].

mod export;
mod intersect;

pub use export::{Drawing, Layer};
pub use intersect::{polyline_self_intersections, segments_intersect};

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Border inset used when no margin is given.
pub const DEFAULT_MARGIN: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid kirigami parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Rotates by +90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self * rhs.x, self * rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Cut-pattern parameters plus strip and film dimensions.
///
/// Lengths are millimetres, `gamma` is degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KirigamiParams {
    /// Ligament / cut spacing.
    pub delta: f64,
    /// Notch length.
    pub l: f64,
    /// Lattice opening angle in degrees.
    pub gamma: f64,
    /// Strip height.
    pub h: f64,
    /// Strip width.
    pub w: f64,
    /// Film thickness.
    pub t: f64,
}

impl Default for KirigamiParams {
    /// The fabricated design: 0.5 mm ligament, 3 mm notch, 40 degrees, on a
    /// 50 x 7.5 mm strip of 0.05 mm film.
    fn default() -> Self {
        Self {
            delta: 0.5,
            l: 3.0,
            gamma: 40.0,
            h: 7.5,
            w: 50.0,
            t: 0.05,
        }
    }
}

impl KirigamiParams {
    pub fn validate(&self) -> Result<(), GeometryError> {
        let all_finite = [self.delta, self.l, self.gamma, self.h, self.w, self.t]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(GeometryError::InvalidParams(
                "all parameters must be finite".into(),
            ));
        }
        if !(self.delta > 0.0 && self.delta < self.l) {
            return Err(GeometryError::InvalidParams(format!(
                "0 < delta < l violated (delta = {}, l = {})",
                self.delta, self.l
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 90.0) {
            return Err(GeometryError::InvalidParams(format!(
                "0 < gamma < 90 violated (gamma = {})",
                self.gamma
            )));
        }
        for (name, v) in [("h", self.h), ("w", self.w), ("t", self.t)] {
            if v <= 0.0 {
                return Err(GeometryError::InvalidParams(format!(
                    "{name} > 0 violated ({name} = {v})"
                )));
            }
        }
        Ok(())
    }

    pub fn gamma_rad(&self) -> f64 {
        self.gamma.to_radians()
    }
}

/// Primitive vectors of the triangular lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeBasis {
    pub a1: Vec2,
    pub a2: Vec2,
}

impl LatticeBasis {
    /// Evaluates the basis without validating the angle.
    pub fn from_angle(l: f64, gamma_deg: f64) -> Self {
        let (sin, cos) = gamma_deg.to_radians().sin_cos();
        Self {
            a1: Vec2::new(l * cos, l * sin),
            a2: Vec2::new(l * cos, -l * sin),
        }
    }

    /// Offset of lattice cell `(m, n)` from the reference cell.
    pub fn translation(&self, m: i64, n: i64) -> Vec2 {
        m as f64 * self.a1 + n as f64 * self.a2
    }
}

pub fn lattice_basis(params: &KirigamiParams) -> Result<LatticeBasis, GeometryError> {
    params.validate()?;
    Ok(LatticeBasis::from_angle(params.l, params.gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutSegment {
    pub p_start: Vec2,
    pub p_end: Vec2,
    pub cell_index: (i64, i64),
}

impl CutSegment {
    pub fn length(&self) -> f64 {
        (self.p_end - self.p_start).norm()
    }

    pub fn translated(&self, offset: Vec2, cell_index: (i64, i64)) -> CutSegment {
        CutSegment {
            p_start: self.p_start + offset,
            p_end: self.p_end + offset,
            cell_index,
        }
    }
}

/// The reference-cell slit: from `(delta/l) a1` to `a1 + (1 - delta/l) a2`.
pub fn unit_cut(params: &KirigamiParams) -> Result<CutSegment, GeometryError> {
    let basis = lattice_basis(params)?;
    Ok(unit_cut_unchecked(params, &basis))
}

fn unit_cut_unchecked(params: &KirigamiParams, basis: &LatticeBasis) -> CutSegment {
    let ratio = params.delta / params.l;
    CutSegment {
        p_start: ratio * basis.a1,
        p_end: basis.a1 + (1.0 - ratio) * basis.a2,
        cell_index: (0, 0),
    }
}

/// Axis-aligned closed rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutLayout {
    pub params: KirigamiParams,
    pub segments: Vec<CutSegment>,
    pub margin: f64,
    /// Lower-left corner of the strip. Zero for strip-local layouts.
    pub origin: Vec2,
}

impl CutLayout {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Strip rectangle shrunk by the margin on every side.
    pub fn inset_rect(&self) -> Rect {
        inset_rect(&self.params, self.margin, self.origin)
    }

    pub fn strip_rect(&self) -> Rect {
        inset_rect(&self.params, 0.0, self.origin)
    }
}

fn inset_rect(params: &KirigamiParams, margin: f64, origin: Vec2) -> Rect {
    Rect {
        min: origin + Vec2::new(margin, margin),
        max: origin + Vec2::new(params.w - margin, params.h - margin),
    }
}

/// Tiles the unit cut over the strip, keeping every cut whose two endpoints
/// lie in the closed inset rectangle. Cuts are never clipped.
pub fn generate_pattern(params: &KirigamiParams, margin: f64) -> Result<CutLayout, GeometryError> {
    generate_pattern_at(params, margin, Vec2::default())
}

/// Same as [`generate_pattern`] with the strip's lower-left corner placed at
/// `origin`. The lattice is anchored to the strip, not to the world origin.
pub fn generate_pattern_at(
    params: &KirigamiParams,
    margin: f64,
    origin: Vec2,
) -> Result<CutLayout, GeometryError> {
    let basis = lattice_basis(params)?;
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(GeometryError::InvalidParams(format!(
            "margin must be >= 0 (margin = {margin})"
        )));
    }
    if 2.0 * margin >= params.h.min(params.w) {
        return Err(GeometryError::InvalidParams(format!(
            "2 * margin < min(h, w) violated (margin = {margin})"
        )));
    }
    let base = unit_cut_unchecked(params, &basis);
    let rect = inset_rect(params, margin, origin);

    // Cell (m, n) sits at column i = m + n and row j = m - n, i.e. at
    // (i * l cos g, j * l sin g). Bound i and j from the rectangle, widened by
    // one cell so the exact containment test below has the final say.
    let cx = basis.a1.x;
    let cy = basis.a1.y;
    let lo_x = rect.min.x - origin.x;
    let hi_x = rect.max.x - origin.x;
    let lo_y = rect.min.y - origin.y;
    let hi_y = rect.max.y - origin.y;
    let seg_min_x = base.p_start.x.min(base.p_end.x);
    let seg_max_x = base.p_start.x.max(base.p_end.x);
    let seg_min_y = base.p_start.y.min(base.p_end.y);
    let seg_max_y = base.p_start.y.max(base.p_end.y);
    let i_lo = ((lo_x - seg_min_x) / cx).floor() as i64 - 1;
    let i_hi = ((hi_x - seg_max_x) / cx).ceil() as i64 + 1;
    let j_lo = ((lo_y - seg_min_y) / cy).floor() as i64 - 1;
    let j_hi = ((hi_y - seg_max_y) / cy).ceil() as i64 + 1;

    let mut segments = Vec::new();
    for j in j_lo..=j_hi {
        for i in i_lo..=i_hi {
            if (i - j).rem_euclid(2) != 0 {
                continue;
            }
            let m = (i + j) / 2;
            let n = (i - j) / 2;
            let seg = base.translated(origin + basis.translation(m, n), (m, n));
            if rect.contains(seg.p_start) && rect.contains(seg.p_end) {
                segments.push(seg);
            }
        }
    }
    segments.sort_by_key(|s| (s.cell_index.1, s.cell_index.0));

    Ok(CutLayout {
        params: *params,
        segments,
        margin,
        origin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Violation {
    /// A segment endpoint falls outside the inset rectangle.
    OutsideInset { segment: usize },
    /// Two segments share an interior point.
    Intersection { first: usize, second: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::OutsideInset { segment } => {
                write!(f, "segment {segment} lies outside the inset rectangle")
            }
            Violation::Intersection { first, second } => {
                write!(f, "segments {first} and {second} intersect")
            }
        }
    }
}

/// Checks containment and pairwise non-intersection. Empty result means valid.
pub fn validate_layout(layout: &CutLayout) -> Vec<Violation> {
    let rect = layout.inset_rect();
    let mut violations: Vec<Violation> = layout
        .segments
        .iter()
        .enumerate()
        .filter(|(_, s)| !(rect.contains(s.p_start) && rect.contains(s.p_end)))
        .map(|(segment, _)| Violation::OutsideInset { segment })
        .collect();

    let pairs: Vec<(Vec2, Vec2)> = layout
        .segments
        .iter()
        .map(|s| (s.p_start, s.p_end))
        .collect();
    violations.extend(
        intersect::intersecting_pairs(&pairs)
            .into_iter()
            .map(|(first, second)| Violation::Intersection { first, second }),
    );
    violations
}

/// SVG 1.1 document of the layout: outline group plus one path per cut.
pub fn export_svg(layout: &CutLayout) -> String {
    layout_drawing(layout).to_svg()
}

/// DXF R12 ASCII document: `LINE`s on layers `CUTS` and `OUTLINE`.
pub fn export_dxf(layout: &CutLayout) -> String {
    layout_drawing(layout).to_dxf()
}

fn layout_drawing(layout: &CutLayout) -> Drawing {
    let strip = layout.strip_rect();
    let mut drawing = Drawing::new(strip);
    drawing.add_rect(Layer::Outline, strip);
    for s in &layout.segments {
        drawing.add_line(Layer::Cuts, s.p_start, s.p_end);
    }
    drawing
}
