//! Force-trace ingestion, peak detection, tissue safety classification and
//! box-plot statistics.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: time {t} does not increase")]
    NonMonotoneTime { line: u64, t: f64 },
    #[error("no values to summarize")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceSample {
    pub t: f64,
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceTrace {
    pub rows: Vec<ForceSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn of(self, s: &ForceSample) -> f64 {
        match self {
            Axis::X => s.fx,
            Axis::Y => s.fy,
            Axis::Z => s.fz,
        }
    }
}

const FORCE_HEADER: [&str; 4] = ["t", "fx", "fy", "fz"];

/// Reads a `t,fx,fy,fz` CSV. Line numbers in errors count the header as 1.
pub fn load_force_csv<R: Read>(reader: R) -> Result<ForceTrace, AnalysisError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| AnalysisError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>() != FORCE_HEADER {
        return Err(AnalysisError::Parse {
            line: 1,
            message: format!(
                "expected header t,fx,fy,fz, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut rows: Vec<ForceSample> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| AnalysisError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(AnalysisError::Parse {
                line,
                message: format!("expected 4 fields, found {}", record.len()),
            });
        }
        let mut v = [0.0; 4];
        for (k, field) in record.iter().enumerate() {
            v[k] = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| AnalysisError::Parse {
                    line,
                    message: format!("column {} is not a number: '{field}'", FORCE_HEADER[k]),
                })?;
        }
        if let Some(prev) = rows.last() {
            if v[0] <= prev.t {
                return Err(AnalysisError::NonMonotoneTime { line, t: v[0] });
            }
        }
        rows.push(ForceSample {
            t: v[0],
            fx: v[1],
            fy: v[2],
            fz: v[3],
        });
    }
    Ok(ForceTrace { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcePeak {
    pub t: f64,
    pub axis: Axis,
    /// |force|, N.
    pub magnitude: f64,
}

fn median_of(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    quantile_sorted(values, 0.5)
}

/// Five times the median absolute deviation of the signal.
pub fn noise_floor(signal: &[f64]) -> f64 {
    if signal.is_empty() {
        return 0.0;
    }
    let mut v = signal.to_vec();
    let med = median_of(&mut v);
    let mut dev: Vec<f64> = signal.iter().map(|x| (x - med).abs()).collect();
    5.0 * median_of(&mut dev)
}

/// Per-axis peaks of |f|.
///
/// A sample is a candidate when it exceeds the axis noise floor and is the
/// largest value within `+- window / 2` (the earliest wins on a plateau).
/// Candidates closer than `window` to a larger accepted peak on the same
/// axis are then dropped. Output is ordered by time, then axis.
pub fn peak_forces(trace: &ForceTrace, window: f64) -> Vec<ForcePeak> {
    let mut peaks = Vec::new();
    if window.is_nan() || window <= 0.0 {
        return peaks;
    }
    let half = window / 2.0;
    let times: Vec<f64> = trace.rows.iter().map(|r| r.t).collect();
    for axis in Axis::ALL {
        let mag: Vec<f64> = trace.rows.iter().map(|r| axis.of(r).abs()).collect();
        let floor = noise_floor(&mag);

        let mut candidates = Vec::new();
        let mut lo = 0;
        let mut hi = 0;
        for i in 0..mag.len() {
            while times[i] - times[lo] > half {
                lo += 1;
            }
            while hi + 1 < mag.len() && times[hi + 1] - times[i] <= half {
                hi += 1;
            }
            if mag[i] <= floor {
                continue;
            }
            let earlier_ok = mag[lo..i].iter().all(|&m| m < mag[i]);
            let later_ok = mag[i + 1..=hi].iter().all(|&m| m <= mag[i]);
            if earlier_ok && later_ok {
                candidates.push(i);
            }
        }

        // strongest first; ties resolved by time
        candidates.sort_by(|&a, &b| mag[b].total_cmp(&mag[a]).then(a.cmp(&b)));
        let mut kept: Vec<usize> = Vec::new();
        for c in candidates {
            if kept.iter().all(|&k| (times[k] - times[c]).abs() >= window) {
                kept.push(c);
            }
        }
        peaks.extend(kept.into_iter().map(|i| ForcePeak {
            t: times[i],
            axis,
            magnitude: mag[i],
        }));
    }
    peaks.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.axis.cmp(&b.axis)));
    peaks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tissue {
    Gastric,
    Intestinal,
}

impl std::str::FromStr for Tissue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gastric" => Ok(Tissue::Gastric),
            "intestinal" => Ok(Tissue::Intestinal),
            other => Err(format!("unknown tissue '{other}'")),
        }
    }
}

/// Force band, in newtons, in which penetration engages without damage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SafetyEnvelope {
    pub tissue: Tissue,
    pub f_min: f64,
    pub f_max: f64,
}

impl SafetyEnvelope {
    pub fn for_tissue(tissue: Tissue) -> Self {
        match tissue {
            Tissue::Gastric => Self {
                tissue,
                f_min: 0.5,
                f_max: 2.0,
            },
            Tissue::Intestinal => Self {
                tissue,
                f_min: 0.3,
                f_max: 1.0,
            },
        }
    }

    /// The band is closed: both limits count as safe.
    pub fn classify(&self, magnitude: f64) -> Verdict {
        if magnitude < self.f_min {
            Verdict::BelowEngagement
        } else if magnitude > self.f_max {
            Verdict::ExceedsSafeRange
        } else {
            Verdict::WithinSafeRange
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BelowEngagement,
    WithinSafeRange,
    ExceedsSafeRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifiedPeak {
    #[serde(flatten)]
    pub peak: ForcePeak,
    pub verdict: Verdict,
}

pub fn classify_safety(peaks: &[ForcePeak], envelope: &SafetyEnvelope) -> Vec<ClassifiedPeak> {
    peaks
        .iter()
        .map(|&peak| ClassifiedPeak {
            peak,
            verdict: envelope.classify(peak.magnitude),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Quantile by linear interpolation between order statistics at position
/// `p (n - 1)` (the "inclusive" method).
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    if frac == 0.0 {
        return sorted[lo];
    }
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

pub fn summarize(values: &[f64]) -> Result<SummaryStats, AnalysisError> {
    if values.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(SummaryStats {
        n,
        median: quantile_sorted(&sorted, 0.5),
        q1: quantile_sorted(&sorted, 0.25),
        q3: quantile_sorted(&sorted, 0.75),
        min: sorted[0],
        max: sorted[n - 1],
        mean: sorted.iter().sum::<f64>() / n as f64,
    })
}

/// Reads the first column of a CSV with a header row as measurement values.
pub fn load_values_csv<R: Read>(reader: R) -> Result<Vec<f64>, AnalysisError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| AnalysisError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = record.get(0).unwrap_or("");
        if field.is_empty() && record.len() <= 1 {
            continue;
        }
        let v = field
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| AnalysisError::Parse {
                line,
                message: format!("not a number: '{field}'"),
            })?;
        out.push(v);
    }
    Ok(out)
}
