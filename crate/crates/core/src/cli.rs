//! Command-line front end: JSON configuration, subcommands and exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    classify_safety, load_force_csv, load_values_csv, peak_forces, summarize, AnalysisError,
    ClassifiedPeak, SafetyEnvelope, Tissue,
};
use crate::cam::{
    cam_profile, check_constraints, follower_kinematics, pitch_curve, AngleSchedule, CamConfig,
    CamError, CamLaw, LawFamily, MotionProgram, Phase, SpeedProfile,
};
use crate::drive::{fit_pulse_angle_with, CalibrationFit, CalibrationSample, DriveError, FitMode};
use crate::format::fixed;
use crate::geometry::{
    export_dxf, export_svg, generate_pattern, CutLayout, Drawing, GeometryError, KirigamiParams,
    Layer, Rect, Vec2, DEFAULT_MARGIN,
};
use crate::mechanics::{spike_length_with, SpikePolicy, DEFAULT_REFERENCE_LENGTH};
use crate::sim::{export_trace, simulate, CapsuleConfig, SimError, DEFAULT_DT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CONSTRAINT: i32 = 4;
pub const EXIT_INFEASIBLE: i32 = 5;

pub const PATTERN_SVG: &str = "pattern.svg";
pub const PATTERN_DXF: &str = "pattern.dxf";
pub const CAM_CSV: &str = "cam_kinematics.csv";
pub const CAM_SVG: &str = "cam_profile.svg";
pub const TRACE_CSV: &str = "trace.csv";
pub const CALIBRATION_JSON: &str = "calibration.json";
pub const ANALYSIS_JSON: &str = "analysis.json";
pub const STATS_JSON: &str = "stats.json";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Constraint(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_IO,
            CliError::Constraint(_) => EXIT_CONSTRAINT,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<CamError> for CliError {
    fn from(e: CamError) -> Self {
        match e {
            CamError::Undercut { .. } | CamError::SelfIntersecting { .. } => {
                CliError::Constraint(e.to_string())
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<DriveError> for CliError {
    fn from(e: DriveError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Infeasible(m) => {
                CliError::Infeasible(format!("infeasible configuration: {m}"))
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn open_file(path: &Path) -> Result<fs::File, CliError> {
    fs::File::open(path).map_err(|e| io_err(path, e))
}

// ---------------------------------------------------------------------------
// Configuration

/// Cam speed in deg/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpeedSpec {
    Constant {
        omega_deg_s: f64,
    },
    Trapezoidal {
        omega_max_deg_s: f64,
        ramp_fraction: f64,
    },
}

impl SpeedSpec {
    fn to_profile(self) -> SpeedProfile {
        match self {
            SpeedSpec::Constant { omega_deg_s } => SpeedProfile::Constant {
                omega: omega_deg_s.to_radians(),
            },
            SpeedSpec::Trapezoidal {
                omega_max_deg_s,
                ramp_fraction,
            } => SpeedProfile::Trapezoidal {
                omega_max: omega_max_deg_s.to_radians(),
                ramp_fraction,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LawSpec {
    pub family: LawFamily,
    /// mm.
    pub lift: f64,
    pub rise_angle_deg: f64,
}

impl Default for LawSpec {
    fn default() -> Self {
        Self {
            family: LawFamily::Cycloidal,
            lift: 3.0,
            rise_angle_deg: 180.0,
        }
    }
}

impl LawSpec {
    fn to_law(self) -> Result<CamLaw, CliError> {
        Ok(CamLaw::new(
            self.family,
            self.lift,
            self.rise_angle_deg.to_radians(),
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CamSpec {
    pub e: f64,
    pub s0: f64,
    pub roller_radius: f64,
    pub omega: SpeedSpec,
    pub law: LawSpec,
}

impl Default for CamSpec {
    fn default() -> Self {
        Self {
            e: 2.0,
            s0: 4.0,
            roller_radius: 0.8,
            omega: SpeedSpec::Constant { omega_deg_s: 180.0 },
            law: LawSpec::default(),
        }
    }
}

impl CamSpec {
    fn to_config(self) -> CamConfig {
        CamConfig {
            e: self.e,
            s0: self.s0,
            roller_radius: self.roller_radius,
            omega: self.omega.to_profile(),
        }
    }
}

/// One program step. Deploy and retract fall back to the cam law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhaseSpec {
    Deploy {
        duration: f64,
        #[serde(default)]
        law: Option<LawSpec>,
    },
    Dwell {
        duration: f64,
    },
    Scrape {
        rate_deg_s: f64,
        duration: f64,
    },
    Retract {
        duration: f64,
        #[serde(default)]
        law: Option<LawSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramSpec {
    pub phases: Vec<PhaseSpec>,
}

impl Default for ProgramSpec {
    fn default() -> Self {
        Self {
            phases: vec![
                PhaseSpec::Deploy {
                    duration: 1.0,
                    law: None,
                },
                PhaseSpec::Scrape {
                    rate_deg_s: 120.0,
                    duration: 3.5,
                },
                PhaseSpec::Retract {
                    duration: 1.0,
                    law: None,
                },
            ],
        }
    }
}

impl ProgramSpec {
    fn to_program(&self, fallback: CamLaw) -> Result<MotionProgram, CliError> {
        let law_or = |l: Option<LawSpec>| l.map_or(Ok(fallback), LawSpec::to_law);
        let phases = self
            .phases
            .iter()
            .map(|p| {
                Ok(match *p {
                    PhaseSpec::Deploy { duration, law } => Phase::Deploy {
                        law: law_or(law)?,
                        duration,
                    },
                    PhaseSpec::Dwell { duration } => Phase::Dwell { duration },
                    PhaseSpec::Scrape {
                        rate_deg_s,
                        duration,
                    } => Phase::Scrape {
                        rate: rate_deg_s,
                        duration,
                    },
                    PhaseSpec::Retract { duration, law } => Phase::Retract {
                        law: law_or(law)?,
                        duration,
                    },
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(MotionProgram::new(phases))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum CalibrationSource {
    Fit(CalibrationFit),
    /// `pulses,angle_deg` samples, fitted by ordinary least squares.
    Csv(PathBuf),
}

impl Default for CalibrationSource {
    fn default() -> Self {
        CalibrationSource::Fit(CalibrationFit::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToolConfig {
    pub kirigami: KirigamiParams,
    pub cam: CamSpec,
    pub program: ProgramSpec,
    pub calibration: CalibrationSource,
    pub spike_policy: SpikePolicy,
    /// mm.
    pub strain_reference_length: f64,
    pub output_dir: Option<PathBuf>,
}

impl Default for ToolConfig {
    fn default() -> Self {
        Self {
            kirigami: KirigamiParams::default(),
            cam: CamSpec::default(),
            program: ProgramSpec::default(),
            calibration: CalibrationSource::default(),
            spike_policy: SpikePolicy::default(),
            strain_reference_length: DEFAULT_REFERENCE_LENGTH,
            output_dir: None,
        }
    }
}

impl ToolConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    /// Loads `path`, or the defaults when no path is given. A relative
    /// calibration CSV path is resolved against the config file's directory.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let mut config = Self::from_json(&read_file(path)?)?;
        if let CalibrationSource::Csv(csv) = &mut config.calibration {
            if csv.is_relative() {
                if let Some(dir) = path.parent() {
                    *csv = dir.join(&*csv);
                }
            }
        }
        Ok(config)
    }

    pub fn law(&self) -> Result<CamLaw, CliError> {
        self.cam.law.to_law()
    }

    pub fn calibration_fit(&self) -> Result<CalibrationFit, CliError> {
        match &self.calibration {
            CalibrationSource::Fit(fit) => Ok(*fit),
            CalibrationSource::Csv(path) => {
                let samples = load_calibration_csv(open_file(path)?)?;
                Ok(fit_pulse_angle_with(&samples, FitMode::Ordinary)?)
            }
        }
    }

    pub fn capsule(&self) -> Result<CapsuleConfig, CliError> {
        let law = self.law()?;
        let capsule = CapsuleConfig {
            kirigami: self.kirigami,
            cam_config: self.cam.to_config(),
            deploy_law: law,
            program: self.program.to_program(law)?,
            calibration: self.calibration_fit()?,
            strain_reference_length: self.strain_reference_length,
            spike_policy: self.spike_policy,
            ..Default::default()
        };
        capsule.validate()?;
        Ok(capsule)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationRow {
    pulses: u64,
    angle_deg: f64,
}

/// Reads `pulses,angle_deg` rows.
pub fn load_calibration_csv<R: std::io::Read>(
    reader: R,
) -> Result<Vec<CalibrationSample>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<CalibrationRow>() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Invalid(format!("line {line}: {e}"))
        })?;
        out.push(CalibrationSample::new(row.pulses, row.angle_deg));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Argument parsing

#[derive(Debug, Parser)]
#[command(
    name = "kiricap",
    version,
    about = "Kirigami capsule design and simulation toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON configuration file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the kirigami cut layout.
    Pattern {
        #[command(flatten)]
        common: Common,
        /// Write pattern.svg (the default when no format is chosen).
        #[arg(long)]
        svg: bool,
        /// Write pattern.dxf.
        #[arg(long)]
        dxf: bool,
        /// Border kept free of cuts, mm.
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
    /// Sample the deploy rise and optionally check cam design bounds.
    Cam {
        #[command(flatten)]
        common: Common,
        /// Law family, overriding the config.
        #[arg(long)]
        law: Option<LawFamily>,
        /// Rows in the kinematics CSV.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        /// Check pressure angle, acceleration and undercut; exit 4 on failure.
        #[arg(long)]
        check: bool,
        /// Pressure-angle bound, deg.
        #[arg(long, default_value_t = 30.0)]
        mu_max: f64,
        /// Acceleration bound, mm/s^2.
        #[arg(long, default_value_t = 1000.0)]
        a_max: f64,
        /// Write the cam profile as cam_profile.svg.
        #[arg(long)]
        profile: bool,
    },
    /// Run the deploy, scrape and retract program end to end.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Sampling interval, s.
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
    },
    /// Fit the pulse-to-angle line from a pulses,angle_deg CSV.
    Calibrate {
        samples: PathBuf,
        /// Force the line through the origin.
        #[arg(long)]
        through_origin: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Find force peaks in a t,fx,fy,fz CSV and classify them.
    Analyze {
        force: PathBuf,
        #[arg(long, value_parser = parse_tissue)]
        tissue: Tissue,
        /// Peak window, s.
        #[arg(long, default_value_t = 0.5)]
        window: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Box-plot statistics of a one-column CSV.
    Stats {
        values: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn parse_tissue(s: &str) -> Result<Tissue, String> {
    s.parse()
}

fn output_dir(common: &Common, config: &ToolConfig) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Summaries go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INVALID
                }
            };
        }
    };
    let result = match cli.command {
        Command::Pattern {
            common,
            svg,
            dxf,
            margin,
        } => cmd_pattern(&common, svg, dxf, margin, out, err),
        Command::Cam {
            common,
            law,
            samples,
            check,
            mu_max,
            a_max,
            profile,
        } => cmd_cam(
            &common,
            law,
            samples,
            check.then_some((mu_max, a_max)),
            profile,
            out,
        ),
        Command::Simulate { common, dt } => cmd_simulate(&common, dt, out),
        Command::Calibrate {
            samples,
            through_origin,
            out: dir,
        } => cmd_calibrate(&samples, through_origin, &dir, out),
        Command::Analyze {
            force,
            tissue,
            window,
            out: dir,
        } => cmd_analyze(&force, tissue, window, &dir, out),
        Command::Stats { values, out: dir } => cmd_stats(&values, &dir, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_pattern(
    common: &Common,
    svg: bool,
    dxf: bool,
    margin: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let config = ToolConfig::load(common.config.as_deref())?;
    let params = config.kirigami;
    params.validate()?;
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(CliError::Invalid(format!(
            "margin must be >= 0 (margin = {margin})"
        )));
    }
    // A margin that swallows the strip leaves nothing to cut; that is a
    // warning, not an error.
    let layout = if 2.0 * margin >= params.h.min(params.w) {
        CutLayout {
            params,
            segments: Vec::new(),
            margin,
            origin: Vec2::default(),
        }
    } else {
        generate_pattern(&params, margin)?
    };
    let dir = output_dir(common, &config);
    if svg || !dxf {
        write_file(&dir, PATTERN_SVG, &export_svg(&layout))?;
    }
    if dxf {
        write_file(&dir, PATTERN_DXF, &export_dxf(&layout))?;
    }
    if layout.is_empty() {
        let _ = writeln!(err, "warning: no cuts fit inside a {margin} mm margin");
    }
    let _ = writeln!(
        out,
        "{} cuts on a {} x {} mm strip",
        layout.segments.len(),
        fixed(params.w, 3),
        fixed(params.h, 3)
    );
    Ok(EXIT_OK)
}

fn cmd_cam(
    common: &Common,
    family: Option<LawFamily>,
    samples: usize,
    bounds: Option<(f64, f64)>,
    profile: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let config = ToolConfig::load(common.config.as_deref())?;
    let mut spec = config.cam.law;
    if let Some(f) = family {
        spec.family = f;
    }
    let law = spec.to_law()?;
    let cam = config.cam.to_config();
    cam.validate()?;
    if samples < 2 {
        return Err(CliError::Invalid(format!(
            "--samples must be >= 2 (got {samples})"
        )));
    }
    let schedule = AngleSchedule::new(cam.omega, law.rise_angle)?;

    let mut csv = String::from("t,phi,y,y_dot,y_ddot,mu,scrape_angle\n");
    for i in 0..samples {
        let t = schedule.duration * i as f64 / (samples - 1) as f64;
        let s = follower_kinematics(&cam, &law, t.min(schedule.duration))?;
        let row = [
            fixed(t, 6),
            fixed(s.phi.to_degrees(), 6),
            fixed(s.y, 6),
            fixed(s.y_dot, 6),
            fixed(s.y_ddot, 6),
            fixed(s.mu.to_degrees(), 6),
            fixed(0.0, 6),
        ];
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    let dir = output_dir(common, &config);
    write_file(&dir, CAM_CSV, &csv)?;
    let _ = writeln!(out, "{samples} samples of the {} rise", law.family);

    let mut code = EXIT_OK;
    if let Some((mu_max, a_max)) = bounds {
        let report = check_constraints(&cam, &law, mu_max.to_radians(), a_max)?;
        let _ = writeln!(
            out,
            "max pressure angle {} deg (limit {}), max acceleration {} mm/s^2 (limit {})",
            fixed(report.max_mu.to_degrees(), 3),
            fixed(mu_max, 3),
            fixed(report.max_accel, 3),
            fixed(a_max, 3)
        );
        if let Some(r) = report.min_radius_of_curvature {
            let _ = writeln!(
                out,
                "min pitch radius of curvature {} mm, roller {} mm",
                fixed(r, 3),
                fixed(cam.roller_radius, 3)
            );
        }
        if report.passed() {
            let _ = writeln!(out, "check passed");
        } else {
            let _ = writeln!(out, "check failed: {}", report.failures().join(", "));
            code = EXIT_CONSTRAINT;
        }
    }
    if profile {
        let pitch = pitch_curve(&cam, &law, 720)?;
        let surface = cam_profile(&pitch, cam.roller_radius)?;
        let extent = pitch
            .points
            .iter()
            .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
            + cam.roller_radius;
        let mut drawing = Drawing::new(Rect {
            min: Vec2::new(-extent, -extent),
            max: Vec2::new(extent, extent),
        });
        drawing.add_polyline(Layer::Cam, &surface, true);
        write_file(&dir, CAM_SVG, &drawing.to_svg())?;
    }
    Ok(code)
}

fn cmd_simulate(common: &Common, dt: f64, out: &mut dyn Write) -> Result<i32, CliError> {
    let config = ToolConfig::load(common.config.as_deref())?;
    let capsule = config.capsule()?;
    let trace = simulate(&capsule, dt)?;
    let spike = spike_length_with(&capsule.kirigami, capsule.spike_policy)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let dir = output_dir(common, &config);
    write_file(&dir, TRACE_CSV, &export_trace(&trace))?;
    let sum = trace.summary(spike.length);
    let _ = writeln!(out, "rows: {}", trace.len());
    let _ = writeln!(out, "peak strain: {}", fixed(sum.peak_strain, 3));
    let _ = writeln!(out, "peak theta: {} deg", fixed(sum.peak_theta, 3));
    let _ = writeln!(out, "peak depth: {} mm", fixed(sum.peak_depth, 3));
    Ok(EXIT_OK)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_calibrate(
    samples: &Path,
    through_origin: bool,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let data = load_calibration_csv(open_file(samples)?)?;
    let mode = if through_origin {
        FitMode::ThroughOrigin
    } else {
        FitMode::Ordinary
    };
    let fit = fit_pulse_angle_with(&data, mode)?;
    write_file(dir, CALIBRATION_JSON, &to_json(&fit))?;
    let _ = writeln!(
        out,
        "slope {} deg/pulse, intercept {} deg, r2 {}",
        fixed(fit.slope, 4),
        fixed(fit.intercept, 4),
        fixed(fit.r2, 4)
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct AnalysisReport {
    tissue: Tissue,
    envelope: SafetyEnvelope,
    window: f64,
    peaks: Vec<ClassifiedPeak>,
}

fn cmd_analyze(
    force: &Path,
    tissue: Tissue,
    window: f64,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(CliError::Invalid(format!(
            "--window must be > 0 (got {window})"
        )));
    }
    let trace = load_force_csv(open_file(force)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", force.display())))?;
    let envelope = SafetyEnvelope::for_tissue(tissue);
    let peaks = classify_safety(&peak_forces(&trace, window), &envelope);
    let report = AnalysisReport {
        tissue,
        envelope,
        window,
        peaks,
    };
    write_file(dir, ANALYSIS_JSON, &to_json(&report))?;
    let _ = writeln!(out, "{} peaks", report.peaks.len());
    Ok(EXIT_OK)
}

fn cmd_stats(values: &Path, dir: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let data = load_values_csv(open_file(values)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", values.display())))?;
    let stats = summarize(&data)?;
    write_file(dir, STATS_JSON, &to_json(&stats))?;
    let _ = writeln!(
        out,
        "n {}, median {}, IQR {}-{}, range {}-{}, mean {}",
        stats.n, stats.median, stats.q1, stats.q3, stats.min, stats.max, stats.mean
    );
    Ok(EXIT_OK)
}
