//! Run configuration: TOML schema, validation, and unit conversion.
//!
//! Config files use bench units (GHz, MHz, µs, mm, degrees) and are converted
//! to SI at the parse boundary; everything downstream of [`RunConfig`] is in
//! SI (the synchronizer keeps actuator millimeters, matching its module).
//! Unknown keys are rejected with the offending line, and each failure class
//! carries a distinct error code (see [`crate::error::CliError`]).

use serde::Deserialize;
use sha2::{Digest, Sha256};

use nfsar_core::aperture::Geometry;
use nfsar_core::beat::CaptureErrors;
use nfsar_core::recon::ReconGrid;
use nfsar_core::sync::{Direction, DriveConfig, MotionProfile, TriggerPlan};
use nfsar_core::{Aperture64, ChirpConfig64, Scene64, UniformAxis64};

use crate::error::{CliError, CliResult};

const MM: f64 = 1e-3;
const GHZ: f64 = 1e9;
const MHZ: f64 = 1e6;
const US: f64 = 1e-6;

// ---------------------------------------------------------------- raw schema

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    notes: Option<String>,
    seed: Option<u64>,
    chirp: Option<ChirpSection>,
    aperture: Option<ApertureSection>,
    scene: Option<SceneSection>,
    errors: Option<ErrorsSection>,
    calibration: Option<CalibrationSection>,
    recon: Option<ReconSection>,
    sync: Option<SyncSection>,
    msp: Option<MspSection>,
    output: Option<OutputSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChirpSection {
    f0_ghz: f64,
    bandwidth_ghz: f64,
    duration_us: f64,
    fs_mhz: f64,
    num_samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApertureSection {
    geometry: String,
    x_count: Option<usize>,
    x_step_mm: Option<f64>,
    #[serde(default)]
    x_center_mm: f64,
    y_count: Option<usize>,
    y_step_mm: Option<f64>,
    #[serde(default)]
    y_center_mm: f64,
    #[serde(default)]
    standoff_mm: f64,
    radius_mm: Option<f64>,
    theta_count: Option<usize>,
    theta_step_deg: Option<f64>,
    #[serde(default)]
    theta_start_deg: f64,
    /// Echoed into reports; drives no logic.
    periodicity_mm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneSection {
    scatterers: Vec<ScattererSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScattererSection {
    position_mm: [f64; 3],
    #[serde(default = "one")]
    sigma: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ErrorsSection {
    #[serde(default)]
    phase_offset_rad: f64,
    #[serde(default)]
    range_bias_mm: f64,
    #[serde(default)]
    noise_sigma: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationSection {
    #[serde(default = "default_cal_range")]
    true_range_mm: f64,
}

fn default_cal_range() -> f64 {
    300.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReconSection {
    algorithm: String,
    z0_mm: Option<f64>,
    x: Option<AxisSection>,
    y: Option<AxisSection>,
    z: Option<AxisSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisSection {
    #[serde(default)]
    center_mm: f64,
    step_mm: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SyncSection {
    #[serde(default = "default_mm_per_rev")]
    mm_per_rev: f64,
    #[serde(default = "default_pulses_per_rev")]
    pulses_per_rev: u32,
    #[serde(default = "default_axis")]
    axis: String,
    #[serde(default = "default_v_max")]
    v_max_mm_s: f64,
    #[serde(default = "default_accel")]
    accel_mm_s2: f64,
    travel_mm: f64,
    x_offset_mm: f64,
    x_step_mm: f64,
    count: usize,
    #[serde(default)]
    delta_x_mm: f64,
    #[serde(default)]
    reverse: bool,
}

fn default_mm_per_rev() -> f64 {
    110.0
}
fn default_pulses_per_rev() -> u32 {
    20000
}
fn default_axis() -> String {
    "x".into()
}
fn default_v_max() -> f64 {
    200.0
}
fn default_accel() -> f64 {
    500.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MspSection {
    #[serde(default = "default_wavelength")]
    wavelength_mm: f64,
    #[serde(default = "default_msp_standoff")]
    standoff_mm: f64,
    #[serde(default)]
    target_x_mm: f64,
    #[serde(default = "default_halfwidth")]
    aperture_halfwidth_mm: f64,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_ku_samples")]
    ku_samples: usize,
}

fn default_wavelength() -> f64 {
    5.0
}
fn default_msp_standoff() -> f64 {
    300.0
}
fn default_halfwidth() -> f64 {
    200.0
}
fn default_samples() -> usize {
    512
}
fn default_ku_samples() -> usize {
    2048
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<String>,
    format: Option<String>,
}

// ------------------------------------------------------------- parsed config

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    LinearFft1d,
    LinearRma2d,
    RectilinearFft2d,
    RectilinearRma3d,
    CircularPfa2d,
    CylindricalPfa3d,
    Backprojection,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LinearFft1d => "linear_fft_1d",
            Algorithm::LinearRma2d => "linear_rma_2d",
            Algorithm::RectilinearFft2d => "rectilinear_fft_2d",
            Algorithm::RectilinearRma3d => "rectilinear_rma_3d",
            Algorithm::CircularPfa2d => "circular_pfa_2d",
            Algorithm::CylindricalPfa3d => "cylindrical_pfa_3d",
            Algorithm::Backprojection => "backprojection",
        }
    }

    fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "linear_fft_1d" => Algorithm::LinearFft1d,
            "linear_rma_2d" => Algorithm::LinearRma2d,
            "rectilinear_fft_2d" => Algorithm::RectilinearFft2d,
            "rectilinear_rma_3d" => Algorithm::RectilinearRma3d,
            "circular_pfa_2d" => Algorithm::CircularPfa2d,
            "cylindrical_pfa_3d" => Algorithm::CylindricalPfa3d,
            "backprojection" => Algorithm::Backprojection,
            other => {
                return Err(CliError::UnitViolation(format!(
                    "unknown reconstruction algorithm '{other}'"
                )))
            }
        })
    }

    /// Geometry this algorithm reconstructs from, `None` = any.
    fn geometry(self) -> Option<Geometry> {
        match self {
            Algorithm::LinearFft1d | Algorithm::LinearRma2d => Some(Geometry::Linear),
            Algorithm::RectilinearFft2d | Algorithm::RectilinearRma3d => Some(Geometry::Rectilinear),
            Algorithm::CircularPfa2d => Some(Geometry::Circular),
            Algorithm::CylindricalPfa3d => Some(Geometry::Cylindrical),
            Algorithm::Backprojection => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReconSpec {
    pub algorithm: Algorithm,
    pub grid: ReconGrid<f64>,
}

#[derive(Debug, Clone)]
pub struct SyncSpec {
    pub drive: DriveConfig<f64>,
    pub profile: MotionProfile<f64>,
    pub plan: TriggerPlan<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct MspSpec {
    pub wavelength: f64,
    pub standoff: f64,
    pub target_x: f64,
    pub aperture_halfwidth: f64,
    pub samples: usize,
    pub ku_samples: usize,
}

/// Fully validated run configuration, in SI units.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub name: String,
    pub notes: Option<String>,
    pub seed: u64,
    pub chirp: Option<ChirpConfig64>,
    pub aperture: Option<Aperture64>,
    pub periodicity_mm: Option<f64>,
    pub scene: Option<Scene64>,
    pub errors: CaptureErrors<f64>,
    /// Corner-reflector distance for calibration (m).
    pub calibration_range: Option<f64>,
    pub recon: Option<ReconSpec>,
    pub sync: Option<SyncSpec>,
    pub msp: Option<MspSpec>,
    pub out_dir: Option<String>,
    pub format: Option<String>,
    /// SHA-256 of the config text, recorded in sidecars for provenance.
    pub sha256: String,
}

pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(classify_toml_error)?;
    let sha256 = hex(&Sha256::digest(text.as_bytes()));

    let chirp = raw.chirp.map(build_chirp).transpose()?;
    let (aperture, periodicity_mm) = match raw.aperture {
        Some(a) => {
            let p = a.periodicity_mm;
            (Some(build_aperture(a)?), p)
        }
        None => (None, None),
    };
    let scene = raw.scene.map(build_scene).transpose()?;
    let errors = build_errors(raw.errors.unwrap_or_default())?;
    let recon = raw
        .recon
        .map(|r| build_recon(r, aperture.as_ref()))
        .transpose()?;
    let sync = raw.sync.map(build_sync).transpose()?;
    let msp = raw.msp.map(|m| MspSpec {
        wavelength: m.wavelength_mm * MM,
        standoff: m.standoff_mm * MM,
        target_x: m.target_x_mm * MM,
        aperture_halfwidth: m.aperture_halfwidth_mm * MM,
        samples: m.samples,
        ku_samples: m.ku_samples,
    });

    Ok(RunConfig {
        name: raw.name.unwrap_or_else(|| "run".into()),
        notes: raw.notes,
        seed: raw.seed.unwrap_or(0),
        chirp,
        aperture,
        periodicity_mm,
        scene,
        errors,
        calibration_range: raw.calibration.map(|c| c.true_range_mm * MM),
        recon,
        sync,
        msp,
        out_dir: raw.output.as_ref().and_then(|o| o.dir.clone()),
        format: raw.output.as_ref().and_then(|o| o.format.clone()),
        sha256,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Splits TOML failures into syntax errors and unknown-key errors; the toml
/// crate already embeds the line/column in the message.
fn classify_toml_error(e: toml::de::Error) -> CliError {
    let msg = e.to_string();
    if msg.contains("unknown field") {
        CliError::UnknownKey(msg)
    } else {
        CliError::Syntax(msg)
    }
}

fn build_chirp(c: ChirpSection) -> CliResult<ChirpConfig64> {
    let duration = c.duration_us * US;
    if !(duration > 0.0) {
        return Err(CliError::UnitViolation("chirp duration_us must be positive".into()));
    }
    let slope = c.bandwidth_ghz * GHZ / duration;
    ChirpConfig64::new(c.f0_ghz * GHZ, slope, duration, c.fs_mhz * MHZ, c.num_samples)
        .map_err(CliError::Module)
}

fn axis_from(
    count: Option<usize>,
    step_mm: Option<f64>,
    center_mm: f64,
    what: &str,
) -> CliResult<UniformAxis64> {
    let count = count.ok_or_else(|| CliError::UnitViolation(format!("{what}_count is required")))?;
    let step = step_mm.ok_or_else(|| CliError::UnitViolation(format!("{what}_step_mm is required")))?;
    UniformAxis64::centered(center_mm * MM, step * MM, count).map_err(CliError::Module)
}

fn build_aperture(a: ApertureSection) -> CliResult<Aperture64> {
    let standoff = a.standoff_mm * MM;
    match a.geometry.as_str() {
        "linear" => {
            let y = axis_from(a.y_count, a.y_step_mm, a.y_center_mm, "y")?;
            Aperture64::linear(y, standoff).map_err(CliError::Module)
        }
        "rectilinear" => {
            let x = axis_from(a.x_count, a.x_step_mm, a.x_center_mm, "x")?;
            let y = axis_from(a.y_count, a.y_step_mm, a.y_center_mm, "y")?;
            Aperture64::rectilinear(x, y, standoff).map_err(CliError::Module)
        }
        "circular" | "cylindrical" => {
            let radius = a
                .radius_mm
                .ok_or_else(|| CliError::UnitViolation("radius_mm is required".into()))?
                * MM;
            let count = a
                .theta_count
                .ok_or_else(|| CliError::UnitViolation("theta_count is required".into()))?;
            let step = a
                .theta_step_deg
                .ok_or_else(|| CliError::UnitViolation("theta_step_deg is required".into()))?
                .to_radians();
            let theta = UniformAxis64::new(a.theta_start_deg.to_radians(), step, count)
                .map_err(CliError::Module)?;
            if a.geometry == "circular" {
                Aperture64::circular(theta, radius).map_err(CliError::Module)
            } else {
                let y = axis_from(a.y_count, a.y_step_mm, a.y_center_mm, "y")?;
                Aperture64::cylindrical(theta, y, radius).map_err(CliError::Module)
            }
        }
        other => Err(CliError::UnitViolation(format!("unknown aperture geometry '{other}'"))),
    }
}

fn build_scene(s: SceneSection) -> CliResult<Scene64> {
    let scatterers = s
        .scatterers
        .into_iter()
        .map(|sc| nfsar_core::Scatterer {
            position: [sc.position_mm[0] * MM, sc.position_mm[1] * MM, sc.position_mm[2] * MM],
            sigma: sc.sigma,
        })
        .collect();
    Scene64::new(scatterers).map_err(CliError::Module)
}

fn build_errors(e: ErrorsSection) -> CliResult<CaptureErrors<f64>> {
    let errors = CaptureErrors {
        phase_offset: e.phase_offset_rad,
        range_bias: e.range_bias_mm * MM,
        noise_sigma: e.noise_sigma,
    };
    errors.validate().map_err(CliError::Module)?;
    Ok(errors)
}

fn build_recon(r: ReconSection, aperture: Option<&Aperture64>) -> CliResult<ReconSpec> {
    let algorithm = Algorithm::parse(&r.algorithm)?;
    if let (Some(want), Some(ap)) = (algorithm.geometry(), aperture) {
        if ap.geometry() != want {
            return Err(CliError::GeometryMismatch(format!(
                "algorithm {} requires a {} aperture, config declares {}",
                algorithm.name(),
                want.name(),
                ap.geometry().name()
            )));
        }
    }

    let axis = |s: &Option<AxisSection>, what: &str| -> CliResult<UniformAxis64> {
        let s = s
            .as_ref()
            .ok_or_else(|| CliError::UnitViolation(format!("recon.{what} axis is required")))?;
        UniformAxis64::centered(s.center_mm * MM, s.step_mm * MM, s.count).map_err(CliError::Module)
    };
    let z0 = r.z0_mm.map(|v| v * MM);
    let require_z0 = || {
        z0.ok_or_else(|| CliError::UnitViolation("recon.z0_mm is required for single-plane algorithms".into()))
    };

    let (axes, z0) = match algorithm {
        Algorithm::LinearFft1d => (vec![axis(&r.y, "y")?], Some(require_z0()?)),
        Algorithm::LinearRma2d => (vec![axis(&r.y, "y")?, axis(&r.z, "z")?], None),
        Algorithm::RectilinearFft2d => (vec![axis(&r.x, "x")?, axis(&r.y, "y")?], Some(require_z0()?)),
        Algorithm::RectilinearRma3d => {
            (vec![axis(&r.x, "x")?, axis(&r.y, "y")?, axis(&r.z, "z")?], None)
        }
        Algorithm::CircularPfa2d => (vec![axis(&r.x, "x")?, axis(&r.z, "z")?], None),
        Algorithm::CylindricalPfa3d => {
            (vec![axis(&r.x, "x")?, axis(&r.y, "y")?, axis(&r.z, "z")?], None)
        }
        Algorithm::Backprojection => {
            // whichever of x/y/z are present, in that order
            let mut axes = Vec::new();
            for (s, what) in [(&r.x, "x"), (&r.y, "y"), (&r.z, "z")] {
                if s.is_some() {
                    axes.push(axis(s, what)?);
                }
            }
            (axes, z0)
        }
    };
    let grid = ReconGrid::new(axes, z0).map_err(CliError::Module)?;
    Ok(ReconSpec { algorithm, grid })
}

fn build_sync(s: SyncSection) -> CliResult<SyncSpec> {
    let drive = DriveConfig::new(s.mm_per_rev, s.pulses_per_rev, s.axis).map_err(CliError::Module)?;
    let direction = if s.reverse { Direction::Reverse } else { Direction::Forward };
    let profile = MotionProfile::new(s.travel_mm, s.v_max_mm_s, s.accel_mm_s2, direction)
        .map_err(CliError::Module)?;
    let plan = TriggerPlan::new(s.x_offset_mm, s.x_step_mm, s.count, s.delta_x_mm)
        .map_err(CliError::Module)?;
    Ok(SyncSpec { drive, profile, plan })
}
