//! Subcommand implementations.
//!
//! Every run writes under `<out>/<ISO-date>/<run-name>/`; if any step fails
//! after files have been written, the run directory is removed so no partial
//! artifacts survive. All randomness flows from the single top-level seed,
//! which is recorded in the report and every sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use nfsar_core::beat::{apply_calibration, calibrate, simulate_beat};
use nfsar_core::image::magnitude_correlation;
use nfsar_core::recon::{
    backprojection, circular_pfa_2d, cylindrical_pfa_3d, linear_fft_1d, linear_rma_2d,
    rectilinear_fft_2d, rectilinear_rma_3d,
};
use nfsar_core::scene::validate_scene;
use nfsar_core::spectral::msp_check_linear;
use nfsar_core::sync::{generate_pulse_stream, run_synchronizer, verify_uniform_grid};
use nfsar_core::{
    Aperture64, BeatCube64, CalibrationResult, ImageVolume64, ReconGrid64, Scene64, UniformAxis64,
};

use crate::config::{Algorithm, MspSpec, RunConfig};
use crate::emit::{self, Format, Sidecar};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub oracle: bool,
    pub dry_run: bool,
}

impl RunOptions {
    fn seed(&self, cfg: &RunConfig) -> u64 {
        self.seed.unwrap_or(cfg.seed)
    }

    fn format(&self, cfg: &RunConfig) -> CliResult<Format> {
        match (self.format, &cfg.format) {
            (Some(f), _) => Ok(f),
            (None, Some(s)) => Format::parse(s),
            (None, None) => Ok(Format::Raw),
        }
    }

    fn out_root(&self, cfg: &RunConfig) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(cfg.out_dir.as_deref().unwrap_or("out")))
    }
}

/// `<out>/<ISO-date>/<name>/`, created empty (a leftover directory from a
/// previous run of the same name is replaced).
fn run_dir(cfg: &RunConfig, opts: &RunOptions) -> CliResult<PathBuf> {
    let date = chrono::Local::now().format("%Y-%m-%d").to_string();
    let dir = opts.out_root(cfg).join(date).join(&cfg.name);
    if dir.exists() {
        fs::remove_dir_all(&dir)?;
    }
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Runs `body`, deleting the run directory if it fails.
fn with_cleanup<T>(dir: &Path, body: impl FnOnce() -> CliResult<T>) -> CliResult<T> {
    match body() {
        Ok(v) => Ok(v),
        Err(e) => {
            let _ = fs::remove_dir_all(dir);
            Err(e)
        }
    }
}

fn require<'a, T>(field: &'a Option<T>, section: &'static str) -> CliResult<&'a T> {
    field.as_ref().ok_or(CliError::MissingSection(section))
}

fn aperture_axes(ap: &Aperture64) -> (Vec<UniformAxis64>, Vec<String>) {
    match ap {
        Aperture64::Linear { y, .. } => (vec![*y], vec!["m".into()]),
        Aperture64::Rectilinear { x, y, .. } => (vec![*x, *y], vec!["m".into(), "m".into()]),
        Aperture64::Circular { theta, .. } => (vec![*theta], vec!["rad".into()]),
        Aperture64::Cylindrical { theta, y, .. } => {
            (vec![*theta, *y], vec!["rad".into(), "m".into()])
        }
    }
}

fn beat_sidecar(cube: &BeatCube64, cfg: &RunConfig, seed: u64) -> Sidecar {
    let (mut axes, mut units) = aperture_axes(&cube.aperture);
    axes.push(cube.k);
    units.push("rad/m".into());
    Sidecar {
        shape: cube.samples.shape().to_vec(),
        axes: emit::axis_triples(&axes),
        axis_units: units,
        dtype: "complex_f32le_interleaved".into(),
        config_sha256: cfg.sha256.clone(),
        seed,
    }
}

fn image_sidecar(img: &ImageVolume64, cfg: &RunConfig, seed: u64) -> Sidecar {
    Sidecar {
        shape: img.values.shape().to_vec(),
        axes: emit::axis_triples(&img.axes),
        axis_units: vec!["m".into(); img.axes.len()],
        dtype: "magnitude_f32le".into(),
        config_sha256: cfg.sha256.clone(),
        seed,
    }
}

fn emit_image(dir: &Path, img: &ImageVolume64, format: Format, meta: &Sidecar) -> CliResult<()> {
    let stem = dir.join("image");
    let mag = img.magnitude();
    match format {
        Format::Raw => {
            emit::write_raw_f32(&stem, &mag, meta)?;
        }
        Format::Csv => {
            emit::write_csv(&stem, &mag, meta)?;
        }
        Format::Pgm => {
            emit::write_pgm(&stem, &mag, meta)?;
        }
    }
    Ok(())
}

fn reconstruct_with(
    algorithm: Algorithm,
    cube: &BeatCube64,
    grid: &ReconGrid64,
) -> CliResult<ImageVolume64> {
    let img = match algorithm {
        Algorithm::LinearFft1d => linear_fft_1d(cube, grid),
        Algorithm::LinearRma2d => linear_rma_2d(cube, grid),
        Algorithm::RectilinearFft2d => rectilinear_fft_2d(cube, grid),
        Algorithm::RectilinearRma3d => rectilinear_rma_3d(cube, grid),
        Algorithm::CircularPfa2d => circular_pfa_2d(cube, grid),
        Algorithm::CylindricalPfa3d => cylindrical_pfa_3d(cube, grid),
        Algorithm::Backprojection => backprojection(cube, grid),
    };
    img.map_err(CliError::Module)
}

fn simulate_from_config(cfg: &RunConfig, seed: u64) -> CliResult<(BeatCube64, Vec<String>)> {
    let chirp = require(&cfg.chirp, "chirp")?;
    let aperture = require(&cfg.aperture, "aperture")?;
    let scene = require(&cfg.scene, "scene")?;
    let warnings: Vec<String> = validate_scene(scene, chirp, aperture)
        .iter()
        .map(|w| w.to_string())
        .collect();
    let cube = simulate_beat(scene, aperture, chirp, &cfg.errors, seed)?;
    Ok((cube, warnings))
}

/// Single-element capture of a corner reflector at the configured calibration
/// range, under the same capture errors as the main run.
fn calibration_capture(cfg: &RunConfig, range: f64, seed: u64) -> CliResult<CalibrationResult<f64>> {
    let chirp = require(&cfg.chirp, "chirp")?;
    let one = UniformAxis64::new(0.0, 1.0, 1).map_err(CliError::Module)?;
    let ap = Aperture64::linear(one, 0.0).map_err(CliError::Module)?;
    let reflector = Scene64::single([0.0, 0.0, range], 1.0).map_err(CliError::Module)?;
    let measured = simulate_beat(&reflector, &ap, chirp, &cfg.errors, seed ^ 0xCA11)?;
    calibrate(&measured, range).map_err(CliError::Module)
}

// ----------------------------------------------------------------- commands

pub fn cmd_simulate(cfg: &RunConfig, opts: &RunOptions) -> CliResult<()> {
    if opts.dry_run {
        require(&cfg.chirp, "chirp")?;
        require(&cfg.aperture, "aperture")?;
        require(&cfg.scene, "scene")?;
        println!("dry run: simulate '{}' is valid", cfg.name);
        return Ok(());
    }
    let seed = opts.seed(cfg);
    let dir = run_dir(cfg, opts)?;
    with_cleanup(&dir, || {
        let (cube, warnings) = simulate_from_config(cfg, seed)?;
        emit::write_raw_complex(&dir.join("beat"), &cube.samples, &beat_sidecar(&cube, cfg, seed))?;
        for w in &warnings {
            eprintln!("warning: {w}");
        }
        println!("wrote {}", dir.join("beat.raw").display());
        Ok(())
    })
}

pub fn cmd_reconstruct(cfg: &RunConfig, opts: &RunOptions) -> CliResult<()> {
    let recon = require(&cfg.recon, "recon")?;
    if opts.dry_run {
        require(&cfg.chirp, "chirp")?;
        require(&cfg.aperture, "aperture")?;
        require(&cfg.scene, "scene")?;
        println!("dry run: reconstruct '{}' ({}) is valid", cfg.name, recon.algorithm.name());
        return Ok(());
    }
    let seed = opts.seed(cfg);
    let format = opts.format(cfg)?;
    let dir = run_dir(cfg, opts)?;
    with_cleanup(&dir, || {
        let (cube, _) = simulate_from_config(cfg, seed)?;
        let img = reconstruct_with(recon.algorithm, &cube, &recon.grid)?;
        emit_image(&dir, &img, format, &image_sidecar(&img, cfg, seed))?;
        println!("wrote image under {}", dir.display());
        Ok(())
    })
}

pub fn cmd_pipeline(cfg: &RunConfig, opts: &RunOptions) -> CliResult<()> {
    let recon = require(&cfg.recon, "recon")?;
    if opts.dry_run {
        require(&cfg.chirp, "chirp")?;
        require(&cfg.aperture, "aperture")?;
        require(&cfg.scene, "scene")?;
        println!("dry run: pipeline '{}' ({}) is valid", cfg.name, recon.algorithm.name());
        return Ok(());
    }
    let seed = opts.seed(cfg);
    let format = opts.format(cfg)?;
    let dir = run_dir(cfg, opts)?;
    with_cleanup(&dir, || {
        let chirp = *require(&cfg.chirp, "chirp")?;
        let (mut cube, warnings) = simulate_from_config(cfg, seed)?;
        let mut cal_line = String::from("calibration: none\n");
        if let Some(range) = cfg.calibration_range {
            let cal = calibration_capture(cfg, range, seed)?;
            cube = apply_calibration(&cube, &cal);
            cal_line = format!(
                "calibration: phase_offset_rad={:.9e} range_bias_mm={:.9e}\n",
                cal.phase_offset,
                cal.range_bias * 1e3
            );
        }
        emit::write_raw_complex(&dir.join("beat"), &cube.samples, &beat_sidecar(&cube, cfg, seed))?;

        let img = reconstruct_with(recon.algorithm, &cube, &recon.grid)?;
        emit_image(&dir, &img, format, &image_sidecar(&img, cfg, seed))?;

        let mut report = String::new();
        report.push_str(&format!("run: {}\nseed: {seed}\n", cfg.name));
        report.push_str(&format!("algorithm: {}\n", recon.algorithm.name()));
        report.push_str(&format!(
            "range_resolution_m: {:.9e}\nmax_range_m: {:.9e}\n",
            chirp.range_resolution().map_err(CliError::Module)?,
            chirp.max_range().map_err(CliError::Module)?
        ));
        report.push_str(&cal_line);
        if let Some(p) = cfg.periodicity_mm {
            report.push_str(&format!("aperture_periodicity_mm: {p}\n"));
        }
        let mut peaks = img.find_peaks(0.5);
        peaks.truncate(8);
        for p in &peaks {
            let coords: Vec<String> = p.coords.iter().map(|c| format!("{c:.6}")).collect();
            report.push_str(&format!(
                "peak: coords_m=[{}] magnitude={:.6e}\n",
                coords.join(", "),
                p.magnitude
            ));
        }
        if opts.oracle {
            let oracle = reconstruct_with(Algorithm::Backprojection, &cube, &recon.grid)?;
            let ncc = magnitude_correlation(&img, &oracle).map_err(CliError::Module)?;
            report.push_str(&format!("oracle_ncc: {ncc:.6}\n"));
        }
        for w in &warnings {
            report.push_str(&format!("warning: {w}\n"));
        }
        if let Some(notes) = &cfg.notes {
            report.push_str(&format!("notes: {notes}\n"));
        }
        fs::write(dir.join("report.txt"), report)?;
        println!("wrote pipeline artifacts under {}", dir.display());
        Ok(())
    })
}

pub fn cmd_sync(cfg: &RunConfig, opts: &RunOptions) -> CliResult<()> {
    let sync = require(&cfg.sync, "sync")?;
    if opts.dry_run {
        println!("dry run: sync '{}' is valid", cfg.name);
        return Ok(());
    }
    let dir = run_dir(cfg, opts)?;
    with_cleanup(&dir, || {
        let pulses = generate_pulse_stream(&sync.profile, &sync.drive).map_err(CliError::Module)?;
        let record = run_synchronizer(&pulses, &sync.plan, &sync.drive).map_err(CliError::Module)?;
        let report = verify_uniform_grid(&record, &sync.plan, &sync.drive);

        let mut out = String::new();
        out.push_str(&format!("run: {}\n", cfg.name));
        out.push_str(&format!("mm_per_pulse: {:.9}\n", sync.drive.mm_per_pulse()));
        out.push_str(&format!("pulses: {}\n", pulses.num_pulses()));
        if let Some(w) = &pulses.warning {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str(&format!(
            "radar1_triggers: {}\nradar2_triggers: {}\n",
            report.radar1_triggers, report.radar2_triggers
        ));
        out.push_str(&format!(
            "max_position_error_mm: {:.9e}\ncross_alignment_error_mm: {:.9e}\n",
            report.max_position_error, report.cross_alignment_error
        ));
        out.push_str(&format!("uniform: {}\n", report.uniform));
        fs::write(dir.join("sync_report.txt"), &out)?;
        print!("{out}");
        Ok(())
    })
}

pub fn cmd_calibrate(cfg: &RunConfig, opts: &RunOptions) -> CliResult<()> {
    let range = cfg.calibration_range.unwrap_or(0.3);
    if opts.dry_run {
        require(&cfg.chirp, "chirp")?;
        println!("dry run: calibrate '{}' is valid", cfg.name);
        return Ok(());
    }
    let seed = opts.seed(cfg);
    let dir = run_dir(cfg, opts)?;
    with_cleanup(&dir, || {
        let cal = calibration_capture(cfg, range, seed)?;
        let out = format!(
            "run: {}\nseed: {seed}\ntrue_range_mm: {:.6}\nphase_offset_rad: {:.9e}\nrange_bias_mm: {:.9e}\n",
            cfg.name,
            range * 1e3,
            cal.phase_offset,
            cal.range_bias * 1e3
        );
        fs::write(dir.join("calibration_report.txt"), &out)?;
        print!("{out}");
        Ok(())
    })
}

pub fn cmd_msp_check(cfg: &RunConfig, opts: &RunOptions) -> CliResult<()> {
    let spec = cfg.msp.unwrap_or(MspSpec {
        wavelength: 5e-3,
        standoff: 0.3,
        target_x: 0.0,
        aperture_halfwidth: 0.2,
        samples: 512,
        ku_samples: 2048,
    });
    if opts.dry_run {
        println!("dry run: msp-check '{}' is valid", cfg.name);
        return Ok(());
    }
    let dir = run_dir(cfg, opts)?;
    with_cleanup(&dir, || {
        let r = 2.0 * std::f64::consts::TAU / spec.wavelength;
        let u = UniformAxis64::from_range(
            spec.target_x - spec.aperture_halfwidth,
            spec.target_x + spec.aperture_halfwidth,
            spec.samples,
        )
        .map_err(CliError::Module)?;
        let ku = UniformAxis64::from_range(-r * 0.999, r * 0.999, spec.ku_samples)
            .map_err(CliError::Module)?;
        let fidelity =
            msp_check_linear(r, spec.standoff, spec.target_x, &u, &ku).map_err(CliError::Module)?;
        let out = format!(
            "run: {}\nwavelength_mm: {:.6}\nstandoff_mm: {:.6}\nfidelity: {fidelity:.6}\n",
            cfg.name,
            spec.wavelength * 1e3,
            spec.standoff * 1e3
        );
        fs::write(dir.join("msp_report.txt"), &out)?;
        print!("{out}");
        Ok(())
    })
}
