//! Artifact writers and readers.
//!
//! Every array product is written as a binary blob plus a plain-text sidecar
//! (`<stem>.meta.txt`) holding the shape, the physical axes, the sample
//! units, and the SHA-256 of the config that produced it. [`read_raw`]
//! closes the loop: anything written by [`write_raw_f32`] or
//! [`write_raw_complex`] can be loaded back bit-for-bit.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use ndarray::ArrayD;
use num_complex::Complex;

use nfsar_core::UniformAxis64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Raw,
    Csv,
    Pgm,
}

impl Format {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "raw" => Ok(Format::Raw),
            "csv" => Ok(Format::Csv),
            "pgm" => Ok(Format::Pgm),
            other => Err(CliError::UnitViolation(format!(
                "unknown output format '{other}' (expected raw, csv, or pgm)"
            ))),
        }
    }
}

/// Sidecar metadata written next to every binary artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct Sidecar {
    pub shape: Vec<usize>,
    /// `(start, step, len)` per dimension, in the unit named alongside.
    pub axes: Vec<(f64, f64, usize)>,
    pub axis_units: Vec<String>,
    /// Sample semantics: `magnitude_f32le` or `complex_f32le_interleaved`.
    pub dtype: String,
    pub config_sha256: String,
    pub seed: u64,
}

impl Sidecar {
    fn render(&self) -> String {
        let mut s = String::new();
        let shape: Vec<String> = self.shape.iter().map(|n| n.to_string()).collect();
        s.push_str(&format!("shape = {}\n", shape.join(" ")));
        for (d, ((start, step, len), unit)) in self.axes.iter().zip(&self.axis_units).enumerate() {
            s.push_str(&format!(
                "axis{d} = start={start:.17e} step={step:.17e} len={len} unit={unit}\n"
            ));
        }
        s.push_str(&format!("dtype = {}\n", self.dtype));
        s.push_str(&format!("config_sha256 = {}\n", self.config_sha256));
        s.push_str(&format!("seed = {}\n", self.seed));
        s
    }

    fn parse(text: &str) -> CliResult<Self> {
        let mut shape = Vec::new();
        let mut axes = Vec::new();
        let mut axis_units = Vec::new();
        let mut dtype = String::new();
        let mut config_sha256 = String::new();
        let mut seed = 0u64;
        let bad = |what: &str| CliError::UnitViolation(format!("malformed sidecar: {what}"));
        for line in text.lines() {
            let (key, value) = line.split_once(" = ").ok_or_else(|| bad(line))?;
            match key {
                "shape" => {
                    shape = value
                        .split_whitespace()
                        .map(|v| v.parse().map_err(|_| bad("shape")))
                        .collect::<CliResult<_>>()?;
                }
                "dtype" => dtype = value.to_string(),
                "config_sha256" => config_sha256 = value.to_string(),
                "seed" => seed = value.parse().map_err(|_| bad("seed"))?,
                k if k.starts_with("axis") => {
                    let mut start = 0.0;
                    let mut step = 0.0;
                    let mut len = 0usize;
                    let mut unit = String::new();
                    for field in value.split_whitespace() {
                        let (fk, fv) = field.split_once('=').ok_or_else(|| bad(field))?;
                        match fk {
                            "start" => start = fv.parse().map_err(|_| bad("axis start"))?,
                            "step" => step = fv.parse().map_err(|_| bad("axis step"))?,
                            "len" => len = fv.parse().map_err(|_| bad("axis len"))?,
                            "unit" => unit = fv.to_string(),
                            _ => return Err(bad(field)),
                        }
                    }
                    axes.push((start, step, len));
                    axis_units.push(unit);
                }
                _ => return Err(bad(key)),
            }
        }
        Ok(Sidecar { shape, axes, axis_units, dtype, config_sha256, seed })
    }
}

pub fn axis_triples(axes: &[UniformAxis64]) -> Vec<(f64, f64, usize)> {
    axes.iter().map(|a| (a.start, a.step, a.len)).collect()
}

fn write_sidecar(stem: &Path, meta: &Sidecar) -> CliResult<()> {
    fs::write(stem.with_extension("meta.txt"), meta.render())?;
    Ok(())
}

/// Magnitude volume as little-endian `f32`, row-major, plus sidecar.
pub fn write_raw_f32(stem: &Path, values: &ArrayD<f64>, meta: &Sidecar) -> CliResult<PathBuf> {
    let path = stem.with_extension("raw");
    let mut bytes = Vec::with_capacity(values.len() * 4);
    for &v in values.iter() {
        bytes.extend_from_slice(&(v as f32).to_le_bytes());
    }
    fs::write(&path, bytes)?;
    write_sidecar(stem, meta)?;
    Ok(path)
}

/// Complex cube as interleaved little-endian `f32` (re, im), plus sidecar.
pub fn write_raw_complex(
    stem: &Path,
    values: &ArrayD<Complex<f64>>,
    meta: &Sidecar,
) -> CliResult<PathBuf> {
    let path = stem.with_extension("raw");
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values.iter() {
        bytes.extend_from_slice(&(v.re as f32).to_le_bytes());
        bytes.extend_from_slice(&(v.im as f32).to_le_bytes());
    }
    fs::write(&path, bytes)?;
    write_sidecar(stem, meta)?;
    Ok(path)
}

/// Loads a raw artifact back: the sidecar plus the decoded `f32` samples
/// (interleaved re/im pairs for complex dtypes).
pub fn read_raw(stem: &Path) -> CliResult<(Sidecar, Vec<f32>)> {
    let meta = Sidecar::parse(&fs::read_to_string(stem.with_extension("meta.txt"))?)?;
    let bytes = fs::read(stem.with_extension("raw"))?;
    let per_sample = if meta.dtype.starts_with("complex") { 2 } else { 1 };
    let expected = meta.shape.iter().product::<usize>() * per_sample * 4;
    if bytes.len() != expected {
        return Err(CliError::UnitViolation(format!(
            "raw payload is {} bytes, sidecar implies {expected}",
            bytes.len()
        )));
    }
    let samples = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    Ok((meta, samples))
}

/// Row-major CSV for 1-D and 2-D magnitudes: one row per leading index.
pub fn write_csv(stem: &Path, values: &ArrayD<f64>, meta: &Sidecar) -> CliResult<PathBuf> {
    let path = stem.with_extension("csv");
    let mut out = String::new();
    match values.ndim() {
        1 => {
            let row: Vec<String> = values.iter().map(|v| format!("{v:.9e}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        2 => {
            let cols = values.shape()[1];
            for row in values.iter().collect::<Vec<_>>().chunks(cols) {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.9e}")).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        n => {
            return Err(CliError::UnitViolation(format!(
                "csv output supports 1-D and 2-D images, got {n}-D"
            )))
        }
    }
    fs::write(&path, out)?;
    write_sidecar(stem, meta)?;
    Ok(path)
}

/// Binary PGM (P5), max-normalized per 2-D slice; a constant slice maps to
/// full white. 3-D volumes produce one file per leading index.
pub fn write_pgm(stem: &Path, values: &ArrayD<f64>, meta: &Sidecar) -> CliResult<Vec<PathBuf>> {
    let slice_to_pgm = |path: &Path, rows: usize, cols: usize, data: &[f64]| -> CliResult<()> {
        let lo = data.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut f = fs::File::create(path)?;
        write!(f, "P5\n{cols} {rows}\n255\n")?;
        let pixels: Vec<u8> = data
            .iter()
            .map(|&v| {
                if hi > lo {
                    ((v - lo) / (hi - lo) * 255.0).round() as u8
                } else {
                    255
                }
            })
            .collect();
        f.write_all(&pixels)?;
        Ok(())
    };

    let flat: Vec<f64> = values.iter().cloned().collect();
    let mut paths = Vec::new();
    match *values.shape() {
        [rows, cols] => {
            let path = stem.with_extension("pgm");
            slice_to_pgm(&path, rows, cols, &flat)?;
            paths.push(path);
        }
        [slices, rows, cols] => {
            for s in 0..slices {
                let path = stem.with_extension(format!("{s:03}.pgm"));
                slice_to_pgm(&path, rows, cols, &flat[s * rows * cols..(s + 1) * rows * cols])?;
                paths.push(path);
            }
        }
        _ => {
            return Err(CliError::UnitViolation(format!(
                "pgm output supports 2-D and 3-D images, got {}-D",
                values.ndim()
            )))
        }
    }
    write_sidecar(stem, meta)?;
    Ok(paths)
}
