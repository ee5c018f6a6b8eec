//! Monostatic beat-signal synthesis and constant phase / range-bias
//! calibration.
//!
//! For a scatterer at distance `R` from an element, the noiseless beat
//! sample at wavenumber `k` is `sigma/R^2 * exp(j*2*k*R)`; multiple
//! scatterers superpose. Injected capture errors model a constant phase
//! offset, an additive range bias on every path, and circularly-symmetric
//! complex Gaussian noise drawn deterministically from a seed and the
//! element index.

use ndarray::ArrayD;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::aperture::Aperture;
use crate::axis::UniformAxis;
use crate::chirp::ChirpConfig;
use crate::cube::BeatCube;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scene::{distance, Scene};

/// Capture imperfections injected into a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaptureErrors<T> {
    /// Constant phase offset (rad), identical over k and elements.
    pub phase_offset: T,
    /// Additive bias on every range (m).
    pub range_bias: T,
    /// Standard deviation of complex additive noise (linear units).
    pub noise_sigma: T,
}

impl<T: Scalar> CaptureErrors<T> {
    pub fn none() -> Self {
        Self {
            phase_offset: T::zero(),
            range_bias: T::zero(),
            noise_sigma: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sigma >= T::zero()) {
            return Err(Error::InvalidScene("noise sigma must be >= 0".into()));
        }
        if !self.range_bias.is_finite() || !self.phase_offset.is_finite() {
            return Err(Error::InvalidScene("capture errors must be finite".into()));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for CaptureErrors<T> {
    fn default() -> Self {
        Self::none()
    }
}

/// Horizontal displacement between the two radar phase centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualRadarLayout<T> {
    /// Displacement of radar 2 relative to radar 1 along x (m).
    pub delta_x: T,
}

/// Constant phase offset and range bias recovered by [`calibrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult<T> {
    /// Phase offset wrapped to (-pi, pi] (rad).
    pub phase_offset: T,
    /// Range bias (m).
    pub range_bias: T,
}

/// Simulates the beat cube of `scene` captured over `aperture`.
///
/// Deterministic for a given `rng_seed`: noise is drawn per element from the
/// seed and the element index, so per-element parallelism cannot change the
/// output.
pub fn simulate_beat<T: Scalar>(
    scene: &Scene<T>,
    aperture: &Aperture<T>,
    chirp: &ChirpConfig<T>,
    errors: &CaptureErrors<T>,
    rng_seed: u64,
) -> Result<BeatCube<T>> {
    errors.validate()?;
    let k = chirp.wavenumber_axis();
    let cube = simulate_on_axis(scene, aperture, &k, errors, rng_seed, true)?;
    Ok(BeatCube { chirp: Some(*chirp), ..cube })
}

/// Core forward model on an explicit wavenumber axis. `path_loss` selects
/// between the physical 1/R^2 amplitude and the unit-amplitude model used by
/// adjoint checks.
pub fn simulate_on_axis<T: Scalar>(
    scene: &Scene<T>,
    aperture: &Aperture<T>,
    k: &UniformAxis<T>,
    errors: &CaptureErrors<T>,
    rng_seed: u64,
    path_loss: bool,
) -> Result<BeatCube<T>> {
    errors.validate()?;
    let nk = k.len;
    let n_elem = aperture.num_elements();
    let k_vals = k.values();
    let two = T::from_f64_lossy(2.0);

    let mut data = vec![Complex::new(T::zero(), T::zero()); n_elem * nk];
    let failed = std::sync::atomic::AtomicBool::new(false);
    data.par_chunks_mut(nk).enumerate().for_each(|(e, row)| {
        let pos = aperture.element_position(e);
        for sc in &scene.scatterers {
            let r = distance(&pos, &sc.position);
            if r == T::zero() {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
                return;
            }
            let amp = if path_loss { sc.sigma / (r * r) } else { sc.sigma };
            let r_eff = r + errors.range_bias;
            for (j, &kj) in k_vals.iter().enumerate() {
                let phase = two * kj * r_eff + errors.phase_offset;
                row[j] += Complex::from_polar(amp, phase);
            }
        }
        if errors.noise_sigma > T::zero() {
            let mut rng = element_rng(rng_seed, e);
            let scale = errors.noise_sigma / two.sqrt();
            for v in row.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *v += Complex::new(scale * T::from_f64_lossy(re), scale * T::from_f64_lossy(im));
            }
        }
    });
    if failed.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::ZeroRange);
    }

    let mut shape = aperture.grid_shape();
    shape.push(nk);
    let samples = ArrayD::from_shape_vec(shape, data).unwrap();
    BeatCube::new(samples, aperture.clone(), *k, None)
}

fn element_rng(seed: u64, element: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (element as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Simulates both radars of a dual-radar rig over a rectilinear aperture.
/// Radar 2's element positions are radar 1's shifted by `layout.delta_x`
/// along x; the cubes are otherwise independent.
#[allow(clippy::too_many_arguments)]
pub fn simulate_dual<T: Scalar>(
    scene: &Scene<T>,
    aperture: &Aperture<T>,
    chirp1: &ChirpConfig<T>,
    chirp2: &ChirpConfig<T>,
    layout: &DualRadarLayout<T>,
    errors1: &CaptureErrors<T>,
    errors2: &CaptureErrors<T>,
    rng_seed: u64,
) -> Result<(BeatCube<T>, BeatCube<T>)> {
    if aperture.geometry() != crate::aperture::Geometry::Rectilinear {
        return Err(Error::GeometryMismatch {
            algorithm: "simulate_dual",
            found: aperture.geometry().name(),
        });
    }
    let cube1 = simulate_beat(scene, aperture, chirp1, errors1, rng_seed)?;
    let shifted = aperture.shifted_x(layout.delta_x)?;
    let cube2 = simulate_beat(scene, &shifted, chirp2, errors2, rng_seed)?;
    Ok((cube1, cube2))
}

/// Merges a low-band and a high-band capture of the same aperture onto one
/// uniform wavenumber axis with the high-band spacing, spanning
/// `min(k_lo)..max(k_hi)`. In-band bins are filled by linear interpolation
/// from the source cube (the high band wins where the bands overlap); the
/// gap between the bands is zero-filled.
pub fn merge_dual_band<T: Scalar>(cube_lo: &BeatCube<T>, cube_hi: &BeatCube<T>) -> Result<BeatCube<T>> {
    if cube_lo.aperture.grid_shape() != cube_hi.aperture.grid_shape() {
        return Err(Error::DimensionMismatch(
            "dual-band cubes must share the aperture element grid".into(),
        ));
    }
    let k_lo = cube_lo.k;
    let k_hi = cube_hi.k;
    if k_lo.start > k_hi.start {
        return Err(Error::InvalidAxis(
            "low-band axis must start below the high-band axis".into(),
        ));
    }
    let dk = k_hi.step;
    let span = k_hi.end() - k_lo.start;
    let len = (span / dk).round().to_usize().unwrap() + 1;
    let k_out = UniformAxis::new(k_lo.start, dk, len)?;

    let n_elem: usize = cube_lo.aperture.num_elements();
    let nk_lo = k_lo.len;
    let nk_hi = k_hi.len;
    let lo = cube_lo.samples.as_standard_layout();
    let hi = cube_hi.samples.as_standard_layout();
    let lo_s = lo.as_slice().unwrap();
    let hi_s = hi.as_slice().unwrap();

    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; n_elem * len];
    for e in 0..n_elem {
        let row = &mut out[e * len..(e + 1) * len];
        for (t, slot) in row.iter_mut().enumerate() {
            let kt = k_out.value(t);
            // high band wins in any overlap
            if kt >= k_hi.start && kt <= k_hi.end() {
                *slot = interp_axis(&k_hi, &hi_s[e * nk_hi..(e + 1) * nk_hi], kt);
            } else if kt >= k_lo.start && kt <= k_lo.end() {
                *slot = interp_axis(&k_lo, &lo_s[e * nk_lo..(e + 1) * nk_lo], kt);
            }
        }
    }
    let mut shape = cube_hi.aperture.grid_shape();
    shape.push(len);
    BeatCube::new(
        ArrayD::from_shape_vec(shape, out).unwrap(),
        cube_hi.aperture.clone(),
        k_out,
        None,
    )
}

fn interp_axis<T: Scalar>(axis: &UniformAxis<T>, row: &[T2<T>], at: T) -> T2<T> {
    let pos = (at - axis.start) / axis.step;
    let i0 = pos.floor().to_usize().unwrap_or(0).min(axis.len - 1);
    if i0 + 1 >= axis.len {
        return row[axis.len - 1];
    }
    let frac = pos - T::from_usize(i0).unwrap();
    row[i0] * Complex::new(T::one() - frac, T::zero()) + row[i0 + 1] * Complex::new(frac, T::zero())
}

type T2<T> = Complex<T>;

/// Undoes a constant phase offset and range bias: every sample is multiplied
/// by `exp(-j*phase_offset) * exp(-j*2*k*range_bias)`. Not idempotent:
/// applying the same calibration twice doubles the correction.
pub fn apply_calibration<T: Scalar>(cube: &BeatCube<T>, cal: &CalibrationResult<T>) -> BeatCube<T> {
    let two = T::from_f64_lossy(2.0);
    let nk = cube.k.len;
    let k_vals = cube.k.values();
    let phases: Vec<Complex<T>> = k_vals
        .iter()
        .map(|&k| Complex::from_polar(T::one(), -(cal.phase_offset + two * k * cal.range_bias)))
        .collect();
    let mut samples = cube.samples.clone();
    for (i, v) in samples.iter_mut().enumerate() {
        *v = *v * phases[i % nk];
    }
    BeatCube { samples, ..cube.clone() }
}

/// Fits `(phase_offset, range_bias)` from a single-element capture of a
/// dominant reflector at known `true_range`, by least squares on the
/// unwrapped phase: `phase(k) ~ 2k*(true_range + bias) + offset`.
pub fn calibrate<T: Scalar>(measured: &BeatCube<T>, true_range: T) -> Result<CalibrationResult<T>> {
    if measured.aperture.num_elements() != 1 {
        return Err(Error::Calibration(
            "calibration expects a single-element capture".into(),
        ));
    }
    let row: Vec<Complex<T>> = measured.samples.iter().cloned().collect();
    if row.len() < 2 {
        return Err(Error::Calibration("need at least two wavenumber samples".into()));
    }
    let phase = unwrap_phase(&row);
    let k_vals = measured.k.values();

    // least squares line phase = a*k + b
    let n = T::from_usize(k_vals.len()).unwrap();
    let mean_k = k_vals.iter().cloned().sum::<T>() / n;
    let mean_p = phase.iter().cloned().sum::<T>() / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&k, &p) in k_vals.iter().zip(&phase) {
        sxx += (k - mean_k) * (k - mean_k);
        sxy += (k - mean_k) * (p - mean_p);
    }
    let slope = sxy / sxx;
    let intercept = mean_p - slope * mean_k;

    let two = T::from_f64_lossy(2.0);
    let fitted_range = slope / two;
    if fitted_range <= T::zero() {
        return Err(Error::Calibration(format!(
            "unwrapped phase slope implies non-positive range ({})",
            fitted_range
        )));
    }
    Ok(CalibrationResult {
        phase_offset: wrap_pi(intercept),
        range_bias: fitted_range - true_range,
    })
}

fn unwrap_phase<T: Scalar>(row: &[Complex<T>]) -> Vec<T> {
    let tau = T::TAU();
    let pi = T::PI();
    let mut out = Vec::with_capacity(row.len());
    let mut prev = row[0].arg();
    let mut offset = T::zero();
    out.push(prev);
    for v in &row[1..] {
        let raw = v.arg();
        let mut d = raw - prev;
        while d > pi {
            d -= tau;
            offset -= tau;
        }
        while d <= -pi {
            d += tau;
            offset += tau;
        }
        out.push(raw + offset);
        prev = raw;
    }
    out
}

fn wrap_pi<T: Scalar>(phase: T) -> T {
    let tau = T::TAU();
    let pi = T::PI();
    let mut p = phase % tau;
    if p > pi {
        p -= tau;
    } else if p <= -pi {
        p += tau;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn chirp(nk: usize) -> ChirpConfig<f64> {
        ChirpConfig::new(77e9, 4e9 / 40e-6, 40e-6, 5e6, nk).unwrap()
    }

    fn single_element() -> Aperture<f64> {
        Aperture::linear(UniformAxis::new(0.0, 1.0, 1).unwrap(), 0.0).unwrap()
    }

    #[test]
    fn single_scatterer_amplitude_and_phase() {
        let r0 = 0.5;
        let scene = Scene::single([0.0, 0.0, r0], 1.0).unwrap();
        let cube = simulate_beat(&scene, &single_element(), &chirp(32), &CaptureErrors::none(), 0).unwrap();
        let k = cube.k.values();
        for (j, v) in cube.samples.iter().enumerate() {
            assert_relative_eq!(v.norm(), 1.0 / (r0 * r0), max_relative = 1e-12);
            let expect = wrap_pi((2.0 * k[j] * r0) % std::f64::consts::TAU);
            let got = v.arg();
            let mut d = (got - expect).abs() % std::f64::consts::TAU;
            if d > std::f64::consts::PI {
                d = std::f64::consts::TAU - d;
            }
            assert!(d < 1e-6, "bin {j}: phase {got} vs {expect}");
        }
    }

    #[test]
    fn superposition_and_scaling() {
        let ap = Aperture::linear(UniformAxis::new(-0.02, 0.01, 5).unwrap(), 0.0).unwrap();
        let a = Scene::single([0.0, 0.01, 0.4], 1.0).unwrap();
        let b = Scene::single([0.0, -0.03, 0.55], 0.7).unwrap();
        let both = Scene::new(vec![a.scatterers[0], b.scatterers[0]]).unwrap();
        let e = CaptureErrors::none();
        let ca = simulate_beat(&a, &ap, &chirp(16), &e, 0).unwrap();
        let cb = simulate_beat(&b, &ap, &chirp(16), &e, 0).unwrap();
        let cab = simulate_beat(&both, &ap, &chirp(16), &e, 0).unwrap();
        for ((x, y), z) in ca.samples.iter().zip(cb.samples.iter()).zip(cab.samples.iter()) {
            assert!((x + y - z).norm() < 1e-12);
        }
        let mut scaled = both.clone();
        for s in &mut scaled.scatterers {
            s.sigma = s.sigma * 3.0;
        }
        let cs = simulate_beat(&scaled, &ap, &chirp(16), &e, 0).unwrap();
        for (x, z) in cab.samples.iter().zip(cs.samples.iter()) {
            assert!((x * 3.0 - z).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_slope_equals_twice_range() {
        let r0 = 0.437;
        let scene = Scene::single([0.0, 0.0, r0], 1.0).unwrap();
        let cube = simulate_beat(&scene, &single_element(), &chirp(64), &CaptureErrors::none(), 0).unwrap();
        let row: Vec<Complex<f64>> = cube.samples.iter().cloned().collect();
        let phase = unwrap_phase(&row);
        let k = cube.k.values();
        let slope = (phase[63] - phase[0]) / (k[63] - k[0]);
        assert_relative_eq!(slope, 2.0 * r0, max_relative = 1e-9);
    }

    #[test]
    fn determinism_per_seed() {
        let ap = Aperture::linear(UniformAxis::new(-0.02, 0.01, 5).unwrap(), 0.0).unwrap();
        let scene = Scene::single([0.0, 0.0, 0.4], 1.0).unwrap();
        let e = CaptureErrors { noise_sigma: 0.5, ..CaptureErrors::none() };
        let a = simulate_beat(&scene, &ap, &chirp(16), &e, 7).unwrap();
        let b = simulate_beat(&scene, &ap, &chirp(16), &e, 7).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = simulate_beat(&scene, &ap, &chirp(16), &e, 8).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn zero_range_fails() {
        let scene = Scene::single([0.0, 0.0, 0.0], 1.0).unwrap();
        assert!(matches!(
            simulate_beat(&scene, &single_element(), &chirp(8), &CaptureErrors::none(), 0),
            Err(Error::ZeroRange)
        ));
    }

    fn rect_aperture() -> Aperture<f64> {
        Aperture::rectilinear(
            UniformAxis::new(-0.02, 0.01, 4).unwrap(),
            UniformAxis::new(-0.02, 0.01, 4).unwrap(),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn dual_colocated_identical() {
        let scene = Scene::single([0.0, 0.0, 0.4], 1.0).unwrap();
        let e = CaptureErrors { noise_sigma: 0.1, ..CaptureErrors::none() };
        let (c1, c2) = simulate_dual(
            &scene,
            &rect_aperture(),
            &chirp(16),
            &chirp(16),
            &DualRadarLayout { delta_x: 0.0 },
            &e,
            &e,
            3,
        )
        .unwrap();
        assert_eq!(c1.samples, c2.samples);
    }

    #[test]
    fn dual_shift_matches_direct_ranges() {
        let d = 0.05;
        let scene = Scene::single([0.0, 0.0, 0.4], 1.0).unwrap();
        let (_, c2) = simulate_dual(
            &scene,
            &rect_aperture(),
            &chirp(8),
            &chirp(8),
            &DualRadarLayout { delta_x: d },
            &CaptureErrors::none(),
            &CaptureErrors::none(),
            0,
        )
        .unwrap();
        let k = c2.k.values();
        // element (0,0) of radar 2 sits at x = -0.02 + d
        let px = -0.02 + d;
        let r = (px * px + 0.02f64.powi(2) + 0.4 * 0.4).sqrt();
        let v = c2.samples[[0usize, 0, 0]];
        assert_relative_eq!(v.norm(), 1.0 / (r * r), max_relative = 1e-12);
        let mut d_ph = (v.arg() - wrap_pi((2.0 * k[0] * r) % std::f64::consts::TAU)).abs();
        d_ph = d_ph % std::f64::consts::TAU;
        if d_ph > std::f64::consts::PI {
            d_ph = std::f64::consts::TAU - d_ph;
        }
        assert!(d_ph < 1e-6);
    }

    #[test]
    fn distinct_bands_keep_their_axes() {
        let c60 = ChirpConfig::new(60e9, 4e9 / 40e-6, 40e-6, 5e6, 16).unwrap();
        let c77 = ChirpConfig::new(77e9, 4e9 / 40e-6, 40e-6, 5e6, 24).unwrap();
        let scene = Scene::single([0.0, 0.0, 0.4], 1.0).unwrap();
        let (a, b) = simulate_dual(
            &scene,
            &rect_aperture(),
            &c60,
            &c77,
            &DualRadarLayout { delta_x: 0.0 },
            &CaptureErrors::none(),
            &CaptureErrors::none(),
            0,
        )
        .unwrap();
        assert_eq!(a.k.len, 16);
        assert_eq!(b.k.len, 24);
        assert!(a.k.end() < b.k.start);
    }

    #[test]
    fn merge_identical_bands_is_identity() {
        let scene = Scene::single([0.0, 0.0, 0.4], 1.0).unwrap();
        let cube = simulate_beat(&scene, &rect_aperture(), &chirp(16), &CaptureErrors::none(), 0).unwrap();
        let merged = merge_dual_band(&cube, &cube).unwrap();
        assert_eq!(merged.k.len, 16);
        for (a, b) in merged.samples.iter().zip(cube.samples.iter()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn merge_zero_fills_band_gap() {
        let c60 = ChirpConfig::new(60e9, 4e9 / 40e-6, 40e-6, 5e6, 16).unwrap();
        let c77 = ChirpConfig::new(77e9, 4e9 / 40e-6, 40e-6, 5e6, 16).unwrap();
        let scene = Scene::single([0.0, 0.0, 0.4], 1.0).unwrap();
        let (a, b) = simulate_dual(
            &scene,
            &rect_aperture(),
            &c60,
            &c77,
            &DualRadarLayout { delta_x: 0.0 },
            &CaptureErrors::none(),
            &CaptureErrors::none(),
            0,
        )
        .unwrap();
        let merged = merge_dual_band(&a, &b).unwrap();
        // expected length from the chosen axis
        let expect_len = ((b.k.end() - a.k.start) / b.k.step).round() as usize + 1;
        assert_eq!(merged.k.len, expect_len);
        let mut gap_bins = 0;
        for t in 0..merged.k.len {
            let kt = merged.k.value(t);
            if kt > a.k.end() && kt < b.k.start {
                gap_bins += 1;
                let v = merged.samples[[0usize, 0, t]];
                assert_eq!(v, Complex::new(0.0, 0.0));
            }
        }
        assert!(gap_bins > 0);
    }

    #[test]
    fn calibration_round_trip_noiseless() {
        let errs = CaptureErrors { phase_offset: 0.3, range_bias: 1e-3, noise_sigma: 0.0 };
        let scene = Scene::single([0.0, 0.0, 0.3], 1.0).unwrap();
        let cube = simulate_beat(&scene, &single_element(), &chirp(64), &errs, 0).unwrap();
        let cal = calibrate(&cube, 0.3).unwrap();
        assert!((cal.phase_offset - 0.3).abs() < 1e-6, "{}", cal.phase_offset);
        assert!((cal.range_bias - 1e-3).abs() < 1e-6, "{}", cal.range_bias);

        // applying the matching calibration reproduces the error-free capture
        let clean = simulate_beat(&scene, &single_element(), &chirp(64), &CaptureErrors::none(), 0).unwrap();
        let fixed = apply_calibration(
            &cube,
            &CalibrationResult { phase_offset: 0.3, range_bias: 1e-3 },
        );
        for (a, b) in fixed.samples.iter().zip(clean.samples.iter()) {
            assert!((a - b).norm() / b.norm() < 1e-9);
        }
    }

    #[test]
    fn zero_errors_calibrate_to_zero() {
        let scene = Scene::single([0.0, 0.0, 0.3], 1.0).unwrap();
        let cube = simulate_beat(&scene, &single_element(), &chirp(64), &CaptureErrors::none(), 0).unwrap();
        let cal = calibrate(&cube, 0.3).unwrap();
        assert!(cal.phase_offset.abs() < 1e-9);
        assert!(cal.range_bias.abs() < 1e-9);
    }

    #[test]
    fn identity_calibration_is_identity() {
        let scene = Scene::single([0.0, 0.0, 0.3], 1.0).unwrap();
        let cube = simulate_beat(&scene, &single_element(), &chirp(16), &CaptureErrors::none(), 0).unwrap();
        let same = apply_calibration(&cube, &CalibrationResult { phase_offset: 0.0, range_bias: 0.0 });
        assert_eq!(cube.samples, same.samples);
    }

    #[test]
    fn double_application_is_not_identity() {
        let errs = CaptureErrors { phase_offset: 0.3, range_bias: 1e-3, noise_sigma: 0.0 };
        let scene = Scene::single([0.0, 0.0, 0.3], 1.0).unwrap();
        let cube = simulate_beat(&scene, &single_element(), &chirp(16), &errs, 0).unwrap();
        let cal = CalibrationResult { phase_offset: 0.3, range_bias: 1e-3 };
        let once = apply_calibration(&cube, &cal);
        let twice = apply_calibration(&once, &cal);
        assert!(once.samples.iter().zip(twice.samples.iter()).any(|(a, b)| (a - b).norm() > 1e-6));
    }
}
