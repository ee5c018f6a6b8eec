//! Point-scatterer scenes and scene/geometry sanity checks.

use crate::aperture::Aperture;
use crate::chirp::ChirpConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An ideal point scatterer with real, non-negative reflectivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer<T> {
    /// Position (x, y, z) in meters.
    pub position: [T; 3],
    /// Reflectivity sigma.
    pub sigma: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene<T> {
    pub scatterers: Vec<Scatterer<T>>,
}

impl<T: Scalar> Scene<T> {
    pub fn new(scatterers: Vec<Scatterer<T>>) -> Result<Self> {
        if scatterers.is_empty() {
            return Err(Error::InvalidScene("scene must contain at least one scatterer".into()));
        }
        for s in &scatterers {
            if s.position.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidScene("scatterer position must be finite".into()));
            }
            if !(s.sigma >= T::zero()) || !s.sigma.is_finite() {
                return Err(Error::InvalidScene("reflectivity must be finite and >= 0".into()));
            }
        }
        Ok(Self { scatterers })
    }

    pub fn single(position: [T; 3], sigma: T) -> Result<Self> {
        Self::new(vec![Scatterer { position, sigma }])
    }
}

/// Non-fatal issues found when checking a scene against a chirp and aperture.
#[derive(Debug, Clone, PartialEq)]
pub enum SceneWarning {
    /// A scatterer's distance from some element exceeds the maximum
    /// unambiguous range.
    ExceedsMaxRange {
        scatterer: usize,
        range: f64,
        max_range: f64,
    },
    /// A scatterer lies off the plane assumed by this aperture geometry
    /// (x != 0 for linear, y != 0 for circular).
    OutOfPlane { scatterer: usize, coordinate: char },
}

impl std::fmt::Display for SceneWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SceneWarning::ExceedsMaxRange { scatterer, range, max_range } => write!(
                f,
                "scatterer {scatterer} exceeds maximum range ({range:.3} m > {max_range:.3} m)"
            ),
            SceneWarning::OutOfPlane { scatterer, coordinate } => write!(
                f,
                "scatterer {scatterer} violates the imaging plane ({coordinate} != 0)"
            ),
        }
    }
}

/// Checks every scatterer against the unambiguous range of the chirp and the
/// plane assumptions of the aperture geometry. Returns warnings only.
pub fn validate_scene<T: Scalar>(
    scene: &Scene<T>,
    chirp: &ChirpConfig<T>,
    aperture: &Aperture<T>,
) -> Vec<SceneWarning> {
    let mut warnings = Vec::new();
    let r_max = chirp.max_range().ok();
    for (i, sc) in scene.scatterers.iter().enumerate() {
        if let Some(r_max) = r_max {
            let mut worst = T::zero();
            for e in aperture.element_positions() {
                let r = distance(&e, &sc.position);
                if r > worst {
                    worst = r;
                }
            }
            if worst > r_max {
                warnings.push(SceneWarning::ExceedsMaxRange {
                    scatterer: i,
                    range: worst.to_f64_lossy(),
                    max_range: r_max.to_f64_lossy(),
                });
            }
        }
        match aperture {
            Aperture::Linear { .. } if sc.position[0] != T::zero() => {
                warnings.push(SceneWarning::OutOfPlane { scatterer: i, coordinate: 'x' });
            }
            Aperture::Circular { .. } if sc.position[1] != T::zero() => {
                warnings.push(SceneWarning::OutOfPlane { scatterer: i, coordinate: 'y' });
            }
            _ => {}
        }
    }
    warnings
}

pub(crate) fn distance<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> T {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}
