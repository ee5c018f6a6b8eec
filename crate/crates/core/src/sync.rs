//! Motion-synchronized dual-radar triggering.
//!
//! Models the scan-axis trigger chain: a trapezoidal motion profile moves the
//! platform, the stepper controller emits one pulse per `mm_per_pulse` of
//! travel, and a pulse-counting synchronizer fires a hardware trigger at each
//! radar the first time its accumulated position reaches the next breakpoint.
//! Trigger positions therefore depend only on pulse *counts*, never on
//! timing, which is what makes the sampled grid uniform regardless of the
//! acceleration profile.
//!
//! All positions in this module are in millimeters and times in seconds,
//! matching the actuator conventions.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Stepper drive parameters of one actuator axis.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveConfig<T> {
    /// Linear travel per motor revolution (mm/rev), the actuator DIST value.
    pub mm_per_rev: T,
    /// Driver pulses per revolution.
    pub pulses_per_rev: u32,
    /// Axis label, informational only.
    pub axis: String,
}

impl<T: Scalar> DriveConfig<T> {
    pub fn new(mm_per_rev: T, pulses_per_rev: u32, axis: impl Into<String>) -> Result<Self> {
        if !(mm_per_rev > T::zero()) {
            return Err(Error::InvalidDrive("mm per revolution must be positive".into()));
        }
        if pulses_per_rev == 0 {
            return Err(Error::InvalidDrive("pulses per revolution must be at least 1".into()));
        }
        Ok(Self { mm_per_rev, pulses_per_rev, axis: axis.into() })
    }

    /// Linear travel per pulse (mm), the exact quotient `M/N`.
    pub fn mm_per_pulse(&self) -> T {
        self.mm_per_rev / T::from_u32(self.pulses_per_rev).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// Trapezoidal motion profile with symmetric acceleration and deceleration.
/// Degenerates to a triangular profile when `v_max` is unreachable over
/// `travel`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionProfile<T> {
    /// Sweep length (mm).
    pub travel: T,
    /// Cruise speed (mm/s).
    pub v_max: T,
    /// Acceleration magnitude (mm/s^2).
    pub accel: T,
    pub direction: Direction,
}

impl<T: Scalar> MotionProfile<T> {
    pub fn new(travel: T, v_max: T, accel: T, direction: Direction) -> Result<Self> {
        if !(travel > T::zero()) || !(v_max > T::zero()) || !(accel > T::zero()) {
            return Err(Error::InvalidMotion(
                "travel, v_max and accel must all be positive".into(),
            ));
        }
        Ok(Self { travel, v_max, accel, direction })
    }

    /// Time at which the distance traveled first reaches `x` (closed form).
    fn time_at(&self, x: T) -> T {
        let two = T::from_f64_lossy(2.0);
        let ramp = self.v_max * self.v_max / (two * self.accel);
        if two * ramp >= self.travel {
            // triangular: accelerate to the midpoint, decelerate after
            let half = self.travel / two;
            let total = two * (two * half / self.accel).sqrt();
            if x <= half {
                (two * x / self.accel).sqrt()
            } else {
                total - (two * (self.travel - x) / self.accel).sqrt()
            }
        } else {
            let t_ramp = self.v_max / self.accel;
            if x <= ramp {
                (two * x / self.accel).sqrt()
            } else if x <= self.travel - ramp {
                t_ramp + (x - ramp) / self.v_max
            } else {
                let total = two * t_ramp + (self.travel - two * ramp) / self.v_max;
                total - (two * (self.travel - x) / self.accel).sqrt()
            }
        }
    }
}

/// Breakpoint schedule for one sweep of the dual-radar rig.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerPlan<T> {
    /// Platform offset before the first sample (mm).
    pub x_offset: T,
    /// Breakpoint spacing (mm).
    pub step: T,
    /// Samples per sweep.
    pub count: usize,
    /// Horizontal separation of radar 2 from radar 1 (mm). Radar 2 reaches a
    /// breakpoint when the platform coordinate equals breakpoint + delta_x.
    pub delta_x: T,
}

impl<T: Scalar> TriggerPlan<T> {
    pub fn new(x_offset: T, step: T, count: usize, delta_x: T) -> Result<Self> {
        if !(step > T::zero()) {
            return Err(Error::InvalidPlan("breakpoint step must be positive".into()));
        }
        if count == 0 {
            return Err(Error::InvalidPlan("at least one breakpoint is required".into()));
        }
        if !(x_offset >= T::zero()) {
            return Err(Error::InvalidPlan("x offset must be non-negative".into()));
        }
        Ok(Self { x_offset, step, count, delta_x })
    }
}

/// Stepper pulse stream of one sweep: pulse `i` (1-based) is emitted when the
/// distance traveled first crosses `i * mm_per_pulse`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseStream<T> {
    /// Emission time of each pulse, strictly increasing (s).
    pub times: Vec<T>,
    pub direction: Direction,
    pub mm_per_pulse: T,
    /// Platform coordinate when counting starts, in whole pulses: 0 for a
    /// forward sweep, the last lattice point below `travel` for a reverse
    /// sweep (the platform parked where the forward sweep ended).
    pub start_pulse: i64,
    /// Set when the travel is too short to emit a single pulse.
    pub warning: Option<String>,
}

impl<T: Scalar> PulseStream<T> {
    pub fn num_pulses(&self) -> usize {
        self.times.len()
    }
}

/// Simulates the controller's pulse output over one sweep.
pub fn generate_pulse_stream<T: Scalar>(
    profile: &MotionProfile<T>,
    drive: &DriveConfig<T>,
) -> Result<PulseStream<T>> {
    MotionProfile::new(profile.travel, profile.v_max, profile.accel, profile.direction)?;
    let m = drive.mm_per_pulse();
    // floor with a relative guard so exact multiples are not lost to rounding
    let quotient = profile.travel / m;
    let n_pulses = (quotient + quotient * T::from_f64_lossy(1e-12) + T::from_f64_lossy(1e-9))
        .floor()
        .to_i64()
        .ok_or_else(|| Error::InvalidMotion("travel/mm_per_pulse overflows".into()))?;

    let mut times = Vec::new();
    for i in 1..=n_pulses {
        times.push(profile.time_at(T::from_i64(i).unwrap() * m));
    }
    let warning = if n_pulses == 0 {
        Some(format!(
            "travel {} mm is below one pulse ({} mm); no pulses emitted",
            profile.travel, m
        ))
    } else {
        None
    };
    let start_pulse = match profile.direction {
        Direction::Forward => 0,
        Direction::Reverse => n_pulses,
    };
    Ok(PulseStream { times, direction: profile.direction, mm_per_pulse: m, start_pulse, warning })
}

/// One hardware trigger event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerEvent<T> {
    /// Pulse count at which the trigger fired (0 = before the first pulse).
    pub pulse_index: i64,
    /// Recorded radar position (mm), on the physical x grid for both radars.
    pub position: T,
    /// Trigger time (s).
    pub time: T,
}

/// Trigger events of both radars, ordered by breakpoint index.
#[derive(Debug, Clone, PartialEq)]
pub struct TriggerRecord<T> {
    pub radar1: Vec<TriggerEvent<T>>,
    pub radar2: Vec<TriggerEvent<T>>,
}

/// Runs the pulse-counting synchronizer over one sweep.
///
/// All arithmetic is done in whole-pulse units and converted to millimeters
/// once at the end, so a radar separation that is an exact multiple of the
/// pulse quantum yields bit-identical positions for both radars.
pub fn run_synchronizer<T: Scalar>(
    pulses: &PulseStream<T>,
    plan: &TriggerPlan<T>,
    drive: &DriveConfig<T>,
) -> Result<TriggerRecord<T>> {
    TriggerPlan::new(plan.x_offset, plan.step, plan.count, plan.delta_x)?;
    let m = drive.mm_per_pulse();
    if ((m - pulses.mm_per_pulse) / m).abs() > T::from_f64_lossy(1e-12) {
        return Err(Error::InvalidDrive(
            "drive does not match the pulse stream's mm per pulse".into(),
        ));
    }

    // radar separation in pulse units, snapped when it is a whole number
    let q_sep = snap_to_integer(plan.delta_x / m);
    let radar1 = fire_all(pulses, plan, T::zero(), m)?;
    let radar2 = fire_all(pulses, plan, q_sep, m)?;
    Ok(TriggerRecord { radar1, radar2 })
}

/// Fires every reachable breakpoint for one radar whose platform coordinate
/// leads the recorded position by `q_sep` pulses.
fn fire_all<T: Scalar>(
    pulses: &PulseStream<T>,
    plan: &TriggerPlan<T>,
    q_sep: T,
    m: T,
) -> Result<Vec<TriggerEvent<T>>> {
    let n_pulses = pulses.num_pulses() as i64;
    let start = T::from_i64(pulses.start_pulse).unwrap();
    let eps = T::from_f64_lossy(1e-9);
    let mut events = Vec::with_capacity(plan.count);
    for n in 0..plan.count {
        // breakpoint in pulse units
        let q_b = (plan.x_offset + T::from_usize(n).unwrap() * plan.step) / m;
        let threshold = match pulses.direction {
            // first pulse with position >= breakpoint + delta_x
            Direction::Forward => q_b + q_sep - eps * (T::one() + q_b.abs()),
            // first pulse with position <= breakpoint + delta_x
            Direction::Reverse => start - q_b - q_sep - eps * (T::one() + q_b.abs()),
        };
        let c = threshold.ceil().to_i64().unwrap_or(i64::MAX).max(0);
        if c > n_pulses {
            continue; // breakpoint beyond this sweep's travel
        }
        let pos_pulses = match pulses.direction {
            Direction::Forward => T::from_i64(c).unwrap() - q_sep,
            Direction::Reverse => start - T::from_i64(c).unwrap() - q_sep,
        };
        let time = if c == 0 { T::zero() } else { pulses.times[(c - 1) as usize] };
        events.push(TriggerEvent { pulse_index: c, position: pos_pulses * m, time });
    }
    Ok(events)
}

fn snap_to_integer<T: Scalar>(q: T) -> T {
    let r = q.round();
    if (q - r).abs() < T::from_f64_lossy(1e-9) * (T::one() + q.abs()) {
        r
    } else {
        q
    }
}

/// Uniform-grid verification report for one sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridReport<T> {
    /// Worst |recorded position - ideal breakpoint| over both radars (mm).
    pub max_position_error: T,
    /// Worst |radar 1 - radar 2| position difference at the same breakpoint
    /// index (mm).
    pub cross_alignment_error: T,
    pub radar1_triggers: usize,
    pub radar2_triggers: usize,
    /// True when both radars fired at every breakpoint and every error is
    /// within one pulse quantum.
    pub uniform: bool,
}

/// Checks a trigger record against the ideal uniform grid
/// `x_offset + n*step`.
pub fn verify_uniform_grid<T: Scalar>(
    record: &TriggerRecord<T>,
    plan: &TriggerPlan<T>,
    drive: &DriveConfig<T>,
) -> GridReport<T> {
    let m = drive.mm_per_pulse();
    let ideal = |n: usize| plan.x_offset + T::from_usize(n).unwrap() * plan.step;

    let mut max_err = T::zero();
    for radar in [&record.radar1, &record.radar2] {
        for (n, ev) in radar.iter().enumerate() {
            max_err = max_err.max((ev.position - ideal(n)).abs());
        }
    }
    let mut cross = T::zero();
    for (a, b) in record.radar1.iter().zip(&record.radar2) {
        cross = cross.max((a.position - b.position).abs());
    }
    let complete = record.radar1.len() == plan.count && record.radar2.len() == plan.count;
    let tol = m * (T::one() + T::from_f64_lossy(1e-9));
    GridReport {
        max_position_error: max_err,
        cross_alignment_error: cross,
        radar1_triggers: record.radar1.len(),
        radar2_triggers: record.radar2.len(),
        uniform: complete && !record.radar1.is_empty() && max_err <= tol && cross <= tol,
    }
}
