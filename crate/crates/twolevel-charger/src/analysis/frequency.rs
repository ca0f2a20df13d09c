//! Frequency-domain evaluation: Bode data and crossover location.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::transfer::RationalTransferFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrequencyPoint {
    pub f_hz: f64,
    pub mag_db: f64,
    /// Unwrapped phase, degrees.
    pub phase_deg: f64,
}

/// Log-spaced magnitude/phase samples of a transfer function.
#[derive(Debug, Clone, Serialize)]
pub struct FrequencyResponse {
    pub points: Vec<FrequencyPoint>,
}

/// Evaluates `G(j·2πf)` on a log-spaced grid. Phase is unwrapped so that
/// consecutive samples never jump by more than 180°.
pub fn frequency_response(
    tf: &RationalTransferFunction,
    f_min: f64,
    f_max: f64,
    points_per_decade: usize,
) -> Result<FrequencyResponse> {
    if !(f_min > 0.0) || !(f_max > f_min) {
        return Err(Error::Domain(format!(
            "frequency range must satisfy 0 < f_min < f_max, got ({f_min}, {f_max})"
        )));
    }
    if points_per_decade == 0 {
        return Err(Error::Domain("points_per_decade must be > 0".into()));
    }
    let decades = (f_max / f_min).log10();
    let n = ((decades * points_per_decade as f64).ceil() as usize).max(1) + 1;

    let mut points = Vec::with_capacity(n);
    let mut prev_raw = 0.0;
    let mut offset = 0.0;
    for i in 0..n {
        let f = f_min * (f_max / f_min).powf(i as f64 / (n - 1) as f64);
        let g = tf.evaluate(Complex64::new(0.0, 2.0 * std::f64::consts::PI * f));
        let mag_db = 20.0 * g.norm().log10();
        let raw = g.arg().to_degrees();
        if i > 0 {
            let mut delta = raw - prev_raw;
            while delta > 180.0 {
                delta -= 360.0;
                offset -= 360.0;
            }
            while delta < -180.0 {
                delta += 360.0;
                offset += 360.0;
            }
        }
        prev_raw = raw;
        points.push(FrequencyPoint {
            f_hz: f,
            mag_db,
            phase_deg: raw + offset,
        });
    }
    Ok(FrequencyResponse { points })
}

/// Unity-gain crossover of a sampled response.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Crossover {
    pub f_hz: f64,
    /// Set when the magnitude sits on 0 dB across the whole range (a pure
    /// unit gain): every frequency is a crossing, so `f_hz` is the range
    /// start.
    pub degenerate: bool,
}

/// Lowest frequency where the magnitude crosses 0 dB, located by log-linear
/// interpolation between the bracketing samples.
pub fn crossover_frequency(fr: &FrequencyResponse) -> Result<Crossover> {
    let pts = &fr.points;
    if pts.is_empty() {
        return Err(Error::NoCrossing);
    }
    if pts.iter().all(|p| p.mag_db.abs() < 1e-12) {
        return Ok(Crossover {
            f_hz: pts[0].f_hz,
            degenerate: true,
        });
    }
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.mag_db == 0.0 {
            return Ok(Crossover { f_hz: a.f_hz, degenerate: false });
        }
        if a.mag_db.signum() != b.mag_db.signum() {
            let t = a.mag_db / (a.mag_db - b.mag_db);
            let logf = a.f_hz.log10() + t * (b.f_hz.log10() - a.f_hz.log10());
            return Ok(Crossover { f_hz: 10f64.powf(logf), degenerate: false });
        }
    }
    if pts.last().unwrap().mag_db == 0.0 {
        return Ok(Crossover { f_hz: pts.last().unwrap().f_hz, degenerate: false });
    }
    Err(Error::NoCrossing)
}
