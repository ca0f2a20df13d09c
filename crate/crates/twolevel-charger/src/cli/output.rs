//! Serialization helpers: 9-significant-digit CSV and atomic file writes.

use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{FrequencyResponse, StepResponse, SurfaceGrid};
use crate::error::Result;
use crate::sim::{RippleReport, SettlingReport, Trace};

/// Nine significant digits, scientific notation. All CSV numbers go through
/// this so outputs are byte-stable.
pub fn sig9(x: f64) -> String {
    format!("{:.8e}", x)
}

/// Writes a file atomically: temp file in the same directory, then rename.
/// Readers never observe a partial file.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// The trace CSV schema. Fixed: regression suites pin these bytes.
pub const TRACE_CSV_HEADER: &str = "t,i_L,v_C,i_B,d,s_f,v_OB,i_B_ref";

pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::with_capacity(trace.samples.len() * 96 + 64);
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for s in &trace.samples {
        out.push_str(&sig9(s.t));
        for v in [s.i_l, s.v_c, s.i_b, s.d, s.s_f, s.v_ob, s.i_b_ref] {
            out.push(',');
            out.push_str(&sig9(v));
        }
        out.push('\n');
    }
    out
}

pub const BODE_CSV_HEADER: &str = "f_hz,mag_db,phase_deg";

pub fn bode_csv(fr: &FrequencyResponse) -> String {
    let mut out = String::new();
    out.push_str(BODE_CSV_HEADER);
    out.push('\n');
    for p in &fr.points {
        out.push_str(&format!(
            "{},{},{}\n",
            sig9(p.f_hz),
            sig9(p.mag_db),
            sig9(p.phase_deg)
        ));
    }
    out
}

pub const LOCUS_CSV_HEADER: &str = "k,re,im";

pub fn locus_csv(locus: &[(f64, Vec<Complex64>)]) -> String {
    let mut out = String::new();
    out.push_str(LOCUS_CSV_HEADER);
    out.push('\n');
    for (k, poles) in locus {
        for p in poles {
            out.push_str(&format!("{},{},{}\n", sig9(*k), sig9(p.re), sig9(p.im)));
        }
    }
    out
}

pub const STEP_CSV_HEADER: &str = "t,y";

pub fn step_csv(resp: &StepResponse) -> String {
    let mut out = String::new();
    out.push_str(STEP_CSV_HEADER);
    out.push('\n');
    for (t, y) in &resp.samples {
        out.push_str(&format!("{},{}\n", sig9(*t), sig9(*y)));
    }
    out
}

pub const SURFACE_CSV_HEADER: &str = "x,y,value";

pub fn surface_csv(grid: &SurfaceGrid) -> String {
    let mut out = String::new();
    out.push_str(SURFACE_CSV_HEADER);
    out.push('\n');
    for (i, &x) in grid.x.samples.iter().enumerate() {
        for (j, &y) in grid.y.samples.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                sig9(x),
                sig9(y),
                sig9(grid.value(i, j))
            ));
        }
    }
    out
}

/// Per-segment steady-window statistics for the metrics file.
#[derive(Debug, Clone, Serialize)]
pub struct WindowMetrics {
    pub t_start: f64,
    pub t_end: f64,
    pub i_b_ref: f64,
    pub i_b_mean: f64,
    pub i_l_mean: f64,
    pub v_c_mean: f64,
    pub d_mean: f64,
    /// Mean of `i_b_ref − i_b` over the window.
    pub error_mean: f64,
    /// Window means of the derived columns (charge/volt-second balance).
    pub i_c_mean: f64,
    pub v_l_mean: f64,
    pub ripple: Option<RippleReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventMetrics {
    pub event_t: f64,
    pub settling: SettlingReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metrics {
    pub windows: Vec<WindowMetrics>,
    pub events: Vec<EventMetrics>,
}

/// Segments the trace at every schedule event and reports, per segment, a
/// trailing steady window (the last 10 ms or half the segment, whichever is
/// shorter) plus the settling of the battery current after the event.
pub fn compute_metrics(trace: &Trace, event_times: &[f64]) -> Result<Metrics> {
    let mut events: Vec<f64> = event_times.to_vec();
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup();
    let mut boundaries = events.clone();
    boundaries.push(trace.end());

    let mut windows = Vec::new();
    let mut settlings = Vec::new();
    for w in boundaries.windows(2) {
        let (start, end) = (w[0], w[1]);
        let width = (end - start) / 2.0;
        let window_start = end - width.min(0.010);
        let ripple = measure_ripple_opt(trace, (window_start, end));
        windows.push(WindowMetrics {
            t_start: window_start,
            t_end: end,
            i_b_ref: trace.mean_over(window_start, end, |s| s.i_b_ref),
            i_b_mean: trace.mean_over(window_start, end, |s| s.i_b),
            i_l_mean: trace.mean_over(window_start, end, |s| s.i_l),
            v_c_mean: trace.mean_over(window_start, end, |s| s.v_c),
            d_mean: trace.mean_over(window_start, end, |s| s.d),
            error_mean: trace.mean_over(window_start, end, |s| s.i_b_ref - s.i_b),
            i_c_mean: trace.mean_over(window_start, end, |s| s.i_c),
            v_l_mean: trace.mean_over(window_start, end, |s| s.v_l),
            ripple,
        });
        let segment = trace.slice(start, end);
        if segment.samples.len() > 1 {
            settlings.push(EventMetrics {
                event_t: start,
                settling: crate::sim::settling_time(&segment, start, 0.02)?,
            });
        }
    }
    Ok(Metrics {
        windows,
        events: settlings,
    })
}

fn measure_ripple_opt(trace: &Trace, window: (f64, f64)) -> Option<RippleReport> {
    crate::sim::measure_ripple(trace, window).ok()
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail for plain values")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_is_nine_significant_digits() {
        assert_eq!(sig9(1.0), "1.00000000e0");
        assert_eq!(sig9(-0.125), "-1.25000000e-1");
        assert_eq!(sig9(27e3), "2.70000000e4");
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "first").unwrap();
        write_atomic(&path, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert!(!path.with_extension("tmp").exists());
    }
}
