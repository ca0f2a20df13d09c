//! Fixed-step time-domain simulation of the charger and trace metrics.
//!
//! The integrator is the classical four-stage Runge–Kutta rule with the
//! switch position (or duty, in averaged mode) held constant across each
//! step. In switched mode the step must divide the switching period so PWM
//! edges land on grid points; edge placement is then quantized to one step.
//! The controller and the PWM comparison are evaluated every step
//! (quasi-continuous control).
//!
//! With the reference design the fast mode sits near `4e6 rad/s`; the
//! default step `T_s/200 ≈ 185 ns` gives `h·|λ_max| ≈ 0.74`, well inside the
//! explicit-rule stability region. Scenario validation enforces
//! `h ≤ 2/|λ_max|` outright.

use serde::{Deserialize, Serialize};

use crate::control::{pi_step, pwm_compare, ModulatorConfig, PiGains, PiState};
use crate::error::{Error, Result};
use crate::model::{
    linearize, rhs_averaged, rhs_switched, BranchOutputs, ChargerParams, ConverterState,
    ExternalInputs, OperatingPoint, StateDerivative, SwitchState,
};

/// Which plant representation a run integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Switched,
    Averaged,
}

/// A simulation scenario: horizon, initial state, input schedules and mode.
///
/// Schedules are step functions given as `(time, value)` pairs; they must be
/// time-sorted and start at `t = 0`. `fixed_duty` bypasses the PI and runs
/// the plant open loop at a constant duty command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub duration: f64,
    pub h: f64,
    pub i_l0: f64,
    pub v_c0: f64,
    pub v_d: f64,
    pub ref_schedule: Vec<(f64, f64)>,
    pub v_ob_schedule: Vec<(f64, f64)>,
    pub mode: SimMode,
    pub fixed_duty: Option<f64>,
}

impl Scenario {
    pub fn validate(&self, params: &ChargerParams) -> Result<()> {
        if !(self.duration > 0.0) || !(self.h > 0.0) || self.duration < self.h {
            return Err(Error::Domain(format!(
                "scenario needs duration >= h > 0, got ({}, {})",
                self.duration, self.h
            )));
        }
        for v in [self.i_l0, self.v_c0, self.v_d] {
            if !v.is_finite() {
                return Err(Error::Domain("initial state and v_d must be finite".into()));
            }
        }
        for (name, sched) in [
            ("ref_schedule", &self.ref_schedule),
            ("v_ob_schedule", &self.v_ob_schedule),
        ] {
            if sched.is_empty() {
                return Err(Error::Domain(format!("{name} must not be empty")));
            }
            if sched[0].0 != 0.0 {
                return Err(Error::Domain(format!("{name} must start at t = 0")));
            }
            if sched.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(Error::Domain(format!("{name} times must be increasing")));
            }
            if sched.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                return Err(Error::Domain(format!("{name} entries must be finite")));
            }
            if sched.iter().any(|(t, _)| *t >= self.duration) {
                return Err(Error::Domain(format!(
                    "{name} entries must lie inside the scenario horizon"
                )));
            }
        }
        if let Some(d) = self.fixed_duty {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::Domain(format!(
                    "fixed_duty must be in [0, 1], got {d}"
                )));
            }
        }
        let t_s = params.switching_period();
        if self.mode == SimMode::Switched {
            if self.h > t_s / 100.0 * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "switched mode needs h <= T_s/100 = {:.3e}, got {:.3e}",
                    t_s / 100.0,
                    self.h
                )));
            }
            let ratio = t_s / self.h;
            if (ratio - ratio.round()).abs() > 1e-9 * ratio {
                return Err(Error::Misaligned(format!(
                    "h must divide the switching period (T_s/h = {ratio}, not an integer)"
                )));
            }
        }
        // Explicit-integrator stability guard against the fastest plant mode.
        let zero_op = OperatingPoint {
            duty: 0.0,
            v_d: 0.0,
            v_ob: 0.0,
            i_l: 0.0,
            v_c: 0.0,
            i_b: 0.0,
        };
        let (e1, e2) = linearize(params, &zero_op).eigenvalues();
        let fastest = e1.norm().max(e2.norm());
        if self.h * fastest > 2.0 {
            return Err(Error::Domain(format!(
                "h = {:.3e} exceeds the stability bound 2/|lambda_max| = {:.3e}",
                self.h,
                2.0 / fastest
            )));
        }
        Ok(())
    }
}

/// One recorded simulation sample. `s_f` holds the switching function in
/// switched mode and the duty command (its cycle mean) in averaged mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub i_l: f64,
    pub v_c: f64,
    pub i_b: f64,
    pub d: f64,
    pub s_f: f64,
    pub v_ob: f64,
    pub i_b_ref: f64,
    pub v_l: f64,
    pub i_c: f64,
}

/// Uniformly sampled simulation record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    /// Sampling interval, s.
    pub h: f64,
    /// Switching period of the run, s (kept for period-aligned metrics).
    pub t_s: f64,
    pub samples: Vec<TraceSample>,
}

impl Trace {
    pub fn start(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.t)
    }

    pub fn end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// Samples with `t` in `[t0, t1)`, as a new trace.
    pub fn slice(&self, t0: f64, t1: f64) -> Trace {
        let samples = self
            .samples
            .iter()
            .filter(|s| s.t >= t0 - 1e-12 && s.t < t1 - 1e-12)
            .copied()
            .collect();
        Trace {
            h: self.h,
            t_s: self.t_s,
            samples,
        }
    }

    /// Mean of a column over `[t0, t1)`.
    pub fn mean_over(&self, t0: f64, t1: f64, column: impl Fn(&TraceSample) -> f64) -> f64 {
        let mut acc = 0.0;
        let mut n = 0usize;
        for s in &self.samples {
            if s.t >= t0 - 1e-12 && s.t < t1 - 1e-12 {
                acc += column(s);
                n += 1;
            }
        }
        if n == 0 {
            f64::NAN
        } else {
            acc / n as f64
        }
    }
}

fn schedule_steps(schedule: &[(f64, f64)], h: f64) -> Vec<(usize, f64)> {
    schedule
        .iter()
        .map(|(t, v)| ((t / h).round() as usize, *v))
        .collect()
}

fn rk4_step(
    params: &ChargerParams,
    state: &ConverterState,
    inputs: &ExternalInputs,
    mode: SimMode,
    s_f: SwitchState,
    d: f64,
    h: f64,
) -> Result<(ConverterState, StateDerivative, BranchOutputs)> {
    let eval = |st: &ConverterState| -> Result<(StateDerivative, BranchOutputs)> {
        match mode {
            SimMode::Switched => Ok(rhs_switched(params, st, inputs, s_f)),
            SimMode::Averaged => rhs_averaged(params, st, inputs, d),
        }
    };
    let (k1, out) = eval(state)?;
    let mid1 = ConverterState {
        i_l: state.i_l + 0.5 * h * k1.di_l_dt,
        v_c: state.v_c + 0.5 * h * k1.dv_c_dt,
    };
    let (k2, _) = eval(&mid1)?;
    let mid2 = ConverterState {
        i_l: state.i_l + 0.5 * h * k2.di_l_dt,
        v_c: state.v_c + 0.5 * h * k2.dv_c_dt,
    };
    let (k3, _) = eval(&mid2)?;
    let end = ConverterState {
        i_l: state.i_l + h * k3.di_l_dt,
        v_c: state.v_c + h * k3.dv_c_dt,
    };
    let (k4, _) = eval(&end)?;
    let next = ConverterState {
        i_l: state.i_l + h / 6.0 * (k1.di_l_dt + 2.0 * k2.di_l_dt + 2.0 * k3.di_l_dt + k4.di_l_dt),
        v_c: state.v_c + h / 6.0 * (k1.dv_c_dt + 2.0 * k2.dv_c_dt + 2.0 * k3.dv_c_dt + k4.dv_c_dt),
    };
    Ok((next, k1, out))
}

/// Runs a scenario and records every step.
///
/// Per step: scheduled inputs are updated, the battery-current error feeds
/// the PI (unless `fixed_duty` bypasses it), the duty command is compared
/// against the carrier (switched mode), and the state advances one step with
/// the switch held. The sample records the state *before* the step together
/// with the control signals computed at that instant.
pub fn run(
    params: &ChargerParams,
    gains: &PiGains,
    modulator: &ModulatorConfig,
    scenario: &Scenario,
) -> Result<Trace> {
    scenario.validate(params)?;

    let h = scenario.h;
    let t_s = params.switching_period();
    let steps = (scenario.duration / h).round() as usize;
    let steps_per_period = (t_s / h).round() as usize;

    let ref_steps = schedule_steps(&scenario.ref_schedule, h);
    let vob_steps = schedule_steps(&scenario.v_ob_schedule, h);

    let mut state = ConverterState {
        i_l: scenario.i_l0,
        v_c: scenario.v_c0,
    };
    let mut pi = PiState::default();
    let mut samples = Vec::with_capacity(steps + 1);
    let mut ref_idx = 0usize;
    let mut vob_idx = 0usize;
    let mut last_d = scenario.fixed_duty.unwrap_or(0.0);
    let mut last_sf = SwitchState::Low;

    for k in 0..=steps {
        let t = k as f64 * h;
        while ref_idx + 1 < ref_steps.len() && ref_steps[ref_idx + 1].0 <= k {
            ref_idx += 1;
        }
        while vob_idx + 1 < vob_steps.len() && vob_steps[vob_idx + 1].0 <= k {
            vob_idx += 1;
        }
        let i_b_ref = ref_steps[ref_idx].1;
        let inputs = ExternalInputs {
            v_d: scenario.v_d,
            v_ob: vob_steps[vob_idx].1,
        };

        let i_b_now = crate::model::battery_current(params, &state, inputs.v_ob);
        let (d, s_f) = if k < steps {
            let d = match scenario.fixed_duty {
                Some(fd) => fd,
                None => pi_step(&mut pi, gains, i_b_ref - i_b_now, h, modulator)?,
            };
            let s_f = match scenario.mode {
                SimMode::Switched => {
                    // Exact per-period phase; identical to carrier(t) up to
                    // grid rounding at period boundaries.
                    let phase = (k % steps_per_period) as f64 / steps_per_period as f64;
                    pwm_compare(d, modulator.v_m * phase, modulator)
                }
                SimMode::Averaged => SwitchState::Low,
            };
            (d, s_f)
        } else {
            (last_d, last_sf)
        };
        last_d = d;
        last_sf = s_f;

        if k < steps {
            let (next, _, out) = rk4_step(params, &state, &inputs, scenario.mode, s_f, d, h)?;
            samples.push(TraceSample {
                t,
                i_l: state.i_l,
                v_c: state.v_c,
                i_b: i_b_now,
                d,
                s_f: match scenario.mode {
                    SimMode::Switched => s_f.factor(),
                    SimMode::Averaged => d,
                },
                v_ob: inputs.v_ob,
                i_b_ref,
                v_l: out.v_l,
                i_c: out.i_c,
            });
            state = next;
            if !state.is_finite() {
                return Err(Error::Divergence { t: t + h });
            }
        } else {
            // Final sample: outputs evaluated in place, last controls held.
            let (_, out) = match scenario.mode {
                SimMode::Switched => rhs_switched(params, &state, &inputs, s_f),
                SimMode::Averaged => rhs_averaged(params, &state, &inputs, d)?,
            };
            samples.push(TraceSample {
                t,
                i_l: state.i_l,
                v_c: state.v_c,
                i_b: i_b_now,
                d,
                s_f: match scenario.mode {
                    SimMode::Switched => s_f.factor(),
                    SimMode::Averaged => d,
                },
                v_ob: inputs.v_ob,
                i_b_ref,
                v_l: out.v_l,
                i_c: out.i_c,
            });
        }
    }

    Ok(Trace {
        h,
        t_s,
        samples,
    })
}

/// Peak-to-peak ripple over a steady window.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RippleReport {
    pub t_start: f64,
    pub t_end: f64,
    pub i_l_peak_to_peak: f64,
    /// Percent of the window mean.
    pub i_l_percent: f64,
    pub v_c_peak_to_peak: f64,
    pub v_c_percent: f64,
}

/// Measures peak-to-peak ripple of `i_l` and `v_c` over `[t0, t1)`.
/// The window must lie inside the trace and span at least ten switching
/// periods; picking a window that is actually steady is the caller's job.
pub fn measure_ripple(trace: &Trace, window: (f64, f64)) -> Result<RippleReport> {
    let (t0, t1) = window;
    if t0 < trace.start() - 1e-12 || t1 > trace.end() + trace.h * 0.5 || t1 <= t0 {
        return Err(Error::Window(format!(
            "window [{t0}, {t1}) outside trace [{}, {}]",
            trace.start(),
            trace.end()
        )));
    }
    if t1 - t0 < 10.0 * trace.t_s * (1.0 - 1e-9) {
        return Err(Error::Window(format!(
            "window must span at least 10 switching periods ({:.3e} s)",
            10.0 * trace.t_s
        )));
    }
    let mut i_min = f64::INFINITY;
    let mut i_max = f64::NEG_INFINITY;
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    let mut i_acc = 0.0;
    let mut v_acc = 0.0;
    let mut n = 0usize;
    for s in &trace.samples {
        if s.t >= t0 - 1e-12 && s.t < t1 - 1e-12 {
            i_min = i_min.min(s.i_l);
            i_max = i_max.max(s.i_l);
            v_min = v_min.min(s.v_c);
            v_max = v_max.max(s.v_c);
            i_acc += s.i_l;
            v_acc += s.v_c;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::Window("window contains no samples".into()));
    }
    let i_mean = i_acc / n as f64;
    let v_mean = v_acc / n as f64;
    let i_pp = i_max - i_min;
    let v_pp = v_max - v_min;
    let pct = |pp: f64, mean: f64| {
        if pp == 0.0 {
            0.0
        } else {
            100.0 * pp / mean.abs()
        }
    };
    Ok(RippleReport {
        t_start: t0,
        t_end: t1,
        i_l_peak_to_peak: i_pp,
        i_l_percent: pct(i_pp, i_mean),
        v_c_peak_to_peak: v_pp,
        v_c_percent: pct(v_pp, v_mean),
    })
}

/// Settling of the battery current after an event.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SettlingReport {
    pub event_t: f64,
    /// Seconds after `event_t` beyond which `i_b` stays inside the band.
    pub settling_time: f64,
    /// False when the band is never permanently entered within the trace.
    pub settled: bool,
    /// The band reference: mean of the trailing ten switching periods.
    pub final_value: f64,
    pub peak_excursion: f64,
    pub peak_time: f64,
}

/// First time after `event_t` beyond which `i_b` remains inside
/// `final ± band_fraction·|final|` until the end of the trace. The final
/// value is taken as the mean over the trailing ten switching periods.
pub fn settling_time(trace: &Trace, event_t: f64, band_fraction: f64) -> Result<SettlingReport> {
    if !(band_fraction > 0.0 && band_fraction < 1.0) {
        return Err(Error::Domain(format!(
            "band_fraction must lie in (0, 1), got {band_fraction}"
        )));
    }
    if event_t < trace.start() - 1e-12 || event_t >= trace.end() {
        return Err(Error::Window(format!(
            "event at {event_t} outside trace [{}, {}]",
            trace.start(),
            trace.end()
        )));
    }
    let tail = (10.0 * trace.t_s).min((trace.end() - event_t) * 0.5);
    let final_value = trace.mean_over(trace.end() - tail, trace.end() + trace.h, |s| s.i_b);
    let band = band_fraction * final_value.abs();

    let mut last_violation: Option<usize> = None;
    let mut peak = 0.0f64;
    let mut peak_time = event_t;
    let relevant: Vec<(usize, &TraceSample)> = trace
        .samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.t >= event_t - 1e-12)
        .collect();
    for (i, s) in &relevant {
        let dev = (s.i_b - final_value).abs();
        if dev > peak {
            peak = dev;
            peak_time = s.t;
        }
        if dev > band {
            last_violation = Some(*i);
        }
    }
    match last_violation {
        None => Ok(SettlingReport {
            event_t,
            settling_time: 0.0,
            settled: true,
            final_value,
            peak_excursion: peak,
            peak_time,
        }),
        Some(i) if i + 1 >= trace.samples.len() => Ok(SettlingReport {
            event_t,
            settling_time: trace.end() - event_t,
            settled: false,
            final_value,
            peak_excursion: peak,
            peak_time,
        }),
        Some(i) => Ok(SettlingReport {
            event_t,
            settling_time: trace.samples[i + 1].t - event_t,
            settled: true,
            final_value,
            peak_excursion: peak,
            peak_time,
        }),
    }
}

/// Boxcar average over each switching period, sampled once per period.
/// The trace grid must be commensurate with the switching period.
pub fn cycle_average(trace: &Trace) -> Result<Trace> {
    let ratio = trace.t_s / trace.h;
    let spp = ratio.round();
    if (ratio - spp).abs() > 1e-9 * ratio || spp < 1.0 {
        return Err(Error::Misaligned(format!(
            "trace grid is not aligned to the switching period (T_s/h = {ratio})"
        )));
    }
    let spp = spp as usize;
    let periods = trace.samples.len() / spp;
    if periods == 0 {
        return Err(Error::Misaligned(
            "trace shorter than one switching period".into(),
        ));
    }
    let mut samples = Vec::with_capacity(periods);
    for p in 0..periods {
        let chunk = &trace.samples[p * spp..(p + 1) * spp];
        let n = spp as f64;
        let mean = |f: fn(&TraceSample) -> f64| chunk.iter().map(f).sum::<f64>() / n;
        samples.push(TraceSample {
            t: chunk[0].t,
            i_l: mean(|s| s.i_l),
            v_c: mean(|s| s.v_c),
            i_b: mean(|s| s.i_b),
            d: mean(|s| s.d),
            s_f: mean(|s| s.s_f),
            v_ob: mean(|s| s.v_ob),
            i_b_ref: mean(|s| s.i_b_ref),
            v_l: mean(|s| s.v_l),
            i_c: mean(|s| s.i_c),
        });
    }
    Ok(Trace {
        h: trace.t_s,
        t_s: trace.t_s,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{duty_for_current, steady_state};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    fn params() -> ChargerParams {
        ChargerParams::default()
    }

    fn modulator(p: &ChargerParams) -> ModulatorConfig {
        ModulatorConfig::new(p.v_m, p.switching_period(), 0.0, 1.0).unwrap()
    }

    fn open_loop_scenario(p: &ChargerParams, mode: SimMode, duty: f64, duration: f64) -> Scenario {
        Scenario {
            duration,
            h: p.switching_period() / 200.0,
            i_l0: 0.0,
            v_c0: 400.0,
            v_d: 800.0,
            ref_schedule: vec![(0.0, 30.0)],
            v_ob_schedule: vec![(0.0, 450.0)],
            mode,
            fixed_duty: Some(duty),
        }
    }

    fn dummy_gains() -> PiGains {
        PiGains::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn averaged_open_loop_converges_to_equilibrium() {
        let p = params();
        let op = duty_for_current(&p, 30.0, 800.0, 450.0).unwrap();
        let scenario = open_loop_scenario(&p, SimMode::Averaged, op.duty, 0.06);
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        let last = trace.samples.last().unwrap();
        assert!(close(last.i_l, 30.0, 1e-3));
        assert!(close(last.v_c, 480.0, 1e-3));
    }

    #[test]
    fn switched_open_loop_ripple_matches_triangle_oracle() {
        let p = params();
        // Duty chosen on the carrier grid (128/200) so PWM realizes it
        // exactly; the equilibrium then sits just above 30 A. The window
        // starts past ten slow time constants so no transient drift is left.
        let duty = 0.64;
        let scenario = open_loop_scenario(&p, SimMode::Switched, duty, 0.06);
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        let ripple = measure_ripple(&trace, (0.05, 0.06)).unwrap();

        let op = steady_state(&p, duty, 800.0, 450.0).unwrap();
        let v_l_on = 800.0 - 0.4 * op.v_c - 0.6 * 450.0 - 1.635 * op.i_l;
        let oracle = v_l_on * duty * p.switching_period() / p.inductance;
        assert!(
            (ripple.i_l_peak_to_peak - oracle).abs() / oracle < 0.02,
            "measured {} vs oracle {oracle}",
            ripple.i_l_peak_to_peak
        );
        // Both ripples under the 5 % design constraint.
        assert!(ripple.i_l_percent < 5.0);
        assert!(ripple.v_c_percent < 5.0);
    }

    #[test]
    fn ripple_window_validation() {
        let p = params();
        let scenario = open_loop_scenario(&p, SimMode::Averaged, 0.64, 0.01);
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        assert!(measure_ripple(&trace, (0.0, 0.02)).is_err());
        assert!(measure_ripple(&trace, (0.0, 1e-4)).is_err());
        let constant = measure_ripple(&trace, (0.009 - 10.5 * trace.t_s, 0.009)).unwrap();
        assert!(constant.i_l_peak_to_peak >= 0.0);
    }

    #[test]
    fn ripple_of_constant_trace_is_zero() {
        let p = params();
        let op = duty_for_current(&p, 30.0, 800.0, 450.0).unwrap();
        let mut scenario = open_loop_scenario(&p, SimMode::Averaged, op.duty, 0.02);
        scenario.i_l0 = op.i_l;
        scenario.v_c0 = op.v_c;
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        let ripple = measure_ripple(&trace, (0.01, 0.02)).unwrap();
        assert!(ripple.i_l_peak_to_peak < 1e-9);
        assert!(ripple.i_l_percent < 1e-9);
    }

    #[test]
    fn settling_of_already_settled_signal_is_zero() {
        let p = params();
        let op = duty_for_current(&p, 30.0, 800.0, 450.0).unwrap();
        let mut scenario = open_loop_scenario(&p, SimMode::Averaged, op.duty, 0.02);
        scenario.i_l0 = op.i_l;
        scenario.v_c0 = op.v_c;
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        let report = settling_time(&trace, 0.0, 0.02).unwrap();
        assert!(report.settled);
        assert_eq!(report.settling_time, 0.0);
    }

    #[test]
    fn settling_of_open_loop_ramp_matches_plant_pole() {
        // Open loop at fixed duty from zero current: the slow mode has
        // τ = 1/214.2 s, so a 2 % band is entered near t = τ·ln(Δ/band).
        let p = params();
        let op = duty_for_current(&p, 30.0, 800.0, 450.0).unwrap();
        let scenario = open_loop_scenario(&p, SimMode::Averaged, op.duty, 0.06);
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        let report = settling_time(&trace, 0.0, 0.02).unwrap();
        assert!(report.settled);
        let tau = 1.0 / 214.2;
        // Initial deviation ≈ 30 A (plus the −20 A initial dip), band 0.6 A.
        let expected = tau * (50.0f64 / 0.6).ln();
        assert!(
            (report.settling_time - expected).abs() < 0.3 * expected,
            "settling {} vs first-order estimate {expected}",
            report.settling_time
        );
    }

    #[test]
    fn cycle_average_of_constant_trace_is_itself() {
        let p = params();
        let op = duty_for_current(&p, 30.0, 800.0, 450.0).unwrap();
        let mut scenario = open_loop_scenario(&p, SimMode::Averaged, op.duty, 0.01);
        scenario.i_l0 = op.i_l;
        scenario.v_c0 = op.v_c;
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        let avg = cycle_average(&trace).unwrap();
        assert_eq!(avg.samples.len(), trace.samples.len() / 200);
        for s in &avg.samples {
            assert!(close(s.i_l, op.i_l, 1e-9));
            assert!(close(s.v_c, op.v_c, 1e-9));
        }
    }

    #[test]
    fn cycle_average_removes_symmetric_ripple() {
        // Synthetic triangle around a mean: the per-period boxcar must sit on
        // the mean to 0.1 %.
        let t_s = 1.0 / 27e3;
        let spp = 200usize;
        let h = t_s / spp as f64;
        let mean = 30.0;
        let amplitude = 0.5;
        let mut samples = Vec::new();
        for k in 0..(5 * spp) {
            let phase = (k % spp) as f64 / spp as f64;
            let tri = if phase < 0.5 {
                4.0 * phase - 1.0
            } else {
                3.0 - 4.0 * phase
            };
            let v = mean + amplitude * tri;
            samples.push(TraceSample {
                t: k as f64 * h,
                i_l: v,
                v_c: v,
                i_b: v,
                d: 0.5,
                s_f: 0.0,
                v_ob: 450.0,
                i_b_ref: 30.0,
                v_l: 0.0,
                i_c: 0.0,
            });
        }
        let trace = Trace { h, t_s, samples };
        let avg = cycle_average(&trace).unwrap();
        assert_eq!(avg.samples.len(), 5);
        for s in &avg.samples {
            assert!((s.i_l - mean).abs() / mean < 1e-3);
        }
    }

    #[test]
    fn cycle_average_rejects_misaligned_grid() {
        let trace = Trace {
            h: 1.0 / 27e3 / 150.7,
            t_s: 1.0 / 27e3,
            samples: vec![],
        };
        assert!(matches!(cycle_average(&trace), Err(Error::Misaligned(_))));
    }

    #[test]
    fn scenario_validation_rejects_bad_grids() {
        let p = params();
        let mut s = open_loop_scenario(&p, SimMode::Switched, 0.5, 0.01);
        s.h = p.switching_period() / 50.0; // too coarse for switched mode
        assert!(s.validate(&p).is_err());
        let mut s = open_loop_scenario(&p, SimMode::Switched, 0.5, 0.01);
        s.h = p.switching_period() / 150.7; // not commensurate
        assert!(s.validate(&p).is_err());
        let mut s = open_loop_scenario(&p, SimMode::Averaged, 0.5, 0.01);
        s.h = 1e-3; // beyond the stability bound of the fast mode
        assert!(s.validate(&p).is_err());
        let mut s = open_loop_scenario(&p, SimMode::Averaged, 0.5, 0.01);
        s.ref_schedule = vec![(0.001, 30.0)];
        assert!(s.validate(&p).is_err());
        let mut s = open_loop_scenario(&p, SimMode::Averaged, 0.5, 0.01);
        s.v_ob_schedule = vec![(0.0, 450.0), (0.02, 350.0)]; // past the horizon
        assert!(s.validate(&p).is_err());
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let p = params();
        let scenario = open_loop_scenario(&p, SimMode::Switched, 0.64, 0.005);
        let a = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        let b = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn node_identity_holds_along_the_trace() {
        let p = params();
        let scenario = open_loop_scenario(&p, SimMode::Switched, 0.64, 0.002);
        let trace = run(&p, &dummy_gains(), &modulator(&p), &scenario).unwrap();
        for s in &trace.samples {
            let scale = s.i_l.abs().max(1.0);
            assert!((s.i_l - (s.i_c + s.i_b)).abs() <= 1e-12 * scale);
        }
    }
}
