//! PI compensator design and runtime, and the trailing-edge PWM modulator.
//!
//! The design rule places the loop-gain crossover at the switching frequency
//! using the high-frequency magnitude approximation `|T(jω)| ≈ k·k_p/ω`:
//! requiring unity magnitude at `ω_s` gives `k_p = ω_s/k`, and the integral
//! time constant is fixed at `τ_i = 100/ω_s`. The high-frequency identity is
//! a design recipe, not a Bode fact — the measured crossover of the full
//! loop is reported separately by the analysis layer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::RationalTransferFunction;
use crate::error::{Error, Result};
use crate::model::SwitchState;

/// Proportional gain (duty per ampere of error) and integral time constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiGains {
    pub k_p: f64,
    pub tau_i: f64,
}

impl PiGains {
    pub fn new(k_p: f64, tau_i: f64) -> Result<Self> {
        if !(k_p > 0.0) || !(tau_i > 0.0) {
            return Err(Error::Domain(format!(
                "PI gains must be positive, got k_p = {k_p}, tau_i = {tau_i}"
            )));
        }
        Ok(Self { k_p, tau_i })
    }
}

/// Which pulsation the design rule uses for the switching frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaConvention {
    /// `ω_s = 2π·f_s` (default).
    #[serde(rename = "2pi_fs")]
    TwoPiFs,
    /// `ω_s = f_s`, exposed for sensitivity studies.
    #[serde(rename = "fs")]
    Fs,
}

impl OmegaConvention {
    pub fn omega(self, f_s: f64) -> f64 {
        match self {
            OmegaConvention::TwoPiFs => 2.0 * std::f64::consts::PI * f_s,
            OmegaConvention::Fs => f_s,
        }
    }
}

/// Designs the PI gains from the plant DC gain: `k_p = ω_s/k`,
/// `τ_i = 100/ω_s` with `ω_s = 2π·f_s`.
pub fn design_pi(plant: &RationalTransferFunction, f_s: f64) -> Result<PiGains> {
    design_pi_with_convention(plant, f_s, OmegaConvention::TwoPiFs)
}

/// Same rule with an explicit pulsation convention.
pub fn design_pi_with_convention(
    plant: &RationalTransferFunction,
    f_s: f64,
    convention: OmegaConvention,
) -> Result<PiGains> {
    let k = plant.dc_gain();
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "PI design needs a positive finite plant DC gain, got {k}"
        )));
    }
    if !(f_s > 0.0) {
        return Err(Error::Domain(format!("f_s must be > 0, got {f_s}")));
    }
    let omega_s = convention.omega(f_s);
    PiGains::new(omega_s / k, 100.0 / omega_s)
}

/// Runtime state of the discrete PI with conditional-integration anti-windup.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PiState {
    /// Accumulated integral contribution, in duty units.
    pub integrator: f64,
    /// Last clamped output.
    pub last_output: f64,
    /// Whether the last output hit a clamp bound.
    pub saturated: bool,
}

/// Trailing-edge sawtooth modulator configuration with duty clamp bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulatorConfig {
    /// Carrier peak, V.
    pub v_m: f64,
    /// Carrier period, s.
    pub t_s: f64,
    pub d_min: f64,
    pub d_max: f64,
}

impl ModulatorConfig {
    pub fn new(v_m: f64, t_s: f64, d_min: f64, d_max: f64) -> Result<Self> {
        if !(v_m > 0.0) || !(t_s > 0.0) {
            return Err(Error::Domain(format!(
                "modulator needs v_m > 0 and t_s > 0, got ({v_m}, {t_s})"
            )));
        }
        if !(0.0 <= d_min && d_min < d_max && d_max <= 1.0) {
            return Err(Error::Domain(format!(
                "clamp bounds must satisfy 0 <= d_min < d_max <= 1, got ({d_min}, {d_max})"
            )));
        }
        Ok(Self {
            v_m,
            t_s,
            d_min,
            d_max,
        })
    }
}

/// One forward-Euler PI update over a step of `h` seconds. Returns the duty
/// command; `state` is advanced in place.
///
/// The integrator accumulates `(k_p/τ_i)·error·h` unless the unclamped
/// output is already beyond a bound and the error pushes further into it
/// (conditional integration), so the integrator never winds up while the
/// output is pinned.
pub fn pi_step(
    state: &mut PiState,
    gains: &PiGains,
    error: f64,
    h: f64,
    config: &ModulatorConfig,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("PI step needs h > 0, got {h}")));
    }
    let proportional = gains.k_p * error;
    let unclamped = proportional + state.integrator;
    let pushing_high = unclamped > config.d_max && error > 0.0;
    let pushing_low = unclamped < config.d_min && error < 0.0;
    if !(pushing_high || pushing_low) {
        state.integrator += gains.k_p / gains.tau_i * error * h;
    }
    let raw = proportional + state.integrator;
    let d = raw.clamp(config.d_min, config.d_max);
    state.saturated = d != raw;
    state.last_output = d;
    Ok(d)
}

/// Rising sawtooth carrier, `v_m · frac(t/t_s)`.
pub fn carrier(t: f64, config: &ModulatorConfig) -> f64 {
    let phase = t / config.t_s;
    config.v_m * (phase - phase.floor())
}

/// Trailing-edge comparison: the high-side switch conducts while the duty
/// command (scaled to carrier volts) exceeds the carrier.
pub fn pwm_compare(d: f64, v_carry: f64, config: &ModulatorConfig) -> SwitchState {
    if d * config.v_m > v_carry {
        SwitchState::High
    } else {
        SwitchState::Low
    }
}

/// Loop gain `T(s) = G_c(s) · (1/V_M) · G(s)`, or the uncompensated
/// `T_u(s) = G(s)/V_M` when `gains` is `None`.
///
/// The PI contributes a pole at the origin and a zero at `−1/τ_i`, so the
/// compensated loop has three poles and two zeros.
pub fn loop_gain(
    gains: Option<&PiGains>,
    plant: &RationalTransferFunction,
    v_m: f64,
) -> Result<RationalTransferFunction> {
    if !(v_m > 0.0) {
        return Err(Error::Domain(format!("v_m must be > 0, got {v_m}")));
    }
    let scaled = plant.scaled(1.0 / v_m);
    match gains {
        None => Ok(scaled),
        Some(g) => {
            let compensator = RationalTransferFunction {
                gain: g.k_p,
                zeros: vec![Complex64::new(-1.0 / g.tau_i, 0.0)],
                poles: vec![Complex64::new(0.0, 0.0)],
            };
            Ok(compensator.series(&scaled))
        }
    }
}
