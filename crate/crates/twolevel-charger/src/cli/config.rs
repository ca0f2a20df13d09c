//! Configuration documents: a TOML file with `charger`, `control`,
//! `scenario` and `sizing` sections. Unknown keys are rejected with an error
//! naming the key; all values are SI scalars except the sizing bounds, which
//! carry an explicit unit (`"0.14 A"`, `"0.02 V"`, `"5 %"`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::control::{ModulatorConfig, OmegaConvention, PiGains};
use crate::error::{Error, Result};
use crate::model::{duty_for_current, ChargerParams, OperatingPoint};
use crate::sim::{Scenario, SimMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub charger: ChargerSection,
    #[serde(default)]
    pub control: ControlSection,
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub sizing: SizingSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargerSection {
    /// DC source voltage, V.
    pub v_d: f64,
    pub r_ds_on: f64,
    pub r_l: f64,
    pub r_c: f64,
    pub r_b: f64,
    /// Inductance, H.
    pub l: f64,
    /// Capacitance, F.
    pub c: f64,
    /// Switching frequency, Hz.
    pub f_s: f64,
    /// Carrier peak, V.
    #[serde(default = "default_v_m")]
    pub v_m: f64,
}

fn default_v_m() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSection {
    /// Absent means "design automatically from the plant".
    pub k_p: Option<f64>,
    pub tau_i: Option<f64>,
    #[serde(default)]
    pub d_min: f64,
    #[serde(default = "default_d_max")]
    pub d_max: f64,
    #[serde(default = "default_convention")]
    pub omega_convention: OmegaConvention,
}

fn default_d_max() -> f64 {
    1.0
}

fn default_convention() -> OmegaConvention {
    OmegaConvention::TwoPiFs
}

impl Default for ControlSection {
    fn default() -> Self {
        Self {
            k_p: None,
            tau_i: None,
            d_min: 0.0,
            d_max: 1.0,
            omega_convention: OmegaConvention::TwoPiFs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub duration: f64,
    pub h: f64,
    pub i_l0: f64,
    pub v_c0: f64,
    /// Battery-current reference schedule, `[time_s, amps]` pairs.
    pub ref_steps: Vec<(f64, f64)>,
    /// Battery EMF schedule, `[time_s, volts]` pairs.
    pub vob_steps: Vec<(f64, f64)>,
    pub mode: SimMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizingSection {
    /// Inductor-current ripple bound: `"<value> A"` or `"<value> %"`.
    #[serde(default = "default_ripple")]
    pub delta_il: String,
    /// Capacitor-voltage ripple bound: `"<value> V"` or `"<value> %"`.
    #[serde(default = "default_ripple")]
    pub delta_vc: String,
}

fn default_ripple() -> String {
    "5 %".to_string()
}

impl Default for SizingSection {
    fn default() -> Self {
        Self {
            delta_il: default_ripple(),
            delta_vc: default_ripple(),
        }
    }
}

/// Ripple bounds resolved to absolute units against the scenario's first
/// reference operating point.
#[derive(Debug, Clone, Serialize)]
pub struct SizingBounds {
    /// Absolute bound, A.
    pub delta_i_l: f64,
    /// Absolute bound, V.
    pub delta_v_c: f64,
    /// The bound strings they were resolved from.
    pub delta_il_spec: String,
    pub delta_vc_spec: String,
}

/// Everything a command needs, assembled from one config file.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub document: ConfigDocument,
    pub params: ChargerParams,
    /// Explicit gains from the file, if any.
    pub gains: Option<PiGains>,
    pub convention: OmegaConvention,
    pub modulator: ModulatorConfig,
    pub scenario: Scenario,
    pub sizing: SizingBounds,
    /// Operating point of the first reference step (percent bounds resolve
    /// against it).
    pub first_op: OperatingPoint,
}

fn parse_bound(raw: &str, absolute_unit: &str, key: &str) -> Result<(f64, bool)> {
    let trimmed = raw.trim();
    let (number, unit) = match trimmed.rfind(|c: char| c.is_ascii_digit() || c == '.') {
        Some(pos) => trimmed.split_at(pos + 1),
        None => {
            return Err(Error::Config(format!(
                "sizing.{key}: no numeric value in {raw:?}"
            )))
        }
    };
    let value: f64 = number.trim().parse().map_err(|_| {
        Error::Config(format!("sizing.{key}: cannot parse number from {raw:?}"))
    })?;
    if !(value > 0.0) {
        return Err(Error::Config(format!(
            "sizing.{key}: bound must be positive, got {value}"
        )));
    }
    match unit.trim() {
        "%" => Ok((value, true)),
        u if u == absolute_unit => Ok((value, false)),
        other => Err(Error::Config(format!(
            "sizing.{key}: unit must be {absolute_unit:?} or \"%\", got {other:?}"
        ))),
    }
}

/// Parses a config document from TOML text.
pub fn parse_config(text: &str) -> Result<ConfigDocument> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

/// Serializes a config document back to TOML.
pub fn write_config(doc: &ConfigDocument) -> Result<String> {
    toml::to_string_pretty(doc).map_err(|e| Error::Config(e.to_string()))
}

/// Loads and validates a config file into domain objects.
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Config(format!("cannot read {}: {e}", path.display()))
    })?;
    let document = parse_config(&text)?;
    build(document)
}

fn build(document: ConfigDocument) -> Result<LoadedConfig> {
    let ch = &document.charger;
    let params = ChargerParams::new(
        ch.r_ds_on, ch.r_l, ch.r_c, ch.r_b, ch.l, ch.c, ch.f_s, ch.v_m,
    )?;

    let ctl = &document.control;
    let gains = match (ctl.k_p, ctl.tau_i) {
        (Some(k_p), Some(tau_i)) => Some(PiGains::new(k_p, tau_i)?),
        (None, None) => None,
        _ => {
            return Err(Error::Config(
                "control.k_p and control.tau_i must be given together".into(),
            ))
        }
    };
    let modulator = ModulatorConfig::new(ch.v_m, 1.0 / ch.f_s, ctl.d_min, ctl.d_max)?;

    let sc = &document.scenario;
    let scenario = Scenario {
        duration: sc.duration,
        h: sc.h,
        i_l0: sc.i_l0,
        v_c0: sc.v_c0,
        v_d: ch.v_d,
        ref_schedule: sc.ref_steps.clone(),
        v_ob_schedule: sc.vob_steps.clone(),
        mode: sc.mode,
        fixed_duty: None,
    };
    scenario.validate(&params)?;

    let first_ref = scenario.ref_schedule[0].1;
    let first_vob = scenario.v_ob_schedule[0].1;
    let first_op = duty_for_current(&params, first_ref, ch.v_d, first_vob)?;

    let (il_value, il_pct) = parse_bound(&document.sizing.delta_il, "A", "delta_il")?;
    let (vc_value, vc_pct) = parse_bound(&document.sizing.delta_vc, "V", "delta_vc")?;
    let sizing = SizingBounds {
        delta_i_l: if il_pct {
            il_value / 100.0 * first_op.i_l.abs()
        } else {
            il_value
        },
        delta_v_c: if vc_pct {
            vc_value / 100.0 * first_op.v_c.abs()
        } else {
            vc_value
        },
        delta_il_spec: document.sizing.delta_il.clone(),
        delta_vc_spec: document.sizing.delta_vc.clone(),
    };

    Ok(LoadedConfig {
        params,
        gains,
        convention: ctl.omega_convention,
        modulator,
        scenario,
        sizing,
        first_op,
        document,
    })
}
