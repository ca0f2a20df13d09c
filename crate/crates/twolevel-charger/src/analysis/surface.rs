//! Parameter-sweep surfaces over parasitic-resistance grids.

use serde::Serialize;

use crate::analysis::efficiency::efficiency;
use crate::analysis::sizing::{min_capacitance, min_inductance};
use crate::error::{Error, Result};
use crate::model::{steady_state, ChargerParams};

/// Which closed-form quantity a sweep evaluates at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceQuantity {
    /// Equilibrium capacitor voltage as a function of (R_DS(on), r_L).
    CapacitorVoltage,
    /// Minimum inductance as a function of (R_DS(on), r_L).
    MinInductance,
    /// Minimum capacitance as a function of (r_C, r_L).
    MinCapacitance,
    /// Physical efficiency at equilibrium as a function of (R_DS(on), r_L).
    Efficiency,
}

impl SurfaceQuantity {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceQuantity::CapacitorVoltage => "v_c",
            SurfaceQuantity::MinInductance => "l_min",
            SurfaceQuantity::MinCapacitance => "c_min",
            SurfaceQuantity::Efficiency => "eta",
        }
    }

    /// Axis names for this quantity, (x, y).
    pub fn axis_names(&self) -> (&'static str, &'static str) {
        match self {
            SurfaceQuantity::MinCapacitance => ("r_c", "r_l"),
            _ => ("r_ds_on", "r_l"),
        }
    }
}

/// One sweep axis: strictly increasing sample positions.
#[derive(Debug, Clone, Serialize)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub samples: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, unit: &str, samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Domain(format!(
                "axis {name} needs at least two samples"
            )));
        }
        if samples.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(format!(
                "axis {name} samples must be strictly increasing"
            )));
        }
        Ok(Self {
            name: name.into(),
            unit: unit.into(),
            samples,
        })
    }

    /// Logarithmic grid, `points_per_decade` samples per decade inclusive of
    /// both endpoints.
    pub fn log(name: &str, unit: &str, min: f64, max: f64, points_per_decade: usize) -> Result<Self> {
        if !(min > 0.0) || !(max > min) || points_per_decade == 0 {
            return Err(Error::Domain(format!(
                "log axis needs 0 < min < max and points_per_decade > 0, got ({min}, {max})"
            )));
        }
        let decades = (max / min).log10();
        let n = ((decades * points_per_decade as f64).round() as usize).max(1) + 1;
        let samples = (0..n)
            .map(|i| min * (max / min).powf(i as f64 / (n - 1) as f64))
            .collect();
        Axis::new(name, unit, samples)
    }
}

/// Row-major surface: `value(i, j)` sits at `(x.samples[i], y.samples[j])`.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceGrid {
    pub x: Axis,
    pub y: Axis,
    pub values: Vec<f64>,
    /// Per-point infeasibility markers (degenerate sizing brackets and the
    /// like); the sweep never aborts on them.
    pub infeasible: Vec<bool>,
}

impl SurfaceGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.y.samples.len() + j]
    }

    pub fn is_infeasible(&self, i: usize, j: usize) -> bool {
        self.infeasible[i * self.y.samples.len() + j]
    }
}

/// Fixed conditions held constant during a sweep. Defaults are the reference
/// design's sweep conditions: 800 V source, 450 V EMF, duty 0.9, 30 A target,
/// 400 V capacitor column voltage, 0.14 A / 0.02 V ripple bounds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepConditions {
    pub v_d: f64,
    pub v_ob: f64,
    pub duty: f64,
    pub i_l: f64,
    /// Capacitor voltage used by the sizing sweeps (held fixed rather than
    /// recomputed, so the sizing brackets stay nonzero).
    pub v_c: f64,
    pub delta_i_l: f64,
    pub delta_v_c: f64,
}

impl Default for SweepConditions {
    fn default() -> Self {
        Self {
            v_d: 800.0,
            v_ob: 450.0,
            duty: 0.9,
            i_l: 30.0,
            v_c: 400.0,
            delta_i_l: 0.14,
            delta_v_c: 0.02,
        }
    }
}

/// Default sweep range for parasitic resistances: 1e-6 Ω to 1e3 Ω.
pub const SWEEP_R_MIN: f64 = 1e-6;
pub const SWEEP_R_MAX: f64 = 1e3;

/// Default log-grid axes for a quantity.
pub fn default_axes(quantity: SurfaceQuantity, points_per_decade: usize) -> Result<(Axis, Axis)> {
    let (xn, yn) = quantity.axis_names();
    Ok((
        Axis::log(xn, "ohm", SWEEP_R_MIN, SWEEP_R_MAX, points_per_decade)?,
        Axis::log(yn, "ohm", SWEEP_R_MIN, SWEEP_R_MAX, points_per_decade)?,
    ))
}

/// Evaluates the requested closed form at every grid point, varying the two
/// axis resistances of `base` and holding everything else at `fixed`.
pub fn surface(
    quantity: SurfaceQuantity,
    base: &ChargerParams,
    x: Axis,
    y: Axis,
    fixed: &SweepConditions,
) -> Result<SurfaceGrid> {
    let nx = x.samples.len();
    let ny = y.samples.len();
    let mut values = Vec::with_capacity(nx * ny);
    let mut infeasible = Vec::with_capacity(nx * ny);

    for i in 0..nx {
        for j in 0..ny {
            let mut p = *base;
            match quantity {
                SurfaceQuantity::MinCapacitance => {
                    p.r_c = x.samples[i];
                    p.r_l = y.samples[j];
                }
                _ => {
                    p.r_ds_on = x.samples[i];
                    p.r_l = y.samples[j];
                }
            }
            p.validate()?;
            let (value, flag) = match quantity {
                SurfaceQuantity::CapacitorVoltage => {
                    let op = steady_state(&p, fixed.duty, fixed.v_d, fixed.v_ob)?;
                    (op.v_c, false)
                }
                SurfaceQuantity::Efficiency => {
                    let op = steady_state(&p, fixed.duty, fixed.v_d, fixed.v_ob)?;
                    let report = efficiency(&p, &op)?;
                    (report.eta_physical, false)
                }
                SurfaceQuantity::MinInductance => {
                    let op = steady_state(&p, fixed.duty, fixed.v_d, fixed.v_ob)?;
                    // Sizing column voltage is prescribed, not the equilibrium.
                    let column = crate::model::OperatingPoint {
                        v_c: fixed.v_c,
                        ..op
                    };
                    let r = min_inductance(&p, &column, fixed.delta_i_l)?;
                    (r.minimum, r.infeasible)
                }
                SurfaceQuantity::MinCapacitance => {
                    let r = min_capacitance(
                        &p,
                        fixed.v_c,
                        fixed.v_ob,
                        fixed.i_l,
                        fixed.duty,
                        fixed.delta_v_c,
                    )?;
                    (r.minimum, r.infeasible)
                }
            };
            values.push(value);
            infeasible.push(flag);
        }
    }
    Ok(SurfaceGrid {
        x,
        y,
        values,
        infeasible,
    })
}
