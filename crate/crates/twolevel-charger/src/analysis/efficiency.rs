//! Steady-state efficiency of the charger.
//!
//! Two figures are reported side by side. `eta_physical` comes from first
//! principles at the DC point: the source delivers `P_in = D·V_d·I_L`
//! (it conducts only while the high-side switch is closed), the battery
//! terminal node absorbs `P_terminal = V_C·I_L`, so
//! `eta_physical = P_terminal/P_in = A_v1/D`. `eta_printed` evaluates the
//! published closed-form performance expression verbatim; on realistic
//! numbers it exceeds 1 and is retained only for traceability — treat it as
//! flagged, not as a physical efficiency.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChargerParams, OperatingPoint};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EfficiencyReport {
    /// Terminal power over switched input power, `A_v1/D`. In (0, 1] for any
    /// positive-resistance charging point.
    pub eta_physical: f64,
    /// Verbatim evaluation of the published closed-form expression.
    /// Known to exceed 1 on realistic parameters; kept for comparison only.
    pub eta_printed: f64,
    /// `D·V_d·I_L`, W.
    pub p_in: f64,
    /// `V_C·I_L`, W.
    pub p_out_terminal: f64,
    /// `V_OB·I_B`, W.
    pub p_out_emf: f64,
    /// `V_C/V_d`.
    pub a_v1: f64,
    /// `V_C/V_OB`.
    pub a_v2: f64,
}

/// Computes both efficiency figures at a DC operating point.
pub fn efficiency(params: &ChargerParams, op: &OperatingPoint) -> Result<EfficiencyReport> {
    if op.duty == 0.0 {
        return Err(Error::Domain(
            "efficiency is undefined at zero duty (no input power)".into(),
        ));
    }
    let a_v1 = op.v_c / op.v_d;
    let a_v2 = op.v_c / op.v_ob;
    let p_in = op.duty * op.v_d * op.i_l;
    let p_out_terminal = op.v_c * op.i_l;
    let p_out_emf = op.v_ob * op.i_b;

    // Verbatim closed form; goes non-finite in the r_in → 0 limit.
    let r_in = params.r_in();
    let rb_par_rin = params.r_b * r_in / (params.r_b + r_in);
    let bracket = a_v1 / rb_par_rin - op.duty / r_in;
    let eta_printed = params.r_b * bracket / ((a_v2 - 1.0) * op.duty);

    Ok(EfficiencyReport {
        eta_physical: p_out_terminal / p_in,
        eta_printed,
        p_in,
        p_out_terminal,
        p_out_emf,
        a_v1,
        a_v2,
    })
}
