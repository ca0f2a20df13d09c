//! Minimum inductance and capacitance for prescribed ripple bounds.
//!
//! Both formulas come from the first-half-cycle slopes of the inductor
//! current and capacitor voltage: the component must be large enough that the
//! ramp accumulated over `D·T_s` stays inside the allowed peak deviation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChargerParams, OperatingPoint};

/// Result of a sizing computation with the operating inputs echoed back.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SizingResult {
    /// Minimum component value (H or F). Negative only when `infeasible` is
    /// set for the inductor case; zero for a degenerate capacitor bracket.
    pub minimum: f64,
    pub duty: f64,
    pub v_c: f64,
    pub v_ob: f64,
    pub i_l: f64,
    /// The ripple bound the result was sized against (A or V).
    pub ripple_bound: f64,
    /// Set when the on-interval bracket is not positive: the requested point
    /// does not ramp the component the usual way.
    pub infeasible: bool,
}

/// Minimum inductance keeping the peak inductor-current ripple within
/// `delta_i_l`:
/// `L ≥ ½·(D·T_s/ΔI_L)·(V_d − ((r_B + R_in)/r_B)·V_C + (R_in/r_B)·V_OB)`.
///
/// A negative bracket (on-state inductor voltage negative at the requested
/// point) is reported as infeasible with the signed value preserved.
pub fn min_inductance(
    params: &ChargerParams,
    op: &OperatingPoint,
    delta_i_l: f64,
) -> Result<SizingResult> {
    if !(delta_i_l > 0.0) {
        return Err(Error::Domain(format!(
            "ripple bound delta_i_l must be > 0, got {delta_i_l}"
        )));
    }
    let r_in = params.r_in();
    let bracket =
        op.v_d - ((params.r_b + r_in) / params.r_b) * op.v_c + (r_in / params.r_b) * op.v_ob;
    let l_min = 0.5 * (op.duty * params.switching_period() / delta_i_l) * bracket;
    Ok(SizingResult {
        minimum: l_min,
        duty: op.duty,
        v_c: op.v_c,
        v_ob: op.v_ob,
        i_l: op.i_l,
        ripple_bound: delta_i_l,
        infeasible: bracket < 0.0,
    })
}

/// Minimum capacitance keeping the peak capacitor-voltage ripple within
/// `delta_v_c`:
/// `C ≥ ½·(D·T_s·(r_B∥r_C)/(r_C·ΔV_C))·(I_L − V_C/r_B + V_OB/r_B)`.
///
/// The operating inputs are explicit scalars rather than an equilibrium
/// point: at an exact equilibrium the bracket is identically zero (charge
/// balance), which is reported as a degenerate zero-capacitance result.
pub fn min_capacitance(
    params: &ChargerParams,
    v_c: f64,
    v_ob: f64,
    i_l: f64,
    duty: f64,
    delta_v_c: f64,
) -> Result<SizingResult> {
    if !(delta_v_c > 0.0) {
        return Err(Error::Domain(format!(
            "ripple bound delta_v_c must be > 0, got {delta_v_c}"
        )));
    }
    // (r_B ∥ r_C)/r_C in the cleared form r_B/(r_B + r_C).
    let ratio = params.r_b / (params.r_b + params.r_c);
    let bracket = i_l - v_c / params.r_b + v_ob / params.r_b;
    let degenerate = bracket <= 0.0;
    let c_min = if degenerate {
        0.0
    } else {
        0.5 * (duty * params.switching_period() * ratio / delta_v_c) * bracket
    };
    Ok(SizingResult {
        minimum: c_min,
        duty,
        v_c,
        v_ob,
        i_l,
        ripple_bound: delta_v_c,
        infeasible: degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{duty_for_current, steady_state};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn inductance_at_reference_equilibrium() {
        let p = ChargerParams::default();
        let op = steady_state(&p, 0.9, 800.0, 450.0).unwrap();
        let r = min_inductance(&p, &op, 0.14).unwrap();
        // Bracket is exactly V_d·(1 − D) = 80 V at the equilibrium.
        let bracket = 800.0 - 2.035 * op.v_c + 1.035 * 450.0;
        assert!(close(bracket, 80.0, 1e-10));
        let expected = 0.5 * (0.9 / 27e3 / 0.14) * bracket;
        assert!(close(r.minimum, expected, 1e-12));
        assert!(close(r.minimum, 9.52e-3, 1e-3));
        assert!(!r.infeasible);
    }

    #[test]
    fn inductance_at_charging_point() {
        let p = ChargerParams::default();
        let op = duty_for_current(&p, 30.0, 800.0, 450.0).unwrap();
        let r = min_inductance(&p, &op, 1.5).unwrap();
        let bracket = 800.0 - 2.035 * 480.0 + 1.035 * 450.0;
        assert!(close(bracket, 288.95, 1e-12));
        assert!(close(r.minimum, 0.5 * (op.duty / 27e3 / 1.5) * bracket, 1e-12));
        assert!(close(r.minimum, 2.28e-3, 1e-3));
    }

    #[test]
    fn inductance_inverse_linear_in_ripple() {
        let p = ChargerParams::default();
        let op = duty_for_current(&p, 30.0, 800.0, 450.0).unwrap();
        let a = min_inductance(&p, &op, 1.5).unwrap().minimum;
        let b = min_inductance(&p, &op, 0.75).unwrap().minimum;
        assert!(close(b, 2.0 * a, 1e-12));
        assert!(min_inductance(&p, &op, 0.0).is_err());
    }

    #[test]
    fn inductance_negative_bracket_flagged() {
        let p = ChargerParams::default();
        // Force an operating description where the on-state voltage is negative.
        let op = OperatingPoint {
            duty: 0.5,
            v_d: 100.0,
            v_ob: 0.0,
            i_l: 10.0,
            v_c: 500.0,
            i_b: 10.0,
        };
        let r = min_inductance(&p, &op, 1.0).unwrap();
        assert!(r.infeasible);
        assert!(r.minimum < 0.0, "signed value must be preserved");
    }

    #[test]
    fn capacitance_at_sweep_column_values() {
        let p = ChargerParams::default();
        let r = min_capacitance(&p, 400.0, 450.0, 30.0, 0.9, 0.02).unwrap();
        // bracket = 30 − 400 + 450 = 80 A; ratio = 1/2.5 = 0.4.
        let expected = 0.5 * (0.9 / 27e3 * 0.4 / 0.02) * 80.0;
        assert!(close(r.minimum, expected, 1e-12));
        assert!(close(r.minimum, 26.67e-3, 1e-3));
        assert!(!r.infeasible);
    }

    #[test]
    fn capacitance_degenerates_at_equilibrium() {
        let p = ChargerParams::default();
        let op = steady_state(&p, 0.9, 800.0, 450.0).unwrap();
        let r = min_capacitance(&p, op.v_c, op.v_ob, op.i_l, op.duty, 0.02).unwrap();
        assert!(r.infeasible);
        assert_eq!(r.minimum, 0.0);
    }

    #[test]
    fn capacitance_inverse_linear_in_ripple() {
        let p = ChargerParams::default();
        let a = min_capacitance(&p, 400.0, 450.0, 30.0, 0.9, 0.02).unwrap().minimum;
        let b = min_capacitance(&p, 400.0, 450.0, 30.0, 0.9, 0.01).unwrap().minimum;
        assert!(close(b, 2.0 * a, 1e-12));
    }
}
