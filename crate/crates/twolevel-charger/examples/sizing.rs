//! Minimum inductance and capacitance against ripple bounds, at the design
//! equilibrium and at a charging operating point.
//!
//! ```bash
//! cargo run -p twolevel-charger --example sizing
//! ```

use twolevel_charger::analysis::{min_capacitance, min_inductance};
use twolevel_charger::model::{duty_for_current, steady_state, ChargerParams};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();

    // Design equilibrium at duty 0.9 with an absolute 0.14 A bound: the
    // shipped 9.5 mH inductor.
    let op = steady_state(&params, 0.9, 800.0, 450.0)?;
    let l = min_inductance(&params, &op, 0.14)?;
    println!(
        "duty 0.90 equilibrium, dI_L = 0.14 A : L_min = {:.3} mH",
        l.minimum * 1e3
    );

    // 30 A charging point with a 5 % bound.
    let op30 = duty_for_current(&params, 30.0, 800.0, 450.0)?;
    let l30 = min_inductance(&params, &op30, 0.05 * op30.i_l)?;
    println!(
        "30 A point, dI_L = 5 % of {:.0} A      : L_min = {:.3} mH",
        op30.i_l,
        l30.minimum * 1e3
    );

    // Capacitor sizing needs an off-equilibrium capacitor voltage: the
    // worst case is the 400 V pre-charge level.
    let c = min_capacitance(&params, 400.0, 450.0, 30.0, 0.9, 0.02)?;
    println!(
        "pre-charge 400 V, dV_C = 0.02 V      : C_min = {:.2} mF",
        c.minimum * 1e3
    );

    // At the exact equilibrium the capacitor carries no net charge per
    // cycle, so the bound degenerates.
    let c_eq = min_capacitance(&params, op30.v_c, op30.v_ob, op30.i_l, op30.duty, 0.02)?;
    println!(
        "exact equilibrium                    : C_min = {} F (degenerate: {})",
        c_eq.minimum, c_eq.infeasible
    );

    // Halving a bound doubles the component.
    let tight = min_inductance(&params, &op30, 0.025 * op30.i_l)?;
    println!(
        "\nhalving the current bound doubles L_min: {:.3} mH -> {:.3} mH",
        l30.minimum * 1e3,
        tight.minimum * 1e3
    );
    Ok(())
}
