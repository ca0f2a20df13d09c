//! DC equilibria of the charger: solve for a prescribed duty ratio, invert
//! for a prescribed charging current, and check the balance residuals.
//!
//! ```bash
//! cargo run -p twolevel-charger --example steady_state
//! ```

use twolevel_charger::model::{duty_for_current, steady_state, ChargerParams};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();
    println!(
        "plant: R_in = {:.3} ohm, r_B || r_C = {:.3} ohm, T_s = {:.3} us\n",
        params.r_in(),
        params.r_parallel(),
        params.switching_period() * 1e6
    );

    // Forward: duty ratio -> equilibrium.
    let op = steady_state(&params, 0.9, 800.0, 450.0)?;
    println!(
        "duty 0.90 : V_C = {:.3} V, I_L = I_B = {:.3} A",
        op.v_c, op.i_l
    );
    let (volt_second, charge) = op.residuals(&params);
    println!("            balance residuals: {volt_second:.2e}, {charge:.2e} (relative)\n");

    // Inverse: charging current -> duty ratio. The three regimes of the
    // reference scenario.
    for (i_b, v_ob) in [(30.0, 450.0), (40.0, 450.0), (40.0, 350.0)] {
        let op = duty_for_current(&params, i_b, 800.0, v_ob)?;
        println!(
            "I_B = {i_b:>4.0} A @ v_OB = {v_ob:>3.0} V : duty = {:.4}, V_C = {:.1} V",
            op.duty, op.v_c
        );
    }

    // The lossless limit: V_C collapses onto D * V_d.
    let mut ideal = params;
    ideal.r_ds_on = 0.0;
    ideal.r_l = 0.0;
    let op = steady_state(&ideal, 0.9, 800.0, 450.0)?;
    println!("\nlossless limit, duty 0.90: V_C = {:.1} V (= 0.9 x 800)", op.v_c);

    // Requests beyond the feasible duty range are rejected.
    match duty_for_current(&params, 1.0e4, 800.0, 450.0) {
        Err(e) => println!("10 kA request: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
