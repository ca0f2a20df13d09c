//! Small-signal model around an operating point: state-space matrices,
//! eigenvalues, and the duty-to-battery-current transfer function with its
//! component-form DC-gain cross-check.
//!
//! ```bash
//! cargo run -p twolevel-charger --example small_signal
//! ```

use twolevel_charger::analysis::{control_to_battery_tf, dc_gain_component_form};
use twolevel_charger::model::{linearize, steady_state, ChargerParams};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();
    let op = steady_state(&params, 0.9, 800.0, 450.0)?;
    let model = linearize(&params, &op);

    println!("A = [{:>12.3} {:>12.3}]", model.a[0][0], model.a[0][1]);
    println!("    [{:>12.3e} {:>12.3e}]", model.a[1][0], model.a[1][1]);
    println!(
        "B columns (v_d, v_ob, d), first row: {:.3}, {:.3}, {:.1}",
        model.b[0][0], model.b[0][1], model.b[0][2]
    );
    println!(
        "C row for i_b: [{:.3} {:.3}], D(i_b, v_ob) = {:.3}",
        model.c[2][0], model.c[2][1], model.d[2][1]
    );

    let (fast, slow) = {
        let (e1, e2) = model.eigenvalues();
        if e1.norm() > e2.norm() {
            (e1, e2)
        } else {
            (e2, e1)
        }
    };
    println!(
        "\neigenvalues: {:.1} rad/s (slow, tau = {:.2} ms) and {:.4e} rad/s (fast, tau = {:.2} us)",
        slow.re,
        -1e3 / slow.re,
        fast.re,
        -1e6 / fast.re
    );

    let tf = control_to_battery_tf(&model);
    println!("\ni_B(s)/d(s):");
    println!("  DC gain k  = {:.4} A per unit duty", tf.dc_gain());
    println!(
        "  cross-check k from component values and pole magnitudes = {:.4}",
        dc_gain_component_form(&params, op.v_d, &tf)
    );
    println!("  zero  at {:.4e} rad/s", tf.zeros[0].re);
    for p in &tf.poles {
        println!("  pole  at {:.4e} rad/s", p.re);
    }
    Ok(())
}
