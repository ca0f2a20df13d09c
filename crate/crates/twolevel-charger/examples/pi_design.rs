//! PI compensator design by crossover placement, and where the loop gain
//! actually crosses 0 dB with and without the compensator.
//!
//! ```bash
//! cargo run -p twolevel-charger --example pi_design
//! ```

use twolevel_charger::analysis::{
    control_to_battery_tf, crossover_frequency, frequency_response,
};
use twolevel_charger::control::{design_pi, loop_gain};
use twolevel_charger::model::{duty_for_current, linearize, ChargerParams};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();
    let op = duty_for_current(&params, 30.0, 800.0, 450.0)?;
    let plant = control_to_battery_tf(&linearize(&params, &op));

    let gains = design_pi(&plant, params.f_s)?;
    let omega_s = 2.0 * std::f64::consts::PI * params.f_s;
    println!("plant DC gain k = {:.2}, omega_s = {omega_s:.4e} rad/s", plant.dc_gain());
    println!(
        "designed gains: k_p = {:.2} duty/A, tau_i = {:.1} us (k.k_p/omega_s = {:.3})",
        gains.k_p,
        gains.tau_i * 1e6,
        plant.dc_gain() * gains.k_p / omega_s
    );

    let unity = loop_gain(None, &plant, params.v_m)?;
    let fr = frequency_response(&unity, 1.0, 1.0e8, 30)?;
    let fc = crossover_frequency(&fr)?;
    println!("\nuncompensated loop |T_u| crosses 0 dB at {:.2} kHz", fc.f_hz / 1e3);

    let compensated = loop_gain(Some(&gains), &plant, params.v_m)?;
    let fr = frequency_response(&compensated, 1.0, 1.0e8, 30)?;
    let fc = crossover_frequency(&fr)?;
    println!(
        "compensated loop |T| crosses 0 dB at {:.1} kHz (the design rule's \
         high-frequency shortcut nominally targets f_s = {:.0} kHz)",
        fc.f_hz / 1e3,
        params.f_s / 1e3
    );

    println!(
        "\nloop structure: {} poles (one at the origin), {} zeros",
        compensated.poles.len(),
        compensated.zeros.len()
    );
    Ok(())
}
