//! Bode data of the uncompensated loop gain and the crossover search.
//!
//! ```bash
//! cargo run -p twolevel-charger --example frequency_response
//! ```

use twolevel_charger::analysis::{
    control_to_battery_tf, crossover_frequency, frequency_response,
};
use twolevel_charger::control::loop_gain;
use twolevel_charger::model::{duty_for_current, linearize, ChargerParams};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();
    let op = duty_for_current(&params, 30.0, 800.0, 450.0)?;
    let plant = control_to_battery_tf(&linearize(&params, &op));
    let unity = loop_gain(None, &plant, params.v_m)?;

    let fr = frequency_response(&unity, 1.0, 1.0e7, 2)?;
    println!("      f [Hz]   |T_u| [dB]   phase [deg]");
    for p in &fr.points {
        println!("{:>12.1} {:>12.2} {:>13.2}", p.f_hz, p.mag_db, p.phase_deg);
    }

    let dense = frequency_response(&unity, 1.0, 1.0e7, 40)?;
    let fc = crossover_frequency(&dense)?;
    println!(
        "\nDC plateau {:.2} dB; 0 dB crossover at {:.2} kHz",
        dense.points[0].mag_db,
        fc.f_hz / 1e3
    );
    Ok(())
}
