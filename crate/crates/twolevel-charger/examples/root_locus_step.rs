//! Closed-loop pole migration over a gain sweep and the unity-feedback step
//! response of the designed loop.
//!
//! ```bash
//! cargo run -p twolevel-charger --example root_locus_step
//! ```

use twolevel_charger::analysis::{control_to_battery_tf, root_locus, step_response};
use twolevel_charger::control::{design_pi, loop_gain};
use twolevel_charger::model::{duty_for_current, linearize, ChargerParams};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();
    let op = duty_for_current(&params, 30.0, 800.0, 450.0)?;
    let plant = control_to_battery_tf(&linearize(&params, &op));
    let gains = design_pi(&plant, params.f_s)?;
    let open = loop_gain(Some(&gains), &plant, params.v_m)?;

    println!("open-loop poles:  {:?}", real_parts(&open.poles));
    println!("open-loop zeros:  {:?}", real_parts(&open.zeros));

    let sweep: Vec<f64> = (-6..=0).map(|e| 10f64.powi(e)).collect();
    let locus = root_locus(&open, &sweep)?;
    println!("\n        K    closed-loop poles [rad/s]");
    for (k, poles) in &locus {
        let all_lhp = poles.iter().all(|p| p.re < 0.0);
        println!(
            "{k:>9.0e}    {:?}{}",
            real_parts(poles),
            if all_lhp { "" } else { "  <-- RHP!" }
        );
    }

    let resp = step_response(&open, 5.0e-3, 5.0e-8)?;
    println!(
        "\nunity-feedback step response: final value {:.6}, unstable: {}",
        resp.samples.last().unwrap().1,
        resp.unstable
    );
    let settle = resp
        .samples
        .iter()
        .rev()
        .find(|(_, y)| (y - 1.0).abs() > 0.02)
        .map(|(t, _)| *t)
        .unwrap_or(0.0);
    println!(
        "2 % settling at {:.2} us (the compensator zero cancels the slow plant \
         pole, so only the fast modes remain)",
        settle * 1e6
    );
    Ok(())
}

fn real_parts(cs: &[num_complex::Complex64]) -> Vec<String> {
    cs.iter()
        .map(|c| {
            if c.im == 0.0 {
                format!("{:.3e}", c.re)
            } else {
                format!("{:.3e}{:+.3e}j", c.re, c.im)
            }
        })
        .collect()
}
