//! Full closed-loop PWM simulation of the reference charging scenario:
//! regulate 30 A from a discharged start, step the reference to 40 A at
//! 60 ms, drop the battery EMF from 450 V to 350 V at 90 ms.
//!
//! ```bash
//! cargo run --release -p twolevel-charger --example closed_loop_sim
//! ```

use twolevel_charger::analysis::control_to_battery_tf;
use twolevel_charger::control::{design_pi, ModulatorConfig};
use twolevel_charger::model::{duty_for_current, linearize, ChargerParams};
use twolevel_charger::sim::{measure_ripple, run, settling_time, Scenario, SimMode};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();
    let op = duty_for_current(&params, 30.0, 800.0, 450.0)?;
    let plant = control_to_battery_tf(&linearize(&params, &op));
    let gains = design_pi(&plant, params.f_s)?;
    let modulator = ModulatorConfig::new(params.v_m, params.switching_period(), 0.0, 1.0)?;

    let scenario = Scenario {
        duration: 0.120,
        h: params.switching_period() / 200.0,
        i_l0: 0.0,
        v_c0: 400.0,
        v_d: 800.0,
        ref_schedule: vec![(0.0, 30.0), (0.060, 40.0)],
        v_ob_schedule: vec![(0.0, 450.0), (0.090, 350.0)],
        mode: SimMode::Switched,
        fixed_duty: None,
    };

    let started = std::time::Instant::now();
    let trace = run(&params, &gains, &modulator, &scenario)?;
    println!(
        "{} steps of h = {:.1} ns in {:?}\n",
        trace.samples.len() - 1,
        scenario.h * 1e9,
        started.elapsed()
    );

    println!("steady windows (trailing 10 ms of each segment):");
    for (t0, t1) in [(0.050, 0.060), (0.080, 0.090), (0.110, 0.120)] {
        let i_b = trace.mean_over(t0, t1, |s| s.i_b);
        let v_c = trace.mean_over(t0, t1, |s| s.v_c);
        let d = trace.mean_over(t0, t1, |s| s.d);
        let duty = trace.mean_over(t0, t1, |s| s.s_f);
        let err = trace.mean_over(t0, t1, |s| s.i_b_ref - s.i_b);
        let ripple = measure_ripple(&trace, (t0, t1))?;
        println!(
            "  [{:>3.0}, {:>3.0}) ms: i_b = {i_b:7.3} A (err {err:+.4} A), v_c = {v_c:6.2} V, \
             d = {d:.4}, realized duty {duty:.4}, ripple {:.3} %/{:.3} %",
            t0 * 1e3,
            t1 * 1e3,
            ripple.i_l_percent,
            ripple.v_c_percent
        );
    }

    println!("\nsettling of i_b (2 % band):");
    let startup = settling_time(&trace.slice(0.0, 0.060), 0.0, 0.02)?;
    let step = settling_time(&trace.slice(0.060, 0.090), 0.060, 0.02)?;
    let load = settling_time(&trace.slice(0.090, 0.120), 0.090, 0.02)?;
    println!(
        "  startup          : {:.3} ms (peak excursion {:.2} A)",
        startup.settling_time * 1e3,
        startup.peak_excursion
    );
    println!(
        "  reference step   : {:.3} ms",
        step.settling_time * 1e3
    );
    println!(
        "  EMF disturbance  : {:.1} us pulse-like transient (peak {:.2} A)",
        load.settling_time * 1e6,
        load.peak_excursion
    );
    Ok(())
}
