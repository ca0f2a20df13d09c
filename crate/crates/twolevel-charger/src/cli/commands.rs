//! Subcommand dispatch for the `twolevel-charger` binary.
//!
//! Exit status: 0 on success, 1 on validation errors (arguments, config,
//! domain preconditions), 2 on numeric failures (divergence, missing
//! crossover, degenerate polynomials).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    control_to_battery_tf, crossover_frequency, dc_gain_component_form, default_axes,
    frequency_response, min_capacitance, min_inductance, root_locus, step_response, surface,
    SurfaceQuantity, SweepConditions,
};
use crate::cli::config::{load_config, LoadedConfig};
use crate::cli::output::{
    bode_csv, compute_metrics, locus_csv, sig9, step_csv, surface_csv, to_json_pretty, trace_csv,
    write_atomic,
};
use crate::control::{design_pi_with_convention, loop_gain, PiGains};
use crate::error::{Error, Result};
use crate::model::{duty_for_current, linearize, steady_state, OperatingPoint};

#[derive(Parser)]
#[command(
    name = "twolevel-charger",
    version,
    about = "Analysis and simulation toolkit for a non-ideal two-level battery charger"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the TOML configuration file.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct PointArgs {
    /// Solve at this duty ratio instead of the scenario reference.
    #[arg(long, conflicts_with = "ib")]
    duty: Option<f64>,
    /// Solve for this battery charging current (A).
    #[arg(long)]
    ib: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// DC operating point (flat key=value listing plus JSON)
    SteadyState {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Small-signal state-space matrices at an operating point
    Linearize {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Duty-to-battery-current transfer function with the component-form
    /// DC-gain cross-check
    Tf {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// PI gains from the crossover-placement rule plus both measured
    /// loop crossovers
    Design {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Loop-gain Bode data as CSV (f_hz,mag_db,phase_deg)
    Bode {
        #[command(flatten)]
        config: ConfigArg,
        /// Include the PI compensator in the loop.
        #[arg(long)]
        compensated: bool,
        #[arg(long, default_value_t = 1.0)]
        fmin: f64,
        #[arg(long, default_value_t = 1.0e7)]
        fmax: f64,
        /// Samples per decade.
        #[arg(long, default_value_t = 20)]
        ppd: usize,
        #[arg(long, default_value = "bode.csv")]
        out: PathBuf,
    },
    /// Closed-loop poles over a gain sweep as CSV (k,re,im)
    Rootlocus {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 1.0e-3)]
        kmin: f64,
        #[arg(long, default_value_t = 1.0e3)]
        kmax: f64,
        #[arg(long, default_value_t = 61)]
        points: usize,
        #[arg(long, default_value = "rootlocus.csv")]
        out: PathBuf,
    },
    /// Unity-feedback closed-loop step response as CSV (t,y)
    Step {
        #[command(flatten)]
        config: ConfigArg,
        /// Horizon, s.
        #[arg(long, default_value_t = 5.0e-3)]
        horizon: f64,
        /// Integration step, s.
        #[arg(long, default_value_t = 5.0e-8)]
        dt: f64,
        #[arg(long, default_value = "step.csv")]
        out: PathBuf,
    },
    /// Run the configured scenario; write the trace CSV and a metrics JSON
    Simulate {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = "trace.csv")]
        out: PathBuf,
        #[arg(long, default_value = "metrics.json")]
        metrics: PathBuf,
    },
    /// Minimum L and C for the configured ripple bounds
    Sizing {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Evaluate a quantity over the parasitic sweep grid as CSV (x,y,value)
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        /// One of: v_c, l_min, c_min, eta.
        #[arg(long)]
        quantity: String,
        #[arg(long, default_value = "surface.csv")]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        points_per_decade: usize,
    },
}

/// Entry point used by `main`: parses `argv`, writes human output to stdout.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut stdout = std::io::stdout();
    run_with_output(&mut stdout, args)
}

/// Testable entry point with an explicit output sink.
pub fn run_with_output<I, S>(out: &mut dyn Write, args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not failures.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(out, cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_point(loaded: &LoadedConfig, point: &PointArgs) -> Result<OperatingPoint> {
    let v_d = loaded.scenario.v_d;
    let v_ob = loaded.scenario.v_ob_schedule[0].1;
    match (point.duty, point.ib) {
        (Some(d), None) => steady_state(&loaded.params, d, v_d, v_ob),
        (None, Some(ib)) => duty_for_current(&loaded.params, ib, v_d, v_ob),
        (None, None) => Ok(loaded.first_op),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}

/// Config gains if present, otherwise the design rule.
fn resolve_gains(loaded: &LoadedConfig) -> Result<PiGains> {
    if let Some(g) = loaded.gains {
        return Ok(g);
    }
    let op = loaded.first_op;
    let plant = control_to_battery_tf(&linearize(&loaded.params, &op));
    design_pi_with_convention(&plant, loaded.params.f_s, loaded.convention)
}

fn dispatch(out: &mut dyn Write, command: Command) -> Result<()> {
    match command {
        Command::SteadyState { config, point } => {
            let loaded = load_config(&config.config)?;
            let op = resolve_point(&loaded, &point)?;
            for (key, value) in [
                ("duty", op.duty),
                ("v_d", op.v_d),
                ("v_ob", op.v_ob),
                ("i_l", op.i_l),
                ("v_c", op.v_c),
                ("i_b", op.i_b),
            ] {
                writeln!(out, "{key}={}", sig9(value))?;
            }
            writeln!(out)?;
            writeln!(out, "{}", to_json_pretty(&op))?;
        }
        Command::Linearize { config, point } => {
            let loaded = load_config(&config.config)?;
            let op = resolve_point(&loaded, &point)?;
            let model = linearize(&loaded.params, &op);
            let row_text =
                |row: &[f64]| row.iter().map(|v| sig9(*v)).collect::<Vec<_>>().join(", ");
            for (i, row) in model.a.iter().enumerate() {
                writeln!(out, "a[{i}] = [{}]", row_text(row))?;
            }
            for (i, row) in model.b.iter().enumerate() {
                writeln!(out, "b[{i}] = [{}]", row_text(row))?;
            }
            for (i, row) in model.c.iter().enumerate() {
                writeln!(out, "c[{i}] = [{}]", row_text(row))?;
            }
            for (i, row) in model.d.iter().enumerate() {
                writeln!(out, "d[{i}] = [{}]", row_text(row))?;
            }
            writeln!(out)?;
            writeln!(out, "{}", to_json_pretty(&model))?;
        }
        Command::Tf { config } => {
            let loaded = load_config(&config.config)?;
            let op = loaded.first_op;
            let tf = control_to_battery_tf(&linearize(&loaded.params, &op));
            let cross = dc_gain_component_form(&loaded.params, op.v_d, &tf);
            writeln!(out, "k={}", sig9(tf.dc_gain()))?;
            writeln!(out, "k_component_form={}", sig9(cross))?;
            for z in &tf.zeros {
                writeln!(out, "zero={},{}", sig9(z.re), sig9(z.im))?;
            }
            for p in &tf.poles {
                writeln!(out, "pole={},{}", sig9(p.re), sig9(p.im))?;
            }
            writeln!(out)?;
            writeln!(out, "{}", to_json_pretty(&tf))?;
        }
        Command::Design { config } => {
            let loaded = load_config(&config.config)?;
            let op = loaded.first_op;
            let plant = control_to_battery_tf(&linearize(&loaded.params, &op));
            let gains = resolve_gains(&loaded)?;

            let unity = loop_gain(None, &plant, loaded.params.v_m)?;
            let fr_u = frequency_response(&unity, 1.0, 1.0e8, 30)?;
            let fc_u = crossover_frequency(&fr_u)?;
            let compensated = loop_gain(Some(&gains), &plant, loaded.params.v_m)?;
            let fr_c = frequency_response(&compensated, 1.0, 1.0e8, 30)?;
            let fc_c = crossover_frequency(&fr_c)?;

            writeln!(out, "k_p={}", sig9(gains.k_p))?;
            writeln!(out, "tau_i={}", sig9(gains.tau_i))?;
            writeln!(out, "f_c_uncompensated={}", sig9(fc_u.f_hz))?;
            writeln!(out, "f_c_compensated={}", sig9(fc_c.f_hz))?;
            writeln!(
                out,
                "# tau_i = {:.3} us; uncompensated crossover {:.2} kHz; compensated {:.2} kHz",
                gains.tau_i * 1e6,
                fc_u.f_hz / 1e3,
                fc_c.f_hz / 1e3
            )?;
        }
        Command::Bode {
            config,
            compensated,
            fmin,
            fmax,
            ppd,
            out: out_path,
        } => {
            let loaded = load_config(&config.config)?;
            let plant = control_to_battery_tf(&linearize(&loaded.params, &loaded.first_op));
            let loop_tf = if compensated {
                let gains = resolve_gains(&loaded)?;
                loop_gain(Some(&gains), &plant, loaded.params.v_m)?
            } else {
                loop_gain(None, &plant, loaded.params.v_m)?
            };
            let fr = frequency_response(&loop_tf, fmin, fmax, ppd)?;
            write_atomic(&out_path, &bode_csv(&fr))?;
            writeln!(out, "wrote {} ({} points)", out_path.display(), fr.points.len())?;
        }
        Command::Rootlocus {
            config,
            kmin,
            kmax,
            points,
            out: out_path,
        } => {
            let loaded = load_config(&config.config)?;
            let plant = control_to_battery_tf(&linearize(&loaded.params, &loaded.first_op));
            let gains = resolve_gains(&loaded)?;
            let open = loop_gain(Some(&gains), &plant, loaded.params.v_m)?;
            if !(kmin > 0.0) || !(kmax > kmin) || points < 2 {
                return Err(Error::Domain(format!(
                    "rootlocus needs 0 < kmin < kmax and points >= 2, got ({kmin}, {kmax}, {points})"
                )));
            }
            let grid: Vec<f64> = (0..points)
                .map(|i| kmin * (kmax / kmin).powf(i as f64 / (points - 1) as f64))
                .collect();
            let locus = root_locus(&open, &grid)?;
            write_atomic(&out_path, &locus_csv(&locus))?;
            writeln!(out, "wrote {} ({} gains)", out_path.display(), locus.len())?;
        }
        Command::Step {
            config,
            horizon,
            dt,
            out: out_path,
        } => {
            let loaded = load_config(&config.config)?;
            let plant = control_to_battery_tf(&linearize(&loaded.params, &loaded.first_op));
            let gains = resolve_gains(&loaded)?;
            let loop_tf = loop_gain(Some(&gains), &plant, loaded.params.v_m)?;
            let resp = step_response(&loop_tf, horizon, dt)?;
            if resp.unstable {
                eprintln!("warning: closed loop has a pole with positive real part");
            }
            write_atomic(&out_path, &step_csv(&resp))?;
            writeln!(out, "wrote {} ({} samples)", out_path.display(), resp.samples.len())?;
        }
        Command::Simulate {
            config,
            out: out_path,
            metrics,
        } => {
            let loaded = load_config(&config.config)?;
            let gains = resolve_gains(&loaded)?;
            let trace = crate::sim::run(&loaded.params, &gains, &loaded.modulator, &loaded.scenario)?;
            let mut events: Vec<f64> = loaded
                .scenario
                .ref_schedule
                .iter()
                .chain(loaded.scenario.v_ob_schedule.iter())
                .map(|(t, _)| *t)
                .collect();
            events.sort_by(|a, b| a.partial_cmp(b).unwrap());
            events.dedup();
            let report = compute_metrics(&trace, &events)?;
            write_atomic(&out_path, &trace_csv(&trace))?;
            write_atomic(&metrics, &to_json_pretty(&report))?;
            writeln!(
                out,
                "wrote {} ({} samples) and {}",
                out_path.display(),
                trace.samples.len(),
                metrics.display()
            )?;
            for w in &report.windows {
                writeln!(
                    out,
                    "window [{:.1}, {:.1}) ms: i_b = {:.3} A, v_c = {:.2} V, d = {:.4}",
                    w.t_start * 1e3,
                    w.t_end * 1e3,
                    w.i_b_mean,
                    w.v_c_mean,
                    w.d_mean
                )?;
            }
        }
        Command::Sizing { config } => {
            let loaded = load_config(&config.config)?;
            let op = loaded.first_op;
            let l = min_inductance(&loaded.params, &op, loaded.sizing.delta_i_l)?;
            // Capacitor sizing uses the pre-charge capacitor voltage (the
            // scenario's initial value): at the exact equilibrium the sizing
            // bracket is identically zero.
            let c = min_capacitance(
                &loaded.params,
                loaded.scenario.v_c0,
                op.v_ob,
                op.i_l,
                op.duty,
                loaded.sizing.delta_v_c,
            )?;
            writeln!(out, "delta_i_l={}", sig9(loaded.sizing.delta_i_l))?;
            writeln!(out, "delta_v_c={}", sig9(loaded.sizing.delta_v_c))?;
            writeln!(out, "l_min={}", sig9(l.minimum))?;
            writeln!(out, "c_min={}", sig9(c.minimum))?;
            writeln!(
                out,
                "# L_min = {:.3} mH (infeasible: {}), C_min = {:.3} mF (degenerate: {})",
                l.minimum * 1e3,
                l.infeasible,
                c.minimum * 1e3,
                c.infeasible
            )?;
            writeln!(out)?;
            writeln!(out, "{}", to_json_pretty(&(l, c)))?;
        }
        Command::Sweep {
            config,
            quantity,
            out: out_path,
            points_per_decade,
        } => {
            let loaded = load_config(&config.config)?;
            let quantity = match quantity.as_str() {
                "v_c" => SurfaceQuantity::CapacitorVoltage,
                "l_min" => SurfaceQuantity::MinInductance,
                "c_min" => SurfaceQuantity::MinCapacitance,
                "eta" => SurfaceQuantity::Efficiency,
                other => {
                    return Err(Error::Domain(format!(
                        "unknown sweep quantity {other:?} (expected v_c, l_min, c_min or eta)"
                    )))
                }
            };
            let conditions = SweepConditions {
                v_d: loaded.scenario.v_d,
                v_ob: loaded.scenario.v_ob_schedule[0].1,
                ..SweepConditions::default()
            };
            let (x, y) = default_axes(quantity, points_per_decade)?;
            let grid = surface(quantity, &loaded.params, x, y, &conditions)?;
            write_atomic(&out_path, &surface_csv(&grid))?;
            writeln!(
                out,
                "wrote {} ({}x{} grid of {})",
                out_path.display(),
                grid.x.samples.len(),
                grid.y.samples.len(),
                quantity.name()
            )?;
        }
    }
    Ok(())
}
