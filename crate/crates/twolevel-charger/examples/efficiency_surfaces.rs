//! Efficiency at the design point and parasitic-sensitivity surfaces:
//! how V_C, the sizing results and the efficiency react to the switch and
//! inductor resistances.
//!
//! ```bash
//! cargo run -p twolevel-charger --example efficiency_surfaces
//! ```

use twolevel_charger::analysis::{
    default_axes, efficiency, surface, SurfaceQuantity, SweepConditions,
};
use twolevel_charger::model::{steady_state, ChargerParams};

fn main() -> twolevel_charger::Result<()> {
    let params = ChargerParams::default();
    let op = steady_state(&params, 0.9, 800.0, 450.0)?;
    let report = efficiency(&params, &op)?;
    println!("design point (duty 0.90):");
    println!("  P_in           = {:.1} W", report.p_in);
    println!("  P_out terminal = {:.1} W", report.p_out_terminal);
    println!("  P_out EMF      = {:.1} W", report.p_out_emf);
    println!(
        "  eta            = {:.4}  (A_v1 = {:.4}, A_v2 = {:.4})",
        report.eta_physical, report.a_v1, report.a_v2
    );
    println!(
        "  printed closed form = {:.3} — exceeds 1, kept only for comparison",
        report.eta_printed
    );

    let conditions = SweepConditions::default();
    let quantities = [
        SurfaceQuantity::CapacitorVoltage,
        SurfaceQuantity::MinInductance,
        SurfaceQuantity::MinCapacitance,
        SurfaceQuantity::Efficiency,
    ];
    println!("\nsurfaces over the parasitic grid (1e-6 .. 1e3 ohm, log):");
    for quantity in quantities {
        let (x, y) = default_axes(quantity, 5)?;
        let grid = surface(quantity, &params, x, y, &conditions)?;
        let nx = grid.x.samples.len();
        let ny = grid.y.samples.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..nx {
            for j in 0..ny {
                lo = lo.min(grid.value(i, j));
                hi = hi.max(grid.value(i, j));
            }
        }
        println!(
            "  {:<6} over ({}, {}): corner {:.4e}, far corner {:.4e}, range [{:.3e}, {:.3e}]",
            quantity.name(),
            grid.x.name,
            grid.y.name,
            grid.value(0, 0),
            grid.value(nx - 1, ny - 1),
            lo,
            hi
        );
    }

    println!(
        "\nefficiency peaks at the minimal-parasitics corner and decays as the \
         series resistances grow; the capacitor requirement barely reacts to r_l."
    );
    Ok(())
}
