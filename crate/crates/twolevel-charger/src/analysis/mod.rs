//! Steady-state figures of merit, transfer-function extraction,
//! frequency-domain analyses and parameter sweeps.

mod dynamics;
mod efficiency;
mod frequency;
mod sizing;
mod surface;
mod transfer;

pub use dynamics::{root_locus, step_response, StepResponse};
pub use efficiency::{efficiency, EfficiencyReport};
pub use frequency::{
    crossover_frequency, frequency_response, Crossover, FrequencyPoint, FrequencyResponse,
};
pub use sizing::{min_capacitance, min_inductance, SizingResult};
pub use surface::{
    default_axes, surface, Axis, SurfaceGrid, SurfaceQuantity, SweepConditions, SWEEP_R_MAX,
    SWEEP_R_MIN,
};
pub use transfer::{control_to_battery_tf, dc_gain_component_form, RationalTransferFunction};
