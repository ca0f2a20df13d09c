//! Plant model of the two-level battery charger.
//!
//! The power stage is a buck-type half bridge: a high-side switch Q1 and a
//! low-side switch Q2 operate complementarily between a DC source `v_d` and
//! a filter made of an inductor `L` (series resistance `r_L`) and a capacitor
//! `C` (series resistance `r_C`). The load is a Thevenin battery: an internal
//! EMF `v_OB` in series with its internal resistance `r_B`. Each MOSFET
//! contributes its on-resistance `R_DS(on)`; the conduction path therefore
//! always sees `R_in = R_DS(on) + r_L`.
//!
//! With the switching function `s ∈ {0, 1}` (1 = Q1 closed), Kirchhoff's laws
//! at the output node give, for both half-cycles,
//!
//! ```text
//! L di_L/dt = v_L = s·v_d − (rp/r_C)·v_C − (rp/r_B)·v_OB − (R_in + rp)·i_L
//! C dv_C/dt = i_C = (rp/r_C)·i_L − (rp/(r_B·r_C))·(v_C − v_OB)
//!        i_B = (rp/r_B)·i_L + (rp/(r_B·r_C))·(v_C − v_OB)
//! ```
//!
//! where `rp = r_B ∥ r_C`. Only the source coupling term depends on the
//! switch, so the capacitor equation is switch-independent and the averaged
//! model is obtained by replacing `s` with the duty ratio `d`. The node
//! current identity `i_L = i_C + i_B` holds for every state and input.
//!
//! The coefficient ratios are evaluated in the cleared form
//! `rp/r_C = r_B/(r_B + r_C)`, `rp/r_B = r_C/(r_B + r_C)` and
//! `rp/(r_B·r_C) = 1/(r_B + r_C)`, which stay well-defined when one of the
//! two resistances is zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parallel combination of two resistances, `r1·r2/(r1 + r2)`.
///
/// Errors when both arguments are zero (the combination is undefined).
pub fn parallel(r1: f64, r2: f64) -> Result<f64> {
    if r1 < 0.0 || r2 < 0.0 {
        return Err(Error::Domain(format!(
            "parallel resistance needs nonnegative arguments, got ({r1}, {r2})"
        )));
    }
    if r1 == 0.0 && r2 == 0.0 {
        return Err(Error::Domain(
            "parallel resistance is undefined for a (0, 0) pair".into(),
        ));
    }
    Ok(r1 * r2 / (r1 + r2))
}

/// Constant plant parameters of the charger power stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargerParams {
    /// MOSFET on-state resistance, Ω.
    pub r_ds_on: f64,
    /// Inductor series resistance, Ω.
    pub r_l: f64,
    /// Capacitor series resistance, Ω.
    pub r_c: f64,
    /// Battery internal resistance, Ω.
    pub r_b: f64,
    /// Filter inductance, H.
    pub inductance: f64,
    /// Filter capacitance, F.
    pub capacitance: f64,
    /// Switching frequency, Hz.
    pub f_s: f64,
    /// PWM carrier peak, V.
    pub v_m: f64,
}

impl ChargerParams {
    /// Validates all invariants: resistances nonnegative (with `r_b + r_c > 0`
    /// so the output node is well-posed), reactive components and frequencies
    /// strictly positive.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        r_ds_on: f64,
        r_l: f64,
        r_c: f64,
        r_b: f64,
        inductance: f64,
        capacitance: f64,
        f_s: f64,
        v_m: f64,
    ) -> Result<Self> {
        let p = Self {
            r_ds_on,
            r_l,
            r_c,
            r_b,
            inductance,
            capacitance,
            f_s,
            v_m,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("r_ds_on", self.r_ds_on),
            ("r_l", self.r_l),
            ("r_c", self.r_c),
            ("r_b", self.r_b),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        let positive = [
            ("inductance", self.inductance),
            ("capacitance", self.capacitance),
            ("f_s", self.f_s),
            ("v_m", self.v_m),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if self.r_b + self.r_c == 0.0 {
            return Err(Error::Domain(
                "r_b and r_c must not both be zero (battery/capacitor node would be undefined)"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Total series input resistance of the conduction path, `R_DS(on) + r_L`.
    pub fn r_in(&self) -> f64 {
        self.r_ds_on + self.r_l
    }

    /// Switching period, s.
    pub fn switching_period(&self) -> f64 {
        1.0 / self.f_s
    }

    /// `r_B ∥ r_C`.
    pub fn r_parallel(&self) -> f64 {
        self.r_b * self.r_c / (self.r_b + self.r_c)
    }

    /// `rp/r_C = r_B/(r_B + r_C)` — capacitor-voltage coupling ratio.
    fn ratio_vc(&self) -> f64 {
        self.r_b / (self.r_b + self.r_c)
    }

    /// `rp/r_B = r_C/(r_B + r_C)` — battery-EMF coupling ratio.
    fn ratio_vob(&self) -> f64 {
        self.r_c / (self.r_b + self.r_c)
    }

    /// `rp/(r_B·r_C) = 1/(r_B + r_C)` — cross conductance, 1/Ω.
    fn conductance(&self) -> f64 {
        1.0 / (self.r_b + self.r_c)
    }
}

impl Default for ChargerParams {
    /// Reference design used by the bundled configuration and examples:
    /// 35 mΩ switches, 1 Ω / 1.5 Ω inductor and capacitor ESR, 1 Ω battery
    /// resistance, 9.5 mH, 100 nF, 27 kHz, 1 V carrier.
    fn default() -> Self {
        Self {
            r_ds_on: 35e-3,
            r_l: 1.0,
            r_c: 1.5,
            r_b: 1.0,
            inductance: 9.5e-3,
            capacitance: 100e-9,
            f_s: 27e3,
            v_m: 1.0,
        }
    }
}

/// Converter state: inductor current (A) and capacitor voltage (V).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConverterState {
    pub i_l: f64,
    pub v_c: f64,
}

impl ConverterState {
    pub fn is_finite(&self) -> bool {
        self.i_l.is_finite() && self.v_c.is_finite()
    }
}

/// External inputs: source voltage and battery EMF (both V).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExternalInputs {
    pub v_d: f64,
    pub v_ob: f64,
}

/// Binary switching function; `High` means the high-side switch Q1 conducts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwitchState {
    Low,
    High,
}

impl SwitchState {
    /// The value of the switching function, 0.0 or 1.0.
    pub fn factor(self) -> f64 {
        match self {
            SwitchState::Low => 0.0,
            SwitchState::High => 1.0,
        }
    }

    /// State of the complementary low-side switch Q2.
    pub fn complement(self) -> SwitchState {
        match self {
            SwitchState::Low => SwitchState::High,
            SwitchState::High => SwitchState::Low,
        }
    }
}

/// Time derivative of the converter state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    /// A/s
    pub di_l_dt: f64,
    /// V/s
    pub dv_c_dt: f64,
}

/// Instantaneous branch quantities at the output node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchOutputs {
    /// Battery current, A. Positive current charges the battery.
    pub i_b: f64,
    /// Inductor voltage, V.
    pub v_l: f64,
    /// Capacitor current, A.
    pub i_c: f64,
}

fn rhs(
    params: &ChargerParams,
    state: &ConverterState,
    inputs: &ExternalInputs,
    source_factor: f64,
) -> (StateDerivative, BranchOutputs) {
    let a = params.ratio_vc();
    let b = params.ratio_vob();
    let g = params.conductance();
    let cross = g * (state.v_c - inputs.v_ob);

    let v_l = source_factor * inputs.v_d
        - a * state.v_c
        - b * inputs.v_ob
        - (params.r_in() + params.r_parallel()) * state.i_l;
    let i_c = a * state.i_l - cross;
    let i_b = b * state.i_l + cross;

    (
        StateDerivative {
            di_l_dt: v_l / params.inductance,
            dv_c_dt: i_c / params.capacitance,
        },
        BranchOutputs { i_b, v_l, i_c },
    )
}

/// Per-interval switched dynamics: state derivative plus branch outputs for a
/// given switch position. Only the inductor equation depends on the switch.
pub fn rhs_switched(
    params: &ChargerParams,
    state: &ConverterState,
    inputs: &ExternalInputs,
    s: SwitchState,
) -> (StateDerivative, BranchOutputs) {
    rhs(params, state, inputs, s.factor())
}

/// Duty-averaged dynamics: identical to [`rhs_switched`] with the switching
/// function replaced by the duty ratio in the source coupling term.
pub fn rhs_averaged(
    params: &ChargerParams,
    state: &ConverterState,
    inputs: &ExternalInputs,
    d: f64,
) -> Result<(StateDerivative, BranchOutputs)> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain(format!("duty ratio must be in [0, 1], got {d}")));
    }
    Ok(rhs(params, state, inputs, d))
}

/// Battery current for a given state and EMF (switch-independent).
pub fn battery_current(params: &ChargerParams, state: &ConverterState, v_ob: f64) -> f64 {
    params.ratio_vob() * state.i_l + params.conductance() * (state.v_c - v_ob)
}

/// DC equilibrium of the averaged model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Steady duty ratio, dimensionless in [0, 1].
    pub duty: f64,
    /// Source voltage, V.
    pub v_d: f64,
    /// Battery EMF, V.
    pub v_ob: f64,
    /// Inductor current, A.
    pub i_l: f64,
    /// Capacitor voltage, V.
    pub v_c: f64,
    /// Battery current, A (equals `i_l` at DC: the capacitor carries zero
    /// average current).
    pub i_b: f64,
}

impl OperatingPoint {
    /// Relative residuals of the volt-second balance and the charge balance,
    /// each normalized by the largest participating term.
    pub fn residuals(&self, params: &ChargerParams) -> (f64, f64) {
        let a = params.ratio_vc();
        let b = params.ratio_vob();
        let r_tot = params.r_in() + params.r_parallel();

        let t1 = self.duty * self.v_d;
        let t2 = a * self.v_c;
        let t3 = b * self.v_ob;
        let t4 = r_tot * self.i_l;
        let scale1 = t1.abs().max(t2.abs()).max(t3.abs()).max(t4.abs()).max(1e-300);
        let volt_second = (t1 - t2 - t3 - t4) / scale1;

        let u1 = params.r_b * self.i_l;
        let scale2 = u1.abs().max(self.v_c.abs()).max(self.v_ob.abs()).max(1e-300);
        let charge = (u1 - self.v_c + self.v_ob) / scale2;

        (volt_second, charge)
    }
}

/// Solves the DC equilibrium for a prescribed duty ratio.
///
/// Uses the cleared rational form `I_L = (D·V_d − V_OB)/(r_B + R_in)`,
/// `V_C = V_OB + r_B·I_L` — algebraically identical to the elimination of
/// the two balance equations, well-defined at `R_in = 0` and free of the
/// `V_C − V_OB` cancellation when `r_B` is small.
pub fn steady_state(
    params: &ChargerParams,
    duty: f64,
    v_d: f64,
    v_ob: f64,
) -> Result<OperatingPoint> {
    if !(0.0..=1.0).contains(&duty) {
        return Err(Error::Domain(format!(
            "duty ratio must be in [0, 1], got {duty}"
        )));
    }
    let r_total = params.r_b + params.r_in();
    if r_total == 0.0 {
        return Err(Error::Domain(
            "equilibrium is singular for a lossless path into an ideal battery".into(),
        ));
    }
    let i_l = (duty * v_d - v_ob) / r_total;
    let v_c = v_ob + params.r_b * i_l;
    Ok(OperatingPoint {
        duty,
        v_d,
        v_ob,
        i_l,
        v_c,
        i_b: i_l,
    })
}

/// Finds the duty ratio that charges the battery with `i_b_target` amperes,
/// inverting the two balance equations.
pub fn duty_for_current(
    params: &ChargerParams,
    i_b_target: f64,
    v_d: f64,
    v_ob: f64,
) -> Result<OperatingPoint> {
    if v_d <= 0.0 {
        return Err(Error::Domain(format!("v_d must be > 0, got {v_d}")));
    }
    let v_c = v_ob + params.r_b * i_b_target;
    let duty = (params.ratio_vc() * v_c
        + params.ratio_vob() * v_ob
        + (params.r_in() + params.r_parallel()) * i_b_target)
        / v_d;
    if !(0.0..=1.0).contains(&duty) {
        return Err(Error::InfeasibleOperatingPoint { duty });
    }
    Ok(OperatingPoint {
        duty,
        v_d,
        v_ob,
        i_l: i_b_target,
        v_c,
        i_b: i_b_target,
    })
}

/// Small-signal state-space model around an operating point.
///
/// State `(î_L, v̂_C)`; inputs ordered `(v̂_d, v̂_OB, d̂)`; outputs ordered
/// `(î_L, v̂_C, î_B)`. The first two outputs are the states themselves, so
/// rows 1–2 of `c` form the identity and rows 1–2 of `d` are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpaceModel {
    pub a: [[f64; 2]; 2],
    pub b: [[f64; 3]; 2],
    pub c: [[f64; 2]; 3],
    pub d: [[f64; 3]; 3],
}

impl StateSpaceModel {
    /// Eigenvalues of the state matrix via the quadratic formula on
    /// trace/determinant, with the numerically stable root ordering.
    pub fn eigenvalues(&self) -> (num_complex::Complex64, num_complex::Complex64) {
        let tr = self.a[0][0] + self.a[1][1];
        let det = self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0];
        crate::poly::quadratic_roots(1.0, -tr, det)
    }
}

/// Linearizes the averaged model around `op`. The model is affine in the
/// state, so the matrices are exact (no truncation error).
pub fn linearize(params: &ChargerParams, op: &OperatingPoint) -> StateSpaceModel {
    let a = params.ratio_vc();
    let b = params.ratio_vob();
    let g = params.conductance();
    let l = params.inductance;
    let c = params.capacitance;
    let r_tot = params.r_in() + params.r_parallel();

    StateSpaceModel {
        a: [[-r_tot / l, -a / l], [a / c, -g / c]],
        b: [[op.duty / l, -b / l, op.v_d / l], [0.0, g / c, 0.0]],
        c: [[1.0, 0.0], [0.0, 1.0], [b, g]],
        d: [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, -g, 0.0]],
    }
}
