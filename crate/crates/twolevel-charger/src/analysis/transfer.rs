//! Rational transfer functions and the duty-to-battery-current extraction.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChargerParams, StateSpaceModel};
use crate::poly;

/// Rational transfer function in zero/pole/gain form,
/// `G(s) = gain · Π(s − z_i) / Π(s − p_j)`.
///
/// For systems without a pole at the origin the DC gain is finite and equals
/// [`RationalTransferFunction::dc_gain`]; loop gains with integral action are
/// representable too (their DC gain is infinite).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalTransferFunction {
    pub gain: f64,
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
}

impl RationalTransferFunction {
    /// Builds the function from its DC gain and corner locations, converting
    /// `k · Π(1 − s/z) / Π(1 − s/p)` into the leading-gain form. All corners
    /// must be nonzero.
    pub fn from_dc_gain(k: f64, zeros: Vec<Complex64>, poles: Vec<Complex64>) -> Result<Self> {
        // G(0) = gain·Π(−z)/Π(−p) must equal k.
        let mut gain = Complex64::new(k, 0.0);
        for p in &poles {
            if p.norm() == 0.0 {
                return Err(Error::Domain(
                    "DC-gain form cannot hold a pole at the origin".into(),
                ));
            }
            gain *= -p;
        }
        for z in &zeros {
            if z.norm() == 0.0 {
                return Err(Error::Domain(
                    "DC-gain form cannot hold a zero at the origin".into(),
                ));
            }
            gain /= -z;
        }
        debug_assert!(gain.im.abs() <= 1e-12 * gain.norm().max(1e-300));
        Ok(Self {
            gain: gain.re,
            zeros,
            poles,
        })
    }

    /// Gain at `s = 0`; infinite in magnitude when a pole sits at the origin.
    pub fn dc_gain(&self) -> f64 {
        let v = self.evaluate(Complex64::new(0.0, 0.0));
        v.re
    }

    /// Evaluates the function at a complex frequency using the product form,
    /// which keeps magnitudes balanced for widely separated corners.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        let mut v = Complex64::new(self.gain, 0.0);
        for z in &self.zeros {
            v *= s - z;
        }
        for p in &self.poles {
            v /= s - p;
        }
        v
    }

    /// `deg(num) <= deg(den)`.
    pub fn is_proper(&self) -> bool {
        self.zeros.len() <= self.poles.len()
    }

    /// Real numerator/denominator coefficients in ascending order. The
    /// denominator is monic; the numerator carries the gain.
    pub fn num_den(&self) -> (Vec<f64>, Vec<f64>) {
        let mut num = poly::from_roots(&self.zeros);
        for c in &mut num {
            *c *= self.gain;
        }
        let den = poly::from_roots(&self.poles);
        (num, den)
    }

    /// Series connection: `self · other`.
    pub fn series(&self, other: &Self) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        let mut poles = self.poles.clone();
        poles.extend_from_slice(&other.poles);
        Self {
            gain: self.gain * other.gain,
            zeros,
            poles,
        }
    }

    /// Multiplies by a frequency-independent gain.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            gain: self.gain * factor,
            zeros: self.zeros.clone(),
            poles: self.poles.clone(),
        }
    }
}

/// Extracts the duty-to-battery-current transfer function
/// `I_B(s)/D(s) = c₃ · (sI − A)⁻¹ · b_d + d₃` from the small-signal model,
/// analytically via the 2×2 adjugate. Poles are the eigenvalues of `A`.
pub fn control_to_battery_tf(model: &StateSpaceModel) -> RationalTransferFunction {
    let a = &model.a;
    // Duty is the third input; battery current the third output.
    let b_d = [model.b[0][2], model.b[1][2]];
    let c3 = model.c[2];
    let d3 = model.d[2][2];
    debug_assert_eq!(d3, 0.0, "direct duty feedthrough is structurally zero");

    // c₃ · adj(sI − A) · b_d = num1·s + num0
    let num1 = c3[0] * b_d[0] + c3[1] * b_d[1];
    let num0 = c3[0] * (-a[1][1] * b_d[0] + a[0][1] * b_d[1])
        + c3[1] * (a[1][0] * b_d[0] - a[0][0] * b_d[1]);

    let (p1, p2) = model.eigenvalues();
    let zeros = if num1 != 0.0 {
        vec![Complex64::new(-num0 / num1, 0.0)]
    } else {
        vec![]
    };
    RationalTransferFunction {
        gain: if num1 != 0.0 { num1 } else { num0 },
        zeros,
        poles: vec![p1, p2],
    }
}

/// Independent closed form for the plant DC gain in terms of component
/// values and pole magnitudes: `V_d / (L·C·(r_B + r_C)·|ω_p1|·|ω_p2|)`.
/// Used as a cross-check against the matrix route.
pub fn dc_gain_component_form(
    params: &ChargerParams,
    v_d: f64,
    tf: &RationalTransferFunction,
) -> f64 {
    let pole_product: f64 = tf.poles.iter().map(|p| p.norm()).product();
    v_d / (params.inductance
        * params.capacitance
        * (params.r_b + params.r_c)
        * pole_product)
}
