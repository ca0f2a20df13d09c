//! Closed-loop dynamics: root locus and unity-feedback step response.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::transfer::RationalTransferFunction;
use crate::error::{Error, Result};
use crate::poly;

/// Closed-loop pole sets for a family of loop gains `1 + K·T(s) = 0`.
///
/// For each requested gain the poles are the roots of `den + K·num`. The
/// unity gain point (the designed loop) is always evaluated, and the output
/// is sorted by gain with poles in a deterministic order.
pub fn root_locus(
    open_loop: &RationalTransferFunction,
    gain_grid: &[f64],
) -> Result<Vec<(f64, Vec<Complex64>)>> {
    if !open_loop.is_proper() {
        return Err(Error::Domain(
            "root locus needs a proper rational function (deg num <= deg den)".into(),
        ));
    }
    if gain_grid.iter().any(|k| !(*k > 0.0)) {
        return Err(Error::Domain("root-locus gains must be positive".into()));
    }
    let (num, den) = open_loop.num_den();

    let mut gains: Vec<f64> = gain_grid.to_vec();
    if !gains.iter().any(|k| *k == 1.0) {
        gains.push(1.0);
    }
    gains.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gains.dedup();

    let mut out = Vec::with_capacity(gains.len());
    for k in gains {
        let scaled: Vec<f64> = num.iter().map(|c| c * k).collect();
        let char_poly = poly::add(&den, &scaled);
        // A biproper loop can cancel the leading coefficient at one gain.
        if num.len() == den.len() {
            let magnitude = den.last().unwrap().abs() + scaled.last().unwrap().abs();
            if char_poly.last().unwrap().abs() < 1e-12 * magnitude {
                return Err(Error::PolynomialDegeneracy(format!(
                    "leading coefficients cancel at gain {k}"
                )));
            }
        }
        let mut r = poly::roots(&char_poly)?;
        poly::sort_roots(&mut r);
        out.push((k, r));
    }
    Ok(out)
}

/// Step response of the unity-feedback closed loop `T/(1 + T)`.
#[derive(Debug, Clone, Serialize)]
pub struct StepResponse {
    pub samples: Vec<(f64, f64)>,
    /// Set when a closed-loop pole has a positive real part; the response is
    /// still returned.
    pub unstable: bool,
}

/// Integrates the unit-step response of `T/(1 + T)` by converting the closed
/// loop to a controllable-canonical state-space realization and running the
/// classical fixed-step fourth-order rule on it.
pub fn step_response(
    loop_gain: &RationalTransferFunction,
    horizon: f64,
    dt: f64,
) -> Result<StepResponse> {
    if !(dt > 0.0) || !(horizon > dt) {
        return Err(Error::Domain(format!(
            "step response needs horizon > dt > 0, got ({horizon}, {dt})"
        )));
    }
    if !loop_gain.is_proper() {
        return Err(Error::Domain(
            "step response needs a proper loop gain".into(),
        ));
    }
    let (num, den) = loop_gain.num_den();
    let closed_den = poly::add(&den, &num);
    let poles = poly::roots(&closed_den)?;
    let unstable = poles.iter().any(|p| p.re > 0.0);

    // Explicit integration stability guard for the fastest closed-loop mode.
    let fastest = poles.iter().fold(0.0f64, |m, p| m.max(p.norm()));
    if fastest * dt > 2.7 {
        return Err(Error::Domain(format!(
            "dt = {dt:.3e} too large for the fastest closed-loop mode (need dt <= {:.3e})",
            2.7 / fastest
        )));
    }

    // Controllable canonical form of num / closed_den (strictly proper:
    // deg(num) < deg(closed_den) since T is proper and 1+T keeps the degree).
    let n = closed_den.len() - 1;
    let lead = closed_den[n];
    let a_last: Vec<f64> = closed_den[..n].iter().map(|c| -c / lead).collect();
    let mut b_out = vec![0.0; n];
    for (i, c) in num.iter().enumerate() {
        if i < n {
            b_out[i] = c / lead;
        }
    }

    let deriv = |x: &[f64], u: f64, dx: &mut [f64]| {
        for i in 0..n - 1 {
            dx[i] = x[i + 1];
        }
        dx[n - 1] = u + a_last.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>();
    };

    let steps = (horizon / dt).round() as usize;
    let mut x = vec![0.0; n];
    let mut samples = Vec::with_capacity(steps + 1);
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    let output = |x: &[f64]| b_out.iter().zip(x).map(|(b, xi)| b * xi).sum::<f64>();

    samples.push((0.0, output(&x)));
    for step in 0..steps {
        let u = 1.0;
        deriv(&x, u, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        deriv(&tmp, u, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        deriv(&tmp, u, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + dt * k3[i];
        }
        deriv(&tmp, u, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = (step + 1) as f64 * dt;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        samples.push((t, output(&x)));
    }
    Ok(StepResponse { samples, unstable })
}
