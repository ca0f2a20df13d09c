//! Small real-coefficient polynomial helpers for the low-order transfer
//! functions handled by this crate (degree <= 4 in practice).
//!
//! Coefficients are stored in ascending order: `c[0] + c[1]·s + c[2]·s² + …`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots of `a·x² + b·x + c` with the cancellation-safe `q` formulation.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> (Complex64, Complex64) {
    debug_assert!(a != 0.0);
    let (b, c) = (b / a, c / a);
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            // b = c = 0
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        (Complex64::new(q, 0.0), Complex64::new(c / q, 0.0))
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

/// Adds two polynomials, padding the shorter one.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// Expands a conjugate-closed root set into a real monic polynomial.
pub fn from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i] -= c * r;
            next[i + 1] += c;
        }
        acc = next;
    }
    acc.iter().map(|c| c.re).collect()
}

/// Evaluates a polynomial at a complex point (Horner).
pub fn eval(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

/// All roots of a real polynomial.
///
/// Degrees 1 and 2 use closed forms; higher degrees use Durand–Kerner
/// iteration. Errors if the polynomial is identically zero or its leading
/// coefficient vanished (degree collapsed).
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let max_mag = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max_mag == 0.0 {
        return Err(Error::PolynomialDegeneracy(
            "all coefficients are zero".into(),
        ));
    }
    let lead = coeffs.len() - 1;
    if coeffs[lead] == 0.0 {
        return Err(Error::PolynomialDegeneracy(format!(
            "leading coefficient c[{lead}] is zero"
        )));
    }
    let degree = lead;
    match degree {
        0 => Ok(vec![]),
        1 => Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]),
        2 => {
            let (r1, r2) = quadratic_roots(coeffs[2], coeffs[1], coeffs[0]);
            Ok(vec![r1, r2])
        }
        _ => durand_kerner(coeffs),
    }
}

fn durand_kerner(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();

    // Fujiwara bound: tight even when coefficients span many decades.
    let radius = 2.0
        * (0..degree)
            .map(|i| monic[i].abs().powf(1.0 / (degree - i) as f64))
            .fold(0.0f64, f64::max)
            .max(1e-3);
    let seed = Complex64::new(0.4, 0.9);
    let mut xs: Vec<Complex64> = (0..degree)
        .map(|k| seed.powu(k as u32 + 1) * radius / seed.norm())
        .collect();

    for _ in 0..500 {
        let mut shift = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    denom *= xs[i] - xs[j];
                }
            }
            let delta = eval(&monic, xs[i]) / denom;
            xs[i] -= delta;
            shift = shift.max(delta.norm() / (1.0 + xs[i].norm()));
        }
        if shift < 1e-14 {
            break;
        }
    }

    // Collapse conjugate residue: roots of a real polynomial come in pairs.
    for x in &mut xs {
        if x.im.abs() < 1e-9 * (1.0 + x.re.abs()) {
            x.im = 0.0;
        }
    }
    sort_roots(&mut xs);
    Ok(xs)
}

/// Deterministic ordering: ascending real part, then ascending imaginary.
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}
