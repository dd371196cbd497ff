//! Conjugate function on the circle.
//!
//! `H(chi)(tau) = -(1/pi) int_0^pi (chi(tau + t) - chi(tau - t)) / (2 tan(t/2)) dt`,
//! equivalently the multiplier `-i sgn(n)`, so `H(cos) = sin`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::field::CircleField;

/// Multiplier path.
pub fn hilbert_transform(chi: &CircleField) -> CircleField {
    chi.conjugate()
}

/// Principal-value quadrature of the defining integral at every node of
/// `chi`, with midpoint nodes `t_m = (m + 1/2) h` on `(0, pi)` so the
/// cotangent is never evaluated at zero. Off-grid values come from the
/// spectral interpolant on the complementary grid.
pub fn hilbert_pv(chi: &CircleField) -> CircleField {
    let n = chi.len();
    let other = chi.toggled_grid();
    let vals = other.samples();
    let h = chi.step();
    let off = usize::from(chi.is_shifted());
    let weights: Vec<f64> = (0..n / 2)
        .map(|m| 1.0 / (2.0 * ((m as f64 + 0.5) * h / 2.0).tan()))
        .collect();
    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, w) in weights.iter().enumerate() {
                let plus = vals[(k + m + off) % n];
                let minus = vals[(k + n + off - m - 1) % n];
                acc += (plus - minus) * *w;
            }
            -acc * h / PI
        })
        .collect();
    let build = if chi.is_shifted() {
        CircleField::from_shifted_samples
    } else {
        CircleField::from_samples
    };
    build(out).expect("length inherited from a valid field")
}

/// Principal-value quadrature at one angle with `n` midpoint nodes.
pub fn hilbert_pv_at(chi: impl Fn(f64) -> Complex64, tau: f64, n: usize) -> Complex64 {
    let h = PI / n as f64;
    let acc: Complex64 = (0..n)
        .map(|m| {
            let t = (m as f64 + 0.5) * h;
            (chi(tau + t) - chi(tau - t)) / (2.0 * (t / 2.0).tan())
        })
        .sum();
    -acc * h / PI
}

/// `max |P[H_pv(chi)](z) - conj-series(P[chi])(z)|` over a polar test grid,
/// where the left side extends the quadrature transform and the right side
/// applies `-i sgn(n)` to the series coefficients `c_n r^|n|`.
pub fn conjugate_consistency(chi: &CircleField) -> f64 {
    let left = hilbert_pv(chi);
    let radii = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99];
    let half = chi.len() as i64 / 2;
    let mut worst: f64 = 0.0;
    for r in radii {
        for j in 0..64 {
            let tau = 2.0 * PI * j as f64 / 64.0;
            let z = Complex64::from_polar(r, tau);
            let lhs = left.harmonic_jet(z).0;
            let rhs: Complex64 = chi
                .coefficients()
                .filter(|(n, _)| n.abs() < half && *n != 0)
                .map(|(n, c)| {
                    let m = Complex64::new(0.0, -(n.signum() as f64));
                    m * c * r.powi(n.abs() as i32) * Complex64::from_polar(1.0, n as f64 * tau)
                })
                .sum();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}
