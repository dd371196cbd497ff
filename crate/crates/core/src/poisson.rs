//! Poisson extension `w = P[F]` of boundary data on the unit circle.
//!
//! Inside `|z| <= r*` the extension is the harmonic series of the
//! trigonometric interpolant of `F`. Closer to the circle the series is
//! blended linearly in `r` with the radial limits `w_tau -> F'` and
//! `w_r -> H(F')`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CircleField;
use crate::map::BoundaryMap;

pub const DEFAULT_NODES: usize = 1024;
pub const DEFAULT_SWITCH: f64 = 0.999;

/// `(1 - r^2) / (2 pi (1 - 2 r cos t + r^2))`.
pub fn poisson_kernel(r: f64, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange(r));
    }
    Ok((1.0 - r * r) / (2.0 * PI * (1.0 - 2.0 * r * t.cos() + r * r)))
}

/// Trapezoid-rule Poisson integral of the samples of `field` at `z`.
pub fn poisson_quadrature(field: &CircleField, z: Complex64) -> Result<Complex64> {
    let (r, tau) = z.to_polar();
    let h = field.step();
    field
        .nodes()
        .zip(field.samples())
        .try_fold(Complex64::new(0.0, 0.0), |acc, (t, v)| {
            Ok(acc + v * poisson_kernel(r, tau - t)? * h)
        })
}

/// First derivatives of `w` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derivatives {
    pub w_z: Complex64,
    pub w_zbar: Complex64,
    pub w_r: Complex64,
    pub w_tau: Complex64,
}

impl Derivatives {
    fn from_complex(z: Complex64, w_z: Complex64, w_zbar: Complex64) -> Self {
        let e = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        Self {
            w_z,
            w_zbar,
            w_r: e * w_z + e.conj() * w_zbar,
            w_tau: Complex64::i() * (z * w_z - z.conj() * w_zbar),
        }
    }

    /// `|w_z|^2 - |w_zbar|^2`.
    pub fn jacobian(&self) -> f64 {
        self.w_z.norm_sqr() - self.w_zbar.norm_sqr()
    }

    /// `Im(w_tau conj(w_r)) / r`.
    pub fn polar_jacobian(&self, r: f64) -> f64 {
        (self.w_tau * self.w_r.conj()).im / r
    }

    /// `|w_zbar / w_z|`.
    pub fn dilatation(&self) -> Result<f64> {
        if self.w_z.norm() < 1e-14 {
            return Err(Error::VanishingDerivative {
                re: self.w_z.re,
                im: self.w_z.im,
            });
        }
        Ok(self.w_zbar.norm() / self.w_z.norm())
    }
}

/// Boundary values of `w_z` and `w_zbar` from the radial limits
/// `(w_tau, w_r) = (F', H(F'))` at `e^{i tau}`.
pub fn boundary_complex_derivatives(
    tau: f64,
    w_tau: Complex64,
    w_r: Complex64,
) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, tau);
    let i = Complex64::i();
    (
        e.conj() * (w_r - i * w_tau) / 2.0,
        e * (w_r + i * w_tau) / 2.0,
    )
}

/// One row of a polar-grid export.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSample {
    pub r: f64,
    pub tau: f64,
    pub w: Complex64,
    pub jacobian: f64,
}

#[derive(Debug, Clone)]
pub struct HarmonicExtension {
    boundary: CircleField,
    fprime: CircleField,
    hfprime: CircleField,
    exact: Option<BoundaryMap>,
    r_star: f64,
}

impl HarmonicExtension {
    /// Extension of sampled boundary data; `F'` is differentiated spectrally.
    pub fn from_field(boundary: CircleField) -> Self {
        let fprime = boundary.derivative();
        let hfprime = fprime.conjugate();
        Self {
            boundary,
            fprime,
            hfprime,
            exact: None,
            r_star: DEFAULT_SWITCH,
        }
    }

    /// Extension of `F = g o f` on `n` nodes, keeping the exact `F'` for the
    /// boundary limits.
    pub fn from_boundary_map(map: &BoundaryMap, n: usize) -> Result<Self> {
        let boundary = map.samples(n)?;
        let fprime = map.derivative_samples(n)?;
        let hfprime = fprime.conjugate();
        Ok(Self {
            boundary,
            fprime,
            hfprime,
            exact: Some(map.clone()),
            r_star: DEFAULT_SWITCH,
        })
    }

    pub fn with_boundary_switch(mut self, r_star: f64) -> Result<Self> {
        if !(r_star > 0.0 && r_star < 1.0) {
            return Err(Error::RadiusOutOfRange(r_star));
        }
        self.r_star = r_star;
        Ok(self)
    }

    pub fn boundary_switch(&self) -> f64 {
        self.r_star
    }

    pub fn nodes(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary(&self) -> &CircleField {
        &self.boundary
    }

    pub fn fprime(&self) -> &CircleField {
        &self.fprime
    }

    pub fn hilbert_fprime(&self) -> &CircleField {
        &self.hfprime
    }

    fn check(z: Complex64) -> Result<()> {
        if !(z.norm() <= 1.0) {
            return Err(Error::OutsideDisk { re: z.re, im: z.im });
        }
        Ok(())
    }

    fn boundary_value(&self, tau: f64) -> Complex64 {
        match &self.exact {
            Some(m) => m.value(tau),
            None => self.boundary.eval(tau),
        }
    }

    /// `(w_tau, w_r)` limits at `e^{i tau}`: `(F'(tau), H(F')(tau))`.
    pub fn boundary_limits(&self, tau: f64) -> (Complex64, Complex64) {
        let ft = match &self.exact {
            Some(m) => m.derivative(tau),
            None => self.fprime.eval(tau),
        };
        (ft, self.hfprime.eval(tau))
    }

    fn blend(&self, z: Complex64) -> Option<(f64, f64)> {
        let (r, tau) = z.to_polar();
        (r > self.r_star).then(|| ((r - self.r_star) / (1.0 - self.r_star), tau))
    }

    /// `w(z)`; `w(0) = c_0`.
    pub fn extend(&self, z: Complex64) -> Result<Complex64> {
        Self::check(z)?;
        Ok(match self.blend(z) {
            None => self.boundary.harmonic_jet(z).0,
            Some((lam, tau)) => {
                let inner = self
                    .boundary
                    .harmonic_jet(Complex64::from_polar(self.r_star, tau))
                    .0;
                (1.0 - lam) * inner + lam * self.boundary_value(tau)
            }
        })
    }

    pub fn derivatives(&self, z: Complex64) -> Result<Derivatives> {
        Self::check(z)?;
        let (w_z, w_zbar) = match self.blend(z) {
            None => {
                let (_, a, b) = self.boundary.harmonic_jet(z);
                (a, b)
            }
            Some((lam, tau)) => {
                let (_, a, b) = self
                    .boundary
                    .harmonic_jet(Complex64::from_polar(self.r_star, tau));
                let (wt, wr) = self.boundary_limits(tau);
                let (ba, bb) = boundary_complex_derivatives(tau, wt, wr);
                ((1.0 - lam) * a + lam * ba, (1.0 - lam) * b + lam * bb)
            }
        };
        Ok(Derivatives::from_complex(z, w_z, w_zbar))
    }

    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        Ok(self.derivatives(z)?.jacobian())
    }

    /// `Im(F'(tau) conj(H(F')(tau)))`, the radial limit of the Jacobian.
    pub fn boundary_jacobian(&self, tau: f64) -> f64 {
        let (wt, wr) = self.boundary_limits(tau);
        (wt * wr.conj()).im
    }

    /// Values and Jacobians at `r_i = i / n_r` (`i = 0..=n_r`), `tau_j =
    /// 2 pi j / n_t`, row-major in `r`.
    pub fn polar_grid(&self, n_r: usize, n_t: usize) -> Result<Vec<GridSample>> {
        if n_r == 0 || n_t == 0 {
            return Err(Error::InvalidSpec("grid needs n_r, n_t >= 1".into()));
        }
        (0..=n_r)
            .into_par_iter()
            .flat_map_iter(|i| (0..n_t).map(move |j| (i, j)))
            .map(|(i, j)| {
                let r = i as f64 / n_r as f64;
                let tau = 2.0 * PI * j as f64 / n_t as f64;
                let z = Complex64::from_polar(r, tau);
                let (w, jacobian) = if i == n_r {
                    (self.boundary_value(tau), self.boundary_jacobian(tau))
                } else {
                    (self.extend(z)?, self.jacobian(z)?)
                };
                Ok(GridSample {
                    r,
                    tau,
                    w,
                    jacobian,
                })
            })
            .collect()
    }
}
