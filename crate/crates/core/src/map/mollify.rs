//! Bump-function mollification of boundary correspondences.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use super::{BoundaryCorrespondence, Kind};

const PANELS: usize = 16;

/// Standard bump `rho(z) = exp(-1 / (1 - z^2)) / Z` on `(-1, 1)`, rescaled
/// to `rho_eps(t) = rho(t / eps) / eps`.
#[derive(Debug, Clone)]
pub struct Mollifier {
    eps: f64,
    norm: f64,
    gl: GaussLegendre,
}

fn bump(z: f64) -> f64 {
    if z.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - z * z)).exp()
    }
}

impl Mollifier {
    pub fn new(eps: f64) -> Self {
        let gl = GaussLegendre::new(NonZeroUsize::new(16).unwrap());
        let w = 2.0 / PANELS as f64;
        let norm = (0..PANELS)
            .map(|j| {
                let a = -1.0 + j as f64 * w;
                gl.integrate(a, a + w, bump)
            })
            .sum();
        Self { eps, norm, gl }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Normalized profile on `(-1, 1)`.
    pub fn profile(&self, z: f64) -> f64 {
        bump(z) / self.norm
    }

    /// `rho_eps(t)`.
    pub fn kernel(&self, t: f64) -> f64 {
        self.profile(t / self.eps) / self.eps
    }

    /// `(g * rho_eps)(x) = int g(x - eps z) rho(z) dz`, with quadrature panels
    /// split wherever `x - eps z` crosses one of `kinks` (mod 2 pi).
    pub fn apply(&self, x: f64, kinks: &[f64], g: impl Fn(f64) -> f64) -> f64 {
        let mut cuts: Vec<f64> = (0..=PANELS)
            .map(|j| -1.0 + 2.0 * j as f64 / PANELS as f64)
            .collect();
        let reach = (self.eps / (2.0 * PI)).ceil() as i64 + 1;
        for &k in kinks {
            for m in -reach..=reach {
                let z = (x - k - 2.0 * PI * m as f64) / self.eps;
                if z > -1.0 && z < 1.0 {
                    cuts.push(z);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        cuts.windows(2)
            .map(|w| {
                self.gl
                    .integrate(w[0], w[1], |z| g(x - self.eps * z) * self.profile(z))
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Mollified {
    base: BoundaryCorrespondence,
    mollifier: Mollifier,
    scale: f64,
    tilt: f64,
}

impl Mollified {
    /// `psi_n = (n b / (n b + a)) (f * rho_{1/n} + x / n)` with `a = 2 pi`,
    /// `b = l`.
    pub fn tilted(base: BoundaryCorrespondence, n: usize) -> Self {
        let nf = n as f64;
        let b = base.period_shift();
        Self {
            scale: nf * b / (nf * b + 2.0 * PI),
            tilt: 1.0 / nf,
            mollifier: Mollifier::new(1.0 / nf),
            base,
        }
    }

    pub fn pure(base: BoundaryCorrespondence, eps: f64) -> Self {
        Self {
            scale: 1.0,
            tilt: 0.0,
            mollifier: Mollifier::new(eps),
            base,
        }
    }

    pub fn into_map(self) -> BoundaryCorrespondence {
        let shift = self.base.period_shift();
        let lo = self.scale * (self.base.lip_lower() + self.tilt);
        let hi = self.scale * (self.base.lip_upper() + self.tilt);
        BoundaryCorrespondence::from_kind(Kind::Mollified(Box::new(self)), shift, lo, hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let conv = self
            .mollifier
            .apply(x, self.base.kinks(), |y| self.base.eval(y));
        self.scale * (conv + self.tilt * x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let conv = self
            .mollifier
            .apply(x, self.base.kinks(), |y| self.base.derivative(y));
        self.scale * (conv + self.tilt)
    }
}
