//! Smooth Jordan curves in arc-length parameterization.
//!
//! A [`CurveSpec`] describes a closed curve through a native parameter
//! `theta in [0, 2 pi)`. [`JordanCurve::build`] validates it (simple, regular),
//! normalizes it to positive orientation and tabulates the arc-length map
//! `S(theta)` so that the arc-length parameterization `g(s)`, the unit tangent
//! `g'(s) = e^{i beta(s)}` and the curvature can be evaluated at any `s`.
//!
//! The arc-length table is the spectral antiderivative of `|gamma'|` on a
//! uniform `theta` grid. Inversion `s -> theta` starts from a monotone cubic
//! Hermite interpolant of the table and is polished by Newton steps on
//! `S(theta) = s`, where `S` between nodes is a Gauss-Legendre integral of the
//! speed.

mod native;

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::kernel_from_frames;
use crate::error::{Error, Result};
use crate::field::CircleField;
use crate::geom;

use native::{Jet, Native};

pub const MIN_SAMPLES: usize = 64;
const MIN_SPEED: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Geometric description of a closed curve in its native parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveShape {
    /// `center + radius e^{i theta}`.
    Circle {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    /// `center + a cos(theta) + i b sin(theta)`.
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    /// `r(theta) e^{i theta}` with `r = sum cos[k] cos(k theta) + sin[k] sin(k theta)`.
    PolarGraph {
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    /// `sum c_k e^{i k theta}`.
    FourierCoefficients { terms: Vec<FourierTerm> },
    /// Points at uniform parameter spacing, joined by their trigonometric
    /// interpolant. The count must be a power of two.
    SampleTable { points: Vec<[f64; 2]> },
}

/// Holder data of the unit tangent: `|g'(t) - g'(s)| <= c |t - s|^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderData {
    pub alpha: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(flatten)]
    pub shape: CurveShape,
    /// Known Holder data; fitted from the tangent when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holder: Option<HolderData>,
    /// Declared `C^2` regularity. Defaults to true for the closed-form
    /// families and false for sample tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<bool>,
}

impl CurveSpec {
    pub fn new(shape: CurveShape) -> Self {
        Self {
            shape,
            holder: None,
            c2: None,
        }
    }

    pub fn circle(radius: f64) -> Self {
        Self::new(CurveShape::Circle {
            radius,
            center: [0.0, 0.0],
        })
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::new(CurveShape::Ellipse {
            a,
            b,
            center: [0.0, 0.0],
        })
    }

    pub fn polar(cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self::new(CurveShape::PolarGraph { cos, sin })
    }

    /// Non-convex peanut `r = 1 + 0.4 cos 2 theta`.
    pub fn bean() -> Self {
        Self::polar(vec![1.0, 0.0, 0.4], vec![])
    }
}

/// Position, unit tangent, tangent angle and curvature at one arc-length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub position: Complex64,
    pub tangent: Complex64,
    pub beta: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone)]
pub struct JordanCurve {
    spec: CurveSpec,
    native: Native,
    reversed: bool,
    length: f64,
    theta: Vec<f64>,
    arc: Vec<f64>,
    speed: Vec<f64>,
    beta_theta: Vec<f64>,
    s_beta: Vec<f64>,
    omega_prefix: Vec<f64>,
    alpha: f64,
    holder_c: f64,
    c2: bool,
    gl: GaussLegendre,
}

fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

impl JordanCurve {
    /// Validate `spec` and tabulate its arc-length parameterization with
    /// `n_samples` nodes.
    pub fn build(spec: &CurveSpec, n_samples: usize) -> Result<Self> {
        if n_samples < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                min: MIN_SAMPLES,
                got: n_samples,
            });
        }
        let native = Native::from_shape(&spec.shape)?;

        let dense = 4 * n_samples;
        let mut poly = Vec::with_capacity(dense);
        let mut min_speed = f64::INFINITY;
        let mut max_curv: f64 = 0.0;
        for j in 0..dense {
            let t = 2.0 * PI * j as f64 / dense as f64;
            let jet = native.eval(t);
            let sp = jet.d1.norm();
            min_speed = min_speed.min(sp);
            if sp > 0.0 {
                max_curv = max_curv.max((jet.d1.conj() * jet.d2).im.abs() / sp.powi(3));
            }
            poly.push(jet.pos);
        }
        if !(min_speed >= MIN_SPEED) {
            return Err(Error::DegenerateTangent { min_speed });
        }
        if let Some((first, second)) = geom::first_self_intersection(&poly) {
            return Err(Error::SelfIntersecting { first, second });
        }
        let reversed = geom::signed_area(&poly) < 0.0;

        let p = n_samples.next_power_of_two();
        let mut curve = Self {
            spec: spec.clone(),
            native,
            reversed,
            length: 0.0,
            theta: Vec::new(),
            arc: Vec::new(),
            speed: Vec::new(),
            beta_theta: Vec::new(),
            s_beta: Vec::new(),
            omega_prefix: Vec::new(),
            alpha: 1.0,
            holder_c: 0.0,
            c2: spec.c2.unwrap_or(false),
            gl: GaussLegendre::new(NonZeroUsize::new(12).unwrap()),
        };
        curve.c2 = spec.c2.unwrap_or(curve.native.is_analytic());

        // arc-length table
        let speed_field = CircleField::from_real_fn(p, |t| curve.jet(t).d1.norm())?;
        let length = 2.0 * PI * speed_field.mean().re;
        let anti = speed_field.antiderivative();
        let a0 = anti.samples()[0].re;
        let mut theta = Vec::with_capacity(p + 1);
        let mut arc = Vec::with_capacity(p + 1);
        let mut speed = Vec::with_capacity(p + 1);
        let mut beta_theta = Vec::with_capacity(p + 1);
        for j in 0..=p {
            let t = 2.0 * PI * j as f64 / p as f64;
            let jet = curve.jet(t);
            theta.push(t);
            speed.push(jet.d1.norm());
            let s = if j == p {
                length
            } else {
                length * t / (2.0 * PI) + anti.samples()[j].re - a0
            };
            arc.push(s);
            let raw = jet.d1.arg();
            let b = match beta_theta.last() {
                None => raw,
                Some(prev) => prev + wrap_angle(raw - prev),
            };
            beta_theta.push(b);
        }
        for w in arc.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::NumericalGuard(
                    "arc-length table is not strictly increasing".into(),
                ));
            }
        }
        let turning = beta_theta[p] - beta_theta[0];
        if (turning - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::InvalidSpec(format!(
                "tangent turns by {turning} instead of 2 pi"
            )));
        }
        curve.length = length;
        curve.theta = theta;
        curve.arc = arc;
        curve.speed = speed;
        curve.beta_theta = beta_theta;

        // uniform arc-length grid of tangent angles
        let m = n_samples;
        let h = length / m as f64;
        curve.s_beta = (0..m)
            .into_par_iter()
            .map(|k| curve.frame(k as f64 * h).beta)
            .collect();
        curve.omega_prefix = omega_prefix(&curve.s_beta);

        match spec.holder {
            Some(HolderData { alpha, c }) => {
                if !(alpha > 0.0 && alpha <= 1.0 && c >= 0.0) {
                    return Err(Error::InvalidSpec(
                        "holder data needs 0 < alpha <= 1 and c >= 0".into(),
                    ));
                }
                curve.alpha = alpha;
                curve.holder_c = c;
            }
            None if curve.native.is_analytic() => {
                curve.alpha = 1.0;
                curve.holder_c = max_curv * (1.0 + 1e-9);
            }
            None => {
                let (alpha, c) = curve.fit_holder()?;
                curve.alpha = alpha;
                curve.holder_c = c;
            }
        }
        Ok(curve)
    }

    fn jet(&self, t: f64) -> Jet {
        if self.reversed {
            let j = self.native.eval(-t);
            Jet {
                pos: j.pos,
                d1: -j.d1,
                d2: j.d2,
            }
        } else {
            self.native.eval(t)
        }
    }

    fn speed_at(&self, t: f64) -> f64 {
        self.jet(t).d1.norm()
    }

    /// Native parameter `theta in [0, 2 pi)` of the point at arc-length `s`
    /// (taken modulo the length).
    pub fn native_parameter(&self, s: f64) -> f64 {
        let (theta, _) = self.invert(s.rem_euclid(self.length));
        theta
    }

    fn invert(&self, s: f64) -> (f64, usize) {
        let p = self.theta.len() - 1;
        let j = self
            .arc
            .partition_point(|&a| a <= s)
            .saturating_sub(1)
            .min(p - 1);
        let (s0, s1) = (self.arc[j], self.arc[j + 1]);
        let (t0, t1) = (self.theta[j], self.theta[j + 1]);
        let ds = s1 - s0;
        let secant = (t1 - t0) / ds;
        let mut m0 = 1.0 / self.speed[j];
        let mut m1 = 1.0 / self.speed[j + 1];
        // Fritsch-Carlson limiter keeps the Hermite piece monotone.
        let (a, b) = (m0 / secant, m1 / secant);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m0 *= tau;
            m1 *= tau;
        }
        let u = (s - s0) / ds;
        let (u2, u3) = (u * u, u * u * u);
        let mut t = (2.0 * u3 - 3.0 * u2 + 1.0) * t0
            + (u3 - 2.0 * u2 + u) * ds * m0
            + (-2.0 * u3 + 3.0 * u2) * t1
            + (u3 - u2) * ds * m1;
        let (mut lo, mut hi) = (t0, t1);
        for _ in 0..30 {
            let val = s0 + self.gl.integrate(t0, t, |x| self.speed_at(x)) - s;
            let step = val / self.speed_at(t);
            if step.abs() <= 4.0 * f64::EPSILON * (1.0 + t.abs()) {
                t -= step;
                break;
            }
            if val > 0.0 {
                hi = hi.min(t);
            } else {
                lo = lo.max(t);
            }
            let mut next = t - step;
            if !(next > lo && next < hi) && hi > lo {
                next = 0.5 * (lo + hi);
            }
            t = next;
        }
        (t, j)
    }

    /// Position, tangent, tangent angle and curvature at arc-length `s`.
    pub fn frame(&self, s: f64) -> CurvePoint {
        let turns = (s / self.length).floor();
        let sr = s - turns * self.length;
        let sr = if sr >= self.length { 0.0 } else { sr };
        let (t, j) = self.invert(sr);
        let jet = self.jet(t);
        let sp = jet.d1.norm();
        let tangent = jet.d1 / sp;
        let beta = self.beta_theta[j] + wrap_angle(jet.d1.arg() - self.beta_theta[j]);
        CurvePoint {
            position: jet.pos,
            tangent,
            beta: beta + 2.0 * PI * turns,
            curvature: (jet.d1.conj() * jet.d2).im / sp.powi(3),
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Arc-length position `g(s)`.
    pub fn g(&self, s: f64) -> Complex64 {
        self.frame(s).position
    }

    /// Unit tangent `g'(s)`.
    pub fn gprime(&self, s: f64) -> Complex64 {
        self.frame(s).tangent
    }

    /// Continuous tangent angle with `g'(s) = e^{i beta(s)}` and
    /// `beta(s + l) = beta(s) + 2 pi`.
    pub fn tangent_angle(&self, s: f64) -> f64 {
        self.frame(s).beta
    }

    pub fn curvature(&self, s: f64) -> f64 {
        self.frame(s).curvature
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    /// Number of nodes of the uniform arc-length grid.
    pub fn grid_len(&self) -> usize {
        self.s_beta.len()
    }

    /// Spacing of the uniform arc-length grid.
    pub fn grid_step(&self) -> f64 {
        self.length / self.s_beta.len() as f64
    }

    /// Tangent angles on the uniform arc-length grid.
    pub fn grid_angles(&self) -> &[f64] {
        &self.s_beta
    }

    pub fn holder_exponent(&self) -> f64 {
        self.alpha
    }

    pub fn holder_constant(&self) -> f64 {
        self.holder_c
    }

    pub fn is_c2(&self) -> bool {
        self.c2
    }

    /// Grid estimate of the modulus of continuity of `g'`:
    /// the max of `2 |sin((beta(t) - beta(s)) / 2)|` over pairs with
    /// circular distance at most `rho`.
    pub fn modulus_of_continuity(&self, rho: f64) -> Result<f64> {
        if !(rho >= 0.0 && rho <= self.length) {
            return Err(Error::OutOfRange {
                value: rho,
                lo: 0.0,
                hi: self.length,
            });
        }
        if rho == 0.0 {
            return Ok(0.0);
        }
        let m = self.s_beta.len();
        let half = m / 2;
        if rho >= 0.5 * self.length {
            return Ok(self.omega_prefix[half]);
        }
        let h = self.grid_step();
        let d0 = ((rho / h) * (1.0 + 1e-12)).floor() as usize;
        let on_grid = self.omega_prefix[d0.min(half)];
        let exact = (0..m)
            .into_par_iter()
            .map(|k| {
                let b = self.frame(k as f64 * h + rho).beta;
                2.0 * ((b - self.s_beta[k]) / 2.0).sin().abs()
            })
            .reduce(|| 0.0, f64::max);
        Ok(on_grid.max(exact))
    }

    /// Step envelope `omega(ceil(rho / h) h)` of the grid modulus; an upper
    /// estimate of the modulus between grid offsets.
    pub fn omega_envelope(&self, rho: f64) -> f64 {
        let half = self.s_beta.len() / 2;
        let d = (rho / self.grid_step()).ceil().max(0.0) as usize;
        self.omega_prefix[d.min(half)]
    }

    /// `int_0^sigma` of [`Self::omega_envelope`], exact for the step function.
    pub fn omega_integral(&self, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return 0.0;
        }
        let h = self.grid_step();
        let half = self.s_beta.len() / 2;
        let mut acc = 0.0;
        let mut lo = 0.0;
        let mut j = 1;
        while lo < sigma {
            let hi = (j as f64 * h).min(sigma);
            acc += self.omega_prefix[j.min(half)] * (hi - lo);
            lo = hi;
            j += 1;
        }
        acc
    }

    fn fit_holder(&self) -> Result<(f64, f64)> {
        let h = self.grid_step();
        let mut pts = Vec::new();
        let mut rho = h;
        while rho <= self.length / 16.0 {
            let w = self.modulus_of_continuity(rho)?;
            if w > 0.0 {
                pts.push((rho, w));
            }
            rho *= 2.0;
        }
        if pts.len() < 2 {
            return Ok((1.0, pts.first().map_or(0.0, |(r, w)| w / r)));
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), (r, w)| (a + r.ln(), b + w.ln()));
        let (mx, my) = (sx / n, sy / n);
        let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (r, w)| {
            let dx = r.ln() - mx;
            (a + dx * (w.ln() - my), b + dx * dx)
        });
        let alpha = (num / den).clamp(0.05, 1.0);
        let half = self.s_beta.len() / 2;
        let c = (1..=half)
            .map(|k| self.omega_prefix[k] / (k as f64 * h).powf(alpha))
            .fold(0.0, f64::max)
            * (1.0 + 1e-9);
        Ok((alpha, c))
    }

    /// Winding number of the curve around `pt`, from a dense polygon.
    pub fn winding_number(&self, pt: Complex64) -> i32 {
        let n = 4 * self.s_beta.len();
        let poly: Vec<_> = (0..n)
            .map(|j| self.jet(2.0 * PI * j as f64 / n as f64).pos)
            .collect();
        geom::winding_number(&poly, pt)
    }

    /// Evaluates the kernel `K(s, t)` on a `grid x grid` lattice of
    /// arc-lengths. Returns whether `min K >= -1e-12` (the curve is convex)
    /// together with the minimum.
    pub fn convexity_certificate(&self, grid: usize) -> (bool, f64) {
        let h = self.length / grid as f64;
        let frames: Vec<CurvePoint> = (0..grid)
            .into_par_iter()
            .map(|k| self.frame(k as f64 * h))
            .collect();
        let min = frames
            .par_iter()
            .map(|a| {
                frames
                    .iter()
                    .map(|b| kernel_from_frames(a, b.position))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min);
        (min >= -1e-12, min)
    }
}

fn omega_prefix(beta: &[f64]) -> Vec<f64> {
    let m = beta.len();
    let half = m / 2;
    let per_offset: Vec<f64> = (0..=half)
        .into_par_iter()
        .map(|d| {
            (0..m)
                .map(|k| 2.0 * ((beta[(k + d) % m] - beta[k]) / 2.0).sin().abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let mut prefix = per_offset;
    for d in 1..prefix.len() {
        prefix[d] = prefix[d].max(prefix[d - 1]);
    }
    prefix
}
