//! Boundary correspondences `f: R -> R` with `f(t + 2 pi) = f(t) + l`.
//!
//! `f` is nondecreasing (plateaus allowed) and composes with the arc-length
//! parameterization of a curve to give the boundary map `F = g o f` on the
//! unit circle.

mod mollify;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::JordanCurve;
use crate::error::{Error, Result};
use crate::field::CircleField;

pub use mollify::Mollifier;

use mollify::Mollified;

fn one() -> u32 {
    1
}

/// Boundary-map description, in units of the target curve's length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum MapSpec {
    /// Constant speed: `f(t) = l t / (2 pi)`.
    Identity,
    /// `f(t) = (l / 2 pi) (t + (a / k) sin(k (t - phase)))`, a weak
    /// homeomorphism for `|a| <= 1` and bi-Lipschitz for `|a| < 1`.
    Twist {
        amplitude: f64,
        #[serde(default = "one")]
        frequency: u32,
        #[serde(default)]
        phase: f64,
    },
    /// Constant speed except on the given arcs `[start, end]` of the circle,
    /// where `f` stalls.
    Plateau { arcs: Vec<[f64; 2]> },
    /// Piecewise-constant relative speeds: `speeds[i]` applies from
    /// `breakpoints[i]` to the next breakpoint (cyclically).
    Piecewise {
        breakpoints: Vec<f64>,
        speeds: Vec<f64>,
    },
    /// Values of `f / l` at `t_k = 2 pi k / N`, joined linearly.
    Samples { values: Vec<f64> },
}

#[derive(Debug, Clone)]
pub(crate) enum Kind {
    Linear,
    Twist {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    Piecewise {
        knots: Vec<f64>,
        slopes: Vec<f64>,
        values: Vec<f64>,
        sampled: bool,
    },
    Mollified(Box<Mollified>),
}

/// Nondecreasing `f` with `f(t + 2 pi) = f(t) + l`.
#[derive(Debug, Clone)]
pub struct BoundaryCorrespondence {
    kind: Kind,
    shift: f64,
    lip_upper: f64,
    lip_lower: f64,
}

/// A derivative sampled on the circle; `almost_everywhere` marks one-sided
/// derivatives of merely Lipschitz maps.
#[derive(Debug, Clone)]
pub struct DerivativeField {
    pub field: CircleField,
    pub almost_everywhere: bool,
}

impl BoundaryCorrespondence {
    /// Build `f` for a target curve of length `length`.
    pub fn from_spec(spec: &MapSpec, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidSpec(format!("bad period shift {length}")));
        }
        match spec {
            MapSpec::Identity => Ok(Self::identity(length)),
            MapSpec::Twist {
                amplitude,
                frequency,
                phase,
            } => Self::twist(length, *amplitude, *frequency, *phase),
            MapSpec::Plateau { arcs } => Self::plateau(length, arcs),
            MapSpec::Piecewise {
                breakpoints,
                speeds,
            } => Self::piecewise(length, breakpoints, speeds, false),
            MapSpec::Samples { values } => Self::sampled(length, values),
        }
    }

    pub fn identity(length: f64) -> Self {
        let c = length / (2.0 * PI);
        Self {
            kind: Kind::Linear,
            shift: length,
            lip_upper: c,
            lip_lower: c,
        }
    }

    pub fn twist(length: f64, amplitude: f64, frequency: u32, phase: f64) -> Result<Self> {
        if !amplitude.is_finite() || amplitude.abs() > 1.0 {
            return Err(Error::NotWeakHomeomorphism(format!(
                "twist amplitude {amplitude} makes f decreasing"
            )));
        }
        if frequency == 0 {
            return Err(Error::InvalidSpec("twist frequency must be >= 1".into()));
        }
        let c = length / (2.0 * PI);
        Ok(Self {
            kind: Kind::Twist {
                amplitude,
                frequency: frequency as f64,
                phase,
            },
            shift: length,
            lip_upper: c * (1.0 + amplitude.abs()),
            lip_lower: c * (1.0 - amplitude.abs()),
        })
    }

    pub fn plateau(length: f64, arcs: &[[f64; 2]]) -> Result<Self> {
        let mut arcs = arcs.to_vec();
        arcs.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let mut bps = Vec::new();
        let mut speeds = Vec::new();
        let mut cursor = 0.0;
        for [a, b] in &arcs {
            if !(0.0 <= *a && a < b && *b <= 2.0 * PI && *a >= cursor) {
                return Err(Error::InvalidSpec(format!(
                    "plateau arcs must be disjoint, ordered subarcs of [0, 2 pi]: [{a}, {b}]"
                )));
            }
            if *a > cursor {
                bps.push(cursor);
                speeds.push(1.0);
            }
            bps.push(*a);
            speeds.push(0.0);
            cursor = *b;
        }
        if cursor < 2.0 * PI {
            bps.push(cursor);
            speeds.push(1.0);
        }
        Self::piecewise(length, &bps, &speeds, false)
    }

    fn piecewise(length: f64, bps: &[f64], speeds: &[f64], sampled: bool) -> Result<Self> {
        if bps.is_empty() || bps.len() != speeds.len() {
            return Err(Error::InvalidSpec(
                "piecewise map needs matching breakpoints and speeds".into(),
            ));
        }
        if speeds.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::NotWeakHomeomorphism("negative speed".into()));
        }
        for w in bps.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidSpec("breakpoints must increase".into()));
            }
        }
        if !(bps[0] >= 0.0 && bps[bps.len() - 1] < 2.0 * PI) {
            return Err(Error::InvalidSpec(
                "breakpoints must lie in [0, 2 pi)".into(),
            ));
        }
        let m = bps.len();
        let seg_len = |i: usize| {
            if i + 1 < m {
                bps[i + 1] - bps[i]
            } else {
                bps[0] + 2.0 * PI - bps[i]
            }
        };
        let total: f64 = (0..m).map(|i| speeds[i] * seg_len(i)).sum();
        if !(total > 0.0) {
            return Err(Error::NotWeakHomeomorphism("f is constant".into()));
        }
        let slopes: Vec<f64> = speeds.iter().map(|s| s * length / total).collect();
        // anchor f(0) = 0; 0 lies in the last (wrapping) segment
        let mut values = Vec::with_capacity(m);
        let mut v = slopes[m - 1] * bps[0];
        for (i, slope) in slopes.iter().enumerate() {
            values.push(v);
            v += slope * seg_len(i);
        }
        let lip_upper = slopes.iter().cloned().fold(0.0, f64::max);
        let lip_lower = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Self {
            kind: Kind::Piecewise {
                knots: bps.to_vec(),
                slopes,
                values,
                sampled,
            },
            shift: length,
            lip_upper,
            lip_lower,
        })
    }

    fn sampled(length: f64, fractions: &[f64]) -> Result<Self> {
        let n = fractions.len();
        if n < 4 {
            return Err(Error::InvalidSpec("need at least 4 map samples".into()));
        }
        let mut speeds = Vec::with_capacity(n);
        for k in 0..n {
            let next = if k + 1 < n {
                fractions[k + 1]
            } else {
                fractions[0] + 1.0
            };
            let d = next - fractions[k];
            if !(d >= 0.0) {
                return Err(Error::NotWeakHomeomorphism(format!(
                    "samples decrease at index {k}"
                )));
            }
            speeds.push(d);
        }
        let h = 2.0 * PI / n as f64;
        let bps: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
        let mut map = Self::piecewise(length, &bps, &speeds, true)?;
        // keep the given offset instead of anchoring f(0) = 0
        if let Kind::Piecewise { values, .. } = &mut map.kind {
            for (v, u) in values.iter_mut().zip(fractions) {
                *v = u * length;
            }
        }
        Ok(map)
    }

    pub(crate) fn from_kind(kind: Kind, shift: f64, lip_lower: f64, lip_upper: f64) -> Self {
        Self {
            kind,
            shift,
            lip_upper,
            lip_lower,
        }
    }

    /// The period shift `l`: `f(t + 2 pi) = f(t) + l`.
    pub fn period_shift(&self) -> f64 {
        self.shift
    }

    /// Lipschitz constant `L`.
    pub fn lip_upper(&self) -> f64 {
        self.lip_upper
    }

    /// Lower bi-Lipschitz constant; zero for maps with plateaus.
    pub fn lip_lower(&self) -> f64 {
        self.lip_lower
    }

    pub fn is_bi_lipschitz(&self) -> bool {
        self.lip_lower > 0.0
    }

    /// Smooth closed form (no kinks).
    pub fn is_smooth(&self) -> bool {
        !matches!(self.kind, Kind::Piecewise { .. })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Linear => self.shift * x / (2.0 * PI),
            Kind::Twist {
                amplitude,
                frequency,
                phase,
            } => {
                self.shift / (2.0 * PI)
                    * (x + amplitude / frequency * (frequency * (x - phase)).sin())
            }
            Kind::Piecewise {
                knots,
                slopes,
                values,
                ..
            } => {
                let turns = (x / (2.0 * PI)).floor();
                let xr = x - turns * 2.0 * PI;
                let (i, base_x, base_v) = locate(knots, values, self.shift, xr);
                base_v + slopes[i] * (xr - base_x) + turns * self.shift
            }
            Kind::Mollified(m) => m.eval(x),
        }
    }

    /// Derivative where it exists; the right derivative at kinks.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Linear => self.shift / (2.0 * PI),
            Kind::Twist {
                amplitude,
                frequency,
                phase,
            } => self.shift / (2.0 * PI) * (1.0 + amplitude * (frequency * (x - phase)).cos()),
            Kind::Piecewise {
                knots,
                slopes,
                values,
                ..
            } => {
                let xr = x.rem_euclid(2.0 * PI);
                let (i, _, _) = locate(knots, values, self.shift, xr);
                slopes[i]
            }
            Kind::Mollified(m) => m.derivative(x),
        }
    }

    /// Kink locations in `[0, 2 pi)`.
    pub fn kinks(&self) -> &[f64] {
        match &self.kind {
            Kind::Piecewise { knots, .. } => knots,
            _ => &[],
        }
    }

    /// `f'` on `n` uniform nodes.
    ///
    /// Smooth closed forms are differentiated spectrally; mollified maps use
    /// the convolution of `f'`; piecewise-linear maps report the one-sided
    /// derivative; sample tables on their own grid use centered differences
    /// away from detected kinks and forward differences at kinks.
    pub fn derivative_field(&self, n: usize) -> Result<DerivativeField> {
        let c = self.shift / (2.0 * PI);
        match &self.kind {
            Kind::Linear | Kind::Twist { .. } => {
                let periodic = CircleField::from_real_fn(n, |t| self.eval(t) - c * t)?;
                let field = periodic.derivative().map(|z| Complex64::new(z.re + c, 0.0));
                Ok(DerivativeField {
                    field,
                    almost_everywhere: false,
                })
            }
            Kind::Mollified(_) => Ok(DerivativeField {
                field: CircleField::from_real_fn(n, |t| self.derivative(t))?,
                almost_everywhere: false,
            }),
            Kind::Piecewise {
                knots,
                values,
                sampled: true,
                ..
            } if knots.len() == n => {
                let h = 2.0 * PI / n as f64;
                let f = |k: isize| {
                    let wrap = k.rem_euclid(n as isize) as usize;
                    let turns = k.div_euclid(n as isize) as f64;
                    values[wrap] + turns * self.shift
                };
                let second: Vec<f64> = (0..n as isize)
                    .map(|k| (f(k + 1) - 2.0 * f(k) + f(k - 1)).abs())
                    .collect();
                let mut sorted = second.clone();
                sorted.sort_by(f64::total_cmp);
                let median = sorted[n / 2];
                let floor = 1e-12 * self.shift;
                let samples = (0..n as isize)
                    .map(|k| {
                        let kink = second[k as usize] > (10.0 * median).max(floor);
                        let d = if kink {
                            (f(k + 1) - f(k)) / h
                        } else {
                            (f(k + 1) - f(k - 1)) / (2.0 * h)
                        };
                        Complex64::new(d, 0.0)
                    })
                    .collect();
                Ok(DerivativeField {
                    field: CircleField::from_samples(samples)?,
                    almost_everywhere: true,
                })
            }
            Kind::Piecewise { .. } => Ok(DerivativeField {
                field: CircleField::from_real_fn(n, |t| self.derivative(t))?,
                almost_everywhere: true,
            }),
        }
    }

    /// Max and min of `f'` over a uniform grid, as a check on the stored
    /// Lipschitz brackets.
    pub fn derivative_range(&self, n: usize) -> (f64, f64) {
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| {
            let d = self.derivative(2.0 * PI * k as f64 / n as f64);
            (lo.min(d), hi.max(d))
        })
    }

    /// `psi_n = (n l / (n l + 2 pi)) (f * rho_{1/n} + x / n)`: a smooth,
    /// strictly increasing approximation with the same period shift.
    pub fn mollify(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec(
                "mollification index must be >= 1".into(),
            ));
        }
        if !(self.lip_lower >= 0.0) {
            return Err(Error::NotWeakHomeomorphism("f decreases".into()));
        }
        Ok(Mollified::tilted(self.clone(), n).into_map())
    }

    /// Pure convolution `f * rho_eps` (no tilt).
    pub fn convolve(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidSpec(format!("bad mollifier scale {eps}")));
        }
        Ok(Mollified::pure(self.clone(), eps).into_map())
    }
}

/// Segment of a piecewise map containing `xr in [0, 2 pi)`: index, start
/// abscissa and value there (shifted back one period when `xr` precedes the
/// first knot).
fn locate(knots: &[f64], values: &[f64], shift: f64, xr: f64) -> (usize, f64, f64) {
    let idx = knots.partition_point(|&k| k <= xr);
    if idx == 0 {
        let last = knots.len() - 1;
        (last, knots[last] - 2.0 * PI, values[last] - shift)
    } else {
        (idx - 1, knots[idx - 1], values[idx - 1])
    }
}

/// The boundary map `F = g o f` on the unit circle.
#[derive(Debug, Clone)]
pub struct BoundaryMap {
    curve: JordanCurve,
    map: BoundaryCorrespondence,
}

/// Compose `f` with the arc-length parameterization of `curve`.
pub fn compose_with_curve(curve: &JordanCurve, f: &BoundaryCorrespondence) -> Result<BoundaryMap> {
    let (shift, length) = (f.period_shift(), curve.length());
    if (shift - length).abs() > 1e-10 * length.max(1.0) {
        return Err(Error::RangeMismatch { shift, length });
    }
    Ok(BoundaryMap {
        curve: curve.clone(),
        map: f.clone(),
    })
}

impl BoundaryMap {
    pub fn curve(&self) -> &JordanCurve {
        &self.curve
    }

    pub fn correspondence(&self) -> &BoundaryCorrespondence {
        &self.map
    }

    /// `F(tau) = g(f(tau))`.
    pub fn value(&self, tau: f64) -> Complex64 {
        self.curve.g(self.map.eval(tau))
    }

    /// `F'(tau) = g'(f(tau)) f'(tau)`; `|F'| = f'`.
    pub fn derivative(&self, tau: f64) -> Complex64 {
        self.curve.gprime(self.map.eval(tau)) * self.map.derivative(tau)
    }

    pub fn samples(&self, n: usize) -> Result<CircleField> {
        CircleField::from_fn(n, |t| self.value(t))
    }

    pub fn derivative_samples(&self, n: usize) -> Result<CircleField> {
        CircleField::from_fn(n, |t| self.derivative(t))
    }
}
