//! Native (non arc-length) parameterizations `theta -> gamma(theta)` over
//! `[0, 2 pi)`, with first and second derivatives.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::CircleField;

use super::{CurveShape, FourierTerm};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Jet {
    pub pos: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Native {
    Circle {
        center: Complex64,
        radius: f64,
    },
    Ellipse {
        center: Complex64,
        a: f64,
        b: f64,
    },
    Polar {
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
    Fourier {
        terms: Vec<(i64, Complex64)>,
    },
    Table {
        pos: CircleField,
        d1: CircleField,
        d2: CircleField,
    },
}

impl Native {
    pub fn from_shape(shape: &CurveShape) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        Ok(match shape {
            CurveShape::Circle { radius, center } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return bad("circle radius must be positive");
                }
                Native::Circle {
                    center: Complex64::new(center[0], center[1]),
                    radius: *radius,
                }
            }
            CurveShape::Ellipse { a, b, center } => {
                if !(a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0) {
                    return bad("ellipse semi-axes must be positive");
                }
                Native::Ellipse {
                    center: Complex64::new(center[0], center[1]),
                    a: *a,
                    b: *b,
                }
            }
            CurveShape::PolarGraph { cos, sin } => {
                if cos.is_empty() {
                    return bad("polar graph needs at least the constant term");
                }
                let native = Native::Polar {
                    cos: cos.clone(),
                    sin: sin.clone(),
                };
                let dense = 4096;
                for j in 0..dense {
                    let t = 2.0 * std::f64::consts::PI * j as f64 / dense as f64;
                    let (r, _, _) = native.radius(t);
                    if !(r > 0.0) {
                        return bad("polar radius must stay positive");
                    }
                }
                native
            }
            CurveShape::FourierCoefficients { terms } => {
                if terms.iter().all(|t| t.k == 0) {
                    return bad("Fourier curve needs a non-constant term");
                }
                Native::Fourier {
                    terms: terms
                        .iter()
                        .map(|FourierTerm { k, re, im }| (*k, Complex64::new(*re, *im)))
                        .collect(),
                }
            }
            CurveShape::SampleTable { points } => {
                if points.len() < 8 || !points.len().is_power_of_two() {
                    return bad("sample table needs a power-of-two count >= 8 of points");
                }
                let pos = CircleField::from_samples(
                    points.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
                )?;
                let d1 = pos.derivative();
                let d2 = d1.derivative();
                Native::Table { pos, d1, d2 }
            }
        })
    }

    /// `(r, r', r'')` for polar graphs.
    fn radius(&self, t: f64) -> (f64, f64, f64) {
        let Native::Polar { cos, sin } = self else {
            unreachable!("radius() on a non-polar curve")
        };
        let mut r = (0.0, 0.0, 0.0);
        for (k, a) in cos.iter().enumerate() {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            r.0 += a * c;
            r.1 -= a * kf * s;
            r.2 -= a * kf * kf * c;
        }
        for (k, b) in sin.iter().enumerate() {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            r.0 += b * s;
            r.1 += b * kf * c;
            r.2 -= b * kf * kf * s;
        }
        r
    }

    pub fn eval(&self, t: f64) -> Jet {
        match self {
            Native::Circle { center, radius } => {
                let e = Complex64::from_polar(*radius, t);
                Jet {
                    pos: center + e,
                    d1: Complex64::i() * e,
                    d2: -e,
                }
            }
            Native::Ellipse { center, a, b } => {
                let (s, c) = t.sin_cos();
                Jet {
                    pos: center + Complex64::new(a * c, b * s),
                    d1: Complex64::new(-a * s, b * c),
                    d2: Complex64::new(-a * c, -b * s),
                }
            }
            Native::Polar { .. } => {
                let (r, r1, r2) = self.radius(t);
                let e = Complex64::from_polar(1.0, t);
                Jet {
                    pos: r * e,
                    d1: Complex64::new(r1, r) * e,
                    d2: Complex64::new(r2 - r, 2.0 * r1) * e,
                }
            }
            Native::Fourier { terms } => {
                let mut jet = Jet {
                    pos: Complex64::new(0.0, 0.0),
                    d1: Complex64::new(0.0, 0.0),
                    d2: Complex64::new(0.0, 0.0),
                };
                for (k, c) in terms {
                    let kf = *k as f64;
                    let e = c * Complex64::from_polar(1.0, kf * t);
                    jet.pos += e;
                    jet.d1 += Complex64::new(0.0, kf) * e;
                    jet.d2 -= kf * kf * e;
                }
                jet
            }
            Native::Table { pos, d1, d2 } => Jet {
                pos: pos.eval(t),
                d1: d1.eval(t),
                d2: d2.eval(t),
            },
        }
    }

    /// Analytic families carry their Holder data; tables are fitted.
    pub fn is_analytic(&self) -> bool {
        !matches!(self, Native::Table { .. })
    }
}
