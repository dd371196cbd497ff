//! Periodic functions on the unit circle stored as uniform samples.
//!
//! A [`CircleField`] holds `N` complex samples at the nodes
//! `tau_k = 2 pi k / N` (or the half-step shifted nodes
//! `tau_k = 2 pi (k + 1/2) / N`) together with the coefficients of the unique
//! trigonometric interpolant
//!
//! ```text
//! p(tau) = sum_{|n| <= N/2} c_n e^{i n tau}
//! ```
//!
//! where the Nyquist content is split symmetrically between `n = +N/2` and
//! `n = -N/2`, so that real samples always give a real interpolant.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CircleField {
    samples: Vec<Complex64>,
    shifted: bool,
    /// Coefficients for frequencies `-N/2 ..= N/2`, index `n + N/2`.
    coeffs: Vec<Complex64>,
}

fn check_len(n: usize) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidNodeCount(n));
    }
    Ok(())
}

impl CircleField {
    /// Field from samples on the standard grid.
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        Self::build(samples, false)
    }

    /// Field from samples on the half-step shifted grid.
    pub fn from_shifted_samples(samples: Vec<Complex64>) -> Result<Self> {
        Self::build(samples, true)
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_len(n)?;
        let h = 2.0 * PI / n as f64;
        Self::build((0..n).map(|k| f(k as f64 * h)).collect(), false)
    }

    pub fn from_real_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(n, |t| Complex64::new(f(t), 0.0))
    }

    pub fn from_shifted_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_len(n)?;
        let h = 2.0 * PI / n as f64;
        Self::build((0..n).map(|k| f((k as f64 + 0.5) * h)).collect(), true)
    }

    fn build(samples: Vec<Complex64>, shifted: bool) -> Result<Self> {
        let n = samples.len();
        check_len(n)?;
        let coeffs = analyze(&samples, shifted);
        Ok(Self {
            samples,
            shifted,
            coeffs,
        })
    }

    /// Field defined by its coefficients (index `n + N/2`).
    fn from_coeffs(coeffs: Vec<Complex64>, shifted: bool) -> Self {
        let samples = synthesize(&coeffs, shifted);
        let coeffs = analyze(&samples, shifted);
        Self {
            samples,
            shifted,
            coeffs,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    pub fn step(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        let off = if self.shifted { 0.5 } else { 0.0 };
        (k as f64 + off) * self.step()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.node(k))
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.re).collect()
    }

    /// Coefficient of `e^{i n tau}`, zero outside `|n| <= N/2`.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        let half = (self.len() / 2) as i64;
        if n.abs() > half {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n + half) as usize]
    }

    /// Pairs `(n, c_n)` for `n = -N/2 ..= N/2`.
    pub fn coefficients(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let half = (self.len() / 2) as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (i as i64 - half, *c))
    }

    /// Fourier mean `c_0`.
    pub fn mean(&self) -> Complex64 {
        self.coefficient(0)
    }

    /// Trigonometric interpolant at an arbitrary angle.
    pub fn eval(&self, tau: f64) -> Complex64 {
        let half = self.len() / 2;
        let e = Complex64::from_polar(1.0, tau);
        let mut pos = Complex64::new(1.0, 0.0);
        let mut acc = self.coeffs[half];
        for n in 1..=half {
            pos *= e;
            acc += self.coeffs[half + n] * pos + self.coeffs[half - n] * pos.conj();
        }
        acc
    }

    /// Harmonic extension of the interpolant into the disk:
    /// `(w, w_z, w_zbar)` at `z` for `w = sum c_n r^|n| e^{i n tau}`.
    pub fn harmonic_jet(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let half = self.len() / 2;
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut dp) = (zero, zero);
        let (mut q, mut dq) = (zero, zero);
        let zb = z.conj();
        for k in (1..=half).rev() {
            dp = dp * z + p;
            p = p * z + self.coeffs[half + k];
            dq = dq * zb + q;
            q = q * zb + self.coeffs[half - k];
        }
        dp = dp * z + p;
        p = p * z + self.coeffs[half];
        dq = dq * zb + q;
        q *= zb;
        (p + q, dp, dq)
    }

    fn map_coeffs(&self, mult: impl Fn(i64) -> Complex64) -> Self {
        let half = (self.len() / 2) as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = i as i64 - half;
                if n.abs() == half {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * mult(n)
                }
            })
            .collect();
        Self::from_coeffs(coeffs, self.shifted)
    }

    /// Spectral derivative. The Nyquist mode is dropped.
    pub fn derivative(&self) -> Self {
        self.map_coeffs(|n| Complex64::new(0.0, n as f64))
    }

    /// Zero-mean periodic antiderivative of the mean-free part.
    pub fn antiderivative(&self) -> Self {
        self.map_coeffs(|n| {
            if n == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / n as f64)
            }
        })
    }

    /// Fourier multiplier `-i sgn(n)`: the conjugate function. The mean and
    /// the Nyquist mode are dropped.
    pub fn conjugate(&self) -> Self {
        self.map_coeffs(|n| match n.signum() {
            1 => Complex64::new(0.0, -1.0),
            -1 => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        })
    }

    /// The same interpolant resampled on the other grid (standard <-> shifted).
    pub fn toggled_grid(&self) -> Self {
        Self::from_coeffs(self.coeffs.clone(), !self.shifted)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let samples = self.samples.iter().map(|z| f(*z)).collect();
        Self::build(samples, self.shifted).expect("length already validated")
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(1/N) sum |x_k|^2 - sum |c_n|^2`, counting the Nyquist bin once.
    pub fn parseval_defect(&self) -> f64 {
        let n = self.len();
        let energy = self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        let mut spectral: f64 = self.coeffs[1..n].iter().map(|c| c.norm_sqr()).sum();
        // Nyquist bin value is c_{+} e^{i pi s/2} + c_{-} e^{-i pi s/2}.
        let (cp, cm) = (self.coeffs[n], self.coeffs[0]);
        let nyq = if self.shifted {
            Complex64::i() * (cp - cm)
        } else {
            cp + cm
        };
        spectral += nyq.norm_sqr();
        (energy - spectral).abs()
    }
}

fn analyze(samples: &[Complex64], shifted: bool) -> Vec<Complex64> {
    let n = samples.len();
    let half = n / 2;
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let h = 2.0 * PI / n as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for (bin, x) in buf.iter().enumerate() {
        let x = x * scale;
        if bin == half {
            if shifted {
                coeffs[n] = Complex64::new(0.0, -0.5) * x;
                coeffs[0] = Complex64::new(0.0, 0.5) * x;
            } else {
                coeffs[n] = 0.5 * x;
                coeffs[0] = 0.5 * x;
            }
            continue;
        }
        let freq = if bin < half {
            bin as i64
        } else {
            bin as i64 - n as i64
        };
        let phase = if shifted {
            Complex64::from_polar(1.0, -(freq as f64) * h / 2.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        coeffs[(freq + half as i64) as usize] = x * phase;
    }
    coeffs
}

fn synthesize(coeffs: &[Complex64], shifted: bool) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let half = n / 2;
    let h = 2.0 * PI / n as f64;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, c) in coeffs.iter().enumerate() {
        let freq = i as i64 - half as i64;
        let bin = freq.rem_euclid(n as i64) as usize;
        let phase = if shifted {
            Complex64::from_polar(1.0, freq as f64 * h / 2.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        buf[bin] += c * phase;
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}
