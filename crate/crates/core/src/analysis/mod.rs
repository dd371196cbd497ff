//! Boundary kernels and the operator `T[f]`.

mod t_operator;

use num_complex::Complex64;
use quadrature::double_exponential;
use serde::Serialize;

use crate::curve::{CurvePoint, JordanCurve};
use crate::error::{Error, Result};
use crate::map::BoundaryCorrespondence;

pub use t_operator::{
    boundary_jacobian, t_convergence_under_mollification, t_field, t_operator_cotangent,
    t_operator_singular, ConvergenceStep, TForm, TOperatorResult,
};

/// `Re[conj(b - a) i a']` for the frame `a` and a point `b` of the curve.
pub fn kernel_from_frames(a: &CurvePoint, b: Complex64) -> f64 {
    ((b - a.position).conj() * Complex64::i() * a.tangent).re
}

/// `K(s, t) = Re[conj(g(t) - g(s)) i g'(s)]`: the chord from `g(s)` to
/// `g(t)` projected on the inner normal at `g(s)`.
pub fn kernel_k(curve: &JordanCurve, s: f64, t: f64) -> f64 {
    kernel_from_frames(&curve.frame(s), curve.g(t))
}

/// The transported kernel evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelKf {
    /// `Re[conj(F(t) - F(tau)) i F'(tau)]`.
    pub direct: f64,
    /// `f'(tau) K(f(tau), f(t))`.
    pub factored: f64,
}

pub fn kernel_kf(curve: &JordanCurve, f: &BoundaryCorrespondence, t: f64, tau: f64) -> KernelKf {
    let (ft, ftau, d) = (f.eval(t), f.eval(tau), f.derivative(tau));
    let fr = curve.frame(ftau);
    let fprime = fr.tangent * d;
    let direct = ((curve.g(ft) - fr.position).conj() * Complex64::i() * fprime).re;
    KernelKf {
        direct,
        factored: d * kernel_k(curve, ftau, ft),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelBound {
    pub abs_k: f64,
    /// `int_0^sigma omega`, `sigma` the circular arc distance.
    pub bound: f64,
}

/// `|K(s, t)| <= int_0^{min(|s-t|, l-|s-t|)} omega`, with the curve's grid
/// modulus envelope and `1e-9` slack.
pub fn kernel_bound_check(curve: &JordanCurve, s: f64, t: f64) -> Result<KernelBound> {
    let l = curve.length();
    let d = (s - t).abs().rem_euclid(l);
    let sigma = d.min(l - d);
    let abs_k = kernel_k(curve, s, t).abs();
    let bound = curve.omega_integral(sigma);
    if abs_k > bound + 1e-9 {
        return Err(Error::BoundViolated { abs_k, bound });
    }
    Ok(KernelBound { abs_k, bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityDefect {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

/// Both sides of
/// `int_0^y x^-2 int_0^x omega(a t) dt dx = int_0^y (omega(a x)/x - omega(a x)/y) dx`
/// by nested double-exponential quadrature.
pub fn integration_identity_check(
    omega: impl Fn(f64) -> f64 + Sync,
    a: f64,
    y: f64,
) -> Result<IdentityDefect> {
    if !(y > 0.0 && y.is_finite() && a.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "bad identity limits a={a}, y={y}"
        )));
    }
    let w = |x: f64| omega(a * x);
    dini_guard(&w, y)?;
    let inner = |x: f64| from_zero(&w, x);
    let lhs = from_zero(&|x: f64| inner(x) / (x * x), y);
    let rhs = from_zero(&|x: f64| w(x) / x - w(x) / y, y);
    if !(lhs.is_finite() && rhs.is_finite()) {
        return Err(Error::NonDini("quadrature did not converge".into()));
    }
    Ok(IdentityDefect {
        lhs,
        rhs,
        defect: (lhs - rhs).abs(),
    })
}

/// `int_0^y phi` in the variable `v = ln(y / x)`, which turns algebraic
/// endpoint singularities into exponential decay.
fn from_zero(phi: &impl Fn(f64) -> f64, y: f64) -> f64 {
    let mut acc = 0.0;
    let mut a = 0.0;
    for b in [1.0, 4.0, 16.0, 64.0, 256.0, 700.0] {
        acc += double_exponential::integrate(
            |v: f64| {
                let x = y * (-v).exp();
                phi(x) * x
            },
            a,
            b,
            1e-14,
        )
        .integral;
        a = b;
    }
    acc
}

/// Numerical Dini test: the tail `int omega(x)/x dx` over
/// `x in [e^-690, e^-345]` (computed in `u = -ln x`) must be negligible.
fn dini_guard(w: &impl Fn(f64) -> f64, y: f64) -> Result<()> {
    let (u0, u1) = (345.0f64.max(-y.ln()), 690.0);
    let tail = double_exponential::integrate(|u| w((-u).exp()), u0, u1, 1e-10).integral;
    let head = double_exponential::integrate(|u| w((-u).exp()), -y.ln(), u0, 1e-10).integral;
    if !tail.is_finite() || tail.abs() > 1e-3 * head.abs().max(1.0) {
        return Err(Error::NonDini(format!(
            "tail of the Dini integral is {tail:.3e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveSpec;
    use std::f64::consts::PI;

    #[test]
    fn circle_kernel_closed_form() {
        let c = JordanCurve::build(&CurveSpec::circle(1.0), 256).unwrap();
        assert!((kernel_k(&c, 0.0, PI) - 2.0).abs() < 1e-10);
        for (s, t) in [(0.3, 1.7), (2.0, 5.5), (6.0, 0.1)] {
            assert!((kernel_k(&c, s, t) - (1.0 - (s - t).cos())).abs() < 1e-10);
            assert_eq!(kernel_k(&c, s, s), 0.0);
        }
    }

    #[test]
    fn ellipse_kernel_via_native_parameter() {
        let c = JordanCurve::build(&CurveSpec::ellipse(2.0, 1.0), 256).unwrap();
        for (s, t) in [(0.4, 2.2), (5.1, 8.0), (1.0, 1.01)] {
            let (a, b) = (c.native_parameter(s), c.native_parameter(t));
            let p = |x: f64| Complex64::new(2.0 * x.cos(), x.sin());
            let d = Complex64::new(-2.0 * a.sin(), a.cos());
            let oracle = ((p(b) - p(a)).conj() * Complex64::i() * d / d.norm()).re;
            assert!((kernel_k(&c, s, t) - oracle).abs() < 1e-8);
        }
    }

    #[test]
    fn kernel_is_periodic() {
        let c = JordanCurve::build(&CurveSpec::bean(), 256).unwrap();
        let l = c.length();
        for (s, t) in [(0.5, 2.0), (3.0, 0.2)] {
            assert!((kernel_k(&c, s + l, t + l) - kernel_k(&c, s, t)).abs() < 1e-10);
            assert!((kernel_k(&c, s - l, t - l) - kernel_k(&c, s, t)).abs() < 1e-10);
        }
    }

    #[test]
    fn transported_kernel_two_ways() {
        let c = JordanCurve::build(&CurveSpec::ellipse(2.0, 1.0), 256).unwrap();
        let f = BoundaryCorrespondence::twist(c.length(), 0.3, 2, 0.1).unwrap();
        for (t, tau) in [(1.0, 0.0), (4.0, 2.5), (0.2, 6.0)] {
            let k = kernel_kf(&c, &f, t, tau);
            assert!((k.direct - k.factored).abs() < 1e-9);
        }
        let circle = JordanCurve::build(&CurveSpec::circle(1.0), 256).unwrap();
        let tw = BoundaryCorrespondence::twist(2.0 * PI, 0.3, 1, 0.0).unwrap();
        let k = kernel_kf(&circle, &tw, 1.0, 0.0);
        let f1 = 1.0 + 0.3 * 1f64.sin();
        assert!((k.factored - 1.3 * (1.0 - f1.cos())).abs() < 1e-10);
    }

    #[test]
    fn circle_kernel_bound() {
        let c = JordanCurve::build(&CurveSpec::circle(1.0), 1024).unwrap();
        let b = kernel_bound_check(&c, 0.0, 0.5).unwrap();
        assert!((b.abs_k - (1.0 - 0.5f64.cos())).abs() < 1e-10);
        let exact = 4.0 * (1.0 - 0.25f64.cos());
        assert!(b.bound >= exact - 1e-9 && b.bound < exact + 1e-2);
        let z = kernel_bound_check(&c, 1.0, 1.0).unwrap();
        assert_eq!((z.abs_k, z.bound), (0.0, 0.0));
    }

    #[test]
    fn identity_for_power_profiles() {
        let lin = integration_identity_check(|t| t, 1.0, 1.0).unwrap();
        assert!((lin.lhs - 0.5).abs() < 1e-9 && lin.defect < 1e-9);
        let sq = integration_identity_check(f64::sqrt, 1.0, 1.0).unwrap();
        // int_0^1 (x^-1/2 - x^1/2) dx = 2 - 2/3
        assert!((sq.rhs - 4.0 / 3.0).abs() < 1e-9 && sq.defect < 1e-6);
        let zero = integration_identity_check(|_| 0.0, 2.0, 1.0).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
    }

    #[test]
    fn non_dini_profile_is_rejected() {
        let w = |t: f64| if t > 0.0 { 1.0 / (1.0 - t.ln()) } else { 0.0 };
        assert!(matches!(
            integration_identity_check(w, 1.0, 1.0),
            Err(Error::NonDini(_))
        ));
    }
}
