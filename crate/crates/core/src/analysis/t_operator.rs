use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::JordanCurve;
use crate::error::{Error, Result};
use crate::field::CircleField;
use crate::map::BoundaryCorrespondence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TForm {
    Singular,
    Cotangent,
}

fn check_range(curve: &JordanCurve, f: &BoundaryCorrespondence) -> Result<()> {
    let (shift, length) = (f.period_shift(), curve.length());
    if (shift - length).abs() > 1e-10 * length.max(1.0) {
        return Err(Error::RangeMismatch { shift, length });
    }
    Ok(())
}

fn check_nodes(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidNodeCount(n));
    }
    Ok(())
}

/// `T[f](tau) = int K(f(tau), f(t)) / (2 sin^2((t - tau)/2)) dt / (2 pi)`
/// on `n` nodes `t = tau + (m + 1/2) h`.
pub fn t_operator_singular(
    curve: &JordanCurve,
    f: &BoundaryCorrespondence,
    tau: f64,
    n: usize,
) -> Result<f64> {
    check_range(curve, f)?;
    check_nodes(n)?;
    let h = 2.0 * PI / n as f64;
    let s = f.eval(tau);
    let frame = curve.frame(s);
    let terms: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|m| {
            let u = (m as f64 + 0.5) * h;
            let k = super::kernel_from_frames(&frame, curve.g(f.eval(tau + u)));
            k / (2.0 * (u / 2.0).sin().powi(2))
        })
        .collect();
    let sum: f64 = terms.iter().sum();
    Ok(sum * h / (2.0 * PI))
}

/// `T[f](tau) = int_{-pi}^{pi} f'(t + tau) sin[beta(f(t + tau)) - beta(f(tau))]
/// cot(t/2) dt / (2 pi)` on `n` nodes `t = +-(m + 1/2) h`.
pub fn t_operator_cotangent(
    curve: &JordanCurve,
    f: &BoundaryCorrespondence,
    tau: f64,
    n: usize,
) -> Result<f64> {
    check_range(curve, f)?;
    check_nodes(n)?;
    let h = 2.0 * PI / n as f64;
    let b0 = curve.tangent_angle(f.eval(tau));
    let term = |t: f64| {
        let x = tau + t;
        f.derivative(x) * (curve.tangent_angle(f.eval(x)) - b0).sin() / (t / 2.0).tan()
    };
    // collected before summing so the result does not depend on scheduling
    let terms: Vec<f64> = (0..n / 2)
        .into_par_iter()
        .map(|m| {
            let t = (m as f64 + 0.5) * h;
            term(t) + term(-t)
        })
        .collect();
    let sum: f64 = terms.iter().sum();
    Ok(sum * h / (2.0 * PI))
}

/// `J_w(e^{i tau}) = f'(tau) T[f](tau)`.
pub fn boundary_jacobian(
    curve: &JordanCurve,
    f: &BoundaryCorrespondence,
    tau: f64,
    n: usize,
) -> Result<f64> {
    Ok(f.derivative(tau) * t_operator_cotangent(curve, f, tau, n)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct TOperatorResult {
    #[serde(skip)]
    pub values: CircleField,
    pub form: TForm,
    pub nodes: usize,
    pub min: f64,
    pub argmin: f64,
    pub max_abs: f64,
    /// Max `|T_singular - T_cotangent|` over the spot-check nodes.
    pub cross_form_max: f64,
    pub spot_nodes: Vec<f64>,
}

impl TOperatorResult {
    pub fn values(&self) -> Vec<f64> {
        self.values.real_parts()
    }
}

/// Cotangent-form values on the standard grid, from `f'` and `beta(f)`
/// tabulated once on the half-shifted grid. Shared by [`t_field`] and the
/// mollification study.
fn cotangent_values(curve: &JordanCurve, f: &BoundaryCorrespondence, n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let (fp, beta): (Vec<f64>, Vec<f64>) = (0..n)
        .into_par_iter()
        .map(|j| {
            let u = (j as f64 + 0.5) * h;
            (f.derivative(u), curve.tangent_angle(f.eval(u)))
        })
        .unzip();
    let cot: Vec<f64> = (0..n / 2)
        .map(|m| 1.0 / ((m as f64 + 0.5) * h / 2.0).tan())
        .collect();
    (0..n)
        .into_par_iter()
        .map(|k| {
            let b0 = curve.tangent_angle(f.eval(k as f64 * h));
            let mut acc = 0.0;
            for (m, c) in cot.iter().enumerate() {
                let p = (k + m) % n;
                let q = (k + n - m - 1) % n;
                acc += c * (fp[p] * (beta[p] - b0).sin() - fp[q] * (beta[q] - b0).sin());
            }
            acc * h / (2.0 * PI)
        })
        .collect()
}

/// `T[f]` at the `n` nodes `tau_k = 2 pi k / n` (cotangent form), with the
/// singular form evaluated at 16 evenly spaced spot nodes as a cross-check.
pub fn t_field(
    curve: &JordanCurve,
    f: &BoundaryCorrespondence,
    n: usize,
) -> Result<TOperatorResult> {
    check_range(curve, f)?;
    let values = cotangent_values(curve, f, n);
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NumericalGuard(format!(
            "T is not finite at node {k}"
        )));
    }
    let field = CircleField::from_samples(values.iter().map(|v| (*v).into()).collect())?;
    let h = 2.0 * PI / n as f64;
    let (kmin, min) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |(bk, bv), (k, v)| if *v < bv { (k, *v) } else { (bk, bv) },
        );
    let spots: Vec<usize> = (0..16).map(|j| j * n / 16).collect();
    let mut cross: f64 = 0.0;
    for &k in &spots {
        let s = t_operator_singular(curve, f, k as f64 * h, n)?;
        cross = cross.max((s - values[k]).abs());
    }
    Ok(TOperatorResult {
        max_abs: values.iter().fold(0.0, |a, v| a.max(v.abs())),
        values: field,
        form: TForm::Cotangent,
        nodes: n,
        min,
        argmin: kmin as f64 * h,
        cross_form_max: cross,
        spot_nodes: spots.iter().map(|&k| k as f64 * h).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceStep {
    pub n: usize,
    /// `sup |psi_n - f|` over the nodes.
    pub map_gap: f64,
    /// `sup |T[psi_n] - T[f]|` over the nodes.
    pub t_gap: f64,
}

/// `sup`-norm gaps between `T[psi_n]` and `T[f]` along the mollified
/// sequence `psi_n`, for each `n` in `schedule`, on `nodes` nodes.
pub fn t_convergence_under_mollification(
    curve: &JordanCurve,
    f: &BoundaryCorrespondence,
    schedule: &[usize],
    nodes: usize,
) -> Result<Vec<ConvergenceStep>> {
    check_range(curve, f)?;
    check_nodes(nodes)?;
    let base = cotangent_values(curve, f, nodes);
    let h = 2.0 * PI / nodes as f64;
    schedule
        .iter()
        .map(|&n| {
            let psi = f.mollify(n)?;
            let t = cotangent_values(curve, &psi, nodes);
            let t_gap = t
                .iter()
                .zip(&base)
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            let map_gap = (0..nodes)
                .into_par_iter()
                .map(|k| {
                    let x = k as f64 * h;
                    (psi.eval(x) - f.eval(x)).abs()
                })
                .reduce(|| 0.0, f64::max);
            Ok(ConvergenceStep { n, map_gap, t_gap })
        })
        .collect()
}
