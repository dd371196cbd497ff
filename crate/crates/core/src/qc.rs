//! Quasiconformality of `w = P[F]` from boundary norms.
//!
//! With `a = ||F'||_inf`, `b = ||H(F')||_inf` and `l(F) = ess inf ||w_z| - |w_zbar||`
//! on the circle, `K = sqrt(a^2 + b^2 - l^2) / l = sqrt(2 S - 1)` where
//! `S = (a^2 + b^2) / (2 l^2)`, and the boundary dilatation is at most
//! `(S - 1) / (S + sqrt(2 S - 1))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::JordanCurve;
use crate::error::{Error, Result};
use crate::map::{compose_with_curve, BoundaryCorrespondence, BoundaryMap};
use crate::poisson::{boundary_complex_derivatives, HarmonicExtension};

pub const NOT_QC_BELOW: f64 = 1e-8;
pub const INCONCLUSIVE_BELOW: f64 = 1e-4;
const REFINE_TOL: f64 = 1e-4;
const MAX_NODES: usize = 16384;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormSample {
    pub nodes: usize,
    pub sup_fprime: f64,
    pub sup_hfprime: f64,
    pub l_f: f64,
    /// Max of `|w_zbar / w_z|` over the boundary nodes.
    pub mu_boundary: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryNorms {
    pub sup_fprime: f64,
    pub sup_hfprime: f64,
    pub l_f: f64,
    pub mu_boundary: f64,
    pub nodes: usize,
    pub converged: bool,
    pub trail: Vec<NormSample>,
}

fn sample_norms(map: &BoundaryMap, n: usize) -> Result<NormSample> {
    let fp = map.derivative_samples(n)?;
    let hfp = fp.conjugate();
    let h = 2.0 * PI / n as f64;
    let rows: Vec<(f64, f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let (wt, wr) = (fp.samples()[k], hfp.samples()[k]);
            let (wz, wzb) = boundary_complex_derivatives(k as f64 * h, wt, wr);
            let mu = if wz.norm() > 0.0 {
                wzb.norm() / wz.norm()
            } else {
                f64::INFINITY
            };
            (wt.norm(), wr.norm(), (wz.norm() - wzb.norm()).abs(), mu)
        })
        .collect();
    Ok(NormSample {
        nodes: n,
        sup_fprime: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        sup_hfprime: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        l_f: rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min),
        mu_boundary: rows.iter().map(|r| r.3).fold(0.0, f64::max),
    })
}

/// Grid extrema of `|F'|`, `|H(F')|` and `||w_z| - |w_zbar||` on the circle,
/// doubling the node count from `max(n, 1024)` until all three move less
/// than `1e-4` (at most 16384 nodes).
pub fn measure_norms(map: &BoundaryMap, n: usize) -> Result<BoundaryNorms> {
    if n < 256 {
        return Err(Error::InvalidNodeCount(n));
    }
    let mut nodes = n.max(1024).next_power_of_two();
    let mut trail = vec![sample_norms(map, nodes)?];
    let mut converged = false;
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = sample_norms(map, nodes)?;
        let prev = trail[trail.len() - 1];
        trail.push(next);
        let moved = (next.sup_fprime - prev.sup_fprime)
            .abs()
            .max((next.sup_hfprime - prev.sup_hfprime).abs())
            .max((next.l_f - prev.l_f).abs());
        if moved < REFINE_TOL {
            converged = true;
            break;
        }
    }
    let last = trail[trail.len() - 1];
    Ok(BoundaryNorms {
        sup_fprime: last.sup_fprime,
        sup_hfprime: last.sup_hfprime,
        l_f: last.l_f,
        mu_boundary: last.mu_boundary,
        nodes: last.nodes,
        converged,
        trail,
    })
}

/// [`measure_norms`] for `g o f`, failing with `DegenerateBoundary` when the
/// lower bound vanishes on the grid.
pub fn boundary_norms(
    curve: &JordanCurve,
    f: &BoundaryCorrespondence,
    n: usize,
) -> Result<BoundaryNorms> {
    let norms = measure_norms(&compose_with_curve(curve, f)?, n)?;
    if norms.l_f <= NOT_QC_BELOW {
        return Err(Error::DegenerateBoundary(norms.l_f));
    }
    Ok(norms)
}

/// `S = (a^2 + b^2) / (2 l^2)`.
pub fn s_composite(sup_fprime: f64, sup_hfprime: f64, l_f: f64) -> Result<f64> {
    if !(l_f > 0.0) {
        return Err(Error::ZeroLowerBound(l_f));
    }
    Ok((sup_fprime.powi(2) + sup_hfprime.powi(2)) / (2.0 * l_f * l_f))
}

/// `K = sqrt(a^2 + b^2 - l^2) / l`.
pub fn qc_constant(sup_fprime: f64, sup_hfprime: f64, l_f: f64) -> Result<f64> {
    if !(l_f > 0.0) {
        return Err(Error::ZeroLowerBound(l_f));
    }
    Ok((sup_fprime.powi(2) + sup_hfprime.powi(2) - l_f * l_f).sqrt() / l_f)
}

/// `(S - 1) / (S + sqrt(2 S - 1))`.
pub fn mu_bound(s: f64) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::SBelowOne(s));
    }
    Ok((s - 1.0) / (s + (2.0 * s - 1.0).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilatationSample {
    pub r: f64,
    pub tau: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DilatationField {
    pub max: f64,
    pub argmax: DilatationSample,
    #[serde(skip)]
    pub samples: Vec<DilatationSample>,
}

/// `mu = |w_zbar / w_z|` at `r_i = i / n_r` (`i < n_r`), `tau_j = 2 pi j / n_t`.
pub fn dilatation_field(h: &HarmonicExtension, n_r: usize, n_t: usize) -> Result<DilatationField> {
    if n_r == 0 || n_t == 0 {
        return Err(Error::InvalidSpec("grid needs n_r, n_t >= 1".into()));
    }
    let samples: Vec<DilatationSample> = (0..n_r)
        .into_par_iter()
        .flat_map_iter(|i| (0..n_t).map(move |j| (i, j)))
        .map(|(i, j)| {
            let r = i as f64 / n_r as f64;
            let tau = 2.0 * PI * j as f64 / n_t as f64;
            let mu = h.derivatives(Complex64::from_polar(r, tau))?.dilatation()?;
            Ok(DilatationSample { r, tau, mu })
        })
        .collect::<Result<_>>()?;
    let argmax = *samples
        .iter()
        .max_by(|a, b| a.mu.total_cmp(&b.mu))
        .expect("grid is nonempty");
    Ok(DilatationField {
        max: argmax.mu,
        argmax,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QcVerdict {
    Qc,
    NotQc,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QcOptions {
    pub nodes: usize,
    pub grid: (usize, usize),
}

impl Default for QcOptions {
    fn default() -> Self {
        Self {
            nodes: 1024,
            grid: (64, 256),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QcReport {
    pub sup_fprime: f64,
    pub sup_hfprime: f64,
    pub l_f: f64,
    pub s: Option<f64>,
    pub k_estimate: Option<f64>,
    /// `sqrt(2 S - 1)`, computed independently of `k_estimate`.
    pub k_from_s: Option<f64>,
    pub mu_bound: Option<f64>,
    pub mu_max_boundary: f64,
    pub mu_max_interior: Option<f64>,
    /// `(1 + mu_max) / (1 - mu_max)` over the interior grid.
    pub k_actual: Option<f64>,
    pub max_principle_ok: Option<bool>,
    pub verdict: QcVerdict,
    pub c2_declared: bool,
    pub holder_exponent: f64,
    pub nodes: usize,
    pub grid: (usize, usize),
    pub converged: bool,
    pub refinement: Vec<NormSample>,
    pub tolerances: QcTolerances,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QcTolerances {
    pub not_qc_below: f64,
    pub inconclusive_below: f64,
    pub refine: f64,
    pub mu_slack: f64,
}

const TOLERANCES: QcTolerances = QcTolerances {
    not_qc_below: NOT_QC_BELOW,
    inconclusive_below: INCONCLUSIVE_BELOW,
    refine: REFINE_TOL,
    mu_slack: 1e-6,
};

/// Full report for `w = P[g o f]`.
pub fn qc_verdict(
    curve: &JordanCurve,
    f: &BoundaryCorrespondence,
    opts: QcOptions,
) -> Result<QcReport> {
    let map = compose_with_curve(curve, f)?;
    let norms = measure_norms(&map, opts.nodes)?;
    let mut report = QcReport {
        sup_fprime: norms.sup_fprime,
        sup_hfprime: norms.sup_hfprime,
        l_f: norms.l_f,
        s: None,
        k_estimate: None,
        k_from_s: None,
        mu_bound: None,
        mu_max_boundary: norms.mu_boundary,
        mu_max_interior: None,
        k_actual: None,
        max_principle_ok: None,
        verdict: QcVerdict::NotQc,
        c2_declared: curve.is_c2(),
        holder_exponent: curve.holder_exponent(),
        nodes: norms.nodes,
        grid: opts.grid,
        converged: norms.converged,
        refinement: norms.trail.clone(),
        tolerances: TOLERANCES,
    };
    if norms.l_f <= NOT_QC_BELOW {
        return Ok(report);
    }
    let s = s_composite(norms.sup_fprime, norms.sup_hfprime, norms.l_f)?;
    let mu2 = mu_bound(s)?;
    report.s = Some(s);
    report.k_estimate = Some(qc_constant(norms.sup_fprime, norms.sup_hfprime, norms.l_f)?);
    report.k_from_s = Some((2.0 * s - 1.0).sqrt());
    report.mu_bound = Some(mu2);
    report.verdict = if norms.l_f < INCONCLUSIVE_BELOW || !norms.converged {
        QcVerdict::Inconclusive
    } else {
        QcVerdict::Qc
    };
    let ext = HarmonicExtension::from_boundary_map(&map, opts.nodes.next_power_of_two())?;
    let field = dilatation_field(&ext, opts.grid.0, opts.grid.1)?;
    report.mu_max_interior = Some(field.max);
    report.k_actual = Some((1.0 + field.max) / (1.0 - field.max));
    report.max_principle_ok = Some(field.max <= mu2 + TOLERANCES.mu_slack);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveSpec;
    use crate::field::CircleField;

    fn circle() -> JordanCurve {
        JordanCurve::build(&CurveSpec::circle(1.0), 256).unwrap()
    }

    #[test]
    fn constant_and_bound_arithmetic() {
        assert_eq!(qc_constant(1.0, 1.0, 1.0).unwrap(), 1.0);
        let k = qc_constant(2.0, 2.0, 1.0).unwrap();
        let s = s_composite(2.0, 2.0, 1.0).unwrap();
        assert_eq!(s, 4.0);
        assert!((k - 7f64.sqrt()).abs() < 1e-15);
        assert!((k - (2.0 * s - 1.0).sqrt()).abs() < 1e-12);
        assert!(matches!(
            qc_constant(1.0, 1.0, 0.0),
            Err(Error::ZeroLowerBound(_))
        ));
        assert_eq!(mu_bound(1.0).unwrap(), 0.0);
        assert!((mu_bound(2.0).unwrap() - 1.0 / (2.0 + 3f64.sqrt())).abs() < 1e-15);
        assert!(matches!(mu_bound(0.5), Err(Error::SBelowOne(_))));
    }

    #[test]
    fn constant_diverges_as_lower_bound_vanishes() {
        let mut last = 0.0;
        for l in [0.5, 0.1, 0.01, 1e-4] {
            let k = qc_constant(1.0, 1.0, l).unwrap();
            assert!(k > last);
            last = k;
        }
    }

    #[test]
    fn identity_norms() {
        let c = circle();
        let f = BoundaryCorrespondence::identity(c.length());
        let n = boundary_norms(&c, &f, 1024).unwrap();
        assert!((n.sup_fprime - 1.0).abs() < 1e-10);
        assert!((n.sup_hfprime - 1.0).abs() < 1e-10);
        assert!((n.l_f - 1.0).abs() < 1e-10);
        assert!(n.converged);
    }

    #[test]
    fn plateau_is_degenerate() {
        let c = circle();
        let f = BoundaryCorrespondence::plateau(c.length(), &[[1.0, 2.0]]).unwrap();
        assert!(matches!(
            boundary_norms(&c, &f, 1024),
            Err(Error::DegenerateBoundary(_))
        ));
    }

    #[test]
    fn affine_map_has_constant_dilatation() {
        let field = CircleField::from_fn(64, |t| {
            Complex64::from_polar(1.0, t) + 0.2 * Complex64::from_polar(1.0, -t)
        })
        .unwrap();
        let d = dilatation_field(&HarmonicExtension::from_field(field), 8, 16).unwrap();
        assert!(d.samples.iter().all(|s| (s.mu - 0.2).abs() < 1e-12));
    }

    #[test]
    fn vanishing_derivative_is_reported() {
        let field = CircleField::from_fn(64, |t| Complex64::from_polar(1.0, -t)).unwrap();
        assert!(matches!(
            dilatation_field(&HarmonicExtension::from_field(field), 4, 8),
            Err(Error::VanishingDerivative { .. })
        ));
    }
}
