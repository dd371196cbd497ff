//! Scenario-driven commands: extension grids, the diffeomorphism check,
//! `T`-fields, quasiconformality reports, mollification studies and the
//! probe over random boundary maps.

mod mesh;
mod probe;
mod scenario;

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{t_convergence_under_mollification, t_field, TOperatorResult};
use crate::error::{Error, Result};
use crate::map::{compose_with_curve, BoundaryMap};
use crate::poisson::{GridSample, HarmonicExtension};
use crate::qc::{qc_verdict, QcOptions, QcReport};

pub use mesh::{quads_overlap, CollisionPair, OverlapKind, PolarMesh};
pub use probe::{cmd_probe, ProbeReport, ProbeRow};
pub use scenario::{parse_grid, MollifyOptions, ProbeOptions, Scenario, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Diffeomorphism,
    FoldDetected,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Injectivity {
    Pass,
    Collision { pairs: Vec<CollisionPair> },
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffeoVerdict {
    pub t_min: f64,
    pub t_argmin: f64,
    pub t_max_abs: f64,
    /// `|t_min|` at or below this is inconclusive.
    pub t_band: f64,
    pub boundary_ok: bool,
    pub cross_form_max: f64,
    pub interior_jacobian_min: f64,
    /// `[r, tau]` of the smallest interior Jacobian sample.
    pub interior_jacobian_argmin: [f64; 2],
    pub injectivity: Injectivity,
    pub verdict: Verdict,
    pub nodes: usize,
    pub grid: [usize; 2],
}

/// Images of the polar grid vertices: the extension inside, `F` on the
/// circle.
pub fn boundary_mesh(
    ext: &HarmonicExtension,
    map: &BoundaryMap,
    grid: [usize; 2],
) -> Result<PolarMesh> {
    let [n_r, n_t] = grid;
    let pts: Vec<Complex64> = (0..=n_r)
        .into_par_iter()
        .flat_map_iter(|i| (0..n_t).map(move |j| (i, j)))
        .map(|(i, j)| {
            let tau = 2.0 * PI * j as f64 / n_t as f64;
            if i == n_r {
                Ok(map.value(tau))
            } else {
                ext.extend(Complex64::from_polar(i as f64 / n_r as f64, tau))
            }
        })
        .collect::<Result<_>>()?;
    Ok(PolarMesh::new(n_r, n_t, |i, j| pts[i * n_t + j]))
}

fn interior_jacobian(ext: &HarmonicExtension, grid: [usize; 2]) -> Result<(f64, [f64; 2], f64)> {
    let [n_r, n_t] = grid;
    let rows: Vec<(f64, f64, f64)> = (0..n_r)
        .into_par_iter()
        .flat_map_iter(|i| (0..n_t).map(move |j| (i, j)))
        .map(|(i, j)| {
            let r = i as f64 / n_r as f64;
            let tau = 2.0 * PI * j as f64 / n_t as f64;
            Ok((ext.jacobian(Complex64::from_polar(r, tau))?, r, tau))
        })
        .collect::<Result<_>>()?;
    let (mut min, mut arg, mut max_abs) = (f64::INFINITY, [0.0, 0.0], 0.0f64);
    for (j, r, tau) in rows {
        max_abs = max_abs.max(j.abs());
        if j < min {
            min = j;
            arg = [r, tau];
        }
    }
    Ok((min, arg, max_abs))
}

/// Boundary test `T > 0`, interior Jacobian signs and cell-overlap
/// injectivity, combined into a verdict.
pub fn cmd_verify(s: &Scenario) -> Result<DiffeoVerdict> {
    let (curve, f) = s.build()?;
    let map = compose_with_curve(&curve, &f)?;
    let n = s.quadrature_n;
    let ext = HarmonicExtension::from_boundary_map(&map, n)?;
    let t = t_field(&curve, &f, n)?;
    let (j_min, j_arg, j_max) = interior_jacobian(&ext, s.grid)?;
    let pairs = boundary_mesh(&ext, &map, s.grid)?.collisions(s.tolerances.max_collisions);

    let band = s.tolerances.t_band * t.max_abs;
    let boundary_ok = t.min > band;
    let folded = !pairs.is_empty() || j_min < -s.tolerances.j_floor * j_max;
    let verdict = if folded {
        Verdict::FoldDetected
    } else if boundary_ok && j_min > 0.0 {
        Verdict::Diffeomorphism
    } else {
        Verdict::Inconclusive
    };
    Ok(DiffeoVerdict {
        t_min: t.min,
        t_argmin: t.argmin,
        t_max_abs: t.max_abs,
        t_band: band,
        boundary_ok,
        cross_form_max: t.cross_form_max,
        interior_jacobian_min: j_min,
        interior_jacobian_argmin: j_arg,
        injectivity: if pairs.is_empty() {
            Injectivity::Pass
        } else {
            Injectivity::Collision { pairs }
        },
        verdict,
        nodes: n,
        grid: s.grid,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtendSummary {
    pub nodes: usize,
    pub grid: [usize; 2],
    pub boundary_switch: f64,
    pub jacobian_min: f64,
    pub jacobian_max: f64,
    pub center_value: [f64; 2],
}

pub struct ExtendOutput {
    pub summary: ExtendSummary,
    pub samples: Vec<GridSample>,
}

pub fn extension_for(s: &Scenario) -> Result<HarmonicExtension> {
    if let Some(field) = s.boundary_field()? {
        return Ok(HarmonicExtension::from_field(field));
    }
    let (curve, f) = s.build()?;
    HarmonicExtension::from_boundary_map(&compose_with_curve(&curve, &f)?, s.quadrature_n)
}

/// `w` and `J_w` on the polar grid, boundary ring included.
pub fn cmd_extend(s: &Scenario) -> Result<ExtendOutput> {
    let ext = extension_for(s)?;
    let samples = ext.polar_grid(s.grid[0], s.grid[1])?;
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), g| {
            (a.min(g.jacobian), b.max(g.jacobian))
        });
    let w0 = ext.extend(Complex64::new(0.0, 0.0))?;
    Ok(ExtendOutput {
        summary: ExtendSummary {
            nodes: ext.nodes(),
            grid: s.grid,
            boundary_switch: ext.boundary_switch(),
            jacobian_min: lo,
            jacobian_max: hi,
            center_value: [w0.re, w0.im],
        },
        samples,
    })
}

/// One row of the `T`-field export.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TRow {
    pub tau: f64,
    pub t_value: f64,
    pub fprime: f64,
    pub boundary_jacobian: f64,
}

pub struct TfunOutput {
    pub report: TOperatorResult,
    pub rows: Vec<TRow>,
}

pub fn cmd_tfun(s: &Scenario) -> Result<TfunOutput> {
    let (curve, f) = s.build()?;
    let report = t_field(&curve, &f, s.quadrature_n)?;
    let rows = report
        .values
        .nodes()
        .zip(report.values())
        .map(|(tau, t)| {
            let d = f.derivative(tau);
            TRow {
                tau,
                t_value: t,
                fprime: d,
                boundary_jacobian: d * t,
            }
        })
        .collect();
    Ok(TfunOutput { report, rows })
}

pub fn cmd_qc(s: &Scenario) -> Result<QcReport> {
    let (curve, f) = s.build()?;
    qc_verdict(
        &curve,
        &f,
        QcOptions {
            nodes: s.quadrature_n,
            grid: (s.grid[0], s.grid[1]),
        },
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct MollifyStep {
    pub n: usize,
    /// `sup |psi_n - f|` on the nodes.
    pub map_gap: f64,
    /// `1/n + L/n`.
    pub map_gap_bound: f64,
    pub t_gap: f64,
    /// `sup |psi_n(x + 2 pi) - psi_n(x) - l|`.
    pub period_defect: f64,
    pub psi_derivative_range: [f64; 2],
    pub psi_bracket: [f64; 2],
    /// Range of `(f * rho_{1/n})'`, to be inside `[lip_lower, lip_upper]` of `f`.
    pub convolution_derivative_range: [f64; 2],
    pub bracket_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MollifyReport {
    pub lip_lower: f64,
    pub lip_upper: f64,
    pub nodes: usize,
    pub steps: Vec<MollifyStep>,
    /// `t_gap` never grows by more than 10% along the schedule.
    pub t_gap_decreasing: bool,
}

/// Bracket checks use this slack.
pub const BRACKET_SLACK: f64 = 1e-9;

pub fn cmd_mollify(s: &Scenario) -> Result<MollifyReport> {
    let (curve, f) = s.build()?;
    let n = s.quadrature_n;
    let schedule = &s.mollify.schedule;
    let conv = t_convergence_under_mollification(&curve, &f, schedule, n)?;
    let l = f.period_shift();
    let h = 2.0 * PI / n as f64;
    let steps = conv
        .iter()
        .map(|c| {
            let psi = f.mollify(c.n)?;
            let pure = f.convolve(1.0 / c.n as f64)?;
            let period_defect = (0..n)
                .into_par_iter()
                .map(|k| {
                    let x = k as f64 * h;
                    (psi.eval(x + 2.0 * PI) - psi.eval(x) - l).abs()
                })
                .reduce(|| 0.0, f64::max);
            let (plo, phi) = psi.derivative_range(n);
            let (clo, chi) = pure.derivative_range(n);
            let bracket_ok = plo >= psi.lip_lower() - BRACKET_SLACK
                && phi <= psi.lip_upper() + BRACKET_SLACK
                && clo >= f.lip_lower() - BRACKET_SLACK
                && chi <= f.lip_upper() + BRACKET_SLACK;
            let nf = c.n as f64;
            Ok(MollifyStep {
                n: c.n,
                map_gap: c.map_gap,
                map_gap_bound: 1.0 / nf + f.lip_upper() / nf,
                t_gap: c.t_gap,
                period_defect,
                psi_derivative_range: [plo, phi],
                psi_bracket: [psi.lip_lower(), psi.lip_upper()],
                convolution_derivative_range: [clo, chi],
                bracket_ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let t_gap_decreasing = steps
        .windows(2)
        .all(|w| w[1].t_gap <= 1.1 * w[0].t_gap + 1e-12);
    Ok(MollifyReport {
        lip_lower: f.lip_lower(),
        lip_upper: f.lip_upper(),
        nodes: n,
        steps,
        t_gap_decreasing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Extend,
    Verify,
    Tfun,
    Qc,
    Mollify,
    Probe,
}

/// A named output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

fn json(name: &str, value: &impl Serialize) -> Result<Artifact> {
    let mut contents = serde_json::to_string_pretty(value)
        .map_err(|e| Error::NumericalGuard(format!("report is not serializable: {e}")))?;
    contents.push('\n');
    Ok(Artifact {
        name: name.into(),
        contents,
    })
}

fn csv(name: &str, header: &str, rows: impl Iterator<Item = String>) -> Artifact {
    let mut contents = String::from(header);
    contents.push('\n');
    for r in rows {
        contents.push_str(&r);
        contents.push('\n');
    }
    Artifact {
        name: name.into(),
        contents,
    }
}

/// Run `cmd` and render its CSV and JSON outputs.
pub fn run(cmd: Command, s: &Scenario) -> Result<Vec<Artifact>> {
    match cmd {
        Command::Extend => {
            let out = cmd_extend(s)?;
            let rows = out.samples.iter().map(|g| {
                let mut line = String::new();
                let _ = write!(
                    line,
                    "{},{},{},{},{}",
                    g.r, g.tau, g.w.re, g.w.im, g.jacobian
                );
                line
            });
            Ok(vec![
                csv("extend.csv", "r,tau,re_w,im_w,jacobian", rows),
                json("extend.json", &out.summary)?,
            ])
        }
        Command::Verify => Ok(vec![json("verify.json", &cmd_verify(s)?)?]),
        Command::Tfun => {
            let out = cmd_tfun(s)?;
            let rows = out.rows.iter().map(|r| {
                format!(
                    "{},{},{},{}",
                    r.tau, r.t_value, r.fprime, r.boundary_jacobian
                )
            });
            Ok(vec![
                csv("tfun.csv", "tau,T_value,fprime,boundary_jacobian", rows),
                json("tfun.json", &out.report)?,
            ])
        }
        Command::Qc => Ok(vec![json("qc.json", &cmd_qc(s)?)?]),
        Command::Mollify => Ok(vec![json("mollify.json", &cmd_mollify(s)?)?]),
        Command::Probe => Ok(vec![json("probe.json", &cmd_probe(s)?)?]),
    }
}
