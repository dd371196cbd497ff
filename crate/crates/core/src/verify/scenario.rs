use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveSpec, FourierTerm, JordanCurve};
use crate::error::{Error, Result};
use crate::field::CircleField;
use crate::map::{BoundaryCorrespondence, MapSpec};

fn default_nodes() -> usize {
    1024
}

fn default_grid() -> [usize; 2] {
    [64, 256]
}

fn default_curve_samples() -> usize {
    512
}

fn default_schedule() -> Vec<usize> {
    vec![8, 16, 32, 64, 128, 256, 512]
}

fn default_seed() -> u64 {
    20_240_601
}

fn default_count() -> usize {
    12
}

fn default_probe_grid() -> [usize; 2] {
    [64, 256]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative half-width of the band `|t_min| <= band ||T||` reported as
    /// inconclusive.
    pub t_band: f64,
    /// Interior Jacobian samples below `-j_floor max|J|` count as folds.
    pub j_floor: f64,
    /// Most collision pairs recorded.
    pub max_collisions: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            t_band: 1e-6,
            j_floor: 1e-12,
            max_collisions: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MollifyOptions {
    #[serde(default = "default_schedule")]
    pub schedule: Vec<usize>,
}

impl Default for MollifyOptions {
    fn default() -> Self {
        Self {
            schedule: default_schedule(),
        }
    }
}

/// Random family of boundary maps for the probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeOptions {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_count")]
    pub count: usize,
    /// Extra maps always included ahead of the random draws.
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    #[serde(default = "default_probe_grid")]
    pub grid: [usize; 2],
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            count: default_count(),
            maps: Vec::new(),
            grid: default_probe_grid(),
        }
    }
}

/// A scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub map: Option<MapSpec>,
    /// Boundary values given directly as a trigonometric polynomial
    /// (extension only).
    #[serde(default)]
    pub boundary: Option<Vec<FourierTerm>>,
    #[serde(rename = "quadrature_N", default = "default_nodes")]
    pub quadrature_n: usize,
    #[serde(default = "default_grid")]
    pub grid: [usize; 2],
    #[serde(default = "default_curve_samples")]
    pub curve_samples: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub mollify: MollifyOptions,
    #[serde(default)]
    pub probe: ProbeOptions,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.curve.is_none() && self.boundary.is_none() {
            return bad("scenario needs a curve or boundary data");
        }
        if self.quadrature_n < 4 || !self.quadrature_n.is_power_of_two() {
            return Err(Error::InvalidNodeCount(self.quadrature_n));
        }
        if self.grid.iter().chain(&self.probe.grid).any(|&g| g == 0) {
            return bad("grid sizes must be positive");
        }
        let t = &self.tolerances;
        if !(t.t_band > 0.0 && t.j_floor > 0.0 && t.max_collisions > 0) {
            return bad("tolerances must be positive");
        }
        if self.mollify.schedule.contains(&0) {
            return bad("mollification indices must be >= 1");
        }
        Ok(())
    }

    pub fn build_curve(&self) -> Result<JordanCurve> {
        let spec = self
            .curve
            .as_ref()
            .ok_or_else(|| Error::InvalidSpec("command needs a curve".into()))?;
        JordanCurve::build(spec, self.curve_samples)
    }

    pub fn map_spec(&self) -> MapSpec {
        self.map.clone().unwrap_or(MapSpec::Identity)
    }

    pub fn build(&self) -> Result<(JordanCurve, BoundaryCorrespondence)> {
        let curve = self.build_curve()?;
        let f = BoundaryCorrespondence::from_spec(&self.map_spec(), curve.length())?;
        Ok((curve, f))
    }

    /// Boundary samples of the explicit trigonometric polynomial, if given.
    pub fn boundary_field(&self) -> Result<Option<CircleField>> {
        let Some(terms) = &self.boundary else {
            return Ok(None);
        };
        let top = terms.iter().map(|t| t.k.unsigned_abs()).max().unwrap_or(0) as usize;
        let n = self.quadrature_n.max((4 * top).next_power_of_two());
        CircleField::from_fn(n, |t| {
            terms
                .iter()
                .map(|FourierTerm { k, re, im }| {
                    Complex64::new(*re, *im) * Complex64::from_polar(1.0, *k as f64 * t)
                })
                .sum()
        })
        .map(Some)
    }
}

/// `"RxT"` as `[R, T]`.
pub fn parse_grid(s: &str) -> Result<[usize; 2]> {
    let bad = || Error::InvalidSpec(format!("grid must look like 64x256, got {s:?}"));
    let (r, t) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let t: usize = t.trim().parse().map_err(|_| bad())?;
    if r == 0 || t == 0 {
        return Err(bad());
    }
    Ok([r, t])
}
