//! Boundary Jacobian infimum and injectivity over a seeded family of maps.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::t_field;
use crate::error::Result;
use crate::map::{compose_with_curve, BoundaryCorrespondence, MapSpec};
use crate::poisson::HarmonicExtension;

use super::{boundary_mesh, Scenario};

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub map: MapSpec,
    /// Grid minimum of `f' T[f]` on the circle.
    pub essinf_jacobian: f64,
    pub t_min: f64,
    pub injective: bool,
    pub collisions: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub nodes: usize,
    pub grid: [usize; 2],
    pub rows: Vec<ProbeRow>,
}

fn draw(rng: &mut ChaCha8Rng, k: usize) -> MapSpec {
    if k.is_multiple_of(2) {
        MapSpec::Twist {
            amplitude: rng.random_range(0.1..1.0),
            frequency: rng.random_range(1..=4),
            phase: rng.random_range(0.0..2.0 * PI),
        }
    } else {
        let start = rng.random_range(0.0..2.0 * PI - 1.0);
        let len = rng.random_range(0.2..1.0);
        MapSpec::Plateau {
            arcs: vec![[start, start + len]],
        }
    }
}

/// The identity, the scenario's extra maps, then `count` seeded draws
/// alternating twists and single plateaus.
pub fn cmd_probe(s: &Scenario) -> Result<ProbeReport> {
    let curve = s.build_curve()?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.probe.seed);
    let mut maps = vec![MapSpec::Identity];
    maps.extend(s.probe.maps.iter().cloned());
    maps.extend((0..s.probe.count).map(|k| draw(&mut rng, k)));
    let n = s.quadrature_n;
    let rows = maps
        .into_iter()
        .map(|spec| {
            let f = BoundaryCorrespondence::from_spec(&spec, curve.length())?;
            let t = t_field(&curve, &f, n)?;
            let essinf_jacobian = t
                .values
                .nodes()
                .zip(t.values())
                .map(|(tau, v)| f.derivative(tau) * v)
                .fold(f64::INFINITY, f64::min);
            let map = compose_with_curve(&curve, &f)?;
            let ext = HarmonicExtension::from_boundary_map(&map, n)?;
            let collisions = boundary_mesh(&ext, &map, s.probe.grid)?
                .collisions(s.tolerances.max_collisions)
                .len();
            Ok(ProbeRow {
                map: spec,
                essinf_jacobian,
                t_min: t.min,
                injective: collisions == 0,
                collisions,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbeReport {
        seed: s.probe.seed,
        nodes: n,
        grid: s.probe.grid,
        rows,
    })
}
