//! Injectivity of a map on the disk, tested on the images of polar grid
//! cells.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::geom;

/// Images of the polar grid vertices `r_i e^{i tau_j}`, `i = 0..=n_r`,
/// `j = 0..n_t`, stored row-major in `i`.
#[derive(Debug, Clone)]
pub struct PolarMesh {
    n_r: usize,
    n_t: usize,
    vertices: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapKind {
    EdgeCrossing,
    VertexInside,
}

/// Two non-adjacent cells whose images overlap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollisionPair {
    pub first: [usize; 2],
    pub second: [usize; 2],
    pub first_quad: [[f64; 2]; 4],
    pub second_quad: [[f64; 2]; 4],
    pub kind: OverlapKind,
}

fn to_points(q: &[[f64; 2]; 4]) -> [Complex64; 4] {
    q.map(|p| Complex64::new(p[0], p[1]))
}

/// Strict overlap of two quadrilaterals: a transversal edge crossing or a
/// vertex strictly inside the other cell. Shared or coincident boundary
/// points do not count.
pub fn quads_overlap(a: &[Complex64; 4], b: &[Complex64; 4]) -> Option<OverlapKind> {
    for i in 0..4 {
        for j in 0..4 {
            if geom::segments_cross(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4]) {
                return Some(OverlapKind::EdgeCrossing);
            }
        }
    }
    let inside = |p: &[Complex64; 4], q: &[Complex64; 4]| {
        geom::signed_area(q).abs() > 0.0 && p.iter().any(|v| geom::strictly_inside(q, *v))
    };
    if inside(a, b) || inside(b, a) {
        return Some(OverlapKind::VertexInside);
    }
    None
}

impl CollisionPair {
    /// Re-run the exact overlap test on the stored coordinates.
    pub fn recheck(&self) -> bool {
        quads_overlap(&to_points(&self.first_quad), &to_points(&self.second_quad)).is_some()
    }
}

impl PolarMesh {
    pub fn new(n_r: usize, n_t: usize, vertex: impl Fn(usize, usize) -> Complex64) -> Self {
        let vertices = (0..=n_r)
            .flat_map(|i| (0..n_t).map(move |j| (i, j)))
            .map(|(i, j)| vertex(i, j))
            .collect();
        Self { n_r, n_t, vertices }
    }

    fn v(&self, i: usize, j: usize) -> Complex64 {
        self.vertices[i * self.n_t + j % self.n_t]
    }

    /// Cell `(i, j)` spans `[r_i, r_{i+1}] x [tau_j, tau_{j+1}]`.
    pub fn quad(&self, i: usize, j: usize) -> [Complex64; 4] {
        [
            self.v(i, j),
            self.v(i, j + 1),
            self.v(i + 1, j + 1),
            self.v(i + 1, j),
        ]
    }

    fn adjacent(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        if a.0 == 0 && b.0 == 0 {
            return true;
        }
        let dj = (a.1 + self.n_t - b.1) % self.n_t;
        a.0.abs_diff(b.0) <= 1 && (dj <= 1 || dj == self.n_t - 1)
    }

    /// Up to `limit` overlapping pairs of non-adjacent cells, found with a
    /// uniform spatial hash over cell bounding boxes.
    pub fn collisions(&self, limit: usize) -> Vec<CollisionPair> {
        let cells: Vec<(usize, usize)> = (0..self.n_r)
            .flat_map(|i| (0..self.n_t).map(move |j| (i, j)))
            .collect();
        let boxes: Vec<(Complex64, Complex64)> = cells
            .iter()
            .map(|&(i, j)| {
                let q = self.quad(i, j);
                let lo = q
                    .iter()
                    .fold(q[0], |m, p| Complex64::new(m.re.min(p.re), m.im.min(p.im)));
                let hi = q
                    .iter()
                    .fold(q[0], |m, p| Complex64::new(m.re.max(p.re), m.im.max(p.im)));
                (lo, hi)
            })
            .collect();
        let mean_size = boxes
            .iter()
            .map(|(lo, hi)| (hi.re - lo.re).max(hi.im - lo.im))
            .sum::<f64>()
            / boxes.len() as f64;
        let size = if mean_size > 0.0 {
            2.0 * mean_size
        } else {
            1.0
        };
        let key = |x: f64| (x / size).floor() as i64;

        let mut hash: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (idx, (lo, hi)) in boxes.iter().enumerate() {
            for gx in key(lo.re)..=key(hi.re) {
                for gy in key(lo.im)..=key(hi.im) {
                    hash.entry((gx, gy)).or_default().push(idx);
                }
            }
        }

        let mut found = Vec::new();
        for (a, (lo, hi)) in boxes.iter().enumerate() {
            let mut cand: Vec<usize> = Vec::new();
            for gx in key(lo.re)..=key(hi.re) {
                for gy in key(lo.im)..=key(hi.im) {
                    if let Some(list) = hash.get(&(gx, gy)) {
                        cand.extend(list.iter().filter(|&&b| b > a));
                    }
                }
            }
            cand.sort_unstable();
            cand.dedup();
            for b in cand {
                let (ca, cb) = (cells[a], cells[b]);
                if self.adjacent(ca, cb) {
                    continue;
                }
                let (blo, bhi) = boxes[b];
                if blo.re > hi.re || bhi.re < lo.re || blo.im > hi.im || bhi.im < lo.im {
                    continue;
                }
                let (qa, qb) = (self.quad(ca.0, ca.1), self.quad(cb.0, cb.1));
                if let Some(kind) = quads_overlap(&qa, &qb) {
                    found.push(CollisionPair {
                        first: [ca.0, ca.1],
                        second: [cb.0, cb.1],
                        first_quad: qa.map(|p| [p.re, p.im]),
                        second_quad: qb.map(|p| [p.re, p.im]),
                        kind,
                    });
                    if found.len() >= limit {
                        return found;
                    }
                }
            }
        }
        found
    }
}
