//! Planar predicates on points stored as `Complex64`.

use num_complex::Complex64;

/// Twice the signed area of the triangle `(a, b, c)`.
pub fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let u = b - a;
    let v = c - a;
    u.re * v.im - u.im * v.re
}

fn on_segment(p: Complex64, q: Complex64, r: Complex64) -> bool {
    r.re >= p.re.min(q.re)
        && r.re <= p.re.max(q.re)
        && r.im >= p.im.min(q.im)
        && r.im <= p.im.max(q.im)
}

/// Closed segments `[p1, p2]` and `[q1, q2]` share at least one point.
pub fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// The open segments cross transversally: each separates the endpoints of
/// the other strictly. Touching and collinear overlap do not count.
pub fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            a.re * b.im - a.im * b.re
        })
        .sum::<f64>()
        * 0.5
}

/// Winding number of a closed polygon around `pt` (pt assumed off the polygon).
pub fn winding_number(poly: &[Complex64], pt: Complex64) -> i32 {
    let n = poly.len();
    let mut wn = 0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a.im <= pt.im {
            if b.im > pt.im && orient(a, b, pt) > 0.0 {
                wn += 1;
            }
        } else if b.im <= pt.im && orient(a, b, pt) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// `pt` lies strictly inside the (possibly non-convex) polygon.
pub fn strictly_inside(poly: &[Complex64], pt: Complex64) -> bool {
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if orient(a, b, pt) == 0.0 && on_segment(a, b, pt) {
            return false;
        }
    }
    winding_number(poly, pt) != 0
}

/// First pair of non-adjacent edges of a closed polygon that intersect.
///
/// Sweep over edges sorted by their left end; only edges whose x-extents
/// overlap are compared.
pub fn first_self_intersection(poly: &[Complex64]) -> Option<(usize, usize)> {
    let n = poly.len();
    if n < 4 {
        return None;
    }
    let edge = |i: usize| (poly[i], poly[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |i: usize| {
        let (a, b) = edge(i);
        a.re.min(b.re)
    };
    let max_x = |i: usize| {
        let (a, b) = edge(i);
        a.re.max(b.re)
    };
    order.sort_by(|&i, &j| min_x(i).total_cmp(&min_x(j)));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let x = min_x(i);
        active.retain(|&j| max_x(j) >= x);
        let (a, b) = edge(i);
        for &j in &active {
            let gap = (i + n - j) % n;
            if gap == 1 || gap == n - 1 {
                continue;
            }
            let (c, d) = edge(j);
            if a.im.max(b.im) < c.im.min(d.im) || c.im.max(d.im) < a.im.min(b.im) {
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Some((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    None
}
