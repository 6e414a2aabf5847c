//! Greedy shift selection on the boundary of the convex hull of the Ritz
//! values.

use num_complex::Complex64;

use super::upper_half;

pub const DEFAULT_HULL_POINTS: usize = 200;

/// Which extremum of the accumulated ADI rational function
/// `|∏ᵢ (z − ᾱᵢ)/(z + αᵢ)|` over the hull boundary becomes the next shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HullObjective {
    /// Largest magnitude: the region the used shifts damp least.
    #[default]
    MaxRational,
    /// Smallest magnitude.
    MinRational,
}

fn log_rational(z: Complex64, used: &[Complex64]) -> f64 {
    used.iter().map(|&a| (z - a.conj()).norm().ln() - (z + a).norm().ln()).sum()
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull vertices in counter-clockwise order (monotone chain).
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|z| (z.re, z.im)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts.into_iter().map(|(x, y)| Complex64::new(x, y)).collect();
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull.into_iter().map(|(x, y)| Complex64::new(x, y)).collect()
}

/// Hull vertices plus `count` points spread uniformly in arc length over
/// the closed boundary.
pub fn hull_boundary(vertices: &[Complex64], count: usize) -> Vec<Complex64> {
    let k = vertices.len();
    if k <= 1 {
        return vertices.to_vec();
    }
    let edges: Vec<(Complex64, Complex64)> = (0..k).map(|i| (vertices[i], vertices[(i + 1) % k])).collect();
    let perimeter: f64 = edges.iter().map(|(a, b)| (b - a).norm()).sum();
    let mut out = vertices.to_vec();
    if perimeter == 0.0 || count == 0 {
        return out;
    }
    let step = perimeter / count as f64;
    let mut edge = 0;
    let mut walked = 0.0;
    for i in 0..count {
        let target = i as f64 * step;
        while edge + 1 < edges.len() && walked + (edges[edge].1 - edges[edge].0).norm() < target {
            walked += (edges[edge].1 - edges[edge].0).norm();
            edge += 1;
        }
        let (a, b) = edges[edge];
        let len = (b - a).norm();
        let t = if len > 0.0 { ((target - walked) / len).clamp(0.0, 1.0) } else { 0.0 };
        out.push(a + (b - a) * t);
    }
    out
}

/// Next shift from the boundary of the conjugate-closed hull of `ritz`,
/// returned with `Im ≥ 0`.
pub fn convex_hull_shift(ritz: &[Complex64], used: &[Complex64], points: usize, objective: HullObjective) -> Complex64 {
    assert!(!ritz.is_empty(), "convex hull of an empty Ritz set");
    let closed: Vec<Complex64> = ritz.iter().flat_map(|&z| [z, z.conj()]).collect();
    let vertices = convex_hull(&closed);
    if vertices.len() == 1 {
        return upper_half(vertices[0]);
    }
    let boundary = hull_boundary(&vertices, points);
    let score = |z: Complex64| {
        let v = log_rational(z, used);
        match objective {
            HullObjective::MaxRational => v,
            HullObjective::MinRational => -v,
        }
    };
    let mut best = boundary[0];
    let mut best_val = f64::NEG_INFINITY;
    for &z in &boundary {
        if z.re >= 0.0 {
            continue;
        }
        let v = score(z);
        if v > best_val {
            best_val = v;
            best = z;
        }
    }
    upper_half(best)
}
