//! Uniform sampling inside simple polygons.

use crate::numerics::Rng;

pub type Point = [f64; 2];

/// Absolute shoelace area.
pub fn area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let [x0, y0] = poly[i];
        let [x1, y1] = poly[(i + 1) % n];
        s += x0 * y1 - x1 * y0;
    }
    s.abs() / 2.0
}

/// Even-odd ray casting.
pub fn contains(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let [xi, yi] = poly[i];
        let [xj, yj] = poly[j];
        if (yi > p[1]) != (yj > p[1]) && p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn bbox(poly: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in poly {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    (lo, hi)
}

/// One point uniformly inside the union of disjoint `polys`.
pub fn sample_in(polys: &[Vec<Point>], areas: &[f64], rng: &mut Rng) -> Point {
    let total: f64 = areas.iter().sum();
    let mut u = rng.unit() * total;
    let mut which = polys.len() - 1;
    for (i, a) in areas.iter().enumerate() {
        if u < *a {
            which = i;
            break;
        }
        u -= a;
    }
    let poly = &polys[which];
    let (lo, hi) = bbox(poly);
    loop {
        let p = [rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1])];
        if contains(poly, p) {
            return p;
        }
    }
}

#[cfg(test)]
fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

#[cfg(test)]
/// Proper crossing of segments `ab` and `cd`. Touching and collinear
/// overlap do not count; orientations within round-off of zero are zero.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let len = |p: Point, q: Point| (q[0] - p[0]).hypot(q[1] - p[1]);
    let tol = 1e-12 * len(a, b).max(len(c, d)).powi(2).max(f64::MIN_POSITIVE);
    let sign = |o: f64| if o.abs() <= tol { 0.0 } else { o.signum() };
    let o1 = sign(orient(a, b, c));
    let o2 = sign(orient(a, b, d));
    let o3 = sign(orient(c, d, a));
    let o4 = sign(orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}
