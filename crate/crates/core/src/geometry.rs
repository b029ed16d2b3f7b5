//! Planar geometry on complex numbers: polygons, convex hulls, distances.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Closest point to `z` on the segment `[a, b]`.
pub fn closest_on_segment(z: Complex64, a: Complex64, b: Complex64) -> Complex64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a;
    }
    let t = ((z - a).re * d.re + (z - a).im * d.im) / len2;
    a + d * t.clamp(0.0, 1.0)
}

pub fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    (z - closest_on_segment(z, a, b)).norm()
}

fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// A simple polygon with counter-clockwise vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Complex64>,
    area: f64,
}

impl Polygon {
    /// Builds a polygon, reorienting clockwise input. Rejects fewer than three
    /// vertices, zero area and self-intersecting boundaries.
    pub fn new(mut vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidArgument("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("polygon vertex is not finite".into()));
        }
        let signed = signed_area(&vertices);
        if signed.abs() < 1e-14 {
            return Err(Error::InvalidArgument("polygon has zero area".into()));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        let m = vertices.len();
        for i in 0..m {
            let (a, b) = (vertices[i], vertices[(i + 1) % m]);
            for j in (i + 2)..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let (c, d) = (vertices[j], vertices[(j + 1) % m]);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidArgument("polygon boundary self-intersects".into()));
                }
            }
        }
        Ok(Self {
            vertices,
            area: signed.abs(),
        })
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |i| (self.vertices[i], self.vertices[(i + 1) % m]))
    }

    /// Closed-set membership (boundary counts as inside).
    pub fn contains(&self, z: Complex64) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if segment_distance(z, a, b) == 0.0 {
                return true;
            }
            if (a.im > z.im) != (b.im > z.im) {
                let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
                if z.re < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(z, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn closest_boundary_point(&self, z: Complex64) -> Complex64 {
        let mut best = self.vertices[0];
        let mut best_d = f64::INFINITY;
        for (a, b) in self.edges() {
            let p = closest_on_segment(z, a, b);
            let d = (z - p).norm();
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        best
    }

    /// Distance to the closed polygonal region (zero inside).
    pub fn distance(&self, z: Complex64) -> f64 {
        if self.contains(z) {
            0.0
        } else {
            self.boundary_distance(z)
        }
    }

    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        bounding_box(&self.vertices)
    }

    pub fn translated(&self, a: Complex64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| v + a).collect(),
            area: self.area,
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub fn signed_area(v: &[Complex64]) -> f64 {
    let m = v.len();
    0.5 * (0..m).map(|i| cross(v[i], v[(i + 1) % m])).sum::<f64>()
}

pub fn bounding_box(points: &[Complex64]) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.re = lo.re.min(p.re);
        lo.im = lo.im.min(p.im);
        hi.re = hi.re.max(p.re);
        hi.im = hi.im.max(p.im);
    }
    (lo, hi)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, without
/// collinear points. Degenerate inputs return one or two points.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 1] - lower[lower.len() - 2], p - lower[lower.len() - 2]) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 1] - upper[upper.len() - 2], p - upper[upper.len() - 2]) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Distance from `z` to the convex hull given by [`convex_hull`] output
/// (zero inside).
pub fn hull_distance(hull: &[Complex64], z: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => segment_distance(z, hull[0], hull[1]),
        m => {
            let inside = (0..m).all(|i| cross(hull[(i + 1) % m] - hull[i], z - hull[i]) >= 0.0);
            if inside {
                0.0
            } else {
                (0..m)
                    .map(|i| segment_distance(z, hull[i], hull[(i + 1) % m]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}
