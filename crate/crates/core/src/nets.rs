//! ε-nets of compact planar sets.
//!
//! Construction follows the two-phase argument behind the cardinality bound
//! `(1 + 4M/ε)²`: an ε/2-separated set covering the disk `|z| ≤ M`, then one
//! domain point chosen inside the ε/2-ball around each separated point that
//! meets the domain.
//!
//! The separated set is a hexagonal lattice of spacing ε/2 (scaled up by
//! 1e-9 so that rounding never breaks separation), whose covering radius
//! `ε / (2√3)` leaves slack for the second phase: every domain point is
//! within `ε/(2√3) + ε/2 < ε` of the net.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Polygon;
use crate::measure::Measure;

const LATTICE_STRETCH: f64 = 1.0 + 1e-9;

/// A compact planar set described by membership and local search.
pub trait Region: Sync {
    fn contains(&self, z: Complex64) -> bool;

    /// Some point of the region within distance `r` of `c`, or `None` when
    /// the ball misses the region.
    fn point_near(&self, c: Complex64, r: f64) -> Option<Complex64>;
}

/// `p` if `contains(p)`, else the first member on small rings about `p`
/// that stays within `r` of `c`. Boundary projections can round outward.
fn settle(contains: impl Fn(Complex64) -> bool, p: Complex64, c: Complex64, r: f64) -> Option<Complex64> {
    if contains(p) {
        return Some(p);
    }
    for step in [1e-13, 1e-12, 1e-11, 1e-10, 1e-9] {
        let delta = step * (1.0 + p.norm());
        for j in 0..16 {
            let q = p + Complex64::from_polar(delta, 2.0 * PI * j as f64 / 16.0);
            if contains(q) && (q - c).norm() < r {
                return Some(q);
            }
        }
    }
    None
}

/// Closed disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Region for Disk {
    fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }

    fn point_near(&self, c: Complex64, r: f64) -> Option<Complex64> {
        let d = (c - self.center).norm();
        if d <= self.radius {
            return Some(c);
        }
        if d - self.radius >= r {
            return None;
        }
        settle(
            |z| self.contains(z),
            self.center + (c - self.center) * (self.radius / d),
            c,
            r,
        )
    }
}

/// Closed annulus `r_in ≤ |z - center| ≤ r_out`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub center: Complex64,
    pub r_in: f64,
    pub r_out: f64,
}

impl Region for Annulus {
    fn contains(&self, z: Complex64) -> bool {
        let d = (z - self.center).norm();
        self.r_in <= d && d <= self.r_out
    }

    fn point_near(&self, c: Complex64, r: f64) -> Option<Complex64> {
        let v = c - self.center;
        let d = v.norm();
        if self.contains(c) {
            return Some(c);
        }
        let target = d.clamp(self.r_in, self.r_out);
        if (target - d).abs() >= r {
            return None;
        }
        let dir = if d == 0.0 { Complex64::new(1.0, 0.0) } else { v / d };
        settle(|z| self.contains(z), self.center + dir * target, c, r)
    }
}

/// Circle `|z - center| = radius` as a curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleCurve {
    pub center: Complex64,
    pub radius: f64,
}

impl Region for CircleCurve {
    fn contains(&self, z: Complex64) -> bool {
        ((z - self.center).norm() - self.radius).abs() <= 1e-12 * (1.0 + self.radius)
    }

    fn point_near(&self, c: Complex64, r: f64) -> Option<Complex64> {
        let v = c - self.center;
        let d = v.norm();
        if (d - self.radius).abs() >= r {
            return None;
        }
        let dir = if d == 0.0 { Complex64::new(1.0, 0.0) } else { v / d };
        Some(self.center + dir * self.radius)
    }
}

/// Finite point set.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet(pub Vec<Complex64>);

impl Region for PointSet {
    fn contains(&self, z: Complex64) -> bool {
        self.0.contains(&z)
    }

    fn point_near(&self, c: Complex64, r: f64) -> Option<Complex64> {
        self.0
            .iter()
            .copied()
            .filter(|p| (p - c).norm() < r)
            .min_by(|a, b| (a - c).norm().total_cmp(&(b - c).norm()))
    }
}

impl Region for Polygon {
    fn contains(&self, z: Complex64) -> bool {
        Polygon::contains(self, z)
    }

    fn point_near(&self, c: Complex64, r: f64) -> Option<Complex64> {
        if Polygon::contains(self, c) {
            return Some(c);
        }
        let p = self.closest_boundary_point(c);
        if (p - c).norm() >= r {
            return None;
        }
        settle(|z| Polygon::contains(self, z), p, c, r)
    }
}

/// `{|z| ≤ radius} \ S(ε)`: the disk with the open ε-neighborhood of the
/// support of `measure` removed.
#[derive(Clone, Debug)]
pub struct DiskMinusNeighborhood {
    pub radius: f64,
    pub measure: Measure,
    pub epsilon: f64,
}

impl Region for DiskMinusNeighborhood {
    fn contains(&self, z: Complex64) -> bool {
        z.norm() <= self.radius && !self.measure.in_support_neighborhood(self.epsilon, z)
    }

    fn point_near(&self, c: Complex64, r: f64) -> Option<Complex64> {
        if self.contains(c) {
            return Some(c);
        }
        // rings of growing radius; the first hit is nearly closest
        const RINGS: usize = 24;
        for t in 1..=RINGS {
            let rho = r * t as f64 / RINGS as f64 * (1.0 - 1e-12);
            let k = 6 * t;
            for j in 0..k {
                let z = c + Complex64::from_polar(rho, 2.0 * PI * j as f64 / k as f64);
                if self.contains(z) {
                    return Some(z);
                }
            }
        }
        None
    }
}

/// An ε-net of a region inside `|z| ≤ bound_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Net {
    pub points: Vec<Complex64>,
    /// The phase-1 separated points.
    pub separated: Vec<Complex64>,
    pub epsilon: f64,
    pub bound_m: f64,
}

impl Net {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `(1 + 4M/ε)²`.
pub fn cardinality_bound(m: f64, epsilon: f64) -> f64 {
    (1.0 + 4.0 * m / epsilon).powi(2)
}

/// Hexagonal lattice of the given spacing through the origin, restricted to
/// `|z| ≤ radius`, in row-major order.
fn hex_lattice(spacing: f64, radius: f64) -> Vec<Complex64> {
    let row_h = spacing * 3f64.sqrt() / 2.0;
    let rows = (radius / row_h).ceil() as i64;
    let cols = (radius / spacing).ceil() as i64 + 1;
    let mut out = Vec::new();
    for j in -rows..=rows {
        let y = j as f64 * row_h;
        let shift = if j.rem_euclid(2) == 1 { spacing / 2.0 } else { 0.0 };
        for i in -cols..=cols {
            let z = Complex64::new(i as f64 * spacing + shift, y);
            if z.norm() <= radius {
                out.push(z);
            }
        }
    }
    out
}

/// Builds an ε-net of `domain`, which must lie in `|z| ≤ m`. An empty
/// domain gives an empty net.
pub fn build_net(domain: &dyn Region, m: f64, epsilon: f64) -> Result<Net> {
    if !(m > 0.0 && m.is_finite() && epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need M > 0 and ε > 0, got M={m}, ε={epsilon}"
        )));
    }
    let spacing = epsilon / 2.0 * LATTICE_STRETCH;
    let separated = hex_lattice(spacing, m + spacing / 3f64.sqrt());
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    for &x in &separated {
        if let Some(y) = domain.point_near(x, epsilon / 2.0) {
            if seen.insert((y.re.to_bits(), y.im.to_bits())) {
                points.push(y);
            }
        }
    }
    Ok(Net {
        points,
        separated,
        epsilon,
        bound_m: m,
    })
}

/// Bucketed nearest-point lookup over a fixed point set.
pub struct PointIndex {
    cell: f64,
    buckets: std::collections::HashMap<(i64, i64), Vec<Complex64>>,
}

impl PointIndex {
    pub fn new(points: &[Complex64], cell: f64) -> Self {
        let mut buckets: std::collections::HashMap<(i64, i64), Vec<Complex64>> = Default::default();
        for &p in points {
            buckets.entry(Self::key(p, cell)).or_default().push(p);
        }
        Self { cell, buckets }
    }

    fn key(p: Complex64, cell: f64) -> (i64, i64) {
        ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64)
    }

    /// Distance to the nearest indexed point if it is below `cell`, else `None`.
    pub fn nearest_within_cell(&self, z: Complex64) -> Option<f64> {
        let (kx, ky) = Self::key(z, self.cell);
        let mut best = f64::INFINITY;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(b) = self.buckets.get(&(kx + dx, ky + dy)) {
                    for p in b {
                        best = best.min((z - p).norm());
                    }
                }
            }
        }
        (best < self.cell).then_some(best)
    }
}

/// Probe points of `domain` on a square grid of the given pitch over `[-m, m]²`.
pub fn probe_points(domain: &dyn Region, m: f64, pitch: f64) -> Vec<Complex64> {
    let k = (m / pitch).ceil() as i64;
    let mut out = Vec::new();
    for j in -k..=k {
        for i in -k..=k {
            let z = Complex64::new(i as f64 * pitch, j as f64 * pitch);
            if domain.contains(z) {
                out.push(z);
            }
        }
    }
    out
}

/// Whether every probe point (plus any `extra` probes in the domain) lies
/// strictly within ε of the net.
pub fn covers(net: &Net, domain: &dyn Region, pitch: f64, extra: &[Complex64]) -> bool {
    let index = PointIndex::new(&net.points, net.epsilon);
    probe_points(domain, net.bound_m, pitch)
        .into_iter()
        .chain(extra.iter().copied().filter(|&z| domain.contains(z)))
        .all(|z| index.nearest_within_cell(z).is_some())
}

/// Smallest pairwise distance among the separated points.
pub fn min_separation(net: &Net) -> f64 {
    let index = PointIndex::new(&net.separated, net.epsilon);
    let mut best = f64::INFINITY;
    for (kx, ky) in index.buckets.keys() {
        let here = &index.buckets[&(*kx, *ky)];
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(there) = index.buckets.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for p in here {
                    for q in there {
                        if p != q {
                            best = best.min((p - q).norm());
                        }
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_disk_unit_epsilon() {
        let d = Disk {
            center: c(0., 0.),
            radius: 1.0,
        };
        let net = build_net(&d, 1.0, 1.0).unwrap();
        assert!(net.len() as f64 <= 25.0, "{}", net.len());
        assert!(covers(&net, &d, 0.1, &[]));
    }

    #[test]
    fn single_point_net() {
        let a = c(0.7, -0.2);
        for eps in [0.01, 0.3, 2.0] {
            let net = build_net(&PointSet(vec![a]), a.norm() + 1.0, eps).unwrap();
            assert_eq!(net.points, vec![a]);
        }
    }

    #[test]
    fn unit_circle_curve() {
        let d = CircleCurve {
            center: c(0., 0.),
            radius: 1.0,
        };
        let net = build_net(&d, 1.0, 0.1).unwrap();
        assert!(net.len() <= 1681);
        let probes: Vec<_> = (0..1000)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 1000.0))
            .collect();
        let index = PointIndex::new(&net.points, 0.1);
        assert!(probes.iter().all(|&z| index.nearest_within_cell(z).is_some()));
    }

    #[test]
    fn separation_is_exact() {
        let d = Disk {
            center: c(0., 0.),
            radius: 2.0,
        };
        for eps in [0.05, 0.3, 1.0] {
            let net = build_net(&d, 2.0, eps).unwrap();
            assert!(min_separation(&net) >= eps / 2.0);
        }
    }

    #[test]
    fn empty_domain_gives_empty_net() {
        let net = build_net(&PointSet(vec![]), 1.0, 0.1).unwrap();
        assert!(net.is_empty());
    }

    #[test]
    fn cardinality_for_full_disks() {
        for &(m, eps) in &[(1.0, 1.0), (1.0, 0.5), (1.0, 0.1), (3.0, 0.15), (0.2, 1.0), (2.5, 0.07)] {
            let d = Disk {
                center: c(0., 0.),
                radius: m,
            };
            let net = build_net(&d, m, eps).unwrap();
            assert!(net.len() as f64 <= cardinality_bound(m, eps), "M={m} ε={eps}: {}", net.len());
        }
    }

    #[test]
    fn disk_minus_neighborhood_covering() {
        let d = DiskMinusNeighborhood {
            radius: 3.0,
            measure: Measure::unit_circle(),
            epsilon: 0.15,
        };
        let net = build_net(&d, 3.0, 0.3).unwrap();
        assert!(net.points.iter().all(|&z| d.contains(z)));
        assert!(covers(&net, &d, 0.03, &[]));
    }

    #[test]
    fn rejects_bad_parameters() {
        let d = PointSet(vec![c(0., 0.)]);
        assert!(build_net(&d, 0.0, 0.1).is_err());
        assert!(build_net(&d, 1.0, -0.1).is_err());
    }
}
