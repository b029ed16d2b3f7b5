//! Compactly supported probability measures on the complex plane.
//!
//! Each [`Measure`] knows how to sample itself, evaluate its Cauchy–Stieltjes
//! transform `m(z) = ∫ dμ(x) / (z - x)` off the support, describe the zero set
//! of that transform, and answer membership queries for the ε-neighborhoods
//! `N(ε)` (support plus zero set) and `S(ε)` (support only).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Polygon};
use crate::polyroots;
use crate::quadrature;

/// Points closer than this to the support are treated as on the support.
pub const SUPPORT_TOL: f64 = 1e-9;

/// Half-distance between the centers of the two unit circles of [`MeasureKind::TwoCircles`].
pub const TWO_CIRCLES_OFFSET: f64 = 2.5;

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    UniformCircle {
        center: Complex64,
        radius: f64,
    },
    /// Uniform on the union of the unit circles centered at ±5/2.
    TwoCircles,
    UniformDisk {
        center: Complex64,
        radius: f64,
    },
    UniformRegion(Polygon),
    Atomic(Vec<(Complex64, f64)>),
    Degenerate(Complex64),
}

/// Zero set of the Cauchy–Stieltjes transform outside the support.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroSet {
    Empty,
    /// Finitely many zeros. `approximate` marks numerically located points.
    Points {
        points: Vec<Complex64>,
        approximate: bool,
    },
    /// The open disk `|z - center| < radius`.
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// The numeric search could not certify its result.
    Unknown,
}

impl ZeroSet {
    pub fn distance(&self, z: Complex64) -> f64 {
        match self {
            ZeroSet::Empty | ZeroSet::Unknown => f64::INFINITY,
            ZeroSet::Points { points, .. } => points.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min),
            ZeroSet::Disk { center, radius } => ((z - center).norm() - radius).max(0.0),
        }
    }
}

/// Outline of the support, for plotting.
#[derive(Clone, Debug, PartialEq)]
pub enum Outline {
    Circle { center: Complex64, radius: f64 },
    Polygon(Vec<Complex64>),
}

/// A probability measure on ℂ with compact support. Immutable once built;
/// derived data (numeric zero sets) is computed lazily and cached.
#[derive(Clone, Debug)]
pub struct Measure {
    kind: MeasureKind,
    support_bound: f64,
    zeros: OnceLock<ZeroSet>,
}

impl PartialEq for Measure {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Measure {
    fn from_kind(kind: MeasureKind) -> Self {
        let support_bound = match &kind {
            MeasureKind::UniformCircle { center, radius } | MeasureKind::UniformDisk { center, radius } => center.norm() + radius,
            MeasureKind::TwoCircles => TWO_CIRCLES_OFFSET + 1.0,
            MeasureKind::UniformRegion(p) => p.max_modulus(),
            MeasureKind::Atomic(atoms) => atoms.iter().map(|(a, _)| a.norm()).fold(0.0, f64::max),
            MeasureKind::Degenerate(a) => a.norm(),
        };
        Self {
            kind,
            // a zero bound is legal for δ_0 but the type promises M > 0
            support_bound: support_bound.max(f64::MIN_POSITIVE),
            zeros: OnceLock::new(),
        }
    }

    pub fn uniform_circle(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !finite(center) {
            return Err(Error::InvalidArgument(format!("bad circle radius {radius}")));
        }
        Ok(Self::from_kind(MeasureKind::UniformCircle { center, radius }))
    }

    pub fn unit_circle() -> Self {
        Self::from_kind(MeasureKind::UniformCircle {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        })
    }

    pub fn two_circles() -> Self {
        Self::from_kind(MeasureKind::TwoCircles)
    }

    pub fn uniform_disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !finite(center) {
            return Err(Error::InvalidArgument(format!("bad disk radius {radius}")));
        }
        Ok(Self::from_kind(MeasureKind::UniformDisk { center, radius }))
    }

    pub fn uniform_region(polygon: Polygon) -> Self {
        Self::from_kind(MeasureKind::UniformRegion(polygon))
    }

    /// The fixed non-convex region used for the blob figure: a smooth
    /// three-lobed curve sampled at 60 vertices, contained in `|z| < 0.9`.
    pub fn blob() -> Self {
        Self::uniform_region(Polygon::new(blob_vertices()).expect("blob polygon is simple"))
    }

    pub fn atomic(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidArgument("atomic measure needs at least one atom".into()));
        }
        if atoms.iter().any(|&(a, w)| !finite(a) || !(w > 0.0 && w <= 1.0)) {
            return Err(Error::InvalidArgument("atom weights must lie in (0, 1]".into()));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("atom weights sum to {total}, not 1")));
        }
        Ok(Self::from_kind(MeasureKind::Atomic(atoms)))
    }

    pub fn degenerate(point: Complex64) -> Result<Self> {
        if !finite(point) {
            return Err(Error::InvalidArgument("degenerate point is not finite".into()));
        }
        Ok(Self::from_kind(MeasureKind::Degenerate(point)))
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    /// Radius of an origin-centered disk containing the support.
    pub fn support_bound(&self) -> f64 {
        self.support_bound
    }

    /// The measure pushed forward by `z ↦ z + a`. The two-circle measure is
    /// fixed at ±5/2 and has no translated form.
    pub fn translated(&self, a: Complex64) -> Result<Self> {
        let kind = match &self.kind {
            MeasureKind::UniformCircle { center, radius } => MeasureKind::UniformCircle {
                center: center + a,
                radius: *radius,
            },
            MeasureKind::TwoCircles => return Err(Error::Unsupported("the two-circle measure cannot be translated".into())),
            MeasureKind::UniformDisk { center, radius } => MeasureKind::UniformDisk {
                center: center + a,
                radius: *radius,
            },
            MeasureKind::UniformRegion(p) => MeasureKind::UniformRegion(p.translated(a)),
            MeasureKind::Atomic(atoms) => MeasureKind::Atomic(atoms.iter().map(|&(x, w)| (x + a, w)).collect()),
            MeasureKind::Degenerate(x) => MeasureKind::Degenerate(x + a),
        };
        Ok(Self::from_kind(kind))
    }

    /// Draws one point from the measure.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match &self.kind {
            MeasureKind::UniformCircle { center, radius } => {
                let t = 2.0 * PI * rng.gen::<f64>();
                center + Complex64::from_polar(*radius, t)
            }
            MeasureKind::TwoCircles => {
                let side = if rng.gen::<bool>() {
                    TWO_CIRCLES_OFFSET
                } else {
                    -TWO_CIRCLES_OFFSET
                };
                let t = 2.0 * PI * rng.gen::<f64>();
                Complex64::new(side, 0.0) + Complex64::from_polar(1.0, t)
            }
            MeasureKind::UniformDisk { center, radius } => {
                let r = radius * rng.gen::<f64>().sqrt();
                let t = 2.0 * PI * rng.gen::<f64>();
                center + Complex64::from_polar(r, t)
            }
            MeasureKind::UniformRegion(p) => {
                let (lo, hi) = p.bounding_box();
                loop {
                    let z = Complex64::new(
                        lo.re + (hi.re - lo.re) * rng.gen::<f64>(),
                        lo.im + (hi.im - lo.im) * rng.gen::<f64>(),
                    );
                    if p.contains(z) {
                        return z;
                    }
                }
            }
            MeasureKind::Atomic(atoms) => {
                let u = rng.gen::<f64>();
                let mut acc = 0.0;
                for &(a, w) in atoms {
                    acc += w;
                    if u < acc {
                        return a;
                    }
                }
                atoms[atoms.len() - 1].0
            }
            MeasureKind::Degenerate(a) => *a,
        }
    }

    /// `count` iid draws; deterministic for a given generator state.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Complex64> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }

    /// Euclidean distance from `z` to the support.
    pub fn support_distance(&self, z: Complex64) -> f64 {
        match &self.kind {
            MeasureKind::UniformCircle { center, radius } => ((z - center).norm() - radius).abs(),
            MeasureKind::TwoCircles => {
                let d1 = ((z - TWO_CIRCLES_OFFSET).norm() - 1.0).abs();
                let d2 = ((z + TWO_CIRCLES_OFFSET).norm() - 1.0).abs();
                d1.min(d2)
            }
            MeasureKind::UniformDisk { center, radius } => ((z - center).norm() - radius).max(0.0),
            MeasureKind::UniformRegion(p) => p.distance(z),
            MeasureKind::Atomic(atoms) => atoms.iter().map(|(a, _)| (z - a).norm()).fold(f64::INFINITY, f64::min),
            MeasureKind::Degenerate(a) => (z - a).norm(),
        }
    }

    /// Distance from `z` to the convex hull of the support.
    pub fn hull_distance(&self, z: Complex64) -> f64 {
        match &self.kind {
            MeasureKind::UniformCircle { center, radius } | MeasureKind::UniformDisk { center, radius } => {
                ((z - center).norm() - radius).max(0.0)
            }
            MeasureKind::TwoCircles => {
                let a = Complex64::new(-TWO_CIRCLES_OFFSET, 0.0);
                let b = Complex64::new(TWO_CIRCLES_OFFSET, 0.0);
                (geometry::segment_distance(z, a, b) - 1.0).max(0.0)
            }
            MeasureKind::UniformRegion(p) => geometry::hull_distance(&geometry::convex_hull(p.vertices()), z),
            MeasureKind::Atomic(atoms) => {
                let pts: Vec<_> = atoms.iter().map(|(a, _)| *a).collect();
                geometry::hull_distance(&geometry::convex_hull(&pts), z)
            }
            MeasureKind::Degenerate(a) => (z - a).norm(),
        }
    }

    fn check_off_support(&self, z: Complex64) -> Result<()> {
        if !finite(z) || self.support_distance(z) <= SUPPORT_TOL {
            return Err(Error::Domain { z, tol: SUPPORT_TOL });
        }
        Ok(())
    }

    /// Cauchy–Stieltjes transform `m(z) = ∫ dμ(x) / (z - x)`.
    ///
    /// Closed forms for every kind except polygonal regions, which are
    /// integrated along the boundary (Green's theorem) with adaptive
    /// Gauss–Kronrod quadrature at relative tolerance 1e-8 or better.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64> {
        self.check_off_support(z)?;
        let one = Complex64::new(1.0, 0.0);
        Ok(match &self.kind {
            MeasureKind::UniformCircle { center, radius } => {
                if (z - center).norm() > *radius {
                    one / (z - center)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            MeasureKind::TwoCircles => {
                let c = Complex64::new(TWO_CIRCLES_OFFSET, 0.0);
                let mut m = Complex64::new(0.0, 0.0);
                if (z - c).norm() > 1.0 {
                    m += 0.5 / (z - c);
                }
                if (z + c).norm() > 1.0 {
                    m += 0.5 / (z + c);
                }
                m
            }
            // off the support means outside the disk, where the disk acts as a point mass
            MeasureKind::UniformDisk { center, .. } => one / (z - center),
            MeasureKind::UniformRegion(p) => region_transform(p, z, 1),
            MeasureKind::Atomic(atoms) => atoms.iter().map(|&(a, w)| w / (z - a)).sum(),
            MeasureKind::Degenerate(a) => one / (z - a),
        })
    }

    /// Complex derivative `m'(z) = -∫ dμ(x) / (z - x)^2`.
    pub fn stieltjes_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_off_support(z)?;
        let zero = Complex64::new(0.0, 0.0);
        Ok(match &self.kind {
            MeasureKind::UniformCircle { center, radius } => {
                if (z - center).norm() > *radius {
                    -(z - center).powi(-2)
                } else {
                    zero
                }
            }
            MeasureKind::TwoCircles => {
                let c = Complex64::new(TWO_CIRCLES_OFFSET, 0.0);
                let mut m = zero;
                if (z - c).norm() > 1.0 {
                    m -= 0.5 * (z - c).powi(-2);
                }
                if (z + c).norm() > 1.0 {
                    m -= 0.5 * (z + c).powi(-2);
                }
                m
            }
            MeasureKind::UniformDisk { center, .. } => -(z - center).powi(-2),
            MeasureKind::UniformRegion(p) => -region_transform(p, z, 2),
            MeasureKind::Atomic(atoms) => atoms.iter().map(|&(a, w)| -w * (z - a).powi(-2)).sum(),
            MeasureKind::Degenerate(a) => -(z - a).powi(-2),
        })
    }

    /// Zero set of the transform off the support. Closed form for the named
    /// kinds; numeric (grid + Newton) for polygonal regions.
    pub fn zero_set(&self) -> &ZeroSet {
        self.zeros.get_or_init(|| match &self.kind {
            MeasureKind::UniformCircle { center, radius } => ZeroSet::Disk {
                center: *center,
                radius: *radius,
            },
            MeasureKind::TwoCircles => ZeroSet::Points {
                points: vec![Complex64::new(0.0, 0.0)],
                approximate: false,
            },
            MeasureKind::UniformDisk { .. } | MeasureKind::Degenerate(_) => ZeroSet::Empty,
            MeasureKind::Atomic(atoms) if atoms.len() == 1 => ZeroSet::Empty,
            MeasureKind::Atomic(atoms) => {
                let (pts, ws): (Vec<_>, Vec<_>) = atoms.iter().copied().unzip();
                match polyroots::weighted_log_derivative_zeros(&pts, &ws, 1e-14) {
                    Ok(points) => ZeroSet::Points {
                        points,
                        approximate: atoms.len() > 2,
                    },
                    Err(_) => ZeroSet::Unknown,
                }
            }
            MeasureKind::UniformRegion(p) => self.search_region_zeros(p),
        })
    }

    fn search_region_zeros(&self, poly: &Polygon) -> ZeroSet {
        let hull = geometry::convex_hull(poly.vertices());
        let (lo, hi) = poly.bounding_box();
        let diam = (hi - lo).norm();
        let pitch = (hi.re - lo.re).max(hi.im - lo.im) / 80.0;
        let nx = ((hi.re - lo.re) / pitch).ceil() as usize + 1;
        let ny = ((hi.im - lo.im) / pitch).ceil() as usize + 1;
        // |m| on grid cells of hull \ support; cells hugging the support stay unset
        let mut grid: Vec<Option<f64>> = vec![None; nx * ny];
        let at = |i: usize, j: usize| Complex64::new(lo.re + i as f64 * pitch, lo.im + j as f64 * pitch);
        for i in 0..nx {
            for j in 0..ny {
                let z = at(i, j);
                if geometry::hull_distance(&hull, z) == 0.0 && poly.distance(z) > pitch / 4.0 {
                    grid[i * ny + j] = self.stieltjes(z).ok().map(|m| m.norm());
                }
            }
        }
        if grid.iter().all(Option::is_none) {
            // convex region: hull minus support is empty
            return ZeroSet::Empty;
        }
        // Newton only from strict local minima of |m| among evaluated neighbours
        let mut starts = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                let Some(v) = grid[i * ny + j] else { continue };
                let mut is_min = true;
                for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        let (a, b) = (i as i64 + di, j as i64 + dj);
                        if (di, dj) == (0, 0) || a < 0 || b < 0 || a >= nx as i64 || b >= ny as i64 {
                            continue;
                        }
                        if let Some(w) = grid[a as usize * ny + b as usize] {
                            is_min &= v < w;
                        }
                    }
                }
                if is_min {
                    starts.push((at(i, j), v));
                }
            }
        }
        let scale = 1.0 / diam;
        let mut found: Vec<Complex64> = Vec::new();
        let mut uncertified = false;
        for &(start, m0) in &starts {
            let mut z = start;
            let mut ok = false;
            for _ in 0..60 {
                let (m, dm) = match (self.stieltjes(z), self.stieltjes_derivative(z)) {
                    (Ok(m), Ok(dm)) => (m, dm),
                    _ => break,
                };
                if dm.norm() == 0.0 {
                    break;
                }
                let step = m / dm;
                z -= step;
                if !finite(z) || geometry::hull_distance(&hull, z) > diam {
                    break;
                }
                if step.norm() < 1e-13 * (1.0 + z.norm()) {
                    ok = true;
                    break;
                }
            }
            let certified = ok
                && poly.distance(z) > SUPPORT_TOL
                && geometry::hull_distance(&hull, z) <= 1e-9
                && self.stieltjes(z).map(|m| m.norm() < 1e-10 * scale).unwrap_or(false);
            if certified {
                if found.iter().all(|f| (f - z).norm() > 1e-6) {
                    found.push(z);
                }
            } else if m0 < 1e-3 * scale {
                // small transform value at a start point that did not polish
                uncertified = true;
            }
        }
        if uncertified && found.is_empty() {
            return ZeroSet::Unknown;
        }
        found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        ZeroSet::Points {
            points: found,
            approximate: true,
        }
    }

    /// Distance from `z` to the zero set (∞ when empty or unknown).
    pub fn zero_set_distance(&self, z: Complex64) -> f64 {
        self.zero_set().distance(z)
    }

    /// `dist(z, supp μ ∪ M_μ)`.
    pub fn neighborhood_distance(&self, z: Complex64) -> f64 {
        self.support_distance(z).min(self.zero_set_distance(z))
    }

    /// Membership in `N(ε)`, the open ε-neighborhood of the support and the zero set.
    pub fn in_neighborhood(&self, epsilon: f64, z: Complex64) -> bool {
        self.neighborhood_distance(z) < epsilon
    }

    /// Membership in `S(ε)`, the open ε-neighborhood of the support alone.
    pub fn in_support_neighborhood(&self, epsilon: f64, z: Complex64) -> bool {
        self.support_distance(z) < epsilon
    }

    /// Checks that the zero set lies in the convex hull of the support, on
    /// the zero points themselves or on a dense sample of a zero disk.
    pub fn zero_set_in_hull(&self) -> bool {
        const TOL: f64 = 1e-9;
        match self.zero_set() {
            ZeroSet::Empty => true,
            ZeroSet::Unknown => false,
            ZeroSet::Points { points, .. } => points.iter().all(|&p| self.hull_distance(p) <= TOL),
            ZeroSet::Disk { center, radius } => {
                let mut ok = self.hull_distance(*center) <= TOL;
                for i in 1..=40 {
                    let r = radius * (i as f64 / 40.0) * (1.0 - 1e-12);
                    for k in 0..(8 * i) {
                        let t = 2.0 * PI * k as f64 / (8 * i) as f64;
                        ok &= self.hull_distance(center + Complex64::from_polar(r, t)) <= TOL;
                    }
                }
                ok
            }
        }
    }

    /// Outlines of the support for figures (atoms have none).
    pub fn outlines(&self) -> Vec<Outline> {
        match &self.kind {
            MeasureKind::UniformCircle { center, radius } | MeasureKind::UniformDisk { center, radius } => {
                vec![Outline::Circle {
                    center: *center,
                    radius: *radius,
                }]
            }
            MeasureKind::TwoCircles => vec![
                Outline::Circle {
                    center: Complex64::new(-TWO_CIRCLES_OFFSET, 0.0),
                    radius: 1.0,
                },
                Outline::Circle {
                    center: Complex64::new(TWO_CIRCLES_OFFSET, 0.0),
                    radius: 1.0,
                },
            ],
            MeasureKind::UniformRegion(p) => vec![Outline::Polygon(p.vertices().to_vec())],
            MeasureKind::Atomic(_) | MeasureKind::Degenerate(_) => Vec::new(),
        }
    }

    /// Serializable description of this measure.
    pub fn spec(&self) -> MeasureSpec {
        match &self.kind {
            MeasureKind::UniformCircle { center, radius } => MeasureSpec::UniformCircle {
                center: *center,
                radius: *radius,
            },
            MeasureKind::TwoCircles => MeasureSpec::TwoCircles {},
            MeasureKind::UniformDisk { center, radius } => MeasureSpec::UniformDisk {
                center: *center,
                radius: *radius,
            },
            MeasureKind::UniformRegion(p) => MeasureSpec::UniformRegion {
                vertices: Some(p.vertices().to_vec()),
            },
            MeasureKind::Atomic(atoms) => MeasureSpec::Atomic {
                atoms: atoms.iter().map(|&(point, weight)| AtomSpec { point, weight }).collect(),
            },
            MeasureKind::Degenerate(point) => MeasureSpec::Degenerate { point: *point },
        }
    }
}

/// `(1/A) ∫∫_P dA(x) / (z - x)^power` for `power ∈ {1, 2}`, via
/// `∫∫_P ∂F/∂x̄ dA = (1/2i) ∮ F dx` with `F = (x̄ - z̄) / (z - x)^power`.
fn region_transform(p: &Polygon, z: Complex64, power: i32) -> Complex64 {
    let (lo, hi) = p.bounding_box();
    let diam = (hi - lo).norm();
    let dist = p.distance(z);
    let scale = p.area() / (dist + diam).powi(power);
    let perimeter: f64 = p.edges().map(|(a, b)| (b - a).norm()).sum();
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in p.edges() {
        let d = b - a;
        let tol = 1e-11 * scale * d.norm() / perimeter;
        let (v, _) = quadrature::integrate(
            |t| {
                let x = a + d * t;
                (x.conj() - z.conj()) / (z - x).powi(power) * d
            },
            0.0,
            1.0,
            tol,
        );
        total += v;
    }
    total / (Complex64::new(0.0, 2.0) * p.area())
}

fn blob_vertices() -> Vec<Complex64> {
    (0..60)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 60.0;
            let r = 0.62 + 0.14 * (3.0 * t + 0.4).cos() + 0.07 * (2.0 * t).sin();
            Complex64::from_polar(r, t) + Complex64::new(0.05, 0.05)
        })
        .collect()
}

/// One atom of an atomic measure record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub point: Complex64,
    pub weight: f64,
}

/// Tagged measure record as it appears in configuration and output files,
/// e.g. `{"kind":"uniform_circle","center":[0,0],"radius":1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    UniformCircle {
        center: Complex64,
        radius: f64,
    },
    TwoCircles {},
    UniformDisk {
        center: Complex64,
        radius: f64,
    },
    /// Polygonal region; omitting `vertices` selects the built-in blob.
    UniformRegion {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<Vec<Complex64>>,
    },
    Atomic {
        atoms: Vec<AtomSpec>,
    },
    Degenerate {
        point: Complex64,
    },
}

impl TryFrom<&MeasureSpec> for Measure {
    type Error = Error;

    fn try_from(spec: &MeasureSpec) -> Result<Self> {
        match spec {
            MeasureSpec::UniformCircle { center, radius } => Measure::uniform_circle(*center, *radius),
            MeasureSpec::TwoCircles {} => Ok(Measure::two_circles()),
            MeasureSpec::UniformDisk { center, radius } => Measure::uniform_disk(*center, *radius),
            MeasureSpec::UniformRegion { vertices: None } => Ok(Measure::blob()),
            MeasureSpec::UniformRegion { vertices: Some(v) } => Ok(Measure::uniform_region(Polygon::new(v.clone())?)),
            MeasureSpec::Atomic { atoms } => Measure::atomic(atoms.iter().map(|a| (a.point, a.weight)).collect()),
            MeasureSpec::Degenerate { point } => Measure::degenerate(*point),
        }
    }
}

/// `count` iid samples from `measure`.
pub fn sample<R: Rng + ?Sized>(measure: &Measure, count: usize, rng: &mut R) -> Vec<Complex64> {
    measure.sample(count, rng)
}

pub fn stieltjes(measure: &Measure, z: Complex64) -> Result<Complex64> {
    measure.stieltjes(z)
}

pub fn zero_set(measure: &Measure) -> &ZeroSet {
    measure.zero_set()
}

pub fn in_neighborhood(measure: &Measure, epsilon: f64, z: Complex64) -> bool {
    measure.in_neighborhood(epsilon, z)
}

pub fn mu_zero_subset_hull_check(measure: &Measure) -> bool {
    measure.zero_set_in_hull()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degenerate_samples_are_the_point() {
        let a = c(0.3, -1.2);
        let m = Measure::degenerate(a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(m.sample(3, &mut rng), vec![a, a, a]);
    }

    #[test]
    fn circle_samples_on_circle() {
        let m = Measure::unit_circle();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for z in m.sample(1000, &mut rng) {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!(z.norm() <= m.support_bound() + 1e-12);
        }
    }

    #[test]
    fn atomic_frequencies_within_three_sigma() {
        let (a, b, p) = (c(0.0, 0.0), c(1.0, 1.0), 0.3);
        let m = Measure::atomic(vec![(a, p), (b, 1.0 - p)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let hits = m.sample(n, &mut rng).into_iter().filter(|&z| z == a).count();
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((hits as f64 - n as f64 * p).abs() < 3.0 * sigma);
    }

    #[test]
    fn atomic_weights_validated() {
        assert!(Measure::atomic(vec![(c(0., 0.), 0.5), (c(1., 0.), 0.4)]).is_err());
        assert!(Measure::atomic(vec![]).is_err());
        assert!(Measure::uniform_circle(c(0., 0.), 0.0).is_err());
    }

    #[test]
    fn circle_transform_closed_form() {
        let m = Measure::unit_circle();
        assert!((m.stieltjes(c(2.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(m.stieltjes(c(0.3, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(m.stieltjes(c(1.0, 0.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn two_circles_transform() {
        let m = Measure::two_circles();
        // 4z / (4z^2 - 25) outside both circles
        let got = m.stieltjes(c(4.0, 0.0)).unwrap();
        assert!((got - c(16.0 / 39.0, 0.0)).norm() < 1e-15);
        // 3.5 lies on the right circle
        assert!(m.stieltjes(c(3.5, 0.0)).is_err());
        // inside the right circle only the left circle contributes
        let z = c(2.4, 0.1);
        assert!((m.stieltjes(z).unwrap() - 1.0 / (2.0 * z + 5.0)).norm() < 1e-15);
        let z = c(-2.6, -0.2);
        assert!((m.stieltjes(z).unwrap() - 1.0 / (2.0 * z - 5.0)).norm() < 1e-15);
    }

    #[test]
    fn atomic_transform_and_zero() {
        let (a, b, p) = (c(-1.0, 0.5), c(2.0, -0.3), 0.35);
        let m = Measure::atomic(vec![(a, p), (b, 1.0 - p)]).unwrap();
        let z = c(0.4, 1.7);
        let want = p / (z - a) + (1.0 - p) / (z - b);
        assert!((m.stieltjes(z).unwrap() - want).norm() < 1e-15);
        match m.zero_set() {
            ZeroSet::Points { points, approximate } => {
                assert_eq!(points.len(), 1);
                assert!(!approximate);
                assert!((points[0] - (p * b + (1.0 - p) * a)).norm() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn named_zero_sets() {
        assert_eq!(
            *Measure::unit_circle().zero_set(),
            ZeroSet::Disk {
                center: c(0., 0.),
                radius: 1.0
            }
        );
        assert_eq!(
            *Measure::two_circles().zero_set(),
            ZeroSet::Points {
                points: vec![c(0., 0.)],
                approximate: false
            }
        );
        assert_eq!(*Measure::degenerate(c(1., 1.)).unwrap().zero_set(), ZeroSet::Empty);
    }

    #[test]
    fn neighborhood_membership() {
        let circle = Measure::unit_circle();
        assert!(circle.in_neighborhood(0.1, c(1.05, 0.0)));
        assert!(!circle.in_neighborhood(0.1, c(1.5, 0.0)));
        assert!(circle.in_neighborhood(0.1, c(0.2, 0.0))); // inside the zero disk
        assert!(!circle.in_support_neighborhood(0.1, c(0.2, 0.0)));
        assert!(Measure::two_circles().in_neighborhood(0.2, c(0.1, 0.0)));
        assert!(!Measure::two_circles().in_neighborhood(0.2, c(0.0, 0.5)));
    }

    #[test]
    fn hull_checks() {
        assert!(Measure::unit_circle().zero_set_in_hull());
        assert!(Measure::two_circles().zero_set_in_hull());
        assert!(Measure::degenerate(c(3.0, 0.0)).unwrap().zero_set_in_hull());
        let atoms = vec![(c(0., 0.), 0.2), (c(2., 0.), 0.3), (c(1., 2.), 0.5)];
        assert!(Measure::atomic(atoms).unwrap().zero_set_in_hull());
    }

    #[test]
    fn region_transform_matches_disk_closed_form_far_away() {
        // A fine regular polygon approximates the disk; far from it the
        // transform of both is 1/(z - c) up to the area defect.
        let verts: Vec<_> = (0..400)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 400.0))
            .collect();
        let m = Measure::uniform_region(Polygon::new(verts).unwrap());
        let z = c(3.0, 1.0);
        let got = m.stieltjes(z).unwrap();
        // the regular polygon is symmetric under rotation by 2π/400, so all
        // multipole moments below order 400 vanish except the monopole
        assert!((got - 1.0 / z).norm() < 1e-10);
    }

    #[test]
    fn region_transform_against_brute_force_square() {
        // oracle: tensor Gauss-Legendre on the unit square (smooth integrand off support)
        let sq = Polygon::new(vec![c(0., 0.), c(1., 0.), c(1., 1.), c(0., 1.)]).unwrap();
        let m = Measure::uniform_region(sq);
        let z = c(1.7, 0.4);
        let n = 200;
        let mut acc = c(0.0, 0.0);
        let h = 1.0 / n as f64;
        let g = [0.5 - 0.5 / 3f64.sqrt(), 0.5 + 0.5 / 3f64.sqrt()];
        for i in 0..n {
            for j in 0..n {
                for gx in g {
                    for gy in g {
                        let x = c((i as f64 + gx) * h, (j as f64 + gy) * h);
                        acc += 1.0 / (z - x) * (h * h / 4.0);
                    }
                }
            }
        }
        let got = m.stieltjes(z).unwrap();
        assert!((got - acc).norm() < 1e-8 * acc.norm(), "{got} vs {acc}");
        // derivative by central differences
        let hstep = 1e-5;
        let fd = (m.stieltjes(z + hstep).unwrap() - m.stieltjes(z - hstep).unwrap()) / (2.0 * hstep);
        assert!((m.stieltjes_derivative(z).unwrap() - fd).norm() < 1e-6);
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"kind":"uniform_circle","center":[0,0],"radius":1}"#;
        let spec: MeasureSpec = serde_json::from_str(json).unwrap();
        let m = Measure::try_from(&spec).unwrap();
        assert_eq!(m, Measure::unit_circle());
        assert!(serde_json::from_str::<MeasureSpec>(r#"{"kind":"uniform_circle","center":[0,0],"radius":1,"x":2}"#).is_err());
    }
}
