//! Polynomials in root form and their critical points.
//!
//! Critical points of `p(z) = ∏ (z - x_j)` are found as zeros of the
//! logarithmic derivative `L(z) = Σ m_i / (z - x_i)` over the distinct roots
//! `x_i` with multiplicities `m_i`, by a simultaneous Aberth–Ehrlich
//! iteration. A root of multiplicity `m` is itself a critical point of
//! multiplicity `m - 1`. Coefficients are never formed.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Sweep cap per start configuration.
pub const MAX_SWEEPS: usize = 500;

/// Default convergence tolerance on `|L(w)| · min_j |w - x_j|`.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Below this many distinct roots a sweep is not worth distributing.
const PARALLEL_MIN: usize = 256;

const TRAPEZOID_NODES: usize = 256;

/// A monic polynomial stored as its roots: iid samples plus deterministic roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootedPolynomial {
    random_roots: Vec<Complex64>,
    deterministic_roots: Vec<Complex64>,
}

impl RootedPolynomial {
    pub fn new(random_roots: Vec<Complex64>, deterministic_roots: Vec<Complex64>) -> Result<Self> {
        if random_roots.is_empty() && deterministic_roots.is_empty() {
            return Err(Error::InvalidArgument("a polynomial needs at least one root".into()));
        }
        if random_roots
            .iter()
            .chain(&deterministic_roots)
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidArgument("roots must be finite".into()));
        }
        Ok(Self {
            random_roots,
            deterministic_roots,
        })
    }

    /// All roots treated as random.
    pub fn from_roots(roots: Vec<Complex64>) -> Result<Self> {
        Self::new(roots, Vec::new())
    }

    pub fn random_roots(&self) -> &[Complex64] {
        &self.random_roots
    }

    pub fn deterministic_roots(&self) -> &[Complex64] {
        &self.deterministic_roots
    }

    /// Degree.
    pub fn n(&self) -> usize {
        self.random_roots.len() + self.deterministic_roots.len()
    }

    pub fn roots(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.random_roots.iter().chain(&self.deterministic_roots).copied()
    }

    pub fn all_roots(&self) -> Vec<Complex64> {
        self.roots().collect()
    }

    /// `p(z - a)`: every root shifted by `+a`.
    pub fn translate(&self, a: Complex64) -> Self {
        Self {
            random_roots: self.random_roots.iter().map(|x| x + a).collect(),
            deterministic_roots: self.deterministic_roots.iter().map(|x| x + a).collect(),
        }
    }

    /// The polynomial whose roots are the conjugates of these.
    pub fn conj(&self) -> Self {
        Self {
            random_roots: self.random_roots.iter().map(|x| x.conj()).collect(),
            deterministic_roots: self.deterministic_roots.iter().map(|x| x.conj()).collect(),
        }
    }

    /// `p'(z) / p(z) = Σ 1 / (z - x_j)`.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        let guard = 1e-14 * (1.0 + z.norm());
        let mut sum = Complex64::new(0.0, 0.0);
        for x in self.roots() {
            let d = z - x;
            if d.norm() <= guard {
                return Err(Error::Pole(z));
            }
            sum += d.inv();
        }
        Ok(sum)
    }

    /// `p(z)` by the product of its linear factors.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.roots().map(|x| z - x).product()
    }

    /// `p'(z) = Σ_i ∏_{j≠i} (z - x_j)`, with prefix/suffix products.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let f: Vec<Complex64> = self.roots().map(|x| z - x).collect();
        let n = f.len();
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] * f[i];
        }
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..n {
            sum += prefix * suffix[i + 1];
            prefix *= f[i];
        }
        sum
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Aberth,
    CompanionOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Complex64,
    pub multiplicity: usize,
    /// `|L(w)| · min_j |w - x_j|`; zero at repeated roots.
    pub residual: f64,
}

/// The `n - 1` critical points of a degree-`n` polynomial, with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointSet {
    pub points: Vec<CriticalPoint>,
    pub solver: Solver,
}

impl CriticalPointSet {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// Locations repeated by multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.points
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.location, p.multiplicity))
            .collect()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.residual).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }
}

/// Distinct points with positive weights.
#[derive(Clone, Debug)]
struct Weighted {
    x: Vec<Complex64>,
    m: Vec<f64>,
}

fn same_root(a: Complex64, b: Complex64) -> bool {
    a == b || (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1.0)
}

/// Groups equal points (bitwise or within 1e-12 relative), summing weights.
/// Output is sorted by real then imaginary part.
fn merge_points(points: &[Complex64], weights: &[f64]) -> Weighted {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        points[i]
            .re
            .total_cmp(&points[j].re)
            .then(points[i].im.total_cmp(&points[j].im))
    });
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..idx.len() {
        let pa = points[idx[a]];
        let reach = 1e-12 * pa.norm().max(1.0) * 2.0;
        for &jb in &idx[a + 1..] {
            if points[jb].re - pa.re > reach {
                break;
            }
            if same_root(pa, points[jb]) {
                let (ra, rb) = (find(&mut parent, idx[a]), find(&mut parent, jb));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut x = Vec::new();
    let mut m = Vec::new();
    let mut slot = vec![usize::MAX; points.len()];
    for &i in &idx {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = x.len();
            x.push(points[r]);
            m.push(0.0);
        }
        m[slot[r]] += weights[i];
    }
    Weighted { x, m }
}

struct Eval {
    l: Complex64,
    dl: Complex64,
    /// `Σ 1 / (z - x)` over distinct roots: the pole part of `R'/R - L'/L`.
    poles: Complex64,
    min_dist: f64,
}

#[inline]
fn recip(d: Complex64) -> (Complex64, f64) {
    let n2 = d.re * d.re + d.im * d.im;
    let q = 1.0 / n2;
    (Complex64::new(d.re * q, -d.im * q), n2)
}

impl Weighted {
    fn eval(&self, z: Complex64) -> Eval {
        let mut l = Complex64::new(0.0, 0.0);
        let mut dl = Complex64::new(0.0, 0.0);
        let mut poles = Complex64::new(0.0, 0.0);
        let mut min2 = f64::INFINITY;
        for (x, &m) in self.x.iter().zip(&self.m) {
            let (r, n2) = recip(z - x);
            poles += r;
            l += m * r;
            dl -= m * r * r;
            min2 = min2.min(n2);
        }
        Eval {
            l,
            dl,
            poles,
            min_dist: min2.sqrt(),
        }
    }

    /// `Σ m / |z - x|`, the rounding scale of `L(z)`.
    fn abs_sum(&self, z: Complex64) -> f64 {
        self.x.iter().zip(&self.m).map(|(x, m)| m / (z - x).norm()).sum()
    }

    fn total(&self) -> f64 {
        self.m.iter().sum()
    }

    /// Rounding floor of `|L(z)|`: summation error plus the change of `L`
    /// across one ulp of `z`.
    fn noise(&self, e: &Eval, z: Complex64) -> f64 {
        4.0 * f64::EPSILON * ((self.x.len() as f64).sqrt() * self.abs_sum(z) + e.dl.norm() * z.norm())
    }

    fn centroid(&self) -> Complex64 {
        let t = self.total();
        self.x.iter().zip(&self.m).map(|(x, m)| x * *m).sum::<Complex64>() / t
    }

    fn diameter(&self) -> f64 {
        let c = self.centroid();
        2.0 * self.x.iter().map(|x| (x - c).norm()).fold(0.0, f64::max)
    }
}

/// Result of a zero search on a weighted log-derivative.
struct Zeros {
    /// (location, multiplicity, residual)
    points: Vec<(Complex64, usize, f64)>,
}

/// Weighted two-point zeros between angularly consecutive points, one pair
/// dropped, nudged off the segment in a fixed rotating direction.
fn midpoint_starts(w: &Weighted) -> Vec<Complex64> {
    let d = w.x.len();
    let c = w.centroid();
    let angle = |i: usize| {
        let v = w.x[i] - c;
        (v.im.atan2(v.re), v.norm())
    };
    let first = (0..d)
        .min_by(|&i, &j| {
            let (ai, ri) = angle(i);
            let (aj, rj) = angle(j);
            ai.total_cmp(&aj).then(ri.total_cmp(&rj))
        })
        .unwrap();
    // greedy nearest-neighbour chain: consecutive roots are close together
    let mut order = Vec::with_capacity(d);
    let mut left: Vec<usize> = (0..d).filter(|&i| i != first).collect();
    order.push(first);
    while !left.is_empty() {
        let here = w.x[*order.last().unwrap()];
        let (pos, _) = left
            .iter()
            .enumerate()
            .map(|(p, &i)| (p, (w.x[i] - here).norm_sqr()))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .unwrap();
        order.push(left.swap_remove(pos));
    }
    let nudge = 1e-3 * w.diameter().max(f64::MIN_POSITIVE);
    const GOLDEN: f64 = 2.399_963_229_728_653;
    (0..d - 1)
        .map(|k| {
            let (i, j) = (order[k], order[k + 1]);
            let (mi, mj) = (w.m[i], w.m[j]);
            let mid = (w.x[i] * mj + w.x[j] * mi) / (mi + mj);
            mid + Complex64::from_polar(nudge, GOLDEN * k as f64)
        })
        .collect()
}

fn circle_starts(w: &Weighted) -> Vec<Complex64> {
    let d = w.x.len();
    let c = w.centroid();
    let r = 1.1 * w.x.iter().map(|x| (x - c).norm()).fold(0.0, f64::max);
    (0..d - 1)
        .map(|k| c + Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.25) / (d - 1) as f64 + 0.1))
        .collect()
}

enum Outcome {
    Converged(Vec<Complex64>, Vec<f64>),
    Stalled(Vec<Complex64>, Vec<f64>, Vec<bool>),
}

fn residual(e: &Eval) -> f64 {
    e.l.norm() * e.min_dist
}

fn aberth(w: &Weighted, mut z: Vec<Complex64>, tol: f64, exec: Execution) -> Outcome {
    let k = z.len();
    let exec = if w.x.len() >= PARALLEL_MIN {
        exec
    } else {
        Execution::Sequential
    };
    let mut done = vec![false; k];
    let mut res = vec![f64::INFINITY; k];
    let scale = w.diameter().max(1.0);
    for _ in 0..MAX_SWEEPS {
        let snapshot = z.clone();
        let updates: Vec<Option<(Complex64, f64, bool)>> = par::map_indexed(exec, k, |i| {
            if done[i] {
                return None;
            }
            let zi = snapshot[i];
            let e = w.eval(zi);
            let r = residual(&e);
            // the noise floor costs a pass, so test it only near convergence
            if r < tol || (r < 1e-6 && e.l.norm() <= w.noise(&e, zi)) {
                return Some((zi, r, true));
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in snapshot.iter().enumerate() {
                if j != i {
                    s += recip(zi - zj).0;
                }
            }
            // Aberth step for the numerator R = L·∏(z - x): R'/R = L'/L + Σ 1/(z - x)
            let denom = e.dl / e.l + e.poles - s;
            let mut next = zi - denom.inv();
            if !(next.re.is_finite() && next.im.is_finite()) {
                next = zi + Complex64::from_polar(1e-6 * scale, i as f64);
            }
            // a sub-ulp correction cannot improve the iterate
            let stalled = (next - zi).norm() <= 2.0 * f64::EPSILON * zi.norm();
            Some((if stalled { zi } else { next }, r, stalled))
        });
        let mut all = true;
        for (i, u) in updates.into_iter().enumerate() {
            if let Some((zi, r, conv)) = u {
                z[i] = zi;
                res[i] = r;
                done[i] = conv;
            }
            all &= done[i];
        }
        if all {
            return Outcome::Converged(z, res);
        }
    }
    Outcome::Stalled(z, res, done)
}

/// Running `Σ ln f` over positive factors with one logarithm per block.
struct LogProduct {
    acc: f64,
    prod: f64,
}

impl LogProduct {
    fn new() -> Self {
        Self { acc: 0.0, prod: 1.0 }
    }

    #[inline]
    fn push(&mut self, f: f64) {
        if !(1e-100..=1e100).contains(&f) {
            self.acc += f.ln();
            return;
        }
        self.prod *= f;
        if !(1e-150..=1e150).contains(&self.prod) {
            self.acc += self.prod.ln();
            self.prod = 1.0;
        }
    }

    fn ln(&self) -> f64 {
        self.acc + self.prod.ln()
    }
}

/// Inclusion radius `k · |W_i|` of each of the `k` iterates, where `W_i` is
/// the Weierstrass correction of the numerator `Σ m_i ∏_{j≠i}(z - x_j)`.
/// Discs are widened by the rounding floor of `L`.
fn inclusion_radii(w: &Weighted, z: &[Complex64]) -> Vec<f64> {
    let k = z.len();
    let log_lead = w.total().ln();
    (0..k)
        .map(|i| {
            let e = w.eval(z[i]);
            // squared moduli; halved at the end
            let mut lp = LogProduct::new();
            for x in &w.x {
                lp.push((z[i] - x).norm_sqr());
            }
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    lp.push(1.0 / (z[i] - zj).norm_sqr());
                }
            }
            let log_w = (e.l.norm() + w.noise(&e, z[i])).ln() - log_lead + 0.5 * lp.ln();
            k as f64 * log_w.exp()
        })
        .collect()
}

/// Mean of the zeros of `L` inside the circle, if the argument principle
/// confirms exactly `count` of them and no poles.
fn contour_mean(w: &Weighted, center: Complex64, radius: f64, count: usize) -> Option<Complex64> {
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    for k in 0..TRAPEZOID_NODES {
        let u = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / TRAPEZOID_NODES as f64);
        let z = center + radius * u;
        let e = w.eval(z);
        let g = e.dl / e.l * u;
        s0 += g;
        s1 += g * (z - center);
    }
    // dz = i r u dθ, so (1/2πi) ∮ g dz = (r / N) Σ g(z_k) u_k
    let norm = radius / TRAPEZOID_NODES as f64;
    let n0 = s0 * norm;
    if !(n0.re.is_finite() && n0.im.is_finite()) || (n0 - count as f64).norm() >= 0.01 {
        return None;
    }
    Some(center + s1 * norm / count as f64)
}

/// Merges iterates whose inclusion discs overlap into one point of
/// multiplicity equal to the component size, located at the mean of the
/// enclosed zeros. Components that cannot be certified stay split.
fn cluster(w: &Weighted, z: Vec<Complex64>, res: Vec<f64>) -> Zeros {
    let k = z.len();
    let rho = inclusion_radii(w, &z);
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| (z[a].re - rho[a]).total_cmp(&(z[b].re - rho[b])));
    for (pos, &a) in idx.iter().enumerate() {
        for &b in &idx[pos + 1..] {
            if z[b].re - rho[b] > z[a].re + rho[a] {
                break;
            }
            if (z[a] - z[b]).norm() <= rho[a] + rho[b] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..k {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    let mut points = Vec::with_capacity(k);
    for (root, members) in groups.into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        if members.len() == 1 {
            points.push((z[root], 1, res[root]));
            continue;
        }
        let c = members.len();
        let center = members.iter().map(|&i| z[i]).sum::<Complex64>() / c as f64;
        let r_in = members.iter().map(|&i| (z[i] - center).norm()).fold(0.0, f64::max);
        let r_out = (0..k)
            .filter(|i| !members.contains(i))
            .map(|i| (z[i] - center).norm())
            .chain(w.x.iter().map(|x| (x - center).norm()))
            .fold(f64::INFINITY, f64::min);
        let merged = if r_in > 0.0 && r_out > 1.2 * r_in {
            contour_mean(w, center, (r_in * r_out).sqrt(), c)
        } else if r_in == 0.0 {
            Some(center)
        } else {
            None
        };
        match merged {
            Some(loc) => {
                let r = members.iter().map(|&i| res[i]).fold(0.0, f64::max);
                points.push((loc, c, r));
            }
            None => points.extend(members.iter().map(|&i| (z[i], 1, res[i]))),
        }
    }
    Zeros { points }
}

fn solve(w: &Weighted, tol: f64, exec: Execution) -> Result<Zeros> {
    let d = w.x.len();
    if d < 2 {
        return Ok(Zeros { points: Vec::new() });
    }
    if d == 2 {
        let (m0, m1) = (w.m[0], w.m[1]);
        let loc = (w.x[0] * m1 + w.x[1] * m0) / (m0 + m1);
        let r = residual(&w.eval(loc));
        return Ok(Zeros {
            points: vec![(loc, 1, r)],
        });
    }
    match aberth(w, midpoint_starts(w), tol, exec) {
        Outcome::Converged(z, r) => return Ok(cluster(w, z, r)),
        Outcome::Stalled(..) => {}
    }
    match aberth(w, circle_starts(w), tol, exec) {
        Outcome::Converged(z, r) => Ok(cluster(w, z, r)),
        Outcome::Stalled(z, r, done) => {
            let (unconverged, residuals) = z
                .iter()
                .zip(&r)
                .zip(&done)
                .filter(|(_, &d)| !d)
                .map(|((z, r), _)| (*z, *r))
                .unzip();
            Err(Error::Convergence {
                sweeps: MAX_SWEEPS,
                unconverged,
                residuals,
            })
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-14..=1e-6).contains(&tol) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} outside [1e-14, 1e-6]")));
    }
    Ok(())
}

/// All `n - 1` critical points of `poly` with multiplicity.
pub fn critical_points(poly: &RootedPolynomial, tol: f64) -> Result<CriticalPointSet> {
    critical_points_with(poly, tol, Execution::available())
}

/// [`critical_points`] with an explicit execution policy for the sweeps.
pub fn critical_points_with(poly: &RootedPolynomial, tol: f64, exec: Execution) -> Result<CriticalPointSet> {
    check_tol(tol)?;
    let roots = poly.all_roots();
    let w = merge_points(&roots, &vec![1.0; roots.len()]);
    let mut points: Vec<CriticalPoint> =
        w.x.iter()
            .zip(&w.m)
            .filter(|(_, &m)| m >= 2.0)
            .map(|(&x, &m)| CriticalPoint {
                location: x,
                multiplicity: m as usize - 1,
                residual: 0.0,
            })
            .collect();
    let zeros = solve(&w, tol, exec)?;
    points.extend(
        zeros
            .points
            .into_iter()
            .map(|(location, multiplicity, residual)| CriticalPoint {
                location,
                multiplicity,
                residual,
            }),
    );
    points.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(CriticalPointSet {
        points,
        solver: Solver::Aberth,
    })
}

/// Zeros of `Σ w_i / (z - x_i)` for distinct points `x_i` and positive
/// weights, repeated by multiplicity. Equal points are merged first.
pub fn weighted_log_derivative_zeros(points: &[Complex64], weights: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    check_tol(tol)?;
    if points.len() != weights.len() || weights.iter().any(|&m| m.is_nan() || m <= 0.0) {
        return Err(Error::InvalidArgument("weights must be positive, one per point".into()));
    }
    let w = merge_points(points, weights);
    let zeros = solve(&w, tol, Execution::Sequential)?;
    Ok(zeros
        .points
        .into_iter()
        .flat_map(|(z, m, _)| std::iter::repeat_n(z, m))
        .collect())
}

/// Roots translated by `a`.
pub fn translate(poly: &RootedPolynomial, a: Complex64) -> RootedPolynomial {
    poly.translate(a)
}

pub fn log_derivative(poly: &RootedPolynomial, z: Complex64) -> Result<Complex64> {
    poly.log_derivative(z)
}
