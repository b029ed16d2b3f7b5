//! Empirical measures, the bounded-Lipschitz distance, and the concentration
//! and convergence diagnostics run by the experiments.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment;
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::nets::{self, DiskMinusNeighborhood, Net};
use crate::par::{self, Execution};
use crate::polyroots::RootedPolynomial;

/// Seed of the fixed discretization used when a continuous measure enters
/// [`bl_distance_to_measure`].
pub const DISCRETIZATION_SEED: u64 = 0x5eed_b1d1_57a9_ce00;

/// Uniform probability measure on a non-empty multiset of points.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure {
    atoms: Vec<Complex64>,
}

impl EmpiricalMeasure {
    pub fn new(atoms: Vec<Complex64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidArgument("empirical measure needs at least one atom".into()));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Complex64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.atoms.len() as f64
    }

    /// `(1/n) Σ 1/(z - x)`.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64> {
        empirical_stieltjes(&self.atoms, z)
    }
}

/// Bounded-Lipschitz distance between two empirical measures, computed as
/// the 1-Wasserstein distance for the ground cost `min(|x - y|, 1)`.
///
/// Equal atom counts reduce to an assignment problem on a precomputed cost
/// matrix; unequal counts are solved as a transport problem.
pub fn bl_distance(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> f64 {
    let (xa, xb) = (a.atoms(), b.atoms());
    let cost = |x: Complex64, y: Complex64| (x - y).norm().min(1.0);
    if xa.len() == xb.len() {
        let n = xa.len();
        let matrix: Vec<f64> = xa.iter().flat_map(|&x| xb.iter().map(move |&y| cost(x, y))).collect();
        let (_, total) = assignment::solve(n, n, |i, j| matrix[i * n + j]);
        (total / n as f64).max(0.0)
    } else {
        assignment::uniform_transport(xa.len(), xb.len(), |i, j| cost(xa[i], xb[j])).max(0.0)
    }
}

/// [`bl_distance`] against a continuous measure, discretized by as many
/// samples as `a` has atoms, drawn with [`DISCRETIZATION_SEED`].
pub fn bl_distance_to_measure(a: &EmpiricalMeasure, mu: &Measure) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(DISCRETIZATION_SEED);
    let reference = EmpiricalMeasure {
        atoms: mu.sample(a.len(), &mut rng),
    };
    bl_distance(a, &reference)
}

/// `(1/n) Σ 1/(z - x_j)`.
pub fn empirical_stieltjes(roots: &[Complex64], z: Complex64) -> Result<Complex64> {
    if roots.is_empty() {
        return Err(Error::InvalidArgument("no roots".into()));
    }
    let guard = 1e-14 * (1.0 + z.norm());
    let mut sum = Complex64::new(0.0, 0.0);
    for x in roots {
        let d = z - x;
        if d.norm() <= guard {
            return Err(Error::Pole(z));
        }
        sum += d.inv();
    }
    Ok(sum / roots.len() as f64)
}

/// Per-seed sup errors `sup_D |m_n - m_μ|` over a net of
/// `D = {|z| ≤ M} \ S(ε)`.
#[derive(Clone, Debug)]
pub struct ConcentrationSweep {
    pub n_values: Vec<usize>,
    pub seeds: Vec<u64>,
    /// `sup_errors[i][s]` belongs to `n_values[i]` and `seeds[s]`.
    pub sup_errors: Vec<Vec<f64>>,
    pub net: Net,
    pub m: f64,
    pub epsilon: f64,
}

impl ConcentrationSweep {
    pub fn medians(&self) -> Vec<f64> {
        self.sup_errors.iter().map(|v| median(v)).collect()
    }

    /// Least-squares slope of `log median` against `log n`.
    pub fn log_log_slope(&self) -> f64 {
        let xs: Vec<f64> = self.n_values.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = self.medians().iter().map(|m| m.ln()).collect();
        regression_slope(&xs, &ys)
    }

    pub fn rows(&self) -> Vec<SupErrorRow> {
        let mut out = Vec::new();
        for (i, &n) in self.n_values.iter().enumerate() {
            for (s, &seed) in self.seeds.iter().enumerate() {
                out.push(SupErrorRow {
                    n,
                    seed,
                    sup_error: self.sup_errors[i][s],
                });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupErrorRow {
    pub n: usize,
    pub seed: u64,
    pub sup_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlRow {
    pub n: usize,
    pub seed: u64,
    pub bl_distance: f64,
}

/// Independent stream for sample `(n, seed)`.
pub fn sample_rng(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

/// Sup error of `m_n` against `m_μ` over a net of pitch `net_pitch` of
/// `{|z| ≤ m} \ S(ε)`, for each `n` and seed.
pub fn concentration_sweep(
    measure: &Measure,
    m: f64,
    epsilon: f64,
    n_values: &[usize],
    seeds: &[u64],
    net_pitch: f64,
    exec: Execution,
) -> Result<ConcentrationSweep> {
    if m <= measure.support_bound() {
        return Err(Error::InvalidArgument(format!(
            "M = {m} must exceed the support bound {}",
            measure.support_bound()
        )));
    }
    let region = DiskMinusNeighborhood {
        radius: m,
        measure: measure.clone(),
        epsilon,
    };
    let net = nets::build_net(&region, m, net_pitch)?;
    if net.is_empty() {
        return Err(Error::InvalidArgument("region is empty".into()));
    }
    let reference: Vec<Complex64> = net.points.iter().map(|&z| measure.stieltjes(z)).collect::<Result<_>>()?;
    let jobs: Vec<(usize, u64)> = n_values.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let sups = par::map_indexed(exec, jobs.len(), |k| {
        let (n, seed) = jobs[k];
        let roots = measure.sample(n, &mut sample_rng(seed, n));
        let mut sup: f64 = 0.0;
        for (z, m_mu) in net.points.iter().zip(&reference) {
            // region points are ε away from the support, hence from every root
            let m_n = empirical_stieltjes(&roots, *z).unwrap_or(Complex64::new(f64::INFINITY, 0.0));
            sup = sup.max((m_n - m_mu).norm());
        }
        sup
    });
    let sup_errors = sups.chunks(seeds.len().max(1)).map(|c| c.to_vec()).collect();
    Ok(ConcentrationSweep {
        n_values: n_values.to_vec(),
        seeds: seeds.to_vec(),
        sup_errors,
        net,
        m,
        epsilon,
    })
}

/// Smooth bump `exp(-1 / (1 - |z|²/r²))` on `|z| < r`, zero outside.
pub fn bump(z: Complex64, r: f64) -> f64 {
    let t = z.norm_sqr() / (r * r);
    if t >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t)).exp()
    }
}

/// Midpoint-rule estimate of `(1/n) ∫ log|L_n| φ dλ` with `φ` = [`bump`] of
/// radius `r`. Cells whose center is within 1e-9 of a root, or where `L_n`
/// vanishes, are skipped.
pub fn log_ln_integral(poly: &RootedPolynomial, r: f64, grid_pitch: f64) -> Result<f64> {
    if !(r > 0.0 && grid_pitch > 0.0 && grid_pitch <= r / 50.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < pitch ≤ r/50, got r={r}, pitch={grid_pitch}"
        )));
    }
    let roots = poly.all_roots();
    let k = (r / grid_pitch).ceil() as i64;
    let cell = grid_pitch * grid_pitch;
    let mut total = 0.0;
    for j in -k..k {
        for i in -k..k {
            let z = Complex64::new((i as f64 + 0.5) * grid_pitch, (j as f64 + 0.5) * grid_pitch);
            let phi = bump(z, r);
            if phi == 0.0 {
                continue;
            }
            if roots.iter().any(|x| (z - x).norm() <= 1e-9) {
                continue;
            }
            let Ok(l) = poly.log_derivative(z) else { continue };
            let log = l.norm().ln();
            if log.is_finite() {
                total += log * phi * cell;
            }
        }
    }
    Ok(total / poly.n() as f64)
}

/// Median of a non-empty slice (mean of the middle pair for even length).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
