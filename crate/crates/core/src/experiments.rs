//! Seeded Monte Carlo campaigns: outlier absence, root/critical-point
//! pairing, the interior critical point of the two-circle measure, weak
//! convergence of the critical-point measure, and the concentration sweep.
//!
//! Every trial owns the ChaCha stream `(n << 32) | trial` under the
//! campaign's base seed, and results are collected in `(n, trial)` order, so
//! outputs do not depend on the number of worker threads.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment;
use crate::error::{Error, Result};
use crate::measure::{Measure, MeasureKind, ZeroSet};
use crate::par::{self, Execution};
use crate::polyroots::{self, CriticalPointSet, RootedPolynomial, DEFAULT_TOL};
use crate::stats::{self, ConcentrationSweep, EmpiricalMeasure};

/// Pairing radius `4/n` around each outside deterministic root.
pub fn pairing_radius(n: usize) -> f64 {
    4.0 / n as f64
}

/// Floor for the sharpness variant of the convergence experiment.
pub const SHARPNESS_FLOOR: f64 = 0.05;

/// Solver failure rate above which a campaign counts as numerically failed.
pub const MAX_SOLVER_FAILURE_RATE: f64 = 0.05;

/// Above this degree, distance computations hold an `n × n` cost matrix, so
/// trials run one at a time.
const LARGE_TRANSPORT_N: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    NoOutliers,
    Pairing,
    TwoCirclesInterior,
    Convergence,
    Sharpness,
    Concentration,
}

impl ExperimentKind {
    pub fn default_epsilon(self) -> f64 {
        match self {
            ExperimentKind::TwoCirclesInterior => 0.2,
            _ => 0.15,
        }
    }

    pub fn default_threshold(self) -> f64 {
        match self {
            ExperimentKind::Pairing | ExperimentKind::Sharpness => 0.95,
            _ => 0.99,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::NoOutliers => "no_outliers",
            ExperimentKind::Pairing => "pairing",
            ExperimentKind::TwoCirclesInterior => "two_circles_interior",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Sharpness => "sharpness",
            ExperimentKind::Concentration => "concentration",
        }
    }
}

/// Number `k_n` of deterministic roots at degree `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum KRule {
    Constant {
        k: usize,
    },
    /// `⌊n^alpha⌋`.
    Power {
        alpha: f64,
    },
    /// `⌈c n⌉`.
    Fraction {
        c: f64,
    },
}

impl Default for KRule {
    fn default() -> Self {
        KRule::Constant { k: 0 }
    }
}

impl KRule {
    pub fn k(&self, n: usize) -> usize {
        match *self {
            KRule::Constant { k } => k,
            // the nudge keeps exact powers such as √10000 from rounding down
            KRule::Power { alpha } => ((n as f64).powf(alpha) + 1e-9).floor() as usize,
            KRule::Fraction { c } => ((c * n as f64) - 1e-9).ceil().max(0.0) as usize,
        }
    }

    /// Whether `k_n = o(n)`.
    pub fn is_sublinear(&self) -> bool {
        match *self {
            KRule::Constant { .. } => true,
            KRule::Power { alpha } => alpha < 1.0,
            KRule::Fraction { .. } => false,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            KRule::Power { alpha } if !(0.0..=1.0).contains(&alpha) => {
                Err(Error::Config(format!("k rule exponent {alpha} outside [0, 1]")))
            }
            KRule::Fraction { c } if !(0.0..=1.0).contains(&c) => {
                Err(Error::Config(format!("k rule fraction {c} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

/// Positions of the deterministic roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum XiRule {
    /// The same list at every `n`; `k_n` is its length.
    Fixed { points: Vec<Complex64> },
    /// `k_n` copies of one point.
    Repeat { point: Complex64 },
    /// One root at `n^exponent` in the given direction.
    Growing { exponent: f64, direction: Complex64 },
}

impl Default for XiRule {
    fn default() -> Self {
        XiRule::Fixed { points: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Success,
    /// The trial contradicts the expected behavior.
    Falsified,
    /// The critical-point solver did not converge; excluded from rates.
    SolverFailure,
}

/// A seeded multi-trial experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub kind: ExperimentKind,
    pub measure: Measure,
    pub n_values: Vec<usize>,
    pub k_rule: KRule,
    pub xi: XiRule,
    pub epsilon: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub tol: f64,
    pub success_threshold: f64,
    /// Radius of the region of the concentration sweep.
    pub m: Option<f64>,
    /// Net spacing of the concentration sweep.
    pub net_pitch: Option<f64>,
}

impl Campaign {
    /// Campaign with the kind's default ε and threshold, 100 trials at `n = 200`.
    pub fn new(kind: ExperimentKind, measure: Measure) -> Self {
        Self {
            kind,
            measure,
            n_values: vec![200],
            k_rule: KRule::default(),
            xi: XiRule::default(),
            epsilon: kind.default_epsilon(),
            trials: 100,
            base_seed: 0,
            tol: DEFAULT_TOL,
            success_threshold: kind.default_threshold(),
            m: None,
            net_pitch: None,
        }
    }

    pub fn k(&self, n: usize) -> usize {
        match &self.xi {
            XiRule::Fixed { points } => points.len(),
            XiRule::Repeat { .. } => self.k_rule.k(n),
            XiRule::Growing { .. } => 1,
        }
    }

    /// Deterministic roots at degree `n`.
    pub fn xi_points(&self, n: usize) -> Vec<Complex64> {
        match &self.xi {
            XiRule::Fixed { points } => points.clone(),
            XiRule::Repeat { point } => vec![*point; self.k_rule.k(n)],
            XiRule::Growing { exponent, direction } => {
                vec![direction / direction.norm() * (n as f64).powf(*exponent)]
            }
        }
    }

    /// Radius within which an outer root must have its partner: `4/n`,
    /// scaled by `|ξ|` under the growing rule, where only the relative error
    /// is `O(1/n)`.
    pub fn pairing_radius(&self, n: usize) -> f64 {
        match &self.xi {
            XiRule::Growing { exponent, .. } => pairing_radius(n) * (n as f64).powf(*exponent).max(1.0),
            _ => pairing_radius(n),
        }
    }

    /// Checks the campaign before any computation.
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return cfg("trials must be at least 1".into());
        }
        if self.n_values.is_empty() {
            return cfg("n_values is empty".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return cfg(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(1e-14..=1e-6).contains(&self.tol) {
            return cfg(format!("tol {} outside [1e-14, 1e-6]", self.tol));
        }
        if !(0.0..=1.0).contains(&self.success_threshold) {
            return cfg(format!("success threshold {} outside [0, 1]", self.success_threshold));
        }
        self.k_rule.validate()?;
        match &self.xi {
            XiRule::Fixed { points }
                if self.k_rule != KRule::default() && self.k_rule != (KRule::Constant { k: points.len() }) =>
            {
                return cfg("a fixed xi list sets k_n itself; drop k_rule or make it match".into());
            }
            XiRule::Growing { direction, .. } if direction.norm() == 0.0 => {
                return cfg("growing xi needs a nonzero direction".into());
            }
            _ => {}
        }
        for &n in &self.n_values {
            let k = self.k(n);
            if n < 2 || k > n {
                return cfg(format!("degree {n} with {k} deterministic roots"));
            }
        }
        let has_xi = self.n_values.iter().any(|&n| self.k(n) > 0);
        match self.kind {
            ExperimentKind::NoOutliers | ExperimentKind::TwoCirclesInterior | ExperimentKind::Concentration if has_xi => {
                return cfg(format!("{} takes no deterministic roots", self.kind.name()));
            }
            ExperimentKind::TwoCirclesInterior if !matches!(self.measure.kind(), MeasureKind::TwoCircles) => {
                return cfg("two_circles_interior needs the two_circles measure".into());
            }
            ExperimentKind::Convergence if !self.k_rule.is_sublinear() => {
                return cfg("convergence needs k_n = o(n); the fraction rule is reserved for sharpness".into());
            }
            ExperimentKind::Pairing => self.check_gap()?,
            ExperimentKind::Concentration => {
                let m = self.m.ok_or_else(|| Error::Config("concentration needs m".into()))?;
                if m <= self.measure.support_bound() {
                    return cfg(format!(
                        "m = {m} must exceed the support bound {}",
                        self.measure.support_bound()
                    ));
                }
                if !self.net_pitch.is_some_and(|p| p > 0.0) {
                    return cfg("concentration needs a positive net_pitch".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// No deterministic root may lie in `N(3ε) \ N(ε)`.
    fn check_gap(&self) -> Result<()> {
        if matches!(self.measure.zero_set(), ZeroSet::Unknown) {
            return Err(Error::Config(
                "the zero set of this measure could not be certified, so the gap hypothesis cannot be checked".into(),
            ));
        }
        for &n in &self.n_values {
            for xi in self.xi_points(n) {
                let d = self.measure.neighborhood_distance(xi);
                if d >= self.epsilon && d < 3.0 * self.epsilon {
                    return Err(Error::Config(format!(
                        "gap hypothesis violated: xi = {xi} lies at distance {d:.6} from the support and zero set, \
                         inside N(3ε) \\ N(ε) for ε = {}",
                        self.epsilon
                    )));
                }
            }
        }
        Ok(())
    }

    /// Translates the measure and every deterministic root by `a`.
    pub fn translated(&self, a: Complex64) -> Result<Self> {
        let xi = match &self.xi {
            XiRule::Fixed { points } => XiRule::Fixed {
                points: points.iter().map(|p| p + a).collect(),
            },
            XiRule::Repeat { point } => XiRule::Repeat { point: point + a },
            XiRule::Growing { .. } => return Err(Error::Unsupported("translating a growing xi rule".into())),
        };
        Ok(Self {
            measure: self.measure.translated(a)?,
            xi,
            ..self.clone()
        })
    }

    fn jobs(&self) -> Vec<(usize, usize)> {
        self.n_values
            .iter()
            .flat_map(|&n| (0..self.trials).map(move |t| (n, t)))
            .collect()
    }
}

/// Stream id of trial `trial` at degree `n`.
pub fn trial_stream(n: usize, trial: usize) -> u64 {
    ((n as u64) << 32) | trial as u64
}

pub fn trial_rng(base_seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(trial_stream(n, trial));
    rng
}

/// The polynomial of one trial: `n - k_n` samples followed by the
/// deterministic roots.
pub fn trial_polynomial(c: &Campaign, n: usize, trial: usize) -> Result<RootedPolynomial> {
    let xi = c.xi_points(n);
    let mut rng = trial_rng(c.base_seed, n, trial);
    let random = c.measure.sample(n - xi.len(), &mut rng);
    RootedPolynomial::new(random, xi)
}

/// Polynomial and critical points of one trial.
pub fn trial_points(c: &Campaign, n: usize, trial: usize, exec: Execution) -> Result<(RootedPolynomial, CriticalPointSet)> {
    let poly = trial_polynomial(c, n, trial)?;
    let cps = polyroots::critical_points_with(&poly, c.tol, exec)?;
    Ok((poly, cps))
}

fn solve_or_fail(c: &Campaign, n: usize, trial: usize, exec: Execution) -> Result<Option<(RootedPolynomial, CriticalPointSet)>> {
    match trial_points(c, n, trial, exec) {
        Ok(v) => Ok(Some(v)),
        Err(Error::Convergence { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_jobs<T: Send>(c: &Campaign, exec: Execution, f: impl Fn(usize, usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let jobs = c.jobs();
    let large = matches!(c.kind, ExperimentKind::Convergence | ExperimentKind::Sharpness)
        && c.n_values.iter().any(|&n| n >= LARGE_TRANSPORT_N);
    let outer = if large { Execution::Sequential } else { exec };
    par::map_indexed(outer, jobs.len(), |i| f(jobs[i].0, jobs[i].1))
        .into_iter()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoOutliersRow {
    pub n: usize,
    pub trial: usize,
    pub status: TrialStatus,
    pub outside_count: Option<usize>,
}

/// Counts critical points outside `N(ε)` per trial.
pub fn run_no_outliers(c: &Campaign, exec: Execution) -> Result<Vec<NoOutliersRow>> {
    expect_kind(c, &[ExperimentKind::NoOutliers])?;
    c.validate()?;
    run_jobs(c, exec, |n, trial| {
        let Some((_, cps)) = solve_or_fail(c, n, trial, exec)? else {
            return Ok(NoOutliersRow {
                n,
                trial,
                status: TrialStatus::SolverFailure,
                outside_count: None,
            });
        };
        let count = cps
            .points
            .iter()
            .filter(|p| !c.measure.in_neighborhood(c.epsilon, p.location))
            .map(|p| p.multiplicity)
            .sum::<usize>();
        Ok(NoOutliersRow {
            n,
            trial,
            status: if count == 0 {
                TrialStatus::Success
            } else {
                TrialStatus::Falsified
            },
            outside_count: Some(count),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Match {
    pub xi_index: usize,
    pub outlier_index: usize,
    pub distance: f64,
}

/// Outliers of one trial and their optimal matching to the deterministic
/// roots outside `N(3ε)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub n: usize,
    pub trial: usize,
    pub trial_seed: u64,
    pub status: TrialStatus,
    pub xi: Vec<Complex64>,
    /// Indices into `xi` of the roots outside `N(3ε)`.
    pub outside_xi: Vec<usize>,
    pub epsilon: f64,
    /// Critical points outside `N(2ε)`, repeated by multiplicity.
    pub outliers: Vec<Complex64>,
    pub matching: Vec<Match>,
    pub unmatched_xi: usize,
    pub unmatched_outliers: usize,
    pub radius: f64,
}

impl PairingReport {
    pub fn s(&self) -> usize {
        self.outside_xi.len()
    }

    /// Exactly `s` outliers.
    pub fn count_ok(&self) -> bool {
        self.status != TrialStatus::SolverFailure && self.outliers.len() == self.s()
    }

    /// Every outside root has its partner within the pairing radius.
    pub fn radius_ok(&self) -> bool {
        self.count_ok() && self.matching.iter().all(|m| m.distance <= self.radius)
    }

    pub fn max_distance(&self) -> Option<f64> {
        self.matching.iter().map(|m| m.distance).reduce(f64::max)
    }
}

/// Minimum-distance one-to-one partial assignment between `xi` and `outliers`.
pub fn match_outliers(xi: &[Complex64], outliers: &[Complex64]) -> Vec<Match> {
    if xi.is_empty() || outliers.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<Match> = if xi.len() <= outliers.len() {
        let (cols, _) = assignment::solve(xi.len(), outliers.len(), |i, j| (xi[i] - outliers[j]).norm());
        cols.into_iter()
            .enumerate()
            .map(|(i, j)| Match {
                xi_index: i,
                outlier_index: j,
                distance: (xi[i] - outliers[j]).norm(),
            })
            .collect()
    } else {
        let (cols, _) = assignment::solve(outliers.len(), xi.len(), |i, j| (outliers[i] - xi[j]).norm());
        cols.into_iter()
            .enumerate()
            .map(|(j, i)| Match {
                xi_index: i,
                outlier_index: j,
                distance: (xi[i] - outliers[j]).norm(),
            })
            .collect()
    };
    out.sort_by_key(|m| m.xi_index);
    out
}

/// Classifies critical points against `N(2ε)` and pairs the outliers with
/// the deterministic roots outside `N(3ε)`.
pub fn pairing_report(c: &Campaign, n: usize, trial: usize, solved: Option<&CriticalPointSet>) -> PairingReport {
    let xi = c.xi_points(n);
    let outside_xi: Vec<usize> = (0..xi.len())
        .filter(|&l| !c.measure.in_neighborhood(3.0 * c.epsilon, xi[l]))
        .collect();
    let mut report = PairingReport {
        n,
        trial,
        trial_seed: trial_stream(n, trial),
        status: TrialStatus::SolverFailure,
        xi: xi.clone(),
        outside_xi: outside_xi.clone(),
        epsilon: c.epsilon,
        outliers: Vec::new(),
        matching: Vec::new(),
        unmatched_xi: outside_xi.len(),
        unmatched_outliers: 0,
        radius: c.pairing_radius(n),
    };
    let Some(cps) = solved else { return report };
    report.outliers = cps
        .points
        .iter()
        .filter(|p| !c.measure.in_neighborhood(2.0 * c.epsilon, p.location))
        .flat_map(|p| std::iter::repeat_n(p.location, p.multiplicity))
        .collect();
    let targets: Vec<Complex64> = outside_xi.iter().map(|&l| xi[l]).collect();
    report.matching = match_outliers(&targets, &report.outliers)
        .into_iter()
        .map(|m| Match {
            xi_index: outside_xi[m.xi_index],
            ..m
        })
        .collect();
    report.unmatched_xi = targets.len() - report.matching.len();
    report.unmatched_outliers = report.outliers.len() - report.matching.len();
    // radius_ok reads the status, so mark the trial solved first
    report.status = TrialStatus::Success;
    report.status = if report.radius_ok() {
        TrialStatus::Success
    } else {
        TrialStatus::Falsified
    };
    report
}

/// One pairing report per trial.
pub fn run_pairing(c: &Campaign, exec: Execution) -> Result<Vec<PairingReport>> {
    expect_kind(c, &[ExperimentKind::Pairing])?;
    c.validate()?;
    run_jobs(c, exec, |n, trial| {
        let solved = solve_or_fail(c, n, trial, exec)?;
        Ok(pairing_report(c, n, trial, solved.as_ref().map(|(_, cps)| cps)))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingRow {
    pub n: usize,
    pub trial: usize,
    pub status: TrialStatus,
    pub s: usize,
    pub outlier_count: Option<usize>,
    pub max_distance: Option<f64>,
    pub within_radius: bool,
}

impl From<&PairingReport> for PairingRow {
    fn from(r: &PairingReport) -> Self {
        let solved = r.status != TrialStatus::SolverFailure;
        Self {
            n: r.n,
            trial: r.trial,
            status: r.status,
            s: r.s(),
            outlier_count: solved.then_some(r.outliers.len()),
            max_distance: r.max_distance(),
            within_radius: r.radius_ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorRow {
    pub n: usize,
    pub trial: usize,
    pub status: TrialStatus,
    /// Critical points in `|z| < 1 + ε`, with multiplicity.
    pub interior_count: Option<usize>,
    /// The interior critical point nearest the origin.
    pub w_re: Option<f64>,
    pub w_im: Option<f64>,
    pub modulus: Option<f64>,
}

/// Counts the critical points in `|z| < 1 + ε` per trial.
pub fn run_two_circles_interior(c: &Campaign, exec: Execution) -> Result<Vec<InteriorRow>> {
    expect_kind(c, &[ExperimentKind::TwoCirclesInterior])?;
    c.validate()?;
    run_jobs(c, exec, |n, trial| {
        let Some((_, cps)) = solve_or_fail(c, n, trial, exec)? else {
            return Ok(InteriorRow {
                n,
                trial,
                status: TrialStatus::SolverFailure,
                interior_count: None,
                w_re: None,
                w_im: None,
                modulus: None,
            });
        };
        let inside: Vec<_> = cps.points.iter().filter(|p| p.location.norm() < 1.0 + c.epsilon).collect();
        let count = inside.iter().map(|p| p.multiplicity).sum::<usize>();
        let w = inside.iter().map(|p| p.location).min_by(|a, b| a.norm().total_cmp(&b.norm()));
        Ok(InteriorRow {
            n,
            trial,
            status: if count == 1 {
                TrialStatus::Success
            } else {
                TrialStatus::Falsified
            },
            interior_count: Some(count),
            w_re: w.map(|w| w.re),
            w_im: w.map(|w| w.im),
            modulus: w.map(|w| w.norm()),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub trial: usize,
    pub status: TrialStatus,
    pub bl_distance: Option<f64>,
}

/// Bounded-Lipschitz distance between the critical-point measure and `μ`
/// per trial. Under the sharpness kind a trial succeeds when the distance
/// stays above [`SHARPNESS_FLOOR`].
pub fn run_convergence(c: &Campaign, exec: Execution) -> Result<Vec<ConvergenceRow>> {
    expect_kind(c, &[ExperimentKind::Convergence, ExperimentKind::Sharpness])?;
    c.validate()?;
    run_jobs(c, exec, |n, trial| {
        let Some((_, cps)) = solve_or_fail(c, n, trial, exec)? else {
            return Ok(ConvergenceRow {
                n,
                trial,
                status: TrialStatus::SolverFailure,
                bl_distance: None,
            });
        };
        let emp = EmpiricalMeasure::new(cps.expanded())?;
        let d = stats::bl_distance_to_measure(&emp, &c.measure);
        let ok = c.kind == ExperimentKind::Convergence || d > SHARPNESS_FLOOR;
        Ok(ConvergenceRow {
            n,
            trial,
            status: if ok { TrialStatus::Success } else { TrialStatus::Falsified },
            bl_distance: Some(d),
        })
    })
}

/// Seeds `base_seed, base_seed + 1, …` for the concentration sweep.
pub fn run_concentration(c: &Campaign, exec: Execution) -> Result<ConcentrationSweep> {
    expect_kind(c, &[ExperimentKind::Concentration])?;
    c.validate()?;
    let seeds: Vec<u64> = (0..c.trials as u64).map(|t| c.base_seed.wrapping_add(t)).collect();
    stats::concentration_sweep(
        &c.measure,
        c.m.expect("validated"),
        c.epsilon,
        &c.n_values,
        &seeds,
        c.net_pitch.expect("validated"),
        exec,
    )
}

fn expect_kind(c: &Campaign, kinds: &[ExperimentKind]) -> Result<()> {
    if kinds.contains(&c.kind) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "campaign kind {} does not fit this runner",
            c.kind.name()
        )))
    }
}

/// Rows of one run, by experiment kind.
#[derive(Clone, Debug, PartialEq)]
pub enum ResultTable {
    NoOutliers(Vec<NoOutliersRow>),
    Pairing(Vec<PairingReport>),
    TwoCirclesInterior(Vec<InteriorRow>),
    Convergence(Vec<ConvergenceRow>),
    Concentration(Vec<stats::SupErrorRow>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerN {
    pub n: usize,
    pub completed: usize,
    pub solver_failures: usize,
    pub successes: usize,
    pub success_rate: Option<f64>,
    /// Median of the kind's statistic over completed trials.
    pub median: Option<f64>,
}

/// Aggregate of one run, written as `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: ExperimentKind,
    pub trials: usize,
    pub epsilon: f64,
    pub per_n: Vec<PerN>,
    pub success_rate: Option<f64>,
    pub solver_failure_rate: f64,
    pub threshold: f64,
    /// Medians strictly decreasing across `n`, for kinds with a trend claim.
    pub trend_decreasing: Option<bool>,
    pub log_log_slope: Option<f64>,
    pub passed: bool,
}

impl Summary {
    pub fn numerically_failed(&self) -> bool {
        self.solver_failure_rate > MAX_SOLVER_FAILURE_RATE
    }
}

/// Concentration slopes accepted as the `n^{-1/2}` rate.
pub const SLOPE_RANGE: (f64, f64) = (-0.65, -0.35);

/// Runs any campaign and aggregates it.
pub fn run(c: &Campaign, exec: Execution) -> Result<(ResultTable, Summary)> {
    c.validate()?;
    let table = match c.kind {
        ExperimentKind::NoOutliers => ResultTable::NoOutliers(run_no_outliers(c, exec)?),
        ExperimentKind::Pairing => ResultTable::Pairing(run_pairing(c, exec)?),
        ExperimentKind::TwoCirclesInterior => ResultTable::TwoCirclesInterior(run_two_circles_interior(c, exec)?),
        ExperimentKind::Convergence | ExperimentKind::Sharpness => ResultTable::Convergence(run_convergence(c, exec)?),
        ExperimentKind::Concentration => ResultTable::Concentration(run_concentration(c, exec)?.rows()),
    };
    let summary = summarize(c, &table);
    Ok((table, summary))
}

/// `(n, status, statistic)` per trial.
fn outcomes(table: &ResultTable) -> Vec<(usize, TrialStatus, Option<f64>)> {
    match table {
        ResultTable::NoOutliers(rows) => rows
            .iter()
            .map(|r| (r.n, r.status, r.outside_count.map(|k| k as f64)))
            .collect(),
        ResultTable::Pairing(rows) => rows.iter().map(|r| (r.n, r.status, r.max_distance())).collect(),
        ResultTable::TwoCirclesInterior(rows) => rows.iter().map(|r| (r.n, r.status, r.modulus)).collect(),
        ResultTable::Convergence(rows) => rows.iter().map(|r| (r.n, r.status, r.bl_distance)).collect(),
        ResultTable::Concentration(rows) => rows.iter().map(|r| (r.n, TrialStatus::Success, Some(r.sup_error))).collect(),
    }
}

pub fn summarize(c: &Campaign, table: &ResultTable) -> Summary {
    let all = outcomes(table);
    let per_n: Vec<PerN> = c
        .n_values
        .iter()
        .map(|&n| {
            let rows: Vec<_> = all.iter().filter(|r| r.0 == n).collect();
            let failures = rows.iter().filter(|r| r.1 == TrialStatus::SolverFailure).count();
            let completed = rows.len() - failures;
            let successes = rows.iter().filter(|r| r.1 == TrialStatus::Success).count();
            let stat: Vec<f64> = rows
                .iter()
                .filter(|r| r.1 != TrialStatus::SolverFailure)
                .filter_map(|r| r.2)
                .collect();
            PerN {
                n,
                completed,
                solver_failures: failures,
                successes,
                success_rate: (completed > 0).then(|| successes as f64 / completed as f64),
                median: (!stat.is_empty()).then(|| stats::median(&stat)),
            }
        })
        .collect();
    let completed: usize = per_n.iter().map(|p| p.completed).sum();
    let successes: usize = per_n.iter().map(|p| p.successes).sum();
    let failures: usize = per_n.iter().map(|p| p.solver_failures).sum();
    let success_rate = (completed > 0).then(|| successes as f64 / completed as f64);
    let medians: Vec<Option<f64>> = per_n.iter().map(|p| p.median).collect();
    let trend_kind = matches!(
        c.kind,
        ExperimentKind::Pairing | ExperimentKind::TwoCirclesInterior | ExperimentKind::Convergence
    );
    let trend_decreasing = (trend_kind && medians.len() > 1).then(|| {
        medians
            .windows(2)
            .all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b < a))
    });
    let log_log_slope =
        (c.kind == ExperimentKind::Concentration && medians.iter().all(|m| m.is_some_and(|m| m > 0.0))).then(|| {
            let xs: Vec<f64> = c.n_values.iter().map(|&n| (n as f64).ln()).collect();
            let ys: Vec<f64> = medians.iter().map(|m| m.unwrap().ln()).collect();
            stats::regression_slope(&xs, &ys)
        });
    let rates_ok = match c.kind {
        ExperimentKind::Convergence | ExperimentKind::Concentration => true,
        _ => per_n.iter().all(|p| p.success_rate.is_some_and(|r| r >= c.success_threshold)),
    };
    let slope_ok = match c.kind {
        ExperimentKind::Concentration => log_log_slope.is_some_and(|s| (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s)),
        _ => true,
    };
    let total = all.len().max(1);
    Summary {
        experiment: c.kind,
        trials: c.trials,
        epsilon: c.epsilon,
        per_n,
        success_rate,
        solver_failure_rate: failures as f64 / total as f64,
        threshold: c.success_threshold,
        trend_decreasing,
        log_log_slope,
        passed: rates_ok && slope_ok && trend_decreasing.unwrap_or(true),
    }
}
