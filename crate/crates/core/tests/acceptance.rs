//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Pass substrings (e.g. `c05`) to run a subset.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use critpair::assignment::matched_max_distance;
use critpair::cxlinalg::{companion_identity_residual, oracle_critical_points, ReducedOutlierFunction};
use critpair::experiments::{run, Campaign, ExperimentKind, KRule, ResultTable, Summary, TrialStatus, XiRule};
use critpair::geometry::Polygon;
use critpair::measure::Measure;
use critpair::nets::{
    build_net, cardinality_bound, covers, min_separation, Annulus, CircleCurve, Disk, DiskMinusNeighborhood, PointSet, Region,
};
use critpair::par::{Execution, THREADS_ENV};
use critpair::polyroots::{critical_points, RootedPolynomial, DEFAULT_TOL};
use critpair::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = (bool, String);
type Criterion = (&'static str, &'static str, fn() -> Check);

fn mixed_measure(i: usize, with_atoms: bool) -> Measure {
    match i % if with_atoms { 5 } else { 4 } {
        0 => Measure::unit_circle(),
        1 => Measure::uniform_disk(C::new(0.3, 0.2), 0.8).unwrap(),
        2 => Measure::two_circles(),
        3 => Measure::blob(),
        _ => Measure::atomic(vec![
            (C::new(1.0, 0.0), 0.5),
            (C::new(0.0, 1.0), 0.3),
            (C::new(-1.0, -1.0), 0.2),
        ])
        .unwrap(),
    }
}

fn within(limit: Duration, t: Instant) -> (bool, String) {
    let e = t.elapsed();
    (
        e <= limit,
        format!("runtime {:.1}s (limit {}s)", e.as_secs_f64(), limit.as_secs()),
    )
}

fn summary_of(c: &Campaign) -> (ResultTable, Summary) {
    run(c, Execution::available()).expect("campaign runs")
}

fn medians(s: &Summary) -> Vec<f64> {
    s.per_n.iter().map(|p| p.median.unwrap_or(f64::NAN)).collect()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn c01_companion_identity() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = rng.gen_range(2..=60);
        let roots = mixed_measure(i, true).sample(n, &mut rng);
        let mut probes = 0;
        while probes < 5 {
            let z = C::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            if roots.iter().any(|x| (z - x).norm() < 1e-2) {
                continue;
            }
            worst = worst.max(companion_identity_residual(&roots, z).unwrap());
            probes += 1;
        }
    }
    let (fast, rt) = within(Duration::from_secs(5), t);
    (
        worst < 1e-9 && fast,
        format!("max relative residual {worst:.2e} < 1e-9, {rt}"),
    )
}

fn c02_solver_oracle() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = rng.gen_range(2..=60);
        let roots = mixed_measure(i, false).sample(n, &mut rng);
        let poly = RootedPolynomial::from_roots(roots.clone()).unwrap();
        let aberth = critical_points(&poly, DEFAULT_TOL).unwrap().expanded();
        let oracle = oracle_critical_points(&roots, DEFAULT_TOL).unwrap().expanded();
        worst = worst.max(matched_max_distance(&aberth, &oracle));
    }
    let (fast, rt) = within(Duration::from_secs(30), t);
    (worst < 1e-7 && fast, format!("max matched distance {worst:.2e} < 1e-7, {rt}"))
}

fn c03_roots_of_unity() -> Check {
    let roots: Vec<C> = (0..100).map(|k| C::from_polar(1.0, 2.0 * PI * k as f64 / 100.0)).collect();
    let cps = critical_points(&RootedPolynomial::from_roots(roots).unwrap(), DEFAULT_TOL).unwrap();
    let far = cps.points.iter().map(|p| p.location.norm()).fold(0.0, f64::max);
    let count = cps.total_multiplicity();
    (
        count == 99 && far < 1e-6,
        format!("{count} critical points, max |w| = {far:.2e} < 1e-6"),
    )
}

fn c04_no_outliers() -> Check {
    let t = Instant::now();
    let mut c = Campaign::new(ExperimentKind::NoOutliers, Measure::unit_circle());
    c.n_values = vec![200];
    c.trials = 100;
    c.base_seed = 4;
    let (table, _) = summary_of(&c);
    let ResultTable::NoOutliers(rows) = table else {
        unreachable!()
    };
    let clean = rows.iter().filter(|r| r.outside_count == Some(0)).count();
    let (fast, rt) = within(Duration::from_secs(120), t);
    (
        clean >= 99 && fast,
        format!("{clean}/100 trials without outliers (need 99), {rt}"),
    )
}

fn c05_fig2_pairing() -> Check {
    let t = Instant::now();
    let mut c = Campaign::new(ExperimentKind::Pairing, Measure::unit_circle());
    c.n_values = vec![101];
    c.xi = XiRule::Fixed {
        points: vec![C::new(1.5, 0.0)],
    };
    c.k_rule = KRule::Constant { k: 1 };
    c.epsilon = 0.15;
    c.trials = 100;
    c.base_seed = 5;
    let (table, s) = summary_of(&c);
    let ResultTable::Pairing(reports) = table else {
        unreachable!()
    };
    let ok = reports
        .iter()
        .filter(|r| r.status == TrialStatus::Success && r.count_ok() && r.radius_ok())
        .count();
    let (fast, rt) = within(Duration::from_secs(60), t);
    (
        ok >= 95 && fast,
        format!(
            "{ok}/100 trials with one outlier within 4/101 (need 95), median distance {:.4}, {rt}",
            medians(&s)[0]
        ),
    )
}

fn c06_fig3_pairing() -> Check {
    let mut c = Campaign::new(ExperimentKind::Pairing, Measure::unit_circle());
    c.n_values = vec![203, 812];
    c.xi = XiRule::Fixed {
        points: vec![C::new(1.0, 1.0), C::new(1.5, 0.0), C::new(1.2, 0.3)],
    };
    c.k_rule = KRule::Constant { k: 3 };
    // 1.2+0.3i is 0.237 from the circle; the gap hypothesis needs 3ε below that
    c.epsilon = 0.075;
    c.trials = 100;
    c.base_seed = 6;
    let (table, s) = summary_of(&c);
    let ResultTable::Pairing(reports) = table else {
        unreachable!()
    };
    let three = reports.iter().filter(|r| r.n == 203 && r.count_ok() && r.s() == 3).count();
    let m = medians(&s);
    (
        three >= 95 && m[1] < m[0],
        format!(
            "{three}/100 trials with exactly 3 outliers at n=203 (need 95); median distance {:.4} -> {:.4}",
            m[0], m[1]
        ),
    )
}

fn c07_two_circles_interior() -> Check {
    let mut c = Campaign::new(ExperimentKind::TwoCirclesInterior, Measure::two_circles());
    c.n_values = vec![200, 1600];
    c.trials = 100;
    c.base_seed = 7;
    let (table, s) = summary_of(&c);
    let ResultTable::TwoCirclesInterior(rows) = table else {
        unreachable!()
    };
    let one = rows.iter().filter(|r| r.n == 200 && r.interior_count == Some(1)).count();
    let m = medians(&s);
    (
        one >= 99 && m[1] < m[0],
        format!(
            "{one}/100 trials with one interior critical point at n=200 (need 99); median modulus {:.4} -> {:.4}",
            m[0], m[1]
        ),
    )
}

fn c08_deterministic_counterexample() -> Check {
    let mut roots: Vec<C> = (0..49).map(|k| C::from_polar(1.0, 2.0 * PI * k as f64 / 49.0)).collect();
    roots.push(C::new(0.5, 0.0));
    let aberth = critical_points(&RootedPolynomial::from_roots(roots.clone()).unwrap(), DEFAULT_TOL).unwrap();
    let oracle = oracle_critical_points(&roots, DEFAULT_TOL).unwrap();
    let inside = |w: &[C]| w.iter().filter(|w| w.norm() <= 0.75).count();
    let (a, o) = (inside(&aberth.expanded()), inside(&oracle.expanded()));
    let closest = aberth.expanded().iter().map(|w| w.norm()).fold(f64::INFINITY, f64::min);
    (
        a == 0 && o == 0,
        format!("{a} solver / {o} oracle critical points in |z| <= 3/4; smallest modulus {closest:.4}"),
    )
}

fn c09_concentration() -> Check {
    let t = Instant::now();
    let mut c = Campaign::new(ExperimentKind::Concentration, Measure::unit_circle());
    c.n_values = vec![100, 400, 1600, 6400];
    c.trials = 20;
    c.base_seed = 9;
    c.epsilon = 0.15;
    c.m = Some(3.0);
    c.net_pitch = Some(0.075);
    let (_, s) = summary_of(&c);
    let slope = s.log_log_slope.unwrap_or(f64::NAN);
    let (fast, rt) = within(Duration::from_secs(180), t);
    (
        (-0.65..=-0.35).contains(&slope) && fast,
        format!("log-log slope {slope:.3} in [-0.65, -0.35], {rt}"),
    )
}

fn c10_weak_convergence() -> Check {
    let mut c = Campaign::new(ExperimentKind::Convergence, Measure::unit_circle());
    c.n_values = vec![200, 1000, 5000];
    c.trials = 20;
    c.base_seed = 10;
    c.k_rule = KRule::Power { alpha: 0.5 };
    c.xi = XiRule::Repeat { point: C::new(3.0, 0.0) };
    let (_, s) = summary_of(&c);
    let m = medians(&s);

    let mut sharp = Campaign::new(ExperimentKind::Sharpness, Measure::unit_circle());
    sharp.n_values = vec![1000];
    sharp.trials = 20;
    sharp.base_seed = 10;
    sharp.k_rule = KRule::Fraction { c: 0.3 };
    sharp.xi = XiRule::Repeat { point: C::new(0.0, 0.0) };
    let (_, ss) = summary_of(&sharp);
    let floor = medians(&ss)[0];
    (
        strictly_decreasing(&m) && floor > 0.05,
        format!(
            "median distance {:.4} -> {:.4} -> {:.4} strictly decreasing; linear-fraction variant {floor:.4} > 0.05",
            m[0], m[1], m[2]
        ),
    )
}

/// A random compact domain, a bound on its modulus, and sample points in it.
fn random_domain(i: usize, rng: &mut ChaCha8Rng) -> (Box<dyn Region>, f64, Vec<C>) {
    let center = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let on_circle = |c: C, r: f64, rng: &mut ChaCha8Rng| -> Vec<C> {
        (0..300).map(|_| c + C::from_polar(r, rng.gen_range(0.0..2.0 * PI))).collect()
    };
    match i % 6 {
        0 => {
            let radius = rng.gen_range(0.2..2.0);
            (Box::new(Disk { center, radius }), center.norm() + radius, Vec::new())
        }
        1 => {
            let r_in = rng.gen_range(0.2..1.0);
            let r_out = r_in + rng.gen_range(0.05..1.0);
            (Box::new(Annulus { center, r_in, r_out }), center.norm() + r_out, Vec::new())
        }
        2 => {
            let radius = rng.gen_range(0.3..2.0);
            let samples = on_circle(center, radius, rng);
            (Box::new(CircleCurve { center, radius }), center.norm() + radius, samples)
        }
        3 => {
            let pts: Vec<C> = (0..rng.gen_range(1..40))
                .map(|_| C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let m = pts.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1e-3);
            (Box::new(PointSet(pts.clone())), m, pts)
        }
        4 => {
            let k = rng.gen_range(5..12);
            let vertices: Vec<C> = (0..k)
                .map(|j| center + C::from_polar(rng.gen_range(0.4..2.0), 2.0 * PI * j as f64 / k as f64))
                .collect();
            let m = vertices.iter().map(|p| p.norm()).fold(0.0, f64::max);
            (Box::new(Polygon::new(vertices).unwrap()), m, Vec::new())
        }
        _ => {
            let measure = if rng.gen_bool(0.5) {
                Measure::unit_circle()
            } else {
                Measure::uniform_disk(C::new(0.0, 0.0), 1.0).unwrap()
            };
            let domain = DiskMinusNeighborhood {
                radius: 3.0,
                measure,
                epsilon: rng.gen_range(0.1..0.3),
            };
            (Box::new(domain), 3.0, Vec::new())
        }
    }
}

fn c11_nets() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut failures = Vec::new();
    let mut tightest = 0.0f64;
    for i in 0..50 {
        let (domain, m, samples) = random_domain(i, &mut rng);
        let eps = rng.gen_range(0.15..0.8);
        let net = build_net(domain.as_ref(), m, eps).unwrap();
        let bound = cardinality_bound(m, eps);
        tightest = tightest.max(net.len() as f64 / bound);
        let members = net.points.iter().all(|&p| domain.contains(p));
        let covered = covers(&net, domain.as_ref(), eps / 10.0, &samples);
        let counted = (net.len() as f64) <= bound;
        let separated = net.separated.len() < 2 || min_separation(&net) >= eps / 2.0;
        if !(members && covered && counted && separated) {
            eprintln!("{i}: members {members} covered {covered} counted {counted} separated {separated}");
            failures.push(i);
        }
    }
    (
        failures.is_empty(),
        format!("50 domains, failures {failures:?}; largest |net| / (1 + 4M/ε)² = {tightest:.3}"),
    )
}

fn c12_reduced_function() -> Check {
    let eps = 0.15;
    let pool = [C::new(1.5, 0.0), C::new(-1.3, 0.9), C::new(0.2, -1.7)];
    let mu = Measure::unit_circle();
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    let mut worst = 0.0f64;
    let mut count_mismatch = 0;
    for i in 0..20 {
        let s = 1 + i % 3;
        let outliers = pool[..s].to_vec();
        let inliers = mu.sample(200 - s, &mut rng);
        let rf = ReducedOutlierFunction::new(inliers.clone(), outliers.clone()).unwrap();
        let outside = |w: &C| !mu.in_neighborhood(2.0 * eps, *w);
        let reduced: Vec<C> = rf.zeros().unwrap().into_iter().filter(outside).collect();
        let poly = RootedPolynomial::new(inliers, outliers).unwrap();
        let aberth: Vec<C> = critical_points(&poly, DEFAULT_TOL)
            .unwrap()
            .expanded()
            .into_iter()
            .filter(outside)
            .collect();
        if reduced.len() != aberth.len() || reduced.len() != s {
            count_mismatch += 1;
            continue;
        }
        worst = worst.max(matched_max_distance(&reduced, &aberth));
    }
    (
        count_mismatch == 0 && worst < 1e-6,
        format!("{count_mismatch} count mismatches in 20 instances; max distance {worst:.2e} < 1e-6"),
    )
}

const DETERMINISM_CONFIGS: [(&str, &str); 3] = [
    (
        "pairing",
        r#"{"experiment":"pairing","measure":{"kind":"uniform_circle","center":[0,0],"radius":1},
            "n_values":[101],"xi":{"rule":"fixed","points":[[1.5,0]]},"trials":8,"base_seed":13,
            "output_dir":"out","plot":true}"#,
    ),
    (
        "convergence",
        r#"{"experiment":"convergence","measure":{"kind":"two_circles"},"n_values":[150,300],
            "k_rule":{"rule":"power","alpha":0.5},"xi":{"rule":"repeat","point":[0,3]},
            "trials":4,"base_seed":13,"output_dir":"out","plot":true}"#,
    ),
    (
        "concentration",
        r#"{"experiment":"concentration","measure":{"kind":"uniform_circle","center":[0,0],"radius":1},
            "n_values":[100,400],"trials":3,"base_seed":13,"m":3,"net_pitch":0.3,"output_dir":"out"}"#,
    ),
];

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn c13_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_critpair");
    let tmp = tempfile::tempdir().unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, cfg) in DETERMINISM_CONFIGS {
        let dir = tmp.path().join(name);
        fs::create_dir_all(&dir).unwrap();
        let cfg_path = dir.join("config.json");
        fs::write(&cfg_path, cfg).unwrap();
        let mut runs = Vec::new();
        for threads in ["1", "1", "3"] {
            let status = Command::new(bin)
                .args(["run", cfg_path.to_str().unwrap()])
                .env(THREADS_ENV, threads)
                .output()
                .unwrap()
                .status;
            let out = dir.join("out");
            runs.push((status.code(), files(&out)));
            fs::remove_dir_all(&out).unwrap();
        }
        let same = runs.windows(2).all(|w| w[0] == w[1]);
        let names: Vec<&str> = runs[0].1.iter().map(|(n, _)| n.as_str()).collect();
        ok &= same && runs[0].0.is_some() && names.contains(&"results.csv");
        notes.push(format!(
            "{name} [{}] {}",
            names.join(" "),
            if same { "identical" } else { "DIFFERENT" }
        ));
    }
    (ok, format!("threads 1/1/3: {}", notes.join("; ")))
}

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [Criterion; 13] = [
        ("c01", "companion identity", c01_companion_identity),
        ("c02", "solver matches eigenvalue oracle", c02_solver_oracle),
        ("c03", "roots of unity cluster at the origin", c03_roots_of_unity),
        ("c04", "no outliers without deterministic roots", c04_no_outliers),
        ("c05", "single-root pairing on the circle", c05_fig2_pairing),
        ("c06", "three-root pairing", c06_fig3_pairing),
        ("c07", "two-circles interior critical point", c07_two_circles_interior),
        ("c08", "deterministic counterexample", c08_deterministic_counterexample),
        ("c09", "Stieltjes concentration rate", c09_concentration),
        ("c10", "weak convergence and its sharpness", c10_weak_convergence),
        ("c11", "epsilon-net guarantees", c11_nets),
        ("c12", "reduced outlier function", c12_reduced_function),
        ("c13", "determinism across thread counts", c13_determinism),
    ];
    let mut failed = 0;
    let mut ran = 0;
    for (tag, name, f) in criteria {
        if !filters.is_empty() && !filters.iter().any(|p| tag.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let (pass, detail) = f();
        ran += 1;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {tag} {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
