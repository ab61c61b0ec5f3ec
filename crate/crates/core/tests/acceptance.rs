//! Acceptance gate: one PASS/FAIL line per criterion, run in sequence so the
//! timing checks see an otherwise idle process. Exits non-zero on any FAIL.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use fillgap::analysis::{bound_check, pairwise_distance_correlation, pearson, spearman};
use fillgap::dataset::{synth_lipschitz, SynthConfig};
use fillgap::experiment::{
    run_experiment_on, write_aggregates_csv, write_rows_csv, DatasetRef, ExperimentConfig, ExperimentReport, Metric,
    ModelSpec,
};
use fillgap::parallel::with_threads;
use fillgap::regression::{condition_number, gaussian_kernel_matrix, krr_fit, krr_lipschitz_bound, krr_predict};
use fillgap::seed::rng;
use fillgap::selection::{fps, kcenter_bruteforce, maxsep_bruteforce};
use fillgap::{Dataset, SamplerRegistry, StrategySpec};
use ndarray::{Array1, Array2, Axis};
use rand::Rng;

/// Counts live heap bytes so the FPS memory claim is measured, not assumed.
struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = unsafe { System.alloc(layout) };
        if !p.is_null() {
            let live = LIVE.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(live, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn uniform(n: usize, d: usize, seed: u64) -> Array2<f64> {
    let mut r = rng(seed);
    Array2::from_shape_simple_fn((n, d), || r.random::<f64>())
}

fn dist(a: ndarray::ArrayView1<'_, f64>, b: ndarray::ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// The small-instance family shared by criteria 1 and 2.
fn small_instances() -> Vec<(Array2<f64>, usize, u64)> {
    let mut r = rng(2024);
    (0..240u64)
        .map(|i| {
            let n = r.random_range(5..=12);
            let d = r.random_range(1..=3);
            let b = [2, 3, 4][r.random_range(0..3)];
            (uniform(n, d, 1000 + i), b, i)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let instances = small_instances();
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for (pool, b, seed) in &instances {
        let got = fps(pool.view(), *b, *seed, None).unwrap().final_fill().unwrap();
        let opt = kcenter_bruteforce(pool.view(), *b).unwrap().value;
        if opt > 0.0 {
            worst = worst.max(got / opt);
        }
        if got > 2.0 * opt * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations == 0 && secs < 10.0,
        format!("{} instances, {violations} violations, worst ratio {worst:.3}, {secs:.2} s", instances.len()),
    )
}

fn criterion_2() -> Outcome {
    let instances = small_instances();
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for (pool, b, seed) in &instances {
        let got = fps(pool.view(), *b, *seed, None).unwrap().final_separation().unwrap();
        let opt = maxsep_bruteforce(pool.view(), *b).unwrap().value;
        if opt > 0.0 {
            worst = worst.min(got / opt);
        }
        if got < 0.5 * opt * (1.0 - 1e-12) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{} instances, {violations} violations, worst ratio {worst:.3}", instances.len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let (mut runs, mut violations, mut min_slack) = (0, 0, f64::INFINITY);
    for k in 0..20u64 {
        let d = if k % 2 == 0 { 2 } else { 8 };
        let eps = if k % 4 < 2 { 0.0 } else { 0.1 };
        let s = synth_lipschitz(&SynthConfig {
            n: 500,
            d,
            target_lipschitz: 1.5,
            noise_level: eps,
            tail_fraction: 0.0,
            seed: 300 + k,
        })
        .unwrap();
        let gamma = std::f64::consts::LN_2 / (s.bulk_median_nn * s.bulk_median_nn);
        for b in [10, 25, 50] {
            let sel = fps(s.dataset.features(), b, k, None).unwrap();
            let train = s.dataset.subset(&sel.indices).unwrap();
            let model = krr_fit(&train, gamma, 1e-8).unwrap();
            let r = bound_check(&s.dataset, &sel, &model, s.lipschitz, s.noise_level).unwrap();
            let slack = r.slack.unwrap();
            min_slack = min_slack.min(slack);
            runs += 1;
            if slack < 0.0 {
                violations += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations == 0 && secs < 60.0,
        format!("{runs} runs, {violations} with negative slack, min slack {min_slack:.3e}, {secs:.2} s"),
    )
}

const TAIL_POOL: SynthConfig =
    SynthConfig { n: 2000, d: 8, target_lipschitz: 1.0, noise_level: 0.0, tail_fraction: 0.01, seed: 1 };

fn tail_pool() -> (Dataset, f64) {
    let s = synth_lipschitz(&TAIL_POOL).unwrap();
    // kernel entry between bulk nearest neighbours is exp(-gamma h^2) = 1/2
    let gamma = std::f64::consts::LN_2 / (s.bulk_median_nn * s.bulk_median_nn);
    (s.dataset, gamma)
}

fn tail_config(
    strategies: &[&str],
    budgets: Vec<f64>,
    metrics: Vec<Metric>,
    gamma: f64,
    lambda: f64,
) -> ExperimentConfig {
    ExperimentConfig {
        dataset: DatasetRef::Synth(TAIL_POOL),
        strategies: strategies.iter().map(|s| StrategySpec::named(*s)).collect(),
        budgets,
        repeats: 5,
        model: ModelSpec::Fixed { gamma, lambda },
        metrics,
        master_seed: 77,
    }
}

/// Mean over repeats; a failed cell (singular kernel) counts as unbounded.
fn mean_of(report: &ExperimentReport, strategy: &str, budget: f64, metric: Metric) -> f64 {
    let a = report
        .aggregates
        .iter()
        .find(|a| a.strategy == strategy && a.budget == budget && a.metric == metric)
        .expect("aggregate present");
    if a.failures > 0 {
        f64::INFINITY
    } else {
        a.mean.unwrap()
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (pool, gamma) = tail_pool();
    let strategies = ["fps", "random", "facility_location", "kmedoidspp"];
    let cfg = tail_config(&strategies, vec![0.02], vec![Metric::Maxae, Metric::Mae], gamma, 1e-8);
    let report = run_experiment_on(&cfg, &pool).unwrap();
    let maxae: Vec<f64> = strategies.iter().map(|s| mean_of(&report, s, 0.02, Metric::Maxae)).collect();
    let mae_fps = mean_of(&report, "fps", 0.02, Metric::Mae);
    let mae_random = mean_of(&report, "random", 0.02, Metric::Mae);
    let beats_all = maxae[1..].iter().all(|&m| maxae[0] < m);
    let mae_close = (mae_fps - mae_random).abs() <= 0.25 * mae_random;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        beats_all && mae_close && secs < 120.0,
        format!(
            "MAXAE fps {:.4} random {:.4} facility_location {:.4} kmedoidspp {:.4}; \
             MAE fps {mae_fps:.4} random {mae_random:.4} ({:+.1}%); {secs:.2} s",
            maxae[0],
            maxae[1],
            maxae[2],
            maxae[3],
            100.0 * (mae_fps / mae_random - 1.0)
        ),
    )
}

fn criterion_5() -> Outcome {
    let (pool, gamma) = tail_pool();
    let cfg = tail_config(&["fps", "random"], vec![0.02, 0.05], vec![Metric::CondUnregularized], gamma, 0.0);
    let report = run_experiment_on(&cfg, &pool).unwrap();
    let mut pass = true;
    let mut parts = vec![format!("gamma {gamma:.4}")];
    for b in [0.02, 0.05] {
        let f = mean_of(&report, "fps", b, Metric::CondUnregularized);
        let r = mean_of(&report, "random", b, Metric::CondUnregularized);
        pass &= f < r;
        parts.push(format!("budget {b}: fps {f:.4e} random {r:.4e}"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for k in 0..100u64 {
        let mut r = rng(600 + k);
        let d = r.random_range(1..=4);
        let b = r.random_range(5..=40);
        // spread-out rows: an fps subset of a larger uniform cloud
        let cloud = uniform(20 * b, d, 700 + k);
        let sel = fps(cloud.view(), b, k, None).unwrap();
        let x = cloud.select(Axis(0), &sel.indices);
        let y: Vec<f64> = (0..b).map(|_| r.random_range(-1.0..1.0)).collect();
        let sep = sel.final_separation().unwrap();
        let gamma = 1.0 / (4.0 * sep * sep);
        let train = Dataset::new(x.clone(), Some(y.clone()), None, "c6").unwrap();
        let Ok(model) = krr_fit(&train, gamma, 0.0) else {
            failures += 1;
            continue;
        };
        let ka = gaussian_kernel_matrix(x.view(), gamma).unwrap().dot(&Array1::from(model.weights().to_vec()));
        let res = ka.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max(res / norm);
    }
    outcome(
        failures == 0 && worst <= 1e-8,
        format!("100 instances, {failures} fit failures, max relative residual {worst:.3e}"),
    )
}

fn criterion_7() -> Outcome {
    let (mut slope_violations, mut eig_violations) = (0, 0);
    let mut tightest: f64 = 0.0;
    for k in 0..20u64 {
        let mut r = rng(800 + k);
        let d = r.random_range(1..=5);
        let b = r.random_range(5..=30);
        let x = uniform(b, d, 900 + k);
        let y: Vec<f64> = (0..b).map(|_| r.random_range(-1.0..1.0)).collect();
        let gamma = r.random_range(0.5..20.0);
        let lambda = 10f64.powf(r.random_range(-8.0..-2.0));
        let model = krr_fit(&Dataset::new(x.clone(), Some(y), None, "c7").unwrap(), gamma, lambda).unwrap();
        let bound = krr_lipschitz_bound(&model);
        // pairs from a box slightly larger than the data, half of them close together
        let a = Array2::from_shape_simple_fn((10_000, d), || r.random_range(-0.2..1.2));
        let c = Array2::from_shape_fn((10_000, d), |(i, j)| {
            if i % 2 == 0 {
                a[[i, j]] + r.random_range(-1e-3..1e-3)
            } else {
                r.random_range(-0.2..1.2)
            }
        });
        let pa = krr_predict(&model, a.view()).unwrap();
        let pc = krr_predict(&model, c.view()).unwrap();
        for i in 0..10_000 {
            let h = dist(a.row(i), c.row(i));
            if h == 0.0 {
                continue;
            }
            let slope = (pa[i] - pc[i]).abs() / h;
            tightest = tightest.max(slope / bound);
            if slope > bound * (1.0 + 1e-9) {
                slope_violations += 1;
            }
        }
        let kmat = gaussian_kernel_matrix(x.view(), gamma).unwrap();
        let max_entry = kmat.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if condition_number(kmat.view()).unwrap().lambda_max > b as f64 * max_entry * (1.0 + 1e-12) {
            eig_violations += 1;
        }
    }
    outcome(
        slope_violations == 0 && eig_violations == 0,
        format!(
            "20 models x 10^4 pairs: {slope_violations} slope violations (max slope/bound {tightest:.3}), \
             {eig_violations} eigenvalue violations"
        ),
    )
}

fn criterion_8() -> Outcome {
    let pool = uniform(6000, 4, 88);
    let registry = SamplerRegistry::builtin();
    let specs = [
        StrategySpec::named("fps"),
        StrategySpec::named("random"),
        StrategySpec::named("facility_location"),
        StrategySpec::named("kmedoidspp"),
        StrategySpec::fps_then_random(0.005),
    ];
    let mut mismatches = Vec::new();
    for spec in &specs {
        let sampler = registry.build(spec).unwrap();
        let outputs: Vec<String> = [1, 4, 8]
            .iter()
            .map(|&t| {
                with_threads(t, || serde_json::to_string(&sampler.select(pool.view(), 60, 5).unwrap()).unwrap())
                    .unwrap()
            })
            .collect();
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            mismatches.push(spec.label());
        }
    }
    let (ds, gamma) = tail_pool();
    let strategies = ["fps", "random", "facility_location", "kmedoidspp"];
    let cfg = tail_config(&strategies, vec![0.02, 0.05], Metric::ALL.to_vec(), gamma, 1e-8);
    let reports: Vec<(Vec<u8>, Vec<u8>)> = [1, 4, 8]
        .iter()
        .map(|&t| {
            with_threads(t, || {
                let r = run_experiment_on(&cfg, &ds).unwrap();
                let (mut rows, mut aggregates) = (Vec::new(), Vec::new());
                write_rows_csv(&r, &mut rows).unwrap();
                write_aggregates_csv(&r, &mut aggregates).unwrap();
                (rows, aggregates)
            })
            .unwrap()
        })
        .collect();
    if reports.windows(2).any(|w| w[0] != w[1]) {
        mismatches.push("run_experiment".into());
    }
    outcome(
        mismatches.is_empty(),
        format!("5 samplers on n=6000 and a 40-cell experiment at threads 1/4/8; mismatches {mismatches:?}"),
    )
}

/// Best of three timed runs: the wall clock on a shared host picks up other
/// tenants' load, so every timing is printed and the fastest is judged.
fn criterion_9() -> Outcome {
    let (n, d, b) = (100_000, 64, 1000);
    let pool = uniform(n, d, 99);
    let mut times = Vec::new();
    let mut extra = 0;
    let mut first: Option<Vec<usize>> = None;
    let mut consistent = true;
    for _ in 0..3 {
        let (sel, secs, peak) = with_threads(1, || {
            let before = LIVE.load(Ordering::Relaxed);
            PEAK.store(before, Ordering::Relaxed);
            let start = Instant::now();
            let sel = fps(pool.view(), b, 0, None).unwrap();
            let secs = start.elapsed().as_secs_f64();
            (sel, secs, PEAK.load(Ordering::Relaxed).saturating_sub(before))
        })
        .unwrap();
        times.push(secs);
        extra = extra.max(peak);
        consistent &= sel.len() == b && first.get_or_insert_with(|| sel.indices.clone()) == &sel.indices;
    }
    let best = times.iter().copied().fold(f64::INFINITY, f64::min);
    let per_row = extra as f64 / n as f64;
    let shown: Vec<String> = times.iter().map(|t| format!("{t:.2}")).collect();
    outcome(
        consistent && best < 5.0 && per_row <= 64.0,
        format!(
            "{b} of {n} at d={d} single-threaded: best {best:.2} s of [{}] s; peak extra heap {:.2} MiB = \
             {per_row:.1} B/row (pool {:.1} MiB)",
            shown.join(", "),
            extra as f64 / 1048576.0,
            (n * d * 8) as f64 / 1048576.0
        ),
    )
}

fn criterion_10() -> Outcome {
    let xs: Vec<f64> = (0..200).map(|i| i as f64 * 0.37).collect();
    let lin: Vec<f64> = xs.iter().map(|v| 3.0 * v - 1.0).collect();
    let mono: Vec<f64> = xs.iter().map(|v| v.exp() + v.powi(3)).collect();
    let p = pearson(&xs, &lin).unwrap();
    let s = spearman(&xs, &mono).unwrap();
    let mut pass = (p - 1.0).abs() <= 1e-12 && (s - 1.0).abs() <= 1e-12;

    // with max_pairs covering every pair the report equals a from-scratch
    // computation over all pairs; one pair fewer switches to subsampling
    let mut worst: f64 = 0.0;
    for (n, seed) in [(3usize, 1u64), (25, 2), (120, 3), (200, 4)] {
        let x = uniform(n, 3, seed);
        let mut r = rng(seed + 50);
        let y: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        let (mut dx, mut dy) = (Vec::new(), Vec::new());
        for i in 0..n {
            for j in 0..i {
                dx.push(dist(x.row(i), x.row(j)));
                dy.push((y[i] - y[j]).abs());
            }
        }
        let total = dx.len();
        let full = pairwise_distance_correlation(x.view(), &y, total, 9).unwrap();
        worst = worst
            .max((full.pearson - pearson(&dx, &dy).unwrap()).abs())
            .max((full.spearman - spearman(&dx, &dy).unwrap()).abs());
        pass &= !full.subsampled && full.pair_count == total;
        pass &= pairwise_distance_correlation(x.view(), &y, total - 1, 9).unwrap().subsampled;
    }
    pass &= worst <= 1e-12;
    outcome(pass, format!("pearson {p:.15}, spearman {s:.15}, full-pair max difference {worst:.1e}"))
}

fn main() {
    // the libtest protocol probes with --list; there is nothing to enumerate
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 10] = [
        ("FPS fill distance within 2x of the k-center optimum", criterion_1),
        ("FPS separation within 1/2 of the max-separation optimum", criterion_2),
        ("fill-distance bound dominates observed MAXAE", criterion_3),
        ("tail data: FPS lowest MAXAE, MAE within 25% of random", criterion_4),
        ("FPS kernel better conditioned than random", criterion_5),
        ("KRR interpolates at lambda = 0", criterion_6),
        ("model Lipschitz bound and eigenvalue upper bound hold", criterion_7),
        ("byte-identical outputs at 1, 4 and 8 threads", criterion_8),
        ("FPS 1000 of 100k at d=64 under 5 s, O(n) memory", criterion_9),
        ("correlation exactness", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} - {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
