//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a gating criterion fails. Pass criterion numbers as
//! arguments to run a subset: `cargo test --test acceptance -- 5 6`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use neurodavis::analysis::{
    check_gradients, check_lemma1, check_theorem1_suite, default_theorem1_cases, median, run_preservation_suite,
    SuiteReport,
};
use neurodavis::cli::{cmd_fit, cmd_plot, FitCmd, InputArgs, ModelArgs, PlotArgs, PrepArgs};
use neurodavis::datasets::{gen_synthetic, lift9, load_csv, save_csv, Dataset, LabelColumn, SyntheticKind};
use neurodavis::metrics::{
    agglomerative, ari, fmi, keys, knn_evaluate, mann_whitney_u, pearson_r, spearman_rho, DEFAULT_KNN_K,
    DEFAULT_TEST_FRACTION, NORMAL_APPROX_MAX_ERROR,
};
use neurodavis::model::{embed, fit, ModelConfig};
use neurodavis::numerics::{euclidean, Matrix, Rng};

const RUNS: usize = 10;
const DATASET_SEED: u64 = 0;
const BASE_SEED: u64 = 0;

const SYNTHETIC_RHO_MIN: f64 = 0.90;
const LIFT9_RHO_MIN: f64 = 0.85;
const WORLD_CENTROID_RHO_MIN: f64 = 0.90;
const WORLD_AREA_R_MIN: f64 = 0.80;
const REAL_RHO_MIN: f64 = 0.85;
const KNN_MARGIN_MIN: f64 = 0.25;
const GRAD_MODELS: usize = 50;
const GRAD_REL_ERROR_MAX: f64 = 1e-4;
const LEMMA1_TRIALS: usize = 1000;
const LEMMA1_MAX_DIM: usize = 8;
const LEMMA1_BOUND: f64 = 1.0 + 1e-9;
const ORACLE_TOL: f64 = 1e-12;

const SYNTHETIC_BUDGET: Duration = Duration::from_secs(300);
const GRAD_BUDGET: Duration = Duration::from_secs(30);
const LEMMA1_BUDGET: Duration = Duration::from_secs(10);
const THEOREM1_BUDGET: Duration = Duration::from_secs(60);

enum Outcome {
    Pass,
    Fail,
    SoftPass,
    SoftFail,
    Skip,
}

struct Line {
    id: u32,
    outcome: Outcome,
    detail: String,
}

fn gate(id: u32, pass: bool, detail: String) -> Line {
    Line { id, outcome: if pass { Outcome::Pass } else { Outcome::Fail }, detail }
}

fn suite(ds: &Dataset) -> SuiteReport {
    run_preservation_suite(ds, &ModelConfig::default(), RUNS, BASE_SEED).expect("suite run")
}

fn synthetic(kind: SyntheticKind) -> Dataset {
    gen_synthetic(kind, &mut Rng::new(DATASET_SEED))
}

const ROUND_TRIP_KINDS: [SyntheticKind; 4] =
    [SyntheticKind::EllipticRing, SyntheticKind::Olympic, SyntheticKind::Spiral, SyntheticKind::Shape];

fn criterion_1() -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for kind in ROUND_TRIP_KINDS {
        let t = Instant::now();
        let rho = suite(&synthetic(kind)).median(keys::DISTANCE_RHO).unwrap();
        let secs = t.elapsed();
        pass &= rho >= SYNTHETIC_RHO_MIN && secs < SYNTHETIC_BUDGET;
        parts.push(format!("{} {rho:.3} ({:.0}s)", kind.name(), secs.as_secs_f64()));
    }
    gate(1, pass, format!("2D round-trip median distance rho >= {SYNTHETIC_RHO_MIN}: {}", parts.join(", ")))
}

fn criterion_2() -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for kind in SyntheticKind::ALL {
        let ds = lift9(&synthetic(kind)).unwrap();
        let rho = suite(&ds).median(keys::DISTANCE_RHO).unwrap();
        pass &= rho >= LIFT9_RHO_MIN;
        parts.push(format!("{} {rho:.3}", kind.name()));
    }
    gate(2, pass, format!("9D-lift round-trip median distance rho >= {LIFT9_RHO_MIN}: {}", parts.join(", ")))
}

fn criterion_3() -> Line {
    let r = suite(&synthetic(SyntheticKind::WorldMap));
    let c = r.median(keys::CENTROID_RHO).unwrap();
    let a = r.median(keys::AREA_R).unwrap();
    gate(
        3,
        c >= WORLD_CENTROID_RHO_MIN && a >= WORLD_AREA_R_MIN,
        format!(
            "world map: median centroid rho {c:.3} (>= {WORLD_CENTROID_RHO_MIN}), median area r {a:.3} (>= {WORLD_AREA_R_MIN})"
        ),
    )
}

fn data_dir() -> PathBuf {
    std::env::var_os("NEURODAVIS_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn criterion_4() -> Line {
    let dir = data_dir();
    let (wine, cancer) = (dir.join("wine.csv"), dir.join("breast_cancer.csv"));
    if !wine.exists() || !cancer.exists() {
        return Line {
            id: 4,
            outcome: Outcome::Skip,
            detail: format!("public data not found in {} (run scripts/export_uci.py)", dir.display()),
        };
    }
    let label = LabelColumn::Name("label".into());
    let wine = load_csv(&wine, Some(&label), true).unwrap();
    let cancer = load_csv(&cancer, Some(&label), true).unwrap();
    let rho_w = suite(&wine).median(keys::DISTANCE_RHO).unwrap();
    let rho_c = suite(&cancer).median(keys::DISTANCE_RHO).unwrap();

    let labels = wine.labels.as_deref().unwrap();
    let mut counts = vec![0usize; wine.n_classes()];
    labels.iter().for_each(|&l| counts[l] += 1);
    let baseline = *counts.iter().max().unwrap() as f64 / labels.len() as f64;
    let accuracies: Vec<f64> = (0..RUNS as u64)
        .map(|r| {
            let seed = BASE_SEED + r;
            let (model, _) = fit(&wine.x, &ModelConfig { seed, ..ModelConfig::default() }).unwrap();
            let mut rng = Rng::stream(seed, 3);
            knn_evaluate(&embed(&model), labels, DEFAULT_KNN_K, DEFAULT_TEST_FRACTION, &mut rng).unwrap().accuracy
        })
        .collect();
    let accuracy = median(&accuracies);
    let margin = accuracy - baseline;
    let pass = rho_w >= REAL_RHO_MIN && rho_c >= REAL_RHO_MIN && margin >= KNN_MARGIN_MIN;
    Line {
        id: 4,
        outcome: if pass { Outcome::SoftPass } else { Outcome::SoftFail },
        detail: format!(
            "public data (unscaled): wine rho {rho_w:.3}, breast cancer rho {rho_c:.3} (>= {REAL_RHO_MIN}); \
             wine median k-NN accuracy {accuracy:.3} vs majority {baseline:.3}, margin {margin:.3} (>= {KNN_MARGIN_MIN})"
        ),
    }
}

fn criterion_5() -> Line {
    let t = Instant::now();
    let r = check_gradients(GRAD_MODELS, &mut Rng::new(0)).unwrap();
    let secs = t.elapsed();
    gate(
        5,
        r.models == GRAD_MODELS && r.max_relative_error < GRAD_REL_ERROR_MAX && secs < GRAD_BUDGET,
        format!(
            "gradient oracle: {} models, {} parameters, max relative error {:.2e} (< {GRAD_REL_ERROR_MAX:.0e}), {:.1}s",
            r.models,
            r.parameters_checked,
            r.max_relative_error,
            secs.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Line {
    let t = Instant::now();
    let r = check_lemma1(LEMMA1_TRIALS, LEMMA1_MAX_DIM, &mut Rng::new(0)).unwrap();
    let secs = t.elapsed();
    gate(
        6,
        r.trials == LEMMA1_TRIALS && r.max_norm <= LEMMA1_BOUND && secs < LEMMA1_BUDGET,
        format!(
            "contraction bound: {} trials, max ||I - eta W W^T||_2 = {:.15} (<= 1 + 1e-9), {:.1}s",
            r.trials,
            r.max_norm,
            secs.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Line {
    let t = Instant::now();
    let cases = default_theorem1_cases();
    let r = check_theorem1_suite(&cases).unwrap();
    let secs = t.elapsed();
    gate(
        7,
        cases.len() == 20 && r.cases == 20 && r.failures == 0 && secs < THEOREM1_BUDGET,
        format!(
            "close-pair contraction: {} traces, {} non-monotone, max relative step increase {:.1e}, {:.1}s",
            r.cases,
            r.failures,
            r.max_relative_increase,
            secs.as_secs_f64()
        ),
    )
}

fn criterion_8() -> Line {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let data = d.join("ring.csv");
    save_csv(&synthetic(SyntheticKind::EllipticRing), &data).unwrap();
    let mut bytes = Vec::new();
    for tag in ["a", "b"] {
        let emb = d.join(format!("{tag}.csv"));
        let svg = d.join(format!("{tag}.svg"));
        cmd_fit(&FitCmd {
            input: InputArgs { input: data.clone(), label_column: None, no_header: false },
            model: ModelArgs {
                k: 2,
                hidden: None,
                alpha: 1e-6,
                beta: 1e-4,
                lr: 1e-3,
                epochs: 1000,
                batch: None,
                seed: 7,
                no_early_stop: false,
                window: 20,
                rel_tol: 1e-5,
            },
            prep: PrepArgs { pca: None, minmax: false },
            model_out: Some(d.join(format!("{tag}.model.json"))),
            embedding_out: Some(emb.clone()),
            report_out: Some(d.join(format!("{tag}.report.json"))),
        })
        .unwrap();
        cmd_plot(&PlotArgs {
            input: InputArgs { input: emb.clone(), label_column: None, no_header: false },
            out: svg.clone(),
            width: 600,
            height: 600,
            radius: 2.0,
            no_color: false,
            title: None,
        })
        .unwrap();
        bytes.push((std::fs::read(&emb).unwrap(), std::fs::read(&svg).unwrap()));
    }
    let csv_same = bytes[0].0 == bytes[1].0;
    let svg_same = bytes[0].1 == bytes[1].1;
    gate(
        8,
        csv_same && svg_same,
        format!(
            "determinism: embedding CSV identical {csv_same} ({} bytes), SVG identical {svg_same} ({} bytes)",
            bytes[0].0.len(),
            bytes[0].1.len()
        ),
    )
}

fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let less = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

fn brute_pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// Pair-counting indices straight from the definitions.
fn brute_ari_fmi(t: &[usize], p: &[usize]) -> (f64, f64) {
    let n = t.len();
    let (mut ss, mut sd, mut ds, mut dd) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            match (t[i] == t[j], p[i] == p[j]) {
                (true, true) => ss += 1.0,
                (true, false) => sd += 1.0,
                (false, true) => ds += 1.0,
                (false, false) => dd += 1.0,
            }
        }
    }
    let pairs = ss + sd + ds + dd;
    let (same_t, same_p) = (ss + sd, ss + ds);
    let expected = same_t * same_p / pairs;
    let max = (same_t + same_p) / 2.0;
    let ari = if max == expected { if sd + ds == 0.0 { 1.0 } else { 0.0 } } else { (ss - expected) / (max - expected) };
    let fmi = if same_t == 0.0 && same_p == 0.0 {
        1.0
    } else if same_t == 0.0 || same_p == 0.0 {
        0.0
    } else {
        ss / (same_t * same_p).sqrt()
    };
    (ari, fmi)
}

/// Average linkage by recomputing every cluster-pair mean distance each
/// merge. Ties go to the smallest (distance, first cluster, second cluster),
/// clusters named by their smallest member.
fn brute_agglomerative(x: &Matrix, k: usize) -> Vec<usize> {
    let n = x.rows();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while clusters.len() > k {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut s = 0.0;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        s += euclidean(x.row(i), x.row(j));
                    }
                }
                let avg = s / (clusters[a].len() * clusters[b].len()) as f64;
                let (ia, ib) = (clusters[a][0].min(clusters[b][0]), clusters[a][0].max(clusters[b][0]));
                if (avg, ia, ib) < (best.0, best.1, best.2) {
                    best = (avg, ia, ib, a, b);
                }
            }
        }
        let merged = clusters.remove(best.4);
        clusters[best.3].extend(merged);
        clusters[best.3].sort_unstable();
    }
    let mut owner = vec![0; n];
    for (c, members) in clusters.iter().enumerate() {
        members.iter().for_each(|&i| owner[i] = c);
    }
    let mut relabel = std::collections::HashMap::new();
    owner.iter().map(|o| { let next = relabel.len(); *relabel.entry(*o).or_insert(next) }).collect()
}

/// Exact two-sided p-value of U by enumerating every split of the pooled
/// sample.
fn exact_u(a: &[f64], b: &[f64]) -> (f64, f64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = brute_ranks(&pooled);
    let (n1, n) = (a.len(), pooled.len());
    let mean = (n1 * (n - n1)) as f64 / 2.0;
    let u_of = |mask: u32| {
        let r: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        r - (n1 * (n1 + 1)) as f64 / 2.0
    };
    let observed = u_of((1u32 << n1) - 1);
    let dev = (observed - mean).abs();
    let (mut hits, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == n1 {
            total += 1;
            if (u_of(mask) - mean).abs() >= dev - 1e-9 {
                hits += 1;
            }
        }
    }
    (observed, hits as f64 / total as f64)
}

fn random_labels(n: usize, k: usize, rng: &mut Rng) -> Vec<usize> {
    (0..n).map(|_| rng.below(k)).collect()
}

fn criterion_9() -> Line {
    let mut rng = Rng::new(2024);
    let mut worst = [0.0f64; 5];
    let mut agglo_mismatch = 0;
    let mut u_mismatch = 0;
    let mut fixtures = 0;
    let hand: [(&[f64], &[f64]); 3] = [
        (&[1.0, 2.0, 2.0, 4.0], &[10.0, 20.0, 30.0, 40.0]),
        (&[3.0, 1.0, 2.0], &[1.0, 2.0, 3.0]),
        (&[0.5, 0.5, 1.5, -2.0, 7.0, 7.0, 7.0, 0.0], &[1.0, 0.0, 1.0, 0.0, 3.0, 2.0, 3.0, 1.0]),
    ];
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = hand.iter().map(|(a, b)| (a.to_vec(), b.to_vec())).collect();
    for _ in 0..500 {
        let n = 3 + rng.below(6);
        let gen = |rng: &mut Rng| (0..n).map(|_| rng.below(5) as f64).collect::<Vec<_>>();
        let (a, b) = (gen(&mut rng), gen(&mut rng));
        if brute_ranks(&a).windows(2).all(|w| w[0] == w[1]) || brute_ranks(&b).windows(2).all(|w| w[0] == w[1]) {
            continue;
        }
        pairs.push((a, b));
    }
    for (a, b) in &pairs {
        fixtures += 1;
        worst[0] = worst[0].max((spearman_rho(a, b).unwrap() - brute_pearson(&brute_ranks(a), &brute_ranks(b))).abs());
        worst[1] = worst[1].max((pearson_r(a, b).unwrap() - brute_pearson(a, b)).abs());
    }
    for _ in 0..500 {
        let n = 2 + rng.below(7);
        let t = random_labels(n, 1 + rng.below(4), &mut rng);
        let p = random_labels(n, 1 + rng.below(4), &mut rng);
        let (ba, bf) = brute_ari_fmi(&t, &p);
        worst[2] = worst[2].max((ari(&t, &p).unwrap() - ba).abs());
        worst[3] = worst[3].max((fmi(&t, &p).unwrap() - bf).abs());
        fixtures += 1;
    }
    for _ in 0..300 {
        let n = 2 + rng.below(7);
        let d = 1 + rng.below(3);
        let x = Matrix::from_fn(n, d, |_, _| rng.normal());
        let k = 1 + rng.below(n);
        if agglomerative(&x, k).unwrap() != brute_agglomerative(&x, k) {
            agglo_mismatch += 1;
        }
        fixtures += 1;
    }
    // Tied samples: U must match exactly. The p-value bound covers tie-free
    // samples, so tied gaps are reported but not gated.
    let mut tied_gap = 0.0f64;
    for tied in [true, false] {
        for _ in 0..300 {
            let (n1, n2) = (1 + rng.below(8), 1 + rng.below(8));
            let mut draw = |n: usize| -> Vec<f64> {
                (0..n).map(|_| if tied { rng.below(6) as f64 } else { rng.normal() }).collect()
            };
            let (a, b) = (draw(n1), draw(n2));
            if a.iter().chain(&b).all(|v| *v == a[0]) {
                continue;
            }
            let mw = mann_whitney_u(&a, &b).unwrap();
            let (u, p) = exact_u(&a, &b);
            if mw.u != u {
                u_mismatch += 1;
            }
            let gap = (mw.p_two_sided - p).abs();
            if tied {
                tied_gap = tied_gap.max(gap);
            } else {
                worst[4] = worst[4].max(gap);
            }
            fixtures += 1;
        }
    }
    let pass = worst[..4].iter().all(|&w| w <= ORACLE_TOL)
        && agglo_mismatch == 0
        && u_mismatch == 0
        && worst[4] <= NORMAL_APPROX_MAX_ERROR;
    gate(
        9,
        pass,
        format!(
            "metric oracles over {fixtures} fixtures (n <= 8): spearman {:.1e}, pearson {:.1e}, ARI {:.1e}, FMI {:.1e} (<= {ORACLE_TOL:.0e}); \
             agglomerative mismatches {agglo_mismatch}; U mismatches {u_mismatch}, max |p - exact p| {:.3} tie-free (<= {NORMAL_APPROX_MAX_ERROR}), {tied_gap:.3} with ties",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn main() {
    let selected: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(u32, fn() -> Line); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let line = run();
        let tag = match line.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => {
                failed += 1;
                "FAIL"
            }
            Outcome::SoftPass => "PASS (soft)",
            Outcome::SoftFail => "FAIL (soft)",
            Outcome::Skip => "SKIP (soft)",
        };
        println!("[{tag}] criterion {}: {}", line.id, line.detail);
    }
    if failed > 0 {
        println!("{failed} gating criteria failed");
        std::process::exit(1);
    }
}
