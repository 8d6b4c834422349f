//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if a gated criterion fails. Criterion 8 is reported, not gated.
//!
//! `PROBE_LAB_FULL_E2E=1` runs criterion 8 at full scale (slow).

mod common;

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use probe_lab::centrality::{self, Metric};
use probe_lab::experiment::{run_experiment, write_csv, Dataset, ExperimentConfig};
use probe_lab::learning::{
    build_training_set, label_benefit, model_prober, train_linear, train_logistic_traced, DatasetOptions, Model,
    PairSample, TrainingSample,
};
use probe_lab::features::FeatureVector;
use probe_lab::planner::{
    assignment_for_set, batch_coverage, batch_greedy, exact_optimal, export_ilp, ilp_dimensions, parse_lp,
    tada_heuristic, tada_probe, ExactConfig,
};
use probe_lab::sampler::{bfs_sample, gen_hardness, SampleConfig};
use probe_lab::strategy::{metric_prober, rand_prober, Strategy};
use probe_lab::{IncompleteView, NodeId};

struct Outcome {
    pass: bool,
    gated: bool,
    detail: String,
}

fn gated(pass: bool, detail: String) -> Outcome {
    Outcome { pass, gated: true, detail }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("approximation guarantee of the path planners", c1_approximation),
        ("batch greedy ratio and coverage submodularity", c2_batch),
        ("ILP export fidelity", c3_ilp),
        ("hardness family", c4_hardness),
        ("centrality oracle equivalence", c5_centrality),
        ("probe semantics invariants", c6_probe_semantics),
        ("learning pipeline sanity", c7_learning),
        ("end-to-end LINREG vs DEG (reported)", c8_end_to_end),
        ("experiment determinism", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        let gate = if outcome.gated { "" } else { " [not gated]" };
        println!(
            "criterion {}: {verdict}{gate} {name} ({:.1}s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
        if !outcome.pass && outcome.gated {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} gated criteria failed");
        std::process::exit(1);
    }
}

fn c1_approximation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let instances = 600;
    let mut violations = Vec::new();
    let config = ExactConfig::default();
    for i in 0..instances {
        let (view, k) = common::guarantee_instance(&mut rng);
        let exact = exact_optimal(&view, k, &config).unwrap();
        let tada = tada_probe(&mut view.clone(), k).unwrap();
        let heur = tada_heuristic(&mut view.clone(), k).unwrap();
        for (name, trace) in [("tada", &tada), ("heuristic", &heur)] {
            if trace.len() > k || trace.total_new * (exact.radius_min + 1) < exact.opt_value {
                violations.push(format!(
                    "#{i} {name}: {} with opt {} radius {}",
                    trace.total_new, exact.opt_value, exact.radius_min
                ));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    gated(
        violations.is_empty() && secs < 60.0,
        format!("{instances} instances, {} violations {:?}, {secs:.1}s (limit 60s)", violations.len(), violations.first()),
    )
}

/// Best batch coverage by enumerating all subsets of size min(k, grays).
fn batch_optimum(view: &IncompleteView, k: usize) -> usize {
    let grays = view.gray_nodes();
    let size = k.min(grays.len());
    let mut best = 0;
    for mask in 0u32..(1 << grays.len()) {
        if mask.count_ones() as usize == size {
            let set: Vec<NodeId> = (0..grays.len()).filter(|&i| mask >> i & 1 == 1).map(|i| grays[i]).collect();
            best = best.max(batch_coverage(view, &set));
        }
    }
    best
}

fn c2_batch() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let instances = 500;
    let factor = 1.0 - (-1.0f64).exp();
    let mut ratio_violations = 0;
    let mut submod_violations = 0;
    let mut checks = 0usize;
    for _ in 0..instances {
        let (view, k) = common::guarantee_instance(&mut rng);
        let greedy = batch_coverage(&view, &batch_greedy(&view, k));
        let best = batch_optimum(&view, k);
        if (greedy as f64) < factor * best as f64 - 1e-9 {
            ratio_violations += 1;
        }
        let grays = view.gray_nodes();
        if grays.len() > 10 {
            continue;
        }
        // All pairs S ⊆ T over the gray powerset, every v outside T.
        let m = grays.len();
        let set_of = |mask: u32| -> Vec<NodeId> { (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| grays[i]).collect() };
        let cover: Vec<usize> = (0u32..(1 << m)).map(|mask| batch_coverage(&view, &set_of(mask))).collect();
        for t in 0u32..(1 << m) {
            let mut s = t;
            loop {
                if cover[s as usize] > cover[t as usize] {
                    submod_violations += 1;
                }
                for v in 0..m {
                    if t >> v & 1 == 0 {
                        let ms = cover[(s | 1 << v) as usize] - cover[s as usize];
                        let mt = cover[(t | 1 << v) as usize] - cover[t as usize];
                        checks += 1;
                        if ms < mt {
                            submod_violations += 1;
                        }
                    }
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & t;
            }
        }
    }
    gated(
        ratio_violations == 0 && submod_violations == 0,
        format!(
            "{instances} instances, ratio violations {ratio_violations}, monotonicity/submodularity violations {submod_violations} over {checks} marginal checks"
        ),
    )
}

fn solver_script() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/support/solve_lp.py")
}

fn c3_ilp() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    let mut expected = Vec::new();
    for i in 0..50 {
        let (view, k) = common::guarantee_instance(&mut rng);
        let mut buf = Vec::new();
        let dims = export_ilp(&view, k, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lp = match parse_lp(&text) {
            Ok(lp) => lp,
            Err(e) => return gated(false, format!("instance {i} does not parse: {e}")),
        };
        let nodes = 1 + view.gray_count() + view.white_count();
        let xs = lp.binaries.iter().filter(|v| v.starts_with("x_")).count();
        let ys = lp.binaries.iter().filter(|v| v.starts_with("y_")).count();
        let counts_ok = dims == ilp_dimensions(&view, k)
            && xs == nodes * (k + 1)
            && ys == nodes
            && lp.constraints.len() == 2 * nodes + 1 + 2 * nodes * k
            && lp.variables().len() == xs + ys;
        if !counts_ok {
            return gated(false, format!("instance {i}: counts differ ({xs} x, {ys} y, {} rows)", lp.constraints.len()));
        }
        let exact = exact_optimal(&view, k, &ExactConfig::default()).unwrap();
        let witness = assignment_for_set(&view, &exact.opt_sets[0], k);
        if lp.evaluate(&witness) != Some(exact.opt_value as f64) {
            return gated(false, format!("instance {i}: optimal set is not an ILP solution of value {}", exact.opt_value));
        }
        let path = dir.path().join(format!("p{i}.lp"));
        std::fs::write(&path, &text).unwrap();
        files.push(path);
        expected.push(exact.opt_value);
    }
    let base = "50 instances parse with exact variable/constraint counts; optimal sets are feasible ILP points";
    let output = Command::new("python3").arg(solver_script()).args(&files).output();
    match output {
        Ok(out) if out.status.success() => {
            let text = String::from_utf8_lossy(&out.stdout);
            let got: Vec<f64> = text.lines().map(|l| l.trim().parse().unwrap_or(f64::NAN)).collect();
            let mismatches = got.iter().zip(&expected).filter(|(g, e)| (**g - **e as f64).abs() > 1e-6).count();
            gated(
                mismatches == 0 && got.len() == expected.len(),
                format!("{base}; external MILP solver agrees with the exact oracle on {}/{}", got.len() - mismatches, expected.len()),
            )
        }
        _ => gated(true, format!("{base}; external solver unavailable, comparison skipped")),
    }
}

fn c4_hardness() -> Outcome {
    let (n, m) = (100, 50);
    let mut tada_ok = 0;
    let mut metric_zero: HashMap<Metric, usize> = HashMap::new();
    for i in 0..20 {
        let g_star = (i * 37) % n;
        let h = gen_hardness(n, m, g_star, 1).unwrap();
        if tada_probe(&mut h.view.clone(), 1).unwrap().total_new == m {
            tada_ok += 1;
        }
        for metric in Metric::ALL {
            if metric_prober(&mut h.view.clone(), metric, 1).unwrap().total_new == 0 {
                *metric_zero.entry(metric).or_default() += 1;
            }
        }
    }
    let metrics_ok = Metric::ALL.iter().all(|mt| metric_zero.get(mt).copied().unwrap_or(0) >= 19);

    let h = gen_hardness(n, m, 41, 1).unwrap();
    let trials = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total = 0usize;
    for _ in 0..trials {
        let mut v = h.view.clone();
        total += rand_prober(&mut v, 1, &mut rng).unwrap().total_new;
    }
    let mean = total as f64 / trials as f64;
    let p = 1.0 / n as f64;
    let sigma = m as f64 * (p * (1.0 - p) / trials as f64).sqrt();
    let rand_ok = (mean - m as f64 * p).abs() <= 3.0 * sigma;

    let mut two_layer_ok = true;
    for n2 in 1..=8 {
        for m2 in 1..=8 {
            let h2 = gen_hardness(n2, m2, n2 / 2, 2).unwrap();
            let r = exact_optimal(&h2.view, 2, &ExactConfig::default()).unwrap();
            two_layer_ok &= r.opt_value == m2 + 2 - 1;
        }
    }
    let zeros: Vec<String> = Metric::ALL.iter().map(|mt| format!("{mt}={}", metric_zero.get(mt).copied().unwrap_or(0))).collect();
    gated(
        tada_ok == 20 && metrics_ok && rand_ok && two_layer_ok,
        format!(
            "tada reached {m} on {tada_ok}/20; metric zeros {}; RAND mean {mean:.4} vs 0.5 ± {:.4}; two-layer opt = m+1 for all n,m <= 8: {two_layer_ok}",
            zeros.join(" "),
            3.0 * sigma
        ),
    )
}

fn c5_centrality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = [0.0f64; 7];
    let mut pr_sum_err = 0.0f64;
    let mut errors = Vec::new();
    for _ in 0..100 {
        let n = rng.random_range(1..=9);
        let p = rng.random_range(0.1..0.7);
        let g = common::gnp(n, p, &mut rng);
        let pairs: [(usize, Vec<f64>, Vec<f64>); 4] = [
            (0, centrality::betweenness(&g), common::brute_betweenness(&g)),
            (1, centrality::closeness(&g), common::brute_closeness(&g)),
            (2, centrality::clustering(&g), common::brute_clustering(&g)),
            (3, centrality::degree(&g), (0..n).map(|u| (0..n).filter(|&v| g.has_edge(u, v)).count() as f64).collect()),
        ];
        for (idx, got, want) in pairs {
            worst[idx] = worst[idx].max(common::max_abs_diff(&got, &want));
        }
        match centrality::pagerank(&g) {
            Ok(pr) => {
                pr_sum_err = pr_sum_err.max((pr.iter().sum::<f64>() - 1.0).abs());
                worst[4] = worst[4].max(common::max_abs_diff(&pr, &common::dense_pagerank(&g, centrality::PAGERANK_DAMPING)));
            }
            Err(e) => errors.push(e.to_string()),
        }
        let (lambda, eig_oracle) = common::dense_eigen(&g);
        match centrality::eigenvector(&g) {
            Ok(eig) => worst[5] = worst[5].max(common::max_abs_diff(&eig, &eig_oracle)),
            Err(e) => errors.push(e.to_string()),
        }
        match centrality::katz(&g) {
            Ok(k) => worst[6] = worst[6].max(common::max_abs_diff(&k, &common::dense_katz(&g, centrality::katz_alpha(lambda)))),
            Err(e) => errors.push(e.to_string()),
        }
    }
    // Combinatorial measures: equal up to float summation order.
    let exact_ok = worst[..4].iter().all(|&w| w <= 1e-12);
    let numeric_ok = worst[4..].iter().all(|&w| w <= 1e-6) && pr_sum_err <= 1e-9;
    gated(
        exact_ok && numeric_ok && errors.is_empty(),
        format!(
            "100 graphs; max |diff| BC {:.1e} CC {:.1e} CLC {:.1e} DEG {:.1e} (tol 1e-12), PR {:.1e} EIG {:.1e} KATZ {:.1e} (tol 1e-6), |ΣPR-1| {:.1e}; errors {:?}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5], worst[6], pr_sum_err, errors.first()
        ),
    )
}

fn c6_probe_semantics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut steps = 0usize;
    let mut failures = Vec::new();
    for seq in 0..10_000 {
        let n = rng.random_range(2..=20);
        let g = Arc::new(common::gnp(n, rng.random_range(0.05..0.5), &mut rng));
        let seed_count = rng.random_range(1..=2.min(n));
        let mut nodes: Vec<NodeId> = (0..n).collect();
        nodes.shuffle(&mut rng);
        let mut view = IncompleteView::new(g, &nodes[..seed_count]).unwrap();
        let mut seen = view.observed_node_count();
        loop {
            let grays = view.gray_nodes();
            if grays.is_empty() || rng.random_bool(0.1) {
                break;
            }
            let u = grays[rng.random_range(0..grays.len())];
            let gained = view.probe(u).unwrap();
            steps += 1;
            let ok = view.check_invariants().is_ok() && view.observed_node_count() == seen + gained;
            seen = view.observed_node_count();
            if !ok {
                failures.push(format!("sequence {seq}"));
                break;
            }
        }
    }

    // Order invariance over all permutations of a legal probe set.
    let mut perm_checks = 0usize;
    let mut perm_failures = 0usize;
    for _ in 0..300 {
        let n = rng.random_range(3..=10);
        let g = Arc::new(common::gnp(n, rng.random_range(0.2..0.6), &mut rng));
        let view = IncompleteView::new(g, &[rng.random_range(0..n)]).unwrap();
        let mut walk = view.clone();
        let mut set = Vec::new();
        for _ in 0..rng.random_range(1..=4) {
            let grays = walk.gray_nodes();
            if grays.is_empty() {
                break;
            }
            let u = grays[rng.random_range(0..grays.len())];
            walk.probe(u).unwrap();
            set.push(u);
        }
        let reference = view.evaluate_sequence(&set).unwrap().total_new;
        for perm in permutations(&set) {
            if let Ok(trace) = view.evaluate_sequence(&perm) {
                perm_checks += 1;
                if trace.total_new != reference {
                    perm_failures += 1;
                }
            }
        }
    }
    gated(
        failures.is_empty() && perm_failures == 0,
        format!(
            "10000 random sequences, {steps} probes checked by full recomputation, {} failures; {perm_checks} legal permutations, {perm_failures} with a different total",
            failures.len()
        ),
    )
}

fn permutations(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

fn random_view<R: Rng>(rng: &mut R) -> IncompleteView {
    let n = rng.random_range(30..=80);
    let g = Arc::new(common::p2p_like(n, 2, 0.5, rng));
    let target = rng.random_range(3..=n / 3);
    bfs_sample(&g, target, rng).unwrap().view
}

fn c7_learning() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // (a) labels 2·deg + 1 on features taken from real views.
    let mut samples = Vec::new();
    while samples.len() < 200 {
        let view = random_view(&mut rng);
        let obs = probe_lab::features::ObservedGraph::from_view(&view);
        for (node, fv) in probe_lab::features::gray_feature_table(&obs, Default::default()).unwrap() {
            let label = 2.0 * fv.deg() + 1.0;
            samples.push(TrainingSample { features: fv, label, sample_id: 0, node });
        }
    }
    let lin = train_linear(&samples, 1).unwrap();
    let worst = samples.iter().map(|s| (lin.score(&s.features) - s.label).abs()).fold(0.0, f64::max);
    let a = worst < 1e-6;

    // (b) a pure-degree model probes exactly like DEG.
    let mut w = [0.0; 11];
    w[6] = 1.0;
    let degree_model = Model::linear_raw(1, 0.0, w);
    let mut same = 0;
    for _ in 0..50 {
        let view = random_view(&mut rng);
        let k = 10;
        let t1 = model_prober(&mut view.clone(), &degree_model, k).unwrap();
        let t2 = metric_prober(&mut view.clone(), Metric::Degree, k).unwrap();
        same += usize::from(t1.nodes() == t2.nodes());
    }
    let b = same == 50;

    // (c) separable pairs ordered by one standardized feature, both orientations.
    let point = |i: usize| {
        let mut f = [0.0; 11];
        f[6] = i as f64;
        f[3] = (i as f64 * 0.7).sin();
        FeatureVector(f)
    };
    let mut pairs = Vec::new();
    for x in 0..15 {
        for y in 0..15 {
            if x != y {
                pairs.push(PairSample { u: point(x), v: point(y), label: u8::from(x > y), sample_id: 0 });
            }
        }
    }
    let (_, report) = train_logistic_traced(&pairs, 1).unwrap();
    let decreasing = report.losses.windows(2).all(|w| w[1] < w[0]);
    let c = decreasing && report.accuracy == 1.0;

    // (d) label monotone in h.
    let mut triples = 0;
    let mut violations = Vec::new();
    while triples < 1000 {
        let view = random_view(&mut rng);
        let grays = view.gray_nodes();
        if grays.is_empty() {
            continue;
        }
        let u = grays[rng.random_range(0..grays.len())];
        let labels: Vec<usize> = (1..=4).map(|h| label_benefit(&view, u, h).unwrap()).collect();
        triples += 1;
        if labels.windows(2).any(|w| w[1] < w[0]) {
            violations.push(labels);
        }
    }
    let d = violations.is_empty();

    gated(
        a && b && c && d,
        format!(
            "(a) max residual {worst:.1e} (tol 1e-6): {a}; (b) identical DEG traces {same}/50: {b}; (c) {} epochs, strictly decreasing loss {decreasing}, accuracy {:.3}: {c}; (d) {triples} (view, u) label sequences over h=1..4, {} non-monotone {:?}: {d}",
            report.epochs,
            report.accuracy,
            violations.len(),
            violations.first()
        ),
    )
}

fn c8_end_to_end() -> Outcome {
    let full = std::env::var("PROBE_LAB_FULL_E2E").is_ok_and(|v| v == "1");
    // Uniform attachment keeps clustering near zero, as in p2p overlays.
    // Full scale matches a ~6k-node overlay with 50 validation samples.
    let (n, train_samples, samples, budget) = if full { (6300, 100, 50, 300) } else { (3000, 30, 6, 300) };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let reference = Arc::new(common::p2p_like(n, 3, 0.0, &mut rng));
    let validation = Arc::new(common::p2p_like(n, 3, 0.0, &mut rng));

    let config = SampleConfig { sample_count: train_samples, rng_seed: 80, ..Default::default() };
    let mut options = DatasetOptions::new(3);
    options.pairs = false;
    let set = build_training_set(&reference, &config, options).unwrap();
    let model = train_linear(&set.points, 3).unwrap();

    let exp = ExperimentConfig {
        strategies: vec![Strategy::Metric(Metric::Degree), Strategy::LinReg],
        budgets: vec![1, budget],
        validation_samples: samples,
        validation_frac: 0.05,
        seed: 81,
        ..Default::default()
    };
    let data = [Dataset { name: "p2p-synthetic".into(), graph: validation }];
    let rows = run_experiment(&data, &exp, &[model]).unwrap();
    let mean = |s: Strategy| {
        let v: Vec<f64> = rows.iter().filter(|r| r.strategy == s && r.budget == budget).map(|r| r.new_nodes as f64).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let deg = mean(Strategy::Metric(Metric::Degree));
    let lin = mean(Strategy::LinReg);
    Outcome {
        pass: lin >= deg,
        gated: false,
        detail: format!(
            "{} scale, synthetic p2p-like graphs (n={n}), {} training points; mean new nodes at k={budget} over {samples} views: LINREG(h=3) {lin:.1}, DEG {deg:.1}, ratio {:.3}",
            if full { "full" } else { "reduced" },
            set.points.len(),
            lin / deg
        ),
    }
}

fn c9_determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = common::p2p_like(400, 2, 0.5, &mut rng);
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("g.txt");
    let mut buf = Vec::new();
    g.write_edge_list(&mut buf).unwrap();
    std::fs::write(&graph_path, buf).unwrap();

    // Library level, different pool widths.
    let data = [Dataset { name: "g".into(), graph: Arc::new(g) }];
    let mut config = ExperimentConfig {
        strategies: ["RAND", "DEG", "TADA", "NAIVE", "GREEDY-BATCH", "CLC"].iter().map(|s| s.parse().unwrap()).collect(),
        budgets: vec![1, 5, 20],
        validation_samples: 6,
        validation_frac: 0.05,
        seed: 99,
        ..Default::default()
    };
    let mut csv = Vec::new();
    for threads in [1, 2, 1] {
        config.threads = Some(threads);
        let mut out = Vec::new();
        write_csv(&run_experiment(&data, &config, &[]).unwrap(), &mut out).unwrap();
        csv.push(out);
    }
    let lib_ok = csv.windows(2).all(|w| w[0] == w[1]);

    // Through the CLI.
    let exe = env!("CARGO_BIN_EXE_probe-lab");
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.csv"));
        let status = Command::new(exe)
            .args(["experiment", "--dataset"])
            .arg(&graph_path)
            .args(["--strategies", "RAND,DEG,TADA-H", "--budgets", "1,10", "--samples", "5", "--seed", "3", "--out"])
            .arg(&out)
            .args(["--summary"])
            .arg(dir.path().join("summary.md"))
            .env("PROBE_LAB_THREADS", threads)
            .status()
            .unwrap();
        if !status.success() {
            return gated(false, format!("CLI exited with {status}"));
        }
        outputs.push(std::fs::read(out).unwrap());
    }
    let cli_ok = outputs[0] == outputs[1] && !outputs[0].is_empty();
    gated(
        lib_ok && cli_ok,
        format!("library CSV identical over 3 runs: {lib_ok} ({} bytes); CLI CSV identical over 2 runs: {cli_ok}", csv[0].len()),
    )
}

