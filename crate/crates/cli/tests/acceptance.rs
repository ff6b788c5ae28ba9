//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use bis_core::exact::{exact_count, exact_count_via_ratios, exact_ratio};
use bis_core::fptas::{self, CountOptions, DepthBudget, ALPHA};
use bis_core::generate::{gen_complete, gen_cycle, gen_path, gen_random, RightDegreeStyle};
use bis_core::{decay, format, BipartiteGraph, VertexRef};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const BIS: &str = env!("CARGO_BIN_EXE_bis");

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn bis(args: &[&str]) -> Output {
    Command::new(BIS).args(args).output().expect("bis binary runs")
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

/// Counts independent sets by testing every vertex subset.
fn naive_count(graph: &BipartiteGraph) -> u64 {
    let (n, m) = (graph.left_count(), graph.right_count());
    let adj: Vec<u64> = (0..n)
        .map(|u| graph.left_neighbors(u).iter().fold(0u64, |a, &v| a | 1 << v))
        .collect();
    let mut total = 0u64;
    for left in 0u64..1 << n {
        let mut blocked = 0u64;
        for (u, mask) in adj.iter().enumerate() {
            if left >> u & 1 == 1 {
                blocked |= mask;
            }
        }
        // Every right subset avoiding `blocked` completes `left`.
        total += 1u64 << (m as u32 - blocked.count_ones());
    }
    total
}

/// Brute force over the full `2^(n+m)` vertex set, for the tiny families.
fn naive_count_all_subsets(graph: &BipartiteGraph) -> u64 {
    let (n, m) = (graph.left_count(), graph.right_count());
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    (0u64..1 << (n + m))
        .filter(|s| edges.iter().all(|&(u, v)| !(s >> u & 1 == 1 && s >> (n + v) & 1 == 1)))
        .count() as u64
}

fn z(graph: &BipartiteGraph) -> BigUint {
    exact_count(&graph.view()).expect("small graph").0
}

fn random_graph(rng: &mut ChaCha8Rng, max_total: usize) -> BipartiteGraph {
    let n = rng.random_range(0..=max_total);
    let m = rng.random_range(0..=max_total - n);
    let p: f64 = rng.random_range(0.0..1.0);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..m).map(move |v| (u, v)))
        .filter(|_| rng.random_bool(p))
        .collect();
    BipartiteGraph::build(n, m, edges).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..200 {
        let g = random_graph(&mut rng, 16);
        let naive = naive_count(&g);
        check(z(&g) == BigUint::from(naive), || format!("graph {k}: exact != naive {naive}"))?;
    }
    for a in 0..=5u32 {
        for b in 0..=5u32 {
            let closed = (1u64 << a) + (1u64 << b) - 1;
            let g = gen_complete(a as usize, b as usize);
            check(z(&g) == BigUint::from(closed), || format!("K_{{{a},{b}}} != {closed}"))?;
            check(naive_count_all_subsets(&g) == closed, || format!("naive K_{{{a},{b}}}"))?;
        }
    }
    let p6 = gen_path(6);
    let c6 = gen_cycle(6).unwrap();
    check(naive_count_all_subsets(&p6) == 21 && z(&p6) == BigUint::from(21u32), || "P6 != 21".into())?;
    check(naive_count_all_subsets(&c6) == 18 && z(&c6) == BigUint::from(18u32), || "C6 != 18".into())?;
    for k in 0..=14 {
        let g = gen_path(k);
        check(z(&g) == BigUint::from(naive_count_all_subsets(&g)), || format!("P{k}"))?;
    }
    for len in (4..=14).step_by(2) {
        let g = gen_cycle(len).unwrap();
        check(z(&g) == BigUint::from(naive_count_all_subsets(&g)), || format!("C{len}"))?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("200 random graphs, K_a,b for a,b <= 5, paths and cycles in {:.2?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..50 {
        let g = random_graph(&mut rng, 14);
        let direct = z(&g);
        for t in 0..3 {
            let mut order: Vec<usize> = (0..g.left_count()).collect();
            order.shuffle(&mut rng);
            let via = exact_count_via_ratios(&g, &order).map_err(|e| e.to_string())?;
            check(via.0 == direct, || format!("graph {k} ordering {t}: {} != {direct}", via.0))?;
        }
    }
    Ok("50 graphs x 3 orderings agree exactly".into())
}

/// Seeded suite shared by criteria 3 to 5.
fn decay_suite() -> Vec<BipartiteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..100u64)
        .map(|k| {
            let n = rng.random_range(1..=10);
            let m = rng.random_range(1..=10);
            let style = if k % 3 == 0 {
                RightDegreeStyle::Heavy
            } else {
                RightDegreeStyle::Bounded(rng.random_range(1..=10))
            };
            gen_random(n, m, 5, style, 1000 + k).unwrap()
        })
        .collect()
}

fn criterion_3(suite: &[BipartiteGraph]) -> Outcome {
    let start = Instant::now();
    let (mut max_phi_slack, mut max_ratio_slack, mut checked) = (f64::MIN, f64::MIN, 0usize);
    let heavy = suite.iter().filter(|g| g.max_degrees().1 > 5).count();
    for (k, g) in suite.iter().enumerate() {
        let view = g.view();
        for u in 0..g.left_count() {
            let root = VertexRef::left(u);
            let exact = exact_ratio(&view, root).unwrap().to_f64();
            let phi_exact = decay::phi(exact).unwrap();
            for depth in 0..=10 {
                let est = fptas::estimate_ratio(&view, root, DepthBudget(depth)).unwrap().value;
                let phi_err = (decay::phi(est).unwrap() - phi_exact).abs();
                let ratio_err = (est - exact).abs();
                let phi_bound = 12.0 * ALPHA.powi(depth as i32) + 1e-9;
                let ratio_bound = 24.0 * std::f64::consts::LN_2 * ALPHA.powi(depth as i32) + 1e-9;
                check(phi_err <= phi_bound && ratio_err <= ratio_bound, || {
                    format!("graph {k} root {u} L={depth}: phi err {phi_err}, ratio err {ratio_err}")
                })?;
                max_phi_slack = max_phi_slack.max(phi_err / phi_bound);
                max_ratio_slack = max_ratio_slack.max(ratio_err / ratio_bound);
                checked += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{checked} (root, L) pairs on 100 graphs ({heavy} with right degree > 5), worst error/bound {max_phi_slack:.3} (phi), {max_ratio_slack:.3} (ratio), {:.2?}",
        start.elapsed()
    ))
}

fn criterion_4(suite: &[BipartiteGraph]) -> Outcome {
    let mut roots = 0;
    for (k, g) in suite.iter().enumerate() {
        let view = g.view();
        for u in 0..g.left_count() {
            let root = VertexRef::left(u);
            let Some(needed) = fptas::saturation_depth(&view, root, 30).unwrap() else {
                continue;
            };
            let exact = exact_ratio(&view, root).unwrap().to_f64();
            for depth in [needed, 30] {
                let est = fptas::estimate_ratio(&view, root, DepthBudget(depth)).unwrap().value;
                let rel = (est / exact - 1.0).abs();
                check(rel <= 1e-12, || format!("graph {k} root {u} L={depth}: relative error {rel:e}"))?;
            }
            roots += 1;
        }
    }
    check(roots > 0, || "no root saturates within depth 30".into())?;
    Ok(format!("{roots} roots with full tree depth <= 30 match to 1e-12"))
}

fn criterion_5(suite: &[BipartiteGraph]) -> Outcome {
    let mut worst = 0.0f64;
    for (k, g) in suite.iter().enumerate() {
        let lc = fptas::count_with_depth(g, DepthBudget(12), &CountOptions::default()).unwrap();
        let ln_exact = bis_core::ExactCount(z(g)).ln();
        let rel = (lc.ln_z - ln_exact).exp_m1().abs();
        check(rel <= 0.05, || format!("graph {k}: |Z^/Z - 1| = {rel}"))?;
        worst = worst.max(rel);
    }
    for n in [1usize, 2, 10, 100, 1000] {
        for eps in [0.9, 0.5, 0.1, 0.01] {
            let closed = ((eps / (48.0 * n as f64 * std::f64::consts::LN_2)).ln() / ALPHA.ln()).ceil() as u32;
            let got = fptas::depth_for_epsilon(n, eps).unwrap().0;
            check(got == closed, || format!("depth_for_epsilon({n}, {eps}) = {got}, closed form {closed}"))?;
        }
    }
    Ok(format!("worst |Z^/Z - 1| at depth 12 is {worst:.3e}; depth formula matches closed form"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let out = bis(&["verify-decay", "--json"]);
    let elapsed = start.elapsed();
    check(out.status.code() == Some(0), || format!("exit status {:?}", out.status.code()))?;
    let suite: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let cases = suite["cases"].as_array().ok_or("no cases")?;
    let case = |d1: u64, d2: u64| {
        cases
            .iter()
            .find(|c| c["case_id"][0] == d1 && c["case_id"][1] == d2)
            .ok_or(format!("missing case ({d1},{d2})"))
    };
    for (d2, s_star) in [0.758669, 0.7691, 0.776043, 0.780104].into_iter().enumerate() {
        let c = case(4 - d2 as u64, d2 as u64)?;
        let s = c["s_star"].as_f64().unwrap();
        check((s - s_star).abs() <= 1e-3, || format!("d2={d2}: maximizer {s} vs {s_star}"))?;
    }
    for d2 in 0..=4 {
        let max = case(4 - d2, d2)?["max_value"].as_f64().unwrap();
        check(max < 1.0, || format!("max kappa_hat_4 for d2={d2} is {max}"))?;
    }
    let s = 0.782188f64;
    let f = (1.0 - s) * (s / (1.0 - s)).ln();
    check(f < 0.3, || format!("f(0.782188) = {f}"))?;
    for d2 in 0..=5 {
        let max = case(5 - d2, d2)?["max_value"].as_f64().unwrap();
        check(max < 3.0, || format!("max kappa_hat_5 for d2={d2} is {max}"))?;
    }
    let named = |name: &str| {
        suite["checks"]
            .as_array()
            .and_then(|cs| cs.iter().find(|c| c["name"] == name))
            .ok_or(format!("missing check {name}"))
    };
    let gamma = named("gamma_at_M_below_one_fifth")?["value"].as_f64().unwrap();
    check(gamma < 0.2 && (gamma - 0.192827331423).abs() < 1e-9, || format!("gamma(45) = {gamma}"))?;
    check(named("gamma_decreasing")?["passed"] == true, || "gamma not decreasing".into())?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("maximizers, case maxima and gamma(45) = {gamma:.9} reproduced in {elapsed:.2?}"))
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bis-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_graph(dir: &Path, name: &str, g: &BipartiteGraph) -> String {
    let path = dir.join(name);
    std::fs::write(&path, format::serialize(g)).unwrap();
    path.to_str().unwrap().to_owned()
}

fn criterion_7(dir: &Path) -> Outcome {
    let mut notes = Vec::new();
    for style in [RightDegreeStyle::Bounded(5), RightDegreeStyle::Heavy] {
        let g = gen_random(1000, 1000, 5, style, 7).unwrap();
        let file = write_graph(dir, &format!("big-{style}.txt"), &g);
        let start = Instant::now();
        let out = bis(&["count", &file, "--depth", "5"]);
        let elapsed = start.elapsed();
        check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let per_root = report["max_root_interior"].as_u64().unwrap();
        let total = report["nodes_interior"].as_u64().unwrap();
        let envelope = report["node_envelope"].as_f64().unwrap();
        check(
            envelope == fptas::NODE_ENVELOPE_C * 180f64.powi(5),
            || format!("envelope {envelope}"),
        )?;
        check(per_root as f64 <= envelope && total as f64 <= 1000.0 * envelope, || {
            format!("{style}: {per_root} nodes at one root, {total} total, envelope {envelope:e}")
        })?;
        within(elapsed, Duration::from_secs(60))?;
        notes.push(format!("{style}: {elapsed:.2?}, max {per_root} interior nodes per root"));
    }
    Ok(notes.join("; "))
}

fn strip_timing(text: &[u8]) -> String {
    let text = String::from_utf8_lossy(text);
    let key = "\"wall_time_ms\":";
    match text.find(key) {
        Some(at) => {
            let rest = &text[at + key.len()..];
            let end = rest.find([',', '}']).unwrap_or(rest.len());
            format!("{}{}", &text[..at], &rest[end..])
        }
        None => text.into_owned(),
    }
}

fn criterion_8(dir: &Path) -> Outcome {
    let g = gen_random(10, 9, 5, RightDegreeStyle::Heavy, 8).unwrap();
    let small = write_graph(dir, "det.txt", &g);
    let gen_out = dir.join("gen.txt");
    let gen_out = gen_out.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["exact", &small],
        vec!["count", &small, "--depth", "6"],
        vec!["count", &small, "--epsilon", "0.5"],
        vec!["compare", &small, "--depth", "4"],
        vec!["verify-decay", "--json", "--samples", "20000"],
        vec!["gen", "random", "--n", "50", "--m", "40", "--seed", "9", "--out", gen_out],
    ];
    for args in &runs {
        let first = bis(args);
        let first_file = args.contains(&"gen").then(|| std::fs::read(gen_out).unwrap());
        let second = bis(args);
        let second_file = args.contains(&"gen").then(|| std::fs::read(gen_out).unwrap());
        check(first.status.success(), || format!("{args:?} failed"))?;
        check(strip_timing(&first.stdout) == strip_timing(&second.stdout), || format!("{args:?} stdout differs"))?;
        check(first_file == second_file, || format!("{args:?} output file differs"))?;
    }
    Ok(format!("{} commands give identical output twice", runs.len()))
}

fn main() {
    let dir = scratch_dir();
    let suite = decay_suite();
    let criteria: Vec<Criterion> = vec![
        ("1 oracle soundness", Box::new(criterion_1)),
        ("2 telescoping identity", Box::new(criterion_2)),
        ("3 correlation decay bound", Box::new(|| criterion_3(&suite))),
        ("4 exactness at full depth", Box::new(|| criterion_4(&suite))),
        ("5 end-to-end accuracy", Box::new(|| criterion_5(&suite))),
        ("6 decay verification", Box::new(criterion_6)),
        ("7 scalability", Box::new(|| criterion_7(&dir))),
        ("8 determinism", Box::new(|| criterion_8(&dir))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
