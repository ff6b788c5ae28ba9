use std::fs;
use std::path::Path;
use std::time::Instant;

use bis_core::decay::{self, DecayParams, SuiteConfig};
use bis_core::exact::{self, ExactError};
use bis_core::format::{self, FormatError};
use bis_core::fptas::{self, CountOptions, DepthBudget, FptasError};
use bis_core::generate::{self, GenerateError, RightDegreeStyle};
use bis_core::report::{self, RunReport, HEURISTIC_NOTE};
use bis_core::{BipartiteGraph, VertexRef};
use sha2::{Digest, Sha256};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_GUARD: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

/// Hard node cap for `count --epsilon` unless overridden.
pub const DEFAULT_MAX_NODES: u64 = 1_000_000_000;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }

    fn guard(message: impl Into<String>) -> Self {
        CliError { code: EXIT_GUARD, message: message.into() }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::TooLarge { .. } => CliError::guard(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<FptasError> for CliError {
    fn from(e: FptasError) -> Self {
        match e {
            FptasError::DegreeTooLarge { .. } | FptasError::NodeBudgetExceeded(_) => {
                CliError::guard(e.to_string())
            }
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<GenerateError> for CliError {
    fn from(e: GenerateError) -> Self {
        CliError::usage(e.to_string())
    }
}

pub fn load(path: &Path) -> Result<BipartiteGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    Ok(format::parse(&text)?)
}

pub fn digest(graph: &BipartiteGraph) -> String {
    hex::encode(Sha256::digest(format::serialize(graph).as_bytes()))
}

fn base_report(echo: Vec<String>, graph: &BipartiteGraph) -> RunReport {
    let mut r = RunReport::new(echo);
    r.input_digest = Some(digest(graph));
    r.n = Some(graph.left_count());
    r.m = Some(graph.right_count());
    r.edges = Some(graph.edge_count());
    r
}

fn emit(report: &RunReport) -> Result<(), CliError> {
    let json = report::to_json(report).map_err(|e| CliError::usage(e.to_string()))?;
    println!("{json}");
    Ok(())
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn exact(path: &Path, cap: usize, echo: Vec<String>) -> Result<(), CliError> {
    let graph = load(path)?;
    let start = Instant::now();
    let z = exact::exact_count_with_cap(&graph.view(), cap)?;
    let mut r = base_report(echo, &graph);
    r.z_exact = Some(z.to_string());
    r.ln_z_exact = Some(z.ln());
    r.wall_time_ms = elapsed_ms(start);
    eprintln!("Z = {z}");
    emit(&r)
}

pub fn count(
    path: &Path,
    epsilon: Option<f64>,
    depth: Option<u32>,
    allow_unsafe: bool,
    max_nodes: Option<u64>,
    echo: Vec<String>,
) -> Result<(), CliError> {
    let graph = load(path)?;
    let start = Instant::now();
    let (oriented, _) = graph.orient();
    let mut r = base_report(echo, &graph);
    let (depth, max_nodes) = match (epsilon, depth) {
        (Some(eps), _) => {
            let depth = fptas::depth_for_epsilon(oriented.left_count(), eps)?;
            let estimate = fptas::estimated_nodes(oriented.left_count(), depth);
            let cap = max_nodes.unwrap_or(DEFAULT_MAX_NODES);
            eprintln!(
                "epsilon {eps}: depth L = {}, worst-case node estimate {estimate:.3e}, abort after {cap} nodes",
                depth.0
            );
            r.depth_mode = Some("epsilon".into());
            r.epsilon = Some(eps);
            (depth, Some(cap))
        }
        (None, Some(d)) => {
            r.depth_mode = Some("heuristic".into());
            r.note = Some(HEURISTIC_NOTE.into());
            (DepthBudget(d), max_nodes)
        }
        (None, None) => return Err(CliError::usage("one of --epsilon or --depth is required")),
    };
    let options = CountOptions { allow_unsafe, max_nodes };
    let lc = fptas::count_with_depth(&graph, depth, &options)?;
    r.swapped = Some(lc.swapped);
    r.depth = Some(lc.depth.0);
    r.ln_z = Some(lc.ln_z);
    r.nodes_interior = Some(lc.stats.interior);
    r.nodes_base = Some(lc.stats.base);
    r.max_root_interior = Some(lc.max_root_interior);
    r.node_envelope = Some(fptas::node_envelope(lc.depth));
    r.wall_time_ms = elapsed_ms(start);
    emit(&r)
}

/// Per-root comparison of the estimate against the exact ratio.
#[derive(Debug, Clone, Copy)]
pub struct RootComparison {
    pub estimate: f64,
    pub exact: f64,
    pub degree: usize,
}

pub fn compare_roots(
    graph: &BipartiteGraph,
    depth: DepthBudget,
    cap: usize,
) -> Result<Vec<RootComparison>, CliError> {
    let mut view = graph.view();
    let mut out = Vec::with_capacity(graph.left_count());
    for u in 0..graph.left_count() {
        let root = VertexRef::left(u);
        let est = fptas::estimate_ratio(&view, root, depth)?;
        let exact = exact::exact_ratio_with_cap(&view, root, cap)?.to_f64();
        out.push(RootComparison { estimate: est.value, exact, degree: est.degree });
        view = view.remove(&[root]).expect("root is live");
    }
    Ok(out)
}

pub fn compare(path: &Path, depth: u32, cap: usize, echo: Vec<String>) -> Result<(), CliError> {
    let graph = load(path)?;
    let start = Instant::now();
    let depth = DepthBudget(depth);
    let (oriented, swapped) = graph.orient();
    let z = exact::exact_count_with_cap(&oriented.view(), cap)?;
    let lc = fptas::estimate_log_count(&oriented, depth);
    let roots = compare_roots(&oriented, depth, cap)?;

    let phi = |x: f64| decay::phi(x).expect("ratios are positive");
    let max_phi = roots
        .iter()
        .map(|c| (phi(c.estimate) - phi(c.exact)).abs())
        .fold(0.0, f64::max);
    let max_ratio = roots.iter().map(|c| (c.estimate - c.exact).abs()).fold(0.0, f64::max);
    let in_range = roots
        .iter()
        .all(|c| c.estimate <= 1.0 && c.estimate >= 0.5f64.powi(c.degree as i32));

    let mut r = base_report(echo, &graph);
    r.swapped = Some(swapped);
    r.depth = Some(depth.0);
    r.depth_mode = Some("heuristic".into());
    r.note = Some(HEURISTIC_NOTE.into());
    r.ln_z = Some(lc.ln_z);
    r.z_exact = Some(z.to_string());
    r.ln_z_exact = Some(z.ln());
    r.relative_error = Some((lc.ln_z - z.ln()).exp_m1().abs());
    r.max_phi_error = Some(max_phi);
    r.max_ratio_error = Some(max_ratio);
    r.phi_error_bound = Some(depth.potential_bound());
    r.ratio_error_bound = Some(depth.ratio_bound());
    r.ratios_in_range = Some(in_range);
    r.nodes_interior = Some(lc.stats.interior);
    r.nodes_base = Some(lc.stats.base);
    r.wall_time_ms = elapsed_ms(start);
    emit(&r)
}

pub fn verify_decay(
    alpha: f64,
    branch_base: u64,
    samples: usize,
    seed: u64,
    json: bool,
) -> Result<(), CliError> {
    let params = DecayParams { alpha, branch_base, ..DecayParams::default() };
    let config = SuiteConfig { samples, seed };
    let suite = decay::verify_claims(&params, &config).map_err(|e| CliError::usage(e.to_string()))?;
    if json {
        println!("{}", report::to_json(&suite).map_err(|e| CliError::usage(e.to_string()))?);
    } else {
        println!("alpha = {alpha}, M = {branch_base}, samples = {samples}, seed = {seed}");
        println!("{:<10} {:>12} {:>14} {:>6}  status", "(d1,d2)", "s*", "max kappa_hat", "bound");
        for c in &suite.cases {
            println!(
                "{:<10} {:>12.6} {:>14.9} {:>6}  {}",
                format!("({},{})", c.case_id.0, c.case_id.1),
                c.s_star,
                c.max_value,
                c.bound,
                if c.bound_satisfied { "ok" } else { "FAIL" }
            );
        }
        println!();
        for c in &suite.checks {
            println!(
                "{:<36} value {:>+.9e}  bound {:>+.9e}  {}",
                c.name,
                c.value,
                c.bound,
                if c.passed { "ok" } else { "FAIL" }
            );
        }
    }
    match suite.first_failure() {
        None => {
            eprintln!("all decay checks passed");
            Ok(())
        }
        Some(f) => Err(CliError { code: EXIT_VERIFY, message: f.to_string() }),
    }
}

pub fn write_graph(graph: &BipartiteGraph, out: Option<&Path>) -> Result<(), CliError> {
    let text = format::serialize(graph);
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn gen_random(
    n: usize,
    m: usize,
    delta: usize,
    style: &str,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let style: RightDegreeStyle = style.parse()?;
    let graph = generate::gen_random(n, m, delta, style, seed)?;
    write_graph(&graph, out)
}

pub fn gen_cycle(len: usize, out: Option<&Path>) -> Result<(), CliError> {
    write_graph(&generate::gen_cycle(len)?, out)
}
