//! CSV tables for `bis bench`.

use std::path::Path;
use std::time::Instant;

use bis_core::exact;
use bis_core::fptas::{self, DepthBudget};
use bis_core::generate::{gen_random, RightDegreeStyle};

use crate::commands::{compare_roots, CliError};

const ERROR_GRAPHS: u64 = 20;
const ERROR_MAX_DEPTH: u32 = 12;
const SIZES: [usize; 5] = [50, 100, 200, 500, 1000];
const TIME_DEPTHS: [u32; 4] = [1, 2, 3, 4];

pub fn run(suite: &str, out: &Path, seed: u64) -> Result<(), CliError> {
    if !matches!(suite, "error-vs-depth" | "time-vs-size") {
        return Err(CliError::usage(format!(
            "unknown suite `{suite}`, expected error-vs-depth or time-vs-size"
        )));
    }
    let mut writer = csv::Writer::from_path(out)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", out.display())))?;
    if suite == "error-vs-depth" {
        error_vs_depth(&mut writer, seed)?;
    } else {
        time_vs_size(&mut writer, seed)?;
    }
    writer.flush().map_err(|e| CliError::usage(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::usage(e.to_string())
}

/// Small graphs, every depth up to [`ERROR_MAX_DEPTH`], observed error
/// against the exact oracle next to the proven bound.
fn error_vs_depth<W: std::io::Write>(w: &mut csv::Writer<W>, seed: u64) -> Result<(), CliError> {
    w.write_record([
        "graph", "n", "m", "style", "depth", "ln_z", "ln_z_exact", "relative_error",
        "max_ratio_error", "ratio_error_bound", "max_phi_error", "phi_error_bound",
    ])
    .map_err(csv_err)?;
    for g in 0..ERROR_GRAPHS {
        let style = if g % 2 == 0 { RightDegreeStyle::Heavy } else { RightDegreeStyle::Bounded(5) };
        let graph = gen_random(10, 10, 5, style, seed.wrapping_add(g))?;
        let (graph, _) = graph.orient();
        let z = exact::exact_count(&graph.view())?.ln();
        for depth in 0..=ERROR_MAX_DEPTH {
            let depth = DepthBudget(depth);
            let lc = fptas::estimate_log_count(&graph, depth);
            let roots = compare_roots(&graph, depth, exact::DEFAULT_CAP)?;
            let phi = |x: f64| bis_core::decay::phi(x).expect("ratios are positive");
            let max_ratio = roots.iter().map(|c| (c.estimate - c.exact).abs()).fold(0.0, f64::max);
            let max_phi = roots
                .iter()
                .map(|c| (phi(c.estimate) - phi(c.exact)).abs())
                .fold(0.0, f64::max);
            w.write_record([
                g.to_string(),
                graph.left_count().to_string(),
                graph.right_count().to_string(),
                style.to_string(),
                depth.0.to_string(),
                format!("{:.16e}", lc.ln_z),
                format!("{z:.16e}"),
                format!("{:.6e}", (lc.ln_z - z).exp_m1().abs()),
                format!("{max_ratio:.6e}"),
                format!("{:.6e}", depth.ratio_bound()),
                format!("{max_phi:.6e}"),
                format!("{:.6e}", depth.potential_bound()),
            ])
            .map_err(csv_err)?;
        }
    }
    Ok(())
}

/// Wall time and node counts as the graph grows.
fn time_vs_size<W: std::io::Write>(w: &mut csv::Writer<W>, seed: u64) -> Result<(), CliError> {
    w.write_record(["n", "m", "style", "depth", "nodes_interior", "nodes_base", "node_envelope", "wall_ms"])
        .map_err(csv_err)?;
    for &n in &SIZES {
        for style in [RightDegreeStyle::Bounded(5), RightDegreeStyle::Heavy] {
            let graph = gen_random(n, n, 5, style, seed)?;
            for &depth in &TIME_DEPTHS {
                let depth = DepthBudget(depth);
                let start = Instant::now();
                let lc = fptas::estimate_log_count(&graph, depth);
                let ms = start.elapsed().as_secs_f64() * 1e3;
                w.write_record([
                    n.to_string(),
                    n.to_string(),
                    style.to_string(),
                    depth.0.to_string(),
                    lc.stats.interior.to_string(),
                    lc.stats.base.to_string(),
                    format!("{:.3e}", fptas::estimated_nodes(n, depth)),
                    format!("{ms:.3}"),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    Ok(())
}
