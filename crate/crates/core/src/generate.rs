//! Seeded graph generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fptas::MAX_SAFE_DEGREE;
use crate::graph::BipartiteGraph;

/// Attempts for the heavy style before giving up on reaching a hub.
const HEAVY_RETRIES: u64 = 32;
/// Number of right hubs in the heavy style.
const HUBS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

fn invalid(msg: impl Into<String>) -> GenerateError {
    GenerateError::InvalidParams(msg.into())
}

/// How right-side degrees are shaped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RightDegreeStyle {
    /// No right vertex exceeds this degree.
    Bounded(usize),
    /// About half of all edges go to a few hubs.
    Heavy,
}

impl fmt::Display for RightDegreeStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RightDegreeStyle::Bounded(k) => write!(f, "bounded:{k}"),
            RightDegreeStyle::Heavy => write!(f, "heavy"),
        }
    }
}

impl FromStr for RightDegreeStyle {
    type Err = GenerateError;

    /// `heavy` or `bounded:<k>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "heavy" {
            return Ok(RightDegreeStyle::Heavy);
        }
        s.strip_prefix("bounded:")
            .and_then(|k| k.parse().ok())
            .map(RightDegreeStyle::Bounded)
            .ok_or_else(|| invalid(format!("unknown right-degree style `{s}`")))
    }
}

/// The right degree the heavy style must reach somewhere. A hub expects about
/// `n · delta / 12` edges, so half of that is reached on almost every attempt.
fn heavy_target(n: usize, m: usize, delta_u_max: usize) -> usize {
    if m == 0 {
        0
    } else {
        (n * delta_u_max / 24).min(20)
    }
}

/// Random graph whose left degrees are uniform in `[0, delta_u_max]`, with
/// neighbors drawn without replacement. Identical arguments give identical
/// graphs.
pub fn gen_random(
    n: usize,
    m: usize,
    delta_u_max: usize,
    style: RightDegreeStyle,
    seed: u64,
) -> Result<BipartiteGraph, GenerateError> {
    if delta_u_max > MAX_SAFE_DEGREE {
        return Err(invalid(format!(
            "delta_u_max = {delta_u_max} exceeds {MAX_SAFE_DEGREE}"
        )));
    }
    match style {
        RightDegreeStyle::Bounded(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(bounded(n, m, delta_u_max, k, &mut rng))
        }
        RightDegreeStyle::Heavy => {
            let target = heavy_target(n, m, delta_u_max);
            for attempt in 0..HEAVY_RETRIES {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(attempt);
                let g = heavy(n, m, delta_u_max, &mut rng);
                if g.max_degrees().1 >= target {
                    return Ok(g);
                }
            }
            Err(invalid(format!(
                "no right vertex reached degree {target} after {HEAVY_RETRIES} attempts"
            )))
        }
    }
}

fn bounded(n: usize, m: usize, delta: usize, cap: usize, rng: &mut ChaCha8Rng) -> BipartiteGraph {
    let mut right_degree = vec![0usize; m];
    let mut edges = Vec::new();
    for u in 0..n {
        let d = rng.random_range(0..=delta);
        let open: Vec<usize> = (0..m).filter(|&v| right_degree[v] < cap).collect();
        let d = d.min(open.len());
        for k in index::sample(rng, open.len(), d) {
            let v = open[k];
            right_degree[v] += 1;
            edges.push((u, v));
        }
    }
    BipartiteGraph::build(n, m, edges).expect("generated edges are distinct and in range")
}

fn heavy(n: usize, m: usize, delta: usize, rng: &mut ChaCha8Rng) -> BipartiteGraph {
    let hubs: Vec<usize> = index::sample(rng, m, HUBS.min(m)).into_vec();
    let mut edges = Vec::new();
    let mut chosen = Vec::with_capacity(delta);
    for u in 0..n {
        let d = rng.random_range(0..=delta).min(m);
        chosen.clear();
        while chosen.len() < d {
            let v = if rng.random_bool(0.5) {
                hubs[rng.random_range(0..hubs.len())]
            } else {
                rng.random_range(0..m)
            };
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        edges.extend(chosen.iter().map(|&v| (u, v)));
    }
    BipartiteGraph::build(n, m, edges).expect("generated edges are distinct and in range")
}

/// `K_{a,b}`.
pub fn gen_complete(a: usize, b: usize) -> BipartiteGraph {
    BipartiteGraph::build(a, b, (0..a).flat_map(|u| (0..b).map(move |v| (u, v))))
        .expect("complete graph edges are distinct")
}

/// Path on `k` vertices alternating left, right, left, ...
pub fn gen_path(k: usize) -> BipartiteGraph {
    let edges = (0..k.saturating_sub(1)).map(|i| {
        if i % 2 == 0 {
            (i / 2, i / 2)
        } else {
            (i.div_ceil(2), i / 2)
        }
    });
    BipartiteGraph::build(k.div_ceil(2), k / 2, edges).expect("path edges are distinct")
}

/// Cycle on `len` vertices; `len` must be even and at least 4.
pub fn gen_cycle(len: usize) -> Result<BipartiteGraph, GenerateError> {
    if len < 4 || len % 2 == 1 {
        return Err(invalid(format!("cycle length {len} must be even and at least 4")));
    }
    let half = len / 2;
    let edges = (0..half).flat_map(|i| [(i, i), ((i + 1) % half, i)]);
    Ok(BipartiteGraph::build(half, half, edges).expect("cycle edges are distinct"))
}
