//! Depth-bounded two-layer recursion for likelihood ratios, and the counting
//! loop that assembles `ln Ẑ` from them.
//!
//! For a left vertex `u` with live neighbors `v_1 < … < v_d`, and for each
//! `v_i` its live neighbors `u_{i,1} < … < u_{i,w_i}` once `u, v_1, …, v_{i−1}`
//! are gone,
//!
//! ```text
//! R(G, u, L) = ∏_i ( 1 + ∏_j (1 + R(G_{i,j}, u_{i,j}, L'_i))^{-1} )^{-1}
//! L'_i       = max(0, L − ⌈log_45(w_i + 1)⌉)
//! R(G, u, 0) = 2^{−d}
//! ```
//!
//! Budget is charged per 45-ary level, so a right vertex of huge degree costs
//! several units of depth instead of blowing up the branching factor.
//!
//! Floating point: every combining step multiplies or inverts values in
//! `[1, 2]` or `[1/2, 1]`, so each step adds O(1) ulps of relative error and
//! the accumulated error after a few dozen levels stays within a few hundred
//! ulps, far below the `12·α^L` truncation error.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BipartiteGraph, GraphError, ResidualView, Side, VertexRef};

/// Per-level decay rate of the estimate error in potential space.
pub const ALPHA: f64 = 0.9616;
/// Base of the depth accounting for second-layer degrees.
pub const BRANCH_BASE: u64 = 45;
/// Largest left-side maximum degree for which accuracy is guaranteed.
pub const MAX_SAFE_DEGREE: usize = 5;
/// Worst-case branching per unit of depth (45 × first-layer degree 4).
pub const BRANCHING: f64 = 180.0;
/// Interior-node envelope constant: a root call at depth `L ≥ 1` visits at
/// most `NODE_ENVELOPE_C · 180^L` nodes with positive budget when `Δ_U ≤ 5`.
///
/// Non-root nodes have first-layer degree ≤ 4 and `w_i ≤ 45^{c_i} − 1` where
/// `c_i` is the budget charged, so by induction a non-root subtree at depth
/// `L` has at most `180^L` interior nodes; the root's fifth neighbor scales
/// that by `5/4 · 44/45` plus the root itself, below `1.25 · 180^L`.
pub const NODE_ENVELOPE_C: f64 = 1.25;

/// `|R̂ − R| ≤ RATIO_ERROR_CONSTANT · α^L` (equals `24 ln 2`).
pub const RATIO_ERROR_CONSTANT: f64 = 24.0 * std::f64::consts::LN_2;
/// `|φ(R̂) − φ(R)| ≤ POTENTIAL_ERROR_CONSTANT · α^L`.
pub const POTENTIAL_ERROR_CONSTANT: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FptasError {
    #[error("ratio estimation needs a left vertex, got {0}")]
    SideMismatch(VertexRef),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("both sides exceed maximum degree {MAX_SAFE_DEGREE} (Δ_U = {left}, Δ_V = {right})")]
    DegreeTooLarge { left: usize, right: usize },
    #[error("node budget of {0} exceeded")]
    NodeBudgetExceeded(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Recursion depth budget `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DepthBudget(pub u32);

impl DepthBudget {
    pub fn get(self) -> u32 {
        self.0
    }

    /// Budget left for the children of a right vertex with live degree `w`.
    pub fn charge(self, w: usize) -> DepthBudget {
        DepthBudget(self.0.saturating_sub(ceil_log_base(w as u64 + 1, BRANCH_BASE)))
    }

    /// `12·α^L`, the potential-space error bound.
    pub fn potential_bound(self) -> f64 {
        POTENTIAL_ERROR_CONSTANT * ALPHA.powi(self.0 as i32)
    }

    /// `24 ln 2·α^L`, the additive ratio error bound.
    pub fn ratio_bound(self) -> f64 {
        RATIO_ERROR_CONSTANT * ALPHA.powi(self.0 as i32)
    }
}

/// `⌈log_base(x)⌉` for `x ≥ 1`, in integer arithmetic.
pub fn ceil_log_base(x: u64, base: u64) -> u32 {
    assert!(base >= 2 && x >= 1);
    let mut k = 0;
    let mut power = 1u64;
    while power < x {
        power = power.saturating_mul(base);
        k += 1;
    }
    k
}

/// An estimate `R̂` of the likelihood ratio of a left vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub value: f64,
    /// Live degree of the root vertex; `2^{−degree} ≤ value ≤ 1`.
    pub degree: usize,
}

/// Node counters for one or more recursion trees.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionStats {
    /// Calls with a positive budget.
    pub interior: u64,
    /// Calls at budget 0.
    pub base: u64,
}

impl RecursionStats {
    pub fn total(&self) -> u64 {
        self.interior + self.base
    }

    fn add(&mut self, other: &RecursionStats) {
        self.interior += other.interior;
        self.base += other.base;
    }
}

/// `C·180^L`, the per-root interior node envelope.
pub fn node_envelope(depth: DepthBudget) -> f64 {
    NODE_ENVELOPE_C * BRANCHING.powi(depth.0 as i32)
}

/// Upper estimate of the interior nodes a full count over `n` roots visits.
pub fn estimated_nodes(n: usize, depth: DepthBudget) -> f64 {
    n as f64 * node_envelope(depth)
}

struct NodeLimit<'a> {
    used: &'a AtomicU64,
    max: u64,
}

/// `2^{-d}` for small `d`.
const HALF_POWERS: [f64; 8] = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125];

fn half_pow(d: u32) -> f64 {
    HALF_POWERS.get(d as usize).copied().unwrap_or_else(|| 0.5f64.powi(d as i32))
}

/// Depth-first evaluator over a private, mutable copy of a view. Removals are
/// undone on the way back up so siblings see the state their definition asks
/// for.
///
/// Live degrees are kept as counters (live neighbors of each vertex,
/// regardless of whether the vertex itself is removed), so base cases and
/// second-layer degrees are O(1).
struct Walker<'g, 'l> {
    view: ResidualView<'g>,
    left_degree: Vec<u32>,
    right_degree: Vec<u32>,
    stats: RecursionStats,
    limit: Option<NodeLimit<'l>>,
}

impl<'g, 'l> Walker<'g, 'l> {
    fn new(view: ResidualView<'g>, limit: Option<NodeLimit<'l>>) -> Self {
        let graph = view.base();
        let count = |v: VertexRef| view.live_neighbor_indices(v).count() as u32;
        let left_degree = (0..graph.left_count()).map(|u| count(VertexRef::left(u))).collect();
        let right_degree = (0..graph.right_count()).map(|v| count(VertexRef::right(v))).collect();
        Walker {
            view,
            left_degree,
            right_degree,
            stats: RecursionStats::default(),
            limit,
        }
    }

    fn tick(&mut self, nodes: u64) -> Result<(), FptasError> {
        if let Some(limit) = &self.limit {
            if limit.used.fetch_add(nodes, Ordering::Relaxed) + nodes > limit.max {
                return Err(FptasError::NodeBudgetExceeded(limit.max));
            }
        }
        Ok(())
    }

    fn remove_left(&mut self, u: usize) {
        self.view.mark_removed(VertexRef::left(u));
        for &v in self.view.base().left_neighbors(u) {
            self.right_degree[v] -= 1;
        }
    }

    fn restore_left(&mut self, u: usize) {
        self.view.restore(VertexRef::left(u));
        for &v in self.view.base().left_neighbors(u) {
            self.right_degree[v] += 1;
        }
    }

    fn remove_right(&mut self, v: usize) {
        self.view.mark_removed(VertexRef::right(v));
        for &u in self.view.base().right_neighbors(v) {
            self.left_degree[u] -= 1;
        }
    }

    fn restore_right(&mut self, v: usize) {
        self.view.restore(VertexRef::right(v));
        for &u in self.view.base().right_neighbors(v) {
            self.left_degree[u] += 1;
        }
    }

    fn ratio(&mut self, u: usize, depth: DepthBudget) -> Result<f64, FptasError> {
        if depth.0 == 0 {
            self.tick(1)?;
            self.stats.base += 1;
            return Ok(half_pow(self.left_degree[u]));
        }
        self.tick(1)?;
        self.stats.interior += 1;

        let graph = self.view.base();
        self.remove_left(u);
        let mut estimate = 1.0;
        let mut taken_right: Vec<usize> = Vec::new();
        let mut result = Ok(());
        // Sibling subtrees restore everything they remove, so the live status
        // of a not-yet-visited neighbor is the same as on entry.
        for &v in graph.left_neighbors(u) {
            if self.view.is_removed(VertexRef::right(v)) {
                continue;
            }
            let child_depth = depth.charge(self.right_degree[v] as usize);
            self.remove_right(v);
            taken_right.push(v);
            let inner = if child_depth.0 == 0 {
                self.leaf_product(v)
            } else {
                self.inner_product(v, child_depth)
            };
            match inner {
                Ok(inner) => estimate /= 1.0 + inner,
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        for &v in taken_right.iter().rev() {
            self.restore_right(v);
        }
        self.restore_left(u);
        result.map(|()| estimate)
    }

    /// `∏_j (1 + R(G_{i,j}, u_{i,j}, L'))^{-1}` for the live neighbors of `v`.
    fn inner_product(&mut self, v: usize, child_depth: DepthBudget) -> Result<f64, FptasError> {
        let graph = self.view.base();
        let mut inner = 1.0;
        let mut taken: Vec<usize> = Vec::new();
        let mut result = Ok(());
        for &x in graph.right_neighbors(v) {
            if self.view.is_removed(VertexRef::left(x)) {
                continue;
            }
            match self.ratio(x, child_depth) {
                Ok(r) => inner /= 1.0 + r,
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
            self.remove_left(x);
            taken.push(x);
        }
        for &x in taken.iter().rev() {
            self.restore_left(x);
        }
        result.map(|()| inner)
    }

    /// [`Self::inner_product`] when every child is a base case. A base case
    /// only looks at right-side removals, so the left siblings need not be
    /// removed one by one.
    fn leaf_product(&mut self, v: usize) -> Result<f64, FptasError> {
        let graph = self.view.base();
        // Leaves are grouped by degree: ∏ (1 + 2^{-d})^{-c_d}.
        let mut by_degree = [0i32; HALF_POWERS.len()];
        let mut inner = 1.0;
        let mut leaves = 0;
        for &x in graph.right_neighbors(v) {
            if self.view.is_removed(VertexRef::left(x)) {
                continue;
            }
            match by_degree.get_mut(self.left_degree[x] as usize) {
                Some(c) => *c += 1,
                None => inner /= 1.0 + half_pow(self.left_degree[x]),
            }
            leaves += 1;
        }
        for (d, &c) in by_degree.iter().enumerate() {
            if c > 0 {
                inner *= (1.0 + HALF_POWERS[d]).powi(-c);
            }
        }
        self.tick(leaves)?;
        self.stats.base += leaves;
        Ok(inner)
    }
}

fn check_root(view: &ResidualView<'_>, u: VertexRef) -> Result<(), FptasError> {
    if u.side != Side::Left {
        return Err(FptasError::SideMismatch(u));
    }
    view.live_degree(u)?;
    Ok(())
}

/// `R(G, u, L)` for a live left vertex `u` of the residual graph.
pub fn estimate_ratio(
    view: &ResidualView<'_>,
    u: VertexRef,
    depth: DepthBudget,
) -> Result<RatioEstimate, FptasError> {
    estimate_ratio_with_stats(view, u, depth).map(|(r, _)| r)
}

/// [`estimate_ratio`] together with the number of recursion nodes visited.
pub fn estimate_ratio_with_stats(
    view: &ResidualView<'_>,
    u: VertexRef,
    depth: DepthBudget,
) -> Result<(RatioEstimate, RecursionStats), FptasError> {
    check_root(view, u)?;
    let degree = view.live_degree_unchecked(u);
    let mut walker = Walker::new(view.clone(), None);
    let value = walker.ratio(u.index, depth)?;
    Ok((RatioEstimate { value, degree }, walker.stats))
}

/// Smallest budget at which [`estimate_ratio`] reproduces `R(G, u)` exactly,
/// i.e. every branch of the recursion reaches an isolated vertex before its
/// budget runs out. `None` if that exceeds `cap`.
pub fn saturation_depth(
    view: &ResidualView<'_>,
    u: VertexRef,
    cap: u32,
) -> Result<Option<u32>, FptasError> {
    check_root(view, u)?;
    let mut view = view.clone();
    Ok(saturation(&mut view, u.index, cap))
}

fn saturation(view: &mut ResidualView<'_>, u: usize, cap: u32) -> Option<u32> {
    let root = VertexRef::left(u);
    let graph = view.base();
    if view.live_degree_unchecked(root) == 0 {
        return Some(0);
    }
    if cap == 0 {
        return None;
    }
    view.mark_removed(root);
    let mut needed = 1;
    let mut taken_right = Vec::new();
    let mut result = Some(());
    'outer: for &v in graph.left_neighbors(u) {
        let vr = VertexRef::right(v);
        if view.is_removed(vr) {
            continue;
        }
        let cost = ceil_log_base(view.live_degree_unchecked(vr) as u64 + 1, BRANCH_BASE);
        view.mark_removed(vr);
        taken_right.push(v);
        let mut taken_left = Vec::new();
        for &x in graph.right_neighbors(v) {
            if view.is_removed(VertexRef::left(x)) {
                continue;
            }
            let child = if cost >= cap { None } else { saturation(view, x, cap - cost) };
            match child {
                Some(0) => {}
                Some(k) => needed = needed.max(cost + k),
                None => {
                    for &y in &taken_left {
                        view.restore(VertexRef::left(y));
                    }
                    result = None;
                    break 'outer;
                }
            }
            view.mark_removed(VertexRef::left(x));
            taken_left.push(x);
        }
        for &y in &taken_left {
            view.restore(VertexRef::left(y));
        }
    }
    for &v in &taken_right {
        view.restore(VertexRef::right(v));
    }
    view.restore(root);
    result.map(|_| needed)
}

/// Smallest `L` with `24 ln 2 · α^L ≤ ε / (2n)`.
pub fn depth_for_epsilon(n: usize, epsilon: f64) -> Result<DepthBudget, FptasError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(FptasError::InvalidEpsilon(epsilon));
    }
    let n = n.max(1) as f64;
    let target = epsilon / (2.0 * n * RATIO_ERROR_CONSTANT);
    let depth = (target.ln() / ALPHA.ln()).ceil().max(0.0);
    Ok(DepthBudget(depth as u32))
}

/// `ln Ẑ(G)` and how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogCount {
    pub ln_z: f64,
    pub n_ratios: usize,
    pub depth: DepthBudget,
    /// Whether the sides were exchanged to put the smaller maximum degree on
    /// the left.
    pub swapped: bool,
    pub stats: RecursionStats,
    /// Largest interior-node count of a single root ratio.
    pub max_root_interior: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountOptions {
    /// Run even if both sides have maximum degree above 5.
    pub allow_unsafe: bool,
    /// Abort once this many recursion nodes have been visited.
    pub max_nodes: Option<u64>,
}

/// `ln Ẑ = m ln 2 + Σ_i ln(1 + R̂(G − {u_1..u_{i−1}}, u_i, L))` over left
/// vertices in ascending order. The graph is used as oriented by the caller.
pub fn estimate_log_count(graph: &BipartiteGraph, depth: DepthBudget) -> LogCount {
    estimate_log_count_with(graph, depth, None).expect("no node limit was set")
}

/// [`estimate_log_count`] with an optional global node budget.
///
/// Root ratios are evaluated in parallel; each root has its own view and the
/// logarithms are summed in root order, so the result does not depend on
/// scheduling.
pub fn estimate_log_count_with(
    graph: &BipartiteGraph,
    depth: DepthBudget,
    max_nodes: Option<u64>,
) -> Result<LogCount, FptasError> {
    let n = graph.left_count();
    let used = AtomicU64::new(0);
    let per_root: Vec<Result<(f64, RecursionStats), FptasError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut view = graph.view();
            for earlier in 0..i {
                view.mark_removed(VertexRef::left(earlier));
            }
            let limit = max_nodes.map(|max| NodeLimit { used: &used, max });
            let mut walker = Walker::new(view, limit);
            let r = walker.ratio(i, depth)?;
            Ok((r, walker.stats))
        })
        .collect();

    let mut ln_z = graph.right_count() as f64 * std::f64::consts::LN_2;
    let mut stats = RecursionStats::default();
    let mut max_root_interior = 0;
    for root in per_root {
        let (r, s) = root?;
        ln_z += r.ln_1p();
        stats.add(&s);
        max_root_interior = max_root_interior.max(s.interior);
    }
    Ok(LogCount {
        ln_z,
        n_ratios: n,
        depth,
        swapped: false,
        stats,
        max_root_interior,
    })
}

/// Orients the graph, applies the degree guard, and counts at a fixed depth.
pub fn count_with_depth(
    graph: &BipartiteGraph,
    depth: DepthBudget,
    options: &CountOptions,
) -> Result<LogCount, FptasError> {
    let (oriented, swapped) = graph.orient();
    let (left, right) = oriented.max_degrees();
    if left > MAX_SAFE_DEGREE && !options.allow_unsafe {
        return Err(FptasError::DegreeTooLarge { left, right });
    }
    let mut count = estimate_log_count_with(&oriented, depth, options.max_nodes)?;
    count.swapped = swapped;
    Ok(count)
}

/// Approximates `Z` within a factor `1 ± ε` (when `min(Δ_U, Δ_V) ≤ 5`).
pub fn count_with_epsilon(
    graph: &BipartiteGraph,
    epsilon: f64,
    options: &CountOptions,
) -> Result<LogCount, FptasError> {
    let (oriented, _) = graph.orient();
    let depth = depth_for_epsilon(oriented.left_count(), epsilon)?;
    count_with_depth(graph, depth, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_ratio;

    fn complete(a: usize, b: usize) -> BipartiteGraph {
        BipartiteGraph::build(a, b, (0..a).flat_map(|u| (0..b).map(move |v| (u, v)))).unwrap()
    }

    fn ratio(g: &BipartiteGraph, u: usize, depth: u32) -> f64 {
        estimate_ratio(&g.view(), VertexRef::left(u), DepthBudget(depth)).unwrap().value
    }

    #[test]
    fn ceil_log() {
        assert_eq!(ceil_log_base(1, 45), 0);
        assert_eq!(ceil_log_base(2, 45), 1);
        assert_eq!(ceil_log_base(45, 45), 1);
        assert_eq!(ceil_log_base(46, 45), 2);
        assert_eq!(ceil_log_base(2025, 45), 2);
        assert_eq!(ceil_log_base(2026, 45), 3);
        assert_eq!(ceil_log_base(u64::MAX, 45), 12);
        assert_eq!(DepthBudget(5).charge(0), DepthBudget(5));
        assert_eq!(DepthBudget(5).charge(44), DepthBudget(4));
        assert_eq!(DepthBudget(5).charge(45), DepthBudget(3));
        assert_eq!(DepthBudget(1).charge(3000), DepthBudget(0));
    }

    #[test]
    fn small_ratios() {
        let isolated = BipartiteGraph::empty(1, 2);
        for depth in [0, 1, 7] {
            assert_eq!(ratio(&isolated, 0, depth), 1.0);
        }
        let star = complete(1, 3);
        assert_eq!(ratio(&star, 0, 0), 0.125);
        assert_eq!(ratio(&complete(1, 1), 0, 1), 0.5);
        // K_{1,5}: every right vertex has only the root as neighbor.
        assert_eq!(ratio(&complete(1, 5), 0, 1), 1.0 / 32.0);
    }

    #[test]
    fn k22_converges_to_two_fifths() {
        let g = complete(2, 2);
        for depth in 0..12 {
            let est = ratio(&g, 0, depth);
            let phi = |x: f64| x.ln_1p().ln();
            assert!((phi(est) - phi(0.4)).abs() <= DepthBudget(depth).potential_bound());
            if depth >= 4 {
                assert!((est - 0.4).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn right_root_rejected() {
        let g = complete(2, 2);
        assert_eq!(
            estimate_ratio(&g.view(), VertexRef::right(0), DepthBudget(3)),
            Err(FptasError::SideMismatch(VertexRef::right(0)))
        );
        let view = g.view().remove(&[VertexRef::left(0)]).unwrap();
        assert!(matches!(
            estimate_ratio(&view, VertexRef::left(0), DepthBudget(3)),
            Err(FptasError::Graph(GraphError::RemovedVertex(_)))
        ));
    }

    #[test]
    fn walker_restores_view() {
        let g = BipartiteGraph::build(4, 3, [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2), (3, 0)]).unwrap();
        let view = g.view().remove(&[VertexRef::left(3)]).unwrap();
        let mut walker = Walker::new(view.clone(), None);
        let degrees = (walker.left_degree.clone(), walker.right_degree.clone());
        walker.ratio(0, DepthBudget(6)).unwrap();
        assert_eq!(walker.view, view);
        assert_eq!((walker.left_degree, walker.right_degree), degrees);
    }

    #[test]
    fn depth_formula() {
        // smallest L with 24 ln 2 · α^L ≤ ε/(2n), by direct search
        let brute = |n: usize, eps: f64| {
            (0u32..)
                .find(|&l| RATIO_ERROR_CONSTANT * ALPHA.powi(l as i32) <= eps / (2.0 * n as f64))
                .unwrap()
        };
        assert_eq!(depth_for_epsilon(1, 0.9).unwrap(), DepthBudget(93));
        for n in [1, 2, 3, 10, 100, 1000, 123_456] {
            for eps in [0.999, 0.9, 0.5, 0.1, 0.01, 1e-6] {
                assert_eq!(depth_for_epsilon(n, eps).unwrap().0, brute(n, eps), "n={n} eps={eps}");
            }
        }
        assert!(depth_for_epsilon(1, 1.0 - 1e-12).unwrap().0 > 0);
        for n in [1, 5, 77, 4096] {
            let a = depth_for_epsilon(n, 0.3).unwrap().0;
            let b = depth_for_epsilon(2 * n, 0.3).unwrap().0;
            assert!(b >= a && b - a <= 18);
        }
        for bad in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            assert!(matches!(depth_for_epsilon(3, bad), Err(FptasError::InvalidEpsilon(_))));
        }
    }

    #[test]
    fn log_count_trivial_cases() {
        let lc = estimate_log_count(&BipartiteGraph::empty(0, 5), DepthBudget(3));
        assert_eq!(lc.ln_z, 5.0 * std::f64::consts::LN_2);
        assert_eq!(lc.n_ratios, 0);
        let lc = estimate_log_count(&BipartiteGraph::empty(3, 2), DepthBudget(0));
        assert!((lc.ln_z - 5.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn k33_at_depth_12() {
        let g = complete(3, 3);
        let lc = estimate_log_count(&g, DepthBudget(12));
        let bound = 3.0 * (1.0 + DepthBudget(12).ratio_bound()).ln();
        assert!((lc.ln_z - 15f64.ln()).abs() <= bound);
    }

    #[test]
    fn guards() {
        let g = complete(6, 6);
        assert_eq!(
            count_with_depth(&g, DepthBudget(1), &CountOptions::default()),
            Err(FptasError::DegreeTooLarge { left: 6, right: 6 })
        );
        let unsafe_opts = CountOptions { allow_unsafe: true, max_nodes: None };
        assert!(count_with_depth(&g, DepthBudget(1), &unsafe_opts).is_ok());
        let capped = CountOptions { allow_unsafe: true, max_nodes: Some(10) };
        assert_eq!(
            count_with_depth(&g, DepthBudget(3), &capped),
            Err(FptasError::NodeBudgetExceeded(10))
        );
        // Orientation brings the degree-1 side to the left.
        let star = complete(7, 1);
        let lc = count_with_depth(&star, DepthBudget(2), &CountOptions::default()).unwrap();
        assert!(!lc.swapped);
        let lc = count_with_depth(&star.swap_sides(), DepthBudget(2), &CountOptions::default()).unwrap();
        assert!(lc.swapped);
        assert!((lc.ln_z - 129f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn epsilon_counts() {
        let lc = count_with_epsilon(&BipartiteGraph::empty(4, 3), 0.5, &CountOptions::default()).unwrap();
        assert_eq!(lc.ln_z, 7.0 * std::f64::consts::LN_2);
        let lc = count_with_epsilon(&complete(1, 5), 0.1, &CountOptions::default()).unwrap();
        assert!((lc.ln_z - 33f64.ln()).abs() < 1e-14);
        assert!(lc.depth.0 > 90);
    }

    #[test]
    fn saturation_depth_gives_exact_ratio() {
        let g = BipartiteGraph::build(
            4,
            4,
            [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0), (0, 2)],
        )
        .unwrap();
        for u in 0..4 {
            let root = VertexRef::left(u);
            let depth = saturation_depth(&g.view(), root, 30).unwrap().unwrap();
            assert!(depth <= 4);
            let exact = exact_ratio(&g.view(), root).unwrap().to_f64();
            let est = ratio(&g, u, depth);
            assert!((est - exact).abs() <= 1e-12 * exact, "u={u} depth={depth}");
            assert_eq!(saturation_depth(&g.view(), root, depth - 1).unwrap(), None);
        }
        assert_eq!(saturation_depth(&complete(1, 1).view(), VertexRef::left(0), 5).unwrap(), Some(1));
    }
}
