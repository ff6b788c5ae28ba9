//! Bipartite graphs and residual views.
//!
//! A [`BipartiteGraph`] is immutable once built. Vertex removal is expressed
//! through a [`ResidualView`], an overlay of removed vertices on top of a
//! borrowed base graph, so that recursive algorithms never copy adjacency.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({left}, {right}) out of range for a {n}+{m} graph")]
    IndexOutOfRange {
        left: usize,
        right: usize,
        n: usize,
        m: usize,
    },
    #[error("duplicate edge ({left}, {right})")]
    DuplicateEdge { left: usize, right: usize },
    #[error("vertex {0} does not exist")]
    InvalidVertex(VertexRef),
    #[error("vertex {0} has already been removed")]
    RemovedVertex(VertexRef),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A vertex named by its side and its index within that side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

impl VertexRef {
    pub const fn left(index: usize) -> Self {
        VertexRef {
            side: Side::Left,
            index,
        }
    }

    pub const fn right(index: usize) -> Self {
        VertexRef {
            side: Side::Right,
            index,
        }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "left {}", self.index),
            Side::Right => write!(f, "right {}", self.index),
        }
    }
}

/// A bipartite graph `G = (U ⊎ V, E)` with `n = |U|` left and `m = |V|` right
/// vertices.
///
/// Both adjacency directions are stored and kept sorted, so every traversal
/// visits neighbors in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds the canonical graph on `n` left and `m` right vertices.
    ///
    /// Duplicate edges are rejected rather than merged.
    pub fn build(
        n: usize,
        m: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut left_adj = vec![Vec::new(); n];
        let mut right_adj = vec![Vec::new(); m];
        for (left, right) in edges {
            if left >= n || right >= m {
                return Err(GraphError::IndexOutOfRange { left, right, n, m });
            }
            left_adj[left].push(right);
            right_adj[right].push(left);
        }
        for (left, adj) in left_adj.iter_mut().enumerate() {
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge { left, right: w[0] });
            }
        }
        for adj in &mut right_adj {
            adj.sort_unstable();
        }
        Ok(BipartiteGraph {
            left_adj,
            right_adj,
        })
    }

    /// The graph with no edges.
    pub fn empty(n: usize, m: usize) -> Self {
        BipartiteGraph {
            left_adj: vec![Vec::new(); n],
            right_adj: vec![Vec::new(); m],
        }
    }

    pub fn left_count(&self) -> usize {
        self.left_adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.left_adj.iter().map(Vec::len).sum()
    }

    pub fn count(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_count(),
            Side::Right => self.right_count(),
        }
    }

    /// Sorted neighbors of a left vertex (right indices).
    pub fn left_neighbors(&self, left: usize) -> &[usize] {
        &self.left_adj[left]
    }

    /// Sorted neighbors of a right vertex (left indices).
    pub fn right_neighbors(&self, right: usize) -> &[usize] {
        &self.right_adj[right]
    }

    /// Neighbor indices of `v`; they live on the opposite side.
    pub fn neighbors(&self, v: VertexRef) -> &[usize] {
        match v.side {
            Side::Left => &self.left_adj[v.index],
            Side::Right => &self.right_adj[v.index],
        }
    }

    pub fn degree(&self, v: VertexRef) -> usize {
        self.neighbors(v).len()
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        v.index < self.count(v.side)
    }

    /// Edges in canonical order: ascending left index, then ascending right.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left_adj
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&v| (u, v)))
    }

    /// `(Δ_U, Δ_V)`, with 0 for an empty side.
    pub fn max_degrees(&self) -> (usize, usize) {
        let max = |adj: &[Vec<usize>]| adj.iter().map(Vec::len).max().unwrap_or(0);
        (max(&self.left_adj), max(&self.right_adj))
    }

    /// The same graph with left and right exchanged.
    pub fn swap_sides(&self) -> Self {
        BipartiteGraph {
            left_adj: self.right_adj.clone(),
            right_adj: self.left_adj.clone(),
        }
    }

    /// Orients the graph so that the left side carries the smaller maximum
    /// degree. Ties keep the input orientation. The flag reports whether the
    /// sides were exchanged.
    pub fn orient(&self) -> (Self, bool) {
        let (du, dv) = self.max_degrees();
        if du > dv {
            (self.swap_sides(), true)
        } else {
            (self.clone(), false)
        }
    }

    /// A view of the whole graph with nothing removed.
    pub fn view(&self) -> ResidualView<'_> {
        ResidualView::new(self)
    }
}

/// `G − U` for a removed set `U`, without materializing the subgraph.
///
/// [`ResidualView::remove`] is persistent: it returns a new view and leaves
/// `self` untouched. The crate-internal `mark_removed`/`restore` pair mutates
/// in place and is what the recursive estimators use on their private copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualView<'g> {
    base: &'g BipartiteGraph,
    removed_left: Vec<bool>,
    removed_right: Vec<bool>,
}

impl<'g> ResidualView<'g> {
    pub fn new(base: &'g BipartiteGraph) -> Self {
        ResidualView {
            base,
            removed_left: vec![false; base.left_count()],
            removed_right: vec![false; base.right_count()],
        }
    }

    pub fn base(&self) -> &'g BipartiteGraph {
        self.base
    }

    pub fn is_removed(&self, v: VertexRef) -> bool {
        match v.side {
            Side::Left => self.removed_left[v.index],
            Side::Right => self.removed_right[v.index],
        }
    }

    pub fn is_live(&self, v: VertexRef) -> bool {
        self.base.contains(v) && !self.is_removed(v)
    }

    pub(crate) fn removed_mask(&self, side: Side) -> &[bool] {
        match side {
            Side::Left => &self.removed_left,
            Side::Right => &self.removed_right,
        }
    }

    fn check(&self, v: VertexRef) -> Result<(), GraphError> {
        if !self.base.contains(v) {
            return Err(GraphError::InvalidVertex(v));
        }
        if self.is_removed(v) {
            return Err(GraphError::RemovedVertex(v));
        }
        Ok(())
    }

    /// Live vertices of one side, ascending.
    pub fn live(&self, side: Side) -> impl Iterator<Item = usize> + '_ {
        self.removed_mask(side)
            .iter()
            .enumerate()
            .filter(|(_, &gone)| !gone)
            .map(|(i, _)| i)
    }

    pub fn live_count(&self, side: Side) -> usize {
        self.removed_mask(side).iter().filter(|&&gone| !gone).count()
    }

    /// `N(v)` in the residual graph, ascending.
    pub fn live_neighbors(&self, v: VertexRef) -> Result<Vec<VertexRef>, GraphError> {
        self.check(v)?;
        let other = v.side.opposite();
        Ok(self.live_neighbor_indices(v)
            .map(|index| VertexRef { side: other, index })
            .collect())
    }

    pub(crate) fn live_neighbor_indices(&self, v: VertexRef) -> impl Iterator<Item = usize> + '_ {
        let mask = self.removed_mask(v.side.opposite());
        self.base
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&i| !mask[i])
    }

    pub fn live_degree(&self, v: VertexRef) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.live_degree_unchecked(v))
    }

    pub(crate) fn live_degree_unchecked(&self, v: VertexRef) -> usize {
        self.live_neighbor_indices(v).count()
    }

    /// A new view with `vs` additionally removed.
    pub fn remove(&self, vs: &[VertexRef]) -> Result<ResidualView<'g>, GraphError> {
        let mut child = self.clone();
        for &v in vs {
            child.check(v)?;
            child.mark_removed(v);
        }
        Ok(child)
    }

    /// `G − N[u]`: `u` and its live neighbors removed.
    pub fn remove_closed_neighborhood(&self, u: VertexRef) -> Result<ResidualView<'g>, GraphError> {
        let mut vs = self.live_neighbors(u)?;
        vs.push(u);
        self.remove(&vs)
    }

    pub(crate) fn mark_removed(&mut self, v: VertexRef) {
        match v.side {
            Side::Left => self.removed_left[v.index] = true,
            Side::Right => self.removed_right[v.index] = true,
        }
    }

    pub(crate) fn restore(&mut self, v: VertexRef) {
        match v.side {
            Side::Left => self.removed_left[v.index] = false,
            Side::Right => self.removed_right[v.index] = false,
        }
    }
}
