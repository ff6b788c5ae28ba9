//! Exact independent-set counts and likelihood ratios for small instances.
//!
//! Every subset of one side of a bipartite graph is independent, and once that
//! subset is fixed the vertices of the other side that have no neighbor in it
//! are free. So
//!
//! ```text
//! Z(G) = Σ_{S ⊆ A} 2^{|{b ∈ B : N(b) ∩ S = ∅}|}
//! ```
//!
//! where `A` is the smaller live side. The sum is accumulated as a histogram
//! of free-vertex counts, which keeps the inner loop in machine integers, and
//! subsets are walked in Gray-code order so each step touches one vertex.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{BipartiteGraph, GraphError, ResidualView, Side, VertexRef};

/// Default limit on the number of live vertices on the enumerated side.
pub const DEFAULT_CAP: usize = 30;

/// Subset walks shorter than this run on one thread.
const PARALLEL_THRESHOLD_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("exact oracle needs 2^{size} subsets, over the cap of 2^{cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("ordering is not a permutation of the {0} left vertices")]
    InvalidOrdering(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `Z(G)`, the number of independent sets. Always at least 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactCount(pub BigUint);

impl ExactCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Natural logarithm, accurate to double precision for any magnitude.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.0)
    }
}

impl std::fmt::Display for ExactCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `R(G, u) = Z(G − N[u]) / Z(G − u)`, kept as an unreduced integer pair.
#[derive(Debug, Clone)]
pub struct ExactRatio {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl ExactRatio {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone().into(), self.denominator.clone().into())
    }

    /// Nearest double to the true quotient (round-to-nearest).
    pub fn to_f64(&self) -> f64 {
        ratio_f64(&self.numerator, &self.denominator)
    }
}

impl PartialEq for ExactRatio {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl Eq for ExactRatio {}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // A 65-or-66-bit quotient with a sticky low bit rounds correctly when
    // narrowed to 53 bits.
    let shift = 65 + den.bits() as i64 - num.bits() as i64;
    let (q, r) = if shift >= 0 {
        (num << shift as u64).div_rem(den)
    } else {
        (num >> (-shift) as u64).div_rem(den)
    };
    let mut q = num_traits::ToPrimitive::to_u128(&q).expect("quotient fits in 66 bits");
    if !r.is_zero() || (shift < 0 && num.trailing_zeros().unwrap_or(0) < (-shift) as u64) {
        q |= 1;
    }
    q as f64 * (-(shift as f64)).exp2()
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap().ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(x >> shift)).unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact `Z` of the residual graph with the default cap.
pub fn exact_count(view: &ResidualView<'_>) -> Result<ExactCount, ExactError> {
    exact_count_with_cap(view, DEFAULT_CAP)
}

/// Exact `Z`, refusing when the smaller live side has more than `cap`
/// vertices.
pub fn exact_count_with_cap(view: &ResidualView<'_>, cap: usize) -> Result<ExactCount, ExactError> {
    let cap = cap.min(63);
    let left = view.live_count(Side::Left);
    let right = view.live_count(Side::Right);
    let (enum_side, size) = if left <= right {
        (Side::Left, left)
    } else {
        (Side::Right, right)
    };
    if size > cap {
        return Err(ExactError::TooLarge { size, cap });
    }
    let other = enum_side.opposite();
    let graph = view.base();

    let members: Vec<usize> = view.live(enum_side).collect();
    // Opposite vertices with no live neighbor are free in every term.
    let mut free_ids = Vec::new();
    let mut isolated_free = 0usize;
    let mut other_id = vec![usize::MAX; graph.count(other)];
    for b in view.live(other) {
        let has_live = view.live_neighbor_indices(VertexRef { side: other, index: b }).next().is_some();
        if has_live {
            other_id[b] = free_ids.len();
            free_ids.push(b);
        } else {
            isolated_free += 1;
        }
    }
    let adjacency: Vec<Vec<usize>> = members
        .iter()
        .map(|&a| {
            view.live_neighbor_indices(VertexRef { side: enum_side, index: a })
                .map(|b| other_id[b])
                .collect()
        })
        .collect();
    let coupled = free_ids.len();

    let histogram = subset_histogram(&adjacency, coupled);
    let mut total = BigUint::zero();
    for (free, &count) in histogram.iter().enumerate() {
        if count > 0 {
            total += BigUint::from(count) << free;
        }
    }
    Ok(ExactCount(total << isolated_free))
}

/// `hist[k]` = number of subsets of the enumerated side leaving exactly `k`
/// of the coupled opposite vertices free.
fn subset_histogram(adjacency: &[Vec<usize>], coupled: usize) -> Vec<u64> {
    let k = adjacency.len();
    let split = if k > PARALLEL_THRESHOLD_BITS {
        (k - PARALLEL_THRESHOLD_BITS).min(10)
    } else {
        0
    };
    let low = k - split;
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    (0u64..1 << split)
        .into_par_iter()
        .map(|prefix| {
            let mut hist = vec![0u64; coupled + 1];
            let mut blocked = vec![0u32; coupled];
            let mut free = coupled;
            let toggle = |bit: usize, on: bool, blocked: &mut [u32], free: &mut usize| {
                for &b in &adjacency[bit] {
                    if on {
                        if blocked[b] == 0 {
                            *free -= 1;
                        }
                        blocked[b] += 1;
                    } else {
                        blocked[b] -= 1;
                        if blocked[b] == 0 {
                            *free += 1;
                        }
                    }
                }
            };
            for hi in 0..split {
                if prefix >> hi & 1 == 1 {
                    toggle(low + hi, true, &mut blocked, &mut free);
                }
            }
            hist[free] += 1;
            let mut gray = 0u64;
            for step in 1u64..1 << low {
                let bit = step.trailing_zeros() as usize;
                gray ^= 1 << bit;
                toggle(bit, gray >> bit & 1 == 1, &mut blocked, &mut free);
                hist[free] += 1;
            }
            hist
        })
        .reduce(|| vec![0u64; coupled + 1], merge)
}

/// `R(G, u)` for a live vertex `u` of either side.
pub fn exact_ratio(view: &ResidualView<'_>, u: VertexRef) -> Result<ExactRatio, ExactError> {
    exact_ratio_with_cap(view, u, DEFAULT_CAP)
}

pub fn exact_ratio_with_cap(
    view: &ResidualView<'_>,
    u: VertexRef,
    cap: usize,
) -> Result<ExactRatio, ExactError> {
    let closed = view.remove_closed_neighborhood(u)?;
    let open = view.remove(&[u])?;
    Ok(ExactRatio {
        numerator: exact_count_with_cap(&closed, cap)?.0,
        denominator: exact_count_with_cap(&open, cap)?.0,
    })
}

/// `Z(G)` via the telescoping product `2^m ∏ (1 + R(G_i, u_i))` over the given
/// left-vertex ordering, in exact rational arithmetic.
pub fn exact_count_via_ratios(
    graph: &BipartiteGraph,
    ordering: &[usize],
) -> Result<ExactCount, ExactError> {
    let n = graph.left_count();
    let mut seen = vec![false; n];
    if ordering.len() != n || !ordering.iter().all(|&u| u < n && !std::mem::replace(&mut seen[u], true)) {
        return Err(ExactError::InvalidOrdering(n));
    }
    let mut product = BigRational::one();
    let mut view = graph.view();
    for &u in ordering {
        let u = VertexRef::left(u);
        let ratio = exact_ratio(&view, u)?;
        product *= BigRational::one() + ratio.to_rational();
        view = view.remove(&[u])?;
    }
    product *= BigRational::from_integer((BigUint::one() << graph.right_count()).into());
    debug_assert!(product.is_integer());
    let z = product
        .to_integer()
        .to_biguint()
        .expect("product of positive factors is positive");
    Ok(ExactCount(z))
}
