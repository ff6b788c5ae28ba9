//! Numerical verification of the decay-rate bounds that drive the error
//! guarantee of [`crate::fptas`].
//!
//! Errors are measured through the potential `φ(x) = ln ln(1 + x)`. One
//! two-layer recursion step contracts potential-space error by the amortized
//! rate
//!
//! ```text
//! κ_d = h / ((1 + h) ln(1 + h)) · Σ_i α_i (1 − s_i) ln(s_i / (1 − s_i)),   h = ∏ s_i
//! ```
//!
//! with `s_i = (1 + ∏_j (1 + x_{i,j})^{-1})^{-1}` and
//! `α_i = α^{−⌈log_M(w_i + 1)⌉}`. Splitting the neighbors into light
//! (`w_i < M`) and heavy (`w_i ≥ M`) ones and symmetrizing the light ones
//! gives the one-variable bound
//!
//! ```text
//! κ̂(ŝ) = ŝ^{d1} d1 (1 − ŝ) ln(ŝ/(1 − ŝ)) / (α (2^{d2} + ŝ^{d1}) ln(1 + 2^{−d2} ŝ^{d1})) + d2/5
//! ```
//!
//! whose maxima over `ŝ ∈ [1/2, 1)` are located here by grid search plus
//! golden-section refinement. [`verify_claims`] runs the whole battery.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Uniform grid size for the first pass of the maximizer.
pub const GRID_POINTS: usize = 100_000;
/// Final bracket width of the golden-section refinement.
pub const REFINE_TOLERANCE: f64 = 1e-8;
/// Upper end of the `ŝ` domain; `κ̂ → d2/5` as `ŝ → 1`.
pub const S_HAT_MAX: f64 = 1.0 - 1e-9;
/// Slack allowed when comparing sampled `κ` against maximized `κ̂`.
pub const SAMPLE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecayError {
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{claim} violated at {witness}")]
pub struct VerificationFailure {
    pub claim: String,
    pub witness: String,
}

/// Constants of the decay analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub alpha: f64,
    /// Base `M` of the depth accounting.
    pub branch_base: u64,
    /// Range of the child ratios below the root.
    pub x_lo: f64,
    pub x_hi: f64,
}

impl Default for DecayParams {
    fn default() -> Self {
        DecayParams {
            alpha: 0.9616,
            branch_base: 45,
            x_lo: 1.0 / 16.0,
            x_hi: 1.0,
        }
    }
}

impl DecayParams {
    pub fn validate(&self) -> Result<(), DecayError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(DecayError::InvalidParams(format!("alpha = {} not in (0, 1)", self.alpha)));
        }
        if self.branch_base < 2 {
            return Err(DecayError::InvalidParams(format!("M = {} < 2", self.branch_base)));
        }
        if !(self.x_lo > 0.0 && self.x_lo < self.x_hi) {
            return Err(DecayError::InvalidParams(format!(
                "need 0 < x_lo < x_hi, got [{}, {}]",
                self.x_lo, self.x_hi
            )));
        }
        Ok(())
    }

    /// `α_i = α^{−⌈log_M(w + 1)⌉}` with the integer ceiling used by the
    /// algorithm.
    pub fn branch_weight(&self, w: u64) -> f64 {
        let k = crate::fptas::ceil_log_base(w.saturating_add(1), self.branch_base);
        self.alpha.powi(-(k as i32))
    }

    /// `α^{−log_M(w + 1) − 1}`, the real-valued upper bound of
    /// [`Self::branch_weight`].
    pub fn branch_weight_bound(&self, w: u64) -> f64 {
        let log_m = ((w as f64) + 1.0).ln() / (self.branch_base as f64).ln();
        self.alpha.powf(-log_m - 1.0)
    }

    pub fn is_heavy(&self, w: u64) -> bool {
        w >= self.branch_base
    }

    /// Smallest possible `s_i` for second-layer degree `w`:
    /// `(1 + x_lo)^w / (1 + (1 + x_lo)^w)`.
    pub fn s_lower_bound(&self, w: u64) -> f64 {
        let q = 1.0 / (1.0 + self.x_lo);
        1.0 / (1.0 + q.powf(w as f64))
    }
}

fn domain(what: &'static str, value: f64, domain: &'static str) -> DecayError {
    DecayError::Domain { what, value, domain }
}

/// `φ(x) = ln ln(1 + x)`.
pub fn phi(x: f64) -> Result<f64, DecayError> {
    if x.is_nan() || x <= 0.0 {
        return Err(domain("x", x, "(0, ∞)"));
    }
    Ok(x.ln_1p().ln())
}

/// `Φ(x) = φ'(x) = 1 / ((1 + x) ln(1 + x))`.
pub fn phi_prime(x: f64) -> Result<f64, DecayError> {
    if x.is_nan() || x <= 0.0 {
        return Err(domain("x", x, "(0, ∞)"));
    }
    Ok(1.0 / ((1.0 + x) * x.ln_1p()))
}

/// `φ^{-1}(y) = e^{e^y} − 1`.
pub fn phi_inverse(y: f64) -> f64 {
    y.exp().exp_m1()
}

/// `(φ^{-1})'(y) = (1 + x) ln(1 + x)` at `x = φ^{-1}(y)`.
pub fn phi_inverse_slope(y: f64) -> f64 {
    let x = phi_inverse(y);
    (1.0 + x) * x.ln_1p()
}

/// `s = (1 + ∏_j (1 + x_j)^{-1})^{-1}` for the child ratios of one right
/// vertex.
pub fn s_from_children(xs: &[f64]) -> f64 {
    let inner: f64 = xs.iter().map(|x| 1.0 / (1.0 + x)).product();
    1.0 / (1.0 + inner)
}

/// `1 − s` for the same child ratios, computed without cancellation.
pub fn s_complement_from_children(xs: &[f64]) -> f64 {
    let inner: f64 = xs.iter().map(|x| 1.0 / (1.0 + x)).product();
    inner / (1.0 + inner)
}

/// `(1 − s) ln(s / (1 − s))`.
pub fn light_term(s: f64) -> f64 {
    (1.0 - s) * (s / (1.0 - s)).ln()
}

/// `h / ((1 + h) ln(1 + h))`.
pub fn prefactor(h: f64) -> f64 {
    h / ((1.0 + h) * h.ln_1p())
}

/// One step of the two-layer recursion, described by its `s_i` and
/// second-layer degrees `w_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaPoint {
    pub s_values: Vec<f64>,
    pub w_values: Vec<u64>,
}

impl KappaPoint {
    pub fn degree(&self) -> usize {
        self.s_values.len()
    }

    /// `(d1, d2)`: number of light and heavy neighbors.
    pub fn split(&self, params: &DecayParams) -> (usize, usize) {
        let d2 = self.w_values.iter().filter(|&&w| params.is_heavy(w)).count();
        (self.w_values.len() - d2, d2)
    }

    /// Whether every `s_i` respects its degree's lower bound.
    pub fn is_legal(&self, params: &DecayParams) -> bool {
        self.s_values.len() == self.w_values.len()
            && self
                .s_values
                .iter()
                .zip(&self.w_values)
                .all(|(&s, &w)| s >= params.s_lower_bound(w) && s < 1.0)
    }
}

impl fmt::Display for KappaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s = {:?}, w = {:?}", self.s_values, self.w_values)
    }
}

/// The amortized decay rate `κ_d` in its single-layer form.
pub fn kappa(point: &KappaPoint, params: &DecayParams) -> Result<f64, DecayError> {
    if point.s_values.len() != point.w_values.len() {
        return Err(DecayError::InvalidParams(
            "s_values and w_values differ in length".into(),
        ));
    }
    let mut h = 1.0;
    let mut sum = 0.0;
    for (&s, &w) in point.s_values.iter().zip(&point.w_values) {
        if !(s > 0.0 && s < 1.0) {
            return Err(domain("s_i", s, "(0, 1)"));
        }
        h *= s;
        sum += params.branch_weight(w) * light_term(s);
    }
    Ok(prefactor(h) * sum)
}

/// The symmetrized rate `κ̂` for `d1` light and `d2` heavy neighbors.
pub fn kappa_hat(d1: u32, d2: u32, s_hat: f64, params: &DecayParams) -> Result<f64, DecayError> {
    if !(0.5..1.0).contains(&s_hat) {
        return Err(domain("ŝ", s_hat, "[1/2, 1)"));
    }
    Ok(kappa_hat_unchecked(d1, d2, s_hat, params.alpha))
}

fn kappa_hat_unchecked(d1: u32, d2: u32, s: f64, alpha: f64) -> f64 {
    let p = s.powi(d1 as i32);
    let heavy = 2f64.powi(d2 as i32);
    let light = p * d1 as f64 * light_term(s) / (alpha * (heavy + p) * (p / heavy).ln_1p());
    light + d2 as f64 / 5.0
}

/// Result of maximizing one `κ̂` case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub case_id: (u32, u32),
    pub s_star: f64,
    pub max_value: f64,
    /// The value the maximum must stay below.
    pub bound: f64,
    pub bound_satisfied: bool,
    pub grid_points: usize,
    pub tolerance: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // The bracket may have ended on a plateau; keep the best point seen.
    [(x, fx), (a, fa), (b, fb)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Uniform grid over `[lo, hi]`, then golden-section refinement between the
/// grid neighbors of the best point. Ties keep the leftmost grid point.
pub fn grid_then_golden(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(points >= 2);
    let step = (hi - lo) / (points - 1) as f64;
    let at = |k: usize| if k + 1 == points { hi } else { lo + k as f64 * step };
    let mut best = (0, f(lo));
    for k in 1..points {
        let v = f(at(k));
        if v > best.1 {
            best = (k, v);
        }
    }
    let (k, grid_max) = best;
    let left = at(k.saturating_sub(1));
    let right = at((k + 1).min(points - 1));
    let (x, fx) = golden_section_max(&f, left, right, tol);
    if fx >= grid_max {
        (x, fx)
    } else {
        (at(k), grid_max)
    }
}

/// Maximizes `κ̂` for `(d1, d2)` over `ŝ ∈ [1/2, 1 − 10⁻⁹]`. The bound is 1
/// for `d1 + d2 ≤ 4` and 3 for `d1 + d2 = 5`.
pub fn maximize_kappa_hat(d1: u32, d2: u32, params: &DecayParams) -> DecayReport {
    let alpha = params.alpha;
    let (s_star, max_value) = grid_then_golden(
        |s| kappa_hat_unchecked(d1, d2, s, alpha),
        0.5,
        S_HAT_MAX,
        GRID_POINTS,
        REFINE_TOLERANCE,
    );
    let bound = if d1 + d2 <= 4 { 1.0 } else { 3.0 };
    DecayReport {
        case_id: (d1, d2),
        s_star,
        max_value,
        bound,
        bound_satisfied: max_value < bound,
        grid_points: GRID_POINTS,
        tolerance: REFINE_TOLERANCE,
    }
}

/// `γ(w) = w q^w ln(1/q) α^{−log_M(w+1) − 1}` with `q = 1/(1 + x_lo)`;
/// bounds the contribution of a heavy neighbor of degree `w`.
pub fn gamma(w: u64, params: &DecayParams) -> f64 {
    let q = 1.0 / (1.0 + params.x_lo);
    let w_f = w as f64;
    w_f * q.powf(w_f) * (1.0 + params.x_lo).ln() * params.branch_weight_bound(w)
}

/// One named numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    /// The worst value observed.
    pub value: f64,
    /// What it was compared against.
    pub bound: f64,
    pub passed: bool,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str, value: f64, bound: f64, passed: bool, witness: Option<String>) -> Self {
        CheckOutcome {
            name: name.to_string(),
            value,
            bound,
            passed,
            witness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 1_000_000,
            seed: 0x5eed,
        }
    }
}

/// Outcome of [`verify_claims`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSuite {
    pub params: DecayParams,
    /// `κ̂` maxima for every split with `d1 + d2 ∈ {4, 5}`.
    pub cases: Vec<DecayReport>,
    pub checks: Vec<CheckOutcome>,
}

impl ClaimSuite {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.bound_satisfied) && self.checks.iter().all(|c| c.passed)
    }

    pub fn case(&self, d1: u32, d2: u32) -> Option<&DecayReport> {
        self.cases.iter().find(|c| c.case_id == (d1, d2))
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<VerificationFailure> {
        if let Some(c) = self.cases.iter().find(|c| !c.bound_satisfied) {
            return Some(VerificationFailure {
                claim: format!("max κ̂ < {} for (d1, d2) = {:?}", c.bound, c.case_id),
                witness: format!("ŝ = {:.9}, κ̂ = {:.9}", c.s_star, c.max_value),
            });
        }
        self.checks.iter().find(|c| !c.passed).map(|c| VerificationFailure {
            claim: c.name.clone(),
            witness: c
                .witness
                .clone()
                .unwrap_or_else(|| format!("value {} vs bound {}", c.value, c.bound)),
        })
    }

    pub fn into_result(self) -> Result<ClaimSuite, VerificationFailure> {
        match self.first_failure() {
            Some(failure) => Err(failure),
            None => Ok(self),
        }
    }
}

/// Runs every numerical check of the decay analysis.
pub fn verify_claims(params: &DecayParams, config: &SuiteConfig) -> Result<ClaimSuite, DecayError> {
    params.validate()?;
    let mut cases = Vec::new();
    for d in [4u32, 5] {
        for d2 in 0..=d {
            cases.push(maximize_kappa_hat(d - d2, d2, params));
        }
    }
    let checks = vec![
        check_five_neighbors(params),
        check_gamma_at_base(params),
        check_gamma_decreasing(params),
        check_weight_bound(params),
        check_heavy_lower_bound(params),
        check_potential_gap(),
        check_inverse_slope(),
        check_concavity(),
        check_prefactor(),
        check_monotone_in_degrees(params),
        check_s_lower_bound(params, config),
    ];
    let mut checks = checks;
    checks.extend(check_sampled_kappa(params, config));
    Ok(ClaimSuite { params: *params, cases, checks })
}

fn check_five_neighbors(params: &DecayParams) -> CheckOutcome {
    let (s_star, f_star) = grid_then_golden(light_term, 0.5, S_HAT_MAX, GRID_POINTS, REFINE_TOLERANCE);
    let bound = 5.0 * f_star / params.alpha + 1.0;
    CheckOutcome::new(
        "kappa_hat_5_below_3",
        bound,
        3.0,
        f_star < 0.3 && bound < 3.0,
        Some(format!("ŝ* = {s_star:.9}, f(ŝ*) = {f_star:.9}")),
    )
}

fn check_gamma_at_base(params: &DecayParams) -> CheckOutcome {
    let g = gamma(params.branch_base, params);
    CheckOutcome::new("gamma_at_M_below_one_fifth", g, 0.2, g < 0.2, None)
}

/// Log-spaced integers in `[lo, hi]`.
fn log_grid(lo: u64, hi: u64, per_decade: usize) -> Vec<u64> {
    let decades = (hi as f64 / lo as f64).log10();
    let count = (decades * per_decade as f64).ceil() as usize + 1;
    let mut ws: Vec<u64> = (0..count)
        .map(|k| (lo as f64 * 10f64.powf(k as f64 / per_decade as f64)).round() as u64)
        .map(|w| w.clamp(lo, hi))
        .collect();
    ws.extend(lo..lo + 100);
    ws.push(hi);
    ws.sort_unstable();
    ws.dedup();
    ws
}

fn check_gamma_decreasing(params: &DecayParams) -> CheckOutcome {
    let ws = log_grid(params.branch_base, 1_000_000, 200);
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for pair in ws.windows(2) {
        let (a, b) = (gamma(pair[0], params), gamma(pair[1], params));
        // Once γ underflows both sides are 0; that still counts as decreasing.
        let rise = if a == 0.0 && b == 0.0 { f64::NEG_INFINITY } else { b - a };
        if rise > worst {
            worst = rise;
            witness = Some(format!("γ({}) = {a:e}, γ({}) = {b:e}", pair[0], pair[1]));
        }
    }
    let passed = worst < 0.0;
    CheckOutcome::new("gamma_decreasing", worst, 0.0, passed, witness.filter(|_| !passed))
}

fn check_weight_bound(params: &DecayParams) -> CheckOutcome {
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for w in log_grid(1, 10_000_000, 500) {
        let gap = params.branch_weight(w) - params.branch_weight_bound(w);
        if gap > worst {
            worst = gap;
            witness = Some(format!("w = {w}"));
        }
    }
    let passed = worst <= 1e-12;
    CheckOutcome::new("ceil_weight_below_real_bound", worst, 0.0, passed, witness.filter(|_| !passed))
}

fn check_heavy_lower_bound(params: &DecayParams) -> CheckOutcome {
    let s = params.s_lower_bound(params.branch_base);
    CheckOutcome::new("heavy_s_above_nine_tenths", s, 0.9, s > 0.9, None)
}

fn check_potential_gap() -> CheckOutcome {
    let gap = phi(1.0).unwrap() - phi(1.0 / 32.0).unwrap();
    CheckOutcome::new("base_case_potential_gap_below_4", gap, 4.0, gap < 4.0, None)
}

fn check_inverse_slope() -> CheckOutcome {
    let lo = phi(1.0 / 32.0).unwrap();
    let hi = phi(1.0).unwrap();
    let worst = (0..=10_000)
        .map(|k| phi_inverse_slope(lo + (hi - lo) * k as f64 / 10_000.0))
        .fold(f64::NEG_INFINITY, f64::max);
    let bound = 2.0 * std::f64::consts::LN_2;
    CheckOutcome::new("inverse_potential_slope_below_2ln2", worst, bound, worst <= bound * (1.0 + 1e-12), None)
}

/// Second differences of `f(x) = (1 − eˣ)(x − ln(1 − eˣ))` on `[−ln 2, 0)`.
fn check_concavity() -> CheckOutcome {
    let f = |x: f64| {
        let t = -x.exp_m1();
        t * (x - t.ln())
    };
    let lo = -std::f64::consts::LN_2;
    let hi = -1e-6;
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for k in 1..steps {
        let x = lo + k as f64 * h;
        let second = (f(x - h) - 2.0 * f(x) + f(x + h)) / (h * h);
        if second > worst {
            worst = second;
            witness = Some(format!("x = {x}"));
        }
    }
    // Rounding noise in the second difference is about 4·ulp(f)/h².
    let noise = 4.0 * f64::EPSILON / (h * h);
    let passed = worst <= noise;
    CheckOutcome::new("jensen_function_concave", worst, noise, passed, witness.filter(|_| !passed))
}

fn check_prefactor() -> CheckOutcome {
    let worst = (1..=100_000)
        .map(|k| prefactor(k as f64 / 100_000.0))
        .fold(f64::NEG_INFINITY, f64::max);
    CheckOutcome::new("prefactor_at_most_1", worst, 1.0, worst <= 1.0, None)
}

/// `κ̂` grows pointwise when a light or heavy neighbor is added.
fn check_monotone_in_degrees(params: &DecayParams) -> CheckOutcome {
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for k in 0..=2_000 {
        let s = (0.5 + 0.5 * k as f64 / 2_000.0).min(S_HAT_MAX);
        for d in 0..5u32 {
            for d2 in 0..=d {
                let d1 = d - d2;
                let here = kappa_hat_unchecked(d1, d2, s, params.alpha);
                for (nd1, nd2) in [(d1 + 1, d2), (d1, d2 + 1)] {
                    let drop = here - kappa_hat_unchecked(nd1, nd2, s, params.alpha);
                    if drop > worst {
                        worst = drop;
                        witness = Some(format!("ŝ = {s}, ({d1},{d2}) → ({nd1},{nd2})"));
                    }
                }
            }
        }
    }
    let passed = worst <= 1e-12;
    CheckOutcome::new("kappa_hat_monotone_in_degrees", worst, 0.0, passed, witness.filter(|_| !passed))
}

fn chunk_rng(config: &SuiteConfig, stream: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream.wrapping_mul(1 << 32) + chunk as u64);
    rng
}

const CHUNK: usize = 4096;

/// `s_i` computed from random child ratios never drops below its bound.
fn check_s_lower_bound(params: &DecayParams, config: &SuiteConfig) -> CheckOutcome {
    let samples = (config.samples / 10).max(1);
    let chunks = samples.div_ceil(CHUNK);
    let worst = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(config, 1, c);
            let mut worst = (f64::NEG_INFINITY, String::new());
            let mut xs = Vec::new();
            for _ in 0..CHUNK.min(samples - c * CHUNK) {
                let w = rng.random_range(0..=200u64);
                xs.clear();
                xs.extend((0..w).map(|_| rng.random_range(params.x_lo..=params.x_hi)));
                // s < 1 and s ≥ bound, both checked on 1 − s.
                let complement = s_complement_from_children(&xs);
                let q = (1.0 + params.x_lo).recip().powf(w as f64);
                let allowed = q / (1.0 + q);
                let shortfall = if complement > 0.0 {
                    (complement - allowed) / allowed
                } else {
                    f64::INFINITY
                };
                if shortfall > worst.0 {
                    worst = (shortfall, format!("w = {w}, 1 - s = {complement:e}, allowed = {allowed:e}"));
                }
            }
            worst
        })
        .reduce(
            || (f64::NEG_INFINITY, String::new()),
            |a, b| if b.0 > a.0 { b } else { a },
        );
    let passed = worst.0 <= 1e-12;
    CheckOutcome::new("s_lower_bound", worst.0, 0.0, passed, (!passed).then_some(worst.1))
}

/// Draws a legal point of degree 1..=5 whose `s_i` respect their lower
/// bounds, mixing values computed from random child ratios with values drawn
/// anywhere in the legal interval.
pub fn sample_kappa_point(rng: &mut impl Rng, params: &DecayParams) -> KappaPoint {
    let d = rng.random_range(1..=5usize);
    let mut s_values = Vec::with_capacity(d);
    let mut w_values = Vec::with_capacity(d);
    for _ in 0..d {
        let w = if rng.random_bool(0.5) {
            rng.random_range(0..params.branch_base)
        } else {
            // Past a few hundred the legal interval collapses onto 1 in f64.
            let hi = (params.branch_base * 8).max(params.branch_base + 1);
            rng.random_range(params.branch_base..hi)
        };
        let lower = params.s_lower_bound(w);
        let s = if w == 0 {
            0.5
        } else if w <= 40 && rng.random_bool(0.5) {
            let xs: Vec<f64> = (0..w).map(|_| rng.random_range(params.x_lo..=params.x_hi)).collect();
            s_from_children(&xs)
        } else if rng.random_bool(0.1) {
            lower
        } else {
            rng.random_range(lower..1.0)
        };
        s_values.push(s.max(lower));
        w_values.push(w);
    }
    KappaPoint { s_values, w_values }
}

/// Random legal points satisfy `κ ≤ max κ̂` for their split, `κ ≤ 1` for
/// degree ≤ 4 and `κ < 3` for degree 5.
fn check_sampled_kappa(params: &DecayParams, config: &SuiteConfig) -> Vec<CheckOutcome> {
    let mut maxima = [[0.0f64; 6]; 6];
    for d1 in 0..=5u32 {
        for d2 in 0..=5 - d1 {
            maxima[d1 as usize][d2 as usize] = maximize_kappa_hat(d1, d2, params).max_value;
        }
    }
    #[derive(Clone)]
    struct Worst {
        excess: f64,
        excess_at: String,
        low_degree: f64,
        low_at: String,
        five: f64,
        five_at: String,
    }
    let empty = Worst {
        excess: f64::NEG_INFINITY,
        excess_at: String::new(),
        low_degree: f64::NEG_INFINITY,
        low_at: String::new(),
        five: f64::NEG_INFINITY,
        five_at: String::new(),
    };
    let chunks = config.samples.div_ceil(CHUNK);
    let worst = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(config, 2, c);
            let mut worst = empty.clone();
            for _ in 0..CHUNK.min(config.samples - c * CHUNK) {
                let point = sample_kappa_point(&mut rng, params);
                let value = kappa(&point, params).expect("sampled points are legal");
                let (d1, d2) = point.split(params);
                let excess = value - maxima[d1][d2];
                if excess > worst.excess {
                    worst.excess = excess;
                    worst.excess_at = format!("{point}, κ = {value}");
                }
                if point.degree() <= 4 {
                    if value > worst.low_degree {
                        worst.low_degree = value;
                        worst.low_at = format!("{point}");
                    }
                } else if value > worst.five {
                    worst.five = value;
                    worst.five_at = format!("{point}");
                }
            }
            worst
        })
        .reduce(
            || empty.clone(),
            |mut a, b| {
                if b.excess > a.excess {
                    a.excess = b.excess;
                    a.excess_at = b.excess_at;
                }
                if b.low_degree > a.low_degree {
                    a.low_degree = b.low_degree;
                    a.low_at = b.low_at;
                }
                if b.five > a.five {
                    a.five = b.five;
                    a.five_at = b.five_at;
                }
                a
            },
        );
    let keep = |passed: bool, w: String| if passed { None } else { Some(w) };
    let excess_ok = worst.excess <= SAMPLE_SLACK;
    let low_ok = worst.low_degree <= 1.0;
    let five_ok = worst.five < 3.0;
    vec![
        CheckOutcome::new("sampled_kappa_below_kappa_hat", worst.excess, SAMPLE_SLACK, excess_ok, keep(excess_ok, worst.excess_at)),
        CheckOutcome::new("sampled_kappa_degree_4_at_most_1", worst.low_degree, 1.0, low_ok, keep(low_ok, worst.low_at)),
        CheckOutcome::new("sampled_kappa_degree_5_below_3", worst.five, 3.0, five_ok, keep(five_ok, worst.five_at)),
    ]
}
