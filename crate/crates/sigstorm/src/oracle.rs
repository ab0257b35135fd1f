//! Brute-force numeric verification path, independent of every closed form.
//!
//! The reduced chain's edges are expanded into a full generator matrix in which
//! each signalling segment becomes an explicit delay state with a single exit.
//! The stationary vector of that generator is computed by subtraction-free
//! state elimination (Grassmann-Taksar-Heyman), which keeps every intermediate
//! quantity nonnegative and delivers near machine-precision relative accuracy
//! even for states carrying probability masses many orders of magnitude apart.
//! Message rates are then obtained by direct rate-times-cost summation over the
//! edge list, with no load-formula algebra involved. A grid-plus-golden-section
//! argmax utility rounds out the toolkit for validating optimum-rate formulas.

use crate::model::{MainState, TransitionTable};
use thiserror::Error;

/// Identifies the delay state representing one signalling segment of one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelayState {
    /// Index of the owning edge in the source table's edge list.
    pub edge_index: usize,
    /// Position of the segment within that edge's segment list.
    pub segment_index: usize,
}

/// Dense generator matrix over the main states plus one delay state per
/// signalling segment, with the row-sum-zero convention.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    /// Number of states (10 main states first, then the delay states).
    pub n: usize,
    /// Row-major `n x n` rate matrix; off-diagonals are transition rates,
    /// diagonals the negated exit rates.
    pub q: Vec<f64>,
    /// Delay-state metadata; delay state `i` has matrix index `10 + i`.
    pub delay_states: Vec<DelayState>,
    /// The table the generator was built from (used for message-rate sums).
    pub table: TransitionTable,
}

impl GeneratorMatrix {
    pub fn rate(&self, from: usize, to: usize) -> f64 {
        self.q[from * self.n + to]
    }

    /// Largest absolute entry, the natural scale for residual tolerances.
    pub fn max_rate(&self) -> f64 {
        self.q.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }
}

/// Errors from the numeric solve.
#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("chain is not irreducible on the component reachable from the start state")]
    NotIrreducible,
    #[error("stationary solve residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
}

const MAIN_COUNT: usize = 10;

/// Expands a transition table into the full generator.
///
/// Each edge `X -(rate)-> Y` with segment delays `[d1, ..., dk]` becomes the
/// path `X -(rate)-> S1 -(1/d1)-> S2 ... -(1/dk)-> Y`; segmentless edges map
/// directly. Delay states block: their only exit is the segment completion.
/// Edges with rate zero are dropped (the table builder already omits them).
pub fn build_full_generator(t: &TransitionTable) -> GeneratorMatrix {
    let table = TransitionTable {
        edges: t.edges.iter().filter(|e| e.rate > 0.0).cloned().collect(),
        pch_enabled: t.pch_enabled,
    };
    let mut delay_states = Vec::new();
    for (ei, e) in table.edges.iter().enumerate() {
        for si in 0..e.segments.len() {
            delay_states.push(DelayState {
                edge_index: ei,
                segment_index: si,
            });
        }
    }
    let n = MAIN_COUNT + delay_states.len();
    let mut q = vec![0.0; n * n];
    let add = |q: &mut Vec<f64>, i: usize, j: usize, r: f64| {
        q[i * n + j] += r;
        q[i * n + i] -= r;
    };
    // Delay-state indices grouped per edge, in segment order.
    let mut delay_index = vec![Vec::new(); table.edges.len()];
    for (di, d) in delay_states.iter().enumerate() {
        delay_index[d.edge_index].push(MAIN_COUNT + di);
    }
    for (ei, e) in table.edges.iter().enumerate() {
        let from = e.from.index();
        let to = e.to.index();
        if e.segments.is_empty() {
            add(&mut q, from, to, e.rate);
        } else {
            let chain = &delay_index[ei];
            add(&mut q, from, chain[0], e.rate);
            for (si, &delay) in e.segments.iter().enumerate() {
                let next = if si + 1 < chain.len() { chain[si + 1] } else { to };
                add(&mut q, chain[si], next, 1.0 / delay);
            }
        }
    }
    GeneratorMatrix {
        n,
        q,
        delay_states,
        table,
    }
}

fn reachable_set(g: &GeneratorMatrix, start: usize, reverse: bool) -> Vec<bool> {
    let mut seen = vec![false; g.n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for v in 0..g.n {
            let r = if reverse { g.rate(v, u) } else { g.rate(u, v) };
            if v != u && r > 0.0 && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Solves the global balance equations for the stationary distribution.
///
/// The solve restricts to the component reachable from state 0 (IDLE for chain
/// generators) and requires that component to be a single communicating class;
/// unreachable states get probability zero. Elimination is subtraction-free, so
/// the result is nonnegative by construction; the residual of the full balance
/// system is checked against `1e-10 * max_rate` before returning.
pub fn solve_stationary(g: &GeneratorMatrix) -> Result<Vec<f64>, OracleError> {
    let forward = reachable_set(g, 0, false);
    let backward = reachable_set(g, 0, true);
    let reachable: Vec<usize> = (0..g.n).filter(|&i| forward[i]).collect();
    if reachable.iter().any(|&i| !backward[i]) {
        // A reachable state that cannot return to the start splits the
        // reachable component into more than one class.
        return Err(OracleError::NotIrreducible);
    }
    let n = reachable.len();
    let mut a = vec![0.0; n * n];
    for (ri, &i) in reachable.iter().enumerate() {
        for (rj, &j) in reachable.iter().enumerate() {
            a[ri * n + rj] = g.rate(i, j);
        }
    }

    // Grassmann-Taksar-Heyman elimination: fold state k into the remaining
    // states using only additions of nonnegative terms.
    for k in (1..n).rev() {
        let s: f64 = (0..k).map(|j| a[k * n + j]).sum();
        if !(s > 0.0) {
            return Err(OracleError::NotIrreducible);
        }
        for i in 0..k {
            let aik = a[i * n + k];
            if aik > 0.0 {
                let f = aik / s;
                for j in 0..k {
                    let akj = a[k * n + j];
                    if j != i && akj > 0.0 {
                        a[i * n + j] += f * akj;
                    }
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    x[0] = 1.0;
    for k in 1..n {
        let s: f64 = (0..k).map(|j| a[k * n + j]).sum();
        let num: f64 = (0..k).map(|i| x[i] * a[i * n + k]).sum();
        x[k] = num / s;
    }
    let total: f64 = x.iter().sum();
    for v in &mut x {
        *v /= total;
    }

    let mut full = vec![0.0; g.n];
    for (ri, &i) in reachable.iter().enumerate() {
        full[i] = x[ri].max(0.0);
    }

    let max_rate = g.max_rate();
    let tolerance = 1e-10 * max_rate;
    let mut residual = 0.0f64;
    for j in 0..g.n {
        let mut col = 0.0;
        for i in 0..g.n {
            col += full[i] * g.rate(i, j);
        }
        residual = residual.max(col.abs());
    }
    if residual > tolerance {
        return Err(OracleError::ResidualTooLarge {
            residual,
            tolerance,
        });
    }
    Ok(full)
}

/// Main-state probabilities plus the signalling mass attributed to each
/// main state as the source of its outgoing delayed transitions.
#[derive(Debug, Clone)]
pub struct ReducedDistribution {
    /// Probability of each main state, indexed by `MainState::index()`.
    pub main: [f64; 10],
    /// Total delay-state probability attributed to each source main state.
    pub signalling_mass_by_source: [f64; 10],
    /// Sum of all delay-state probabilities.
    pub total_signalling: f64,
}

/// Projects a full stationary vector down to the main states.
///
/// The delay-state mass of every edge is attributed to the edge's source
/// state; per segment it equals `pi(source) * rate * delay`, which is exactly
/// the per-state normalization weight structure of the closed form.
pub fn reduce_full_distribution(full: &[f64], g: &GeneratorMatrix) -> ReducedDistribution {
    let mut main = [0.0; 10];
    for s in MainState::ALL {
        main[s.index()] = full[s.index()];
    }
    let mut by_source = [0.0; 10];
    let mut total = 0.0;
    for (di, d) in g.delay_states.iter().enumerate() {
        let mass = full[MAIN_COUNT + di];
        by_source[g.table.edges[d.edge_index].from.index()] += mass;
        total += mass;
    }
    ReducedDistribution {
        main,
        signalling_mass_by_source: by_source,
        total_signalling: total,
    }
}

/// Message rates by direct summation: `sum over edges of pi(source) * rate *
/// cost`, for RNC and SGSN costs respectively. Independent of any load formula.
pub fn message_rate_oracle(full: &[f64], g: &GeneratorMatrix) -> (f64, f64) {
    let mut gamma_r = 0.0;
    let mut gamma_c = 0.0;
    for e in &g.table.edges {
        let flow = full[e.from.index()] * e.rate;
        gamma_r += flow * e.n_cost;
        gamma_c += flow * e.m_cost;
    }
    (gamma_r, gamma_c)
}

/// Golden-section ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// One-dimensional argmax: coarse grid scan, then golden-section refinement
/// inside the bracket around the best grid point.
///
/// Requires `grid_points >= 16`. For unimodal `f` the locational accuracy is
/// `(hi - lo) / grid_points * INV_PHI^refine_iters`; for non-unimodal `f` the
/// result is the best grid-refined point found (best effort).
pub fn argmax_scan(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_points: usize,
    refine_iters: usize,
) -> (f64, f64) {
    assert!(grid_points >= 16, "argmax_scan requires grid_points >= 16");
    assert!(hi > lo, "argmax_scan requires hi > lo");
    let step = (hi - lo) / (grid_points - 1) as f64;
    let mut best_i = 0;
    let mut best_y = f64::NEG_INFINITY;
    let mut xs = Vec::with_capacity(grid_points);
    for i in 0..grid_points {
        let x = if i + 1 == grid_points { hi } else { lo + step * i as f64 };
        let y = f(x);
        xs.push(x);
        if y > best_y {
            best_y = y;
            best_i = i;
        }
    }
    let mut a = xs[best_i.saturating_sub(1)];
    let mut b = xs[(best_i + 1).min(grid_points - 1)];
    for _ in 0..refine_iters {
        let c1 = b - INV_PHI * (b - a);
        let c2 = a + INV_PHI * (b - a);
        if f(c1) < f(c2) {
            a = c1;
        } else {
            b = c2;
        }
    }
    let x = 0.5 * (a + b);
    let y = f(x);
    if y >= best_y {
        (x, y)
    } else {
        (xs[best_i], best_y)
    }
}
