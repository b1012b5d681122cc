//! Coordinate-ascent ("basic") LCLP decoding of nonbinary codes.
//!
//! The decoder maximizes the dual of the LP decoding relaxation. The dual
//! variables are one `(q-1)`-block per Tanner-graph edge; the check-side
//! block of an edge is the negation of its variable-side block, so a single
//! block per edge is stored and the sign is applied on read. The channel
//! couples in through the fixed block `u_{i,0} = -lambda_i`.
//!
//! One update visits an edge `(i, j)` and moves its whole block to the
//! maximizer of the local dual term. For finite softening the maximizer is
//! unique:
//!
//! ```text
//! u*^(r) = 1/2 ((V_rbar - V_r) - (C_rbar - C_r))
//! ```
//!
//! with repetition-side terms `V` available in closed form from per-column
//! running sums (the repetition code's words are the constant vectors) and
//! check-side terms `C` from the trellis marginals of row `j`. In the
//! min-sum limit any point of the closed interval between `V_rbar - V_r`
//! and `-(C_rbar - C_r)` maximizes; the midpoint is the default. One
//! iteration sweeps all edges cyclically (checks ascending, columns
//! ascending within a check), then applies the erasure-aware decision rule
//! and stops on a syndrome-clean estimate.

use crate::channel::LlrMatrix;
use crate::code::{ParityCheckMatrix, TannerGraph};
use crate::semiring::Kappa;
use crate::trellis::{RowMarginals, SpcTrellis, TrellisMetrics};
use crate::{Error, Result};

/// How a decode attempt ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    /// The decision rule produced an erasure-free estimate with zero
    /// syndrome.
    Codeword,
    /// The iteration budget ran out (or early stopping fired) first.
    MaxIters,
}

/// Operation counters accumulated over one decode call. Fields are filled
/// by the decoder that owns the corresponding machinery: the basic decoder
/// counts marginal sets, the subgradient decoder counts Viterbi runs and
/// variable-node updates, both report trellis branch operations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub marginal_sets: u64,
    pub viterbi_runs: u64,
    pub vn_updates: u64,
    pub branch_ops: u64,
}

/// Outcome of a decode call.
#[derive(Clone, Debug)]
pub struct DecodeResult {
    /// Per-symbol estimate; `None` marks an erasure.
    pub symbols: Vec<Option<u8>>,
    pub status: DecodeStatus,
    pub iterations: usize,
    /// Per-iteration dual objective values when tracing is enabled.
    pub trace: Option<Vec<f64>>,
    pub ops: OpCounts,
}

impl DecodeResult {
    /// The estimate as a word, if erasure-free.
    pub fn word(&self) -> Option<Vec<u8>> {
        self.symbols.iter().copied().collect()
    }
}

/// Which point of the min-sum maximizing interval an edge update takes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IntervalPick {
    #[default]
    Midpoint,
    Lower,
    Upper,
}

/// Configuration of the coordinate-ascent decoder.
#[derive(Clone, Debug)]
pub struct BasicConfig {
    pub kappa: Kappa,
    pub max_iters: usize,
    /// Compute one marginal set per row visit and reuse it for all edges of
    /// the row instead of refreshing per edge. Faster, but deviates from
    /// literal coordinate ascent.
    pub reuse_row_marginals: bool,
    pub interval_pick: IntervalPick,
    /// Record the dual objective after every iteration.
    pub record_trace: bool,
}

impl Default for BasicConfig {
    fn default() -> Self {
        BasicConfig {
            kappa: Kappa::Inf,
            max_iters: 100,
            reuse_row_marginals: false,
            interval_pick: IntervalPick::Midpoint,
            record_trace: false,
        }
    }
}

/// Dual variables of one decode attempt: one `(q-1)`-block per edge, the
/// fixed channel blocks `u_{i,0} = -lambda_i`, and per-column running sums
/// `S_i(r)` over `{0} ∪ J_i` maintained incrementally.
#[derive(Clone, Debug)]
pub struct DualState {
    width: usize,
    u: Vec<f64>,
    u0: Vec<f64>,
    sums: Vec<f64>,
    edge_cols: Vec<usize>,
}

impl DualState {
    pub fn new(graph: &TannerGraph, llr: &LlrMatrix) -> Result<Self> {
        if llr.len() != graph.num_cols() {
            return Err(Error::dimension(format!(
                "LLR rows {} != block length {}",
                llr.len(),
                graph.num_cols()
            )));
        }
        let width = llr.width();
        let n = graph.num_cols();
        let mut u0 = vec![0.0; n * width];
        for i in 0..n {
            for (k, &l) in llr.block(i).iter().enumerate() {
                u0[i * width + k] = -l;
            }
        }
        let sums = u0.clone();
        let edge_cols = graph.edges().iter().map(|&(i, _)| i).collect();
        Ok(DualState {
            width,
            u: vec![0.0; graph.num_edges() * width],
            u0,
            sums,
            edge_cols,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn u_block(&self, e: usize) -> &[f64] {
        &self.u[e * self.width..(e + 1) * self.width]
    }

    #[inline]
    pub fn u0_block(&self, i: usize) -> &[f64] {
        &self.u0[i * self.width..(i + 1) * self.width]
    }

    /// `S_i(r)` for nonzero `r`; `S_i(0)` is identically 0.
    #[inline]
    pub fn sum_block(&self, i: usize) -> &[f64] {
        &self.sums[i * self.width..(i + 1) * self.width]
    }

    /// Replaces the block of edge `e`, keeping the column sums in sync.
    pub fn set_edge_block(&mut self, e: usize, vals: &[f64]) {
        debug_assert_eq!(vals.len(), self.width);
        let i = self.edge_cols[e];
        for (k, &v) in vals.iter().enumerate() {
            let old = self.u[e * self.width + k];
            self.sums[i * self.width + k] += v - old;
            self.u[e * self.width + k] = v;
        }
    }

    /// Adds `delta` to one coordinate of one edge block.
    #[inline]
    pub fn add_edge_coord(&mut self, e: usize, r_idx: usize, delta: f64) {
        let i = self.edge_cols[e];
        self.u[e * self.width + r_idx] += delta;
        self.sums[i * self.width + r_idx] += delta;
    }

    /// Check-side blocks of row `j` (`v_{j,i} = -u_{i,j}`), gathered in row
    /// position order.
    pub fn gather_row_v_hat(&self, graph: &TannerGraph, j: usize, out: &mut Vec<f64>) {
        out.clear();
        for &e in graph.row_edge_ids(j) {
            out.extend(self.u_block(e).iter().map(|&x| -x));
        }
    }

    /// Worst deviation of the running sums from a fresh recomputation.
    pub fn max_sum_drift(&self) -> f64 {
        let mut fresh = self.u0.clone();
        for (e, &i) in self.edge_cols.iter().enumerate() {
            for k in 0..self.width {
                fresh[i * self.width + k] += self.u[e * self.width + k];
            }
        }
        fresh
            .iter()
            .zip(&self.sums)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Erasure-aware symbol estimates: `x_i^(r) = lambda_i^(r) - sum_j
    /// u_{i,j}^(r) = -S_i(r)` with `x_i^(0) = 0`; a symbol is the unique
    /// argmin or an erasure. Ties are exact float equality: they arise
    /// structurally (all-zero inputs), not from noise.
    pub fn decision_rule(&self) -> Vec<Option<u8>> {
        (0..self.sums.len() / self.width)
            .map(|i| {
                let s = self.sum_block(i);
                argmin_unique(std::iter::once(0.0).chain(s.iter().map(|&v| -v)))
                    .map(|c| c as u8)
            })
            .collect()
    }
}

/// Index of the unique minimum, or `None` on a tie for the minimum.
pub(crate) fn argmin_unique(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best = f64::INFINITY;
    let mut best_idx = 0usize;
    let mut tie = false;
    for (idx, v) in values.enumerate() {
        if v < best {
            best = v;
            best_idx = idx;
            tie = false;
        } else if v == best {
            tie = true;
        }
    }
    (!tie).then_some(best_idx)
}

/// Per-decode scratch shared by both decoders: trellis metrics, a marginal
/// buffer, the gathered check-side blocks, and operation counters.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub metrics: TrellisMetrics,
    pub marginals: RowMarginals,
    pub v_hat: Vec<f64>,
    pub marginal_sets: u64,
    pub viterbi_runs: u64,
    pub vn_updates: u64,
}

impl Workspace {
    pub fn op_counts(&self) -> OpCounts {
        OpCounts {
            marginal_sets: self.marginal_sets,
            viterbi_runs: self.viterbi_runs,
            vn_updates: self.vn_updates,
            branch_ops: self.metrics.branch_ops(),
        }
    }
}

/// The coordinate-ascent LCLP decoder for one parity-check matrix.
/// Immutable once built; each decode call owns its own state and scratch,
/// so a decoder can serve many threads.
#[derive(Clone, Debug)]
pub struct BasicDecoder {
    matrix: ParityCheckMatrix,
    graph: TannerGraph,
    trellises: Vec<SpcTrellis>,
    config: BasicConfig,
}

impl BasicDecoder {
    pub fn new(matrix: ParityCheckMatrix, config: BasicConfig) -> Result<Self> {
        if config.max_iters == 0 {
            return Err(Error::config("max_iters must be at least 1"));
        }
        let graph = TannerGraph::new(&matrix);
        let trellises = (0..matrix.num_rows())
            .map(|j| {
                let coeffs = matrix.row(j).iter().map(|&(_, h)| h).collect();
                SpcTrellis::new(matrix.ring().clone(), coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BasicDecoder {
            matrix,
            graph,
            trellises,
            config,
        })
    }

    pub fn matrix(&self) -> &ParityCheckMatrix {
        &self.matrix
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn config(&self) -> &BasicConfig {
        &self.config
    }

    pub fn trellis(&self, j: usize) -> &SpcTrellis {
        &self.trellises[j]
    }

    /// Fresh all-zero dual state for a received frame.
    pub fn new_state(&self, llr: &LlrMatrix) -> Result<DualState> {
        if llr.width() != self.matrix.ring().q() - 1 {
            return Err(Error::dimension(format!(
                "LLR width {} != q - 1 = {}",
                llr.width(),
                self.matrix.ring().q() - 1
            )));
        }
        DualState::new(&self.graph, llr)
    }

    /// Repetition-side terms of the edge update, for all nonzero `r`.
    ///
    /// `V_r` constrains the repetition word to equal `r` and excludes the
    /// edge's own coordinate, which collapses to `S_i(r) - u_{i,j}^(r)`
    /// independent of the softening. `V_rbar` soft-minimizes over the other
    /// `q - 1` constant words, the edge's coordinate included.
    pub fn vn_terms(&self, state: &DualState, e: usize) -> (Vec<f64>, Vec<f64>) {
        let (i, _) = self.graph.edge(e);
        let kappa = self.config.kappa;
        let s = state.sum_block(i);
        let u = state.u_block(e);
        let w = state.width();
        let mut v_r = Vec::with_capacity(w);
        let mut v_rbar = Vec::with_capacity(w);
        for ridx in 0..w {
            v_r.push(s[ridx] - u[ridx]);
            let mut acc = 0.0; // the all-zero word contributes -S_i(0) = 0
            for (c, &sc) in s.iter().enumerate() {
                if c != ridx {
                    acc = kappa.softmin(acc, -sc);
                }
            }
            v_rbar.push(-acc);
        }
        (v_r, v_rbar)
    }

    /// Recomputes the marginal set of row `j` from the current duals.
    pub fn row_marginals(&self, state: &DualState, j: usize, ws: &mut Workspace) {
        state.gather_row_v_hat(&self.graph, j, &mut ws.v_hat);
        self.trellises[j].marginals(
            &ws.v_hat,
            self.config.kappa,
            &mut ws.metrics,
            &mut ws.marginals,
        );
        ws.marginal_sets += 1;
    }

    /// Endpoints `(V_rbar - V_r, -(C_rbar - C_r))` of the maximizing
    /// interval for every nonzero `r` of edge `e`, with check marginals
    /// taken from `marg`. Under finite softening the unique maximizer is
    /// the midpoint of the two.
    pub fn edge_intervals(
        &self,
        state: &DualState,
        e: usize,
        marg: &RowMarginals,
    ) -> Vec<(f64, f64)> {
        let pos = self.graph.edge_row_pos(e);
        let (v_r, v_rbar) = self.vn_terms(state, e);
        (0..state.width())
            .map(|ridx| {
                let r = (ridx + 1) as u8;
                let a = v_rbar[ridx] - v_r[ridx];
                let b = -(marg.c_rbar(pos, r) - marg.c_r(pos, r));
                (a, b)
            })
            .collect()
    }

    fn pick(&self, a: f64, b: f64) -> f64 {
        match (self.config.kappa, self.config.interval_pick) {
            // the unique maximizer under finite softening
            (Kappa::Finite(_), _) | (Kappa::Inf, IntervalPick::Midpoint) => 0.5 * (a + b),
            (Kappa::Inf, IntervalPick::Lower) => a.min(b),
            (Kappa::Inf, IntervalPick::Upper) => a.max(b),
        }
    }

    fn optimum_from(&self, state: &DualState, e: usize, marg: &RowMarginals) -> Vec<f64> {
        self.edge_intervals(state, e, marg)
            .into_iter()
            .map(|(a, b)| self.pick(a, b))
            .collect()
    }

    /// One strict coordinate-ascent step: recompute the row's marginals
    /// from the current duals, then move the whole edge block to the
    /// maximizer (all `q - 1` coordinates simultaneously, each computed
    /// from the pre-update state).
    pub fn edge_update(&self, state: &mut DualState, e: usize, ws: &mut Workspace) {
        let (_, j) = self.graph.edge(e);
        self.row_marginals(state, j, ws);
        let vals = self.optimum_from(state, e, &ws.marginals);
        state.set_edge_block(e, &vals);
    }

    /// Dual objective `sum_i phi_i + sum_j theta_j` of the current state:
    /// `phi_i` is the (soft) minimum over the constant words, available in
    /// closed form from the column sums; `theta_j` is the trellis terminal
    /// metric of row `j`.
    pub fn dual_objective(&self, state: &DualState, ws: &mut Workspace) -> f64 {
        let kappa = self.config.kappa;
        let mut total = 0.0;
        for i in 0..self.graph.num_cols() {
            let mut acc = 0.0;
            for &sc in state.sum_block(i) {
                acc = kappa.softmin(acc, -sc);
            }
            total += acc;
        }
        for j in 0..self.graph.num_rows() {
            state.gather_row_v_hat(&self.graph, j, &mut ws.v_hat);
            total += self.trellises[j].codeword_softmin(&ws.v_hat, kappa, &mut ws.metrics);
        }
        total
    }

    /// Runs the full decoder on one frame.
    pub fn decode(&self, llr: &LlrMatrix) -> Result<DecodeResult> {
        let mut state = self.new_state(llr)?;
        let mut ws = Workspace::default();
        let mut trace = self.config.record_trace.then(Vec::new);
        let mut symbols = Vec::new();
        for iteration in 1..=self.config.max_iters {
            if self.config.reuse_row_marginals {
                for j in 0..self.graph.num_rows() {
                    self.row_marginals(&state, j, &mut ws);
                    for &e in self.graph.row_edge_ids(j) {
                        let vals = self.optimum_from(&state, e, &ws.marginals);
                        state.set_edge_block(e, &vals);
                    }
                }
            } else {
                for e in 0..self.graph.num_edges() {
                    self.edge_update(&mut state, e, &mut ws);
                }
            }
            if let Some(t) = trace.as_mut() {
                t.push(self.dual_objective(&state, &mut ws));
            }
            symbols = state.decision_rule();
            if let Some(word) = symbols.iter().copied().collect::<Option<Vec<u8>>>() {
                if self.matrix.is_codeword(&word)? {
                    return Ok(DecodeResult {
                        symbols,
                        status: DecodeStatus::Codeword,
                        iterations: iteration,
                        trace,
                        ops: ws.op_counts(),
                    });
                }
            }
        }
        Ok(DecodeResult {
            symbols,
            status: DecodeStatus::MaxIters,
            iterations: self.config.max_iters,
            trace,
            ops: ws.op_counts(),
        })
    }
}
