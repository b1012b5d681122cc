//! Incremental subgradient LCLP decoding.
//!
//! Works on the same dual as the coordinate-ascent decoder but node by
//! node: for each check `j` the component function `m_j(v_j) = min_b
//! <-v_j, Xi(b)>` admits the subgradient `-Xi(b*)` at any minimizer `b*`,
//! found by a Viterbi search on the row trellis; the row's blocks move one
//! step along it. Column components are handled the same way over the
//! constant words, except that the channel-coupled coordinate `u_{i,0}`
//! stays fixed (projected step on the free coordinates). One iteration
//! performs all check steps (ascending), then all column steps (ascending),
//! with the iteration's step size; that is exactly `m` Viterbi runs and `n`
//! column minimizations. The component minima fall out of the steps as
//! by-products, so a dual-value early-stopping test costs nothing extra.

use crate::channel::LlrMatrix;
use crate::code::{ParityCheckMatrix, TannerGraph};
use crate::lclp_basic::{DecodeResult, DecodeStatus, DualState, Workspace};
use crate::semiring::Kappa;
use crate::trellis::SpcTrellis;
use crate::{Error, Result};

/// Step-size rule of the subgradient iteration.
#[derive(Clone, Debug, PartialEq)]
pub enum StepRule {
    /// `theta_l = theta_1` for all `l`.
    Constant,
    /// `theta_l = theta_{l-1} * factor` whenever `l` is divisible by
    /// `period`; `theta_20` is already decayed under the defaults.
    Staircase { factor: f64, period: usize },
    /// Explicit per-iteration table; the last entry repeats.
    Table(Vec<f64>),
}

/// Step-size schedule `l -> theta_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSchedule {
    pub theta1: f64,
    pub rule: StepRule,
}

impl StepSchedule {
    pub fn constant(theta1: f64) -> Result<Self> {
        Self::checked(theta1, StepRule::Constant)
    }

    /// Staircase rule with the default decay of 0.8 every 20 iterations.
    pub fn staircase(theta1: f64) -> Result<Self> {
        Self::staircase_with(theta1, 0.8, 20)
    }

    pub fn staircase_with(theta1: f64, factor: f64, period: usize) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::config(format!("decay factor must be positive, got {factor}")));
        }
        if period == 0 {
            return Err(Error::config("decay period must be at least 1"));
        }
        Self::checked(theta1, StepRule::Staircase { factor, period })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::config("step table must be nonempty and positive"));
        }
        let theta1 = values[0];
        Self::checked(theta1, StepRule::Table(values))
    }

    fn checked(theta1: f64, rule: StepRule) -> Result<Self> {
        if !(theta1 > 0.0 && theta1.is_finite()) {
            return Err(Error::config(format!("theta1 must be positive, got {theta1}")));
        }
        Ok(StepSchedule { theta1, rule })
    }

    /// Step size at iteration `l >= 1`. The staircase value is produced by
    /// the recurrence (repeated multiplication), which keeps the decayed
    /// values float-exact.
    pub fn step_size(&self, l: usize) -> f64 {
        assert!(l >= 1, "iterations are 1-based");
        match &self.rule {
            StepRule::Constant => self.theta1,
            StepRule::Staircase { factor, period } => {
                let mut theta = self.theta1;
                for _ in 0..l / period {
                    theta *= factor;
                }
                theta
            }
            StepRule::Table(values) => values[(l - 1).min(values.len() - 1)],
        }
    }
}

/// Configuration of the subgradient decoder.
#[derive(Clone, Debug)]
pub struct SubgradConfig {
    pub schedule: StepSchedule,
    pub max_iters: usize,
    /// Stop once successive by-product dual values differ by less than
    /// this; 0 disables early stopping.
    pub early_stop_eps: f64,
    /// Record the by-product dual value after every iteration.
    pub record_trace: bool,
}

impl Default for SubgradConfig {
    fn default() -> Self {
        SubgradConfig {
            schedule: StepSchedule::staircase(0.15).expect("default schedule is valid"),
            max_iters: 100,
            early_stop_eps: 0.0,
            record_trace: false,
        }
    }
}

/// The node-by-node subgradient LCLP decoder for one parity-check matrix.
#[derive(Clone, Debug)]
pub struct SubgradDecoder {
    matrix: ParityCheckMatrix,
    graph: TannerGraph,
    trellises: Vec<SpcTrellis>,
    config: SubgradConfig,
}

impl SubgradDecoder {
    pub fn new(matrix: ParityCheckMatrix, config: SubgradConfig) -> Result<Self> {
        if config.max_iters == 0 {
            return Err(Error::config("max_iters must be at least 1"));
        }
        if config.early_stop_eps < 0.0 {
            return Err(Error::config("early_stop_eps must be nonnegative"));
        }
        let graph = TannerGraph::new(&matrix);
        let trellises = (0..matrix.num_rows())
            .map(|j| {
                let coeffs = matrix.row(j).iter().map(|&(_, h)| h).collect();
                SpcTrellis::new(matrix.ring().clone(), coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubgradDecoder {
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

    pub fn config(&self) -> &SubgradConfig {
        &self.config
    }

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

    /// One check-node step: finds `b* = argmin_b <-v_j, Xi(b)>` by Viterbi,
    /// moves the row's blocks one step along the subgradient `-Xi(b*)`
    /// (through the coupling, `u_{i,j}^(b*_i)` increases by `theta`), and
    /// returns the pre-update component minimum `theta_j`.
    pub fn cn_step(&self, state: &mut DualState, j: usize, theta: f64, ws: &mut Workspace) -> f64 {
        state.gather_row_v_hat(&self.graph, j, &mut ws.v_hat);
        let (word, value) = self.trellises[j].viterbi_best(&ws.v_hat, &mut ws.metrics);
        ws.viterbi_runs += 1;
        for (&e, &b) in self.graph.row_edge_ids(j).iter().zip(&word) {
            if b != 0 {
                state.add_edge_coord(e, b as usize - 1, theta);
            }
        }
        value
    }

    /// One variable-node step: the minimizing constant word is the argmax
    /// of the column sums (ties to the smaller element); the free
    /// coordinates step along the subgradient while `u_{i,0}` stays pinned
    /// to the channel. Returns the pre-update component minimum `phi_i`.
    pub fn vn_step(&self, state: &mut DualState, i: usize, theta: f64, ws: &mut Workspace) -> f64 {
        ws.vn_updates += 1;
        let (best_sym, best_val) = {
            let s = state.sum_block(i);
            let mut best_sym = 0u8;
            let mut best_val = 0.0; // S_i(0)
            for (idx, &v) in s.iter().enumerate() {
                if v > best_val {
                    best_val = v;
                    best_sym = (idx + 1) as u8;
                }
            }
            (best_sym, best_val)
        };
        if best_sym != 0 {
            for &e in self.graph.col_edge_ids(i) {
                state.add_edge_coord(e, best_sym as usize - 1, -theta);
            }
        }
        -best_val
    }

    /// Fresh dual value `sum_i phi_i + sum_j theta_j` of the current state.
    /// The check terms come from a min-plus forward sweep; the per-path
    /// accumulation order equals a plain left-to-right sum, so the result
    /// matches exhaustive enumeration exactly.
    pub fn dual_value(&self, state: &DualState, ws: &mut Workspace) -> f64 {
        let mut total = 0.0;
        for i in 0..self.graph.num_cols() {
            let s = state.sum_block(i);
            let max = s.iter().copied().fold(0.0f64, f64::max);
            total += -max;
        }
        for j in 0..self.graph.num_rows() {
            state.gather_row_v_hat(&self.graph, j, &mut ws.v_hat);
            total += self.trellises[j].codeword_softmin(&ws.v_hat, Kappa::Inf, &mut ws.metrics);
        }
        total
    }

    /// Runs the full decoder on one frame.
    pub fn decode(&self, llr: &LlrMatrix) -> Result<DecodeResult> {
        let mut state = self.new_state(llr)?;
        let mut ws = Workspace::default();
        let mut trace = self.config.record_trace.then(Vec::new);
        let mut symbols = Vec::new();
        let mut prev_value: Option<f64> = None;
        for iteration in 1..=self.config.max_iters {
            let theta = self.config.schedule.step_size(iteration);
            let mut value = 0.0;
            for j in 0..self.graph.num_rows() {
                value += self.cn_step(&mut state, j, theta, &mut ws);
            }
            for i in 0..self.graph.num_cols() {
                value += self.vn_step(&mut state, i, theta, &mut ws);
            }
            if let Some(t) = trace.as_mut() {
                t.push(value);
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
            if self.config.early_stop_eps > 0.0 {
                if let Some(prev) = prev_value {
                    if (value - prev).abs() < self.config.early_stop_eps {
                        return Ok(DecodeResult {
                            symbols,
                            status: DecodeStatus::MaxIters,
                            iterations: iteration,
                            trace,
                            ops: ws.op_counts(),
                        });
                    }
                }
            }
            prev_value = Some(value);
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
