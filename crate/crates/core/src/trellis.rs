//! Partial-syndrome trellis of one nonbinary single parity-check row.
//!
//! The trellis for a row with coefficients `h_1 .. h_d` has the full ring as
//! state set at every time `0..=d`; a branch labeled `b` joins state `s` to
//! state `s + h_t * b`, so the state at time `t` is the partial syndrome of
//! the first `t` symbols and codewords are exactly the paths from state 0 to
//! state 0. Parallel branches occur when a coefficient is a zero divisor.
//!
//! All sweeps run in the cost domain of [`Kappa`] (see [`crate::semiring`]):
//! the branch cost of label `b` is `<-v_hat_t, xi(b)>`, a path cost is the
//! sum of its branch costs, and accumulating over paths with the soft (or
//! exact) minimum yields, up to sign, the constrained check-node marginals
//!
//! ```text
//! C_{j,i,r}    = -softmin_{b in B_j, b_i = r}  <-v~_j, Xi(b~)>   (position i excluded)
//! C_{j,i,rbar} = -softmin_{b in B_j, b_i != r} <-v^_j, Xi(b)>
//! ```
//!
//! computed by one forward and one backward sweep plus a per-position
//! combination step, `O(d q^2)` branch operations per row in total. The
//! alternative forward metric `mu_bar` trades a factor-`q` memory increase
//! for a shorter second phase; it is computed alongside `mu`, never
//! recursively from itself. A min-plus backward sweep with a greedy forward
//! walk doubles as the Viterbi search used by the subgradient decoder.

use crate::algebra::RingSpec;
use crate::semiring::{Kappa, ABSORBING, IDENTITY};
use crate::{Error, Result};

/// Trellis of one single parity-check row. Immutable; per-worker mutable
/// state lives in [`TrellisMetrics`].
#[derive(Clone, Debug)]
pub struct SpcTrellis {
    ring: RingSpec,
    coeffs: Vec<u8>,
}

/// State-metric workspace for one worker: forward/backward metrics, the
/// optional alternative forward metric, scratch rows, and the branch
/// operation counter used by the complexity assertions.
#[derive(Clone, Debug, Default)]
pub struct TrellisMetrics {
    q: usize,
    d: usize,
    /// `mu[t * q + s]`, `t in 0..=d`.
    pub mu: Vec<f64>,
    /// `nu[t * q + s]`, `t in 0..=d`.
    pub nu: Vec<f64>,
    /// `mu_bar[(t * q + s) * (q - 1) + (r - 1)]`; filled by `alt_forward`.
    pub mu_bar: Vec<f64>,
    acc: Vec<f64>,
    pre: Vec<f64>,
    suf: Vec<f64>,
    branch_ops: u64,
}

/// Check-node marginals of one row: `c_r` and `c_rbar` hold the log-domain
/// values `C_{j,i,r}` and `C_{j,i,rbar}` indexed by `(position, r)`.
#[derive(Clone, Debug, Default)]
pub struct RowMarginals {
    qm1: usize,
    pub c_r: Vec<f64>,
    pub c_rbar: Vec<f64>,
}

impl RowMarginals {
    pub fn sized(d: usize, qm1: usize) -> Self {
        RowMarginals {
            qm1,
            c_r: vec![0.0; d * qm1],
            c_rbar: vec![0.0; d * qm1],
        }
    }

    fn ensure(&mut self, d: usize, qm1: usize) {
        self.qm1 = qm1;
        self.c_r.clear();
        self.c_r.resize(d * qm1, 0.0);
        self.c_rbar.clear();
        self.c_rbar.resize(d * qm1, 0.0);
    }

    /// `C_{j,i,r}` for 0-based row position `t` and nonzero element `r`.
    #[inline]
    pub fn c_r(&self, t: usize, r: u8) -> f64 {
        self.c_r[t * self.qm1 + (r as usize - 1)]
    }

    /// `C_{j,i,rbar}` for 0-based row position `t` and nonzero element `r`.
    #[inline]
    pub fn c_rbar(&self, t: usize, r: u8) -> f64 {
        self.c_rbar[t * self.qm1 + (r as usize - 1)]
    }
}

impl TrellisMetrics {
    pub fn new() -> Self {
        Self::default()
    }

    fn ensure(&mut self, q: usize, d: usize) {
        self.q = q;
        self.d = d;
        let states = (d + 1) * q;
        self.mu.clear();
        self.mu.resize(states, ABSORBING);
        self.nu.clear();
        self.nu.resize(states, ABSORBING);
        self.acc.clear();
        self.acc.resize(q, ABSORBING);
        self.pre.clear();
        self.pre.resize(q + 1, ABSORBING);
        self.suf.clear();
        self.suf.resize(q + 1, ABSORBING);
    }

    fn ensure_mu_bar(&mut self) {
        let len = (self.d + 1) * self.q * (self.q - 1);
        self.mu_bar.clear();
        self.mu_bar.resize(len, ABSORBING);
    }

    #[inline]
    pub fn mu_at(&self, t: usize, s: u8) -> f64 {
        self.mu[t * self.q + s as usize]
    }

    #[inline]
    pub fn nu_at(&self, t: usize, s: u8) -> f64 {
        self.nu[t * self.q + s as usize]
    }

    #[inline]
    pub fn mu_bar_at(&self, t: usize, s: u8, r: u8) -> f64 {
        self.mu_bar[(t * self.q + s as usize) * (self.q - 1) + (r as usize - 1)]
    }

    /// Branch operations performed since the last [`Self::reset_ops`].
    pub fn branch_ops(&self) -> u64 {
        self.branch_ops
    }

    pub fn reset_ops(&mut self) {
        self.branch_ops = 0;
    }
}

/// Cost of the branch labeled `b` at 0-based position `t`:
/// `<-v_hat_t, xi(b)>`, i.e. `-v_hat[t][b]` for nonzero `b` and 0 otherwise.
#[inline]
fn branch_cost(v_hat: &[f64], qm1: usize, t: usize, b: u8) -> f64 {
    if b == 0 {
        IDENTITY
    } else {
        -v_hat[t * qm1 + (b as usize - 1)]
    }
}

impl SpcTrellis {
    pub fn new(ring: RingSpec, coeffs: Vec<u8>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::config("trellis needs at least one coefficient"));
        }
        for &h in &coeffs {
            if h == 0 || !ring.contains(h) {
                return Err(Error::config(format!(
                    "trellis coefficient {h} invalid in {}",
                    ring.name()
                )));
            }
        }
        Ok(SpcTrellis { ring, coeffs })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// Row degree `d`.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    fn check_input(&self, v_hat: &[f64]) {
        let qm1 = self.ring.q() - 1;
        assert_eq!(
            v_hat.len(),
            self.degree() * qm1,
            "branch metric input must hold one (q-1)-block per row position"
        );
    }

    /// Forward sweep: `mu[t][s]` accumulates all length-`t` prefixes with
    /// partial syndrome `s`; boundary `mu[0][0] = identity`, absorbing
    /// elsewhere.
    pub fn forward(&self, v_hat: &[f64], kappa: Kappa, m: &mut TrellisMetrics) {
        self.check_input(v_hat);
        let q = self.ring.q();
        let qm1 = q - 1;
        m.ensure(q, self.degree());
        m.mu[0] = IDENTITY;
        for t in 1..=self.degree() {
            let h = self.coeffs[t - 1];
            for s in 0..q as u8 {
                let mut acc = ABSORBING;
                for b in 0..q as u8 {
                    let p = self.ring.sub(s, self.ring.mul(h, b));
                    let w = m.mu[(t - 1) * q + p as usize] + branch_cost(v_hat, qm1, t - 1, b);
                    acc = kappa.softmin(acc, w);
                }
                m.mu[t * q + s as usize] = acc;
            }
            m.branch_ops += (q * q) as u64;
        }
    }

    /// Backward sweep: `nu[t][s]` accumulates all suffixes from time `t`
    /// whose partial syndrome is `-s`; boundary `nu[d][0] = identity`.
    pub fn backward(&self, v_hat: &[f64], kappa: Kappa, m: &mut TrellisMetrics) {
        self.check_input(v_hat);
        let q = self.ring.q();
        let qm1 = q - 1;
        let d = self.degree();
        if m.q != q || m.d != d || m.nu.len() != (d + 1) * q {
            m.ensure(q, d);
        } else {
            // keep mu intact so marginal sweeps can share the workspace
            for v in m.nu.iter_mut() {
                *v = ABSORBING;
            }
        }
        m.nu[d * q] = IDENTITY;
        for t in (0..d).rev() {
            let h = self.coeffs[t];
            for s in 0..q as u8 {
                let mut acc = ABSORBING;
                for b in 0..q as u8 {
                    let nx = self.ring.add(s, self.ring.mul(h, b));
                    let w = m.nu[(t + 1) * q + nx as usize] + branch_cost(v_hat, qm1, t, b);
                    acc = kappa.softmin(acc, w);
                }
                m.nu[t * q + s as usize] = acc;
            }
            m.branch_ops += (q * q) as u64;
        }
    }

    /// Alternative forward metric `mu_bar[t][s][r]`: prefixes with partial
    /// syndrome `s` whose last symbol differs from `r`. Not expressible as
    /// a recursion in itself; each section is derived from `mu[t-1]`, so
    /// [`Self::forward`] must have run on the same input first.
    pub fn alt_forward(&self, v_hat: &[f64], kappa: Kappa, m: &mut TrellisMetrics) {
        self.check_input(v_hat);
        let q = self.ring.q();
        let qm1 = q - 1;
        assert_eq!(m.q, q, "forward() must run before alt_forward()");
        m.ensure_mu_bar();
        for t in 1..=self.degree() {
            let h = self.coeffs[t - 1];
            for s in 0..q as u8 {
                for r in 1..q as u8 {
                    let mut acc = ABSORBING;
                    for b in 0..q as u8 {
                        if b == r {
                            continue;
                        }
                        let p = self.ring.sub(s, self.ring.mul(h, b));
                        let w =
                            m.mu[(t - 1) * q + p as usize] + branch_cost(v_hat, qm1, t - 1, b);
                        acc = kappa.softmin(acc, w);
                    }
                    m.mu_bar[(t * q + s as usize) * qm1 + (r as usize - 1)] = acc;
                }
            }
            m.branch_ops += (q * qm1 * qm1) as u64;
        }
    }

    /// Both marginal families for every `(position, r)` pair, via the
    /// branch-sum form: per position, branch products `mu ⊗ nu` are
    /// aggregated per label and labels are combined with an all-but-one
    /// prefix/suffix pass.
    pub fn marginals(
        &self,
        v_hat: &[f64],
        kappa: Kappa,
        m: &mut TrellisMetrics,
        out: &mut RowMarginals,
    ) {
        let q = self.ring.q();
        let qm1 = q - 1;
        let d = self.degree();
        self.forward(v_hat, kappa, m);
        self.backward(v_hat, kappa, m);
        out.ensure(d, qm1);
        for t in 1..=d {
            let h = self.coeffs[t - 1];
            // acc[b] = softmin over states of mu[t-1][s - h b] + nu[t][s]
            for b in 0..q as u8 {
                let mut acc = ABSORBING;
                for s in 0..q as u8 {
                    let p = self.ring.sub(s, self.ring.mul(h, b));
                    acc = kappa.softmin(acc, m.mu[(t - 1) * q + p as usize] + m.nu[t * q + s as usize]);
                }
                m.acc[b as usize] = acc;
            }
            m.branch_ops += (q * q) as u64;
            for r in 1..q {
                out.c_r[(t - 1) * qm1 + (r - 1)] = -m.acc[r];
            }
            // labels combined with the branch cost, then excluded one at a time
            m.pre[0] = ABSORBING;
            for b in 0..q {
                let w = m.acc[b] + branch_cost(v_hat, qm1, t - 1, b as u8);
                m.pre[b + 1] = kappa.softmin(m.pre[b], w);
                m.suf[b] = w; // stash w; folded below
            }
            let mut run = ABSORBING;
            for b in (0..q).rev() {
                let w = m.suf[b];
                m.suf[b] = kappa.softmin(run, w);
                run = m.suf[b];
            }
            m.suf[q] = ABSORBING;
            for r in 1..q {
                let excl = kappa.softmin(m.pre[r], m.suf[r + 1]);
                out.c_rbar[(t - 1) * qm1 + (r - 1)] = -excl;
            }
        }
    }

    /// Same marginals via the alternative forward metric: the `rbar` family
    /// reads `mu_bar ⊗ nu` over states only.
    pub fn marginals_alt(
        &self,
        v_hat: &[f64],
        kappa: Kappa,
        m: &mut TrellisMetrics,
        out: &mut RowMarginals,
    ) {
        let q = self.ring.q();
        let qm1 = q - 1;
        let d = self.degree();
        self.forward(v_hat, kappa, m);
        self.backward(v_hat, kappa, m);
        self.alt_forward(v_hat, kappa, m);
        out.ensure(d, qm1);
        for t in 1..=d {
            let h = self.coeffs[t - 1];
            for r in 1..q as u8 {
                let mut acc = ABSORBING;
                for s in 0..q as u8 {
                    let p = self.ring.sub(s, self.ring.mul(h, r));
                    acc = kappa.softmin(acc, m.mu[(t - 1) * q + p as usize] + m.nu[t * q + s as usize]);
                }
                out.c_r[(t - 1) * qm1 + (r as usize - 1)] = -acc;

                let mut acc_bar = ABSORBING;
                for s in 0..q as u8 {
                    let mb = m.mu_bar[(t * q + s as usize) * qm1 + (r as usize - 1)];
                    acc_bar = kappa.softmin(acc_bar, mb + m.nu[t * q + s as usize]);
                }
                out.c_rbar[(t - 1) * qm1 + (r as usize - 1)] = -acc_bar;
            }
            m.branch_ops += (qm1 * q) as u64;
        }
    }

    /// Soft minimum of `<-v_hat, Xi(b)>` over all codewords of the row:
    /// the forward terminal metric `mu[d][0]`. With `Kappa::Inf` this is the
    /// check-node term of the dual objective.
    pub fn codeword_softmin(&self, v_hat: &[f64], kappa: Kappa, m: &mut TrellisMetrics) -> f64 {
        self.forward(v_hat, kappa, m);
        m.mu[self.degree() * self.ring.q()]
    }

    /// Minimum-cost codeword `argmin_b <-v_hat, Xi(b)>` and its cost.
    ///
    /// Ties resolve to the lexicographically smallest codeword (earlier
    /// positions first, labels in element order with 0 first): the backward
    /// min-plus sweep scores every completion, and a forward walk takes the
    /// smallest label that still completes optimally. The returned value is
    /// re-accumulated along the survivor in section order, so it equals the
    /// plain left-to-right sum for that codeword.
    pub fn viterbi_best(&self, v_hat: &[f64], m: &mut TrellisMetrics) -> (Vec<u8>, f64) {
        let q = self.ring.q();
        let qm1 = q - 1;
        let d = self.degree();
        self.backward(v_hat, Kappa::Inf, m);
        let mut word = Vec::with_capacity(d);
        let mut state = 0u8;
        let mut value = 0.0;
        for t in 0..d {
            let h = self.coeffs[t];
            let mut best_b = 0u8;
            let mut best_c = f64::INFINITY;
            for b in 0..q as u8 {
                let nx = self.ring.add(state, self.ring.mul(h, b));
                let c = branch_cost(v_hat, qm1, t, b) + m.nu[(t + 1) * q + nx as usize];
                if c < best_c {
                    best_c = c;
                    best_b = b;
                }
            }
            m.branch_ops += q as u64;
            debug_assert!(best_c.is_finite());
            value += branch_cost(v_hat, qm1, t, best_b);
            state = self.ring.add(state, self.ring.mul(h, best_b));
            word.push(best_b);
        }
        debug_assert_eq!(state, 0, "survivor must be a codeword");
        (word, value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> RingSpec {
        RingSpec::new_zq(4).unwrap()
    }

    #[test]
    fn branch_structure_parallel_and_bijective() {
        let t = SpcTrellis::new(z4(), vec![2]).unwrap();
        // labels 0 and 2 both map state 0 to 0 under the zero divisor 2
        let ring = t.ring();
        assert_eq!(ring.mul(2, 0), 0);
        assert_eq!(ring.mul(2, 2), 0);
        let gf4 = RingSpec::new_gf(2).unwrap();
        let zeta = 0b10u8;
        let mut targets: Vec<u8> = (0..4).map(|b| gf4.mul(zeta, b)).collect();
        targets.sort_unstable();
        targets.dedup();
        assert_eq!(targets.len(), 4, "invertible coefficient is bijective");
    }

    #[test]
    fn uniform_metrics() {
        // all v_hat = 0: every prefix costs 0, so mu[t][s] is 0 on every
        // reachable state in both semirings
        let t = SpcTrellis::new(z4(), vec![1, 1]).unwrap();
        let v = vec![0.0; 6];
        let mut m = TrellisMetrics::new();
        for kappa in [Kappa::Finite(1.0), Kappa::Inf] {
            t.forward(&v, Kappa::Inf, &mut m);
            for s in 0..4 {
                assert_eq!(m.mu_at(1, s), 0.0);
            }
            if kappa.is_finite() {
                // four paths of cost 0 into each state at t = 2
                t.forward(&v, kappa, &mut m);
                assert!((m.mu_at(2, 0) - -(4.0f64.ln())).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_conditions() {
        let t = SpcTrellis::new(z4(), vec![1, 3]).unwrap();
        let v = vec![0.5, -1.0, 2.0, 0.0, 0.3, -0.2];
        let mut m = TrellisMetrics::new();
        t.forward(&v, Kappa::Inf, &mut m);
        t.backward(&v, Kappa::Inf, &mut m);
        assert_eq!(m.mu_at(0, 0), IDENTITY);
        for r in 1..4 {
            assert_eq!(m.mu_at(0, r), ABSORBING);
            assert_eq!(m.nu_at(2, r), ABSORBING);
        }
        assert_eq!(m.nu_at(2, 0), IDENTITY);
    }

    #[test]
    fn alt_forward_single_section() {
        // d = 1, coefficient 1: mu_bar[1](s, r) = g(s) unless s = r
        let t = SpcTrellis::new(z4(), vec![1]).unwrap();
        let v = vec![1.0, -2.0, 0.5];
        let mut m = TrellisMetrics::new();
        t.forward(&v, Kappa::Inf, &mut m);
        t.alt_forward(&v, Kappa::Inf, &mut m);
        for s in 0..4u8 {
            for r in 1..4u8 {
                let want = if s == r {
                    ABSORBING
                } else if s == 0 {
                    0.0
                } else {
                    -v[s as usize - 1]
                };
                assert_eq!(m.mu_bar_at(1, s, r), want, "s={s} r={r}");
            }
        }
    }

    #[test]
    fn mu_bar_recombination() {
        // adding back the r-labeled branch recovers mu
        let ring = z4();
        let t = SpcTrellis::new(ring.clone(), vec![1, 2, 3]).unwrap();
        let v: Vec<f64> = (0..9).map(|k| (k as f64) * 0.37 - 1.4).collect();
        let mut m = TrellisMetrics::new();
        for kappa in [Kappa::Finite(2.0), Kappa::Inf] {
            t.forward(&v, kappa, &mut m);
            t.alt_forward(&v, kappa, &mut m);
            for t_idx in 1..=3usize {
                let h = t.coeffs()[t_idx - 1];
                for s in 0..4u8 {
                    for r in 1..4u8 {
                        let p = ring.sub(s, ring.mul(h, r));
                        let r_branch =
                            m.mu_at(t_idx - 1, p) + branch_cost(&v, 3, t_idx - 1, r);
                        let whole = kappa.softmin(m.mu_bar_at(t_idx, s, r), r_branch);
                        let diff = (whole - m.mu_at(t_idx, s)).abs();
                        assert!(
                            diff < 1e-9 || (whole.is_infinite() && m.mu_at(t_idx, s).is_infinite()),
                            "recombination at t={t_idx} s={s} r={r}: {whole} vs {}",
                            m.mu_at(t_idx, s)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn flow_conservation_across_cuts() {
        let t = SpcTrellis::new(z4(), vec![1, 2, 3, 1]).unwrap();
        let v: Vec<f64> = (0..12).map(|k| ((k * 7 % 5) as f64) * 0.61 - 1.2).collect();
        let mut m = TrellisMetrics::new();
        for kappa in [Kappa::Finite(1.0), Kappa::Finite(10.0), Kappa::Inf] {
            t.forward(&v, kappa, &mut m);
            t.backward(&v, kappa, &mut m);
            let mut cuts = Vec::new();
            for cut in 0..=4usize {
                let mut acc = ABSORBING;
                for s in 0..4u8 {
                    acc = kappa.softmin(acc, m.mu_at(cut, s) + m.nu_at(cut, s));
                }
                cuts.push(acc);
            }
            for w in cuts.windows(2) {
                assert!((w[0] - w[1]).abs() < 1e-9, "{kappa:?}: {cuts:?}");
            }
        }
    }

    #[test]
    fn marginal_trivial_examples() {
        // row (1,1) over Z4, all v_hat = 0, kappa = 1: exactly one codeword
        // per fixed symbol, so C_{j,i,r} = 0; three codewords avoid each r
        let t = SpcTrellis::new(z4(), vec![1, 1]).unwrap();
        let v = vec![0.0; 6];
        let mut m = TrellisMetrics::new();
        let mut out = RowMarginals::default();
        t.marginals(&v, Kappa::Finite(1.0), &mut m, &mut out);
        for pos in 0..2 {
            for r in 1..4u8 {
                assert!((out.c_r(pos, r) - 0.0).abs() < 1e-12);
                assert!((out.c_rbar(pos, r) - 3.0f64.ln()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn marginal_min_sum_forced_symbol() {
        // v_hat_2 = (0,0,5): fixing b_1 = 1 forces b_2 = 3, so the excluded
        // weight is v_hat_2^(3) = 5
        let t = SpcTrellis::new(z4(), vec![1, 1]).unwrap();
        let mut v = vec![0.0; 6];
        v[3 + 2] = 5.0;
        let mut m = TrellisMetrics::new();
        let mut out = RowMarginals::default();
        t.marginals(&v, Kappa::Inf, &mut m, &mut out);
        assert_eq!(out.c_r(0, 1), 5.0);
    }

    #[test]
    fn viterbi_examples() {
        let t = SpcTrellis::new(z4(), vec![1, 1]).unwrap();
        let mut m = TrellisMetrics::new();
        // zero input: all codewords cost 0, tie-break picks the zero word
        let (word, value) = t.viterbi_best(&[0.0; 6], &mut m);
        assert_eq!(word, vec![0, 0]);
        assert_eq!(value, 0.0);
        // v_hat_1 = (10,0,0), v_hat_2 = (0,0,10) rewards (1,3)
        let v = vec![10.0, 0.0, 0.0, 0.0, 0.0, 10.0];
        let (word, value) = t.viterbi_best(&v, &mut m);
        assert_eq!(word, vec![1, 3]);
        assert_eq!(value, -20.0);
    }

    #[test]
    fn viterbi_value_is_minimal() {
        let ring = z4();
        let t = SpcTrellis::new(ring.clone(), vec![3, 2, 1]).unwrap();
        let v: Vec<f64> = (0..9).map(|k| ((k * 13 % 7) as f64) - 3.0).collect();
        let mut m = TrellisMetrics::new();
        let (word, value) = t.viterbi_best(&v, &mut m);
        assert!(t
            .ring()
            .add(
                ring.mul(3, word[0]),
                ring.add(ring.mul(2, word[1]), ring.mul(1, word[2]))
            )
            == 0);
        // no codeword beats the survivor
        for b0 in 0..4u8 {
            for b1 in 0..4u8 {
                for b2 in 0..4u8 {
                    let syn = ring.add(
                        ring.mul(3, b0),
                        ring.add(ring.mul(2, b1), ring.mul(1, b2)),
                    );
                    if syn != 0 {
                        continue;
                    }
                    let cost: f64 = [b0, b1, b2]
                        .iter()
                        .enumerate()
                        .map(|(t_idx, &b)| branch_cost(&v, 3, t_idx, b))
                        .sum();
                    assert!(value <= cost + 1e-12);
                }
            }
        }
    }

    #[test]
    fn large_kappa_approaches_min_sum() {
        let t = SpcTrellis::new(z4(), vec![1, 2, 3]).unwrap();
        let v: Vec<f64> = (0..9).map(|k| ((k * 11 % 7) as f64) * 0.5 - 1.5).collect();
        let mut m = TrellisMetrics::new();
        let mut soft = RowMarginals::default();
        let mut hard = RowMarginals::default();
        t.marginals(&v, Kappa::Finite(1e3), &mut m, &mut soft);
        t.marginals(&v, Kappa::Inf, &mut m, &mut hard);
        for pos in 0..3 {
            for r in 1..4u8 {
                assert!((soft.c_r(pos, r) - hard.c_r(pos, r)).abs() < 1e-2);
                assert!((soft.c_rbar(pos, r) - hard.c_rbar(pos, r)).abs() < 1e-2);
            }
        }
    }

    #[test]
    fn branch_ops_bound() {
        // one marginal set costs at most 3 d q^2 branch operations
        let t = SpcTrellis::new(RingSpec::new_gf(3).unwrap(), vec![1, 2, 3, 4, 5]).unwrap();
        let v = vec![0.25; 5 * 7];
        let mut m = TrellisMetrics::new();
        let mut out = RowMarginals::default();
        m.reset_ops();
        t.marginals(&v, Kappa::Inf, &mut m, &mut out);
        assert_eq!(m.branch_ops(), 3 * 5 * 64);
    }
}
