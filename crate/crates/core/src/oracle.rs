//! Brute-force reference implementations used for testing and by the
//! `verify` workflow: single parity-check codeword enumeration, exhaustive
//! check-node marginals, and maximum-likelihood decoding of tiny codes.
//!
//! Everything here evaluates defining sums and minima directly over
//! enumerated codewords, independently of the trellis sweeps it is used to
//! check. Hard size guards reject inputs beyond desk scale.

use crate::algebra::RingSpec;
use crate::channel::LlrMatrix;
use crate::code::ParityCheckMatrix;
use crate::semiring::{Kappa, ABSORBING};
use crate::trellis::RowMarginals;
use crate::{Error, Result};

/// Enumeration guard shared by the oracles.
const MAX_ENUM: u64 = 10_000_000;

fn checked_pow(q: usize, e: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(q as u64)?;
        if acc > MAX_ENUM {
            return None;
        }
    }
    Some(acc)
}

/// All codewords of the single parity-check code with the given row
/// coefficients: vectors `b` with `sum_t h_t * b_t = 0`.
///
/// Guarded to `d <= 8` and `q^(d-1) <= 1e7`. When at least one coefficient
/// is invertible the count is exactly `q^(d-1)`.
pub fn enumerate_spc(ring: &RingSpec, coeffs: &[u8]) -> Result<Vec<Vec<u8>>> {
    let d = coeffs.len();
    let q = ring.q();
    if d == 0 {
        return Err(Error::config("empty row"));
    }
    if d > 8 || checked_pow(q, d - 1).is_none() {
        return Err(Error::SizeGuard(format!(
            "SPC enumeration q={q} d={d} exceeds q^(d-1) <= {MAX_ENUM}"
        )));
    }
    // preimages of the last coefficient: solutions of h_d * b = t
    let h_last = coeffs[d - 1];
    let mut preimage: Vec<Vec<u8>> = vec![Vec::new(); q];
    for b in 0..q as u8 {
        preimage[ring.mul(h_last, b) as usize].push(b);
    }
    let mut out = Vec::new();
    let mut prefix = vec![0u8; d - 1];
    loop {
        let sigma = prefix
            .iter()
            .zip(coeffs)
            .fold(0u8, |acc, (&b, &h)| ring.add(acc, ring.mul(h, b)));
        for &b in &preimage[ring.neg(sigma) as usize] {
            let mut word = prefix.clone();
            word.push(b);
            out.push(word);
        }
        // odometer over the prefix, last position fastest, so the output is
        // in lexicographic order
        let mut t = d - 1;
        loop {
            if t == 0 {
                return Ok(out);
            }
            t -= 1;
            prefix[t] += 1;
            if (prefix[t] as usize) < q {
                break;
            }
            prefix[t] = 0;
        }
    }
}

/// Exhaustive check-node marginals: direct evaluation of the constrained
/// soft-minima over [`enumerate_spc`] output, with slice-based
/// log-sum-exp accumulation in the finite-kappa case.
///
/// `v_hat` holds one `(q-1)`-block per row position.
pub fn brute_marginals(
    ring: &RingSpec,
    coeffs: &[u8],
    v_hat: &[f64],
    kappa: Kappa,
) -> Result<RowMarginals> {
    let d = coeffs.len();
    let q = ring.q();
    let qm1 = q - 1;
    assert_eq!(v_hat.len(), d * qm1);
    let words = enumerate_spc(ring, coeffs)?;
    let cost = |t: usize, b: u8| -> f64 {
        if b == 0 {
            0.0
        } else {
            -v_hat[t * qm1 + (b as usize - 1)]
        }
    };
    // bucket[t][label]: full-weight and position-excluded path costs
    let mut full: Vec<Vec<f64>> = vec![Vec::new(); d * q];
    let mut excl: Vec<Vec<f64>> = vec![Vec::new(); d * q];
    let mut pre = vec![0.0; d + 1];
    let mut suf = vec![0.0; d + 1];
    for b in &words {
        pre[0] = 0.0;
        for t in 0..d {
            pre[t + 1] = pre[t] + cost(t, b[t]);
        }
        suf[d] = 0.0;
        for t in (0..d).rev() {
            suf[t] = cost(t, b[t]) + suf[t + 1];
        }
        for t in 0..d {
            full[t * q + b[t] as usize].push(pre[d]);
            excl[t * q + b[t] as usize].push(pre[t] + suf[t + 1]);
        }
    }
    let mut out = RowMarginals::sized(d, qm1);
    let mut label_mins = vec![ABSORBING; q];
    for t in 0..d {
        for label in 0..q {
            label_mins[label] = kappa.softmin_slice(&full[t * q + label]);
        }
        for r in 1..q {
            let c_r = kappa.softmin_slice(&excl[t * q + r]);
            let mut c_rbar = ABSORBING;
            for (label, &v) in label_mins.iter().enumerate() {
                if label != r {
                    c_rbar = kappa.softmin(c_rbar, v);
                }
            }
            out.c_r[t * qm1 + (r - 1)] = -c_r;
            out.c_rbar[t * qm1 + (r - 1)] = -c_rbar;
        }
    }
    Ok(out)
}

/// All codewords of a tiny code, in lexicographic order.
///
/// Guarded to `n <= 8` and `q^n <= 1e7`.
pub fn enumerate_codewords(matrix: &ParityCheckMatrix) -> Result<Vec<Vec<u8>>> {
    let n = matrix.num_cols();
    let q = matrix.ring().q();
    if n > 8 || checked_pow(q, n).is_none() {
        return Err(Error::SizeGuard(format!(
            "codeword enumeration q={q} n={n} exceeds q^n <= {MAX_ENUM}"
        )));
    }
    let mut out = Vec::new();
    let mut word = vec![0u8; n];
    loop {
        if matrix.is_codeword(&word)? {
            out.push(word.clone());
        }
        let mut t = n;
        loop {
            if t == 0 {
                return Ok(out);
            }
            t -= 1;
            word[t] += 1;
            if (word[t] as usize) < q {
                break;
            }
            word[t] = 0;
        }
    }
}

/// Channel cost `sum_i lambda_i^(c_i)` of a word (zero symbols cost 0).
pub fn word_cost(llr: &LlrMatrix, word: &[u8]) -> f64 {
    word.iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(i, &c)| llr.block(i)[c as usize - 1])
        .sum()
}

/// Exhaustive maximum-likelihood decoding of a tiny code: the codeword of
/// minimum channel cost, ties resolved to the lexicographically first.
pub fn exhaustive_ml(matrix: &ParityCheckMatrix, llr: &LlrMatrix) -> Result<(Vec<u8>, f64)> {
    if llr.len() != matrix.num_cols() {
        return Err(Error::dimension(format!(
            "LLR rows {} != block length {}",
            llr.len(),
            matrix.num_cols()
        )));
    }
    let words = enumerate_codewords(matrix)?;
    Ok(ml_among(&words, llr))
}

/// Minimum-cost word of a pre-enumerated codebook (lexicographic tie-break
/// given a lexicographically sorted codebook).
pub fn ml_among(codebook: &[Vec<u8>], llr: &LlrMatrix) -> (Vec<u8>, f64) {
    let mut best: Option<(&Vec<u8>, f64)> = None;
    for word in codebook {
        let cost = word_cost(llr, word);
        match best {
            Some((_, c)) if cost >= c => {}
            _ => best = Some((word, cost)),
        }
    }
    let (word, cost) = best.expect("codebook contains the all-zero word");
    (word.clone(), cost)
}
