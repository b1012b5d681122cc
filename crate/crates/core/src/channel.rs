//! q-ary PSK modulation, AWGN transmission, and per-symbol log-likelihood
//! ratio blocks.
//!
//! Symbols map directly onto a unit-energy PSK constellation: the element
//! with integer label `k` (Z_q value, or polynomial-basis value for fields)
//! goes to `e^{i 2 pi k / q}`. The labeling is overridable. SNR is Es/N0 in
//! dB with `Es = 1` and `N0 = 2 sigma^2`, so `sigma = sqrt(10^(-snr/10)/2)`.
//! LLRs use natural logarithms:
//!
//! ```text
//! lambda_i^(r) = ln p(y_i|0) / p(y_i|r) = (|y_i - s_r|^2 - |y_i - s_0|^2) / (2 sigma^2)
//! ```

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// A unit-energy constellation with an element-to-point labeling.
#[derive(Clone, Debug)]
pub struct Modulation {
    q: usize,
    points: Vec<Complex64>,
    labeling: Vec<usize>,
}

impl Modulation {
    /// q-ary PSK with the natural labeling `k -> e^{i 2 pi k / q}`.
    pub fn psk(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::config(format!("PSK order must be >= 2, got {q}")));
        }
        let points = (0..q)
            .map(|k| {
                let phase = 2.0 * std::f64::consts::PI * k as f64 / q as f64;
                Complex64::new(phase.cos(), phase.sin())
            })
            .collect();
        Ok(Modulation {
            q,
            points,
            labeling: (0..q).collect(),
        })
    }

    /// Replaces the element-to-point map; must be a bijection on `0..q`.
    pub fn with_labeling(mut self, labeling: Vec<usize>) -> Result<Self> {
        if labeling.len() != self.q {
            return Err(Error::config("labeling length must equal q"));
        }
        let mut seen = vec![false; self.q];
        for &p in &labeling {
            if p >= self.q || seen[p] {
                return Err(Error::config("labeling must be a bijection"));
            }
            seen[p] = true;
        }
        self.labeling = labeling;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn modulate(&self, symbol: u8) -> Complex64 {
        self.points[self.labeling[symbol as usize]]
    }

    pub fn map_word(&self, word: &[u8]) -> Vec<Complex64> {
        word.iter().map(|&c| self.modulate(c)).collect()
    }
}

/// Noise standard deviation per real dimension for an Es/N0 value in dB.
pub fn sigma_from_es_n0_db(snr_db: f64) -> f64 {
    (10f64.powf(-snr_db / 10.0) / 2.0).sqrt()
}

/// Adds circular complex Gaussian noise with variance `sigma^2` per real
/// dimension.
pub fn transmit_awgn(
    points: &[Complex64],
    sigma: f64,
    rng: &mut impl Rng,
) -> Result<Vec<Complex64>> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::config(format!("sigma must be positive, got {sigma}")));
    }
    Ok(points
        .iter()
        .map(|s| {
            let nr: f64 = rng.sample(StandardNormal);
            let ni: f64 = rng.sample(StandardNormal);
            s + Complex64::new(sigma * nr, sigma * ni)
        })
        .collect())
}

/// LLR block of one received point, laid out in element order.
pub fn llr_block(modulation: &Modulation, y: Complex64, sigma: f64) -> Vec<f64> {
    let d0 = (y - modulation.modulate(0)).norm_sqr();
    let denom = 2.0 * sigma * sigma;
    (1..modulation.order() as u8)
        .map(|r| ((y - modulation.modulate(r)).norm_sqr() - d0) / denom)
        .collect()
}

/// Per-symbol LLR blocks `lambda_i = (lambda_i^(r))_{r in R^-}` for a whole
/// frame, stored row-major with the canonical element ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrMatrix {
    n: usize,
    width: usize,
    data: Vec<f64>,
}

impl LlrMatrix {
    pub fn new(n: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || data.len() != n * width {
            return Err(Error::dimension(format!(
                "LLR data length {} != {n} x {width}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("LLR entries must be finite"));
        }
        Ok(LlrMatrix { n, width, data })
    }

    /// Demodulates a received frame.
    pub fn from_received(
        modulation: &Modulation,
        received: &[Complex64],
        sigma: f64,
    ) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::config(format!("sigma must be positive, got {sigma}")));
        }
        let width = modulation.order() - 1;
        let mut data = Vec::with_capacity(received.len() * width);
        for &y in received {
            data.extend(llr_block(modulation, y, sigma));
        }
        Self::new(received.len(), width, data)
    }

    /// Parses one whitespace-separated line of `q - 1` reals per symbol.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| Error::parse(format!("line {}: bad value {tok:?}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::parse(format!(
                        "line {}: expected {} values, got {}",
                        lineno + 1,
                        first.len(),
                        row.len()
                    )));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::parse("empty LLR file"));
        }
        let width = rows[0].len();
        let n = rows.len();
        Self::new(n, width, rows.concat())
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Block width `q - 1`.
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn block(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }
}
