//! Soft-minimum semiring arithmetic shared by the trellis sweeps, the
//! closed-form variable-node terms, and the brute-force oracle.
//!
//! Path weights are accumulated in the "cost" domain: semiring
//! multiplication is ordinary addition, semiring addition is either the
//! soft minimum
//!
//! ```text
//! softmin_k(a, b) = -(1/k) * ln(e^(-k a) + e^(-k b))
//! ```
//!
//! for a finite softening parameter `k`, or the plain minimum in the limit
//! `k -> infinity` (the min-sum semiring). The multiplicative identity is
//! `0.0` and the absorbing element is `+inf`; in the finite-`k` case those
//! correspond to the values 1 and 0 of the underlying sum-product semiring,
//! which is never materialized because `e^(k x)` overflows long before the
//! dual variables do. Accumulation shifts by the running minimum, so
//! arbitrarily large `k * x` products are safe.

use crate::{Error, Result};

/// The softening parameter of the soft-minimum operator, or infinity for
/// the exact minimum. Selects between the log-domain sum-product semiring
/// and the min-sum semiring everywhere a trellis sweep or a constrained
/// minimum is computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kappa {
    Finite(f64),
    Inf,
}

/// Absorbing element of both semirings in the cost domain.
pub const ABSORBING: f64 = f64::INFINITY;

/// Multiplicative identity of both semirings in the cost domain.
pub const IDENTITY: f64 = 0.0;

impl Kappa {
    /// Parses `"inf"` or a positive float.
    pub fn parse(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Kappa::Inf);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::parse(format!("bad kappa value {s:?}")))?;
        Kappa::finite(v)
    }

    /// A finite softening parameter; must be positive.
    pub fn finite(v: f64) -> Result<Self> {
        if v.is_finite() && v > 0.0 {
            Ok(Kappa::Finite(v))
        } else {
            Err(Error::config(format!("kappa must be positive, got {v}")))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Kappa::Finite(_))
    }

    /// Semiring addition of two cost-domain values.
    #[inline]
    pub fn softmin(self, a: f64, b: f64) -> f64 {
        match self {
            Kappa::Inf => a.min(b),
            Kappa::Finite(k) => {
                if a == f64::INFINITY {
                    return b;
                }
                if b == f64::INFINITY {
                    return a;
                }
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                lo - (-k * (hi - lo)).exp().ln_1p() / k
            }
        }
    }

    /// Semiring addition of a slice, shifted by the minimum in one pass.
    pub fn softmin_slice(self, vals: &[f64]) -> f64 {
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        match self {
            Kappa::Inf => lo,
            Kappa::Finite(k) => {
                if lo == f64::INFINITY {
                    return f64::INFINITY;
                }
                let sum: f64 = vals
                    .iter()
                    .filter(|v| v.is_finite())
                    .map(|&v| (-k * (v - lo)).exp())
                    .sum();
                lo - sum.ln() / k
            }
        }
    }
}

impl std::fmt::Display for Kappa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kappa::Inf => write!(f, "inf"),
            Kappa::Finite(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmin_matches_definition() {
        let k = Kappa::Finite(1.0);
        let got = k.softmin(0.5, 2.0);
        let want = -((-0.5f64).exp() + (-2.0f64).exp()).ln();
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn softmin_is_a_lower_bound_on_min() {
        let k = Kappa::Finite(3.0);
        for (a, b) in [(0.0, 0.0), (1.0, -2.5), (10.0, 10.0)] {
            assert!(k.softmin(a, b) <= a.min(b) + 1e-15);
        }
    }

    #[test]
    fn softmin_handles_large_exponents() {
        // k * |x| far beyond exp() range must not overflow.
        let k = Kappa::Finite(10.0);
        let got = k.softmin(-300.0, -100.0);
        assert!((got - -300.0).abs() < 1e-12);
        assert!(got <= -300.0);
    }

    #[test]
    fn absorbing_and_identity() {
        for k in [Kappa::Finite(2.0), Kappa::Inf] {
            assert_eq!(k.softmin(ABSORBING, 1.5), 1.5);
            assert_eq!(k.softmin(1.5, ABSORBING), 1.5);
            assert_eq!(k.softmin(ABSORBING, ABSORBING), ABSORBING);
        }
    }

    #[test]
    fn slice_agrees_with_pairwise_fold() {
        let k = Kappa::Finite(7.0);
        let vals = [0.3, -1.2, 4.0, 0.0, -1.1];
        let folded = vals.iter().fold(f64::INFINITY, |acc, &v| k.softmin(acc, v));
        let batch = k.softmin_slice(&vals);
        assert!((folded - batch).abs() < 1e-13);
        assert_eq!(Kappa::Inf.softmin_slice(&vals), -1.2);
    }

    #[test]
    fn approaches_min_as_kappa_grows() {
        let vals = [0.7, 0.2, 1.4];
        let soft = Kappa::Finite(1e3).softmin_slice(&vals);
        assert!((soft - 0.2).abs() < 1e-2);
    }

    #[test]
    fn parse_kappa() {
        assert_eq!(Kappa::parse("inf").unwrap(), Kappa::Inf);
        assert_eq!(Kappa::parse("10").unwrap(), Kappa::Finite(10.0));
        assert!(Kappa::parse("0").is_err());
        assert!(Kappa::parse("-1").is_err());
        assert!(Kappa::parse("nan").is_err());
    }
}
