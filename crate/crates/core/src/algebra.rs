//! Finite ring and field arithmetic for the decoder alphabets.
//!
//! Two families are supported: the integer rings `Z_q` (arithmetic mod `q`)
//! and the binary extension fields `GF(2^m)` for `m ∈ {1, 2, 3}`, defined by
//! the polynomials `x^2 + x + 1` (GF(4)) and `x^3 + x + 1` (GF(8)). Field
//! elements are identified with the integer value of their polynomial-basis
//! bit representation, so every supported alphabet is the integer range
//! `0..q` and the canonical ordering of the nonzero elements is
//! `1, 2, ..., q-1`. That ordering fixes the coordinate layout of every
//! `(q-1)`-vector used elsewhere (indicator images, LLR blocks, dual
//! variables): the block coordinate of a nonzero element `r` is `r - 1`.
//!
//! All arithmetic is table driven and `RingSpec` is immutable after
//! construction, so values can be shared freely across threads.

use crate::{Error, Result};

/// Which family a [`RingSpec`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// Integers modulo `q`.
    Zq,
    /// Binary extension field `GF(2^m)`.
    Gf2m,
}

/// A finite ring or field with full arithmetic tables.
#[derive(Clone, Debug)]
pub struct RingSpec {
    kind: RingKind,
    q: usize,
    /// Extension degree; 0 for `Z_q`.
    m: u32,
    /// Defining polynomial bitmask (leading term included); 0 for `Z_q`.
    primitive_poly: u16,
    add_table: Vec<u8>,
    mul_table: Vec<u8>,
    neg_table: Vec<u8>,
    invertible: Vec<bool>,
    element_order: Vec<u8>,
}

/// Largest supported alphabet; keeps the `q x q` tables and element type small.
const MAX_Q: usize = 256;

fn gf_mul_raw(a: u16, b: u16, poly: u16, m: u32) -> u16 {
    let mut acc = 0u16;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << m) != 0 {
            a ^= poly;
        }
    }
    acc
}

impl RingSpec {
    /// Builds `Z_q` for `q >= 2`.
    pub fn new_zq(q: usize) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::config(format!(
                "Z_q requires 2 <= q <= {MAX_Q}, got q = {q}"
            )));
        }
        let add_table = table(q, |a, b| ((a + b) % q) as u8);
        let mul_table = table(q, |a, b| ((a * b) % q) as u8);
        Ok(Self::assemble(RingKind::Zq, q, 0, 0, add_table, mul_table))
    }

    /// Builds `GF(2^m)` for `m ∈ {1, 2, 3}`.
    pub fn new_gf(m: u32) -> Result<Self> {
        let poly: u16 = match m {
            1 => 0b11,
            2 => 0b111,   // x^2 + x + 1
            3 => 0b1011,  // x^3 + x + 1
            _ => {
                return Err(Error::config(format!(
                    "GF(2^m) supports m in 1..=3, got m = {m}"
                )))
            }
        };
        let q = 1usize << m;
        let add_table = table(q, |a, b| (a ^ b) as u8);
        let mul_table = table(q, |a, b| gf_mul_raw(a as u16, b as u16, poly, m) as u8);
        Ok(Self::assemble(RingKind::Gf2m, q, m, poly, add_table, mul_table))
    }

    /// Parses a ring token such as `Z4`, `GF4`, or `GF8`.
    pub fn parse(token: &str) -> Result<Self> {
        if let Some(rest) = token.strip_prefix("GF") {
            let q: usize = rest
                .parse()
                .map_err(|_| Error::parse(format!("bad ring token {token:?}")))?;
            let m = q.trailing_zeros();
            if !q.is_power_of_two() || q < 2 {
                return Err(Error::config(format!(
                    "GF size must be a power of two >= 2, got {q}"
                )));
            }
            Self::new_gf(m)
        } else if let Some(rest) = token.strip_prefix('Z') {
            let q: usize = rest
                .parse()
                .map_err(|_| Error::parse(format!("bad ring token {token:?}")))?;
            Self::new_zq(q)
        } else {
            Err(Error::parse(format!("unknown ring token {token:?}")))
        }
    }

    fn assemble(
        kind: RingKind,
        q: usize,
        m: u32,
        primitive_poly: u16,
        add_table: Vec<u8>,
        mul_table: Vec<u8>,
    ) -> Self {
        let neg_table = (0..q)
            .map(|a| {
                (0..q)
                    .find(|&b| add_table[a * q + b] == 0)
                    .expect("additive inverse exists") as u8
            })
            .collect();
        let invertible = (0..q)
            .map(|a| (0..q).any(|b| mul_table[a * q + b] == 1))
            .collect();
        let element_order = (1..q).map(|r| r as u8).collect();
        RingSpec {
            kind,
            q,
            m,
            primitive_poly,
            add_table,
            mul_table,
            neg_table,
            invertible,
            element_order,
        }
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    /// Alphabet size.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Extension degree (0 for `Z_q`).
    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    /// Defining polynomial bitmask (0 for `Z_q`).
    pub fn primitive_poly(&self) -> u16 {
        self.primitive_poly
    }

    /// Canonical sequence of the `q - 1` nonzero elements.
    pub fn element_order(&self) -> &[u8] {
        &self.element_order
    }

    /// Position of a nonzero element within [`Self::element_order`].
    #[inline]
    pub fn nonzero_index(&self, r: u8) -> usize {
        debug_assert!(r != 0 && (r as usize) < self.q);
        r as usize - 1
    }

    /// Ring token accepted by [`RingSpec::parse`] and the matrix file format.
    pub fn name(&self) -> String {
        match self.kind {
            RingKind::Zq => format!("Z{}", self.q),
            RingKind::Gf2m => format!("GF{}", self.q),
        }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add_table[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul_table[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// True iff some `x` satisfies `a * x = 1`.
    #[inline]
    pub fn is_invertible(&self, a: u8) -> bool {
        self.invertible[a as usize]
    }

    /// True iff `a` is a valid element index.
    #[inline]
    pub fn contains(&self, a: u8) -> bool {
        (a as usize) < self.q
    }
}

fn table(q: usize, f: impl Fn(usize, usize) -> u8) -> Vec<u8> {
    let mut t = vec![0u8; q * q];
    for a in 0..q {
        for b in 0..q {
            t[a * q + b] = f(a, b);
        }
    }
    t
}
