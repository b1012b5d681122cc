//! Parity-check matrix storage, Tanner-graph index sets, syndrome checks,
//! and the one-hot indicator embedding of ring symbols.
//!
//! Matrices are stored sparsely in row-major order because every decoder
//! loop walks checks first and their supports second.
//!
//! # Matrix file format
//!
//! UTF-8 text. Line 1 is `<ring> <m> <n>` (for example `Z4 3 5`), followed
//! by `m` lines, one per check, each a space-separated list of
//! `<column>:<coefficient>` entries with 1-based column indices in strictly
//! increasing order and nonzero ring elements written as integers (field
//! elements by their polynomial-basis value). [`ParityCheckMatrix::parse`]
//! and the `Display` impl round-trip this format bit-exactly.

use std::fmt;

use crate::algebra::RingSpec;
use crate::{Error, Result};

/// Sparse parity-check matrix over a finite ring.
#[derive(Clone, Debug)]
pub struct ParityCheckMatrix {
    ring: RingSpec,
    m: usize,
    n: usize,
    /// Per row: `(column, coefficient)` with nonzero coefficients and
    /// strictly increasing 0-based columns.
    rows: Vec<Vec<(usize, u8)>>,
}

impl ParityCheckMatrix {
    pub fn new(ring: RingSpec, n: usize, rows: Vec<Vec<(usize, u8)>>) -> Result<Self> {
        if n == 0 || rows.is_empty() {
            return Err(Error::config("matrix must have at least one row and column"));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::config(format!("row {} is empty", j + 1)));
            }
            let mut prev: Option<usize> = None;
            for &(i, h) in row {
                if i >= n {
                    return Err(Error::config(format!(
                        "row {}: column {} out of range 1..={n}",
                        j + 1,
                        i + 1
                    )));
                }
                if let Some(p) = prev {
                    if i <= p {
                        return Err(Error::config(format!(
                            "row {}: column indices must be strictly increasing",
                            j + 1
                        )));
                    }
                }
                prev = Some(i);
                if !ring.contains(h) {
                    return Err(Error::config(format!(
                        "row {}: coefficient {h} not in {}",
                        j + 1,
                        ring.name()
                    )));
                }
                if h == 0 {
                    return Err(Error::config(format!(
                        "row {}: zero coefficient listed at column {}",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let m = rows.len();
        Ok(ParityCheckMatrix { ring, m, n, rows })
    }

    /// Parses the text format described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty matrix file"))?;
        let mut parts = header.split_whitespace();
        let ring_tok = parts.next().ok_or_else(|| Error::parse("missing ring token"))?;
        let m: usize = parts
            .next()
            .ok_or_else(|| Error::parse("missing row count"))?
            .parse()
            .map_err(|_| Error::parse("bad row count"))?;
        let n: usize = parts
            .next()
            .ok_or_else(|| Error::parse("missing column count"))?
            .parse()
            .map_err(|_| Error::parse("bad column count"))?;
        if parts.next().is_some() {
            return Err(Error::parse("trailing tokens on header line"));
        }
        let ring = RingSpec::parse(ring_tok)?;
        let mut rows = Vec::with_capacity(m);
        for j in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(format!("missing row {} of {m}", j + 1)))?;
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let (col, coeff) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::parse(format!("row {}: bad entry {tok:?}", j + 1)))?;
                let col: usize = col
                    .parse()
                    .map_err(|_| Error::parse(format!("row {}: bad column in {tok:?}", j + 1)))?;
                let coeff: u8 = coeff
                    .parse()
                    .map_err(|_| Error::parse(format!("row {}: bad coefficient in {tok:?}", j + 1)))?;
                if col == 0 {
                    return Err(Error::parse(format!("row {}: columns are 1-based", j + 1)));
                }
                row.push((col - 1, coeff));
            }
            rows.push(row);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::parse("trailing content after last row"));
        }
        Self::new(ring, n, rows)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// Number of checks (rows).
    pub fn num_rows(&self) -> usize {
        self.m
    }

    /// Block length (columns).
    pub fn num_cols(&self) -> usize {
        self.n
    }

    /// Sparse `(column, coefficient)` entries of row `j`.
    pub fn row(&self, j: usize) -> &[(usize, u8)] {
        &self.rows[j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(usize, u8)]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    /// Row syndrome `s_j = sum_i c_i * h_{j,i}` of a symbol vector.
    pub fn syndrome(&self, word: &[u8]) -> Result<Vec<u8>> {
        if word.len() != self.n {
            return Err(Error::dimension(format!(
                "word length {} != block length {}",
                word.len(),
                self.n
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter().fold(0u8, |acc, &(i, h)| {
                    self.ring.add(acc, self.ring.mul(word[i], h))
                })
            })
            .collect())
    }

    pub fn is_codeword(&self, word: &[u8]) -> Result<bool> {
        Ok(self.syndrome(word)?.iter().all(|&s| s == 0))
    }
}

impl fmt::Display for ParityCheckMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.ring.name(), self.m, self.n)?;
        for row in &self.rows {
            let mut first = true;
            for &(i, h) in row {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}:{}", i + 1, h)?;
                first = false;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Tanner-graph index sets of a parity-check matrix.
///
/// Edges are listed check-major (`j` ascending, columns ascending within a
/// row); that order is also the update schedule of the coordinate-ascent
/// decoder.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    /// `I_j`: columns in the support of row `j`.
    row_cols: Vec<Vec<usize>>,
    /// `J_i`: rows in the support of column `i`.
    col_rows: Vec<Vec<usize>>,
    /// All `(i, j)` pairs, check-major.
    edges: Vec<(usize, usize)>,
    /// Edge ids of row `j`, in column order.
    row_edges: Vec<Vec<usize>>,
    /// Edge ids of column `i`, in row order.
    col_edges: Vec<Vec<usize>>,
    /// Position of each edge within its row.
    edge_row_pos: Vec<usize>,
}

impl TannerGraph {
    pub fn new(matrix: &ParityCheckMatrix) -> Self {
        let m = matrix.num_rows();
        let n = matrix.num_cols();
        let mut row_cols = vec![Vec::new(); m];
        let mut col_rows = vec![Vec::new(); n];
        let mut edges = Vec::new();
        let mut row_edges = vec![Vec::new(); m];
        let mut col_edges = vec![Vec::new(); n];
        let mut edge_row_pos = Vec::new();
        for j in 0..m {
            for (pos, &(i, _)) in matrix.row(j).iter().enumerate() {
                let e = edges.len();
                edges.push((i, j));
                row_cols[j].push(i);
                col_rows[i].push(j);
                row_edges[j].push(e);
                col_edges[i].push(e);
                edge_row_pos.push(pos);
            }
        }
        TannerGraph {
            row_cols,
            col_rows,
            edges,
            row_edges,
            col_edges,
            edge_row_pos,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.row_cols.len()
    }

    pub fn num_cols(&self) -> usize {
        self.col_rows.len()
    }

    /// `I_j`.
    pub fn row_cols(&self, j: usize) -> &[usize] {
        &self.row_cols[j]
    }

    /// `J_i`.
    pub fn col_rows(&self, i: usize) -> &[usize] {
        &self.col_rows[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn row_edge_ids(&self, j: usize) -> &[usize] {
        &self.row_edges[j]
    }

    pub fn col_edge_ids(&self, i: usize) -> &[usize] {
        &self.col_edges[i]
    }

    /// Position of edge `e` within its row's support.
    pub fn edge_row_pos(&self, e: usize) -> usize {
        self.edge_row_pos[e]
    }

    /// Row degree `d_j`.
    pub fn degree(&self, j: usize) -> usize {
        self.row_cols[j].len()
    }

    /// Maximum row degree `d`.
    pub fn max_degree(&self) -> usize {
        self.row_cols.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// One-hot image of a ring symbol: `xi(0)` is the zero vector, `xi(r)` has
/// a single 1 at the canonical position of `r`.
pub fn xi(ring: &RingSpec, r: u8) -> Vec<f64> {
    let mut x = vec![0.0; ring.q() - 1];
    if r != 0 {
        x[ring.nonzero_index(r)] = 1.0;
    }
    x
}

/// Concatenation of [`xi`] images of a symbol vector.
pub fn big_xi(ring: &RingSpec, word: &[u8]) -> Vec<f64> {
    let qm1 = ring.q() - 1;
    let mut x = vec![0.0; qm1 * word.len()];
    for (t, &c) in word.iter().enumerate() {
        if c != 0 {
            x[t * qm1 + ring.nonzero_index(c)] = 1.0;
        }
    }
    x
}
