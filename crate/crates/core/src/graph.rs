//! Simple undirected graphs stored as their s-adjacency matrix.
//!
//! Row `v` of the matrix is the closed neighborhood `N[v]`: bit `j` is set iff
//! `j == v` or `{v, j}` is an edge. A vertex set `S` dominates exactly when no
//! row is zero on every column of `S`, i.e. when the union of the rows indexed
//! by `S` is the full vertex set.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bitset::{popcount, tail_mask, union_into, words_for, VertexSet, WORD_BITS};
use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

/// Zero counts per row of the s-adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowZeroProfile {
    pub zeros_per_row: Vec<usize>,
    pub z_max: usize,
    /// Smallest vertex whose row attains `z_max`.
    pub argmax: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs collapse to one edge.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// The edgeless graph: every row holds only its diagonal one.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount(n));
        }
        let stride = words_for(n);
        let mut rows = vec![0u64; n * stride];
        for v in 0..n {
            rows[v * stride + v / WORD_BITS] |= 1 << (v % WORD_BITS);
        }
        Ok(Graph { n, stride, rows })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let tail = tail_mask(n);
        for v in 0..n {
            let row = &mut g.rows[v * g.stride..(v + 1) * g.stride];
            row.fill(u64::MAX);
            *row.last_mut().unwrap() &= tail;
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).filter(|(u, v)| u != v).collect();
        Graph::new(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.rows[u * self.stride + v / WORD_BITS] |= 1 << (v % WORD_BITS);
        self.rows[v * self.stride + u / WORD_BITS] |= 1 << (u % WORD_BITS);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of 64-bit words per row.
    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Row `v` of the s-adjacency matrix as packed words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(VertexSet::from_words(self.n, self.row(v).to_vec()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && self.row(u)[v / WORD_BITS] & (1 << (v % WORD_BITS)) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        popcount(self.row(v)) - 1
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet::from_words(self.n, self.row(u).to_vec())
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
                .collect::<Vec<_>>()
        })
    }

    /// True iff the union of closed neighborhoods over `s` covers every vertex.
    pub fn is_dominating(&self, s: &VertexSet) -> bool {
        debug_assert_eq!(s.universe(), self.n);
        let mut cover = vec![0u64; self.stride];
        for v in s.iter() {
            union_into(&mut cover, self.row(v));
        }
        self.covers_all(&cover)
    }

    /// Same as [`Graph::is_dominating`] for a slice of vertex indices.
    pub fn dominates(&self, vertices: &[usize]) -> bool {
        let mut cover = vec![0u64; self.stride];
        for &v in vertices {
            union_into(&mut cover, self.row(v));
        }
        self.covers_all(&cover)
    }

    #[inline]
    pub(crate) fn covers_all(&self, cover: &[u64]) -> bool {
        let last = self.stride - 1;
        cover[..last].iter().all(|&w| w == u64::MAX) && cover[last] == tail_mask(self.n)
    }

    /// Words of the full vertex set.
    pub(crate) fn full_words(&self) -> Vec<u64> {
        VertexSet::full(self.n).words().to_vec()
    }

    pub fn row_zero_profile(&self) -> RowZeroProfile {
        let zeros_per_row: Vec<usize> = (0..self.n).map(|v| self.n - popcount(self.row(v))).collect();
        let mut argmax = 0;
        for (v, &z) in zeros_per_row.iter().enumerate() {
            if z > zeros_per_row[argmax] {
                argmax = v;
            }
        }
        RowZeroProfile {
            z_max: zeros_per_row[argmax],
            argmax,
            zeros_per_row,
        }
    }

    /// Serializes to the edge-list text format: a header line `n m`, then one
    /// `u v` line per edge with `u < v`, sorted lexicographically.
    pub fn to_edge_list(&self) -> String {
        let edges: Vec<_> = self.edges().collect();
        let mut out = String::with_capacity(16 + edges.len() * 10);
        writeln!(out, "{} {}", self.n, edges.len()).unwrap();
        for (u, v) in edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the edge-list text format. Blank lines and lines starting with
    /// `#` are skipped; the number of edge lines must match the header.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing header line".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        let mut g = Graph::empty(n).map_err(|e| Error::Parse {
            line: hline,
            message: e.to_string(),
        })?;
        let mut seen = 0;
        for (line, l) in lines {
            let [u, v] = parse_pair(line, l)?;
            g.add_edge(u, v).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} edges, found {seen}"),
            });
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let err = |message: String| Error::Parse { line, message };
    let mut it = text.split_whitespace();
    let mut out = [0usize; 2];
    for slot in out.iter_mut() {
        let tok = it.next().ok_or_else(|| err(format!("expected two integers, got {text:?}")))?;
        *slot = tok.parse().map_err(|_| err(format!("not a vertex index: {tok:?}")))?;
    }
    if it.next().is_some() {
        return Err(err(format!("trailing tokens in {text:?}")));
    }
    Ok(out)
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
