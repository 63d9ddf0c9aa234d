//! Undirected simple graphs as dense 0/1 adjacency matrices.
//!
//! Generators cover the ring graph (nodes on a cycle, linked to the `k`
//! nearest neighbours in each direction), the complete graph, Erdős–Rényi
//! G(n, p), and Watts–Strogatz rewired rings. All generators are pure
//! functions of their parameters and seed.

use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{self, Purpose};

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Ring,
    Complete,
    ErdosRenyi,
    WattsStrogatz,
    Custom,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GraphKind::Ring => "ring",
            GraphKind::Complete => "complete",
            GraphKind::ErdosRenyi => "erdos_renyi",
            GraphKind::WattsStrogatz => "watts_strogatz",
            GraphKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Generator parameters echoed alongside the matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Symmetric, zero-diagonal, binary adjacency matrix (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
    kind: GraphKind,
    params: GraphParams,
}

impl AdjacencyMatrix {
    fn empty(n: usize, kind: GraphKind, params: GraphParams) -> Self {
        AdjacencyMatrix {
            n,
            entries: vec![0; n * n],
            kind,
            params,
        }
    }

    /// Builds a `custom` graph from undirected edges. Self-loops and
    /// duplicate edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParameter("n must be positive".into()));
        }
        let mut a = Self::empty(n, GraphKind::Custom, GraphParams::default());
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(GraphError::InvalidParameter(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(GraphError::InvalidParameter(format!("self-loop at node {i}")));
            }
            if a.has_edge(i, j) {
                return Err(GraphError::InvalidParameter(format!("duplicate edge ({i}, {j})")));
            }
            a.set(i, j, true);
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn params(&self) -> GraphParams {
        self.params
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.get(i, j) != 0
    }

    fn set(&mut self, i: usize, j: usize, on: bool) {
        let v = u8::from(on);
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|&v| v as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.entries.iter().map(|&v| v as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i + 1..self.n).filter_map(move |j| self.has_edge(i, j).then_some((i, j)))
        })
    }

    /// Neighbour lists, ascending.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.has_edge(i, j)).collect())
            .collect()
    }

    /// Row-major `f64` copy of the entries.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&v| f64::from(v)).collect()
    }

    /// Returns true when symmetric, zero-diagonal and binary.
    pub fn is_simple_undirected(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            self.get(i, i) == 0
                && (0..n).all(|j| {
                    let v = self.get(i, j);
                    v <= 1 && v == self.get(j, i)
                })
        })
    }

    /// Ring and complete graphs are circulant; returns their first row.
    pub fn generating_vector(&self) -> Option<GeneratingVector> {
        match self.kind {
            GraphKind::Ring | GraphKind::Complete => Some(GeneratingVector(
                self.row(0).iter().map(|&v| f64::from(v)).collect(),
            )),
            _ => None,
        }
    }

    /// Writes the `n m` header followed by one `i j` line per edge (`i < j`).
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<(), GraphError> {
        writeln!(w, "{} {}", self.n, self.edge_count())?;
        for (i, j) in self.edges() {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut lines = r.lines().enumerate();
        let (n, m) = match lines.next() {
            Some((_, line)) => {
                let line = line?;
                let (n, m) = parse_pair(&line).map_err(|msg| GraphError::Parse { line: 1, msg })?;
                (n, m)
            }
            None => {
                return Err(GraphError::Parse {
                    line: 1,
                    msg: "missing header".into(),
                })
            }
        };
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (i, j) = parse_pair(&line).map_err(|msg| GraphError::Parse { line: idx + 1, msg })?;
            if i >= j {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("expected i < j, got {i} {j}"),
                });
            }
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(n, &edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize), String> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize, String> {
        it.next()
            .ok_or_else(|| format!("expected two integers in {line:?}"))?
            .parse::<usize>()
            .map_err(|e| format!("{e} in {line:?}"))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(format!("trailing tokens in {line:?}"));
    }
    Ok((a, b))
}

/// First row `c` of a circulant matrix, `C[i][j] = c[(j - i) mod n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingVector(pub Vec<f64>);

impl GeneratingVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Dense row-major circulant matrix.
    pub fn circulant(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.0[(j + n - i) % n];
            }
        }
        out
    }
}

#[inline]
fn circular_distance(i: usize, j: usize, n: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(n - d)
}

fn check_ring(n: usize, k: usize) -> Result<(), GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if k < 1 || k > n / 2 {
        return Err(GraphError::InvalidParameter(format!(
            "k must lie in [1, {}] for n = {n}, got {k}",
            n / 2
        )));
    }
    Ok(())
}

fn check_probability(name: &str, p: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Ring graph: `i ~ j` iff the circular distance lies in `[1, k]`.
pub fn gen_ring(n: usize, k: usize) -> Result<AdjacencyMatrix, GraphError> {
    check_ring(n, k)?;
    let params = GraphParams {
        k: Some(k),
        ..GraphParams::default()
    };
    let mut a = AdjacencyMatrix::empty(n, GraphKind::Ring, params);
    for i in 0..n {
        for j in 0..n {
            let d = circular_distance(i, j, n);
            if (1..=k).contains(&d) {
                a.entries[i * n + j] = 1;
            }
        }
    }
    Ok(a)
}

/// Complete graph, built as the ring with `k = n / 2`.
pub fn gen_complete(n: usize) -> Result<AdjacencyMatrix, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let mut a = gen_ring(n, n / 2)?;
    a.kind = GraphKind::Complete;
    Ok(a)
}

pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<AdjacencyMatrix, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    check_probability("p", p)?;
    let params = GraphParams {
        p: Some(p),
        seed: Some(seed),
        ..GraphParams::default()
    };
    let mut a = AdjacencyMatrix::empty(n, GraphKind::ErdosRenyi, params);
    let mut rng = rng::stream(seed, Purpose::ErdosRenyi);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                a.set(i, j, true);
            }
        }
    }
    Ok(a)
}

/// Watts–Strogatz rewiring of `gen_ring(n, k)`.
///
/// Ring edges `(i, i + offset)` are visited once, node-major then offset.
/// With probability `q` the far endpoint is replaced by a node drawn
/// uniformly from those that are neither `i` nor currently adjacent to `i`.
/// The edge count stays `n * k`.
pub fn gen_watts_strogatz(
    n: usize,
    k: usize,
    q: f64,
    seed: u64,
) -> Result<AdjacencyMatrix, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if k < 1 || k >= n / 2 {
        return Err(GraphError::InvalidParameter(format!(
            "k must lie in [1, {}) for n = {n}, got {k}",
            n / 2
        )));
    }
    check_probability("q", q)?;

    let mut a = gen_ring(n, k)?;
    a.kind = GraphKind::WattsStrogatz;
    a.params = GraphParams {
        k: Some(k),
        q: Some(q),
        seed: Some(seed),
        ..GraphParams::default()
    };

    let mut rng = rng::stream(seed, Purpose::WattsStrogatz);
    let mut candidates = Vec::with_capacity(n);
    for i in 0..n {
        for offset in 1..=k {
            let j = (i + offset) % n;
            if rng.gen::<f64>() >= q {
                continue;
            }
            // An earlier rewiring may already have removed this edge.
            if !a.has_edge(i, j) {
                continue;
            }
            candidates.clear();
            candidates.extend((0..n).filter(|&w| w != i && !a.has_edge(i, w)));
            if let Some(&w) = candidates.choose(&mut rng) {
                a.set(i, j, false);
                a.set(i, w, true);
            }
        }
    }
    Ok(a)
}

/// First row of the ring adjacency matrix.
pub fn ring_generating_vector(n: usize, k: usize) -> Result<GeneratingVector, GraphError> {
    check_ring(n, k)?;
    Ok(GeneratingVector(
        (0..n)
            .map(|off| {
                let d = circular_distance(0, off, n);
                if (1..=k).contains(&d) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect(),
    ))
}
