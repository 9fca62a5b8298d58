//! Weighted multigraphs, the row view of a graph, deterministic generators and
//! the plain-text edge-list format.
//!
//! Edge-list format: a header line `n m`, then `m` lines `u v w`. Lines whose
//! first non-blank character is `#` are comments. Weights are written with 17
//! significant digits so that reading back a written graph is exact.

use std::fmt::Write as _;
use std::io::BufRead;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{RngSeed, TAG_GENERATE};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: f64) -> Self {
        Edge { u, v, w }
    }

    /// Endpoints ordered as (smaller, larger).
    pub fn endpoints(&self) -> (usize, usize) {
        if self.u < self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }
}

/// Undirected multigraph on vertices `0..n` with strictly positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

fn check_edge(n: usize, e: &Edge) -> std::result::Result<(), String> {
    if e.u >= n || e.v >= n {
        return Err(format!("vertex id out of range (n = {n})"));
    }
    if e.u == e.v {
        return Err("self-loop".to_string());
    }
    if !e.w.is_finite() {
        return Err("non-finite weight".to_string());
    }
    if e.w <= 0.0 {
        return Err("nonpositive weight".to_string());
    }
    Ok(())
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            check_edge(n, e).map_err(|m| Error::InvalidInput(format!("edge {i}: {m}")))?;
        }
        Ok(WeightedGraph { n, edges })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let edges = self.edges.iter().map(|e| Edge::new(e.u, e.v, e.w * factor)).collect();
        Self::new(self.n, edges)
    }

    /// Subgraph keeping only the listed edge indices, in that order.
    pub fn subgraph(&self, keep: &[usize]) -> Self {
        WeightedGraph { n: self.n, edges: keep.iter().map(|&i| self.edges[i]).collect() }
    }

    /// Number of connected components and a dense component label per vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        (uf.set_count(), uf.labels())
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 == 1
    }

    /// Adjacency lists of `(neighbor, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    /// Marks every edge whose removal disconnects its endpoints. Parallel
    /// copies of an edge are never bridges.
    pub fn bridges(&self) -> Vec<bool> {
        let adj = self.adjacency();
        let n = self.n;
        let mut is_bridge = vec![false; self.m()];
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        // (vertex, parent edge, next adjacency position)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(&mut (v, parent_edge, ref mut pos)) = stack.last_mut() {
                if *pos < adj[v].len() {
                    let (to, id) = adj[v][*pos];
                    *pos += 1;
                    if id == parent_edge {
                        continue;
                    }
                    if disc[to] == usize::MAX {
                        disc[to] = timer;
                        low[to] = timer;
                        timer += 1;
                        stack.push((to, id, 0));
                    } else {
                        low[v] = low[v].min(disc[to]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            is_bridge[parent_edge] = true;
                        }
                    }
                }
            }
        }
        is_bridge
    }

    /// One row per edge, in edge order.
    pub fn rows(&self) -> Vec<Row> {
        self.edges.iter().map(|e| Row::from_edge(self.n, e)).collect()
    }
}

/// A row vector `a` of an implicit tall matrix `A`; the matrix of interest is
/// `AᵀA = Σ a aᵀ`. Stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl Row {
    pub fn dense(values: Vec<f64>) -> Result<Self> {
        let dim = values.len();
        let entries = values.into_iter().enumerate().filter(|(_, x)| *x != 0.0).collect();
        Self::from_entries(dim, entries)
    }

    /// Builds a row from `(index, value)` pairs; indices must be distinct.
    pub fn from_entries(dim: usize, mut entries: Vec<(usize, f64)>) -> Result<Self> {
        entries.sort_by_key(|&(i, _)| i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!("duplicate row index {}", w[0].0)));
            }
        }
        for &(i, x) in &entries {
            if i >= dim {
                return Err(Error::InvalidInput(format!("row index {i} out of range {dim}")));
            }
            if !x.is_finite() {
                return Err(Error::InvalidInput("non-finite row entry".into()));
            }
        }
        entries.retain(|&(_, x)| x != 0.0);
        Ok(Row { dim, entries })
    }

    /// `√w (e_u − e_v)` oriented so the smaller vertex id carries `+√w`.
    pub fn from_edge(n: usize, e: &Edge) -> Self {
        let (a, b) = e.endpoints();
        let s = e.w.sqrt();
        Row { dim: n, entries: vec![(a, s), (b, -s)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for &(i, x) in &self.entries {
            v[i] = x;
        }
        v
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|(_, x)| x * x).sum()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, a)| a * x[i]).sum()
    }

    pub fn scaled(&self, factor: f64) -> Row {
        Row { dim: self.dim, entries: self.entries.iter().map(|&(i, x)| (i, x * factor)).collect() }
    }

    /// `(u, v, w)` with `u < v` when the row has the shape `√w (e_u − e_v)`.
    pub fn as_edge(&self) -> Option<Edge> {
        match self.entries.as_slice() {
            [(u, a), (v, b)] if *a == -*b => Some(Edge::new(*u, *v, a * a)),
            _ => None,
        }
    }
}

/// Ordered single-pass source of rows of a fixed dimension.
pub trait RowStream {
    fn dim(&self) -> usize;
    fn next_row(&mut self) -> Option<Result<Row>>;
}

/// Rows of a graph in edge order.
pub struct GraphRows<'a> {
    graph: &'a WeightedGraph,
    next: usize,
}

pub fn rows_of(g: &WeightedGraph) -> GraphRows<'_> {
    GraphRows { graph: g, next: 0 }
}

impl RowStream for GraphRows<'_> {
    fn dim(&self) -> usize {
        self.graph.n
    }

    fn next_row(&mut self) -> Option<Result<Row>> {
        let e = self.graph.edges.get(self.next)?;
        self.next += 1;
        Some(Ok(Row::from_edge(self.graph.n, e)))
    }
}

/// Rows from any iterator of edges (for example an [`EdgeListReader`]).
pub struct EdgeRows<I> {
    n: usize,
    edges: I,
}

impl<I: Iterator<Item = Result<Edge>>> EdgeRows<I> {
    pub fn new(n: usize, edges: I) -> Self {
        EdgeRows { n, edges }
    }
}

impl<I: Iterator<Item = Result<Edge>>> RowStream for EdgeRows<I> {
    fn dim(&self) -> usize {
        self.n
    }

    fn next_row(&mut self) -> Option<Result<Row>> {
        let n = self.n;
        self.edges.next().map(|r| {
            r.and_then(|e| {
                check_edge(n, &e).map_err(Error::InvalidInput)?;
                Ok(Row::from_edge(n, &e))
            })
        })
    }
}

/// Rows held in memory.
pub struct VecRows {
    dim: usize,
    rows: std::vec::IntoIter<Row>,
}

impl VecRows {
    pub fn new(dim: usize, rows: Vec<Row>) -> Self {
        VecRows { dim, rows: rows.into_iter() }
    }
}

impl RowStream for VecRows {
    fn dim(&self) -> usize {
        self.dim
    }

    fn next_row(&mut self) -> Option<Result<Row>> {
        self.rows.next().map(Ok)
    }
}

/// Wrapper that counts deliveries and refuses to be polled past its end.
pub struct CountingStream<S> {
    inner: S,
    delivered: usize,
    exhausted: bool,
}

impl<S: RowStream> CountingStream<S> {
    pub fn new(inner: S) -> Self {
        CountingStream { inner, delivered: 0, exhausted: false }
    }

    pub fn delivered(&self) -> usize {
        self.delivered
    }
}

impl<S: RowStream> RowStream for CountingStream<S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn next_row(&mut self) -> Option<Result<Row>> {
        if self.exhausted {
            return Some(Err(Error::Contract("row stream polled after it ended".into())));
        }
        let r = self.inner.next_row();
        match r {
            Some(_) => self.delivered += 1,
            None => self.exhausted = true,
        }
        r
    }
}

/// Generator families. All produce unit weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GraphFamily {
    Path,
    Cycle,
    Complete,
    /// Row-major grid with `floor(√n)` rows; the last row may be partial.
    Grid,
    Star,
    /// Two cliques of `n/2` vertices joined through a bridge (and a middle
    /// vertex when `n` is odd).
    Barbell,
    Gnp(f64),
}

impl FromStr for GraphFamily {
    type Err = Error;

    /// Accepts `path`, `cycle`, `complete`, `grid`, `star`, `barbell` and `gnp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Ok(match lower.as_str() {
            "path" => GraphFamily::Path,
            "cycle" => GraphFamily::Cycle,
            "complete" => GraphFamily::Complete,
            "grid" => GraphFamily::Grid,
            "star" => GraphFamily::Star,
            "barbell" => GraphFamily::Barbell,
            other => {
                let p = other
                    .strip_prefix("gnp:")
                    .or_else(|| other.strip_prefix("gnp="))
                    .ok_or_else(|| Error::InvalidInput(format!("unknown graph family '{s}'")))?;
                let p: f64 =
                    p.parse().map_err(|_| Error::InvalidInput(format!("bad gnp probability '{p}'")))?;
                GraphFamily::Gnp(p)
            }
        })
    }
}

impl std::fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphFamily::Path => write!(f, "path"),
            GraphFamily::Cycle => write!(f, "cycle"),
            GraphFamily::Complete => write!(f, "complete"),
            GraphFamily::Grid => write!(f, "grid"),
            GraphFamily::Star => write!(f, "star"),
            GraphFamily::Barbell => write!(f, "barbell"),
            GraphFamily::Gnp(p) => write!(f, "gnp:{p}"),
        }
    }
}

const GNP_RETRIES: usize = 1000;

pub fn generate(family: GraphFamily, n: usize, seed: RngSeed) -> Result<WeightedGraph> {
    let too_small = |min: usize| {
        Error::InvalidInput(format!("{family} needs n >= {min}, got {n}"))
    };
    let unit = |u: usize, v: usize| Edge::new(u, v, 1.0);
    let edges: Vec<Edge> = match family {
        GraphFamily::Path => {
            if n < 1 {
                return Err(too_small(1));
            }
            (1..n).map(|v| unit(v - 1, v)).collect()
        }
        GraphFamily::Cycle => {
            if n < 3 {
                return Err(too_small(3));
            }
            (1..n).map(|v| unit(v - 1, v)).chain(std::iter::once(unit(0, n - 1))).collect()
        }
        GraphFamily::Complete => {
            if n < 1 {
                return Err(too_small(1));
            }
            complete_edges(0, n)
        }
        GraphFamily::Grid => {
            if n < 1 {
                return Err(too_small(1));
            }
            let rows = (n as f64).sqrt().floor() as usize;
            let cols = n.div_ceil(rows);
            let mut edges = Vec::new();
            for v in 0..n {
                let c = v % cols;
                if c + 1 < cols && v + 1 < n {
                    edges.push(unit(v, v + 1));
                }
                if v + cols < n {
                    edges.push(unit(v, v + cols));
                }
            }
            edges
        }
        GraphFamily::Star => {
            if n < 2 {
                return Err(too_small(2));
            }
            (1..n).map(|v| unit(0, v)).collect()
        }
        GraphFamily::Barbell => {
            if n < 6 {
                return Err(too_small(6));
            }
            let k = n / 2;
            let mut edges = complete_edges(0, k);
            edges.extend(complete_edges(n - k, n));
            if n % 2 == 1 {
                edges.push(unit(k - 1, k));
                edges.push(unit(k, k + 1));
            } else {
                edges.push(unit(k - 1, k));
            }
            edges
        }
        GraphFamily::Gnp(p) => {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidInput(format!("gnp probability must lie in (0, 1], got {p}")));
            }
            if n < 1 {
                return Err(too_small(1));
            }
            let mut rng = seed.substream(TAG_GENERATE, 0);
            let mut found = None;
            for _ in 0..GNP_RETRIES {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random::<f64>() < p {
                            edges.push(unit(u, v));
                        }
                    }
                }
                let g = WeightedGraph { n, edges };
                if g.is_connected() {
                    found = Some(g.edges);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::InvalidInput(format!("gnp({n}, {p}) not connected after {GNP_RETRIES} draws"))
            })?
        }
    };
    WeightedGraph::new(n, edges)
}

fn complete_edges(lo: usize, hi: usize) -> Vec<Edge> {
    let mut edges = Vec::with_capacity((hi - lo) * (hi - lo).saturating_sub(1) / 2);
    for u in lo..hi {
        for v in u + 1..hi {
            edges.push(Edge::new(u, v, 1.0));
        }
    }
    edges
}

/// Canonical text for a weight: 17 significant digits.
pub fn format_weight(w: f64) -> String {
    format!("{w:.16e}")
}

pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut s = String::with_capacity(32 * (g.m() + 1));
    writeln!(s, "{} {}", g.n, g.m()).unwrap();
    for e in &g.edges {
        writeln!(s, "{} {} {}", e.u, e.v, format_weight(e.w)).unwrap();
    }
    s
}

pub fn read_edge_list(text: &str) -> Result<WeightedGraph> {
    let reader = EdgeListReader::new(text.as_bytes())?;
    let n = reader.n();
    let edges = reader.collect::<Result<Vec<_>>>()?;
    WeightedGraph::new(n, edges)
}

/// Incremental edge-list parser. Yields edges one at a time without holding
/// the graph in memory and checks the declared edge count at the end.
pub struct EdgeListReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    n: usize,
    m: usize,
    seen: usize,
    done: bool,
}

impl<R: BufRead> EdgeListReader<R> {
    pub fn new(reader: R) -> Result<Self> {
        let mut r = EdgeListReader { lines: reader.lines(), line_no: 0, n: 0, m: 0, seen: 0, done: false };
        let (line_no, header) = match r.next_content_line()? {
            Some(x) => x,
            None => return Err(Error::Parse { line: r.line_no.max(1), message: "missing header".into() }),
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse = |s: &str| s.parse::<usize>().ok();
        match fields.as_slice() {
            [a, b] => match (parse(a), parse(b)) {
                (Some(n), Some(m)) if n >= 1 => {
                    r.n = n;
                    r.m = m;
                }
                _ => {
                    return Err(Error::Parse { line: line_no, message: "malformed header".into() });
                }
            },
            _ => return Err(Error::Parse { line: line_no, message: "malformed header".into() }),
        }
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn declared_edges(&self) -> usize {
        self.m
    }

    fn next_content_line(&mut self) -> Result<Option<(usize, String)>> {
        for line in self.lines.by_ref() {
            self.line_no += 1;
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Ok(Some((self.line_no, t.to_string())));
        }
        Ok(None)
    }

    fn parse_edge(&self, line_no: usize, line: &str) -> Result<Edge> {
        let err = |message: &str| Error::Parse { line: line_no, message: message.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields.as_slice() else {
            return Err(err("malformed line"));
        };
        let u: usize = u.parse().map_err(|_| err("malformed line"))?;
        let v: usize = v.parse().map_err(|_| err("malformed line"))?;
        let w: f64 = w.parse().map_err(|_| err("malformed line"))?;
        if u >= self.n || v >= self.n {
            return Err(err("vertex id out of range"));
        }
        if u == v {
            return Err(err("self-loop"));
        }
        if !w.is_finite() {
            return Err(err("non-finite weight"));
        }
        if w <= 0.0 {
            return Err(err("nonpositive weight"));
        }
        Ok(Edge::new(u, v, w))
    }
}

impl<R: BufRead> Iterator for EdgeListReader<R> {
    type Item = Result<Edge>;

    fn next(&mut self) -> Option<Result<Edge>> {
        if self.done {
            return None;
        }
        match self.next_content_line() {
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
            Ok(None) => {
                self.done = true;
                if self.seen != self.m {
                    Some(Err(Error::Parse {
                        line: self.line_no,
                        message: format!("expected {} edges, found {}", self.m, self.seen),
                    }))
                } else {
                    None
                }
            }
            Ok(Some((line_no, line))) => {
                self.seen += 1;
                if self.seen > self.m {
                    self.done = true;
                    return Some(Err(Error::Parse {
                        line: line_no,
                        message: format!("more than the declared {} edges", self.m),
                    }));
                }
                let r = self.parse_edge(line_no, &line);
                if r.is_err() {
                    self.done = true;
                }
                Some(r)
            }
        }
    }
}
