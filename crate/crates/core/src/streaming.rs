//! Single-pass resparsifying sampler.
//!
//! Rows are appended to a buffer as they arrive. Whenever the buffer holds
//! more than `buffer_coeff · n · β` rows (`β = β_coeff · ln n / ε²`), leverage
//! upper bounds `τ̂` of the buffered rows are computed against the buffer
//! itself and every row is kept with probability `min(1, β τ̂)`, rescaled so
//! that its outer product is unbiased.
//!
//! Buffered rows keep the original stream row plus a weight factor; the
//! effective row is `√factor · a`. A row that has never been resampled has
//! factor exactly `1.0`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeRows, Row, RowStream, WeightedGraph};
use crate::linalg::{
    exact_leverage, exact_row_leverage, infer_kernel, sketched_row_leverage_upper, Kernel, LeverageEstimates,
    Provenance, DEFAULT_DENSE_CAP,
};
use crate::rng::{RngSeed, TAG_SKETCH, TAG_STREAM_ROUND};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeverageMode {
    Exact,
    Sketched,
    /// Exact up to the dense cap, sketched above it.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub epsilon: f64,
    pub beta_coeff: f64,
    pub buffer_coeff: f64,
    pub jl_delta: f64,
    pub leverage: LeverageMode,
    pub seed: RngSeed,
    pub dense_cap: usize,
    /// Keep every `(row, p, kept)` sampling decision for later replay.
    pub record_decisions: bool,
    /// Fail if the buffer ever exceeds the space bound.
    pub assert_space: bool,
}

impl StreamConfig {
    pub fn new(epsilon: f64) -> Self {
        StreamConfig {
            epsilon,
            beta_coeff: 200.0,
            buffer_coeff: 20.0,
            jl_delta: 0.25,
            leverage: LeverageMode::Auto,
            seed: RngSeed(0),
            dense_cap: DEFAULT_DENSE_CAP,
            record_decisions: false,
            assert_space: false,
        }
    }

    /// Constants small enough for resampling to happen at n ≈ 100.
    pub fn desk(epsilon: f64) -> Self {
        StreamConfig { beta_coeff: 8.0, buffer_coeff: 4.0, ..Self::new(epsilon) }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = RngSeed(seed);
        self
    }

    pub fn beta(&self, n: usize) -> f64 {
        self.beta_coeff * (n.max(2) as f64).ln() / (self.epsilon * self.epsilon)
    }

    /// Buffer size above which a resparsification fires.
    pub fn threshold(&self, n: usize) -> usize {
        (self.buffer_coeff * n as f64 * self.beta(n)).ceil() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::Precondition(format!("epsilon must lie in (0, 1/2], got {}", self.epsilon)));
        }
        if !(self.beta_coeff > 0.0 && self.buffer_coeff > 0.0) {
            return Err(Error::Precondition("stream coefficients must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BufferedRow {
    /// Position in the input stream.
    pub source: usize,
    /// Product of the `1/p` factors applied so far.
    pub factor: f64,
    pub row: Row,
    /// Original edge for graph streams.
    pub edge: Option<Edge>,
}

impl BufferedRow {
    pub fn effective(&self) -> Row {
        if self.factor == 1.0 {
            self.row.clone()
        } else {
            self.row.scaled(self.factor.sqrt())
        }
    }
}

/// One sampling decision with `p < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub round: usize,
    pub source: usize,
    pub p: f64,
    pub kept: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StreamStats {
    pub delivered: usize,
    pub peak_rows: usize,
    pub resparsifications: usize,
    pub threshold: usize,
    pub beta: f64,
}

#[derive(Debug, Clone)]
pub struct StreamOutput {
    pub dim: usize,
    pub rows: Vec<BufferedRow>,
    pub stats: StreamStats,
    pub decisions: Vec<Decision>,
}

impl StreamOutput {
    pub fn effective_rows(&self) -> Vec<Row> {
        self.rows.iter().map(BufferedRow::effective).collect()
    }

    /// Output as a graph with weight `factor · w`. Fails for non-graph streams.
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let edges = self
            .rows
            .iter()
            .map(|b| {
                let e = b.edge.or_else(|| b.row.as_edge()).ok_or_else(|| {
                    Error::InvalidInput(format!("stream row {} is not an edge row", b.source))
                })?;
                Ok(Edge::new(e.u, e.v, e.w * b.factor))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedGraph::new(self.dim, edges)
    }
}

const MAX_STALLED_ROUNDS: usize = 3;

/// Incremental form of the sampler: push rows one at a time.
#[derive(Debug)]
pub struct StreamSparsifier {
    cfg: StreamConfig,
    dim: usize,
    buffer: Vec<BufferedRow>,
    stats: StreamStats,
    decisions: Vec<Decision>,
    stalled: usize,
}

impl StreamSparsifier {
    pub fn new(dim: usize, cfg: StreamConfig) -> Result<Self> {
        cfg.validate()?;
        if dim == 0 {
            return Err(Error::InvalidInput("stream dimension must be at least 1".into()));
        }
        let stats = StreamStats { threshold: cfg.threshold(dim), beta: cfg.beta(dim), ..Default::default() };
        Ok(StreamSparsifier { cfg, dim, buffer: Vec::new(), stats, decisions: Vec::new(), stalled: 0 })
    }

    pub fn stats(&self) -> &StreamStats {
        &self.stats
    }

    pub fn buffer(&self) -> &[BufferedRow] {
        &self.buffer
    }

    pub fn push(&mut self, row: Row) -> Result<()> {
        self.push_inner(row, None)
    }

    pub fn push_edge(&mut self, edge: Edge) -> Result<()> {
        if edge.u.max(edge.v) >= self.dim {
            return Err(Error::InvalidInput(format!("edge ({}, {}) outside {} vertices", edge.u, edge.v, self.dim)));
        }
        self.push_inner(Row::from_edge(self.dim, &edge), Some(edge))
    }

    fn push_inner(&mut self, row: Row, edge: Option<Edge>) -> Result<()> {
        if row.dim() != self.dim {
            return Err(Error::InvalidInput(format!(
                "row {} has dimension {}, stream dimension is {}",
                self.stats.delivered,
                row.dim(),
                self.dim
            )));
        }
        self.buffer.push(BufferedRow { source: self.stats.delivered, factor: 1.0, row, edge });
        self.stats.delivered += 1;
        self.stats.peak_rows = self.stats.peak_rows.max(self.buffer.len());
        if self.cfg.assert_space && self.stats.peak_rows > self.stats.threshold + 1 {
            return Err(Error::Contract(format!(
                "buffer reached {} rows, bound is {}",
                self.stats.peak_rows,
                self.stats.threshold + 1
            )));
        }
        if self.buffer.len() > self.stats.threshold {
            self.resparsify()?;
        }
        Ok(())
    }

    fn resparsify(&mut self) -> Result<()> {
        let round = self.stats.resparsifications;
        let tau = buffer_leverage(self.dim, &self.buffer, &self.cfg, round)?;
        let mut rng = self.cfg.seed.substream(TAG_STREAM_ROUND, round as u64);
        let before = self.buffer.len();
        let buffer = std::mem::take(&mut self.buffer);
        let record = self.cfg.record_decisions;
        let decisions = &mut self.decisions;
        self.buffer = resparsify_once(self.dim, buffer, &tau, self.stats.beta, &mut rng, |source, p, kept| {
            if record {
                decisions.push(Decision { round, source, p, kept });
            }
        })?;
        self.stats.resparsifications += 1;
        // a stalled round removed nothing and left the buffer over the bound
        if self.buffer.len() > self.stats.threshold && self.buffer.len() >= before {
            self.stalled += 1;
            if self.stalled >= MAX_STALLED_ROUNDS {
                return Err(Error::Contract(format!(
                    "{MAX_STALLED_ROUNDS} consecutive resparsifications left the buffer at {} rows",
                    self.buffer.len()
                )));
            }
        } else {
            self.stalled = 0;
        }
        Ok(())
    }

    pub fn finish(self) -> StreamOutput {
        StreamOutput { dim: self.dim, rows: self.buffer, stats: self.stats, decisions: self.decisions }
    }
}

/// Leverage upper bounds of the buffered rows against the buffer matrix.
fn buffer_leverage(dim: usize, buffer: &[BufferedRow], cfg: &StreamConfig, round: usize) -> Result<LeverageEstimates> {
    let rows: Vec<Row> = buffer.iter().map(BufferedRow::effective).collect();
    let exact = match cfg.leverage {
        LeverageMode::Exact => true,
        LeverageMode::Sketched => false,
        LeverageMode::Auto => dim <= cfg.dense_cap,
    };
    if !exact {
        return sketched_row_leverage_upper(dim, &rows, cfg.jl_delta, cfg.seed.derive(TAG_SKETCH, round as u64));
    }
    match infer_kernel(dim, &rows) {
        Kernel::Dim(_) => {
            let edges = rows.iter().map(|r| r.as_edge().expect("graph-shaped row")).collect();
            exact_leverage(&WeightedGraph::new(dim, edges)?, cfg.dense_cap)
        }
        kernel => {
            let values = exact_row_leverage(dim, &rows, kernel, cfg.dense_cap)?
                .into_iter()
                .map(|t| t.clamp(f64::MIN_POSITIVE, 1.0))
                .collect();
            LeverageEstimates::new(values, Provenance::Exact)
        }
    }
}

/// One resampling pass: each row is kept with probability `p = min(1, β τ̂)`
/// and its factor divided by `p`. `on_decision` sees every `p < 1` draw.
pub fn resparsify_once<R: Rng + ?Sized>(
    dim: usize,
    buffer: Vec<BufferedRow>,
    tau: &LeverageEstimates,
    beta: f64,
    rng: &mut R,
    mut on_decision: impl FnMut(usize, f64, bool),
) -> Result<Vec<BufferedRow>> {
    if tau.len() != buffer.len() {
        return Err(Error::InvalidInput(format!("{} estimates for {} rows", tau.len(), buffer.len())));
    }
    let limit = 2.0 * dim as f64;
    if tau.sum() > limit * (1.0 + 1e-12) {
        return Err(Error::Contract(format!("leverage estimates sum to {} > 2n = {limit}", tau.sum())));
    }
    let mut out = Vec::with_capacity(buffer.len());
    for (mut b, &t) in buffer.into_iter().zip(tau.values()) {
        let p = (beta * t).min(1.0);
        if p >= 1.0 {
            out.push(b);
            continue;
        }
        let kept = rng.random::<f64>() < p;
        on_decision(b.source, p, kept);
        if kept {
            b.factor /= p;
            out.push(b);
        }
    }
    Ok(out)
}

/// Consumes `stream` in one pass.
pub fn stream_sparsify(stream: &mut dyn RowStream, cfg: &StreamConfig) -> Result<StreamOutput> {
    let mut s = StreamSparsifier::new(stream.dim(), cfg.clone())?;
    while let Some(row) = stream.next_row() {
        s.push(row?)?;
    }
    Ok(s.finish())
}

/// Graph form: consumes edges and returns the reweighted subgraph.
pub fn stream_sparsify_graph<I>(n: usize, edges: I, cfg: &StreamConfig) -> Result<(WeightedGraph, StreamOutput)>
where
    I: IntoIterator<Item = Result<Edge>>,
{
    let mut s = StreamSparsifier::new(n, cfg.clone())?;
    for e in edges {
        s.push_edge(e?)?;
    }
    let out = s.finish();
    Ok((out.to_graph()?, out))
}

/// Row stream over an edge iterator; convenience re-export for callers that
/// want the generic path.
pub fn edge_stream<I: Iterator<Item = Result<Edge>>>(n: usize, edges: I) -> EdgeRows<I> {
    EdgeRows::new(n, edges)
}
