//! The resparsification game.
//!
//! Rows `a_1, …, a_m` with `Σ a_i a_iᵀ = M` start with weight 1. An adversary
//! repeatedly picks a row `i` and a keep probability `p` subject to
//! `(w_i / p) · a_iᵀ M† a_i ≤ 1/α`; the row is then rescaled to `w_i / p` with
//! probability `p` and zeroed otherwise. The adversary wins if `Σ w_i a_i a_iᵀ`
//! ever leaves `[(1−ε)M, (1+ε)M]`.
//!
//! The engine tracks the martingale difference `X_j` of every move and the
//! predictable quadratic variation `W_k = Σ E_{j−1}[X_j²]`. Both are kept in
//! the whitened frame `ā = M^{†/2} a`, where `‖ā‖² = a_iᵀ M† a_i` and the
//! target matrix becomes the identity.
//!
//! In coupled mode each row draws `x_i ~ Exp(1)` once at the start and a move
//! keeps the row iff `w_i / p ≤ e^{x_i}`; by memorylessness this happens with
//! probability `p` given the history.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Row;
use crate::linalg::{
    add_outer, exact_row_leverage, gram, infer_kernel, DenseMatrix, RangeFactor, DEFAULT_DENSE_CAP,
};
use rayon::prelude::*;

use crate::rng::{exponential, RngSeed, TAG_GAME_EXP, TAG_GAME_FRESH, TAG_STRATEGY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Randomness {
    /// One Exp(1) draw per row for the whole game.
    Coupled,
    /// A fresh uniform draw per move.
    Fresh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WinCheck {
    EveryMove,
    Every(usize),
    AtEnd,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameConfig {
    pub epsilon: f64,
    /// `α = c_alpha · ln(n) / ε²`.
    pub c_alpha: f64,
    pub randomness: Randomness,
    /// Only allow `p ≥ 1/2`.
    pub strict: bool,
    pub win_check: WinCheck,
    /// Recompute `Σ w_i a_i a_iᵀ` from scratch after every move and compare
    /// with the cached matrix. Costs `O(m n²)` per move.
    pub audit: bool,
    pub dense_cap: usize,
    /// Admit rows with leverage above `1/α` instead of rejecting the game.
    /// Such rows can never be moved. Used when replaying algorithm runs.
    pub admit_high_leverage: bool,
}

impl GameConfig {
    pub fn new(epsilon: f64) -> Self {
        GameConfig {
            epsilon,
            c_alpha: 8.0,
            randomness: Randomness::Coupled,
            strict: false,
            win_check: WinCheck::EveryMove,
            audit: false,
            dense_cap: DEFAULT_DENSE_CAP,
            admit_high_leverage: false,
        }
    }

    pub fn alpha(&self, n: usize) -> f64 {
        self.c_alpha * (n.max(2) as f64).ln() / (self.epsilon * self.epsilon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Kept,
    Dropped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    AdversaryWon,
    NotYet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub index: usize,
    pub p: f64,
    pub kept: bool,
    pub weight_before: f64,
    /// `‖X_j‖`: `((1−p)/p)·w·τ` when kept, `w·τ` when dropped.
    pub norm_x: f64,
    /// `‖W_j‖`, filled in when the win condition was evaluated after this move.
    pub norm_w: Option<f64>,
    pub epsilon_star: Option<f64>,
}

/// Move history plus the accumulated predictable quadratic variation.
#[derive(Debug, Clone)]
pub struct GameTrace {
    records: Vec<MoveRecord>,
    variation: DMatrix<f64>,
}

impl GameTrace {
    fn new(rank: usize) -> Self {
        GameTrace { records: Vec::new(), variation: DMatrix::zeros(rank, rank) }
    }

    pub fn records(&self) -> &[MoveRecord] {
        &self.records
    }

    /// `W_k` in the whitened frame.
    pub fn variation(&self) -> &DMatrix<f64> {
        &self.variation
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("move,i,p,kept,norm_X,norm_W,epsilon_star\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        for (j, r) in self.records.iter().enumerate() {
            writeln!(
                s,
                "{},{},{:.17e},{},{:.17e},{},{}",
                j + 1,
                r.index,
                r.p,
                r.kept as u8,
                r.norm_x,
                opt(r.norm_w),
                opt(r.epsilon_star)
            )
            .unwrap();
        }
        s
    }
}

/// Spectral norm of the accumulated quadratic variation.
pub fn quadratic_variation_norm(trace: &GameTrace) -> f64 {
    largest_eigenvalue(&trace.variation)
}

fn largest_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max)
}

#[derive(Clone)]
pub struct GameState {
    rows: Vec<Row>,
    dim: usize,
    weights: Vec<f64>,
    exponentials: Option<Vec<f64>>,
    alpha: f64,
    epsilon: f64,
    strict: bool,
    audit: bool,
    win_check: WinCheck,
    leverage: Vec<f64>,
    whitened: Vec<DVector<f64>>,
    target: DenseMatrix,
    current: DenseMatrix,
    /// `current` in the whitened frame
    relative: DMatrix<f64>,
    fresh_rng: ChaCha8Rng,
    trace: GameTrace,
}

impl std::fmt::Debug for GameState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GameState")
            .field("rows", &self.rows.len())
            .field("dim", &self.dim)
            .field("alpha", &self.alpha)
            .field("epsilon", &self.epsilon)
            .field("moves", &self.trace.records.len())
            .finish()
    }
}

impl GameState {
    /// New game with `α` taken from the config.
    pub fn new(dim: usize, rows: Vec<Row>, cfg: &GameConfig, seed: RngSeed) -> Result<Self> {
        Self::with_alpha(dim, rows, cfg.alpha(dim), cfg, seed)
    }

    /// New game with an explicit `α`, as used when replaying an algorithm run.
    pub fn with_alpha(dim: usize, rows: Vec<Row>, alpha: f64, cfg: &GameConfig, seed: RngSeed) -> Result<Self> {
        if !(cfg.epsilon > 0.0 && cfg.epsilon <= 0.5) {
            return Err(Error::Precondition(format!("epsilon must lie in (0, 1/2], got {}", cfg.epsilon)));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
        }
        if dim > cfg.dense_cap {
            return Err(Error::SizeCap { n: dim, cap: cfg.dense_cap });
        }
        if let Some(r) = rows.iter().find(|r| r.dim() != dim) {
            return Err(Error::InvalidInput(format!("row of dimension {} in a game of dimension {dim}", r.dim())));
        }
        let kernel = infer_kernel(dim, &rows);
        let target = gram(dim, rows.iter().map(|r| (r, 1.0)));
        let factor = RangeFactor::new(&target, kernel)?;
        let leverage = exact_row_leverage(dim, &rows, kernel, cfg.dense_cap)?;
        let limit = 1.0 / alpha;
        let high: Vec<usize> = leverage.iter().enumerate().filter(|(_, t)| **t > limit).map(|(i, _)| i).collect();
        if !high.is_empty() && !cfg.admit_high_leverage {
            return Err(Error::HighLeverageRows { limit, indices: high });
        }
        let whitener = factor.whitener();
        let whitened: Vec<DVector<f64>> = rows
            .iter()
            .map(|r| {
                let mut v = DVector::zeros(factor.rank());
                for &(j, a) in r.entries() {
                    v.axpy(a, &whitener.column(j), 1.0);
                }
                v
            })
            .collect();
        let exponentials = match cfg.randomness {
            Randomness::Coupled => {
                let mut rng = seed.substream(TAG_GAME_EXP, 0);
                Some((0..rows.len()).map(|_| exponential(&mut rng, 1.0)).collect())
            }
            Randomness::Fresh => None,
        };
        let rank = factor.rank();
        Ok(GameState {
            weights: vec![1.0; rows.len()],
            dim,
            exponentials,
            alpha,
            epsilon: cfg.epsilon,
            strict: cfg.strict,
            audit: cfg.audit,
            win_check: cfg.win_check,
            leverage,
            whitened,
            current: target.clone(),
            relative: DMatrix::identity(rank, rank),
            target,
            rows,
            fresh_rng: seed.substream(TAG_GAME_FRESH, 0),
            trace: GameTrace::new(rank),
        })
    }

    /// Same rows and `α`, fresh randomness. Only valid before the first move.
    pub fn reseeded(&self, seed: RngSeed) -> Result<Self> {
        if self.moves() > 0 {
            return Err(Error::Precondition("cannot reseed a game in progress".into()));
        }
        let mut g = self.clone();
        if let Some(x) = g.exponentials.as_mut() {
            let mut rng = seed.substream(TAG_GAME_EXP, 0);
            x.iter_mut().for_each(|v| *v = exponential(&mut rng, 1.0));
        }
        g.fresh_rng = seed.substream(TAG_GAME_FRESH, 0);
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `a_iᵀ M† a_i` for every row.
    pub fn leverage(&self) -> &[f64] {
        &self.leverage
    }

    pub fn target(&self) -> &DenseMatrix {
        &self.target
    }

    /// Cached `Σ w_i a_i a_iᵀ`.
    pub fn current(&self) -> &DenseMatrix {
        &self.current
    }

    pub fn trace(&self) -> &GameTrace {
        &self.trace
    }

    pub fn into_trace(self) -> GameTrace {
        self.trace
    }

    pub fn moves(&self) -> usize {
        self.trace.records.len()
    }

    /// `w̄_i = min(e^{x_i}, 1/(α τ_i))` in coupled mode.
    pub fn weight_ceiling(&self, i: usize) -> Option<f64> {
        let x = self.exponentials.as_ref()?[i];
        Some(x.exp().min(1.0 / (self.alpha * self.leverage[i])))
    }

    pub fn legal_move(&self, i: usize, p: f64) -> bool {
        if i >= self.rows.len() || !(p > 0.0 && p <= 1.0) {
            return false;
        }
        if self.strict && p < 0.5 {
            return false;
        }
        let w = self.weights[i];
        w != 0.0 && (w / p) * self.leverage[i] <= 1.0 / self.alpha
    }

    fn illegal(&self, i: usize, p: f64) -> Error {
        let reason = if i >= self.rows.len() {
            "row index out of range".to_string()
        } else if !(p > 0.0 && p <= 1.0) {
            "p outside (0, 1]".to_string()
        } else if self.strict && p < 0.5 {
            "p < 1/2 in strict mode".to_string()
        } else if self.weights[i] == 0.0 {
            "row already removed".to_string()
        } else {
            format!(
                "(w/p)·leverage = {:e} exceeds 1/alpha = {:e}",
                self.weights[i] / p * self.leverage[i],
                1.0 / self.alpha
            )
        };
        Error::IllegalMove { row: i, p, reason }
    }

    /// Plays a move with the game's own randomness.
    pub fn play_move(&mut self, i: usize, p: f64) -> Result<Outcome> {
        if !self.legal_move(i, p) {
            return Err(self.illegal(i, p));
        }
        let w = self.weights[i];
        let kept = match &self.exponentials {
            Some(x) => (w / p).ln() <= x[i],
            None => self.fresh_rng.random::<f64>() < p,
        };
        self.apply(i, p, kept)
    }

    /// Plays a move whose outcome was decided elsewhere (an algorithm being
    /// replayed as an adversary). Legality is still enforced.
    pub fn replay_move(&mut self, i: usize, p: f64, kept: bool) -> Result<Outcome> {
        if !self.legal_move(i, p) {
            return Err(self.illegal(i, p));
        }
        if p == 1.0 && !kept {
            return Err(Error::IllegalMove { row: i, p, reason: "a p = 1 move cannot drop the row".into() });
        }
        self.apply(i, p, kept)
    }

    fn apply(&mut self, i: usize, p: f64, kept: bool) -> Result<Outcome> {
        let w = self.weights[i];
        let tau = self.leverage[i];
        let new_w = if kept { w / p } else { 0.0 };
        let delta = new_w - w;
        if delta != 0.0 {
            add_outer(&mut self.current, &self.rows[i], delta);
            let a = &self.whitened[i];
            self.relative.ger(delta, a, a, 1.0);
        }
        self.weights[i] = new_w;

        let norm_x = if kept { (1.0 - p) / p * w * tau } else { w * tau };
        let limit = 1.0 / self.alpha;
        if norm_x > limit * (1.0 + 1e-12) {
            return Err(Error::Contract(format!("|X_j| = {norm_x:e} exceeds 1/alpha = {limit:e}")));
        }
        let coeff = (1.0 - p) / p * w * w * tau;
        if coeff != 0.0 {
            let a = &self.whitened[i];
            self.trace.variation.ger(coeff, a, a, 1.0);
        }
        if let Some(ceiling) = self.weight_ceiling(i) {
            if new_w > ceiling * (1.0 + 1e-12) {
                return Err(Error::Contract(format!("w_{i} = {new_w} exceeds its ceiling {ceiling}")));
            }
        }
        self.trace.records.push(MoveRecord {
            index: i,
            p,
            kept,
            weight_before: w,
            norm_x,
            norm_w: None,
            epsilon_star: None,
        });
        if self.audit {
            let fresh = gram(self.dim, self.rows.iter().zip(&self.weights).map(|(r, w)| (r, *w)));
            let err = (&fresh - &self.current).amax();
            if err > 1e-10 {
                return Err(Error::Contract(format!("cached weighted matrix drifted by {err:e}")));
            }
        }
        Ok(if kept { Outcome::Kept } else { Outcome::Dropped })
    }

    /// `max |λ − 1|` of `Σ w_i a_i a_iᵀ` relative to `M`.
    pub fn epsilon_star(&self) -> f64 {
        if self.relative.nrows() == 0 {
            return 0.0;
        }
        let vals = self.relative.clone().symmetric_eigenvalues();
        vals.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Evaluates the win condition and annotates the latest trace record.
    pub fn check_win(&mut self) -> Verdict {
        let eps = self.epsilon_star();
        let norm_w = quadratic_variation_norm(&self.trace);
        if let Some(last) = self.trace.records.last_mut() {
            last.epsilon_star = Some(eps);
            last.norm_w = Some(norm_w);
        }
        if eps > self.epsilon {
            Verdict::AdversaryWon
        } else {
            Verdict::NotYet
        }
    }

    fn check_due(&self) -> bool {
        match self.win_check {
            WinCheck::EveryMove => true,
            WinCheck::Every(k) => k > 0 && self.moves().is_multiple_of(k),
            WinCheck::AtEnd => false,
        }
    }
}

/// A policy choosing the next move, or `None` to end the game.
pub trait AdversaryStrategy {
    fn next_move(&mut self, state: &GameState) -> Option<(usize, f64)>;
}

/// Sweeps the rows round-robin, halving (`p = 1/2`) every row for which that
/// is legal; stops once no row can be halved.
#[derive(Debug, Default, Clone)]
pub struct HalvingSchedule {
    cursor: usize,
}

impl HalvingSchedule {
    pub fn new() -> Self {
        Self::default()
    }
}

impl AdversaryStrategy for HalvingSchedule {
    fn next_move(&mut self, state: &GameState) -> Option<(usize, f64)> {
        let m = state.row_count();
        for step in 0..m {
            let i = (self.cursor + step) % m;
            if state.legal_move(i, 0.5) {
                self.cursor = i + 1;
                return Some((i, 0.5));
            }
        }
        None
    }
}

/// Picks a random live row that admits some `p < 1`, then `p` uniformly from
/// the legal range. Stops after `budget` moves or when no such row exists.
#[derive(Debug, Clone)]
pub struct UniformRandomLegal {
    rng: ChaCha8Rng,
    budget: usize,
    strict: bool,
}

impl UniformRandomLegal {
    pub fn new(seed: RngSeed, budget: usize, strict: bool) -> Self {
        UniformRandomLegal { rng: seed.substream(TAG_STRATEGY, 0), budget, strict }
    }

    fn min_p(&self, state: &GameState, i: usize) -> Option<f64> {
        let w = state.weights()[i];
        if w == 0.0 {
            return None;
        }
        let lo = (state.alpha() * w * state.leverage()[i]).max(if self.strict { 0.5 } else { 1e-3 });
        (lo < 1.0).then_some(lo)
    }
}

impl AdversaryStrategy for UniformRandomLegal {
    fn next_move(&mut self, state: &GameState) -> Option<(usize, f64)> {
        if self.budget == 0 {
            return None;
        }
        let m = state.row_count();
        let start = self.rng.random_range(0..m.max(1));
        let i = (0..m).map(|s| (start + s) % m).find(|&i| self.min_p(state, i).is_some())?;
        let lo = self.min_p(state, i)?;
        let p = (lo + (1.0 - lo) * self.rng.random::<f64>()).min(1.0);
        self.budget -= 1;
        state.legal_move(i, p).then_some((i, p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GameEnd {
    AdversaryWon { at_move: usize },
    /// The strategy had no further move and the final check passed.
    AdversaryLost,
    MoveCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameSummary {
    pub end: GameEnd,
    pub moves: usize,
    pub max_epsilon_star: f64,
    pub final_epsilon_star: f64,
    /// `‖W_k‖` at the end; `W_k` is Loewner-monotone so this is also the maximum.
    pub variation_norm: f64,
}

/// Runs `strategy` until it stops, the adversary wins, or `max_moves` moves.
pub fn run_strategy(
    state: &mut GameState,
    strategy: &mut dyn AdversaryStrategy,
    max_moves: usize,
) -> Result<GameSummary> {
    let mut max_eps: f64 = 0.0;
    let mut end = None;
    while state.moves() < max_moves {
        let Some((i, p)) = strategy.next_move(state) else {
            break;
        };
        state.play_move(i, p)?;
        if state.check_due() {
            let verdict = state.check_win();
            max_eps = max_eps.max(state.trace.records.last().and_then(|r| r.epsilon_star).unwrap_or(0.0));
            if verdict == Verdict::AdversaryWon {
                end = Some(GameEnd::AdversaryWon { at_move: state.moves() });
                break;
            }
        }
    }
    let final_eps = state.epsilon_star();
    max_eps = max_eps.max(final_eps);
    let end = match end {
        Some(e) => e,
        None if final_eps > state.epsilon => GameEnd::AdversaryWon { at_move: state.moves() },
        None if state.moves() >= max_moves => GameEnd::MoveCap,
        None => GameEnd::AdversaryLost,
    };
    if state.trace.records.last().is_some_and(|r| r.epsilon_star.is_none()) {
        state.check_win();
    }
    Ok(GameSummary {
        end,
        moves: state.moves(),
        max_epsilon_star: max_eps,
        final_epsilon_star: final_eps,
        variation_norm: quadratic_variation_norm(&state.trace),
    })
}

/// Replaces each row `a` with `s = max(1, ceil(τ α 2^headroom))` copies of
/// `a/√s`. `M` is unchanged and every copy has leverage at most
/// `1/(α 2^headroom)`, so rows whose leverage exceeds `1/α` become playable
/// and each copy can be halved `headroom` times.
pub fn split_rows(dim: usize, rows: &[Row], alpha: f64, headroom: u32, cap: usize) -> Result<Vec<Row>> {
    let lev = exact_row_leverage(dim, rows, infer_kernel(dim, rows), cap)?;
    let mut out = Vec::new();
    let boost = alpha * 2f64.powi(headroom as i32);
    for (r, t) in rows.iter().zip(lev) {
        let s = ((t * boost).ceil() as usize).max(1);
        let copy = r.scaled(1.0 / (s as f64).sqrt());
        out.extend(std::iter::repeat_n(copy, s));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyKind {
    Halving,
    UniformRandom { budget: usize },
}

impl StrategyKind {
    pub fn build(self, seed: RngSeed, strict: bool) -> Box<dyn AdversaryStrategy> {
        match self {
            StrategyKind::Halving => Box::new(HalvingSchedule::new()),
            StrategyKind::UniformRandom { budget } => Box::new(UniformRandomLegal::new(seed, budget, strict)),
        }
    }
}

/// Trial `t` of [`monte_carlo`]: the prototype reseeded with
/// `seed.derive(…, t)` and played to the end. Returns the final state too.
pub fn play_trial(
    prototype: &GameState,
    kind: StrategyKind,
    seed: RngSeed,
    t: usize,
    max_moves: usize,
) -> Result<(GameSummary, GameState)> {
    let trial_seed = seed.derive(TAG_STRATEGY, t as u64);
    let mut state = prototype.reseeded(trial_seed)?;
    let mut strategy = kind.build(trial_seed, prototype.strict);
    let summary = run_strategy(&mut state, strategy.as_mut(), max_moves)?;
    Ok((summary, state))
}

/// Independent games from one prototype, in parallel; results in trial order.
pub fn monte_carlo(
    prototype: &GameState,
    kind: StrategyKind,
    trials: usize,
    seed: RngSeed,
    max_moves: usize,
) -> Result<Vec<GameSummary>> {
    (0..trials)
        .into_par_iter()
        .map(|t| play_trial(prototype, kind, seed, t, max_moves).map(|r| r.0))
        .collect()
}

/// Outcome of replaying an algorithm's sampling decisions as game moves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub moves: usize,
    /// First move that was illegal, if any. Only reported when the game had
    /// already left the `ε` band before that move; otherwise it is an error.
    pub stopped_at: Option<usize>,
    pub final_epsilon_star: f64,
}

/// Replays `(row, p, kept)` decisions against `M = Σ a_i a_iᵀ` with the given
/// `α`. Moves with `p ≥ 1` are no-ops and skipped. An illegal move is a
/// contract violation while `ε* ≤ ε` still holds; once the band has been left
/// the replay stops and reports where.
pub fn replay_decisions<I>(
    dim: usize,
    rows: Vec<Row>,
    alpha: f64,
    epsilon: f64,
    decisions: I,
) -> Result<ReplayReport>
where
    I: IntoIterator<Item = (usize, f64, bool)>,
{
    let mut cfg = GameConfig::new(epsilon);
    cfg.admit_high_leverage = true;
    cfg.randomness = Randomness::Fresh;
    let mut game = GameState::with_alpha(dim, rows, alpha, &cfg, RngSeed(0))?;
    let mut moves = 0;
    for (i, p, kept) in decisions {
        if p >= 1.0 {
            continue;
        }
        if !game.legal_move(i, p) {
            let eps = game.epsilon_star();
            if eps > epsilon {
                return Ok(ReplayReport { moves, stopped_at: Some(moves), final_epsilon_star: eps });
            }
            return Err(game.illegal(i, p));
        }
        game.replay_move(i, p, kept)?;
        moves += 1;
    }
    Ok(ReplayReport { moves, stopped_at: None, final_epsilon_star: game.epsilon_star() })
}
