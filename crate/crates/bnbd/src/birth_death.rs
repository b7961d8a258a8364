//! Continuous-time edge birth-and-death sampling of DAG structures.
//!
//! The chain's state is a DAG. Every valid (non-cycle-causing) edge
//! addition `i -> j` carries a birth rate, every existing edge a unit death
//! rate. Setting the death rates to one pins the birth rates through
//! detailed balance:
//!
//! ```text
//! b(G, i->j) = P(G + i->j | D) / P(G | D)
//! ```
//!
//! which, under a modular score, is a ratio of two family scores of the
//! child `j` plus the prior ratio — no full-graph evaluation. The process
//! waits an exponential time with rate `lambda_b + lambda_d` (total birth
//! rate plus edge count), then removes a uniformly chosen edge with
//! probability `lambda_d / (lambda_b + lambda_d)` or adds edge `i -> j`
//! with probability proportional to its birth rate.
//!
//! [`BirthRateTable`] caches the rates. After a move touching edge
//! `k -> l`, only three kinds of entries change: candidates into `l`
//! (their family changed), candidates that just became valid, and
//! candidates that stopped being valid. Everything else is reused, so a
//! jump costs O(N) rate recomputations rather than O(N^2).
//!
//! Rates live in log space throughout: score ratios can overflow `f64`
//! with strong data, so the aggregate `lambda_b` is kept as a shifted sum
//! `exp(shift) * sum_scaled` and birth selection normalizes over the
//! shifted contributions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::graph::{BitMat, Dag};
use crate::numeric::log_add_exp;
use crate::score::{EdgeOp, ScoreModel};
use crate::trace::{ChainTrace, JumpRecord, MoveKind};

/// RNG identity recorded in trace headers.
pub const RNG_NAME: &str = "chacha8";

/// How the stay in each visited state is weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoldingMode {
    /// The deterministic expectation `1 / (lambda_b + lambda_d)`: the same
    /// estimand as sampling the holding time, with lower variance.
    Expected,
    /// An `Exponential(lambda_b + lambda_d)` draw.
    Sampled,
}

/// A jump of the process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdMove {
    Birth { from: usize, to: usize },
    Death { from: usize, to: usize },
}

impl BdMove {
    pub fn edge(&self) -> (usize, usize) {
        match *self {
            BdMove::Birth { from, to } | BdMove::Death { from, to } => (from, to),
        }
    }

    pub fn kind(&self) -> MoveKind {
        match self {
            BdMove::Birth { .. } => MoveKind::Birth,
            BdMove::Death { .. } => MoveKind::Death,
        }
    }
}

// Aggregate maintenance knobs: rebase the shifted sum before exp() can
// overflow, and recompute it from the table once the tracked rounding
// bound exceeds a 1e-12 relative drift.
const REBASE_MARGIN: f64 = 600.0;
const DRIFT_TOLERANCE: f64 = 1e-12;

/// Cached log birth rates for all valid additions, with a numerically
/// maintained total birth rate and the death rate.
#[derive(Clone, Debug)]
pub struct BirthRateTable {
    n: usize,
    log_rates: Vec<f64>,
    valid: BitMat,
    n_valid: usize,
    shift: f64,
    sum_scaled: f64,
    err_bound: f64,
    lambda_d: f64,
    rate_computes: u64,
}

impl BirthRateTable {
    /// Computes birth rates for every valid addition to `g`.
    ///
    /// When the model caps parent sets, additions into saturated children
    /// are excluded from the valid set (their rate would be undefined).
    pub fn init(g: &Dag, model: &mut ScoreModel) -> Result<Self> {
        let n = g.n_nodes();
        let valid = valid_mask(g, model.max_parents());
        let mut table = BirthRateTable {
            n,
            log_rates: vec![f64::NEG_INFINITY; n * n],
            valid: BitMat::new(n),
            n_valid: 0,
            shift: 0.0,
            sum_scaled: 0.0,
            err_bound: 0.0,
            lambda_d: g.n_edges() as f64,
            rate_computes: 0,
        };
        for i in 0..n {
            for j in valid.iter_row(i) {
                let rate = model.score_delta_for_edge(g, i, j, EdgeOp::Add)?;
                table.rate_computes += 1;
                table.log_rates[i * n + j] = rate;
                table.valid.set(i, j);
                table.n_valid += 1;
            }
        }
        table.recompute_aggregate();
        Ok(table)
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.valid.get(i, j)
    }

    /// Log birth rate of `i -> j`, if it is currently a valid addition.
    pub fn log_rate(&self, i: usize, j: usize) -> Option<f64> {
        if self.valid.get(i, j) {
            Some(self.log_rates[i * self.n + j])
        } else {
            None
        }
    }

    pub fn n_valid(&self) -> usize {
        self.n_valid
    }

    /// Total birth rate; may overflow to infinity for extreme scores, in
    /// which case [`BirthRateTable::log_lambda_b`] is the usable form.
    pub fn lambda_b(&self) -> f64 {
        if self.n_valid == 0 {
            0.0
        } else {
            self.log_lambda_b().exp()
        }
    }

    pub fn log_lambda_b(&self) -> f64 {
        if self.n_valid == 0 {
            f64::NEG_INFINITY
        } else {
            self.shift + self.sum_scaled.ln()
        }
    }

    pub fn lambda_d(&self) -> f64 {
        self.lambda_d
    }

    /// `ln(lambda_b + lambda_d)`.
    pub fn log_lambda_total(&self) -> f64 {
        let log_d = if self.lambda_d > 0.0 {
            self.lambda_d.ln()
        } else {
            f64::NEG_INFINITY
        };
        log_add_exp(self.log_lambda_b(), log_d)
    }

    /// Number of birth-rate (score-delta) computations performed so far,
    /// counting initialization.
    pub fn rate_computes(&self) -> u64 {
        self.rate_computes
    }

    #[inline]
    fn contribution(&self, log_rate: f64) -> f64 {
        (log_rate - self.shift).exp()
    }

    fn set_rate(&mut self, i: usize, j: usize, log_rate: f64) {
        let idx = i * self.n + j;
        if self.valid.get(i, j) {
            let old = self.contribution(self.log_rates[idx]);
            self.sum_scaled -= old;
            self.err_bound += f64::EPSILON * (self.sum_scaled.abs() + old);
        } else {
            self.valid.set(i, j);
            self.n_valid += 1;
        }
        self.log_rates[idx] = log_rate;
        if log_rate - self.shift > REBASE_MARGIN {
            self.recompute_aggregate();
            return;
        }
        let add = self.contribution(log_rate);
        self.sum_scaled += add;
        self.err_bound += f64::EPSILON * (self.sum_scaled.abs() + add);
        self.settle();
    }

    fn clear_rate(&mut self, i: usize, j: usize) {
        if !self.valid.get(i, j) {
            return;
        }
        let idx = i * self.n + j;
        let old = self.contribution(self.log_rates[idx]);
        self.log_rates[idx] = f64::NEG_INFINITY;
        self.valid.clear(i, j);
        self.n_valid -= 1;
        self.sum_scaled -= old;
        self.err_bound += f64::EPSILON * (self.sum_scaled.abs() + old);
        self.settle();
    }

    fn settle(&mut self) {
        if self.n_valid == 0 {
            self.shift = 0.0;
            self.sum_scaled = 0.0;
            self.err_bound = 0.0;
            return;
        }
        if self.sum_scaled < 1e-280 || self.err_bound > DRIFT_TOLERANCE * self.sum_scaled {
            self.recompute_aggregate();
        }
    }

    fn recompute_aggregate(&mut self) {
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            for j in self.valid.iter_row(i) {
                hi = hi.max(self.log_rates[i * self.n + j]);
            }
        }
        if hi == f64::NEG_INFINITY {
            self.shift = 0.0;
            self.sum_scaled = 0.0;
            self.err_bound = 0.0;
            return;
        }
        self.shift = hi;
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in self.valid.iter_row(i) {
                sum += (self.log_rates[i * self.n + j] - hi).exp();
            }
        }
        self.sum_scaled = sum;
        self.err_bound = 0.0;
    }
}

/// Graph validity intersected with the model's parent cap.
fn valid_mask(g: &Dag, max_parents: Option<usize>) -> BitMat {
    let mut mask = g.valid_additions_mask();
    if let Some(cap) = max_parents {
        for j in 0..g.n_nodes() {
            if g.parent_count(j) >= cap {
                for i in 0..g.n_nodes() {
                    mask.clear(i, j);
                }
            }
        }
    }
    mask
}

/// Picks the next jump out of the current graph: a death with probability
/// `lambda_d / (lambda_b + lambda_d)` (uniform over existing edges),
/// otherwise a birth with probability proportional to its rate.
pub fn choose_move(g: &Dag, table: &BirthRateTable, rng: &mut impl Rng) -> Result<BdMove> {
    let births_possible = table.n_valid > 0;
    let deaths_possible = g.n_edges() > 0;
    let death = match (births_possible, deaths_possible) {
        (false, false) => return Err(Error::DegenerateNetwork),
        (false, true) => true,
        (true, false) => false,
        (true, true) => {
            // P(death) = 1 / (1 + lambda_b / lambda_d), evaluated in log space.
            let z = table.log_lambda_b() - table.lambda_d.ln();
            let p_death = if z > 0.0 {
                (-z).exp() / (1.0 + (-z).exp())
            } else {
                1.0 / (1.0 + z.exp())
            };
            rng.gen::<f64>() < p_death
        }
    };
    if death {
        let k = rng.gen_range(0..g.n_edges());
        let (from, to) = g.edges()[k];
        Ok(BdMove::Death { from, to })
    } else {
        // Inverse-CDF walk over the shifted contributions, row-major.
        let threshold = rng.gen::<f64>() * table.sum_scaled;
        let mut acc = 0.0;
        let mut last = None;
        for i in 0..table.n {
            for j in table.valid.iter_row(i) {
                acc += table.contribution(table.log_rates[i * table.n + j]);
                last = Some((i, j));
                if acc > threshold {
                    return Ok(BdMove::Birth { from: i, to: j });
                }
            }
        }
        // Rounding can leave the threshold a hair above the final
        // cumulative sum; the last candidate is the right answer then.
        let (from, to) = last.ok_or(Error::DegenerateNetwork)?;
        Ok(BdMove::Birth { from, to })
    }
}

/// Weight of the stay in the current graph: `1 / (lambda_b + lambda_d)` or
/// an exponential draw with that rate, clamped away from zero.
pub fn holding_weight(table: &BirthRateTable, mode: HoldingMode, rng: &mut impl Rng) -> f64 {
    let inv_rate = (-table.log_lambda_total()).exp();
    let w = match mode {
        HoldingMode::Expected => inv_rate,
        HoldingMode::Sampled => {
            let e: f64 = rng.sample(Exp1);
            e * inv_rate
        }
    };
    w.max(f64::MIN_POSITIVE)
}

/// One simulation step of the process sitting in `g`: the holding time in
/// `g` and the jump that ends it. Does not modify anything; pair with
/// [`apply_move`] to advance.
pub fn step(
    g: &Dag,
    table: &BirthRateTable,
    mode: HoldingMode,
    rng: &mut impl Rng,
) -> Result<(BdMove, f64)> {
    let mv = choose_move(g, table, rng)?;
    let w = holding_weight(table, mode, rng);
    Ok((mv, w))
}

/// Applies `mv` to the graph and updates the rate table incrementally.
///
/// Only three kinds of entries are recomputed, matching the cached-rate
/// bookkeeping this sampler is built around: candidates into the moved
/// edge's child, candidates that just became valid, and (cleared, not
/// recomputed) candidates that stopped being valid.
pub fn apply_move(
    g: &mut Dag,
    table: &mut BirthRateTable,
    model: &mut ScoreModel,
    mv: BdMove,
) -> Result<()> {
    let old_valid = table.valid.clone();
    let (from, to) = mv.edge();
    match mv {
        BdMove::Birth { .. } => g.add_edge(from, to)?,
        BdMove::Death { .. } => g.remove_edge(from, to)?,
    }
    let new_valid = valid_mask(g, model.max_parents());
    let child = to;
    for i in 0..table.n {
        for j in old_valid.iter_row(i) {
            if !new_valid.get(i, j) {
                table.clear_rate(i, j);
            }
        }
    }
    for i in 0..table.n {
        for j in new_valid.iter_row(i) {
            if j == child || !old_valid.get(i, j) {
                let rate = model.score_delta_for_edge(g, i, j, EdgeOp::Add)?;
                table.rate_computes += 1;
                table.set_rate(i, j, rate);
            }
        }
    }
    table.lambda_d = g.n_edges() as f64;
    Ok(())
}

/// Counters a run reports alongside its trace.
#[derive(Clone, Copy, Debug)]
pub struct RunDiagnostics {
    /// Rate computations spent initializing the table.
    pub init_rate_computes: u64,
    /// Total rate computations including initialization.
    pub total_rate_computes: u64,
}

/// Runs the process for `n_jumps` jumps from `g0`.
///
/// Each record carries the state after its jump: the move, the state's
/// holding weight under `mode`, its log score and AIC, and cumulative
/// process time. Deterministic for a fixed seed.
pub fn run(
    g0: &Dag,
    model: &mut ScoreModel,
    n_jumps: usize,
    mode: HoldingMode,
    seed: u64,
) -> Result<ChainTrace> {
    run_diagnosed(g0, model, n_jumps, mode, seed).map(|(trace, _)| trace)
}

/// [`run`], also reporting rate-recomputation counters.
pub fn run_diagnosed(
    g0: &Dag,
    model: &mut ScoreModel,
    n_jumps: usize,
    mode: HoldingMode,
    seed: u64,
) -> Result<(ChainTrace, RunDiagnostics)> {
    if g0.n_nodes() < 2 {
        return Err(Error::DegenerateNetwork);
    }
    if n_jumps == 0 {
        return Err(Error::InvalidArgument("n_jumps must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = g0.clone();
    let mut table = BirthRateTable::init(&g, model)?;
    let init_rate_computes = table.rate_computes();

    let has_rows = model.data().n_rows() > 0;
    let n = g.n_nodes();
    let mut stats = Vec::with_capacity(n);
    for j in 0..n {
        stats.push(model.family_stats(j, &g.parents(j))?);
    }

    let mut records = Vec::with_capacity(n_jumps);
    let mut cum_time = 0.0;
    for _ in 0..n_jumps {
        let mv = choose_move(&g, &table, &mut rng)?;
        apply_move(&mut g, &mut table, model, mv)?;
        let child = mv.edge().1;
        stats[child] = model.family_stats(child, &g.parents(child))?;

        let w = holding_weight(&table, mode, &mut rng);
        cum_time += w;
        let log_score = model.graph_log_prior(&g)
            + stats.iter().map(|s| s.log_marginal).sum::<f64>();
        let aic = if has_rows {
            stats
                .iter()
                .map(|s| -2.0 * s.max_log_lik + 2.0 * s.n_params)
                .sum()
        } else {
            f64::NAN
        };
        let (from, to) = mv.edge();
        records.push(JumpRecord {
            kind: mv.kind(),
            from,
            to,
            holding_weight: w,
            cum_time,
            log_score,
            aic,
        });
    }
    let trace = ChainTrace {
        initial: g0.clone(),
        records,
        seed,
        rng_name: RNG_NAME,
    };
    let diagnostics = RunDiagnostics {
        init_rate_computes,
        total_rate_computes: table.rate_computes(),
    };
    Ok((trace, diagnostics))
}
