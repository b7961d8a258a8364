//! Discrete-time structure MCMC baseline.
//!
//! Single-edge Metropolis-Hastings over DAGs: propose uniformly from the
//! neighborhood of the current graph (valid additions plus deletions, and
//! optionally reversals), accept with probability
//! `min(1, exp(delta) * |N(G)| / |N(G')|)`. The neighborhood-size ratio is
//! the Hastings correction for the asymmetric uniform proposal.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::score::{EdgeOp, ScoreModel};
use crate::trace::{ChainTrace, JumpRecord, MoveKind};

/// A proposable move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhMove {
    Add { from: usize, to: usize },
    Delete { from: usize, to: usize },
    /// Replace `from -> to` by `to -> from`. Only proposed when enabled.
    Reverse { from: usize, to: usize },
}

impl MhMove {
    pub fn edge(&self) -> (usize, usize) {
        match *self {
            MhMove::Add { from, to }
            | MhMove::Delete { from, to }
            | MhMove::Reverse { from, to } => (from, to),
        }
    }
}

/// One Metropolis-Hastings chain: the current graph, its scoring model,
/// and step/acceptance counters.
pub struct MhChain {
    g: Dag,
    model: ScoreModel,
    steps: u64,
    accepts: u64,
    allow_reversal: bool,
}

impl MhChain {
    pub fn new(g0: Dag, model: ScoreModel, allow_reversal: bool) -> Result<Self> {
        if g0.n_nodes() < 2 {
            return Err(Error::DegenerateNetwork);
        }
        Ok(MhChain {
            g: g0,
            model,
            steps: 0,
            accepts: 0,
            allow_reversal,
        })
    }

    pub fn graph(&self) -> &Dag {
        &self.g
    }

    pub fn model_mut(&mut self) -> &mut ScoreModel {
        &mut self.model
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn accepts(&self) -> u64 {
        self.accepts
    }

    /// Additions must both be graph-valid and respect the model's parent cap.
    fn addition_allowed(&self, i: usize, j: usize) -> bool {
        self.g.valid_unchecked(i, j)
            && self
                .model
                .max_parents()
                .is_none_or(|cap| self.g.parent_count(j) < cap)
    }

    /// `from -> to` can be reversed iff no other directed path `from -> to`
    /// survives the removal (otherwise the reversal closes a cycle), and the
    /// new child respects the parent cap.
    fn reversal_allowed(&self, from: usize, to: usize) -> bool {
        if !self.g.has_edge(from, to) {
            return false;
        }
        if let Some(cap) = self.model.max_parents() {
            if self.g.parent_count(from) >= cap {
                return false;
            }
        }
        !self
            .g
            .children(from)
            .any(|c| c != to && self.g.reaches(c, to))
    }

    /// The full proposal neighborhood, in deterministic order:
    /// additions (row-major), then deletions, then reversals if enabled.
    pub fn neighborhood(&self) -> Vec<MhMove> {
        let n = self.g.n_nodes();
        let mut moves = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.addition_allowed(i, j) {
                    moves.push(MhMove::Add { from: i, to: j });
                }
            }
        }
        for (i, j) in self.g.edges() {
            moves.push(MhMove::Delete { from: i, to: j });
        }
        if self.allow_reversal {
            for (i, j) in self.g.edges() {
                if self.reversal_allowed(i, j) {
                    moves.push(MhMove::Reverse { from: i, to: j });
                }
            }
        }
        moves
    }

    pub fn neighborhood_size(&self) -> usize {
        let n = self.g.n_nodes();
        let mut count = self.g.n_edges();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.addition_allowed(i, j) {
                    count += 1;
                }
            }
        }
        if self.allow_reversal {
            count += self
                .g
                .edges()
                .into_iter()
                .filter(|&(i, j)| self.reversal_allowed(i, j))
                .count();
        }
        count
    }

    /// A uniform draw from the neighborhood.
    pub fn propose(&self, rng: &mut impl Rng) -> Result<MhMove> {
        let moves = self.neighborhood();
        if moves.is_empty() {
            return Err(Error::DegenerateNetwork);
        }
        Ok(moves[rng.gen_range(0..moves.len())])
    }

    fn apply(&mut self, mv: MhMove) -> Result<()> {
        match mv {
            MhMove::Add { from, to } => self.g.add_edge(from, to),
            MhMove::Delete { from, to } => self.g.remove_edge(from, to),
            MhMove::Reverse { from, to } => {
                self.g.remove_edge(from, to)?;
                self.g.add_edge(to, from)
            }
        }
    }

    fn undo(&mut self, mv: MhMove) -> Result<()> {
        match mv {
            MhMove::Add { from, to } => self.g.remove_edge(from, to),
            MhMove::Delete { from, to } => self.g.add_edge(from, to),
            MhMove::Reverse { from, to } => {
                self.g.remove_edge(to, from)?;
                self.g.add_edge(from, to)
            }
        }
    }

    fn score_delta(&mut self, mv: MhMove) -> Result<f64> {
        match mv {
            MhMove::Add { from, to } => {
                self.model.score_delta_for_edge(&self.g, from, to, EdgeOp::Add)
            }
            MhMove::Delete { from, to } => {
                self.model
                    .score_delta_for_edge(&self.g, from, to, EdgeOp::Remove)
            }
            MhMove::Reverse { from, to } => {
                // Both endpoints' families change; the edge count does not,
                // so the prior cancels.
                let pa_to = self.g.parents(to);
                let mut pa_to_new = pa_to.clone();
                pa_to_new.retain(|&p| p != from);
                let pa_from = self.g.parents(from);
                let mut pa_from_new = pa_from.clone();
                pa_from_new.push(to);
                Ok(self.model.family_log_score(to, &pa_to_new)?
                    - self.model.family_log_score(to, &pa_to)?
                    + self.model.family_log_score(from, &pa_from_new)?
                    - self.model.family_log_score(from, &pa_from)?)
            }
        }
    }

    /// Proposes, accepts or rejects, and returns the proposed move together
    /// with whether it was accepted. The graph is left at the new (or
    /// unchanged) state.
    pub fn step(&mut self, rng: &mut impl Rng) -> Result<(MhMove, bool)> {
        let size_old = self.neighborhood_size();
        if size_old == 0 {
            return Err(Error::DegenerateNetwork);
        }
        let mv = self.propose(rng)?;
        let delta = self.score_delta(mv)?;
        self.apply(mv)?;
        let size_new = self.neighborhood_size();
        let log_ratio = delta + (size_old as f64).ln() - (size_new as f64).ln();
        let accept = log_ratio >= 0.0 || rng.gen::<f64>().ln() < log_ratio;
        self.steps += 1;
        if accept {
            self.accepts += 1;
        } else {
            self.undo(mv)?;
        }
        Ok((mv, accept))
    }
}

/// Runs a chain for `n_steps` steps from `g0`.
///
/// Records carry unit holding weights (discrete time); rejected proposals
/// are recorded with kind `R` and repeat the unchanged state's scores.
pub fn run(
    g0: &Dag,
    model: ScoreModel,
    n_steps: usize,
    allow_reversal: bool,
    seed: u64,
) -> Result<ChainTrace> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let has_rows = model.data().n_rows() > 0;
    let n = g0.n_nodes();
    let mut chain = MhChain::new(g0.clone(), model, allow_reversal)?;

    let mut stats = Vec::with_capacity(n);
    for j in 0..n {
        stats.push(chain.model.family_stats(j, &chain.g.parents(j))?);
    }

    let mut records = Vec::with_capacity(n_steps);
    for t in 1..=n_steps {
        let (mv, accepted) = chain.step(&mut rng)?;
        let (from, to) = mv.edge();
        let kind = if !accepted {
            MoveKind::Rejected
        } else {
            match mv {
                MhMove::Add { .. } => MoveKind::Birth,
                MhMove::Delete { .. } => MoveKind::Death,
                MhMove::Reverse { .. } => MoveKind::Reversal,
            }
        };
        if accepted {
            stats[to] = chain.model.family_stats(to, &chain.g.parents(to))?;
            if matches!(mv, MhMove::Reverse { .. }) {
                stats[from] = chain.model.family_stats(from, &chain.g.parents(from))?;
            }
        }
        let log_score = chain.model.graph_log_prior(&chain.g)
            + stats.iter().map(|s| s.log_marginal).sum::<f64>();
        let aic = if has_rows {
            stats
                .iter()
                .map(|s| -2.0 * s.max_log_lik + 2.0 * s.n_params)
                .sum()
        } else {
            f64::NAN
        };
        records.push(JumpRecord {
            kind,
            from,
            to,
            holding_weight: 1.0,
            cum_time: t as f64,
            log_score,
            aic,
        });
    }
    Ok(ChainTrace {
        initial: g0.clone(),
        records,
        seed,
        rng_name: crate::birth_death::RNG_NAME,
    })
}
