//! Chain traces: the sequence of jumps a sampler took, with holding-time
//! weights and per-state scores.
//!
//! A trace stores the initial graph and one record per jump, not full
//! graphs; consumers replay the moves. Each record describes the state the
//! chain was in *after* its move: the move itself, the weight of the stay
//! in that state (an exponential holding time or its expectation for the
//! jump process, the constant 1 for a discrete-time chain), the state's
//! unnormalized log posterior and AIC, and cumulative process time. The
//! initial graph's own holding interval is not recorded.
//!
//! Scores that are undefined on an empty dataset (AIC) are recorded as NaN.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::Dag;

/// What a single record did to the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// Edge added.
    Birth,
    /// Edge removed.
    Death,
    /// Edge reversed (Metropolis-Hastings only, behind a flag).
    Reversal,
    /// Proposal rejected; the graph did not change (Metropolis-Hastings).
    Rejected,
}

impl MoveKind {
    pub fn letter(self) -> char {
        match self {
            MoveKind::Birth => 'B',
            MoveKind::Death => 'D',
            MoveKind::Reversal => 'V',
            MoveKind::Rejected => 'R',
        }
    }
}

/// One jump: the move taken and the resulting state's weight and scores.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpRecord {
    pub kind: MoveKind,
    /// Edge the move touched (the proposed edge for rejections).
    pub from: usize,
    pub to: usize,
    /// Weight of the stay in the resulting state; strictly positive.
    pub holding_weight: f64,
    /// Running sum of holding weights.
    pub cum_time: f64,
    /// Unnormalized log posterior of the resulting state.
    pub log_score: f64,
    /// AIC of the resulting state (NaN when the dataset has no rows).
    pub aic: f64,
}

/// A sampler run: initial graph, jump records, and the RNG identity that
/// reproduces it.
#[derive(Clone, Debug)]
pub struct ChainTrace {
    pub initial: Dag,
    pub records: Vec<JumpRecord>,
    pub seed: u64,
    pub rng_name: &'static str,
}

impl ChainTrace {
    /// Applies one record's move to `g`; rejections leave it untouched.
    pub fn apply_record(g: &mut Dag, rec: &JumpRecord) -> Result<()> {
        match rec.kind {
            MoveKind::Birth => g.add_edge(rec.from, rec.to),
            MoveKind::Death => g.remove_edge(rec.from, rec.to),
            MoveKind::Reversal => {
                g.remove_edge(rec.from, rec.to)?;
                g.add_edge(rec.to, rec.from)
            }
            MoveKind::Rejected => Ok(()),
        }
    }

    /// Streams `(state, record)` pairs in order, checking along the way that
    /// every move is legal. The callback sees the graph the record's weight
    /// and scores belong to.
    pub fn replay<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&Dag, &JumpRecord),
    {
        let mut g = self.initial.clone();
        for rec in &self.records {
            Self::apply_record(&mut g, rec)?;
            visit(&g, rec);
        }
        Ok(())
    }

    /// The graph after all moves.
    pub fn final_graph(&self) -> Result<Dag> {
        let mut g = self.initial.clone();
        for rec in &self.records {
            Self::apply_record(&mut g, rec)?;
        }
        Ok(g)
    }

    pub fn total_weight(&self) -> f64 {
        self.records.iter().map(|r| r.holding_weight).sum()
    }

    /// Writes the trace as CSV: an optional `#`-prefixed header comment
    /// (callers embed their run configuration there), a comment naming the
    /// RNG and seed, then
    /// `step,move,i,j,holding_weight,cum_time,log_score,aic` rows.
    /// Byte-identical for identical seeds and inputs.
    pub fn write_csv(&self, mut w: impl Write, config_comment: Option<&str>) -> Result<()> {
        if let Some(comment) = config_comment {
            for line in comment.lines() {
                writeln!(w, "# {}", line)?;
            }
        }
        writeln!(w, "# rng: {} seed: {}", self.rng_name, self.seed)?;
        writeln!(w, "step,move,i,j,holding_weight,cum_time,log_score,aic")?;
        for (step, rec) in self.records.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                step + 1,
                rec.kind.letter(),
                rec.from,
                rec.to,
                rec.holding_weight,
                rec.cum_time,
                rec.log_score,
                rec.aic
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self, config_comment: Option<&str>) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, config_comment)?;
        String::from_utf8(buf).map_err(|e| Error::InvalidGraph(e.to_string()))
    }
}
