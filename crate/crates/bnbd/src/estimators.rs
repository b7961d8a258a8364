//! Estimators over chain traces: time-weighted edge probabilities, error
//! tables against exact marginals, score series, and best-graph tracking.
//!
//! Traces store moves rather than graphs, so every estimator here streams
//! a replay of the trace.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::trace::ChainTrace;

/// Time-weighted edge-presence frequencies from one or more runs.
#[derive(Clone, Debug)]
pub struct EdgeProbEstimate {
    n: usize,
    probs: Vec<f64>,
    /// Accumulated holding weight behind the estimate.
    pub total_weight: f64,
    /// Number of records that contributed.
    pub n_records: u64,
}

impl EdgeProbEstimate {
    pub fn n_nodes(&self) -> usize {
        self.n
    }

    /// Row-major `n x n` marginal matrix; diagonal is zero.
    pub fn matrix(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.n + j]
    }
}

/// Estimated marginal of each edge: the weighted proportion of records
/// whose state contains it, after dropping the first
/// `burn_in_fraction` of records.
pub fn edge_probabilities(trace: &ChainTrace, burn_in_fraction: f64) -> Result<EdgeProbEstimate> {
    if !(0.0..1.0).contains(&burn_in_fraction) {
        return Err(Error::InvalidArgument(format!(
            "burn-in fraction must be in [0, 1), got {}",
            burn_in_fraction
        )));
    }
    let n = trace.initial.n_nodes();
    let burn = (burn_in_fraction * trace.records.len() as f64).floor() as usize;
    let mut sums = vec![0.0f64; n * n];
    let mut total_weight = 0.0;
    let mut n_records = 0u64;
    let mut k = 0usize;
    trace.replay(|g, rec| {
        if k >= burn {
            for (i, j) in g.edges() {
                sums[i * n + j] += rec.holding_weight;
            }
            total_weight += rec.holding_weight;
            n_records += 1;
        }
        k += 1;
    })?;
    if n_records == 0 || total_weight <= 0.0 {
        return Err(Error::EmptyTrace);
    }
    for s in &mut sums {
        *s /= total_weight;
    }
    Ok(EdgeProbEstimate {
        n,
        probs: sums,
        total_weight,
        n_records,
    })
}

/// Pools per-chain estimates, weighting each chain by its total holding time.
pub fn pool_estimates(estimates: &[EdgeProbEstimate]) -> Result<EdgeProbEstimate> {
    let first = estimates.first().ok_or(Error::EmptyTrace)?;
    let n = first.n;
    let mut probs = vec![0.0f64; n * n];
    let mut total_weight = 0.0;
    let mut n_records = 0u64;
    for est in estimates {
        if est.n != n {
            return Err(Error::ShapeMismatch {
                left: est.n,
                right: n,
            });
        }
        for (acc, &p) in probs.iter_mut().zip(&est.probs) {
            *acc += est.total_weight * p;
        }
        total_weight += est.total_weight;
        n_records += est.n_records;
    }
    for p in &mut probs {
        *p /= total_weight;
    }
    Ok(EdgeProbEstimate {
        n,
        probs,
        total_weight,
        n_records,
    })
}

/// Entrywise `|estimated - exact|`; the diagonal stays zero.
pub fn error_table(est: &EdgeProbEstimate, exact: &[f64]) -> Result<Vec<f64>> {
    abs_errors(est.matrix(), exact)
}

/// Entrywise absolute differences of two equally shaped matrices.
pub fn abs_errors(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect())
}

/// Largest entry of an error matrix.
pub fn max_abs_error(errors: &[f64]) -> f64 {
    errors.iter().fold(0.0f64, |acc, &e| acc.max(e))
}

/// One `(cum_time, log_score, aic)` point per record, for plotting.
pub fn score_series(trace: &ChainTrace) -> Vec<(f64, f64, f64)> {
    trace
        .records
        .iter()
        .map(|r| (r.cum_time, r.log_score, r.aic))
        .collect()
}

/// The highest-scoring visited state and its score; ties go to the
/// earliest visit.
pub fn best_graph(trace: &ChainTrace) -> Result<(Dag, f64)> {
    if trace.records.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut best: Option<(Dag, f64)> = None;
    trace.replay(|g, rec| {
        let better = match &best {
            None => true,
            Some((_, s)) => rec.log_score > *s,
        };
        if better {
            best = Some((g.clone(), rec.log_score));
        }
    })?;
    Ok(best.expect("nonempty trace"))
}

/// Writes a square matrix as CSV with node-name headers. `blank_diagonal`
/// suits error tables, where the diagonal is not a quantity.
pub fn write_matrix_csv(
    mut w: impl Write,
    names: &[String],
    matrix: &[f64],
    blank_diagonal: bool,
    config_comment: Option<&str>,
) -> Result<()> {
    let n = names.len();
    if matrix.len() != n * n {
        return Err(Error::ShapeMismatch {
            left: matrix.len(),
            right: n * n,
        });
    }
    if let Some(comment) = config_comment {
        for line in comment.lines() {
            writeln!(w, "# {}", line)?;
        }
    }
    writeln!(w, "node,{}", names.join(","))?;
    for i in 0..n {
        let mut cells = Vec::with_capacity(n + 1);
        cells.push(names[i].clone());
        for j in 0..n {
            if blank_diagonal && i == j {
                cells.push(String::new());
            } else {
                cells.push(matrix[i * n + j].to_string());
            }
        }
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Reads a matrix written by [`write_matrix_csv`]; `#` comment lines are
/// skipped and blank cells read as zero.
pub fn read_matrix_csv(text: &str) -> Result<(Vec<String>, Vec<f64>)> {
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let header = lines.next().ok_or(Error::EmptyFile)?;
    let names: Vec<String> = header.split(',').skip(1).map(str::to_owned).collect();
    let n = names.len();
    let mut matrix = vec![0.0f64; n * n];
    let mut rows = 0usize;
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != n + 1 {
            return Err(Error::RaggedRow {
                row: i + 1,
                expected: n + 1,
                got: cells.len(),
            });
        }
        for (j, cell) in cells[1..].iter().enumerate() {
            matrix[i * n + j] = if cell.trim().is_empty() {
                0.0
            } else {
                cell.trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad matrix cell {:?}", cell)))?
            };
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::ShapeMismatch { left: rows, right: n });
    }
    Ok((names, matrix))
}
