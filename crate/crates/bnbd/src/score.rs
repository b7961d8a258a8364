//! Modular Dirichlet-multinomial scoring.
//!
//! The posterior over structures factorizes per family: with categorical
//! data and independent symmetric Dirichlet(alpha) priors on every
//! conditional distribution, the parameters integrate out in closed form
//! and the unnormalized log posterior of a graph `G` is
//!
//! ```text
//! log P(G | D) = log P(G) + sum_j log P(col_j | parent cols, G)
//! ```
//!
//! where each family term is the Dirichlet-multinomial marginal
//!
//! ```text
//! sum_c [ lnG(r a) - lnG(r a + N_c) + sum_k ( lnG(a + N_ck) - lnG(a) ) ]
//! ```
//!
//! over parent configurations `c`, with `N_ck` the number of rows showing
//! configuration `c` and child state `k`, and `N_c = sum_k N_ck`. Only the
//! child's family changes when an edge into it is added or removed, so a
//! score delta costs two family evaluations, and those are memoized by
//! `(child, parent set)`.

use std::collections::HashMap;
use std::sync::Arc;

use statrs::function::gamma::ln_gamma;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::graph::Dag;

/// Prior over graphs, up to normalization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphPrior {
    /// Every DAG equally likely; log prior 0.
    Uniform,
    /// `log P(G) = -beta * n_edges(G)`, `beta >= 0`.
    EdgePenalty { beta: f64 },
}

impl GraphPrior {
    pub fn log_prior(&self, n_edges: usize) -> f64 {
        match *self {
            GraphPrior::Uniform => 0.0,
            GraphPrior::EdgePenalty { beta } => -beta * n_edges as f64,
        }
    }

    fn edge_delta(&self, op: EdgeOp) -> f64 {
        match (*self, op) {
            (GraphPrior::Uniform, _) => 0.0,
            (GraphPrior::EdgePenalty { beta }, EdgeOp::Add) => -beta,
            (GraphPrior::EdgePenalty { beta }, EdgeOp::Remove) => beta,
        }
    }
}

/// Direction of a single-edge change for [`ScoreModel::score_delta_for_edge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOp {
    Add,
    Remove,
}

/// Everything one counting pass over a family yields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyStats {
    /// Log marginal likelihood of the child column given its parents.
    pub log_marginal: f64,
    /// Maximum log-likelihood of the same contingency table.
    pub max_log_lik: f64,
    /// Free parameters `(r_j - 1) * q_j`.
    pub n_params: f64,
}

type FamilyKey = (usize, Vec<usize>);

/// Scoring engine over one immutable dataset: hyperparameters plus a
/// memoization cache keyed by `(child, sorted parent set)`.
///
/// One chain owns one `ScoreModel`; independent chains each build their own
/// and may share the `Arc<Dataset>`.
pub struct ScoreModel {
    data: Arc<Dataset>,
    alpha: f64,
    prior: GraphPrior,
    max_parents: Option<usize>,
    cache_cap: Option<usize>,
    // Two-generation cache: lookups promote from `cold` to `hot`; when `hot`
    // reaches the cap, it becomes the new `cold` and recently used entries
    // survive the rotation.
    hot: HashMap<FamilyKey, FamilyStats>,
    cold: HashMap<FamilyKey, FamilyStats>,
    ln_gamma_alpha: LnGammaLadder,
    ln_gamma_ralpha: HashMap<usize, LnGammaLadder>,
}

/// Memoized `ln Gamma(base + k)` for integer `k`, grown on demand.
#[derive(Clone, Debug)]
struct LnGammaLadder {
    base: f64,
    values: Vec<f64>,
}

impl LnGammaLadder {
    fn new(base: f64) -> Self {
        LnGammaLadder {
            base,
            values: Vec::new(),
        }
    }

    #[inline]
    fn get(&mut self, k: usize) -> f64 {
        while self.values.len() <= k {
            self.values.push(ln_gamma(self.base + self.values.len() as f64));
        }
        self.values[k]
    }
}

impl ScoreModel {
    pub fn new(data: impl Into<Arc<Dataset>>, alpha: f64, prior: GraphPrior) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidAlpha(alpha));
        }
        if let GraphPrior::EdgePenalty { beta } = prior {
            if !(beta >= 0.0) || !beta.is_finite() {
                return Err(Error::InvalidAlpha(beta));
            }
        }
        Ok(ScoreModel {
            data: data.into(),
            alpha,
            prior,
            max_parents: None,
            cache_cap: None,
            hot: HashMap::new(),
            cold: HashMap::new(),
            ln_gamma_alpha: LnGammaLadder::new(alpha),
            ln_gamma_ralpha: HashMap::new(),
        })
    }

    /// Caps parent-set size; families above the cap are rejected.
    pub fn with_max_parents(mut self, cap: Option<usize>) -> Self {
        self.max_parents = cap;
        self
    }

    /// Caps the cache entry count (approximately; recently used entries are
    /// kept across evictions). Default is unbounded.
    pub fn with_cache_cap(mut self, cap: Option<usize>) -> Self {
        self.cache_cap = cap;
        self
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn dataset_arc(&self) -> Arc<Dataset> {
        Arc::clone(&self.data)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn prior(&self) -> GraphPrior {
        self.prior
    }

    pub fn max_parents(&self) -> Option<usize> {
        self.max_parents
    }

    pub fn cache_len(&self) -> usize {
        self.hot.len() + self.cold.len()
    }

    pub fn clear_cache(&mut self) {
        self.hot.clear();
        self.cold.clear();
    }

    /// Log marginal likelihood of `child` given `parents`; memoized.
    pub fn family_log_score(&mut self, child: usize, parents: &[usize]) -> Result<f64> {
        Ok(self.family_stats(child, parents)?.log_marginal)
    }

    /// Full per-family statistics (marginal, max likelihood, parameter
    /// count); memoized under the canonical sorted parent set.
    pub fn family_stats(&mut self, child: usize, parents: &[usize]) -> Result<FamilyStats> {
        let n = self.data.n_vars();
        if child >= n {
            return Err(Error::NodeOutOfRange { index: child, n });
        }
        for &p in parents {
            if p >= n {
                return Err(Error::NodeOutOfRange { index: p, n });
            }
            if p == child {
                return Err(Error::ChildInParents(child));
            }
        }
        if let Some(cap) = self.max_parents {
            if parents.len() > cap {
                return Err(Error::TooManyParents {
                    got: parents.len(),
                    cap,
                });
            }
        }
        let mut sorted = parents.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate parent in family of node {}",
                child
            )));
        }

        let key = (child, sorted);
        if let Some(&stats) = self.hot.get(&key) {
            return Ok(stats);
        }
        if let Some(stats) = self.cold.remove(&key) {
            self.insert_cached(key, stats);
            return Ok(stats);
        }
        let stats = self.compute_family(child, &key.1);
        self.insert_cached(key, stats);
        Ok(stats)
    }

    fn insert_cached(&mut self, key: FamilyKey, stats: FamilyStats) {
        if let Some(cap) = self.cache_cap {
            if self.hot.len() >= cap.max(1) {
                self.cold = std::mem::take(&mut self.hot);
            }
        }
        self.hot.insert(key, stats);
    }

    /// One pass over the rows builds the family's contingency table; the
    /// closed-form terms are then summed over occupied configurations
    /// (empty ones contribute nothing).
    fn compute_family(&mut self, child: usize, parents: &[usize]) -> FamilyStats {
        let r = self.data.cardinality(child);
        let m = self.data.n_rows();
        let q: u128 = parents
            .iter()
            .map(|&p| self.data.cardinality(p) as u128)
            .product();

        // Dense when the table fits comfortably; otherwise hash occupied
        // configurations (at most one per row).
        const DENSE_LIMIT: u128 = 1 << 22;
        let mut occupied: Vec<(Vec<u32>, u64)>; // (per-state counts, total)
        if q * r as u128 <= DENSE_LIMIT {
            let q = q as usize;
            let mut strides = Vec::with_capacity(parents.len());
            let mut s = 1usize;
            for &p in parents {
                strides.push(s);
                s *= self.data.cardinality(p);
            }
            let mut counts = vec![0u32; q * r];
            let child_col = self.data.column(child);
            for row in 0..m {
                let mut cfg = 0usize;
                for (&p, &st) in parents.iter().zip(&strides) {
                    cfg += self.data.value(row, p) as usize * st;
                }
                counts[cfg * r + child_col[row] as usize] += 1;
            }
            occupied = Vec::new();
            for cfg in 0..q {
                let cell = &counts[cfg * r..(cfg + 1) * r];
                let total: u64 = cell.iter().map(|&c| c as u64).sum();
                if total > 0 {
                    occupied.push((cell.to_vec(), total));
                }
            }
        } else {
            let mut strides = Vec::with_capacity(parents.len());
            let mut s = 1u128;
            for &p in parents {
                strides.push(s);
                s *= self.data.cardinality(p) as u128;
            }
            let mut table: HashMap<u128, Vec<u32>> = HashMap::new();
            let child_col = self.data.column(child);
            for row in 0..m {
                let mut cfg = 0u128;
                for (&p, &st) in parents.iter().zip(&strides) {
                    cfg += self.data.value(row, p) as u128 * st;
                }
                table.entry(cfg).or_insert_with(|| vec![0u32; r])[child_col[row] as usize] += 1;
            }
            occupied = table
                .into_values()
                .map(|cell| {
                    let total: u64 = cell.iter().map(|&c| c as u64).sum();
                    (cell, total)
                })
                .collect();
        }

        let alpha = self.alpha;
        let ladder_r = self
            .ln_gamma_ralpha
            .entry(r)
            .or_insert_with(|| LnGammaLadder::new(r as f64 * alpha));
        let mut log_marginal = 0.0;
        let mut max_log_lik = 0.0;
        for (cell, total) in &occupied {
            log_marginal += ladder_r.get(0) - ladder_r.get(*total as usize);
            for &c in cell {
                if c > 0 {
                    log_marginal += self.ln_gamma_alpha.get(c as usize) - self.ln_gamma_alpha.get(0);
                    max_log_lik += c as f64 * (c as f64 / *total as f64).ln();
                }
            }
        }
        FamilyStats {
            log_marginal,
            max_log_lik,
            n_params: (r as f64 - 1.0) * q as f64,
        }
    }

    /// Unnormalized log prior of `g`.
    pub fn graph_log_prior(&self, g: &Dag) -> f64 {
        self.prior.log_prior(g.n_edges())
    }

    /// Unnormalized log posterior `log P(G) + sum_j` family scores.
    pub fn graph_log_score(&mut self, g: &Dag) -> Result<f64> {
        let mut total = self.graph_log_prior(g);
        for j in 0..g.n_nodes() {
            total += self.family_log_score(j, &g.parents(j))?;
        }
        Ok(total)
    }

    /// `log P(G' | D) - log P(G | D)` for a single-edge change, from the two
    /// affected family scores of the child plus the prior delta.
    pub fn score_delta_for_edge(
        &mut self,
        g: &Dag,
        from: usize,
        to: usize,
        op: EdgeOp,
    ) -> Result<f64> {
        match op {
            EdgeOp::Add => {
                if !g.is_valid_addition(from, to)? {
                    return Err(Error::IllegalMove {
                        kind: "add",
                        from,
                        to,
                    });
                }
            }
            EdgeOp::Remove => {
                if !g.has_edge(from, to) {
                    return Err(Error::IllegalMove {
                        kind: "remove",
                        from,
                        to,
                    });
                }
            }
        }
        let old_parents = g.parents(to);
        let mut new_parents = old_parents.clone();
        match op {
            EdgeOp::Add => new_parents.push(from),
            EdgeOp::Remove => new_parents.retain(|&p| p != from),
        }
        let new = self.family_log_score(to, &new_parents)?;
        let old = self.family_log_score(to, &old_parents)?;
        Ok(new - old + self.prior.edge_delta(op))
    }

    /// Akaike information criterion of `g` on this dataset: `-2 L + 2 p`
    /// with `L` the maximum log-likelihood and `p` the free-parameter count.
    /// Lower is better.
    pub fn aic(&mut self, g: &Dag) -> Result<f64> {
        if self.data.n_rows() == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut max_ll = 0.0;
        let mut n_params = 0.0;
        for j in 0..g.n_nodes() {
            let stats = self.family_stats(j, &g.parents(j))?;
            max_ll += stats.max_log_lik;
            n_params += stats.n_params;
        }
        Ok(-2.0 * max_ll + 2.0 * n_params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::random_cpts;
    use crate::graph::diamond4;
    use crate::oracle;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dataset(cards: Vec<usize>, columns: Vec<Vec<u32>>) -> Dataset {
        Dataset::from_columns(cards, columns, None).unwrap()
    }

    fn empty_dataset(n_vars: usize) -> Dataset {
        dataset(vec![2; n_vars], vec![Vec::new(); n_vars])
    }

    #[test]
    fn empty_data_scores_zero() {
        let mut m = ScoreModel::new(empty_dataset(3), 1.0, GraphPrior::Uniform).unwrap();
        assert_eq!(m.family_log_score(0, &[1, 2]).unwrap(), 0.0);
        assert_eq!(m.graph_log_score(&Dag::new(3)).unwrap(), 0.0);
    }

    #[test]
    fn binary_family_closed_form() {
        // No parents, observations [0, 0, 1, 1]:
        // lnG(2) - lnG(6) + 2 (lnG(3) - lnG(1)) = ln(4/120).
        let ds = dataset(vec![2], vec![vec![0, 0, 1, 1]]);
        let mut m = ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap();
        let got = m.family_log_score(0, &[]).unwrap();
        assert!((got - (4.0f64 / 120.0).ln()).abs() < 1e-12);
        assert!((got + 3.401197).abs() < 1e-6);
    }

    #[test]
    fn binary_family_with_parent_closed_form() {
        // Rows (parent, child) = (0,0), (0,1), (1,0), (1,1): two
        // configurations, each lnG(2) - lnG(4) + 2 lnG(2) = ln(1/6).
        let ds = dataset(vec![2, 2], vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
        let mut m = ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap();
        let got = m.family_log_score(1, &[0]).unwrap();
        assert!((got - 2.0 * (1.0f64 / 6.0).ln()).abs() < 1e-12);
        assert!((got + 3.583519).abs() < 1e-6);
    }

    #[test]
    fn family_argument_validation() {
        let mut m = ScoreModel::new(empty_dataset(3), 1.0, GraphPrior::Uniform).unwrap();
        assert!(matches!(
            m.family_log_score(0, &[0]),
            Err(Error::ChildInParents(0))
        ));
        assert!(matches!(
            m.family_log_score(0, &[5]),
            Err(Error::NodeOutOfRange { .. })
        ));
        let mut capped = ScoreModel::new(empty_dataset(3), 1.0, GraphPrior::Uniform)
            .unwrap()
            .with_max_parents(Some(1));
        assert!(matches!(
            capped.family_log_score(0, &[1, 2]),
            Err(Error::TooManyParents { got: 2, cap: 1 })
        ));
    }

    #[test]
    fn graph_prior_values() {
        let m = ScoreModel::new(empty_dataset(4), 1.0, GraphPrior::Uniform).unwrap();
        assert_eq!(m.graph_log_prior(&diamond4()), 0.0);

        let pen = ScoreModel::new(empty_dataset(4), 1.0, GraphPrior::EdgePenalty { beta: 0.5 })
            .unwrap();
        assert_eq!(pen.graph_log_prior(&Dag::new(4)), 0.0);
        assert_eq!(pen.graph_log_prior(&diamond4()), -2.0);
    }

    #[test]
    fn graph_score_matches_sequential_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let dag = Dag::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let net = random_cpts(&dag, &[3, 2, 4], 1.0, &mut rng).unwrap();
        let ds = net.generate(80, &mut rng).unwrap();
        let g = Dag::from_edges(3, &[(0, 1), (0, 2)]).unwrap();

        let naive = oracle::graph_log_score_naive(&ds, &g, 1.0, 0.0);
        let mut m = ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap();
        assert!((m.graph_log_score(&g).unwrap() - naive).abs() < 1e-10);
    }

    #[test]
    fn single_node_graph_score_is_one_family() {
        let ds = dataset(vec![2], vec![vec![0, 1, 1]]);
        let mut m = ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap();
        let family = m.family_log_score(0, &[]).unwrap();
        assert_eq!(m.graph_log_score(&Dag::new(1)).unwrap(), family);
    }

    #[test]
    fn delta_is_antisymmetric_and_matches_full_recompute() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let gen_dag = crate::data::random_dag(5, 6, None, &mut rng);
        let net = random_cpts(&gen_dag, &[2, 3, 2, 4, 2], 1.0, &mut rng).unwrap();
        let ds = net.generate(60, &mut rng).unwrap();
        let mut m =
            ScoreModel::new(ds, 1.0, GraphPrior::EdgePenalty { beta: 0.3 }).unwrap();

        let mut g = crate::data::random_dag(5, 4, None, &mut rng);
        for (i, j) in g.valid_additions() {
            let before = m.graph_log_score(&g).unwrap();
            let delta_add = m.score_delta_for_edge(&g, i, j, EdgeOp::Add).unwrap();
            g.add_edge(i, j).unwrap();
            let after = m.graph_log_score(&g).unwrap();
            assert!((delta_add - (after - before)).abs() < 1e-10);

            let delta_rm = m.score_delta_for_edge(&g, i, j, EdgeOp::Remove).unwrap();
            assert!((delta_add + delta_rm).abs() < 1e-12, "antisymmetry");
            g.remove_edge(i, j).unwrap();
        }
    }

    #[test]
    fn delta_zero_on_empty_data() {
        let mut m = ScoreModel::new(empty_dataset(3), 1.0, GraphPrior::Uniform).unwrap();
        let g = Dag::new(3);
        assert_eq!(m.score_delta_for_edge(&g, 0, 1, EdgeOp::Add).unwrap(), 0.0);
    }

    #[test]
    fn delta_rejects_illegal_moves() {
        let mut m = ScoreModel::new(empty_dataset(3), 1.0, GraphPrior::Uniform).unwrap();
        let g = Dag::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            m.score_delta_for_edge(&g, 0, 1, EdgeOp::Add),
            Err(Error::IllegalMove { .. })
        ));
        assert!(matches!(
            m.score_delta_for_edge(&g, 1, 2, EdgeOp::Remove),
            Err(Error::IllegalMove { .. })
        ));
    }

    #[test]
    fn aic_closed_form_and_oracle() {
        // Single binary variable, observations [0, 1]:
        // L = 2 ln(1/2), p = 1, AIC = 4 ln 2 + 2.
        let ds = dataset(vec![2], vec![vec![0, 1]]);
        let mut m = ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap();
        let got = m.aic(&Dag::new(1)).unwrap();
        assert!((got - (4.0 * 2.0f64.ln() + 2.0)).abs() < 1e-12);
        assert!((got - 4.772589).abs() < 1e-6);

        // Deterministic column contributes 0 to L and (r - 1) to p.
        let ds2 = Dataset::from_columns(vec![2, 2], vec![vec![0, 0, 0], vec![0, 1, 0]], None)
            .unwrap();
        let mut m2 = ScoreModel::new(ds2, 1.0, GraphPrior::Uniform).unwrap();
        let stats = m2.family_stats(0, &[]).unwrap();
        assert_eq!(stats.max_log_lik, 0.0);
        assert_eq!(stats.n_params, 1.0);

        // Generated diamond data against the counting oracle.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let net = random_cpts(&diamond4(), &[4, 4, 4, 4], 1.0, &mut rng).unwrap();
        let ds3 = net.generate(200, &mut rng).unwrap();
        let naive = oracle::aic_naive(&ds3, &diamond4());
        let mut m3 = ScoreModel::new(ds3, 1.0, GraphPrior::Uniform).unwrap();
        assert!((m3.aic(&diamond4()).unwrap() - naive).abs() < 1e-9);
    }

    #[test]
    fn aic_requires_rows() {
        let mut m = ScoreModel::new(empty_dataset(2), 1.0, GraphPrior::Uniform).unwrap();
        assert!(matches!(m.aic(&Dag::new(2)), Err(Error::EmptyDataset)));
    }

    #[test]
    fn cache_is_transparent_and_capped() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let net = random_cpts(&diamond4(), &[3, 3, 3, 3], 1.0, &mut rng).unwrap();
        let ds = net.generate(100, &mut rng).unwrap();
        let mut m = ScoreModel::new(ds.clone(), 1.0, GraphPrior::Uniform).unwrap();

        let first = m.family_log_score(3, &[1, 2]).unwrap();
        let cached = m.family_log_score(3, &[2, 1]).unwrap();
        assert_eq!(first, cached, "parent order is canonicalized");
        m.clear_cache();
        assert_eq!(m.family_log_score(3, &[1, 2]).unwrap(), first);

        // A tiny cap still returns correct values while bounding memory.
        let mut small = ScoreModel::new(ds, 1.0, GraphPrior::Uniform)
            .unwrap()
            .with_cache_cap(Some(2));
        let mut values = Vec::new();
        for child in 0..4usize {
            values.push(small.family_log_score(child, &[]).unwrap());
        }
        for child in 0..4usize {
            assert_eq!(small.family_log_score(child, &[]).unwrap(), values[child]);
        }
        assert!(small.cache_len() <= 4);
    }

    #[test]
    fn invalid_hyperparameters_rejected() {
        assert!(ScoreModel::new(empty_dataset(2), 0.0, GraphPrior::Uniform).is_err());
        assert!(ScoreModel::new(empty_dataset(2), -1.0, GraphPrior::Uniform).is_err());
        assert!(
            ScoreModel::new(empty_dataset(2), 1.0, GraphPrior::EdgePenalty { beta: -0.1 })
                .is_err()
        );
    }

    proptest! {
        /// Family scores match the sequential-predictive oracle on random
        /// small datasets, for integer and fractional alpha.
        #[test]
        fn family_matches_sequential_oracle(
            rows in proptest::collection::vec((0u32..3, 0u32..2, 0u32..4), 1..40),
            alpha_ix in 0usize..3,
        ) {
            let alpha = [0.5, 1.0, 2.5][alpha_ix];
            let columns = vec![
                rows.iter().map(|r| r.0).collect::<Vec<u32>>(),
                rows.iter().map(|r| r.1).collect(),
                rows.iter().map(|r| r.2).collect(),
            ];
            let ds = Dataset::from_columns(vec![3, 2, 4], columns, None).unwrap();
            let want = oracle::family_log_score_sequential(&ds, 2, &[0, 1], alpha);
            let mut m = ScoreModel::new(ds, alpha, GraphPrior::Uniform).unwrap();
            let got = m.family_log_score(2, &[0, 1]).unwrap();
            prop_assert!((got - want).abs() < 1e-9, "got {} want {}", got, want);
            prop_assert!(got <= 1e-12, "log probability must be <= 0");
        }

        /// Appending a row never increases a family score.
        #[test]
        fn appending_rows_decreases_family_score(
            rows in proptest::collection::vec((0u32..2, 0u32..3), 2..30),
        ) {
            let take = rows.len() - 1;
            let cols = |k: usize| vec![
                rows[..k].iter().map(|r| r.0).collect::<Vec<u32>>(),
                rows[..k].iter().map(|r| r.1).collect(),
            ];
            let ds_small = Dataset::from_columns(vec![2, 3], cols(take), None).unwrap();
            let ds_big = Dataset::from_columns(vec![2, 3], cols(rows.len()), None).unwrap();
            let mut m_small = ScoreModel::new(ds_small, 1.0, GraphPrior::Uniform).unwrap();
            let mut m_big = ScoreModel::new(ds_big, 1.0, GraphPrior::Uniform).unwrap();
            let small = m_small.family_log_score(1, &[0]).unwrap();
            let big = m_big.family_log_score(1, &[0]).unwrap();
            prop_assert!(big < small, "score must strictly decrease: {} vs {}", big, small);
        }
    }
}
