//! Brute-force reference implementations.
//!
//! Everything here recomputes a quantity by the most direct route available,
//! deliberately avoiding the incremental and cached code paths it is used to
//! check: closures by plain DFS, acyclicity by Kahn's algorithm on an edge
//! list, family scores by the sequential predictive product (no Gamma
//! functions at all), and DAG counts by Robinson's recurrence. The test
//! suites and the acceptance harness lean on this module; production code
//! never does.

use std::collections::HashMap;

use crate::data::Dataset;
use crate::graph::Dag;

/// Transitive closure by depth-first traversal from every node.
pub fn closure_by_dfs(g: &Dag) -> Vec<Vec<bool>> {
    let n = g.n_nodes();
    let mut out = vec![vec![false; n]; n];
    for start in 0..n {
        let mut stack: Vec<usize> = g.children(start).collect();
        while let Some(v) = stack.pop() {
            if out[start][v] {
                continue;
            }
            out[start][v] = true;
            stack.extend(g.children(v));
        }
    }
    out
}

/// Does the edge set of `g` plus `i -> j` stay acyclic? Checked by Kahn's
/// algorithm over a fresh adjacency list.
pub fn addition_keeps_acyclic(g: &Dag, i: usize, j: usize) -> bool {
    if g.has_edge(i, j) {
        return false;
    }
    let mut edges = g.edges();
    edges.push((i, j));
    edge_set_is_acyclic(g.n_nodes(), &edges)
}

/// Kahn's algorithm on a raw edge list.
pub fn edge_set_is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    let mut in_deg = vec![0usize; n];
    for &(a, b) in edges {
        adj[a].push(b);
        in_deg[b] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| in_deg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &c in &adj[v] {
            in_deg[c] -= 1;
            if in_deg[c] == 0 {
                queue.push(c);
            }
        }
    }
    seen == n
}

/// Log marginal likelihood of one family by the sequential predictive
/// product: scan the rows in order and multiply the posterior-predictive
/// probability of each child value given the counts so far,
/// `(alpha + n_ck) / (r_j * alpha + n_c)`. Algebraically identical to the
/// Dirichlet-multinomial closed form but shares no code with it.
pub fn family_log_score_sequential(
    data: &Dataset,
    child: usize,
    parents: &[usize],
    alpha: f64,
) -> f64 {
    let r = data.cardinality(child) as f64;
    let mut counts: HashMap<Vec<u32>, (Vec<u64>, u64)> = HashMap::new();
    let mut log_p = 0.0;
    for row in 0..data.n_rows() {
        let cfg: Vec<u32> = parents.iter().map(|&p| data.value(row, p)).collect();
        let entry = counts
            .entry(cfg)
            .or_insert_with(|| (vec![0; data.cardinality(child)], 0));
        let k = data.value(row, child) as usize;
        log_p += ((alpha + entry.0[k] as f64) / (r * alpha + entry.1 as f64)).ln();
        entry.0[k] += 1;
        entry.1 += 1;
    }
    log_p
}

/// Unnormalized log posterior score of a whole graph via
/// [`family_log_score_sequential`], plus the same edge-count prior.
pub fn graph_log_score_naive(data: &Dataset, g: &Dag, alpha: f64, edge_penalty: f64) -> f64 {
    let mut total = -edge_penalty * g.n_edges() as f64;
    for j in 0..g.n_nodes() {
        total += family_log_score_sequential(data, j, &g.parents(j), alpha);
    }
    total
}

/// AIC by direct counting: maximum log-likelihood from the contingency
/// tables plus two free parameters per (config, nonbase-state) cell.
pub fn aic_naive(data: &Dataset, g: &Dag) -> f64 {
    let mut max_ll = 0.0;
    let mut n_params = 0.0;
    for j in 0..g.n_nodes() {
        let parents = g.parents(j);
        let mut counts: HashMap<Vec<u32>, (Vec<u64>, u64)> = HashMap::new();
        for row in 0..data.n_rows() {
            let cfg: Vec<u32> = parents.iter().map(|&p| data.value(row, p)).collect();
            let entry = counts
                .entry(cfg)
                .or_insert_with(|| (vec![0; data.cardinality(j)], 0));
            entry.0[data.value(row, j) as usize] += 1;
            entry.1 += 1;
        }
        for (child_counts, total) in counts.values() {
            for &c in child_counts {
                if c > 0 {
                    max_ll += c as f64 * (c as f64 / *total as f64).ln();
                }
            }
        }
        let q: f64 = parents
            .iter()
            .map(|&p| data.cardinality(p) as f64)
            .product();
        n_params += (data.cardinality(j) as f64 - 1.0) * q;
    }
    -2.0 * max_ll + 2.0 * n_params
}

/// Number of labeled DAGs on `n` nodes by Robinson's recurrence:
/// `a_n = sum_k (-1)^(k+1) C(n,k) 2^(k(n-k)) a_(n-k)`.
pub fn labeled_dag_count(n: usize) -> u64 {
    let mut a = vec![0i128; n + 1];
    a[0] = 1;
    for m in 1..=n {
        let mut total: i128 = 0;
        for k in 1..=m {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let term = binomial(m, k) as i128 * (1i128 << (k * (m - k))) * a[m - k];
            total += sign * term;
        }
        a[m] = total;
    }
    a[n] as u64
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_counts_match_known_sequence() {
        assert_eq!(labeled_dag_count(1), 1);
        assert_eq!(labeled_dag_count(2), 3);
        assert_eq!(labeled_dag_count(3), 25);
        assert_eq!(labeled_dag_count(4), 543);
        assert_eq!(labeled_dag_count(5), 29281);
    }

    #[test]
    fn kahn_detects_cycles() {
        assert!(edge_set_is_acyclic(3, &[(0, 1), (1, 2)]));
        assert!(!edge_set_is_acyclic(3, &[(0, 1), (1, 2), (2, 0)]));
    }
}
