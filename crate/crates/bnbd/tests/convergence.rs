//! Cross-module checks: both samplers against the exact-enumeration oracle
//! on small seeded instances.

use std::collections::HashSet;

use bnbd::birth_death::{self, HoldingMode};
use bnbd::data::{random_cpts, random_dag, Dataset};
use bnbd::estimators::{best_graph, edge_probabilities, error_table, max_abs_error};
use bnbd::exact::{dag_key, ExactPosterior};
use bnbd::graph::{diamond4, Dag};
use bnbd::metropolis::{self, MhChain, MhMove};
use bnbd::score::{GraphPrior, ScoreModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded_model(n: usize, cards: usize, rows: usize, seed: u64) -> ScoreModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gen = random_dag(n, n + 1, None, &mut rng);
    let net = random_cpts(&gen, &vec![cards; n], 1.0, &mut rng).unwrap();
    let ds = net.generate(rows, &mut rng).unwrap();
    ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap()
}

#[test]
fn bd_marginals_converge_to_exact_on_three_nodes() {
    let mut model = seeded_model(3, 3, 100, 301);
    let exact = ExactPosterior::compute(3, &mut model).unwrap();
    let trace =
        birth_death::run(&Dag::new(3), &mut model, 200_000, HoldingMode::Expected, 31).unwrap();
    let est = edge_probabilities(&trace, 0.1).unwrap();
    let err = max_abs_error(&error_table(&est, &exact.edge_marginals()).unwrap());
    assert!(err < 0.02, "max abs error {err}");
}

#[test]
fn sampled_holding_times_agree_with_expected_weights() {
    let mut model = seeded_model(3, 3, 100, 301);
    let exact = ExactPosterior::compute(3, &mut model).unwrap();
    let trace =
        birth_death::run(&Dag::new(3), &mut model, 200_000, HoldingMode::Sampled, 33).unwrap();
    let est = edge_probabilities(&trace, 0.1).unwrap();
    let err = max_abs_error(&error_table(&est, &exact.edge_marginals()).unwrap());
    assert!(err < 0.02, "max abs error {err}");
}

#[test]
fn mh_marginals_converge_to_exact_on_three_nodes() {
    let mut model = seeded_model(3, 3, 100, 301);
    let exact = ExactPosterior::compute(3, &mut model).unwrap();
    let mh_model = ScoreModel::new(model.dataset_arc(), 1.0, GraphPrior::Uniform).unwrap();
    let trace = metropolis::run(&Dag::new(3), mh_model, 400_000, false, 35).unwrap();
    let est = edge_probabilities(&trace, 0.1).unwrap();
    let err = max_abs_error(&error_table(&est, &exact.edge_marginals()).unwrap());
    assert!(err < 0.02, "max abs error {err}");
}

/// The assembled MH transition kernel satisfies pairwise balance against
/// the exact posterior on the full 25-DAG space.
#[test]
fn mh_transition_matrix_is_in_detailed_balance() {
    let mut model = seeded_model(3, 3, 80, 303);
    let exact = ExactPosterior::compute(3, &mut model).unwrap();
    let pi = exact.probs();

    let n_states = exact.len();
    let mut p = vec![0.0f64; n_states * n_states];
    for (x, g) in exact.dags.iter().enumerate() {
        let chain = MhChain::new(
            g.clone(),
            ScoreModel::new(model.dataset_arc(), 1.0, GraphPrior::Uniform).unwrap(),
            false,
        )
        .unwrap();
        let moves = chain.neighborhood();
        let q = 1.0 / moves.len() as f64;
        for mv in moves {
            let mut g2 = g.clone();
            match mv {
                MhMove::Add { from, to } => g2.add_edge(from, to).unwrap(),
                MhMove::Delete { from, to } => g2.remove_edge(from, to).unwrap(),
                MhMove::Reverse { .. } => unreachable!("reversal disabled"),
            }
            let y = exact.index_of(&g2).unwrap();
            let size_new = MhChain::new(
                g2,
                ScoreModel::new(model.dataset_arc(), 1.0, GraphPrior::Uniform).unwrap(),
                false,
            )
            .unwrap()
            .neighborhood_size();
            let delta = exact.log_weights[y] - exact.log_weights[x];
            let hastings =
                (delta + (moves_len_f(&chain)).ln() - (size_new as f64).ln()).exp();
            let accept = hastings.min(1.0);
            p[x * n_states + y] += q * accept;
        }
    }
    for x in 0..n_states {
        for y in 0..n_states {
            let lhs = pi[x] * p[x * n_states + y];
            let rhs = pi[y] * p[y * n_states + x];
            assert!(
                (lhs - rhs).abs() < 1e-12,
                "balance violated at ({x},{y}): {lhs} vs {rhs}"
            );
        }
    }
}

fn moves_len_f(chain: &MhChain) -> f64 {
    chain.neighborhood_size() as f64
}

/// Every DAG on 3 nodes is visited by a long birth-death run.
#[test]
fn bd_run_is_ergodic_on_three_nodes() {
    let mut model = seeded_model(3, 2, 30, 305);
    let exact = ExactPosterior::compute(3, &mut model).unwrap();
    let trace =
        birth_death::run(&Dag::new(3), &mut model, 100_000, HoldingMode::Expected, 37).unwrap();
    let mut visited: HashSet<u64> = HashSet::new();
    visited.insert(dag_key(&trace.initial));
    trace
        .replay(|g, _| {
            visited.insert(dag_key(g));
        })
        .unwrap();
    assert_eq!(visited.len(), exact.len(), "all 25 DAGs should be visited");
}

/// Two independent seeds agree better at 10^5 jumps than at 10^4.
#[test]
fn independent_seeds_converge_toward_each_other() {
    let run_est = |seed: u64, jumps: usize| {
        let mut model = seeded_model(4, 3, 100, 307);
        let trace =
            birth_death::run(&Dag::new(4), &mut model, jumps, HoldingMode::Expected, seed)
                .unwrap();
        edge_probabilities(&trace, 0.1).unwrap()
    };
    let gap = |jumps: usize| {
        let a = run_est(41, jumps);
        let b = run_est(43, jumps);
        max_abs_error(&error_table(&a, b.matrix()).unwrap())
    };
    let small = gap(10_000);
    let large = gap(100_000);
    assert!(
        large < small,
        "disagreement should shrink: {small} at 1e4 vs {large} at 1e5"
    );
}

/// Opposing edge orientations are mutually exclusive within one DAG, so
/// their estimated marginals sum to at most one.
#[test]
fn estimated_orientation_marginals_exclude() {
    let mut model = seeded_model(4, 4, 120, 309);
    let trace =
        birth_death::run(&Dag::new(4), &mut model, 50_000, HoldingMode::Expected, 47).unwrap();
    let est = edge_probabilities(&trace, 0.1).unwrap();
    for i in 0..4 {
        for j in (i + 1)..4 {
            assert!(est.prob(i, j) + est.prob(j, i) <= 1.0 + 1e-12);
        }
    }
}

/// A long run's best visited graph is the exact posterior mode.
#[test]
fn best_graph_finds_the_posterior_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(311);
    let net = random_cpts(&diamond4(), &[4, 4, 4, 4], 1.0, &mut rng).unwrap();
    let ds = net.generate(300, &mut rng).unwrap();
    let mut model = ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap();
    let exact = ExactPosterior::compute(4, &mut model).unwrap();
    let (mode_ix, _) = exact.top_k(1)[0];

    let trace =
        birth_death::run(&Dag::new(4), &mut model, 100_000, HoldingMode::Expected, 51).unwrap();
    let (g, score) = best_graph(&trace).unwrap();
    assert_eq!(dag_key(&g), dag_key(&exact.dags[mode_ix]));
    assert!((score - exact.log_weights[mode_ix]).abs() < 1e-9);
}

/// With no data and a uniform prior the posterior is uniform over DAGs;
/// a quick sanity run against that degenerate target.
#[test]
fn uniform_target_smoke() {
    let ds = Dataset::from_columns(vec![2, 2, 2], vec![Vec::new(); 3], None).unwrap();
    let mut model = ScoreModel::new(ds, 1.0, GraphPrior::Uniform).unwrap();
    let exact = ExactPosterior::compute(3, &mut model).unwrap();
    let trace =
        birth_death::run(&Dag::new(3), &mut model, 150_000, HoldingMode::Expected, 53).unwrap();
    let est = edge_probabilities(&trace, 0.1).unwrap();
    let err = max_abs_error(&error_table(&est, &exact.edge_marginals()).unwrap());
    assert!(err < 0.02, "max abs error {err} against the uniform target");
}
