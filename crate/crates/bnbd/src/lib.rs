//! # bnbd
//!
//! Sampling Bayesian-network structures (DAGs) from their posterior
//! `P(G | D)` by a **continuous-time edge birth-and-death process**, with a
//! classical Metropolis-Hastings structure sampler as the baseline and an
//! exact-enumeration oracle to validate both on small networks.
//!
//! The jump process lives on the space of DAGs over a fixed node set. Each
//! existing edge dies at unit rate; each valid (non-cycle-causing) addition
//! `i -> j` is born at rate
//!
//! ```text
//! b(G, i->j) = P(G + i->j | D) / P(G | D)
//! ```
//!
//! which makes `P(G | D)` the invariant distribution by detailed balance.
//! With a modular Dirichlet-multinomial score every birth rate is a ratio
//! of two family scores of the child node, and after each jump only O(N)
//! rates need recomputation, so the process is cheap to simulate even on
//! larger networks. Posterior quantities (edge probabilities, AIC traces)
//! are time averages weighted by the exponential holding times — or their
//! expectations, which is the default, lower-variance choice.
//!
//! ## Example
//!
//! Generate data from a known 4-node network, run both samplers, and
//! compare their edge marginals against the exact posterior:
//!
//! ```
//! use bnbd::birth_death::{self, HoldingMode};
//! use bnbd::data::random_cpts;
//! use bnbd::estimators::{edge_probabilities, error_table, max_abs_error};
//! use bnbd::exact::ExactPosterior;
//! use bnbd::graph::{diamond4, Dag};
//! use bnbd::metropolis;
//! use bnbd::score::{GraphPrior, ScoreModel};
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! # fn main() -> bnbd::Result<()> {
//! let mut rng = ChaCha8Rng::seed_from_u64(7);
//! let network = random_cpts(&diamond4(), &[4, 4, 4, 4], 1.0, &mut rng)?;
//! let dataset = network.generate(100, &mut rng)?;
//!
//! let mut model = ScoreModel::new(dataset, 1.0, GraphPrior::Uniform)?;
//! let exact = ExactPosterior::compute(4, &mut model)?;
//!
//! let trace = birth_death::run(&Dag::new(4), &mut model, 20_000, HoldingMode::Expected, 7)?;
//! let bd_est = edge_probabilities(&trace, 0.1)?;
//! let bd_err = max_abs_error(&error_table(&bd_est, &exact.edge_marginals())?);
//! assert!(bd_err < 0.05, "birth-death marginals off by {bd_err}");
//!
//! let mh_model = ScoreModel::new(model.dataset_arc(), 1.0, GraphPrior::Uniform)?;
//! let mh_trace = metropolis::run(&Dag::new(4), mh_model, 200_000, false, 7)?;
//! let mh_est = edge_probabilities(&mh_trace, 0.1)?;
//! let mh_err = max_abs_error(&error_table(&mh_est, &exact.edge_marginals())?);
//! assert!(mh_err < 0.05, "Metropolis-Hastings marginals off by {mh_err}");
//! # Ok(())
//! # }
//! ```
//!
//! ## Module map
//!
//! - [`graph`] — DAGs with O(1) edge queries and an incremental
//!   reachability closure.
//! - [`score`] — Dirichlet-multinomial family scores, graph priors, AIC,
//!   memoized per `(child, parent set)`.
//! - [`birth_death`] — the jump process: cached birth-rate table,
//!   incremental updates, holding-time weights.
//! - [`metropolis`] — the discrete-time single-edge baseline with the
//!   Hastings neighborhood correction.
//! - [`exact`] — exhaustive enumeration (N <= 5), exact marginals, and the
//!   generator stationarity check.
//! - [`data`] — CSV ingestion and ancestral sampling from known networks.
//! - [`estimators`] — trace replay into edge probabilities, error tables,
//!   score series, and best-graph tracking.
//! - [`oracle`] — deliberately naive reference implementations backing the
//!   test suites.
//!
//! The `bnbd` binary (in the companion CLI crate) wires these into
//! reproducible experiments; the book under `book/` walks through the
//! method and the workflows.

pub mod birth_death;
pub mod data;
pub mod error;
pub mod estimators;
pub mod exact;
pub mod graph;
pub mod metropolis;
pub mod numeric;
pub mod oracle;
pub mod score;
pub mod trace;

pub use error::{Error, Result};
pub use graph::Dag;
