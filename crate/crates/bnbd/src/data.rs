//! Categorical datasets and synthetic data generation.
//!
//! A [`Dataset`] is `M` complete observations of `N` categorical variables,
//! stored column-major as dense state codes. Datasets come from CSV files
//! (labels are mapped to codes at load time) or from ancestral sampling of a
//! [`GenerativeNetwork`], a DAG equipped with one conditional probability
//! table per node.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Dag;

/// Complete categorical observations, column-major.
///
/// Every stored code is `< cardinality` of its variable, all columns have
/// the same length, and every variable has at least two states.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    cards: Vec<usize>,
    columns: Vec<Vec<u32>>,
    n_rows: usize,
    names: Option<Vec<String>>,
    label_maps: Option<Vec<Vec<String>>>,
}

impl Dataset {
    /// Builds a dataset from per-variable code columns.
    pub fn from_columns(
        cards: Vec<usize>,
        columns: Vec<Vec<u32>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if cards.len() != columns.len() {
            return Err(Error::ShapeMismatch {
                left: cards.len(),
                right: columns.len(),
            });
        }
        let n_rows = columns.first().map_or(0, |c| c.len());
        for (v, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::RaggedRow {
                    row: 0,
                    expected: n_rows,
                    got: col.len(),
                });
            }
            if cards[v] < 2 {
                return Err(Error::ConstantColumn {
                    name: name_or_default(&names, v),
                });
            }
            if let Some(&bad) = col.iter().find(|&&x| x as usize >= cards[v]) {
                return Err(Error::InvalidCpt(format!(
                    "code {} out of range for variable {} with {} states",
                    bad, v, cards[v]
                )));
            }
        }
        Ok(Dataset {
            cards,
            columns,
            n_rows,
            names,
            label_maps: None,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.cards.len()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn cardinality(&self, var: usize) -> usize {
        self.cards[var]
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cards
    }

    #[inline]
    pub fn value(&self, row: usize, var: usize) -> u32 {
        self.columns[var][row]
    }

    pub fn column(&self, var: usize) -> &[u32] {
        &self.columns[var]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Variable label, falling back to `X{index}`.
    pub fn name_of(&self, var: usize) -> String {
        name_or_default(&self.names, var)
    }

    /// Label-to-code mapping recorded at CSV load time, per column.
    /// Position in the inner vector is the code.
    pub fn label_maps(&self) -> Option<&[Vec<String>]> {
        self.label_maps.as_deref()
    }

    /// Loads a rectangular CSV of categorical cells.
    ///
    /// Integer-valued columns are coded by ascending numeric value, so a
    /// dataset written by [`Dataset::write_csv`] loads back identically;
    /// other labels are coded in first-appearance order. Cardinalities are
    /// the observed distinct-value counts. Ragged rows, empty files, missing
    /// cells, and single-valued columns are rejected.
    pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file, has_header)
    }

    pub fn read_csv(reader: impl Read, has_header: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let mut names: Option<Vec<String>> = None;
        let mut raw: Vec<Vec<String>> = Vec::new();
        let mut n_vars = 0usize;
        let mut row_no = 0usize;
        for record in rdr.records() {
            let record = record?;
            if row_no == 0 && has_header {
                names = Some(record.iter().map(str::to_owned).collect());
                n_vars = record.len();
                row_no += 1;
                continue;
            }
            if raw.is_empty() {
                if n_vars == 0 {
                    n_vars = record.len();
                }
                raw = vec![Vec::new(); n_vars];
            }
            if record.len() != n_vars {
                return Err(Error::RaggedRow {
                    row: row_no,
                    expected: n_vars,
                    got: record.len(),
                });
            }
            for (v, cell) in record.iter().enumerate() {
                if cell.is_empty() {
                    return Err(Error::MissingValue { row: row_no, col: v });
                }
                raw[v].push(cell.to_owned());
            }
            row_no += 1;
        }
        if raw.is_empty() || raw[0].is_empty() {
            return Err(Error::EmptyFile);
        }

        let mut cards = Vec::with_capacity(n_vars);
        let mut columns = Vec::with_capacity(n_vars);
        let mut label_maps = Vec::with_capacity(n_vars);
        for (v, col) in raw.iter().enumerate() {
            let levels = column_levels(col);
            if levels.len() < 2 {
                return Err(Error::ConstantColumn {
                    name: name_or_default(&names, v),
                });
            }
            let code_of: HashMap<&str, u32> = levels
                .iter()
                .enumerate()
                .map(|(c, s)| (s.as_str(), c as u32))
                .collect();
            columns.push(col.iter().map(|s| code_of[s.as_str()]).collect::<Vec<u32>>());
            cards.push(levels.len());
            label_maps.push(levels);
        }
        Ok(Dataset {
            cards,
            columns,
            n_rows: raw[0].len(),
            names,
            label_maps: Some(label_maps),
        })
    }

    /// Writes the dataset as CSV, using recorded labels when present and
    /// bare state codes otherwise.
    pub fn write_csv(&self, mut w: impl Write, with_header: bool) -> Result<()> {
        if with_header {
            let names: Vec<String> = (0..self.n_vars()).map(|v| self.name_of(v)).collect();
            writeln!(w, "{}", names.join(","))?;
        }
        for row in 0..self.n_rows {
            let cells: Vec<String> = (0..self.n_vars())
                .map(|v| {
                    let code = self.columns[v][row];
                    match &self.label_maps {
                        Some(maps) => maps[v][code as usize].clone(),
                        None => code.to_string(),
                    }
                })
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn name_or_default(names: &Option<Vec<String>>, v: usize) -> String {
    names
        .as_ref()
        .map(|n| n[v].clone())
        .unwrap_or_else(|| format!("X{}", v))
}

/// Distinct values of a column in code order: ascending numeric value when
/// every cell is an unsigned integer, first appearance otherwise.
fn column_levels(col: &[String]) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    let mut known: std::collections::HashSet<&str> = std::collections::HashSet::new();
    for cell in col {
        if known.insert(cell.as_str()) {
            seen.push(cell.clone());
        }
    }
    if seen.iter().all(|s| s.parse::<u64>().is_ok()) {
        seen.sort_by_key(|s| s.parse::<u64>().unwrap());
    }
    seen
}

/// A DAG plus one conditional probability table per node.
///
/// `cpts[v]` has one row per configuration of `v`'s parents (parents sorted
/// ascending; the smallest parent varies fastest) and one column per state
/// of `v`. Serialized as `{"dag": ..., "cardinalities": ..., "cpts": ...}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenerativeNetwork {
    pub dag: Dag,
    pub cardinalities: Vec<usize>,
    pub cpts: Vec<Vec<Vec<f64>>>,
}

impl GenerativeNetwork {
    /// Checks CPT shapes against the DAG and that every row is a
    /// probability vector (nonnegative, sums to 1 within 1e-12).
    pub fn validate(&self) -> Result<()> {
        let n = self.dag.n_nodes();
        if self.cardinalities.len() != n || self.cpts.len() != n {
            return Err(Error::InvalidCpt(format!(
                "expected {} cardinalities and CPTs, got {} and {}",
                n,
                self.cardinalities.len(),
                self.cpts.len()
            )));
        }
        for v in 0..n {
            let q: usize = self
                .dag
                .parents(v)
                .iter()
                .map(|&p| self.cardinalities[p])
                .product();
            if self.cpts[v].len() != q {
                return Err(Error::InvalidCpt(format!(
                    "node {} has {} parent configurations but {} CPT rows",
                    v,
                    q,
                    self.cpts[v].len()
                )));
            }
            for row in &self.cpts[v] {
                if row.len() != self.cardinalities[v] {
                    return Err(Error::InvalidCpt(format!(
                        "node {} CPT row has {} entries, expected {}",
                        v,
                        row.len(),
                        self.cardinalities[v]
                    )));
                }
                if row.iter().any(|&p| !(p >= 0.0)) {
                    return Err(Error::InvalidCpt(format!(
                        "node {} CPT row has a negative entry",
                        v
                    )));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidCpt(format!(
                        "node {} CPT row sums to {}, expected 1",
                        v, sum
                    )));
                }
            }
        }
        Ok(())
    }

    /// Row index into `cpts[v]` for the given full assignment.
    fn config_index(&self, v: usize, assignment: &[u32]) -> usize {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for p in self.dag.parents(v) {
            idx += assignment[p] as usize * stride;
            stride *= self.cardinalities[p];
        }
        idx
    }

    /// Draws `m` rows by ancestral sampling in a topological order of the
    /// DAG. Deterministic for a fixed RNG state.
    pub fn generate(&self, m: usize, rng: &mut impl Rng) -> Result<Dataset> {
        self.validate()?;
        let n = self.dag.n_nodes();
        let order = self.dag.topological_order();
        let mut columns = vec![vec![0u32; m]; n];
        let mut assignment = vec![0u32; n];
        for row in 0..m {
            for &v in &order {
                let cpt_row = &self.cpts[v][self.config_index(v, &assignment)];
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut state = cpt_row.len() - 1;
                for (k, &p) in cpt_row.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        state = k;
                        break;
                    }
                }
                assignment[v] = state as u32;
                columns[v][row] = state as u32;
            }
        }
        Dataset::from_columns(self.cardinalities.clone(), columns, None)
    }
}

/// Builds a network over `dag` whose CPT rows are independent draws from a
/// symmetric Dirichlet with the given concentration (via normalized Gamma
/// variates).
pub fn random_cpts(
    dag: &Dag,
    cardinalities: &[usize],
    concentration: f64,
    rng: &mut impl Rng,
) -> Result<GenerativeNetwork> {
    if !(concentration > 0.0) {
        return Err(Error::InvalidCpt(format!(
            "Dirichlet concentration must be positive, got {}",
            concentration
        )));
    }
    let gamma = Gamma::new(concentration, 1.0)
        .map_err(|e| Error::InvalidCpt(format!("bad concentration: {}", e)))?;
    let n = dag.n_nodes();
    let mut cpts = Vec::with_capacity(n);
    for v in 0..n {
        let q: usize = dag.parents(v).iter().map(|&p| cardinalities[p]).product();
        let r = cardinalities[v];
        let mut rows = Vec::with_capacity(q);
        for _ in 0..q {
            let mut row: Vec<f64> = (0..r).map(|_| gamma.sample(rng)).collect();
            let sum: f64 = row.iter().sum();
            for p in &mut row {
                *p /= sum;
            }
            rows.push(row);
        }
        cpts.push(rows);
    }
    let net = GenerativeNetwork {
        dag: dag.clone(),
        cardinalities: cardinalities.to_vec(),
        cpts,
    };
    net.validate()?;
    Ok(net)
}

/// A random DAG with roughly `target_edges` edges: repeatedly adds a
/// uniformly chosen valid edge, respecting an optional parent cap.
pub fn random_dag(
    n: usize,
    target_edges: usize,
    max_parents: Option<usize>,
    rng: &mut impl Rng,
) -> Dag {
    let mut g = Dag::new(n);
    for _ in 0..target_edges {
        let candidates: Vec<(usize, usize)> = g
            .valid_additions()
            .into_iter()
            .filter(|&(_, j)| max_parents.is_none_or(|cap| g.parent_count(j) < cap))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let &(i, j) = &candidates[rng.gen_range(0..candidates.len())];
        g.add_edge(i, j).unwrap();
    }
    g
}
