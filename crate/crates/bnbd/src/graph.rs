//! DAG state with O(1) edge queries and an incrementally maintained
//! reachability closure.
//!
//! A [`Dag`] stores its adjacency and its transitive closure as packed bit
//! rows, so the cycle test behind "is this edge a valid addition?" is a
//! single bit probe: `i -> j` can be added exactly when the edge is absent
//! and `j` does not already reach `i`. Additions update the closure with a
//! handful of word-parallel row unions; removals recompute only the rows
//! that could have lost a path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Packed square boolean matrix; each row is a run of `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitMat {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMat {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMat {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    #[inline]
    pub fn clear(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] &= !(1 << (c % 64));
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.words..(r + 1) * self.words]
    }

    pub fn or_into_row(&mut self, r: usize, src: &[u64]) {
        let row = self.row_mut(r);
        for (w, s) in row.iter_mut().zip(src) {
            *w |= s;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits in row `r`, ascending.
    pub fn iter_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// A directed acyclic graph on a fixed set of nodes `0..n`, carrying both
/// the adjacency matrix and its transitive closure.
///
/// `reach(i, j)` is true iff a directed path `i -> ... -> j` with at least
/// one edge exists; in particular `reach(i, i)` is always false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DagRepr", into = "DagRepr")]
pub struct Dag {
    n: usize,
    edges: BitMat,
    reach: BitMat,
    n_edges: usize,
}

/// Wire form: `{"n": N, "edges": [[i, j], ...]}`.
#[derive(Serialize, Deserialize)]
struct DagRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<DagRepr> for Dag {
    type Error = Error;
    fn try_from(repr: DagRepr) -> Result<Dag> {
        Dag::from_edges(repr.n, &repr.edges)
    }
}

impl From<Dag> for DagRepr {
    fn from(g: Dag) -> DagRepr {
        DagRepr {
            n: g.n,
            edges: g.edges(),
        }
    }
}

impl Dag {
    /// An edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        Dag {
            n,
            edges: BitMat::new(n),
            reach: BitMat::new(n),
            n_edges: 0,
        }
    }

    /// Builds a graph by adding `edges` one at a time; fails if any edge is
    /// out of range, a self-edge, a duplicate, or closes a cycle.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Dag::new(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.get(i, j)
    }

    /// True iff a directed path `i -> ... -> j` with at least one edge exists.
    #[inline]
    pub fn reaches(&self, i: usize, j: usize) -> bool {
        self.reach.get(i, j)
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.n {
            Err(Error::NodeOutOfRange { index: i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// True iff the edge `i -> j` is absent and adding it creates no cycle.
    pub fn is_valid_addition(&self, i: usize, j: usize) -> Result<bool> {
        self.check_node(i)?;
        self.check_node(j)?;
        if i == j {
            return Err(Error::SelfEdge(i));
        }
        Ok(!self.edges.get(i, j) && !self.reach.get(j, i))
    }

    #[inline]
    pub(crate) fn valid_unchecked(&self, i: usize, j: usize) -> bool {
        i != j && !self.edges.get(i, j) && !self.reach.get(j, i)
    }

    /// Inserts `i -> j` and extends the closure: every node that reaches `i`
    /// (and `i` itself) now also reaches `j` and everything `j` reaches.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if !self.is_valid_addition(i, j)? {
            return Err(Error::InvalidAddition { from: i, to: j });
        }
        let mut gained = self.reach.row(j).to_vec();
        gained[j / 64] |= 1 << (j % 64);
        for a in 0..self.n {
            if a == i || self.reach.get(a, i) {
                self.reach.or_into_row(a, &gained);
            }
        }
        self.edges.set(i, j);
        self.n_edges += 1;
        Ok(())
    }

    /// Deletes `i -> j` and repairs the closure. Only rows that reach `i`
    /// can lose pairs; those are rebuilt children-first from the adjacency,
    /// so paths surviving via other routes are kept.
    pub fn remove_edge(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_node(i)?;
        self.check_node(j)?;
        if !self.edges.get(i, j) {
            return Err(Error::EdgeAbsent { from: i, to: j });
        }
        self.edges.clear(i, j);
        self.n_edges -= 1;

        let mut affected = vec![false; self.n];
        affected[i] = true;
        for a in 0..self.n {
            if self.reach.get(a, i) {
                affected[a] = true;
            }
        }
        for a in self.postorder_within(&affected) {
            let mut fresh = vec![0u64; self.reach.words];
            for c in self.children(a) {
                fresh[c / 64] |= 1 << (c % 64);
                for (w, s) in fresh.iter_mut().zip(self.reach.row(c)) {
                    *w |= s;
                }
            }
            self.reach.row_mut(a).copy_from_slice(&fresh);
        }
        Ok(())
    }

    /// Post-order over the nodes flagged in `member`, following out-edges
    /// restricted to flagged nodes. Children appear before parents, so a
    /// rebuilt row only reads rows that are already final.
    fn postorder_within(&self, member: &[bool]) -> Vec<usize> {
        let mut order = Vec::new();
        let mut done = vec![false; self.n];
        let mut stack: Vec<(usize, bool)> = Vec::new();
        for start in 0..self.n {
            if !member[start] || done[start] {
                continue;
            }
            stack.push((start, false));
            while let Some((v, expanded)) = stack.pop() {
                if expanded {
                    order.push(v);
                    continue;
                }
                if done[v] {
                    continue;
                }
                done[v] = true;
                stack.push((v, true));
                for c in self.children(v) {
                    if member[c] && !done[c] {
                        stack.push((c, false));
                    }
                }
            }
        }
        order
    }

    /// All pairs `(i, j)` that pass [`Dag::is_valid_addition`], in row-major order.
    pub fn valid_additions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.valid_unchecked(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Validity of every ordered pair as a bit matrix (acyclicity only).
    pub(crate) fn valid_additions_mask(&self) -> BitMat {
        let mut mask = BitMat::new(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.valid_unchecked(i, j) {
                    mask.set(i, j);
                }
            }
        }
        mask
    }

    pub fn children(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter_row(i)
    }

    pub fn parents(&self, j: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| self.edges.get(i, j)).collect()
    }

    pub fn parent_count(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| self.edges.get(i, j)).count()
    }

    /// All edges `(i, j)` in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n_edges);
        for i in 0..self.n {
            for j in self.edges.iter_row(i) {
                out.push((i, j));
            }
        }
        out
    }

    /// Number of ordered pairs `(i, j)` with `reaches(i, j)`.
    pub fn n_reachable_pairs(&self) -> usize {
        self.reach.count_ones()
    }

    /// A topological order (Kahn's algorithm); parents precede children.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut in_deg: Vec<usize> = (0..self.n).map(|j| self.parent_count(j)).collect();
        let mut queue: Vec<usize> = (0..self.n).filter(|&v| in_deg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = queue.pop() {
            order.push(v);
            for c in self.children(v) {
                in_deg[c] -= 1;
                if in_deg[c] == 0 {
                    queue.push(c);
                }
            }
        }
        debug_assert_eq!(order.len(), self.n);
        order
    }

    /// One `"i j"` pair per line, row-major order.
    pub fn to_edge_list_string(&self) -> String {
        let mut s = String::new();
        for (i, j) in self.edges() {
            s.push_str(&format!("{} {}\n", i, j));
        }
        s
    }

    /// Parses the edge-list text form; blank lines and `#` comments are skipped.
    pub fn parse_edge_list(n: usize, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (a, b) = (it.next(), it.next());
            match (a, b, it.next()) {
                (Some(a), Some(b), None) => {
                    let i: usize = a.parse().map_err(|_| {
                        Error::InvalidGraph(format!("line {}: bad node index {:?}", lineno + 1, a))
                    })?;
                    let j: usize = b.parse().map_err(|_| {
                        Error::InvalidGraph(format!("line {}: bad node index {:?}", lineno + 1, b))
                    })?;
                    edges.push((i, j));
                }
                _ => {
                    return Err(Error::InvalidGraph(format!(
                        "line {}: expected \"i j\"",
                        lineno + 1
                    )))
                }
            }
        }
        Dag::from_edges(n, &edges)
    }
}

/// The 4-node diamond `0->1, 0->2, 1->3, 2->3`.
///
/// The standing small benchmark network: two branches from a common root
/// that rejoin at a collider. Used by the demo experiments and throughout
/// the test suites.
pub fn diamond4() -> Dag {
    Dag::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
}
