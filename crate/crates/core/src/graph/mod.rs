//! Simple directed graphs over vertices `0..n`, vertex sets, reachability and
//! vertex-disjoint path machinery.
//!
//! Vertex ids are 0-based in the API and 1-based in every serialized form.

mod constrained;
mod paths;

pub use constrained::{constrained_path_set_exists, path_families, ConstrainedOutcome, DEFAULT_BUDGET};
pub use paths::{max_vertex_disjoint_paths, Path, PathSet};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A directed edge `(from, to)` with 0-based endpoints.
pub type Edge = (usize, usize);

/// Simple directed graph: no self-loops, at most one edge per ordered pair.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    out: Vec<BTreeSet<usize>>,
    inc: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            out: vec![BTreeSet::new(); n],
            inc: vec![BTreeSet::new(); n],
        }
    }

    /// Builds a graph from 0-based edges. Duplicate edges and self-loops are rejected.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (from, to) in edges {
            if !g.add_edge(from, to)? {
                return Err(Error::Input(format!(
                    "duplicate edge ({}, {})",
                    from + 1,
                    to + 1
                )));
            }
        }
        Ok(g)
    }

    /// Builds a graph from 1-based edges, the convention of every external format.
    pub fn from_one_based(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut zero = Vec::with_capacity(edges.len());
        for &(from, to) in edges {
            if from == 0 || to == 0 {
                return Err(Error::Input("vertex ids are 1-based".into()));
            }
            zero.push((from - 1, to - 1));
        }
        Graph::from_edges(n, zero)
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "vertex {} out of range 1..={}",
                v + 1,
                self.vertex_count()
            )))
        }
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<()> {
        set.iter().try_for_each(|v| self.check_vertex(v))
    }

    /// Inserts an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, from: usize, to: usize) -> Result<bool> {
        self.check_vertex(from)?;
        self.check_vertex(to)?;
        if from == to {
            return Err(Error::Input(format!("self-loop at vertex {}", from + 1)));
        }
        let fresh = self.out[from].insert(to);
        self.inc[to].insert(from);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, from: usize, to: usize) -> bool {
        if from >= self.vertex_count() || to >= self.vertex_count() {
            return false;
        }
        self.inc[to].remove(&from);
        self.out[from].remove(&to)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out.get(from).is_some_and(|s| s.contains(&to))
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(from, tos)| tos.iter().map(move |&to| (from, to)))
    }

    pub fn out_neighbours(&self, v: usize) -> &BTreeSet<usize> {
        &self.out[v]
    }

    pub fn in_neighbours(&self, v: usize) -> &BTreeSet<usize> {
        &self.inc[v]
    }

    /// The out-neighbour set of `v` as a [`VertexSet`].
    pub fn out_set(&self, v: usize) -> VertexSet {
        VertexSet::from_sorted_unchecked(self.out[v].iter().copied().collect())
    }

    /// Every vertex reachable from `sources`, including the sources themselves.
    pub fn reachable_set(&self, sources: &VertexSet) -> Result<VertexSet> {
        self.check_set(sources)?;
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        for v in sources.iter() {
            seen[v] = true;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.out[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(VertexSet::from_mask(&seen))
    }

    /// Whether a path `from -> ... -> to` exists (length zero counts).
    pub fn has_path(&self, from: usize, to: usize) -> bool {
        self.reachable_set(&VertexSet::single(from))
            .map(|r| r.contains(to))
            .unwrap_or(false)
    }

    /// Copy of the graph with all incoming edges of `set` removed.
    pub fn without_incoming(&self, set: &VertexSet) -> Graph {
        let mut g = self.clone();
        for v in set.iter() {
            for from in self.inc[v].iter() {
                g.remove_edge(*from, v);
            }
        }
        g
    }

    /// Whether every edge of `self` is also an edge of `other` (same vertex count).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.edges().all(|(a, b)| other.has_edge(a, b))
    }

    /// Edges as 1-based pairs.
    pub fn one_based_edges(&self) -> Vec<(usize, usize)> {
        self.edges().map(|(a, b)| (a + 1, b + 1)).collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.vertex_count(), self.one_based_edges())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.vertex_count(),
            edges: self.one_based_edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        Graph::from_one_based(repr.n, &repr.edges).map_err(serde::de::Error::custom)
    }
}

/// A sorted, duplicate-free set of 0-based vertex ids.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    /// Converts 1-based ids; `0` is rejected.
    pub fn one_based(ids: &[usize]) -> Result<Self> {
        if ids.contains(&0) {
            return Err(Error::Input("vertex ids are 1-based".into()));
        }
        Ok(VertexSet::new(ids.iter().map(|v| v - 1)))
    }

    pub fn single(v: usize) -> Self {
        VertexSet { members: vec![v] }
    }

    fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        VertexSet { members }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet {
            members: mask
                .iter()
                .enumerate()
                .filter_map(|(i, &m)| m.then_some(i))
                .collect(),
        }
    }

    pub fn all(n: usize) -> Self {
        VertexSet {
            members: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    /// Position of `v` in sorted order.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_sorted_unchecked(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_sorted_unchecked(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn with(&self, v: usize) -> VertexSet {
        VertexSet::new(self.iter().chain(std::iter::once(v)))
    }

    pub fn without(&self, v: usize) -> VertexSet {
        VertexSet::from_sorted_unchecked(self.iter().filter(|&x| x != v).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.to_one_based()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(d)?;
        VertexSet::one_based(&ids).map_err(serde::de::Error::custom)
    }
}

/// Serde adapters that write 0-based vertex ids as 1-based.
pub mod one_based {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Edge;

    fn shift_down<E: serde::de::Error>(v: usize) -> Result<usize, E> {
        v.checked_sub(1)
            .ok_or_else(|| E::custom("vertex ids are 1-based"))
    }

    pub mod vertex {
        use super::*;

        pub fn serialize<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
            (v + 1).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
            shift_down(usize::deserialize(d)?)
        }
    }

    pub mod edge {
        use super::*;

        pub fn serialize<S: Serializer>(e: &Edge, s: S) -> Result<S::Ok, S::Error> {
            (e.0 + 1, e.1 + 1).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Edge, D::Error> {
            let (a, b) = <(usize, usize)>::deserialize(d)?;
            Ok((shift_down(a)?, shift_down(b)?))
        }
    }

    pub mod edges {
        use super::*;

        pub fn serialize<S: Serializer>(es: &[Edge], s: S) -> Result<S::Ok, S::Error> {
            es.iter()
                .map(|e| (e.0 + 1, e.1 + 1))
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Edge>, D::Error> {
            Vec::<(usize, usize)>::deserialize(d)?
                .into_iter()
                .map(|(a, b)| Ok((shift_down(a)?, shift_down(b)?)))
                .collect()
        }
    }
}
