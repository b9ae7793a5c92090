//! The graph simplification process: alternately strip the outgoing edges of
//! the measured set and replace a measured vertex by its unique reachable
//! in-neighbour, until no replacement applies.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{one_based, Edge, Graph, VertexSet};

/// One recorded operation of the simplification process.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimplifyStep {
    /// All outgoing edges of the current set were deleted.
    RemoveOutgoing {
        #[serde(with = "one_based::edges")]
        removed_edges: Vec<Edge>,
    },
    /// `k` was replaced by `j`; `merged` is set when `j` was already a member,
    /// so the set shrank.
    Replace {
        #[serde(with = "one_based::vertex")]
        k: usize,
        #[serde(with = "one_based::vertex")]
        j: usize,
        merged: bool,
    },
}

/// How the next vertex to replace is chosen when several qualify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    /// Smallest eligible vertex.
    #[default]
    Deterministic,
    /// Uniformly random eligible vertex from a seeded stream.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedResult {
    pub derived_graph: Graph,
    pub derived_set: VertexSet,
    pub trace: Vec<SimplifyStep>,
    /// The set the derivation is taken with respect to.
    pub anchor_set: VertexSet,
    pub original_graph: Graph,
    pub original_set: VertexSet,
}

impl DerivedResult {
    /// Whether the anchor set is contained in the derived set.
    pub fn includes_anchor(&self) -> bool {
        self.anchor_set.is_subset(&self.derived_set)
    }

    /// Re-runs the trace from the original graph and set, checking that every
    /// step was legal and that the stored result is reproduced.
    pub fn verify_replay(&self) -> Result<()> {
        let (g, w) = replay(&self.original_graph, &self.anchor_set, &self.original_set, &self.trace)?;
        if g != self.derived_graph || w != self.derived_set {
            return Err(Error::Internal("trace replay does not reproduce the derived result".into()));
        }
        Ok(())
    }
}

/// Removes every edge leaving a vertex of `w`.
pub fn apply_op1(g: &Graph, w: &VertexSet) -> Result<(Graph, Vec<Edge>)> {
    g.check_set(w)?;
    let mut out = g.clone();
    let mut removed = Vec::new();
    for v in w.iter() {
        let targets: Vec<usize> = g.out_neighbours(v).iter().copied().collect();
        for t in targets {
            out.remove_edge(v, t);
            removed.push((v, t));
        }
    }
    Ok((out, removed))
}

/// Vertices `k ∈ W \ U` with exactly one in-neighbour reachable from `U`,
/// paired with that in-neighbour, in increasing order of `k`.
pub fn eligible_replacements(g: &Graph, u: &VertexSet, w: &VertexSet) -> Result<Vec<(usize, usize)>> {
    g.check_set(w)?;
    let reach = g.reachable_set(u)?;
    Ok(w.difference(u)
        .iter()
        .filter_map(|k| {
            let mut reachable = g.in_neighbours(k).iter().copied().filter(|&j| reach.contains(j));
            match (reachable.next(), reachable.next()) {
                (Some(j), None) => Some((k, j)),
                _ => None,
            }
        })
        .collect())
}

/// Replaces the smallest eligible `k` by its unique reachable in-neighbour.
/// Returns the new set together with `(k, j)`, or `None` if nothing applies.
pub fn apply_op2(g: &Graph, u: &VertexSet, w: &VertexSet) -> Result<Option<(VertexSet, usize, usize)>> {
    Ok(eligible_replacements(g, u, w)?
        .first()
        .map(|&(k, j)| (w.without(k).with(j), k, j)))
}

/// Runs the simplification process on `(g, w)` with respect to `u`.
pub fn simplify(g: &Graph, u: &VertexSet, w: &VertexSet, policy: OrderPolicy) -> Result<DerivedResult> {
    g.check_set(u)?;
    g.check_set(w)?;
    let mut rng = match policy {
        OrderPolicy::Deterministic => None,
        OrderPolicy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut graph = g.clone();
    let mut set = w.clone();
    let mut trace = Vec::new();
    let mut replacements = 0;
    loop {
        let (next, removed) = apply_op1(&graph, &set)?;
        if !removed.is_empty() {
            graph = next;
            trace.push(SimplifyStep::RemoveOutgoing { removed_edges: removed });
        }
        let eligible = eligible_replacements(&graph, u, &set)?;
        let choice = match rng.as_mut() {
            None => eligible.first(),
            Some(rng) => eligible.choose(rng),
        };
        let Some(&(k, j)) = choice else {
            break;
        };
        // a vertex enters the set only once: its outgoing edges are then gone
        replacements += 1;
        if replacements > g.vertex_count() {
            return Err(Error::Internal("simplification exceeded its round bound".into()));
        }
        let merged = set.contains(j);
        set = set.without(k).with(j);
        trace.push(SimplifyStep::Replace { k, j, merged });
    }
    Ok(DerivedResult {
        derived_graph: graph,
        derived_set: set,
        trace,
        anchor_set: u.clone(),
        original_graph: g.clone(),
        original_set: w.clone(),
    })
}

/// Whether `u` is contained in the derived set; `u` must be the anchor the
/// derivation was computed for.
pub fn inclusion_verdict(d: &DerivedResult, u: &VertexSet) -> Result<bool> {
    if &d.anchor_set != u {
        return Err(Error::Input(format!(
            "derivation was taken with respect to {:?}, not {:?}",
            d.anchor_set, u
        )));
    }
    Ok(d.includes_anchor())
}

/// Applies a recorded trace to `(g, w)`, validating each step.
pub fn replay(g: &Graph, u: &VertexSet, w: &VertexSet, trace: &[SimplifyStep]) -> Result<(Graph, VertexSet)> {
    g.check_set(u)?;
    g.check_set(w)?;
    let mut graph = g.clone();
    let mut set = w.clone();
    for step in trace {
        match step {
            SimplifyStep::RemoveOutgoing { removed_edges } => {
                for &(a, b) in removed_edges {
                    if !set.contains(a) || !graph.remove_edge(a, b) {
                        return Err(Error::Input(format!(
                            "edge ({}, {}) cannot be removed at this step",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
            &SimplifyStep::Replace { k, j, merged } => {
                if !eligible_replacements(&graph, u, &set)?.contains(&(k, j)) || merged != set.contains(j) {
                    return Err(Error::Input(format!("replacing {} by {} is not a legal step", k + 1, j + 1)));
                }
                set = set.without(k).with(j);
            }
        }
    }
    Ok((graph, set))
}
