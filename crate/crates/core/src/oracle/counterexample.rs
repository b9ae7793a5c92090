//! Rank-deficient admissible matrices for anchor sets that are not contained
//! in their derived set, built on the derived graph and then carried back to
//! the original graph by undoing the simplification trace.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::network::{constant, nonzero_int, random_entry, NetworkMatrix};
use super::trials::SAMPLE_RANGE;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::ratfunc::RatFunc;
use crate::simplification::{DerivedResult, SimplifyStep};

/// Resampling budget for the random choices of the construction.
pub const CONSTRUCTION_ATTEMPTS: usize = 200;

/// Builds an admissible matrix on the derived graph, with the incoming edges
/// of `u` removed, for which `T_{D(W),U}` has rank below `|U|`.
///
/// With `Ū = U \ D(W)` and `W̄ = D(W) \ U`, every `w ∈ W̄` has no outgoing
/// edges, and the in-neighbours of `w` reachable from `Ū` number zero or at
/// least two. All other edges get `c / z`; then an integer vector `b` is
/// chosen so that `T_{n,Ū} b ≠ 0` for every such in-neighbour `n`, and the
/// entries `G_{w,n}` are solved so that `Σ_n G_{w,n} T_{n,Ū} b = 0`. That
/// makes `T_{W̄,Ū} b = 0`. Random choices are resampled with a growing
/// coefficient range until the result passes an exact audit.
pub fn construct_counterexample(d: &DerivedResult, u: &VertexSet, seed: u64) -> Result<NetworkMatrix> {
    if &d.anchor_set != u {
        return Err(Error::Input("anchor set does not match the derivation".into()));
    }
    if d.includes_anchor() {
        return Err(Error::Precondition(
            "the anchor set is contained in the derived set, so no counterexample exists".into(),
        ));
    }
    let h = d.derived_graph.without_incoming(u);
    let derived = &d.derived_set;
    let u_bar = u.difference(derived);
    let w_bar = derived.difference(u);
    let reach = h.reachable_set(&u_bar)?;

    // reachable in-neighbours of each w ∈ W̄ that has any
    let mut targets: Vec<(usize, Vec<usize>)> = Vec::new();
    for w in w_bar.iter() {
        if !h.out_neighbours(w).is_empty() {
            return Err(Error::Internal(format!("derived vertex {} has outgoing edges", w + 1)));
        }
        let ins: Vec<usize> = h.in_neighbours(w).iter().copied().filter(|&n| reach.contains(n)).collect();
        match ins.len() {
            0 => {}
            1 => {
                return Err(Error::Internal(format!(
                    "derived vertex {} still has a single reachable in-neighbour",
                    w + 1
                )))
            }
            _ => targets.push((w, ins)),
        }
    }
    let solved: Vec<Edge> = targets
        .iter()
        .flat_map(|(w, ins)| ins.iter().map(move |&n| (n, *w)))
        .collect();
    let n_set: VertexSet = solved.iter().map(|&(n, _)| n).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diagnostics = Vec::new();
    for attempt in 0..CONSTRUCTION_ATTEMPTS {
        let range = SAMPLE_RANGE * (1 + attempt as i64 / 20);
        match attempt_construction(&h, u, derived, &u_bar, &targets, &solved, &n_set, range, &mut rng) {
            Ok(m) => return Ok(m),
            Err(Retry(reason)) => {
                if diagnostics.len() < 5 {
                    diagnostics.push(format!("attempt {attempt}: {reason}"));
                }
            }
        }
    }
    Err(Error::ConstructionFailed {
        attempts: CONSTRUCTION_ATTEMPTS,
        diagnostics: diagnostics.join("; "),
    })
}

struct Retry(String);

impl From<Error> for Retry {
    fn from(e: Error) -> Self {
        Retry(e.to_string())
    }
}

#[allow(clippy::too_many_arguments)]
fn attempt_construction(
    h: &Graph,
    u: &VertexSet,
    derived: &VertexSet,
    u_bar: &VertexSet,
    targets: &[(usize, Vec<usize>)],
    solved: &[Edge],
    n_set: &VertexSet,
    range: i64,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<NetworkMatrix, Retry> {
    let mut entries: BTreeMap<Edge, RatFunc> = h
        .edges()
        .filter(|e| !solved.contains(e))
        .map(|e| (e, random_entry(rng, range)))
        .collect();

    let b: Vec<RatFunc> = if targets.is_empty() {
        vec![RatFunc::one(); u_bar.len()]
    } else {
        // the solved entries lie in rows of W̄, which have no outgoing edges,
        // so they do not influence T_{N,Ū}
        let partial = NetworkMatrix::new(h.clone(), entries.clone())?;
        let t = partial.transfer_block(n_set, u_bar)?;
        for (row, n) in n_set.iter().enumerate() {
            if t.row(row).iter().all(RatFunc::is_zero) {
                return Err(Retry(format!("T row of in-neighbour {} vanished", n + 1)));
            }
        }
        let b: Vec<RatFunc> = (0..u_bar.len())
            .map(|_| RatFunc::constant(constant(nonzero_int(rng, range))))
            .collect();
        let tb = t.mul_vec(&b)?;
        if tb.iter().any(RatFunc::is_zero) {
            return Err(Retry("some entry of T_{N,Ū} b vanished".into()));
        }
        for (w, ins) in targets {
            let a = |n: usize| &tb[n_set.index_of(n).unwrap()];
            let (last, rest) = ins.split_last().unwrap();
            let cs: Vec<BigRational> = rest.iter().map(|_| constant(nonzero_int(rng, range))).collect();
            let s = rest
                .iter()
                .zip(&cs)
                .fold(RatFunc::zero(), |acc, (&n, c)| &acc + &a(n).scale(c));
            if s.is_zero() {
                return Err(Retry(format!("weighted sum into {} cancelled", w + 1)));
            }
            let r = -s.checked_div(a(*last))?;
            // a common factor 1/z^k keeps the whole row strictly proper
            let k = r.relative_degree().map_or(1, |d| (d + 1).max(1)) as usize;
            let scale = RatFunc::over_z_power(constant(1), k);
            for (&n, c) in rest.iter().zip(&cs) {
                entries.insert((n, *w), RatFunc::over_z_power(c.clone(), k));
            }
            entries.insert((*last, *w), &r * &scale);
        }
        b
    };

    let m = NetworkMatrix::new(h.clone(), entries)?;
    m.audit()?;
    let t = m.transfer_block(derived, u_bar)?;
    if t.mul_vec(&b)?.iter().any(|v| !v.is_zero()) {
        return Err(Retry("T_{D(W),Ū} b is not zero".into()));
    }
    if m.transfer_rank(derived, u)? >= u.len() {
        return Err(Retry("transfer block is not rank deficient".into()));
    }
    Ok(m)
}

/// Carries a counterexample on the derived graph back to the original graph.
///
/// Stripped incoming edges of the anchor set are restored first, then the
/// trace is undone in reverse: removed outgoing edges come back with fresh
/// entries `c / z`, and replacements only change the tracked set. Both kinds
/// of restoration leave the rank of the tracked transfer block unchanged;
/// the final rank deficiency is checked exactly.
pub fn lift_counterexample(d: &DerivedResult, g_derived: &NetworkMatrix, seed: u64) -> Result<NetworkMatrix> {
    let u = &d.anchor_set;
    if !g_derived.graph().is_subgraph_of(&d.derived_graph) {
        return Err(Error::Precondition("matrix graph is not a subgraph of the derived graph".into()));
    }
    if let Some((a, b)) = d
        .derived_graph
        .edges()
        .find(|&(a, b)| !g_derived.graph().has_edge(a, b) && !u.contains(b))
    {
        return Err(Error::Precondition(format!(
            "edge {}->{} is missing and does not enter the anchor set",
            a + 1,
            b + 1
        )));
    }
    g_derived.audit()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = g_derived.clone();
    let restore = |m: &mut NetworkMatrix, edges: &[Edge], rng: &mut ChaCha8Rng| -> Result<()> {
        for &(a, b) in edges {
            m.set_entry(a, b, random_entry(rng, SAMPLE_RANGE))?;
        }
        Ok(())
    };
    let stripped: Vec<Edge> = d
        .derived_graph
        .edges()
        .filter(|&(a, b)| !g_derived.graph().has_edge(a, b))
        .collect();
    restore(&mut m, &stripped, &mut rng)?;

    let mut w = d.derived_set.clone();
    for step in d.trace.iter().rev() {
        match step {
            SimplifyStep::RemoveOutgoing { removed_edges } => restore(&mut m, removed_edges, &mut rng)?,
            &SimplifyStep::Replace { k, j, merged } => {
                w = if merged { w.with(k) } else { w.without(j).with(k) };
            }
        }
    }

    if m.graph() != &d.original_graph || w != d.original_set {
        return Err(Error::Internal("undoing the trace did not restore the original graph".into()));
    }
    m.audit()
        .map_err(|e| Error::Internal(format!("lifted matrix failed its audit: {e}")))?;
    if m.transfer_rank(&w, u)? >= u.len() {
        return Err(Error::Internal("lifted matrix is not rank deficient".into()));
    }
    Ok(m)
}
