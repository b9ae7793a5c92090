#![allow(dead_code)]

use std::collections::BTreeSet;

use netident::graph::{Graph, VertexSet};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn set(ids: &[usize]) -> VertexSet {
    VertexSet::one_based(ids).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn two_layer() -> Graph {
    Graph::from_one_based(5, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)]).unwrap()
}

pub fn eight_node() -> Graph {
    Graph::from_one_based(
        8,
        &[(1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6), (4, 7), (4, 8), (5, 7), (5, 8)],
    )
    .unwrap()
}

pub fn six_node() -> Graph {
    Graph::from_one_based(6, &[(1, 2), (2, 3), (2, 4), (2, 5), (3, 4), (4, 5), (4, 6)]).unwrap()
}

/// A graph on `n` vertices (no self-loops) with two vertex subsets.
pub fn instance(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet, VertexSet)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(proptest::bool::weighted(0.3), n * n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(adj, u, w)| {
                let edges = (0..n * n)
                    .filter(|&k| adj[k] && k / n != k % n)
                    .map(|k| (k / n, k % n));
                (
                    Graph::from_edges(n, edges).unwrap(),
                    VertexSet::from_mask(&u),
                    VertexSet::from_mask(&w),
                )
            })
    })
}

/// Every simple path from `from` to `to` avoiding `blocked`, by DFS.
pub fn simple_paths(g: &Graph, from: usize, to: usize, blocked: &[bool]) -> Vec<Vec<usize>> {
    fn go(g: &Graph, to: usize, blocked: &[bool], trail: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let here = *trail.last().unwrap();
        if here == to {
            out.push(trail.clone());
            return;
        }
        for &v in g.out_neighbours(here) {
            if !blocked[v] && !trail.contains(&v) {
                trail.push(v);
                go(g, to, blocked, trail, out);
                trail.pop();
            }
        }
    }
    let mut out = Vec::new();
    if from != to && !blocked[from] && !blocked[to] {
        go(g, to, blocked, &mut vec![from], &mut out);
    }
    out
}

/// Vertices reachable from `sources` by enumerating walks edge by edge.
pub fn reachable_brute(g: &Graph, sources: &VertexSet) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = sources.iter().collect();
    loop {
        let next: Vec<usize> = g
            .edges()
            .filter(|(a, b)| seen.contains(a) && !seen.contains(b))
            .map(|(_, b)| b)
            .collect();
        if next.is_empty() {
            return seen;
        }
        seen.extend(next);
    }
}

/// All families of pairwise vertex-disjoint paths with `k` members, one per
/// chosen start, each start in `starts` and each end in `ends`, as sorted
/// lists of vertex sequences.
pub fn disjoint_families(
    g: &Graph,
    starts: &[usize],
    ends: &[usize],
    blocked: &[bool],
    k: usize,
) -> Vec<Vec<Vec<usize>>> {
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for &s in starts {
        for &t in ends {
            candidates.extend(simple_paths(g, s, t, blocked));
        }
    }
    candidates.sort();
    let mut out = Vec::new();
    fn go(
        cands: &[Vec<usize>],
        idx: usize,
        k: usize,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in idx..cands.len() {
            let p = &cands[i];
            if cur.iter().any(|q| q.iter().any(|v| p.contains(v))) {
                continue;
            }
            cur.push(p.clone());
            go(cands, i + 1, k, cur, out);
            cur.pop();
        }
    }
    go(&candidates, 0, k, &mut Vec::new(), &mut out);
    for f in &mut out {
        f.sort();
    }
    out.sort();
    out.dedup();
    out
}

/// Maximum number of vertex-disjoint paths from `from \ to` to `to \ from`
/// avoiding `from ∩ to`, by the vertex form of Menger's theorem: the smallest
/// vertex set meeting every such path, found by trying all subsets.
pub fn min_vertex_cut(g: &Graph, from: &VertexSet, to: &VertexSet) -> usize {
    let n = g.vertex_count();
    let overlap = from.intersection(to);
    let sources = from.difference(to);
    let sinks = to.difference(from);
    let mut best = usize::MAX;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut blocked = vec![false; n];
        for v in 0..n {
            blocked[v] = mask & (1 << v) != 0 || overlap.contains(v);
        }
        let separated = sources
            .iter()
            .all(|s| sinks.iter().all(|t| simple_paths(g, s, t, &blocked).is_empty()));
        if separated {
            best = size;
        }
    }
    best
}

/// Rank of a rational matrix by textbook Gaussian elimination over Q.
pub fn rank_q(mut rows: Vec<Vec<BigRational>>) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..m {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[rank][col];
                for c in col..n {
                    let v = &rows[rank][c] * &f;
                    rows[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}
