//! Constrained sets of vertex-disjoint paths: path families that are the only
//! family of their size between their own start and end vertices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::paths::{disjoint_path_count, Path, PathSet};
use super::{Graph, VertexSet};
use crate::error::{Error, Result};

/// Default cap on the number of endpoint pairs examined.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstrainedOutcome {
    pub exists: bool,
    /// The unique path family for the first qualifying endpoint pair.
    pub witness: Option<PathSet>,
    pub pairs_examined: usize,
}

/// Decides whether a constrained set of `m` vertex-disjoint paths from `from`
/// to `to` exists.
///
/// Vertices of `from ∩ to` are zero-length paths; the remaining
/// `max(0, m - |from ∩ to|)` paths must avoid them. Endpoint pairs are
/// enumerated in lexicographic order and the first pair admitting exactly one
/// path family wins.
pub fn constrained_path_set_exists(
    g: &Graph,
    from: &VertexSet,
    to: &VertexSet,
    m: usize,
    budget: u128,
) -> Result<ConstrainedOutcome> {
    g.check_set(from)?;
    g.check_set(to)?;
    let overlap = from.intersection(to);
    let sources = from.difference(to);
    let sinks = to.difference(from);
    let k = m.saturating_sub(overlap.len());

    if k == 0 {
        return Ok(ConstrainedOutcome {
            exists: true,
            witness: Some(PathSet {
                paths: Vec::new(),
                zero_length: overlap,
            }),
            pairs_examined: 0,
        });
    }
    if k > sources.len() || k > sinks.len() {
        return Ok(ConstrainedOutcome {
            exists: false,
            witness: None,
            pairs_examined: 0,
        });
    }
    let required = binomial(sources.len(), k).saturating_mul(binomial(sinks.len(), k));
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let mut blocked = vec![false; g.vertex_count()];
    for v in overlap.iter() {
        blocked[v] = true;
    }
    let start_choices = combinations(sources.as_slice(), k);
    let end_choices = combinations(sinks.as_slice(), k);
    let mut examined = 0;
    for starts in &start_choices {
        for ends in &end_choices {
            examined += 1;
            let starts = VertexSet::new(starts.iter().copied());
            let ends = VertexSet::new(ends.iter().copied());
            let families = enumerate_families(g, &starts, &ends, &blocked, 2);
            if families.len() == 1 {
                let mut paths = families.into_iter().next().unwrap();
                paths.sort();
                return Ok(ConstrainedOutcome {
                    exists: true,
                    witness: Some(PathSet {
                        paths,
                        zero_length: overlap,
                    }),
                    pairs_examined: examined,
                });
            }
        }
    }
    Ok(ConstrainedOutcome {
        exists: false,
        witness: None,
        pairs_examined: examined,
    })
}

/// Every family of `|starts|` vertex-disjoint paths that starts exactly at
/// `starts` and ends exactly at `ends`, up to `limit` families.
///
/// `starts` and `ends` must be disjoint and of equal size.
pub fn path_families(
    g: &Graph,
    starts: &VertexSet,
    ends: &VertexSet,
    limit: usize,
) -> Result<Vec<PathSet>> {
    g.check_set(starts)?;
    g.check_set(ends)?;
    if starts.len() != ends.len() || !starts.intersection(ends).is_empty() {
        return Err(Error::Precondition(
            "start and end sets must be disjoint and of equal size".into(),
        ));
    }
    let blocked = vec![false; g.vertex_count()];
    Ok(enumerate_families(g, starts, ends, &blocked, limit)
        .into_iter()
        .map(|mut paths| {
            paths.sort();
            PathSet {
                paths,
                zero_length: VertexSet::default(),
            }
        })
        .collect())
}

fn enumerate_families(
    g: &Graph,
    starts: &VertexSet,
    ends: &VertexSet,
    blocked: &[bool],
    limit: usize,
) -> Vec<Vec<Path>> {
    if disjoint_path_count(g, starts, ends, blocked) < starts.len() {
        return Vec::new();
    }
    let mut search = FamilySearch {
        g,
        starts: starts.as_slice(),
        ends,
        limit,
        used: blocked.to_vec(),
        current: Vec::new(),
        found: Vec::new(),
        dead: HashSet::new(),
    };
    // starts and ends are reserved until their own path claims them
    for v in starts.iter().chain(ends.iter()) {
        search.used[v] = true;
    }
    search.extend(0);
    search.found
}

/// Backtracking over one path per start vertex. A state is determined by the
/// index of the next start, the occupied vertices and the claimed ends; states
/// proven to have no completion are memoized.
struct FamilySearch<'a> {
    g: &'a Graph,
    starts: &'a [usize],
    ends: &'a VertexSet,
    limit: usize,
    used: Vec<bool>,
    current: Vec<Path>,
    found: Vec<Vec<Path>>,
    dead: HashSet<(usize, Vec<bool>, Vec<usize>)>,
}

impl FamilySearch<'_> {
    fn extend(&mut self, idx: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if idx == self.starts.len() {
            self.found.push(self.current.clone());
            return;
        }
        let mut claimed: Vec<usize> = self.current.iter().map(Path::end).collect();
        claimed.sort_unstable();
        let key = (idx, self.used.clone(), claimed);
        if self.dead.contains(&key) {
            return;
        }
        let before = self.found.len();
        let start = self.starts[idx];
        let mut trail = vec![start];
        self.walk(idx, &mut trail);
        if self.found.len() == before {
            self.dead.insert(key);
        }
    }

    fn walk(&mut self, idx: usize, trail: &mut Vec<usize>) {
        let here = *trail.last().unwrap();
        let next: Vec<usize> = self.g.out_neighbours(here).iter().copied().collect();
        for v in next {
            if self.found.len() >= self.limit {
                return;
            }
            if trail.contains(&v) {
                continue;
            }
            let is_end = self.ends.contains(v);
            if is_end && self.claimed_end(v) {
                continue;
            }
            if !is_end && self.used[v] {
                continue;
            }
            trail.push(v);
            if is_end {
                self.finish_path(idx, trail);
            } else {
                self.used[v] = true;
                self.walk(idx, trail);
                self.used[v] = false;
            }
            trail.pop();
        }
    }

    fn claimed_end(&self, v: usize) -> bool {
        self.current.iter().any(|p| p.end() == v)
    }

    fn finish_path(&mut self, idx: usize, trail: &[usize]) {
        let path = Path::new(trail.to_vec()).expect("trail is simple");
        self.current.push(path);
        if self.remaining_feasible(idx + 1) {
            self.extend(idx + 1);
        }
        self.current.pop();
    }

    fn remaining_feasible(&self, idx: usize) -> bool {
        let rest = &self.starts[idx..];
        if rest.is_empty() {
            return true;
        }
        let open_ends: VertexSet = self.ends.iter().filter(|&e| !self.claimed_end(e)).collect();
        let sources: VertexSet = rest.iter().copied().collect();
        let mut blocked = self.used.clone();
        for v in sources.iter().chain(open_ends.iter()) {
            blocked[v] = false;
        }
        disjoint_path_count(self.g, &sources, &open_ends, &blocked) == rest.len()
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
