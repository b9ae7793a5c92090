use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Edge, Graph, VertexSet};
use crate::error::{Error, Result};

/// A simple path stored as its vertex sequence (at least two vertices).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Input("a path needs at least one edge".into()));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(Error::Input("path vertices must be distinct".into()));
        }
        Ok(Path { vertices })
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.vertices.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "{}", s.join("->"))
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.edges()
            .map(|(a, b)| (a + 1, b + 1))
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let edges = Vec::<(usize, usize)>::deserialize(d)?;
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a == 0 || b == 0 {
                return Err(D::Error::custom("vertex ids are 1-based"));
            }
            if i == 0 {
                vertices.push(a - 1);
            } else if vertices.last() != Some(&(a - 1)) {
                return Err(D::Error::custom("path edges must be consecutive"));
            }
            vertices.push(b - 1);
        }
        Path::new(vertices).map_err(D::Error::custom)
    }
}

/// A collection of vertex-disjoint paths plus the zero-length paths contributed
/// by vertices that are both start and end candidates.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSet {
    pub paths: Vec<Path>,
    pub zero_length: VertexSet,
}

impl PathSet {
    pub fn count(&self) -> usize {
        self.paths.len() + self.zero_length.len()
    }

    /// Checks that every path lives in `g` and that no vertex is used twice.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let mut used = vec![false; g.vertex_count()];
        for v in self.zero_length.iter() {
            g.check_vertex(v)?;
            used[v] = true;
        }
        for p in &self.paths {
            for (a, b) in p.edges() {
                if !g.has_edge(a, b) {
                    return Err(Error::Internal(format!("path {p:?} uses a missing edge")));
                }
            }
            for &v in p.vertices() {
                if std::mem::replace(&mut used[v], true) {
                    return Err(Error::Internal(format!(
                        "vertex {} is shared between paths",
                        v + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn starts(&self) -> VertexSet {
        self.paths.iter().map(Path::start).collect()
    }

    pub fn ends(&self) -> VertexSet {
        self.paths.iter().map(Path::end).collect()
    }
}

impl fmt::Debug for PathSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathSet")
            .field("paths", &self.paths)
            .field("zero_length", &self.zero_length)
            .finish()
    }
}

/// Maximum number of vertex-disjoint paths from `from` to `to`.
///
/// Vertices in `from ∩ to` count as zero-length paths and are occupied by
/// them, so the remaining paths run from `from \ to` to `to \ from` without
/// touching the overlap. The witness is the lexicographically smallest
/// maximum family, comparing the sorted lists of vertex sequences.
pub fn max_vertex_disjoint_paths(
    g: &Graph,
    from: &VertexSet,
    to: &VertexSet,
) -> Result<(usize, PathSet)> {
    g.check_set(from)?;
    g.check_set(to)?;
    let overlap = from.intersection(to);
    let sources = from.difference(to);
    let sinks = to.difference(from);
    let mut blocked = vec![false; g.vertex_count()];
    for v in overlap.iter() {
        blocked[v] = true;
    }
    let paths = disjoint_paths(g, &sources, &sinks, &blocked);
    let set = PathSet {
        paths,
        zero_length: overlap,
    };
    Ok((set.count(), set))
}

/// Lexicographically smallest maximum family of vertex-disjoint paths from
/// `sources` to `sinks` avoiding `blocked`.
///
/// Starts are taken greedily in increasing order, and each path is grown one
/// vertex at a time, keeping the smallest extension after which a maximum
/// family can still be completed.
pub(crate) fn disjoint_paths(
    g: &Graph,
    sources: &VertexSet,
    sinks: &VertexSet,
    blocked: &[bool],
) -> Vec<Path> {
    let target = disjoint_path_count(g, sources, sinks, blocked);
    let mut builder = WitnessBuilder {
        g,
        sinks,
        used: blocked.to_vec(),
    };
    let mut paths = Vec::with_capacity(target);
    for (i, s) in sources.iter().enumerate() {
        let needed = target - paths.len();
        if needed == 0 {
            break;
        }
        // an earlier path may already run through this start
        if builder.used[s] {
            continue;
        }
        let later = &sources.as_slice()[i + 1..];
        let mut trail = vec![s];
        if !builder.feasible(&trail, later, needed) {
            continue;
        }
        builder.grow(&mut trail, later, needed);
        for &v in &trail {
            builder.used[v] = true;
        }
        paths.push(Path { vertices: trail });
    }
    debug_assert_eq!(paths.len(), target);
    paths
}

struct WitnessBuilder<'a> {
    g: &'a Graph,
    sinks: &'a VertexSet,
    used: Vec<bool>,
}

impl WitnessBuilder<'_> {
    /// Extends `trail` into the smallest completable path. Stopping at a sink
    /// beats continuing through it, since a proper prefix sorts first.
    fn grow(&self, trail: &mut Vec<usize>, later: &[usize], needed: usize) {
        loop {
            let tip = *trail.last().unwrap();
            let next = self.g.out_neighbours(tip).iter().copied().find_map(|v| {
                if self.used[v] || trail.contains(&v) {
                    return None;
                }
                trail.push(v);
                let stop = self.sinks.contains(v) && self.complete_feasible(trail, later, needed - 1);
                let go = !stop && self.feasible(trail, later, needed);
                trail.pop();
                (stop || go).then_some((v, stop))
            });
            let (v, stop) = next.expect("a feasible prefix always extends");
            trail.push(v);
            if stop {
                return;
            }
        }
    }

    /// Can the open path `trail` be finished while `needed - 1` further paths
    /// start from `later`?
    fn feasible(&self, trail: &[usize], later: &[usize], needed: usize) -> bool {
        let tip = *trail.last().unwrap();
        let mut blocked = self.used.clone();
        for &v in trail {
            blocked[v] = true;
        }
        blocked[tip] = false;
        let mut sinks = self.open_sinks(&blocked);
        sinks.retain(|&t| !trail.contains(&t));
        let mut net = SplitNetwork::build(self.g, &VertexSet::default(), &sinks.into_iter().collect(), &blocked);
        // flow through the tip is never cancelled by later augmentations, so
        // augmenting from it first forces it into the family
        net.add_source(tip);
        if !net.augment() {
            return false;
        }
        let mut flow = 1;
        for &s in later.iter().filter(|&&s| !blocked[s] && !trail.contains(&s)) {
            net.add_source(s);
        }
        while flow < needed && net.augment() {
            flow += 1;
        }
        flow == needed
    }

    /// Can `needed` paths start from `later` once `trail` is a finished path?
    fn complete_feasible(&self, trail: &[usize], later: &[usize], needed: usize) -> bool {
        if needed == 0 {
            return true;
        }
        let mut blocked = self.used.clone();
        for &v in trail {
            blocked[v] = true;
        }
        let sinks: VertexSet = self.open_sinks(&blocked).into_iter().collect();
        let sources: VertexSet = later.iter().copied().filter(|&s| !blocked[s]).collect();
        disjoint_path_count(self.g, &sources, &sinks, &blocked) >= needed
    }

    fn open_sinks(&self, blocked: &[bool]) -> Vec<usize> {
        self.sinks.iter().filter(|&t| !blocked[t]).collect()
    }
}

/// Size of a maximum family of vertex-disjoint paths.
pub(crate) fn disjoint_path_count(
    g: &Graph,
    sources: &VertexSet,
    sinks: &VertexSet,
    blocked: &[bool],
) -> usize {
    let mut net = SplitNetwork::build(g, sources, sinks, blocked);
    let mut flow = 0;
    while net.augment() {
        flow += 1;
    }
    flow
}

struct Arc {
    to: usize,
    rev: usize,
    cap: u8,
}

/// Vertex `v` becomes `2v` (in) and `2v + 1` (out); `2n` is the source and
/// `2n + 1` the sink.
struct SplitNetwork {
    adj: Vec<Vec<Arc>>,
    source: usize,
    sink: usize,
}

impl SplitNetwork {
    fn build(g: &Graph, sources: &VertexSet, sinks: &VertexSet, blocked: &[bool]) -> Self {
        let n = g.vertex_count();
        let mut net = SplitNetwork {
            adj: (0..2 * n + 2).map(|_| Vec::new()).collect(),
            source: 2 * n,
            sink: 2 * n + 1,
        };
        for v in 0..n {
            if !blocked[v] {
                net.add_arc(2 * v, 2 * v + 1);
            }
        }
        for (a, b) in g.edges() {
            if !blocked[a] && !blocked[b] {
                net.add_arc(2 * a + 1, 2 * b);
            }
        }
        for s in sources.iter() {
            net.add_source(s);
        }
        for t in sinks.iter() {
            net.add_arc(2 * t + 1, net.sink);
        }
        net
    }

    fn add_source(&mut self, v: usize) {
        self.add_arc(self.source, 2 * v);
    }

    fn add_arc(&mut self, from: usize, to: usize) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Arc {
            to,
            rev: rev_from,
            cap: 1,
        });
        self.adj[to].push(Arc {
            to: from,
            rev: rev_to,
            cap: 0,
        });
    }

    fn augment(&mut self) -> bool {
        let mut seen = vec![false; self.adj.len()];
        let mut stack: Vec<(usize, usize)> = vec![(self.source, 0)];
        seen[self.source] = true;
        // iterative DFS keeping (node, next arc index); the stack is the path
        while let Some(&(node, idx)) = stack.last() {
            if node == self.sink {
                for w in stack.windows(2) {
                    let (u, i) = (w[0].0, w[0].1 - 1);
                    let (to, rev) = (self.adj[u][i].to, self.adj[u][i].rev);
                    self.adj[u][i].cap -= 1;
                    self.adj[to][rev].cap += 1;
                }
                return true;
            }
            if idx == self.adj[node].len() {
                stack.pop();
                continue;
            }
            stack.last_mut().unwrap().1 += 1;
            let arc = &self.adj[node][idx];
            if arc.cap > 0 && !seen[arc.to] {
                seen[arc.to] = true;
                stack.push((arc.to, 0));
            }
        }
        false
    }
}
