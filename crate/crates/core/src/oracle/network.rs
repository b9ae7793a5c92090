use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::ratfunc::{QMatrix, RatFunc, RatFuncRepr, RatMatrix};

/// Largest vertex count for which the principal-minor check is attempted
/// when some entry is not strictly proper.
pub const MINOR_AUDIT_MAX: usize = 12;

/// Evaluation points tried by [`NetworkMatrix::transfer_rank`] before exact
/// elimination.
const TRANSFER_PROBES: usize = 3;

/// A network matrix on a graph: the entry for edge `(j, i)` is the transfer
/// function `G_ij` from node `j` to node `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkMatrix {
    graph: Graph,
    entries: BTreeMap<Edge, RatFunc>,
}

impl NetworkMatrix {
    /// Builds a matrix without checking admissibility; see [`NetworkMatrix::audit`].
    pub fn new(graph: Graph, entries: BTreeMap<Edge, RatFunc>) -> Result<Self> {
        for &(from, to) in entries.keys() {
            graph.check_vertex(from)?;
            graph.check_vertex(to)?;
        }
        Ok(NetworkMatrix { graph, entries })
    }

    /// The zero matrix on an edgeless graph with `n` vertices.
    pub fn empty(n: usize) -> Self {
        NetworkMatrix {
            graph: Graph::empty(n),
            entries: BTreeMap::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn entries(&self) -> &BTreeMap<Edge, RatFunc> {
        &self.entries
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Transfer function on edge `(from, to)`.
    pub fn entry(&self, from: usize, to: usize) -> Option<&RatFunc> {
        self.entries.get(&(from, to))
    }

    /// Adds the edge if needed and stores `f` on it.
    pub fn set_entry(&mut self, from: usize, to: usize, f: RatFunc) -> Result<()> {
        self.graph.add_edge(from, to)?;
        self.entries.insert((from, to), f);
        Ok(())
    }

    /// `G(z)` as a dense matrix with `G[to][from]` holding edge `(from, to)`.
    pub fn matrix(&self) -> RatMatrix {
        let n = self.vertex_count();
        let mut m = RatMatrix::zeros(n, n);
        for (&(from, to), f) in &self.entries {
            m.set(to, from, f.clone());
        }
        m
    }

    /// `I - G(z)`.
    pub fn identity_minus(&self) -> RatMatrix {
        let n = self.vertex_count();
        let mut m = RatMatrix::identity(n);
        for (&(from, to), f) in &self.entries {
            m.set(to, from, m.get(to, from) - f);
        }
        m
    }

    /// Checks that every entry is proper, that the support is exactly the
    /// edge set with nonzero entries, and that every principal minor of
    /// `lim_{z->inf} (I - G(z))` is nonzero.
    pub fn audit(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::NotAdmissible(msg));
        for (&(from, to), f) in &self.entries {
            if !self.graph.has_edge(from, to) {
                return fail(format!("entry on {}->{} has no edge", from + 1, to + 1));
            }
            if f.is_zero() {
                return fail(format!("entry on edge {}->{} is zero", from + 1, to + 1));
            }
            if !f.is_proper() {
                return fail(format!("entry on edge {}->{} is not proper", from + 1, to + 1));
            }
        }
        if let Some((from, to)) = self.graph.edges().find(|e| !self.entries.contains_key(e)) {
            return fail(format!("edge {}->{} has no entry", from + 1, to + 1));
        }
        if self.entries.values().all(RatFunc::is_strictly_proper) {
            // the limit is the identity
            return Ok(());
        }
        let n = self.vertex_count();
        if n > MINOR_AUDIT_MAX {
            return Err(Error::Precondition(format!(
                "principal-minor audit supports at most {MINOR_AUDIT_MAX} vertices"
            )));
        }
        let mut limit = QMatrix::identity(n);
        for (&(from, to), f) in &self.entries {
            let v = limit.get(to, from) - f.limit_at_infinity().expect("checked proper");
            limit.set(to, from, v);
        }
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if limit.submatrix(&idx, &idx).rank() < idx.len() {
                let ids: Vec<usize> = idx.iter().map(|i| i + 1).collect();
                return fail(format!("principal minor of the limit on {ids:?} vanishes"));
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.audit().is_ok()
    }

    /// `T(z) = (I - G(z))^{-1}`.
    pub fn transfer_matrix(&self) -> Result<RatMatrix> {
        self.identity_minus().inverse()
    }

    /// Rows `rows`, columns `cols` of the transfer matrix, in sorted order.
    pub fn transfer_block(&self, rows: &VertexSet, cols: &VertexSet) -> Result<RatMatrix> {
        self.graph.check_set(rows)?;
        self.graph.check_set(cols)?;
        Ok(self.transfer_matrix()?.submatrix(rows.as_slice(), cols.as_slice()))
    }

    /// Normal rank of `T_{rows, cols}`.
    ///
    /// The transfer matrix is first evaluated at a few seeded rational points
    /// by inverting `I - G(λ)` over the rationals; a full-rank value is
    /// conclusive. Otherwise the block is computed and ranked exactly.
    pub fn transfer_rank(&self, rows: &VertexSet, cols: &VertexSet) -> Result<usize> {
        self.graph.check_set(rows)?;
        self.graph.check_set(cols)?;
        let full = rows.len().min(cols.len());
        if full == 0 {
            return Ok(0);
        }
        let n = self.vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(0x7472616e);
        for _ in 0..TRANSFER_PROBES {
            let at = BigRational::new(
                BigInt::from(rng.random_range(1..=1_000_000i64)),
                BigInt::from(rng.random_range(1..=1_000_000i64)),
            );
            let mut a = QMatrix::identity(n);
            let mut pole = false;
            for (&(from, to), f) in &self.entries {
                match f.eval(&at) {
                    Some(v) => a.set(to, from, a.get(to, from) - v),
                    None => pole = true,
                }
            }
            if pole {
                continue;
            }
            if let Ok(t) = a.inverse() {
                if t.submatrix(rows.as_slice(), cols.as_slice()).rank() == full {
                    return Ok(full);
                }
            }
        }
        self.transfer_block(rows, cols)?.rank_exact()
    }
}

/// `c / z` with `c` a nonzero integer drawn uniformly from `[-range, range]`.
pub(crate) fn random_entry(rng: &mut impl Rng, range: i64) -> RatFunc {
    RatFunc::over_z_power(BigRational::from_integer(nonzero_int(rng, range).into()), 1)
}

pub(crate) fn nonzero_int(rng: &mut impl Rng, range: i64) -> i64 {
    loop {
        let c = rng.random_range(-range..=range);
        if c != 0 {
            return c;
        }
    }
}

pub(crate) fn constant(c: i64) -> BigRational {
    BigRational::from_integer(c.into())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    from: usize,
    to: usize,
    #[serde(flatten)]
    value: RatFuncRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkRepr {
    graph: Graph,
    entries: Vec<EntryRepr>,
}

impl Serialize for NetworkMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NetworkRepr {
            graph: self.graph.clone(),
            entries: self
                .entries
                .iter()
                .map(|(&(from, to), f)| EntryRepr {
                    from: from + 1,
                    to: to + 1,
                    value: RatFuncRepr::from_func(f),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NetworkMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = NetworkRepr::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in repr.entries {
            if e.from == 0 || e.to == 0 {
                return Err(D::Error::custom("vertex ids are 1-based"));
            }
            let f = e.value.into_func().map_err(D::Error::custom)?;
            if entries.insert((e.from - 1, e.to - 1), f).is_some() {
                return Err(D::Error::custom(format!("duplicate entry for edge {}->{}", e.from, e.to)));
            }
        }
        NetworkMatrix::new(repr.graph, entries).map_err(D::Error::custom)
    }
}
