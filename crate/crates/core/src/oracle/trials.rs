use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::network::{random_entry, NetworkMatrix};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_TRIALS: usize = 64;

/// Coefficient range for sampled entries `c / z`.
pub const SAMPLE_RANGE: i64 = 1000;

/// Random admissible matrix on `g`: every edge gets `c / z` with `c` a
/// nonzero integer in `[-1000, 1000]`. Strict properness makes the limit of
/// `I - G` the identity, so the matrix is admissible by construction.
pub fn sample_admissible(g: &Graph, seed: u64) -> NetworkMatrix {
    sample_with(g, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub(crate) fn sample_with(g: &Graph, rng: &mut ChaCha8Rng) -> NetworkMatrix {
    let entries = g.edges().map(|e| (e, random_entry(rng, SAMPLE_RANGE))).collect();
    NetworkMatrix::new(g.clone(), entries).expect("edges are in range")
}

/// Random generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleVerdict {
    AllFullRank,
    DeficiencyFound { trial: usize, witness: NetworkMatrix },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub trials: usize,
    pub target_rank: usize,
    pub ranks: Vec<usize>,
    pub verdict: OracleVerdict,
    pub seed: u64,
}

impl OracleReport {
    pub fn all_full_rank(&self) -> bool {
        self.verdict == OracleVerdict::AllFullRank
    }
}

/// Samples `trials` admissible matrices on `g` and computes the normal rank
/// of `T_{W,U}` for each. The target is `|U|`; the first trial (by index)
/// falling short is reported with its matrix.
///
/// Trials run in parallel; each owns a generator derived from `seed` and its
/// index, so the report does not depend on scheduling.
pub fn rank_trials(g: &Graph, u: &VertexSet, w: &VertexSet, trials: usize, seed: u64) -> Result<OracleReport> {
    g.check_set(u)?;
    g.check_set(w)?;
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let target = u.len();
    let outcomes: Vec<(usize, NetworkMatrix)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let m = sample_with(g, &mut trial_rng(seed, i));
            m.transfer_rank(w, u).map(|r| (r, m))
        })
        .collect::<Result<_>>()?;
    let ranks: Vec<usize> = outcomes.iter().map(|(r, _)| *r).collect();
    let verdict = match outcomes.into_iter().enumerate().find(|(_, (r, _))| *r < target) {
        Some((trial, (_, witness))) => OracleVerdict::DeficiencyFound { trial, witness },
        None => OracleVerdict::AllFullRank,
    };
    Ok(OracleReport {
        trials,
        target_rank: target,
        ranks,
        verdict,
        seed,
    })
}
