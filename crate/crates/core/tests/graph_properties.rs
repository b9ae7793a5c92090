mod common;

use common::*;
use netident::graph::{constrained_path_set_exists, max_vertex_disjoint_paths, path_families, DEFAULT_BUDGET};
use netident::simplification::{apply_op1, eligible_replacements};
use netident::{Graph, VertexSet};
use proptest::prelude::*;

fn blocked_by(n: usize, set: &VertexSet) -> Vec<bool> {
    (0..n).map(|v| set.contains(v)).collect()
}

/// Brute-force constrained existence: some pair of `k`-subsets of the
/// non-overlapping parts is joined by exactly one disjoint family.
fn constrained_brute(g: &Graph, u: &VertexSet, w: &VertexSet, m: usize) -> bool {
    let overlap = u.intersection(w);
    let k = m.saturating_sub(overlap.len());
    if k == 0 {
        return true;
    }
    let blocked = blocked_by(g.vertex_count(), &overlap);
    let subsets = |s: &VertexSet| -> Vec<Vec<usize>> {
        let items = s.as_slice();
        (0u32..1 << items.len())
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| (0..items.len()).filter(|i| mask & (1 << i) != 0).map(|i| items[i]).collect())
            .collect()
    };
    let starts = subsets(&u.difference(w));
    let ends = subsets(&w.difference(u));
    starts
        .iter()
        .any(|s| ends.iter().any(|t| disjoint_families(g, s, t, &blocked, k).len() == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn max_disjoint_paths_equals_min_vertex_cut((g, u, w) in instance(7)) {
        let (count, witness) = max_vertex_disjoint_paths(&g, &u, &w).unwrap();
        let overlap = u.intersection(&w).len();
        prop_assert_eq!(count, overlap + min_vertex_cut(&g, &u, &w));
        witness.verify(&g).unwrap();
        prop_assert_eq!(witness.count(), count);
        prop_assert!(witness.starts().is_subset(&u));
        prop_assert!(witness.ends().is_subset(&w));
    }

    #[test]
    fn witness_is_lexicographically_smallest((g, u, w) in instance(6)) {
        let (count, witness) = max_vertex_disjoint_paths(&g, &u, &w).unwrap();
        let overlap = u.intersection(&w);
        let k = count - overlap.len();
        let families = disjoint_families(
            &g,
            u.difference(&w).as_slice(),
            w.difference(&u).as_slice(),
            &blocked_by(g.vertex_count(), &overlap),
            k,
        );
        let got: Vec<Vec<usize>> = witness.paths.iter().map(|p| p.vertices().to_vec()).collect();
        prop_assert_eq!(Some(&got), families.first());
    }

    #[test]
    fn constrained_matches_brute_force((g, u, w) in instance(6), m in 0usize..4) {
        let out = constrained_path_set_exists(&g, &u, &w, m, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(out.exists, constrained_brute(&g, &u, &w, m));
        if let Some(witness) = out.witness {
            witness.verify(&g).unwrap();
            prop_assert_eq!(witness.paths.len(), m.saturating_sub(u.intersection(&w).len()));
        }
    }

    #[test]
    fn constrained_set_implies_enough_disjoint_paths((g, u, w) in instance(7), m in 1usize..4) {
        let out = constrained_path_set_exists(&g, &u, &w, m, DEFAULT_BUDGET).unwrap();
        if out.exists {
            let (count, _) = max_vertex_disjoint_paths(&g, &u, &w).unwrap();
            prop_assert!(count >= m);
        }
    }

    #[test]
    fn removing_outgoing_edges_of_a_square_target_preserves_constrained_paths((g, u, w) in instance(7)) {
        prop_assume!(u.len() == w.len());
        let (h, _) = apply_op1(&g, &w).unwrap();
        let m = u.len();
        prop_assert_eq!(
            constrained_path_set_exists(&g, &u, &w, m, DEFAULT_BUDGET).unwrap().exists,
            constrained_path_set_exists(&h, &u, &w, m, DEFAULT_BUDGET).unwrap().exists
        );
    }

    #[test]
    fn single_reachable_in_neighbour_replacement_preserves_constrained_paths((g, u, w) in instance(7)) {
        let m = u.len();
        for (k, j) in eligible_replacements(&g, &u, &w).unwrap() {
            let replaced = w.without(k).with(j);
            prop_assert_eq!(
                constrained_path_set_exists(&g, &u, &w, m, DEFAULT_BUDGET).unwrap().exists,
                constrained_path_set_exists(&g, &u, &replaced, m, DEFAULT_BUDGET).unwrap().exists,
                "replacing {} by {}", k + 1, j + 1
            );
        }
    }

    #[test]
    fn reachability_matches_edge_closure((g, u, _w) in instance(8)) {
        let fast: Vec<usize> = g.reachable_set(&u).unwrap().iter().collect();
        let slow: Vec<usize> = reachable_brute(&g, &u).into_iter().collect();
        prop_assert_eq!(fast, slow);
    }
}

#[test]
fn families_of_the_two_layer_example() {
    let g = two_layer();
    let families = path_families(&g, &set(&[2, 3]), &set(&[4, 5]), 10).unwrap();
    assert_eq!(families.len(), 2);
    let brute = disjoint_families(&g, &[1, 2], &[3, 4], &[false; 5], 2);
    let got: Vec<Vec<Vec<usize>>> = families
        .iter()
        .map(|f| f.paths.iter().map(|p| p.vertices().to_vec()).collect())
        .collect();
    assert_eq!(got, brute);
}

#[test]
fn overlap_counts_as_paths_and_blocks_others() {
    // 1 -> 2 -> 3 with U = {1, 2}, W = {2, 3}: 2 is a zero-length path and
    // blocks the only route from 1 to 3
    let g = Graph::from_one_based(3, &[(1, 2), (2, 3)]).unwrap();
    let (count, witness) = max_vertex_disjoint_paths(&g, &set(&[1, 2]), &set(&[2, 3])).unwrap();
    assert_eq!(count, 1);
    assert_eq!(witness.zero_length, set(&[2]));
    assert!(witness.paths.is_empty());
}

#[test]
fn unique_family_in_the_chain_example() {
    let g = eight_node();
    let out = constrained_path_set_exists(&g, &set(&[2, 3]), &set(&[6, 7, 8]), 2, DEFAULT_BUDGET).unwrap();
    assert!(out.exists);
    assert!(constrained_brute(&g, &set(&[2, 3]), &set(&[6, 7, 8]), 2));
}
