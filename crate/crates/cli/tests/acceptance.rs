//! Acceptance suite. Every check is exact; each criterion prints one line.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use netident::generate::{random_graph, random_subset, random_subset_of_size};
use netident::graph::{constrained_path_set_exists, path_families, DEFAULT_BUDGET};
use netident::identify::{identifiable_node, necessary_cardinality, square_case_equivalence, Certificate, CheckOptions};
use netident::oracle::{construct_counterexample, lift_counterexample, rank_trials, sample_admissible, NetworkMatrix};
use netident::ratfunc::{Poly, RatFunc};
use netident::simplification::{apply_op1, eligible_replacements, inclusion_verdict, simplify, OrderPolicy};
use netident::{Graph, VertexSet};
use netident_cli::document::VerdictDocument;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn set(ids: &[usize]) -> VertexSet {
    VertexSet::one_based(ids).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = netident_cli::run(std::iter::once("netident").chain(args.iter().copied()), &mut out, &mut err);
    assert!(err.is_empty() || code != 0, "unexpected stderr: {}", String::from_utf8_lossy(&err));
    (code, String::from_utf8(out).unwrap())
}

fn over_z(c: i64) -> RatFunc {
    RatFunc::new(Poly::from_ints(&[c]), Poly::z()).unwrap()
}

/// A node-level instance `(G, i, C)`: `U = N_i^+`, `W = C`.
#[derive(Clone, Debug)]
struct NodeCase {
    g: Graph,
    i: usize,
    c: VertexSet,
}

#[derive(Default)]
struct Shared {
    /// Node instances from the oracle comparison and the square cases,
    /// with their verdicts.
    node_verdicts: Vec<(NodeCase, bool)>,
}

fn random_node_case(rng: &mut ChaCha8Rng) -> NodeCase {
    loop {
        let n = rng.random_range(3..=7);
        let density = rng.random_range(0.2..=0.6);
        let g = random_graph(rng, n, density);
        let i = rng.random_range(0..n);
        if g.out_neighbours(i).is_empty() {
            continue;
        }
        let c = random_subset(rng, n, 0.5);
        return NodeCase { g, i, c };
    }
}

fn two_layer_counterexample() -> Result<String, String> {
    let (code, out) = cli(&[
        "check-node",
        "--graph",
        &fixture("two_layer.json"),
        "--node",
        "1",
        "--measured",
        "4,5",
        "--counterexample",
        "--seed",
        "1",
    ]);
    let doc: VerdictDocument = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(code == 3 && !doc.verdict, "check-node did not report NOT identifiable")?;
    let Certificate::Counterexample(m) = doc.certificate else {
        return Err("no counterexample attached".into());
    };
    let (c, u) = (set(&[4, 5]), set(&[2, 3]));
    m.audit().map_err(|e| e.to_string())?;
    let rank = m.transfer_block(&c, &u).unwrap().normal_rank().unwrap();
    ensure(rank == 1, &format!("emitted counterexample has rank {rank}"))?;
    ensure(m.transfer_block(&c, &u).unwrap().rank_exact().unwrap() == 1, "exact rank differs")?;

    let mut manual = m.clone();
    for (from, to) in [(2, 4), (3, 4), (2, 5), (3, 5)] {
        manual.set_entry(from - 1, to - 1, over_z(1)).unwrap();
    }
    manual.audit().map_err(|e| e.to_string())?;
    let manual_rank = manual.transfer_block(&c, &u).unwrap().normal_rank().unwrap();
    ensure(manual_rank == 1, &format!("equal entries give rank {manual_rank}"))?;
    Ok("counterexample rank 1 < 2; G42=G43=G52=G53=1/z gives rank 1".into())
}

fn six_node_derivation() -> Result<String, String> {
    let (code, out) = cli(&["derive", "--graph", &fixture("six_node.json"), "--anchors", "2", "--measured", "5,6"]);
    let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(code == 0, "derive verdict is not true")?;
    ensure(doc["derived_set"] == serde_json::json!([2, 4]), &format!("derived set {}", doc["derived_set"]))?;
    ensure(
        doc["derived_graph"]["edges"] == serde_json::json!([[1, 2], [3, 4]]),
        &format!("derived edges {}", doc["derived_graph"]["edges"]),
    )?;
    Ok("D(W) = {2,4}, edges {(1,2),(3,4)}, verdict true".into())
}

fn six_node_sufficiency_gap() -> Result<String, String> {
    let (code, out) = cli(&["check-node", "--graph", &fixture("six_node.json"), "--node", "1", "--measured", "5,6"]);
    let doc: VerdictDocument = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(code == 0 && doc.verdict, "node 1 is not reported identifiable")?;
    let (code, out) = cli(&[
        "paths",
        "--graph",
        &fixture("six_node.json"),
        "--from",
        "2",
        "--to",
        "5,6",
        "--constrained",
        "--m",
        "1",
    ]);
    let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(code == 3 && doc["exists"] == false, "a constrained path was reported")?;
    Ok("identifiable, yet no constrained path from {2} to {5,6}".into())
}

fn eight_node_constrained_paths() -> Result<String, String> {
    let g = Graph::from_one_based(
        8,
        &[(1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6), (4, 7), (4, 8), (5, 7), (5, 8)],
    )
    .unwrap();
    let out = constrained_path_set_exists(&g, &set(&[2, 3]), &set(&[6, 7, 8]), 2, DEFAULT_BUDGET).unwrap();
    ensure(out.exists, "no constrained set found")?;
    let witness = format!("{:?}", out.witness.unwrap().paths);
    ensure(witness == "[2->4->6, 3->5->7]", &format!("witness {witness}"))?;
    let families = path_families(&g, &set(&[2, 3]), &set(&[7, 8]), 10).unwrap();
    ensure(families.len() == 2, &format!("{{7,8}} admits {} families", families.len()))?;
    let pair = constrained_path_set_exists(&g, &set(&[2, 3]), &set(&[7, 8]), 2, DEFAULT_BUDGET).unwrap();
    ensure(!pair.exists, "{7,8} reported constrained")?;
    Ok(format!("witness {witness}; {{7,8}} has 2 path sets"))
}

fn oracle_equivalence(shared: &mut Shared) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut included, mut excluded, mut built) = (0, 0, 0);
    let mut failures = Vec::new();
    let cases = 300;
    for case in 0..cases {
        // two thirds node instances, one third free anchor sets
        let (g, u, w, node) = if case % 3 < 2 {
            let nc = random_node_case(&mut rng);
            (nc.g.clone(), nc.g.out_set(nc.i), nc.c.clone(), Some(nc))
        } else {
            let NodeCase { g, c, .. } = random_node_case(&mut rng);
            let n = g.vertex_count();
            let k = rng.random_range(1..=n.min(3));
            let u = random_subset_of_size(&mut rng, n, k);
            (g, u, c, None)
        };
        let d = simplify(&g, &u, &w, OrderPolicy::Deterministic).unwrap();
        let seed = case as u64;
        if d.includes_anchor() {
            included += 1;
            let report = rank_trials(&g, &u, &w, 64, seed).unwrap();
            if !report.all_full_rank() {
                return Err(format!("{g:?} U={u:?} W={w:?}: included but a trial is rank deficient"));
            }
        } else {
            excluded += 1;
            let lifted = construct_counterexample(&d, &u, seed).and_then(|m| lift_counterexample(&d, &m, seed + 1));
            match lifted {
                Ok(m) => {
                    verify_counterexample(&m, &g, &u, &w)?;
                    built += 1;
                }
                Err(e) => failures.push(format!("{g:?} U={u:?} W={w:?}: {e}")),
            }
        }
        if let Some(nc) = node {
            shared.node_verdicts.push((nc, d.includes_anchor()));
        }
    }
    let rate = built as f64 / excluded.max(1) as f64;
    ensure(
        rate >= 0.99,
        &format!("construction succeeded {built}/{excluded}: {}", failures.join(" | ")),
    )?;
    Ok(format!(
        "{cases} cases: {included} included (64 trials each, all full rank), {built}/{excluded} counterexamples verified"
    ))
}

fn verify_counterexample(m: &NetworkMatrix, g: &Graph, u: &VertexSet, w: &VertexSet) -> Result<(), String> {
    ensure(m.graph() == g, "counterexample is not on the original graph")?;
    m.audit().map_err(|e| format!("counterexample not admissible: {e}"))?;
    let rank = m.transfer_block(w, u).unwrap().rank_exact().unwrap();
    ensure(rank < u.len(), &format!("{g:?} U={u:?} W={w:?}: rank {rank} is not deficient"))
}

fn rank_preservation() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut stripped_cases = 0;
    while stripped_cases < 120 {
        let NodeCase { g, c: w, .. } = random_node_case(&mut rng);
        let n = g.vertex_count();
        let u = random_subset(&mut rng, n, 0.4);
        if u.is_empty() || w.is_empty() {
            continue;
        }
        let m = sample_admissible(&g, rng.random());
        let (h, _) = apply_op1(&g, &w).unwrap();
        let entries: BTreeMap<_, _> = m
            .entries()
            .iter()
            .filter(|((from, _), _)| !w.contains(*from))
            .map(|(e, f)| (*e, f.clone()))
            .collect();
        let bar = NetworkMatrix::new(h, entries).unwrap();
        let r = m.transfer_block(&w, &u).unwrap().rank_exact().unwrap();
        let r_bar = bar.transfer_block(&w, &u).unwrap().rank_exact().unwrap();
        ensure(r == r_bar, &format!("{g:?} U={u:?} W={w:?}: rank {r} vs {r_bar} after stripping"))?;
        stripped_cases += 1;
    }
    let mut relay_cases = 0;
    while relay_cases < 120 {
        let NodeCase { g, c: w, .. } = random_node_case(&mut rng);
        let n = g.vertex_count();
        let u = random_subset(&mut rng, n, 0.4);
        let eligible = eligible_replacements(&g, &u, &w).unwrap();
        let Some(&(k, j)) = eligible.first() else {
            continue;
        };
        let m = sample_admissible(&g, rng.random());
        let tk = m.transfer_block(&VertexSet::single(k), &u).unwrap();
        let tj = m.transfer_block(&VertexSet::single(j), &u).unwrap();
        let gkj = m.entry(j, k).unwrap();
        for col in 0..u.len() {
            ensure(
                tk.get(0, col) == &(gkj * tj.get(0, col)),
                &format!("{g:?} U={u:?}: T_{{{},U}} != G_{{{},{}}} T_{{{},U}}", k + 1, k + 1, j + 1, j + 1),
            )?;
        }
        relay_cases += 1;
    }
    Ok(format!(
        "{stripped_cases} rank equalities after stripping, {relay_cases} relay identities T_kU = G_kj T_jU"
    ))
}

fn order_invariance() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut instances = 0;
    let mut orders = 0;
    while instances < 50 {
        let NodeCase { g, c: w, .. } = random_node_case(&mut rng);
        let n = g.vertex_count();
        let u = random_subset(&mut rng, n, 0.35);
        let (stripped, _) = apply_op1(&g, &w).unwrap();
        if eligible_replacements(&stripped, &u, &w).unwrap().len() < 2 {
            continue;
        }
        instances += 1;
        let reference = inclusion_verdict(&simplify(&g, &u, &w, OrderPolicy::Deterministic).unwrap(), &u).unwrap();
        for _ in 0..20 {
            let d = simplify(&g, &u, &w, OrderPolicy::Seeded(rng.random())).unwrap();
            ensure(
                inclusion_verdict(&d, &u).unwrap() == reference,
                &format!("{g:?} U={u:?} W={w:?}: verdict depends on order"),
            )?;
            orders += 1;
        }
    }
    Ok(format!("{instances} instances x 20 orders ({orders} derivations) agree"))
}

fn adjugate_path_law() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut nonzero, mut zero, mut resampled) = (0, 0, 0);
    for _ in 0..120 {
        let NodeCase { g, .. } = random_node_case(&mut rng);
        let n = g.vertex_count();
        let first = sample_admissible(&g, rng.random());
        let second_seed: u64 = rng.random();
        let adj = first.identity_minus().adjugate().unwrap();
        let t = first.transfer_matrix().unwrap();
        let mut second = None;
        for i in 0..n {
            let reach = g.reachable_set(&VertexSet::single(i)).unwrap();
            for j in 0..n {
                if reach.contains(j) {
                    if adj.get(j, i).is_zero() {
                        // one resample before declaring failure
                        resampled += 1;
                        let adj2 = second.get_or_insert_with(|| {
                            sample_admissible(&g, second_seed).identity_minus().adjugate().unwrap()
                        });
                        ensure(!adj2.get(j, i).is_zero(), &format!("{g:?}: adj({},{}) vanished twice", j + 1, i + 1))?;
                    }
                    nonzero += 1;
                } else {
                    ensure(adj.get(j, i).is_zero(), &format!("{g:?}: adj({},{}) nonzero without a path", j + 1, i + 1))?;
                    ensure(t.get(j, i).is_zero(), &format!("{g:?}: T({},{}) nonzero without a path", j + 1, i + 1))?;
                    zero += 1;
                }
            }
        }
    }
    Ok(format!(
        "120 graphs: {nonzero} path entries nonzero ({resampled} resampled), {zero} pathless entries exactly zero"
    ))
}

fn square_equivalence(shared: &mut Shared) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut checked, mut positive) = (0, 0);
    while checked < 150 {
        let n = rng.random_range(3..=8);
        let density = rng.random_range(0.2..=0.6);
        let g = random_graph(&mut rng, n, density);
        let i = rng.random_range(0..n);
        let out = g.out_neighbours(i).len();
        if out == 0 || out > 4 {
            continue;
        }
        let c = random_subset_of_size(&mut rng, n, out);
        let agreed = square_case_equivalence(&g, i, &c, DEFAULT_BUDGET)
            .map_err(|e| format!("{g:?} node {} C={c:?}: {e}", i + 1))?;
        positive += usize::from(agreed);
        shared.node_verdicts.push((NodeCase { g, i, c }, agreed));
        checked += 1;
    }
    Ok(format!("{checked} square instances agree ({positive} identifiable)"))
}

fn cardinality_necessity(shared: &Shared) -> Result<String, String> {
    ensure(!shared.node_verdicts.is_empty(), "no instances recorded")?;
    let mut identifiable = 0;
    for (nc, verdict) in &shared.node_verdicts {
        let direct = identifiable_node(&nc.g, nc.i, &nc.c, CheckOptions::default()).unwrap().identifiable;
        ensure(direct == *verdict, "recorded verdict does not match identifiable_node")?;
        if *verdict {
            identifiable += 1;
            ensure(
                necessary_cardinality(&nc.g, nc.i, &nc.c).unwrap(),
                &format!("{:?} node {} C={:?}: identifiable with |N+| > |C|", nc.g, nc.i + 1, nc.c),
            )?;
        }
    }
    Ok(format!(
        "{} node instances, {identifiable} identifiable, none with |N+| > |C|",
        shared.node_verdicts.len()
    ))
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn main() {
    let start = Instant::now();
    let mut shared = Shared::default();
    let mut failed = 0;
    let mut check = |number: usize, name: &str, f: &mut dyn FnMut() -> Result<String, String>| {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {number:>2} {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {number:>2} {name}: {detail} [{secs:.1}s]");
            }
        }
    };
    check(1, "two-layer counterexample", &mut two_layer_counterexample);
    check(2, "derived graph of the six-node example", &mut six_node_derivation);
    check(3, "identifiable without constrained paths", &mut six_node_sufficiency_gap);
    check(4, "constrained paths in the eight-node example", &mut eight_node_constrained_paths);
    check(5, "oracle agrees with derived-set inclusion", &mut || oracle_equivalence(&mut shared));
    check(6, "rank preservation under both operations", &mut rank_preservation);
    check(7, "verdict independent of operation order", &mut order_invariance);
    check(8, "adjugate support and pathless transfers", &mut adjugate_path_law);
    check(9, "square-case equivalence with constrained paths", &mut || square_equivalence(&mut shared));
    check(10, "identifiable nodes satisfy |N+| <= |C|", &mut || cardinality_necessity(&shared));
    println!("acceptance: {} of 10 criteria passed in {:.1}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
