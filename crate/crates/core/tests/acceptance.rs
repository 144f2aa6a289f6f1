mod common;

use std::time::{Duration, Instant};

use roleprox::diagnostics::{scenario_suite, verdict_table};
use roleprox::diffusion::{diffuse, spectrum_check, verify_convergence_rw, verify_convergence_sym, DiffusionConfig, OperatorKind};
use roleprox::embedding::{embed_community, embed_factorized_roles, embed_role, EmbedConfig, FactorizedRolesConfig};
use roleprox::equivalence::{
    exact_role_partition, regular_equivalence_partition, structural_equivalence_partition,
    verify_exact_role_assignment, verify_regular_assignment, Neighborhood,
};
use roleprox::generators::*;
use roleprox::graphlets::{count_orbits, motif_graph, Graphlet};
use roleprox::roles::nmf_matrix;
use roleprox::stats::{mean, std_dev};
use roleprox::walks::{
    directed_edge_traversals, estimate_containment, sample_walks, ContainmentOptions, WalkConfig, WalksPerNode,
};
use roleprox::{Graph, Partition};

use common::{brute_orbits, generator_corpus, random_nonneg, uniform_features};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn c1_rw_convergence() -> Outcome {
    let start = Instant::now();
    let (g, _) = gen_barbell(5).unwrap();
    let x = uniform_features(g.node_count(), 3, 11);
    let r = verify_convergence_rw(&g, &x, 10_000, 1e-8).unwrap();
    let el = start.elapsed();
    let pass = r.converged && r.t_reached <= 10_000 && r.analytic_error <= 1e-8 && within(el, 1.0);
    outcome(
        pass,
        format!("t={} dev={:.1e} limit err={:.1e} in {:.3}s", r.t_reached, r.max_deviation, r.analytic_error, el.as_secs_f64()),
    )
}

fn c2_sym_convergence() -> Outcome {
    let (g, _) = gen_barbell(5).unwrap();
    let x = uniform_features(g.node_count(), 3, 11);
    let r = verify_convergence_sym(&g, &x, 10_000, 1e-8).unwrap();

    // Re-run the operator to read raw (unnormalized) entries.
    let cfg = DiffusionConfig::new(OperatorKind::Symmetric, r.t_reached);
    let out = diffuse(&g, &x, &cfg).unwrap();
    let (a, _) = barbell_bridge(5);
    let interior = (0..5).find(|&u| u != a).unwrap();
    let mut worst = 0.0f64;
    for c in 0..3 {
        let ratio = out.get(a, c) / out.get(interior, c);
        worst = worst.max((ratio - 1.25f64.sqrt()).abs());
    }
    let pass = r.converged && r.max_deviation <= 1e-8 && worst <= 1e-6;
    outcome(pass, format!("t={} dev={:.1e} |ratio-√(5/4)|={:.1e}", r.t_reached, r.max_deviation, worst))
}

fn c3_spectrum() -> Outcome {
    let triangle = gen_clique(3).unwrap();
    let (barbell, _) = gen_barbell(5).unwrap();
    let cl = gen_block_chung_lu(&ChungLuConfig::new(vec![50, 50], 0.9, 1.7, 0)).unwrap().graph;
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, g) in [("triangle", &triangle), ("barbell(5)", &barbell), ("chung-lu", &cl)] {
        let r = spectrum_check(g).unwrap();
        let in_range = r.eigenvalues.iter().all(|&l| l > -1.0 + 1e-9 && l <= 1.0 + 1e-9);
        let ones_ok = r.count_at_one == r.components_with_edges;
        let ok = in_range && ones_ok && r.bipartite_components == 0 && r.consistent;
        pass &= ok;
        notes.push(format!("{name}: [{:.4},{:.4}] ones={} comps={}", r.min, r.max, r.count_at_one, r.components_with_edges));
    }
    let edge = Graph::from_unweighted(2, &[(0, 1)]).unwrap();
    let r = spectrum_check(&edge).unwrap();
    let edge_ok = (r.min + 1.0).abs() <= 1e-9;
    pass &= edge_ok;
    notes.push(format!("edge min={:.1e}", r.min + 1.0));
    outcome(pass, notes.join("; "))
}

fn c4_containment() -> Outcome {
    let start = Instant::now();
    let (g, cliques) = gen_barbell(5).unwrap();
    let members = &cliques.classes()[0];
    let trials = 10_000;
    let mut pass = true;
    let mut notes = Vec::new();
    for ell in [2usize, 4, 8] {
        let bound = 1.0 - ell as f64 / 42.0;
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        let emp = estimate_containment(&g, members, ell, trials, 7 + ell as u64, ContainmentOptions::default()).unwrap();
        pass &= emp >= bound - 3.0 * sigma;
        notes.push(format!("ℓ={ell}: {emp:.4} vs {:.4}", bound - 3.0 * sigma));
    }
    let k5 = gen_clique(5).unwrap();
    let two = Graph::disjoint_union(&[&k5, &k5]).unwrap();
    let iso = estimate_containment(&two, &[0, 1, 2, 3, 4], 8, trials, 3, ContainmentOptions::default()).unwrap();
    pass &= iso == 1.0;
    let el = start.elapsed();
    pass &= within(el, 5.0);
    notes.push(format!("disconnected={iso} in {:.3}s", el.as_secs_f64()));
    outcome(pass, notes.join("; "))
}

fn c5_edge_traversals() -> Outcome {
    let ell = 5usize;
    let g = gen_block_chung_lu(&ChungLuConfig::new(vec![50, 50], 0.9, 1.7, 0)).unwrap().graph;
    let seeds = 20u64;
    let mut per_seed = Vec::new();
    let mut per_edge: Vec<Vec<f64>> = Vec::new();
    for seed in 0..seeds {
        let cfg = WalkConfig { length: ell + 1, walks_per_node: WalksPerNode::Degree, seed };
        let corpus = sample_walks(&g, &cfg).unwrap();
        let counts: Vec<f64> = directed_edge_traversals(&g, &corpus).into_iter().flatten().map(|c| c as f64).collect();
        per_seed.push(mean(&counts));
        if per_edge.is_empty() {
            per_edge = vec![Vec::new(); counts.len()];
        }
        for (i, c) in counts.into_iter().enumerate() {
            per_edge[i].push(c);
        }
    }
    let m = mean(&per_seed);
    let sigma = std_dev(&per_seed) / (seeds as f64).sqrt();
    let pass = m <= ell as f64 + 3.0 * sigma + 1e-12;
    let worst_z = per_edge
        .iter()
        .map(|xs| {
            let se = std_dev(xs) / (xs.len() as f64).sqrt();
            if se > 0.0 { (mean(xs) - ell as f64) / se } else { 0.0 }
        })
        .fold(f64::NEG_INFINITY, f64::max);
    outcome(pass, format!("mean={m:.4} ≤ {:.4}; max per-edge z={worst_z:.2}", ell as f64 + 3.0 * sigma))
}

fn c6_orbits() -> Outcome {
    let start = Instant::now();
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    let ps = [0.2, 0.4, 0.6];
    for i in 0..25u64 {
        let n = 5 + (i as usize % 8);
        let p = ps[i as usize % 3];
        graphs.push((format!("G({n},{p})#{i}"), gen_erdos_renyi(n, p, 1000 + i).unwrap()));
    }
    graphs.extend(generator_corpus());
    let mut bad = Vec::new();
    for (name, g) in &graphs {
        if count_orbits(g).rows() != brute_orbits(g).as_slice() {
            bad.push(name.clone());
        }
    }
    let el = start.elapsed();
    let pass = bad.is_empty() && within(el, 30.0);
    outcome(pass, format!("{} graphs, mismatches {:?} in {:.2}s", graphs.len(), bad, el.as_secs_f64()))
}

fn c7_motif_shattering() -> Outcome {
    let (g, _) = gen_barbell(5).unwrap();
    let mg = motif_graph(&g, Graphlet::Clique4, 1, false).unwrap();
    let k4 = gen_clique(4).unwrap();
    let mk = motif_graph(&k4, Graphlet::Clique4, 1, false).unwrap();
    let pass = mg.component_count() == 2 && mk.component_count() == 1;
    outcome(pass, format!("barbell(5)={} K4={}", mg.component_count(), mk.component_count()))
}

fn c8_hierarchy() -> Outcome {
    let mut pass = true;
    let mut bad = Vec::new();
    for (name, g) in generator_corpus() {
        let s = structural_equivalence_partition(&g, Neighborhood::Open);
        let e = exact_role_partition(&g);
        let r = regular_equivalence_partition(&g);
        let ok = s.refines(&e)
            && e.refines(&r)
            && verify_exact_role_assignment(&g, &e).unwrap().holds
            && verify_regular_assignment(&g, &r).unwrap().holds;
        if !ok {
            bad.push(name);
        }
        pass &= ok;
    }
    let star = gen_star(4).unwrap();
    let expect = Partition::from_labels(vec![0, 1, 1, 1, 1]).unwrap();
    let all = [
        structural_equivalence_partition(&star, Neighborhood::Open),
        exact_role_partition(&star),
        regular_equivalence_partition(&star),
    ];
    let star_ok = all.iter().all(|p| p.same_grouping(&expect));
    pass &= star_ok;
    outcome(pass, format!("violations {bad:?}; star(4) hub/leaves={star_ok}"))
}

fn c9_role_transfer() -> Outcome {
    let (g, comps, _) = gen_disjoint_stars(2, 4).unwrap();
    let (h1, h2) = (0, 5);
    let role = embed_role(&g, &EmbedConfig::default()).unwrap();
    let fact = embed_factorized_roles(&g, &FactorizedRolesConfig::default()).unwrap();
    let comm = embed_community(&g, &EmbedConfig::default()).unwrap();
    let mut cross = Vec::new();
    for u in 0..g.node_count() {
        for v in u + 1..g.node_count() {
            if comps.class_of(u) != comps.class_of(v) {
                cross.push(comm.cosine(u, v));
            }
        }
    }
    let cross_mean = mean(&cross);
    let (a, b, c) = (role.cosine(h1, h2), fact.cosine(h1, h2), comm.cosine(h1, h2));
    let pass = a == 1.0 && b == 1.0 && c <= cross_mean + 0.05;
    outcome(pass, format!("role={a} factorized={b} community={c:.4} vs cross mean {cross_mean:.4}+0.05"))
}

fn c10_smoothing() -> Outcome {
    let (g, cliques) = gen_barbell(5).unwrap();
    let classes = cliques.classes();
    let mut ratios = vec![Vec::new(); 2];
    for seed in 0..20u64 {
        let x = uniform_features(g.node_count(), 1, seed);
        let y = diffuse(&g, &x, &DiffusionConfig::new(OperatorKind::RandomWalk, 3)).unwrap();
        for (c, members) in classes.iter().enumerate() {
            let before: Vec<f64> = members.iter().map(|&u| x.get(u, 0)).collect();
            let after: Vec<f64> = members.iter().map(|&u| y.get(u, 0)).collect();
            ratios[c].push(std_dev(&after) / std_dev(&before));
        }
    }
    let (r0, r1) = (mean(&ratios[0]), mean(&ratios[1]));
    outcome(r0 <= 0.1 && r1 <= 0.1, format!("std ratio {r0:.4} / {r1:.4}"))
}

fn c11_suite() -> Outcome {
    let start = Instant::now();
    let mut misses = Vec::new();
    let mut last = String::new();
    for seed in 0..5u64 {
        let cells = scenario_suite(seed).unwrap();
        for c in cells.iter().filter(|c| !c.agrees()) {
            misses.push(format!("seed {seed} {}/{}={}", c.scenario, c.mechanism.name(), c.report.verdict.name()));
        }
        last = verdict_table(&cells);
    }
    let el = start.elapsed();
    print!("{last}");
    let pass = misses.is_empty() && within(el, 60.0);
    outcome(pass, format!("misses {misses:?}; 5 suites in {:.2}s", el.as_secs_f64()))
}

fn c12_nmf() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..10u64 {
        let x = random_nonneg(12 + seed as usize, 6 + (seed as usize % 4), seed);
        let r = nmf_matrix(&x, 3, 300, 0.0, seed).unwrap();
        for w in r.history.windows(2) {
            worst = worst.max(w[1] - w[0]);
        }
    }
    outcome(worst <= 1e-12, format!("largest step increase {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("random-walk operator convergence", c1_rw_convergence),
        ("symmetric operator convergence", c2_sym_convergence),
        ("symmetric operator spectrum", c3_spectrum),
        ("walk containment bound", c4_containment),
        ("edge traversal expectation", c5_edge_traversals),
        ("orbit counts vs brute force", c6_orbits),
        ("motif graph shattering", c7_motif_shattering),
        ("equivalence hierarchy", c8_hierarchy),
        ("role transfer across components", c9_role_transfer),
        ("diffusion smoothing", c10_smoothing),
        ("scenario verdict matrix", c11_suite),
        ("NMF monotonicity", c12_nmf),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{tag} {:>2} {name} ({:.2}s): {}", i + 1, start.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
