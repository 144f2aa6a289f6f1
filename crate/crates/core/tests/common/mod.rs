#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roleprox::generators::*;
use roleprox::{FeatureMatrix, Graph};

/// Orbit counts by enumerating every 2-, 3- and 4-node subset and classifying
/// the induced subgraph by its degree pattern.
pub fn brute_orbits(g: &Graph) -> Vec<[u64; 15]> {
    let n = g.node_count();
    let mut adj = vec![false; n * n];
    for (u, v, _) in g.edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let a = |u: usize, v: usize| adj[u * n + v];
    let mut out = vec![[0u64; 15]; n];
    for i in 0..n {
        for j in i + 1..n {
            if a(i, j) {
                out[i][0] += 1;
                out[j][0] += 1;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = [i, j, k];
                let deg: Vec<usize> = s.iter().map(|&x| s.iter().filter(|&&y| a(x, y)).count()).collect();
                let edges: usize = deg.iter().sum::<usize>() / 2;
                match edges {
                    2 => {
                        for (t, &x) in s.iter().enumerate() {
                            out[x][if deg[t] == 1 { 1 } else { 2 }] += 1;
                        }
                    }
                    3 => s.iter().for_each(|&x| out[x][3] += 1),
                    _ => {}
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let s = [i, j, k, l];
                    let deg: Vec<usize> =
                        s.iter().map(|&x| s.iter().filter(|&&y| a(x, y)).count()).collect();
                    let edges: usize = deg.iter().sum::<usize>() / 2;
                    if deg.contains(&0) || edges < 3 {
                        continue;
                    }
                    let max = *deg.iter().max().unwrap();
                    for (t, &x) in s.iter().enumerate() {
                        let o = match (edges, max, deg[t]) {
                            (3, 2, 1) => 4,
                            (3, 2, _) => 5,
                            (3, 3, 1) => 6,
                            (3, 3, _) => 7,
                            (4, 2, _) => 8,
                            (4, 3, 1) => 9,
                            (4, 3, 2) => 10,
                            (4, 3, _) => 11,
                            (5, _, 2) => 12,
                            (5, _, _) => 13,
                            _ => 14,
                        };
                        out[x][o] += 1;
                    }
                }
            }
        }
    }
    out
}

/// Named graphs from every generator.
pub fn generator_corpus() -> Vec<(String, Graph)> {
    let mut v = vec![
        ("barbell(5)".to_string(), gen_barbell(5).unwrap().0),
        ("barbell(3)".to_string(), gen_barbell(3).unwrap().0),
        ("star(4)".to_string(), gen_star(4).unwrap()),
        ("clique(6)".to_string(), gen_clique(6).unwrap()),
        ("K(3,4)".to_string(), gen_complete_bipartite(3, 4).unwrap()),
        ("path(7)".to_string(), gen_path(7).unwrap()),
        ("cycle(6)".to_string(), gen_cycle(6).unwrap()),
        ("cycle(5)".to_string(), gen_cycle(5).unwrap()),
        ("2×star(4)".to_string(), gen_disjoint_stars(2, 4).unwrap().0),
        ("borgatti-everett".to_string(), borgatti_everett().0),
        ("G(12,0.4)".to_string(), gen_erdos_renyi(12, 0.4, 3).unwrap()),
    ];
    let cl = gen_block_chung_lu(&ChungLuConfig::new(vec![50, 50], 0.9, 1.7, 0)).unwrap();
    v.push(("chung-lu 2×50".to_string(), cl.graph));
    v
}

pub fn uniform_features(n: usize, cols: usize, seed: u64) -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = nalgebra::DMatrix::from_fn(n, cols, |_, _| rng.random::<f64>());
    FeatureMatrix::unlabeled(data).unwrap()
}

pub fn random_nonneg(rows: usize, cols: usize, seed: u64) -> nalgebra::DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    nalgebra::DMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>() * 5.0)
}
