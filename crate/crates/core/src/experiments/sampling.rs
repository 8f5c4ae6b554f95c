//! Random collections, optionally repaired up to a minimum degree.
//!
//! Repair adds uniformly random missing edges at deficient vertices. This
//! biases the distribution towards the bound, which is acceptable for
//! counterexample hunting.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{BipartiteCollection, BipartiteGraph, Digraph, DigraphCollection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairEdge {
    pub color: usize,
    pub from: usize,
    pub to: usize,
}

pub fn gen_random_digraph(n: usize, p: f64, rng: &mut impl Rng) -> Digraph {
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.add_edge(u, v).expect("pair is valid");
            }
        }
    }
    d
}

/// Adds random edges until `δ⁰(d) ≥ k`, returning them.
fn repair_digraph(d: &mut Digraph, k: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let n = d.n();
    let mut added = Vec::new();
    for v in 0..n {
        while d.out_degree(v) < k {
            let missing: Vec<usize> = (0..n).filter(|&w| w != v && !d.has_edge(v, w)).collect();
            let &w = missing.choose(rng).expect("k ≤ n − 1");
            d.add_edge(v, w).expect("pair is valid");
            added.push((v, w));
        }
        while d.in_degree(v) < k {
            let missing: Vec<usize> = (0..n).filter(|&w| w != v && !d.has_edge(w, v)).collect();
            let &w = missing.choose(rng).expect("k ≤ n − 1");
            d.add_edge(w, v).expect("pair is valid");
            added.push((w, v));
        }
    }
    added
}

/// Each ordered pair appears in each color independently with probability
/// `p`; with `min_semidegree = Some(k)` every color is then repaired to
/// `δ⁰ ≥ k`.
pub fn gen_random_collection(
    n: usize,
    m: usize,
    p: f64,
    min_semidegree: Option<usize>,
    seed: u64,
) -> Result<(DigraphCollection, Vec<RepairEdge>)> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("p = {p} must lie in [0, 1]"));
    }
    if m == 0 {
        return invalid("a collection needs at least one color");
    }
    if let Some(k) = min_semidegree {
        if n == 0 || k > n - 1 {
            return invalid(format!("minimum semi-degree {k} is infeasible on {n} vertices"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::new();
    let mut ds = Vec::with_capacity(m);
    for c in 0..m {
        let mut d = gen_random_digraph(n, p, &mut rng);
        if let Some(k) = min_semidegree {
            log.extend(repair_digraph(&mut d, k, &mut rng).into_iter().map(|(from, to)| RepairEdge { color: c, from, to }));
        }
        ds.push(d);
    }
    Ok((DigraphCollection::new(ds)?, log))
}

/// `m = n` bipartite graphs with left degrees above `n/2` and right degrees
/// at least `n/2`: sampled at density `p`, then repaired.
pub fn gen_bradshaw_collection(n: usize, p: f64, seed: u64) -> Result<BipartiteCollection> {
    if n == 0 {
        return invalid("bipartite collections need n ≥ 1");
    }
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("p = {p} must lie in [0, 1]"));
    }
    let left_need = n / 2 + 1;
    let right_need = n.div_ceil(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gs = Vec::with_capacity(n);
    for _ in 0..n {
        let mut g = BipartiteGraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).expect("pair is valid");
                }
            }
        }
        for u in 0..n {
            while g.left_degree(u) < left_need.min(n) {
                let missing: Vec<usize> = (0..n).filter(|&v| !g.has_edge(u, v)).collect();
                let &v = missing.choose(&mut rng).expect("degree below n");
                g.add_edge(u, v).expect("pair is valid");
            }
        }
        for v in 0..n {
            while g.right_degree(v) < right_need {
                let missing: Vec<usize> = (0..n).filter(|&u| !g.has_edge(u, v)).collect();
                let &u = missing.choose(&mut rng).expect("degree below n");
                g.add_edge(u, v).expect("pair is valid");
            }
        }
        gs.push(g);
    }
    BipartiteCollection::new(gs)
}
