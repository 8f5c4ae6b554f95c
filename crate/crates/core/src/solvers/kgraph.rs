//! Rainbow matchings in collections of directed k-graphs: a checker for
//! the degree hypotheses and the size/cover conclusions, and a seeded
//! greedy constructor.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{int, Frac};

/// An ordered k-tuple of distinct vertices.
pub type KEdge = Vec<usize>;

/// One edge per hypergraph index at most; `edges[r] = (i, e)` takes `e` from `H_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KGraphMatching {
    pub edges: Vec<(usize, KEdge)>,
}

impl KGraphMatching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KGraphReport {
    pub epsilon: Frac,
    pub t: usize,
    /// The matching is rainbow, vertex-disjoint and uses edges of its hypergraphs.
    pub matching_valid: bool,
    pub problems: Vec<String>,
    /// Hypergraphs with fewer than εnᵏ edges.
    pub sparse_hypergraphs: Vec<usize>,
    /// Multigraphs meeting fewer than εt hypergraphs in εnᵏ edges.
    pub weak_multigraphs: Vec<usize>,
    pub size: usize,
    pub required_size: Frac,
    /// `|E(Z_j) ∩ E(M)|` for every `j`.
    pub coverage: Vec<usize>,
    pub required_coverage: Frac,
}

impl KGraphReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.sparse_hypergraphs.is_empty() && self.weak_multigraphs.is_empty()
    }

    pub fn size_ok(&self) -> bool {
        int(self.size) >= self.required_size
    }

    pub fn coverage_ok(&self) -> bool {
        self.coverage.iter().all(|&c| int(c) >= self.required_coverage)
    }

    pub fn conclusions_hold(&self) -> bool {
        self.matching_valid && self.size_ok() && self.coverage_ok()
    }

    pub fn min_coverage(&self) -> Option<usize> {
        self.coverage.iter().copied().min()
    }
}

fn check_edges(n: usize, k: usize, what: &str, family: &[Vec<KEdge>]) -> Result<()> {
    for (i, edges) in family.iter().enumerate() {
        for e in edges {
            if e.len() != k {
                return Err(Error::Shape(format!("{what} {i} has an edge of arity {}, expected {k}", e.len())));
            }
            if e.iter().any(|&v| v >= n) {
                return Err(Error::Shape(format!("{what} {i} has an edge outside 0..{n}")));
            }
            let distinct: HashSet<usize> = e.iter().copied().collect();
            if distinct.len() != k {
                return Err(Error::Shape(format!("{what} {i} has an edge with repeated vertices")));
            }
        }
    }
    Ok(())
}

fn edge_sets(hs: &[Vec<KEdge>]) -> Vec<HashSet<&KEdge>> {
    hs.iter().map(|h| h.iter().collect()).collect()
}

/// `|E(Z_j) ∩ E(H_i)|` for all `j, i`, counting multi-edges of `Z_j` with
/// multiplicity.
fn intersection_counts(hs: &[Vec<KEdge>], zs: &[Vec<KEdge>]) -> Vec<Vec<usize>> {
    let sets = edge_sets(hs);
    zs.iter()
        .map(|z| sets.iter().map(|h| z.iter().filter(|e| h.contains(e)).count()).collect())
        .collect()
}

fn power(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

/// Checks both hypotheses and both conclusions for the given
/// ε and `t = |hs|`.
pub fn verify_rainbow_kgraph_matching(
    n: usize,
    k: usize,
    hs: &[Vec<KEdge>],
    zs: &[Vec<KEdge>],
    m: &KGraphMatching,
    epsilon: Frac,
    t: usize,
) -> Result<KGraphReport> {
    if t != hs.len() {
        return Err(Error::Shape(format!("t = {t} but {} hypergraphs were given", hs.len())));
    }
    check_edges(n, k, "hypergraph", hs)?;
    check_edges(n, k, "multigraph", zs)?;
    check_edges(n, k, "matching", &[m.edges.iter().map(|(_, e)| e.clone()).collect()])?;
    let nk = int(power(n, k));
    let threshold = epsilon * nk;
    let sparse_hypergraphs = (0..t).filter(|&i| int(hs[i].len()) < threshold).collect();
    let counts = intersection_counts(hs, zs);
    let weak_multigraphs = counts
        .iter()
        .enumerate()
        .filter(|(_, row)| {
            let met = row.iter().filter(|&&c| int(c) >= threshold).count();
            int(met) < epsilon * int(t)
        })
        .map(|(j, _)| j)
        .collect();

    let sets = edge_sets(hs);
    let mut problems = Vec::new();
    let mut seen_index = HashSet::new();
    let mut seen_vertex = HashSet::new();
    for (i, e) in &m.edges {
        if *i >= t {
            problems.push(format!("hypergraph index {i} out of range"));
            continue;
        }
        if !seen_index.insert(*i) {
            problems.push(format!("hypergraph {i} used twice"));
        }
        if !sets[*i].contains(e) {
            problems.push(format!("edge {e:?} is not in hypergraph {i}"));
        }
        for v in e {
            if !seen_vertex.insert(*v) {
                problems.push(format!("vertex {v} covered twice"));
            }
        }
    }
    let coverage = zs
        .iter()
        .map(|z| {
            let zset: HashSet<&KEdge> = z.iter().collect();
            m.edges.iter().filter(|(_, e)| zset.contains(e)).count()
        })
        .collect();
    let eps2 = epsilon * epsilon;
    Ok(KGraphReport {
        epsilon,
        t,
        matching_valid: problems.is_empty(),
        problems,
        sparse_hypergraphs,
        weak_multigraphs,
        size: m.len(),
        required_size: (int(1) - eps2 / int(4)) * int(t),
        coverage,
        required_coverage: eps2 * int(t) / int(4),
    })
}

/// Largest ε for which both hypotheses hold, or zero when there is none.
///
/// For each `Z_j` the admissible ε are those with `ε ≤ r/t` and `ε ≤ c_(r)/nᵏ`
/// for some `r`, where `c_(r)` is the `r`-th largest intersection count.
pub fn hypothesis_epsilon(n: usize, k: usize, hs: &[Vec<KEdge>], zs: &[Vec<KEdge>]) -> Result<Frac> {
    check_edges(n, k, "hypergraph", hs)?;
    check_edges(n, k, "multigraph", zs)?;
    let t = hs.len();
    if t == 0 || n == 0 {
        return Ok(int(0));
    }
    let nk = power(n, k) as i64;
    let mut eps = hs.iter().map(|h| Frac::new(h.len() as i64, nk)).min().expect("t > 0");
    for mut row in intersection_counts(hs, zs) {
        row.sort_unstable_by(|a, b| b.cmp(a));
        let best = (1..=t)
            .map(|r| Frac::new(r as i64, t as i64).min(Frac::new(row[r - 1] as i64, nk)))
            .max()
            .expect("t > 0");
        eps = eps.min(best);
    }
    Ok(eps)
}

const RESTARTS: u64 = 32;

/// Seeded greedy: hypergraphs are visited in random order and each takes a
/// free edge, preferring edges that lie in the least-served `Z_j`. The best
/// of a fixed number of restarts (by size, then minimum coverage) is kept.
pub fn greedy_rainbow_kgraph_matching(hs: &[Vec<KEdge>], zs: &[Vec<KEdge>], seed: u64) -> KGraphMatching {
    let mut owners: HashMap<&KEdge, Vec<usize>> = HashMap::new();
    for (j, z) in zs.iter().enumerate() {
        for e in z {
            owners.entry(e).or_default().push(j);
        }
    }
    let mut best: Option<((usize, usize), KGraphMatching)> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ restart.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut order: Vec<usize> = (0..hs.len()).collect();
        order.shuffle(&mut rng);
        let mut served = vec![0usize; zs.len()];
        let mut used: HashSet<usize> = HashSet::new();
        let mut m = KGraphMatching::default();
        for i in order {
            let mut cands: Vec<&KEdge> = hs[i].iter().filter(|e| e.iter().all(|v| !used.contains(v))).collect();
            cands.shuffle(&mut rng);
            let pick = cands.into_iter().min_by_key(|e| {
                owners
                    .get(*e)
                    .map(|js| js.iter().map(|&j| served[j]).min().unwrap_or(usize::MAX))
                    .unwrap_or(usize::MAX)
            });
            if let Some(e) = pick {
                used.extend(e.iter().copied());
                if let Some(js) = owners.get(e) {
                    for &j in js {
                        served[j] += 1;
                    }
                }
                m.edges.push((i, e.clone()));
            }
        }
        let score = (m.len(), served.iter().copied().min().unwrap_or(0));
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, m));
        }
    }
    let mut m = best.map(|(_, m)| m).unwrap_or_default();
    m.edges.sort();
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn all_tuples(n: usize, k: usize) -> Vec<KEdge> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<KEdge>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in 0..n {
                if !cur.contains(&v) {
                    cur.push(v);
                    rec(n, k, cur, out);
                    cur.pop();
                }
            }
        }
        rec(n, k, &mut cur, &mut out);
        out
    }

    fn random_family(n: usize, k: usize, count: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<KEdge>> {
        let tuples = all_tuples(n, k);
        (0..count)
            .map(|_| tuples.iter().filter(|_| rng.gen_bool(p)).cloned().collect())
            .collect()
    }

    #[test]
    fn degenerate_thresholds() {
        let hs = vec![vec![vec![0, 1]]; 4];
        let r = verify_rainbow_kgraph_matching(4, 2, &hs, &[vec![]], &KGraphMatching::default(), int(1), 4).unwrap();
        assert_eq!(r.required_size, int(3));
        assert_eq!(r.required_coverage, int(1));
    }

    #[test]
    fn empty_matching_fails_size() {
        let hs = vec![vec![vec![0, 1], vec![1, 0]]; 3];
        let r =
            verify_rainbow_kgraph_matching(3, 2, &hs, &[], &KGraphMatching::default(), Frac::new(1, 10), 3).unwrap();
        assert!(!r.size_ok());
        assert!(r.coverage_ok());
    }

    #[test]
    fn dimension_mismatch() {
        let hs = vec![vec![vec![0, 1, 2]]];
        let m = KGraphMatching::default();
        assert!(verify_rainbow_kgraph_matching(4, 2, &hs, &[], &m, int(1), 1).is_err());
        let hs = vec![vec![vec![0, 1]]];
        assert!(verify_rainbow_kgraph_matching(4, 2, &hs, &[], &m, int(1), 2).is_err());
    }

    #[test]
    fn hypothesis_epsilon_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let hs = random_family(6, 2, 4, 0.6, &mut rng);
        let zs = random_family(6, 2, 3, 0.5, &mut rng);
        let eps = hypothesis_epsilon(6, 2, &hs, &zs).unwrap();
        let m = KGraphMatching::default();
        let at = verify_rainbow_kgraph_matching(6, 2, &hs, &zs, &m, eps, 4).unwrap();
        assert!(at.hypotheses_hold());
        let above = eps + Frac::new(1, 10_000);
        let r = verify_rainbow_kgraph_matching(6, 2, &hs, &zs, &m, above, 4).unwrap();
        assert!(!r.hypotheses_hold());
    }

    fn dense_instance(n: usize, k: usize, t: usize, seed: u64) -> (Vec<Vec<KEdge>>, Vec<Vec<KEdge>>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hs = random_family(n, k, t, 0.9, &mut rng);
        let zs = random_family(n, k, 3, 0.5, &mut rng);
        (hs, zs)
    }

    fn run_dense(n: usize, k: usize, t: usize) -> KGraphReport {
        let (hs, zs) = dense_instance(n, k, t, 11);
        let eps = hypothesis_epsilon(n, k, &hs, &zs).unwrap();
        let m = greedy_rainbow_kgraph_matching(&hs, &zs, 3);
        assert_eq!(m, greedy_rainbow_kgraph_matching(&hs, &zs, 3));
        verify_rainbow_kgraph_matching(n, k, &hs, &zs, &m, eps, t).unwrap()
    }

    #[test]
    fn greedy_passes_on_graph_instances() {
        for (n, k, t) in [(12, 2, 6), (16, 2, 8)] {
            let r = run_dense(n, k, t);
            assert!(r.hypotheses_hold());
            assert!(r.conclusions_hold(), "({n},{k},{t}): {r:?}");
        }
    }

    #[test]
    fn three_uniform_instance_cannot_reach_size_bound() {
        // Four disjoint triples need 12 vertices; ten are available.
        let r = run_dense(10, 3, 4);
        assert!(r.hypotheses_hold());
        assert!(r.matching_valid);
        assert_eq!(r.size, 3);
        assert!(r.epsilon < int(1));
        assert!(!r.size_ok());
        assert!(r.coverage_ok());
    }
}
