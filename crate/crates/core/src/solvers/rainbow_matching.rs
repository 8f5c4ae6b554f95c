//! Maximum rainbow matchings by branch and bound over the colors.

use std::time::Instant;

use super::{Budget, SearchConfig, SearchStats, MAX_SOLVER_N};
use crate::bitset::bits;
use crate::error::{Error, Result};
use crate::matching::max_matching;
use crate::model::{BipartiteCollection, CertificateKind, DigraphCollection, RainbowCertificate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowMatching {
    pub size: usize,
    /// Edges `(left, right)` with one distinct color each.
    pub certificate: RainbowCertificate,
    /// False when a budget stopped the search; `size` is then a lower bound.
    pub optimal: bool,
    pub stats: SearchStats,
}

/// Largest set of disjoint edges carrying pairwise distinct colors.
///
/// Each color either contributes one edge or is skipped. A branch is cut
/// when the remaining colors with a usable edge, or an ordinary maximum
/// matching of their union on the free vertices, cannot beat the incumbent.
pub fn max_rainbow_matching(bc: &BipartiteCollection, cfg: &SearchConfig) -> Result<RainbowMatching> {
    let n = bc.n();
    if n > MAX_SOLVER_N {
        return Err(Error::InvalidArgument(format!(
            "exact search supports at most {MAX_SOLVER_N} vertices per part, got {n}"
        )));
    }
    let t0 = Instant::now();
    let adj: Vec<Vec<u64>> = bc
        .graphs()
        .iter()
        .map(|g| (0..n).map(|u| g.left_neighbors(u).word()).collect())
        .collect();
    // Sparse colors first: they are the ones most likely to be skipped.
    let mut order: Vec<usize> = (0..bc.m()).collect();
    order.sort_by_key(|&c| (bc.graph(c).edge_count(), c));
    let mut s = Bnb {
        n,
        adj,
        order,
        budget: Budget::new(cfg).started_at(t0),
        current: Vec::new(),
        best: Vec::new(),
    };
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let finished = s.dfs(0, full, full);
    let mut best = s.best.clone();
    best.sort_unstable();
    let mut stats = s.budget.stats(finished);
    stats.wall_time = t0.elapsed();
    Ok(RainbowMatching {
        size: best.len(),
        certificate: RainbowCertificate {
            kind: CertificateKind::Matching,
            edges: best.iter().map(|&(u, v, _)| (u, v)).collect(),
            colors: best.iter().map(|&(_, _, c)| c).collect(),
        },
        optimal: finished,
        stats,
    })
}

/// Rainbow matching in the characteristic bipartite collection of `dc`.
pub fn max_rainbow_matching_digraph(dc: &DigraphCollection, cfg: &SearchConfig) -> Result<RainbowMatching> {
    max_rainbow_matching(&dc.characteristic_bipartite(), cfg)
}

struct Bnb<'a> {
    n: usize,
    adj: Vec<Vec<u64>>,
    order: Vec<usize>,
    budget: Budget<'a>,
    current: Vec<(usize, usize, usize)>,
    best: Vec<(usize, usize, usize)>,
}

impl Bnb<'_> {
    /// Returns false if the budget ran out.
    fn dfs(&mut self, k: usize, free_left: u64, free_right: u64) -> bool {
        if !self.budget.tick() {
            return false;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if k == self.order.len() || self.best.len() == self.n {
            return true;
        }
        if self.current.len() + self.bound(k, free_left, free_right) <= self.best.len() {
            self.budget.prunes += 1;
            return true;
        }
        let c = self.order[k];
        for u in bits(free_left) {
            for v in bits(self.adj[c][u] & free_right) {
                self.current.push((u, v, c));
                let ok = self.dfs(k + 1, free_left & !(1 << u), free_right & !(1 << v));
                self.current.pop();
                if !ok {
                    return false;
                }
            }
        }
        self.dfs(k + 1, free_left, free_right)
    }

    fn bound(&self, k: usize, free_left: u64, free_right: u64) -> usize {
        let mut union = vec![0u64; self.n];
        let mut usable = 0;
        for &c in &self.order[k..] {
            let mut any = false;
            for u in bits(free_left) {
                let e = self.adj[c][u] & free_right;
                union[u] |= e;
                any |= e != 0;
            }
            usable += usize::from(any);
        }
        usable.min(max_matching(&union).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_bipartite_matching, BipartiteGraph};

    fn run(bc: &BipartiteCollection) -> RainbowMatching {
        let r = max_rainbow_matching(bc, &SearchConfig::default()).unwrap();
        assert!(validate_bipartite_matching(bc, &r.certificate, false).is_valid());
        assert!(r.optimal);
        r
    }

    #[test]
    fn single_edge() {
        let bc = BipartiteCollection::new(vec![BipartiteGraph::from_edges(1, [(0, 0)]).unwrap()]).unwrap();
        assert_eq!(run(&bc).size, 1);
    }

    #[test]
    fn complete_colors() {
        let bc = BipartiteCollection::new(vec![BipartiteGraph::complete(3); 3]).unwrap();
        assert_eq!(run(&bc).size, 3);
    }

    #[test]
    fn shared_single_edge() {
        let g = BipartiteGraph::from_edges(3, [(1, 2)]).unwrap();
        let bc = BipartiteCollection::new(vec![g; 4]).unwrap();
        assert_eq!(run(&bc).size, 1);
    }

    #[test]
    fn more_colors_than_vertices() {
        let bc = BipartiteCollection::new(vec![BipartiteGraph::complete(2); 5]).unwrap();
        assert_eq!(run(&bc).size, 2);
    }

    #[test]
    fn digraph_variant() {
        let d = crate::model::Digraph::complete(3);
        let dc = DigraphCollection::uniform(&d, 3).unwrap();
        let r = max_rainbow_matching_digraph(&dc, &SearchConfig::default()).unwrap();
        assert_eq!(r.size, 3);
    }
}
