//! Bipartite matching on word-sized adjacency masks.
//!
//! Left vertex `i` is adjacent to the right vertices whose bits are set in
//! `adj[i]`; both sides are limited to 64 vertices.

use crate::bitset::bits;

/// Maximum matching by augmenting paths. Returns the size and, for every
/// left vertex, its matched right vertex.
pub fn max_matching(adj: &[u64]) -> (usize, Vec<Option<usize>>) {
    let mut match_right = [usize::MAX; 64];
    let mut size = 0;
    for u in 0..adj.len() {
        let mut visited = 0u64;
        if augment(u, adj, &mut match_right, &mut visited) {
            size += 1;
        }
    }
    let mut match_left = vec![None; adj.len()];
    for (v, &u) in match_right.iter().enumerate() {
        if u != usize::MAX {
            match_left[u] = Some(v);
        }
    }
    (size, match_left)
}

/// Whether every left vertex can be matched.
pub fn saturates_left(adj: &[u64]) -> bool {
    let mut match_right = [usize::MAX; 64];
    for u in 0..adj.len() {
        if adj[u] == 0 {
            return false;
        }
        let mut visited = 0u64;
        if !augment(u, adj, &mut match_right, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[u64], match_right: &mut [usize; 64], visited: &mut u64) -> bool {
    for v in bits(adj[u] & !*visited) {
        *visited |= 1 << v;
        if match_right[v] == usize::MAX || augment(match_right[v], adj, match_right, visited) {
            match_right[v] = u;
            return true;
        }
    }
    false
}

/// Number of perfect matchings of a square 0/1 matrix (its permanent), by
/// dynamic programming over subsets of the right side. `adj.len()` must be
/// at most 24.
pub fn count_perfect_matchings(adj: &[u64]) -> u64 {
    let k = adj.len();
    assert!(k <= 24, "permanent of a {k}x{k} matrix is out of range");
    let mut ways = vec![0u64; 1 << k];
    ways[0] = 1;
    for mask in 0..(1usize << k) {
        let w = ways[mask];
        if w == 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == k {
            continue;
        }
        for v in bits(adj[row] & !(mask as u64) & ((1u64 << k) - 1)) {
            ways[mask | 1 << v] += w;
        }
    }
    ways[(1 << k) - 1]
}
