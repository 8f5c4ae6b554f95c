//! Transversal perfect matchings in bipartite collections and rainbow
//! cycle covers in digraph collections.
//!
//! The two searches are written independently so that their agreement on
//! `characteristic_bipartite` is a meaningful check.

use std::time::Instant;

use super::{color_priority, Budget, SearchConfig, SolveOutcome, SolveStatus, MAX_SOLVER_N};
use crate::bitset::bits;
use crate::error::{Error, Result};
use crate::matching::saturates_left;
use crate::model::{BipartiteCollection, CertificateKind, DigraphCollection, RainbowCertificate};

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn check_square(n: usize, m: usize, what: &str) -> Result<()> {
    if m != n {
        return Err(Error::Shape(format!("{what} needs m = n, got m = {m} and n = {n}")));
    }
    if n > MAX_SOLVER_N {
        return Err(Error::InvalidArgument(format!(
            "exact search supports at most {MAX_SOLVER_N} vertices, got {n}"
        )));
    }
    Ok(())
}

fn finish(step: Option<bool>, budget: &Budget, t0: Instant, cert: impl FnOnce() -> RainbowCertificate) -> SolveOutcome {
    let (status, certificate, exhausted) = match step {
        Some(true) => (SolveStatus::Found, Some(cert()), false),
        Some(false) => (SolveStatus::None, None, true),
        None => (SolveStatus::Timeout, None, false),
    };
    let mut stats = budget.stats(exhausted);
    stats.wall_time = t0.elapsed();
    SolveOutcome { status, certificate, stats }
}

/// Searches for `n` disjoint edges, one from each color, covering both parts.
/// The certificate has kind `matching` with edges `(left, right)`.
pub fn find_transversal_perfect_matching(bc: &BipartiteCollection, cfg: &SearchConfig) -> Result<SolveOutcome> {
    let n = bc.n();
    check_square(n, bc.m(), "transversal perfect matching")?;
    let t0 = Instant::now();
    let adj: Vec<Vec<u64>> = bc
        .graphs()
        .iter()
        .map(|g| (0..n).map(|u| g.left_neighbors(u).word()).collect())
        .collect();
    let mut s = PmSearch {
        adj,
        priority: color_priority(n, cfg.seed),
        budget: Budget::new(cfg).started_at(t0),
        chosen: Vec::with_capacity(n),
    };
    let step = s.dfs(low_bits(n), low_bits(n), low_bits(n));
    Ok(finish(step, &s.budget, t0, || {
        let mut chosen = s.chosen.clone();
        chosen.sort_unstable();
        RainbowCertificate {
            kind: CertificateKind::Matching,
            edges: chosen.iter().map(|&(u, v, _)| (u, v)).collect(),
            colors: chosen.iter().map(|&(_, _, c)| c).collect(),
        }
    }))
}

struct PmSearch<'a> {
    /// `adj[c][u]`: right neighbors of left vertex `u` in color `c`.
    adj: Vec<Vec<u64>>,
    priority: Vec<u64>,
    budget: Budget<'a>,
    chosen: Vec<(usize, usize, usize)>,
}

impl PmSearch<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` aborted.
    fn dfs(&mut self, free_left: u64, free_right: u64, free_colors: u64) -> Option<bool> {
        if !self.budget.tick() {
            return None;
        }
        if free_left == 0 {
            return Some(true);
        }
        // Options per free left vertex; pick the most constrained one.
        let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
        for u in bits(free_left) {
            let mut opts = Vec::new();
            for c in bits(free_colors) {
                for v in bits(self.adj[c][u] & free_right) {
                    opts.push((v, c));
                }
            }
            if opts.is_empty() {
                self.budget.prunes += 1;
                return Some(false);
            }
            if best.as_ref().is_none_or(|(_, b)| opts.len() < b.len()) {
                best = Some((u, opts));
            }
        }
        if !self.feasible(free_left, free_right, free_colors) {
            self.budget.prunes += 1;
            return Some(false);
        }
        let (u, mut opts) = best.expect("free_left nonempty");
        opts.sort_by_key(|&(v, c)| (self.priority[c], v));
        for (v, c) in opts {
            self.chosen.push((u, v, c));
            match self.dfs(free_left & !(1 << u), free_right & !(1 << v), free_colors & !(1 << c)) {
                Some(false) => {
                    self.chosen.pop();
                }
                other => return other,
            }
        }
        Some(false)
    }

    /// Left↔right, left↔color and right↔color matchings must all exist.
    fn feasible(&self, free_left: u64, free_right: u64, free_colors: u64) -> bool {
        let colors: Vec<usize> = bits(free_colors).collect();
        let mut lr = Vec::new();
        let mut lc = Vec::new();
        for u in bits(free_left) {
            let mut r = 0u64;
            let mut cm = 0u64;
            for (i, &c) in colors.iter().enumerate() {
                let e = self.adj[c][u] & free_right;
                r |= e;
                if e != 0 {
                    cm |= 1 << i;
                }
            }
            lr.push(r);
            lc.push(cm);
        }
        if !saturates_left(&lr) || !saturates_left(&lc) {
            return false;
        }
        let rc: Vec<u64> = bits(free_right)
            .map(|v| {
                colors.iter().enumerate().fold(0u64, |acc, (i, &c)| {
                    if bits(free_left).any(|u| self.adj[c][u] >> v & 1 == 1) {
                        acc | 1 << i
                    } else {
                        acc
                    }
                })
            })
            .collect();
        saturates_left(&rc)
    }
}

/// Searches for vertex-disjoint directed cycles spanning `V` whose `n`
/// edges use the `n` colors bijectively. Cycles are grown one at a time
/// from the smallest uncovered vertex.
pub fn rainbow_cycle_cover(dc: &DigraphCollection, cfg: &SearchConfig) -> Result<SolveOutcome> {
    let n = dc.n();
    check_square(n, dc.m(), "rainbow cycle cover")?;
    let t0 = Instant::now();
    let out: Vec<Vec<u64>> = dc
        .digraphs()
        .iter()
        .map(|d| (0..n).map(|v| d.out_neighbors(v).word()).collect())
        .collect();
    let inn: Vec<Vec<u64>> = dc
        .digraphs()
        .iter()
        .map(|d| (0..n).map(|v| d.in_neighbors(v).word()).collect())
        .collect();
    let mut s = CoverSearch {
        out,
        inn,
        priority: color_priority(n, cfg.seed),
        budget: Budget::new(cfg).started_at(t0),
        edges: Vec::with_capacity(n),
        colors: Vec::with_capacity(n),
    };
    let step = if n == 0 {
        Some(true)
    } else {
        s.dfs(0, 0, low_bits(n) & !1, low_bits(n))
    };
    Ok(finish(step, &s.budget, t0, || RainbowCertificate {
        kind: CertificateKind::CycleCover,
        edges: s.edges.clone(),
        colors: s.colors.clone(),
    }))
}

struct CoverSearch<'a> {
    out: Vec<Vec<u64>>,
    inn: Vec<Vec<u64>>,
    priority: Vec<u64>,
    budget: Budget<'a>,
    edges: Vec<(usize, usize)>,
    colors: Vec<usize>,
}

impl CoverSearch<'_> {
    /// The open cycle starts at `start` and currently ends at `head`.
    fn dfs(&mut self, start: usize, head: usize, unvisited: u64, free_colors: u64) -> Option<bool> {
        if !self.budget.tick() {
            return None;
        }
        let tails = unvisited | 1 << head;
        let heads = unvisited | 1 << start;
        if !self.feasible(unvisited, free_colors, tails, heads) {
            self.budget.prunes += 1;
            return Some(false);
        }
        let mut opts = Vec::new();
        for c in bits(free_colors) {
            for w in bits(self.out[c][head] & heads) {
                opts.push((w, c));
            }
        }
        // Closing moves last; then fewest onward options first.
        opts.sort_by_key(|&(w, c)| {
            let onward = if w == start {
                u32::MAX
            } else {
                bits(free_colors & !(1 << c))
                    .map(|d| (self.out[d][w] & (heads & !(1 << w))).count_ones())
                    .sum()
            };
            (onward, self.priority[c], w)
        });
        for (w, c) in opts {
            self.edges.push((head, w));
            self.colors.push(c);
            let colors = free_colors & !(1 << c);
            let step = if w == start {
                if unvisited == 0 {
                    Some(true)
                } else {
                    let next = unvisited.trailing_zeros() as usize;
                    self.dfs(next, next, unvisited & !(1 << next), colors)
                }
            } else {
                self.dfs(start, w, unvisited & !(1 << w), colors)
            };
            match step {
                Some(false) => {
                    self.edges.pop();
                    self.colors.pop();
                }
                other => return other,
            }
        }
        Some(false)
    }

    fn feasible(&self, unvisited: u64, free_colors: u64, tails: u64, heads: u64) -> bool {
        let colors: Vec<usize> = bits(free_colors).collect();
        let mut tail_colors = Vec::new();
        for t in bits(tails) {
            let mut cm = 0u64;
            for (i, &c) in colors.iter().enumerate() {
                if self.out[c][t] & heads != 0 {
                    cm |= 1 << i;
                }
            }
            tail_colors.push(cm);
        }
        for w in bits(unvisited) {
            let mut from = 0u64;
            for &c in &colors {
                from |= self.inn[c][w];
            }
            if from & tails == 0 {
                return false;
            }
        }
        saturates_left(&tail_colors)
    }
}
