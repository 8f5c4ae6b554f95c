//! Transversal Hamilton cycles and paths by depth-first search.
//!
//! The search grows a path one `(vertex, color)` pair at a time from the
//! path head. Every node checks that each unvisited vertex can still be
//! entered (and, for cycles, left) through an unused color and that every
//! unused color still owns an edge among the remaining slots. From depth
//! `n − ⌈n/2⌉` on, it also requires perfect matchings between the open
//! edge slots and the unused colors, and between open tails and heads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{color_priority, Budget, SearchConfig, SolveOutcome, SolveStatus, MAX_SOLVER_N};
use crate::bitset::bits;
use crate::error::{Error, Result};
use crate::matching::saturates_left;
use crate::model::{DigraphCollection, RainbowCertificate};

/// Searches for a Hamilton cycle whose `n` edges carry the `n` colors
/// bijectively. Requires `m = n ≥ 2`.
pub fn find_transversal_hamilton_cycle(dc: &DigraphCollection, cfg: &SearchConfig) -> Result<SolveOutcome> {
    let n = dc.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a Hamilton cycle needs n ≥ 2, got {n}")));
    }
    if dc.m() != n {
        return Err(Error::Shape(format!("cycle search needs m = n, got m = {} and n = {n}", dc.m())));
    }
    check_size(n)?;
    let inst = Instance::new(dc, cfg.seed);
    let starts: Vec<usize> = if cfg.symmetry_break { vec![0] } else { (0..n).collect() };
    Ok(run(&inst, true, &starts, cfg))
}

/// Searches for a Hamilton path whose `n − 1` edges carry the `n − 1`
/// colors bijectively.
pub fn find_transversal_hamilton_path(dc: &DigraphCollection, cfg: &SearchConfig) -> Result<SolveOutcome> {
    let n = dc.n();
    if dc.m() + 1 != n {
        return Err(Error::Shape(format!(
            "path search needs m = n − 1, got m = {} and n = {n}",
            dc.m()
        )));
    }
    check_size(n)?;
    let inst = Instance::new(dc, cfg.seed);
    let starts: Vec<usize> = (0..n).collect();
    Ok(run(&inst, false, &starts, cfg))
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_SOLVER_N {
        return Err(Error::InvalidArgument(format!(
            "exact search supports at most {MAX_SOLVER_N} vertices, got {n}"
        )));
    }
    Ok(())
}

struct Instance {
    n: usize,
    /// `out[c][v]`: out-neighbors of `v` in color `c`.
    out: Vec<Vec<u64>>,
    inn: Vec<Vec<u64>>,
    all_vertices: u64,
    all_colors: u64,
    priority: Vec<u64>,
}

impl Instance {
    fn new(dc: &DigraphCollection, seed: u64) -> Self {
        let n = dc.n();
        let m = dc.m();
        let out = dc
            .digraphs()
            .iter()
            .map(|d| (0..n).map(|v| d.out_neighbors(v).word()).collect())
            .collect();
        let inn = dc
            .digraphs()
            .iter()
            .map(|d| (0..n).map(|v| d.in_neighbors(v).word()).collect())
            .collect();
        Instance {
            n,
            out,
            inn,
            all_vertices: low_bits(n),
            all_colors: low_bits(m),
            priority: color_priority(m, seed),
        }
    }
}

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

enum Step {
    Found,
    Exhausted,
    Aborted,
}

struct Search<'a> {
    inst: &'a Instance,
    closed: bool,
    start: usize,
    hall_depth: usize,
    path: Vec<usize>,
    colors: Vec<usize>,
    budget: Budget<'a>,
}

/// A candidate extension `head → vertex` in `color`, with its fail-first key.
#[derive(Clone, Copy)]
struct Candidate {
    key: (u32, u32, u64, usize),
    vertex: usize,
    color: usize,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, closed: bool, start: usize, budget: Budget<'a>) -> Self {
        let n = inst.n;
        Search {
            inst,
            closed,
            start,
            hall_depth: n - n.div_ceil(2),
            path: vec![start],
            colors: Vec::new(),
            budget,
        }
    }

    fn dfs(&mut self, head: usize, visited: u64, used: u64) -> Step {
        if !self.budget.tick() {
            return Step::Aborted;
        }
        let inst = self.inst;
        let unvisited = inst.all_vertices & !visited;
        let remaining = inst.all_colors & !used;
        if unvisited == 0 {
            if !self.closed {
                return Step::Found;
            }
            let closing = bits(remaining)
                .filter(|&c| inst.out[c][head] >> self.start & 1 == 1)
                .min_by_key(|&c| inst.priority[c]);
            return match closing {
                Some(c) => {
                    self.colors.push(c);
                    Step::Found
                }
                None => Step::Exhausted,
            };
        }
        let Some(candidates) = self.expand(head, unvisited, remaining) else {
            self.budget.prunes += 1;
            return Step::Exhausted;
        };
        for cand in candidates {
            self.path.push(cand.vertex);
            self.colors.push(cand.color);
            match self.dfs(cand.vertex, visited | 1 << cand.vertex, used | 1 << cand.color) {
                Step::Found => return Step::Found,
                Step::Aborted => return Step::Aborted,
                Step::Exhausted => {
                    self.path.pop();
                    self.colors.pop();
                }
            }
        }
        Step::Exhausted
    }

    /// Feasibility checks followed by the ordered list of extensions, or
    /// `None` when the node is pruned.
    fn expand(&self, head: usize, unvisited: u64, remaining: u64) -> Option<Vec<Candidate>> {
        let inst = self.inst;
        let tails = unvisited | 1 << head;
        let heads = if self.closed { unvisited | 1 << self.start } else { unvisited };

        let mut union_out = [0u64; 64];
        let mut union_in = [0u64; 64];
        for c in bits(remaining) {
            for v in bits(tails | heads) {
                union_out[v] |= inst.out[c][v];
                union_in[v] |= inst.inn[c][v];
            }
        }

        // Every unvisited vertex must still be enterable, and leavable on a cycle.
        let mut dead_ends = 0;
        for w in bits(unvisited) {
            let others = !(1u64 << w);
            if union_in[w] & tails & others == 0 {
                return None;
            }
            if union_out[w] & heads & others == 0 {
                if self.closed {
                    return None;
                }
                dead_ends += 1;
            }
        }
        if dead_ends > 1 {
            return None;
        }

        // Every unused color must keep an edge inside the open slots.
        let mut color_edges = [0u32; 64];
        for c in bits(remaining) {
            let count: u32 = bits(tails)
                .map(|t| (inst.out[c][t] & heads & !(1u64 << t)).count_ones())
                .sum();
            if count == 0 {
                return None;
            }
            color_edges[c] = count;
        }

        let depth = self.path.len() - 1;
        if depth >= self.hall_depth && !self.matchings_exist(head, unvisited, remaining, tails, heads, &union_out) {
            return None;
        }

        let mut candidates = Vec::new();
        for c in bits(remaining) {
            for w in bits(inst.out[c][head] & unvisited) {
                let after = unvisited & !(1u64 << w);
                let targets = if after == 0 && self.closed { 1u64 << self.start } else { after };
                let options = if after == 0 && !self.closed {
                    0
                } else {
                    (union_out[w] & targets).count_ones()
                };
                candidates.push(Candidate {
                    key: (options, color_edges[c], inst.priority[c], w),
                    vertex: w,
                    color: c,
                });
            }
        }
        candidates.sort_by_key(|c| c.key);
        Some(candidates)
    }

    fn matchings_exist(
        &self,
        head: usize,
        unvisited: u64,
        remaining: u64,
        tails: u64,
        heads: u64,
        union_out: &[u64; 64],
    ) -> bool {
        let inst = self.inst;
        let color_list: Vec<usize> = bits(remaining).collect();
        let to_color_mask = |pred: &dyn Fn(usize) -> bool| -> u64 {
            color_list
                .iter()
                .enumerate()
                .filter(|(_, &c)| pred(c))
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        };
        if self.closed {
            // Successor targets of a tail: the head may not close the cycle early.
            let succ_targets = |t: usize| -> u64 {
                if t == head {
                    unvisited
                } else {
                    heads & !(1u64 << t)
                }
            };
            let pred_sources = |x: usize| -> u64 {
                if x == self.start {
                    unvisited
                } else {
                    tails & !(1u64 << x)
                }
            };
            let tail_colors: Vec<u64> = bits(tails)
                .map(|t| to_color_mask(&|c| inst.out[c][t] & succ_targets(t) != 0))
                .collect();
            if !saturates_left(&tail_colors) {
                return false;
            }
            let head_colors: Vec<u64> = bits(heads)
                .map(|x| to_color_mask(&|c| inst.inn[c][x] & pred_sources(x) != 0))
                .collect();
            if !saturates_left(&head_colors) {
                return false;
            }
            let heads_list: Vec<usize> = bits(heads).collect();
            let successor: Vec<u64> = bits(tails)
                .map(|t| {
                    let mask = union_out[t] & succ_targets(t);
                    heads_list
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| mask >> x & 1 == 1)
                        .fold(0u64, |acc, (i, _)| acc | 1 << i)
                })
                .collect();
            saturates_left(&successor)
        } else {
            let head_colors: Vec<u64> = bits(unvisited)
                .map(|x| to_color_mask(&|c| inst.inn[c][x] & tails & !(1u64 << x) != 0))
                .collect();
            if !saturates_left(&head_colors) {
                return false;
            }
            let tails_list: Vec<usize> = bits(tails).collect();
            let predecessor: Vec<u64> = bits(unvisited)
                .map(|x| {
                    tails_list
                        .iter()
                        .enumerate()
                        .filter(|(_, &t)| t != x && inst_has_union_edge(inst, remaining, t, x))
                        .fold(0u64, |acc, (i, _)| acc | 1 << i)
                })
                .collect();
            saturates_left(&predecessor)
        }
    }

    fn certificate(&self) -> RainbowCertificate {
        if self.closed {
            RainbowCertificate::from_cycle(&self.path, &self.colors)
        } else {
            RainbowCertificate::from_path(&self.path, &self.colors)
        }
    }
}

fn inst_has_union_edge(inst: &Instance, remaining: u64, u: usize, v: usize) -> bool {
    bits(remaining).any(|c| inst.out[c][u] >> v & 1 == 1)
}

/// First-level branch: a start vertex and one extension from it.
struct RootBranch {
    start: usize,
    vertex: usize,
    color: usize,
}

fn run(inst: &Instance, closed: bool, starts: &[usize], cfg: &SearchConfig) -> SolveOutcome {
    let t0 = Instant::now();
    if cfg.parallel {
        return run_parallel(inst, closed, starts, cfg, t0);
    }
    let mut nodes = 0;
    let mut prunes = 0;
    for &s in starts {
        let mut search = Search::new(inst, closed, s, Budget::new(cfg).started_at(t0));
        search.budget.nodes = nodes;
        search.budget.prunes = prunes;
        let step = search.dfs(s, 1 << s, 0);
        nodes = search.budget.nodes;
        prunes = search.budget.prunes;
        match step {
            Step::Found => {
                let mut stats = search.budget.stats(false);
                stats.wall_time = t0.elapsed();
                return SolveOutcome {
                    status: SolveStatus::Found,
                    certificate: Some(search.certificate()),
                    stats,
                };
            }
            Step::Aborted => {
                let mut stats = search.budget.stats(false);
                stats.wall_time = t0.elapsed();
                return SolveOutcome { status: SolveStatus::Timeout, certificate: None, stats };
            }
            Step::Exhausted => {}
        }
    }
    SolveOutcome {
        status: SolveStatus::None,
        certificate: None,
        stats: super::SearchStats { nodes, prunes, wall_time: t0.elapsed(), exhausted: true },
    }
}

/// Splits the search over the first extension. The lowest-indexed
/// successful branch wins, which reproduces the sequential witness.
fn run_parallel(inst: &Instance, closed: bool, starts: &[usize], cfg: &SearchConfig, t0: Instant) -> SolveOutcome {
    let mut branches = Vec::new();
    let mut root_nodes = 0;
    let mut root_prunes = 0;
    for &s in starts {
        root_nodes += 1;
        let probe = Search::new(inst, closed, s, Budget::new(cfg));
        let unvisited = inst.all_vertices & !(1u64 << s);
        match probe.expand(s, unvisited, inst.all_colors) {
            Some(cands) => branches.extend(cands.into_iter().map(|c| RootBranch {
                start: s,
                vertex: c.vertex,
                color: c.color,
            })),
            None => root_prunes += 1,
        }
    }
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<(Step, Option<RainbowCertificate>, u64, u64)> = branches
        .par_iter()
        .enumerate()
        .map(|(index, b)| {
            let budget = Budget::new(cfg).started_at(t0).with_cancel(&best, index);
            if budget.cancelled() {
                return (Step::Aborted, None, 0, 0);
            }
            let mut search = Search::new(inst, closed, b.start, budget);
            search.path.push(b.vertex);
            search.colors.push(b.color);
            let step = search.dfs(b.vertex, 1 << b.start | 1 << b.vertex, 1 << b.color);
            let cert = match step {
                Step::Found => {
                    best.fetch_min(index, Ordering::Relaxed);
                    Some(search.certificate())
                }
                _ => None,
            };
            (step, cert, search.budget.nodes, search.budget.prunes)
        })
        .collect();
    let nodes = root_nodes + results.iter().map(|r| r.2).sum::<u64>();
    let prunes = root_prunes + results.iter().map(|r| r.3).sum::<u64>();
    let mut stats = super::SearchStats { nodes, prunes, wall_time: t0.elapsed(), exhausted: false };
    if let Some((_, cert, _, _)) = results.iter().find(|r| matches!(r.0, Step::Found)) {
        return SolveOutcome { status: SolveStatus::Found, certificate: cert.clone(), stats };
    }
    if results.iter().any(|r| matches!(r.0, Step::Aborted)) {
        return SolveOutcome { status: SolveStatus::Timeout, certificate: None, stats };
    }
    stats.exhausted = true;
    SolveOutcome { status: SolveStatus::None, certificate: None, stats }
}
