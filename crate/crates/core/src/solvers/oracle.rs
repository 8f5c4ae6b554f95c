//! Brute-force reference for the Hamilton searches: enumerate every
//! directed Hamilton cycle (or path) of the union and count the edge↔color
//! bijections of each by a permanent.

use std::time::Instant;

use super::{SearchStats, SolveOutcome, SolveStatus};
use crate::error::{Error, Result};
use crate::matching::{count_perfect_matchings, max_matching};
use crate::model::{DigraphCollection, RainbowCertificate};

/// Largest `n` the oracle accepts by default.
pub const DEFAULT_ORACLE_BOUND: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Existence and the first witness in lexicographic vertex order.
    pub outcome: SolveOutcome,
    /// Number of (cycle, bijection) pairs.
    pub count: u64,
    /// Number of directed Hamilton cycles (or paths) of the union.
    pub hamilton_count: u64,
}

impl OracleResult {
    pub fn exists(&self) -> bool {
        self.outcome.found()
    }
}

pub fn oracle_transversal_hamilton_cycle(dc: &DigraphCollection) -> Result<OracleResult> {
    oracle_transversal_hamilton_cycle_bounded(dc, DEFAULT_ORACLE_BOUND)
}

/// Cycles are enumerated as orders of `1..n` behind the fixed vertex 0,
/// which visits every directed cycle exactly once.
pub fn oracle_transversal_hamilton_cycle_bounded(dc: &DigraphCollection, bound: usize) -> Result<OracleResult> {
    let n = dc.n();
    if dc.m() != n {
        return Err(Error::Shape(format!("cycle oracle needs m = n, got m = {} and n = {n}", dc.m())));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a Hamilton cycle needs n ≥ 2, got {n}")));
    }
    if n > bound {
        return Err(Error::Budget(format!("oracle bound is n ≤ {bound}, got n = {n}")));
    }
    Ok(enumerate(dc, true, &[0]))
}

/// Path analogue with `m = n − 1`; every start vertex is tried.
pub fn oracle_transversal_hamilton_path(dc: &DigraphCollection, bound: usize) -> Result<OracleResult> {
    let n = dc.n();
    if dc.m() + 1 != n {
        return Err(Error::Shape(format!("path oracle needs m = n − 1, got m = {} and n = {n}", dc.m())));
    }
    if n > bound {
        return Err(Error::Budget(format!("oracle bound is n ≤ {bound}, got n = {n}")));
    }
    let starts: Vec<usize> = (0..n).collect();
    Ok(enumerate(dc, false, &starts))
}

struct Enumeration<'a> {
    dc: &'a DigraphCollection,
    closed: bool,
    order: Vec<usize>,
    count: u64,
    hamilton: u64,
    nodes: u64,
    witness: Option<RainbowCertificate>,
}

fn enumerate(dc: &DigraphCollection, closed: bool, starts: &[usize]) -> OracleResult {
    let t0 = Instant::now();
    let mut e = Enumeration {
        dc,
        closed,
        order: Vec::with_capacity(dc.n()),
        count: 0,
        hamilton: 0,
        nodes: 0,
        witness: None,
    };
    let union = dc.union(0..dc.m());
    for &s in starts {
        e.order.push(s);
        e.extend(&union, 1u64 << s);
        e.order.pop();
    }
    let status = if e.witness.is_some() { SolveStatus::Found } else { SolveStatus::None };
    OracleResult {
        outcome: SolveOutcome {
            status,
            certificate: e.witness.take(),
            stats: SearchStats { nodes: e.nodes, prunes: 0, wall_time: t0.elapsed(), exhausted: true },
        },
        count: e.count,
        hamilton_count: e.hamilton,
    }
}

impl Enumeration<'_> {
    fn extend(&mut self, union: &crate::model::Digraph, visited: u64) {
        self.nodes += 1;
        let n = self.dc.n();
        let last = *self.order.last().expect("nonempty order");
        if self.order.len() == n {
            if self.closed && !union.has_edge(last, self.order[0]) {
                return;
            }
            self.hamilton += 1;
            self.score();
            return;
        }
        for w in 0..n {
            if visited >> w & 1 == 0 && union.has_edge(last, w) {
                self.order.push(w);
                self.extend(union, visited | 1 << w);
                self.order.pop();
            }
        }
    }

    /// Counts the colorings of the current vertex order and keeps the first
    /// colorable order as the witness.
    fn score(&mut self) {
        let t = self.order.len();
        let edges: Vec<(usize, usize)> = if self.closed {
            (0..t).map(|k| (self.order[k], self.order[(k + 1) % t])).collect()
        } else {
            self.order.windows(2).map(|w| (w[0], w[1])).collect()
        };
        let adj: Vec<u64> = edges
            .iter()
            .map(|&(u, v)| {
                (0..self.dc.m())
                    .filter(|&c| self.dc.has_edge(c, u, v))
                    .fold(0u64, |acc, c| acc | 1 << c)
            })
            .collect();
        let ways = count_perfect_matchings(&adj);
        self.count += ways;
        if ways > 0 && self.witness.is_none() {
            let (_, assignment) = max_matching(&adj);
            let colors: Vec<usize> = assignment.into_iter().map(|c| c.expect("perfect matching")).collect();
            self.witness = Some(if self.closed {
                RainbowCertificate::from_cycle(&self.order, &colors)
            } else {
                RainbowCertificate::from_path(&self.order, &colors)
            });
        }
    }
}
