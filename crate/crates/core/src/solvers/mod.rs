//! Exact search for transversal structures, each paired with a
//! brute-force oracle.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::model::RainbowCertificate;

mod cover;
mod hamilton;
mod kgraph;
mod oracle;
mod rainbow_matching;

pub use cover::{find_transversal_perfect_matching, rainbow_cycle_cover};
pub use hamilton::{find_transversal_hamilton_cycle, find_transversal_hamilton_path};
pub use kgraph::{
    greedy_rainbow_kgraph_matching, hypothesis_epsilon, verify_rainbow_kgraph_matching, KEdge,
    KGraphMatching, KGraphReport,
};
pub use oracle::{
    oracle_transversal_hamilton_cycle, oracle_transversal_hamilton_cycle_bounded, oracle_transversal_hamilton_path,
    OracleResult, DEFAULT_ORACLE_BOUND,
};
pub use rainbow_matching::{max_rainbow_matching, max_rainbow_matching_digraph, RainbowMatching};

/// Largest vertex count the bitset solvers accept.
pub const MAX_SOLVER_N: usize = 64;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub time_budget: Duration,
    pub node_budget: u64,
    /// Split the search over the root branches.
    pub parallel: bool,
    /// Perturbs tie-breaking between equally constrained branches.
    pub seed: u64,
    /// Anchor cycles at vertex 0.
    pub symmetry_break: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            time_budget: Duration::from_secs(60),
            node_budget: u64::MAX,
            parallel: false,
            seed: 0,
            symmetry_break: true,
        }
    }
}

impl SearchConfig {
    pub fn with_node_budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn with_time_budget(mut self, time: Duration) -> Self {
        self.time_budget = time;
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Found,
    /// The search tree was exhausted without a solution.
    None,
    /// A budget ran out first; nothing is claimed.
    Timeout,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub wall_time: Duration,
    /// Set only when every branch of the search tree was closed.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub certificate: Option<RainbowCertificate>,
    pub stats: SearchStats,
}

impl SolveOutcome {
    pub fn found(&self) -> bool {
        self.status == SolveStatus::Found
    }

    pub fn is_none(&self) -> bool {
        self.status == SolveStatus::None
    }
}

/// Node/time accounting shared by the searches.
pub(crate) struct Budget<'a> {
    start: Instant,
    time: Duration,
    node_limit: u64,
    pub nodes: u64,
    pub prunes: u64,
    pub exceeded: bool,
    /// Shared lowest index of a root branch that already succeeded.
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl<'a> Budget<'a> {
    pub fn new(cfg: &SearchConfig) -> Self {
        Budget {
            start: Instant::now(),
            time: cfg.time_budget,
            node_limit: cfg.node_budget,
            nodes: 0,
            prunes: 0,
            exceeded: false,
            cancel: None,
        }
    }

    pub fn started_at(mut self, start: Instant) -> Self {
        self.start = start;
        self
    }

    /// Stop once a root branch with index below `index` has succeeded.
    pub fn with_cancel(mut self, best: &'a AtomicUsize, index: usize) -> Self {
        self.cancel = Some((best, index));
        self
    }

    pub fn cancelled(&self) -> bool {
        self.cancel.is_some_and(|(best, index)| best.load(Ordering::Relaxed) < index)
    }

    /// Counts a node; false once the search must stop.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.exceeded {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.exceeded = true;
            return false;
        }
        if self.nodes & 0x3ff == 0 {
            if self.start.elapsed() > self.time {
                self.exceeded = true;
                return false;
            }
            if self.cancelled() {
                self.exceeded = true;
                return false;
            }
        }
        true
    }

    pub fn stats(&self, exhausted: bool) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            prunes: self.prunes,
            wall_time: self.start.elapsed(),
            exhausted,
        }
    }
}

/// Deterministic priority per color, derived from the seed. Seed 0 keeps
/// the natural order.
pub(crate) fn color_priority(m: usize, seed: u64) -> Vec<u64> {
    if seed == 0 {
        return (0..m as u64).collect();
    }
    (0..m as u64).map(|c| splitmix64(seed ^ c.wrapping_mul(0x9e37_79b9_7f4a_7c15))).collect()
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
