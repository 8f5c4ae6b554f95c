//! ε-niceness: every pair of large vertex sets spans many edges.
//!
//! For a fixed `B`, the `A` of size `k` minimizing `e(A, B)` is made of the
//! `k` vertices with the fewest neighbors in `B`, so the exact minimum only
//! enumerates `B`. Enlarging either set never lowers `e(A, B)`, hence sets
//! of size exactly `k = ⌈(1/2 − ε)n⌉` suffice.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::bits;
use crate::error::{invalid, Error, Result};
use crate::model::{BipartiteGraph, Digraph};
use crate::numeric::{half_minus, int, Frac};

/// Exact enumeration is refused when `C(n, k)²` exceeds this.
pub const EXACT_NICENESS_BUDGET: u128 = 200_000_000;
pub const SAMPLED_RESTARTS: usize = 64;
pub const SAMPLED_STEPS_PER_VERTEX: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NicenessMode {
    Exact,
    Sampled { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicenessWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicenessVerdict {
    pub nice: bool,
    /// Present exactly when `nice` is false; always spans fewer than `threshold` edges.
    pub witness: Option<NicenessWitness>,
    pub mode: NicenessMode,
    /// False for a sampled "nice", which only means no witness was found.
    pub certified: bool,
    /// Set size used for `A` and `B`.
    pub set_size: usize,
    /// Smallest `e(A, B)` seen: the true minimum in exact mode.
    pub min_edges: usize,
    /// Required edge count (εn² or μn³).
    pub threshold: Frac,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Whether `d` is ε-nice: `e(A, B) ≥ εn²` for all `A, B` of size at least `(1/2 − ε)n`.
pub fn is_eps_nice(d: &Digraph, eps: Frac, mode: NicenessMode) -> Result<NicenessVerdict> {
    check_eps(eps)?;
    let n = d.n();
    let rows = digraph_rows(d)?;
    let k = half_minus(n, eps);
    min_pair_edges(&[&rows], n, k, eps * int(n * n), mode)
}

/// Bipartite variant: `A ⊆ V₁`, `B ⊆ V₂`.
pub fn is_eps_nice_bipartite(g: &BipartiteGraph, eps: Frac, mode: NicenessMode) -> Result<NicenessVerdict> {
    check_eps(eps)?;
    let n = g.n();
    let rows = bipartite_rows(g)?;
    let k = half_minus(n, eps);
    min_pair_edges(&[&rows], n, k, eps * int(n * n), mode)
}

/// A bipartite graph is ε-extremal when it is not ε⁵-nice; the exponent is
/// left to the caller.
pub fn is_bipartite_extremal(g: &BipartiteGraph, eps: Frac, exponent: u32, mode: NicenessMode) -> Result<bool> {
    let e = (0..exponent).fold(int(1), |acc, _| acc * eps);
    Ok(!is_eps_nice_bipartite(g, e, mode)?.nice)
}

fn check_eps(eps: Frac) -> Result<()> {
    if eps <= int(0) || eps >= Frac::new(1, 2) {
        return invalid(format!("niceness needs 0 < ε < 1/2, got {eps}"));
    }
    Ok(())
}

pub(crate) fn digraph_rows(d: &Digraph) -> Result<Vec<u64>> {
    if d.n() > 64 {
        return invalid(format!("niceness supports at most 64 vertices, got {}", d.n()));
    }
    Ok((0..d.n()).map(|v| d.out_neighbors(v).word()).collect())
}

pub(crate) fn bipartite_rows(g: &BipartiteGraph) -> Result<Vec<u64>> {
    if g.n() > 64 {
        return invalid(format!("niceness supports at most 64 vertices per part, got {}", g.n()));
    }
    Ok((0..g.n()).map(|v| g.left_neighbors(v).word()).collect())
}

/// Minimizes `Σ_layers e(A, B)` over `|A| = |B| = k`; `layers[c][a]` is the
/// neighbor mask of `a` in layer `c`.
pub(crate) fn min_pair_edges(
    layers: &[&[u64]],
    n: usize,
    k: usize,
    threshold: Frac,
    mode: NicenessMode,
) -> Result<NicenessVerdict> {
    if k > n {
        return invalid(format!("set size {k} exceeds {n} vertices"));
    }
    let (edges, a_mask, b_mask, certified) = match mode {
        NicenessMode::Exact => {
            let c = binomial(n, k);
            if c.saturating_mul(c) > EXACT_NICENESS_BUDGET {
                return Err(Error::Budget(format!(
                    "exact niceness needs C({n},{k})² = {} set pairs, above {EXACT_NICENESS_BUDGET}",
                    c.saturating_mul(c)
                )));
            }
            let (e, a, b) = exact_min(layers, n, k);
            (e, a, b, true)
        }
        NicenessMode::Sampled { seed } => {
            let (e, a, b) = sampled_min(layers, n, k, threshold, seed);
            (e, a, b, false)
        }
    };
    let nice = int(edges) >= threshold;
    Ok(NicenessVerdict {
        nice,
        witness: (!nice).then(|| NicenessWitness {
            a: bits(a_mask).collect(),
            b: bits(b_mask).collect(),
            edges,
        }),
        mode,
        certified: certified || !nice,
        set_size: k,
        min_edges: edges,
        threshold,
    })
}

/// The `k` rows with the fewest neighbors in `b`, ties by index.
fn best_a(layers: &[&[u64]], n: usize, k: usize, b: u64) -> (usize, u64) {
    let mut counts: Vec<(u32, usize)> = (0..n)
        .map(|a| (layers.iter().map(|rows| (rows[a] & b).count_ones()).sum(), a))
        .collect();
    if k < n {
        counts.select_nth_unstable(k);
    }
    counts[..k].iter().fold((0, 0u64), |(e, m), &(c, a)| (e + c as usize, m | 1 << a))
}

fn exact_min(layers: &[&[u64]], n: usize, k: usize) -> (usize, u64, u64) {
    let mut best = (usize::MAX, 0, 0);
    for_each_subset(n, k, &mut |b| {
        let (e, a) = best_a(layers, n, k, b);
        if e < best.0 {
            best = (e, a, b);
        }
    });
    best
}

/// Calls `f` on every `k`-subset of `0..n` as a mask, in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(u64)) {
    fn rec(start: usize, n: usize, left: usize, mask: u64, f: &mut dyn FnMut(u64)) {
        if left == 0 {
            f(mask);
            return;
        }
        for v in start..=n - left {
            rec(v + 1, n, left - 1, mask | 1 << v, f);
        }
    }
    rec(0, n, k, 0, f);
}

/// Swap hill-descent on `B` with the exact best `A`, restarted from random
/// sets. Stops early once a set pair falls below the threshold.
fn sampled_min(layers: &[&[u64]], n: usize, k: usize, threshold: Frac, seed: u64) -> (usize, u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (usize::MAX, 0, 0);
    if k == 0 || k == n {
        let b = if k == 0 { 0 } else { mask_of(n) };
        let (e, a) = best_a(layers, n, k, b);
        return (e, a, b);
    }
    for _ in 0..SAMPLED_RESTARTS {
        let mut b = sample(&mut rng, n, k).iter().fold(0u64, |m, v| m | 1 << v);
        let (mut e, mut a) = best_a(layers, n, k, b);
        for _ in 0..SAMPLED_STEPS_PER_VERTEX * n {
            let inside: Vec<usize> = bits(b).collect();
            let outside: Vec<usize> = bits(mask_of(n) & !b).collect();
            let out = inside[rng.gen_range(0..inside.len())];
            let inn = outside[rng.gen_range(0..outside.len())];
            let nb = (b & !(1 << out)) | 1 << inn;
            let (ne, na) = best_a(layers, n, k, nb);
            if ne <= e {
                (b, e, a) = (nb, ne, na);
            }
        }
        if e < best.0 {
            best = (e, a, b);
        }
        if int(best.0) < threshold {
            break;
        }
    }
    best
}

fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::frac;

    fn two_cliques(k: usize) -> Digraph {
        let mut d = Digraph::empty(2 * k);
        for u in 0..2 * k {
            for v in 0..2 * k {
                if u != v && (u < k) == (v < k) {
                    d.add_edge(u, v).unwrap();
                }
            }
        }
        d
    }

    #[test]
    fn complete_digraph_is_nice() {
        let v = is_eps_nice(&Digraph::complete(10), frac(0.1), NicenessMode::Exact).unwrap();
        assert!(v.nice && v.certified);
        assert_eq!(v.set_size, 4);
        assert_eq!(v.min_edges, 12);
        assert!(v.witness.is_none());
    }

    #[test]
    fn two_cliques_are_not_nice() {
        let v = is_eps_nice(&two_cliques(5), frac(0.1), NicenessMode::Exact).unwrap();
        assert!(!v.nice);
        let w = v.witness.unwrap();
        assert_eq!(w.edges, 0);
        let first = w.a[0] < 5;
        assert!(w.a.iter().all(|&x| (x < 5) == first));
        assert!(w.b.iter().all(|&x| (x < 5) != first));
    }

    #[test]
    fn bipartite_digraph_is_not_nice() {
        let mut d = Digraph::empty(10);
        for u in 0..5 {
            for v in 5..10 {
                d.add_edge(u, v).unwrap();
                d.add_edge(v, u).unwrap();
            }
        }
        let v = is_eps_nice(&d, frac(0.1), NicenessMode::Exact).unwrap();
        assert!(!v.nice);
        assert_eq!(v.witness.unwrap().edges, 0);
    }

    #[test]
    fn sampled_finds_zero_witness() {
        let v = is_eps_nice(&two_cliques(8), frac(0.1), NicenessMode::Sampled { seed: 1 }).unwrap();
        assert!(!v.nice && v.certified);
        let v = is_eps_nice(&Digraph::complete(16), frac(0.1), NicenessMode::Sampled { seed: 1 }).unwrap();
        assert!(v.nice && !v.certified);
    }

    #[test]
    fn exact_refuses_large_instances() {
        let r = is_eps_nice(&Digraph::complete(30), frac(0.1), NicenessMode::Exact);
        assert!(matches!(r, Err(Error::Budget(_))));
    }

    #[test]
    fn eps_range() {
        assert!(is_eps_nice(&Digraph::complete(4), frac(0.5), NicenessMode::Exact).is_err());
        assert!(is_eps_nice(&Digraph::complete(4), int(0), NicenessMode::Exact).is_err());
    }

    #[test]
    fn bipartite_extremal_uses_exponent() {
        let g = BipartiteGraph::complete(6);
        assert!(!is_bipartite_extremal(&g, frac(0.4), 5, NicenessMode::Exact).unwrap());
        assert!(is_bipartite_extremal(&BipartiteGraph::empty(6), frac(0.4), 5, NicenessMode::Exact).unwrap());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 5), 792);
        assert_eq!(binomial(3, 4), 0);
        let mut count = 0;
        for_each_subset(6, 3, &mut |_| count += 1);
        assert_eq!(count, 20);
    }
}
