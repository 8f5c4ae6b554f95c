//! Search for a characteristic partition of a digraph.
//!
//! Small digraphs are searched exhaustively, part by part, pruning on every
//! degree clause whose two parts are already placed. Larger digraphs use a
//! seeded swap local search started from a niceness witness and from random
//! labelings.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::niceness::{is_eps_nice, NicenessMode, NicenessWitness};
use super::partition::{mask, CharacteristicPartition, ExtremalKind, Masks, Score, Template};
use crate::bitset::bits;
use crate::error::{invalid, Result};
use crate::model::Digraph;
use crate::numeric::{frac, int, Frac};
use crate::solvers::splitmix64;

/// Cap score and part masks of a verified partition.
type Fit = ((usize, usize), Vec<u64>);

pub const EXHAUSTIVE_MAX_N: usize = 12;
pub const DEFAULT_RESTARTS: usize = 8;
const MAX_PASSES: usize = 200;

pub fn default_zeta_grid() -> Vec<Frac> {
    [0.10, 0.15, 0.20, 0.25, 0.30, 0.35].into_iter().map(frac).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifyMethod {
    Exhaustive,
    Greedy { seed: u64, restarts: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Largest `n` searched exhaustively.
    pub exhaustive_max_n: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { seed: 0, restarts: DEFAULT_RESTARTS, exhaustive_max_n: EXHAUSTIVE_MAX_N }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    /// Best-fitting verified partition over all templates.
    pub partition: Option<CharacteristicPartition>,
    /// Every kind for which some verified partition was found.
    pub verified_kinds: Vec<ExtremalKind>,
    pub method: ClassifyMethod,
    /// True when a "none found" answer is a proof of absence.
    pub complete: bool,
    pub flags: Vec<String>,
}

impl Classification {
    pub fn kind(&self) -> Option<ExtremalKind> {
        self.partition.as_ref().map(|p| p.kind)
    }

    /// More than one template verified.
    pub fn overlap(&self) -> bool {
        self.verified_kinds.len() > 1
    }
}

pub fn classify_extremal(d: &Digraph, eps: Frac, zeta_grid: &[Frac]) -> Result<Classification> {
    classify_extremal_with(d, eps, zeta_grid, &ClassifyConfig::default())
}

pub fn classify_extremal_with(d: &Digraph, eps: Frac, zeta_grid: &[Frac], cfg: &ClassifyConfig) -> Result<Classification> {
    if eps <= int(0) || eps >= Frac::new(1, 4) {
        return invalid(format!("ε must lie in (0, 1/4), got {eps}"));
    }
    let n = d.n();
    let m = Masks::new(d)?;
    let mut flags = Vec::new();
    let low = crate::numeric::ceil_usize((Frac::new(1, 2) - eps * 2) * int(n));
    let below = (0..n).filter(|&v| m.out[v].count_ones().min(m.inn[v].count_ones()) < low as u32).count();
    if below > 0 {
        flags.push(format!("{below} vertices have semi-degree below (1/2-2eps)n"));
    }

    let mut templates = Vec::new();
    for kind in ExtremalKind::ALL {
        let zetas: Vec<Option<Frac>> = if kind == ExtremalKind::Ec3 {
            zeta_grid.iter().map(|&z| Some(z)).collect()
        } else {
            vec![None]
        };
        for z in zetas {
            if let Ok(t) = Template::new(kind, n, eps, z) {
                if t.sizes.iter().all(|&s| s > 0) {
                    templates.push(t);
                }
            }
        }
    }

    let exhaustive = n <= cfg.exhaustive_max_n;
    let witness = if exhaustive {
        None
    } else {
        let v = is_eps_nice(d, eps, NicenessMode::Sampled { seed: cfg.seed })?;
        if v.nice {
            flags.push("no niceness witness found; the digraph may be eps-nice".into());
        }
        v.witness
    };

    // Best verified parts per template, as (cap score, parts).
    let found: Vec<Option<Fit>> = templates
        .iter()
        .map(|t| {
            if exhaustive {
                exhaustive_search(&m, t)
            } else {
                greedy_search(&m, t, witness.as_ref(), cfg)
            }
        })
        .collect();

    // Across templates the best fit wins: smallest cap values, then template
    // order, then fewest vertices left in L.
    let mut verified_kinds: Vec<ExtremalKind> = Vec::new();
    let mut best: Option<(usize, (usize, ExtremalKind, usize, usize))> = None;
    for (i, f) in found.iter().enumerate() {
        let Some(((small, all), _)) = f else { continue };
        let kind = templates[i].kind;
        if !verified_kinds.contains(&kind) {
            verified_kinds.push(kind);
        }
        let key = (*small, kind, n - templates[i].sizes.iter().sum::<usize>(), *all);
        if best.is_none_or(|(_, b)| key < b) {
            best = Some((i, key));
        }
    }
    if verified_kinds.len() > 1 {
        flags.push(format!("several templates verify: {verified_kinds:?}"));
    }
    if best.is_none() && !exhaustive {
        flags.push("heuristic search found no partition; absence is not proven".into());
    }
    let partition = match best {
        Some((i, _)) => {
            let t = &templates[i];
            let parts = found[i].as_ref().map(|(_, p)| p.clone()).unwrap_or_default();
            let parts = parts.iter().map(|&w| bits(w).collect()).collect();
            Some(CharacteristicPartition::new(t.kind, n, parts, eps, t.zeta)?)
        }
        None => None,
    };
    Ok(Classification {
        partition,
        verified_kinds,
        method: if exhaustive {
            ClassifyMethod::Exhaustive
        } else {
            ClassifyMethod::Greedy { seed: cfg.seed, restarts: cfg.restarts }
        },
        complete: exhaustive,
        flags,
    })
}

/// Minimum-cap-score verified parts, enumerating every labeling up to the
/// template symmetry (`A ↔ B`, or rotating the EC3 parts by two).
fn exhaustive_search(m: &Masks, t: &Template) -> Option<((usize, usize), Vec<u64>)> {
    let mut best: Option<((usize, usize), Vec<u64>)> = None;
    let mut parts = vec![0u64; t.sizes.len()];
    let full = if m.n == 64 { u64::MAX } else { (1u64 << m.n) - 1 };
    place(m, t, 0, full, &mut parts, &mut best);
    best
}

fn place(m: &Masks, t: &Template, i: usize, free: u64, parts: &mut Vec<u64>, best: &mut Option<((usize, usize), Vec<u64>)>) {
    if i == parts.len() {
        if t.caps.iter().all(|c| c.value(m, parts) <= t.th.cap) {
            let s = t.cap_score(m, parts);
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                *best = Some((s, parts.clone()));
            }
        }
        return;
    }
    let free_list: Vec<usize> = bits(free).collect();
    let k = t.sizes[i];
    // Symmetry: the part paired with part 0 must not contain the smallest vertex of both.
    let partner = if parts.len() == 2 { 1 } else { 2 };
    let mut idx: Vec<usize> = Vec::with_capacity(k);
    subsets(free_list.len(), k, &mut idx, &mut |idx| {
        let set = idx.iter().fold(0u64, |s, &j| s | 1 << free_list[j]);
        if i == partner && set.trailing_zeros() < parts[0].trailing_zeros() {
            return;
        }
        parts[i] = set;
        if consistent(m, t, i, parts) {
            place(m, t, i + 1, free & !set, parts, best);
        }
        parts[i] = 0;
    });
}

/// Checks the degree clauses that only involve parts `0..=i`.
fn consistent(m: &Masks, t: &Template, i: usize, parts: &[u64]) -> bool {
    t.deg.iter().filter(|c| c.members.max(c.target) == i).all(|c| bits(parts[c.members]).all(|v| c.degree(m, parts, v) >= c.bound))
}

fn subsets(n: usize, k: usize, idx: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if idx.len() == k {
        f(idx);
        return;
    }
    let start = idx.last().map_or(0, |&l| l + 1);
    let need = k - idx.len();
    for j in start..=n.saturating_sub(need) {
        if n < need {
            break;
        }
        idx.push(j);
        subsets(n, k, idx, f);
        idx.pop();
    }
}

/// Seeded restarts of a first-improvement swap search; the best verified
/// result by cap score is kept.
fn greedy_search(m: &Masks, t: &Template, witness: Option<&NicenessWitness>, cfg: &ClassifyConfig) -> Option<((usize, usize), Vec<u64>)> {
    let mut starts: Vec<Vec<Vec<usize>>> = witness.map(|w| witness_inits(t.kind, w)).unwrap_or_default();
    for _ in 0..cfg.restarts {
        starts.push(Vec::new());
    }
    let total = t.total_checks();
    let results: Vec<Option<Fit>> = starts
        .into_par_iter()
        .enumerate()
        .map(|(r, init)| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ (r as u64).wrapping_mul(0x9e37_79b9)));
            let labels = fit_labels(m.n, &t.sizes, &init, &mut rng);
            let parts = hill_climb(m, t, labels, &mut rng);
            let score = t.score(m, &parts);
            (score.satisfied == total).then(|| (t.cap_score(m, &parts), parts))
        })
        .collect();
    results.into_iter().flatten().min_by_key(|(s, _)| *s)
}

/// Seed sets for each part, read off a low-density pair `(X, Y)` with few
/// edges from `X` to `Y`.
fn witness_inits(kind: ExtremalKind, w: &NicenessWitness) -> Vec<Vec<Vec<usize>>> {
    let (x, y) = (mask(&w.a), mask(&w.b));
    let list = |s: u64| bits(s).collect::<Vec<_>>();
    match kind {
        ExtremalKind::Ec1 => vec![vec![list(y), list(x & !y)], vec![list(x), list(y & !x)]],
        ExtremalKind::Ec2 => vec![vec![list(x | y), Vec::new()], vec![list(x & y), Vec::new()]],
        ExtremalKind::Ec3 => vec![vec![list(y & !x), list(x & y), list(x & !y), Vec::new()]],
    }
}

/// Labels with the exact part sizes: seeds first, then random fill; the
/// label `sizes.len()` stands for `L`.
fn fit_labels(n: usize, sizes: &[usize], init: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let l = sizes.len();
    let mut labels = vec![l; n];
    let mut counts = vec![0; l];
    for (i, seeds) in init.iter().enumerate() {
        let mut seeds = seeds.clone();
        seeds.shuffle(rng);
        for v in seeds {
            if labels[v] == l && counts[i] < sizes[i] {
                labels[v] = i;
                counts[i] += 1;
            }
        }
    }
    let mut rest: Vec<usize> = (0..n).filter(|&v| labels[v] == l).collect();
    rest.shuffle(rng);
    let mut rest = rest.into_iter();
    for i in 0..l {
        while counts[i] < sizes[i] {
            let v = rest.next().expect("sizes fit in n");
            labels[v] = i;
            counts[i] += 1;
        }
    }
    labels
}

fn parts_of(labels: &[usize], l: usize) -> Vec<u64> {
    let mut parts = vec![0u64; l];
    for (v, &p) in labels.iter().enumerate() {
        if p < l {
            parts[p] |= 1 << v;
        }
    }
    parts
}

fn hill_climb(m: &Masks, t: &Template, mut labels: Vec<usize>, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let l = t.sizes.len();
    let mut parts = parts_of(&labels, l);
    let mut score: Score = t.score(m, &parts);
    let mut pairs: Vec<(usize, usize)> = (0..m.n).flat_map(|u| (u + 1..m.n).map(move |v| (u, v))).collect();
    for _ in 0..MAX_PASSES {
        pairs.shuffle(rng);
        let mut improved = false;
        for &(u, v) in &pairs {
            let (pu, pv) = (labels[u], labels[v]);
            if pu == pv {
                continue;
            }
            let mut trial = parts.clone();
            if pu < l {
                trial[pu] ^= 1 << u | 1 << v;
            }
            if pv < l {
                trial[pv] ^= 1 << u | 1 << v;
            }
            let s = t.score(m, &trial);
            if s > score {
                score = s;
                parts = trial;
                labels.swap(u, v);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::partition::{gen_extremal, partition_agreement, verify_partition};

    #[test]
    fn planted_ec1_small() {
        let (d, p) = gen_extremal(ExtremalKind::Ec1, 8, frac(0.1), None, 0.0, 2).unwrap();
        let c = classify_extremal(&d, frac(0.1), &default_zeta_grid()).unwrap();
        assert_eq!(c.kind(), Some(ExtremalKind::Ec1));
        assert!(c.complete);
        let q = c.partition.unwrap();
        assert!(verify_partition(&d, &q, frac(0.1), None).unwrap().passed());
        assert!(partition_agreement(&p, &q) >= 0.9);
    }

    #[test]
    fn planted_kinds_greedy() {
        let cases = [
            (ExtremalKind::Ec1, 20, None),
            (ExtremalKind::Ec2, 20, None),
            (ExtremalKind::Ec3, 20, Some(frac(0.15))),
        ];
        for (kind, n, zeta) in cases {
            let eps = if kind == ExtremalKind::Ec3 { frac(0.05) } else { frac(0.1) };
            let (d, p) = gen_extremal(kind, n, eps, zeta, 0.0, 9).unwrap();
            let c = classify_extremal(&d, eps, &default_zeta_grid()).unwrap();
            assert_eq!(c.kind(), Some(kind), "{kind}");
            assert!(partition_agreement(&p, c.partition.as_ref().unwrap()) >= 0.9, "{kind}");
        }
    }

    #[test]
    fn complete_digraph_has_none() {
        let c = classify_extremal(&Digraph::complete(10), frac(0.05), &default_zeta_grid()).unwrap();
        assert!(c.partition.is_none());
        assert!(c.complete);
    }

    #[test]
    fn edgeless_digraph_is_flagged() {
        let c = classify_extremal(&Digraph::empty(10), frac(0.1), &default_zeta_grid()).unwrap();
        assert!(c.partition.is_none());
        assert!(!c.flags.is_empty());
    }

    #[test]
    fn subset_enumeration_counts() {
        let mut count = 0;
        subsets(7, 3, &mut Vec::new(), &mut |_| count += 1);
        assert_eq!(count, 35);
    }
}
