//! Density and (ε, d)-regularity of bipartite slices of a digraph
//! collection, reduced collections over given partitions, and the auxiliary
//! 4-graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::bits;
use crate::error::{invalid, Error, Result};
use crate::extremal::binomial;
use crate::model::{Digraph, DigraphCollection};
use crate::numeric::{ceil_usize, int, to_f64, Frac};
use crate::solvers::splitmix64;

/// Exact mode refuses slices with more qualifying triples than this.
pub const EXACT_TRIPLE_BUDGET: u128 = 200_000_000;
pub const DEFAULT_SAMPLED_TRIALS: usize = 10_000;
/// Largest auxiliary 4-graph that is materialized.
pub const HYPEREDGE_BUDGET: usize = 10_000_000;

/// Edges of `dc` from `V₁` to `V₂` in the colors `𝒞`.
#[derive(Clone, Debug)]
pub struct CollectionSlice<'a> {
    dc: &'a DigraphCollection,
    v1: u64,
    v2: u64,
    colors: Vec<usize>,
}

fn mask_of(items: &[usize], n: usize, what: &str) -> Result<u64> {
    let mut m = 0u64;
    for &x in items {
        if x >= n {
            return invalid(format!("{what} vertex {x} is out of range"));
        }
        if m >> x & 1 == 1 {
            return invalid(format!("{what} repeats vertex {x}"));
        }
        m |= 1 << x;
    }
    Ok(m)
}

impl<'a> CollectionSlice<'a> {
    pub fn new(dc: &'a DigraphCollection, v1: &[usize], v2: &[usize], colors: &[usize]) -> Result<Self> {
        let n = dc.n();
        if n > 64 {
            return invalid("slices support at most 64 vertices");
        }
        let (m1, m2) = (mask_of(v1, n, "V₁")?, mask_of(v2, n, "V₂")?);
        if m1 == 0 || m2 == 0 || colors.is_empty() {
            return invalid("slice sets must be nonempty");
        }
        if m1 & m2 != 0 {
            return invalid("V₁ and V₂ must be disjoint");
        }
        let mut seen = vec![false; dc.m()];
        for &c in colors {
            if c >= dc.m() || std::mem::replace(&mut seen[c], true) {
                return invalid(format!("color {} is out of range or repeated", c + 1));
            }
        }
        Ok(CollectionSlice { dc, v1: m1, v2: m2, colors: colors.to_vec() })
    }

    pub fn v1(&self) -> Vec<usize> {
        bits(self.v1).collect()
    }

    pub fn v2(&self) -> Vec<usize> {
        bits(self.v2).collect()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    fn edges(&self, c: usize, a: u64, b: u64) -> usize {
        let d = self.dc.digraph(c);
        bits(a).map(|x| (d.out_neighbors(x).word() & b).count_ones() as usize).sum()
    }

    /// Density of the whole slice.
    pub fn global_density(&self) -> Frac {
        let total: usize = self.colors.iter().map(|&c| self.edges(c, self.v1, self.v2)).sum();
        Frac::new(total as i64, (self.colors.len() * self.v1.count_ones() as usize * self.v2.count_ones() as usize) as i64)
    }
}

/// `Σ_{c∈𝒞′} e_c(V₁′, V₂′) / (|𝒞′||V₁′||V₂′|)`.
pub fn slice_density(s: &CollectionSlice, v1: &[usize], v2: &[usize], colors: &[usize]) -> Result<Frac> {
    let n = s.dc.n();
    let (a, b) = (mask_of(v1, n, "V₁′")?, mask_of(v2, n, "V₂′")?);
    if a == 0 || b == 0 || colors.is_empty() {
        return invalid("density subsets must be nonempty");
    }
    if a & !s.v1 != 0 || b & !s.v2 != 0 {
        return invalid("density subsets must lie inside the slice");
    }
    let mut seen = std::collections::HashSet::new();
    for &c in colors {
        if !s.colors.contains(&c) || !seen.insert(c) {
            return invalid(format!("color {} is not in the slice or repeated", c + 1));
        }
    }
    let total: usize = colors.iter().map(|&c| s.edges(c, a, b)).sum();
    Ok(Frac::new(total as i64, (colors.len() * v1.len() * v2.len()) as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityMode {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

impl RegularityMode {
    pub fn sampled(seed: u64) -> Self {
        RegularityMode::Sampled { trials: DEFAULT_SAMPLED_TRIALS, seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityFailure {
    /// The whole slice is sparser than `d`.
    Density,
    /// A large triple deviates from the global density by at least ε.
    Deviation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityWitness {
    pub failure: RegularityFailure,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub colors: Vec<usize>,
    pub density: Frac,
    pub global_density: Frac,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub global_density: Frac,
    pub density_ok: bool,
    /// Present exactly when the slice is irregular.
    pub witness: Option<RegularityWitness>,
    pub triples_checked: u128,
    /// A regular verdict is certified only in exact mode.
    pub certified: bool,
}

fn check_params(eps: Frac, d: Frac) -> Result<()> {
    if eps <= int(0) || eps > int(1) {
        return invalid(format!("ε = {eps} must lie in (0, 1]"));
    }
    if d < int(0) || d > int(1) {
        return invalid(format!("d = {d} must lie in [0, 1]"));
    }
    Ok(())
}

fn min_size(eps: Frac, size: usize) -> usize {
    ceil_usize(eps * int(size)).max(1)
}

fn qualifying(size: usize, k: usize) -> u128 {
    (k..=size).map(|j| binomial(size, j)).fold(0u128, |a, b| a.saturating_add(b))
}

/// Number of triples with `|V₁′| ≥ ε|V₁|`, `|V₂′| ≥ ε|V₂|`, `|𝒞′| ≥ ε|𝒞|`.
pub fn qualifying_triples(s: &CollectionSlice, eps: Frac) -> u128 {
    let sizes = [s.v1.count_ones() as usize, s.v2.count_ones() as usize, s.colors.len()];
    sizes.iter().map(|&x| qualifying(x, min_size(eps, x))).fold(1u128, |a, b| a.saturating_mul(b))
}

fn deviates(sum: usize, count: usize, g: Frac, eps: Frac) -> bool {
    let dens = Frac::new(sum as i64, count as i64);
    dens - g >= eps || g - dens >= eps
}

/// Whether the slice is (ε, d)-regular. Irregular verdicts carry a witness.
pub fn check_regular_slice(s: &CollectionSlice, eps: Frac, d: Frac, mode: RegularityMode) -> Result<RegularityVerdict> {
    check_params(eps, d)?;
    let g = s.global_density();
    let density_ok = g >= d;
    if !density_ok {
        return Ok(RegularityVerdict {
            regular: false,
            global_density: g,
            density_ok,
            witness: Some(RegularityWitness {
                failure: RegularityFailure::Density,
                v1: s.v1(),
                v2: s.v2(),
                colors: s.colors.clone(),
                density: g,
                global_density: g,
            }),
            triples_checked: 0,
            certified: true,
        });
    }
    let (witness, checked) = match mode {
        RegularityMode::Exact => exact_search(s, eps, g)?,
        RegularityMode::Sampled { trials, seed } => sampled_search(s, eps, g, trials, seed),
    };
    Ok(RegularityVerdict {
        regular: witness.is_none(),
        global_density: g,
        density_ok,
        certified: witness.is_some() || mode == RegularityMode::Exact,
        witness,
        triples_checked: checked,
    })
}

fn submasks_at_least(mask: u64, k: usize) -> impl Iterator<Item = u64> {
    // Every nonempty submask, largest first.
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
    .filter(move |s| s.count_ones() as usize >= k && *s != 0)
}

/// Enumerates the side with more subsets exhaustively and reduces the other
/// side to its top-k and bottom-k vertices, which realize the extreme
/// densities for each size k.
fn exact_search(s: &CollectionSlice, eps: Frac, g: Frac) -> Result<(Option<RegularityWitness>, u128)> {
    let total = qualifying_triples(s, eps);
    if total > EXACT_TRIPLE_BUDGET {
        return Err(Error::Budget(format!("{total} qualifying triples exceed the exact budget of {EXACT_TRIPLE_BUDGET}")));
    }
    let nc = s.colors.len();
    let (k1, k2, kc) = (
        min_size(eps, s.v1.count_ones() as usize),
        min_size(eps, s.v2.count_ones() as usize),
        min_size(eps, nc),
    );
    // Reduce whichever side has more qualifying subsets.
    let reduce_v2 = qualifying(s.v2.count_ones() as usize, k2) >= qualifying(s.v1.count_ones() as usize, k1);
    let (outer, inner, k_out, k_in) = if reduce_v2 { (s.v1, s.v2, k1, k2) } else { (s.v2, s.v1, k2, k1) };
    let inner_list: Vec<usize> = bits(inner).collect();
    // adj[ci][w]: neighbors of inner vertex w on the outer side in color ci.
    let adj: Vec<Vec<u64>> = s
        .colors
        .iter()
        .map(|&c| {
            let d = s.dc.digraph(c);
            inner_list
                .iter()
                .map(|&w| if reduce_v2 { d.in_neighbors(w).word() & outer } else { d.out_neighbors(w).word() & outer })
                .collect()
        })
        .collect();
    let color_full = if nc == 64 { u64::MAX } else { (1u64 << nc) - 1 };
    for o in submasks_at_least(outer, k_out) {
        let per: Vec<Vec<usize>> = adj.iter().map(|row| row.iter().map(|&a| (a & o).count_ones() as usize).collect()).collect();
        let ko = o.count_ones() as usize;
        for cm in submasks_at_least(color_full, kc) {
            let mut cnt: Vec<(usize, usize)> = (0..inner_list.len())
                .map(|w| (bits(cm).map(|ci| per[ci][w]).sum(), inner_list[w]))
                .collect();
            cnt.sort_unstable();
            let kcm = cm.count_ones() as usize;
            let (mut lo, mut hi) = (0usize, 0usize);
            let len = cnt.len();
            for k in 1..=len {
                lo += cnt[k - 1].0;
                hi += cnt[len - k].0;
                if k < k_in {
                    continue;
                }
                let count = kcm * ko * k;
                let pick = if deviates(hi, count, g, eps) {
                    Some(&cnt[len - k..])
                } else if deviates(lo, count, g, eps) {
                    Some(&cnt[..k])
                } else {
                    None
                };
                if let Some(chosen) = pick {
                    let mut side_in: Vec<usize> = chosen.iter().map(|x| x.1).collect();
                    side_in.sort_unstable();
                    let side_out: Vec<usize> = bits(o).collect();
                    let colors: Vec<usize> = bits(cm).map(|ci| s.colors[ci]).collect();
                    let (v1, v2) = if reduce_v2 { (side_out, side_in) } else { (side_in, side_out) };
                    let density = slice_density(s, &v1, &v2, &colors)?;
                    return Ok((
                        Some(RegularityWitness { failure: RegularityFailure::Deviation, v1, v2, colors, density, global_density: g }),
                        total,
                    ));
                }
            }
        }
    }
    Ok((None, total))
}

fn sampled_search(s: &CollectionSlice, eps: Frac, g: Frac, trials: usize, seed: u64) -> (Option<RegularityWitness>, u128) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (v1, v2) = (s.v1(), s.v2());
    let draw = |rng: &mut ChaCha8Rng, items: &[usize]| -> Vec<usize> {
        let k = rng.gen_range(min_size(eps, items.len())..=items.len());
        let mut pick: Vec<usize> = items.choose_multiple(rng, k).copied().collect();
        pick.sort_unstable();
        pick
    };
    for t in 0..trials {
        let a = draw(&mut rng, &v1);
        let b = draw(&mut rng, &v2);
        let cs = draw(&mut rng, &s.colors);
        let density = slice_density(s, &a, &b, &cs).expect("sampled subsets lie in the slice");
        if density - g >= eps || g - density >= eps {
            let w = RegularityWitness { failure: RegularityFailure::Deviation, v1: a, v2: b, colors: cs, density, global_density: g };
            return (Some(w), t as u128 + 1);
        }
    }
    (None, trials as u128)
}

/// Recomputes a witness from scratch: sizes, density and the failed clause.
pub fn verify_witness(s: &CollectionSlice, eps: Frac, d: Frac, w: &RegularityWitness) -> Result<bool> {
    check_params(eps, d)?;
    let g = s.global_density();
    if g != w.global_density {
        return Ok(false);
    }
    match w.failure {
        RegularityFailure::Density => Ok(g < d),
        RegularityFailure::Deviation => {
            let sizes_ok = w.v1.len() >= min_size(eps, s.v1.count_ones() as usize)
                && w.v2.len() >= min_size(eps, s.v2.count_ones() as usize)
                && w.colors.len() >= min_size(eps, s.colors.len());
            let dens = slice_density(s, &w.v1, &w.v2, &w.colors)?;
            Ok(sizes_ok && dens == w.density && (dens - g >= eps || g - dens >= eps))
        }
    }
}

/// The raw collection is used in place of a cleaned one.
pub const REDUCED_DEVIATION: &str = "reduced collection built from the raw collection; no cleaning step applied";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedProvenance {
    pub vertex_parts: Vec<Vec<usize>>,
    pub color_parts: Vec<Vec<usize>>,
    pub epsilon: Frac,
    pub d: Frac,
    pub mode: RegularityMode,
    pub deviation: String,
    pub warnings: Vec<String>,
    /// Slices judged regular without exhaustive confirmation.
    pub uncertified_slices: usize,
}

#[derive(Clone, Debug)]
pub struct ReducedCollection {
    /// `R₁..R_M` on `[L]`.
    pub collection: DigraphCollection,
    pub provenance: ReducedProvenance,
}

impl ReducedCollection {
    pub fn l(&self) -> usize {
        self.collection.n()
    }

    pub fn m(&self) -> usize {
        self.collection.m()
    }
}

fn check_parts(parts: &[Vec<usize>], size: usize, what: &str, warnings: &mut Vec<String>) -> Result<()> {
    if parts.len() < 2 {
        return invalid(format!("{what} partition needs an exceptional part and at least one cluster"));
    }
    let mut seen = vec![false; size];
    for p in parts {
        for &x in p {
            if x >= size || std::mem::replace(&mut seen[x], true) {
                return invalid(format!("{what} partition repeats or exceeds element {x}"));
            }
        }
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return invalid(format!("{what} partition misses element {x}"));
    }
    if parts[1..].iter().any(|p| p.is_empty()) {
        return invalid(format!("{what} clusters must be nonempty"));
    }
    if parts[1..].iter().any(|p| p.len() != parts[1].len()) {
        warnings.push(format!("{what} clusters have unequal sizes"));
    }
    Ok(())
}

/// `h → i` is an edge of `R_j` iff the slice `V_h → V_i` in colors `𝒞_j` is
/// (ε, d)-regular. Part 0 of each partition is exceptional.
pub fn build_reduced(
    dc: &DigraphCollection,
    vertex_parts: &[Vec<usize>],
    color_parts: &[Vec<usize>],
    eps: Frac,
    d: Frac,
    mode: RegularityMode,
) -> Result<ReducedCollection> {
    check_params(eps, d)?;
    let mut warnings = Vec::new();
    check_parts(vertex_parts, dc.n(), "vertex", &mut warnings)?;
    check_parts(color_parts, dc.m(), "color", &mut warnings)?;
    let (l, mm) = (vertex_parts.len() - 1, color_parts.len() - 1);
    let jobs: Vec<(usize, usize, usize)> =
        (0..mm).flat_map(|j| (0..l).flat_map(move |h| (0..l).filter(move |&i| i != h).map(move |i| (h, i, j)))).collect();
    let verdicts: Vec<((usize, usize, usize), RegularityVerdict)> = jobs
        .par_iter()
        .map(|&(h, i, j)| {
            let s = CollectionSlice::new(dc, &vertex_parts[h + 1], &vertex_parts[i + 1], &color_parts[j + 1])?;
            let slice_mode = match mode {
                RegularityMode::Sampled { trials, seed } => {
                    let key = ((h * l + i) * mm + j) as u64;
                    RegularityMode::Sampled { trials, seed: splitmix64(seed ^ splitmix64(key)) }
                }
                RegularityMode::Exact => mode,
            };
            Ok(((h, i, j), check_regular_slice(&s, eps, d, slice_mode)?))
        })
        .collect::<Result<_>>()?;
    let mut rs = vec![Digraph::empty(l); mm];
    let mut uncertified = 0;
    for ((h, i, j), v) in verdicts {
        if v.regular {
            rs[j].add_edge(h, i)?;
            uncertified += usize::from(!v.certified);
        }
    }
    Ok(ReducedCollection {
        collection: DigraphCollection::new(rs)?,
        provenance: ReducedProvenance {
            vertex_parts: vertex_parts.to_vec(),
            color_parts: color_parts.to_vec(),
            epsilon: eps,
            d,
            mode,
            deviation: REDUCED_DEVIATION.into(),
            warnings,
            uncertified_slices: uncertified,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InheritanceReport {
    /// `(p + γ/2)L`.
    pub threshold: Frac,
    /// `1 − d^{1/4}`.
    pub target: f64,
    /// Per cluster `i`: colors `j` in which `i` has both semi-degrees above the threshold.
    pub colors_per_vertex: Vec<usize>,
    /// Per color cluster `j`: clusters `i` above the threshold in `R_j`.
    pub vertices_per_color: Vec<usize>,
    pub min_vertex_fraction: f64,
    pub min_color_fraction: f64,
}

/// Diagnostic comparison of reduced semi-degrees with the inheritance targets.
pub fn degree_inheritance_report(rc: &ReducedCollection, p: Frac, gamma: Frac) -> InheritanceReport {
    let (l, mm) = (rc.l(), rc.m());
    let threshold = (p + gamma / int(2)) * int(l);
    let ok = |j: usize, i: usize| {
        let r = rc.collection.digraph(j);
        int(r.out_degree(i)) >= threshold && int(r.in_degree(i)) >= threshold
    };
    let colors_per_vertex: Vec<usize> = (0..l).map(|i| (0..mm).filter(|&j| ok(j, i)).count()).collect();
    let vertices_per_color: Vec<usize> = (0..mm).map(|j| (0..l).filter(|&i| ok(j, i)).count()).collect();
    let min_frac = |v: &[usize], denom: usize| v.iter().map(|&x| x as f64 / denom as f64).fold(f64::INFINITY, f64::min);
    InheritanceReport {
        threshold,
        target: 1.0 - to_f64(rc.provenance.d).powf(0.25),
        min_vertex_fraction: min_frac(&colors_per_vertex, mm),
        min_color_fraction: min_frac(&vertices_per_color, l),
        colors_per_vertex,
        vertices_per_color,
    }
}

/// The 4-uniform hypergraph on `[n] ∪ 𝒞 ∪ S₁ ∪ S₂` with an edge
/// `{i, j, c, x}` for every edge `ij` of `D_c` and every `x` in `S₁` when
/// `i < j`, in `S₂` when `i > j`.
///
/// Vertex indices: `i` for `i ∈ [n]`, `n + c` for colors, then `S₁`, then `S₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuxiliaryFourGraph {
    pub n: usize,
    pub m: usize,
    pub edges: Vec<[usize; 4]>,
}

impl AuxiliaryFourGraph {
    pub fn vertex_count(&self) -> usize {
        3 * self.n + self.m
    }

    pub fn color_vertex(&self, c: usize) -> usize {
        self.n + c
    }

    pub fn s1(&self, x: usize) -> usize {
        self.n + self.m + x
    }

    pub fn s2(&self, x: usize) -> usize {
        2 * self.n + self.m + x
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for e in &self.edges {
            for &x in e {
                deg[x] += 1;
            }
        }
        deg
    }
}

pub fn build_auxiliary_4graph(dc: &DigraphCollection) -> Result<AuxiliaryFourGraph> {
    let (n, m) = (dc.n(), dc.m());
    let total: usize = dc.digraphs().iter().map(|d| d.edge_count()).sum::<usize>() * n;
    if total > HYPEREDGE_BUDGET {
        return Err(Error::Budget(format!("{total} hyperedges exceed the budget of {HYPEREDGE_BUDGET}")));
    }
    let mut h = AuxiliaryFourGraph { n, m, edges: Vec::with_capacity(total) };
    for (c, d) in dc.digraphs().iter().enumerate() {
        for (i, j) in d.edges() {
            for x in 0..n {
                let sx = if i < j { h.s1(x) } else { h.s2(x) };
                h.edges.push([i, j, h.color_vertex(c), sx]);
            }
        }
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeIdentities {
    pub edge_count_ok: bool,
    /// `deg(c) = n·e(D_c)` for every color.
    pub color_degrees_ok: bool,
    /// `deg(v) = n·Σ_c (d⁺_c(v) + d⁻_c(v))` for every vertex.
    pub vertex_degrees_ok: bool,
}

impl DegreeIdentities {
    pub fn holds(&self) -> bool {
        self.edge_count_ok && self.color_degrees_ok && self.vertex_degrees_ok
    }
}

pub fn degree_identities(dc: &DigraphCollection, h: &AuxiliaryFourGraph) -> DegreeIdentities {
    let n = dc.n();
    let deg = h.degrees();
    let edges: usize = dc.digraphs().iter().map(|d| d.edge_count()).sum();
    DegreeIdentities {
        edge_count_ok: h.edges.len() == n * edges,
        color_degrees_ok: dc.digraphs().iter().enumerate().all(|(c, d)| deg[h.color_vertex(c)] == n * d.edge_count()),
        vertex_degrees_ok: (0..n)
            .all(|v| deg[v] == n * dc.digraphs().iter().map(|d| d.out_degree(v) + d.in_degree(v)).sum::<usize>()),
    }
}
