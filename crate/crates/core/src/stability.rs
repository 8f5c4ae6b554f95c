//! Crossing partitions, cross graphs and stability of collections.
//!
//! Partition records are supplied by the caller; a color without a record is
//! treated as not extremal. Crossing is evaluated in a form that does not
//! depend on which part of a record is called `A` (or on the rotation of the
//! four EC3 parts), so it is symmetric in the two colors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::extremal::niceness::{bipartite_rows, min_pair_edges};
use crate::extremal::partition::mask;
use crate::extremal::{
    classify_extremal_with, is_eps_nice, is_eps_nice_bipartite, CharacteristicPartition, ClassifyConfig, ClauseCheck,
    ExtremalKind, NicenessMode, NicenessVerdict, PartitionReport,
};
use crate::model::{BipartiteCollection, BipartiteGraph, DigraphCollection};
use crate::numeric::{at_least, ceil_usize, floor_usize, half_minus, int, Frac};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossingClause {
    A1,
    A2,
    A3,
}

impl CrossingClause {
    pub fn index(self) -> usize {
        match self {
            CrossingClause::A1 => 0,
            CrossingClause::A2 => 1,
            CrossingClause::A3 => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingVerdict {
    pub crossing: bool,
    /// The clause that applies to the pair of kinds.
    pub clause: CrossingClause,
    /// Which alternative held for (A2)/(A3): 1 for `W¹, W³`, 2 for `W², W⁴`.
    /// Both are reported when both hold.
    pub disjuncts: Vec<u8>,
    /// Smallest symmetric difference in each alternative.
    pub min_differences: Vec<usize>,
    /// `⌈δn⌉`
    pub bound: usize,
}

fn sym_diff(x: u64, y: u64) -> usize {
    (x ^ y).count_ones() as usize
}

fn w_masks(p: &CharacteristicPartition) -> [u64; 4] {
    [1, 2, 3, 4].map(|j| mask(&p.w(j)))
}

fn ab_masks(p: &CharacteristicPartition) -> [u64; 2] {
    [mask(p.a()), mask(p.b())]
}

fn min_over(xs: &[u64], ys: &[u64]) -> usize {
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| sym_diff(x, y))).min().unwrap_or(0)
}

/// δ-crossing of two extremal records on the same `n` vertices.
///
/// (A1) every `X_i Δ Y_j` with `X, Y ∈ {A, B}` has size at least δn.
/// (A2) the same over `W¹, W³` of both records, or over `W², W⁴`.
/// (A3) the same between `{A, B}` of the EC1/EC2 record and `W¹, W³`, or `W², W⁴`, of the EC3 record.
pub fn is_crossing(ri: &CharacteristicPartition, rj: &CharacteristicPartition, delta: Frac, n: usize) -> CrossingVerdict {
    let bound = ceil_usize(delta * int(n));
    let ec3 = |p: &CharacteristicPartition| p.kind == ExtremalKind::Ec3;
    let (clause, alternatives): (CrossingClause, Vec<usize>) = match (ec3(ri), ec3(rj)) {
        (false, false) => (CrossingClause::A1, vec![min_over(&ab_masks(ri), &ab_masks(rj))]),
        (true, true) => {
            let (wi, wj) = (w_masks(ri), w_masks(rj));
            let odd = min_over(&[wi[0], wi[2]], &[wj[0], wj[2]]);
            let even = min_over(&[wi[1], wi[3]], &[wj[1], wj[3]]);
            (CrossingClause::A2, vec![odd, even])
        }
        (x, _) => {
            let (ab, w) = if x { (ab_masks(rj), w_masks(ri)) } else { (ab_masks(ri), w_masks(rj)) };
            let odd = min_over(&ab, &[w[0], w[2]]);
            let even = min_over(&ab, &[w[1], w[3]]);
            (CrossingClause::A3, vec![odd, even])
        }
    };
    let disjuncts: Vec<u8> = alternatives
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= bound)
        .map(|(i, _)| i as u8 + 1)
        .collect();
    CrossingVerdict { crossing: !disjuncts.is_empty(), clause, disjuncts, min_differences: alternatives, bound }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionCheck {
    pub sets: String,
    pub size: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservationReport {
    /// The pair is δ-crossing, so the intersections are expected to be large.
    pub applicable: bool,
    /// `ε ≤ δ/8`, the regime where the bound is guaranteed.
    pub eps_small: bool,
    /// δn/4
    pub bound: Frac,
    pub checks: Vec<IntersectionCheck>,
}

impl ObservationReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Sizes of the intersections that a crossing pair forces to be at least δn/4.
pub fn observation_check(
    ri: &CharacteristicPartition,
    rj: &CharacteristicPartition,
    eps: Frac,
    delta: Frac,
    n: usize,
) -> ObservationReport {
    let v = is_crossing(ri, rj, delta, n);
    let bound = delta * int(n) / 4;
    let mut checks = Vec::new();
    let mut push = |sets: String, x: u64, y: u64| {
        let size = (x & y).count_ones() as usize;
        checks.push(IntersectionCheck { sets, size, ok: at_least(size, bound) });
    };
    let names = ["A", "B"];
    match v.clause {
        CrossingClause::A1 => {
            let (a, b) = (ab_masks(ri), ab_masks(rj));
            for (x, &mx) in a.iter().enumerate() {
                for (y, &my) in b.iter().enumerate() {
                    push(format!("{}_i ∩ {}_j", names[x], names[y]), mx, my);
                }
            }
        }
        CrossingClause::A2 => {
            let (wi, wj) = (w_masks(ri), w_masks(rj));
            for &d in &v.disjuncts {
                let idx = if d == 1 { [0, 2] } else { [1, 3] };
                for &x in &idx {
                    for &y in &idx {
                        push(format!("W{}_i ∩ W{}_j", x + 1, y + 1), wi[x], wj[y]);
                    }
                }
            }
        }
        CrossingClause::A3 => {
            let (ab, w) = if ri.kind == ExtremalKind::Ec3 { (ab_masks(rj), w_masks(ri)) } else { (ab_masks(ri), w_masks(rj)) };
            for &d in &v.disjuncts {
                let idx = if d == 1 { [0, 2] } else { [1, 3] };
                for (x, &mx) in ab.iter().enumerate() {
                    for &y in &idx {
                        push(format!("{} ∩ W{}", names[x], y + 1), mx, w[y]);
                    }
                }
            }
        }
    }
    ObservationReport { applicable: v.crossing, eps_small: eps * 8 <= delta, bound, checks }
}

/// Vertices outside `L` of the record, or all of `V` without one.
pub fn good_vertices(n: usize, record: Option<&CharacteristicPartition>) -> Vec<usize> {
    match record {
        None => (0..n).collect(),
        Some(p) => {
            let l = mask(&p.leftover);
            (0..n).filter(|&v| l >> v & 1 == 0).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossGraph {
    pub n: usize,
    /// Edges `(i, j)`, `i < j`, per mode (A1), (A2), (A3).
    pub modes: [Vec<(usize, usize)>; 3],
    /// For (A2) and (A3): edges where alternative 1, respectively 2, holds.
    pub disjunct_counts: [[usize; 2]; 3],
}

impl CrossGraph {
    pub fn edge_count(&self, clause: CrossingClause) -> usize {
        self.modes[clause.index()].len()
    }
}

/// Cross graph per mode over the colors that have a record.
pub fn build_cross_graph(records: &[Option<CharacteristicPartition>], delta: Frac, n: usize) -> CrossGraph {
    let m = records.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .filter(|&i| records[i].is_some())
        .flat_map(|i| (i + 1..m).filter(|&j| records[j].is_some()).map(move |j| (i, j)))
        .collect();
    let verdicts: Vec<(usize, usize, CrossingVerdict)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ri, rj) = (records[i].as_ref().expect("filtered"), records[j].as_ref().expect("filtered"));
            (i, j, is_crossing(ri, rj, delta, n))
        })
        .collect();
    let mut modes: [Vec<(usize, usize)>; 3] = Default::default();
    let mut disjunct_counts = [[0; 2]; 3];
    for (i, j, v) in verdicts {
        if v.crossing {
            let k = v.clause.index();
            modes[k].push((i, j));
            for d in v.disjuncts {
                if v.clause != CrossingClause::A1 {
                    disjunct_counts[k][d as usize - 1] += 1;
                }
            }
        }
    }
    CrossGraph { n: m, modes, disjunct_counts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityParams {
    pub gamma: Frac,
    pub alpha: Frac,
    pub epsilon: Frac,
    pub delta: Frac,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub strongly_stable: bool,
    /// Modes `k` with `e(C_k) ≥ δn²`.
    pub weakly_stable_modes: Vec<CrossingClause>,
}

impl StabilityVerdict {
    pub fn weakly_stable(&self) -> bool {
        !self.weakly_stable_modes.is_empty()
    }

    pub fn stable(&self) -> bool {
        self.strongly_stable || self.weakly_stable()
    }

    pub fn label(&self) -> &'static str {
        match (self.strongly_stable, self.weakly_stable()) {
            (true, _) => "strongly-stable",
            (false, true) => "weakly-stable",
            _ => "unstable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub params: StabilityParams,
    pub nice_colors: Vec<usize>,
    pub niceness: Vec<NicenessVerdict>,
    /// Records of the colors that are not α-nice; nice colors are dropped.
    pub extremal_records: Vec<Option<CharacteristicPartition>>,
    pub cross: CrossGraph,
    pub verdict: StabilityVerdict,
    pub flags: Vec<String>,
}

/// Strong stability from α-niceness counts, weak stability from the cross
/// graphs of the supplied records.
pub fn classify_stability(
    dc: &DigraphCollection,
    params: StabilityParams,
    records: &[Option<CharacteristicPartition>],
    mode: NicenessMode,
) -> Result<StabilityReport> {
    let n = dc.n();
    if records.len() != dc.m() {
        return invalid(format!("{} records for {} colors", records.len(), dc.m()));
    }
    if records.iter().flatten().any(|r| r.n != n) {
        return invalid("a record lives on a different vertex set");
    }
    let niceness = dc
        .digraphs()
        .par_iter()
        .map(|d| is_eps_nice(d, params.alpha, mode))
        .collect::<Result<Vec<_>>>()?;
    assemble(n, params, niceness, records, |r| r.clone())
}

fn assemble<R: Clone>(
    n: usize,
    params: StabilityParams,
    niceness: Vec<NicenessVerdict>,
    records: &[Option<R>],
    to_partition: impl Fn(&R) -> CharacteristicPartition,
) -> Result<StabilityReport> {
    let mut flags = Vec::new();
    let nice_colors: Vec<usize> = (0..niceness.len()).filter(|&c| niceness[c].nice).collect();
    let uncertain = niceness.iter().filter(|v| v.nice && !v.certified).count();
    if uncertain > 0 {
        flags.push(format!("{uncertain} colors counted nice without certification (sampled)"));
    }
    let mut kept = Vec::with_capacity(records.len());
    let mut dropped = 0;
    let mut missing = 0;
    for (c, r) in records.iter().enumerate() {
        match (niceness[c].nice, r) {
            (true, Some(_)) => {
                dropped += 1;
                kept.push(None);
            }
            (false, None) => {
                missing += 1;
                kept.push(None);
            }
            (_, r) => kept.push(r.as_ref().map(&to_partition)),
        }
    }
    if dropped > 0 {
        flags.push(format!("{dropped} records ignored on nice colors"));
    }
    if missing > 0 {
        flags.push(format!("{missing} non-nice colors have no record"));
    }
    let cross = build_cross_graph(&kept, params.delta, n);
    let strongly_stable = at_least(nice_colors.len(), params.gamma * int(n));
    let big = params.delta * int(n * n);
    let weakly_stable_modes = [CrossingClause::A1, CrossingClause::A2, CrossingClause::A3]
        .into_iter()
        .filter(|&k| at_least(cross.edge_count(k), big))
        .collect();
    Ok(StabilityReport {
        params,
        nice_colors,
        niceness,
        extremal_records: kept,
        cross,
        verdict: StabilityVerdict { strongly_stable, weakly_stable_modes },
        flags,
    })
}

/// Records for every color that is not ε-nice, from the partition search.
pub fn records_from_classifier(
    dc: &DigraphCollection,
    eps: Frac,
    zeta_grid: &[Frac],
    mode: NicenessMode,
    cfg: &ClassifyConfig,
) -> Result<Vec<Option<CharacteristicPartition>>> {
    dc.digraphs()
        .par_iter()
        .map(|d| {
            if is_eps_nice(d, eps, mode)?.nice {
                Ok(None)
            } else {
                Ok(classify_extremal_with(d, eps, zeta_grid, cfg)?.partition)
            }
        })
        .collect()
}

/// Minimizes `Σ_c e_{G_c}(A, B)` over `A ⊆ V₁`, `B ⊆ V₂` of size `⌊n/2⌋`;
/// nice when the minimum is at least μn³.
pub fn collection_mu_nice(bc: &BipartiteCollection, mu: Frac, mode: NicenessMode) -> Result<NicenessVerdict> {
    if mu <= int(0) {
        return invalid(format!("μ must be positive, got {mu}"));
    }
    let n = bc.n();
    let rows = bc.graphs().iter().map(bipartite_rows).collect::<Result<Vec<_>>>()?;
    let layers: Vec<&[u64]> = rows.iter().map(Vec::as_slice).collect();
    min_pair_edges(&layers, n, n / 2, mu * int(n * n * n), mode)
}

/// Characteristic partition of an extremal balanced bipartite graph:
/// `A₁, B₁, C₁ ⊆ V₁` and `A₂, B₂, C₂ ⊆ V₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitePartition {
    pub n: usize,
    pub a1: Vec<usize>,
    pub b1: Vec<usize>,
    pub c1: Vec<usize>,
    pub a2: Vec<usize>,
    pub b2: Vec<usize>,
    pub c2: Vec<usize>,
}

impl BipartitePartition {
    fn side(&self, i: usize) -> [&[usize]; 3] {
        if i == 1 {
            [&self.a1, &self.b1, &self.c1]
        } else {
            [&self.a2, &self.b2, &self.c2]
        }
    }

    /// As a two-part record on `V₁`, for crossing: `A = A₁`, `B = B₁`, `L = C₁`.
    pub fn side_one(&self, eps: Frac) -> CharacteristicPartition {
        CharacteristicPartition::new(ExtremalKind::Ec1, self.n, vec![self.a1.clone(), self.b1.clone()], eps, None)
            .expect("side one is a partition of V₁")
    }
}

/// Sizes `|A_i| = |B_i| = ⌈(1/2 − ε)n⌉`, degrees `d(v, X_i) ≥ (1/2 − 2ε)n` for
/// `v ∈ X_{3−i}`, and `e(A₁, B₂) ≤ εn²` or `e(A₂, B₁) ≤ εn²`.
pub fn verify_bipartite_partition(g: &BipartiteGraph, p: &BipartitePartition, eps: Frac) -> Result<PartitionReport> {
    let n = g.n();
    if p.n != n {
        return invalid(format!("record is on {} vertices per side, graph on {n}", p.n));
    }
    for i in [1, 2] {
        let mut all: Vec<usize> = p.side(i).iter().flat_map(|s| s.iter().copied()).collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return invalid(format!("A{i}, B{i}, C{i} do not partition V{i}"));
        }
    }
    let k = half_minus(n, eps);
    let pair = ceil_usize((Frac::new(1, 2) - eps * 2) * int(n));
    let cap = floor_usize(eps * int(n * n));
    let mut checks = Vec::new();
    let sizes_ok = [1, 2].iter().all(|&i| p.side(i)[0].len() == k && p.side(i)[1].len() == k);
    checks.push(ClauseCheck {
        clause: "|A_i| = |B_i| = ceil((1/2-eps)n)".into(),
        passed: sizes_ok,
        violators: Vec::new(),
        detail: format!("expected {k}"),
    });
    let left = |v: usize| g.left_neighbors(v).word();
    let right = |v: usize| g.right_neighbors(v).word();
    for (x, name) in [(0, "A"), (1, "B")] {
        for i in [1, 2] {
            let target = mask(p.side(i)[x]);
            let members = p.side(3 - i)[x];
            let deg = |v: usize| ((if i == 2 { left(v) } else { right(v) }) & target).count_ones() as usize;
            let violators: Vec<usize> = members.iter().copied().filter(|&v| deg(v) < pair).collect();
            checks.push(ClauseCheck {
                clause: format!("d(v,{name}{i}) ≥ (1/2−2ε)n for v ∈ {name}{}", 3 - i),
                passed: violators.is_empty(),
                detail: format!("bound {pair}"),
                violators,
            });
        }
    }
    let e = |l: &[usize], r: &[usize]| -> usize {
        let rm = mask(r);
        l.iter().map(|&v| (left(v) & rm).count_ones() as usize).sum()
    };
    let values = [e(&p.a1, &p.b2), e(&p.b1, &p.a2)];
    checks.push(ClauseCheck {
        clause: "e(A1,B2) ≤ εn² or e(A2,B1) ≤ εn²".into(),
        passed: values.iter().any(|&v| v <= cap),
        violators: Vec::new(),
        detail: format!("edge counts {values:?}, cap {cap}"),
    });
    Ok(PartitionReport { kind: ExtremalKind::Ec1, checks })
}

/// `|A₁ⁱ Δ X| ≥ δn` for both `X ∈ {A₁ʲ, B₁ʲ}`, evaluated over both labelings
/// of record `i` so the relation is symmetric.
pub fn is_crossing_bipartite(ri: &BipartitePartition, rj: &BipartitePartition, delta: Frac) -> bool {
    let bound = ceil_usize(delta * int(ri.n));
    let xs = [mask(&ri.a1), mask(&ri.b1)];
    let ys = [mask(&rj.a1), mask(&rj.b1)];
    min_over(&xs, &ys) >= bound
}

/// Stability of a balanced bipartite collection; the single cross graph is
/// reported as mode (A1).
pub fn classify_stability_bipartite(
    bc: &BipartiteCollection,
    params: StabilityParams,
    records: &[Option<BipartitePartition>],
    mode: NicenessMode,
) -> Result<StabilityReport> {
    let n = bc.n();
    if records.len() != bc.m() {
        return invalid(format!("{} records for {} colors", records.len(), bc.m()));
    }
    let niceness = bc
        .graphs()
        .par_iter()
        .map(|g| is_eps_nice_bipartite(g, params.alpha, mode))
        .collect::<Result<Vec<_>>>()?;
    let eps = params.epsilon;
    assemble(n, params, niceness, records, |r| r.side_one(eps))
}

/// Vertices of `V₂` that are good for color `i`: outside `C₂` of the record
/// when there is one, otherwise those of degree at least `(1/2 − ε³)n`.
pub fn good_vertices_bipartite(g: &BipartiteGraph, record: Option<&BipartitePartition>, eps: Frac) -> Vec<usize> {
    let n = g.n();
    match record {
        Some(p) => {
            let c = mask(&p.c2);
            (0..n).filter(|&v| c >> v & 1 == 0).collect()
        }
        None => {
            let bound = (Frac::new(1, 2) - eps * eps * eps) * int(n);
            (0..n).filter(|&v| at_least(g.right_degree(v), bound)).collect()
        }
    }
}
