//! Characteristic partitions, their verification, and generators for the
//! extremal templates.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::bits;
use crate::error::{invalid, Result};
use crate::model::{Digraph, DigraphCollection};
use crate::numeric::{ceil_usize, floor_usize, half_minus, int, round_usize, Frac};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtremalKind {
    #[serde(rename = "EC1")]
    Ec1,
    #[serde(rename = "EC2")]
    Ec2,
    #[serde(rename = "EC3")]
    Ec3,
}

impl ExtremalKind {
    pub const ALL: [ExtremalKind; 3] = [ExtremalKind::Ec1, ExtremalKind::Ec2, ExtremalKind::Ec3];

    pub fn part_count(self) -> usize {
        match self {
            ExtremalKind::Ec3 => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for ExtremalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtremalKind::Ec1 => "EC1",
            ExtremalKind::Ec2 => "EC2",
            ExtremalKind::Ec3 => "EC3",
        })
    }
}

pub const ROUNDING_RULE: &str = "|A| = |B| = ceil((1/2-eps)n); |C1| = |C3| = round(zeta n), |C2| = |C4| = round((1/2-zeta-eps)n), halves away from zero";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionParams {
    pub epsilon: Frac,
    pub zeta: Option<Frac>,
    pub rounding: String,
}

/// `(A, B, L)` for EC1/EC2 or `(C¹, C², C³, C⁴, L)` for EC3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicPartition {
    pub kind: ExtremalKind,
    pub n: usize,
    /// `[A, B]` or `[C¹, C², C³, C⁴]`, each sorted.
    pub parts: Vec<Vec<usize>>,
    pub leftover: Vec<usize>,
    pub params: PartitionParams,
}

impl CharacteristicPartition {
    /// Builds a partition from its labeled parts; `L` is everything else.
    pub fn new(kind: ExtremalKind, n: usize, parts: Vec<Vec<usize>>, eps: Frac, zeta: Option<Frac>) -> Result<Self> {
        if parts.len() != kind.part_count() {
            return invalid(format!("{kind} needs {} parts, got {}", kind.part_count(), parts.len()));
        }
        let mut seen = vec![false; n];
        let mut parts = parts;
        for p in &mut parts {
            p.sort_unstable();
            for &v in p.iter() {
                if v >= n {
                    return invalid(format!("vertex {v} outside 0..{n}"));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return invalid(format!("vertex {v} lies in two parts"));
                }
            }
        }
        if kind == ExtremalKind::Ec3 && zeta.is_none() {
            return invalid("an EC3 partition needs ζ");
        }
        let leftover = (0..n).filter(|&v| !seen[v]).collect();
        Ok(CharacteristicPartition {
            kind,
            n,
            parts,
            leftover,
            params: PartitionParams {
                epsilon: eps,
                zeta: if kind == ExtremalKind::Ec3 { zeta } else { None },
                rounding: ROUNDING_RULE.to_string(),
            },
        })
    }

    pub fn a(&self) -> &[usize] {
        &self.parts[0]
    }

    pub fn b(&self) -> &[usize] {
        &self.parts[1]
    }

    /// `C^i` for `i ∈ 1..=4`.
    pub fn c(&self, i: usize) -> &[usize] {
        &self.parts[i - 1]
    }

    /// `W^j = C^j ∪ C^{j+1}`, indices taken cyclically.
    pub fn w(&self, j: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.c(j).iter().chain(self.c(j % 4 + 1)).copied().collect();
        s.sort_unstable();
        s
    }

    /// The same partition seen under the template symmetries: `A ↔ B`, or a
    /// rotation of the four EC3 parts by two.
    pub fn symmetric_image(&self) -> Self {
        let mut p = self.clone();
        if self.kind == ExtremalKind::Ec3 {
            p.parts.rotate_left(2);
        } else {
            p.parts.swap(0, 1);
        }
        p
    }

    /// Part index of every vertex, `None` for `L`.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let mut labels = vec![None; self.n];
        for (i, p) in self.parts.iter().enumerate() {
            for &v in p {
                labels[v] = Some(i);
            }
        }
        labels
    }

    pub(crate) fn masks(&self) -> Vec<u64> {
        self.parts.iter().map(|p| mask(p)).collect()
    }
}

pub(crate) fn mask(vs: &[usize]) -> u64 {
    vs.iter().fold(0u64, |m, &v| m | 1 << v)
}

/// Fraction of vertices placed in the same labeled part (or both in `L`),
/// maximized over the template symmetries.
pub fn partition_agreement(p: &CharacteristicPartition, q: &CharacteristicPartition) -> f64 {
    if p.kind != q.kind || p.n != q.n || p.n == 0 {
        return 0.0;
    }
    let lp = p.labels();
    let score = |r: &CharacteristicPartition| {
        let lr = r.labels();
        lp.iter().zip(&lr).filter(|(x, y)| x == y).count()
    };
    score(q).max(score(&q.symmetric_image())) as f64 / p.n as f64
}

/// Realized part sizes for a template.
pub fn template_sizes(kind: ExtremalKind, n: usize, eps: Frac, zeta: Option<Frac>) -> Result<Vec<usize>> {
    let sizes = match kind {
        ExtremalKind::Ec1 | ExtremalKind::Ec2 => {
            let k = half_minus(n, eps);
            vec![k, k]
        }
        ExtremalKind::Ec3 => {
            let Some(z) = zeta else {
                return invalid("EC3 needs ζ");
            };
            let c1 = round_usize(z * int(n));
            let c2 = round_usize((Frac::new(1, 2) - z - eps) * int(n));
            vec![c1, c2, c1, c2]
        }
    };
    if sizes.iter().sum::<usize>() > n {
        return invalid(format!("{kind} parts of sizes {sizes:?} do not fit in {n} vertices"));
    }
    Ok(sizes)
}

/// One inequality family of a template, with the vertices violating it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseCheck {
    pub clause: String,
    pub passed: bool,
    pub violators: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub kind: ExtremalKind,
    pub checks: Vec<ClauseCheck>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_clauses(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.clause.as_str()).collect()
    }
}

/// Integer thresholds of a template at fixed `n`, ε, ζ.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Thresholds {
    /// ⌈(1/2 − 2ε)n⌉
    pub pair: usize,
    /// ⌈(ζ − ε)n⌉
    pub inner: usize,
    /// ⌈(1/2 − ζ − 2ε)n⌉
    pub opposite: usize,
    /// ⌊εn⌋, the slack below a full `C_{i+1}`.
    pub slack: usize,
    /// ⌊εn²⌋
    pub cap: usize,
}

impl Thresholds {
    pub fn new(n: usize, eps: Frac, zeta: Option<Frac>) -> Self {
        let nn = int(n);
        let half = Frac::new(1, 2);
        let z = zeta.unwrap_or(int(0));
        Thresholds {
            pair: ceil_usize((half - eps * 2) * nn),
            inner: ceil_usize((z - eps) * nn),
            opposite: ceil_usize((half - z - eps * 2) * nn),
            slack: floor_usize(eps * nn),
            cap: floor_usize(eps * nn * nn),
        }
    }
}

/// Adjacency masks of a digraph on at most 64 vertices.
#[derive(Clone, Debug)]
pub(crate) struct Masks {
    pub n: usize,
    pub out: Vec<u64>,
    pub inn: Vec<u64>,
}

impl Masks {
    pub fn new(d: &Digraph) -> Result<Self> {
        if d.n() > 64 {
            return invalid(format!("partition tools support at most 64 vertices, got {}", d.n()));
        }
        Ok(Masks {
            n: d.n(),
            out: (0..d.n()).map(|v| d.out_neighbors(v).word()).collect(),
            inn: (0..d.n()).map(|v| d.in_neighbors(v).word()).collect(),
        })
    }

    #[inline]
    pub fn dout(&self, v: usize, set: u64) -> usize {
        (self.out[v] & set).count_ones() as usize
    }

    #[inline]
    pub fn din(&self, v: usize, set: u64) -> usize {
        (self.inn[v] & set).count_ones() as usize
    }

    pub fn e(&self, from: u64, to: u64) -> usize {
        bits(from).map(|v| self.dout(v, to)).sum()
    }
}

/// A degree clause over part indices: every `v ∈ parts[members]` has
/// `deg(v, parts[target]) ≥ bound`.
#[derive(Clone, Debug)]
pub(crate) struct DegreeClause {
    pub name: String,
    pub members: usize,
    pub target: usize,
    pub out: bool,
    pub bound: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct CapClause {
    pub name: String,
    /// Either `(from, to)` pair of part indices may satisfy the cap.
    pub options: [(usize, usize); 2],
}

impl DegreeClause {
    pub fn degree(&self, m: &Masks, parts: &[u64], v: usize) -> usize {
        if self.out {
            m.dout(v, parts[self.target])
        } else {
            m.din(v, parts[self.target])
        }
    }
}

impl CapClause {
    pub fn value(&self, m: &Masks, parts: &[u64]) -> usize {
        self.options.iter().map(|&(f, t)| m.e(parts[f], parts[t])).min().unwrap_or(0)
    }
}

/// Clauses of a template whose parts have the given sizes.
pub(crate) fn template_clauses(kind: ExtremalKind, sizes: &[usize], th: &Thresholds) -> (Vec<DegreeClause>, Vec<CapClause>) {
    let mut deg = Vec::new();
    let mut caps = Vec::new();
    let mut both = |name: &str, members: usize, target: usize, bound: usize| {
        deg.push(DegreeClause { name: format!("d⁺({name})"), members, target, out: true, bound });
        deg.push(DegreeClause { name: format!("d⁻({name})"), members, target, out: false, bound });
    };
    match kind {
        ExtremalKind::Ec1 => {
            both("a,A) ≥ (1/2−2ε)n for a ∈ A", 0, 0, th.pair);
            both("b,B) ≥ (1/2−2ε)n for b ∈ B", 1, 1, th.pair);
            caps.push(CapClause { name: "e(A,B) ≤ εn² or e(B,A) ≤ εn²".into(), options: [(0, 1), (1, 0)] });
        }
        ExtremalKind::Ec2 => {
            both("a,B) ≥ (1/2−2ε)n for a ∈ A", 0, 1, th.pair);
            both("b,A) ≥ (1/2−2ε)n for b ∈ B", 1, 0, th.pair);
            caps.push(CapClause { name: "e(A) ≤ εn² or e(B) ≤ εn²".into(), options: [(0, 0), (1, 1)] });
        }
        ExtremalKind::Ec3 => {
            for i in [0, 2] {
                deg.push(DegreeClause {
                    name: format!("d⁺(a,C{}) ≥ (ζ−ε)n for a ∈ C{}", i + 1, i + 1),
                    members: i,
                    target: i,
                    out: true,
                    bound: th.inner,
                });
            }
            for i in [1, 3] {
                let opp = 4 - i;
                deg.push(DegreeClause {
                    name: format!("d⁺(a,C{}) ≥ (1/2−ζ−2ε)n for a ∈ C{}", opp + 1, i + 1),
                    members: i,
                    target: opp,
                    out: true,
                    bound: th.opposite,
                });
            }
            for i in 0..4 {
                let next = (i + 1) % 4;
                deg.push(DegreeClause {
                    name: format!("d⁺(a,C{}) ≥ |C{}| − εn for a ∈ C{}", next + 1, next + 1, i + 1),
                    members: i,
                    target: next,
                    out: true,
                    bound: sizes[next].saturating_sub(th.slack),
                });
            }
            caps.push(CapClause { name: "e(C1,C3) ≤ εn² or e(C3,C1) ≤ εn²".into(), options: [(0, 2), (2, 0)] });
            caps.push(CapClause { name: "e(C2) ≤ εn² or e(C4) ≤ εn²".into(), options: [(1, 1), (3, 3)] });
        }
    }
    (deg, caps)
}

/// A template with fixed sizes and thresholds, ready to score candidate parts.
#[derive(Clone, Debug)]
pub(crate) struct Template {
    pub kind: ExtremalKind,
    pub zeta: Option<Frac>,
    pub sizes: Vec<usize>,
    pub th: Thresholds,
    pub deg: Vec<DegreeClause>,
    pub caps: Vec<CapClause>,
}

/// Local-search score: satisfied checks first, then smaller shortfall, then
/// smaller cap values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Score {
    pub satisfied: usize,
    pub neg_shortfall: std::cmp::Reverse<usize>,
    pub neg_caps: std::cmp::Reverse<(usize, usize)>,
}

impl Template {
    pub fn new(kind: ExtremalKind, n: usize, eps: Frac, zeta: Option<Frac>) -> Result<Self> {
        let sizes = template_sizes(kind, n, eps, zeta)?;
        let th = Thresholds::new(n, eps, zeta);
        let (deg, caps) = template_clauses(kind, &sizes, &th);
        Ok(Template { kind, zeta, sizes, th, deg, caps })
    }

    /// Number of (vertex, clause) checks plus cap checks.
    pub fn total_checks(&self) -> usize {
        self.deg.iter().map(|c| self.sizes[c.members]).sum::<usize>() + self.caps.len()
    }

    pub fn score(&self, m: &Masks, parts: &[u64]) -> Score {
        let mut satisfied = 0;
        let mut shortfall = 0;
        for c in &self.deg {
            for v in bits(parts[c.members]) {
                let d = c.degree(m, parts, v);
                if d >= c.bound {
                    satisfied += 1;
                } else {
                    shortfall += c.bound - d;
                }
            }
        }
        for c in &self.caps {
            let best = c.value(m, parts);
            if best <= self.th.cap {
                satisfied += 1;
            } else {
                shortfall += best - self.th.cap;
            }
        }
        Score {
            satisfied,
            neg_shortfall: std::cmp::Reverse(shortfall),
            neg_caps: std::cmp::Reverse(self.cap_score(m, parts)),
        }
    }

    /// Sum of the cap values, then the sum over both sides of every cap.
    pub fn cap_score(&self, m: &Masks, parts: &[u64]) -> (usize, usize) {
        let small = self.caps.iter().map(|c| c.value(m, parts)).sum();
        let all = self.caps.iter().flat_map(|c| c.options).map(|(f, t)| m.e(parts[f], parts[t])).sum();
        (small, all)
    }
}

/// Evaluates every inequality of the partition's template literally.
pub fn verify_partition(d: &Digraph, p: &CharacteristicPartition, eps: Frac, zeta: Option<Frac>) -> Result<PartitionReport> {
    if p.n != d.n() {
        return invalid(format!("partition is on {} vertices, digraph on {}", p.n, d.n()));
    }
    let mut covered: Vec<usize> = p.parts.iter().flatten().chain(&p.leftover).copied().collect();
    covered.sort_unstable();
    if covered != (0..d.n()).collect::<Vec<_>>() {
        return invalid("the parts and L do not partition the vertex set");
    }
    if p.kind == ExtremalKind::Ec3 && zeta.is_none() {
        return invalid("EC3 verification needs ζ");
    }
    let m = Masks::new(d)?;
    let n = d.n();
    let th = Thresholds::new(n, eps, zeta);
    let parts = p.masks();
    let mut checks = Vec::new();

    let expected = template_sizes(p.kind, n, eps, zeta);
    let actual: Vec<usize> = p.parts.iter().map(Vec::len).collect();
    checks.push(ClauseCheck {
        clause: "part sizes follow the rounding rule".into(),
        passed: expected.as_ref().is_ok_and(|e| *e == actual),
        violators: Vec::new(),
        detail: match &expected {
            Ok(e) => format!("expected {e:?}, found {actual:?}"),
            Err(err) => err.to_string(),
        },
    });

    let (deg, caps) = template_clauses(p.kind, &actual, &th);
    for c in deg {
        let violators: Vec<usize> = bits(parts[c.members]).filter(|&v| c.degree(&m, &parts, v) < c.bound).collect();
        let detail = match violators.first() {
            Some(&v) => format!("vertex {v} has degree {}, needs {}", c.degree(&m, &parts, v), c.bound),
            None => format!("bound {}", c.bound),
        };
        checks.push(ClauseCheck { clause: c.name, passed: violators.is_empty(), violators, detail });
    }
    for c in caps {
        let values: Vec<usize> = c.options.iter().map(|&(f, t)| m.e(parts[f], parts[t])).collect();
        checks.push(ClauseCheck {
            passed: values.iter().any(|&v| v <= th.cap),
            clause: c.name,
            violators: Vec::new(),
            detail: format!("edge counts {values:?}, cap {}", th.cap),
        });
    }
    Ok(PartitionReport { kind: p.kind, checks })
}

/// Planted instance of an extremal template. Vertex labels are shuffled by
/// the seed; `defect > 0` toggles `round(defect·n²)` random ordered pairs and
/// resamples until the planted partition still verifies.
pub fn gen_extremal(
    kind: ExtremalKind,
    n: usize,
    eps: Frac,
    zeta: Option<Frac>,
    defect: f64,
    seed: u64,
) -> Result<(Digraph, CharacteristicPartition)> {
    if n > 64 {
        return invalid(format!("generators support at most 64 vertices, got {n}"));
    }
    if eps <= int(0) || eps >= Frac::new(1, 4) {
        return invalid(format!("ε must lie in (0, 1/4), got {eps}"));
    }
    if !(0.0..=1.0).contains(&defect) {
        return invalid(format!("defect must lie in [0, 1], got {defect}"));
    }
    if kind == ExtremalKind::Ec3 {
        let Some(z) = zeta else {
            return invalid("EC3 needs ζ");
        };
        if z < eps * 2 || Frac::new(1, 2) - z - eps < eps * 2 {
            return invalid(format!("ζ = {z} violates ζ ≥ 2ε and 1/2 − ζ − ε ≥ 2ε for ε = {eps}"));
        }
    }
    let sizes = template_sizes(kind, n, eps, zeta)?;
    if sizes.contains(&0) {
        return invalid(format!("{kind} has an empty part at n = {n}: sizes {sizes:?}"));
    }
    check_planted_degrees(kind, n, &sizes, &Thresholds::new(n, eps, zeta))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut parts = Vec::new();
    let mut next = 0;
    for &s in &sizes {
        parts.push(perm[next..next + s].to_vec());
        next += s;
    }
    let partition = CharacteristicPartition::new(kind, n, parts, eps, zeta)?;
    let ideal = planted_digraph(&partition);
    if defect == 0.0 {
        return Ok((ideal, partition));
    }
    let toggles = (defect * (n * n) as f64).round() as usize;
    for _ in 0..100 {
        let mut d = ideal.clone();
        for _ in 0..toggles {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && !d.remove_edge(u, v) {
                d.add_edge(u, v)?;
            }
        }
        if verify_partition(&d, &partition, eps, zeta)?.passed() {
            return Ok((d, partition));
        }
    }
    invalid(format!("defect {defect} breaks the {kind} inequalities in 100 resamples"))
}

/// Degree clauses of the idealized template, checked on sizes alone.
fn check_planted_degrees(kind: ExtremalKind, n: usize, sizes: &[usize], th: &Thresholds) -> Result<()> {
    let ok = match kind {
        ExtremalKind::Ec1 => sizes[0] > th.pair,
        ExtremalKind::Ec2 => sizes[0] >= th.pair,
        ExtremalKind::Ec3 => sizes[0] > th.inner && sizes[1] >= th.opposite,
    };
    if ok {
        Ok(())
    } else {
        invalid(format!(
            "{kind} sizes {sizes:?} at n = {n} are too small after rounding for its degree bounds"
        ))
    }
}

/// Edges of the idealized template: L is joined both ways to everything.
fn planted_digraph(p: &CharacteristicPartition) -> Digraph {
    let n = p.n;
    let labels = p.labels();
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let present = match (labels[u], labels[v]) {
                (None, _) | (_, None) => true,
                (Some(x), Some(y)) => match p.kind {
                    // Cliques on A and B, A → B complete, B → A empty.
                    ExtremalKind::Ec1 => x == y || (x == 0 && y == 1),
                    // Complete between A and B, both parts independent.
                    ExtremalKind::Ec2 => x != y,
                    // Cliques on C¹ and C³, Cⁱ → Cⁱ⁺¹, C² ↔ C⁴.
                    ExtremalKind::Ec3 => {
                        (x == y && x % 2 == 0) || y == (x + 1) % 4 || (x % 2 == 1 && y % 2 == 1 && x != y)
                    }
                },
            };
            if present {
                d.add_edge(u, v).expect("distinct vertices in range");
            }
        }
    }
    d
}

/// Threshold witnesses just below `n/2`: two disjoint complete digraphs for
/// even `n`, the complete bipartite digraph on `⌈n/2⌉ + ⌊n/2⌋` for odd `n`.
pub fn gen_tight_witness(n: usize) -> Result<DigraphCollection> {
    if n < 4 {
        return invalid(format!("tight witnesses need n ≥ 4, got {n}"));
    }
    let half = n / 2;
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let same_side = (u < half) == (v < half);
            let present = if n.is_multiple_of(2) { same_side } else { !same_side };
            if present {
                d.add_edge(u, v)?;
            }
        }
    }
    DigraphCollection::uniform(&d, n)
}
