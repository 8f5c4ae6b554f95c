//! Absorbing paths inside rainbow cycles and absorbing edges inside rainbow
//! matchings.
//!
//! A segment `v₁v₂v₃v₄` of a rainbow cycle absorbs `(v, u)` with a fresh
//! color `c` when the cycle can be rerouted through `v` and `u`:
//!
//! * Type I: `v₂ → v` in color `c` and `u → v₃` in `col(v₂v₃)`; the payload runs `v … u`.
//! * Type II: `v₂ → u` in `col(v₂v₃)` and `v → v₃` in color `c`; the payload runs `u … v`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::bits;
use crate::error::{invalid, Error, Result};
use crate::model::{validate_bipartite_matching, validate_certificate, BipartiteCollection, CertificateKind, DigraphCollection, RainbowCertificate};
use crate::numeric::{at_least, at_most, int, Frac};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AbsorberKind {
    #[serde(rename = "type-I")]
    TypeI,
    #[serde(rename = "type-II")]
    TypeII,
    #[serde(rename = "bip-edge")]
    BipEdge,
}

/// A segment of a cycle (or an edge of a matching) that absorbs `(v, u)`
/// with color `color`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorberWitness {
    pub kind: AbsorberKind,
    /// Index in the cycle's vertex sequence of `v₁`, or of the matching edge.
    pub position: usize,
    /// `v₁..v₄`, or `(w₁, w₂)`.
    pub segment: Vec<usize>,
    /// Colors of the segment's edges.
    pub segment_colors: Vec<usize>,
    pub color: usize,
    pub v: usize,
    pub u: usize,
}

fn witness_error<T>(msg: String) -> Result<T> {
    Err(Error::InvalidWitness(msg))
}

/// Whether the rainbow path `v₁v₂v₃v₄` is a Type-I or Type-II `c`-absorbing
/// path of `(v, u)`; `u = v` is the single-vertex case.
pub fn is_absorbing_path(
    dc: &DigraphCollection,
    kind: AbsorberKind,
    path: &[usize; 4],
    colors: &[usize; 3],
    c: usize,
    v: usize,
    u: usize,
) -> Result<bool> {
    let (n, m) = (dc.n(), dc.m());
    if kind == AbsorberKind::BipEdge {
        return invalid("bipartite absorbers use is_absorbing_edge");
    }
    if path.iter().chain([&v, &u]).any(|&x| x >= n) || colors.iter().chain([&c]).any(|&x| x >= m) {
        return witness_error("vertex or color out of range".into());
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if path[i] == path[j] {
                return witness_error(format!("vertex {} repeats on the path", path[i]));
            }
        }
    }
    for k in 0..3 {
        if !dc.has_edge(colors[k], path[k], path[k + 1]) {
            return witness_error(format!("edge ({}, {}) is not in color {}", path[k], path[k + 1], colors[k] + 1));
        }
        if colors[..k].contains(&colors[k]) {
            return witness_error(format!("color {} repeats on the path", colors[k] + 1));
        }
    }
    if let Some(x) = [v, u].into_iter().find(|x| path.contains(x)) {
        return witness_error(format!("vertex {x} lies on the path"));
    }
    if colors.contains(&c) {
        return witness_error(format!("color {} is used by the path", c + 1));
    }
    Ok(holds(dc, kind, path[1], path[2], colors[1], c, v, u))
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn holds(dc: &DigraphCollection, kind: AbsorberKind, v2: usize, v3: usize, mid: usize, c: usize, v: usize, u: usize) -> bool {
    match kind {
        AbsorberKind::TypeI => dc.has_edge(c, v2, v) && dc.has_edge(mid, u, v3),
        AbsorberKind::TypeII => dc.has_edge(c, v, v3) && dc.has_edge(mid, v2, u),
        AbsorberKind::BipEdge => false,
    }
}

/// A rainbow cycle in vertex-sequence form.
struct Cycle {
    seq: Vec<usize>,
    colors: Vec<usize>,
    on_cycle: Vec<bool>,
    used: Vec<bool>,
}

impl Cycle {
    fn new(dc: &DigraphCollection, cert: &RainbowCertificate) -> Result<Self> {
        if !matches!(cert.kind, CertificateKind::Cycle | CertificateKind::HamiltonCycle) {
            return invalid(format!("expected a cycle certificate, got {}", cert.kind));
        }
        let as_cycle = RainbowCertificate { kind: CertificateKind::Cycle, ..cert.clone() };
        let report = validate_certificate(dc, &as_cycle);
        if let Some(v) = report.violations.first() {
            return invalid(format!("cycle is not a valid rainbow cycle: {v}"));
        }
        let seq = cert.vertex_sequence();
        let mut on_cycle = vec![false; dc.n()];
        for &x in &seq {
            on_cycle[x] = true;
        }
        let mut used = vec![false; dc.m()];
        for &c in &cert.colors {
            used[c] = true;
        }
        Ok(Cycle { seq, colors: cert.colors.clone(), on_cycle, used })
    }

    fn len(&self) -> usize {
        self.seq.len()
    }

    fn at(&self, i: usize) -> usize {
        self.seq[i % self.len()]
    }

    fn segment(&self, p: usize) -> ([usize; 4], [usize; 3]) {
        let t = self.len();
        ([0, 1, 2, 3].map(|k| self.at(p + k)), [0, 1, 2].map(|k| self.colors[(p + k) % t]))
    }

    fn check_target(&self, c: usize, v: usize, u: usize) -> Result<()> {
        if let Some(x) = [v, u].into_iter().find(|&x| x >= self.on_cycle.len() || self.on_cycle[x]) {
            return invalid(format!("vertex {x} lies on the cycle or out of range"));
        }
        if c >= self.used.len() || self.used[c] {
            return invalid(format!("color {} is used by the cycle or out of range", c + 1));
        }
        Ok(())
    }

    /// Positions `p` whose segment starting at `seq[p]` absorbs `(v, u)`.
    fn qualifying(&self, dc: &DigraphCollection, kind: AbsorberKind, c: usize, v: usize, u: usize) -> u64 {
        let t = self.len();
        if t < 4 {
            return 0;
        }
        (0..t)
            .filter(|&p| {
                let (v2, v3) = (self.at(p + 1), self.at(p + 2));
                holds(dc, kind, v2, v3, self.colors[(p + 1) % t], c, v, u)
            })
            .fold(0u64, |m, p| m | 1 << p)
    }
}

/// Largest set of pairwise vertex-disjoint windows of 4 consecutive
/// positions on a cycle of length `t`, among the windows starting in `starts`.
/// Returns the chosen starts.
pub fn max_disjoint_windows(starts: u64, t: usize) -> Vec<usize> {
    if t < 4 {
        return Vec::new();
    }
    let mut best: Vec<usize> = Vec::new();
    for first in bits(starts) {
        // Greedy by earliest start along the arc after `first`.
        let mut chosen = vec![first];
        let mut next = first + 4;
        while next + 4 <= first + t {
            match (next..=first + t - 4).find(|&q| starts >> (q % t) & 1 == 1) {
                Some(q) => {
                    chosen.push(q % t);
                    next = q + 4;
                }
                None => break,
            }
        }
        if chosen.len() > best.len() {
            best = chosen;
        }
        if best.len() == t / 4 {
            break;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorberScan {
    pub witnesses: Vec<AbsorberWitness>,
    /// Maximum number of pairwise disjoint witnesses.
    pub max_disjoint: usize,
    /// Positions of one maximum disjoint family.
    pub disjoint_positions: Vec<usize>,
}

/// Every segment of `cycle` that is a `c`-absorbing path of `(v, u)`.
pub fn enumerate_absorbers(
    dc: &DigraphCollection,
    cycle: &RainbowCertificate,
    c: usize,
    v: usize,
    u: usize,
    kind: AbsorberKind,
) -> Result<AbsorberScan> {
    if kind == AbsorberKind::BipEdge {
        return invalid("bipartite absorbers use is_absorbing_edge");
    }
    let cyc = Cycle::new(dc, cycle)?;
    cyc.check_target(c, v, u)?;
    let q = cyc.qualifying(dc, kind, c, v, u);
    let witnesses = bits(q)
        .map(|p| {
            let (segment, colors) = cyc.segment(p);
            AbsorberWitness {
                kind,
                position: p,
                segment: segment.to_vec(),
                segment_colors: colors.to_vec(),
                color: c,
                v,
                u,
            }
        })
        .collect();
    let disjoint_positions = max_disjoint_windows(q, cyc.len());
    Ok(AbsorberScan { witnesses, max_disjoint: disjoint_positions.len(), disjoint_positions })
}

/// The vertices and colors inserted into the cycle: a rainbow path from `v`
/// to `u` (Type I) or from `u` to `v` (Type II), or the single vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payload {
    pub vertices: Vec<usize>,
    /// `colors[k]` colors the edge `vertices[k] → vertices[k + 1]`.
    pub colors: Vec<usize>,
}

impl Payload {
    pub fn single(v: usize) -> Self {
        Payload { vertices: vec![v], colors: Vec::new() }
    }

    pub fn path(vertices: Vec<usize>, colors: Vec<usize>) -> Self {
        Payload { vertices, colors }
    }
}

/// Reroutes the cycle through the payload using the absorbing segment.
///
/// The edge leaving `v₂` and the edge entering `v₃` are replaced; every other
/// cycle edge keeps its position in the output sequence up to the inserted block.
pub fn absorb(dc: &DigraphCollection, cycle: &RainbowCertificate, w: &AbsorberWitness, payload: &Payload) -> Result<RainbowCertificate> {
    let cyc = Cycle::new(dc, cycle)?;
    let t = cyc.len();
    if w.kind == AbsorberKind::BipEdge {
        return invalid("bipartite witnesses are absorbed with absorb_edge");
    }
    if t < 4 || w.position >= t {
        return invalid(format!("position {} is not a segment of a {t}-cycle", w.position));
    }
    let (segment, colors) = cyc.segment(w.position);
    if w.segment != segment || w.segment_colors != colors {
        return invalid(format!("witness segment {:?} does not match the cycle at position {}", w.segment, w.position));
    }
    cyc.check_target(w.color, w.v, w.u)?;
    if !is_absorbing_path(dc, w.kind, &segment, &colors, w.color, w.v, w.u)? {
        return invalid("the witness does not absorb its target");
    }
    let pv = &payload.vertices;
    let (head, tail) = match w.kind {
        AbsorberKind::TypeI => (w.v, w.u),
        _ => (w.u, w.v),
    };
    if pv.first() != Some(&head) || pv.last() != Some(&tail) {
        return invalid(format!("payload must run from {head} to {tail}"));
    }
    if payload.colors.len() + 1 != pv.len() {
        return invalid("payload needs one color per edge");
    }
    if (w.u == w.v) != (pv.len() == 1) {
        return invalid("a single-vertex payload is used exactly when u = v");
    }
    let mut seen = vec![false; dc.n()];
    for &x in pv {
        if x >= dc.n() || cyc.on_cycle[x] || std::mem::replace(&mut seen[x], true) {
            return invalid(format!("payload vertex {x} clashes with the cycle or repeats"));
        }
    }
    let mut used = cyc.used.clone();
    used[w.color] = true;
    for &c in &payload.colors {
        if c >= dc.m() || std::mem::replace(&mut used[c], true) {
            return invalid(format!("payload color {} clashes with the cycle, the absorbing color or itself", c + 1));
        }
    }
    for (k, &c) in payload.colors.iter().enumerate() {
        if !dc.has_edge(c, pv[k], pv[k + 1]) {
            return invalid(format!("payload edge ({}, {}) is not in color {}", pv[k], pv[k + 1], c + 1));
        }
    }
    let mid = colors[1];
    let (into, out_of) = match w.kind {
        AbsorberKind::TypeI => (w.color, mid),
        _ => (mid, w.color),
    };
    let i2 = (w.position + 1) % t;
    let mut seq = cyc.seq[..=i2].to_vec();
    seq.extend_from_slice(pv);
    seq.extend_from_slice(&cyc.seq[i2 + 1..]);
    let mut cols = cyc.colors[..i2].to_vec();
    cols.push(into);
    cols.extend_from_slice(&payload.colors);
    cols.push(out_of);
    cols.extend_from_slice(&cyc.colors[i2 + 1..]);
    let out = RainbowCertificate::cycle(&seq, &cols);
    let report = validate_certificate(dc, &out);
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidWitness(format!("absorption produced an invalid cycle: {v}")));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingCycleParams {
    pub delta: Frac,
    pub delta_prime: Frac,
    pub gamma: Frac,
    pub gamma_prime: Frac,
}

impl AbsorbingCycleParams {
    fn check(&self) -> Result<()> {
        for (name, x) in [("δ", self.delta), ("δ′", self.delta_prime), ("γ", self.gamma), ("γ′", self.gamma_prime)] {
            if x < int(0) || x > int(1) {
                return invalid(format!("{name} = {x} is outside [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorAbsorption {
    pub color: usize,
    /// Good vertices `v` with more than δ′n targets `u` lacking γ′n disjoint absorbers.
    pub failing_pair_vertices: Vec<usize>,
    /// Largest number of such `u` over the good `v`.
    pub worst_pair_failures: usize,
    /// Good vertices `v` lacking γ′n disjoint absorbers of `(v, v)`.
    pub failing_single_vertices: Vec<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorbingReport {
    pub size_ok: bool,
    pub length_ok: bool,
    pub colors: Vec<ColorAbsorption>,
}

impl AbsorbingReport {
    pub fn passed(&self) -> bool {
        self.size_ok && self.length_ok && self.colors.iter().all(|c| c.passed)
    }
}

/// Checks the absorbing-cycle conditions for the color set `colors`.
/// `good[c]` lists the `D_c`-good vertices. Targets `v` and `u` range over
/// vertices off the cycle.
pub fn verify_absorbing_cycle(
    dc: &DigraphCollection,
    cycle: &RainbowCertificate,
    colors: &[usize],
    params: &AbsorbingCycleParams,
    kind: AbsorberKind,
    good: &[Vec<usize>],
) -> Result<AbsorbingReport> {
    params.check()?;
    if kind == AbsorberKind::BipEdge {
        return invalid("use verify_absorbing_matching for bipartite collections");
    }
    if good.len() != dc.m() {
        return invalid(format!("good-vertex lists for {} colors, collection has {}", good.len(), dc.m()));
    }
    let cyc = Cycle::new(dc, cycle)?;
    let n = dc.n();
    if let Some(&c) = colors.iter().find(|&&c| c >= dc.m() || cyc.used[c]) {
        return invalid(format!("color {} is on the cycle or out of range", c + 1));
    }
    let nn = int(n);
    let need = params.gamma_prime * nn;
    let allowance = params.delta_prime * nn;
    let off: Vec<usize> = (0..n).filter(|&x| !cyc.on_cycle[x]).collect();
    let per_color: Vec<ColorAbsorption> = colors
        .par_iter()
        .map(|&c| {
            let gv: Vec<usize> = good[c].iter().copied().filter(|&v| v < n && !cyc.on_cycle[v]).collect();
            let enough = |v: usize, u: usize| at_least(max_disjoint_windows(cyc.qualifying(dc, kind, c, v, u), cyc.len()).len(), need);
            let mut failing_pair_vertices = Vec::new();
            let mut worst = 0;
            for &v in &gv {
                let bad = off.iter().filter(|&&u| u != v && !enough(v, u)).count();
                worst = worst.max(bad);
                if !at_most(bad, allowance) {
                    failing_pair_vertices.push(v);
                }
            }
            let failing_single_vertices: Vec<usize> = gv.iter().copied().filter(|&v| !enough(v, v)).collect();
            let passed = failing_pair_vertices.is_empty() && at_most(failing_single_vertices.len(), allowance);
            ColorAbsorption { color: c, failing_pair_vertices, worst_pair_failures: worst, failing_single_vertices, passed }
        })
        .collect();
    Ok(AbsorbingReport {
        size_ok: at_least(colors.len(), params.delta * nn),
        length_ok: at_most(cyc.len(), params.gamma * nn),
        colors: per_color,
    })
}

/// `w₁w₂` (in color `col`) is a `c`-absorbing edge of `(u, v)`, `u ∈ V₁`,
/// `v ∈ V₂`, when `c ∈ L(w₁v)` and `col ∈ L(uw₂)`.
pub fn is_absorbing_edge(bc: &BipartiteCollection, edge: (usize, usize), col: usize, c: usize, u: usize, v: usize) -> Result<bool> {
    let (w1, w2) = edge;
    let (n, m) = (bc.n(), bc.m());
    if [w1, w2, u, v].iter().any(|&x| x >= n) || col >= m || c >= m {
        return witness_error("vertex or color out of range".into());
    }
    if !bc.has_edge(col, w1, w2) {
        return witness_error(format!("edge ({w1}, {w2}) is not in color {}", col + 1));
    }
    if u == w1 || v == w2 {
        return witness_error(format!("({u}, {v}) meets the edge ({w1}, {w2})"));
    }
    if c == col {
        return witness_error(format!("color {} is the edge's own color", c + 1));
    }
    Ok(bc.has_edge(c, w1, v) && bc.has_edge(col, u, w2))
}

/// Replaces the matching edge `w₁w₂` by `w₁v` in color `c` and `uw₂` in the
/// old color.
pub fn absorb_edge(bc: &BipartiteCollection, matching: &RainbowCertificate, position: usize, u: usize, v: usize, c: usize) -> Result<RainbowCertificate> {
    let report = validate_bipartite_matching(bc, matching, false);
    if let Some(x) = report.violations.first() {
        return invalid(format!("not a rainbow matching: {x}"));
    }
    let Some(&(w1, w2)) = matching.edges.get(position) else {
        return invalid(format!("no matching edge at position {position}"));
    };
    let col = matching.colors[position];
    if matching.edges.iter().any(|&(a, _)| a == u) {
        return invalid(format!("left vertex {u} is already covered"));
    }
    if matching.edges.iter().any(|&(_, b)| b == v) {
        return invalid(format!("right vertex {v} is already covered"));
    }
    if matching.colors.contains(&c) {
        return invalid(format!("color {} is already used", c + 1));
    }
    if !is_absorbing_edge(bc, (w1, w2), col, c, u, v)? {
        return invalid(format!("({w1}, {w2}) is not a {}-absorbing edge of ({u}, {v})", c + 1));
    }
    let mut out = matching.clone();
    out.edges[position] = (w1, v);
    out.colors[position] = c;
    out.edges.push((u, w2));
    out.colors.push(col);
    Ok(out)
}

/// Absorbing-matching conditions: `|E(M)| ≤ γn`, `|𝒞| ≥ δn`, and for every
/// `c ∈ 𝒞` and good uncovered `v ∈ V₂`, all but δ′n uncovered `u ∈ V₁` have
/// at least γ′n `c`-absorbing edges in `M`.
pub fn verify_absorbing_matching(
    bc: &BipartiteCollection,
    matching: &RainbowCertificate,
    colors: &[usize],
    params: &AbsorbingCycleParams,
    good: &[Vec<usize>],
) -> Result<AbsorbingReport> {
    params.check()?;
    let report = validate_bipartite_matching(bc, matching, false);
    if let Some(x) = report.violations.first() {
        return invalid(format!("not a rainbow matching: {x}"));
    }
    if good.len() != bc.m() {
        return invalid(format!("good-vertex lists for {} colors, collection has {}", good.len(), bc.m()));
    }
    if let Some(&c) = colors.iter().find(|&&c| c >= bc.m() || matching.colors.contains(&c)) {
        return invalid(format!("color {} is in the matching or out of range", c + 1));
    }
    let n = bc.n();
    let nn = int(n);
    let need = params.gamma_prime * nn;
    let allowance = params.delta_prime * nn;
    let left_free: Vec<usize> = (0..n).filter(|&u| matching.edges.iter().all(|e| e.0 != u)).collect();
    let right_covered = |v: usize| matching.edges.iter().any(|e| e.1 == v);
    let per_color: Vec<ColorAbsorption> = colors
        .par_iter()
        .map(|&c| {
            let mut failing = Vec::new();
            let mut worst = 0;
            for &v in good[c].iter().filter(|&&v| v < n && !right_covered(v)) {
                let bad = left_free
                    .iter()
                    .filter(|&&u| {
                        let count = matching
                            .edges
                            .iter()
                            .zip(&matching.colors)
                            .filter(|&(&(w1, w2), &col)| bc.has_edge(c, w1, v) && bc.has_edge(col, u, w2))
                            .count();
                        !at_least(count, need)
                    })
                    .count();
                worst = worst.max(bad);
                if !at_most(bad, allowance) {
                    failing.push(v);
                }
            }
            ColorAbsorption {
                color: c,
                passed: failing.is_empty(),
                failing_pair_vertices: failing,
                worst_pair_failures: worst,
                failing_single_vertices: Vec::new(),
            }
        })
        .collect();
    Ok(AbsorbingReport {
        size_ok: at_least(colors.len(), params.delta * nn),
        length_ok: at_most(matching.edges.len(), params.gamma * nn),
        colors: per_color,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BipartiteGraph, Digraph};
    use crate::numeric::frac;

    /// Colors 0..6 carry the cycle 0→1→…→5→0 one edge each; color 6 is free.
    fn six_cycle(extra: &[(usize, usize, usize)]) -> (DigraphCollection, RainbowCertificate) {
        let n = 8;
        let mut ds = vec![Digraph::empty(n); 8];
        for (k, d) in ds.iter_mut().take(6).enumerate() {
            d.add_edge(k, (k + 1) % 6).unwrap();
        }
        for &(c, a, b) in extra {
            ds[c].add_edge(a, b).unwrap();
        }
        let dc = DigraphCollection::new(ds).unwrap();
        let cyc = RainbowCertificate::cycle(&[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5]);
        (dc, cyc)
    }

    #[test]
    fn type_one_predicate() {
        // Segment 0 1 2 3: v₂ = 1, v₃ = 2, col(v₂v₃) = 1.
        let (dc, _) = six_cycle(&[(6, 1, 6), (1, 7, 2)]);
        assert!(is_absorbing_path(&dc, AbsorberKind::TypeI, &[0, 1, 2, 3], &[0, 1, 2], 6, 6, 7).unwrap());
        let (dc, _) = six_cycle(&[(6, 1, 6)]);
        assert!(!is_absorbing_path(&dc, AbsorberKind::TypeI, &[0, 1, 2, 3], &[0, 1, 2], 6, 6, 7).unwrap());
    }

    #[test]
    fn type_two_predicate() {
        let (dc, _) = six_cycle(&[(6, 6, 2), (1, 1, 7)]);
        assert!(is_absorbing_path(&dc, AbsorberKind::TypeII, &[0, 1, 2, 3], &[0, 1, 2], 6, 6, 7).unwrap());
        assert!(!is_absorbing_path(&dc, AbsorberKind::TypeI, &[0, 1, 2, 3], &[0, 1, 2], 6, 6, 7).unwrap());
    }

    #[test]
    fn predicate_preconditions() {
        let (dc, _) = six_cycle(&[]);
        let err = is_absorbing_path(&dc, AbsorberKind::TypeI, &[0, 1, 2, 3], &[0, 1, 2], 6, 2, 7);
        assert!(matches!(err, Err(Error::InvalidWitness(_))));
        let err = is_absorbing_path(&dc, AbsorberKind::TypeI, &[0, 1, 2, 3], &[0, 1, 2], 1, 6, 7);
        assert!(matches!(err, Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn single_vertex_absorb_grows_by_one() {
        let (dc, cyc) = six_cycle(&[(6, 1, 6), (1, 6, 2)]);
        let scan = enumerate_absorbers(&dc, &cyc, 6, 6, 6, AbsorberKind::TypeI).unwrap();
        assert_eq!(scan.witnesses.len(), 1);
        let out = absorb(&dc, &cyc, &scan.witnesses[0], &Payload::single(6)).unwrap();
        assert_eq!(out.len(), 7);
        assert_eq!(out.color_set(), vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(out.vertex_sequence(), vec![0, 1, 6, 2, 3, 4, 5]);
    }

    #[test]
    fn pair_absorb_with_payload_path() {
        let n = 10;
        let mut ds = vec![Digraph::empty(n); 10];
        for (k, d) in ds.iter_mut().take(6).enumerate() {
            d.add_edge(k, (k + 1) % 6).unwrap();
        }
        // Type I at segment 3 4 5 0: v₂ = 4, v₃ = 5, mid color 4.
        ds[6].add_edge(4, 6).unwrap();
        ds[7].add_edge(6, 8).unwrap();
        ds[8].add_edge(8, 9).unwrap();
        ds[9].add_edge(9, 7).unwrap();
        ds[4].add_edge(7, 5).unwrap();
        let dc = DigraphCollection::new(ds).unwrap();
        let cyc = RainbowCertificate::cycle(&[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5]);
        let scan = enumerate_absorbers(&dc, &cyc, 6, 6, 7, AbsorberKind::TypeI).unwrap();
        let w = &scan.witnesses[0];
        assert_eq!(w.segment, vec![3, 4, 5, 0]);
        let out = absorb(&dc, &cyc, w, &Payload::path(vec![6, 8, 9, 7], vec![7, 8, 9])).unwrap();
        assert_eq!(out.len(), 10);
        let bad = absorb(&dc, &cyc, w, &Payload::path(vec![6, 8, 9, 7], vec![7, 8, 0]));
        assert!(bad.is_err());
    }

    #[test]
    fn complete_collection_window_count() {
        let n = 12;
        let dc = DigraphCollection::uniform(&Digraph::complete(n), n).unwrap();
        let seq: Vec<usize> = (0..9).collect();
        let cyc = RainbowCertificate::cycle(&seq, &seq);
        let scan = enumerate_absorbers(&dc, &cyc, 9, 9, 10, AbsorberKind::TypeI).unwrap();
        assert_eq!(scan.witnesses.len(), 9);
        assert_eq!(scan.max_disjoint, 2);
    }

    #[test]
    fn windows_wrap_around() {
        assert_eq!(max_disjoint_windows(0b1111_1111, 8).len(), 2);
        assert_eq!(max_disjoint_windows(1 << 6 | 1 << 2, 8).len(), 2);
        assert_eq!(max_disjoint_windows(1 << 6 | 1 << 1, 8).len(), 1);
        assert_eq!(max_disjoint_windows(0, 8).len(), 0);
    }

    #[test]
    fn absorbing_cycle_parameters() {
        let n = 12;
        let dc = DigraphCollection::uniform(&Digraph::complete(n), n).unwrap();
        let seq: Vec<usize> = (0..8).collect();
        let cyc = RainbowCertificate::cycle(&seq, &seq);
        let good = vec![(0..n).collect::<Vec<_>>(); n];
        let colors: Vec<usize> = (8..12).collect();
        let ok = AbsorbingCycleParams { delta: frac(0.25), delta_prime: int(0), gamma: frac(0.7), gamma_prime: frac(0.1) };
        assert!(verify_absorbing_cycle(&dc, &cyc, &colors, &ok, AbsorberKind::TypeI, &good).unwrap().passed());
        let greedy = AbsorbingCycleParams { gamma_prime: int(1), ..ok };
        assert!(!verify_absorbing_cycle(&dc, &cyc, &colors, &greedy, AbsorberKind::TypeII, &good).unwrap().passed());
        let big = AbsorbingCycleParams { delta: frac(0.5), ..ok };
        let r = verify_absorbing_cycle(&dc, &cyc, &colors, &big, AbsorberKind::TypeI, &good).unwrap();
        assert!(!r.size_ok);
    }

    #[test]
    fn bipartite_edge_absorption() {
        // Color 0 holds the matching edge (0, 0); color 1 holds (0, 2); color 0 also holds (1, 0).
        let mut g0 = BipartiteGraph::empty(3);
        g0.add_edge(0, 0).unwrap();
        g0.add_edge(1, 0).unwrap();
        let mut g1 = BipartiteGraph::empty(3);
        g1.add_edge(0, 2).unwrap();
        let bc = BipartiteCollection::new(vec![g0, g1, BipartiteGraph::empty(3)]).unwrap();
        let m = RainbowCertificate { kind: CertificateKind::Matching, edges: vec![(0, 0)], colors: vec![0] };
        assert!(is_absorbing_edge(&bc, (0, 0), 0, 1, 1, 2).unwrap());
        assert!(!is_absorbing_edge(&bc, (0, 0), 0, 2, 1, 2).unwrap());
        let out = absorb_edge(&bc, &m, 0, 1, 2, 1).unwrap();
        assert_eq!(out.edges.len(), 2);
        assert!(validate_bipartite_matching(&bc, &out, false).is_valid());
    }
}
