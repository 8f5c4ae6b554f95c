//! Digraphs, digraph collections, bipartite collections and rainbow
//! certificates.
//!
//! Vertices are `0..n`. Colors are indices into a collection and are 0-based
//! everywhere inside the library; the JSON layer shifts them to 1-based.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{invalid, Error, Result};

/// Loop-free digraph with at most one edge per ordered pair.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<VertexSet>,
    in_adj: Vec<VertexSet>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            out_adj: vec![VertexSet::new(n); n],
            in_adj: vec![VertexSet::new(n); n],
        }
    }

    /// Every ordered pair of distinct vertices.
    pub fn complete(n: usize) -> Self {
        let mut d = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    d.insert(u, v);
                }
            }
        }
        d
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut d = Self::empty(n);
        for (u, v) in edges {
            d.add_edge(u, v)?;
        }
        Ok(d)
    }

    /// Inserts `u → v`; returns whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return invalid(format!("edge ({u}, {v}) outside vertex range 0..{}", self.n));
        }
        if u == v {
            return Err(Error::InvalidPair(u, v));
        }
        Ok(self.insert(u, v))
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        self.in_adj[v].remove(u);
        self.out_adj[u].remove(v)
    }

    fn insert(&mut self, u: usize, v: usize) -> bool {
        self.in_adj[v].insert(u);
        self.out_adj[u].insert(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out_adj[u].contains(v)
    }

    pub fn out_neighbors(&self, v: usize) -> &VertexSet {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &VertexSet {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    /// d⁺(v, S)
    pub fn out_degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.out_adj[v].intersection_len(set)
    }

    /// d⁻(v, S)
    pub fn in_degree_from(&self, v: usize, set: &VertexSet) -> usize {
        self.in_adj[v].intersection_len(set)
    }

    /// Number of edges `a → b` with `a ∈ from`, `b ∈ to`; the sets may overlap.
    pub fn edges_between(&self, from: &VertexSet, to: &VertexSet) -> usize {
        from.iter().map(|a| self.out_adj[a].intersection_len(to)).sum()
    }

    /// e(S) = e(S, S).
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        self.edges_between(set, set)
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(VertexSet::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_adj[u].iter().map(move |v| (u, v)))
    }

    /// Minimum semi-degree δ⁰: the least in- or out-degree over all vertices.
    pub fn semi_degree(&self) -> usize {
        (0..self.n)
            .map(|v| self.out_degree(v).min(self.in_degree(v)))
            .min()
            .unwrap_or(0)
    }

    /// Whether the stored in-adjacency equals the transpose of the out-adjacency.
    pub fn is_transpose_consistent(&self) -> bool {
        let mut rebuilt = vec![VertexSet::new(self.n); self.n];
        for (u, v) in self.edges() {
            rebuilt[v].insert(u);
        }
        rebuilt
            .iter()
            .zip(&self.in_adj)
            .all(|(a, b)| a.to_vec() == b.to_vec())
            && (0..self.n).all(|v| !self.out_adj[v].contains(v))
    }

    /// Induced subdigraph on `vertices` (in the given order), relabeled `0..k`.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut d = Digraph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if i != j && self.has_edge(u, v) {
                    d.insert(i, j);
                }
            }
        }
        d
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// δ⁰(D).
pub fn semi_degree(d: &Digraph) -> usize {
    d.semi_degree()
}

/// δ⁰ of a collection: the minimum over its members.
pub fn collection_semi_degree(dc: &DigraphCollection) -> usize {
    dc.semi_degree()
}

/// Ordered family of digraphs on one vertex set; the index is the color.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DigraphCollection {
    n: usize,
    digraphs: Vec<Digraph>,
}

impl DigraphCollection {
    pub fn new(digraphs: Vec<Digraph>) -> Result<Self> {
        let Some(first) = digraphs.first() else {
            return invalid("a collection needs at least one digraph");
        };
        let n = first.n();
        if let Some((c, d)) = digraphs.iter().enumerate().find(|(_, d)| d.n() != n) {
            return Err(Error::Shape(format!(
                "color {} has {} vertices, expected {n}",
                c + 1,
                d.n()
            )));
        }
        Ok(DigraphCollection { n, digraphs })
    }

    /// `m` copies of the same digraph.
    pub fn uniform(d: &Digraph, m: usize) -> Result<Self> {
        Self::new(vec![d.clone(); m])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.digraphs.len()
    }

    pub fn digraph(&self, color: usize) -> &Digraph {
        &self.digraphs[color]
    }

    pub fn digraph_mut(&mut self, color: usize) -> &mut Digraph {
        &mut self.digraphs[color]
    }

    pub fn digraphs(&self) -> &[Digraph] {
        &self.digraphs
    }

    pub fn into_digraphs(self) -> Vec<Digraph> {
        self.digraphs
    }

    pub fn has_edge(&self, color: usize, u: usize, v: usize) -> bool {
        color < self.m() && self.digraphs[color].has_edge(u, v)
    }

    pub fn semi_degree(&self) -> usize {
        self.digraphs.iter().map(Digraph::semi_degree).min().unwrap_or(0)
    }

    /// L(xy): the colors whose digraph contains `x → y`.
    pub fn color_list(&self, x: usize, y: usize) -> Result<ColorList> {
        if x == y || x >= self.n || y >= self.n {
            return Err(Error::InvalidPair(x, y));
        }
        let colors = (0..self.m()).filter(|&c| self.digraphs[c].has_edge(x, y)).collect();
        Ok(ColorList { pair: (x, y), colors })
    }

    /// Union digraph over the given colors.
    pub fn union(&self, colors: impl IntoIterator<Item = usize>) -> Digraph {
        let mut d = Digraph::empty(self.n);
        for c in colors {
            for (u, v) in self.digraphs[c].edges() {
                d.insert(u, v);
            }
        }
        d
    }

    /// 𝒟[X] restricted to a color subset. Vertices and colors are relabeled
    /// in ascending order; the returned maps send new indices to old ones.
    pub fn restricted(
        &self,
        vertices: &[usize],
        colors: &[usize],
    ) -> Result<(DigraphCollection, Vec<usize>, Vec<usize>)> {
        if vertices.is_empty() || colors.is_empty() {
            return invalid("restriction needs nonempty vertex and color sets");
        }
        let mut vmap: Vec<usize> = vertices.to_vec();
        vmap.sort_unstable();
        vmap.dedup();
        let mut cmap: Vec<usize> = colors.to_vec();
        cmap.sort_unstable();
        cmap.dedup();
        if let Some(&v) = vmap.iter().find(|&&v| v >= self.n) {
            return invalid(format!("vertex {v} out of range"));
        }
        if let Some(&c) = cmap.iter().find(|&&c| c >= self.m()) {
            return invalid(format!("color {} out of range", c + 1));
        }
        let digraphs = cmap.iter().map(|&c| self.digraphs[c].induced(&vmap)).collect();
        Ok((DigraphCollection::new(digraphs)?, vmap, cmap))
    }

    /// Characteristic bipartite collection: left `u` joined to right `v` in
    /// color `c` iff `u → v` in `D_c`.
    pub fn characteristic_bipartite(&self) -> BipartiteCollection {
        let graphs = self
            .digraphs
            .iter()
            .map(|d| BipartiteGraph::from_edges(self.n, d.edges()).expect("edges in range"))
            .collect();
        BipartiteCollection::new(graphs).expect("nonempty, uniform")
    }
}

pub fn color_list(dc: &DigraphCollection, x: usize, y: usize) -> Result<ColorList> {
    dc.color_list(x, y)
}

pub fn restricted_collection(
    dc: &DigraphCollection,
    vertices: &[usize],
    colors: &[usize],
) -> Result<(DigraphCollection, Vec<usize>, Vec<usize>)> {
    dc.restricted(vertices, colors)
}

pub fn characteristic_bipartite(dc: &DigraphCollection) -> BipartiteCollection {
    dc.characteristic_bipartite()
}

/// L(xy) for an ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorList {
    pub pair: (usize, usize),
    pub colors: Vec<usize>,
}

impl ColorList {
    pub fn contains(&self, color: usize) -> bool {
        self.colors.binary_search(&color).is_ok()
    }
}

/// Bipartite graph on parts `V₁ = V₂ = 0..n`, stored from the left side.
#[derive(Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n: usize,
    adj: Vec<VertexSet>,
    radj: Vec<VertexSet>,
}

impl BipartiteGraph {
    pub fn empty(n: usize) -> Self {
        BipartiteGraph {
            n,
            adj: vec![VertexSet::new(n); n],
            radj: vec![VertexSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, left: usize, right: usize) -> Result<bool> {
        if left >= self.n || right >= self.n {
            return invalid(format!("edge ({left}, {right}) outside parts of size {}", self.n));
        }
        Ok(self.insert(left, right))
    }

    fn insert(&mut self, u: usize, v: usize) -> bool {
        self.radj[v].insert(u);
        self.adj[u].insert(v)
    }

    pub fn remove_edge(&mut self, left: usize, right: usize) -> bool {
        if left >= self.n || right >= self.n {
            return false;
        }
        self.radj[right].remove(left);
        self.adj[left].remove(right)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        left < self.n && self.adj[left].contains(right)
    }

    pub fn left_neighbors(&self, left: usize) -> &VertexSet {
        &self.adj[left]
    }

    pub fn right_neighbors(&self, right: usize) -> &VertexSet {
        &self.radj[right]
    }

    pub fn left_degree(&self, left: usize) -> usize {
        self.adj[left].len()
    }

    pub fn right_degree(&self, right: usize) -> usize {
        self.radj[right].len()
    }

    /// e_G(A, B) with `A ⊆ V₁`, `B ⊆ V₂`.
    pub fn edges_between(&self, left: &VertexSet, right: &VertexSet) -> usize {
        left.iter().map(|u| self.adj[u].intersection_len(right)).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].iter().map(move |v| (u, v)))
    }
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Collection of bipartite graphs on a common bipartition `V₁ ∪ V₂`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BipartiteCollection {
    n: usize,
    graphs: Vec<BipartiteGraph>,
}

impl BipartiteCollection {
    pub fn new(graphs: Vec<BipartiteGraph>) -> Result<Self> {
        let Some(first) = graphs.first() else {
            return invalid("a collection needs at least one graph");
        };
        let n = first.n();
        if graphs.iter().any(|g| g.n() != n) {
            return Err(Error::Shape("bipartite graphs differ in part size".into()));
        }
        Ok(BipartiteCollection { n, graphs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.graphs.len()
    }

    pub fn graph(&self, color: usize) -> &BipartiteGraph {
        &self.graphs[color]
    }

    pub fn graph_mut(&mut self, color: usize) -> &mut BipartiteGraph {
        &mut self.graphs[color]
    }

    pub fn graphs(&self) -> &[BipartiteGraph] {
        &self.graphs
    }

    pub fn has_edge(&self, color: usize, left: usize, right: usize) -> bool {
        color < self.m() && self.graphs[color].has_edge(left, right)
    }

    /// Colors containing the edge `left -> right`.
    pub fn color_list(&self, left: usize, right: usize) -> Vec<usize> {
        (0..self.m()).filter(|&c| self.graphs[c].has_edge(left, right)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    HamiltonCycle,
    HamiltonPath,
    Matching,
    CycleCover,
    /// A rainbow cycle that need not span.
    Cycle,
    /// A rainbow path that need not span.
    Path,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificateKind::HamiltonCycle => "hamilton-cycle",
            CertificateKind::HamiltonPath => "hamilton-path",
            CertificateKind::Matching => "matching",
            CertificateKind::CycleCover => "cycle-cover",
            CertificateKind::Cycle => "cycle",
            CertificateKind::Path => "path",
        };
        f.write_str(s)
    }
}

/// A subgraph together with an injective edge coloring: `colors[k]` is the
/// color of `edges[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RainbowCertificate {
    pub kind: CertificateKind,
    pub edges: Vec<(usize, usize)>,
    pub colors: Vec<usize>,
}

impl RainbowCertificate {
    /// Cycle `vertices[0] → vertices[1] → … → vertices[0]`, where
    /// `colors[k]` colors the edge leaving `vertices[k]`.
    pub fn from_cycle(vertices: &[usize], colors: &[usize]) -> Self {
        let t = vertices.len();
        let edges = (0..t).map(|k| (vertices[k], vertices[(k + 1) % t])).collect();
        RainbowCertificate {
            kind: CertificateKind::HamiltonCycle,
            edges,
            colors: colors.to_vec(),
        }
    }

    pub fn from_path(vertices: &[usize], colors: &[usize]) -> Self {
        let edges = vertices.windows(2).map(|w| (w[0], w[1])).collect();
        RainbowCertificate {
            kind: CertificateKind::HamiltonPath,
            edges,
            colors: colors.to_vec(),
        }
    }

    /// A cycle through `vertices` only; same coloring convention as [`Self::from_cycle`].
    pub fn cycle(vertices: &[usize], colors: &[usize]) -> Self {
        RainbowCertificate { kind: CertificateKind::Cycle, ..Self::from_cycle(vertices, colors) }
    }

    /// A path through `vertices` only.
    pub fn path(vertices: &[usize], colors: &[usize]) -> Self {
        RainbowCertificate { kind: CertificateKind::Path, ..Self::from_path(vertices, colors) }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertex order of a cycle or path certificate, read off the edge tails
    /// (plus the final head for paths).
    pub fn vertex_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = self.edges.iter().map(|e| e.0).collect();
        if matches!(self.kind, CertificateKind::HamiltonPath | CertificateKind::Path) {
            if let Some(last) = self.edges.last() {
                seq.push(last.1);
            }
        }
        seq
    }

    /// Every vertex touched by an edge, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn color_set(&self) -> Vec<usize> {
        let mut cs = self.colors.clone();
        cs.sort_unstable();
        cs.dedup();
        cs
    }
}

/// One violated clause of a certificate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The edges do not have the shape required by the certificate kind.
    Shape(String),
    /// `edges[index]` is missing from the digraph of its color.
    Membership { index: usize, edge: (usize, usize), color: usize },
    /// A color is used on two edges.
    Injectivity { color: usize, first: usize, second: usize },
    /// A color index outside the collection.
    ColorRange { index: usize, color: usize },
    /// Wrong number of edges for the kind (the cycle coloring must be a bijection).
    Cardinality { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::Membership { index, edge, color } => write!(
                f,
                "membership: edge #{index} ({}, {}) is not in color {}",
                edge.0,
                edge.1,
                color + 1
            ),
            Violation::Injectivity { color, first, second } => write!(
                f,
                "injectivity: color {} used on edges #{first} and #{second}",
                color + 1
            ),
            Violation::ColorRange { index, color } => {
                write!(f, "color range: edge #{index} has color {}", color + 1)
            }
            Violation::Cardinality { expected, found } => {
                write!(f, "cardinality: expected {expected} edges, found {found}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateReport {
    pub violations: Vec<Violation>,
}

impl CertificateReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_shape_violation(&self) -> bool {
        self.violations.iter().any(|v| matches!(v, Violation::Shape(_)))
    }

    pub fn has_injectivity_violation(&self) -> bool {
        self.violations.iter().any(|v| matches!(v, Violation::Injectivity { .. }))
    }
}

/// Checks a certificate against a digraph collection and lists every
/// violated clause.
pub fn validate_certificate(dc: &DigraphCollection, cert: &RainbowCertificate) -> CertificateReport {
    let mut violations = Vec::new();
    let n = dc.n();
    if cert.edges.len() != cert.colors.len() {
        violations.push(Violation::Shape(format!(
            "{} edges but {} colors",
            cert.edges.len(),
            cert.colors.len()
        )));
        return CertificateReport { violations };
    }
    if let Some(&(u, v)) = cert.edges.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
        violations.push(Violation::Shape(format!("edge ({u}, {v}) is not a valid pair")));
        return CertificateReport { violations };
    }
    check_coloring(&cert.colors, dc.m(), &mut violations);
    for (index, (&edge, &color)) in cert.edges.iter().zip(&cert.colors).enumerate() {
        if color < dc.m() && !dc.has_edge(color, edge.0, edge.1) {
            violations.push(Violation::Membership { index, edge, color });
        }
    }
    match cert.kind {
        CertificateKind::HamiltonCycle => {
            if let Err(s) = check_closed_walk(&cert.edges, n, true) {
                violations.push(Violation::Shape(s));
            }
            if cert.edges.len() != dc.m() {
                violations.push(Violation::Cardinality { expected: dc.m(), found: cert.edges.len() });
            }
        }
        CertificateKind::HamiltonPath => {
            if let Err(s) = check_path(&cert.edges, n, true) {
                violations.push(Violation::Shape(s));
            }
        }
        CertificateKind::Cycle => {
            if let Err(s) = check_closed_walk(&cert.edges, n, false) {
                violations.push(Violation::Shape(s));
            }
        }
        CertificateKind::Path => {
            if let Err(s) = check_path(&cert.edges, n, false) {
                violations.push(Violation::Shape(s));
            }
        }
        CertificateKind::Matching => {
            let mut seen = vec![false; n];
            for &(u, v) in &cert.edges {
                for x in [u, v] {
                    if std::mem::replace(&mut seen[x], true) {
                        violations.push(Violation::Shape(format!("vertex {x} covered twice")));
                    }
                }
            }
        }
        CertificateKind::CycleCover => {
            if let Err(s) = check_cycle_cover(&cert.edges, n) {
                violations.push(Violation::Shape(s));
            }
        }
    }
    CertificateReport { violations }
}

/// Checks a rainbow matching in a bipartite collection; edges are
/// `(left, right)`. With `perfect` the matching must cover both parts and
/// use every color.
pub fn validate_bipartite_matching(
    bc: &BipartiteCollection,
    cert: &RainbowCertificate,
    perfect: bool,
) -> CertificateReport {
    let mut violations = Vec::new();
    let n = bc.n();
    if cert.edges.len() != cert.colors.len() {
        violations.push(Violation::Shape("edge and color counts differ".into()));
        return CertificateReport { violations };
    }
    if cert.edges.iter().any(|&(u, v)| u >= n || v >= n) {
        violations.push(Violation::Shape("edge endpoint outside the parts".into()));
        return CertificateReport { violations };
    }
    check_coloring(&cert.colors, bc.m(), &mut violations);
    let mut left = vec![false; n];
    let mut right = vec![false; n];
    for (index, (&(u, v), &color)) in cert.edges.iter().zip(&cert.colors).enumerate() {
        if std::mem::replace(&mut left[u], true) {
            violations.push(Violation::Shape(format!("left vertex {u} covered twice")));
        }
        if std::mem::replace(&mut right[v], true) {
            violations.push(Violation::Shape(format!("right vertex {v} covered twice")));
        }
        if color < bc.m() && !bc.has_edge(color, u, v) {
            violations.push(Violation::Membership { index, edge: (u, v), color });
        }
    }
    if perfect {
        if cert.edges.len() != n {
            violations.push(Violation::Cardinality { expected: n, found: cert.edges.len() });
        }
        if bc.m() != n {
            violations.push(Violation::Cardinality { expected: n, found: bc.m() });
        }
    }
    CertificateReport { violations }
}

fn check_coloring(colors: &[usize], m: usize, violations: &mut Vec<Violation>) {
    let mut first_use: BTreeMap<usize, usize> = BTreeMap::new();
    for (index, &color) in colors.iter().enumerate() {
        if color >= m {
            violations.push(Violation::ColorRange { index, color });
            continue;
        }
        if let Some(&first) = first_use.get(&color) {
            violations.push(Violation::Injectivity { color, first, second: index });
        } else {
            first_use.insert(color, index);
        }
    }
}

fn check_closed_walk(edges: &[(usize, usize)], n: usize, spanning: bool) -> std::result::Result<(), String> {
    let t = edges.len();
    if t < 2 {
        return Err(format!("a cycle needs at least 2 edges, found {t}"));
    }
    for k in 0..t {
        if edges[k].1 != edges[(k + 1) % t].0 {
            return Err(format!("edge #{k} does not continue into edge #{}", (k + 1) % t));
        }
    }
    let mut seen = vec![false; n];
    for &(u, _) in edges {
        if std::mem::replace(&mut seen[u], true) {
            return Err(format!("vertex {u} visited twice"));
        }
    }
    if spanning {
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(format!("vertex {v} not visited"));
        }
    }
    Ok(())
}

fn check_path(edges: &[(usize, usize)], n: usize, spanning: bool) -> std::result::Result<(), String> {
    if spanning && n >= 2 && edges.len() != n - 1 {
        return Err(format!("a Hamilton path on {n} vertices has {} edges, found {}", n - 1, edges.len()));
    }
    for k in 1..edges.len() {
        if edges[k - 1].1 != edges[k].0 {
            return Err(format!("edge #{} does not continue into edge #{k}", k - 1));
        }
    }
    let mut seen = vec![false; n];
    let seq = edges.iter().map(|e| e.0).chain(edges.last().map(|e| e.1));
    for v in seq {
        if std::mem::replace(&mut seen[v], true) {
            return Err(format!("vertex {v} visited twice"));
        }
    }
    if spanning {
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(format!("vertex {v} not visited"));
        }
    }
    Ok(())
}

fn check_cycle_cover(edges: &[(usize, usize)], n: usize) -> std::result::Result<(), String> {
    let mut succ = vec![usize::MAX; n];
    let mut pred = vec![usize::MAX; n];
    for &(u, v) in edges {
        if succ[u] != usize::MAX {
            return Err(format!("vertex {u} has two outgoing cover edges"));
        }
        if pred[v] != usize::MAX {
            return Err(format!("vertex {v} has two incoming cover edges"));
        }
        succ[u] = v;
        pred[v] = u;
    }
    if let Some(v) = (0..n).find(|&v| succ[v] == usize::MAX || pred[v] == usize::MAX) {
        return Err(format!("vertex {v} is not covered"));
    }
    Ok(())
}

/// Cycles of a cycle-cover certificate as vertex sequences, each starting at
/// its smallest vertex, ordered by that vertex.
pub fn cover_cycles(cert: &RainbowCertificate, n: usize) -> Vec<Vec<usize>> {
    let mut succ = vec![usize::MAX; n];
    for &(u, v) in &cert.edges {
        succ[u] = v;
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] || succ[start] == usize::MAX {
            continue;
        }
        let mut cyc = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cyc.push(v);
            v = succ[v];
        }
        cycles.push(cyc);
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digon() -> Digraph {
        Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap()
    }

    fn two_cliques(k: usize) -> Digraph {
        let mut d = Digraph::empty(2 * k);
        for base in [0, k] {
            for u in base..base + k {
                for v in base..base + k {
                    if u != v {
                        d.add_edge(u, v).unwrap();
                    }
                }
            }
        }
        d
    }

    #[test]
    fn semi_degree_examples() {
        assert_eq!(semi_degree(&Digraph::complete(5)), 4);
        let mut d = Digraph::complete(4);
        for v in 0..3 {
            d.remove_edge(3, v);
            d.remove_edge(v, 3);
        }
        assert_eq!(semi_degree(&d), 0);
        assert_eq!(semi_degree(&two_cliques(2)), 1);
        assert_eq!(semi_degree(&Digraph::empty(1)), 0);
    }

    #[test]
    fn collection_semi_degree_examples() {
        let dc = DigraphCollection::uniform(&Digraph::complete(3), 3).unwrap();
        assert_eq!(collection_semi_degree(&dc), 2);
        let mut source = Digraph::complete(3);
        source.remove_edge(1, 0);
        source.remove_edge(2, 0);
        let dc = DigraphCollection::new(vec![Digraph::complete(3), source]).unwrap();
        assert_eq!(collection_semi_degree(&dc), 0);
        let dc = DigraphCollection::uniform(&two_cliques(2), 4).unwrap();
        assert_eq!(collection_semi_degree(&dc), 1);
    }

    #[test]
    fn color_list_examples() {
        let with = Digraph::from_edges(3, [(0, 1)]).unwrap();
        let without = Digraph::empty(3);
        let dc = DigraphCollection::new(vec![
            without.clone(),
            with.clone(),
            without.clone(),
            with,
        ])
        .unwrap();
        assert_eq!(color_list(&dc, 0, 1).unwrap().colors, vec![1, 3]);
        assert!(color_list(&dc, 1, 0).unwrap().colors.is_empty());
        assert!(color_list(&dc, 2, 0).unwrap().colors.is_empty());
        assert_eq!(color_list(&dc, 1, 1), Err(Error::InvalidPair(1, 1)));
        let full = DigraphCollection::uniform(&Digraph::complete(4), 5).unwrap();
        assert_eq!(color_list(&full, 2, 3).unwrap().colors, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn collection_rejects_mixed_sizes_and_empty() {
        assert!(DigraphCollection::new(vec![]).is_err());
        assert!(matches!(
            DigraphCollection::new(vec![Digraph::empty(2), Digraph::empty(3)]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn loops_rejected() {
        assert_eq!(Digraph::from_edges(3, [(1, 1)]), Err(Error::InvalidPair(1, 1)));
        let mut d = Digraph::empty(3);
        assert!(d.add_edge(0, 1).unwrap());
        assert!(!d.add_edge(0, 1).unwrap());
        assert_eq!(d.edge_count(), 1);
        assert!(d.is_transpose_consistent());
    }

    #[test]
    fn digon_certificate_checks() {
        let dc = DigraphCollection::uniform(&digon(), 2).unwrap();
        let good = RainbowCertificate::from_cycle(&[0, 1], &[0, 1]);
        assert!(validate_certificate(&dc, &good).is_valid());
        let repeated = RainbowCertificate::from_cycle(&[0, 1], &[0, 0]);
        let report = validate_certificate(&dc, &repeated);
        assert!(report.has_injectivity_violation());
        assert!(!report.has_shape_violation());
    }

    #[test]
    fn cycle_skipping_a_vertex_fails_shape() {
        let dc = DigraphCollection::uniform(&Digraph::complete(4), 4).unwrap();
        let cert = RainbowCertificate::from_cycle(&[0, 1, 2], &[0, 1, 2]);
        let report = validate_certificate(&dc, &cert);
        assert!(report.has_shape_violation());
        assert!(report
            .violations
            .contains(&Violation::Cardinality { expected: 4, found: 3 }));
    }

    #[test]
    fn membership_violation_reported() {
        let dc = DigraphCollection::new(vec![digon(), Digraph::empty(2)]).unwrap();
        let cert = RainbowCertificate::from_cycle(&[0, 1], &[0, 1]);
        let report = validate_certificate(&dc, &cert);
        assert_eq!(
            report.violations,
            vec![Violation::Membership { index: 1, edge: (1, 0), color: 1 }]
        );
    }

    #[test]
    fn cycle_cover_shape() {
        let dc = DigraphCollection::uniform(&two_cliques(2), 4).unwrap();
        let cert = RainbowCertificate {
            kind: CertificateKind::CycleCover,
            edges: vec![(0, 1), (1, 0), (2, 3), (3, 2)],
            colors: vec![0, 1, 2, 3],
        };
        assert!(validate_certificate(&dc, &cert).is_valid());
        assert_eq!(cover_cycles(&cert, 4), vec![vec![0, 1], vec![2, 3]]);
        let partial = RainbowCertificate { edges: cert.edges[..2].to_vec(), colors: vec![0, 1], ..cert };
        assert!(validate_certificate(&dc, &partial).has_shape_violation());
    }

    #[test]
    fn restriction() {
        let dc = DigraphCollection::uniform(&Digraph::complete(4), 3).unwrap();
        let (same, vmap, cmap) = restricted_collection(&dc, &[0, 1, 2, 3], &[0, 1, 2]).unwrap();
        assert_eq!(same, dc);
        assert_eq!(vmap, vec![0, 1, 2, 3]);
        assert_eq!(cmap, vec![0, 1, 2]);
        let (single, _, _) = restricted_collection(&dc, &[2], &[0, 1, 2]).unwrap();
        assert_eq!(single.n(), 1);
        assert!(single.digraphs().iter().all(|d| d.edge_count() == 0));
        let (fewer, _, cmap) = restricted_collection(&dc, &[0, 1, 2, 3], &[0, 2]).unwrap();
        assert_eq!(fewer.m(), 2);
        assert_eq!(cmap, vec![0, 2]);
        assert!(restricted_collection(&dc, &[], &[0]).is_err());
        assert!(restricted_collection(&dc, &[0], &[]).is_err());
    }

    #[test]
    fn characteristic_bipartite_examples() {
        let bc = characteristic_bipartite(&DigraphCollection::uniform(&digon(), 1).unwrap());
        assert_eq!(bc.graph(0).edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        let bc = characteristic_bipartite(&DigraphCollection::uniform(&Digraph::empty(3), 1).unwrap());
        assert_eq!(bc.graph(0).edge_count(), 0);
        let bc = characteristic_bipartite(&DigraphCollection::uniform(&Digraph::complete(4), 1).unwrap());
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(bc.graph(0).has_edge(u, v), u != v);
            }
        }
    }

    #[test]
    fn bipartite_matching_validation() {
        let bc = BipartiteCollection::new(vec![BipartiteGraph::complete(2); 2]).unwrap();
        let cert = RainbowCertificate {
            kind: CertificateKind::Matching,
            edges: vec![(0, 1), (1, 0)],
            colors: vec![1, 0],
        };
        assert!(validate_bipartite_matching(&bc, &cert, true).is_valid());
        let clash = RainbowCertificate { edges: vec![(0, 1), (1, 1)], ..cert.clone() };
        assert!(validate_bipartite_matching(&bc, &clash, false).has_shape_violation());
        let short = RainbowCertificate { edges: vec![(0, 1)], colors: vec![0], ..cert };
        assert!(validate_bipartite_matching(&bc, &short, false).is_valid());
        assert!(!validate_bipartite_matching(&bc, &short, true).is_valid());
    }
}
