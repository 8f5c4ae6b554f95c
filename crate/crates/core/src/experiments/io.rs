//! Instance and certificate files.
//!
//! Instances: `{"schema":1,"n":N,"m":M,"digraphs":[{"edges":[[u,v],…]},…],"meta":{…}}`
//! with 0-based vertices. Certificates use 1-based colors.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extremal::{verify_partition, CharacteristicPartition};
use crate::model::{BipartiteCollection, BipartiteGraph, CertificateKind, Digraph, DigraphCollection, RainbowCertificate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `"digraph"` (default) or `"bipartite"`; bipartite edges are `[left, right]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    /// A planted characteristic partition, valid for every listed color.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<PlantedMeta>,
    /// Free-form notes such as repair logs.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub extra: serde_json::Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedMeta {
    pub partition: CharacteristicPartition,
    /// Colors the partition describes; empty means all.
    #[serde(default)]
    pub colors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeList {
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub digraphs: Vec<EdgeList>,
    #[serde(default)]
    pub meta: InstanceMeta,
}

pub enum Instance {
    Digraphs(DigraphCollection),
    Bipartite(BipartiteCollection),
}

fn parse_err<T>(msg: String) -> Result<T> {
    Err(Error::Parse(msg))
}

impl InstanceFile {
    pub fn from_collection(dc: &DigraphCollection, meta: InstanceMeta) -> Self {
        InstanceFile {
            schema: SCHEMA_VERSION,
            n: dc.n(),
            m: dc.m(),
            digraphs: dc.digraphs().iter().map(|d| EdgeList { edges: d.edges().map(|(u, v)| [u, v]).collect() }).collect(),
            meta,
        }
    }

    pub fn from_bipartite(bc: &BipartiteCollection, mut meta: InstanceMeta) -> Self {
        meta.graph = Some("bipartite".into());
        InstanceFile {
            schema: SCHEMA_VERSION,
            n: bc.n(),
            m: bc.m(),
            digraphs: bc.graphs().iter().map(|g| EdgeList { edges: g.edges().map(|(u, v)| [u, v]).collect() }).collect(),
            meta,
        }
    }

    /// Parses JSON text; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).or_else(|e| parse_err(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn is_bipartite(&self) -> bool {
        self.meta.graph.as_deref() == Some("bipartite")
    }

    fn check_shape(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return parse_err(format!("schema: unsupported version {}, expected {SCHEMA_VERSION}", self.schema));
        }
        if self.digraphs.len() != self.m {
            return parse_err(format!("digraphs: {} entries, but m = {}", self.digraphs.len(), self.m));
        }
        if self.m == 0 {
            return parse_err("m: a collection needs at least one color".into());
        }
        if let Some(g) = self.meta.graph.as_deref() {
            if g != "digraph" && g != "bipartite" {
                return parse_err(format!("meta.graph: unknown graph type {g:?}"));
            }
        }
        Ok(())
    }

    fn check_edge(&self, c: usize, k: usize, [u, v]: [usize; 2], loops_ok: bool) -> Result<()> {
        if u >= self.n || v >= self.n {
            return parse_err(format!("digraphs[{c}].edges[{k}]: vertex out of range for n = {}", self.n));
        }
        if u == v && !loops_ok {
            return parse_err(format!("digraphs[{c}].edges[{k}]: loop at vertex {u}"));
        }
        Ok(())
    }

    /// Builds the digraph collection and checks planted metadata.
    pub fn to_collection(&self) -> Result<DigraphCollection> {
        self.check_shape()?;
        if self.is_bipartite() {
            return parse_err("meta.graph: instance is bipartite".into());
        }
        let mut ds = Vec::with_capacity(self.m);
        for (c, list) in self.digraphs.iter().enumerate() {
            let mut d = Digraph::empty(self.n);
            for (k, &e) in list.edges.iter().enumerate() {
                self.check_edge(c, k, e, false)?;
                if !d.add_edge(e[0], e[1])? {
                    return parse_err(format!("digraphs[{c}].edges[{k}]: duplicate edge ({}, {})", e[0], e[1]));
                }
            }
            ds.push(d);
        }
        let dc = DigraphCollection::new(ds)?;
        if let Some(p) = &self.meta.planted {
            let colors: Vec<usize> = if p.colors.is_empty() { (0..self.m).collect() } else { p.colors.clone() };
            for c in colors {
                if c >= self.m {
                    return parse_err(format!("meta.planted.colors: color index {c} out of range"));
                }
                let params = &p.partition.params;
                let report = verify_partition(dc.digraph(c), &p.partition, params.epsilon, params.zeta)?;
                if !report.passed() {
                    return parse_err(format!(
                        "meta.planted: partition fails on color {}: {:?}",
                        c + 1,
                        report.failed_clauses()
                    ));
                }
            }
        }
        Ok(dc)
    }

    pub fn to_bipartite(&self) -> Result<BipartiteCollection> {
        self.check_shape()?;
        if !self.is_bipartite() {
            return parse_err("meta.graph: instance is not bipartite".into());
        }
        let mut gs = Vec::with_capacity(self.m);
        for (c, list) in self.digraphs.iter().enumerate() {
            let mut g = BipartiteGraph::empty(self.n);
            for (k, &e) in list.edges.iter().enumerate() {
                self.check_edge(c, k, e, true)?;
                if !g.add_edge(e[0], e[1])? {
                    return parse_err(format!("digraphs[{c}].edges[{k}]: duplicate edge ({}, {})", e[0], e[1]));
                }
            }
            gs.push(g);
        }
        BipartiteCollection::new(gs)
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.is_bipartite() {
            self.to_bipartite().map(Instance::Bipartite)
        } else {
            self.to_collection().map(Instance::Digraphs)
        }
    }
}

/// External certificate form with 1-based colors. Cycles and paths are
/// written as vertex sequences, other kinds as edge lists.
pub fn certificate_to_json(cert: &RainbowCertificate) -> Value {
    let colors: Vec<usize> = cert.colors.iter().map(|c| c + 1).collect();
    match cert.kind {
        CertificateKind::HamiltonCycle | CertificateKind::Cycle => {
            json!({"kind": cert.kind.to_string(), "cycle": cert.vertex_sequence(), "colors": colors})
        }
        CertificateKind::HamiltonPath | CertificateKind::Path => {
            json!({"kind": cert.kind.to_string(), "path": cert.vertex_sequence(), "colors": colors})
        }
        CertificateKind::Matching | CertificateKind::CycleCover => {
            let edges: Vec<[usize; 2]> = cert.edges.iter().map(|&(u, v)| [u, v]).collect();
            json!({"kind": cert.kind.to_string(), "edges": edges, "colors": colors})
        }
    }
}

#[derive(Deserialize)]
struct CertificateFile {
    kind: CertificateKind,
    #[serde(default)]
    cycle: Option<Vec<usize>>,
    #[serde(default)]
    path: Option<Vec<usize>>,
    #[serde(default)]
    edges: Option<Vec<[usize; 2]>>,
    colors: Vec<usize>,
}

pub fn certificate_from_json(text: &str) -> Result<RainbowCertificate> {
    let f: CertificateFile =
        serde_json::from_str(text).or_else(|e| parse_err(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if let Some(k) = f.colors.iter().position(|&c| c == 0) {
        return parse_err(format!("colors[{k}]: colors are 1-based"));
    }
    let colors: Vec<usize> = f.colors.iter().map(|c| c - 1).collect();
    let cert = match f.kind {
        CertificateKind::HamiltonCycle | CertificateKind::Cycle => {
            let Some(cycle) = f.cycle else { return parse_err("cycle: missing".into()) };
            RainbowCertificate { kind: f.kind, ..RainbowCertificate::from_cycle(&cycle, &colors) }
        }
        CertificateKind::HamiltonPath | CertificateKind::Path => {
            let Some(path) = f.path else { return parse_err("path: missing".into()) };
            RainbowCertificate { kind: f.kind, ..RainbowCertificate::from_path(&path, &colors) }
        }
        CertificateKind::Matching | CertificateKind::CycleCover => {
            let Some(edges) = f.edges else { return parse_err("edges: missing".into()) };
            RainbowCertificate { kind: f.kind, edges: edges.iter().map(|e| (e[0], e[1])).collect(), colors }
        }
    };
    if cert.edges.len() != cert.colors.len() {
        return parse_err(format!("colors: {} colors for {} edges", cert.colors.len(), cert.edges.len()));
    }
    Ok(cert)
}
