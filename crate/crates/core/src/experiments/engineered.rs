//! Random instances with a planted absorber, for exercising the absorption
//! rewrite at volume.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::absorption::{AbsorberKind, AbsorberWitness, Payload};
use crate::error::{invalid, Result};
use crate::model::{BipartiteCollection, BipartiteGraph, CertificateKind, Digraph, DigraphCollection, RainbowCertificate};

#[derive(Clone, Debug)]
pub struct EngineeredCycle {
    pub dc: DigraphCollection,
    pub cycle: RainbowCertificate,
    pub witness: AbsorberWitness,
    pub payload: Payload,
}

/// A rainbow cycle with one planted absorber of `kind` for a payload of
/// `payload_len` vertices (1 means the single-vertex case) on top of random
/// noise of density `noise`.
pub fn engineered_cycle(n: usize, kind: AbsorberKind, payload_len: usize, noise: f64, seed: u64) -> Result<EngineeredCycle> {
    if kind == AbsorberKind::BipEdge {
        return invalid("cycle absorbers are Type I or Type II");
    }
    if payload_len == 0 || n < 4 + payload_len {
        return invalid(format!("need n ≥ 4 + payload length, got n = {n}, payload {payload_len}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = rng.gen_range(4..=n - payload_len);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(&mut rng);
    let seq = verts[..t].to_vec();
    let block = verts[t..t + payload_len].to_vec();
    // Colors: t on the cycle, payload_len − 1 in the payload, one absorbing color, and a spare.
    let m = n + 1;
    let mut colors: Vec<usize> = (0..m).collect();
    colors.shuffle(&mut rng);
    let cycle_colors = colors[..t].to_vec();
    let payload_colors = colors[t..t + payload_len - 1].to_vec();
    let c = colors[t + payload_len - 1];

    let mut ds: Vec<Digraph> = (0..m).map(|_| crate::experiments::gen_random_digraph(n, noise, &mut rng)).collect();
    for k in 0..t {
        ds[cycle_colors[k]].add_edge(seq[k], seq[(k + 1) % t])?;
    }
    for k in 0..payload_len - 1 {
        ds[payload_colors[k]].add_edge(block[k], block[k + 1])?;
    }
    let (head, tail) = (block[0], block[payload_len - 1]);
    // Type I payload runs v … u; Type II runs u … v.
    let (v, u) = match kind {
        AbsorberKind::TypeI => (head, tail),
        _ => (tail, head),
    };
    let p = rng.gen_range(0..t);
    let (v2, v3) = (seq[(p + 1) % t], seq[(p + 2) % t]);
    let mid = cycle_colors[(p + 1) % t];
    match kind {
        AbsorberKind::TypeI => {
            ds[c].add_edge(v2, v)?;
            ds[mid].add_edge(u, v3)?;
        }
        _ => {
            ds[mid].add_edge(v2, u)?;
            ds[c].add_edge(v, v3)?;
        }
    }
    let dc = DigraphCollection::new(ds)?;
    let cycle = RainbowCertificate::cycle(&seq, &cycle_colors);
    let witness = AbsorberWitness {
        kind,
        position: p,
        segment: (0..4).map(|k| seq[(p + k) % t]).collect(),
        segment_colors: (0..3).map(|k| cycle_colors[(p + k) % t]).collect(),
        color: c,
        v,
        u,
    };
    let payload = if payload_len == 1 { Payload::single(v) } else { Payload::path(block, payload_colors) };
    Ok(EngineeredCycle { dc, cycle, witness, payload })
}

#[derive(Clone, Debug)]
pub struct EngineeredMatching {
    pub bc: BipartiteCollection,
    pub matching: RainbowCertificate,
    pub position: usize,
    pub u: usize,
    pub v: usize,
    pub color: usize,
}

/// A rainbow matching with a planted `c`-absorbing edge for an uncovered pair.
pub fn engineered_matching(n: usize, noise: f64, seed: u64) -> Result<EngineeredMatching> {
    if n < 2 {
        return invalid("need n ≥ 2");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = rng.gen_range(1..n);
    let mut left: Vec<usize> = (0..n).collect();
    let mut right: Vec<usize> = (0..n).collect();
    left.shuffle(&mut rng);
    right.shuffle(&mut rng);
    let m = n;
    let mut colors: Vec<usize> = (0..m).collect();
    colors.shuffle(&mut rng);
    let mut gs: Vec<BipartiteGraph> = (0..m)
        .map(|_| {
            let mut g = BipartiteGraph::empty(n);
            for a in 0..n {
                for b in 0..n {
                    if rng.gen_bool(noise) {
                        g.add_edge(a, b).expect("pair is valid");
                    }
                }
            }
            g
        })
        .collect();
    let edges: Vec<(usize, usize)> = (0..s).map(|k| (left[k], right[k])).collect();
    let mcolors = colors[..s].to_vec();
    for (k, &(a, b)) in edges.iter().enumerate() {
        gs[mcolors[k]].add_edge(a, b)?;
    }
    let (u, v, c) = (left[s], right[s], colors[s]);
    let position = rng.gen_range(0..s);
    let (w1, w2) = edges[position];
    gs[c].add_edge(w1, v)?;
    gs[mcolors[position]].add_edge(u, w2)?;
    Ok(EngineeredMatching {
        bc: BipartiteCollection::new(gs)?,
        matching: RainbowCertificate { kind: CertificateKind::Matching, edges, colors: mcolors },
        position,
        u,
        v,
        color: c,
    })
}
