//! Transversal (rainbow) structures in collections of digraphs.

pub mod absorption;
pub mod bitset;
pub mod error;
pub mod experiments;
pub mod extremal;
pub mod matching;
pub mod model;
pub mod numeric;
pub mod regularity;
pub mod solvers;
pub mod stability;

pub use error::{Error, Result};
pub use model::{
    BipartiteCollection, BipartiteGraph, CertificateKind, CertificateReport, ColorList, Digraph,
    DigraphCollection, RainbowCertificate, Violation,
};
