//! Extremal digraph families, ε-niceness, and characteristic partitions.

pub mod classify;
pub mod niceness;
pub mod partition;

pub use classify::{classify_extremal, classify_extremal_with, default_zeta_grid, Classification, ClassifyConfig, ClassifyMethod};
pub use niceness::{binomial, is_bipartite_extremal, is_eps_nice, is_eps_nice_bipartite, NicenessMode, NicenessVerdict, NicenessWitness};
pub use partition::{
    gen_extremal, gen_tight_witness, partition_agreement, template_sizes, verify_partition, CharacteristicPartition, ClauseCheck,
    ExtremalKind, PartitionParams, PartitionReport,
};
