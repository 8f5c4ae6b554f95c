//! Instance files, random samplers and reproducible campaigns.

pub mod campaign;
pub mod engineered;
pub mod io;
pub mod sampling;

pub use campaign::{
    derive_seed, revalidate, sweep_bradshaw, sweep_threshold, BradshawConfig, CampaignReport, CampaignSummary,
    ThresholdConfig, TrialRecord,
};
pub use engineered::{engineered_cycle, engineered_matching, EngineeredCycle, EngineeredMatching};
pub use io::{certificate_from_json, certificate_to_json, Instance, InstanceFile, InstanceMeta, PlantedMeta, SCHEMA_VERSION};
pub use sampling::{gen_bradshaw_collection, gen_random_collection, gen_random_digraph, RepairEdge};
