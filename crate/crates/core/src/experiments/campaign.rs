//! Reproducible campaigns over random instances.
//!
//! Trial `i` draws its instance from `derive_seed(master, i)`, so the records
//! do not depend on how trials are scheduled across threads.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::io::{InstanceFile, InstanceMeta};
use super::sampling::{gen_bradshaw_collection, gen_random_collection};
use crate::error::{invalid, Result};
use crate::extremal::gen_tight_witness;
use crate::model::{collection_semi_degree, DigraphCollection};
use crate::solvers::{
    find_transversal_hamilton_cycle, find_transversal_perfect_matching, oracle_transversal_hamilton_cycle, splitmix64,
    SearchConfig, SolveStatus, DEFAULT_ORACLE_BOUND,
};

const COMPANION_SALT: u64 = 0x636f_6d70_616e_696f;

/// Keys removed by [`CampaignReport::canonical_json`].
pub const TIMING_KEYS: [&str; 2] = ["time_ms", "runtime_ms"];

pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub n: usize,
    pub seed: u64,
    /// `"random"` or `"tight-witness"`.
    pub source: String,
    pub semidegree: usize,
    pub repair_edges: usize,
    pub status: SolveStatus,
    pub nodes: u64,
    /// Oracle verdict on `none` results within the oracle's range.
    pub oracle_exists: Option<bool>,
    pub counterexample: bool,
    pub artifact: Option<String>,
    pub artifact_revalidated: Option<bool>,
    pub time_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub trials: usize,
    pub found: usize,
    pub none: usize,
    pub timeout: usize,
    /// `none` verdicts the oracle confirmed.
    pub confirmed_none: usize,
    /// `none` verdicts the oracle contradicted; these are solver bugs.
    pub solver_disagreements: usize,
    pub runtime_ms: f64,
}

impl CampaignSummary {
    fn of(records: &[TrialRecord], runtime: Duration) -> Self {
        let count = |s: SolveStatus| records.iter().filter(|r| r.status == s).count();
        CampaignSummary {
            trials: records.len(),
            found: count(SolveStatus::Found),
            none: count(SolveStatus::None),
            timeout: count(SolveStatus::Timeout),
            confirmed_none: records.iter().filter(|r| r.oracle_exists == Some(false)).count(),
            solver_disagreements: records.iter().filter(|r| r.oracle_exists == Some(true)).count(),
            runtime_ms: runtime.as_secs_f64() * 1e3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub config: Value,
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
    /// Instances just below the threshold, including the tight witnesses.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub companion: Vec<TrialRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companion_summary: Option<CampaignSummary>,
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for k in TIMING_KEYS {
                map.remove(k);
            }
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

impl CampaignReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without timing fields; identical across reruns with the same config.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        strip_timing(&mut v);
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    /// Records that the oracle confirmed as having no transversal Hamilton cycle.
    pub fn counterexamples(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| r.counterexample)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdConfig {
    pub n_min: usize,
    pub n_max: usize,
    /// Trials per `n`.
    pub trials: usize,
    pub seed: u64,
    /// Edge probability before repair.
    pub p: f64,
    /// Per-trial solver budget.
    pub time_budget: Duration,
    /// Where confirmed counterexamples are written.
    pub artifact_dir: Option<PathBuf>,
    pub companion: bool,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            n_min: 4,
            n_max: 8,
            trials: 100,
            seed: 0,
            p: 0.3,
            time_budget: Duration::from_secs(10),
            artifact_dir: None,
            companion: true,
        }
    }
}

impl ThresholdConfig {
    fn echo(&self) -> Value {
        json!({
            "n_min": self.n_min,
            "n_max": self.n_max,
            "trials": self.trials,
            "seed": self.seed,
            "p": self.p,
            "time_budget_ms": self.time_budget.as_millis() as u64,
            "artifact_dir": self.artifact_dir.as_ref().map(|p| p.display().to_string()),
            "companion": self.companion,
            "oracle_max_n": DEFAULT_ORACLE_BOUND,
        })
    }
}

struct Job {
    index: usize,
    n: usize,
    seed: u64,
    tight: bool,
    bound: usize,
}

fn run_threshold_trial(job: &Job, cfg: &ThresholdConfig, hunt: bool) -> Result<TrialRecord> {
    let start = Instant::now();
    let (dc, repairs) = if job.tight {
        (gen_tight_witness(job.n)?, 0)
    } else {
        let (dc, log) = gen_random_collection(job.n, job.n, cfg.p, Some(job.bound), job.seed)?;
        (dc, log.len())
    };
    let search = SearchConfig::default().with_time_budget(cfg.time_budget);
    let out = find_transversal_hamilton_cycle(&dc, &search)?;
    let mut rec = TrialRecord {
        index: job.index,
        n: job.n,
        seed: job.seed,
        source: if job.tight { "tight-witness" } else { "random" }.into(),
        semidegree: collection_semi_degree(&dc),
        repair_edges: repairs,
        status: out.status,
        nodes: out.stats.nodes,
        oracle_exists: None,
        counterexample: false,
        artifact: None,
        artifact_revalidated: None,
        time_ms: 0.0,
    };
    if out.is_none() && job.n <= DEFAULT_ORACLE_BOUND {
        let exists = oracle_transversal_hamilton_cycle(&dc)?.exists();
        rec.oracle_exists = Some(exists);
        // Below the threshold a missing cycle is expected, not a finding.
        if hunt && !exists {
            rec.counterexample = true;
            if let Some(dir) = &cfg.artifact_dir {
                let path = dir.join(format!("counterexample-n{}-trial{}.json", job.n, job.index));
                let mut meta = InstanceMeta { seed: Some(job.seed), ..Default::default() };
                meta.extra.insert("campaign".into(), json!("threshold"));
                meta.extra.insert("trial".into(), json!(job.index));
                InstanceFile::from_collection(&dc, meta).write(&path)?;
                rec.artifact_revalidated = Some(revalidate(&path)?);
                rec.artifact = Some(path.display().to_string());
            }
        }
    }
    rec.time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rec)
}

/// Re-reads a counterexample artifact and asks the oracle again.
pub fn revalidate(path: &std::path::Path) -> Result<bool> {
    let dc: DigraphCollection = InstanceFile::read(path)?.to_collection()?;
    Ok(!oracle_transversal_hamilton_cycle(&dc)?.exists())
}

/// Samples collections with `δ⁰ ≥ ⌈n/2⌉` and searches each for a
/// transversal Hamilton cycle. The companion sweep repeats this at
/// `⌈n/2⌉ − 1` and adds the tight witness for every `n ≥ 4`.
pub fn sweep_threshold(cfg: &ThresholdConfig) -> Result<CampaignReport> {
    if cfg.n_min < 2 || cfg.n_max < cfg.n_min {
        return invalid(format!("bad n range {}..={}", cfg.n_min, cfg.n_max));
    }
    if let Some(dir) = &cfg.artifact_dir {
        std::fs::create_dir_all(dir).map_err(|e| crate::Error::Io(format!("{}: {e}", dir.display())))?;
    }
    let start = Instant::now();
    let ns: Vec<usize> = (cfg.n_min..=cfg.n_max).collect();
    let jobs: Vec<Job> = ns
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .enumerate()
        .map(|(index, (n, _))| Job { index, n, seed: derive_seed(cfg.seed, index as u64), tight: false, bound: n.div_ceil(2) })
        .collect();
    let records = jobs.par_iter().map(|j| run_threshold_trial(j, cfg, true)).collect::<Result<Vec<_>>>()?;
    let summary = CampaignSummary::of(&records, start.elapsed());

    let (mut companion, mut companion_summary) = (Vec::new(), None);
    if cfg.companion && cfg.trials > 0 {
        let c_start = Instant::now();
        let mut cjobs: Vec<Job> = Vec::new();
        for &n in &ns {
            for _ in 0..cfg.trials {
                let index = cjobs.len();
                let seed = derive_seed(cfg.seed ^ COMPANION_SALT, index as u64);
                cjobs.push(Job { index, n, seed, tight: false, bound: n.div_ceil(2) - 1 });
            }
            if n >= 4 {
                cjobs.push(Job { index: cjobs.len(), n, seed: 0, tight: true, bound: n.div_ceil(2) - 1 });
            }
        }
        companion = cjobs.par_iter().map(|j| run_threshold_trial(j, cfg, false)).collect::<Result<Vec<_>>>()?;
        companion_summary = Some(CampaignSummary::of(&companion, c_start.elapsed()));
    }
    Ok(CampaignReport {
        campaign: "threshold".into(),
        config: cfg.echo(),
        records,
        summary,
        companion,
        companion_summary,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BradshawConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub p: f64,
    pub time_budget: Duration,
}

impl Default for BradshawConfig {
    fn default() -> Self {
        BradshawConfig { n_min: 3, n_max: 5, trials: 200, seed: 0, p: 0.3, time_budget: Duration::from_secs(10) }
    }
}

/// Samples bipartite collections meeting the degree hypotheses and searches
/// each for a transversal perfect matching. Anything but `found` is a bug.
pub fn sweep_bradshaw(cfg: &BradshawConfig) -> Result<CampaignReport> {
    if cfg.n_min < 1 || cfg.n_max < cfg.n_min {
        return invalid(format!("bad n range {}..={}", cfg.n_min, cfg.n_max));
    }
    let start = Instant::now();
    let jobs: Vec<(usize, usize)> =
        (cfg.n_min..=cfg.n_max).flat_map(|n| (0..cfg.trials).map(move |_| n)).enumerate().collect();
    let search = SearchConfig::default().with_time_budget(cfg.time_budget);
    let records = jobs
        .par_iter()
        .map(|&(index, n)| {
            let t0 = Instant::now();
            let seed = derive_seed(cfg.seed, index as u64);
            let bc = gen_bradshaw_collection(n, cfg.p, seed)?;
            let out = find_transversal_perfect_matching(&bc, &search)?;
            let semidegree = bc
                .graphs()
                .iter()
                .flat_map(|g| (0..n).map(move |v| g.left_degree(v).min(g.right_degree(v))))
                .min()
                .unwrap_or(0);
            Ok(TrialRecord {
                index,
                n,
                seed,
                source: "random".into(),
                semidegree,
                repair_edges: 0,
                status: out.status,
                nodes: out.stats.nodes,
                oracle_exists: None,
                counterexample: out.is_none(),
                artifact: None,
                artifact_revalidated: None,
                time_ms: t0.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = CampaignSummary::of(&records, start.elapsed());
    Ok(CampaignReport {
        campaign: "bradshaw".into(),
        config: json!({
            "n_min": cfg.n_min,
            "n_max": cfg.n_max,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "p": cfg.p,
            "time_budget_ms": cfg.time_budget.as_millis() as u64,
        }),
        records,
        summary,
        companion: Vec::new(),
        companion_summary: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_empty() {
        let cfg = ThresholdConfig { trials: 0, ..Default::default() };
        let r = sweep_threshold(&cfg).unwrap();
        assert!(r.records.is_empty() && r.companion.is_empty());
        assert_eq!(r.summary.trials, 0);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["campaign"], "threshold");
    }

    #[test]
    fn small_threshold_sweep() {
        let cfg = ThresholdConfig { n_min: 4, n_max: 5, trials: 20, seed: 7, ..Default::default() };
        let r = sweep_threshold(&cfg).unwrap();
        assert_eq!(r.summary.trials, 40);
        assert!(r.records.iter().all(|t| t.semidegree >= t.n.div_ceil(2)));
        assert_eq!(r.summary.solver_disagreements, 0);
        let tight: Vec<_> = r.companion.iter().filter(|t| t.source == "tight-witness").collect();
        assert_eq!(tight.len(), 2);
        assert!(tight.iter().all(|t| t.status == SolveStatus::None && t.oracle_exists == Some(false)));
    }

    #[test]
    fn canonical_json_is_reproducible() {
        let cfg = BradshawConfig { n_min: 3, n_max: 4, trials: 10, seed: 5, ..Default::default() };
        let a = sweep_bradshaw(&cfg).unwrap();
        let b = sweep_bradshaw(&cfg).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(!a.canonical_json().contains("time_ms"));
        assert_eq!(a.summary.found, 20);
    }
}
