use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};

use transversal_core::absorption::{absorb as absorb_cycle, enumerate_absorbers, AbsorberKind, Payload};
use transversal_core::experiments::{
    certificate_from_json, certificate_to_json, gen_bradshaw_collection, gen_random_collection, sweep_bradshaw,
    sweep_threshold, BradshawConfig, InstanceFile, InstanceMeta, PlantedMeta, ThresholdConfig,
};
use transversal_core::extremal::{
    classify_extremal_with, default_zeta_grid, gen_extremal, gen_tight_witness, ClassifyConfig, ExtremalKind,
    NicenessMode,
};
use transversal_core::model::{validate_bipartite_matching, validate_certificate};
use transversal_core::numeric::frac;
use transversal_core::regularity::{check_regular_slice, CollectionSlice, RegularityMode};
use transversal_core::solvers::{
    find_transversal_hamilton_cycle, find_transversal_hamilton_path, find_transversal_perfect_matching,
    max_rainbow_matching, oracle_transversal_hamilton_cycle, oracle_transversal_hamilton_path, rainbow_cycle_cover,
    SearchConfig, SolveOutcome, SolveStatus, DEFAULT_ORACLE_BOUND,
};
use transversal_core::stability::{classify_stability, records_from_classifier, StabilityParams};
use transversal_core::{BipartiteCollection, DigraphCollection, Error};

use crate::{AbsorbArgs, Campaign, Common, Family, GenArgs, KindArg, Mode, Problem, RegArgs, SweepArgs};

pub const OK: u8 = 0;
pub const INVALID: u8 = 2;
pub const BUDGET: u8 = 3;
pub const INTERNAL: u8 = 4;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) => BUDGET,
            _ => INVALID,
        };
        CliError { code, message: e.to_string() }
    }
}

fn internal(message: impl Into<String>) -> CliError {
    CliError { code: INTERNAL, message: message.into() }
}

type CliResult = Result<u8, CliError>;

pub fn init_threads(threads: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::from(Error::Io(format!("{}: {e}", path.display())))),
        None => {
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn emit_json(common: &Common, v: &Value) -> Result<(), CliError> {
    emit(common, &serde_json::to_string_pretty(v).expect("value serializes"))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn search(common: &Common) -> SearchConfig {
    SearchConfig::default()
        .with_time_budget(Duration::from_secs_f64(common.time_budget))
        .with_seed(common.seed)
        .parallel(common.threads != 1)
}

fn niceness_mode(common: &Common) -> NicenessMode {
    match common.mode {
        Mode::Exact => NicenessMode::Exact,
        Mode::Sampled => NicenessMode::Sampled { seed: common.seed },
    }
}

fn read_digraphs(path: &Path) -> Result<DigraphCollection, CliError> {
    Ok(InstanceFile::read(path)?.to_collection()?)
}

fn read_bipartite(path: &Path) -> Result<BipartiteCollection, CliError> {
    Ok(InstanceFile::read(path)?.to_bipartite()?)
}

fn read_certificate(path: &Path) -> Result<transversal_core::RainbowCertificate, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::from(Error::Io(format!("{}: {e}", path.display()))))?;
    Ok(certificate_from_json(&text)?)
}

/// 1-based external color to internal index.
fn color_index(c: usize, m: usize) -> Result<usize, CliError> {
    if c == 0 || c > m {
        return Err(CliError::from(Error::InvalidArgument(format!("color {c} is outside 1..={m}"))));
    }
    Ok(c - 1)
}

pub fn gen(common: &Common, a: &GenArgs) -> CliResult {
    let m = a.m.unwrap_or(a.n);
    let file = match a.family {
        Family::Random => {
            let (dc, log) = gen_random_collection(a.n, m, a.p, a.min_semidegree, common.seed)?;
            let mut meta = InstanceMeta { seed: Some(common.seed), ..Default::default() };
            if a.min_semidegree.is_some() {
                meta.extra.insert("repair_edges".into(), to_value(&log));
            }
            InstanceFile::from_collection(&dc, meta)
        }
        Family::Extremal => {
            let kind = match a.kind.to_ascii_uppercase().as_str() {
                "EC1" => ExtremalKind::Ec1,
                "EC2" => ExtremalKind::Ec2,
                "EC3" => ExtremalKind::Ec3,
                other => return Err(CliError::from(Error::InvalidArgument(format!("unknown kind {other}")))),
            };
            let (d, p) = gen_extremal(kind, a.n, frac(a.eps), a.zeta.map(frac), a.defect, common.seed)?;
            let dc = DigraphCollection::uniform(&d, m)?;
            // Defects can break the planted clauses; only exact plants carry the partition.
            let planted = (a.defect == 0.0).then_some(PlantedMeta { partition: p, colors: vec![] });
            InstanceFile::from_collection(&dc, InstanceMeta { seed: Some(common.seed), planted, ..Default::default() })
        }
        Family::Tight => InstanceFile::from_collection(&gen_tight_witness(a.n)?, InstanceMeta::default()),
        Family::Bradshaw => {
            let bc = gen_bradshaw_collection(a.n, a.p, common.seed)?;
            InstanceFile::from_bipartite(&bc, InstanceMeta { seed: Some(common.seed), ..Default::default() })
        }
    };
    emit(common, &file.to_json())?;
    Ok(OK)
}

fn report_outcome(common: &Common, out: &SolveOutcome, valid: bool) -> CliResult {
    eprintln!("status: {:?}, nodes: {}, exhausted: {}", out.status, out.stats.nodes, out.stats.exhausted);
    match (&out.certificate, out.status) {
        (Some(cert), SolveStatus::Found) => {
            if !valid {
                return Err(internal("solver returned a certificate that fails validation"));
            }
            emit_json(common, &certificate_to_json(cert))?;
            Ok(OK)
        }
        (_, SolveStatus::None) => {
            emit_json(common, &json!({"status": "none"}))?;
            Ok(OK)
        }
        _ => {
            emit_json(common, &json!({"status": "timeout"}))?;
            Ok(BUDGET)
        }
    }
}

pub fn solve(common: &Common, problem: Problem, path: &Path) -> CliResult {
    let cfg = search(common);
    match problem {
        Problem::Thc | Problem::Thp | Problem::Cover => {
            let dc = read_digraphs(path)?;
            let out = match problem {
                Problem::Thc => find_transversal_hamilton_cycle(&dc, &cfg)?,
                Problem::Thp => find_transversal_hamilton_path(&dc, &cfg)?,
                _ => rainbow_cycle_cover(&dc, &cfg)?,
            };
            let valid = out.certificate.as_ref().is_none_or(|c| validate_certificate(&dc, c).is_valid());
            report_outcome(common, &out, valid)
        }
        Problem::Pm => {
            let bc = read_bipartite(path)?;
            let out = find_transversal_perfect_matching(&bc, &cfg)?;
            let valid = out.certificate.as_ref().is_none_or(|c| validate_bipartite_matching(&bc, c, true).is_valid());
            report_outcome(common, &out, valid)
        }
        Problem::Rm => {
            let bc = read_bipartite(path)?;
            let r = max_rainbow_matching(&bc, &cfg)?;
            if !validate_bipartite_matching(&bc, &r.certificate, false).is_valid() {
                return Err(internal("maximum rainbow matching fails validation"));
            }
            let mut v = certificate_to_json(&r.certificate);
            v["size"] = json!(r.size);
            v["optimal"] = json!(r.optimal);
            emit_json(common, &v)?;
            Ok(if r.optimal { OK } else { BUDGET })
        }
    }
}

pub fn oracle(common: &Common, problem: Problem, path: &Path) -> CliResult {
    let dc = read_digraphs(path)?;
    let r = match problem {
        Problem::Thc => oracle_transversal_hamilton_cycle(&dc)?,
        Problem::Thp => oracle_transversal_hamilton_path(&dc, DEFAULT_ORACLE_BOUND)?,
        _ => return Err(CliError::from(Error::InvalidArgument("the oracle covers thc and thp".into()))),
    };
    let mut v = json!({"exists": r.exists(), "count": r.count, "hamilton_count": r.hamilton_count});
    if let Some(c) = &r.outcome.certificate {
        v["certificate"] = certificate_to_json(c);
    }
    emit_json(common, &v)?;
    Ok(OK)
}

pub fn classify(common: &Common, path: &Path, eps: f64, color: Option<usize>) -> CliResult {
    let dc = read_digraphs(path)?;
    let colors: Vec<usize> = match color {
        Some(c) => vec![color_index(c, dc.m())?],
        None => (0..dc.m()).collect(),
    };
    let cfg = ClassifyConfig { seed: common.seed, ..Default::default() };
    let grid = default_zeta_grid();
    let mut out = Vec::new();
    for c in colors {
        let cl = classify_extremal_with(dc.digraph(c), frac(eps), &grid, &cfg)?;
        out.push(json!({"color": c + 1, "kind": cl.kind().map(|k| k.to_string()), "classification": to_value(&cl)}));
    }
    emit_json(common, &Value::Array(out))?;
    Ok(OK)
}

pub fn stability(common: &Common, path: &Path, [gamma, alpha, eps, delta]: [f64; 4]) -> CliResult {
    let dc = read_digraphs(path)?;
    let mode = niceness_mode(common);
    let cfg = ClassifyConfig { seed: common.seed, ..Default::default() };
    let records = records_from_classifier(&dc, frac(eps), &default_zeta_grid(), mode, &cfg)?;
    let params = StabilityParams { gamma: frac(gamma), alpha: frac(alpha), epsilon: frac(eps), delta: frac(delta) };
    let report = classify_stability(&dc, params, &records, mode)?;
    let mut v = to_value(&report);
    v["label"] = json!(report.verdict.label());
    emit_json(common, &v)?;
    Ok(OK)
}

pub fn absorb(common: &Common, a: &AbsorbArgs) -> CliResult {
    let dc = read_digraphs(&a.instance)?;
    let cycle = read_certificate(&a.cycle)?;
    let c = color_index(a.color, dc.m())?;
    let u = a.u.unwrap_or(a.v);
    let kind = match a.kind {
        KindArg::TypeI => AbsorberKind::TypeI,
        KindArg::TypeIi => AbsorberKind::TypeII,
    };
    let scan = enumerate_absorbers(&dc, &cycle, c, a.v, u, kind)?;
    let mut v = to_value(&scan);
    if a.apply {
        let Some(w) = scan.witnesses.first() else {
            return Err(CliError::from(Error::InvalidArgument("no absorber to apply".into())));
        };
        let payload = match &a.payload {
            Some(p) => {
                let cert = read_certificate(p)?;
                Payload::path(cert.vertex_sequence(), cert.colors.clone())
            }
            None => Payload::single(a.v),
        };
        let out = absorb_cycle(&dc, &cycle, w, &payload)?;
        if !validate_certificate(&dc, &out).is_valid() {
            return Err(internal("absorption produced an invalid cycle"));
        }
        v["result"] = certificate_to_json(&out);
    }
    emit_json(common, &v)?;
    Ok(OK)
}

pub fn regcheck(common: &Common, a: &RegArgs) -> CliResult {
    let dc = read_digraphs(&a.instance)?;
    let colors: Vec<usize> = if a.colors.is_empty() {
        (0..dc.m()).collect()
    } else {
        a.colors.iter().map(|&c| color_index(c, dc.m())).collect::<Result<_, _>>()?
    };
    let s = CollectionSlice::new(&dc, &a.v1, &a.v2, &colors)?;
    let mode = match common.mode {
        Mode::Exact => RegularityMode::Exact,
        Mode::Sampled => RegularityMode::Sampled { trials: a.trials, seed: common.seed },
    };
    let verdict = check_regular_slice(&s, frac(a.eps), frac(a.d), mode)?;
    let mut v = to_value(&verdict);
    if let Some(cs) = v["witness"]["colors"].as_array_mut() {
        for c in cs {
            *c = json!(c.as_u64().unwrap_or(0) + 1);
        }
    }
    emit_json(common, &v)?;
    Ok(OK)
}

pub fn sweep(common: &Common, a: &SweepArgs) -> CliResult {
    let budget = Duration::from_secs_f64(common.time_budget);
    match a.campaign {
        Campaign::Threshold => {
            let cfg = ThresholdConfig {
                n_min: a.n_min,
                n_max: a.n_max,
                trials: a.trials,
                seed: common.seed,
                p: a.p,
                time_budget: budget,
                artifact_dir: a.artifacts.clone(),
                companion: !a.no_companion,
            };
            let r = sweep_threshold(&cfg)?;
            emit(common, &r.to_json())?;
            let found = r.counterexamples().count();
            if found > 0 {
                eprintln!("{found} confirmed counterexample(s) recorded");
            }
            if r.summary.solver_disagreements > 0 {
                return Err(internal("the oracle contradicted a solver none verdict"));
            }
            Ok(OK)
        }
        Campaign::Bradshaw => {
            let cfg = BradshawConfig {
                n_min: a.n_min,
                n_max: a.n_max,
                trials: a.trials,
                seed: common.seed,
                p: a.p,
                time_budget: budget,
            };
            let r = sweep_bradshaw(&cfg)?;
            emit(common, &r.to_json())?;
            if r.summary.none > 0 {
                return Err(internal(format!("{} trials without a transversal perfect matching", r.summary.none)));
            }
            Ok(if r.summary.timeout > 0 { BUDGET } else { OK })
        }
    }
}
