//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use transversal_core::absorption::{absorb, absorb_edge, enumerate_absorbers, is_absorbing_path, AbsorberKind};
use transversal_core::experiments::{
    certificate_to_json, engineered_cycle, engineered_matching, gen_random_collection, gen_random_digraph, revalidate,
    sweep_bradshaw, sweep_threshold, BradshawConfig, CampaignReport, ThresholdConfig,
};
use transversal_core::extremal::{
    classify_extremal, default_zeta_grid, gen_extremal, gen_tight_witness, is_eps_nice, partition_agreement,
    verify_partition, ExtremalKind, NicenessMode,
};
use transversal_core::model::{collection_semi_degree, validate_bipartite_matching, validate_certificate};
use transversal_core::numeric::{frac, half_minus, Frac};
use transversal_core::regularity::{
    build_auxiliary_4graph, check_regular_slice, degree_identities, slice_density, verify_witness, CollectionSlice,
    RegularityMode,
};
use transversal_core::solvers::{
    find_transversal_hamilton_cycle, find_transversal_hamilton_path, find_transversal_perfect_matching,
    oracle_transversal_hamilton_cycle, rainbow_cycle_cover, SearchConfig, SolveStatus,
};
use transversal_core::{BipartiteCollection, BipartiteGraph, Digraph, DigraphCollection};

const SEED: u64 = 20_240_601;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn random_collection(n: usize, m: usize, p: f64, rng: &mut ChaCha8Rng) -> DigraphCollection {
    DigraphCollection::new((0..m).map(|_| gen_random_digraph(n, p, rng)).collect()).unwrap()
}

fn directed_cycle(n: usize, shift: usize) -> Digraph {
    Digraph::from_edges(n, (0..n).map(|i| ((i + shift) % n, (i + shift + 1) % n))).unwrap()
}

fn transitive(n: usize) -> Digraph {
    Digraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

// ---- 1 ---------------------------------------------------------------------

fn oracle_corpus() -> Vec<DigraphCollection> {
    let mut r = rng(1);
    let mut out = Vec::new();
    for i in 0..240 {
        let n = 2 + i % 5;
        let p = r.gen_range(0.15..0.95);
        out.push(random_collection(n, n, p, &mut r));
    }
    for n in 3..=6 {
        out.push(DigraphCollection::uniform(&Digraph::complete(n), n).unwrap());
        out.push(DigraphCollection::uniform(&transitive(n), n).unwrap());
        out.push(DigraphCollection::new((0..n).map(|s| directed_cycle(n, s)).collect()).unwrap());
        // One color missing every edge kills any transversal.
        let mut ds = vec![Digraph::complete(n); n];
        ds[n - 1] = Digraph::empty(n);
        out.push(DigraphCollection::new(ds).unwrap());
    }
    for n in 4..=6 {
        out.push(gen_tight_witness(n).unwrap());
    }
    out
}

/// Per-instance verdicts and certificates; compared byte for byte across worker counts.
fn oracle_report(corpus: &[DigraphCollection]) -> Result<(String, usize), String> {
    use rayon::prelude::*;
    let cfg = SearchConfig::default().parallel(true);
    let rows: Vec<Result<serde_json::Value, String>> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, dc)| {
            let out = find_transversal_hamilton_cycle(dc, &cfg).map_err(|e| e.to_string())?;
            let oracle = oracle_transversal_hamilton_cycle(dc).map_err(|e| e.to_string())?;
            ensure(out.status != SolveStatus::Timeout, || format!("instance {i} timed out"))?;
            ensure(out.found() == oracle.exists(), || format!("instance {i}: solver {} vs oracle {}", out.found(), oracle.exists()))?;
            if let Some(c) = &out.certificate {
                ensure(validate_certificate(dc, c).is_valid(), || format!("instance {i}: invalid certificate"))?;
            }
            Ok(json!({"i": i, "exists": oracle.exists(), "count": oracle.count, "cert": out.certificate.as_ref().map(certificate_to_json)}))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let yes = rows.iter().filter(|r| r["exists"] == true).count();
    Ok((serde_json::to_string(&rows).unwrap(), yes))
}

fn criterion_1(corpus: &[DigraphCollection]) -> Check {
    let t = Instant::now();
    let (_, yes) = in_pool(8, || oracle_report(corpus))?;
    let el = t.elapsed();
    ensure(el < Duration::from_secs(60), || format!("took {el:?}"))?;
    Ok(format!("{} collections agree ({yes} with a transversal cycle) in {:.1}s", corpus.len(), el.as_secs_f64()))
}

// ---- 2 ---------------------------------------------------------------------

fn random_bipartite(n: usize, p: f64, r: &mut ChaCha8Rng) -> BipartiteCollection {
    let gs = (0..n)
        .map(|_| {
            let mut g = BipartiteGraph::empty(n);
            for u in 0..n {
                for v in 0..n {
                    if r.gen_bool(p) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
        .collect();
    BipartiteCollection::new(gs).unwrap()
}

fn criterion_2() -> Check {
    use rayon::prelude::*;
    let runs = 10_000u64;
    let failures: Vec<String> = (0..runs)
        .into_par_iter()
        .filter_map(|i| {
            let mut r = rng(2_000_000 + i);
            let n = r.gen_range(2..=10);
            let p = r.gen_range(0.2..0.95);
            let cfg = SearchConfig::default().with_seed(i).with_time_budget(Duration::from_secs(5));
            let bad = match i % 4 {
                0 => {
                    let dc = random_collection(n, n, p, &mut r);
                    let o = find_transversal_hamilton_cycle(&dc, &cfg).unwrap();
                    o.certificate.is_some_and(|c| !validate_certificate(&dc, &c).is_valid())
                }
                1 => {
                    let dc = random_collection(n, n - 1, p, &mut r);
                    let o = find_transversal_hamilton_path(&dc, &cfg).unwrap();
                    o.certificate.is_some_and(|c| !validate_certificate(&dc, &c).is_valid())
                }
                2 => {
                    let dc = random_collection(n, n, p, &mut r);
                    let o = rainbow_cycle_cover(&dc, &cfg).unwrap();
                    o.certificate.is_some_and(|c| !validate_certificate(&dc, &c).is_valid())
                }
                _ => {
                    let bc = random_bipartite(n, p * 0.6, &mut r);
                    let o = find_transversal_perfect_matching(&bc, &cfg).unwrap();
                    o.certificate.is_some_and(|c| !validate_bipartite_matching(&bc, &c, true).is_valid())
                }
            };
            bad.then(|| format!("run {i}"))
        })
        .collect();
    ensure(failures.is_empty(), || format!("validation failures: {failures:?}"))?;
    Ok(format!("{runs} runs across cycle, path, cover and matching solvers, 0 invalid"))
}

// ---- 3 ---------------------------------------------------------------------

fn criterion_3() -> Check {
    let t = Instant::now();
    for n in 4..=8 {
        let dc = gen_tight_witness(n).map_err(|e| e.to_string())?;
        let sd = collection_semi_degree(&dc);
        ensure(sd == n.div_ceil(2) - 1, || format!("n={n}: semi-degree {sd}"))?;
        let out = find_transversal_hamilton_cycle(&dc, &SearchConfig::default()).unwrap();
        ensure(out.status == SolveStatus::None && out.stats.exhausted, || format!("n={n}: {:?}", out.status))?;
    }
    let el = t.elapsed();
    ensure(el < Duration::from_secs(30), || format!("took {el:?}"))?;
    Ok(format!("n=4..8 at semi-degree ceil(n/2)-1, exhaustive none, {:.2}s", el.as_secs_f64()))
}

// ---- 4 ---------------------------------------------------------------------

fn threshold_config(dir: &std::path::Path) -> ThresholdConfig {
    ThresholdConfig { n_min: 4, n_max: 6, trials: 1000, seed: SEED, artifact_dir: Some(dir.to_path_buf()), ..Default::default() }
}

fn criterion_4(r: &CampaignReport, el: Duration) -> Check {
    let s = &r.summary;
    ensure(s.trials == 3000, || format!("{} trials", s.trials))?;
    ensure(r.records.iter().all(|t| t.semidegree >= t.n.div_ceil(2)), || "a trial fell below the threshold".into())?;
    ensure(s.timeout == 0, || format!("{} timeouts", s.timeout))?;
    ensure(s.solver_disagreements == 0, || format!("{} solver disagreements", s.solver_disagreements))?;
    for c in r.counterexamples() {
        let path = c.artifact.as_ref().ok_or("counterexample without artifact")?;
        ensure(revalidate(std::path::Path::new(path)).unwrap_or(false), || format!("{path} does not revalidate"))?;
    }
    ensure(el < Duration::from_secs(600), || format!("took {el:?}"))?;
    let ce = r.counterexamples().count();
    let comp = r.companion_summary.as_ref().map_or(0, |c| c.none);
    Ok(format!(
        "3000 trials: {} found, {ce} confirmed counterexamples; companion below threshold: {comp} none; {:.1}s",
        s.found,
        el.as_secs_f64()
    ))
}

// ---- 5 ---------------------------------------------------------------------

fn bradshaw_config() -> BradshawConfig {
    BradshawConfig { n_min: 3, n_max: 5, trials: 200, seed: SEED, ..Default::default() }
}

fn criterion_5(r: &CampaignReport, el: Duration) -> Check {
    let s = &r.summary;
    ensure(s.trials == 600, || format!("{} trials", s.trials))?;
    ensure(s.found == s.trials, || format!("{} none, {} timeouts", s.none, s.timeout))?;
    ensure(el < Duration::from_secs(120), || format!("took {el:?}"))?;
    Ok(format!("600/600 transversal perfect matchings in {:.1}s", el.as_secs_f64()))
}

// ---- 6 ---------------------------------------------------------------------

fn pair_edges(cnt: &[usize], a: u64) -> usize {
    (0..cnt.len()).filter(|v| a >> v & 1 == 1).map(|v| cnt[v]).sum()
}

fn brute_min_pair(d: &Digraph, k: usize) -> usize {
    let n = d.n();
    let big: Vec<u64> = (0..1u64 << n).filter(|s| s.count_ones() as usize >= k).collect();
    let mut best = usize::MAX;
    for &b in &big {
        let cnt: Vec<usize> = (0..n).map(|v| (d.out_neighbors(v).word() & b).count_ones() as usize).collect();
        for &a in &big {
            best = best.min(pair_edges(&cnt, a));
        }
    }
    best
}

fn criterion_6() -> Check {
    use rayon::prelude::*;
    let mut r = rng(6);
    let mut corpus = Vec::new();
    for n in 4..=12 {
        for j in 0..6 {
            // Dense draws keep both verdicts well represented.
            let p = if j % 2 == 0 { r.gen_range(0.1..0.9) } else { r.gen_range(0.75..1.0) };
            corpus.push(gen_random_digraph(n, p, &mut r));
        }
        if let Ok((d, _)) = gen_extremal(ExtremalKind::Ec1, n, frac(0.1), None, 0.0, n as u64) {
            corpus.push(d);
        }
        if let Ok((d, _)) = gen_extremal(ExtremalKind::Ec2, n, frac(0.1), None, 0.05, n as u64) {
            corpus.push(d);
        }
    }
    let cases: Vec<(usize, Frac)> = (0..corpus.len()).flat_map(|i| [(i, frac(0.1)), (i, frac(0.2))]).collect();
    let verdicts: Vec<Result<bool, String>> = cases
        .par_iter()
        .map(|&(i, eps)| {
            let d = &corpus[i];
            let n = d.n();
            let want = Frac::from(brute_min_pair(d, half_minus(n, eps)) as i64) >= eps * Frac::from((n * n) as i64);
            let got = is_eps_nice(d, eps, NicenessMode::Exact).unwrap().nice;
            if got == want {
                Ok(got)
            } else {
                Err(format!("digraph {i} (n={n}) at eps={eps}"))
            }
        })
        .collect();
    let verdicts = verdicts.into_iter().collect::<Result<Vec<_>, _>>()?;
    let nice = verdicts.iter().filter(|&&b| b).count();
    Ok(format!("{} digraphs x 2 eps match brute force ({nice} nice)", corpus.len()))
}

// ---- 7 ---------------------------------------------------------------------

fn extremal_grid() -> Vec<(ExtremalKind, Frac, Option<Frac>)> {
    let mut g = Vec::new();
    for kind in [ExtremalKind::Ec1, ExtremalKind::Ec2] {
        for e in [0.1, 0.15, 0.2] {
            g.push((kind, frac(e), None));
        }
    }
    for (e, z) in [(0.05, 0.15), (0.05, 0.2), (0.04, 0.1), (0.05, 0.25)] {
        g.push((ExtremalKind::Ec3, frac(e), Some(frac(z))));
    }
    g
}

fn criterion_7() -> Check {
    use rayon::prelude::*;
    let mut points = Vec::new();
    for n in 8..=24 {
        for &(kind, eps, zeta) in &extremal_grid() {
            for seed in 0..2u64 {
                points.push((kind, n, eps, zeta, seed));
            }
        }
    }
    // Infeasible sizes (some part would be empty) are skipped, not counted.
    let results: Vec<Option<Result<bool, String>>> = points
        .par_iter()
        .map(|&(kind, n, eps, zeta, seed)| {
            let (d, p) = gen_extremal(kind, n, eps, zeta, 0.0, seed).ok()?;
            let ok = verify_partition(&d, &p, eps, zeta).map(|r| r.passed()).unwrap_or(false);
            if !ok {
                return Some(Err(format!("{kind} n={n} eps={eps} seed={seed} fails its own verifier")));
            }
            let c = classify_extremal(&d, eps, &default_zeta_grid()).unwrap();
            Some(Ok(c.partition.is_some_and(|q| q.kind == kind && partition_agreement(&p, &q) >= 0.9)))
        })
        .collect();
    let done: Vec<Result<bool, String>> = results.into_iter().flatten().collect();
    if let Some(Err(e)) = done.iter().find(|r| r.is_err()) {
        return Err(e.clone());
    }
    let total = done.len();
    let hit = done.iter().filter(|r| matches!(r, Ok(true))).count();
    ensure(total > 0, || "empty grid".into())?;
    ensure(hit * 100 >= total * 95, || format!("recovered {hit}/{total}"))?;
    Ok(format!("{total}/{total} plants verify; {hit}/{total} recovered at >= 90% agreement"))
}

// ---- 8 ---------------------------------------------------------------------

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn criterion_8() -> Check {
    use rayon::prelude::*;
    let cycle_runs: Vec<Result<(), String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(8_000_000 + i);
            let kind = if i % 2 == 0 { AbsorberKind::TypeI } else { AbsorberKind::TypeII };
            let n = r.gen_range(8..=12);
            let len = if i % 4 < 2 { 1 } else { r.gen_range(2..=3) };
            let e = engineered_cycle(n, kind, len, r.gen_range(0.0..0.5), i).map_err(|x| x.to_string())?;
            let out = absorb(&e.dc, &e.cycle, &e.witness, &e.payload).map_err(|x| format!("absorb {i}: {x}"))?;
            ensure(validate_certificate(&e.dc, &out).is_valid(), || format!("absorb {i}: invalid cycle"))?;
            let mut vs = e.cycle.vertices();
            vs.extend(&e.payload.vertices);
            let mut cs = e.cycle.color_set();
            cs.push(e.witness.color);
            cs.extend(&e.payload.colors);
            ensure(sorted(out.vertices()) == sorted(vs.clone()) && out.vertices().len() == vs.len(), || format!("absorb {i}: vertex set"))?;
            ensure(sorted(out.color_set()) == sorted(cs.clone()) && out.color_set().len() == cs.len(), || format!("absorb {i}: color set"))?;
            Ok(())
        })
        .collect();
    cycle_runs.into_iter().collect::<Result<(), _>>()?;

    for i in 0..200u64 {
        let n = 2 + (i as usize % 9);
        let e = engineered_matching(n, 0.3, i).map_err(|x| x.to_string())?;
        let out = absorb_edge(&e.bc, &e.matching, e.position, e.u, e.v, e.color).map_err(|x| format!("edge {i}: {x}"))?;
        ensure(validate_bipartite_matching(&e.bc, &out, false).is_valid(), || format!("edge {i}: invalid"))?;
        ensure(out.len() == e.matching.len() + 1, || format!("edge {i}: size"))?;
        let mut cs = e.matching.color_set();
        cs.push(e.color);
        ensure(sorted(out.color_set()) == sorted(cs), || format!("edge {i}: color set"))?;
    }

    for i in 0..300u64 {
        let kind = if i % 2 == 0 { AbsorberKind::TypeI } else { AbsorberKind::TypeII };
        let n = 8 + (i as usize % 5);
        let e = engineered_cycle(n, kind, 1 + (i as usize % 2), 0.4, 50_000 + i).map_err(|x| x.to_string())?;
        let w = &e.witness;
        let scan = enumerate_absorbers(&e.dc, &e.cycle, w.color, w.v, w.u, kind).map_err(|x| x.to_string())?;
        let seq = e.cycle.vertex_sequence();
        let t = seq.len();
        let brute: Vec<usize> = (0..t)
            .filter(|&p| {
                let path = [0, 1, 2, 3].map(|j| seq[(p + j) % t]);
                let cols = [0, 1, 2].map(|j| e.cycle.colors[(p + j) % t]);
                is_absorbing_path(&e.dc, kind, &path, &cols, w.color, w.v, w.u).unwrap()
            })
            .collect();
        let found: Vec<usize> = scan.witnesses.iter().map(|x| x.position).collect();
        ensure(found == brute, || format!("scan {i}: {found:?} vs {brute:?}"))?;
    }
    Ok("1000 cycle absorptions (both types, single and path payloads), 200 edge absorptions, 300 re-scans".into())
}

// ---- 9 ---------------------------------------------------------------------

fn random_sides(n: usize, m: usize, r: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(r);
    let cut = r.gen_range(1..n);
    let mut cs: Vec<usize> = (0..m).collect();
    cs.shuffle(r);
    cs.truncate(r.gen_range(1..=m));
    (sorted(vs[..cut].to_vec()), sorted(vs[cut..].to_vec()), sorted(cs))
}

fn subset(xs: &[usize], r: &mut ChaCha8Rng) -> Vec<usize> {
    let k = r.gen_range(1..=xs.len());
    sorted(xs.choose_multiple(r, k).copied().collect())
}

fn criterion_9() -> Check {
    let mut r = rng(9);
    let mut witnesses = 0;
    for i in 0..300u64 {
        let n = r.gen_range(2..=10);
        let m = r.gen_range(1..=5);
        let (dc, _) = gen_random_collection(n, m, r.gen_range(0.0..1.0), None, i).unwrap();
        let (a, b, cs) = random_sides(n, m, &mut r);
        let s = CollectionSlice::new(&dc, &a, &b, &cs).unwrap();
        let (a2, b2, c2) = (subset(&a, &mut r), subset(&b, &mut r), subset(&cs, &mut r));
        let mut e = 0i64;
        for &c in &c2 {
            for &x in &a2 {
                for &y in &b2 {
                    e += dc.has_edge(c, x, y) as i64;
                }
            }
        }
        let naive = Frac::new(e, (c2.len() * a2.len() * b2.len()) as i64);
        ensure(slice_density(&s, &a2, &b2, &c2).unwrap() == naive, || format!("density mismatch on instance {i}"))?;

        if n >= 4 {
            let eps = Frac::new(r.gen_range(1..10), 20);
            let d = Frac::new(1, 10);
            let v = check_regular_slice(&s, eps, d, RegularityMode::Sampled { trials: 500, seed: i }).unwrap();
            if let Some(w) = &v.witness {
                witnesses += 1;
                ensure(verify_witness(&s, eps, d, w).unwrap(), || format!("witness {i} does not re-verify"))?;
            }
        }
    }
    for i in 0..100u64 {
        let n = 2 + (i as usize % 8);
        let m = 1 + (i as usize % 5);
        let (dc, _) = gen_random_collection(n, m, 0.1 + (i % 9) as f64 / 10.0, None, 90_000 + i).unwrap();
        let h = build_auxiliary_4graph(&dc).unwrap();
        ensure(degree_identities(&dc, &h).holds(), || format!("4-graph identities fail on instance {i}"))?;
    }
    Ok(format!("300 densities exact, {witnesses} sampled witnesses re-verified, 100 auxiliary 4-graphs"))
}

// ---- 10 --------------------------------------------------------------------

struct Firsts {
    oracle: String,
    threshold: String,
    bradshaw: String,
}

fn criterion_10(corpus: &[DigraphCollection], first: &Firsts, dir: &std::path::Path) -> Check {
    let (oracle, _) = in_pool(1, || oracle_report(corpus))?;
    ensure(oracle == first.oracle, || "oracle corpus report differs at 1 worker".into())?;
    let t = in_pool(1, || sweep_threshold(&threshold_config(dir))).map_err(|e| e.to_string())?;
    ensure(t.canonical_json() == first.threshold, || "threshold sweep differs at 1 worker".into())?;
    let b = in_pool(1, || sweep_bradshaw(&bradshaw_config())).map_err(|e| e.to_string())?;
    ensure(b.canonical_json() == first.bradshaw, || "bradshaw sweep differs at 1 worker".into())?;
    Ok("criteria 1, 4, 5 reports identical at 1 and 8 workers".into())
}

fn run(no: usize, name: &str, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
    });
    let secs = t.elapsed().as_secs_f64();
    match res {
        Ok(msg) => {
            println!("PASS [{no:2}] {name}: {msg} ({secs:.1}s)");
            true
        }
        Err(msg) => {
            println!("FAIL [{no:2}] {name}: {msg} ({secs:.1}s)");
            false
        }
    }
}

fn main() {
    let corpus = oracle_corpus();
    let dir = tempfile::tempdir().unwrap();
    let mut ok = Vec::new();

    ok.push(run(1, "oracle equivalence", || criterion_1(&corpus)));
    ok.push(run(2, "certificate soundness", criterion_2));
    ok.push(run(3, "threshold tightness", criterion_3));

    let t = Instant::now();
    let threshold = in_pool(8, || sweep_threshold(&threshold_config(dir.path())));
    let t_el = t.elapsed();
    ok.push(run(4, "threshold sweep", || criterion_4(threshold.as_ref().map_err(|e| e.to_string())?, t_el)));

    let t = Instant::now();
    let bradshaw = in_pool(8, || sweep_bradshaw(&bradshaw_config()));
    let b_el = t.elapsed();
    ok.push(run(5, "bipartite matching gate", || criterion_5(bradshaw.as_ref().map_err(|e| e.to_string())?, b_el)));

    ok.push(run(6, "niceness oracle", criterion_6));
    ok.push(run(7, "generator/verifier closure", criterion_7));
    ok.push(run(8, "absorption suite", criterion_8));
    ok.push(run(9, "regularity tools", criterion_9));
    ok.push(run(10, "determinism", || {
        let first = Firsts {
            oracle: in_pool(8, || oracle_report(&corpus))?.0,
            threshold: threshold.as_ref().map_err(|e| e.to_string())?.canonical_json(),
            bradshaw: bradshaw.as_ref().map_err(|e| e.to_string())?.canonical_json(),
        };
        criterion_10(&corpus, &first, dir.path())
    }));

    let passed = ok.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed", ok.len());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
