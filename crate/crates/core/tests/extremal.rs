use proptest::prelude::*;

use transversal_core::experiments::gen_random_digraph;
use transversal_core::extremal::{
    classify_extremal, default_zeta_grid, gen_extremal, gen_tight_witness, is_eps_nice, partition_agreement,
    verify_partition, ExtremalKind, NicenessMode,
};
use transversal_core::model::collection_semi_degree;
use transversal_core::numeric::{frac, Frac};
use transversal_core::solvers::{find_transversal_hamilton_cycle, SearchConfig, SolveStatus};
use transversal_core::Digraph;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn e(d: &Digraph, a: u64, b: u64) -> usize {
    (0..d.n()).filter(|v| a >> v & 1 == 1).map(|v| (d.out_neighbors(v).word() & b).count_ones() as usize).sum()
}

/// Minimum of `e(A, B)` over all pairs of subsets of size at least `k`.
fn brute_min_pair(d: &Digraph, k: usize) -> usize {
    let n = d.n();
    let big: Vec<u64> = (0..1u64 << n).filter(|s| s.count_ones() as usize >= k).collect();
    let mut best = usize::MAX;
    for &b in &big {
        let cnt: Vec<usize> = (0..n).map(|v| (d.out_neighbors(v).word() & b).count_ones() as usize).collect();
        for &a in &big {
            let s: usize = (0..n).filter(|v| a >> v & 1 == 1).map(|v| cnt[v]).sum();
            best = best.min(s);
        }
    }
    best
}

fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    gen_random_digraph(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn enlarging_a_set_never_loses_edges(n in 2usize..=12, p in 0.0f64..1.0, seed in any::<u64>(), a in any::<u64>(), b in any::<u64>(), v in 0usize..12) {
        let d = random_digraph(n, p, seed);
        let full = (1u64 << n) - 1;
        let (a, b, v) = (a & full, b & full, v % n);
        prop_assert!(e(&d, a | 1 << v, b) >= e(&d, a, b));
    }

    #[test]
    fn exact_niceness_matches_brute_force(n in 4usize..=9, p in 0.0f64..1.0, seed in any::<u64>(), hi in any::<bool>()) {
        let d = random_digraph(n, p, seed);
        let eps = if hi { frac(0.2) } else { frac(0.1) };
        let k = transversal_core::numeric::half_minus(n, eps);
        let want = Frac::from(brute_min_pair(&d, k) as i64) >= eps * Frac::from((n * n) as i64);
        let got = is_eps_nice(&d, eps, NicenessMode::Exact).unwrap();
        prop_assert_eq!(got.nice, want);
        if let Some(w) = got.witness {
            prop_assert!(w.a.len() >= k && w.b.len() >= k);
        }
    }
}

#[test]
fn generator_verifier_closure_and_overlaps() {
    let mut overlaps = Vec::new();
    for n in (8..=24).step_by(2) {
        for seed in 0..2 {
            for (kind, eps, zeta) in [
                (ExtremalKind::Ec1, frac(0.1), None),
                (ExtremalKind::Ec2, frac(0.1), None),
                (ExtremalKind::Ec3, frac(0.05), Some(frac(0.15))),
            ] {
                let Ok((d, p)) = gen_extremal(kind, n, eps, zeta, 0.0, seed) else { continue };
                assert!(verify_partition(&d, &p, eps, zeta).unwrap().passed(), "{kind} n={n}");
                let c = classify_extremal(&d, eps, &default_zeta_grid()).unwrap();
                if c.overlap() {
                    overlaps.push((kind, n, c.verified_kinds.clone()));
                }
            }
        }
    }
    // Several templates verifying at once is a finding worth seeing, not a failure.
    for o in &overlaps {
        println!("overlap: {o:?}");
    }
}

#[test]
fn classifier_recovers_small_plants() {
    for (kind, eps, zeta) in [
        (ExtremalKind::Ec1, frac(0.1), None),
        (ExtremalKind::Ec2, frac(0.1), None),
        (ExtremalKind::Ec3, frac(0.05), Some(frac(0.15))),
    ] {
        let n = if kind == ExtremalKind::Ec3 { 20 } else { 12 };
        let (d, p) = gen_extremal(kind, n, eps, zeta, 0.0, 4).unwrap();
        let c = classify_extremal(&d, eps, &default_zeta_grid()).unwrap();
        let q = c.partition.expect("planted structure is found");
        assert_eq!(q.kind, kind);
        assert!(partition_agreement(&p, &q) >= 0.9);
    }
}

#[test]
fn tight_witnesses() {
    for n in 4..=12 {
        let dc = gen_tight_witness(n).unwrap();
        assert_eq!(collection_semi_degree(&dc), n.div_ceil(2) - 1);
        if n <= 8 {
            let out = find_transversal_hamilton_cycle(&dc, &SearchConfig::default()).unwrap();
            assert_eq!(out.status, SolveStatus::None);
            assert!(out.stats.exhausted);
        }
    }
}
