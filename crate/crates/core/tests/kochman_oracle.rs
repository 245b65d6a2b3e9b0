//! Kochman basis enumeration against a brute-force oracle: every tuple of
//! indices and exponents inside a generous box, filtered by the admissibility
//! rules and the degree formula, computed here from scratch.

use std::collections::{BTreeMap, BTreeSet};

use coherence_core::kochman::{enumerate_by_degree, generators_of_degree, min_odd_degree, KochmanGenerator};
use coherence_core::Prime;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

type Raw = (Vec<u32>, Vec<(u32, u32)>);

fn oracle_degree(q: i64, n_list: &[u32], exps: &[(u32, u32)]) -> i64 {
    let t = n_list.len() as i64;
    let p_part = if t == 0 { 0 } else { n_list.iter().map(|&n| 2 * q.pow(n)).sum::<i64>() - t - 1 };
    p_part + exps.iter().map(|&(i, e)| e as i64 * (2 * q.pow(i) - 2)).sum::<i64>()
}

fn subsets(max: u32) -> Vec<Vec<u32>> {
    (0u32..(1 << max))
        .map(|mask| (1..=max).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

fn exponent_vectors(len: u32, cap: u32) -> Vec<Vec<(u32, u32)>> {
    let mut out = vec![Vec::new()];
    for i in 1..=len {
        let mut next = Vec::new();
        for v in &out {
            for e in 0..=cap {
                let mut w = v.clone();
                if e > 0 {
                    w.push((i, e));
                }
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn oracle(q: u64, d_max: i64) -> BTreeMap<i64, BTreeSet<Raw>> {
    let qi = q as i64;
    let max_index = (1..).take_while(|&i| 2 * qi.pow(i) - 3 <= d_max).last().unwrap_or(1) as u32;
    let cap = (d_max / (2 * qi - 2)) as u32;
    let mut out: BTreeMap<i64, BTreeSet<Raw>> = BTreeMap::new();
    for n_list in subsets(max_index) {
        if n_list.len() == 1 {
            continue;
        }
        for exps in exponent_vectors(max_index, cap) {
            if n_list.is_empty() && exps.is_empty() {
                continue;
            }
            if let Some(&n1) = n_list.first() {
                if exps.iter().any(|&(i, _)| i < n1) {
                    continue;
                }
            }
            let d = oracle_degree(qi, &n_list, &exps);
            if d <= d_max {
                out.entry(d).or_default().insert((n_list.clone(), exps));
            }
        }
    }
    out
}

fn raw(g: &KochmanGenerator) -> Raw {
    (g.n_list().to_vec(), g.exponents().collect())
}

#[test]
fn enumeration_matches_brute_force() {
    for q in [2u64, 3] {
        let expected = oracle(q, 60);
        let got: BTreeMap<i64, BTreeSet<Raw>> = enumerate_by_degree(p(q), 60)
            .into_iter()
            .map(|(d, gens)| (d, gens.iter().map(raw).collect()))
            .collect();
        assert_eq!(got, expected, "p = {q}");
    }
}

#[test]
fn lists_are_sorted_and_duplicate_free() {
    for q in [2u64, 3, 5] {
        for (d, gens) in enumerate_by_degree(p(q), 80) {
            assert!(gens.windows(2).all(|w| w[0] < w[1]), "degree {d}");
            for g in &gens {
                assert!(g.is_admissible());
                assert_eq!(g.degree(p(q)), Ok(d));
            }
        }
    }
}

#[test]
fn small_degrees() {
    let z = |i| KochmanGenerator::zeta(i);
    assert_eq!(generators_of_degree(p(2), 2), vec![z(1)]);
    assert_eq!(generators_of_degree(p(2), 4), vec!["z1^2".parse().unwrap()]);
    let six: Vec<String> = generators_of_degree(p(2), 6).iter().map(ToString::to_string).collect();
    assert_eq!(six, vec!["z2^1", "z1^3"]);
    assert!(generators_of_degree(p(3), 2).is_empty());
}

#[test]
fn least_odd_degree() {
    for q in [2u64, 3, 5, 7] {
        let qi = q as i64;
        assert_eq!(min_odd_degree(p(q)), 2 * qi * qi + 2 * qi - 3);
        let d = min_odd_degree(p(q));
        let gens = generators_of_degree(p(q), d);
        assert_eq!(gens, vec![KochmanGenerator::new(vec![1, 2], []).unwrap()]);
    }
}

#[test]
fn parity_follows_t() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen_t0 = 0;
    let mut seen_t2 = 0;
    for _ in 0..10_000 {
        let q = [2u64, 3, 5][rng.gen_range(0..3)];
        let t = [0usize, 2, 3, 4][rng.gen_range(0..4)];
        let mut ns: BTreeSet<u32> = BTreeSet::new();
        while ns.len() < t {
            ns.insert(rng.gen_range(1..7));
        }
        let n_list: Vec<u32> = ns.into_iter().collect();
        let lo = n_list.first().copied().unwrap_or(1);
        let exps: Vec<(u32, u32)> = (lo..lo + 4).map(|i| (i, rng.gen_range(0..4))).collect();
        let Ok(g) = KochmanGenerator::new(n_list, exps) else { continue };
        let d = g.degree(p(q)).unwrap();
        match g.t() {
            0 => {
                seen_t0 += 1;
                assert_eq!(d % 2, 0, "{g}");
            }
            2 => {
                seen_t2 += 1;
                assert_eq!(d.rem_euclid(2), 1, "{g}");
            }
            t => assert_eq!(d.rem_euclid(2) as usize, (t + 1) % 2, "{g}"),
        }
    }
    assert!(seen_t0 > 1_000 && seen_t2 > 1_000);
}

#[test]
fn text_round_trip() {
    for gens in enumerate_by_degree(p(3), 60).values() {
        for g in gens {
            let back: KochmanGenerator = g.to_string().parse().unwrap();
            assert_eq!(&back, g);
            let json = serde_json::to_string(g).unwrap();
            assert_eq!(&serde_json::from_str::<KochmanGenerator>(&json).unwrap(), g);
        }
    }
}

#[test]
fn inadmissible_rejected() {
    assert!(KochmanGenerator::new(vec![2], []).is_err());
    assert!(KochmanGenerator::new(vec![2, 3], [(1, 1)]).is_err());
    assert!(KochmanGenerator::new(vec![3, 2], []).is_err());
    assert!(KochmanGenerator::new(vec![], []).is_err());
    assert!(KochmanGenerator::unit().degree(p(2)) == Ok(0));
}
