use eqforest::constructor::{color, Strategy as Method};
use eqforest::generators::random_forest;
use eqforest::oracle::{oracle_alpha_x, oracle_exists, oracle_min_b_stable_set};
use eqforest::{
    alpha_x, alpha_x_all, class_sizes, decide, decide2, lower_bound, parse_forest, select_bipartition,
    stable_set_of_size_min_b, verify, Bipartition, Forest,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn forest(max_n: usize, max_c: usize) -> impl Strategy<Value = Forest> {
    (1..=max_n, any::<u64>()).prop_flat_map(move |(n, seed)| {
        (1..=n.min(max_c)).prop_map(move |c| random_forest(n, c, &mut ChaCha8Rng::seed_from_u64(seed)))
    })
}

fn relabel(f: &Forest, seed: u64) -> Forest {
    let mut perm: Vec<usize> = (0..f.n()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Forest::new(f.n(), f.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap()
}

/// Brute force over every flip vector: minimum isolated-in-A count, and the
/// lexicographically first flip vector achieving it.
fn best_flips(f: &Forest) -> (usize, Vec<bool>) {
    let r = f.component_count();
    let mut best: Option<(usize, Vec<bool>)> = None;
    for mask in 0..1u32 << r {
        // Bit order so that counting upward is lexicographic in the flips.
        let flips: Vec<bool> = (0..r).map(|i| mask >> (r - 1 - i) & 1 == 1).collect();
        let Ok(bip) = Bipartition::from_flips(f, &flips) else { continue };
        let iso = bip.isolated_in_a(f);
        if best.as_ref().is_none_or(|(b, _)| iso < *b) {
            best = Some((iso, flips));
        }
    }
    best.expect("some orientation has a >= b")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn edge_list_round_trip(f in forest(60, 10)) {
        let back = parse_forest(&f.to_edge_list()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_edge_list(), f.to_edge_list());
    }

    #[test]
    fn bipartition_invariants(f in forest(80, 12)) {
        let bip = select_bipartition(&f);
        prop_assert!(bip.a() >= bip.b());
        prop_assert_eq!(bip.a() + bip.b(), f.n());
        for &(u, v) in f.edges() {
            prop_assert_ne!(bip.side(u), bip.side(v));
        }
    }

    #[test]
    fn bipartition_minimizes_isolated_in_a(f in forest(8, 8)) {
        let bip = select_bipartition(&f);
        let (min_iso, flips) = best_flips(&f);
        prop_assert_eq!(bip.isolated_in_a(&f), min_iso);
        prop_assert_eq!(bip, Bipartition::from_flips(&f, &flips).unwrap());
    }

    #[test]
    fn alpha_x_routes_agree(f in forest(14, 4)) {
        let all = alpha_x_all(&f);
        for x in 0..f.n() {
            prop_assert_eq!(all[x], alpha_x(&f, x).unwrap());
            prop_assert_eq!(all[x], oracle_alpha_x(&f, x).unwrap());
        }
    }

    #[test]
    fn min_b_stable_sets_match_oracle(f in forest(12, 4), v_seed in any::<usize>(), size_seed in any::<usize>()) {
        let v = v_seed % f.n();
        let size = 1 + size_seed % f.n();
        let bip = select_bipartition(&f);
        let fast = stable_set_of_size_min_b(&f, v, size, &bip).unwrap();
        let slow = oracle_min_b_stable_set(&f, v, size, &bip).unwrap();
        prop_assert_eq!(fast.as_ref().map(|s| s.b_count(&bip)), slow);
        if let Some(s) = fast {
            prop_assert_eq!(s.len(), size);
            prop_assert!(s.contains(v));
        }
    }

    #[test]
    fn decide_matches_oracle_on_forests(f in forest(11, 4), k in 3usize..8) {
        prop_assert_eq!(decide(&f, k).unwrap().colorable, oracle_exists(&f, k).unwrap());
    }

    #[test]
    fn two_classes_imply_every_larger_count(f in forest(120, 10)) {
        if decide2(&f).colorable {
            for k in 3..=f.n().max(3) {
                prop_assert!(decide(&f, k).unwrap().colorable);
            }
        }
    }

    #[test]
    fn decide_is_monotone_in_k(f in forest(150, 6)) {
        let n = f.n();
        let first = lower_bound(&f).value.max(3);
        for k in 3..=n.min(40) {
            prop_assert_eq!(decide(&f, k).unwrap().colorable, k >= first);
        }
    }

    #[test]
    fn construction_is_sound(f in forest(200, 8), k in 2usize..=12) {
        let positive = if k == 2 { decide2(&f).colorable } else { decide(&f, k).unwrap().colorable };
        match color(&f, k, Method::ProofStrict) {
            Ok(c) => {
                prop_assert!(positive);
                prop_assert!(!c.trace.fallback_used);
                let report = verify(&f, &c.coloring).unwrap();
                prop_assert!(report.valid);
                prop_assert_eq!(report.class_sizes, class_sizes(f.n(), k).unwrap().sizes().to_vec());
            }
            Err(e) => {
                prop_assert!(!positive, "{}", e);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn oracle_is_relabeling_invariant(f in forest(10, 1), seed in any::<u64>()) {
        let g = relabel(&f, seed);
        for k in 1..=f.n() {
            prop_assert_eq!(oracle_exists(&f, k).unwrap(), oracle_exists(&g, k).unwrap());
        }
    }

    #[test]
    fn decide_is_relabeling_invariant(f in forest(60, 5), seed in any::<u64>(), k in 3usize..10) {
        let g = relabel(&f, seed);
        prop_assert_eq!(decide(&f, k).unwrap().colorable, decide(&g, k).unwrap().colorable);
        prop_assert_eq!(lower_bound(&f).value, lower_bound(&g).value);
    }
}
