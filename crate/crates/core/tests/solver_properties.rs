use proptest::prelude::*;

use transversal_core::closeness::{
    distance_to_h_family, distance_to_half_split, find_independent_set_certificate, parity_certificate,
    parity_certificate_for, verify_certificate, Certificate, DistanceMethod, HamiltonTarget,
};
use transversal_core::constructions::{make_h, make_half_split, make_half_split_with_part, perturb_with_log, random_collection, BInternal, Bipartition};
use transversal_core::solver::{brute_force_oracle, find_transversal_hamilton_cycle, find_transversal_hamilton_path, SearchBudget, SearchStatus};
use transversal_core::{GraphCollection, Rational};

fn hamilton_instance(colors_offset: usize) -> impl Strategy<Value = GraphCollection> {
    (4usize..=7, 0.3f64..=0.9, any::<u64>())
        .prop_map(move |(n, p, seed)| random_collection(n, n - colors_offset, p, seed).unwrap())
}

fn exhaustive() -> SearchBudget {
    SearchBudget::unlimited().without_precheck()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn cycle_search_matches_oracle(g in hamilton_instance(0)) {
        let out = find_transversal_hamilton_cycle(&g, &SearchBudget::unlimited()).unwrap();
        prop_assert_eq!(out.is_found(), brute_force_oracle(&g, HamiltonTarget::Cycle).unwrap());
        if let Some(w) = &out.witness {
            w.validate(&g).unwrap();
            prop_assert_eq!(w.vertices().len(), g.n());
        }
        let again = find_transversal_hamilton_cycle(&g, &SearchBudget::unlimited()).unwrap();
        prop_assert_eq!(out.witness, again.witness);
    }

    #[test]
    fn path_search_matches_oracle(g in hamilton_instance(1)) {
        let out = find_transversal_hamilton_path(&g, &SearchBudget::unlimited()).unwrap();
        prop_assert_eq!(out.is_found(), brute_force_oracle(&g, HamiltonTarget::Path).unwrap());
        if let Some(w) = &out.witness {
            w.validate(&g).unwrap();
        }
    }

    #[test]
    fn emitted_certificates_imply_exhaustion(g in hamilton_instance(0)) {
        let certs = [
            parity_certificate(&g, None).unwrap().map(Certificate::Parity),
            find_independent_set_certificate(&g, HamiltonTarget::Cycle).map(Certificate::IndependentSet),
        ];
        for cert in certs.into_iter().flatten() {
            verify_certificate(&g, &cert).unwrap();
            let out = find_transversal_hamilton_cycle(&g, &exhaustive()).unwrap();
            prop_assert_eq!(out.status, SearchStatus::Exhausted);
        }
    }

    #[test]
    fn perturbed_member_distance_at_most_edits(n in 4usize..=8, b in 0usize..=8, k in 1usize..=5, seed in any::<u64>()) {
        let b = b.min(n);
        let g = make_h(n, n - b, b).unwrap();
        let (h, log) = perturb_with_log(&g, k, seed);
        let d = distance_to_h_family::<Rational>(&h, false, DistanceMethod::Exhaustive).unwrap();
        prop_assert!(d.cost <= log.len());
    }
}

#[test]
fn certificates_agree_with_search_on_families() {
    for n in 3..=9 {
        let mut instances: Vec<(GraphCollection, HamiltonTarget)> =
            (0..=n).map(|b| (make_h(n, n - b, b).unwrap(), HamiltonTarget::Cycle)).collect();
        for side in [BInternal::Empty, BInternal::Complete] {
            instances.push((make_half_split(n, n, side).unwrap(), HamiltonTarget::Cycle));
            if n % 2 == 1 && n >= 5 {
                instances.push((make_half_split_with_part(n, n - 1, n / 2 + 2, side).unwrap(), HamiltonTarget::Path));
            }
        }
        for (g, target) in instances {
            let mut certs = vec![find_independent_set_certificate(&g, target).map(Certificate::IndependentSet)];
            if target == HamiltonTarget::Cycle {
                certs.push(parity_certificate(&g, None).unwrap().map(Certificate::Parity));
            }
            for cert in certs.into_iter().flatten() {
                if verify_certificate(&g, &cert).is_ok() {
                    let out = match target {
                        HamiltonTarget::Cycle => find_transversal_hamilton_cycle(&g, &exhaustive()),
                        HamiltonTarget::Path => find_transversal_hamilton_path(&g, &exhaustive()),
                    }
                    .unwrap();
                    assert_eq!(out.status, SearchStatus::Exhausted, "n = {n}");
                }
            }
        }
    }
}

#[test]
fn parity_certificate_exists_iff_b_odd_or_zero() {
    for n in 2..=12 {
        for b in 0..=n {
            let g = make_h(n, n - b, b).unwrap();
            let found = parity_certificate_for(&g, &Bipartition::canonical(n)).is_some();
            assert_eq!(found, b == 0 || b % 2 == 1, "n = {n}, b = {b}");
            assert_eq!(parity_certificate(&g, None).unwrap().is_some(), found, "n = {n}, b = {b}");
        }
    }
}

#[test]
fn distance_zero_exactly_on_members() {
    for n in 4..=10 {
        for b in 0..=n {
            let g = make_h(n, n - b, b).unwrap();
            assert_eq!(distance_to_h_family::<Rational>(&g, false, DistanceMethod::Exhaustive).unwrap().cost, 0);
        }
        for side in [BInternal::Empty, BInternal::Complete] {
            let g = make_half_split(n, n, side).unwrap();
            assert_eq!(distance_to_half_split::<Rational>(&g, DistanceMethod::Exhaustive).unwrap().cost, 0);
        }
        for seed in 0..5 {
            let g = random_collection(n, n, 0.5, seed).unwrap();
            let is_member = (0..=n).any(|b| make_h(n, n - b, b).unwrap() == g);
            let d = distance_to_h_family::<Rational>(&g, false, DistanceMethod::Exhaustive).unwrap().cost;
            assert_eq!(d == 0, is_member);
        }
    }
}

#[test]
fn local_search_never_beats_exhaustive() {
    let n = 10;
    let mut equal = 0;
    for seed in 0..100u64 {
        let b = (seed % 11) as usize;
        let g = transversal_core::constructions::perturb(&make_h(n, n - b, b).unwrap(), 1 + (seed % 6) as usize, seed);
        let exact = distance_to_h_family::<Rational>(&g, false, DistanceMethod::Exhaustive).unwrap().cost;
        let local = distance_to_h_family::<Rational>(&g, false, DistanceMethod::LocalSearch { restarts: 8, seed }).unwrap().cost;
        assert!(local >= exact, "seed {seed}: {local} < {exact}");
        equal += usize::from(local == exact);
    }
    assert!(equal >= 90, "local search matched on {equal} of 100");
}
