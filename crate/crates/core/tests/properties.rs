//! Property tests over random compatible structures on the catalog algebras.

mod common;

use ahforms::harmonics::{kernel_on_bidegree, solve, Family, HarmonicQuery};
use ahforms::specfile::{digest, parse_spec, serialize};
use ahforms::verify::verify_structural;
use ahforms::{full_report, OperatorSuite};
use proptest::prelude::*;

fn random_suite(base: usize, seed: u64) -> OperatorSuite {
    let bases = common::catalog_specs();
    let spec = common::random_structure(&bases[base % bases.len()], &mut common::rng(seed), 0);
    OperatorSuite::assemble(&spec).expect("random structures are compatible")
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn structural_identities_hold(base in 0usize..6, seed in any::<u64>()) {
        let s = random_suite(base, seed);
        for c in verify_structural(&s) {
            prop_assert!(!c.failed(), "{}: {} {:?}", s.spec.name, c.id, c.witness);
        }
    }

    #[test]
    fn serialization_round_trips(base in 0usize..6, seed in any::<u64>()) {
        let bases = common::catalog_specs();
        let spec = common::random_structure(&bases[base], &mut common::rng(seed), 0);
        let text = serialize(&spec);
        let back = parse_spec(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(digest(&back), digest(&spec));
    }

    #[test]
    fn conjugation_exchanges_delbar_and_del_kernels(base in 0usize..6, seed in any::<u64>()) {
        let s = random_suite(base, seed);
        for p in 0..=s.m {
            for q in 0..=s.m {
                let k = kernel_on_bidegree(&s, &s.delbar, p, q).image_with(s.size(), |v| s.conj(v));
                prop_assert_eq!(k, kernel_on_bidegree(&s, &s.del, q, p));
            }
        }
    }

    #[test]
    fn betti_numbers_ignore_the_structure(base in 0usize..6, seed in any::<u64>()) {
        let bases = common::catalog_specs();
        let spec = common::random_structure(&bases[base], &mut common::rng(seed), 0);
        let (_, random) = full_report(&spec).unwrap();
        let (_, reference) = full_report(&bases[base]).unwrap();
        prop_assert_eq!(random.betti.b, reference.betti.b);
    }

    #[test]
    fn deltabar_and_delbar_numbers_are_self_dual(base in 0usize..6, seed in any::<u64>()) {
        let s = random_suite(base, seed);
        let r = ahforms::harmonics::report_for(&s).unwrap();
        let (n, m) = (s.n, s.m);
        for k in 0..=n {
            prop_assert_eq!(r.deltabar_k[k], r.deltabar_k[n - k]);
        }
        for p in 0..=m {
            for q in 0..=m {
                prop_assert_eq!(r.delbar[p][q], r.delbar[m - p][m - q], "delbar ({},{})", p, q);
            }
        }
    }

    #[test]
    fn real_families_are_conjugation_stable(base in 0usize..6, seed in any::<u64>()) {
        let s = random_suite(base, seed);
        for family in [Family::DeltaDeltabar, Family::DDc] {
            for k in 0..=s.n {
                let h = solve(&s, &HarmonicQuery::total(family, k)).unwrap();
                prop_assert_eq!(h.image_with(s.size(), |v| s.conj(v)), h.clone(), "{} k={}", family, k);
            }
        }
    }
}
