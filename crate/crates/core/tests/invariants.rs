//! Property tests over random composite moduli.

use num_bigint::BigInt;
use proptest::prelude::*;
use zdgq::arithmetic::{is_prime, totient, zero_divisor_count};
use zdgq::classify::{candidate_pairs, pst_exclusions, PairStatus};
use zdgq::graph::{degree_of, twin_kind, DivisorPartition, TwinKind, ZnGraph};
use zdgq::partitions::{divisor_partition_quotient, is_equitable, symmetrized_quotient, verify_quotient_identity};
use zdgq::poly::IntPoly;
use zdgq::spectral::{eigendecompose, spectrum_via_theorem, QuotientSpectrum};
use zdgq::walk::Walk;

fn composite(max: u64) -> impl Strategy<Value = u64> {
    (4..=max).prop_filter("composite", |&n| !is_prime(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cell_sizes_are_totients(n in composite(2000)) {
        let cells = DivisorPartition::for_modulus(n).unwrap();
        let total: usize = cells.sizes().iter().sum();
        prop_assert_eq!(total as u64, zero_divisor_count(n).unwrap());
        for c in cells.cells() {
            prop_assert_eq!(c.size() as u64, totient(n / c.divisor).unwrap());
        }
    }

    #[test]
    fn degrees_follow_gcd(n in composite(400)) {
        let zn = ZnGraph::new(n).unwrap();
        for (i, &x) in zn.residues().iter().enumerate() {
            prop_assert_eq!(zn.graph().degree(i) as u64, degree_of(x, n).unwrap());
        }
    }

    #[test]
    fn cells_are_twin_sets(n in composite(300)) {
        let zn = ZnGraph::new(n).unwrap();
        for c in DivisorPartition::for_modulus(n).unwrap().cells() {
            for w in c.members.windows(2) {
                let (u, v) = (zn.require_index(w[0]).unwrap(), zn.require_index(w[1]).unwrap());
                let kind = twin_kind(zn.graph(), u, v).unwrap();
                prop_assert!(kind != TwinKind::NotTwins, "{} {} in Z_{}", w[0], w[1], n);
            }
        }
    }

    #[test]
    fn divisor_partition_is_equitable_with_matching_quotient(n in composite(300)) {
        let zn = ZnGraph::new(n).unwrap();
        let (p, q) = divisor_partition_quotient(&zn).unwrap();
        prop_assert!(is_equitable(zn.graph(), &p).unwrap());
        prop_assert!(verify_quotient_identity(zn.graph(), &p, &q).unwrap());
        prop_assert!(symmetrized_quotient(n).unwrap().is_symmetric());
    }

    #[test]
    fn factors_multiply_back_to_charpoly(n in composite(5000)) {
        let q = QuotientSpectrum::new(n).unwrap();
        let product = q.factors().iter().fold(IntPoly::one(), |acc, f| acc.mul(&f.poly.pow(f.multiplicity)));
        prop_assert_eq!(&product, q.charpoly());
    }

    #[test]
    fn spectrum_moments(n in composite(300)) {
        let zn = ZnGraph::new(n).unwrap();
        let s = spectrum_via_theorem(n).unwrap();
        let values = s.expanded();
        prop_assert_eq!(values.len(), zn.order());
        let trace: f64 = values.iter().sum();
        let second: f64 = values.iter().map(|x| x * x).sum();
        prop_assert!(trace.abs() < 1e-8);
        prop_assert!((second - 2.0 * zn.graph().edge_count() as f64).abs() < 1e-7);
    }

    #[test]
    fn spectrum_matches_dense(n in composite(250)) {
        let exact = spectrum_via_theorem(n).unwrap().expanded();
        let dense = eigendecompose(&ZnGraph::new(n).unwrap().graph().adjacency_matrix()).unwrap().values;
        for (a, b) in exact.iter().zip(&dense) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn transition_matrix_is_unitary_and_symmetric(n in composite(120), t in 0.0f64..30.0) {
        let walk = Walk::of_graph(ZnGraph::new(n).unwrap().graph()).unwrap();
        let h = walk.transition_matrix(t);
        prop_assert!(h.unitarity_error() < 1e-9);
        prop_assert!(h.symmetry_error() < 1e-9);
    }

    #[test]
    fn pair_amplitudes_bounded(n in composite(150), t in 0.0f64..50.0) {
        let zn = ZnGraph::new(n).unwrap();
        let walk = Walk::of_graph(zn.graph()).unwrap();
        for (x, y) in candidate_pairs(n).unwrap() {
            let pw = walk.pair(zn.require_index(x).unwrap(), zn.require_index(y).unwrap()).unwrap();
            let total = pw.alpha(t).norm_sqr() + pw.beta(t).norm_sqr();
            prop_assert!(total <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn exclusions_cover_every_pair(n in composite(3000)) {
        let v = zero_divisor_count(n).unwrap();
        let classes = pst_exclusions(n).unwrap();
        let total: u64 = classes.iter().map(|c| c.pair_count).sum();
        prop_assert_eq!(total, v * (v.saturating_sub(1)) / 2);
        let cells = DivisorPartition::for_modulus(n).unwrap();
        let size_two = cells.cells().iter().filter(|c| c.size() == 2).count();
        let candidates = classes.iter().filter(|c| matches!(c.status, PairStatus::Candidate(..))).count();
        prop_assert_eq!(candidates, size_two);
    }

    #[test]
    fn minus_one_evaluation_matches_quotient(n in composite(3000)) {
        let q = QuotientSpectrum::new(n).unwrap();
        let at = zdgq::classify::exact_charpoly_at(n, -1).unwrap();
        prop_assert_eq!(q.charpoly_at(-1), at.clone());
        prop_assert_eq!(q.contains(-1), at == BigInt::from(0));
    }
}
