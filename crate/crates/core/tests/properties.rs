use proptest::prelude::*;
use zq_incidence::incidence::{check_inequality, count_crossratio, count_det, count_dot, IncidenceInstance};
use zq_incidence::setops::{productset, sumset};
use zq_incidence::zaremba::{cf_expand, cf_value, mult_energy};
use zq_incidence::{Modulus, PointSet};

fn subset(q: u64, dim: usize, mask: &[bool]) -> PointSet {
    let full = PointSet::full(Modulus::new(q).unwrap(), dim);
    full.filter({
        let mut it = mask.iter().cycle();
        move |_| *it.next().unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dot_counts_partition_all_pairs(mask_a in prop::collection::vec(any::<bool>(), 1..49), mask_b in prop::collection::vec(any::<bool>(), 1..49)) {
        let (a, b) = (subset(7, 2, &mask_a), subset(7, 2, &mask_b));
        let units: u64 = (1..7).map(|l| count_dot(&a, &b, l).unwrap()).sum();
        let zero = a.iter().flat_map(|x| b.iter().map(move |y| (x[0] * y[0] + x[1] * y[1]) % 7)).filter(|&v| v == 0).count() as u64;
        prop_assert_eq!(units + zero, (a.len() * b.len()) as u64);
    }

    #[test]
    fn det_of_swapped_vectors_negates(mask_a in prop::collection::vec(any::<bool>(), 1..25), mask_b in prop::collection::vec(any::<bool>(), 1..25), lambda in 1u64..5) {
        let (a, b) = (subset(5, 2, &mask_a), subset(5, 2, &mask_b));
        prop_assert_eq!(count_det(&a, &b, lambda, 1, 1).unwrap(), count_det(&b, &a, 5 - lambda, 1, 1).unwrap());
    }

    #[test]
    fn crossratio_is_symmetric(mask_a in prop::collection::vec(any::<bool>(), 1..49), mask_b in prop::collection::vec(any::<bool>(), 1..49), lambda in 2u64..7) {
        let (a, b) = (subset(7, 2, &mask_a), subset(7, 2, &mask_b));
        prop_assert_eq!(count_crossratio(&a, &b, lambda).unwrap(), count_crossratio(&b, &a, lambda).unwrap());
        let r = check_inequality(&IncidenceInstance::cross_ratio(a, b, lambda).unwrap()).unwrap();
        prop_assert!(r.holds());
    }

    #[test]
    fn set_sizes(xs in prop::collection::vec(0u64..31, 0..12), ys in prop::collection::vec(0u64..31, 0..12)) {
        let m = Modulus::new(31).unwrap();
        let (a, b) = (PointSet::from_residues(m.clone(), xs), PointSet::from_residues(m, ys));
        prop_assert!(sumset(&a, &b).unwrap().len() <= a.len() * b.len());
        prop_assert!(productset(&a, &b).unwrap().len() <= a.len() * b.len());
        if !a.is_empty() && !b.is_empty() {
            prop_assert!(sumset(&a, &b).unwrap().len() >= a.len().max(b.len()));
        }
    }

    #[test]
    fn energy_at_least_diagonal(xs in prop::collection::vec(1u64..97, 0..30)) {
        let z = PointSet::from_residues(Modulus::new(97).unwrap(), xs);
        let e = mult_energy(&z).unwrap();
        let n = z.len() as u128;
        prop_assert!(e >= n * n);
        prop_assert!(e <= n * n * n);
    }

    #[test]
    fn continued_fraction_round_trip(q in 2u64..100_000, a in 1u64..100_000) {
        let a = a % q;
        prop_assume!(a > 0 && zq_incidence::modring::gcd(a, q) == 1);
        let cf = cf_expand(a, q).unwrap();
        prop_assert_eq!(cf_value(cf.quotients()).unwrap(), (a, q));
    }
}
