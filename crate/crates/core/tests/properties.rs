//! Randomized checks on sizes beyond exhaustive reach, against naive
//! quadratic oracles written here.

use num_rational::BigRational;
use proptest::prelude::*;
use shallowperm_core::series::{expand_rational, rat, RationalSeries};
use shallowperm_core::{
    certify_shallow, extend_right, is_shallow, l_operator, r_operator, ExtensionSlot, Permutation, SymmetryKind,
};

fn naive_shallow(w: &[u32]) -> bool {
    let n = w.len();
    let d: i64 = w.iter().enumerate().map(|(i, &v)| (v as i64 - i as i64 - 1).abs()).sum();
    let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count() as i64;
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for s in 0..n {
        if !seen[s] {
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = w[x] as usize - 1;
            }
        }
    }
    inv + (n as i64 - cycles) == d
}

fn perm(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|w| Permutation::new(w).unwrap())
}

/// Random walk down the generation tree: each step picks a slot by index,
/// falling back to appending when the slot is illegal.
fn shallow_perm(max: usize) -> impl Strategy<Value = Permutation> {
    prop::collection::vec(any::<prop::sample::Index>(), 0..max).prop_map(|choices| {
        let mut p = Permutation::empty();
        for c in choices {
            let slot = match c.index(p.len() + 1) {
                0 => ExtensionSlot::Append,
                i => ExtensionSlot::AtPosition(i),
            };
            p = extend_right(&p, slot).or_else(|_| extend_right(&p, ExtensionSlot::Append)).unwrap();
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn decider_matches_naive_statistics(p in perm(40)) {
        prop_assert_eq!(is_shallow(&p), naive_shallow(p.as_slice()));
    }

    #[test]
    fn certificate_matches_decider_and_replays(p in perm(40)) {
        let cert = certify_shallow(&p);
        prop_assert_eq!(cert.verdict, is_shallow(&p));
        prop_assert_eq!(cert.replay(), p);
    }

    #[test]
    fn generated_permutations_are_shallow(p in shallow_perm(48)) {
        prop_assert!(naive_shallow(p.as_slice()));
    }

    #[test]
    fn symmetries_preserve_shallowness(p in shallow_perm(40)) {
        for k in SymmetryKind::ALL {
            prop_assert!(naive_shallow(p.apply_symmetry(k).as_slice()));
        }
    }

    #[test]
    fn direct_sums_stay_shallow(p in shallow_perm(24), q in shallow_perm(24)) {
        prop_assert!(naive_shallow(p.direct_sum(&q).as_slice()));
    }

    #[test]
    fn left_is_conjugate_of_right(p in perm(40)) {
        prop_assume!(p.len() >= 2);
        let conj = r_operator(&p.reverse_complement()).unwrap().reverse_complement();
        prop_assert_eq!(l_operator(&p).unwrap(), conj);
    }

    #[test]
    fn rational_expansion_inverts_multiplication(
        num in prop::collection::vec(-20i64..20, 0..6),
        den_tail in prop::collection::vec(-20i64..20, 0..6),
        lead in prop::sample::select(vec![-3i64, -1, 1, 2, 5]),
    ) {
        let order = 15;
        let den: Vec<BigRational> = std::iter::once(lead).chain(den_tail).map(rat).collect();
        let num: Vec<BigRational> = num.into_iter().map(rat).collect();
        let s = expand_rational(&num, &den, order).unwrap();
        let back = s.mul(&RationalSeries::from_coeffs(den, order));
        prop_assert_eq!(back, RationalSeries::from_coeffs(num, order));
    }
}
