use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use tnf::measures::{
    classify_nu, definetti_estimate, exhaustive_fixed_probability, fixed_measure_full, fixed_measure_paper,
    sample_labels, thoma_character, AlphaParams,
};
use tnf::numeric::{parse_rational, rational};
use tnf::young::{ad_image, check_n2_equals_n, contains, is_fixed, normalizer_symbolic, SignedPartition, SignedYoungSubgroup};
use tnf::{Permutation, Rational};

const N: usize = 7;

fn perm_on(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(&images).unwrap())
}

fn labels_on(n: usize) -> impl Strategy<Value = SignedPartition> {
    prop::collection::vec(-2i64..=2, n).prop_map(|l| SignedPartition::new(l).unwrap())
}

fn alpha() -> impl Strategy<Value = AlphaParams<Rational>> {
    prop::collection::btree_map(-3i64..=3, 1i64..=9, 1..5).prop_map(|raw| {
        let total: i64 = raw.values().sum();
        AlphaParams::new(raw.into_iter().map(|(i, w)| (i, rational(w, total))).collect()).unwrap()
    })
}

fn alpha_without_pool() -> impl Strategy<Value = AlphaParams<Rational>> {
    prop::collection::btree_map((1i64..=3).prop_union(-3i64..=-1), 1i64..=9, 1..5).prop_map(|raw| {
        let total: i64 = raw.values().sum();
        AlphaParams::new(raw.into_iter().map(|(i, w)| (i, rational(w, total))).collect()).unwrap()
    })
}

/// Moves the points of `g` by `offset`, so its support avoids `1..=offset`.
fn shift(g: &Permutation, offset: usize) -> Permutation {
    let cycles: Vec<Vec<usize>> = g.cycles().iter().map(|c| c.iter().map(|x| x + offset).collect()).collect();
    Permutation::from_cycles(&cycles).unwrap()
}

proptest! {
    #[test]
    fn composition_is_associative(a in perm_on(N), b in perm_on(N), c in perm_on(N)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn inverse_cancels(a in perm_on(N)) {
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.inverse().compose(&a).is_identity());
    }

    #[test]
    fn parity_is_multiplicative(a in perm_on(N), b in perm_on(N)) {
        prop_assert_eq!(a.compose(&b).parity(), a.parity() * b.parity());
    }

    #[test]
    fn conjugation_preserves_cycle_type(a in perm_on(N), h in perm_on(N)) {
        let c = a.conjugate_by(&h);
        prop_assert_eq!(c.cycle_type(), a.cycle_type());
        prop_assert_eq!(c, h.compose(&a).compose(&h.inverse()));
    }

    #[test]
    fn order_annihilates(a in perm_on(N)) {
        let mut power = Permutation::identity();
        for k in 1..=a.order() {
            power = power.compose(&a);
            prop_assert_eq!(power.is_identity(), k == a.order());
        }
    }

    #[test]
    fn text_round_trip(a in perm_on(N)) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Permutation>().unwrap(), a);
    }

    #[test]
    fn ad_is_an_action(g in perm_on(N), h in perm_on(N), eta in labels_on(N)) {
        let step = ad_image(&g, &ad_image(&h, &eta).unwrap()).unwrap();
        prop_assert_eq!(step, ad_image(&g.compose(&h), &eta).unwrap());
        prop_assert_eq!(ad_image(&Permutation::identity(), &eta).unwrap(), eta);
    }

    #[test]
    fn membership_transports_under_conjugation(g in perm_on(N), h in perm_on(N), eta in labels_on(N)) {
        let y = SignedYoungSubgroup::new(&eta);
        let moved = SignedYoungSubgroup::new(&ad_image(&h, &eta).unwrap());
        prop_assert_eq!(contains(&moved, &g.conjugate_by(&h)).unwrap(), contains(&y, &g).unwrap());
    }

    #[test]
    fn fixed_iff_cycles_monochromatic(g in perm_on(N), eta in labels_on(N)) {
        let mono = g.cycles().iter().all(|c| c.iter().all(|&x| eta.label(x) == eta.label(c[0])));
        prop_assert_eq!(is_fixed(&g, &eta).unwrap(), mono);
        prop_assert_eq!(ad_image(&g, &eta).unwrap() == eta, mono);
    }

    #[test]
    fn normalizer_contains_and_stabilizes(g in perm_on(N), eta in labels_on(N)) {
        let y = SignedYoungSubgroup::new(&eta);
        let n = normalizer_symbolic(&y);
        if contains(&y, &g).unwrap() {
            prop_assert!(contains(&n, &g).unwrap());
        }
        // an element of N(Y) moves the labels of Y only within N's blocks
        if contains(&n, &g).unwrap() {
            let moved = ad_image(&g, y.partition()).unwrap();
            prop_assert_eq!(normalizer_symbolic(&SignedYoungSubgroup::new(&moved)), n.clone());
        }
        prop_assert!(check_n2_equals_n(&y));
        prop_assert_eq!(normalizer_symbolic(&n), n);
    }

    #[test]
    fn fixed_measures_depend_on_cycle_type(a in alpha(), g in perm_on(6), h in perm_on(6)) {
        let c = g.conjugate_by(&h);
        prop_assert_eq!(fixed_measure_full(&a, &c), fixed_measure_full(&a, &g));
        prop_assert_eq!(fixed_measure_paper(&a, &c), fixed_measure_paper(&a, &g));
        prop_assert_eq!(thoma_character(&a, &c), thoma_character(&a, &g));
    }

    #[test]
    fn multiplicative_over_disjoint_supports(a in alpha(), g in perm_on(4), h in perm_on(4)) {
        let h = shift(&h, 4);
        let gh = g.compose(&h);
        prop_assert_eq!(fixed_measure_full(&a, &gh), fixed_measure_full(&a, &g) * fixed_measure_full(&a, &h));
        prop_assert_eq!(thoma_character(&a, &gh), thoma_character(&a, &g) * thoma_character(&a, &h));
    }

    #[test]
    fn character_bounds(a in alpha(), g in perm_on(N)) {
        let chi = thoma_character(&a, &g);
        prop_assert!(chi <= Rational::one() && chi >= -Rational::one());
        prop_assert_eq!(thoma_character(&a, &Permutation::identity()), Rational::one());
    }

    #[test]
    fn paper_equals_full_without_pool(a in alpha_without_pool(), g in perm_on(N)) {
        prop_assert_eq!(fixed_measure_paper(&a, &g), fixed_measure_full(&a, &g));
    }

    #[test]
    fn exhaustive_matches_full(a in alpha(), g in perm_on(5)) {
        prop_assert_eq!(exhaustive_fixed_probability(&a, &g).unwrap(), fixed_measure_full(&a, &g));
    }

    #[test]
    fn tnf_matches_positive_support(a in alpha()) {
        let positive = a.weights().iter().all(|(&i, w)| i > 0 || w.is_zero());
        prop_assert_eq!(classify_nu(&a).is_tnf(), positive);
    }

    #[test]
    fn canonical_alpha_is_stable(a in alpha()) {
        prop_assert_eq!(AlphaParams::new(a.weights().clone()).unwrap(), a.clone());
        let text = a.to_json().to_string();
        prop_assert_eq!(AlphaParams::<Rational>::from_json_str(&text).unwrap(), a);
    }

    #[test]
    fn estimate_sums_to_one(a in alpha(), n in 1usize..200, seed in any::<u64>()) {
        let est = definetti_estimate(&sample_labels(&a, n, seed).unwrap());
        let total: Rational = est.weights().values().sum();
        prop_assert_eq!(total, Rational::one());
    }

    #[test]
    fn sampling_commutes_with_relabeling(a in alpha(), g in perm_on(N), seed in any::<u64>()) {
        let s = sample_labels(&a, N, seed).unwrap().partition();
        let moved = ad_image(&g, &s).unwrap();
        // the relabeled sample is the sample read through g⁻¹
        for x in 1..=N {
            prop_assert_eq!(moved.label(g.apply(x)), s.label(x));
        }
        let mut before: BTreeMap<i64, usize> = BTreeMap::new();
        let mut after: BTreeMap<i64, usize> = BTreeMap::new();
        for x in 1..=N {
            *before.entry(s.label(x)).or_default() += 1;
            *after.entry(moved.label(x)).or_default() += 1;
        }
        prop_assert_eq!(before, after);
    }

    #[test]
    fn rational_text_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let r = rational(p, q);
        prop_assert_eq!(parse_rational(&tnf::numeric::format_rational(&r)).unwrap(), r);
    }
}

#[test]
fn zero_weight_entries_are_ignored() {
    let a = AlphaParams::new(BTreeMap::from([(1, rational(1, 1)), (2, Rational::zero())])).unwrap();
    assert_eq!(a.support(), vec![1]);
}
