use proptest::prelude::*;

use fermat_refute::arith::Natural;
use fermat_refute::filters::recheck::recheck;
use fermat_refute::filters::{evaluate, Candidate, FilterId, Pipeline, Verdict, DEFAULT_MODULI};
use fermat_refute::search::oracle_check;

const SAFE_FILTERS: [FilterId; 7] = [
    FilterId::BasicBounds,
    FilterId::T2,
    FilterId::T3,
    FilterId::T4,
    FilterId::T5,
    FilterId::T6,
    FilterId::Modular,
];

fn pipeline(filters: Vec<FilterId>) -> Pipeline {
    let moduli = DEFAULT_MODULI.iter().copied().map(Natural::from).collect();
    Pipeline::new(filters, moduli, true).unwrap()
}

fn candidate() -> impl Strategy<Value = Candidate> {
    (1u64..400, 1u64..400, 1u64..400, prop::sample::select(vec![3u64, 5, 7, 11, 13]))
        .prop_map(|(x, y, z, p)| Candidate::from_u64(x, y, z, p).unwrap())
}

fn filter_subset() -> impl Strategy<Value = Vec<FilterId>> {
    prop::sample::subsequence(SAFE_FILTERS.to_vec(), 1..=SAFE_FILTERS.len()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn every_filter_is_symmetric_in_the_legs(c in candidate()) {
        let all = pipeline(FilterId::ALL.to_vec());
        for &id in all.filters() {
            prop_assert_eq!(
                all.apply(id, &c).is_refuted(),
                all.apply(id, &c.swapped()).is_refuted(),
                "{} on {:?}", id, c
            );
        }
    }

    #[test]
    fn refutations_recheck_and_are_sound(c in candidate()) {
        let all = pipeline(FilterId::ALL.to_vec());
        for &id in all.filters() {
            if let Verdict::Refuted(cert) = all.apply(id, &c) {
                prop_assert!(recheck(&c, &cert).is_ok(), "{} on {:?}", id, c);
                if !cert.is_external() {
                    let p = c.p().exponent().unwrap();
                    prop_assert!(!oracle_check(c.x(), c.y(), c.z(), p));
                }
            }
        }
    }

    #[test]
    fn adding_a_filter_never_loses_a_refutation(
        c in candidate(),
        order in Just(SAFE_FILTERS.to_vec()).prop_shuffle(),
        split in 1usize..SAFE_FILTERS.len(),
        at in 0usize..SAFE_FILTERS.len(),
    ) {
        // The base takes the first `split` filters; the next one is added.
        let base = order[..split].to_vec();
        let mut extended = base.clone();
        extended.insert(at.min(split), order[split]);
        if evaluate(&c, &pipeline(base)).is_refuted() {
            prop_assert!(evaluate(&c, &pipeline(extended)).is_refuted());
        }
    }

    #[test]
    fn pipeline_returns_first_refuting_filter(c in candidate(), filters in filter_subset()) {
        let pl = pipeline(filters.clone());
        let first = filters.iter().copied().find(|&id| pl.apply(id, &c).is_refuted());
        let got = evaluate(&c, &pl).certificate().map(|cert| cert.filter_id());
        prop_assert_eq!(got, first);
    }

    #[test]
    fn t5_refines_basic_sum_bounds(c in candidate()) {
        // Whenever T5 applies (coprime legs) and the sum is outside (z, 2z),
        // both it and the basic bounds refute.
        let pl = pipeline(SAFE_FILTERS.to_vec());
        let s = c.x() + c.y();
        let outside = &s <= c.z() || s >= c.z() * 2u64;
        if outside && c.x().gcd(c.y()).is_one() {
            prop_assert!(pl.apply(FilterId::T5, &c).is_refuted());
            prop_assert!(pl.apply(FilterId::BasicBounds, &c).is_refuted());
        }
    }
}

#[test]
fn evaluation_order_examples() {
    let c = Candidate::from_u64(2, 3, 4, 3).unwrap();
    for order in [vec![FilterId::T4, FilterId::T3], vec![FilterId::T3, FilterId::T4]] {
        let v = evaluate(&c, &pipeline(order));
        assert_eq!(v.certificate().map(|cert| cert.filter_id()), Some(FilterId::T3));
    }
}
