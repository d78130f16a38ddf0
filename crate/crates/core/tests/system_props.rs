mod common;

use common::{arb_system, golomb, sys};
use dgr_core::{Gap, Ruler};
use proptest::prelude::*;

fn arb_marks() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::btree_set(0..60u32, 1..8).prop_map(|s| s.into_iter().collect())
}

#[test]
fn gap_examples() {
    assert_eq!(sys(1, 4, 7, &[&[1, 2, 5, 7]]).gaps(), vec![Gap::new(2, 2), Gap::new(5, 1)]);
    assert!(sys(2, 3, 6, &[&[1, 2, 4], &[3, 5, 6]]).gaps().is_empty());
    assert_eq!(sys(1, 3, 5, &[&[1, 2, 5]]).gaps(), vec![Gap::new(2, 2)]);
}

#[test]
fn reflection_and_canonical_examples() {
    assert_eq!(sys(1, 3, 4, &[&[1, 2, 4]]).reflect().unwrap(), sys(1, 3, 4, &[&[1, 3, 4]]));
    let s = sys(2, 3, 6, &[&[3, 5, 6], &[1, 2, 4]]);
    assert_eq!(s.canonical_form(), sys(2, 3, 6, &[&[1, 2, 4], &[3, 5, 6]]));
    assert_eq!(sys(1, 3, 4, &[&[1, 3, 4]]).canonical_form(), sys(1, 3, 4, &[&[1, 2, 4]]));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn golomb_matches_oracle_and_difference_flags(marks in arb_marks()) {
        let r = Ruler::new(marks.clone()).unwrap();
        prop_assert_eq!(r.is_golomb(), golomb(&marks));
        let flagged = r.difference_list().iter().any(|d| d.repeated);
        prop_assert_eq!(flagged, !r.is_golomb());
        prop_assert_eq!(r.collisions().is_empty(), r.is_golomb());
    }

    #[test]
    fn golomb_survives_translation_and_reflection(marks in arb_marks(), d in 0..100i64) {
        let r = Ruler::new(marks).unwrap();
        let t = r.translate(d).unwrap();
        prop_assert_eq!(t.is_golomb(), r.is_golomb());
        let axis = r.last_mark().unwrap();
        prop_assert_eq!(r.reflect(axis).unwrap().is_golomb(), r.is_golomb());
    }

    #[test]
    fn reflection_is_a_valid_involution(s in arb_system(4, 1, 5)) {
        let r = s.reflect().unwrap();
        prop_assert!(r.is_valid());
        prop_assert_eq!(r.header(), s.header());
        prop_assert_eq!(r.reflect().unwrap(), s);
    }

    #[test]
    fn gap_widths_sum_to_the_slack(s in arb_system(4, 1, 5)) {
        let total: u32 = s.gaps().iter().map(|g| g.w).sum();
        prop_assert_eq!(total, s.n() - s.i() * s.j());
        for g in s.gaps() {
            prop_assert!(g.positions().all(|p| s.rulers().iter().all(|r| !r.contains(p))));
        }
        if s.header().is_regular() {
            prop_assert!(s.gaps().is_empty());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(s in arb_system(4, 1, 5)) {
        let c = s.canonical_form();
        prop_assert!(c.is_valid());
        prop_assert_eq!(c.canonical_form(), c.clone());
        prop_assert_eq!(s.reflect().unwrap().canonical_form(), c);
    }

    #[test]
    fn verify_lists_every_broken_rule(s in arb_system(3, 2, 4), extra in 1..40u32) {
        // moving a mark onto another ruler's mark makes the rulers overlap
        let mut rulers = s.rulers().to_vec();
        prop_assume!(rulers.len() >= 2);
        let stolen = rulers[1].marks()[0];
        let mut first: Vec<u32> = rulers[0].marks().to_vec();
        first[0] = stolen;
        first.sort_unstable();
        first.dedup();
        prop_assume!(first.len() == rulers[0].len());
        rulers[0] = Ruler::new(first).unwrap();
        let broken = dgr_core::DgrSystem::from_parts(s.header(), rulers);
        prop_assert!(!broken.is_valid());
        let too_short = dgr_core::DgrSystem::from_parts(
            dgr_core::Header::new(s.i(), s.j(), s.n().saturating_sub(extra)),
            s.rulers().to_vec(),
        );
        let top = s.union().last().copied().unwrap();
        prop_assert_eq!(too_short.is_valid(), s.n().saturating_sub(extra) >= top);
    }
}
