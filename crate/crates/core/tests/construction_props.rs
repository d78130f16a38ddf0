mod common;

use common::{arb_system, greedy_system, is_dgr, sys, widen};
use dgr_core::constructions::{self, Case, Rule};
use dgr_core::{ConstructionError, DgrSystem, Gap, Header, Ruler};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, max_global_rejects: 20_000, failure_persistence: None, ..ProptestConfig::default() }
}

/// The gap as the merge sees it after reflecting so that it sits in the lower half.
fn oriented_tail(s: &DgrSystem, g: Gap) -> u32 {
    let tail = s.n() - g.w - g.t;
    s.n() - g.w - g.t.min(tail)
}

#[test]
fn worked_examples() {
    let a = sys(1, 3, 4, &[&[1, 2, 4]]);
    let b = sys(1, 2, 2, &[&[1, 2]]);
    let out = constructions::thm3_extend(&a, &b).unwrap();
    assert_eq!(out.system, sys(2, 3, 7, &[&[3, 4, 6], &[1, 2, 7]]));
    assert_eq!(out.trace.rule, Rule::Extend);

    let out = constructions::concat_compose(&a, &a).unwrap();
    assert_eq!(out.system, sys(2, 3, 8, &[&[1, 2, 4], &[5, 6, 8]]));

    let out = constructions::thm3_double(&a).unwrap();
    assert_eq!(out.system, sys(2, 4, 10, &[&[2, 3, 5, 10], &[1, 6, 7, 9]]));

    let r = sys(1, 4, 7, &[&[1, 2, 5, 7]]);
    let out = constructions::gap_merge(&r, Gap::new(2, 2), &r).unwrap();
    assert_eq!(out.system, sys(2, 4, 12, &[&[1, 2, 10, 12], &[3, 4, 7, 9]]));
    assert_eq!(out.trace.case, Some(Case::GapInsert));

    let out = constructions::gap_double(&r, Gap::new(2, 2)).unwrap();
    assert_eq!(out.system, sys(2, 4, 10, &[&[1, 2, 6, 8], &[3, 5, 9, 10]]));

    let out = constructions::shift_pair(&Ruler::new(vec![1, 2, 5, 7]).unwrap(), 7).unwrap();
    assert_eq!(out.system.header(), Header::new(2, 3, 8));
}

#[test]
fn extend_with_empty_second_system_is_identity() {
    let a = sys(1, 3, 4, &[&[1, 2, 4]]);
    let out = constructions::thm3_extend(&a, &DgrSystem::empty(2)).unwrap();
    assert_eq!(out.system, a);
}

#[test]
fn refusals() {
    let a = sys(1, 3, 4, &[&[1, 2, 4]]);
    let long = sys(1, 2, 9, &[&[1, 9]]);
    assert_eq!(constructions::thm3_extend(&a, &long), Err(ConstructionError::SpanOrder { na: 4, nb: 9 }));
    assert!(matches!(constructions::concat_compose(&a, &long), Err(ConstructionError::MarkCountMismatch { .. })));
    let spread = sys(1, 3, 20, &[&[1, 3, 20]]);
    let small = sys(1, 3, 4, &[&[1, 2, 4]]);
    // the gap {4..19} is far wider than the merged span
    assert!(matches!(
        constructions::gap_merge(&spread, Gap::new(3, 16), &small),
        Ok(_) | Err(ConstructionError::GapTooWide { .. })
    ));
    assert!(matches!(
        constructions::shift_pair(&Ruler::new(vec![1, 2, 3]).unwrap(), 3),
        Err(ConstructionError::NotGolomb)
    ));
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn concat_is_sound(sa in arb_system(3, 1, 5), picks in prop::collection::vec(any::<u32>(), 1..30), ib in 1..3u32) {
        let sb = greedy_system(ib, sa.j(), 3 * sa.j() * sa.j(), &picks, 0);
        let out = constructions::concat_compose(&sa, &sb).unwrap();
        let (i, n) = (sa.i() + sb.i(), sa.n() + sb.n());
        prop_assert!(is_dgr(&out.system, i, sa.j(), n));
        prop_assert_eq!(out.trace.output, Header::new(i, sa.j(), n));
    }

    #[test]
    fn extend_is_sound(sa in arb_system(3, 2, 5), picks in prop::collection::vec(any::<u32>(), 1..30), ib in 1..4u32) {
        let sb = greedy_system(ib, sa.j() - 1, 3 * sa.j() * sa.j(), &picks, 0);
        let sa = widen(&sa, sb.n());
        let out = constructions::thm3_extend(&sa, &sb).unwrap();
        let (i, n) = (sa.i() + sb.i(), sa.n() + sb.n() + sb.i());
        prop_assert!(is_dgr(&out.system, i, sa.j(), n));
        prop_assert_eq!(out.trace.output, Header::new(i, sa.j(), n));
    }

    #[test]
    fn extend_double_is_sound(sb in arb_system(4, 1, 5)) {
        let out = constructions::thm3_double(&sb).unwrap();
        let (i, n) = (2 * sb.i(), 2 * sb.n() + 2 * sb.i());
        prop_assert!(is_dgr(&out.system, i, sb.j() + 1, n));
    }

    #[test]
    fn gap_merge_insert_is_sound(sa in arb_system(3, 2, 5), picks in prop::collection::vec(any::<u32>(), 1..30), ib in 1..3u32, pick in any::<prop::sample::Index>()) {
        let gaps = sa.gaps();
        prop_assume!(!gaps.is_empty());
        let g = gaps[pick.index(gaps.len())];
        let sb = greedy_system(ib, sa.j(), 2 * sa.j() * sa.j(), &picks, 0);
        let sb = widen(&sb, oriented_tail(&sa, g));
        let out = constructions::gap_merge(&sa, g, &sb).unwrap();
        let n = sa.n() + sb.n() - g.w;
        prop_assert!(is_dgr(&out.system, sa.i() + sb.i(), sa.j(), n));
        prop_assert_eq!(out.trace.case, Some(Case::GapInsert));
    }

    #[test]
    fn gap_merge_wrap_is_sound(sa in arb_system(2, 2, 4), picks in prop::collection::vec(any::<u32>(), 1..30), pick in any::<prop::sample::Index>(), slack in 0..3u32) {
        let gaps = sa.gaps();
        prop_assume!(!gaps.is_empty());
        let g = gaps[pick.index(gaps.len())];
        let sb = greedy_system(1, sa.j(), sa.j() * sa.j(), &picks, 0);
        let sb = widen(&sb, g.w + slack);
        prop_assume!(oriented_tail(&sa, g) > sb.n());
        let out = constructions::gap_merge(&sa, g, &sb).unwrap();
        let n = sa.n() + sb.n() - g.w;
        prop_assert!(is_dgr(&out.system, sa.i() + 1, sa.j(), n));
        prop_assert_eq!(out.trace.case, Some(Case::GapWrap));
    }

    #[test]
    fn gap_merge_rejects_too_wide_gaps(sa in arb_system(3, 2, 2), pick in any::<prop::sample::Index>()) {
        let gaps = sa.gaps();
        prop_assume!(!gaps.is_empty());
        let g = gaps[pick.index(gaps.len())];
        let sb = sys(1, 2, 2, &[&[1, 2]]);
        let result = constructions::gap_merge(&sa, g, &sb);
        if oriented_tail(&sa, g) > sb.n() && g.w > sb.n() {
            let too_wide = matches!(result, Err(ConstructionError::GapTooWide { m, .. }) if m == sb.n());
            prop_assert!(too_wide);
        } else {
            prop_assert!(result.is_ok());
        }
    }

    #[test]
    fn gap_double_is_sound(sa in arb_system(3, 1, 5), pick in any::<prop::sample::Index>()) {
        let gaps = sa.gaps();
        prop_assume!(!gaps.is_empty());
        let g = gaps[pick.index(gaps.len())];
        let out = constructions::gap_double(&sa, g).unwrap();
        prop_assert!(is_dgr(&out.system, 2 * sa.i(), sa.j(), 2 * sa.n() - 2 * g.w));
    }

    #[test]
    fn shift_pair_is_sound(s in arb_system(1, 3, 7)) {
        let r = &s.rulers()[0];
        let n = r.last_mark().unwrap();
        let out = constructions::shift_pair(r, n).unwrap();
        prop_assert!(is_dgr(&out.system, 2, r.len() as u32 - 1, n + 1));
        let expected = if r.marks().iter().any(|m| r.contains(m + 1)) { Case::ShiftCommon } else { Case::ShiftDisjoint };
        prop_assert_eq!(out.trace.case, Some(expected));
    }

    #[test]
    fn non_gaps_are_refused(sa in arb_system(2, 2, 4), t in 0..10u32, w in 1..4u32) {
        let g = Gap::new(t, w);
        let empty = g.positions().all(|p| sa.rulers().iter().all(|r| !r.contains(p)));
        let fits = t + w <= sa.n();
        let result = constructions::gap_double(&sa, g);
        if !fits {
            prop_assert!(
                matches!(result, Err(ConstructionError::GapOutOfRange { .. })),
                "expected out of range"
            );
        } else if !empty {
            prop_assert_eq!(result, Err(ConstructionError::GapNotEmpty(g)));
        }
    }
}

fn oriented(s: &DgrSystem, g: Gap, reflected: bool) -> (DgrSystem, Gap) {
    if reflected {
        (s.reflect().unwrap(), Gap::new(s.n() - g.t - g.w, g.w))
    } else {
        (s.clone(), g)
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn gap_merge_insert_layout(sa in arb_system(3, 2, 5), picks in prop::collection::vec(any::<u32>(), 1..30), pick in any::<prop::sample::Index>()) {
        let gaps = sa.gaps();
        prop_assume!(!gaps.is_empty());
        let g = gaps[pick.index(gaps.len())];
        let sb = widen(&greedy_system(1, sa.j(), 2 * sa.j() * sa.j(), &picks, 0), oriented_tail(&sa, g));
        let out = constructions::gap_merge(&sa, g, &sb).unwrap();
        let (oa, og) = oriented(&sa, g, out.trace.param("reflected") == Some(1));
        let a = sa.i() as usize;
        let (m, w, t) = (sb.n(), og.w, og.t);
        for (x, r) in out.system.rulers()[..a].iter().enumerate() {
            let back: Vec<u32> = r.marks().iter().map(|&v| if v <= t { v } else { v + w - m }).collect();
            prop_assert_eq!(back.as_slice(), oa.rulers()[x].marks());
            // [1,t] and [t+m+1, n+m-w] hold the first system, [t+1, t+m] the second
            prop_assert!(r.marks().iter().all(|&v| v <= t || v > t + m));
        }
        let inserted = sb.rulers()[0].translate(i64::from(t)).unwrap();
        prop_assert_eq!(&out.system.rulers()[a], &inserted);
    }

    #[test]
    fn gap_double_keeps_the_first_copy(sa in arb_system(3, 1, 5), pick in any::<prop::sample::Index>()) {
        let gaps = sa.gaps();
        prop_assume!(!gaps.is_empty());
        let g = gaps[pick.index(gaps.len())];
        let out = constructions::gap_double(&sa, g).unwrap();
        let (oa, og) = oriented(&sa, g, out.trace.param("reflected") == Some(1));
        let lift = i64::from(sa.n()) - 2 * i64::from(og.w) - i64::from(og.t);
        for (x, r) in out.system.rulers()[..sa.i() as usize].iter().enumerate() {
            let back: Vec<u32> = r.marks().iter().map(|&v| if v <= og.t { v } else { (i64::from(v) - lift) as u32 }).collect();
            prop_assert_eq!(back.as_slice(), oa.rulers()[x].marks());
        }
    }

    #[test]
    fn shift_pair_rulers_come_from_the_two_copies(s in arb_system(1, 3, 7)) {
        let r = &s.rulers()[0];
        let n = r.last_mark().unwrap();
        let out = constructions::shift_pair(r, n).unwrap();
        let shifted = r.translate(1).unwrap();
        let [x, y] = out.system.rulers() else { panic!("two rulers expected") };
        prop_assert!(x.marks().iter().all(|m| r.contains(*m)));
        prop_assert!(y.marks().iter().all(|m| shifted.contains(*m)));
        prop_assert_eq!(x.len() + 1, r.len());
        prop_assert_eq!(y.len() + 1, r.len());
    }
}

#[test]
fn singer_rulers() {
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let s = constructions::singer_ruler(q).unwrap();
        assert_eq!(s.ruler.len(), q as usize + 1);
        assert!(common::golomb(s.ruler.marks()));
        assert!(s.ruler.length() < q * q + q + 1);
    }
    assert!(constructions::singer_ruler(6).is_err());
}
