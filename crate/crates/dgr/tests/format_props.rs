use dgr::format::{emit_dgr, emit_ruler, parse_dgr, parse_rulers};
use dgr_core::{DgrSystem, Header, Ruler};
use proptest::prelude::*;

fn arb_ruler() -> impl Strategy<Value = Ruler> {
    prop::collection::btree_set(0..5000u32, 1..12).prop_map(|s| Ruler::from_sorted(s.into_iter().collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rulers_round_trip(rs in prop::collection::vec(arb_ruler(), 0..6)) {
        let text: String = rs.iter().map(|r| format!("{}\n", emit_ruler(r))).collect();
        prop_assert_eq!(parse_rulers(&text).unwrap(), rs);
    }

    #[test]
    fn systems_round_trip(rs in prop::collection::vec(arb_ruler(), 0..6), j in 0..12u32, n in 0..6000u32) {
        let s = DgrSystem::from_parts(Header::new(rs.len() as u32, j, n), rs);
        let text = emit_dgr(&s);
        let back = parse_dgr(&text).unwrap();
        prop_assert_eq!(emit_dgr(&back), text);
        prop_assert_eq!(back, s);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored(rs in prop::collection::vec(arb_ruler(), 1..5), noise in prop::collection::vec(prop::bool::ANY, 1..8)) {
        let s = DgrSystem::from_parts(Header::new(rs.len() as u32, 3, 9), rs);
        let mut text = String::new();
        for (k, line) in emit_dgr(&s).lines().enumerate() {
            if noise[k % noise.len()] {
                text.push_str("# note\n\n");
            }
            text.push_str(line);
            text.push('\n');
        }
        prop_assert_eq!(parse_dgr(&text).unwrap(), s);
    }

    #[test]
    fn garbage_never_panics(text in "[0-9 #\n\r\tx-]{0,60}") {
        let _ = parse_dgr(&text);
        let _ = parse_rulers(&text);
    }
}
