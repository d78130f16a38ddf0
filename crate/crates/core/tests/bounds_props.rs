mod common;

use std::collections::BTreeMap;

use common::{is_dgr, sys};
use dgr_core::bounds::{gap_floor, BoundsTable, CellId, Quantity, RuleId};
use dgr_core::conjectures;
use dgr_core::search::{self, LengthFloors, SearchConfig, Status, Unlimited};
use dgr_core::Header;

/// Exact values by search for every cell of the region.
fn exact_region(max_i: u32, max_j: u32) -> BTreeMap<CellId, (u32, dgr_core::DgrSystem)> {
    let floors = LengthFloors::exact_up_to(max_j);
    let mut out = BTreeMap::new();
    for i in 1..=max_i {
        for j in 1..=max_j {
            let r = search::min_n_with(i, j, &SearchConfig::default(), &floors, &mut Unlimited);
            assert_eq!(r.status, Status::Found);
            out.insert(CellId::new(i, j), (r.value.unwrap(), r.witness.unwrap()));
        }
    }
    out
}

fn seeded(max_i: u32, max_j: u32, exact: &BTreeMap<CellId, (u32, dgr_core::DgrSystem)>, seed_i: u32) -> BoundsTable {
    let mut t = BoundsTable::new(max_i, max_j);
    t.seed_trivial().unwrap();
    t.seed_registry().unwrap();
    for (&cell, (v, w)) in exact {
        if cell.i <= seed_i && t.contains(cell) {
            t.seed_exact(cell, *v, w.clone()).unwrap();
        }
    }
    t
}

#[test]
fn propagated_bounds_bracket_search_values() {
    let exact = exact_region(5, 5);
    let mut t = seeded(5, 5, &exact, 3);
    t.propagate().unwrap();
    for c in t.cells() {
        assert!(c.h_lower >= c.cell.floor());
        assert!(c.y_lower >= c.h_lower);
        if let Some(u) = c.h_upper {
            assert!(c.h_lower <= u);
        }
        let (v, _) = &exact[&c.cell];
        assert!(c.h_lower <= *v, "lower bound above H at {}", c.cell);
        if let Some(u) = c.h_upper {
            assert!(u >= *v, "upper bound below H at {}", c.cell);
        }
    }
}

#[test]
fn every_constructive_fact_materializes_to_its_bound() {
    let exact = exact_region(1, 7);
    let mut t = seeded(6, 6, &exact, 1);
    t.propagate().unwrap();
    let mut cache = BTreeMap::new();
    let mut built = 0;
    for f in t.facts() {
        if f.quantity != Quantity::HUpper {
            continue;
        }
        let result = t.materialize_fact(f.id, &mut cache);
        if f.constructive {
            let w = result.unwrap_or_else(|e| panic!("fact #{} ({}) at {}: {e}", f.id.0, f.rule, f.cell));
            assert!(is_dgr(&w, f.cell.i, f.cell.j, f.value));
            built += 1;
        } else {
            assert!(result.is_err());
        }
    }
    assert!(built > 50);
}

#[test]
fn rule_instances() {
    let mut t = BoundsTable::new(2, 8);
    t.seed_trivial().unwrap();
    let exact = exact_region(1, 8);
    for j in 3..=8 {
        let (v, w) = &exact[&CellId::new(1, j)];
        t.seed_exact(CellId::new(1, j), *v, w.clone()).unwrap();
    }
    t.propagate().unwrap();
    let find = |rule: RuleId, i: u32, j: u32| {
        t.facts().iter().filter(|f| f.rule == rule && f.cell == CellId::new(i, j)).map(|f| f.value).min()
    };
    assert_eq!(find(RuleId::Extend, 2, 3), Some(7));
    assert_eq!(find(RuleId::Concat, 2, 3), Some(8));
    assert_eq!(find(RuleId::ExtendDouble, 2, 4), Some(10));
    for j in 4..=8 {
        let (h1, w) = &exact[&CellId::new(1, j)];
        let u = t.cell(CellId::new(2, j - 1)).unwrap().h_upper.unwrap();
        assert!(u <= h1 + 1, "J = {j}");
        let pair = dgr_core::constructions::shift_pair(&w.rulers()[0], *h1).unwrap();
        assert!(is_dgr(&pair.system, 2, j - 1, h1 + 1));
    }
    // with nothing better around, the shift rule is the one that fires
    let mut only = BoundsTable::new(2, 5);
    only.seed_exact(CellId::new(1, 5), 12, exact[&CellId::new(1, 5)].1.clone()).unwrap();
    only.propagate().unwrap();
    let c = only.cell(CellId::new(2, 4)).unwrap();
    assert_eq!(c.h_upper, Some(13));
    assert_eq!(only.fact(c.h_upper_fact.unwrap()).rule, RuleId::ShiftPair);
    assert_eq!(only.materialize_witness(CellId::new(2, 4)).unwrap().header(), Header::new(2, 4, 13));
    let double = t.facts().iter().find(|f| f.rule == RuleId::ExtendDouble && f.cell == CellId::new(2, 4)).unwrap();
    let w = t.materialize_fact(double.id, &mut BTreeMap::new()).unwrap();
    assert_eq!(w, sys(2, 4, 10, &[&[2, 3, 5, 10], &[1, 6, 7, 9]]));
}

#[test]
fn registry_values() {
    let mut t = BoundsTable::new(6, 6);
    t.seed_registry().unwrap();
    assert_eq!(t.cell(CellId::new(3, 2)).unwrap().exact(), Some(6));
    assert_eq!(t.cell(CellId::new(4, 3)).unwrap().exact(), Some(12));
    assert_eq!(t.cell(CellId::new(6, 5)).unwrap().exact(), Some(30));
    assert_eq!(t.cell(CellId::new(5, 4)).unwrap().h_upper, Some(20));
    assert_eq!(t.cell(CellId::new(3, 4)).unwrap().h_upper, Some(15));
    let below = t.facts().iter().find(|f| f.rule == RuleId::RegistryDiagonalBelow && f.cell == CellId::new(5, 4));
    assert!(below.is_none() || below.unwrap().value == 23);
}

#[test]
fn fixpoint_is_idempotent() {
    let exact = exact_region(2, 5);
    let mut t = seeded(4, 5, &exact, 2);
    t.propagate().unwrap();
    let cells: Vec<_> = t.cells().collect();
    let facts = t.facts().len();
    t.propagate().unwrap();
    assert_eq!(cells, t.cells().collect::<Vec<_>>());
    assert_eq!(facts, t.facts().len());
}

#[test]
fn gap_floor_is_met_by_minimal_witnesses() {
    let exact = exact_region(3, 6);
    for (cell, (h, w)) in &exact {
        if let Some(floor) = gap_floor(*h, cell.i, cell.j) {
            let widest = w.gaps().iter().map(|g| g.w).max().unwrap_or(0);
            assert!(widest >= floor, "{cell}: widest gap {widest} < {floor}");
        }
    }
}

#[test]
fn y_chain_stays_within_the_single_ruler_bound() {
    let mut t = BoundsTable::new(4, 4);
    t.seed_trivial().unwrap();
    t.propagate().unwrap();
    for c in t.cells() {
        if let (Some(y), Some(y1)) = (c.y_upper, t.cell(CellId::new(1, c.cell.j)).unwrap().y_upper) {
            assert!(y <= y1 + (c.cell.i - 1) * c.cell.j);
        }
    }
}

#[test]
fn step_inequality_on_the_exact_region() {
    let exact = exact_region(4, 5);
    let mut t = seeded(4, 5, &exact, 4);
    t.propagate().unwrap();
    let report = conjectures::check_step(&t);
    assert!(report.checks.len() >= 15);
    assert_eq!(report.violations().count(), 0);
    let h13 = report.checks.iter().find(|c| c.i == 1 && c.j == 3).unwrap();
    assert_eq!((h13.h_i, h13.h_next), (4, 6));
    let h33 = report.checks.iter().find(|c| c.i == 3 && c.j == 3).unwrap();
    assert_eq!((h33.h_i, h33.h_next), (9, 12));
}

#[test]
fn golomb_report_from_exact_single_rulers() {
    let exact = exact_region(1, 8);
    let mut t = BoundsTable::new(1, 8);
    for (&c, (v, w)) in &exact {
        t.seed_exact(c, *v, w.clone()).unwrap();
    }
    let report = conjectures::check_golomb(&t);
    let k6 = report.checks.iter().find(|c| c.k == 6).unwrap();
    assert_eq!((k6.g_k2, k6.bound, k6.holds), (Some(34), 42, Some(true)));
    let k5 = report.checks.iter().find(|c| c.k == 5).unwrap();
    assert_eq!((k5.g_k2, k5.bound), (Some(25), 30));
    assert_eq!(report.violations().count(), 0);
    assert!(report.erdos.iter().all(|e| e.holds));
    assert_eq!(t.golomb_lengths().iter().map(|e| e.g_value).collect::<Vec<_>>(), vec![0, 1, 3, 6, 11, 17, 25, 34]);
}

#[test]
fn seeds_must_carry_matching_witnesses() {
    let mut t = BoundsTable::new(2, 3);
    let w = sys(2, 3, 6, &[&[1, 2, 4], &[3, 5, 6]]);
    assert!(t.seed_exact(CellId::new(2, 3), 7, w.clone()).is_err());
    t.seed_exact(CellId::new(2, 3), 6, w).unwrap();
    assert_eq!(t.materialize_witness(CellId::new(2, 3)).unwrap().header(), Header::new(2, 3, 6));
}
