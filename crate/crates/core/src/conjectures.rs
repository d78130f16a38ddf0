//! Checks of open conjectures against computed tables and searches.

use alloc::vec::Vec;

use crate::bounds::{BoundsTable, CellId};
use crate::search::{self, Control, LengthFloors, SearchConfig, SearchStats, Status};
use crate::system::DgrSystem;

/// `H(I+1,J) <= H(I,J) + J` for one pair of exact cells.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StepCheck {
    pub i: u32,
    pub j: u32,
    pub h_i: u32,
    pub h_next: u32,
    pub holds: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct StepReport {
    pub checks: Vec<StepCheck>,
}

impl StepReport {
    pub fn violations(&self) -> impl Iterator<Item = &StepCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Checks `H(I+1,J) <= H(I,J) + J` on every vertically adjacent pair of exact cells.
pub fn check_step(table: &BoundsTable) -> StepReport {
    let mut checks = Vec::new();
    for j in 1..=table.max_j() {
        for i in 1..table.max_i() {
            let a = table.cell(CellId::new(i, j)).and_then(|c| c.exact());
            let b = table.cell(CellId::new(i + 1, j)).and_then(|c| c.exact());
            if let (Some(h_i), Some(h_next)) = (a, b) {
                checks.push(StepCheck { i, j, h_i, h_next, holds: h_next <= h_i + j });
            }
        }
    }
    StepReport { checks }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RegularOutcome {
    /// `I` is below the range the statement covers.
    Rejected { min_i: u32 },
    Confirmed(DgrSystem),
    /// The search proved that no regular system exists.
    Refuted,
    BudgetExceeded,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularReport {
    pub i: u32,
    pub j: u32,
    pub n: u32,
    pub outcome: RegularOutcome,
    pub stats: SearchStats,
}

/// Smallest `I` for which `H(I, I+2) = I(I+2)` is claimed.
pub const REGULAR_MIN_I: u32 = 4;

/// Searches for an `(I, I+2, I(I+2))` system.
pub fn check_regular_diagonal<C: Control + ?Sized>(i: u32, cfg: &SearchConfig, control: &mut C) -> RegularReport {
    let j = i + 2;
    let n = i * j;
    if i < REGULAR_MIN_I {
        return RegularReport {
            i,
            j,
            n,
            outcome: RegularOutcome::Rejected { min_i: REGULAR_MIN_I },
            stats: SearchStats::default(),
        };
    }
    let floors = LengthFloors::exact_up_to(j.saturating_sub(1));
    let out = search::exists_dgr_with(i, j, n, cfg, &floors, control);
    let outcome = match out.status {
        Status::Found => RegularOutcome::Confirmed(out.witness.expect("found implies witness")),
        Status::Exhausted => RegularOutcome::Refuted,
        Status::BudgetExceeded => RegularOutcome::BudgetExceeded,
    };
    RegularReport { i, j, n, outcome, stats: out.stats }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GolombCheck {
    /// `G(k+2) < k² + k`; `None` when `G(k+2)` is unknown.
    pub k: u32,
    pub g_k2: Option<u32>,
    pub bound: u32,
    /// Only `k >= 6` counts toward the claim; smaller `k` are listed for reference.
    pub in_scope: bool,
    pub holds: Option<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ErdosCheck {
    pub k: u32,
    pub g_k: u32,
    /// `G(k) < k²`.
    pub holds: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GolombReport {
    pub checks: Vec<GolombCheck>,
    pub erdos: Vec<ErdosCheck>,
}

impl GolombReport {
    pub fn violations(&self) -> impl Iterator<Item = &GolombCheck> {
        self.checks.iter().filter(|c| c.in_scope && c.holds == Some(false))
    }

    pub fn unevaluated(&self) -> impl Iterator<Item = &GolombCheck> {
        self.checks.iter().filter(|c| c.holds.is_none())
    }
}

/// First `k` at which `G(k+2) < k² + k` is claimed.
pub const GOLOMB_MIN_K: u32 = 6;

/// Evaluates `G(k+2) < k² + k` for `k = 1..=max_j-2` and `G(k) < k²` for
/// every exact `H(1,k)` of the table.
pub fn check_golomb(table: &BoundsTable) -> GolombReport {
    let lengths = table.golomb_lengths();
    let g = |k: u32| lengths.iter().find(|e| e.k == k).map(|e| e.g_value);
    let checks = (1..=table.max_j().saturating_sub(2))
        .map(|k| {
            let g_k2 = g(k + 2);
            let bound = k * k + k;
            GolombCheck { k, g_k2, bound, in_scope: k >= GOLOMB_MIN_K, holds: g_k2.map(|v| v < bound) }
        })
        .collect();
    let erdos = lengths.iter().map(|e| ErdosCheck { k: e.k, g_k: e.g_value, holds: e.g_value < e.k * e.k }).collect();
    GolombReport { checks, erdos }
}

/// Per `J`, the run of exact regular cells reaching up to `max_i`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RegularRun {
    pub j: u32,
    /// Smallest `I` such that all of `I..=max_i` are exact and regular.
    pub from: Option<u32>,
}

pub fn regular_runs(table: &BoundsTable) -> Vec<RegularRun> {
    (1..=table.max_j()).map(|j| RegularRun { j, from: table.regular_from(j) }).collect()
}

/// Bounds of `H(I,I-1)` and `H(I-1,I)` next to `I² - I`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SquareAnnotation {
    pub i: u32,
    pub target: u32,
    pub below: Option<(u32, Option<u32>)>,
    pub above: Option<(u32, Option<u32>)>,
}

pub fn square_annotations(table: &BoundsTable) -> Vec<SquareAnnotation> {
    let top = table.max_i().max(table.max_j());
    (2..=top)
        .map(|i| {
            let get = |c: CellId| table.cell(c).map(|b| (b.h_lower, b.h_upper));
            SquareAnnotation {
                i,
                target: i * i - i,
                below: get(CellId::new(i, i - 1)),
                above: get(CellId::new(i - 1, i)),
            }
        })
        .filter(|a| a.below.is_some() || a.above.is_some())
        .collect()
}
