//! Bounds on `H(I, J)` and `Y(I, J)` with provenance.
//!
//! A [`BoundsTable`] covers `1 <= I <= max_i`, `1 <= J <= max_j`. Every bound
//! is a [`RuleApplication`] (a fact) that names the rule that produced it and
//! the facts it was derived from. [`BoundsTable::propagate`] applies the rules
//! in a fixed order, cell by cell in `(I, J)` order, until nothing improves.
//!
//! Upper bounds whose whole chain is constructive can be turned back into an
//! explicit system by [`BoundsTable::materialize_witness`], which re-runs the
//! constructions along the chain.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::constructions::{self, Built};
use crate::error::BoundsError;
use crate::gf::prime_power;
use crate::ruler::Ruler;
use crate::system::{DgrSystem, Gap, Header};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CellId {
    pub i: u32,
    pub j: u32,
}

impl CellId {
    pub const fn new(i: u32, j: u32) -> Self {
        CellId { i, j }
    }

    /// `I·J`, the disjointness floor.
    pub fn floor(&self) -> u32 {
        self.i * self.j
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FactId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Quantity {
    HLower,
    HUpper,
    YLower,
    YUpper,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::HLower => "h_lower",
            Quantity::HUpper => "h_upper",
            Quantity::YLower => "y_lower",
            Quantity::YUpper => "y_upper",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleId {
    /// `H(I,J) >= I·J`.
    DisjointFloor,
    /// `H(I,1) = I`, `H(I,2) = 2I`, `Y(I,1) = I`, `Y(I,2) = 2I`.
    Trivial,
    /// Exact value supplied with a verified witness.
    Seed,
    /// `Y(I,J) > n` shown by an explicit `n`-set.
    Falsifier,
    /// `H(p+1,p) = p²+p` for prime powers `p` (no stored witness).
    RegistryRegular,
    /// `H(p,p-1) <= p²-2` for prime powers `p`.
    RegistryDiagonalBelow,
    /// `H(p-1,p) <= p²-1` for prime powers `p`.
    RegistryDiagonalAbove,
    /// R1: `H(a+b,J) <= H(a,J) + H(b,J)`.
    Concat,
    /// R2: `H(a+b,J) <= H(a,J) + H(b,J-1) + b`.
    Extend,
    /// R3: `H(2a,J) <= 2H(a,J-1) + 2a`.
    ExtendDouble,
    /// R4 with a gap of a stored witness.
    GapMerge,
    GapDouble,
    /// R4 with the guaranteed gap `⌈(H(a,J)-aJ)/(aJ-1)⌉` of an exact cell.
    GapMergeFloor,
    GapDoubleFloor,
    /// R5: `H(2,J-1) <= H(1,J) + 1`.
    ShiftPair,
    /// R6: regular or almost-regular halves give a regular whole.
    RegularHalves,
    /// R7: `Y(I+1,J) <= Y(I,J) + J` for `J >= 3`.
    YStep,
    /// R7: `Y(1,J) <= H(1,5J)`.
    YRuzsa,
    /// R7: `Y(I,J) >= H(I,J)`.
    YAboveH,
    /// R8: `H(I,J) <= H(I+1,J)` (drop a ruler).
    DropRuler,
    /// R8: `H(I,J) <= H(I,J+1)` (drop a mark from every ruler).
    DropMark,
    /// R8 on lower bounds: `H(I+1,J) >= H(I,J)`, `H(I,J+1) >= H(I,J)` (and for `Y` in `I`).
    Monotone,
}

impl RuleId {
    pub const ALL: [RuleId; 22] = [
        RuleId::DisjointFloor,
        RuleId::Trivial,
        RuleId::Seed,
        RuleId::Falsifier,
        RuleId::RegistryRegular,
        RuleId::RegistryDiagonalBelow,
        RuleId::RegistryDiagonalAbove,
        RuleId::Concat,
        RuleId::Extend,
        RuleId::ExtendDouble,
        RuleId::GapMerge,
        RuleId::GapDouble,
        RuleId::GapMergeFloor,
        RuleId::GapDoubleFloor,
        RuleId::ShiftPair,
        RuleId::RegularHalves,
        RuleId::YStep,
        RuleId::YRuzsa,
        RuleId::YAboveH,
        RuleId::DropRuler,
        RuleId::DropMark,
        RuleId::Monotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::DisjointFloor => "disjoint-floor",
            RuleId::Trivial => "trivial",
            RuleId::Seed => "seed",
            RuleId::Falsifier => "falsifier",
            RuleId::RegistryRegular => "registry-regular",
            RuleId::RegistryDiagonalBelow => "registry-diagonal-below",
            RuleId::RegistryDiagonalAbove => "registry-diagonal-above",
            RuleId::Concat => "concat",
            RuleId::Extend => "extend",
            RuleId::ExtendDouble => "extend-double",
            RuleId::GapMerge => "gap-merge",
            RuleId::GapDouble => "gap-double",
            RuleId::GapMergeFloor => "gap-merge-floor",
            RuleId::GapDoubleFloor => "gap-double-floor",
            RuleId::ShiftPair => "shift-pair",
            RuleId::RegularHalves => "regular-halves",
            RuleId::YStep => "y-step",
            RuleId::YRuzsa => "y-ruzsa",
            RuleId::YAboveH => "y-above-h",
            RuleId::DropRuler => "drop-ruler",
            RuleId::DropMark => "drop-mark",
            RuleId::Monotone => "monotone",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Rules whose upper bounds come with an explicit construction.
    pub fn is_constructive(self) -> bool {
        matches!(
            self,
            RuleId::Trivial
                | RuleId::Seed
                | RuleId::Concat
                | RuleId::Extend
                | RuleId::ExtendDouble
                | RuleId::GapMerge
                | RuleId::GapDouble
                | RuleId::ShiftPair
                | RuleId::RegularHalves
                | RuleId::DropRuler
                | RuleId::DropMark
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One derived bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleApplication {
    pub id: FactId,
    pub cell: CellId,
    pub quantity: Quantity,
    pub value: u32,
    pub rule: RuleId,
    pub antecedents: Vec<FactId>,
    /// The rule and every upper-bound antecedent are constructive.
    pub constructive: bool,
    /// Rule parameters such as the gap `(t, w)` used.
    pub params: Vec<(&'static str, u32)>,
}

impl RuleApplication {
    pub fn param(&self, name: &str) -> Option<u32> {
        self.params.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct CellState {
    h_lower: FactId,
    h_upper: Option<FactId>,
    y_lower: FactId,
    y_upper: Option<FactId>,
}

/// A read-only view of one cell.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BoundCell {
    pub cell: CellId,
    pub h_lower: u32,
    pub h_upper: Option<u32>,
    pub y_lower: u32,
    pub y_upper: Option<u32>,
    pub h_lower_fact: FactId,
    pub h_upper_fact: Option<FactId>,
    pub y_lower_fact: FactId,
    pub y_upper_fact: Option<FactId>,
}

impl BoundCell {
    pub fn exact(&self) -> Option<u32> {
        (self.h_upper == Some(self.h_lower)).then_some(self.h_lower)
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }
}

/// `G(k) = H(1,k) - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GolombLengthEntry {
    pub k: u32,
    pub g_value: u32,
}

#[derive(Clone, Debug)]
pub struct BoundsTable {
    max_i: u32,
    max_j: u32,
    facts: Vec<RuleApplication>,
    cells: Vec<CellState>,
    witnesses: BTreeMap<FactId, DgrSystem>,
}

fn ceil_div(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

/// `⌈(h - aJ)/(aJ - 1)⌉`, the width some gap of a minimal `(a, J, h)` system must reach.
pub fn gap_floor(h: u32, a: u32, j: u32) -> Option<u32> {
    let aj = a * j;
    (aj >= 2 && h > aj).then(|| ceil_div(h - aj, aj - 1))
}

impl BoundsTable {
    /// A table with only the `I·J` floors (and `Y >= H`).
    pub fn new(max_i: u32, max_j: u32) -> Self {
        let mut t = BoundsTable { max_i, max_j, facts: Vec::new(), cells: Vec::new(), witnesses: BTreeMap::new() };
        for i in 1..=max_i {
            for j in 1..=max_j {
                let cell = CellId::new(i, j);
                let h_lower = t.push_fact(cell, Quantity::HLower, cell.floor(), RuleId::DisjointFloor, vec![], vec![], false);
                let y_lower = t.push_fact(cell, Quantity::YLower, cell.floor(), RuleId::YAboveH, vec![h_lower], vec![], false);
                t.cells.push(CellState { h_lower, h_upper: None, y_lower, y_upper: None });
            }
        }
        t
    }

    pub fn max_i(&self) -> u32 {
        self.max_i
    }

    pub fn max_j(&self) -> u32 {
        self.max_j
    }

    pub fn contains(&self, cell: CellId) -> bool {
        (1..=self.max_i).contains(&cell.i) && (1..=self.max_j).contains(&cell.j)
    }

    fn index(&self, cell: CellId) -> Option<usize> {
        self.contains(cell).then(|| ((cell.i - 1) * self.max_j + (cell.j - 1)) as usize)
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (1..=self.max_i).flat_map(move |i| (1..=self.max_j).map(move |j| CellId::new(i, j)))
    }

    pub fn cell(&self, cell: CellId) -> Option<BoundCell> {
        let st = self.cells[self.index(cell)?];
        let v = |f: FactId| self.facts[f.0].value;
        Some(BoundCell {
            cell,
            h_lower: v(st.h_lower),
            h_upper: st.h_upper.map(v),
            y_lower: v(st.y_lower),
            y_upper: st.y_upper.map(v),
            h_lower_fact: st.h_lower,
            h_upper_fact: st.h_upper,
            y_lower_fact: st.y_lower,
            y_upper_fact: st.y_upper,
        })
    }

    pub fn cells(&self) -> impl Iterator<Item = BoundCell> + '_ {
        self.cell_ids().filter_map(move |c| self.cell(c))
    }

    pub fn fact(&self, id: FactId) -> &RuleApplication {
        &self.facts[id.0]
    }

    pub fn facts(&self) -> &[RuleApplication] {
        &self.facts
    }

    /// Witnesses attached to seed facts.
    pub fn seed_witness(&self, id: FactId) -> Option<&DgrSystem> {
        self.witnesses.get(&id)
    }

    #[allow(clippy::too_many_arguments)]
    fn push_fact(
        &mut self,
        cell: CellId,
        quantity: Quantity,
        value: u32,
        rule: RuleId,
        antecedents: Vec<FactId>,
        params: Vec<(&'static str, u32)>,
        by_construction: bool,
    ) -> FactId {
        let id = FactId(self.facts.len());
        let upper_antecedents_constructive = antecedents
            .iter()
            .filter(|a| matches!(self.facts[a.0].quantity, Quantity::HUpper))
            .all(|a| self.facts[a.0].constructive);
        let constructive = by_construction && quantity == Quantity::HUpper && upper_antecedents_constructive;
        self.facts.push(RuleApplication { id, cell, quantity, value, rule, antecedents, constructive, params });
        id
    }

    fn value(&self, f: FactId) -> u32 {
        self.facts[f.0].value
    }

    fn state(&self, cell: CellId) -> Option<CellState> {
        self.index(cell).map(|i| self.cells[i])
    }

    fn upper(&self, cell: CellId) -> Option<(u32, FactId)> {
        let f = self.state(cell)?.h_upper?;
        Some((self.value(f), f))
    }

    fn lower(&self, cell: CellId) -> Option<(u32, FactId)> {
        let f = self.state(cell)?.h_lower;
        Some((self.value(f), f))
    }

    fn exact_fact(&self, cell: CellId) -> Option<(u32, FactId, FactId)> {
        let (lo, lf) = self.lower(cell)?;
        let (hi, hf) = self.upper(cell)?;
        (lo == hi).then_some((lo, lf, hf))
    }

    fn check(&self, cell: CellId) -> Result<(), BoundsError> {
        let st = self.state(cell).ok_or(BoundsError::OutOfRegion(cell))?;
        if let Some(u) = st.h_upper {
            if self.value(u) < self.value(st.h_lower) {
                return Err(BoundsError::Contradiction {
                    cell,
                    lower: st.h_lower,
                    upper: u,
                    lower_value: self.value(st.h_lower),
                    upper_value: self.value(u),
                });
            }
        }
        if let Some(u) = st.y_upper {
            if self.value(u) < self.value(st.y_lower) {
                return Err(BoundsError::Contradiction {
                    cell,
                    lower: st.y_lower,
                    upper: u,
                    lower_value: self.value(st.y_lower),
                    upper_value: self.value(u),
                });
            }
        }
        Ok(())
    }

    /// Records the bound if it improves the cell; returns whether it did.
    fn offer(
        &mut self,
        cell: CellId,
        quantity: Quantity,
        value: u32,
        rule: RuleId,
        antecedents: Vec<FactId>,
        params: Vec<(&'static str, u32)>,
    ) -> Result<bool, BoundsError> {
        self.offer_as(cell, quantity, value, rule, antecedents, params, rule.is_constructive())
    }

    #[allow(clippy::too_many_arguments)]
    fn offer_as(
        &mut self,
        cell: CellId,
        quantity: Quantity,
        value: u32,
        rule: RuleId,
        antecedents: Vec<FactId>,
        params: Vec<(&'static str, u32)>,
        by_construction: bool,
    ) -> Result<bool, BoundsError> {
        let idx = self.index(cell).ok_or(BoundsError::OutOfRegion(cell))?;
        let st = self.cells[idx];
        let improves = match quantity {
            Quantity::HLower => value > self.value(st.h_lower),
            Quantity::YLower => value > self.value(st.y_lower),
            Quantity::HUpper => st.h_upper.is_none_or(|f| value < self.value(f)),
            Quantity::YUpper => st.y_upper.is_none_or(|f| value < self.value(f)),
        };
        if !improves {
            return Ok(false);
        }
        let id = self.push_fact(cell, quantity, value, rule, antecedents, params, by_construction);
        let st = &mut self.cells[idx];
        match quantity {
            Quantity::HLower => st.h_lower = id,
            Quantity::YLower => st.y_lower = id,
            Quantity::HUpper => st.h_upper = Some(id),
            Quantity::YUpper => st.y_upper = Some(id),
        }
        self.check(cell)?;
        Ok(true)
    }

    /// `H(I,1) = I` and `H(I,2) = 2I` with explicit witnesses, and the same
    /// values for `Y`.
    pub fn seed_trivial(&mut self) -> Result<(), BoundsError> {
        for i in 1..=self.max_i {
            for j in 1..=self.max_j.min(2) {
                let cell = CellId::new(i, j);
                let value = i * j;
                let rulers = (0..i)
                    .map(|r| Ruler::from_sorted((1..=j).map(|m| r * j + m).collect()).expect("ascending"))
                    .collect();
                let witness = DgrSystem::from_parts(Header::new(i, j, value), rulers);
                if self.offer(cell, Quantity::HUpper, value, RuleId::Trivial, vec![], vec![])? {
                    let f = self.state(cell).and_then(|s| s.h_upper).expect("just set");
                    self.witnesses.insert(f, witness);
                }
                // Any I·J integers split into I blocks of J consecutive ones.
                self.offer(cell, Quantity::YUpper, value, RuleId::Trivial, vec![], vec![])?;
            }
        }
        Ok(())
    }

    /// Declares `H(I,J) = value`, certified above by `witness`.
    pub fn seed_exact(&mut self, cell: CellId, value: u32, witness: DgrSystem) -> Result<(), BoundsError> {
        let idx = self.index(cell).ok_or(BoundsError::OutOfRegion(cell))?;
        if value < cell.floor() {
            return Err(BoundsError::BelowFloor { cell, value });
        }
        if witness.header() != Header::new(cell.i, cell.j, value) || !witness.is_valid() {
            return Err(BoundsError::BadWitness { cell });
        }
        let st = self.cells[idx];
        if let Some(u) = st.h_upper {
            let existing = self.value(u);
            let exact = existing == self.value(st.h_lower);
            if existing < value || (exact && existing != value) {
                return Err(BoundsError::SeedConflict { cell, existing, seeded: value });
            }
        }
        if self.value(st.h_lower) > value {
            return Err(BoundsError::SeedConflict { cell, existing: self.value(st.h_lower), seeded: value });
        }
        let params = vec![("value", value)];
        self.offer(cell, Quantity::HLower, value, RuleId::Seed, vec![], params.clone())?;
        let upper_set = self.offer(cell, Quantity::HUpper, value, RuleId::Seed, vec![], params)?;
        if upper_set {
            let f = self.cells[idx].h_upper.expect("just set");
            self.witnesses.insert(f, witness);
        }
        Ok(())
    }

    /// Records `Y(I,J) >= value` (an explicit `(value-1)`-set without `I`
    /// disjoint `J`-mark rulers was found).
    pub fn seed_y_lower(&mut self, cell: CellId, value: u32) -> Result<(), BoundsError> {
        self.offer(cell, Quantity::YLower, value, RuleId::Falsifier, vec![], vec![("value", value)])?;
        Ok(())
    }

    /// Facts for prime powers `p` whose cells lie in the table:
    /// `H(p+1,p) = p²+p`, `H(p,p-1) <= p²-2`, `H(p-1,p) <= p²-1`.
    pub fn seed_registry(&mut self) -> Result<(), BoundsError> {
        let top = self.max_i.max(self.max_j) + 1;
        for p in 2..=top {
            if prime_power(p).is_none() {
                continue;
            }
            let regular = CellId::new(p + 1, p);
            if self.contains(regular) {
                let v = p * p + p;
                let st = self.state(regular).expect("contained");
                if self.value(st.h_lower) > v {
                    return Err(BoundsError::SeedConflict { cell: regular, existing: self.value(st.h_lower), seeded: v });
                }
                self.offer(regular, Quantity::HLower, v, RuleId::RegistryRegular, vec![], vec![("p", p)])?;
                self.offer(regular, Quantity::HUpper, v, RuleId::RegistryRegular, vec![], vec![("p", p)])?;
            }
            let below = CellId::new(p, p - 1);
            if self.contains(below) {
                self.offer(below, Quantity::HUpper, p * p - 2, RuleId::RegistryDiagonalBelow, vec![], vec![("p", p)])?;
            }
            let above = CellId::new(p - 1, p);
            if self.contains(above) {
                self.offer(above, Quantity::HUpper, p * p - 1, RuleId::RegistryDiagonalAbove, vec![], vec![("p", p)])?;
            }
        }
        Ok(())
    }

    /// Applies every rule until no bound improves.
    pub fn propagate(&mut self) -> Result<(), BoundsError> {
        let mut cache = BTreeMap::new();
        loop {
            let mut changed = false;
            let ids: Vec<CellId> = self.cell_ids().collect();
            for cell in ids {
                changed |= self.apply_upper_rules(cell, &mut cache)?;
                changed |= self.apply_lower_rules(cell)?;
                changed |= self.apply_y_rules(cell)?;
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn apply_upper_rules(&mut self, cell: CellId, cache: &mut BTreeMap<FactId, DgrSystem>) -> Result<bool, BoundsError> {
        let CellId { i, j } = cell;
        let mut changed = false;

        // R1
        for b in 1..=i / 2 {
            let a = i - b;
            if let (Some((ua, fa)), Some((ub, fb))) = (self.upper(CellId::new(a, j)), self.upper(CellId::new(b, j))) {
                changed |= self.offer(cell, Quantity::HUpper, ua + ub, RuleId::Concat, vec![fa, fb], vec![("a", a), ("b", b)])?;
            }
        }

        // R2
        if j >= 2 {
            for b in 1..i {
                let a = i - b;
                let (Some((ua, fa)), Some((ub, fb))) = (self.upper(CellId::new(a, j)), self.upper(CellId::new(b, j - 1)))
                else {
                    continue;
                };
                let la = self.lower(CellId::new(a, j)).map_or(0, |l| l.0);
                let witnessed = self.facts[fa.0].constructive && self.facts[fb.0].constructive && ua >= ub;
                if !(witnessed || a >= b || la >= ub) {
                    continue;
                }
                let params = vec![("a", a), ("b", b)];
                changed |= self.offer_as(cell, Quantity::HUpper, ua + ub + b, RuleId::Extend, vec![fa, fb], params, witnessed)?;
            }
        }

        // R3
        if j >= 2 && i % 2 == 0 {
            let a = i / 2;
            if let Some((ub, fb)) = self.upper(CellId::new(a, j - 1)) {
                changed |= self.offer(cell, Quantity::HUpper, 2 * ub + 2 * a, RuleId::ExtendDouble, vec![fb], vec![("a", a)])?;
            }
        }

        // R4, witness strength
        for a in 1..i {
            let b = i - a;
            let (Some((ua, fa)), Some((ub, fb))) = (self.upper(CellId::new(a, j)), self.upper(CellId::new(b, j))) else {
                continue;
            };
            if !(self.facts[fa.0].constructive && self.facts[fb.0].constructive) {
                continue;
            }
            let wa = self.materialize_fact(fa, cache)?;
            if let Some(g) = best_merge_gap(&wa, ub) {
                let params = vec![("a", a), ("b", b), ("t", g.t), ("w", g.w)];
                changed |= self.offer(cell, Quantity::HUpper, ua + ub - g.w, RuleId::GapMerge, vec![fa, fb], params)?;
            }
        }
        if i % 2 == 0 {
            let a = i / 2;
            if let Some((ua, fa)) = self.upper(CellId::new(a, j)) {
                if self.facts[fa.0].constructive {
                    let wa = self.materialize_fact(fa, cache)?;
                    if let Some(g) = interior_gaps(&wa).max_by_key(|g| (g.w, core::cmp::Reverse(g.t))) {
                        let params = vec![("a", a), ("t", g.t), ("w", g.w)];
                        changed |= self.offer(cell, Quantity::HUpper, 2 * ua - 2 * g.w, RuleId::GapDouble, vec![fa], params)?;
                    }
                }
            }
        }

        // R4, analytic floor on exact cells
        for a in 1..i {
            let b = i - a;
            let Some((h, lf, hf)) = self.exact_fact(CellId::new(a, j)) else { continue };
            let Some(w) = gap_floor(h, a, j) else { continue };
            if let Some((ub, fb)) = self.upper(CellId::new(b, j)) {
                let w = w.min(ub);
                let params = vec![("a", a), ("b", b), ("w", w)];
                changed |= self.offer(cell, Quantity::HUpper, h + ub - w, RuleId::GapMergeFloor, vec![lf, hf, fb], params)?;
            }
        }
        if i % 2 == 0 {
            let a = i / 2;
            if let Some((h, lf, hf)) = self.exact_fact(CellId::new(a, j)) {
                if let Some(w) = gap_floor(h, a, j) {
                    let params = vec![("a", a), ("w", w)];
                    changed |= self.offer(cell, Quantity::HUpper, 2 * h - 2 * w, RuleId::GapDoubleFloor, vec![lf, hf], params)?;
                }
            }
        }

        // R5
        if i == 2 {
            if let Some((u, f)) = self.upper(CellId::new(1, j + 1)) {
                if j + 1 >= 3 {
                    changed |= self.offer(cell, Quantity::HUpper, u + 1, RuleId::ShiftPair, vec![f], vec![])?;
                }
            }
        }

        // R6
        if i >= 2 {
            let k = i / 2;
            let regular = |t: &Self, a: u32| t.upper(CellId::new(a, j)).filter(|&(u, _)| u <= a * j + 1);
            let halves = if i % 2 == 0 {
                regular(self, k).map(|(_, f)| vec![f])
            } else {
                match (regular(self, k), regular(self, k + 1)) {
                    (Some((uk, fk)), Some((uk1, fk1))) if uk == k * j || uk1 == (k + 1) * j => Some(vec![fk, fk1]),
                    _ => None,
                }
            };
            if let Some(ants) = halves {
                changed |= self.offer(cell, Quantity::HUpper, i * j, RuleId::RegularHalves, ants, vec![("k", k)])?;
            }
        }

        // R8
        if let Some((u, f)) = self.upper(CellId::new(i + 1, j)) {
            changed |= self.offer(cell, Quantity::HUpper, u, RuleId::DropRuler, vec![f], vec![])?;
        }
        if let Some((u, f)) = self.upper(CellId::new(i, j + 1)) {
            changed |= self.offer(cell, Quantity::HUpper, u, RuleId::DropMark, vec![f], vec![])?;
        }
        Ok(changed)
    }

    fn apply_lower_rules(&mut self, cell: CellId) -> Result<bool, BoundsError> {
        let mut changed = false;
        for from in [CellId::new(cell.i.wrapping_sub(1), cell.j), CellId::new(cell.i, cell.j.wrapping_sub(1))] {
            if let Some((l, f)) = self.lower(from) {
                changed |= self.offer(cell, Quantity::HLower, l, RuleId::Monotone, vec![f], vec![])?;
            }
        }
        Ok(changed)
    }

    fn apply_y_rules(&mut self, cell: CellId) -> Result<bool, BoundsError> {
        let CellId { i, j } = cell;
        let mut changed = false;
        let (hl, hf) = self.lower(cell).expect("cell in table");
        changed |= self.offer(cell, Quantity::YLower, hl, RuleId::YAboveH, vec![hf], vec![])?;
        if i >= 2 {
            let prev = self.state(CellId::new(i - 1, j)).expect("cell in table").y_lower;
            changed |= self.offer(cell, Quantity::YLower, self.value(prev), RuleId::Monotone, vec![prev], vec![])?;
        }
        if i == 1 {
            if let Some((u, f)) = self.upper(CellId::new(1, 5 * j)) {
                changed |= self.offer(cell, Quantity::YUpper, u, RuleId::YRuzsa, vec![f], vec![])?;
            }
        }
        if i >= 2 && j >= 3 {
            if let Some(prev) = self.state(CellId::new(i - 1, j)).and_then(|s| s.y_upper) {
                changed |= self.offer(cell, Quantity::YUpper, self.value(prev) + j, RuleId::YStep, vec![prev], vec![])?;
            }
        }
        Ok(changed)
    }

    /// Rebuilds the system behind the upper bound of `cell`.
    pub fn materialize_witness(&self, cell: CellId) -> Result<DgrSystem, BoundsError> {
        let st = self.state(cell).ok_or(BoundsError::OutOfRegion(cell))?;
        let f = st.h_upper.ok_or(BoundsError::MissingWitness { fact: st.h_lower })?;
        self.materialize_fact(f, &mut BTreeMap::new())
    }

    /// Re-executes the constructions along the chain of `fact`.
    pub fn materialize_fact(&self, fact: FactId, cache: &mut BTreeMap<FactId, DgrSystem>) -> Result<DgrSystem, BoundsError> {
        if let Some(w) = cache.get(&fact) {
            return Ok(w.clone());
        }
        let f = self.facts.get(fact.0).ok_or(BoundsError::MissingWitness { fact })?.clone();
        if f.quantity != Quantity::HUpper || !f.rule.is_constructive() {
            return Err(BoundsError::NonConstructive { fact });
        }
        let sub = |id: FactId, cache: &mut BTreeMap<FactId, DgrSystem>| self.materialize_fact(id, cache);
        let ants = &f.antecedents;
        let system = match f.rule {
            RuleId::Trivial | RuleId::Seed => {
                self.witnesses.get(&fact).cloned().ok_or(BoundsError::MissingWitness { fact })?
            }
            RuleId::Concat => {
                let (a, b) = (sub(ants[0], cache)?, sub(ants[1], cache)?);
                constructions::concat_compose(&a, &b)?.system
            }
            RuleId::Extend => {
                let (a, b) = (sub(ants[0], cache)?, sub(ants[1], cache)?);
                if a.n() < b.n() {
                    return Err(BoundsError::NonConstructive { fact });
                }
                constructions::thm3_extend(&a, &b)?.system
            }
            RuleId::ExtendDouble => constructions::thm3_double(&sub(ants[0], cache)?)?.system,
            RuleId::GapMerge => {
                let (a, b) = (sub(ants[0], cache)?, sub(ants[1], cache)?);
                let gap = Gap::new(f.param("t").unwrap_or(0), f.param("w").unwrap_or(0));
                constructions::gap_merge(&a, gap, &b)?.system
            }
            RuleId::GapDouble => {
                let a = sub(ants[0], cache)?;
                let gap = Gap::new(f.param("t").unwrap_or(0), f.param("w").unwrap_or(0));
                constructions::gap_double(&a, gap)?.system
            }
            RuleId::ShiftPair => {
                let a = sub(ants[0], cache)?;
                let n = a.n();
                let ruler = &a.rulers()[0];
                let top = ruler.last_mark().unwrap_or(n);
                let lifted = ruler.translate(i64::from(n) - i64::from(top)).map_err(crate::ConstructionError::from)?;
                constructions::shift_pair(&lifted, n)?.system
            }
            RuleId::RegularHalves => regular_halves(&ants.iter().map(|&a| sub(a, cache)).collect::<Result<Vec<_>, _>>()?)?,
            RuleId::DropRuler => {
                let a = sub(ants[0], cache)?;
                let h = a.header();
                let mut rulers = a.into_rulers();
                rulers.pop();
                DgrSystem::from_parts(Header::new(h.i - 1, h.j, h.n), rulers)
            }
            RuleId::DropMark => {
                let a = sub(ants[0], cache)?;
                let h = a.header();
                let rulers = a
                    .into_rulers()
                    .into_iter()
                    .map(|r| {
                        let mut m = r.into_marks();
                        m.pop();
                        Ruler::from_sorted(m).expect("still ascending")
                    })
                    .collect();
                DgrSystem::from_parts(Header::new(h.i, h.j - 1, h.n), rulers)
            }
            _ => return Err(BoundsError::NonConstructive { fact }),
        };
        let expected = Header::new(f.cell.i, f.cell.j, f.value);
        if system.header() != expected || !system.is_valid() {
            return Err(BoundsError::Construction(crate::ConstructionError::OutputInvalid {
                header: expected,
                report: system.verify(),
            }));
        }
        cache.insert(fact, system.clone());
        Ok(system)
    }

    /// Every fact reachable from `fact`, antecedents first.
    pub fn provenance(&self, fact: FactId) -> Vec<&RuleApplication> {
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        self.walk(fact, &mut seen, &mut out);
        out
    }

    fn walk<'a>(&'a self, fact: FactId, seen: &mut BTreeMap<FactId, ()>, out: &mut Vec<&'a RuleApplication>) {
        if seen.insert(fact, ()).is_some() {
            return;
        }
        let f = &self.facts[fact.0];
        for &a in &f.antecedents {
            self.walk(a, seen, out);
        }
        out.push(f);
    }

    /// `G(k) = H(1,k) - 1` for every exact `H(1,k)` in the table.
    pub fn golomb_lengths(&self) -> Vec<GolombLengthEntry> {
        (1..=self.max_j)
            .filter_map(|k| {
                let c = self.cell(CellId::new(1, k))?;
                c.exact().map(|h| GolombLengthEntry { k, g_value: h - 1 })
            })
            .collect()
    }

    /// For each `J`, the smallest `I0` such that every cell `(I, J)` with
    /// `I0 <= I <= max_i` is exact and regular. This describes the table
    /// only; it does not certify the regularity threshold itself.
    pub fn regular_from(&self, j: u32) -> Option<u32> {
        let mut from = None;
        for i in (1..=self.max_i).rev() {
            let c = self.cell(CellId::new(i, j))?;
            if c.exact() == Some(i * j) {
                from = Some(i);
            } else {
                break;
            }
        }
        from
    }
}

fn interior_gaps(s: &DgrSystem) -> impl Iterator<Item = Gap> {
    let n = s.n();
    s.gaps().into_iter().filter(move |g| g.t > 0 && g.t + g.w < n)
}

/// The interior gap of `wa` that removes the most span when a system of
/// span `m` is merged into it. A gap wider than `m` is narrowed to `m` unless
/// the insert case applies.
fn best_merge_gap(wa: &DgrSystem, m: u32) -> Option<Gap> {
    let n = wa.n();
    interior_gaps(wa)
        .map(|g| {
            let inner = g.t.min(n - g.w - g.t);
            if n - g.w - inner <= m || g.w <= m {
                g
            } else {
                Gap::new(g.t, m)
            }
        })
        .filter(|g| g.w > 0)
        .fold(None, |best: Option<Gap>, g| match best {
            Some(b) if b.w >= g.w => Some(b),
            _ => Some(g),
        })
}

/// Moves `s` down to start at 1 and cuts the span to its last mark.
fn tighten(s: &DgrSystem) -> Result<DgrSystem, BoundsError> {
    let marks = s.rulers().iter().flat_map(|r| r.marks().iter().copied());
    let (lo, hi) = marks.fold((u32::MAX, 0), |(lo, hi), m| (lo.min(m), hi.max(m)));
    if lo == u32::MAX {
        return Ok(s.clone());
    }
    let rulers = s
        .rulers()
        .iter()
        .map(|r| r.translate(1 - i64::from(lo)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(crate::ConstructionError::from)?;
    Ok(DgrSystem::from_parts(Header::new(s.i(), s.j(), hi + 1 - lo), rulers))
}

/// Builds the regular system promised by [`RuleId::RegularHalves`] from one
/// or two half systems of span at most `aJ + 1`.
fn regular_halves(halves: &[DgrSystem]) -> Result<DgrSystem, BoundsError> {
    let halves = halves.iter().map(tighten).collect::<Result<Vec<_>, _>>()?;
    let build = |r: Result<Built, crate::ConstructionError>| r.map(|b| b.system).map_err(BoundsError::from);
    match halves.as_slice() {
        [h] => {
            if h.header().is_regular() {
                build(constructions::concat_compose(h, h))
            } else {
                let g = h.largest_gap().ok_or(BoundsError::Construction(crate::ConstructionError::OutputInvalid {
                    header: h.header(),
                    report: h.verify(),
                }))?;
                build(constructions::gap_double(h, g))
            }
        }
        [x, y] => {
            let (irregular, regular) = if x.header().is_regular() { (y, x) } else { (x, y) };
            match irregular.largest_gap() {
                None => build(constructions::concat_compose(x, y)),
                Some(g) => build(constructions::gap_merge(irregular, g, regular)),
            }
        }
        _ => unreachable!("regular halves use one or two antecedents"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(i: u32, j: u32, n: u32, rulers: &[&[u32]]) -> DgrSystem {
        DgrSystem::new(Header::new(i, j, n), rulers.iter().map(|m| Ruler::new(m.to_vec()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn gap_floor_values() {
        assert_eq!(gap_floor(7, 1, 4), Some(1));
        assert_eq!(gap_floor(12, 1, 5), Some(2));
        assert_eq!(gap_floor(6, 2, 3), None);
    }

    #[test]
    fn seeds() {
        let mut t = BoundsTable::new(6, 5);
        t.seed_registry().unwrap();
        let c = t.cell(CellId::new(4, 3)).unwrap();
        assert_eq!(c.exact(), Some(12));
        assert_eq!(t.cell(CellId::new(5, 4)).unwrap().h_upper, Some(20));
        let mut t = BoundsTable::new(5, 4);
        t.seed_registry().unwrap();
        assert!(t.cell(CellId::new(5, 4)).unwrap().h_upper.unwrap() <= 23);
        let mut t = BoundsTable::new(5, 5);
        t.seed_registry().unwrap();
        assert_eq!(t.cell(CellId::new(4, 5)).unwrap().h_upper, Some(24));
        t.seed_trivial().unwrap();
        assert_eq!(t.cell(CellId::new(1, 1)).unwrap().exact(), Some(1));
    }

    #[test]
    fn seed_errors() {
        let mut t = BoundsTable::new(3, 3);
        let bad = w(1, 3, 4, &[&[1, 2, 4]]);
        assert_eq!(t.seed_exact(CellId::new(2, 3), 4, bad.clone()), Err(BoundsError::BelowFloor { cell: CellId::new(2, 3), value: 4 }));
        assert_eq!(t.seed_exact(CellId::new(1, 3), 5, bad.clone()), Err(BoundsError::BadWitness { cell: CellId::new(1, 3) }));
        t.seed_exact(CellId::new(1, 3), 4, bad.clone()).unwrap();
        let longer = w(1, 3, 5, &[&[1, 2, 5]]);
        assert!(matches!(t.seed_exact(CellId::new(1, 3), 5, longer), Err(BoundsError::SeedConflict { .. })));
        assert!(matches!(t.seed_exact(CellId::new(4, 3), 12, bad), Err(BoundsError::OutOfRegion(_))));
    }

    #[test]
    fn propagation_examples() {
        let mut t = BoundsTable::new(2, 4);
        t.seed_exact(CellId::new(1, 4), 7, w(1, 4, 7, &[&[1, 2, 5, 7]])).unwrap();
        t.propagate().unwrap();
        let f = t.cell(CellId::new(2, 3)).unwrap().h_upper_fact.unwrap();
        assert!(t.cell(CellId::new(2, 3)).unwrap().h_upper.unwrap() <= 8);
        assert!(t.provenance(f).iter().any(|a| a.rule == RuleId::Seed));

        let mut t = BoundsTable::new(2, 3);
        t.seed_trivial().unwrap();
        t.seed_exact(CellId::new(1, 3), 4, w(1, 3, 4, &[&[1, 2, 4]])).unwrap();
        t.propagate().unwrap();
        let extend = t.facts().iter().find(|f| f.rule == RuleId::Extend && f.cell == CellId::new(2, 3)).unwrap();
        assert_eq!(extend.value, 7);
        assert!(extend.constructive);
        let built = t.materialize_fact(extend.id, &mut BTreeMap::new()).unwrap();
        assert_eq!(built, w(2, 3, 7, &[&[3, 4, 6], &[1, 2, 7]]));
        // the doubling of an almost regular half does better
        let c = t.cell(CellId::new(2, 3)).unwrap();
        assert_eq!(c.exact(), Some(6));
        assert_eq!(t.materialize_witness(CellId::new(2, 3)).unwrap().header(), Header::new(2, 3, 6));
    }

    #[test]
    fn non_constructive_chain_is_refused() {
        let mut t = BoundsTable::new(4, 3);
        t.seed_registry().unwrap();
        let f = t.cell(CellId::new(4, 3)).unwrap().h_upper_fact.unwrap();
        assert_eq!(t.materialize_witness(CellId::new(4, 3)), Err(BoundsError::NonConstructive { fact: f }));
    }

    #[test]
    fn contradiction_is_reported() {
        let mut t = BoundsTable::new(4, 3);
        t.seed_registry().unwrap();
        // pretend H(4,3) were 13: lower bound above the registry upper bound
        let err = t.offer(CellId::new(4, 3), Quantity::HLower, 13, RuleId::Seed, vec![], vec![]).unwrap_err();
        assert!(matches!(err, BoundsError::Contradiction { lower_value: 13, upper_value: 12, .. }));
    }

    #[test]
    fn fixpoint_is_idempotent() {
        let mut t = BoundsTable::new(4, 4);
        t.seed_trivial().unwrap();
        t.seed_registry().unwrap();
        t.seed_exact(CellId::new(1, 3), 4, w(1, 3, 4, &[&[1, 2, 4]])).unwrap();
        t.seed_exact(CellId::new(1, 4), 7, w(1, 4, 7, &[&[1, 2, 5, 7]])).unwrap();
        t.propagate().unwrap();
        let before: Vec<_> = t.cells().collect();
        let facts = t.facts().len();
        t.propagate().unwrap();
        assert_eq!(before, t.cells().collect::<Vec<_>>());
        assert_eq!(facts, t.facts().len());
    }

    #[test]
    fn y_bounds() {
        let mut t = BoundsTable::new(3, 3);
        t.seed_trivial().unwrap();
        t.seed_y_lower(CellId::new(1, 3), 4).unwrap();
        t.propagate().unwrap();
        assert_eq!(t.cell(CellId::new(1, 2)).unwrap().y_upper, Some(2));
        assert_eq!(t.cell(CellId::new(3, 2)).unwrap().y_upper, Some(6));
        assert_eq!(t.cell(CellId::new(3, 3)).unwrap().y_lower, 9);
        assert_eq!(t.cell(CellId::new(2, 3)).unwrap().y_lower, 6);
        assert_eq!(t.cell(CellId::new(1, 3)).unwrap().y_lower, 4);
    }
}
