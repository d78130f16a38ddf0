//! Exact backtracking search for DGR systems.
//!
//! The universe (`1..=n`, or any sorted set of positive integers) is scanned in
//! ascending order and each value is either given to one of the `I` rulers or
//! left unused. Every ruler keeps a bitset of the differences it already
//! realises, so a placement costs `O(J)` and is rejected as soon as it repeats a
//! difference. Disjointness is automatic under this encoding.
//!
//! Pruning:
//! - capacity: fewer remaining values than unfilled slots;
//! - length floors: a ruler holding `c` marks still needs its last mark and
//!   `J - c` more marks to form a Golomb ruler, which has length at least
//!   `G(J - c + 1)`; an unopened ruler needs `G(J)` from the current value on;
//! - symmetry (optional): rulers are interchangeable, so a new ruler may only
//!   be opened when all lower-numbered rulers are open. This forces ruler
//!   minima to increase with the ruler index and loses no solutions.
//!
//! `G(k)` floors for `k < J` are computed exactly by the same engine (for
//! `k <= EXACT_FLOOR_MAX`); the rest fall back to `max(G(k-1)+1, k(k-1)/2)`.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::ruler::Ruler;
use crate::system::{DgrSystem, Header};

/// Largest `k` for which `G(k)` is computed by search when used as a floor.
pub const EXACT_FLOOR_MAX: u32 = 8;

/// Nodes between two consultations of a [`Control`].
const POLL_INTERVAL: u64 = 1 << 12;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    pub node_budget: Option<u64>,
    /// Honoured by drivers that own a clock (the `dgr` crate); the `no_std`
    /// engine itself only sees it through a [`Control`].
    pub time_budget: Option<Duration>,
    pub threads: u32,
    pub symmetry_breaking: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { node_budget: None, time_budget: None, threads: 1, symmetry_breaking: true }
    }
}

impl SearchConfig {
    pub fn with_node_budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    pub fn without_symmetry(mut self) -> Self {
        self.symmetry_breaking = false;
        self
    }
}

/// External stop signal polled during search (time limits, cancellation).
pub trait Control {
    /// Returns `false` to abandon the search.
    fn keep_going(&mut self, nodes: u64) -> bool;
}

/// Never stops.
pub struct Unlimited;

impl Control for Unlimited {
    fn keep_going(&mut self, _nodes: u64) -> bool {
        true
    }
}

impl<F: FnMut(u64) -> bool> Control for F {
    fn keep_going(&mut self, nodes: u64) -> bool {
        self(nodes)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Status {
    Found,
    Exhausted,
    BudgetExceeded,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Found => "found",
            Status::Exhausted => "exhausted",
            Status::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: u32,
}

impl SearchStats {
    pub fn absorb(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchOutcome {
    pub status: Status,
    pub witness: Option<DgrSystem>,
    pub stats: SearchStats,
}

/// Lower bounds on optimal Golomb ruler lengths, indexed by mark count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LengthFloors {
    floors: Vec<u32>,
}

impl LengthFloors {
    /// The trivial floors `max(G(k-1)+1, k(k-1)/2)`.
    pub fn trivial(max_k: u32) -> Self {
        let mut floors = vec![0u32; max_k as usize + 1];
        for k in 2..=max_k as usize {
            floors[k] = (floors[k - 1] + 1).max((k * (k - 1) / 2) as u32);
        }
        LengthFloors { floors }
    }

    /// Exact `G(k)` for `k <= min(max_k, EXACT_FLOOR_MAX)`, trivial floors above.
    pub fn exact_up_to(max_k: u32) -> Self {
        let mut lf = Self::trivial(max_k);
        for k in 3..=max_k.min(EXACT_FLOOR_MAX) {
            let mut n = lf.floors[k as usize] + 1;
            while Engine::new(1, k, (1..=n).collect(), true, &lf).run(&[], None, &mut Unlimited).status != Status::Found {
                n += 1;
            }
            lf.floors[k as usize] = n - 1;
            for kk in k as usize + 1..lf.floors.len() {
                lf.floors[kk] = lf.floors[kk].max(lf.floors[kk - 1] + 1);
            }
        }
        lf
    }

    /// Floor for `k` marks.
    pub fn get(&self, k: u32) -> u32 {
        match self.floors.get(k as usize) {
            Some(&f) => f,
            None => {
                let last = self.floors.len() as u32 - 1;
                let mut f = self.floors[last as usize];
                for kk in last + 1..=k {
                    f = if kk < 2 { 0 } else { (f + 1).max(kk * (kk - 1) / 2) };
                }
                f
            }
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.floors
    }
}

/// Assignment of one universe value: a ruler index, or `None` for unused.
pub type Choice = Option<u8>;

struct RulerState {
    marks: Vec<u32>,
    diffs: Vec<u64>,
}

impl RulerState {
    fn fits(&self, v: u32) -> bool {
        self.marks.iter().all(|&m| {
            let d = (v - m) as usize;
            self.diffs[d >> 6] & (1 << (d & 63)) == 0
        })
    }

    fn push(&mut self, v: u32) {
        for &m in &self.marks {
            let d = (v - m) as usize;
            self.diffs[d >> 6] |= 1 << (d & 63);
        }
        self.marks.push(v);
    }

    fn pop(&mut self) {
        let v = self.marks.pop().expect("pop on empty ruler");
        for &m in &self.marks {
            let d = (v - m) as usize;
            self.diffs[d >> 6] &= !(1 << (d & 63));
        }
    }
}

/// The backtracking engine for one `(I, J, universe)` instance.
pub struct Engine {
    i: u32,
    j: u32,
    universe: Vec<u32>,
    symmetry: bool,
    rulers: Vec<RulerState>,
    opened: u32,
    placed: u32,
    floor_j: u32,
    /// `tail_floor[c]`: floor for the span after the last mark of a ruler
    /// holding `c` marks.
    tail_floor: Vec<u32>,
    stats: SearchStats,
    budget: Option<u64>,
    stopped: bool,
    path: Vec<Choice>,
}

enum Step {
    Found,
    Exhausted,
    Stopped,
}

impl Engine {
    pub fn new(i: u32, j: u32, universe: Vec<u32>, symmetry: bool, floors: &LengthFloors) -> Self {
        debug_assert!(universe.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(i <= u32::from(u8::MAX) + 1);
        let span = universe.last().copied().unwrap_or(0) as usize + 1;
        let words = span / 64 + 1;
        let rulers = (0..i)
            .map(|_| RulerState { marks: Vec::with_capacity(j as usize), diffs: vec![0; words] })
            .collect();
        let tail_floor = (0..=j).map(|c| if c == 0 { 0 } else { floors.get(j - c + 1) }).collect();
        Engine {
            i,
            j,
            universe,
            symmetry,
            rulers,
            opened: 0,
            placed: 0,
            floor_j: floors.get(j),
            tail_floor,
            stats: SearchStats::default(),
            budget: None,
            stopped: false,
            path: Vec::new(),
        }
    }

    fn top(&self) -> u32 {
        self.universe.last().copied().unwrap_or(0)
    }

    fn feasible(&self, pos: usize) -> bool {
        let slots = self.i * self.j - self.placed;
        if (self.universe.len() - pos) < slots as usize {
            return false;
        }
        if slots == 0 {
            return true;
        }
        let top = self.top();
        for r in &self.rulers {
            let c = r.marks.len();
            if c > 0 && c < self.j as usize {
                let last = r.marks[c - 1];
                if top - last < self.tail_floor[c] {
                    return false;
                }
                if top - r.marks[0] < self.floor_j {
                    return false;
                }
            }
        }
        if self.opened < self.i {
            let next = self.universe[pos];
            if top < next || top - next < self.floor_j {
                return false;
            }
        }
        true
    }

    fn candidates(&self, v: u32) -> impl Iterator<Item = usize> + '_ {
        let limit = if self.symmetry { (self.opened + 1).min(self.i) } else { self.i };
        (0..limit as usize).filter(move |&r| {
            let st = &self.rulers[r];
            st.marks.len() < self.j as usize && st.fits(v)
        })
    }

    fn place(&mut self, r: usize, v: u32) {
        if self.rulers[r].marks.is_empty() {
            self.opened += 1;
        }
        self.rulers[r].push(v);
        self.placed += 1;
    }

    fn unplace(&mut self, r: usize) {
        self.rulers[r].pop();
        if self.rulers[r].marks.is_empty() {
            self.opened -= 1;
        }
        self.placed -= 1;
    }

    fn tick<C: Control + ?Sized>(&mut self, control: &mut C) -> bool {
        self.stats.nodes += 1;
        if let Some(b) = self.budget {
            if self.stats.nodes > b {
                self.stopped = true;
                return false;
            }
        }
        if (self.stats.nodes == 1 || self.stats.nodes.is_multiple_of(POLL_INTERVAL)) && !control.keep_going(self.stats.nodes) {
            self.stopped = true;
            return false;
        }
        true
    }

    fn dfs<C: Control + ?Sized>(&mut self, pos: usize, control: &mut C) -> Step {
        if !self.tick(control) {
            return Step::Stopped;
        }
        self.stats.max_depth = self.stats.max_depth.max(pos as u32);
        if self.placed == self.i * self.j {
            return Step::Found;
        }
        if !self.feasible(pos) {
            return Step::Exhausted;
        }
        let v = self.universe[pos];
        let mut cands = [0usize; 256];
        let mut count = 0;
        for r in self.candidates(v) {
            cands[count] = r;
            count += 1;
        }
        for &r in &cands[..count] {
            self.place(r, v);
            self.path.push(Some(r as u8));
            match self.dfs(pos + 1, control) {
                Step::Exhausted => {}
                other => return other,
            }
            self.path.pop();
            self.unplace(r);
        }
        self.path.push(None);
        let step = self.dfs(pos + 1, control);
        if matches!(step, Step::Exhausted) {
            self.path.pop();
        }
        step
    }

    /// Replays `prefix` (returns `false` if it is not a legal partial assignment).
    fn replay(&mut self, prefix: &[Choice]) -> bool {
        for (pos, &choice) in prefix.iter().enumerate() {
            if pos >= self.universe.len() || !self.feasible(pos) {
                return false;
            }
            let v = self.universe[pos];
            if let Some(r) = choice {
                let r = r as usize;
                if !self.candidates(v).any(|c| c == r) {
                    return false;
                }
                self.place(r, v);
            }
            self.path.push(choice);
        }
        true
    }

    fn reset(&mut self) {
        for r in &mut self.rulers {
            while !r.marks.is_empty() {
                r.pop();
            }
        }
        self.opened = 0;
        self.placed = 0;
        self.path.clear();
        self.stopped = false;
    }

    /// Searches the subtree below `prefix`.
    pub fn run<C: Control + ?Sized>(&mut self, prefix: &[Choice], budget: Option<u64>, control: &mut C) -> SearchOutcome {
        self.reset();
        self.stats = SearchStats::default();
        self.budget = budget;
        if u64::from(self.i) * u64::from(self.j) > self.universe.len() as u64 || !self.replay(prefix) {
            return SearchOutcome { status: Status::Exhausted, witness: None, stats: self.stats };
        }
        let step = self.dfs(prefix.len(), control);
        let status = match step {
            Step::Found => Status::Found,
            Step::Exhausted => Status::Exhausted,
            Step::Stopped => Status::BudgetExceeded,
        };
        let witness = (status == Status::Found).then(|| self.witness());
        SearchOutcome { status, witness, stats: self.stats }
    }

    fn witness(&self) -> DgrSystem {
        let rulers = self
            .rulers
            .iter()
            .map(|r| Ruler::from_sorted(r.marks.clone()).expect("marks placed in ascending order"))
            .collect();
        DgrSystem::from_parts(Header::new(self.i, self.j, self.top()), rulers)
    }

    /// All live partial assignments of the first `depth` universe values, in
    /// depth-first order. Subtrees that are already complete are included
    /// as shorter prefixes.
    pub fn prefixes(&mut self, depth: usize) -> Vec<Vec<Choice>> {
        self.reset();
        let mut out = Vec::new();
        self.collect_prefixes(0, depth, &mut out);
        self.reset();
        out
    }

    fn collect_prefixes(&mut self, pos: usize, depth: usize, out: &mut Vec<Vec<Choice>>) {
        if self.placed == self.i * self.j || pos == depth || pos >= self.universe.len() {
            out.push(self.path.clone());
            return;
        }
        if !self.feasible(pos) {
            return;
        }
        let v = self.universe[pos];
        let cands: Vec<usize> = self.candidates(v).collect();
        for r in cands {
            self.place(r, v);
            self.path.push(Some(r as u8));
            self.collect_prefixes(pos + 1, depth, out);
            self.path.pop();
            self.unplace(r);
        }
        self.path.push(None);
        self.collect_prefixes(pos + 1, depth, out);
        self.path.pop();
    }
}

/// Decides whether an `(I, J, n)` system exists.
pub fn exists_dgr(i: u32, j: u32, n: u32, cfg: &SearchConfig) -> SearchOutcome {
    exists_dgr_with(i, j, n, cfg, &LengthFloors::exact_up_to(j.saturating_sub(1)), &mut Unlimited)
}

/// [`exists_dgr`] with precomputed floors and an external [`Control`].
pub fn exists_dgr_with<C: Control + ?Sized>(
    i: u32,
    j: u32,
    n: u32,
    cfg: &SearchConfig,
    floors: &LengthFloors,
    control: &mut C,
) -> SearchOutcome {
    if u64::from(i) * u64::from(j) > u64::from(n) {
        return SearchOutcome { status: Status::Exhausted, witness: None, stats: SearchStats::default() };
    }
    let mut engine = Engine::new(i, j, (1..=n).collect(), cfg.symmetry_breaking, floors);
    engine.run(&[], cfg.node_budget, control)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinNOutcome {
    pub status: Status,
    /// `H(I, J)` when `status` is `Found`.
    pub value: Option<u32>,
    pub witness: Option<DgrSystem>,
    /// Every `n` below this was refuted.
    pub refuted_below: u32,
    pub stats: SearchStats,
}

/// Computes `H(I, J)` by scanning `n = I·J, I·J+1, ...` until a system exists.
pub fn min_n(i: u32, j: u32, cfg: &SearchConfig) -> MinNOutcome {
    min_n_with(i, j, cfg, &LengthFloors::exact_up_to(j.saturating_sub(1)), &mut Unlimited)
}

pub fn min_n_with<C: Control + ?Sized>(
    i: u32,
    j: u32,
    cfg: &SearchConfig,
    floors: &LengthFloors,
    control: &mut C,
) -> MinNOutcome {
    let mut stats = SearchStats::default();
    let mut n = (i * j).max(1);
    if i >= 1 {
        // each ruler needs G(J) + 1 positions
        n = n.max(floors.get(j) + 1);
    }
    let start = n;
    loop {
        let remaining = cfg.node_budget.map(|b| b.saturating_sub(stats.nodes));
        let step_cfg = SearchConfig { node_budget: remaining, ..*cfg };
        let out = exists_dgr_with(i, j, n, &step_cfg, floors, control);
        stats.absorb(out.stats);
        match out.status {
            Status::Found => {
                let witness = out.witness.expect("found implies witness");
                debug_assert!(
                    n == start || witness.rulers().iter().any(|r| r.last_mark() == Some(n)),
                    "minimal witness must use mark n"
                );
                return MinNOutcome { status: Status::Found, value: Some(n), witness: Some(witness), refuted_below: n, stats };
            }
            Status::Exhausted => n += 1,
            Status::BudgetExceeded => {
                return MinNOutcome { status: Status::BudgetExceeded, value: None, witness: None, refuted_below: n, stats };
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CounterexampleOutcome {
    pub status: Status,
    /// An `n`-set with no `I` disjoint `J`-mark Golomb rulers (`status == Found`).
    pub set: Option<Vec<u32>>,
    pub sets_checked: u64,
    pub stats: SearchStats,
}

/// Looks for an `n`-subset of `[1, universe_max]` containing no `I` disjoint
/// `J`-mark Golomb rulers, which would show `Y(I, J) > n`. Sets are
/// enumerated in lexicographic order with minimum 1 (Golomb rulers are
/// translation invariant).
pub fn counterexample_search(i: u32, j: u32, n: u32, universe_max: u32, cfg: &SearchConfig) -> CounterexampleOutcome {
    counterexample_search_with(i, j, n, universe_max, cfg, &mut Unlimited)
}

pub fn counterexample_search_with<C: Control + ?Sized>(
    i: u32,
    j: u32,
    n: u32,
    universe_max: u32,
    cfg: &SearchConfig,
    control: &mut C,
) -> CounterexampleOutcome {
    let mut stats = SearchStats::default();
    let mut checked = 0u64;
    if universe_max < n {
        return CounterexampleOutcome { status: Status::Exhausted, set: None, sets_checked: 0, stats };
    }
    let floors = LengthFloors::exact_up_to(j.saturating_sub(1));
    let mut set: Vec<u32> = (1..=n).collect();
    loop {
        checked += 1;
        let remaining = cfg.node_budget.map(|b| b.saturating_sub(stats.nodes));
        let mut engine = Engine::new(i, j, set.clone(), cfg.symmetry_breaking, &floors);
        let out = engine.run(&[], remaining, control);
        stats.absorb(out.stats);
        match out.status {
            Status::Exhausted => {
                return CounterexampleOutcome { status: Status::Found, set: Some(set), sets_checked: checked, stats };
            }
            Status::BudgetExceeded => {
                return CounterexampleOutcome { status: Status::BudgetExceeded, set: None, sets_checked: checked, stats };
            }
            Status::Found => {}
        }
        if !next_subset(&mut set, universe_max) {
            return CounterexampleOutcome { status: Status::Exhausted, set: None, sets_checked: checked, stats };
        }
    }
}

/// Next sorted subset in lexicographic order keeping `set[0] = 1`.
fn next_subset(set: &mut [u32], max: u32) -> bool {
    let len = set.len();
    for idx in (1..len).rev() {
        let limit = max - (len - 1 - idx) as u32;
        if set[idx] < limit {
            set[idx] += 1;
            for k in idx + 1..len {
                set[k] = set[k - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn exists_examples() {
        let out = exists_dgr(2, 3, 6, &cfg());
        assert_eq!(out.status, Status::Found);
        assert!(out.witness.unwrap().verify().is_valid());
        assert_eq!(exists_dgr(1, 3, 3, &cfg()).status, Status::Exhausted);
        assert_eq!(exists_dgr(4, 3, 11, &cfg()).status, Status::Exhausted);
        let out = exists_dgr(4, 3, 12, &cfg());
        assert_eq!(out.status, Status::Found);
        assert_eq!(out.witness.unwrap().header(), Header::new(4, 3, 12));
        assert_eq!(exists_dgr(3, 3, 8, &cfg()).status, Status::Exhausted);
    }

    #[test]
    fn min_n_examples() {
        let out = min_n(1, 3, &cfg());
        assert_eq!(out.value, Some(4));
        assert_eq!(out.witness.unwrap().rulers()[0].marks(), &[1, 2, 4]);
        assert_eq!(min_n(2, 3, &cfg()).value, Some(6));
        assert_eq!(min_n(4, 3, &cfg()).value, Some(12));
        assert_eq!(min_n(3, 1, &cfg()).value, Some(3));
        assert_eq!(min_n(3, 2, &cfg()).value, Some(6));
    }

    #[test]
    fn floors_match_known_golomb_lengths() {
        let f = LengthFloors::exact_up_to(7);
        assert_eq!(f.as_slice(), &[0, 0, 1, 3, 6, 11, 17, 25]);
        assert_eq!(LengthFloors::trivial(5).as_slice(), &[0, 0, 1, 3, 6, 10]);
    }

    #[test]
    fn budget_is_reported() {
        let out = exists_dgr(4, 3, 12, &cfg().with_node_budget(3));
        assert_eq!(out.status, Status::BudgetExceeded);
        assert!(out.witness.is_none());
        let out = min_n(1, 6, &cfg().with_node_budget(10));
        assert_eq!(out.status, Status::BudgetExceeded);
        assert_eq!(out.value, None);
    }

    #[test]
    fn control_can_stop() {
        let floors = LengthFloors::exact_up_to(5);
        let mut stop = |_n: u64| false;
        let out = exists_dgr_with(1, 6, 17, &cfg(), &floors, &mut stop);
        assert_eq!(out.status, Status::BudgetExceeded);
    }

    #[test]
    fn prefixes_partition_the_tree() {
        let floors = LengthFloors::exact_up_to(2);
        let mut engine = Engine::new(2, 3, (1..=7).collect(), true, &floors);
        let prefixes = engine.prefixes(3);
        assert!(!prefixes.is_empty());
        let mut found = 0;
        for p in &prefixes {
            if engine.run(p, None, &mut Unlimited).status == Status::Found {
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn counterexample_examples() {
        let out = counterexample_search(1, 3, 3, 6, &cfg());
        assert_eq!(out.set, Some(alloc::vec![1, 2, 3]));
        let out = counterexample_search(1, 3, 4, 10, &cfg());
        assert_eq!(out.status, Status::Exhausted);
        assert_eq!(out.set, None);
        // every 1-set contains the 1-mark ruler
        assert_eq!(counterexample_search(1, 1, 1, 3, &cfg()).status, Status::Exhausted);
    }

    #[test]
    fn subset_enumeration() {
        let mut s = [1, 2, 3];
        let mut all = alloc::vec![s];
        while next_subset(&mut s, 5) {
            all.push(s);
        }
        // subsets of {2..5} of size 2
        assert_eq!(all.len(), 6);
        assert_eq!(all.last(), Some(&[1, 4, 5]));
    }
}
