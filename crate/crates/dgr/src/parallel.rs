//! Multi-threaded search with wall-clock budgets.
//!
//! The tree is cut at a fixed depth into prefixes (partial assignments of the
//! smallest values). Workers take prefixes from a shared counter and search
//! each subtree with their own engine; a shared flag stops everyone once a
//! witness turns up or the budget runs out. Each subtree gets the node budget
//! left when it starts, so concurrent workers may overshoot the total a little.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use dgr_core::search::{
    self, Choice, Control, Engine, LengthFloors, MinNOutcome, SearchConfig, SearchOutcome, SearchStats, Status,
};
use dgr_core::DgrSystem;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "DGR_THREADS";

/// `DGR_THREADS` if it parses to a positive number, else 1.
pub fn default_threads() -> u32 {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&t| t > 0).unwrap_or(1)
}

/// Stops at a fixed instant.
pub struct Deadline(pub Option<Instant>);

impl Deadline {
    pub fn from_config(cfg: &SearchConfig) -> Self {
        Deadline(cfg.time_budget.map(|d| Instant::now() + d))
    }

    fn passed(&self) -> bool {
        self.0.is_some_and(|end| Instant::now() >= end)
    }
}

impl Control for Deadline {
    fn keep_going(&mut self, _nodes: u64) -> bool {
        !self.passed()
    }
}

struct Shared<'a> {
    found: &'a AtomicBool,
    stop: &'a AtomicBool,
    nodes: &'a AtomicU64,
    budget: Option<u64>,
    deadline: &'a Deadline,
}

struct WorkerControl<'a> {
    shared: &'a Shared<'a>,
    reported: u64,
}

impl WorkerControl<'_> {
    fn settle(&mut self, nodes: u64) -> u64 {
        let delta = nodes - self.reported;
        self.reported = nodes;
        self.shared.nodes.fetch_add(delta, Ordering::Relaxed) + delta
    }
}

impl Control for WorkerControl<'_> {
    fn keep_going(&mut self, nodes: u64) -> bool {
        let total = self.settle(nodes);
        let s = self.shared;
        if s.budget.is_some_and(|b| total > b) || s.deadline.passed() {
            s.stop.store(true, Ordering::Relaxed);
        }
        !(s.found.load(Ordering::Relaxed) || s.stop.load(Ordering::Relaxed))
    }
}

/// Enough prefixes to keep `threads` workers busy.
fn split(engine: &mut Engine, threads: u32, universe_len: usize) -> Vec<Vec<Choice>> {
    let want = 8 * threads as usize;
    let mut depth = 1;
    loop {
        let prefixes = engine.prefixes(depth);
        if prefixes.len() >= want || depth >= universe_len {
            return prefixes;
        }
        depth += 1;
    }
}

/// Searches `universe` for `I` disjoint `J`-mark rulers, honouring
/// `cfg.threads`, `cfg.node_budget` and `cfg.time_budget`.
pub fn search_universe(i: u32, j: u32, universe: Vec<u32>, cfg: &SearchConfig, floors: &LengthFloors, deadline: &Deadline) -> SearchOutcome {
    let threads = cfg.threads.max(1);
    let len = universe.len();
    if threads == 1 || u64::from(i) * u64::from(j) > len as u64 {
        let mut engine = Engine::new(i, j, universe, cfg.symmetry_breaking, floors);
        let mut control = Deadline(deadline.0);
        return engine.run(&[], cfg.node_budget, &mut control);
    }
    let mut splitter = Engine::new(i, j, universe.clone(), cfg.symmetry_breaking, floors);
    let prefixes = split(&mut splitter, threads, len);
    let next = AtomicUsize::new(0);
    let found = AtomicBool::new(false);
    let stop = AtomicBool::new(false);
    let nodes = AtomicU64::new(0);
    let witnesses: Mutex<Vec<(usize, DgrSystem)>> = Mutex::new(Vec::new());
    let depth = AtomicU64::new(0);
    let shared = Shared { found: &found, stop: &stop, nodes: &nodes, budget: cfg.node_budget, deadline };
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| {
                let mut engine = Engine::new(i, j, universe.clone(), cfg.symmetry_breaking, floors);
                loop {
                    if found.load(Ordering::Relaxed) || stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= prefixes.len() {
                        break;
                    }
                    let mut control = WorkerControl { shared: &shared, reported: 0 };
                    let remaining = cfg.node_budget.map(|b| b.saturating_sub(nodes.load(Ordering::Relaxed)));
                    let out = engine.run(&prefixes[k], remaining, &mut control);
                    control.settle(out.stats.nodes);
                    if out.status == Status::BudgetExceeded && !found.load(Ordering::Relaxed) {
                        stop.store(true, Ordering::Relaxed);
                    }
                    depth.fetch_max(u64::from(out.stats.max_depth), Ordering::Relaxed);
                    if out.status == Status::Found {
                        found.store(true, Ordering::Relaxed);
                        witnesses.lock().expect("no worker panics while holding the lock").push((k, out.witness.expect("found")));
                    }
                }
            });
        }
    });
    let stats = SearchStats { nodes: nodes.into_inner(), max_depth: depth.into_inner() as u32 };
    let mut witnesses = witnesses.into_inner().expect("workers finished");
    witnesses.sort_by_key(|(k, _)| *k);
    if let Some((_, w)) = witnesses.into_iter().next() {
        return SearchOutcome { status: Status::Found, witness: Some(w), stats };
    }
    let status = if stop.into_inner() { Status::BudgetExceeded } else { Status::Exhausted };
    SearchOutcome { status, witness: None, stats }
}

/// Parallel [`search::exists_dgr`].
pub fn exists_dgr(i: u32, j: u32, n: u32, cfg: &SearchConfig, floors: &LengthFloors) -> SearchOutcome {
    search_universe(i, j, (1..=n).collect(), cfg, floors, &Deadline::from_config(cfg))
}

/// Parallel [`search::min_n`]: `n` rises one at a time, each step searched
/// in parallel; budgets cover the whole scan.
pub fn min_n(i: u32, j: u32, cfg: &SearchConfig, floors: &LengthFloors) -> MinNOutcome {
    let deadline = Deadline::from_config(cfg);
    let mut stats = SearchStats::default();
    let mut n = (i * j).max(1).max(floors.get(j) + 1);
    loop {
        let step = SearchConfig { node_budget: cfg.node_budget.map(|b| b.saturating_sub(stats.nodes)), ..*cfg };
        let out = search_universe(i, j, (1..=n).collect(), &step, floors, &deadline);
        stats.absorb(out.stats);
        match out.status {
            Status::Found => {
                return MinNOutcome { status: Status::Found, value: Some(n), witness: out.witness, refuted_below: n, stats };
            }
            Status::Exhausted => n += 1,
            Status::BudgetExceeded => {
                return MinNOutcome { status: Status::BudgetExceeded, value: None, witness: None, refuted_below: n, stats };
            }
        }
    }
}

/// [`search::counterexample_search`] with the wall-clock budget honoured.
pub fn counterexample_search(i: u32, j: u32, n: u32, universe_max: u32, cfg: &SearchConfig) -> search::CounterexampleOutcome {
    let mut deadline = Deadline::from_config(cfg);
    search::counterexample_search_with(i, j, n, universe_max, cfg, &mut deadline)
}
