//! The `dgr` command line.
//!
//! Exit codes: 0 success (valid, found, value computed, no violation), 1
//! negative result (invalid, exhausted, refused, violation), 2 usage or parse
//! error, 3 budget exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dgr_core::bounds::{BoundsTable, CellId, FactId};
use dgr_core::conjectures::{self, RegularOutcome};
use dgr_core::constructions::{self, Built, Rule};
use dgr_core::search::{LengthFloors, SearchConfig, SearchStats, Status};
use dgr_core::{BoundsError, DgrSystem, Gap};
use serde::Serialize;

use crate::format::{emit_dgr, emit_ruler, parse_dgr};
use crate::json::{self, SearchJson, SystemJson, FORMAT_VERSION};
use crate::{parallel, store};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dgr", version, about = "Disjoint Golomb rulers: verify, search, construct, bound")]
pub struct Cli {
    /// Print nothing; results go to files and the exit code only.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a DGR file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide existence of an (I,J,n) system or compute H(I,J).
    Search(SearchArgs),
    /// Apply a construction to DGR files.
    Construct(ConstructArgs),
    /// Singer perfect difference set and the Golomb ruler it gives.
    Singer {
        #[arg(long)]
        q: u32,
        /// Write the ruler here (ruler text format).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build the bounds table for H(I,J) and Y(I,J).
    Bounds(BoundsArgs),
    /// Test a conjecture on computed data.
    Check(CheckArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Budget {
    /// Worker threads (default: $DGR_THREADS or 1).
    #[arg(long)]
    pub threads: Option<u32>,
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long, value_parser = parse_seconds)]
    pub time_budget: Option<Duration>,
}

impl Budget {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            node_budget: self.node_budget,
            time_budget: self.time_budget,
            threads: self.threads.unwrap_or_else(parallel::default_threads),
            symmetry_breaking: true,
        }
    }
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number of seconds: {s}"))?;
    Duration::try_from_secs_f64(v).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["n", "min"]))]
pub struct SearchArgs {
    #[arg(long)]
    pub i: u32,
    #[arg(long)]
    pub j: u32,
    #[arg(long)]
    pub n: Option<u32>,
    /// Compute H(I,J) by scanning n upwards.
    #[arg(long)]
    pub min: bool,
    #[command(flatten)]
    pub budget: Budget,
    /// Turn off ruler-order symmetry breaking.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Write the witness here (DGR format).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also store the witness content-addressed in this directory.
    #[arg(long)]
    pub witness_dir: Option<PathBuf>,
    /// Statistics as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleArg {
    Concat,
    Extend,
    ExtendDouble,
    GapMerge,
    GapDouble,
    ShiftPair,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub rule: RuleArg,
    /// First input (for shift-pair: a one-ruler file whose ruler ends at n).
    #[arg(long)]
    pub a: PathBuf,
    /// Second input (concat, extend, gap-merge).
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Gap as `t,w` (gap rules; default: the widest gap).
    #[arg(long, value_parser = parse_gap)]
    pub gap: Option<Gap>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Construction trace as JSON.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

fn parse_gap(s: &str) -> Result<Gap, String> {
    let (t, w) = s.split_once(',').ok_or("expected t,w")?;
    let t = t.trim().parse().map_err(|_| format!("bad t: {t}"))?;
    let w = w.trim().parse().map_err(|_| format!("bad w: {w}"))?;
    Ok(Gap::new(t, w))
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub max_i: u32,
    #[arg(long)]
    pub max_j: u32,
    /// `search` to compute exact values per cell, or a seed JSON file.
    #[arg(long)]
    pub seed_from: Option<String>,
    /// Node budget per cell when seeding by search.
    #[arg(long, default_value_t = 2_000_000)]
    pub seed_budget: u64,
    /// Table JSON; witnesses go to a `witnesses` directory beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["2", "5", "6"]))]
    pub conjecture: String,
    /// I for the regular diagonal check.
    #[arg(long)]
    pub i: Option<u32>,
    /// Table size for the table-based checks.
    #[arg(long)]
    pub max_i: Option<u32>,
    #[arg(long)]
    pub max_j: Option<u32>,
    #[command(flatten)]
    pub budget: Budget,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// A failure that ends the command with a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{source}")]
    Parse { path: String, source: crate::format::ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Negative(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Negative(_) => EXIT_NEGATIVE,
            _ => EXIT_USAGE,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn read_dgr(path: &Path) -> Result<DgrSystem, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_dgr(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, text).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    write_file(path, &text)
}

/// Human-readable output, silenced by `--quiet`.
struct Out<'a> {
    w: &'a mut dyn Write,
    quiet: bool,
}

impl Out<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        if !self.quiet {
            // A closed stdout is not worth failing the command over.
            let _ = writeln!(self.w, "{}", s.as_ref());
        }
    }

    fn text(&mut self, s: &str) {
        if !self.quiet {
            let _ = write!(self.w, "{s}");
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    let mut out = Out { w: stdout, quiet: cli.quiet };
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut Out) -> Result<i32, CliError> {
    match command {
        Command::Verify { file, json } => verify(&file, json.as_deref(), out),
        Command::Search(a) => search(&a, out),
        Command::Construct(a) => construct(&a, out),
        Command::Singer { q, out: path, json } => singer(q, path.as_deref(), json.as_deref(), out),
        Command::Bounds(a) => bounds(&a, out),
        Command::Check(a) => check(&a, out),
    }
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Found => EXIT_OK,
        Status::Exhausted => EXIT_NEGATIVE,
        Status::BudgetExceeded => EXIT_BUDGET,
    }
}

fn verify(file: &Path, json_path: Option<&Path>, out: &mut Out) -> Result<i32, CliError> {
    let s = read_dgr(file)?;
    let report = s.verify();
    if report.is_valid() {
        out.line(format!("valid {}", s.header()));
    } else {
        out.line(format!("invalid {}: {} violation(s)", s.header(), report.violations.len()));
        for v in &report.violations {
            out.line(format!("  {v}"));
        }
    }
    if let Some(p) = json_path {
        let doc = json::VerifyJson {
            format_version: FORMAT_VERSION,
            header: s.header().into(),
            valid: report.is_valid(),
            violations: report.violations.iter().map(|v| v.to_string()).collect(),
        };
        write_json(p, &doc)?;
    }
    Ok(if report.is_valid() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn floors_for(j: u32) -> LengthFloors {
    LengthFloors::exact_up_to(j.saturating_sub(1))
}

fn emit_witness(w: &DgrSystem, path: Option<&Path>, dir: Option<&Path>, out: &mut Out) -> Result<Option<String>, CliError> {
    match path {
        Some(p) => write_file(p, &emit_dgr(w))?,
        None => out.text(&emit_dgr(w)),
    }
    match dir {
        Some(d) => Ok(Some(store::store_witness(d, w).map_err(io_err(d))?)),
        None => Ok(None),
    }
}

fn search(a: &SearchArgs, out: &mut Out) -> Result<i32, CliError> {
    let mut cfg = a.budget.config();
    cfg.symmetry_breaking = !a.no_symmetry;
    let floors = floors_for(a.j);
    let started = Instant::now();
    let (status, n, value, refuted_below, witness, stats): (Status, u32, Option<u32>, Option<u32>, Option<DgrSystem>, SearchStats) =
        if a.min {
            if a.i == 0 || a.j == 0 {
                return Err(CliError::Usage("--min needs I >= 1 and J >= 1".into()));
            }
            let r = parallel::min_n(a.i, a.j, &cfg, &floors);
            (r.status, r.refuted_below, r.value, Some(r.refuted_below), r.witness, r.stats)
        } else {
            let n = a.n.expect("clap requires --n or --min");
            let r = parallel::exists_dgr(a.i, a.j, n, &cfg, &floors);
            (r.status, n, None, None, r.witness, r.stats)
        };
    match (a.min, status) {
        (true, Status::Found) => out.line(value.expect("found").to_string()),
        (true, Status::BudgetExceeded) => {
            out.line(format!("budget-exceeded: every n < {} refuted", refuted_below.unwrap_or(0)))
        }
        _ => out.line(status.name()),
    }
    let witness_ref = match &witness {
        Some(w) => emit_witness(w, a.out.as_deref(), a.witness_dir.as_deref(), out)?,
        None => None,
    };
    if let Some(p) = &a.json {
        let doc = SearchJson {
            format_version: FORMAT_VERSION,
            i: a.i,
            j: a.j,
            n,
            mode: if a.min { "min" } else { "exists" }.into(),
            status: status.name().into(),
            value,
            refuted_below,
            nodes: stats.nodes,
            max_depth: stats.max_depth,
            threads: cfg.threads as usize,
            elapsed_ms: started.elapsed().as_millis() as u64,
            witness: witness.as_ref().map(SystemJson::from),
            witness_ref,
        };
        write_json(p, &doc)?;
    }
    Ok(status_code(status))
}

fn widest_gap(s: &DgrSystem) -> Result<Gap, CliError> {
    s.largest_gap().ok_or_else(|| CliError::Negative(format!("{} has no gap", s.header())))
}

fn construct(a: &ConstructArgs, out: &mut Out) -> Result<i32, CliError> {
    let sa = read_dgr(&a.a)?;
    let second = || -> Result<DgrSystem, CliError> {
        let p = a.b.as_deref().ok_or_else(|| CliError::Usage("this rule needs --b".into()))?;
        read_dgr(p)
    };
    let built: Result<Built, dgr_core::ConstructionError> = match a.rule {
        RuleArg::Concat => constructions::concat_compose(&sa, &second()?),
        RuleArg::Extend => constructions::thm3_extend(&sa, &second()?),
        RuleArg::ExtendDouble => constructions::thm3_double(&sa),
        RuleArg::GapMerge => {
            let sb = second()?;
            let gap = match a.gap {
                Some(g) => g,
                None => widest_gap(&sa)?,
            };
            constructions::gap_merge(&sa, gap, &sb)
        }
        RuleArg::GapDouble => {
            let gap = match a.gap {
                Some(g) => g,
                None => widest_gap(&sa)?,
            };
            constructions::gap_double(&sa, gap)
        }
        RuleArg::ShiftPair => {
            let [r] = sa.rulers() else {
                return Err(CliError::Usage(format!("shift-pair takes a file with one ruler, got {}", sa.i())));
            };
            constructions::shift_pair(r, sa.n())
        }
    };
    let built = built.map_err(|e| CliError::Negative(format!("{} refused: {e}", rule_of(a.rule).name())))?;
    let trace = json::TraceJson::from(&built.trace);
    out.line(format!(
        "# {} {}{} -> {}",
        trace.rule,
        built.trace.inputs.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(" "),
        trace.case.as_deref().map(|c| format!(" ({c})")).unwrap_or_default(),
        built.system.header()
    ));
    emit_witness(&built.system, a.out.as_deref(), None, out)?;
    if let Some(p) = &a.trace {
        write_json(p, &trace)?;
    }
    Ok(EXIT_OK)
}

fn rule_of(r: RuleArg) -> Rule {
    match r {
        RuleArg::Concat => Rule::Concat,
        RuleArg::Extend => Rule::Extend,
        RuleArg::ExtendDouble => Rule::ExtendDouble,
        RuleArg::GapMerge => Rule::GapMerge,
        RuleArg::GapDouble => Rule::GapDouble,
        RuleArg::ShiftPair => Rule::ShiftPair,
    }
}

fn singer(q: u32, path: Option<&Path>, json_path: Option<&Path>, out: &mut Out) -> Result<i32, CliError> {
    let s = constructions::singer_ruler(q).map_err(|e| CliError::Usage(e.to_string()))?;
    let set = s.difference_set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    out.line(format!("# modulus {}", s.modulus));
    out.line(format!("# difference set {set}"));
    out.line(format!("# ruler length {} with {} marks", s.ruler.length(), s.ruler.len()));
    out.line(emit_ruler(&s.ruler));
    if let Some(p) = path {
        write_file(p, &format!("{}\n", emit_ruler(&s.ruler)))?;
    }
    if let Some(p) = json_path {
        let doc = json::SingerJson {
            format_version: FORMAT_VERSION,
            q,
            modulus: s.modulus,
            difference_set: s.difference_set.clone(),
            ruler: s.ruler.marks().to_vec(),
            length: s.ruler.length(),
        };
        write_json(p, &doc)?;
    }
    Ok(EXIT_OK)
}

/// Exact values found by `min_n` per cell within `budget` nodes each.
pub fn search_seeds(max_i: u32, max_j: u32, budget: u64) -> Vec<DgrSystem> {
    let mut seeds = Vec::new();
    for j in 1..=max_j {
        let floors = floors_for(j);
        for i in 1..=max_i {
            let cfg = SearchConfig { node_budget: Some(budget), ..SearchConfig::default() };
            let r = dgr_core::search::min_n_with(i, j, &cfg, &floors, &mut dgr_core::search::Unlimited);
            if let Some(w) = r.witness {
                seeds.push(w);
            }
        }
    }
    seeds
}

fn load_seed_file(path: &Path) -> Result<Vec<DgrSystem>, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let doc: json::SeedFile =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    doc.seeds
        .iter()
        .map(|s| s.to_system().map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))))
        .collect()
}

fn dump_chain(table: &BoundsTable, fact: FactId) -> String {
    table
        .provenance(fact)
        .iter()
        .map(|f| {
            let ants = f.antecedents.iter().map(|a| format!("#{}", a.0)).collect::<Vec<_>>().join(",");
            format!("  #{} {} {} {} = {} [{}]", f.id.0, f.cell, f.quantity.name(), f.rule, f.value, ants)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn bounds_error(table: Option<&BoundsTable>, e: BoundsError) -> CliError {
    match (table, &e) {
        (Some(t), BoundsError::Contradiction { lower, upper, .. }) => CliError::Usage(format!(
            "{e}\nlower bound chain:\n{}\nupper bound chain:\n{}",
            dump_chain(t, *lower),
            dump_chain(t, *upper)
        )),
        _ => CliError::Usage(e.to_string()),
    }
}

/// Seeds and propagates a table.
pub fn build_table(max_i: u32, max_j: u32, seeds: &[DgrSystem]) -> Result<BoundsTable, (Option<BoundsTable>, BoundsError)> {
    let mut t = BoundsTable::new(max_i, max_j);
    t.seed_trivial().map_err(|e| (None, e))?;
    for s in seeds {
        let cell = CellId::new(s.i(), s.j());
        if t.contains(cell) {
            t.seed_exact(cell, s.n(), s.clone()).map_err(|e| (None, e))?;
        }
    }
    t.seed_registry().map_err(|e| (None, e))?;
    match t.propagate() {
        Ok(()) => Ok(t),
        Err(e) => Err((Some(t), e)),
    }
}

fn table_text(t: &BoundsTable) -> String {
    let mut s = String::from("#   I   J  H(I,J)      Y(I,J)    rule\n");
    for c in t.cells() {
        let h = match (c.exact(), c.h_upper) {
            (Some(v), _) => format!("= {v}"),
            (None, Some(u)) => format!("{}..{u}", c.h_lower),
            (None, None) => format!(">= {}", c.h_lower),
        };
        let y = match c.y_upper {
            Some(u) if u == c.y_lower => format!("= {u}"),
            Some(u) => format!("{}..{u}", c.y_lower),
            None => format!(">= {}", c.y_lower),
        };
        let rule = c.h_upper_fact.map(|f| t.fact(f).rule.name()).unwrap_or("-");
        s.push_str(&format!("{:>4} {:>3}  {:<10}  {:<9} {rule}\n", c.cell.i, c.cell.j, h, y));
    }
    s
}

fn bounds(a: &BoundsArgs, out: &mut Out) -> Result<i32, CliError> {
    let seeds = match a.seed_from.as_deref() {
        None => Vec::new(),
        Some("search") => search_seeds(a.max_i, a.max_j, a.seed_budget),
        Some(path) => load_seed_file(Path::new(path))?,
    };
    for s in &seeds {
        if !s.is_valid() {
            return Err(CliError::Usage(format!("seed {} does not verify", s.header())));
        }
    }
    let table = build_table(a.max_i, a.max_j, &seeds).map_err(|(t, e)| bounds_error(t.as_ref(), e))?;
    out.text(&table_text(&table));
    if let Some(p) = &a.out {
        let dir = p.parent().unwrap_or(Path::new(".")).join("witnesses");
        let mut refs = BTreeMap::new();
        let mut cache = BTreeMap::new();
        for c in table.cells() {
            let Some(f) = c.h_upper_fact else { continue };
            if !table.fact(f).constructive {
                continue;
            }
            let w = table.materialize_fact(f, &mut cache).map_err(|e| bounds_error(Some(&table), e))?;
            refs.insert(c.cell, store::store_witness(&dir, &w).map_err(io_err(&dir))?);
        }
        write_json(p, &json::TableJson::from_table(&table, &refs))?;
    }
    Ok(EXIT_OK)
}

fn check(a: &CheckArgs, out: &mut Out) -> Result<i32, CliError> {
    let cfg = a.budget.config();
    let started = Instant::now();
    let (code, doc) = match a.conjecture.as_str() {
        "2" => {
            let (mi, mj) = (a.max_i.unwrap_or(4), a.max_j.unwrap_or(5));
            let seeds = search_seeds(mi, mj, a.budget.node_budget.unwrap_or(2_000_000));
            let t = build_table(mi, mj, &seeds).map_err(|(t, e)| bounds_error(t.as_ref(), e))?;
            let r = conjectures::check_step(&t);
            for c in &r.checks {
                let mark = if c.holds { "ok" } else { "VIOLATION" };
                out.line(format!("H({},{}) = {} <= H({},{}) + {} = {}  {mark}", c.i + 1, c.j, c.h_next, c.i, c.j, c.j, c.h_i + c.j));
            }
            let v = r.violations().count();
            out.line(format!("{} pair(s) checked, {v} violation(s)", r.checks.len()));
            if v > 0 {
                out.line("VIOLATION FOUND: H(I+1,J) <= H(I,J) + J fails; see the pairs marked above");
            }
            let entries = r
                .checks
                .iter()
                .map(|c| serde_json::json!({"i": c.i, "j": c.j, "h_i": c.h_i, "h_next": c.h_next, "holds": c.holds}))
                .collect();
            (if v == 0 { EXIT_OK } else { EXIT_NEGATIVE }, check_doc(2, if v == 0 { "holds" } else { "violated" }, v, entries, None))
        }
        "5" => {
            let i = a.i.unwrap_or(conjectures::REGULAR_MIN_I);
            let mut deadline = parallel::Deadline::from_config(&cfg);
            let report = if cfg.threads > 1 && i >= conjectures::REGULAR_MIN_I {
                let (j, n) = (i + 2, i * (i + 2));
                let r = parallel::exists_dgr(i, j, n, &cfg, &floors_for(j));
                let outcome = match r.status {
                    Status::Found => RegularOutcome::Confirmed(r.witness.expect("found")),
                    Status::Exhausted => RegularOutcome::Refuted,
                    Status::BudgetExceeded => RegularOutcome::BudgetExceeded,
                };
                conjectures::RegularReport { i, j, n, outcome, stats: r.stats }
            } else {
                conjectures::check_regular_diagonal(i, &cfg, &mut deadline)
            };
            let header = format!("({},{},{})", report.i, report.j, report.n);
            let (code, status) = match &report.outcome {
                RegularOutcome::Rejected { min_i } => {
                    return Err(CliError::Usage(format!("I = {i} is outside the checked range I >= {min_i}")));
                }
                RegularOutcome::Confirmed(w) => {
                    out.line(format!("confirmed: {header} system found"));
                    out.text(&emit_dgr(w));
                    (EXIT_OK, "confirmed")
                }
                RegularOutcome::Refuted => {
                    out.line(format!("VIOLATION FOUND: no {header} system exists"));
                    (EXIT_NEGATIVE, "refuted")
                }
                RegularOutcome::BudgetExceeded => {
                    out.line(format!("budget-exceeded: no claim about {header}"));
                    (EXIT_BUDGET, "budget-exceeded")
                }
            };
            let witness = match &report.outcome {
                RegularOutcome::Confirmed(w) => Some(SystemJson::from(w)),
                _ => None,
            };
            let stats = SearchJson {
                format_version: FORMAT_VERSION,
                i: report.i,
                j: report.j,
                n: report.n,
                mode: "exists".into(),
                status: status.into(),
                value: None,
                refuted_below: None,
                nodes: report.stats.nodes,
                max_depth: report.stats.max_depth,
                threads: cfg.threads as usize,
                elapsed_ms: started.elapsed().as_millis() as u64,
                witness,
                witness_ref: None,
            };
            let violations = usize::from(code == EXIT_NEGATIVE);
            (code, check_doc(5, status, violations, Vec::new(), Some(stats)))
        }
        _ => {
            let mj = a.max_j.unwrap_or(9);
            let seeds: Vec<DgrSystem> = search_seeds(1, mj, a.budget.node_budget.unwrap_or(50_000_000));
            let t = build_table(1, mj, &seeds).map_err(|(t, e)| bounds_error(t.as_ref(), e))?;
            let r = conjectures::check_golomb(&t);
            for c in &r.checks {
                let scope = if c.in_scope { "" } else { " (below range)" };
                match (c.g_k2, c.holds) {
                    (Some(g), Some(h)) => out.line(format!(
                        "k={}: G({}) = {g} < {} {}{scope}",
                        c.k,
                        c.k + 2,
                        c.bound,
                        if h { "ok" } else { "VIOLATION" }
                    )),
                    _ => out.line(format!("k={}: G({}) unknown, unevaluated", c.k, c.k + 2)),
                }
            }
            for e in &r.erdos {
                out.line(format!("G({}) = {} < {} {}", e.k, e.g_k, e.k * e.k, if e.holds { "ok" } else { "VIOLATION" }));
            }
            let v = r.violations().count() + r.erdos.iter().filter(|e| !e.holds).count();
            out.line(format!("{v} violation(s)"));
            let mut entries: Vec<serde_json::Value> = r
                .checks
                .iter()
                .map(|c| serde_json::json!({"k": c.k, "g_k_plus_2": c.g_k2, "bound": c.bound, "in_scope": c.in_scope, "holds": c.holds}))
                .collect();
            entries.extend(r.erdos.iter().map(|e| serde_json::json!({"k": e.k, "g_k": e.g_k, "erdos_bound": e.k * e.k, "holds": e.holds})));
            (if v == 0 { EXIT_OK } else { EXIT_NEGATIVE }, check_doc(6, if v == 0 { "holds" } else { "violated" }, v, entries, None))
        }
    };
    if let Some(p) = &a.json {
        write_json(p, &doc)?;
    }
    Ok(code)
}

fn check_doc(conjecture: u32, status: &str, violations: usize, entries: Vec<serde_json::Value>, stats: Option<SearchJson>) -> json::CheckJson {
    json::CheckJson { format_version: FORMAT_VERSION, conjecture, status: status.into(), violations, entries, stats }
}
