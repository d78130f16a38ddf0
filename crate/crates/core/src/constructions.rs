//! Certificate-producing constructions of new DGR systems from old ones.
//!
//! Every function here checks its inputs, builds the new system by an explicit
//! coordinate map, verifies the result, and returns it together with a
//! [`ConstructionTrace`] recording which map was applied. The header of the
//! output is always the exact value of the corresponding bound formula.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{ConstructionError, FieldError};
use crate::gf;
use crate::ruler::Ruler;
use crate::system::{DgrSystem, Gap, Header};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rule {
    /// `H(a+b,J) <= H(a,J) + H(b,J)`.
    Concat,
    /// `H(a+b,J) <= H(a,J) + H(b,J-1) + b`.
    Extend,
    /// `H(2a,J) <= 2H(a,J-1) + 2a`.
    ExtendDouble,
    /// `H(a+b,J) <= H(a,J) + H(b,J) - w`.
    GapMerge,
    /// `H(2a,J) <= 2H(a,J) - 2w`.
    GapDouble,
    /// `H(2,J-1) <= H(1,J) + 1`.
    ShiftPair,
}

impl Rule {
    pub const ALL: [Rule; 6] =
        [Rule::Concat, Rule::Extend, Rule::ExtendDouble, Rule::GapMerge, Rule::GapDouble, Rule::ShiftPair];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Concat => "concat",
            Rule::Extend => "extend",
            Rule::ExtendDouble => "extend-double",
            Rule::GapMerge => "gap-merge",
            Rule::GapDouble => "gap-double",
            Rule::ShiftPair => "shift-pair",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which branch of a multi-case construction fired.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Case {
    /// Second system inserted into the gap, upper part of the first lifted.
    GapInsert,
    /// First system untouched, second wrapped around into the gap.
    GapWrap,
    /// Ruler and its unit shift are disjoint.
    ShiftDisjoint,
    /// Ruler and its unit shift share one mark.
    ShiftCommon,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::GapInsert => "insert",
            Case::GapWrap => "wrap",
            Case::ShiftDisjoint => "disjoint",
            Case::ShiftCommon => "common",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstructionTrace {
    pub rule: Rule,
    pub inputs: Vec<Header>,
    pub output: Header,
    pub case: Option<Case>,
    /// Named integer parameters (`a`, `b`, `n`, `m`, `t`, `w`, ...).
    pub params: Vec<(&'static str, u64)>,
}

impl ConstructionTrace {
    pub fn param(&self, name: &str) -> Option<u64> {
        self.params.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

/// A verified output system with its trace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Built {
    pub system: DgrSystem,
    pub trace: ConstructionTrace,
}

fn require_valid(s: &DgrSystem) -> Result<(), ConstructionError> {
    let report = s.verify();
    if report.is_valid() {
        Ok(())
    } else {
        Err(ConstructionError::InvalidInput(report))
    }
}

fn require_j(expected: u32, found: u32) -> Result<(), ConstructionError> {
    if expected == found {
        Ok(())
    } else {
        Err(ConstructionError::MarkCountMismatch { expected, found })
    }
}

fn ruler_from_map(marks: impl IntoIterator<Item = i64>) -> Result<Ruler, ConstructionError> {
    let mut v = Vec::new();
    for m in marks {
        if m < 0 {
            return Err(ConstructionError::Ruler(crate::error::RulerError::NegativeMark(m)));
        }
        v.push(u32::try_from(m).map_err(|_| crate::error::RulerError::Overflow)?);
    }
    Ok(Ruler::new(v)?)
}

fn finish(
    rule: Rule,
    inputs: Vec<Header>,
    output: Header,
    rulers: Vec<Ruler>,
    case: Option<Case>,
    params: Vec<(&'static str, u64)>,
) -> Result<Built, ConstructionError> {
    let system = DgrSystem::from_parts(output, rulers);
    let report = system.verify();
    if !report.is_valid() {
        return Err(ConstructionError::OutputInvalid { header: output, report });
    }
    Ok(Built { system, trace: ConstructionTrace { rule, inputs, output, case, params } })
}

fn checked_header(i: u64, j: u32, n: u64) -> Result<Header, ConstructionError> {
    let i = u32::try_from(i).map_err(|_| crate::error::RulerError::Overflow)?;
    let n = u32::try_from(n).map_err(|_| crate::error::RulerError::Overflow)?;
    Ok(Header::new(i, j, n))
}

/// Places `sb` directly above `sa`: an `(a+b, J, na+nb)` system.
pub fn concat_compose(sa: &DgrSystem, sb: &DgrSystem) -> Result<Built, ConstructionError> {
    require_j(sa.j(), sb.j())?;
    require_valid(sa)?;
    require_valid(sb)?;
    let shift = i64::from(sa.n());
    let mut rulers: Vec<Ruler> = sa.rulers().to_vec();
    for r in sb.rulers() {
        rulers.push(r.translate(shift)?);
    }
    let out = checked_header(u64::from(sa.i()) + u64::from(sb.i()), sa.j(), u64::from(sa.n()) + u64::from(sb.n()))?;
    finish(
        Rule::Concat,
        alloc::vec![sa.header(), sb.header()],
        out,
        rulers,
        None,
        alloc::vec![("a", u64::from(sa.i())), ("b", u64::from(sb.i())), ("n", u64::from(sa.n())), ("m", u64::from(sb.n()))],
    )
}

/// Extends `b` rulers of `J-1` marks by one high mark each and stacks them
/// under `sa` (lifted by `m`): an `(a+b, J, n+m+b)` system.
///
/// Layout: `sb` keeps `[1, m]`, `sa` moves to `[m+1, m+n]`, and ruler `i` of
/// `sb` gains the mark `n+m+i`.
pub fn thm3_extend(sa: &DgrSystem, sb: &DgrSystem) -> Result<Built, ConstructionError> {
    require_j(sa.j(), sb.j() + 1)?;
    require_valid(sa)?;
    require_valid(sb)?;
    let (n, m) = (sa.n(), sb.n());
    if n < m {
        return Err(ConstructionError::SpanOrder { na: n, nb: m });
    }
    let mut rulers = Vec::with_capacity((sa.i() + sb.i()) as usize);
    for x in sa.rulers() {
        rulers.push(x.translate(i64::from(m))?);
    }
    for (idx, y) in sb.rulers().iter().enumerate() {
        let top = i64::from(n) + i64::from(m) + idx as i64 + 1;
        rulers.push(ruler_from_map(y.marks().iter().map(|&v| i64::from(v)).chain([top]))?);
    }
    let out = checked_header(
        u64::from(sa.i()) + u64::from(sb.i()),
        sa.j(),
        u64::from(n) + u64::from(m) + u64::from(sb.i()),
    )?;
    finish(
        Rule::Extend,
        alloc::vec![sa.header(), sb.header()],
        out,
        rulers,
        None,
        alloc::vec![("a", u64::from(sa.i())), ("b", u64::from(sb.i())), ("n", u64::from(n)), ("m", u64::from(m))],
    )
}

/// Two lifted copies of an `(a, J-1, m)` system, each ruler extended by one
/// outer mark: a `(2a, J, 2m+2a)` system.
///
/// Low marks `1..=a` extend the upper copy, high marks `2m+a+1..=2m+2a`
/// extend the lower copy: `U_i = (Y_i + a) ∪ {2m+a+i}`, `V_i = (Y_i + a + m) ∪ {i}`.
pub fn thm3_double(sb: &DgrSystem) -> Result<Built, ConstructionError> {
    require_valid(sb)?;
    let a = sb.i();
    let m = sb.n();
    let (a64, m64) = (i64::from(a), i64::from(m));
    let mut lower = Vec::with_capacity(a as usize);
    let mut upper = Vec::with_capacity(a as usize);
    for (idx, y) in sb.rulers().iter().enumerate() {
        let i = idx as i64 + 1;
        let base = y.marks().iter().map(|&v| i64::from(v));
        lower.push(ruler_from_map(base.clone().map(|v| v + a64).chain([2 * m64 + a64 + i]))?);
        upper.push(ruler_from_map(base.map(|v| v + a64 + m64).chain([i]))?);
    }
    lower.extend(upper);
    let out = checked_header(2 * u64::from(a), sb.j() + 1, 2 * u64::from(m) + 2 * u64::from(a))?;
    finish(
        Rule::ExtendDouble,
        alloc::vec![sb.header()],
        out,
        lower,
        None,
        alloc::vec![("a", u64::from(a)), ("m", u64::from(m))],
    )
}

/// Checks that `gap` is a nonempty empty run of `s` inside `[1, n]`.
fn check_gap(s: &DgrSystem, gap: Gap) -> Result<(), ConstructionError> {
    let n = s.n();
    if gap.w == 0 || u64::from(gap.t) + u64::from(gap.w) > u64::from(n) {
        return Err(ConstructionError::GapOutOfRange { gap, n });
    }
    if s.rulers().iter().any(|r| r.marks().iter().any(|&m| gap.positions().contains(&m))) {
        return Err(ConstructionError::GapNotEmpty(gap));
    }
    Ok(())
}

/// Reflects `s` when its gap sits in the upper half, so that `t <= n-w-t`.
fn orient(s: &DgrSystem, gap: Gap) -> Result<(DgrSystem, Gap, bool), ConstructionError> {
    let tail = s.n() - gap.w - gap.t;
    if gap.t > tail {
        Ok((s.reflect()?, Gap::new(tail, gap.w), true))
    } else {
        Ok((s.clone(), gap, false))
    }
}

/// Uses an empty run of width `w` in `sa` to absorb part of `sb`:
/// an `(a+b, J, n+m-w)` system.
///
/// If the gap lies in the upper half, `sa` is reflected first. Then, with
/// `n-w-t <= m`, `sb` is inserted at `t+1..=t+m` and `sa`'s marks above the
/// gap are lifted by `m-w`; otherwise `sa` is kept, `sb`'s marks above `m-w`
/// drop into the gap and the rest are placed above `n`.
pub fn gap_merge(sa: &DgrSystem, gap: Gap, sb: &DgrSystem) -> Result<Built, ConstructionError> {
    require_j(sa.j(), sb.j())?;
    require_valid(sa)?;
    require_valid(sb)?;
    check_gap(sa, gap)?;
    let (oriented, g, reflected) = orient(sa, gap)?;
    let (n, m) = (i64::from(sa.n()), i64::from(sb.n()));
    let (t, w) = (i64::from(g.t), i64::from(g.w));
    let insert = n - w - t <= m;
    if !insert && w > m {
        return Err(ConstructionError::GapTooWide { gap: g, m: sb.n() });
    }
    let mut rulers = Vec::with_capacity((sa.i() + sb.i()) as usize);
    if insert {
        for a in oriented.rulers() {
            rulers.push(ruler_from_map(
                a.marks().iter().map(|&v| i64::from(v)).map(|v| if v <= t { v } else { v + m - w }),
            )?);
        }
        for b in sb.rulers() {
            rulers.push(ruler_from_map(b.marks().iter().map(|&x| t + i64::from(x)))?);
        }
    } else {
        rulers.extend(oriented.rulers().iter().cloned());
        for b in sb.rulers() {
            rulers.push(ruler_from_map(b.marks().iter().map(|&x| {
                let x = i64::from(x);
                if x <= m - w {
                    n + x
                } else {
                    t + x - (m - w)
                }
            }))?);
        }
    }
    let out = checked_header(u64::from(sa.i()) + u64::from(sb.i()), sa.j(), (n + m - w) as u64)?;
    finish(
        Rule::GapMerge,
        alloc::vec![sa.header(), sb.header()],
        out,
        rulers,
        Some(if insert { Case::GapInsert } else { Case::GapWrap }),
        alloc::vec![
            ("a", u64::from(sa.i())),
            ("b", u64::from(sb.i())),
            ("n", n as u64),
            ("m", m as u64),
            ("t", t as u64),
            ("w", w as u64),
            ("reflected", u64::from(reflected)),
        ],
    )
}

/// Two copies of `sa` nested so that both gaps of width `w` disappear:
/// a `(2a, J, 2n-2w)` system.
///
/// After orienting so that `t <= n-w-t`, the first copy keeps its marks in
/// `[1, t]` and moves each mark `h > t+w` to `h + n - 2w - t`. The second
/// copy is the mirror image of the first about the centre of `[1, 2n-2w]`:
/// high marks `h ↦ t + n + 1 - h` and low marks `l ↦ 2n - 2w + 1 - l`.
pub fn gap_double(sa: &DgrSystem, gap: Gap) -> Result<Built, ConstructionError> {
    require_valid(sa)?;
    check_gap(sa, gap)?;
    let (oriented, g, reflected) = orient(sa, gap)?;
    let n = i64::from(sa.n());
    let (t, w) = (i64::from(g.t), i64::from(g.w));
    let mut first = Vec::with_capacity(sa.i() as usize);
    let mut second = Vec::with_capacity(sa.i() as usize);
    for a in oriented.rulers() {
        let marks = a.marks().iter().map(|&v| i64::from(v));
        first.push(ruler_from_map(marks.clone().map(|v| if v <= t { v } else { v + n - 2 * w - t }))?);
        second.push(ruler_from_map(marks.map(|v| if v <= t { 2 * n - 2 * w + 1 - v } else { t + n + 1 - v }))?);
    }
    first.extend(second);
    let out = checked_header(2 * u64::from(sa.i()), sa.j(), (2 * n - 2 * w) as u64)?;
    finish(
        Rule::GapDouble,
        alloc::vec![sa.header()],
        out,
        first,
        None,
        alloc::vec![
            ("a", u64::from(sa.i())),
            ("n", n as u64),
            ("t", t as u64),
            ("w", w as u64),
            ("reflected", u64::from(reflected)),
        ],
    )
}

/// A ruler `A ⊆ [1, n]` ending at `n` and its shift `A+1` give two disjoint
/// rulers of one mark fewer: a `(2, J-1, n+1)` system.
///
/// If `A` and `A+1` are disjoint the top mark of each is dropped; otherwise
/// they share exactly one mark `c`, and the rulers are `A \ {c}` and
/// `(A+1) \ {n+1}`.
pub fn shift_pair(a_ruler: &Ruler, n: u32) -> Result<Built, ConstructionError> {
    if a_ruler.last_mark() != Some(n) {
        return Err(ConstructionError::RulerMaxMismatch { max: a_ruler.last_mark(), n });
    }
    if a_ruler.first_mark() == Some(0) {
        let report = DgrSystem::from_parts(Header::new(1, a_ruler.len() as u32, n), alloc::vec![a_ruler.clone()]).verify();
        return Err(ConstructionError::InvalidInput(report));
    }
    if !a_ruler.is_golomb() {
        return Err(ConstructionError::NotGolomb);
    }
    let j = a_ruler.len() as u32;
    let shifted = a_ruler.translate(1)?;
    let common: Vec<u32> = a_ruler.marks().iter().copied().filter(|&v| shifted.contains(v)).collect();
    let drop = |r: &Ruler, v: u32| Ruler::from_sorted(r.marks().iter().copied().filter(|&x| x != v).collect());
    let (first, second, case) = match common.as_slice() {
        [] => (drop(a_ruler, n)?, drop(&shifted, n + 1)?, Case::ShiftDisjoint),
        [c] => (drop(a_ruler, *c)?, drop(&shifted, n + 1)?, Case::ShiftCommon),
        _ => return Err(ConstructionError::MultipleCommonMarks),
    };
    let mut params = alloc::vec![("n", u64::from(n))];
    if let [c] = common.as_slice() {
        params.push(("common", u64::from(*c)));
    }
    finish(
        Rule::ShiftPair,
        alloc::vec![Header::new(1, j, n)],
        Header::new(2, j.saturating_sub(1), n + 1),
        alloc::vec![first, second],
        Some(case),
        params,
    )
}

/// Singer's `q+1` residues with distinct differences modulo `q²+q+1`, and a
/// Golomb ruler cut from them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SingerRuler {
    pub q: u32,
    pub modulus: u32,
    /// Canonical difference set (smallest sorted translate containing 0).
    pub difference_set: Vec<u32>,
    /// The translate of the difference set with the smallest length,
    /// starting at 0. Its length is at most `q²+q`.
    pub ruler: Ruler,
}

/// Builds the Singer difference set for the prime power `q` and the
/// shortest Golomb ruler among its cyclic translates.
pub fn singer_ruler(q: u32) -> Result<SingerRuler, FieldError> {
    let set = gf::singer_difference_set(q)?;
    let ruler = gf::shortest_translate(&set.residues, set.modulus);
    let ruler = Ruler::from_sorted(ruler).map_err(|_| FieldError::VerificationFailed { q })?;
    if !ruler.is_golomb() || ruler.len() != q as usize + 1 {
        return Err(FieldError::VerificationFailed { q });
    }
    Ok(SingerRuler { q, modulus: set.modulus, difference_set: set.residues, ruler })
}
