//! `(I, J, n)` systems of disjoint Golomb rulers and their geometry.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{ConstructionError, RulerError};
use crate::ruler::Ruler;

/// The `(I, J, n)` triple carried by every system.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Header {
    pub i: u32,
    pub j: u32,
    pub n: u32,
}

impl Header {
    pub const fn new(i: u32, j: u32, n: u32) -> Self {
        Header { i, j, n }
    }

    pub fn is_regular(&self) -> bool {
        u64::from(self.i) * u64::from(self.j) == u64::from(self.n)
    }
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.n)
    }
}

/// `I` rulers of `J` marks each inside `{1..n}`.
///
/// Nothing is checked when a system is assembled with [`DgrSystem::from_parts`];
/// use [`DgrSystem::verify`] (or [`DgrSystem::new`]) to learn whether it is a
/// genuine DGR.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DgrSystem {
    header: Header,
    rulers: Vec<Ruler>,
}

/// An empty run `{t+1, ..., t+w}` in the union of a system's rulers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gap {
    pub t: u32,
    pub w: u32,
}

impl Gap {
    pub const fn new(t: u32, w: u32) -> Self {
        Gap { t, w }
    }

    /// Positions `t+1 ..= t+w`.
    pub fn positions(&self) -> core::ops::RangeInclusive<u32> {
        self.t + 1..=self.t + self.w
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// Header says `expected` rulers, the system holds `found`.
    RulerCount { expected: u32, found: usize },
    /// Ruler `ruler` holds `found` marks instead of `J`.
    MarkCount { ruler: usize, found: usize },
    MarkOutOfRange { ruler: usize, mark: u32 },
    /// Two pairs of ruler `ruler` share the difference `value`.
    DuplicateDifference { ruler: usize, value: u32, first: (u32, u32), second: (u32, u32) },
    Overlap { first: usize, second: usize, mark: u32 },
    /// `I·J > n`; implied by the other checks but stated on its own.
    SpanTooSmall { header: Header },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RulerCount { expected, found } => {
                write!(f, "expected {expected} rulers, found {found}")
            }
            Violation::MarkCount { ruler, found } => {
                write!(f, "ruler {} has {found} marks", ruler + 1)
            }
            Violation::MarkOutOfRange { ruler, mark } => {
                write!(f, "ruler {} has mark {mark} outside [1, n]", ruler + 1)
            }
            Violation::DuplicateDifference { ruler, value, first, second } => write!(
                f,
                "ruler {} repeats difference {value}: {}-{} and {}-{}",
                ruler + 1,
                first.1,
                first.0,
                second.1,
                second.0
            ),
            Violation::Overlap { first, second, mark } => {
                write!(f, "rulers {} and {} share mark {mark}", first + 1, second + 1)
            }
            Violation::SpanTooSmall { header } => {
                write!(f, "header {header} has I*J > n")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DgrSystem {
    /// Assembles a system and rejects it unless it verifies.
    pub fn new(header: Header, rulers: Vec<Ruler>) -> Result<Self, ConstructionError> {
        let s = DgrSystem { header, rulers };
        let report = s.verify();
        if report.is_valid() {
            Ok(s)
        } else {
            Err(ConstructionError::InvalidInput(report))
        }
    }

    /// Assembles a system without checking anything.
    pub fn from_parts(header: Header, rulers: Vec<Ruler>) -> Self {
        DgrSystem { header, rulers }
    }

    /// The system with no rulers and span zero, for `J` marks.
    pub fn empty(j: u32) -> Self {
        DgrSystem { header: Header::new(0, j, 0), rulers: Vec::new() }
    }

    pub fn header(&self) -> Header {
        self.header
    }

    pub fn i(&self) -> u32 {
        self.header.i
    }

    pub fn j(&self) -> u32 {
        self.header.j
    }

    pub fn n(&self) -> u32 {
        self.header.n
    }

    pub fn rulers(&self) -> &[Ruler] {
        &self.rulers
    }

    pub fn into_rulers(self) -> Vec<Ruler> {
        self.rulers
    }

    /// Checks every defining property and lists all violations found.
    pub fn verify(&self) -> ValidationReport {
        let Header { i, j, n } = self.header;
        let mut violations = Vec::new();
        if u64::from(i) * u64::from(j) > u64::from(n) {
            violations.push(Violation::SpanTooSmall { header: self.header });
        }
        if self.rulers.len() != i as usize {
            violations.push(Violation::RulerCount { expected: i, found: self.rulers.len() });
        }
        for (idx, r) in self.rulers.iter().enumerate() {
            if r.len() != j as usize {
                violations.push(Violation::MarkCount { ruler: idx, found: r.len() });
            }
            for &m in r.marks() {
                if m < 1 || m > n {
                    violations.push(Violation::MarkOutOfRange { ruler: idx, mark: m });
                }
            }
            for (value, first, second) in r.collisions() {
                violations.push(Violation::DuplicateDifference { ruler: idx, value, first, second });
            }
        }
        // Owner of each mark; marks out of range are already reported.
        let mut owner: alloc::collections::BTreeMap<u32, usize> = Default::default();
        for (idx, r) in self.rulers.iter().enumerate() {
            for &m in r.marks() {
                if let Some(&prev) = owner.get(&m) {
                    violations.push(Violation::Overlap { first: prev, second: idx, mark: m });
                } else {
                    owner.insert(m, idx);
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_valid()
    }

    /// Sorted union of all marks.
    pub fn union(&self) -> Vec<u32> {
        let mut u: Vec<u32> = self.rulers.iter().flat_map(|r| r.marks().iter().copied()).collect();
        u.sort_unstable();
        u
    }

    /// Applies `m ↦ n + 1 - m` to every mark; ruler order is kept.
    pub fn reflect(&self) -> Result<DgrSystem, RulerError> {
        let axis = self.header.n + 1;
        let rulers = self.rulers.iter().map(|r| r.reflect(axis)).collect::<Result<_, _>>()?;
        Ok(DgrSystem { header: self.header, rulers })
    }

    /// Every maximal run of unoccupied positions inside `[1, n]`, ordered by `t`.
    /// Runs touching 1 or `n` are included.
    pub fn gaps(&self) -> Vec<Gap> {
        let n = self.header.n;
        let mut occupied = alloc::vec![false; n as usize + 2];
        for r in &self.rulers {
            for &m in r.marks() {
                if (1..=n).contains(&m) {
                    occupied[m as usize] = true;
                }
            }
        }
        let mut gaps = Vec::new();
        let mut v = 1;
        while v <= n {
            if occupied[v as usize] {
                v += 1;
                continue;
            }
            let start = v;
            while v <= n && !occupied[v as usize] {
                v += 1;
            }
            gaps.push(Gap { t: start - 1, w: v - start });
        }
        gaps
    }

    /// The widest gap; ties go to the smallest `t`.
    pub fn largest_gap(&self) -> Option<Gap> {
        self.gaps().into_iter().fold(None, |best: Option<Gap>, g| match best {
            Some(b) if b.w >= g.w => Some(b),
            _ => Some(g),
        })
    }

    /// Rulers sorted by minimum mark; of the system and its reflection, the
    /// one with the lexicographically smaller union is returned (ties fall
    /// back to comparing the sorted ruler lists).
    pub fn canonical_form(&self) -> DgrSystem {
        let mut plain = self.clone();
        plain.rulers.sort();
        let Ok(mut mirrored) = self.reflect() else {
            return plain;
        };
        mirrored.rulers.sort();
        let key = |s: &DgrSystem| (s.union(), s.rulers.clone());
        if key(&mirrored) < key(&plain) {
            mirrored
        } else {
            plain
        }
    }
}

impl fmt::Display for DgrSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.header)?;
        for (i, r) in self.rulers.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{{{}}}", r)?;
        }
        f.write_str("}")
    }
}
