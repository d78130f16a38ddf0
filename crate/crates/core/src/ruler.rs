//! Single Golomb rulers and their difference structure.

use alloc::vec::Vec;
use core::fmt;

use crate::error::RulerError;

/// A repeated difference: `(value, (lo, hi), (lo', hi'))`.
pub type Collision = (u32, (u32, u32), (u32, u32));

/// A set of distinct non-negative marks, stored in strictly increasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Ruler {
    marks: Vec<u32>,
}

/// One positive difference `marks[hi] - marks[lo]` together with whether
/// the same value occurs for some other pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Difference {
    pub value: u32,
    pub lo: u32,
    pub hi: u32,
    pub repeated: bool,
}

impl Ruler {
    /// Builds a ruler from marks in any order. Duplicates are rejected.
    pub fn new(mut marks: Vec<u32>) -> Result<Self, RulerError> {
        marks.sort_unstable();
        if let Some(w) = marks.windows(2).find(|w| w[0] == w[1]) {
            return Err(RulerError::DuplicateMark(w[0]));
        }
        Ok(Ruler { marks })
    }

    /// Builds a ruler from marks that are already strictly increasing.
    pub fn from_sorted(marks: Vec<u32>) -> Result<Self, RulerError> {
        if let Some(w) = marks.windows(2).find(|w| w[0] >= w[1]) {
            return if w[0] == w[1] {
                Err(RulerError::DuplicateMark(w[0]))
            } else {
                Err(RulerError::NotAscending(w[0], w[1]))
            };
        }
        Ok(Ruler { marks })
    }

    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn first_mark(&self) -> Option<u32> {
        self.marks.first().copied()
    }

    pub fn last_mark(&self) -> Option<u32> {
        self.marks.last().copied()
    }

    /// `max - min`, zero for rulers with fewer than two marks.
    pub fn length(&self) -> u32 {
        match (self.first_mark(), self.last_mark()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn contains(&self, mark: u32) -> bool {
        self.marks.binary_search(&mark).is_ok()
    }

    pub fn into_marks(self) -> Vec<u32> {
        self.marks
    }

    /// True iff all pairwise differences are distinct.
    pub fn is_golomb(&self) -> bool {
        let len = self.length() as usize;
        if self.marks.len() < 3 {
            return true;
        }
        let mut seen = alloc::vec![false; len + 1];
        for (i, &hi) in self.marks.iter().enumerate() {
            for &lo in &self.marks[..i] {
                let d = (hi - lo) as usize;
                if seen[d] {
                    return false;
                }
                seen[d] = true;
            }
        }
        true
    }

    /// All `a_j - a_i` for `i < j`, ordered by `(i, j)`, each flagged when
    /// its value occurs more than once.
    pub fn difference_list(&self) -> Vec<Difference> {
        let mut out = Vec::with_capacity(self.marks.len() * self.marks.len().saturating_sub(1) / 2);
        for (i, &lo) in self.marks.iter().enumerate() {
            for &hi in &self.marks[i + 1..] {
                out.push(Difference { value: hi - lo, lo, hi, repeated: false });
            }
        }
        let mut counts = alloc::vec![0u32; self.length() as usize + 1];
        for d in &out {
            counts[d.value as usize] += 1;
        }
        for d in &mut out {
            d.repeated = counts[d.value as usize] > 1;
        }
        out
    }

    /// Every pair of mark pairs sharing a difference.
    pub fn collisions(&self) -> Vec<Collision> {
        let diffs = self.difference_list();
        let mut out = Vec::new();
        for (i, a) in diffs.iter().enumerate() {
            if !a.repeated {
                continue;
            }
            for b in &diffs[i + 1..] {
                if b.value == a.value {
                    out.push((a.value, (a.lo, a.hi), (b.lo, b.hi)));
                }
            }
        }
        out
    }

    pub fn translate(&self, delta: i64) -> Result<Ruler, RulerError> {
        if let Some(lo) = self.first_mark() {
            let shifted = i64::from(lo) + delta;
            let top = i64::from(self.last_mark().unwrap_or(lo)) + delta;
            if shifted < 0 {
                return Err(RulerError::NegativeMark(shifted));
            }
            if top > i64::from(u32::MAX) {
                return Err(RulerError::Overflow);
            }
        }
        Ok(Ruler {
            marks: self.marks.iter().map(|&m| (i64::from(m) + delta) as u32).collect(),
        })
    }

    /// Mirror image `m ↦ axis - m`. Requires every mark ≤ `axis`.
    pub fn reflect(&self, axis: u32) -> Result<Ruler, RulerError> {
        if let Some(hi) = self.last_mark() {
            if hi > axis {
                return Err(RulerError::NegativeMark(i64::from(axis) - i64::from(hi)));
            }
        }
        Ok(Ruler { marks: self.marks.iter().rev().map(|&m| axis - m).collect() })
    }
}

impl fmt::Display for Ruler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.marks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for Ruler {
    type Error = RulerError;

    fn try_from(marks: Vec<u32>) -> Result<Self, Self::Error> {
        Ruler::new(marks)
    }
}
