use core::fmt;

use crate::bounds::{CellId, FactId};
use crate::system::{Gap, Header, ValidationReport};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RulerError {
    DuplicateMark(u32),
    NotAscending(u32, u32),
    /// A shift or reflection would produce this negative mark.
    NegativeMark(i64),
    Overflow,
}

impl fmt::Display for RulerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RulerError::DuplicateMark(m) => write!(f, "duplicate mark {m}"),
            RulerError::NotAscending(a, b) => write!(f, "marks not ascending: {a} before {b}"),
            RulerError::NegativeMark(m) => write!(f, "mark would become negative ({m})"),
            RulerError::Overflow => f.write_str("mark overflows u32"),
        }
    }
}

impl core::error::Error for RulerError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConstructionError {
    /// Input system does not verify.
    InvalidInput(ValidationReport),
    MarkCountMismatch { expected: u32, found: u32 },
    /// Extension needs the J-mark system to span at least as far as the (J-1)-mark one.
    SpanOrder { na: u32, nb: u32 },
    GapNotEmpty(Gap),
    GapOutOfRange { gap: Gap, n: u32 },
    /// The gap is wider than the system merged into it.
    GapTooWide { gap: Gap, m: u32 },
    /// The ruler handed to the shift construction does not end at `n`.
    RulerMaxMismatch { max: Option<u32>, n: u32 },
    NotGolomb,
    MultipleCommonMarks,
    /// The built system failed verification. Always a bug.
    OutputInvalid { header: Header, report: ValidationReport },
    Ruler(RulerError),
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::InvalidInput(r) => {
                write!(f, "input system is not a DGR ({} violations", r.violations.len())?;
                if let Some(v) = r.violations.first() {
                    write!(f, "; first: {v}")?;
                }
                f.write_str(")")
            }
            ConstructionError::MarkCountMismatch { expected, found } => {
                write!(f, "mark count mismatch: expected J={expected}, found J={found}")
            }
            ConstructionError::SpanOrder { na, nb } => {
                write!(f, "extension needs n_a >= n_b, got {na} < {nb}")
            }
            ConstructionError::GapNotEmpty(g) => {
                write!(f, "positions {}..={} are not all empty", g.t + 1, g.t + g.w)
            }
            ConstructionError::GapOutOfRange { gap, n } => {
                write!(f, "gap (t={}, w={}) does not fit in [1, {n}]", gap.t, gap.w)
            }
            ConstructionError::GapTooWide { gap, m } => {
                write!(f, "gap width {} exceeds the merged span {m}", gap.w)
            }
            ConstructionError::RulerMaxMismatch { max, n } => match max {
                Some(m) => write!(f, "ruler ends at {m}, expected {n}"),
                None => f.write_str("ruler is empty"),
            },
            ConstructionError::NotGolomb => f.write_str("input ruler is not a Golomb ruler"),
            ConstructionError::MultipleCommonMarks => {
                f.write_str("ruler and its unit shift share more than one mark")
            }
            ConstructionError::OutputInvalid { header, report } => write!(
                f,
                "internal error: constructed {header} system failed verification ({} violations)",
                report.violations.len()
            ),
            ConstructionError::Ruler(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for ConstructionError {}

impl From<RulerError> for ConstructionError {
    fn from(e: RulerError) -> Self {
        ConstructionError::Ruler(e)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldError {
    NotPrime(u32),
    NotPrimePower(u32),
    ZeroDegree,
    /// `p^k` exceeds the configured element limit.
    TooLarge { p: u32, k: u32, limit: u32 },
    ZeroHasNoOrder,
    ForeignElement,
    /// The Singer set failed its exhaustive difference check. Always a bug.
    VerificationFailed { q: u32 },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            FieldError::ZeroDegree => f.write_str("extension degree must be positive"),
            FieldError::TooLarge { p, k, limit } => {
                write!(f, "field {p}^{k} exceeds the limit of {limit} elements")
            }
            FieldError::ZeroHasNoOrder => f.write_str("zero has no multiplicative order"),
            FieldError::ForeignElement => f.write_str("element does not belong to this field"),
            FieldError::VerificationFailed { q } => {
                write!(f, "internal error: Singer set for q={q} is not a perfect difference set")
            }
        }
    }
}

impl core::error::Error for FieldError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoundsError {
    OutOfRegion(CellId),
    /// A seeded value is below the `I·J` floor.
    BelowFloor { cell: CellId, value: u32 },
    SeedConflict { cell: CellId, existing: u32, seeded: u32 },
    /// A seed witness does not verify or has the wrong header.
    BadWitness { cell: CellId },
    /// Upper bound fell below lower bound. Carries both provenance chains.
    Contradiction { cell: CellId, lower: FactId, upper: FactId, lower_value: u32, upper_value: u32 },
    NonConstructive { fact: FactId },
    MissingWitness { fact: FactId },
    Construction(ConstructionError),
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::OutOfRegion(c) => write!(f, "cell {c} lies outside the table"),
            BoundsError::BelowFloor { cell, value } => {
                write!(f, "seed {value} for {cell} is below I*J")
            }
            BoundsError::SeedConflict { cell, existing, seeded } => {
                write!(f, "seed {seeded} for {cell} conflicts with {existing}")
            }
            BoundsError::BadWitness { cell } => write!(f, "seed witness for {cell} does not verify"),
            BoundsError::Contradiction { cell, lower_value, upper_value, .. } => write!(
                f,
                "contradiction at {cell}: upper bound {upper_value} < lower bound {lower_value}"
            ),
            BoundsError::NonConstructive { fact } => {
                write!(f, "fact #{} has a non-constructive step in its chain", fact.0)
            }
            BoundsError::MissingWitness { fact } => {
                write!(f, "fact #{} needs a stored witness that is absent", fact.0)
            }
            BoundsError::Construction(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for BoundsError {}

impl From<ConstructionError> for BoundsError {
    fn from(e: ConstructionError) -> Self {
        BoundsError::Construction(e)
    }
}
