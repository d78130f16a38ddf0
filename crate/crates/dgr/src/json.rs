//! JSON documents written beside text outputs. Every document carries
//! `format_version`.

use std::collections::BTreeMap;

use dgr_core::bounds::{BoundsTable, CellId, FactId, RuleApplication};
use dgr_core::constructions::ConstructionTrace;
use dgr_core::search::SearchStats;
use dgr_core::{DgrSystem, Header, Ruler};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeaderJson {
    pub i: u32,
    pub j: u32,
    pub n: u32,
}

impl From<Header> for HeaderJson {
    fn from(h: Header) -> Self {
        HeaderJson { i: h.i, j: h.j, n: h.n }
    }
}

impl From<HeaderJson> for Header {
    fn from(h: HeaderJson) -> Self {
        Header::new(h.i, h.j, h.n)
    }
}

/// A system as a header plus mark lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub header: HeaderJson,
    pub rulers: Vec<Vec<u32>>,
}

impl From<&DgrSystem> for SystemJson {
    fn from(s: &DgrSystem) -> Self {
        SystemJson { header: s.header().into(), rulers: s.rulers().iter().map(|r| r.marks().to_vec()).collect() }
    }
}

impl SystemJson {
    /// Unverified; rulers must ascend.
    pub fn to_system(&self) -> Result<DgrSystem, dgr_core::RulerError> {
        let rulers = self.rulers.iter().map(|m| Ruler::from_sorted(m.clone())).collect::<Result<_, _>>()?;
        Ok(DgrSystem::from_parts(self.header.into(), rulers))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub format_version: u32,
    pub rule: String,
    pub case: Option<String>,
    pub params: BTreeMap<String, u64>,
    pub input_headers: Vec<HeaderJson>,
    pub output_header: HeaderJson,
}

impl From<&ConstructionTrace> for TraceJson {
    fn from(t: &ConstructionTrace) -> Self {
        TraceJson {
            format_version: FORMAT_VERSION,
            rule: t.rule.name().to_string(),
            case: t.case.map(|c| c.name().to_string()),
            params: t.params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            input_headers: t.inputs.iter().map(|&h| h.into()).collect(),
            output_header: t.output.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchJson {
    pub format_version: u32,
    pub i: u32,
    pub j: u32,
    /// The instance searched, or the last `n` tried by a minimisation.
    pub n: u32,
    pub mode: String,
    pub status: String,
    pub value: Option<u32>,
    pub refuted_below: Option<u32>,
    pub nodes: u64,
    pub max_depth: u32,
    pub threads: usize,
    pub elapsed_ms: u64,
    pub witness: Option<SystemJson>,
    pub witness_ref: Option<String>,
}

impl SearchJson {
    pub fn stats(&self) -> SearchStats {
        SearchStats { nodes: self.nodes, max_depth: self.max_depth }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactJson {
    pub id: usize,
    pub i: u32,
    pub j: u32,
    pub quantity: String,
    pub value: u32,
    pub rule: String,
    pub antecedents: Vec<usize>,
    pub constructive: bool,
    pub params: BTreeMap<String, u32>,
}

impl From<&RuleApplication> for FactJson {
    fn from(f: &RuleApplication) -> Self {
        FactJson {
            id: f.id.0,
            i: f.cell.i,
            j: f.cell.j,
            quantity: f.quantity.name().to_string(),
            value: f.value,
            rule: f.rule.name().to_string(),
            antecedents: f.antecedents.iter().map(|a| a.0).collect(),
            constructive: f.constructive,
            params: f.params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub i: u32,
    pub j: u32,
    pub h_lower: u32,
    pub h_upper: Option<u32>,
    pub exact: bool,
    pub y_lower: u32,
    pub y_upper: Option<u32>,
    /// The chains behind `h_lower` and `h_upper`, antecedents first.
    pub provenance: Vec<FactJson>,
    pub witness_ref: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub format_version: u32,
    pub max_i: u32,
    pub max_j: u32,
    pub cells: Vec<CellJson>,
}

fn chain(table: &BoundsTable, roots: &[FactId]) -> Vec<FactJson> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &r in roots {
        for f in table.provenance(r) {
            if seen.insert(f.id) {
                out.push(f.into());
            }
        }
    }
    out
}

impl TableJson {
    /// `witness_refs` maps cells to stored witness names.
    pub fn from_table(table: &BoundsTable, witness_refs: &BTreeMap<CellId, String>) -> Self {
        let cells = table
            .cells()
            .map(|c| {
                let mut roots = vec![c.h_lower_fact];
                roots.extend(c.h_upper_fact);
                CellJson {
                    i: c.cell.i,
                    j: c.cell.j,
                    h_lower: c.h_lower,
                    h_upper: c.h_upper,
                    exact: c.is_exact(),
                    y_lower: c.y_lower,
                    y_upper: c.y_upper,
                    provenance: chain(table, &roots),
                    witness_ref: witness_refs.get(&c.cell).cloned(),
                }
            })
            .collect();
        TableJson { format_version: FORMAT_VERSION, max_i: table.max_i(), max_j: table.max_j(), cells }
    }
}

/// Exact values with witnesses, accepted by `bounds --seed-from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub format_version: u32,
    pub seeds: Vec<SystemJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingerJson {
    pub format_version: u32,
    pub q: u32,
    pub modulus: u32,
    pub difference_set: Vec<u32>,
    pub ruler: Vec<u32>,
    pub length: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub format_version: u32,
    pub header: HeaderJson,
    pub valid: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub format_version: u32,
    pub conjecture: u32,
    pub status: String,
    pub violations: usize,
    pub entries: Vec<serde_json::Value>,
    pub stats: Option<SearchJson>,
}
