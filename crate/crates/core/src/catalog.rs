//! Embedded reference data: the published class representatives for
//! `33 <= v <= 49` and the existence table for odd `v < 50`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::family::{parse_records, TypedFamily};
use crate::params::{GsParamSet, SymmetryType};

const CATALOG: &str = include_str!("../data/catalog.txt");
const TABLE1: &str = include_str!("../data/table1.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    /// `v-type-letter`, e.g. `33-kkss-a`.
    pub label: String,
    pub symmetry_type: SymmetryType,
    pub family: TypedFamily,
}

impl CatalogEntry {
    pub fn v(&self) -> u32 {
        self.family.v()
    }

    pub fn params(&self) -> GsParamSet {
        self.family.params
    }
}

/// All embedded families in listing order.
pub fn catalog() -> Vec<CatalogEntry> {
    parse_catalog(CATALOG).expect("embedded catalog is well formed")
}

pub fn catalog_entry(label: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.label == label)
}

fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    parse_records(text, "catalog")?
        .into_iter()
        .map(|r| {
            let label = r
                .label
                .ok_or_else(|| Error::Parameters("catalog record without a label".into()))?;
            let symmetry_type = r.family.symmetry_type().ok_or_else(|| {
                Error::Parameters(format!("{label}: tags {} are not a search type", r.family.tag_string()))
            })?;
            Ok(CatalogEntry {
                label,
                symmetry_type,
                family: r.family,
            })
        })
        .collect()
}

/// Existence verdict for one parameter set and symmetry type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    /// The parameter set has no room for the type.
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::NotApplicable => "x",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "yes" => Ok(Verdict::Yes),
            "no" => Ok(Verdict::No),
            "x" => Ok(Verdict::NotApplicable),
            _ => Err(Error::Parameters(format!("unknown verdict '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub params: GsParamSet,
    /// Indexed like [`SymmetryType::ALL`]: ksss, kkss, kkks.
    pub verdicts: [Verdict; 3],
}

impl Table1Row {
    pub fn verdict(&self, t: SymmetryType) -> Verdict {
        self.verdicts[SymmetryType::ALL.iter().position(|&x| x == t).expect("listed")]
    }
}

/// The published existence table, one row per parameter set.
pub fn table1() -> Vec<Table1Row> {
    parse_table1(TABLE1).expect("embedded table is well formed")
}

fn parse_table1(text: &str) -> Result<Vec<Table1Row>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 9 {
            return Err(Error::parse("table1", i + 1, "expected 9 fields"));
        }
        let n: Vec<u32> = f[..6]
            .iter()
            .map(|x| x.parse().map_err(|_| Error::parse("table1", i + 1, format!("bad number '{x}'"))))
            .collect::<Result<_>>()?;
        let params = GsParamSet::new(n[0], [n[1], n[2], n[3], n[4]], n[5])?;
        let verdicts = [f[6].parse()?, f[7].parse()?, f[8].parse()?];
        out.push(Table1Row { params, verdicts });
    }
    Ok(out)
}
