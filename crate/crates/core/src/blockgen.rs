//! Candidate block generation (the data collection phase).
//!
//! Every symmetric or skew block of the requested size is generated, blocks
//! whose power spectral density exceeds `4v` at some nonzero frequency are
//! dropped, and each survivor is stored with its difference multiplicities.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::Tag;
use crate::zv::{CyclicSubset, DifferenceRow, SpectrumTable};

/// Slack applied on the accepting side of the PSD test.
pub fn psd_tolerance(v: u32) -> f64 {
    1e-6 * 4.0 * v as f64
}

/// Bound used for GS searches: at each nonzero frequency the four PSDs sum
/// to `4v`.
pub fn gs_psd_bound(v: u32) -> f64 {
    4.0 * v as f64
}

fn check_odd(v: u32) -> Result<()> {
    if v.is_multiple_of(2) {
        return Err(Error::EvenOrder(v));
    }
    if v > crate::zv::MAX_ORDER {
        return Err(Error::Modulus(v));
    }
    Ok(())
}

/// Mask with bits `i` and `v - i` set for every pair index bit `i - 1` in
/// `choice`.
fn pairs_to_mask(v: u32, choice: u64) -> u64 {
    let mut mask = 0u64;
    let mut c = choice;
    while c != 0 {
        let i = c.trailing_zeros() + 1;
        c &= c - 1;
        mask |= 1 << i | 1 << (v - i);
    }
    mask
}

/// Next integer with the same popcount (Gosper).
#[inline]
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// All symmetric subsets of Z_v of size `k`: unions of `floor(k/2)` pairs
/// `{i, -i}`, plus `0` when `k` is odd.
pub fn gen_symmetric(v: u32, k: u32) -> Result<impl Iterator<Item = CyclicSubset>> {
    check_odd(v)?;
    let m = (v - 1) / 2;
    let j = k / 2;
    if k > v || j > m {
        return Err(Error::SymmetricSize { v, k });
    }
    let zero = (k % 2) as u64;
    let limit = 1u64 << m;
    let mut next = Some((1u64 << j) - 1);
    Ok(std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let n = next_combination(cur);
            (n < limit).then_some(n)
        };
        Some(CyclicSubset::from_mask(v, pairs_to_mask(v, cur) | zero))
    }))
}

/// All skew subsets of Z_v: one of `{i, v - i}` for each `i = 1..(v-1)/2`.
pub fn gen_skew(v: u32) -> Result<impl Iterator<Item = CyclicSubset>> {
    check_odd(v)?;
    if v < 3 {
        return Err(Error::Parameters(format!("no skew subsets in Z_{v}")));
    }
    let m = (v - 1) / 2;
    Ok((0..1u64 << m).map(move |choice| {
        let mut mask = 0u64;
        for i in 1..=m {
            let e = if choice >> (i - 1) & 1 == 1 { v - i } else { i };
            mask |= 1 << e;
        }
        CyclicSubset::from_mask(v, mask)
    }))
}

pub fn psd_filter(x: &CyclicSubset, bound: f64, eps: f64) -> bool {
    SpectrumTable::new(x.v()).max_psd(x) <= bound + eps
}

/// A candidate block with its difference multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateRow {
    pub block: CyclicSubset,
    pub row: DifferenceRow,
}

/// All candidate blocks of one kind and size, sorted by block.
#[derive(Clone, Debug, PartialEq)]
pub struct RowFile {
    pub v: u32,
    pub k: u32,
    pub kind: Tag,
    /// PSD bound the rows passed, `None` if unfiltered.
    pub bound: Option<f64>,
    pub rows: Vec<CandidateRow>,
}

impl RowFile {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of difference columns, `(v-1)/2`.
    pub fn columns(&self) -> usize {
        ((self.v - 1) / 2) as usize
    }
}

/// Generates every block of the given kind and size, optionally PSD filtered.
/// Skew blocks always have size `(v-1)/2`.
pub fn collect_rows(v: u32, k: u32, kind: Tag, filter: bool) -> Result<RowFile> {
    check_odd(v)?;
    let candidates: Vec<CyclicSubset> = match kind {
        Tag::Skew => {
            if k != (v - 1) / 2 {
                return Err(Error::Parameters(format!(
                    "skew blocks in Z_{v} have size {}, not {k}",
                    (v - 1) / 2
                )));
            }
            gen_skew(v)?.collect()
        }
        Tag::Symmetric => gen_symmetric(v, k)?.collect(),
    };
    let bound = filter.then(|| gs_psd_bound(v));
    let table = SpectrumTable::new(v);
    let eps = psd_tolerance(v);
    let mut rows: Vec<CandidateRow> = candidates
        .par_chunks(4096)
        .flat_map_iter(|chunk| {
            let table = &table;
            chunk.iter().filter_map(move |x| {
                if let Some(b) = bound {
                    if table.max_psd(x) > b + eps {
                        return None;
                    }
                }
                let row = x.difference_row().expect("odd order");
                Some(CandidateRow { block: *x, row })
            })
        })
        .collect();
    rows.sort_by_key(|a| a.block);
    Ok(RowFile {
        v,
        k,
        kind,
        bound,
        rows,
    })
}

fn kind_name(kind: Tag) -> &'static str {
    match kind {
        Tag::Skew => "skew",
        Tag::Symmetric => "symmetric",
    }
}

pub fn parse_kind(s: &str) -> Option<Tag> {
    match s {
        "skew" => Some(Tag::Skew),
        "symmetric" => Some(Tag::Symmetric),
        _ => None,
    }
}

/// Serializes a row file: header `v k kind bound`, then one
/// `residues|multiplicities` line per row.
pub fn format_row_file(file: &RowFile) -> String {
    let mut out = String::new();
    let bound = match file.bound {
        Some(b) => format!("{b}"),
        None => "none".to_string(),
    };
    writeln!(out, "{} {} {} {}", file.v, file.k, kind_name(file.kind), bound).unwrap();
    for r in &file.rows {
        out.push_str(&r.block.residues_string());
        out.push('|');
        for (i, c) in r.row.counts().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_row_file(path: &Path, file: &RowFile) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(format_row_file(file).as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub fn read_row_file(path: &Path) -> Result<RowFile> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_row_file(BufReader::new(f), &path.display().to_string())
}

/// Parses a row file, checking every row against its block.
pub fn parse_row_file<R: BufRead>(reader: R, name: &str) -> Result<RowFile> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| Error::io(name, e))?,
        None => return Err(Error::parse(name, 1, "empty row file")),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::parse(name, 1, "header must be `v k kind bound`"));
    }
    let num = |s: &str, what: &str| -> Result<u32> {
        s.parse()
            .map_err(|_| Error::parse(name, 1, format!("bad {what} '{s}'")))
    };
    let v = num(fields[0], "v")?;
    let k = num(fields[1], "k")?;
    if v % 2 == 0 || v > crate::zv::MAX_ORDER {
        return Err(Error::parse(name, 1, format!("unsupported order {v}")));
    }
    let kind = parse_kind(fields[2])
        .ok_or_else(|| Error::parse(name, 1, format!("bad kind '{}'", fields[2])))?;
    let bound = match fields[3] {
        "none" => None,
        b => Some(
            b.parse::<f64>()
                .map_err(|_| Error::parse(name, 1, format!("bad bound '{b}'")))?,
        ),
    };
    let cols = ((v - 1) / 2) as usize;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(name, e))?;
        if line.is_empty() {
            continue;
        }
        let (blk, counts) = line
            .split_once('|')
            .ok_or_else(|| Error::parse(name, lineno, "missing '|' separator"))?;
        let block = parse_residues(v, blk).map_err(|m| Error::parse(name, lineno, m))?;
        let counts: Vec<u8> = counts
            .split_whitespace()
            .map(|c| c.parse::<u8>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(name, lineno, "bad multiplicity"))?;
        if counts.len() != cols {
            return Err(Error::parse(
                name,
                lineno,
                format!("expected {cols} multiplicities, found {}", counts.len()),
            ));
        }
        if block.cardinality() != k {
            return Err(Error::parse(name, lineno, format!("block size is not {k}")));
        }
        let tag_ok = match kind {
            Tag::Skew => block.is_skew(),
            Tag::Symmetric => block.is_symmetric(),
        };
        if !tag_ok {
            return Err(Error::parse(name, lineno, format!("block is not {}", kind_name(kind))));
        }
        let row = block.difference_row().expect("odd order");
        if row.counts() != counts.as_slice() {
            return Err(Error::parse(name, lineno, "multiplicities do not match block"));
        }
        rows.push(CandidateRow { block, row });
    }
    Ok(RowFile {
        v,
        k,
        kind,
        bound,
        rows,
    })
}

/// Parses `a,b,c` (empty string for the empty set), rejecting duplicates.
pub(crate) fn parse_residues(v: u32, s: &str) -> std::result::Result<CyclicSubset, String> {
    let s = s.trim();
    let s = s.strip_prefix('[').unwrap_or(s);
    let s = s.strip_suffix(']').unwrap_or(s);
    if s.trim().is_empty() {
        return Ok(CyclicSubset::empty(v));
    }
    let mut elems = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let e: u32 = part
            .parse()
            .map_err(|_| format!("bad residue '{part}'"))?;
        elems.push(e);
    }
    CyclicSubset::new(v, &elems).map_err(|e| e.to_string())
}
