//! Typed four-block families and the family file format.
//!
//! A family record is five lines:
//!
//! ```text
//! v k1 k2 k3 k4 lambda tags
//! residues of block 1
//! residues of block 2
//! residues of block 3
//! residues of block 4
//! ```
//!
//! `tags` is a positional string over `k` (skew) and `s` (symmetric), e.g.
//! `kkss`. Residues are comma separated; an empty line is the empty block.
//! Lines starting with `#` are comments and a line `@label` names the next
//! record. Files may hold any number of records.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::blockgen::parse_residues;
use crate::error::{Error, Result};
use crate::params::{GsParamSet, SymmetryType, Tag};
use crate::zv::CyclicSubset;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedFamily {
    pub params: GsParamSet,
    pub blocks: [CyclicSubset; 4],
    pub tags: [Tag; 4],
}

impl TypedFamily {
    /// Checks sizes against `params` and tags against the blocks. The
    /// difference property itself is checked by [`crate::verify`].
    pub fn new(params: GsParamSet, blocks: [CyclicSubset; 4], tags: [Tag; 4]) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if b.v() != params.v {
                return Err(Error::Parameters(format!(
                    "block {} lives in Z_{}, parameters say v = {}",
                    i + 1,
                    b.v(),
                    params.v
                )));
            }
            if b.cardinality() != params.k[i] {
                return Err(Error::Parameters(format!(
                    "block {} has {} elements, parameters say {}",
                    i + 1,
                    b.cardinality(),
                    params.k[i]
                )));
            }
            if !tag_holds(b, tags[i]) {
                return Err(Error::TagMismatch {
                    index: i + 1,
                    tag: tags[i].letter(),
                });
            }
        }
        Ok(TypedFamily {
            params,
            blocks,
            tags,
        })
    }

    /// Parameters are taken from the block sizes and tags from the blocks.
    pub fn from_blocks(blocks: [CyclicSubset; 4]) -> Result<Self> {
        let v = blocks[0].v();
        let k = blocks.map(|b| b.cardinality());
        let lambda = k
            .iter()
            .sum::<u32>()
            .checked_sub(v)
            .ok_or_else(|| Error::Parameters("block sizes sum to less than v".into()))?;
        let params = GsParamSet::new(v, k, lambda)?;
        let mut tags = [Tag::Symmetric; 4];
        for (i, b) in blocks.iter().enumerate() {
            tags[i] = infer_tag(b).ok_or(Error::TagMismatch {
                index: i + 1,
                tag: '?',
            })?;
        }
        TypedFamily::new(params, blocks, tags)
    }

    pub fn v(&self) -> u32 {
        self.params.v
    }

    pub fn symmetry_type(&self) -> Option<SymmetryType> {
        SymmetryType::from_tags(&self.tags)
    }

    pub fn tag_string(&self) -> String {
        self.tags.iter().map(|t| t.letter()).collect()
    }
}

pub(crate) fn tag_holds(b: &CyclicSubset, tag: Tag) -> bool {
    match tag {
        Tag::Skew => b.is_skew(),
        Tag::Symmetric => b.is_symmetric(),
    }
}

/// Skew wins when a block is both (only possible for `v = 1`).
pub fn infer_tag(b: &CyclicSubset) -> Option<Tag> {
    if b.is_skew() {
        Some(Tag::Skew)
    } else if b.is_symmetric() {
        Some(Tag::Symmetric)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRecord {
    pub label: Option<String>,
    pub family: TypedFamily,
}

pub fn format_family(f: &TypedFamily) -> String {
    let p = &f.params;
    let mut out = String::new();
    writeln!(
        out,
        "{} {} {} {} {} {} {}",
        p.v,
        p.k[0],
        p.k[1],
        p.k[2],
        p.k[3],
        p.lambda,
        f.tag_string()
    )
    .unwrap();
    for b in &f.blocks {
        out.push_str(&b.residues_string());
        out.push('\n');
    }
    out
}

pub fn format_records(records: &[FamilyRecord]) -> String {
    let mut out = String::new();
    for r in records {
        if let Some(l) = &r.label {
            writeln!(out, "@{l}").unwrap();
        }
        out.push_str(&format_family(&r.family));
    }
    out
}

pub fn format_families(families: &[TypedFamily]) -> String {
    families.iter().map(format_family).collect()
}

/// Parses every record in `text`; `name` is used in error messages.
pub fn parse_records(text: &str, name: &str) -> Result<Vec<FamilyRecord>> {
    let mut out = Vec::new();
    let mut label: Option<String> = None;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim_start().starts_with('#'));
    while let Some((lineno, line)) = lines.next() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(l) = line.strip_prefix('@') {
            label = Some(l.trim().to_string());
            continue;
        }
        let (params, tags) = parse_header(line, name, lineno)?;
        let mut blocks = [CyclicSubset::empty(params.v); 4];
        for (i, slot) in blocks.iter_mut().enumerate() {
            let (bl, text) = lines
                .next()
                .ok_or_else(|| Error::parse(name, lineno, format!("record ends before block {}", i + 1)))?;
            let b = parse_residues(params.v, text.trim().trim_end_matches(',').trim_end_matches('.'))
                .map_err(|m| Error::parse(name, bl, m))?;
            if b.cardinality() != params.k[i] {
                return Err(Error::parse(
                    name,
                    bl,
                    format!("block {} has {} elements, header says {}", i + 1, b.cardinality(), params.k[i]),
                ));
            }
            if !tag_holds(&b, tags[i]) {
                let what = match tags[i] {
                    Tag::Skew => "skew",
                    Tag::Symmetric => "symmetric",
                };
                return Err(Error::parse(
                    name,
                    bl,
                    format!("block {} is declared {what} but is not", i + 1),
                ));
            }
            *slot = b;
        }
        let family = TypedFamily::new(params, blocks, tags)?;
        out.push(FamilyRecord {
            label: label.take(),
            family,
        });
    }
    Ok(out)
}

fn parse_header(line: &str, name: &str, lineno: usize) -> Result<(GsParamSet, [Tag; 4])> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 7 {
        return Err(Error::parse(
            name,
            lineno,
            "header must be `v k1 k2 k3 k4 lambda tags`",
        ));
    }
    let mut nums = [0u32; 6];
    for (slot, f) in nums.iter_mut().zip(&fields[..6]) {
        *slot = f
            .parse()
            .map_err(|_| Error::parse(name, lineno, format!("bad number '{f}'")))?;
    }
    let v = nums[0];
    if v == 0 || v > crate::zv::MAX_ORDER {
        return Err(Error::parse(name, lineno, format!("unsupported order {v}")));
    }
    let params = GsParamSet::new(v, [nums[1], nums[2], nums[3], nums[4]], nums[5])
        .map_err(|e| Error::parse(name, lineno, e.to_string()))?;
    let tag_chars: Vec<char> = fields[6].chars().collect();
    if tag_chars.len() != 4 {
        return Err(Error::parse(name, lineno, "tags must have four letters"));
    }
    let mut tags = [Tag::Symmetric; 4];
    for (slot, c) in tags.iter_mut().zip(tag_chars) {
        *slot = Tag::from_letter(c)
            .ok_or_else(|| Error::parse(name, lineno, format!("bad tag '{c}'")))?;
    }
    Ok((params, tags))
}

pub fn read_records(path: &Path) -> Result<Vec<FamilyRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records(&text, &path.display().to_string())
}

pub fn read_families(path: &Path) -> Result<Vec<TypedFamily>> {
    Ok(read_records(path)?.into_iter().map(|r| r.family).collect())
}

/// Reads a file that must hold exactly one family.
pub fn read_family(path: &Path) -> Result<TypedFamily> {
    let mut recs = read_records(path)?;
    match recs.len() {
        1 => Ok(recs.pop().unwrap().family),
        n => Err(Error::parse(
            &path.display().to_string(),
            1,
            format!("expected one family, found {n}"),
        )),
    }
}

pub fn write_family(path: &Path, f: &TypedFamily) -> Result<()> {
    write_text(path, &format_family(f))
}

pub fn write_families(path: &Path, fs: &[TypedFamily]) -> Result<()> {
    write_text(path, &format_families(fs))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const V3: &str = "# the smallest kkss family\n3 1 1 2 0 1 kkss\n1\n1\n1,2\n\n";

    #[test]
    fn parse_and_format() {
        let recs = parse_records(V3, "v3").unwrap();
        assert_eq!(recs.len(), 1);
        let f = &recs[0].family;
        assert_eq!(f.params.k, [1, 1, 2, 0]);
        assert_eq!(f.blocks[3], CyclicSubset::empty(3));
        assert_eq!(f.symmetry_type(), Some(SymmetryType::Kkss));
        let text = format_family(f);
        assert_eq!(text, "3 1 1 2 0 1 kkss\n1\n1\n1,2\n\n");
        assert_eq!(parse_records(&text, "again").unwrap()[0].family, *f);
    }

    #[test]
    fn labels_and_multiple_records() {
        let text = format!("@first\n{V3}@second\n{V3}{V3}");
        let recs = parse_records(&text, "m").unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].label.as_deref(), Some("first"));
        assert_eq!(recs[1].label.as_deref(), Some("second"));
        assert_eq!(recs[2].label, None);
        assert_eq!(parse_records(&format_records(&recs), "m").unwrap(), recs);
    }

    #[test]
    fn duplicate_residue_reports_line() {
        let bad = "3 1 1 2 0 1 kkss\n1\n1\n1,1\n\n";
        match parse_records(bad, "dup") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tag_contradiction_is_rejected() {
        // {1,2} in Z_3 is symmetric, not skew
        let bad = "3 1 1 2 0 1 kksk\n1\n1\n1,2\n\n";
        assert!(matches!(parse_records(bad, "t"), Err(Error::Parse { line: 5, .. })));
        let bad = "3 1 1 2 0 1 kkks\n1\n1\n1,2\n\n";
        match parse_records(bad, "t") {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("skew"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_errors() {
        assert!(parse_records("3 1 1 2 0 kkss\n", "h").is_err());
        assert!(parse_records("3 1 1 2 0 2 kkss\n1\n1\n1,2\n\n", "h").is_err());
        assert!(parse_records("3 1 1 2 0 1 kxss\n1\n1\n1,2\n\n", "h").is_err());
        assert!(parse_records("3 1 1 2 0 1 kkss\n1\n1\n", "h").is_err());
        assert!(parse_records("3 1 1 2 0 1 kkss\n1\n2,0\n1,2\n\n", "h").is_err());
    }

    #[test]
    fn from_blocks_infers_tags() {
        let b = |e: &[u32]| CyclicSubset::new(7, e).unwrap();
        let f = TypedFamily::from_blocks([b(&[1, 2, 4]), b(&[1, 2, 4]), b(&[1, 2, 4]), b(&[0])]).unwrap();
        assert_eq!(f.tag_string(), "kkks");
        assert_eq!(f.params, GsParamSet::new(7, [3, 3, 3, 1], 3).unwrap());
        assert!(TypedFamily::from_blocks([b(&[1, 2]), b(&[1, 2, 4]), b(&[1, 2, 4]), b(&[0])]).is_err());
    }
}
