//! Elementary transformations of families, equivalence and classification.
//!
//! The transformations generate the group acting by
//! `X_i -> e_i * u * X_p(i) + g_i` with signs `e_i`, a unit `u`, translations
//! `g_i` and a permutation `p` of equal-size positions. [`canonical_form`]
//! is the minimum over the typed part of a family's orbit: for a fixed `u`
//! the per-block choices of sign and translation are independent, so each
//! block takes its least typed image and the blocks are then sorted.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{infer_tag, TypedFamily};
use crate::params::{GsParamSet, Tag};
use crate::zv::{units, CyclicSubset};

/// One elementary transformation. Block indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Translate { block: usize, g: u32 },
    Negate { block: usize },
    Dilate { u: u32 },
    Exchange { i: usize, j: usize },
}

/// Applies `t` to four blocks without regard to symmetry tags.
pub fn transform_blocks(blocks: [CyclicSubset; 4], t: Transform) -> Result<[CyclicSubset; 4]> {
    let mut out = blocks;
    let index = |b: usize| {
        if b < 4 {
            Ok(b)
        } else {
            Err(Error::Parameters(format!("block index {b} out of range")))
        }
    };
    match t {
        Transform::Translate { block, g } => {
            let b = index(block)?;
            out[b] = blocks[b].translate(g);
        }
        Transform::Negate { block } => {
            let b = index(block)?;
            out[b] = blocks[b].negate();
        }
        Transform::Dilate { u } => {
            for (o, b) in out.iter_mut().zip(&blocks) {
                *o = b.dilate(u)?;
            }
        }
        Transform::Exchange { i, j } => {
            let (i, j) = (index(i)?, index(j)?);
            if blocks[i].cardinality() != blocks[j].cardinality() {
                return Err(Error::IllegalExchange { i: i + 1, j: j + 1 });
            }
            out.swap(i, j);
        }
    }
    Ok(out)
}

/// Applies `t` and recomputes the tags. Fails if a block of the image is
/// neither skew nor symmetric.
pub fn apply_transform(f: &TypedFamily, t: Transform) -> Result<TypedFamily> {
    let blocks = transform_blocks(f.blocks, t)?;
    let mut tags = f.tags;
    for (i, b) in blocks.iter().enumerate() {
        tags[i] = infer_tag(b).ok_or(Error::TagMismatch {
            index: i + 1,
            tag: '?',
        })?;
    }
    TypedFamily::new(f.params, blocks, tags)
}

type KeyEntry = (Reverse<u32>, Tag, CyclicSubset);

/// Blocks sorted by size (descending), tag (skew first), then elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    lambda: u32,
    entries: [KeyEntry; 4],
}

impl CanonicalKey {
    fn from_entries(lambda: u32, mut entries: [KeyEntry; 4]) -> Self {
        entries.sort();
        CanonicalKey { lambda, entries }
    }

    pub fn blocks(&self) -> [CyclicSubset; 4] {
        self.entries.map(|e| e.2)
    }

    pub fn tags(&self) -> [Tag; 4] {
        self.entries.map(|e| e.1)
    }

    /// The key as a family, with parameters in descending size order.
    pub fn to_family(&self) -> Result<TypedFamily> {
        let blocks = self.blocks();
        let v = blocks[0].v();
        let params = GsParamSet::new(v, blocks.map(|b| b.cardinality()), self.lambda)?;
        TypedFamily::new(params, blocks, self.tags())
    }
}

fn entry(b: CyclicSubset, tag: Tag) -> KeyEntry {
    (Reverse(b.cardinality()), tag, b)
}

/// Least typed image of `x` under `x -> +-x + g`.
fn least_typed_image(x: CyclicSubset) -> KeyEntry {
    let mut best: Option<KeyEntry> = None;
    for y in [x, x.negate()] {
        for g in 0..x.v() {
            let z = y.translate(g);
            if let Some(tag) = infer_tag(&z) {
                let e = entry(z, tag);
                if best.as_ref().is_none_or(|b| e < *b) {
                    best = Some(e);
                }
            }
        }
    }
    // x itself is typed when it comes from a TypedFamily
    best.unwrap_or_else(|| entry(x, Tag::Symmetric))
}

/// Least key over the typed members of the orbit of `f`.
pub fn canonical_form(f: &TypedFamily) -> CanonicalKey {
    units(f.v())
        .into_iter()
        .map(|u| {
            let e = f.blocks.map(|b| least_typed_image(b.dilate_unchecked(u)));
            CanonicalKey::from_entries(f.params.lambda, e)
        })
        .min()
        .expect("the unit 1 always exists")
}

/// Least key under simultaneous dilation only, blocks unordered.
pub fn small_canonical_form(f: &TypedFamily) -> CanonicalKey {
    units(f.v())
        .into_iter()
        .map(|u| {
            let e = std::array::from_fn(|i| entry(f.blocks[i].dilate_unchecked(u), f.tags[i]));
            CanonicalKey::from_entries(f.params.lambda, e)
        })
        .min()
        .expect("the unit 1 always exists")
}

/// Whether some composite of elementary transformations maps `a` to `b`.
pub fn are_equivalent(a: &TypedFamily, b: &TypedFamily) -> Result<bool> {
    if a.params.normalize() != b.params.normalize() {
        return Err(Error::Parameters(format!(
            "{} and {} are different parameter sets",
            a.params, b.params
        )));
    }
    Ok(canonical_form(a) == canonical_form(b))
}

/// One class of a partition: its key, a representative and the indices of
/// its members in the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub key: CanonicalKey,
    pub representative: TypedFamily,
    pub members: Vec<usize>,
}

impl EquivalenceClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn partition(fs: &[TypedFamily], key: fn(&TypedFamily) -> CanonicalKey) -> Vec<EquivalenceClass> {
    let keys: Vec<CanonicalKey> = fs.par_iter().map(key).collect();
    let mut groups: BTreeMap<CanonicalKey, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.into_iter().enumerate() {
        groups.entry(k).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(key, members)| {
            // least member by blocks then tags, so the choice ignores input order
            let rep = members
                .iter()
                .map(|&i| &fs[i])
                .min_by(|x, y| (x.blocks, x.tags).cmp(&(y.blocks, y.tags)))
                .expect("classes are nonempty")
                .clone();
            EquivalenceClass {
                key,
                representative: rep,
                members,
            }
        })
        .collect()
}

/// Full equivalence classes, ordered by key.
pub fn classify(fs: &[TypedFamily]) -> Vec<EquivalenceClass> {
    partition(fs, canonical_form)
}

/// Small classes (dilation only, blocks unordered), ordered by key.
pub fn small_classes(fs: &[TypedFamily]) -> Vec<EquivalenceClass> {
    partition(fs, small_canonical_form)
}
