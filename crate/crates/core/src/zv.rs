//! Subsets of the cyclic group Z_v and their spectral data.
//!
//! A [`CyclicSubset`] is stored as a bitmask of width `v`, so `v` is limited
//! to 64. Translation is a rotation of the mask and the number of
//! representations of a difference `d` is `popcount(X & (X + d))`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 64;

#[inline]
fn low_bits(v: u32) -> u64 {
    if v >= 64 {
        u64::MAX
    } else {
        (1u64 << v) - 1
    }
}

/// Rotate a `v`-bit mask so that bit `x` moves to bit `(x + g) mod v`.
#[inline]
pub(crate) fn rotate(mask: u64, g: u32, v: u32) -> u64 {
    let g = g % v;
    if g == 0 {
        mask
    } else {
        ((mask << g) | (mask >> (v - g))) & low_bits(v)
    }
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Units of Z_v in increasing order.
pub fn units(v: u32) -> Vec<u32> {
    if v == 1 {
        return vec![0];
    }
    (1..v).filter(|&u| gcd(u, v) == 1).collect()
}

pub fn inverse_unit(u: u32, v: u32) -> Option<u32> {
    if v == 1 {
        return Some(0);
    }
    (1..v).find(|&w| (u as u64 * w as u64) % v as u64 == 1)
}

/// A subset of Z_v.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicSubset {
    v: u32,
    mask: u64,
}

impl CyclicSubset {
    pub fn new(v: u32, elements: &[u32]) -> Result<Self> {
        check_modulus(v)?;
        let mut mask = 0u64;
        for &e in elements {
            if e >= v {
                return Err(Error::Residue { residue: e, v });
            }
            if mask & (1 << e) != 0 {
                return Err(Error::DuplicateResidue(e));
            }
            mask |= 1 << e;
        }
        Ok(CyclicSubset { v, mask })
    }

    /// Builds a subset from a bitmask; bits at or above `v` are dropped.
    pub fn from_mask(v: u32, mask: u64) -> Self {
        assert!((1..=MAX_ORDER).contains(&v), "modulus {v} out of range");
        CyclicSubset {
            v,
            mask: mask & low_bits(v),
        }
    }

    pub fn empty(v: u32) -> Self {
        Self::from_mask(v, 0)
    }

    pub fn full(v: u32) -> Self {
        Self::from_mask(v, u64::MAX)
    }

    #[inline]
    pub fn v(&self) -> u32 {
        self.v
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn cardinality(&self) -> u32 {
        self.mask.count_ones()
    }

    #[inline]
    pub fn contains(&self, e: u32) -> bool {
        e < self.v && self.mask & (1 << e) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        let mut m = self.mask;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let e = m.trailing_zeros();
                m &= m - 1;
                Some(e)
            }
        })
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// `{-x mod v : x in X}`.
    pub fn negate(&self) -> Self {
        // bit reversal maps x to v-1-x; one more step gives v-x
        let rev = self.mask.reverse_bits() >> (64 - self.v);
        Self::from_mask(self.v, rotate(rev, 1, self.v))
    }

    /// `{x + g mod v : x in X}`.
    pub fn translate(&self, g: u32) -> Self {
        CyclicSubset {
            v: self.v,
            mask: rotate(self.mask, g % self.v, self.v),
        }
    }

    /// `{u*x mod v : x in X}` for a unit `u`.
    pub fn dilate(&self, u: u32) -> Result<Self> {
        if gcd(u % self.v, self.v) != 1 {
            return Err(Error::NonUnit { u, v: self.v });
        }
        Ok(self.dilate_unchecked(u))
    }

    pub(crate) fn dilate_unchecked(&self, u: u32) -> Self {
        let v = self.v as u64;
        let u = u as u64 % v;
        let mask = self
            .iter()
            .fold(0u64, |m, x| m | 1 << ((x as u64 * u) % v));
        CyclicSubset { v: self.v, mask }
    }

    pub fn complement(&self) -> Self {
        Self::from_mask(self.v, !self.mask)
    }

    pub fn is_symmetric(&self) -> bool {
        self.negate().mask == self.mask
    }

    /// `v` odd, `|X| = (v-1)/2` and `X` disjoint from `-X`.
    pub fn is_skew(&self) -> bool {
        self.v % 2 == 1
            && self.cardinality() == (self.v - 1) / 2
            && self.negate().mask & self.mask == 0
    }

    /// True if `X + h = X` for some `h` with `0 < h < v`.
    pub fn is_periodic(&self) -> bool {
        (1..self.v)
            .filter(|h| self.v.is_multiple_of(*h))
            .any(|h| rotate(self.mask, h, self.v) == self.mask)
    }

    /// `|X ∩ (X + s)|`.
    #[inline]
    pub fn shift_overlap(&self, s: u32) -> u32 {
        (self.mask & rotate(self.mask, s % self.v, self.v)).count_ones()
    }

    /// Multiplicities of the differences `d = 1..(v-1)/2`.
    pub fn difference_row(&self) -> Result<DifferenceRow> {
        if self.v.is_multiple_of(2) {
            return Err(Error::EvenOrder(self.v));
        }
        let half = (self.v - 1) / 2;
        let counts = (1..=half).map(|d| self.shift_overlap(d) as u8).collect();
        Ok(DifferenceRow { v: self.v, counts })
    }

    /// Periodic autocorrelation of the associated ±1 sequence.
    pub fn paf(&self) -> PafVector {
        let v = self.v as i64;
        let k = self.cardinality() as i64;
        PafVector(
            (0..self.v)
                .map(|s| v - 4 * k + 4 * self.shift_overlap(s) as i64)
                .collect(),
        )
    }

    /// Power spectral density of the associated ±1 sequence.
    pub fn psd(&self) -> PsdVector {
        SpectrumTable::new(self.v).psd(self)
    }

    pub fn to_binary(&self) -> BinarySeq {
        BinarySeq {
            entries: (0..self.v)
                .map(|i| if self.contains(i) { -1 } else { 1 })
                .collect(),
        }
    }

    /// Comma-separated residues, e.g. `1,2,4`.
    pub fn residues_string(&self) -> String {
        let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Debug for CyclicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}{{{}}}", self.v, self.residues_string())
    }
}

impl fmt::Display for CyclicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.residues_string())
    }
}

impl Ord for CyclicSubset {
    /// Modulus first, then lexicographic order of the sorted element lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.v
            .cmp(&other.v)
            .then_with(|| lex_cmp(self.mask, other.mask))
    }
}

impl PartialOrd for CyclicSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic comparison of the increasing element lists of two masks.
#[inline]
pub(crate) fn lex_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let p = diff.trailing_zeros();
    let above = if p >= 63 { 0 } else { !0u64 << (p + 1) };
    let (has_p, other) = if a & (1 << p) != 0 { (a, b) } else { (b, a) };
    // the side holding p wins unless the other list ends before p
    let holder_smaller = other & above != 0;
    let a_smaller = (has_p == a) == holder_smaller;
    if a_smaller {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn check_modulus(v: u32) -> Result<()> {
    if (1..=MAX_ORDER).contains(&v) {
        Ok(())
    } else {
        Err(Error::Modulus(v))
    }
}

/// ±1 sequence of a subset: entry `i` is `-1` iff `i` is in the subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySeq {
    entries: Vec<i8>,
}

impl BinarySeq {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        check_modulus(entries.len() as u32)?;
        if let Some(bad) = entries.iter().find(|&&x| x != 1 && x != -1) {
            return Err(Error::Parameters(format!("sequence entry {bad} is not ±1")));
        }
        Ok(BinarySeq { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn to_subset(&self) -> CyclicSubset {
        let mask = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == -1)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        CyclicSubset::from_mask(self.entries.len() as u32, mask)
    }
}

/// Multiplicities of the differences `1..=(v-1)/2` within one block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DifferenceRow {
    v: u32,
    counts: Vec<u8>,
}

impl DifferenceRow {
    pub fn new(v: u32, counts: Vec<u8>) -> Result<Self> {
        if v.is_multiple_of(2) {
            return Err(Error::EvenOrder(v));
        }
        if counts.len() != ((v - 1) / 2) as usize {
            return Err(Error::Parameters(format!(
                "difference row for v={v} needs {} entries, got {}",
                (v - 1) / 2,
                counts.len()
            )));
        }
        Ok(DifferenceRow { v, counts })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }

    /// Multiplicity of difference `d` for any `d` in `1..v`.
    pub fn multiplicity(&self, d: u32) -> u8 {
        let d = d % self.v;
        assert!(d != 0, "difference 0 has no recorded multiplicity");
        let idx = d.min(self.v - d) - 1;
        self.counts[idx as usize]
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().map(|&c| c as u32).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PafVector(pub Vec<i64>);

#[derive(Clone, Debug, PartialEq)]
pub struct PsdVector(pub Vec<f64>);

impl PsdVector {
    /// Largest value over the nonzero frequencies.
    pub fn max_nonzero(&self) -> f64 {
        self.0.iter().skip(1).copied().fold(0.0, f64::max)
    }
}

/// Precomputed roots of unity for repeated PSD evaluation at a fixed `v`.
#[derive(Clone, Debug)]
pub struct SpectrumTable {
    v: u32,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl SpectrumTable {
    pub fn new(v: u32) -> Self {
        let (cos, sin) = (0..v)
            .map(|t| {
                let a = 2.0 * PI * t as f64 / v as f64;
                (a.cos(), a.sin())
            })
            .unzip();
        SpectrumTable { v, cos, sin }
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn psd(&self, x: &CyclicSubset) -> PsdVector {
        assert_eq!(x.v(), self.v);
        let v = self.v as usize;
        let seq = x.to_binary();
        let out = (0..v)
            .map(|j| {
                let (mut re, mut im) = (0.0, 0.0);
                for (t, &s) in seq.entries().iter().enumerate() {
                    let idx = (t * j) % v;
                    re += s as f64 * self.cos[idx];
                    im += s as f64 * self.sin[idx];
                }
                re * re + im * im
            })
            .collect();
        PsdVector(out)
    }

    /// `max_{1 <= j <= (v-1)/2} PSD(j)`, using `PSD(j) = 4|sum_{t in X} w^{tj}|^2`
    /// for `j != 0` and `PSD(j) = PSD(v-j)`.
    pub fn max_psd(&self, x: &CyclicSubset) -> f64 {
        let v = self.v;
        let mut best = 0.0f64;
        for j in 1..=v / 2 {
            let (mut re, mut im) = (0.0, 0.0);
            for t in x.iter() {
                let idx = ((t * j) % v) as usize;
                re += self.cos[idx];
                im += self.sin[idx];
            }
            best = best.max(4.0 * (re * re + im * im));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: u32, e: &[u32]) -> CyclicSubset {
        CyclicSubset::new(v, e).unwrap()
    }

    #[test]
    fn negate_examples() {
        assert_eq!(set(7, &[1, 2, 4]).negate(), set(7, &[3, 5, 6]));
        assert_eq!(set(7, &[]).negate(), set(7, &[]));
        assert_eq!(set(7, &[0, 2, 5]).negate(), set(7, &[0, 2, 5]));
        assert_eq!(set(1, &[0]).negate(), set(1, &[0]));
        assert_eq!(set(64, &[0, 1]).negate(), set(64, &[0, 63]));
    }

    #[test]
    fn translate_examples() {
        assert_eq!(set(3, &[1]).translate(1), set(3, &[2]));
        assert_eq!(set(7, &[1, 2, 4]).translate(0), set(7, &[1, 2, 4]));
        assert_eq!(set(7, &[0, 3, 4]).translate(3), set(7, &[0, 3, 6]));
    }

    #[test]
    fn dilate_examples() {
        assert_eq!(set(3, &[1]).dilate(2).unwrap(), set(3, &[2]));
        assert_eq!(set(7, &[1, 2, 4]).dilate(2).unwrap(), set(7, &[1, 2, 4]));
        assert_eq!(set(9, &[1, 5]).dilate(1).unwrap(), set(9, &[1, 5]));
        assert!(matches!(
            set(9, &[1]).dilate(3),
            Err(Error::NonUnit { u: 3, v: 9 })
        ));
    }

    #[test]
    fn symmetry_predicates() {
        let qr = set(7, &[1, 2, 4]);
        assert!(qr.is_skew() && !qr.is_symmetric());
        let s = set(7, &[0, 2, 5]);
        assert!(s.is_symmetric() && !s.is_skew());
        let p = set(7, &[1, 6]);
        assert!(p.is_symmetric() && !p.is_skew());
        // skew requires odd v
        assert!(!set(4, &[1]).is_skew());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(set(3, &[1, 2]).complement(), set(3, &[0]));
        assert_eq!(set(3, &[]).complement(), set(3, &[0, 1, 2]));
    }

    #[test]
    fn difference_row_examples() {
        assert_eq!(set(7, &[1, 2, 4]).difference_row().unwrap().counts(), &[1, 1, 1]);
        assert_eq!(set(3, &[1, 2]).difference_row().unwrap().counts(), &[1]);
        assert_eq!(set(7, &[]).difference_row().unwrap().counts(), &[0, 0, 0]);
        assert!(matches!(
            set(8, &[1]).difference_row(),
            Err(Error::EvenOrder(8))
        ));
    }

    #[test]
    fn paf_psd_examples() {
        let qr = set(7, &[1, 2, 4]);
        assert_eq!(qr.paf().0, vec![7, -1, -1, -1, -1, -1, -1]);
        let psd = qr.psd();
        for j in 1..7 {
            assert!((psd.0[j] - 8.0).abs() < 1e-9);
        }
        let e = set(7, &[]).psd();
        assert!((e.0[0] - 49.0).abs() < 1e-9);
        assert!(e.0[1..].iter().all(|&p| p.abs() < 1e-9));
        assert!((SpectrumTable::new(7).max_psd(&qr) - 8.0).abs() < 1e-9);
    }

    #[test]
    fn element_order_is_lexicographic() {
        let mut all: Vec<CyclicSubset> = (0..(1u64 << 6)).map(|m| CyclicSubset::from_mask(6, m)).collect();
        all.sort();
        let lists: Vec<Vec<u32>> = all.iter().map(|s| s.elements()).collect();
        let mut sorted = lists.clone();
        sorted.sort();
        assert_eq!(lists, sorted);
    }

    #[test]
    fn binary_round_trip() {
        let x = set(9, &[0, 3, 8]);
        let b = x.to_binary();
        assert_eq!(b.entries()[0], -1);
        assert_eq!(b.entries()[1], 1);
        assert_eq!(b.to_subset(), x);
        assert!(BinarySeq::new(vec![1, 0, -1]).is_err());
    }

    fn subset_strategy() -> impl Strategy<Value = CyclicSubset> {
        (1u32..=40).prop_flat_map(|v| {
            any::<u64>().prop_map(move |m| CyclicSubset::from_mask(v, m))
        })
    }

    fn odd_subset_strategy() -> impl Strategy<Value = CyclicSubset> {
        (0u32..=20).prop_flat_map(|h| {
            let v = 2 * h + 1;
            any::<u64>().prop_map(move |m| CyclicSubset::from_mask(v, m))
        })
    }

    /// Direct DFT with complex exponentials computed per term.
    fn psd_oracle(x: &CyclicSubset) -> Vec<f64> {
        let v = x.v() as usize;
        let seq = x.to_binary();
        (0..v)
            .map(|j| {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for t in 0..v {
                    let a = 2.0 * PI * (t * j) as f64 / v as f64;
                    re += seq.entries()[t] as f64 * a.cos();
                    im += seq.entries()[t] as f64 * a.sin();
                }
                re * re + im * im
            })
            .collect()
    }

    proptest! {
        #[test]
        fn paf_matches_definition(x in subset_strategy()) {
            let v = x.v() as usize;
            let seq = x.to_binary();
            let paf = x.paf();
            for s in 0..v {
                let direct: i64 = (0..v)
                    .map(|t| seq.entries()[t] as i64 * seq.entries()[(t + s) % v] as i64)
                    .sum();
                prop_assert_eq!(paf.0[s], direct);
                let overlap = x.elements().iter().filter(|&&e| x.contains((e + s as u32) % x.v())).count() as i64;
                prop_assert_eq!(paf.0[s], v as i64 - 4 * x.cardinality() as i64 + 4 * overlap);
                prop_assert_eq!(paf.0[s], paf.0[(v - s) % v]);
            }
            prop_assert_eq!(paf.0[0], v as i64);
        }

        #[test]
        fn psd_parseval_and_oracle(x in subset_strategy()) {
            let v = x.v() as f64;
            let psd = x.psd();
            let total: f64 = psd.0.iter().sum();
            prop_assert!((total - v * v).abs() <= 1e-6 * v * v);
            let oracle = psd_oracle(&x);
            for (a, b) in psd.0.iter().zip(&oracle) {
                prop_assert!((a - b).abs() < 1e-6 * v * v);
            }
            let table = SpectrumTable::new(x.v());
            prop_assert!((table.max_psd(&x) - psd.max_nonzero()).abs() < 1e-6 * v * v);
        }

        #[test]
        fn difference_row_matches_pair_enumeration(x in odd_subset_strategy()) {
            let v = x.v();
            let row = x.difference_row().unwrap();
            let mut brute = vec![0u32; v as usize];
            for a in x.iter() {
                for b in x.iter() {
                    if a != b {
                        brute[((a + v - b) % v) as usize] += 1;
                    }
                }
            }
            for d in 1..=(v - 1) / 2 {
                prop_assert_eq!(row.counts()[(d - 1) as usize] as u32, brute[d as usize]);
                prop_assert_eq!(brute[d as usize], brute[(v - d) as usize]);
            }
            let k = x.cardinality();
            prop_assert_eq!(2 * row.total(), k * k.saturating_sub(1));
        }

        #[test]
        fn transformations_invert(x in subset_strategy(), g in 0u32..64, u in 1u32..64) {
            let v = x.v();
            let g = g % v;
            prop_assert_eq!(x.negate().negate(), x);
            prop_assert_eq!(x.complement().complement(), x);
            prop_assert_eq!(x.translate(g).translate((v - g) % v), x);
            if gcd(u % v, v) == 1 {
                let w = inverse_unit(u % v, v).unwrap();
                prop_assert_eq!(x.dilate(u).unwrap().dilate(w).unwrap(), x);
                let y = x.dilate(u).unwrap();
                prop_assert_eq!(y.is_symmetric(), x.is_symmetric());
                prop_assert_eq!(y.is_skew(), x.is_skew());
                prop_assert_eq!(y.cardinality(), x.cardinality());
            }
            if x.is_skew() {
                prop_assert!(x.negate().is_skew());
                prop_assert_eq!(x.negate().mask() & x.mask(), 0);
            }
            let brute_neg: u64 = x.iter().fold(0, |m, e| m | 1 << ((v - e) % v));
            prop_assert_eq!(x.negate().mask(), brute_neg);
        }
    }
}
