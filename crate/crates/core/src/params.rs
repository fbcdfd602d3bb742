//! GS-parameter sets `(v; k1,k2,k3,k4; lambda)` and symmetry types.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parameters of a four-block difference family usable in the GS array.
///
/// The block sizes are stored in family order. Enumerations return them
/// normalized (`v/2 >= k1 >= k2 >= k3 >= k4 >= 0`); [`complement_params`]
/// may produce sets that are not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GsParamSet {
    pub v: u32,
    pub k: [u32; 4],
    pub lambda: u32,
}

impl GsParamSet {
    /// Validates `sum k_i(k_i-1) = lambda(v-1)` and `sum k_i = lambda + v`.
    pub fn new(v: u32, k: [u32; 4], lambda: u32) -> Result<Self> {
        let p = GsParamSet { v, k, lambda };
        if v == 0 || k.iter().any(|&ki| ki > v) {
            return Err(Error::Parameters(format!("{p}: block sizes out of range")));
        }
        if !p.satisfies_lambda_equation() || !p.satisfies_sum_equation() {
            return Err(Error::Parameters(format!("{p} is not a GS-parameter set")));
        }
        Ok(p)
    }

    pub fn satisfies_lambda_equation(&self) -> bool {
        let lhs: u64 = self
            .k
            .iter()
            .map(|&k| k as u64 * (k as u64).saturating_sub(1))
            .sum();
        lhs == self.lambda as u64 * (self.v as u64 - 1)
    }

    pub fn satisfies_sum_equation(&self) -> bool {
        self.k.iter().sum::<u32>() == self.lambda + self.v
    }

    pub fn satisfies_square_equation(&self) -> bool {
        let v = self.v as i64;
        let lhs: i64 = self.k.iter().map(|&k| (v - 2 * k as i64).pow(2)).sum();
        lhs == 4 * v
    }

    /// `v/2 >= k1 >= k2 >= k3 >= k4`.
    pub fn is_ordered(&self) -> bool {
        2 * self.k[0] <= self.v && self.k.windows(2).all(|w| w[0] >= w[1])
    }

    /// Complements every block larger than `v/2`, then sorts the sizes.
    pub fn normalize(&self) -> GsParamSet {
        let mut p = *self;
        for i in 0..4 {
            if 2 * p.k[i] > p.v {
                p = complement_params(&p, i).expect("complement of a large block is valid");
            }
        }
        p.k.sort_unstable_by(|a, b| b.cmp(a));
        p
    }

    /// `s_i = v - 2k_i`.
    pub fn square_roots(&self) -> [i64; 4] {
        self.k.map(|k| self.v as i64 - 2 * k as i64)
    }
}

impl fmt::Display for GsParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({};{},{},{},{};{})",
            self.v, self.k[0], self.k[1], self.k[2], self.k[3], self.lambda
        )
    }
}

/// Parameters after replacing block `i` by its complement:
/// `k_i -> v - k_i`, `lambda -> lambda + v - 2k_i`. The result keeps block
/// order and may violate `k1 <= v/2`.
pub fn complement_params(p: &GsParamSet, i: usize) -> Result<GsParamSet> {
    if i >= 4 {
        return Err(Error::Parameters(format!("block index {i} out of range")));
    }
    let lambda = p.lambda as i64 + p.v as i64 - 2 * p.k[i] as i64;
    if lambda < 0 {
        return Err(Error::Parameters(format!(
            "complementing block {i} of {p} gives negative lambda"
        )));
    }
    let mut k = p.k;
    k[i] = p.v - p.k[i];
    Ok(GsParamSet {
        v: p.v,
        k,
        lambda: lambda as u32,
    })
}

/// All normalized GS-parameter sets of order `v`, ascending by `k`.
///
/// Odd `v` enumerates `4v = sum s_i^2` with odd `s_i`, even `v` enumerates
/// `v = sum s_i^2`; in both cases `s1 <= s2 <= s3 <= s4`.
pub fn enumerate_param_sets(v: u32) -> Vec<GsParamSet> {
    let odd = v % 2 == 1;
    let target = if odd { 4 * v } else { v };
    let (start, step) = if odd { (1u32, 2) } else { (0u32, 1) };
    let mut out = Vec::new();
    let mut s1 = start;
    while 4 * s1 * s1 <= target {
        let mut s2 = s1;
        while s1 * s1 + 3 * s2 * s2 <= target {
            let mut s3 = s2;
            while s1 * s1 + s2 * s2 + 2 * s3 * s3 <= target {
                let rest = target - s1 * s1 - s2 * s2 - s3 * s3;
                let s4 = rest.isqrt();
                if s4 * s4 == rest && s4 >= s3 && (!odd || s4 % 2 == 1) {
                    if let Some(p) = from_roots(v, [s1, s2, s3, s4]) {
                        out.push(p);
                    }
                }
                s3 += step;
            }
            s2 += step;
        }
        s1 += step;
    }
    out.sort();
    out.dedup();
    out
}

fn from_roots(v: u32, s: [u32; 4]) -> Option<GsParamSet> {
    let odd = v % 2 == 1;
    let mut k = [0u32; 4];
    for i in 0..4 {
        let twice_k = if odd { v.checked_sub(s[i])? } else { v.checked_sub(2 * s[i])? };
        k[i] = twice_k / 2;
    }
    let sum: u32 = k.iter().sum();
    let lambda = sum.checked_sub(v)?;
    GsParamSet::new(v, k, lambda).ok()
}

/// Parameter sets with `k1 = (v-1)/2`: the ones able to carry a skew block.
pub fn enumerate_skew_param_sets(v: u32) -> Result<Vec<GsParamSet>> {
    require_odd(v)?;
    Ok(enumerate_param_sets(v)
        .into_iter()
        .filter(|p| p.k[0] == (v - 1) / 2)
        .collect())
}

/// Parameter sets for type (ksss); nonempty for every odd `v >= 3`.
pub fn ksss_param_sets(v: u32) -> Result<Vec<GsParamSet>> {
    enumerate_skew_param_sets(v)
}

pub fn ksss_param_exists(v: u32) -> Result<bool> {
    Ok(!ksss_param_sets(v)?.is_empty())
}

/// Parameter sets for type (kkss): one per `2v - 1 = r^2 + s^2`, `r > s >= 0`,
/// namely `(v; (v-1)/2, (v-1)/2, (v-r+s)/2, (v-r-s)/2; v-r-1)`.
pub fn kkss_param_sets(v: u32) -> Result<Vec<GsParamSet>> {
    require_odd(v)?;
    let n = 2 * v - 1;
    let half = (v - 1) / 2;
    let mut out = Vec::new();
    let mut s = 0u32;
    while 2 * s * s < n {
        let rest = n - s * s;
        let r = rest.isqrt();
        if r * r == rest && r > s && r + s <= v && r < v {
            let k = [half, half, (v - r + s) / 2, (v - r - s) / 2];
            out.push(GsParamSet::new(v, k, v - r - 1)?);
        }
        s += 1;
    }
    out.sort();
    Ok(out)
}

/// The (kkks) parameter set, present iff `4v - 3 = (2r+1)^2`:
/// `(r^2+r+1; r(r+1)/2 three times, r(r-1)/2; r^2-1)`.
pub fn kkks_param_set(v: u32) -> Result<Option<GsParamSet>> {
    require_odd(v)?;
    if v < 3 {
        return Ok(None);
    }
    let n = 4 * v - 3;
    let root = n.isqrt();
    if root * root != n || root.is_multiple_of(2) {
        return Ok(None);
    }
    let r = (root - 1) / 2;
    let big = r * (r + 1) / 2;
    let k = [big, big, big, r * (r - 1) / 2];
    Ok(Some(GsParamSet::new(v, k, r * r - 1)?))
}

fn require_odd(v: u32) -> Result<()> {
    if v.is_multiple_of(2) {
        Err(Error::EvenOrder(v))
    } else {
        Ok(())
    }
}

/// Per-block symmetry tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Skew,
    Symmetric,
}

impl Tag {
    pub fn letter(self) -> char {
        match self {
            Tag::Skew => 'k',
            Tag::Symmetric => 's',
        }
    }

    pub fn from_letter(c: char) -> Option<Tag> {
        match c {
            'k' => Some(Tag::Skew),
            's' => Some(Tag::Symmetric),
            _ => None,
        }
    }
}

/// The symmetry types handled here. (ssss) is out of scope and (kkkk)
/// forces `v = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryType {
    Ksss,
    Kkss,
    Kkks,
}

impl SymmetryType {
    pub const ALL: [SymmetryType; 3] = [SymmetryType::Ksss, SymmetryType::Kkss, SymmetryType::Kkks];

    pub fn skew_count(self) -> usize {
        match self {
            SymmetryType::Ksss => 1,
            SymmetryType::Kkss => 2,
            SymmetryType::Kkks => 3,
        }
    }

    /// Standard positional tags: skew blocks first.
    pub fn tags(self) -> [Tag; 4] {
        let n = self.skew_count();
        std::array::from_fn(|i| if i < n { Tag::Skew } else { Tag::Symmetric })
    }

    pub fn from_tags(tags: &[Tag; 4]) -> Option<SymmetryType> {
        match tags.iter().filter(|&&t| t == Tag::Skew).count() {
            1 => Some(SymmetryType::Ksss),
            2 => Some(SymmetryType::Kkss),
            3 => Some(SymmetryType::Kkks),
            _ => None,
        }
    }

    /// Whether a normalized parameter set has room for this type: the first
    /// `skew_count` sizes must equal `(v-1)/2`.
    pub fn admits(self, p: &GsParamSet) -> bool {
        p.v % 2 == 1 && p.v >= 3 && p.k[..self.skew_count()].iter().all(|&k| k == (p.v - 1) / 2)
    }

    /// Parameter sets of order `v` admitting this type.
    pub fn param_sets(self, v: u32) -> Result<Vec<GsParamSet>> {
        Ok(enumerate_skew_param_sets(v)?
            .into_iter()
            .filter(|p| self.admits(p))
            .collect())
    }
}

impl fmt::Display for SymmetryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryType::Ksss => "ksss",
            SymmetryType::Kkss => "kkss",
            SymmetryType::Kkks => "kkks",
        })
    }
}

impl FromStr for SymmetryType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ksss" => Ok(SymmetryType::Ksss),
            "kkss" => Ok(SymmetryType::Kkss),
            "kkks" => Ok(SymmetryType::Kkks),
            other => Err(Error::Parameters(format!("unknown symmetry type '{other}'"))),
        }
    }
}
