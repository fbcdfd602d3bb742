//! Exact certification of families and of the matrices built from them.
//!
//! Everything here is dense integer arithmetic; orders stay below 4 * 64.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::family::TypedFamily;
use crate::params::{SymmetryType, Tag};
use crate::zv::{BinarySeq, CyclicSubset};

/// Dense square integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.n + j] = x;
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let row = &other.data[l * n..(l + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self * other^T`.
    pub fn mul_transpose(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let a = &self.data[i * n..(i + 1) * n];
            let b = &other.data[j * n..(j + 1) * n];
            a.iter().zip(b).map(|(x, y)| x * y).sum()
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_scalar(&self, c: i64) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { c } else { 0 }))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_pm_one(&self) -> bool {
        self.data.iter().all(|&x| x == 1 || x == -1)
    }
}

/// Circulant with the given first row: `entry(i, j) = row[(j - i) mod v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circulant {
    row: BinarySeq,
}

impl Circulant {
    pub fn new(row: BinarySeq) -> Self {
        Circulant { row }
    }

    pub fn of_block(x: &CyclicSubset) -> Self {
        Circulant { row: x.to_binary() }
    }

    pub fn order(&self) -> usize {
        self.row.len()
    }

    pub fn matrix(&self) -> Matrix {
        let v = self.order();
        let r = self.row.entries();
        Matrix::from_fn(v, |i, j| r[(j + v - i) % v] as i64)
    }
}

/// Back-circulant with the given first row: `entry(i, j) = row[(i + j) mod v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackCirculant {
    row: BinarySeq,
}

impl BackCirculant {
    pub fn new(row: BinarySeq) -> Self {
        BackCirculant { row }
    }

    pub fn of_block(x: &CyclicSubset) -> Self {
        BackCirculant { row: x.to_binary() }
    }

    pub fn matrix(&self) -> Matrix {
        let v = self.row.len();
        let r = self.row.entries();
        Matrix::from_fn(v, |i, j| r[(i + j) % v] as i64)
    }
}

/// Back-circulant identity: ones on the anti-diagonal.
pub fn r_matrix(v: usize) -> Matrix {
    Matrix::from_fn(v, |i, j| (i + j + 1 == v) as i64)
}

/// Outcome of the difference-count check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DifferenceCheck {
    /// Every nonzero element is covered this many times.
    Lambda(u32),
    /// Coverage is not constant; `sums[c]` is the count for `c` (index 0 unused).
    Failure { sums: Vec<u32>, offending: Vec<u32> },
}

impl DifferenceCheck {
    pub fn lambda(&self) -> Option<u32> {
        match self {
            DifferenceCheck::Lambda(l) => Some(*l),
            DifferenceCheck::Failure { .. } => None,
        }
    }
}

/// `sums[c] = #{(a, b, i) : a, b in X_i, a - b = c}` for `c` in `0..v`.
pub fn difference_sums(blocks: &[CyclicSubset]) -> Vec<u32> {
    let v = blocks[0].v();
    let mut sums = vec![0u32; v as usize];
    for c in 1..v {
        sums[c as usize] = blocks.iter().map(|b| b.shift_overlap(c)).sum();
    }
    sums
}

/// Checks that every nonzero residue is a difference the same number of times.
/// Offending residues are the ones disagreeing with the coverage of `1`.
pub fn is_difference_family(blocks: &[CyclicSubset]) -> DifferenceCheck {
    let v = blocks[0].v();
    let sums = difference_sums(blocks);
    if v == 1 {
        return DifferenceCheck::Lambda(0);
    }
    let first = sums[1];
    let offending: Vec<u32> = (1..v).filter(|&c| sums[c as usize] != first).collect();
    if offending.is_empty() {
        DifferenceCheck::Lambda(first)
    } else {
        DifferenceCheck::Failure { sums, offending }
    }
}

/// Difference check against the family's declared lambda.
pub fn check_family_lambda(f: &TypedFamily) -> DifferenceCheck {
    match is_difference_family(&f.blocks) {
        DifferenceCheck::Lambda(l) if l != f.params.lambda => {
            let sums = difference_sums(&f.blocks);
            DifferenceCheck::Failure {
                sums,
                offending: (1..f.v()).collect(),
            }
        }
        other => other,
    }
}

/// `sum A_i^T A_i = 4v I`.
pub fn check_gs_matrices(a: &[Circulant; 4]) -> bool {
    let v = a[0].order();
    if a.iter().any(|c| c.order() != v) {
        return false;
    }
    let mut total = Matrix::zeros(v);
    for c in a {
        let m = c.matrix();
        total = total.add(&m.transpose().mul(&m));
    }
    total.is_scalar(4 * v as i64)
}

pub fn circulants(f: &TypedFamily) -> [Circulant; 4] {
    f.blocks.each_ref().map(Circulant::of_block)
}

/// The `4v x 4v` Goethals-Seidel array built from `Z0..Z3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsArrayMatrix {
    pub matrix: Matrix,
    pub blocks: [Matrix; 4],
}

pub fn build_gs_array(z: [Matrix; 4]) -> Result<GsArrayMatrix> {
    let v = z[0].order();
    if z.iter().any(|m| m.order() != v) {
        return Err(Error::Parameters("GS array blocks have different orders".into()));
    }
    let r = r_matrix(v);
    let zr: Vec<Matrix> = z.iter().map(|m| m.mul(&r)).collect();
    let ztr: Vec<Matrix> = z.iter().map(|m| m.transpose().mul(&r)).collect();
    let neg = |m: &Matrix| m.scale(-1);
    let layout: [[Matrix; 4]; 4] = [
        [z[0].clone(), zr[1].clone(), zr[2].clone(), zr[3].clone()],
        [neg(&zr[1]), z[0].clone(), neg(&ztr[3]), ztr[2].clone()],
        [neg(&zr[2]), ztr[3].clone(), z[0].clone(), neg(&ztr[1])],
        [neg(&zr[3]), neg(&ztr[2]), ztr[1].clone(), z[0].clone()],
    ];
    let mut h = Matrix::zeros(4 * v);
    for (bi, row) in layout.iter().enumerate() {
        for (bj, blk) in row.iter().enumerate() {
            for i in 0..v {
                for j in 0..v {
                    h.set(bi * v + i, bj * v + j, blk.get(i, j));
                }
            }
        }
    }
    Ok(GsArrayMatrix { matrix: h, blocks: z })
}

/// GS array with `Z_i = A_{i+1}`.
pub fn gs_array_of(f: &TypedFamily) -> GsArrayMatrix {
    let c = circulants(f);
    build_gs_array(c.each_ref().map(|a| a.matrix())).expect("blocks share one order")
}

/// `H H^T = n I` with ±1 entries.
pub fn is_hadamard(h: &Matrix) -> bool {
    h.is_pm_one() && h.mul_transpose(h).is_scalar(h.order() as i64)
}

/// Hadamard and `H + H^T = 2I`.
pub fn is_skew_hadamard(h: &Matrix) -> bool {
    is_hadamard(h) && h.add(&h.transpose()).is_scalar(2)
}

/// `+`/`-` text, one row per line.
pub fn format_hadamard(h: &Matrix) -> String {
    let n = h.order();
    let mut out = String::with_capacity(n * (n + 1));
    for i in 0..n {
        for j in 0..n {
            out.push(if h.get(i, j) > 0 { '+' } else { '-' });
        }
        out.push('\n');
    }
    out
}

pub fn parse_hadamard(text: &str) -> Result<Matrix> {
    let rows: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    let n = rows.len();
    let mut m = Matrix::zeros(n);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::parse("hadamard", i + 1, "row length differs from row count"));
        }
        for (j, c) in r.chars().enumerate() {
            let x = match c {
                '+' => 1,
                '-' => -1,
                _ => return Err(Error::parse("hadamard", i + 1, format!("bad symbol '{c}'"))),
            };
            m.set(i, j, x);
        }
    }
    Ok(m)
}

fn require_type(f: &TypedFamily, t: SymmetryType) -> Result<()> {
    match f.symmetry_type() {
        Some(found) if found == t => Ok(()),
        found => Err(Error::TypeMismatch {
            expected: t.to_string(),
            found: found.map_or_else(|| f.tag_string(), |s| s.to_string()),
        }),
    }
}

/// `M N^T = N M^T`.
pub fn amicable(m: &Matrix, n: &Matrix) -> bool {
    m.mul_transpose(n) == n.mul_transpose(m)
}

/// Good matrices from a (ksss) family: the circulant of the skew block and
/// the back-circulants `B_i = A_i R` of the symmetric blocks must be
/// pairwise amicable Williamson-type matrices with the first of skew type.
pub fn check_good_matrices(f: &TypedFamily) -> Result<bool> {
    require_type(f, SymmetryType::Ksss)?;
    let v = f.v() as usize;
    let r = r_matrix(v);
    let skew_pos = f.tags.iter().position(|&t| t == Tag::Skew).unwrap();
    let a1 = Circulant::of_block(&f.blocks[skew_pos]).matrix();
    let mut ms = vec![a1.clone()];
    for (i, b) in f.blocks.iter().enumerate() {
        if i != skew_pos {
            ms.push(Circulant::of_block(b).matrix().mul(&r));
        }
    }
    if !a1.add(&a1.transpose()).is_scalar(2) {
        return Ok(false);
    }
    if !ms[1..].iter().all(Matrix::is_symmetric) {
        return Ok(false);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !amicable(&ms[i], &ms[j]) {
                return Ok(false);
            }
        }
    }
    let total = ms
        .iter()
        .fold(Matrix::zeros(v), |acc, m| acc.add(&m.mul_transpose(m)));
    Ok(total.is_scalar(4 * v as i64))
}

/// G-matrices: (kkss) typing and the GS equation.
pub fn check_g_matrices(f: &TypedFamily) -> Result<bool> {
    require_type(f, SymmetryType::Kkss)?;
    Ok(check_gs_matrices(&circulants(f)))
}

/// Best matrices: (kkks) typing and the GS equation.
pub fn check_best_matrices(f: &TypedFamily) -> Result<bool> {
    require_type(f, SymmetryType::Kkks)?;
    Ok(check_gs_matrices(&circulants(f)))
}

/// Everything [`certify`] checks about one family.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub difference: DifferenceCheck,
    pub lambda_matches: bool,
    pub tags_hold: bool,
    pub gs_matrices: bool,
    pub hadamard: bool,
    pub skew_hadamard: bool,
    /// Good / G / best check for the family's symmetry type, if typed.
    pub special: Option<(SymmetryType, bool)>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.lambda_matches
            && self.tags_hold
            && self.gs_matrices
            && self.hadamard
            && self.special.is_none_or(|(_, ok)| ok)
    }

    pub fn summary(&self, f: &TypedFamily) -> String {
        let mut s = String::new();
        let yn = |b: bool| if b { "ok" } else { "FAIL" };
        write!(s, "{} {}", f.params, f.tag_string()).unwrap();
        match &self.difference {
            DifferenceCheck::Lambda(l) => write!(s, " lambda={l}").unwrap(),
            DifferenceCheck::Failure { offending, .. } => {
                write!(s, " not a difference family (offending {offending:?})").unwrap()
            }
        }
        write!(
            s,
            " tags={} gs={} hadamard={} skew={}",
            yn(self.tags_hold),
            yn(self.gs_matrices),
            yn(self.hadamard),
            if self.skew_hadamard { "yes" } else { "no" }
        )
        .unwrap();
        if let Some((t, ok)) = self.special {
            let name = match t {
                SymmetryType::Ksss => "good",
                SymmetryType::Kkss => "G",
                SymmetryType::Kkks => "best",
            };
            write!(s, " {name}-matrices={}", yn(ok)).unwrap();
        }
        s
    }
}

pub fn certify(f: &TypedFamily) -> Certificate {
    let difference = is_difference_family(&f.blocks);
    let lambda_matches = difference.lambda() == Some(f.params.lambda);
    let tags_hold = f
        .blocks
        .iter()
        .zip(&f.tags)
        .all(|(b, &t)| crate::family::tag_holds(b, t));
    let gs_matrices = check_gs_matrices(&circulants(f));
    let h = gs_array_of(f).matrix;
    let hadamard = is_hadamard(&h);
    let skew_hadamard = hadamard && is_skew_hadamard(&h);
    let special = f.symmetry_type().map(|t| {
        let ok = match t {
            SymmetryType::Ksss => check_good_matrices(f),
            SymmetryType::Kkss => check_g_matrices(f),
            SymmetryType::Kkks => check_best_matrices(f),
        };
        (t, ok.unwrap_or(false))
    });
    Certificate {
        difference,
        lambda_matches,
        tags_hold,
        gs_matrices,
        hadamard,
        skew_hadamard,
        special,
    }
}
