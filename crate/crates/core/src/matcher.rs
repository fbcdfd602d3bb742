//! Matching phase: quadruples of rows, one per file, whose column sums all
//! equal `lambda`.
//!
//! [`bins_match`] splits the files into cases by the values in the first
//! column (the four values of a case sum to `lambda`), and keeps splitting a
//! case on the next column while its pairwise size products are over the
//! threshold. Small cases are solved by a meet-in-the-middle join of the
//! pairs (smallest, largest) against (second, third).
//! [`brute_force_match`] is the plain quadruple loop.

use rayon::prelude::*;

use crate::blockgen::RowFile;
use crate::error::{Error, Result};
use crate::zv::CyclicSubset;

pub const DEFAULT_THRESHOLD: u64 = 10_000_000;
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// All matching quadruples, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub v: u32,
    pub lambda: u32,
    pub quadruples: Vec<[CyclicSubset; 4]>,
    /// Cases at the first column; zero means no solution can exist.
    pub cases: usize,
}

impl MatchResult {
    pub fn is_empty(&self) -> bool {
        self.quadruples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.quadruples.len()
    }
}

/// One bin of the four files: every listed row has `prefix[c][t]` in column
/// `c` for `c <= depth`, and `prefix[c]` sums to lambda.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchCase {
    pub depth: usize,
    pub prefix: Vec<[u8; 4]>,
    pub rows: [Vec<u32>; 4],
}

#[derive(Clone, Copy, Debug)]
pub struct MatchOptions {
    pub threshold: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub jobs: usize,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            threshold: DEFAULT_THRESHOLD,
            jobs: 0,
        }
    }
}

/// Row-major multiplicities of one file plus per-row linear hashes.
struct Table<'a> {
    file: &'a RowFile,
    cols: usize,
    data: Vec<u8>,
    hash: Vec<u64>,
}

impl<'a> Table<'a> {
    fn new(file: &'a RowFile, weights: &[u64]) -> Self {
        let cols = file.columns();
        let mut data = Vec::with_capacity(cols * file.len());
        let mut hash = Vec::with_capacity(file.len());
        for r in &file.rows {
            let counts = r.row.counts();
            data.extend_from_slice(counts);
            hash.push(linear_hash(counts, weights));
        }
        Table {
            file,
            cols,
            data,
            hash,
        }
    }

    #[inline]
    fn row(&self, i: u32) -> &[u8] {
        let i = i as usize;
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    fn get(&self, i: u32, c: usize) -> u8 {
        self.data[i as usize * self.cols + c]
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn hash_weights(cols: usize) -> Vec<u64> {
    (0..cols as u64).map(|j| splitmix(j) | 1).collect()
}

/// Additive over rows, so the hash of a column-wise sum is the sum of hashes.
#[inline]
fn linear_hash(counts: &[u8], weights: &[u64]) -> u64 {
    counts
        .iter()
        .zip(weights)
        .fold(0u64, |h, (&c, &w)| h.wrapping_add(w.wrapping_mul(c as u64)))
}

fn check_inputs(files: [&RowFile; 4]) -> Result<(u32, usize)> {
    let v = files[0].v;
    if files.iter().any(|f| f.v != v) {
        return Err(Error::Parameters("row files have different orders".into()));
    }
    Ok((v, files[0].columns()))
}

fn sort_quadruples(mut q: Vec<[CyclicSubset; 4]>) -> Vec<[CyclicSubset; 4]> {
    q.sort();
    q
}

/// Every quadruple by direct enumeration. Refuses inputs with more than
/// [`BRUTE_FORCE_LIMIT`] combinations.
pub fn brute_force_match(files: [&RowFile; 4], lambda: u32) -> Result<MatchResult> {
    let (v, cols) = check_inputs(files)?;
    let total: u128 = files.iter().map(|f| f.len() as u128).product();
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard(total));
    }
    let lambda_u = lambda as u16;
    let mut out = Vec::new();
    for r1 in &files[0].rows {
        for r2 in &files[1].rows {
            for r3 in &files[2].rows {
                for r4 in &files[3].rows {
                    let ok = (0..cols).all(|c| {
                        r1.row.counts()[c] as u16
                            + r2.row.counts()[c] as u16
                            + r3.row.counts()[c] as u16
                            + r4.row.counts()[c] as u16
                            == lambda_u
                    });
                    if ok {
                        out.push([r1.block, r2.block, r3.block, r4.block]);
                    }
                }
            }
        }
    }
    let cases = match_cases(files, lambda)?.len();
    Ok(MatchResult {
        v,
        lambda,
        quadruples: sort_quadruples(out),
        cases,
    })
}

fn distinct_values(t: &Table, rows: &[u32], col: usize) -> Vec<u8> {
    let mut seen = [false; 256];
    for &r in rows {
        seen[t.get(r, col) as usize] = true;
    }
    (0..=255u8).filter(|&x| seen[x as usize]).collect()
}

fn split_case(tables: &[Table; 4], case: &MatchCase, col: usize, lambda: u32) -> Vec<MatchCase> {
    let values: [Vec<u8>; 4] =
        std::array::from_fn(|t| distinct_values(&tables[t], &case.rows[t], col));
    let mut out = Vec::new();
    for &n1 in &values[0] {
        for &n2 in &values[1] {
            for &n3 in &values[2] {
                let partial = n1 as u32 + n2 as u32 + n3 as u32;
                if partial > lambda {
                    continue;
                }
                let n4 = lambda - partial;
                if n4 > 255 || values[3].binary_search(&(n4 as u8)).is_err() {
                    continue;
                }
                let ns = [n1, n2, n3, n4 as u8];
                let rows: [Vec<u32>; 4] = std::array::from_fn(|t| {
                    case.rows[t]
                        .iter()
                        .copied()
                        .filter(|&r| tables[t].get(r, col) == ns[t])
                        .collect()
                });
                let mut prefix = case.prefix.clone();
                prefix.push(ns);
                out.push(MatchCase {
                    depth: col,
                    prefix,
                    rows,
                });
            }
        }
    }
    out
}

fn build_tables(files: [&RowFile; 4]) -> [Table<'_>; 4] {
    let weights = hash_weights(files[0].columns());
    files.map(|f| Table::new(f, &weights))
}

/// The cases at the first column: one per `(n1, n2, n3, n4)` of observed
/// values summing to `lambda`, each with the rows carrying those values.
pub fn match_cases(files: [&RowFile; 4], lambda: u32) -> Result<Vec<MatchCase>> {
    let (_, cols) = check_inputs(files)?;
    if cols == 0 {
        return Ok(Vec::new());
    }
    let tables = build_tables(files);
    Ok(first_cases(&tables, lambda))
}

fn first_cases(tables: &[Table; 4], lambda: u32) -> Vec<MatchCase> {
    let root = MatchCase {
        depth: 0,
        prefix: Vec::new(),
        rows: std::array::from_fn(|t| (0..tables[t].file.len() as u32).collect()),
    };
    split_case(tables, &root, 0, lambda)
}

/// Every quadruple via case splitting and pair joins. The result equals
/// [`brute_force_match`] for any threshold and worker count.
pub fn bins_match(files: [&RowFile; 4], lambda: u32, opts: MatchOptions) -> Result<MatchResult> {
    let (v, cols) = check_inputs(files)?;
    let run = || -> MatchResult {
        if cols == 0 {
            // v = 1: no differences to match
            let mut out = Vec::new();
            if lambda == 0 {
                for a in &files[0].rows {
                    for b in &files[1].rows {
                        for c in &files[2].rows {
                            for d in &files[3].rows {
                                out.push([a.block, b.block, c.block, d.block]);
                            }
                        }
                    }
                }
            }
            return MatchResult {
                v,
                lambda,
                quadruples: sort_quadruples(out),
                cases: 0,
            };
        }
        let tables = build_tables(files);
        let cases = first_cases(&tables, lambda);
        let found: Vec<[u32; 4]> = cases
            .par_iter()
            .flat_map_iter(|c| solve_case(&tables, c, lambda, opts.threshold))
            .collect();
        let quads = found
            .into_iter()
            .map(|ix| std::array::from_fn(|t| tables[t].file.rows[ix[t] as usize].block))
            .collect();
        MatchResult {
            v,
            lambda,
            quadruples: sort_quadruples(quads),
            cases: cases.len(),
        }
    };
    if opts.jobs == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Parameters(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

fn solve_case(tables: &[Table; 4], case: &MatchCase, lambda: u32, threshold: u64) -> Vec<[u32; 4]> {
    let sizes = case.rows.each_ref().map(|r| r.len() as u64);
    if sizes.contains(&0) {
        return Vec::new();
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by_key(|&t| sizes[t]);
    let [a, b, c, d] = order;
    if sizes[a] * sizes[d] < threshold && sizes[b] * sizes[c] < threshold {
        return join_case(tables, case, lambda, [a, b, c, d]);
    }
    let next = case.depth + 1;
    if next >= tables[0].cols {
        // every column is pinned, so every combination matches
        return cartesian(&case.rows);
    }
    split_case(tables, case, next, lambda)
        .par_iter()
        .flat_map_iter(|sub| solve_case(tables, sub, lambda, threshold))
        .collect()
}

fn cartesian(rows: &[Vec<u32>; 4]) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for &x in &rows[0] {
        for &y in &rows[1] {
            for &z in &rows[2] {
                for &w in &rows[3] {
                    out.push([x, y, z, w]);
                }
            }
        }
    }
    out
}

/// Joins pairs (a, d) against (b, c) on the residual column sums.
fn join_case(tables: &[Table; 4], case: &MatchCase, lambda: u32, order: [usize; 4]) -> Vec<[u32; 4]> {
    let [a, b, c, d] = order;
    let cols = tables[0].cols;
    let weights = hash_weights(cols);
    let target_hash = linear_hash(&vec![lambda as u8; cols], &weights);
    let lambda = lambda as u16;

    // materialize the smaller pair product, stream the other one
    let first = (a, d);
    let second = (b, c);
    let (built, streamed) = if case.rows[a].len() * case.rows[d].len()
        <= case.rows[b].len() * case.rows[c].len()
    {
        (first, second)
    } else {
        (second, first)
    };

    let (p, q) = built;
    let mut keyed: Vec<(u64, u32, u32)> =
        Vec::with_capacity(case.rows[p].len() * case.rows[q].len());
    for &i in &case.rows[p] {
        let hi = tables[p].hash[i as usize];
        for &j in &case.rows[q] {
            keyed.push((hi.wrapping_add(tables[q].hash[j as usize]), i, j));
        }
    }
    keyed.sort_unstable();

    let (s, t) = streamed;
    let mut out = Vec::new();
    for &i in &case.rows[s] {
        let hi = tables[s].hash[i as usize];
        let ri = tables[s].row(i);
        for &j in &case.rows[t] {
            let want = target_hash
                .wrapping_sub(hi)
                .wrapping_sub(tables[t].hash[j as usize]);
            let start = keyed.partition_point(|e| e.0 < want);
            let rj = tables[t].row(j);
            for &(h, x, y) in &keyed[start..] {
                if h != want {
                    break;
                }
                let rx = tables[p].row(x);
                let ry = tables[q].row(y);
                let exact = (0..cols).all(|col| {
                    ri[col] as u16 + rj[col] as u16 + rx[col] as u16 + ry[col] as u16 == lambda
                });
                if exact {
                    let mut quad = [0u32; 4];
                    quad[s] = i;
                    quad[t] = j;
                    quad[p] = x;
                    quad[q] = y;
                    out.push(quad);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockgen::{collect_rows, CandidateRow};
    use crate::params::Tag;

    fn kkks7() -> [RowFile; 4] {
        let skew = collect_rows(7, 3, Tag::Skew, false).unwrap();
        let one = collect_rows(7, 1, Tag::Symmetric, false).unwrap();
        [skew.clone(), skew.clone(), skew, one]
    }

    #[test]
    fn brute_force_examples() {
        let f = kkks7();
        let files = [&f[0], &f[1], &f[2], &f[3]];
        let r = brute_force_match(files, 3).unwrap();
        let qr = CyclicSubset::new(7, &[1, 2, 4]).unwrap();
        let zero = CyclicSubset::new(7, &[0]).unwrap();
        assert!(r.quadruples.contains(&[qr, qr, qr, zero]));
        assert!(brute_force_match(files, 99).unwrap().is_empty());
        assert_eq!(r.quadruples, bins_match(files, 3, MatchOptions::default()).unwrap().quadruples);
    }

    #[test]
    fn size_guard() {
        let skew = collect_rows(21, 10, Tag::Skew, false).unwrap();
        let s = collect_rows(21, 10, Tag::Symmetric, false).unwrap();
        assert!(matches!(
            brute_force_match([&skew, &skew, &skew, &s], 15),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn v13_kkss_with_k3_6_is_empty() {
        let skew = collect_rows(13, 6, Tag::Skew, false).unwrap();
        let s6 = collect_rows(13, 6, Tag::Symmetric, false).unwrap();
        let s3 = collect_rows(13, 3, Tag::Symmetric, false).unwrap();
        let files = [&skew, &skew, &s6, &s3];
        assert!(brute_force_match(files, 8).unwrap().is_empty());
        for threshold in [1, 10, DEFAULT_THRESHOLD] {
            assert!(bins_match(files, 8, MatchOptions { threshold, jobs: 1 }).unwrap().is_empty());
        }
    }

    fn synthetic(values: &[u8]) -> RowFile {
        // one column (v = 3); blocks are irrelevant to case counting
        RowFile {
            v: 3,
            k: 0,
            kind: Tag::Symmetric,
            bound: None,
            rows: values
                .iter()
                .map(|&x| CandidateRow {
                    block: CyclicSubset::empty(3),
                    row: crate::zv::DifferenceRow::new(3, vec![x]).unwrap(),
                })
                .collect(),
        }
    }

    #[test]
    fn case_counting() {
        let f = synthetic(&[0, 1]);
        let cases = match_cases([&f, &f, &f, &f], 3).unwrap();
        assert_eq!(cases.len(), 4);
        for c in &cases {
            assert_eq!(c.prefix[0].iter().map(|&x| x as u32).sum::<u32>(), 3);
        }
        let empty = synthetic(&[]);
        assert!(match_cases([&f, &f, &empty, &f], 3).unwrap().is_empty());
        let r = bins_match([&f, &f, &empty, &f], 3, MatchOptions::default()).unwrap();
        assert_eq!(r.cases, 0);
        assert!(r.is_empty());

        let k = kkks7();
        let cases = match_cases([&k[0], &k[1], &k[2], &k[3]], 3).unwrap();
        assert!(cases.iter().any(|c| c.prefix[0] == [1, 1, 1, 0]));
    }

    #[test]
    fn cases_partition_the_quadruples() {
        let k = kkks7();
        let files = [&k[0], &k[1], &k[2], &k[3]];
        let cases = match_cases(files, 3).unwrap();
        let t: [usize; 4] = std::array::from_fn(|i| files[i].len());
        let mut hits = 0usize;
        for a in 0..t[0] {
            for b in 0..t[1] {
                for c in 0..t[2] {
                    for d in 0..t[3] {
                        let idx = [a as u32, b as u32, c as u32, d as u32];
                        let n = cases
                            .iter()
                            .filter(|cs| (0..4).all(|x| cs.rows[x].contains(&idx[x])))
                            .count();
                        let col0: u32 = (0..4).map(|x| files[x].rows[idx[x] as usize].row.counts()[0] as u32).sum();
                        assert_eq!(n, (col0 == 3) as usize);
                        hits += n;
                    }
                }
            }
        }
        assert!(hits > 0);
    }
}
