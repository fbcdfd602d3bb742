//! End-to-end exhaustive search: parameter sets, row files, matching,
//! classification and verification for one order and symmetry type.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::blockgen::{collect_rows, RowFile};
use crate::catalog::{Table1Row, Verdict};
use crate::equivalence::{classify, small_classes, EquivalenceClass};
use crate::error::{Error, Result};
use crate::family::TypedFamily;
use crate::matcher::{bins_match, MatchOptions, DEFAULT_THRESHOLD};
use crate::params::{GsParamSet, SymmetryType, Tag};
use crate::verify::certify;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub filter: bool,
    pub threshold: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            filter: true,
            threshold: DEFAULT_THRESHOLD,
            jobs: 0,
        }
    }
}

/// Outcome for one parameter set.
#[derive(Clone, Debug)]
pub struct ParamOutcome {
    pub params: GsParamSet,
    pub file_sizes: [usize; 4],
    pub cases: usize,
    pub families: Vec<TypedFamily>,
    pub classes: Vec<EquivalenceClass>,
    pub small_classes: Vec<EquivalenceClass>,
    /// Every family passed [`certify`].
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub v: u32,
    pub symmetry_type: SymmetryType,
    pub outcomes: Vec<ParamOutcome>,
}

impl SearchReport {
    pub fn family_count(&self) -> usize {
        self.outcomes.iter().map(|o| o.families.len()).sum()
    }

    pub fn class_count(&self) -> usize {
        self.outcomes.iter().map(|o| o.classes.len()).sum()
    }

    pub fn small_class_count(&self) -> usize {
        self.outcomes.iter().map(|o| o.small_classes.len()).sum()
    }

    pub fn verified(&self) -> bool {
        self.outcomes.iter().all(|o| o.verified)
    }

    pub fn families(&self) -> Vec<TypedFamily> {
        self.outcomes.iter().flat_map(|o| o.families.iter().cloned()).collect()
    }

    /// Plain-text report, one paragraph per parameter set.
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "search v={} type={}", self.v, self.symmetry_type).unwrap();
        if self.outcomes.is_empty() {
            writeln!(s, "no parameter set admits this type").unwrap();
        }
        for o in &self.outcomes {
            writeln!(s, "{}", o.params).unwrap();
            writeln!(
                s,
                "  rows {} {} {} {}; cases {}",
                o.file_sizes[0], o.file_sizes[1], o.file_sizes[2], o.file_sizes[3], o.cases
            )
            .unwrap();
            if o.families.is_empty() {
                writeln!(s, "  no solutions").unwrap();
                continue;
            }
            writeln!(
                s,
                "  families {}; classes {}; small classes {}; verified {}",
                o.families.len(),
                o.classes.len(),
                o.small_classes.len(),
                if o.verified { "yes" } else { "NO" }
            )
            .unwrap();
            for (i, c) in o.classes.iter().enumerate() {
                let blocks: Vec<String> =
                    c.representative.blocks.iter().map(|b| b.to_string()).collect();
                writeln!(s, "  class {} (size {}): {}", i + 1, c.size(), blocks.join(" ")).unwrap();
            }
        }
        writeln!(
            s,
            "total families {}; classes {}; small classes {}",
            self.family_count(),
            self.class_count(),
            self.small_class_count()
        )
        .unwrap();
        s
    }
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if jobs == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Parameters(format!("thread pool: {e}")))?;
    pool.install(f)
}

/// Row files for the standard positional tags of `ty`.
pub fn row_files(p: &GsParamSet, ty: SymmetryType, filter: bool) -> Result<[RowFile; 4]> {
    if !ty.admits(p) {
        return Err(Error::Parameters(format!("{p} does not admit type {ty}")));
    }
    let tags = ty.tags();
    let mut cache: HashMap<(u32, Tag), RowFile> = HashMap::new();
    for (&k, &tag) in p.k.iter().zip(&tags) {
        if let Entry::Vacant(e) = cache.entry((k, tag)) {
            e.insert(collect_rows(p.v, k, tag, filter)?);
        }
    }
    Ok(std::array::from_fn(|i| cache[&(p.k[i], tags[i])].clone()))
}

/// All families of one parameter set with the standard tags of `ty`.
pub fn search_params(p: &GsParamSet, ty: SymmetryType, opts: SearchOptions) -> Result<ParamOutcome> {
    with_jobs(opts.jobs, || {
        let files = row_files(p, ty, opts.filter)?;
        let m = bins_match(
            [&files[0], &files[1], &files[2], &files[3]],
            p.lambda,
            MatchOptions {
                threshold: opts.threshold,
                jobs: 0,
            },
        )?;
        let tags = ty.tags();
        let families = m
            .quadruples
            .iter()
            .map(|q| TypedFamily::new(*p, *q, tags))
            .collect::<Result<Vec<_>>>()?;
        let verified = families.iter().all(|f| certify(f).passed());
        Ok(ParamOutcome {
            params: *p,
            file_sizes: files.each_ref().map(|f| f.len()),
            cases: m.cases,
            classes: classify(&families),
            small_classes: small_classes(&families),
            families,
            verified,
        })
    })
}

/// Every admitted parameter set of order `v`.
pub fn search(v: u32, ty: SymmetryType, opts: SearchOptions) -> Result<SearchReport> {
    let outcomes = ty
        .param_sets(v)?
        .iter()
        .map(|p| search_params(p, ty, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport {
        v,
        symmetry_type: ty,
        outcomes,
    })
}

/// Recomputes one existence verdict by exhaustive search.
pub fn verdict(p: &GsParamSet, ty: SymmetryType, opts: SearchOptions) -> Result<Verdict> {
    if !ty.admits(p) {
        return Ok(Verdict::NotApplicable);
    }
    let o = search_params(p, ty, opts)?;
    Ok(if o.families.is_empty() {
        Verdict::No
    } else {
        Verdict::Yes
    })
}

/// Recomputed verdicts for one table row, ordered like [`SymmetryType::ALL`].
pub fn recompute_row(row: &Table1Row, opts: SearchOptions) -> Result<[Verdict; 3]> {
    let mut out = [Verdict::NotApplicable; 3];
    for (slot, ty) in out.iter_mut().zip(SymmetryType::ALL) {
        *slot = verdict(&row.params, ty, opts)?;
    }
    Ok(out)
}
