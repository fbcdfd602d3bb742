use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gsdf_bench::fixture;
use gsdf_core::blockgen::collect_rows;
use gsdf_core::equivalence::canonical_form;
use gsdf_core::matcher::{bins_match, MatchOptions};
use gsdf_core::search::{search, SearchOptions};
use gsdf_core::{SymmetryType, Tag};

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("collect_rows");
    for v in [21u32, 25, 29] {
        g.bench_with_input(BenchmarkId::new("skew", v), &v, |b, &v| {
            b.iter(|| collect_rows(v, (v - 1) / 2, Tag::Skew, true).unwrap())
        });
    }
    g.finish();
}

fn matching(c: &mut Criterion) {
    let mut g = c.benchmark_group("bins_match");
    g.sample_size(10);
    for v in [21u32, 25] {
        let (p, files) = fixture(v, SymmetryType::Kkss);
        let refs = [&files[0], &files[1], &files[2], &files[3]];
        for threshold in [1_000u64, 10_000_000] {
            let opts = MatchOptions { threshold, jobs: 0 };
            g.bench_function(BenchmarkId::new(format!("kkss-v{v}"), threshold), |b| {
                b.iter(|| bins_match(black_box(refs), p.lambda, opts).unwrap())
            });
        }
    }
    g.finish();
}

fn classification(c: &mut Criterion) {
    let fams = search(21, SymmetryType::Kkks, SearchOptions::default()).unwrap().families();
    c.bench_function("canonical_form/kkks-v21", |b| {
        b.iter(|| fams.iter().map(canonical_form).count())
    });
}

criterion_group!(benches, generation, matching, classification);
criterion_main!(benches);
