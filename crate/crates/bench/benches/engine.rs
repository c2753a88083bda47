use allotax_bench::{random_pair, rng, zipf_counts};
use allotax_core::{
    assemble, merge_systems, render_svg, rtd_total, tied_ranks, Alpha, RankedList, RenderOptions,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

fn pair(n: usize) -> (RankedList, RankedList) {
    random_pair(&mut rng(n as u64), n, n, 0.6)
}

fn ranking(c: &mut Criterion) {
    let mut group = c.benchmark_group("tied_ranks");
    for n in [10_000, 1_000_000] {
        let counts = zipf_counts(n, 1.0, 1e7);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &counts, |b, counts| {
            b.iter(|| black_box(tied_ranks(counts).unwrap()))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("merge_systems");
    for n in [10_000, 200_000] {
        let (a, b) = pair(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_function(BenchmarkId::from_parameter(n), |bench| {
            bench.iter(|| black_box(merge_systems(&a, &b)))
        });
    }
    group.finish();
}

fn divergence(c: &mut Criterion) {
    let mut group = c.benchmark_group("rtd_total");
    for n in [10_000, 200_000] {
        let (a, b) = pair(n);
        let lex = merge_systems(&a, &b);
        group.throughput(Throughput::Elements(lex.len() as u64));
        for alpha in ["0", "1/3", "inf"] {
            let alpha_value = Alpha::parse(alpha).unwrap();
            group.bench_with_input(BenchmarkId::new(alpha, n), &lex, |b, lex| {
                b.iter(|| black_box(rtd_total(lex, alpha_value).total))
            });
        }
    }
    group.finish();
}

fn document(c: &mut Criterion) {
    let (a, b) = pair(50_000);
    let lex = merge_systems(&a, &b);
    let options = RenderOptions::default();
    c.bench_function("assemble_and_render/50000", |bench| {
        bench.iter(|| {
            let doc = assemble(&lex, Alpha::Finite(0.17), "one", "two", &options).unwrap();
            black_box(render_svg(&doc))
        })
    });
}

criterion_group!(benches, ranking, divergence, document);
criterion_main!(benches);
