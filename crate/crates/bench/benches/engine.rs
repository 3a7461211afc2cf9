use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rendermatch_bench::{chain_text, random_tree_text, sample_pairs};
use rendermatch_core::eval::synthetic;
use rendermatch_core::{
    concept_sim, parse_all_requirements, rank_services, run_eval, ConceptGraph, RankOptions,
    ReasonerConfig, ServiceProfile,
};

fn bench_concept_sim(c: &mut Criterion) {
    let cfg = ReasonerConfig::default();
    let mut group = c.benchmark_group("concept_sim");

    for nodes in [200usize, 2000] {
        let graph = ConceptGraph::parse(&random_tree_text(nodes, 42)).unwrap();
        let pairs = sample_pairs(&graph, 1024, 42);
        group.throughput(Throughput::Elements(pairs.len() as u64));
        group.bench_with_input(BenchmarkId::new("random_tree", nodes), &pairs, |b, pairs| {
            b.iter(|| {
                pairs
                    .iter()
                    .map(|&(x, y)| concept_sim(&graph, x, y, &cfg).value())
                    .sum::<f64>()
            })
        });
    }

    // Two leaves of a 500-deep path share 1 ancestor after walking 999 edges.
    let chain = ConceptGraph::parse(&chain_text(500)).unwrap();
    let deep = chain.resolve("n499").unwrap();
    let shallow = chain.resolve("n1").unwrap();
    group.bench_function("chain_500_worst_case", |b| {
        b.iter(|| concept_sim(&chain, black_box(deep), black_box(shallow), &cfg).value())
    });

    group.finish();
}

fn bench_parse(c: &mut Criterion) {
    let corpus = synthetic::generate(10, 42);
    let graph = ConceptGraph::parse(&corpus.ontology).unwrap();
    let mut group = c.benchmark_group("parse");

    group.throughput(Throughput::Bytes(corpus.ontology.len() as u64));
    group.bench_function("ontology", |b| {
        b.iter(|| ConceptGraph::parse(black_box(&corpus.ontology)).unwrap())
    });

    group.throughput(Throughput::Bytes(corpus.profiles.len() as u64));
    group.bench_function("profiles_100", |b| {
        b.iter(|| ServiceProfile::parse_all(black_box(&corpus.profiles), &graph).unwrap())
    });

    group.finish();
}

fn bench_rank(c: &mut Criterion) {
    let corpus = synthetic::generate(10, 42);
    let (graph, registry, queries, _) = corpus.build().unwrap();
    let snapshot = registry.snapshot();
    let cfg = ReasonerConfig::default();
    let options = RankOptions::default();

    let mut group = c.benchmark_group("rank_services");
    group.throughput(Throughput::Elements(snapshot.len() as u64));
    group.bench_function("one_query_100_services", |b| {
        b.iter(|| rank_services(&graph, &snapshot, black_box(&queries[0]), &cfg, &options).unwrap())
    });
    group.finish();
}

fn bench_eval(c: &mut Criterion) {
    let corpus = synthetic::generate(10, 42);
    let (graph, registry, queries, gold) = corpus.build().unwrap();
    let snapshot = registry.snapshot();
    let cfg = ReasonerConfig::default();

    let mut group = c.benchmark_group("run_eval");
    group.sample_size(20);
    group.throughput(Throughput::Elements(queries.len() as u64));
    group.bench_function("three_approaches_10_queries", |b| {
        b.iter(|| run_eval(&graph, &snapshot, &queries, &gold, 5, &cfg).unwrap())
    });
    group.finish();
}

fn bench_query_parse(c: &mut Criterion) {
    let corpus = synthetic::generate(10, 42);
    let graph = ConceptGraph::parse(&corpus.ontology).unwrap();
    c.bench_function("parse/queries_10", |b| {
        b.iter(|| parse_all_requirements(black_box(&corpus.queries), &graph).unwrap())
    });
}

criterion_group!(
    benches,
    bench_concept_sim,
    bench_parse,
    bench_query_parse,
    bench_rank,
    bench_eval
);
criterion_main!(benches);
