use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use namedict::builder::{build, BuildOptions, Strategy};
use namedict::editdist::{levenshtein_chars, within_chars};
use namedict::rules::RuleTable;
use namedict::synth::{self, SynthConfig};

fn corpus(size: usize) -> Vec<namedict::NameRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let config = SynthConfig { size, variants_per_name: 8, ..Default::default() };
    synth::corpus(&RuleTable::default(), &synth::seed_names(), config, &mut rng)
}

fn bench_build(c: &mut Criterion) {
    let table = RuleTable::default();
    let mut group = c.benchmark_group("build");
    group.sample_size(10);
    for size in [500usize, 2000] {
        let records = corpus(size);
        for strategy in [Strategy::Indexed, Strategy::LengthSweep] {
            group.bench_with_input(BenchmarkId::new(format!("{strategy:?}"), size), &records, |b, r| {
                b.iter(|| build(r, &table, BuildOptions { jobs: 1, strategy }).unwrap())
            });
        }
    }
    group.finish();
}

/// Scanning every stored name with a distance computation, the per-query
/// cost a dictionary avoids.
fn bench_online_scan(c: &mut Criterion) {
    let records = corpus(2000);
    let names: Vec<Vec<char>> = records.iter().map(|r| r.name.chars()).collect();
    let query: Vec<char> = "رولا".chars().collect();
    c.bench_function("online_scan_full_distance", |b| {
        b.iter(|| names.iter().filter(|n| levenshtein_chars(&query, n) <= 1).count())
    });
    c.bench_function("online_scan_banded", |b| {
        b.iter(|| names.iter().filter(|n| within_chars(&query, n, 1)).count())
    });
}

criterion_group!(benches, bench_build, bench_online_scan);
criterion_main!(benches);
