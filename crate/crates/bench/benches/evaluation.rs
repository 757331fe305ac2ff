//! Evaluation-harness benchmarks: agreement metrics on large labelings,
//! grouped dataset splitting, and ridge-scorer fitting.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use scorealign::corpus::{Corpus, Document, ScoreScale};
use scorealign::harness::make_split;
use scorealign::metrics::{evaluate, qwk};
use scorealign::rng::{seeded, uniform_index, ChaCha8Rng};
use scorealign::scorer::{Features, RidgeModel, FEATURE_COUNT};

fn random_labels(rng: &mut ChaCha8Rng, scale: &ScoreScale, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| scale.value_at(uniform_index(rng, scale.categories())))
        .collect()
}

fn bench_metrics(c: &mut Criterion) {
    let scale = ScoreScale::new(0.0, 9.0, 0.5).unwrap();
    let mut rng = seeded(3);
    let golds = random_labels(&mut rng, &scale, 10_000);
    let preds = random_labels(&mut rng, &scale, 10_000);
    c.bench_function("qwk_10k_labels", |b| {
        b.iter(|| qwk(black_box(&golds), black_box(&preds), &scale).unwrap())
    });
    c.bench_function("evaluate_10k_labels", |b| {
        b.iter(|| evaluate(black_box(&golds), black_box(&preds), Some(&scale)).unwrap())
    });
}

fn bench_split(c: &mut Criterion) {
    let documents: Vec<Document> = (0..1_000)
        .map(|i| {
            let mut doc = Document::new(format!("d{i:04}"), "text");
            doc.author_id = Some(format!("a{:03}", i % 300));
            doc
        })
        .collect();
    let corpus = Corpus::new("bench", documents).unwrap();
    c.bench_function("grouped_split_1k_docs", |b| {
        b.iter(|| make_split(black_box(&corpus), 42, true).unwrap())
    });
}

fn bench_ridge_fit(c: &mut Criterion) {
    let mut rng = seeded(4);
    let rows: Vec<Features> = (0..500)
        .map(|_| {
            let mut values = [0.0; FEATURE_COUNT];
            for v in values.iter_mut() {
                *v = uniform_index(&mut rng, 1_000) as f64 / 1_000.0;
            }
            Features { values, has_trees: true }
        })
        .collect();
    let golds: Vec<f64> = (0..500)
        .map(|_| uniform_index(&mut rng, 1_000) as f64 / 1_000.0)
        .collect();
    c.bench_function("ridge_fit_500x11", |b| {
        b.iter(|| RidgeModel::fit(black_box(&rows), black_box(&golds), 1.0).unwrap())
    });
}

criterion_group!(benches, bench_metrics, bench_split, bench_ridge_fit);
criterion_main!(benches);
