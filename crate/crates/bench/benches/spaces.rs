use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use ultraseq_bench::{colombeau, functions, sampled_power, sequences};
use ultraseq_core::genfun::{classify_fun, ln_seminorm};
use ultraseq_core::seqspaces::{classify, ultranorm};
use ultraseq_core::values::Mode;
use ultraseq_core::weights::WeightFamily;

fn symbolic(c: &mut Criterion) {
    let seqs = sequences(200);
    let col = WeightFamily::colombeau();
    let ultra = WeightFamily::ultra(2, 10).unwrap();
    c.bench_function("classify 200 expressions, colombeau", |b| {
        b.iter(|| {
            seqs.iter().for_each(|s| {
                black_box(
                    classify(std::slice::from_ref(black_box(s)), &col, Mode::Standard, 16).unwrap(),
                );
            })
        })
    });
    c.bench_function("classify 200 expressions, ultra 2..10", |b| {
        b.iter(|| {
            seqs.iter().for_each(|s| {
                black_box(
                    classify(
                        std::slice::from_ref(black_box(s)),
                        &ultra,
                        Mode::Standard,
                        16,
                    )
                    .unwrap(),
                );
            })
        })
    });
}

fn sampled(c: &mut Criterion) {
    let s = sampled_power(2.5, -1.0);
    let r = WeightFamily::colombeau().single_weight().unwrap().clone();
    c.bench_function("sampled ultranorm up to 10^6", |b| {
        b.iter(|| ultranorm(black_box(&s), &r).unwrap())
    });
}

fn functions_bench(c: &mut Criterion) {
    let fs = functions(4);
    let space = colombeau();
    let mut g = c.benchmark_group("function sequences");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    g.bench_function("p_2 seminorm at n = 4096", |b| {
        b.iter(|| {
            fs.iter()
                .map(|f| ln_seminorm(f.as_ref(), 4096, 2).unwrap())
                .sum::<f64>()
        })
    });
    g.bench_function("classify one function sequence", |b| {
        b.iter(|| classify_fun(&fs[0], 2, &space).unwrap())
    });
    g.finish();
}

criterion_group!(benches, symbolic, sampled, functions_bench);
criterion_main!(benches);
