use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nctorus::{check_idempotent, oracle_idempotency, verify, BumpProfile, VerifyConfig};
use nctorus_bench::{base_projection, glued_projection, rich_projection};

fn bench_builders(c: &mut Criterion) {
    c.bench_function("power_rieffel M=3", |b| {
        b.iter(|| {
            black_box(
                nctorus::power_rieffel(0.70710678, 3, 0.02, &BumpProfile::Smoothstep).unwrap(),
            )
        })
    });
    c.bench_function("glue+bump chain", |b| {
        b.iter(|| black_box(rich_projection()))
    });
}

fn bench_multiply(c: &mut Criterion) {
    for m in [1, 3, 6] {
        let p = base_projection(m);
        c.bench_function(&format!("multiply p*p, M={m}"), |b| {
            b.iter(|| black_box(p.multiply(&p).unwrap()))
        });
    }
}

fn bench_verify(c: &mut Criterion) {
    let p = glued_projection();
    let cfg = VerifyConfig {
        oracle_trials: 0,
        ..VerifyConfig::default()
    };
    c.bench_function("verify glued (equations)", |b| {
        b.iter(|| black_box(verify(&p, &cfg)))
    });
    c.bench_function("check_idempotent glued", |b| {
        b.iter(|| black_box(check_idempotent(&p, 1024)))
    });
    c.bench_function("oracle 10x50 glued", |b| {
        b.iter(|| black_box(oracle_idempotency(&p, 10, 50, 7)))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_builders, bench_multiply, bench_verify
}
criterion_main!(benches);
