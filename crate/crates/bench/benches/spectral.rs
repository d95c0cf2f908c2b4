use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use tsspec_bench::{eight_points, four_points, mixed, two_segments};
use tsspec_core::inverse::{roundtrip_check, spectral_data};
use tsspec_core::propagation::{d_functions, EntireEval};
use tsspec_core::spectral::{find_spectrum, weight_numbers};
use tsspec_core::DataKind;

fn exact(c: &mut Criterion) {
    let (ts4, q4) = four_points();
    let (ts8, q8) = eight_points();
    c.bench_function("theta_exact_4", |b| b.iter(|| d_functions(black_box(&ts4), &q4, 1).unwrap()));
    c.bench_function("theta_exact_8", |b| b.iter(|| d_functions(black_box(&ts8), &q8, 1).unwrap()));
    c.bench_function("spectrum_exact_8", |b| b.iter(|| find_spectrum(black_box(&ts8), &q8, 1, 0.0).unwrap()));
    let mut g = c.benchmark_group("roundtrip_8");
    for kind in DataKind::ALL {
        g.bench_function(kind.name(), |b| b.iter(|| assert!(roundtrip_check(black_box(&ts8), &q8, kind).exact_match)));
    }
    g.finish();
    c.bench_function("spectral_data_two_spectra_8", |b| {
        b.iter(|| spectral_data(black_box(&ts8), &q8, DataKind::TwoSpectra).unwrap())
    });
}

fn numeric(c: &mut Criterion) {
    let (ts, q) = two_segments();
    let eval = EntireEval::new(&ts, &q).unwrap();
    c.bench_function("theta_numeric_two_segments", |b| {
        b.iter(|| eval.theta(black_box(Complex64::from(250.0))).unwrap())
    });
    let mut g = c.benchmark_group("spectrum_numeric");
    g.sample_size(10);
    g.bench_function("two_segments_900", |b| b.iter(|| find_spectrum(black_box(&ts), &q, 1, 900.0).unwrap()));
    let (tm, qm) = mixed();
    g.bench_function("mixed_900", |b| b.iter(|| find_spectrum(black_box(&tm), &qm, 0, 900.0).unwrap()));
    let s1 = find_spectrum(&tm, &qm, 1, 900.0).unwrap();
    g.bench_function("weights_mixed_900", |b| b.iter(|| weight_numbers(black_box(&tm), &qm, &s1).unwrap()));
    g.finish();
}

criterion_group!(benches, exact, numeric);
criterion_main!(benches);
