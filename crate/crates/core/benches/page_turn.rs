use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sseq_core::graded_algebra::Window;
use sseq_core::instances::bokstedt::{bokstedt_e2, bokstedt_rule, Ring};
use sseq_core::instances::tate::{
    closed_form, cyclic_algebra, d2_rule, run_propagate, s_range, Flavor, Stage,
};
use sseq_core::par::ExecMode;
use sseq_core::spectral_sequence::turn_page_with;

const MODES: [(&str, ExecMode); 2] = [
    ("parallel", ExecMode::Parallel),
    ("sequential", ExecMode::Sequential),
];

fn d2_turn(c: &mut Criterion) {
    let mut g = c.benchmark_group("d2_turn_tate_cp2");
    let alg = Arc::new(cyclic_algebra(Flavor::Tate, 5, 2).unwrap());
    let (lo, hi) = (-40, 160);
    let (s_lo, s_hi) = s_range(Flavor::Tate, 5, 2, lo, hi).unwrap();
    let page = closed_form(Flavor::Tate, 5, 2, Stage::E2, &alg)
        .unwrap()
        .page(&alg, Window::new(lo, hi, s_lo, s_hi))
        .unwrap();
    let rule = d2_rule(Flavor::Tate);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| turn_page_with(black_box(&page), &rule, m).unwrap())
        });
    }
    g.finish();
}

fn bokstedt_turn(c: &mut Criterion) {
    let mut g = c.benchmark_group("bokstedt_turn_ellmodp");
    let page = bokstedt_e2(5, Ring::EllModP, 0, 120).unwrap();
    let rule = bokstedt_rule(5);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| turn_page_with(black_box(&page), &rule, m).unwrap())
        });
    }
    g.finish();
}

fn full_run(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagate_hofix_cp1");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| run_propagate(Flavor::Hofix, 5, 1, -40, 160, None, m).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, d2_turn, bokstedt_turn, full_run);
criterion_main!(benches);
