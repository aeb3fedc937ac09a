use criterion::{criterion_group, criterion_main, Criterion};
use kim_core::connection::{build_universal, Chart};
use kim_core::exactalg::{q, qi};
use kim_core::formalgroup::{formal_group_law, formal_log, log_exp_pair, WeierstrassCurve};
use kim_core::liecore::graded_dims;
use kim_core::transport::{compute_theta, solve_j, verify_theta_identity};
use kim_core::{LieAlgebra, LieAlgebraSpec, Quotient};
use std::hint::black_box;

fn lie_bench(c: &mut Criterion) {
    c.bench_function("free_dims_m3_c8", |b| b.iter(|| graded_dims(black_box(&LieAlgebraSpec::free(3, 8))).unwrap()));
    c.bench_function("metabelian_m2_c8", |b| {
        b.iter(|| LieAlgebra::new(black_box(LieAlgebraSpec::new(2, 8, Quotient::metabelian()))).unwrap())
    });
}

fn transport_bench(c: &mut Criterion) {
    let line = build_universal(&Chart::thrice_punctured(1), 4).unwrap();
    c.bench_function("solve_j_line_depth4_order10", |b| b.iter(|| solve_j(black_box(&line), &[q(1, 2)], 10).unwrap()));
    let square = build_universal(&Chart::thrice_punctured(2), 2).unwrap();
    c.bench_function("theta_identity_square_depth2", |b| b.iter(|| verify_theta_identity(&compute_theta(black_box(&square)))));
}

fn formal_group_bench(c: &mut Criterion) {
    let e = WeierstrassCurve::new(qi(0), qi(0), qi(1), qi(-1), qi(0)).unwrap();
    c.bench_function("log_exp_order20", |b| b.iter(|| log_exp_pair(black_box(&e), 20).unwrap()));
    c.bench_function("group_law_order10", |b| b.iter(|| formal_group_law(black_box(&e), 10).unwrap()));
    c.bench_function("formal_log_order40", |b| b.iter(|| formal_log(black_box(&e), 40).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = lie_bench, transport_bench, formal_group_bench
}
criterion_main!(benches);
