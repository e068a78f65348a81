use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holonomy_core::family::{project, Chart};
use holonomy_core::measure::integrate;
use holonomy_core::{
    make_spin_network, Alphabet, CharLabel, CylFunction, Expression, FiniteTable, GroupDescriptor, MeasureSpec,
    Method, TameSubgroupoid,
};
use num_complex::Complex64;

fn chain(n: usize) -> Alphabet {
    let vertices: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
    Alphabet::new(vertices, (0..n).map(|i| (format!("a{i}"), format!("v{i}"), format!("v{}", i + 1)))).unwrap()
}

fn monte_carlo(c: &mut Criterion) {
    let al = chain(2);
    let su2 = GroupDescriptor::su2();
    let f = make_spin_network(su2, al.top_subgroupoid(), vec![CharLabel(1), CharLabel(2)]).unwrap();
    let mut group = c.benchmark_group("mc_su2_spin_network");
    group.sample_size(10);
    for workers in [1usize, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &workers| {
            let method = Method::MonteCarlo { samples: 100_000, seed: 1, workers };
            b.iter(|| integrate(black_box(f.function()), &MeasureSpec::Uniform, method).unwrap())
        });
    }
    group.finish();
}

fn exact_table(c: &mut Criterion) {
    let al = chain(4);
    let z3 = GroupDescriptor::cyclic(3).unwrap();
    let table = FiniteTable::from_fn(3, 4, |r| Complex64::new(f64::from(r.iter().sum::<u32>()), 0.0)).unwrap();
    let f = CylFunction::new(z3, al.top_subgroupoid(), Expression::Table(table)).unwrap();
    c.bench_function("exact_z3_table_4_slots", |b| {
        b.iter(|| integrate(black_box(&f), &MeasureSpec::Uniform, Method::Exact).unwrap())
    });
}

fn projection(c: &mut Criterion) {
    let mut group = c.benchmark_group("project_onto_path");
    for n in [4usize, 16, 64] {
        let al = chain(n);
        let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        let coarse = TameSubgroupoid::new(vec![al.edge(&names).unwrap()]).unwrap();
        let fine = al.top_subgroupoid();
        let su2 = GroupDescriptor::su2();
        let chart = Chart::new(su2, vec![su2.quaternion(0.6, 0.0, 0.8, 0.0).unwrap(); n]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| project(black_box(&coarse), &fine, black_box(&chart)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, exact_table, projection);
criterion_main!(benches);
