use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use macfcs_bench::{clustered_topology, dense_system, unit_topology, unit_triple};
use macfcs_core::{df_constraints, feasible_split, DfSplit, SearchConfig, Strategy, VariableSet};

fn mutual_info(c: &mut Criterion) {
    let mut group = c.benchmark_group("mutual_info");
    for n in [4usize, 8, 16] {
        let sys = dense_system(n);
        let third = n / 3;
        let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
        let pick = |r: std::ops::Range<usize>| -> VariableSet {
            r.map(|i| sys.id(&names[i]).unwrap()).collect()
        };
        let (a, b, cond) = (pick(0..third), pick(third..2 * third), pick(2 * third..n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| {
                sys.mutual_info(black_box(&a), black_box(&b), black_box(&cond))
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn df_evaluation(c: &mut Criterion) {
    let topo = unit_topology();
    let triple = unit_triple();
    let split = DfSplit::new([0.3, 0.1, 0.1, 0.5], [0.3, 0.1, 0.1, 0.5]).unwrap();
    c.bench_function("df_constraints", |b| {
        b.iter(|| df_constraints(black_box(&topo), black_box(&triple), black_box(&split)).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let topo = clustered_topology();
    let triple = unit_triple();
    let cfg = SearchConfig::default();
    let mut group = c.benchmark_group("feasible_split");
    group.sample_size(10);
    for s in [Strategy::Df, Strategy::Cf] {
        group.bench_function(s.name(), |b| {
            b.iter(|| feasible_split(s, &topo, &triple, [4.0, 4.0], &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, mutual_info, df_evaluation, search);
criterion_main!(benches);
