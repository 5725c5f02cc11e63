use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rackle::lattice::Strategy;
use rackle::{Config, SubrackLattice};
use rackle_bench::group_rack;

fn enumeration(c: &mut Criterion) {
    let config = Config::default();
    let mut group = c.benchmark_group("enumeration");
    for name in ["D6", "S4", "SL(2,3)", "D4xZ2"] {
        let rack = group_rack(name);
        for (label, strategy) in [("tree", Strategy::Tree), ("next-closure", Strategy::NextClosure)] {
            group.bench_with_input(BenchmarkId::new(label, name), &rack, |b, rack| {
                b.iter(|| SubrackLattice::enumerate_with(rack, &config, strategy).unwrap().len())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
