use criterion::{criterion_group, criterion_main, Criterion};
use fano_core::algebra::PrimeField;
use fano_core::fano::{enumerate_kplanes, CensusOptions};
use fano_core::par::Jobs;
use fano_core::varieties::fermat;

fn census(c: &mut Criterion) {
    let fl = PrimeField::new(13).unwrap();
    let x = fermat(&fl, 3, 3).unwrap();
    let mut group = c.benchmark_group("fermat_cubic_lines_f13");
    group.sample_size(10);
    for (label, jobs) in [("jobs=1", Jobs::SEQUENTIAL), ("jobs=N", Jobs::ALL)] {
        let opts = CensusOptions { jobs, ..CensusOptions::default() };
        group.bench_function(label, |b| {
            b.iter(|| {
                let r = enumerate_kplanes(&x, 1, None, &opts).unwrap();
                assert_eq!(r.count, 27);
            })
        });
    }
    group.finish();
}

criterion_group!(benches, census);
criterion_main!(benches);
