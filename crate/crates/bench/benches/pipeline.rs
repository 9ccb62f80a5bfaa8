use criterion::{criterion_group, criterion_main, Criterion};
use knotfoam_core::foam::relation_fixtures;
use knotfoam_core::{
    braid_to_pd, build_complex, build_lee, integral_homology, kauffman_oracle, lee_rank, s_invariant, Flavor,
};

fn diagrams(c: &mut Criterion) {
    let cases = [("3_1", vec![1, 1, 1], 2), ("8_19", vec![1, 2, 1, 2, 1, 2, 1, 2], 3), ("T(2,9)", vec![1; 9], 2)];
    for (name, word, strands) in cases {
        let pd = braid_to_pd(&word, strands).unwrap();
        let kh = build_complex(&pd, Flavor::Kh).unwrap();
        c.bench_function(&format!("{name}/complex"), |b| b.iter(|| build_complex(&pd, Flavor::Kh).unwrap()));
        c.bench_function(&format!("{name}/homology"), |b| b.iter(|| integral_homology(&kh).unwrap()));
        c.bench_function(&format!("{name}/kauffman"), |b| b.iter(|| kauffman_oracle(&pd).unwrap()));
        let lee = build_lee(&pd).unwrap();
        c.bench_function(&format!("{name}/lee-rank"), |b| b.iter(|| lee_rank(&lee, 1).unwrap()));
        c.bench_function(&format!("{name}/s"), |b| b.iter(|| s_invariant(&pd).unwrap()));
    }
}

fn relations(c: &mut Criterion) {
    let fixtures = relation_fixtures();
    c.bench_function("relations/max-dots-2", |b| {
        b.iter(|| fixtures.iter().all(|f| f.verify(2).unwrap().passed()))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = diagrams, relations
}
criterion_main!(benches);
