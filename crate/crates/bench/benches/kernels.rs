use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use sakai_core::dynamics::{base_points_verify, theorem1_check, XYState};
use sakai_core::lattice::{realize_word, Generator, Word};
use sakai_core::orthopoly::{base_moments, extend_moments, recurrence_from_moments, WeightParams};
use sakai_core::scalars::{rat, QuadExt};

fn quad_arithmetic(c: &mut Criterion) {
    let a = QuadExt::new(rat(355, 113), rat(-22, 7));
    let b = QuadExt::new(rat(-17, 9), rat(3, 41));
    c.bench_function("quad mul+inv", |bch| bch.iter(|| black_box(&a * &b).inv().unwrap()));
}

fn words(c: &mut Criterion) {
    use Generator::*;
    let word = Word::new(vec![Sigma1, Sigma2, W2, W1, W0, W1, Sigma2, W2]);
    c.bench_function("realize_word len 8", |bch| bch.iter(|| realize_word(black_box(&word)).unwrap()));
}

fn dynamics(c: &mut Criterion) {
    let q = QuadExt::from_rational;
    let st = XYState::new(q(rat(1, 2)), q(rat(1, 3)), q(rat(5, 2)), QuadExt::new(rat(2, 7), rat(1, 5)), q(rat(-3, 4)));
    c.bench_function("theorem1_check", |bch| bch.iter(|| theorem1_check(black_box(&st)).unwrap()));
    c.bench_function("base_points_verify", |bch| {
        bch.iter(|| base_points_verify(black_box(&rat(1, 2)), &rat(1, 1), &rat(3, 1)).unwrap())
    });
}

fn recurrence(c: &mut Criterion) {
    let params = WeightParams::new(rat(1, 2), rat(1, 1), 320).unwrap();
    let (mu0, mu1) = base_moments(&params).unwrap();
    let moments = extend_moments(&mu0, &mu1, &params, 41).unwrap();
    c.bench_function("quadrature base moments 320 bits", |bch| bch.iter(|| base_moments(black_box(&params)).unwrap()));
    c.bench_function("chebyshev N=20 320 bits", |bch| bch.iter(|| recurrence_from_moments(black_box(&moments), 20).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = quad_arithmetic, words, dynamics, recurrence
}
criterion_main!(benches);
