use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ifsdyn::random::{random_alphabet, random_sequence, MapKind};
use ifsdyn::render::ChaosGameConfig;
use ifsdyn::verify::sierpinski;
use ifsdyn::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn distance(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let space = SpaceBox::unit(2).unwrap();
    let a = Arc::new(random_alphabet(&mut rng, &space, 4, MapKind::General { max_ratio: 0.8 }).unwrap());
    let (f, g) = (random_sequence(&mut rng, &a), random_sequence(&mut rng, &a));
    let mut group = c.benchmark_group("sequence_distance");
    for exp in [20, 40, 52] {
        let tol = (-(exp as f64)).exp2();
        group.bench_with_input(BenchmarkId::from_parameter(exp), &tol, |b, &tol| {
            b.iter(|| sequence_distance(black_box(&f), black_box(&g), tol).unwrap())
        });
    }
    group.finish();
}

fn rendering(c: &mut Criterion) {
    let gasket = sierpinski();
    let mut group = c.benchmark_group("render");
    group.sample_size(10);
    group.bench_function("hutchinson_step_512", |b| {
        let full = AttractorRaster::full(gasket.as_alphabet().space(), 512).unwrap();
        b.iter(|| hutchinson_step(black_box(&full), &gasket).unwrap())
    });
    group.bench_function("deterministic_256", |b| {
        b.iter(|| attractor_deterministic(&gasket, 256, 200, 0.0).unwrap())
    });
    group.bench_function("chaos_game_1e6", |b| {
        let config = ChaosGameConfig::new(512, 1_000_000, 42);
        b.iter(|| attractor_chaos_game(&gasket, &config).unwrap())
    });
    group.finish();
}

fn dimension(c: &mut Criterion) {
    let ratios: Vec<f64> = (1..=16).map(|i| 0.02 * i as f64).collect();
    c.bench_function("moran_16", |b| b.iter(|| moran_dimension(black_box(&ratios)).unwrap()));
    let raster = attractor_chaos_game(&sierpinski(), &ChaosGameConfig::new(512, 200_000, 7)).unwrap();
    c.bench_function("box_counting_512", |b| b.iter(|| box_counting_dimension(black_box(&raster)).unwrap()));
}

criterion_group!(benches, distance, rendering, dimension);
criterion_main!(benches);
