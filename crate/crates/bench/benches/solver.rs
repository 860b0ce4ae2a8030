use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ftrl_bandits::solver::{solve, solve_two_arm};
use ftrl_bandits::{DualMapTwoArm, FtrlProblem, Potential};

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for k in [2usize, 5, 20] {
        let cost: Vec<f64> = (0..k).map(|i| 3.0 * i as f64 / k as f64).collect();
        for potential in [Potential::NegEntropy, Potential::TsallisHalf, Potential::hybrid(1.0, k).unwrap()] {
            let problem = FtrlProblem {
                cost: &cost,
                potential,
                learning_rate: 0.7,
                floor: 1.0 / 1000.0,
                round: 1000,
            };
            group.bench_with_input(BenchmarkId::new(potential.name(), k), &problem, |b, p| {
                b.iter(|| solve(black_box(p)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_two_arm(c: &mut Criterion) {
    let cost = [0.0, 1.3];
    let problem = FtrlProblem {
        cost: &cost,
        potential: Potential::hybrid(1.0, 2).unwrap(),
        learning_rate: 0.7,
        floor: 1.0 / 1000.0,
        round: 1000,
    };
    c.bench_function("solve_two_arm/hybrid", |b| b.iter(|| solve_two_arm(black_box(&problem)).unwrap()));
    for potential in [Potential::TsallisHalf, Potential::LogBarrier, Potential::hybrid(1.0, 2).unwrap()] {
        let map = DualMapTwoArm::new(potential, 1.0).at_round(1000);
        c.bench_function(&format!("dual_map/{}", potential.name()), |b| {
            b.iter(|| map.gradient(black_box(-3.7)))
        });
    }
}

criterion_group!(benches, bench_solve, bench_two_arm);
criterion_main!(benches);
