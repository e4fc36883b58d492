use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use tcss_core::field::{generate_prime_pair, random_below};
use tcss_core::parallel::map_vec;
use tcss_core::tcss::{share_generation, SchemeParams, Session, Share};
use tcss_core::Execution;

const Q_BITS: u64 = 256;

struct Fixture {
    params: SchemeParams,
    shares: Vec<Share>,
    group: Vec<usize>,
    masks: Vec<BigUint>,
}

fn fixture(n: usize, t: usize) -> Fixture {
    let mut rng = ChaCha20Rng::seed_from_u64(n as u64);
    let primes = generate_prime_pair(n, Q_BITS, &mut rng).unwrap();
    let params = SchemeParams::vandermonde(primes, t, n, None).unwrap();
    let secret = random_below(params.q(), &mut rng);
    let (_, shares) = share_generation(&secret, &params, &mut rng).unwrap();
    let group: Vec<usize> = (1..=n).step_by(2).collect();
    let masks = group
        .iter()
        .map(|_| random_below(params.q(), &mut rng))
        .collect();
    Fixture {
        params,
        shares,
        group,
        masks,
    }
}

fn recover(f: &Fixture, exec: Execution) -> BigUint {
    let session = Session::open(&f.params, &f.group, 1).unwrap();
    let jobs: Vec<(usize, &BigUint)> = f.group.iter().copied().zip(&f.masks).collect();
    let components = map_vec(exec, &jobs, |(i, r)| {
        session
            .construct_component_with_mask(&f.shares[i - 1], &f.params, r)
            .unwrap()
    });
    tcss_core::reconstruct(&components, &session, &f.params)
        .unwrap()
        .into_value()
}

fn reconstruction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reconstruct_m_half_n");
    group.sample_size(10);
    for n in [64usize, 256, 1024] {
        let f = fixture(n, 64.min(n / 2));
        group.bench_with_input(BenchmarkId::new("sequential", n), &f, |b, f| {
            b.iter(|| recover(black_box(f), Execution::Sequential))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", n), &f, |b, f| {
            b.iter(|| recover(black_box(f), Execution::Parallel))
        });
    }
    group.finish();
}

criterion_group!(benches, reconstruction);
criterion_main!(benches);
