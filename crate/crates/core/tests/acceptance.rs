//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use tcss_core::analysis::{
    enumerate_linear_combination, enumerate_mixed_combination, forged_token_acceptance,
    ipa_success_probability, leakage_below_threshold, probability_bound, subset_component_leakage,
    AnalysisConfig, ForgeStrategy, Probability, TinyScheme,
};
use tcss_core::field::{generate_prime_pair, next_prime, random_below, FieldElement, PrimePair};
use tcss_core::groupauth::token_generation;
use tcss_core::netsim::{run_session, AgentOutcome, Mode, ParticipantAgent, SessionConfig};
use tcss_core::tcss::{reconstruct, share_generation, DealerSecret, SchemeParams, Session, Share};

const ROUND_TRIP_TRIALS: usize = 1_000;
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(10);
const UNIFORMITY_LIMIT: Duration = Duration::from_secs(30);
/// Moduli above this get random coefficient tuples instead of all of them.
const EXHAUSTIVE_COEFF_MAX_P: u64 = 7;
const RANDOM_COEFF_TUPLES: usize = 100;
const AUTH_SESSIONS: usize = 500;
/// Half-width of the band, in standard deviations, that the sampled
/// rejection rate must share with the exact one.
const SAMPLING_SIGMAS: f64 = 4.0;
/// Production-size acceptance bound is `2^-PRODUCTION_BOUND_BITS`.
const PRODUCTION_BOUND_BITS: u64 = 240;
const PRODUCTION_Q_BITS: u64 = 256;
const SHARE_SIZE_PAIRS: usize = 100;
const SMOKE_N: usize = 1024;
const SMOKE_M: usize = 512;
const SMOKE_T: usize = 64;
const SMOKE_LIMIT: Duration = Duration::from_secs(5);

struct Outcome {
    pass: bool,
    detail: String,
}

fn exact() -> AnalysisConfig {
    AnalysisConfig {
        fallback_samples: None,
        ..AnalysisConfig::default()
    }
}

fn matching_pair(n: usize, q: u64) -> PrimePair {
    let q = BigUint::from(q);
    let p = next_prime(&(&q * &q * BigUint::from(n)));
    PrimePair::new(p, q, n).expect("next prime above n q^2")
}

fn round_trip() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let mut configs = Vec::new();
    for (t, n) in [(2usize, 3usize), (3, 5), (2, 5)] {
        for q in [5u64, 11, 251] {
            let primes = matching_pair(n, q);
            configs.push(SchemeParams::vandermonde(primes, t, n, None).unwrap());
        }
    }
    let (mut ok, mut total) = (0usize, 0usize);
    for trial in 0..ROUND_TRIP_TRIALS {
        let params = &configs[trial % configs.len()];
        let secret = random_below(params.q(), &mut rng);
        let (_, shares) = share_generation(&secret, params, &mut rng).unwrap();
        for m in params.t()..=params.n() {
            let mut indices: Vec<usize> = (1..=params.n()).collect();
            for i in (1..indices.len()).rev() {
                indices.swap(i, rng.gen_range(0..=i));
            }
            indices.truncate(m);
            let session = Session::open(params, &indices, trial as u64).unwrap();
            let components: Vec<_> = indices
                .iter()
                .map(|&i| {
                    session
                        .construct_component(&shares[i - 1], params, &mut rng)
                        .unwrap()
                })
                .collect();
            total += 1;
            if reconstruct(&components, &session, params).map(|s| s.into_value())
                == Ok(secret.clone())
            {
                ok += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    Outcome {
        pass: ok == total && elapsed < ROUND_TRIP_LIMIT,
        detail: format!(
            "{ok}/{total} reconstructions over {ROUND_TRIP_TRIALS} trials in {:.2?}",
            elapsed
        ),
    }
}

fn hand_trace() -> Outcome {
    let primes = PrimePair::new(BigUint::from(79u8), BigUint::from(5u8), 3).unwrap();
    let params = SchemeParams::vandermonde(primes, 2, 3, None).unwrap();
    let dealer = DealerSecret::from_vector(vec![2u8.into(), 1u8.into()], &params).unwrap();
    let shares = dealer.shares(&params);
    let values = |xs: &[FieldElement]| -> Vec<u64> {
        xs.iter().map(|x| x.value().to_u64().unwrap()).collect()
    };

    let share_values: Vec<u64> = shares
        .iter()
        .map(|s| s.value().value().to_u64().unwrap())
        .collect();
    let pair = Session::open(&params, &[1, 2], 0).unwrap();
    let triple = Session::open(&params, &[1, 2, 3], 0).unwrap();
    let b2 = values(pair.coefficients().coefficients());
    let b3 = values(triple.coefficients().coefficients());
    let c: Vec<_> = [(0usize, 2u8), (1, 4)]
        .iter()
        .map(|&(i, r)| {
            pair.construct_component_with_mask(&shares[i], &params, &BigUint::from(r))
                .unwrap()
        })
        .collect();
    let c_values: Vec<u64> = c
        .iter()
        .map(|c| c.value().value().to_u64().unwrap())
        .collect();
    let secret = reconstruct(&c, &pair, &params)
        .unwrap()
        .value()
        .to_u64()
        .unwrap();

    let pass = dealer.secret().value() == &BigUint::from(3u8)
        && share_values == [4, 5, 6]
        && b2 == [2, 78]
        && b3 == [3, 76, 1]
        && c_values == [18, 15]
        && secret == 3;
    Outcome {
        pass,
        detail: format!(
            "shares {share_values:?}, b {b2:?} and {b3:?}, c {c_values:?}, secret {secret}"
        ),
    }
}

fn nonzero_tuples(p: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..p).map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}

fn coefficient_tuples(p: u64, k: usize, rng: &mut ChaCha20Rng) -> Vec<Vec<u64>> {
    if p <= EXHAUSTIVE_COEFF_MAX_P {
        nonzero_tuples(p, k)
    } else {
        (0..RANDOM_COEFF_TUPLES)
            .map(|_| (0..k).map(|_| rng.gen_range(1..p)).collect())
            .collect()
    }
}

fn uniformity() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (mut checked, mut failures) = (0usize, 0usize);
    for p in [3u64, 5, 7, 11, 13] {
        for k in 1..=3 {
            for coeffs in coefficient_tuples(p, k, &mut rng) {
                let r = enumerate_linear_combination(&coeffs, p, &exact()).unwrap();
                checked += 1;
                failures += usize::from(!(r.uniform && r.method.is_exact()));
            }
            // Mixed: at least one F_p variable, the rest over [0, q).
            for q in [3u64, 5, 7, 11, 13].into_iter().filter(|&q| q <= p) {
                for split in 1..=k {
                    for coeffs in coefficient_tuples(p, k, &mut rng) {
                        let (a, b) = coeffs.split_at(split);
                        let r = enumerate_mixed_combination(a, b, p, q, &exact()).unwrap();
                        checked += 1;
                        failures += usize::from(!(r.uniform && r.method.is_exact()));
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed();
    Outcome {
        pass: failures == 0 && elapsed < UNIFORMITY_LIMIT,
        detail: format!("{checked} enumerations, {failures} not exactly uniform, {elapsed:.2?}"),
    }
}

fn below_threshold() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, q) in [(19u64, 3u64), (79, 5)] {
        let scheme = TinyScheme::new(p, q, 2, 2).unwrap();
        for known in [1usize, 2] {
            let r = leakage_below_threshold(&scheme, &[known], &exact()).unwrap();
            pass &= r.within_bounds;
            parts.push(format!(
                "({p},{q}) share {known}: guess {} <= {}, I {:.6} <= {:.6} bits, max posterior {}",
                r.success_probability.unwrap(),
                r.probability_bound,
                r.mutual_information.unwrap(),
                r.information_bound,
                r.max_posterior.unwrap()
            ));
        }
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn impersonation() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [2usize, 3] {
        let scheme = TinyScheme::new(19, 3, 2, m).unwrap();
        let forged =
            ipa_success_probability(&scheme, m, ForgeStrategy::Exhaustive, &exact()).unwrap();
        let honest = ipa_success_probability(&scheme, m, ForgeStrategy::Honest, &exact()).unwrap();
        let ipa = forged.ipa.as_ref().unwrap();
        pass &= forged.within_bounds && honest.success_probability == Some(Probability::one());
        parts.push(format!(
            "m={m}: best forgery {} (<= {}), mean {}, honest {}, guess from view {}",
            forged.success_probability.unwrap(),
            forged.probability_bound,
            ipa.mean_forgery_success.unwrap(),
            honest.success_probability.unwrap(),
            ipa.view_guess_probability.unwrap()
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn threshold_change() -> Outcome {
    let scheme = TinyScheme::new(19, 3, 2, 3).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for j in 0..=3 {
        let r = subset_component_leakage(&scheme, 3, j, &exact()).unwrap();
        pass &= r.within_bounds;
        let infos: Vec<String> = r
            .subsets
            .iter()
            .map(|s| format!("{:?}={:.6}", s.observed, s.mutual_information.unwrap()))
            .collect();
        parts.push(format!("j={j}: {}", infos.join(" ")));
    }
    Outcome {
        pass,
        detail: format!(
            "{} (bound {:.6} bits for proper subsets, log2 3 = {:.6} for all)",
            parts.join("; "),
            scheme.information_bound(),
            3f64.log2()
        ),
    }
}

fn group_authentication() -> Outcome {
    let primes = PrimePair::new(BigUint::from(79u8), BigUint::from(5u8), 3).unwrap();
    let params = SchemeParams::vandermonde(primes, 2, 3, None).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let (mut honest_accepted, mut keys_agree, mut forged_rejected) = (0usize, 0usize, 0usize);
    for _ in 0..AUTH_SESSIONS {
        let issue = token_generation(&params, &mut rng).unwrap();
        let m = rng.gen_range(2..=3);
        let group: Vec<usize> = if m == 3 {
            vec![1, 2, 3]
        } else {
            let skip = rng.gen_range(1..=3);
            (1..=3).filter(|&i| i != skip).collect()
        };
        let config = SessionConfig::new(Mode::Authentication(issue.commitment.clone()));

        let honest: Vec<_> = group
            .iter()
            .map(|&i| ParticipantAgent::honest(issue.tokens[i - 1].clone()))
            .collect();
        let transcript = run_session(&params, &honest, &config, &mut rng).unwrap();
        let verdicts: Vec<_> = transcript
            .outcomes
            .iter()
            .filter_map(|(_, o)| match o {
                AgentOutcome::Verdict(v) => Some(v.clone()),
                _ => None,
            })
            .collect();
        if verdicts.len() == m && verdicts.iter().all(|v| v.accepted) {
            honest_accepted += 1;
            if verdicts
                .windows(2)
                .all(|w| w[0].group_key == w[1].group_key)
            {
                keys_agree += 1;
            }
        }

        // The last member's token is replaced by a different value.
        let last = *group.last().unwrap();
        let real = issue.tokens[last - 1].value().value().clone();
        let fake = loop {
            let x = random_below(params.p(), &mut rng);
            if x != real {
                break x;
            }
        };
        let mut agents = honest[..m - 1].to_vec();
        agents.push(ParticipantAgent::honest(Share::new(last, fake, &params)));
        let transcript = run_session(&params, &agents, &config, &mut rng).unwrap();
        match transcript.outcome(group[0]) {
            Some(AgentOutcome::Verdict(v)) if !v.accepted => forged_rejected += 1,
            _ => {}
        }
    }

    let floor = Probability::one().0 - probability_bound(79, 5).0;
    let scheme = TinyScheme::new(79, 5, 2, 3).unwrap();
    let exact_rejection = [2usize, 3]
        .iter()
        .map(|&m| {
            Probability::one().0
                - forged_token_acceptance(&scheme, m, &exact())
                    .unwrap()
                    .success_probability
                    .unwrap()
                    .0
        })
        .min()
        .unwrap();
    let exact_f = *exact_rejection.numer() as f64 / *exact_rejection.denom() as f64;
    let measured = forged_rejected as f64 / AUTH_SESSIONS as f64;
    let sigma = (exact_f * (1.0 - exact_f) / AUTH_SESSIONS as f64).sqrt();
    let consistent = (measured - exact_f).abs() <= SAMPLING_SIGMAS * sigma;
    let floor_f = *floor.numer() as f64 / *floor.denom() as f64;
    let sample_clears = if measured >= floor_f {
        "clears"
    } else {
        "misses"
    };

    let production = production_bound_holds();

    let pass = honest_accepted == AUTH_SESSIONS
        && keys_agree == AUTH_SESSIONS
        && exact_rejection >= floor
        && consistent
        && production;
    Outcome {
        pass,
        detail: format!(
            "honest {honest_accepted}/{AUTH_SESSIONS} accepted, keys agree {keys_agree}/{AUTH_SESSIONS}; \
             forged rejection exact {}/{} ({exact_f:.4}) >= {}/{}, sampled {measured:.4} over {AUTH_SESSIONS} \
             (within {SAMPLING_SIGMAS} sigma of exact: {consistent}, sample alone {sample_clears} the floor); production bound <= 2^-{PRODUCTION_BOUND_BITS}: {production}",
            exact_rejection.numer(),
            exact_rejection.denom(),
            floor.numer(),
            floor.denom()
        ),
    }
}

/// `(floor(p/q) + 1) / p <= 2^-240` for a generated production-size pair.
fn production_bound_holds() -> bool {
    let mut rng = ChaCha20Rng::seed_from_u64(240);
    let pair = generate_prime_pair(3, PRODUCTION_Q_BITS, &mut rng).unwrap();
    let (num, den) = pair.leakage_bound();
    (num << PRODUCTION_BOUND_BITS) <= den
}

fn share_size() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let bits = [16u64, 32, 64];
    let mut inside = 0usize;
    let mut worst = (f64::MAX, 0f64);
    for k in 0..SHARE_SIZE_PAIRS {
        let n = rng.gen_range(2..=10);
        let pair = generate_prime_pair(n, bits[k % bits.len()], &mut rng).unwrap();
        let ratio = pair.p().bits() as f64 / pair.q().bits() as f64;
        worst = (worst.0.min(ratio), worst.1.max(ratio));
        // (2, 3] in integers: 2 bq < bp <= 3 bq.
        let (bp, bq) = (pair.p().bits(), pair.q().bits());
        inside += usize::from(2 * bq < bp && bp <= 3 * bq);
    }
    Outcome {
        pass: inside == SHARE_SIZE_PAIRS,
        detail: format!(
            "{inside}/{SHARE_SIZE_PAIRS} pairs with bits(p)/bits(q) in (2, 3], observed range [{:.3}, {:.3}]",
            worst.0, worst.1
        ),
    }
}

fn smoke() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let primes = generate_prime_pair(SMOKE_N, PRODUCTION_Q_BITS, &mut rng).unwrap();
    let params = SchemeParams::vandermonde(primes, SMOKE_T, SMOKE_N, None).unwrap();
    let secret = random_below(params.q(), &mut rng);
    let (_, shares) = share_generation(&secret, &params, &mut rng).unwrap();
    let group: Vec<usize> = (1..=SMOKE_N).step_by(SMOKE_N / SMOKE_M).collect();

    let started = Instant::now();
    let session = Session::open(&params, &group, 1).unwrap();
    let components: Vec<_> = group
        .iter()
        .map(|&i| {
            session
                .construct_component(&shares[i - 1], &params, &mut rng)
                .unwrap()
        })
        .collect();
    let recovered = reconstruct(&components, &session, &params).unwrap();
    let elapsed = started.elapsed();
    Outcome {
        pass: recovered.value() == &secret && elapsed < SMOKE_LIMIT,
        detail: format!(
            "n={SMOKE_N} m={} t={SMOKE_T} {}-bit q: reconstructed in {elapsed:.2?}",
            group.len(),
            params.q().bits()
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("round-trip correctness", round_trip),
        ("hand-trace fixture", hand_trace),
        ("exact uniformity of linear combinations", uniformity),
        ("leakage below threshold", below_threshold),
        ("impersonation with forged component", impersonation),
        ("threshold change leakage by subset", threshold_change),
        ("group authentication", group_authentication),
        ("share-size ratio", share_size),
        ("reconstruction smoke run", smoke),
    ];
    let mut failed = 0;
    for (number, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {verdict}: {name}: {}",
            number + 1,
            outcome.detail
        );
        failed += usize::from(!outcome.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
