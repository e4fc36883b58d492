//! Exhaustive leakage analysis at enumerable parameter sizes.
//!
//! All enumerations weight outcomes exactly: the secret is uniform over
//! `F_q`, the dealer vector is uniform over the nonzero vectors that encode
//! it, and masks are uniform over `[0, q)`. Weights are scaled to integers
//! so probabilities come out as exact fractions; only entropies and mutual
//! information are floating point, and even those are exact in the two
//! degenerate cases that matter (independence and full determination).
//!
//! Enumerations run over the outermost variable through [`fold_range`], so
//! the sequential and parallel paths give identical numbers.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Serialize, Serializer};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::field::FieldElement;
use crate::lincode::{lagrange_coefficients, CodeError, GeneratorMatrix, ParticipantSet};
use crate::parallel::{fold_range, Execution};
use crate::tcss::{share_generation, SchemeError, SchemeParams, Session};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_FALLBACK_SAMPLES: u64 = 1_000_000;
/// Tiny schemes keep every product below `2^64`.
pub const MAX_TINY_MODULUS: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("enumeration of {needed} tuples exceeds the budget of {budget}")]
    TooLarge { needed: u128, budget: u64 },
    #[error("expected count {expected} per cell is below 5")]
    TooSparse { expected: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Clone, Copy, Debug)]
pub struct AnalysisConfig {
    /// Largest number of tuples evaluated exactly.
    pub budget: u64,
    pub execution: Execution,
    /// Sample count for the statistical fallback; `None` turns it off.
    pub fallback_samples: Option<u64>,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            execution: Execution::default(),
            fallback_samples: Some(DEFAULT_FALLBACK_SAMPLES),
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo { samples: u64 },
}

impl Method {
    pub fn is_exact(&self) -> bool {
        matches!(self, Method::Exact)
    }
}

/// An exact probability, serialized as `"num/den"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(pub Ratio<u128>);

impl Probability {
    pub fn new(numerator: u128, denominator: u128) -> Self {
        Self(Ratio::new(numerator, denominator))
    }

    pub fn one() -> Self {
        Self::new(1, 1)
    }

    pub fn numer(&self) -> u128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u128 {
        *self.0.denom()
    }

    pub fn as_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `(floor(p/q) + 1) / p`.
pub fn probability_bound(p: u64, q: u64) -> Probability {
    Probability::new(u128::from(p / q + 1), u128::from(p))
}

/// `log2(q * (floor(p/q) + 1) / p)` bits.
pub fn information_bound(p: u64, q: u64) -> f64 {
    ((q * (p / q + 1)) as f64 / p as f64).log2()
}

/// Entropy in bits of a weight vector. Exactly `log2(k)` when all `k`
/// nonzero weights are equal.
pub fn entropy_of(weights: &[u128]) -> f64 {
    let nonzero: Vec<u128> = weights.iter().copied().filter(|&w| w > 0).collect();
    let Some(&first) = nonzero.first() else {
        return 0.0;
    };
    if nonzero.iter().all(|&w| w == first) {
        return (nonzero.len() as f64).log2();
    }
    let total: f64 = nonzero.iter().map(|&w| w as f64).sum();
    nonzero
        .iter()
        .map(|&w| {
            let pr = w as f64 / total;
            -pr * pr.log2()
        })
        .sum()
}

/// Counts over `0..support`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distribution {
    counts: Vec<u128>,
    total: u128,
}

impl Distribution {
    pub fn new(support: usize) -> Self {
        Self {
            counts: vec![0; support],
            total: 0,
        }
    }

    pub fn from_counts(counts: Vec<u128>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn add(&mut self, value: usize, weight: u128) {
        self.counts[value] += weight;
        self.total += weight;
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.total += other.total;
        self
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn probability(&self, value: usize) -> Probability {
        Probability::new(self.counts[value], self.total)
    }

    /// Every value carries exactly the same count.
    pub fn is_uniform(&self) -> bool {
        self.total > 0 && self.counts.iter().all(|&c| c == self.counts[0])
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.counts)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CombinationReport {
    pub distribution: Distribution,
    /// Whether the inputs satisfy the uniformity hypothesis.
    pub hypothesis_holds: bool,
    pub uniform: bool,
    pub method: Method,
    pub chi_square: Option<ChiSquareResult>,
}

/// `Ok(true)` to enumerate, `Ok(false)` to sample instead.
fn budget_check(needed: Option<u128>, config: &AnalysisConfig) -> Result<bool, AnalysisError> {
    match needed {
        Some(n) if n <= u128::from(config.budget) => Ok(true),
        _ if config.fallback_samples.is_some() => Ok(false),
        other => Err(AnalysisError::TooLarge {
            needed: other.unwrap_or(u128::MAX),
            budget: config.budget,
        }),
    }
}

fn exact_only(needed: Option<u128>, config: &AnalysisConfig) -> Result<u64, AnalysisError> {
    match needed {
        Some(n) if n <= u128::from(config.budget) => Ok(n as u64),
        other => Err(AnalysisError::TooLarge {
            needed: other.unwrap_or(u128::MAX),
            budget: config.budget,
        }),
    }
}

fn checked_size(radices: &[u64]) -> Option<u128> {
    radices
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(u128::from(r)))
}

fn check_modulus(p: u64) -> Result<(), AnalysisError> {
    if !(2..MAX_TINY_MODULUS).contains(&p) {
        return Err(AnalysisError::InvalidInput(format!(
            "modulus {p} outside [2, {MAX_TINY_MODULUS})"
        )));
    }
    Ok(())
}

/// Distribution of `sum coeffs_i * x_i mod p` over all `x` in `F_p^k`.
pub fn enumerate_linear_combination(
    coeffs: &[u64],
    p: u64,
    config: &AnalysisConfig,
) -> Result<CombinationReport, AnalysisError> {
    enumerate_mixed_combination(coeffs, &[], p, p, config).map(|mut report| {
        report.hypothesis_holds = coeffs.iter().any(|c| c % p != 0);
        report
    })
}

/// Distribution of `(sum a_i x_i + sum b_j y_j) mod p` with `x_i` over
/// `F_p` and `y_j` over `[0, q)`.
pub fn enumerate_mixed_combination(
    a: &[u64],
    b: &[u64],
    p: u64,
    q: u64,
    config: &AnalysisConfig,
) -> Result<CombinationReport, AnalysisError> {
    check_modulus(p)?;
    if q == 0 || q > p {
        return Err(AnalysisError::InvalidInput(format!(
            "need 0 < q <= p, got q = {q}"
        )));
    }
    let coeffs: Vec<u64> = a.iter().chain(b).map(|c| c % p).collect();
    let radices: Vec<u64> = a.iter().map(|_| p).chain(b.iter().map(|_| q)).collect();
    let hypothesis_holds = !a.is_empty() && coeffs.iter().all(|&c| c != 0);

    let evaluate = |digits: &mut dyn Iterator<Item = u64>| -> usize {
        coeffs
            .iter()
            .zip(digits)
            .fold(0u64, |acc, (&c, x)| (acc + c * x) % p) as usize
    };

    let needed = checked_size(&radices);
    if budget_check(needed, config)? {
        let total = needed.expect("checked") as u64;
        let distribution = fold_range(
            config.execution,
            0..total,
            || Distribution::new(p as usize),
            |mut dist, index| {
                let mut rest = index;
                let mut digits = radices.iter().map(|&r| {
                    let d = rest % r;
                    rest /= r;
                    d
                });
                dist.add(evaluate(&mut digits), 1);
                dist
            },
            Distribution::merge,
        );
        let uniform = distribution.is_uniform();
        return Ok(CombinationReport {
            distribution,
            hypothesis_holds,
            uniform,
            method: Method::Exact,
            chi_square: None,
        });
    }

    let samples = config.fallback_samples.expect("fallback enabled");
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut distribution = Distribution::new(p as usize);
    for _ in 0..samples {
        let mut digits = radices.iter().map(|&r| rng.gen_range(0..r));
        let value = evaluate(&mut digits);
        distribution.add(value, 1);
    }
    let chi_square = chi_square_uniformity(&distribution, 0.001).ok();
    let uniform = chi_square.as_ref().is_some_and(|c| c.pass);
    Ok(CombinationReport {
        distribution,
        hypothesis_holds,
        uniform,
        method: Method::MonteCarlo { samples },
        chi_square,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub critical_value: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub pass: bool,
}

/// Pearson chi-square of `samples` against the uniform distribution on its
/// support.
pub fn chi_square_uniformity(
    samples: &Distribution,
    alpha: f64,
) -> Result<ChiSquareResult, AnalysisError> {
    let k = samples.support_size();
    if k < 2 || !(0.0..1.0).contains(&alpha) || alpha == 0.0 {
        return Err(AnalysisError::InvalidInput(format!(
            "support {k} and alpha {alpha} are not testable"
        )));
    }
    let expected = samples.total() as f64 / k as f64;
    if expected < 5.0 {
        return Err(AnalysisError::TooSparse { expected });
    }
    let statistic: f64 = samples
        .counts()
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = k - 1;
    let law = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let critical_value = law.inverse_cdf(1.0 - alpha);
    let p_value = law.sf(statistic);
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: dof,
        critical_value,
        p_value,
        alpha,
        pass: statistic <= critical_value,
    })
}

/// A scheme small enough to enumerate: `p < 2^31`, identities as plain
/// integers.
#[derive(Clone, Debug)]
pub struct TinyScheme {
    p: u64,
    q: u64,
    t: usize,
    identities: Vec<u64>,
    generator: GeneratorMatrix,
}

impl TinyScheme {
    /// Identities `U_i = i + 1` for `i = 0..=n`.
    pub fn new(p: u64, q: u64, t: usize, n: usize) -> Result<Self, AnalysisError> {
        let ids: Vec<u64> = (1..=n as u64 + 1).collect();
        Self::with_identities(p, q, t, &ids)
    }

    /// `identities[0]` defines the secret, the rest the `n` shares.
    pub fn with_identities(
        p: u64,
        q: u64,
        t: usize,
        identities: &[u64],
    ) -> Result<Self, AnalysisError> {
        check_modulus(p)?;
        let prime = |x: u64| crate::field::is_prime(&BigUint::from(x));
        if !prime(p) || !prime(q) || q >= p {
            return Err(AnalysisError::InvalidInput(format!(
                "need primes q < p, got p = {p}, q = {q}"
            )));
        }
        if t < 2 {
            return Err(AnalysisError::InvalidInput(
                "threshold must be at least 2".into(),
            ));
        }
        if let Some(u) = identities.iter().find(|&&u| u >= p) {
            return Err(AnalysisError::InvalidInput(format!(
                "identity {u} is not below p"
            )));
        }
        let modulus = std::sync::Arc::new(BigUint::from(p));
        let elements: Vec<FieldElement> = identities
            .iter()
            .map(|&u| FieldElement::from_u64(u, &modulus))
            .collect();
        let generator = GeneratorMatrix::vandermonde(&elements, t)?;
        Ok(Self {
            p,
            q,
            t,
            identities: identities.to_vec(),
            generator,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.identities.len() - 1
    }

    /// Whether `p > n q^2`, the condition for exact reconstruction.
    pub fn satisfies_size_condition(&self) -> bool {
        u128::from(self.p) > self.n() as u128 * u128::from(self.q) * u128::from(self.q)
    }

    pub fn probability_bound(&self) -> Probability {
        probability_bound(self.p, self.q)
    }

    pub fn information_bound(&self) -> f64 {
        information_bound(self.p, self.q)
    }

    /// Lagrange coefficients for the 1-based `participants`.
    pub fn coefficients(&self, participants: &[usize]) -> Result<Vec<u64>, AnalysisError> {
        let set = ParticipantSet::new(participants, self.n())?;
        let coeffs = lagrange_coefficients(&self.generator, &set)?;
        Ok(coeffs
            .coefficients()
            .iter()
            .map(|b| b.value().to_u64().expect("below a u64 modulus"))
            .collect())
    }

    fn check_indices(&self, indices: &[usize]) -> Result<(), AnalysisError> {
        let mut seen = indices.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != indices.len() {
            return Err(AnalysisError::InvalidInput("repeated index".into()));
        }
        if let Some(&i) = indices.iter().find(|&&i| i == 0 || i > self.n()) {
            return Err(AnalysisError::InvalidInput(format!(
                "index {i} not in 1..={}",
                self.n()
            )));
        }
        Ok(())
    }

    fn check_group(&self, m: usize) -> Result<(), AnalysisError> {
        if m < self.t || m > self.n() {
            return Err(AnalysisError::InvalidInput(format!(
                "group size {m} outside [{}, {}]",
                self.t,
                self.n()
            )));
        }
        Ok(())
    }

    fn dealer_vectors(&self) -> Option<u128> {
        checked_size(&vec![self.p; self.t])
    }

    /// Weight of a dealer vector encoding `secret`, scaled so that the
    /// secret is uniform: there are `p^(t-1)` vectors per secret, minus the
    /// zero vector for secret 0.
    fn dealer_weight(&self, secret: u64) -> u128 {
        let class = u128::from(self.p).pow(self.t as u32 - 1);
        if secret == 0 {
            class
        } else {
            class - 1
        }
    }

    /// Secret and the requested shares of dealer vector number `index`, or
    /// `None` when the vector is zero or encodes a value outside `F_q`.
    fn dealing(&self, index: u64, share_indices: &[usize]) -> Option<(u64, Vec<u64>)> {
        if index == 0 {
            return None;
        }
        let mut v = Vec::with_capacity(self.t);
        let mut rest = index;
        for _ in 0..self.t {
            v.push(rest % self.p);
            rest /= self.p;
        }
        let secret = self.evaluate(&v, self.identities[0]);
        if secret >= self.q {
            return None;
        }
        let shares = share_indices
            .iter()
            .map(|&i| self.evaluate(&v, self.identities[i]))
            .collect();
        Some((secret, shares))
    }

    fn evaluate(&self, v: &[u64], u: u64) -> u64 {
        v.iter().rev().fold(0, |acc, &c| (acc * u + c) % self.p)
    }

    /// Dealer vector for `secret` with free coordinates drawn uniformly.
    fn sample_dealing<R: RngCore>(&self, rng: &mut R, share_indices: &[usize]) -> (u64, Vec<u64>) {
        let secret = rng.gen_range(0..self.q);
        loop {
            let mut v = vec![0u64; self.t];
            for c in v.iter_mut().skip(1) {
                *c = rng.gen_range(0..self.p);
            }
            // Column 0 starts with 1, so coordinate 0 is the pivot.
            let partial = self.evaluate(&v, self.identities[0]);
            v[0] = (secret + self.p - partial) % self.p;
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            let shares = share_indices
                .iter()
                .map(|&i| self.evaluate(&v, self.identities[i]))
                .collect();
            return (secret, shares);
        }
    }
}

/// Joint weights of (secret, observation).
#[derive(Clone, Debug, Default)]
pub struct JointTable {
    q: usize,
    cells: HashMap<u64, Vec<u128>>,
}

impl JointTable {
    pub fn new(q: usize) -> Self {
        Self {
            q,
            cells: HashMap::new(),
        }
    }

    pub fn add(&mut self, observation: u64, secret: u64, weight: u128) {
        let q = self.q;
        self.cells.entry(observation).or_insert_with(|| vec![0; q])[secret as usize] += weight;
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (obs, row) in other.cells {
            let q = self.q;
            let mine = self.cells.entry(obs).or_insert_with(|| vec![0; q]);
            for (a, b) in mine.iter_mut().zip(row) {
                *a += b;
            }
        }
        self
    }

    pub fn observations(&self) -> usize {
        self.cells.len()
    }

    pub fn summarize(&self) -> JointSummary {
        let mut secret_weights = vec![0u128; self.q];
        for row in self.cells.values() {
            for (acc, w) in secret_weights.iter_mut().zip(row) {
                *acc += w;
            }
        }
        let total: u128 = secret_weights.iter().sum();

        let mut independent = true;
        let mut determined = true;
        let mut guess = 0u128;
        let mut pointwise = Probability::new(0, 1);
        let mut conditional = 0.0;
        for row in self.cells.values() {
            let row_total: u128 = row.iter().sum();
            let best = row.iter().copied().max().unwrap_or(0);
            guess += best;
            pointwise = pointwise.max(Probability::new(best, row_total));
            determined &= row.iter().filter(|&&w| w > 0).count() <= 1;
            independent &= row.iter().zip(&secret_weights).all(|(&w, &ws)| {
                BigUint::from(w) * BigUint::from(total)
                    == BigUint::from(ws) * BigUint::from(row_total)
            });
            conditional += row_total as f64 / total as f64 * entropy_of(row);
        }
        let secret_entropy = entropy_of(&secret_weights);
        let mutual_information = if independent {
            0.0
        } else if determined {
            secret_entropy
        } else {
            secret_entropy - conditional
        };
        JointSummary {
            mutual_information,
            secret_entropy,
            guess_probability: Probability::new(guess, total),
            max_posterior: pointwise,
            independent,
            determined,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointSummary {
    pub mutual_information: f64,
    pub secret_entropy: f64,
    /// `sum_o max_s P(s, o)`: success of the best guess from the observation.
    pub guess_probability: Probability,
    /// `max_{s,o} P(s | o)`.
    pub max_posterior: Probability,
    pub independent: bool,
    pub determined: bool,
}

/// Which forged component an impersonator submits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForgeStrategy {
    /// Every value in `F_p`; the report gives the best one.
    Exhaustive,
    Fixed(u64),
    /// The genuine component; success must be 1 for a correct scheme.
    Honest,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeakageReport {
    pub operation: &'static str,
    pub p: u64,
    pub q: u64,
    pub t: usize,
    /// Indices whose shares or components are observed.
    pub observed: Vec<usize>,
    pub method: Method,
    pub mutual_information: Option<f64>,
    pub information_bound: f64,
    pub success_probability: Option<Probability>,
    pub max_posterior: Option<Probability>,
    pub probability_bound: Probability,
    /// Blind guess `1/q`.
    pub baseline: Probability,
    pub within_bounds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ipa: Option<IpaDetail>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IpaDetail {
    pub m: usize,
    pub impersonated: usize,
    pub strategy: ForgeStrategy,
    pub best_forgery: Option<u64>,
    pub mean_forgery_success: Option<Probability>,
    /// Honest reconstruction success for the same group.
    pub honest_success: Probability,
    /// Best guess of the secret from the honest components alone.
    pub view_guess_probability: Option<Probability>,
    pub view_information: Option<f64>,
}

impl LeakageReport {
    pub fn to_text(&self) -> String {
        render_text(self)
    }
}

fn base_report(
    scheme: &TinyScheme,
    operation: &'static str,
    observed: Vec<usize>,
) -> LeakageReport {
    LeakageReport {
        operation,
        p: scheme.p,
        q: scheme.q,
        t: scheme.t,
        observed,
        method: Method::Exact,
        mutual_information: None,
        information_bound: scheme.information_bound(),
        success_probability: None,
        max_posterior: None,
        probability_bound: scheme.probability_bound(),
        baseline: Probability::new(1, u128::from(scheme.q)),
        within_bounds: false,
        ipa: None,
    }
}

fn encode(values: &[u64], p: u64) -> u64 {
    values.iter().rev().fold(0, |acc, &v| acc * p + v)
}

/// Exact leakage about the secret from the shares at `known`.
///
/// Below the threshold the best-guess probability must not exceed the
/// probability bound and the information must not exceed the information
/// bound; at or above it the secret must be determined.
pub fn leakage_below_threshold(
    scheme: &TinyScheme,
    known: &[usize],
    config: &AnalysisConfig,
) -> Result<LeakageReport, AnalysisError> {
    scheme.check_indices(known)?;
    let total = exact_only(scheme.dealer_vectors(), config)?;
    let table = fold_range(
        config.execution,
        0..total,
        || JointTable::new(scheme.q as usize),
        |mut table, index| {
            if let Some((s, shares)) = scheme.dealing(index, known) {
                table.add(encode(&shares, scheme.p), s, scheme.dealer_weight(s));
            }
            table
        },
        JointTable::merge,
    );
    let summary = table.summarize();
    let mut report = base_report(scheme, "leakage_below_threshold", known.to_vec());
    report.within_bounds = if known.len() < scheme.t {
        summary.guess_probability <= report.probability_bound
            && summary.mutual_information <= report.information_bound
    } else {
        summary.determined && summary.mutual_information == (scheme.q as f64).log2()
    };
    report.mutual_information = Some(summary.mutual_information);
    report.success_probability = Some(summary.guess_probability);
    report.max_posterior = Some(summary.max_posterior);
    Ok(report)
}

fn masks(q: u64, m: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = q.pow(m as u32);
    (0..count).map(move |mut index| {
        (0..m)
            .map(|_| {
                let d = index % q;
                index /= q;
                d
            })
            .collect()
    })
}

fn components(scheme: &TinyScheme, coeffs: &[u64], shares: &[u64], r: &[u64]) -> Vec<u64> {
    let p = scheme.p;
    coeffs
        .iter()
        .zip(shares)
        .zip(r)
        .map(|((&b, &s), &r)| (b * s % p + r * scheme.q) % p)
        .collect()
}

#[derive(Clone)]
struct IpaAccumulator {
    total: u128,
    honest: u128,
    by_forgery: Vec<u128>,
    view: JointTable,
}

impl IpaAccumulator {
    fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.honest += other.honest;
        for (a, b) in self.by_forgery.iter_mut().zip(other.by_forgery) {
            *a += b;
        }
        self.view = self.view.merge(other.view);
        self
    }
}

/// Success of an impersonator who takes the place of participant `m` in the
/// group `{1, ..., m}` and submits a forged component.
///
/// Exact over the secret, the dealer vector and every mask. The report also
/// carries what the impersonator learns from the honest components alone.
pub fn ipa_success_probability(
    scheme: &TinyScheme,
    m: usize,
    strategy: ForgeStrategy,
    config: &AnalysisConfig,
) -> Result<LeakageReport, AnalysisError> {
    scheme.check_group(m)?;
    let p = scheme.p;
    let q = scheme.q;
    let group: Vec<usize> = (1..=m).collect();
    let coeffs = scheme.coefficients(&group)?;
    let forgeries = match strategy {
        ForgeStrategy::Exhaustive => p,
        ForgeStrategy::Fixed(c) if c >= p => {
            return Err(AnalysisError::InvalidInput(format!(
                "forged value {c} not below p"
            )))
        }
        _ => 1,
    };
    let mut radices = vec![p; scheme.t];
    radices.extend(std::iter::repeat_n(q, m));
    radices.push(forgeries);
    let needed = checked_size(&radices);

    let mut report = base_report(scheme, "ipa_success_probability", group[..m - 1].to_vec());

    if !budget_check(needed, config)? {
        if strategy == ForgeStrategy::Exhaustive {
            return Err(AnalysisError::TooLarge {
                needed: needed.unwrap_or(u128::MAX),
                budget: config.budget,
            });
        }
        let samples = config.fallback_samples.expect("fallback enabled");
        let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
        let (mut hits, mut honest_hits) = (0u128, 0u128);
        for _ in 0..samples {
            let (s, shares) = scheme.sample_dealing(&mut rng, &group);
            let r: Vec<u64> = (0..m).map(|_| rng.gen_range(0..q)).collect();
            let c = components(scheme, &coeffs, &shares, &r);
            let honest_sum = c[..m - 1].iter().fold(0, |acc, &x| (acc + x) % p);
            let forged = match strategy {
                ForgeStrategy::Fixed(v) => v,
                _ => c[m - 1],
            };
            hits += u128::from((honest_sum + forged) % p % q == s);
            honest_hits += u128::from((honest_sum + c[m - 1]) % p % q == s);
        }
        let success = Probability::new(hits, u128::from(samples));
        report.method = Method::MonteCarlo { samples };
        report.success_probability = Some(success);
        report.within_bounds = match strategy {
            ForgeStrategy::Honest => success == Probability::one(),
            _ => success <= report.probability_bound,
        };
        report.ipa = Some(IpaDetail {
            m,
            impersonated: m,
            strategy,
            best_forgery: None,
            mean_forgery_success: None,
            honest_success: Probability::new(honest_hits, u128::from(samples)),
            view_guess_probability: None,
            view_information: None,
        });
        return Ok(report);
    }

    let total = scheme.dealer_vectors().expect("within budget") as u64;
    let acc = fold_range(
        config.execution,
        0..total,
        || IpaAccumulator {
            total: 0,
            honest: 0,
            by_forgery: vec![0; forgeries as usize],
            view: JointTable::new(q as usize),
        },
        |mut acc, index| {
            let Some((s, shares)) = scheme.dealing(index, &group) else {
                return acc;
            };
            let w = scheme.dealer_weight(s);
            for r in masks(q, m) {
                let c = components(scheme, &coeffs, &shares, &r);
                let honest_sum = c[..m - 1].iter().fold(0, |a, &x| (a + x) % p);
                acc.total += w;
                if (honest_sum + c[m - 1]) % p % q == s {
                    acc.honest += w;
                }
                acc.view.add(encode(&c[..m - 1], p), s, w);
                match strategy {
                    ForgeStrategy::Exhaustive => {
                        for (forged, slot) in acc.by_forgery.iter_mut().enumerate() {
                            if (honest_sum + forged as u64) % p % q == s {
                                *slot += w;
                            }
                        }
                    }
                    ForgeStrategy::Fixed(v) => {
                        if (honest_sum + v) % p % q == s {
                            acc.by_forgery[0] += w;
                        }
                    }
                    ForgeStrategy::Honest => {
                        if (honest_sum + c[m - 1]) % p % q == s {
                            acc.by_forgery[0] += w;
                        }
                    }
                }
            }
            acc
        },
        IpaAccumulator::merge,
    );

    let (best_index, best) = acc
        .by_forgery
        .iter()
        .enumerate()
        .max_by_key(|(i, w)| (**w, std::cmp::Reverse(*i)))
        .map(|(i, w)| (i as u64, *w))
        .expect("at least one forgery");
    let success = Probability::new(best, acc.total);
    let view = acc.view.summarize();
    report.success_probability = Some(success);
    report.within_bounds = match strategy {
        ForgeStrategy::Honest => success == Probability::one(),
        _ => success <= report.probability_bound,
    };
    report.ipa = Some(IpaDetail {
        m,
        impersonated: m,
        strategy,
        best_forgery: (strategy == ForgeStrategy::Exhaustive).then_some(best_index),
        mean_forgery_success: (strategy == ForgeStrategy::Exhaustive)
            .then(|| Probability::new(acc.by_forgery.iter().sum(), acc.total * u128::from(p))),
        honest_success: Probability::new(acc.honest, acc.total),
        view_guess_probability: Some(view.guess_probability),
        view_information: Some(view.mutual_information),
    });
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetLeakageReport {
    pub m: usize,
    pub j: usize,
    pub subsets: Vec<LeakageReport>,
    pub max_information: f64,
    pub information_bound: f64,
    pub within_bounds: bool,
}

impl SubsetLeakageReport {
    pub fn to_text(&self) -> String {
        render_text(self)
    }
}

fn subsets(m: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, j, &mut Vec::new(), &mut out);
    out
}

/// Exact `I(s; C')` for every `j`-subset `C'` of the components of the
/// group `{1, ..., m}`.
///
/// Proper subsets must stay within the information bound; the full set must
/// give exactly `log2 q`.
pub fn subset_component_leakage(
    scheme: &TinyScheme,
    m: usize,
    j: usize,
    config: &AnalysisConfig,
) -> Result<SubsetLeakageReport, AnalysisError> {
    scheme.check_group(m)?;
    if j > m {
        return Err(AnalysisError::InvalidInput(format!(
            "subset size {j} exceeds {m}"
        )));
    }
    let p = scheme.p;
    let q = scheme.q;
    let group: Vec<usize> = (1..=m).collect();
    let coeffs = scheme.coefficients(&group)?;
    let chosen = subsets(m, j);
    let mut radices = vec![p; scheme.t];
    radices.extend(std::iter::repeat_n(q, m));
    radices.push(chosen.len() as u64);
    exact_only(checked_size(&radices), config)?;

    let total = scheme.dealer_vectors().expect("within budget") as u64;
    let tables = fold_range(
        config.execution,
        0..total,
        || vec![JointTable::new(q as usize); chosen.len()],
        |mut tables, index| {
            let Some((s, shares)) = scheme.dealing(index, &group) else {
                return tables;
            };
            let w = scheme.dealer_weight(s);
            for r in masks(q, m) {
                let c = components(scheme, &coeffs, &shares, &r);
                for (table, subset) in tables.iter_mut().zip(&chosen) {
                    let observed: Vec<u64> = subset.iter().map(|&k| c[k]).collect();
                    table.add(encode(&observed, p), s, w);
                }
            }
            tables
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    );

    let full = (q as f64).log2();
    let reports: Vec<LeakageReport> = tables
        .iter()
        .zip(&chosen)
        .map(|(table, subset)| {
            let summary = table.summarize();
            let mut report = base_report(
                scheme,
                "subset_component_leakage",
                subset.iter().map(|&k| group[k]).collect(),
            );
            report.within_bounds = if j < m {
                summary.mutual_information <= report.information_bound
            } else {
                summary.mutual_information == full
            };
            report.mutual_information = Some(summary.mutual_information);
            report.success_probability = Some(summary.guess_probability);
            report.max_posterior = Some(summary.max_posterior);
            report
        })
        .collect();
    let max_information = reports
        .iter()
        .filter_map(|r| r.mutual_information)
        .fold(0.0, f64::max);
    Ok(SubsetLeakageReport {
        m,
        j,
        within_bounds: reports.iter().all(|r| r.within_bounds),
        subsets: reports,
        max_information,
        information_bound: scheme.information_bound(),
    })
}

/// Acceptance probability when participant `m` of `{1, ..., m}` holds a
/// forged token drawn uniformly from the values other than its real share
/// and otherwise follows the protocol.
pub fn forged_token_acceptance(
    scheme: &TinyScheme,
    m: usize,
    config: &AnalysisConfig,
) -> Result<LeakageReport, AnalysisError> {
    scheme.check_group(m)?;
    let p = scheme.p;
    let q = scheme.q;
    let group: Vec<usize> = (1..=m).collect();
    let coeffs = scheme.coefficients(&group)?;
    let mut radices = vec![p; scheme.t];
    radices.extend(std::iter::repeat_n(q, m));
    radices.push(p);
    exact_only(checked_size(&radices), config)?;

    let total = scheme.dealer_vectors().expect("within budget") as u64;
    let b_last = coeffs[m - 1];
    let (accepted, weight) = fold_range(
        config.execution,
        0..total,
        || (0u128, 0u128),
        |(mut accepted, mut weight), index| {
            let Some((s, shares)) = scheme.dealing(index, &group) else {
                return (accepted, weight);
            };
            let w = scheme.dealer_weight(s);
            for r in masks(q, m) {
                let c = components(scheme, &coeffs, &shares, &r);
                let honest_sum = c[..m - 1].iter().fold(0, |a, &x| (a + x) % p);
                for token in (0..p).filter(|&x| x != shares[m - 1]) {
                    let forged = (b_last * token % p + r[m - 1] * q) % p;
                    if (honest_sum + forged) % p % q == s {
                        accepted += w;
                    }
                }
                weight += w * u128::from(p - 1);
            }
            (accepted, weight)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    let acceptance = Probability::new(accepted, weight);
    let mut report = base_report(scheme, "forged_token_acceptance", group[..m - 1].to_vec());
    report.success_probability = Some(acceptance);
    report.within_bounds = acceptance <= report.probability_bound;
    Ok(report)
}

/// Empirical distribution of participant `index`'s component over
/// `sessions` independent dealings of random secrets, using the production
/// code path.
pub fn sample_component_distribution<R: RngCore>(
    params: &SchemeParams,
    index: usize,
    participants: &[usize],
    sessions: u64,
    rng: &mut R,
) -> Result<Distribution, AnalysisError> {
    let p = params
        .p()
        .to_usize()
        .filter(|&p| p <= 1 << 24)
        .ok_or_else(|| AnalysisError::InvalidInput("modulus too large to tabulate".into()))?;
    let session = Session::open(params, participants, 0)?;
    let mut dist = Distribution::new(p);
    for _ in 0..sessions {
        let secret = crate::field::random_below(params.q(), rng);
        let (_, shares) = share_generation(&secret, params, rng)?;
        let component = session.construct_component(&shares[index - 1], params, rng)?;
        dist.add(component.value().value().to_usize().expect("below p"), 1);
    }
    Ok(dist)
}

/// Renders any report as `key: value` lines, nested keys joined by dots.
pub fn render_text<T: Serialize>(report: &T) -> String {
    fn walk(prefix: &str, value: &serde_json::Value, out: &mut String) {
        match value {
            serde_json::Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, v, out);
                }
            }
            serde_json::Value::Array(items) if items.iter().any(|v| v.is_object()) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), v, out);
                }
            }
            serde_json::Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
            other => out.push_str(&format!("{prefix}: {other}\n")),
        }
    }
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut out = String::new();
    walk("", &value, &mut out);
    out
}
