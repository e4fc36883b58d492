//! Prime-field arithmetic on arbitrary-precision integers and generation of
//! the public prime pair `(p, q)`.
//!
//! Every [`FieldElement`] carries its modulus, so elements of `F_p` and
//! `F_q` can live side by side without a global context. Mixing moduli in
//! one operation is a programming error and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Miller-Rabin rounds; error probability at most `4^-40 = 2^-80`.
pub const MILLER_RABIN_ROUNDS: usize = 40;

/// Integers below this bound are classified by trial division alone.
pub const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// Secret-space size used when the caller does not pick one.
pub const DEFAULT_Q_BITS: u64 = 256;

/// Shared, immutable modulus.
pub type Modulus = Arc<BigUint>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus must be at least 2, got {0}")]
    DegenerateModulus(BigUint),
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
}

/// An element of `Z/mZ` for a prime `m`, always stored reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: BigUint,
    modulus: Modulus,
}

impl FieldElement {
    /// Builds `value mod modulus`.
    pub fn new(value: BigUint, modulus: &Modulus) -> Self {
        let value = if &value >= modulus.as_ref() {
            value % modulus.as_ref()
        } else {
            value
        };
        Self {
            value,
            modulus: Arc::clone(modulus),
        }
    }

    pub fn from_u64(value: u64, modulus: &Modulus) -> Self {
        Self::new(BigUint::from(value), modulus)
    }

    pub fn zero(modulus: &Modulus) -> Self {
        Self::new(BigUint::zero(), modulus)
    }

    pub fn one(modulus: &Modulus) -> Self {
        Self::new(BigUint::one(), modulus)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.value.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let m = num_bigint::BigInt::from(self.modulus.as_ref().clone());
        let a = num_bigint::BigInt::from(self.value.clone());
        let ext = a.extended_gcd(&m);
        if !ext.gcd.is_one() {
            return Err(FieldError::ZeroInverse);
        }
        let x = ext.x.mod_floor(&m);
        Ok(Self {
            value: x.to_biguint().expect("mod_floor is non-negative"),
            modulus: Arc::clone(&self.modulus),
        })
    }

    pub fn pow(&self, exponent: &BigUint) -> Self {
        Self {
            value: self.value.modpow(exponent, &self.modulus),
            modulus: Arc::clone(&self.modulus),
        }
    }

    pub fn pow_u64(&self, exponent: u64) -> Self {
        self.pow(&BigUint::from(exponent))
    }

    fn check_same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.modulus, &other.modulus) || self.modulus == other.modulus,
            "field elements from different moduli"
        );
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        let mut value = &self.value + &rhs.value;
        if value >= *self.modulus {
            value -= self.modulus.as_ref();
        }
        FieldElement {
            value,
            modulus: Arc::clone(&self.modulus),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        let value = if self.value >= rhs.value {
            &self.value - &rhs.value
        } else {
            self.modulus.as_ref() - &rhs.value + &self.value
        };
        FieldElement {
            value,
            modulus: Arc::clone(&self.modulus),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        FieldElement {
            value: (&self.value * &rhs.value) % self.modulus.as_ref(),
            modulus: Arc::clone(&self.modulus),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        if self.value.is_zero() {
            return self.clone();
        }
        FieldElement {
            value: self.modulus.as_ref() - &self.value,
            modulus: Arc::clone(&self.modulus),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// `a^-1 mod a.modulus()`.
pub fn mod_inverse(a: &FieldElement) -> Result<FieldElement, FieldError> {
    a.inverse()
}

/// Uniform integer in `[0, bound)` by rejection sampling on
/// `bits(bound)`-bit candidates, so there is no modulo bias.
pub fn random_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64 * 8 - bits) as u32;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= 0xffu8 >> excess;
        let candidate = BigUint::from_bytes_be(&buf);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Draws a uniformly distributed element of `Z/modulus`.
pub fn random_field_element<R: RngCore + ?Sized>(
    modulus: &Modulus,
    rng: &mut R,
) -> Result<FieldElement, FieldError> {
    if modulus.as_ref() < &BigUint::from(2u8) {
        return Err(FieldError::DegenerateModulus(modulus.as_ref().clone()));
    }
    Ok(FieldElement {
        value: random_below(modulus, rng),
        modulus: Arc::clone(modulus),
    })
}

fn is_prime_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn small_primes() -> &'static [u32] {
    static PRIMES: std::sync::OnceLock<Vec<u32>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| (3u32..2000).filter(|&k| is_prime_small(k as u64)).collect())
}

/// Primality test: exact trial division below [`TRIAL_DIVISION_LIMIT`],
/// otherwise [`MILLER_RABIN_ROUNDS`] rounds of Miller-Rabin.
///
/// Witnesses come from a generator seeded by `n` itself, so the verdict is
/// a pure function of `n`.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < TRIAL_DIVISION_LIMIT {
            return is_prime_small(small);
        }
    }
    if n.is_even() {
        return false;
    }
    for &sp in small_primes() {
        if (n % sp).is_zero() {
            return false;
        }
    }

    let one = BigUint::one();
    let two = BigUint::from(2u8);
    let n_minus_one = n - &one;
    let trailing = n_minus_one.trailing_zeros().expect("n > 1");
    let odd_part = &n_minus_one >> trailing;

    let mut seed = [0u8; 32];
    let digest = <sha2::Sha256 as sha2::Digest>::digest(n.to_bytes_be());
    seed.copy_from_slice(&digest);
    let mut witness_rng = ChaCha20Rng::from_seed(seed);
    let witness_span = n - BigUint::from(3u8);

    'witness: for _ in 0..MILLER_RABIN_ROUNDS {
        let a = random_below(&witness_span, &mut witness_rng) + &two;
        let mut x = a.modpow(&odd_part, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..trailing {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
            if x.is_one() {
                return false;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigUint) -> BigUint {
    let mut candidate = n + 1u32;
    if candidate <= BigUint::from(2u8) {
        return BigUint::from(2u8);
    }
    if candidate.is_even() {
        candidate += 1u32;
    }
    while !is_prime(&candidate) {
        candidate += 2u32;
    }
    candidate
}

/// The public primes. `p` is the share field, `q` the secret space.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePair {
    #[serde(with = "crate::encoding::decimal")]
    p: BigUint,
    #[serde(with = "crate::encoding::decimal")]
    q: BigUint,
    n_max: usize,
}

impl fmt::Debug for PrimePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimePair")
            .field("p", &self.p.to_string())
            .field("q", &self.q.to_string())
            .field("n_max", &self.n_max)
            .finish()
    }
}

impl PrimePair {
    /// Validates a user-supplied pair: both prime and `p > n q^2`.
    ///
    /// `p >= q^3` is accepted but logged, since shares then exceed three
    /// times the secret length.
    pub fn new(p: BigUint, q: BigUint, n_max: usize) -> Result<Self, FieldError> {
        if !is_prime(&q) {
            return Err(FieldError::NotPrime(q));
        }
        if !is_prime(&p) {
            return Err(FieldError::NotPrime(p));
        }
        let floor = &q * &q * BigUint::from(n_max);
        if p <= floor {
            return Err(FieldError::InfeasibleParameters(format!(
                "p = {p} must exceed n*q^2 = {floor}"
            )));
        }
        let pair = Self { p, q, n_max };
        if !pair.in_share_size_regime() {
            log::warn!(
                "p = {} is at least q^3; shares are more than three times the secret size",
                pair.p
            );
        }
        Ok(pair)
    }

    /// Smallest prime `p` with `n q^2 < p < q^3` for a fixed `q`.
    pub fn for_q(n: usize, q: BigUint) -> Result<Self, FieldError> {
        if !is_prime(&q) {
            return Err(FieldError::NotPrime(q));
        }
        let lower = &q * &q * BigUint::from(n);
        let upper = &q * &q * &q;
        if lower >= upper {
            return Err(FieldError::InfeasibleParameters(format!(
                "interval ({lower}, {upper}) is empty; q must exceed n"
            )));
        }
        let p = next_prime(&lower);
        if p >= upper {
            return Err(FieldError::InfeasibleParameters(format!(
                "no prime in ({lower}, {upper})"
            )));
        }
        Ok(Self { p, q, n_max: n })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `p < q^3`.
    pub fn in_share_size_regime(&self) -> bool {
        self.p < &self.q * &self.q * &self.q
    }

    /// The leakage bound `(floor(p/q) + 1) / p` as an exact fraction.
    pub fn leakage_bound(&self) -> (BigUint, BigUint) {
        (&self.p / &self.q + 1u32, self.p.clone())
    }
}

fn random_prime_with_bits<R: RngCore + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    let top = BigUint::one() << (bits - 1);
    loop {
        let mut candidate = random_below(&top, rng) | &top;
        candidate |= BigUint::one();
        let prime = if is_prime(&candidate) {
            candidate
        } else {
            next_prime(&candidate)
        };
        if prime.bits() == bits {
            return prime;
        }
    }
}

const PAIR_ATTEMPTS: usize = 256;

/// Draws a random `q_bits`-bit prime `q` and a random prime `p` with
/// `max(n q^2, 2^(2 q_bits)) < p < q^3`.
///
/// The `2^(2 q_bits)` floor pins `bits(p)` to `(2 q_bits, 3 q_bits]`, so a
/// share is between two and three secret lengths.
pub fn generate_prime_pair<R: RngCore + ?Sized>(
    n: usize,
    q_bits: u64,
    rng: &mut R,
) -> Result<PrimePair, FieldError> {
    if q_bits < 8 {
        return Err(FieldError::InfeasibleParameters(format!(
            "q_bits = {q_bits} is below the minimum of 8"
        )));
    }
    if n < 2 {
        return Err(FieldError::InfeasibleParameters(format!(
            "n = {n} must be at least 2"
        )));
    }
    // Largest q of this size: the interval is empty whenever q <= n.
    let q_max = (BigUint::one() << q_bits) - 1u32;
    if q_max <= BigUint::from(n) {
        return Err(FieldError::InfeasibleParameters(format!(
            "q_bits = {q_bits} cannot exceed n = {n}"
        )));
    }
    let size_floor = BigUint::one() << (2 * q_bits);

    for _ in 0..PAIR_ATTEMPTS {
        let q = random_prime_with_bits(q_bits, rng);
        let correctness_floor = &q * &q * BigUint::from(n);
        let lower = correctness_floor.max(size_floor.clone());
        let upper = &q * &q * &q;
        if &lower + 2u32 >= upper {
            continue;
        }
        let span = &upper - &lower - 1u32;
        for _ in 0..PAIR_ATTEMPTS {
            let start = &lower + random_below(&span, rng);
            let p = next_prime(&start);
            if p < upper {
                return Ok(PrimePair { p, q, n_max: n });
            }
        }
    }
    Err(FieldError::InfeasibleParameters(format!(
        "no prime pair found for n = {n}, q_bits = {q_bits}"
    )))
}
