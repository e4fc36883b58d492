//! Threshold-changeable sharing: share generation, component construction
//! and reconstruction.
//!
//! A dealer encodes `s in F_q` as a codeword `v G` over `F_p`. To recover,
//! the `m >= t` participants agree on a [`Session`] and each publishes a
//! masked component `c_i = b_i s_i + r_i q mod p`; the sum of all `m`
//! components reduced mod `p` and then mod `q` is the secret. Every
//! component is bound to the exact participant set, which is what raises
//! the threshold from `t` to `m`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding;
use crate::field::{random_below, FieldElement, FieldError, Modulus, PrimePair};
use crate::lincode::{
    canonical_coefficients, CodeError, CoefficientSet, GeneratorMatrix, GeneratorWire,
    ParticipantSet,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("secret {secret} is not below q = {q}")]
    SecretOutOfRange { secret: BigUint, q: BigUint },
    #[error("dealer vector must be nonzero")]
    ZeroVector,
    #[error("shareholder {0} is not part of the session")]
    NotAParticipant(usize),
    #[error("session of {m} participants needs {t} <= m <= {n}")]
    BadSetSize { m: usize, t: usize, n: usize },
    #[error("component bound to a different session")]
    SessionMismatch,
    #[error("no component from participant {0}")]
    MissingComponent(usize),
    #[error("participant {0} contributed more than one component")]
    DuplicateIndex(usize),
    #[error("mask {0} is not below q")]
    MaskOutOfRange(BigUint),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("digest mismatch: {0}")]
    DigestMismatch(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Public parameters: primes, threshold, generator matrix.
#[derive(Clone, Debug)]
pub struct SchemeParams {
    primes: PrimePair,
    generator: GeneratorMatrix,
    p: Modulus,
    q: Modulus,
    digest: String,
}

impl SchemeParams {
    pub fn new(primes: PrimePair, generator: GeneratorMatrix) -> Result<Self, SchemeError> {
        if generator.modulus().as_ref() != primes.p() {
            return Err(SchemeError::InvalidParams(
                "generator matrix is not over F_p".into(),
            ));
        }
        let n = generator.n();
        let floor = primes.q() * primes.q() * BigUint::from(n);
        if primes.p() <= &floor {
            return Err(SchemeError::InvalidParams(format!(
                "p = {} must exceed n*q^2 = {floor}",
                primes.p()
            )));
        }
        if !generator.is_vandermonde() {
            match generator.verify_rank() {
                Ok(true) => {}
                Ok(false) => {
                    return Err(SchemeError::InvalidParams(
                        "some t columns of G are dependent".into(),
                    ))
                }
                Err(CodeError::RankCheckTooLarge(_)) => {
                    log::warn!("rank condition of a {n}-column general matrix left unchecked")
                }
                Err(e) => return Err(e.into()),
            }
        }
        let p = Arc::clone(generator.modulus());
        let q = Arc::new(primes.q().clone());
        let digest = encoding::digest_of(&ParamsDigestInput {
            p: primes.p().clone(),
            q: primes.q().clone(),
            t: generator.t(),
            n,
            generator_digest: generator.digest(),
        });
        Ok(Self {
            primes,
            generator,
            p,
            q,
            digest,
        })
    }

    /// Vandermonde parameters. Identities default to `U_i = i + 1`.
    pub fn vandermonde(
        primes: PrimePair,
        t: usize,
        n: usize,
        identities: Option<&[BigUint]>,
    ) -> Result<Self, SchemeError> {
        let p: Modulus = Arc::new(primes.p().clone());
        let ids: Vec<FieldElement> = match identities {
            Some(list) => {
                if list.len() != n + 1 {
                    return Err(SchemeError::InvalidParams(format!(
                        "expected {} identities, got {}",
                        n + 1,
                        list.len()
                    )));
                }
                if let Some(big) = list.iter().find(|u| *u >= primes.p()) {
                    return Err(SchemeError::InvalidParams(format!(
                        "identity {big} is not below p"
                    )));
                }
                list.iter()
                    .map(|u| FieldElement::new(u.clone(), &p))
                    .collect()
            }
            None => (0..=n as u64)
                .map(|i| FieldElement::from_u64(i + 1, &p))
                .collect(),
        };
        let generator = GeneratorMatrix::vandermonde(&ids, t)?;
        Self::new(primes, generator)
    }

    pub fn primes(&self) -> &PrimePair {
        &self.primes
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }

    pub fn t(&self) -> usize {
        self.generator.t()
    }

    pub fn n(&self) -> usize {
        self.generator.n()
    }

    /// Share field modulus.
    pub fn p(&self) -> &Modulus {
        &self.p
    }

    /// Secret space modulus.
    pub fn q(&self) -> &Modulus {
        &self.q
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn to_file(&self) -> ParamsFile {
        ParamsFile {
            p: self.primes.p().clone(),
            q: self.primes.q().clone(),
            t: self.t(),
            n: self.n(),
            generator: self.generator.to_wire(),
            generator_digest: self.generator.digest(),
            params_digest: self.digest.clone(),
        }
    }

    /// Rebuilds parameters from a file and checks both recorded digests.
    pub fn from_file(file: &ParamsFile) -> Result<Self, SchemeError> {
        let primes = PrimePair::new(file.p.clone(), file.q.clone(), file.n)?;
        let generator = GeneratorMatrix::from_wire(&file.generator)?;
        if generator.n() != file.n || generator.t() != file.t {
            return Err(SchemeError::InvalidParams(
                "t or n disagree with the generator".into(),
            ));
        }
        if generator.digest() != file.generator_digest {
            return Err(SchemeError::DigestMismatch("generator".into()));
        }
        let params = Self::new(primes, generator)?;
        if params.digest != file.params_digest {
            return Err(SchemeError::DigestMismatch("params".into()));
        }
        Ok(params)
    }

    pub(crate) fn secret_element(&self, secret: &BigUint) -> Result<FieldElement, SchemeError> {
        if secret >= self.q.as_ref() {
            return Err(SchemeError::SecretOutOfRange {
                secret: secret.clone(),
                q: self.q.as_ref().clone(),
            });
        }
        Ok(FieldElement::new(secret.clone(), &self.q))
    }
}

#[derive(Serialize)]
struct ParamsDigestInput {
    #[serde(with = "encoding::decimal")]
    p: BigUint,
    #[serde(with = "encoding::decimal")]
    q: BigUint,
    t: usize,
    n: usize,
    generator_digest: String,
}

/// On-disk parameter file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsFile {
    #[serde(with = "encoding::decimal")]
    pub p: BigUint,
    #[serde(with = "encoding::decimal")]
    pub q: BigUint,
    pub t: usize,
    pub n: usize,
    pub generator: GeneratorWire,
    pub generator_digest: String,
    pub params_digest: String,
}

/// The dealer's private state: `v` and `s = v g_0 mod p`.
#[derive(Clone, PartialEq, Eq)]
pub struct DealerSecret {
    v: Vec<FieldElement>,
    secret: FieldElement,
}

impl fmt::Debug for DealerSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DealerSecret { .. }")
    }
}

impl DealerSecret {
    /// Accepts an explicit dealer vector; `v g_0 mod p` must land in `F_q`.
    pub fn from_vector(v: Vec<BigUint>, params: &SchemeParams) -> Result<Self, SchemeError> {
        if v.len() != params.t() {
            return Err(SchemeError::InvalidParams(format!(
                "dealer vector has length {} instead of {}",
                v.len(),
                params.t()
            )));
        }
        let v: Vec<FieldElement> = v
            .into_iter()
            .map(|x| FieldElement::new(x, params.p()))
            .collect();
        if v.iter().all(FieldElement::is_zero) {
            return Err(SchemeError::ZeroVector);
        }
        let s = dot(&v, params.generator.column(0), params.p());
        let secret = params.secret_element(s.value())?;
        Ok(Self { v, secret })
    }

    pub fn secret(&self) -> &FieldElement {
        &self.secret
    }

    pub fn vector(&self) -> &[FieldElement] {
        &self.v
    }

    /// Codeword position `i`: `v g_i mod p`.
    pub fn share_for(&self, index: usize, params: &SchemeParams) -> Share {
        Share {
            index,
            value: dot(&self.v, params.generator.column(index), params.p()),
        }
    }

    pub fn shares(&self, params: &SchemeParams) -> Vec<Share> {
        (1..=params.n())
            .map(|i| self.share_for(i, params))
            .collect()
    }
}

fn dot(v: &[FieldElement], column: &[FieldElement], p: &Modulus) -> FieldElement {
    v.iter()
        .zip(column)
        .fold(FieldElement::zero(p), |acc, (a, b)| &acc + &(a * b))
}

/// One shareholder's private share `s_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Share {
    index: usize,
    value: FieldElement,
}

impl fmt::Debug for Share {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Share")
            .field("index", &self.index)
            .finish_non_exhaustive()
    }
}

impl Share {
    /// Wraps a raw value, e.g. one read from disk or forged by an adversary.
    pub fn new(index: usize, value: BigUint, params: &SchemeParams) -> Self {
        Self {
            index,
            value: FieldElement::new(value, params.p()),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn value(&self) -> &FieldElement {
        &self.value
    }

    pub fn to_file(&self, params: &SchemeParams) -> ShareFile {
        ShareFile {
            index: self.index,
            value: self.value.value().clone(),
            params_digest: params.digest().to_string(),
        }
    }

    pub fn from_file(file: &ShareFile, params: &SchemeParams) -> Result<Self, SchemeError> {
        if file.params_digest != params.digest() {
            return Err(SchemeError::DigestMismatch("share file".into()));
        }
        if file.index == 0 || file.index > params.n() {
            return Err(SchemeError::NotAParticipant(file.index));
        }
        if &file.value >= params.p().as_ref() {
            return Err(SchemeError::InvalidParams("share value not below p".into()));
        }
        Ok(Self::new(file.index, file.value.clone(), params))
    }
}

/// On-disk share (or token).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareFile {
    pub index: usize,
    #[serde(with = "encoding::decimal")]
    pub value: BigUint,
    pub params_digest: String,
}

/// Picks `v` uniformly among the `p^(t-1)` nonzero vectors with
/// `v g_0 = s mod p` and derives all `n` shares.
pub fn share_generation<R: RngCore + ?Sized>(
    secret: &BigUint,
    params: &SchemeParams,
    rng: &mut R,
) -> Result<(DealerSecret, Vec<Share>), SchemeError> {
    let s = params.secret_element(secret)?;
    let g0 = params.generator.column(0);
    let pivot = g0
        .iter()
        .position(|x| !x.is_zero())
        .expect("generator columns are nonzero");
    let pivot_inv = g0[pivot].inverse()?;
    let s_in_p = FieldElement::new(s.value().clone(), params.p());

    let v = loop {
        let mut v: Vec<FieldElement> = (0..params.t())
            .map(|k| {
                if k == pivot {
                    FieldElement::zero(params.p())
                } else {
                    FieldElement::new(random_below(params.p(), rng), params.p())
                }
            })
            .collect();
        let partial = dot(&v, g0, params.p());
        v[pivot] = &(&s_in_p - &partial) * &pivot_inv;
        if !v.iter().all(FieldElement::is_zero) {
            break v;
        }
    };
    let dealer = DealerSecret { v, secret: s };
    let shares = dealer.shares(params);
    Ok((dealer, shares))
}

/// A participant set plus a nonce. Components are tagged with the hash of
/// this identity and the parameter digest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionId {
    pub participants: ParticipantSet,
    pub nonce: u64,
}

#[derive(Serialize)]
struct BindingInput<'a> {
    params_digest: &'a str,
    participants: &'a ParticipantSet,
    nonce: u64,
}

/// A reconstruction (or authentication) session with its canonical
/// coefficients.
#[derive(Clone, Debug)]
pub struct Session {
    id: SessionId,
    binding: String,
    coefficients: CoefficientSet,
}

impl Session {
    pub fn open(params: &SchemeParams, indices: &[usize], nonce: u64) -> Result<Self, SchemeError> {
        let participants = ParticipantSet::new(indices, params.n()).map_err(|e| match e {
            CodeError::RepeatedIndex(i) => SchemeError::DuplicateIndex(i),
            CodeError::IndexOutOfRange { index, .. } => SchemeError::NotAParticipant(index),
            other => other.into(),
        })?;
        let m = participants.len();
        if m < params.t() || m > params.n() {
            return Err(SchemeError::BadSetSize {
                m,
                t: params.t(),
                n: params.n(),
            });
        }
        let coefficients = canonical_coefficients(params.generator(), &participants)?;
        let binding = encoding::digest_of(&BindingInput {
            params_digest: params.digest(),
            participants: &participants,
            nonce,
        });
        Ok(Self {
            id: SessionId {
                participants,
                nonce,
            },
            binding,
            coefficients,
        })
    }

    pub fn id(&self) -> &SessionId {
        &self.id
    }

    pub fn participants(&self) -> &ParticipantSet {
        &self.id.participants
    }

    pub fn binding(&self) -> &str {
        &self.binding
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coefficients
    }

    /// `c_i = (b_i s_i + r_i q) mod p` with a fresh uniform `r_i in F_q`.
    pub fn construct_component<R: RngCore + ?Sized>(
        &self,
        share: &Share,
        params: &SchemeParams,
        rng: &mut R,
    ) -> Result<Component, SchemeError> {
        let mask = random_below(params.q(), rng);
        self.construct_component_with_mask(share, params, &mask)
    }

    /// Deterministic variant with a caller-chosen mask `r_i < q`.
    pub fn construct_component_with_mask(
        &self,
        share: &Share,
        params: &SchemeParams,
        mask: &BigUint,
    ) -> Result<Component, SchemeError> {
        let b = self
            .coefficients
            .get(share.index)
            .ok_or(SchemeError::NotAParticipant(share.index))?;
        if mask >= params.q().as_ref() {
            return Err(SchemeError::MaskOutOfRange(mask.clone()));
        }
        let masked = FieldElement::new(mask * params.q().as_ref(), params.p());
        Ok(Component {
            index: share.index,
            value: &(b * &share.value) + &masked,
            session_binding: self.binding.clone(),
        })
    }

    /// Checks that `components` is exactly one per participant, all bound to
    /// this session, and returns `sum c_j mod p`.
    pub fn combine(
        &self,
        components: &[Component],
        params: &SchemeParams,
    ) -> Result<FieldElement, SchemeError> {
        if components.iter().any(|c| c.session_binding != self.binding) {
            return Err(SchemeError::SessionMismatch);
        }
        let members = self.participants().indices();
        let mut seen = vec![false; members.len()];
        let mut total = FieldElement::zero(params.p());
        for c in components {
            let pos = members
                .binary_search(&c.index)
                .map_err(|_| SchemeError::NotAParticipant(c.index))?;
            if std::mem::replace(&mut seen[pos], true) {
                return Err(SchemeError::DuplicateIndex(c.index));
            }
            if c.value.modulus() != params.p() {
                return Err(SchemeError::InvalidParams("component not in F_p".into()));
            }
            total = &total + &c.value;
        }
        if let Some(pos) = seen.iter().position(|s| !s) {
            return Err(SchemeError::MissingComponent(members[pos]));
        }
        Ok(total)
    }
}

/// Convenience wrapper: opens a session for `indices` and builds one
/// component.
pub fn construct_component<R: RngCore + ?Sized>(
    share: &Share,
    params: &SchemeParams,
    indices: &[usize],
    nonce: u64,
    rng: &mut R,
) -> Result<Component, SchemeError> {
    let session = Session::open(params, indices, nonce)?;
    if !session.participants().contains(share.index) {
        return Err(SchemeError::NotAParticipant(share.index));
    }
    session.construct_component(share, params, rng)
}

/// `s = (sum c_j mod p) mod q`. Refuses anything but the full set.
pub fn reconstruct(
    components: &[Component],
    session: &Session,
    params: &SchemeParams,
) -> Result<FieldElement, SchemeError> {
    let total = session.combine(components, params)?;
    Ok(FieldElement::new(total.into_value(), params.q()))
}

/// A masked contribution released during reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    index: usize,
    value: FieldElement,
    session_binding: String,
}

impl Component {
    /// Raw component, e.g. received off the wire or forged.
    pub fn new(
        index: usize,
        value: BigUint,
        session_binding: String,
        params: &SchemeParams,
    ) -> Self {
        Self {
            index,
            value: FieldElement::new(value, params.p()),
            session_binding,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn value(&self) -> &FieldElement {
        &self.value
    }

    pub fn session_binding(&self) -> &str {
        &self.session_binding
    }

    pub fn to_message(&self) -> ComponentMessage {
        ComponentMessage {
            index: self.index,
            value: self.value.value().clone(),
            session_binding: self.session_binding.clone(),
        }
    }

    pub fn from_message(
        msg: &ComponentMessage,
        params: &SchemeParams,
    ) -> Result<Self, SchemeError> {
        if &msg.value >= params.p().as_ref() {
            return Err(SchemeError::InvalidParams(
                "component value not below p".into(),
            ));
        }
        Ok(Self::new(
            msg.index,
            msg.value.clone(),
            msg.session_binding.clone(),
            params,
        ))
    }
}

/// Wire form of a [`Component`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMessage {
    pub index: usize,
    #[serde(with = "encoding::decimal")]
    pub value: BigUint,
    pub session_binding: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn hand_params() -> SchemeParams {
        let primes = PrimePair::new(big(79), big(5), 3).unwrap();
        SchemeParams::vandermonde(primes, 2, 3, None).unwrap()
    }

    fn as_u64(x: &FieldElement) -> u64 {
        u64::try_from(x.value()).unwrap()
    }

    #[test]
    fn hand_trace_shares() {
        let params = hand_params();
        let dealer = DealerSecret::from_vector(vec![big(2), big(1)], &params).unwrap();
        assert_eq!(as_u64(dealer.secret()), 3);
        let shares: Vec<u64> = dealer
            .shares(&params)
            .iter()
            .map(|s| as_u64(s.value()))
            .collect();
        assert_eq!(shares, vec![4, 5, 6]);
    }

    #[test]
    fn hand_trace_components() {
        let params = hand_params();
        let dealer = DealerSecret::from_vector(vec![big(2), big(1)], &params).unwrap();
        let shares = dealer.shares(&params);
        let session = Session::open(&params, &[1, 2], 0).unwrap();
        let c1 = session
            .construct_component_with_mask(&shares[0], &params, &big(2))
            .unwrap();
        let c2 = session
            .construct_component_with_mask(&shares[1], &params, &big(4))
            .unwrap();
        assert_eq!((as_u64(c1.value()), as_u64(c2.value())), (18, 15));
        let unmasked = session
            .construct_component_with_mask(&shares[1], &params, &big(0))
            .unwrap();
        assert_eq!(as_u64(unmasked.value()), 74);
        let s = reconstruct(&[c1.clone(), c2], &session, &params).unwrap();
        assert_eq!(as_u64(&s), 3);
        assert_eq!(
            reconstruct(&[c1], &session, &params),
            Err(SchemeError::MissingComponent(2))
        );
    }

    #[test]
    fn hand_trace_three_participants() {
        let params = hand_params();
        let dealer = DealerSecret::from_vector(vec![big(2), big(1)], &params).unwrap();
        let session = Session::open(&params, &[1, 2, 3], 0).unwrap();
        let comps: Vec<_> = dealer
            .shares(&params)
            .iter()
            .map(|s| {
                session
                    .construct_component_with_mask(s, &params, &big(0))
                    .unwrap()
            })
            .collect();
        let values: Vec<u64> = comps.iter().map(|c| as_u64(c.value())).collect();
        assert_eq!(values, vec![12, 64, 6]);
        assert_eq!(as_u64(&reconstruct(&comps, &session, &params).unwrap()), 3);
    }

    #[test]
    fn zero_vector_refused() {
        let params = hand_params();
        assert_eq!(
            DealerSecret::from_vector(vec![big(0), big(0)], &params),
            Err(SchemeError::ZeroVector)
        );
        // 4 + 1 = 5 is not below q.
        assert!(matches!(
            DealerSecret::from_vector(vec![big(4), big(1)], &params),
            Err(SchemeError::SecretOutOfRange { .. })
        ));
    }

    #[test]
    fn generated_vector_encodes_secret() {
        let params = hand_params();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for s in 0..5u64 {
            for _ in 0..20 {
                let (dealer, shares) = share_generation(&big(s), &params, &mut rng).unwrap();
                assert_eq!(as_u64(dealer.secret()), s);
                let g0 = params.generator().column(0);
                assert_eq!(as_u64(&dot(dealer.vector(), g0, params.p())), s);
                assert!(!dealer.vector().iter().all(FieldElement::is_zero));
                assert_eq!(shares.len(), 3);
            }
        }
        assert!(matches!(
            share_generation(&big(5), &params, &mut rng),
            Err(SchemeError::SecretOutOfRange { .. })
        ));
    }

    #[test]
    fn component_errors() {
        let params = hand_params();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let outsider = Share::new(3, big(6), &params);
        assert_eq!(
            construct_component(&outsider, &params, &[1, 2], 0, &mut rng),
            Err(SchemeError::NotAParticipant(3))
        );
        assert!(matches!(
            Session::open(&params, &[1], 0),
            Err(SchemeError::BadSetSize { m: 1, .. })
        ));
        assert_eq!(
            Session::open(&params, &[1, 5], 0).unwrap_err(),
            SchemeError::NotAParticipant(5)
        );
        assert_eq!(
            Session::open(&params, &[1, 1, 2], 0).unwrap_err(),
            SchemeError::DuplicateIndex(1)
        );
    }

    #[test]
    fn session_mixing_and_duplicates() {
        let params = hand_params();
        let dealer = DealerSecret::from_vector(vec![big(2), big(1)], &params).unwrap();
        let shares = dealer.shares(&params);
        let a = Session::open(&params, &[1, 2], 0).unwrap();
        let b = Session::open(&params, &[1, 2], 1).unwrap();
        assert_ne!(a.binding(), b.binding());
        let ca = a
            .construct_component_with_mask(&shares[0], &params, &big(0))
            .unwrap();
        let cb = b
            .construct_component_with_mask(&shares[1], &params, &big(0))
            .unwrap();
        assert_eq!(
            reconstruct(&[ca.clone(), cb], &a, &params),
            Err(SchemeError::SessionMismatch)
        );
        assert_eq!(
            reconstruct(&[ca.clone(), ca], &a, &params),
            Err(SchemeError::DuplicateIndex(1))
        );
    }

    #[test]
    fn params_file_round_trip() {
        let params = hand_params();
        let file = params.to_file();
        let back = SchemeParams::from_file(&file).unwrap();
        assert_eq!(back.digest(), params.digest());
        let mut tampered = file.clone();
        tampered.params_digest = "00".repeat(32);
        assert!(matches!(
            SchemeParams::from_file(&tampered),
            Err(SchemeError::DigestMismatch(_))
        ));
    }

    #[test]
    fn params_reject_small_p() {
        // 73 > 2*25 but not > 3*25.
        let primes = PrimePair::new(big(73), big(5), 2).unwrap();
        assert!(matches!(
            SchemeParams::vandermonde(primes, 2, 3, None),
            Err(SchemeError::InvalidParams(_))
        ));
    }
}
