//! m-to-m group authentication on top of the sharing scheme.
//!
//! The group manager deals tokens (shares) and publishes `H(s)`. A group of
//! `m` users each publish a component; everyone sums them, and the group is
//! accepted iff the recovered value hashes to the commitment. On acceptance
//! `k = sum c_j mod p` doubles as a fresh group key.
//!
//! The verdict is for the group as a whole: a rejection does not say which
//! participant was illegitimate.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::encoding;
use crate::field::{random_below, FieldElement};
use crate::tcss::{
    share_generation, Component, ComponentMessage, DealerSecret, SchemeError, SchemeParams,
    Session, Share,
};

/// Tokens are shares under another name.
pub type Token = Share;

/// Published `H(s)`, domain-separated by the parameter digest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCommitment {
    pub hash: String,
    pub params_digest: String,
}

impl GroupCommitment {
    pub fn for_secret(secret: &BigUint, params: &SchemeParams) -> Self {
        Self {
            hash: commitment_hash(secret, params.digest()),
            params_digest: params.digest().to_string(),
        }
    }

    pub fn matches(&self, candidate: &BigUint) -> bool {
        commitment_hash(candidate, &self.params_digest) == self.hash
    }
}

/// `SHA-256(params_digest || "|" || decimal(s))`, lowercase hex.
pub fn commitment_hash(secret: &BigUint, params_digest: &str) -> String {
    let mut bytes = Vec::with_capacity(params_digest.len() + 80);
    bytes.extend_from_slice(params_digest.as_bytes());
    bytes.push(b'|');
    bytes.extend_from_slice(secret.to_str_radix(10).as_bytes());
    encoding::sha256_hex(&bytes)
}

/// Output of token generation. The manager may drop `dealer` entirely.
#[derive(Debug)]
pub struct TokenIssue {
    pub commitment: GroupCommitment,
    pub tokens: Vec<Token>,
    pub dealer: DealerSecret,
}

/// Deals tokens for a uniformly random secret.
pub fn token_generation<R: RngCore + ?Sized>(
    params: &SchemeParams,
    rng: &mut R,
) -> Result<TokenIssue, SchemeError> {
    let secret = random_below(params.q(), rng);
    token_generation_for_secret(&secret, params, rng)
}

pub fn token_generation_for_secret<R: RngCore + ?Sized>(
    secret: &BigUint,
    params: &SchemeParams,
    rng: &mut R,
) -> Result<TokenIssue, SchemeError> {
    let (dealer, tokens) = share_generation(secret, params, rng)?;
    Ok(TokenIssue {
        commitment: GroupCommitment::for_secret(secret, params),
        tokens,
        dealer,
    })
}

/// Same computation as component construction, applied to a token.
pub fn make_auth_component<R: RngCore + ?Sized>(
    token: &Token,
    session: &Session,
    params: &SchemeParams,
    rng: &mut R,
) -> Result<Component, SchemeError> {
    session.construct_component(token, params, rng)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthVerdict {
    pub accepted: bool,
    pub recovered_digest: String,
    /// `sum c_j mod p`, present only when accepted.
    pub group_key: Option<FieldElement>,
}

impl AuthVerdict {
    pub fn to_record(&self) -> VerdictRecord {
        VerdictRecord {
            accepted: self.accepted,
            recovered_digest: self.recovered_digest.clone(),
            group_key: self.group_key.as_ref().map(|k| k.value().to_str_radix(10)),
        }
    }
}

/// Wire form of a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub accepted: bool,
    pub recovered_digest: String,
    pub group_key: Option<String>,
}

/// Recomputes `s'` from the full component set and compares `H(s')`.
pub fn authenticate(
    components: &[Component],
    session: &Session,
    commitment: &GroupCommitment,
    params: &SchemeParams,
) -> Result<AuthVerdict, SchemeError> {
    if commitment.params_digest != params.digest() {
        return Err(SchemeError::DigestMismatch("commitment".into()));
    }
    let key = session.combine(components, params)?;
    let recovered = key.value() % params.q().as_ref();
    let recovered_digest = commitment_hash(&recovered, params.digest());
    let accepted = recovered_digest == commitment.hash;
    Ok(AuthVerdict {
        accepted,
        recovered_digest,
        group_key: accepted.then_some(key),
    })
}

/// Collects components for one participant until the set is complete.
#[derive(Debug)]
pub struct AuthAccumulator<'a> {
    session: &'a Session,
    received: BTreeMap<usize, Component>,
}

impl<'a> AuthAccumulator<'a> {
    pub fn new(session: &'a Session) -> Self {
        Self {
            session,
            received: BTreeMap::new(),
        }
    }

    pub fn receive(&mut self, component: Component) -> Result<(), SchemeError> {
        if component.session_binding() != self.session.binding() {
            return Err(SchemeError::SessionMismatch);
        }
        if !self.session.participants().contains(component.index()) {
            return Err(SchemeError::NotAParticipant(component.index()));
        }
        if self.received.contains_key(&component.index()) {
            return Err(SchemeError::DuplicateIndex(component.index()));
        }
        self.received.insert(component.index(), component);
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.received.len() == self.session.participants().len()
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.received.values()
    }

    pub fn verdict(
        &self,
        commitment: &GroupCommitment,
        params: &SchemeParams,
    ) -> Result<AuthVerdict, SchemeError> {
        let all: Vec<Component> = self.received.values().cloned().collect();
        authenticate(&all, self.session, commitment, params)
    }
}

/// Components plus the verdict they produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthTranscript {
    pub session_binding: String,
    pub components: Vec<ComponentMessage>,
    pub verdict: VerdictRecord,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimePair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn params() -> SchemeParams {
        let primes = PrimePair::new(BigUint::from(79u8), BigUint::from(5u8), 3).unwrap();
        SchemeParams::vandermonde(primes, 2, 3, None).unwrap()
    }

    #[test]
    fn hand_trace_accepts_with_group_key() {
        let params = params();
        let dealer = DealerSecret::from_vector(vec![2u8.into(), 1u8.into()], &params).unwrap();
        let tokens = dealer.shares(&params);
        let commitment = GroupCommitment::for_secret(&BigUint::from(3u8), &params);
        let session = Session::open(&params, &[1, 2, 3], 0).unwrap();
        let zero = BigUint::from(0u8);
        let mut comps: Vec<_> = tokens
            .iter()
            .map(|t| {
                session
                    .construct_component_with_mask(t, &params, &zero)
                    .unwrap()
            })
            .collect();
        let verdict = authenticate(&comps, &session, &commitment, &params).unwrap();
        assert!(verdict.accepted);
        assert_eq!(verdict.group_key.unwrap().value(), &BigUint::from(3u8));

        // c_3 + 1 shifts s' to 4.
        let bumped = comps[2].value().value() + 1u32;
        comps[2] = Component::new(3, bumped, session.binding().to_string(), &params);
        let verdict = authenticate(&comps, &session, &commitment, &params).unwrap();
        assert!(!verdict.accepted);
        assert!(verdict.group_key.is_none());

        assert_eq!(
            authenticate(&[], &session, &commitment, &params),
            Err(SchemeError::MissingComponent(1))
        );
    }

    #[test]
    fn commitment_depends_only_on_secret() {
        let params = params();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let a = token_generation_for_secret(&BigUint::from(3u8), &params, &mut rng).unwrap();
        let b = token_generation_for_secret(&BigUint::from(3u8), &params, &mut rng).unwrap();
        assert_eq!(a.commitment, b.commitment);
        assert_ne!(
            a.tokens
                .iter()
                .map(|t| t.value().clone())
                .collect::<Vec<_>>(),
            b.tokens
                .iter()
                .map(|t| t.value().clone())
                .collect::<Vec<_>>()
        );
        assert!(a.commitment.matches(&BigUint::from(3u8)));
        assert!(!a.commitment.matches(&BigUint::from(2u8)));
    }

    #[test]
    fn accumulator_rejects_foreign_and_duplicate() {
        let params = params();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let issue = token_generation(&params, &mut rng).unwrap();
        let session = Session::open(&params, &[1, 2], 7).unwrap();
        let other = Session::open(&params, &[1, 2], 8).unwrap();
        let mut acc = AuthAccumulator::new(&session);
        let c1 = make_auth_component(&issue.tokens[0], &session, &params, &mut rng).unwrap();
        acc.receive(c1.clone()).unwrap();
        assert_eq!(acc.receive(c1), Err(SchemeError::DuplicateIndex(1)));
        let stale = make_auth_component(&issue.tokens[1], &other, &params, &mut rng).unwrap();
        assert_eq!(acc.receive(stale), Err(SchemeError::SessionMismatch));
        assert!(!acc.is_complete());
        let c2 = make_auth_component(&issue.tokens[1], &session, &params, &mut rng).unwrap();
        acc.receive(c2).unwrap();
        assert!(acc.is_complete());
        assert!(acc.verdict(&issue.commitment, &params).unwrap().accepted);
    }
}
