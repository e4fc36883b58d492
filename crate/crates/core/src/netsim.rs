//! Single-round, in-memory session simulator.
//!
//! Each agent emits one component to every peer, then every honest agent
//! reconstructs or authenticates from what it received plus its own
//! component. Adversarial agents cover the illegal-participant attack (an
//! impersonator with no share under a legal index), replay of a component
//! from an earlier session, and tampering with an otherwise valid
//! component.
//!
//! Per-agent randomness is derived from the caller's generator in index
//! order, so a fixed seed yields a byte-identical transcript whether or not
//! agents run in parallel.

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::field::{random_below, FieldElement};
use crate::groupauth::{AuthAccumulator, GroupCommitment, VerdictRecord};
use crate::parallel::{map_vec, Execution};
use crate::tcss::{Component, ComponentMessage, SchemeError, SchemeParams, Session, Share};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("configuration error: {0}")]
    ConfigError(String),
    #[error("no agent with index {0} in this session")]
    NoSuchAgent(usize),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// What an impersonator sends in place of a real component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Forge {
    Fixed(BigUint),
    Uniform,
}

/// Whether an adversary sends with everyone else or only after it has seen
/// every other component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Timing {
    Simultaneous,
    Last,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Behavior {
    Honest,
    IpaImpersonator { forge: Forge, timing: Timing },
    Replayer { stale: Component },
    Mutator { offset: BigUint, timing: Timing },
}

impl Behavior {
    fn role(&self) -> &'static str {
        match self {
            Behavior::Honest => "honest",
            Behavior::IpaImpersonator { .. } => "ipa_impersonator",
            Behavior::Replayer { .. } => "replayer",
            Behavior::Mutator { .. } => "mutator",
        }
    }

    fn timing(&self) -> Timing {
        match self {
            Behavior::IpaImpersonator { timing, .. } | Behavior::Mutator { timing, .. } => *timing,
            _ => Timing::Simultaneous,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParticipantAgent {
    index: usize,
    behavior: Behavior,
    share: Option<Share>,
}

impl ParticipantAgent {
    pub fn honest(share: Share) -> Self {
        Self {
            index: share.index(),
            behavior: Behavior::Honest,
            share: Some(share),
        }
    }

    /// Claims `index` without holding its share.
    pub fn impersonator(index: usize, forge: Forge, timing: Timing) -> Self {
        Self {
            index,
            behavior: Behavior::IpaImpersonator { forge, timing },
            share: None,
        }
    }

    /// Re-sends a component captured in an earlier session.
    pub fn replayer(stale: Component) -> Self {
        Self {
            index: stale.index(),
            behavior: Behavior::Replayer { stale },
            share: None,
        }
    }

    /// Holds a valid share but adds `offset` to its component.
    pub fn mutator(share: Share, offset: BigUint, timing: Timing) -> Self {
        Self {
            index: share.index(),
            behavior: Behavior::Mutator { offset, timing },
            share: Some(share),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn behavior(&self) -> &Behavior {
        &self.behavior
    }

    pub fn is_honest(&self) -> bool {
        matches!(self.behavior, Behavior::Honest)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Reconstruction,
    Authentication(GroupCommitment),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// One private message per ordered pair of agents.
    #[default]
    PairwisePrivate,
    /// One message per sender addressed to the whole group.
    Broadcast,
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub mode: Mode,
    pub topology: Topology,
    /// Drawn from the generator when absent.
    pub nonce: Option<u64>,
    pub execution: Execution,
}

impl SessionConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            topology: Topology::default(),
            nonce: None,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub sender: usize,
    pub receivers: Vec<usize>,
    pub component: Component,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AgentOutcome {
    Recovered(BigUint),
    Verdict(VerdictRecord),
    Failed(SchemeError),
    /// Adversaries produce no verdict; their view is in the message log.
    Adversary,
}

#[derive(Clone, Debug)]
pub struct SessionTranscript {
    pub session_binding: String,
    pub nonce: u64,
    pub participants: Vec<usize>,
    pub roles: Vec<(usize, &'static str)>,
    pub messages: Vec<Message>,
    pub outcomes: Vec<(usize, AgentOutcome)>,
}

impl SessionTranscript {
    pub fn outcome(&self, index: usize) -> Option<&AgentOutcome> {
        self.outcomes
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, o)| o)
    }

    fn role(&self, index: usize) -> Option<&'static str> {
        self.roles
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, r)| *r)
    }

    /// Honest outcomes only.
    pub fn honest_outcomes(&self) -> impl Iterator<Item = &(usize, AgentOutcome)> {
        self.outcomes
            .iter()
            .filter(|(i, _)| self.role(*i) == Some("honest"))
    }

    /// One JSON object per line: a session header, every message in
    /// delivery order, then one outcome per agent.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |value: serde_json::Value| {
            out.push_str(&value.to_string());
            out.push('\n');
        };
        push(json!({
            "event": "session",
            "session_binding": self.session_binding,
            "nonce": self.nonce,
            "participants": self.participants,
            "roles": self.roles.iter().map(|(i, r)| json!({"index": i, "role": r})).collect::<Vec<_>>(),
        }));
        for m in &self.messages {
            push(json!({
                "event": "message",
                "sender": m.sender,
                "receivers": m.receivers,
                "component": serde_json::to_value(m.component.to_message()).expect("serializable"),
            }));
        }
        for (index, outcome) in &self.outcomes {
            let body = match outcome {
                AgentOutcome::Recovered(s) => json!({"recovered": s.to_str_radix(10)}),
                AgentOutcome::Verdict(v) => json!({"verdict": v}),
                AgentOutcome::Failed(e) => json!({"error": e.to_string()}),
                AgentOutcome::Adversary => json!({"adversary": true}),
            };
            push(json!({"event": "outcome", "agent": index, "result": body}));
        }
        out
    }
}

/// Runs one synchronous round.
pub fn run_session<R: RngCore + ?Sized>(
    params: &SchemeParams,
    agents: &[ParticipantAgent],
    config: &SessionConfig,
    rng: &mut R,
) -> Result<SessionTranscript, SimError> {
    let mut indices: Vec<usize> = agents.iter().map(|a| a.index).collect();
    indices.sort_unstable();
    if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
        return Err(SimError::ConfigError(format!("index {} used twice", w[0])));
    }
    if agents.iter().all(|a| !a.is_honest()) {
        return Err(SimError::ConfigError("no honest agent in session".into()));
    }
    if agents.len() < params.t() {
        return Err(SimError::ConfigError(format!(
            "{} agents is below the threshold {}",
            agents.len(),
            params.t()
        )));
    }

    let nonce = config.nonce.unwrap_or_else(|| rng.next_u64());
    let session = Session::open(params, &indices, nonce)?;

    let mut ordered: Vec<&ParticipantAgent> = agents.iter().collect();
    ordered.sort_by_key(|a| a.index);
    let seeds: Vec<[u8; 32]> = ordered
        .iter()
        .map(|_| {
            let mut seed = [0u8; 32];
            rng.fill_bytes(&mut seed);
            seed
        })
        .collect();
    let jobs: Vec<(&ParticipantAgent, [u8; 32])> = ordered.iter().copied().zip(seeds).collect();

    let emitted: Vec<Result<Component, SchemeError>> =
        map_vec(config.execution, &jobs, |(agent, seed)| {
            let mut agent_rng = ChaCha20Rng::from_seed(*seed);
            emit(agent, &session, params, &mut agent_rng)
        });
    let mut components = Vec::with_capacity(emitted.len());
    for c in emitted {
        components.push(c?);
    }

    // Simultaneous senders first, then anyone who waited.
    let mut send_order: Vec<usize> = (0..jobs.len()).collect();
    send_order.sort_by_key(|&k| (jobs[k].0.behavior.timing() == Timing::Last, jobs[k].0.index));

    let mut messages = Vec::new();
    for &k in &send_order {
        let sender = jobs[k].0.index;
        let others: Vec<usize> = indices.iter().copied().filter(|&i| i != sender).collect();
        match config.topology {
            Topology::Broadcast => messages.push(Message {
                sender,
                receivers: others,
                component: components[k].clone(),
            }),
            Topology::PairwisePrivate => {
                for r in others {
                    messages.push(Message {
                        sender,
                        receivers: vec![r],
                        component: components[k].clone(),
                    });
                }
            }
        }
    }

    let outcomes: Vec<(usize, AgentOutcome)> = map_vec(config.execution, &jobs, |(agent, _)| {
        let own = jobs
            .iter()
            .position(|(a, _)| a.index == agent.index)
            .map(|k| &components[k])
            .expect("agent is in the job list");
        let outcome = if agent.is_honest() {
            let inbox: Vec<Component> = messages
                .iter()
                .filter(|m| m.receivers.contains(&agent.index))
                .map(|m| m.component.clone())
                .collect();
            evaluate(own, inbox, &session, &config.mode, params)
        } else {
            AgentOutcome::Adversary
        };
        (agent.index, outcome)
    });

    Ok(SessionTranscript {
        session_binding: session.binding().to_string(),
        nonce,
        participants: indices,
        roles: jobs
            .iter()
            .map(|(a, _)| (a.index, a.behavior.role()))
            .collect(),
        messages,
        outcomes,
    })
}

fn emit(
    agent: &ParticipantAgent,
    session: &Session,
    params: &SchemeParams,
    rng: &mut ChaCha20Rng,
) -> Result<Component, SchemeError> {
    match &agent.behavior {
        Behavior::Honest => {
            let share = agent.share.as_ref().expect("honest agents hold a share");
            session.construct_component(share, params, rng)
        }
        Behavior::IpaImpersonator { forge, .. } => {
            let value = match forge {
                Forge::Fixed(v) => v.clone(),
                Forge::Uniform => random_below(params.p(), rng),
            };
            Ok(Component::new(
                agent.index,
                value,
                session.binding().to_string(),
                params,
            ))
        }
        Behavior::Replayer { stale } => Ok(stale.clone()),
        Behavior::Mutator { offset, .. } => {
            let share = agent.share.as_ref().expect("mutators hold a share");
            let honest = session.construct_component(share, params, rng)?;
            let shifted = honest.value() + &FieldElement::new(offset.clone(), params.p());
            Ok(Component::new(
                agent.index,
                shifted.into_value(),
                session.binding().to_string(),
                params,
            ))
        }
    }
}

fn evaluate(
    own: &Component,
    inbox: Vec<Component>,
    session: &Session,
    mode: &Mode,
    params: &SchemeParams,
) -> AgentOutcome {
    let mut all = Vec::with_capacity(inbox.len() + 1);
    all.push(own.clone());
    all.extend(inbox);
    match mode {
        Mode::Reconstruction => match crate::tcss::reconstruct(&all, session, params) {
            Ok(s) => AgentOutcome::Recovered(s.into_value()),
            Err(e) => AgentOutcome::Failed(e),
        },
        Mode::Authentication(commitment) => {
            let mut acc = AuthAccumulator::new(session);
            for c in all {
                if let Err(e) = acc.receive(c) {
                    return AgentOutcome::Failed(e);
                }
            }
            match acc.verdict(commitment, params) {
                Ok(v) => AgentOutcome::Verdict(v.to_record()),
                Err(e) => AgentOutcome::Failed(e),
            }
        }
    }
}

/// The honestly built components that agent `index` received.
pub fn adversary_view_extract(
    transcript: &SessionTranscript,
    index: usize,
) -> Result<Vec<Component>, SimError> {
    if !transcript.participants.contains(&index) {
        return Err(SimError::NoSuchAgent(index));
    }
    Ok(transcript
        .messages
        .iter()
        .filter(|m| m.receivers.contains(&index))
        .filter(|m| transcript.role(m.sender) == Some("honest"))
        .map(|m| m.component.clone())
        .collect())
}

/// Wire messages of the components in a view, for export.
pub fn view_messages(view: &[Component]) -> Vec<ComponentMessage> {
    view.iter().map(Component::to_message).collect()
}
