use std::fs;

use anyhow::{Context, Result};
use num_bigint::BigUint;
use tcss_core::analysis::{
    enumerate_linear_combination, enumerate_mixed_combination, forged_token_acceptance,
    ipa_success_probability, leakage_below_threshold, render_text, subset_component_leakage,
    AnalysisConfig, ForgeStrategy, TinyScheme,
};
use tcss_core::encoding::{canonical_json, parse_decimal};
use tcss_core::field::{generate_prime_pair, random_below, PrimePair, DEFAULT_Q_BITS};
use tcss_core::groupauth::{
    authenticate as check_group, token_generation_for_secret, GroupCommitment,
};
use tcss_core::netsim::{
    run_session, AgentOutcome, Forge, Mode, ParticipantAgent, SessionConfig, Timing, Topology,
};
use tcss_core::tcss::{
    reconstruct as recover, Component, ComponentMessage, SchemeError, SchemeParams, Session, Share,
    ShareFile,
};
use tcss_core::Execution;

use crate::args::{
    AnalyzeArgs, AttackArgs, AttackMode, AuthenticateArgs, ComponentArgs, DealArgs,
    ReconstructArgs, SetupArgs, TopologyArg,
};
use crate::files::{commitment_path, read_json, read_params, rng, share_path, write_json};
use crate::{Failure, EXIT_OK, EXIT_REJECTED};

fn decimal(text: &str, what: &str) -> Result<BigUint> {
    parse_decimal(text).map_err(|e| Failure::usage(format!("{what}: {e}")).into())
}

pub fn setup(args: SetupArgs) -> Result<u8> {
    if args.t < 2 || args.t > args.n {
        return Err(Failure::infeasible(format!(
            "threshold {} must lie in [2, n = {}]",
            args.t, args.n
        ))
        .into());
    }
    let mut rng = rng(args.seed);
    let primes = match (&args.p, &args.q) {
        (Some(p), Some(q)) => PrimePair::new(decimal(p, "--p")?, decimal(q, "--q")?, args.n)?,
        (None, Some(q)) => PrimePair::for_q(args.n, decimal(q, "--q")?)?,
        _ => generate_prime_pair(args.n, args.q_bits.unwrap_or(DEFAULT_Q_BITS), &mut rng)?,
    };
    let identities = args
        .identities
        .as_ref()
        .map(|list| {
            list.iter()
                .map(|u| decimal(u, "--identities"))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let params = SchemeParams::vandermonde(primes, args.t, args.n, identities.as_deref())?;
    write_json(&args.out, &params.to_file())?;
    println!("p_bits: {}", params.p().bits());
    println!("q_bits: {}", params.q().bits());
    println!("params_digest: {}", params.digest());
    Ok(EXIT_OK)
}

pub fn deal(args: DealArgs) -> Result<u8> {
    let params = read_params(&args.params)?;
    let mut rng = rng(args.seed);
    let secret = match &args.secret {
        Some(s) => decimal(s, "--secret")?,
        None => random_below(params.q(), &mut rng),
    };
    let issue = token_generation_for_secret(&secret, &params, &mut rng)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    for token in &issue.tokens {
        write_json(
            &share_path(&args.out_dir, token.index()),
            &token.to_file(&params),
        )?;
    }
    write_json(&commitment_path(&args.out_dir), &issue.commitment)?;
    println!("shares: {}", issue.tokens.len());
    println!("commitment: {}", issue.commitment.hash);
    Ok(EXIT_OK)
}

fn read_share(path: &std::path::Path, params: &SchemeParams) -> Result<Share> {
    let file: ShareFile = read_json(path)?;
    Ok(Share::from_file(&file, params)?)
}

pub fn component(args: ComponentArgs) -> Result<u8> {
    let params = read_params(&args.params)?;
    let share = read_share(&args.share, &params)?;
    let session = Session::open(&params, &args.participants, args.nonce)?;
    let c = session.construct_component(&share, &params, &mut rng(args.seed))?;
    write_json(&args.out, &c.to_message())?;
    Ok(EXIT_OK)
}

pub fn reconstruct(args: ReconstructArgs) -> Result<u8> {
    let params = read_params(&args.params)?;
    let shares = args
        .shares
        .iter()
        .map(|p| read_share(p, &params))
        .collect::<Result<Vec<_>>>()?;
    let participants = args
        .participants
        .clone()
        .unwrap_or_else(|| shares.iter().map(Share::index).collect());
    let session = Session::open(&params, &participants, args.nonce)?;
    let mut rng = rng(args.seed);
    let components = shares
        .iter()
        .map(|s| session.construct_component(s, &params, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    let secret = recover(&components, &session, &params)?.into_value();
    println!("{secret}");
    if let Some(expected) = &args.expect {
        if decimal(expected, "--expect")? != secret {
            return Err(Failure::rejected("recovered secret differs from --expect").into());
        }
    }
    Ok(EXIT_OK)
}

pub fn authenticate(args: AuthenticateArgs) -> Result<u8> {
    let params = read_params(&args.params)?;
    let commitment: GroupCommitment = read_json(&args.commitment)?;
    let session = Session::open(&params, &args.participants, args.nonce)?;
    let components = args
        .components
        .iter()
        .map(|p| {
            let msg: ComponentMessage = read_json(p)?;
            Ok(Component::from_message(&msg, &params)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = match check_group(&components, &session, &commitment, &params) {
        Ok(v) => v,
        Err(
            e @ (SchemeError::SessionMismatch
            | SchemeError::MissingComponent(_)
            | SchemeError::NotAParticipant(_)
            | SchemeError::DuplicateIndex(_)),
        ) => {
            println!("accepted: false");
            println!("reason: {e}");
            return Ok(EXIT_REJECTED);
        }
        Err(e) => return Err(e.into()),
    };
    let mut record = verdict.to_record();
    if !args.show_key {
        record.group_key = None;
    }
    println!(
        "{}",
        String::from_utf8(canonical_json(&record)).expect("utf-8")
    );
    Ok(if verdict.accepted {
        EXIT_OK
    } else {
        EXIT_REJECTED
    })
}

enum AdversarySpec {
    Impersonate { forge: Forge, timing: Timing },
    Replay,
    Mutate { offset: BigUint, timing: Timing },
}

fn parse_adversary(spec: &str) -> Result<(usize, AdversarySpec)> {
    let bad = || Failure::usage(format!("cannot parse adversary `{spec}`"));
    let mut parts = spec.split(':');
    let index: usize = parts.next().and_then(|i| i.parse().ok()).ok_or_else(bad)?;
    let kind = parts.next().ok_or_else(bad)?;
    let mut forge = Forge::Uniform;
    let mut timing = Timing::Simultaneous;
    for opt in parts {
        match opt.split_once('=') {
            None if opt == "last" => timing = Timing::Last,
            Some(("fixed", v)) => forge = Forge::Fixed(decimal(v, "fixed forgery")?),
            _ => return Err(bad().into()),
        }
    }
    let parsed = match kind.split_once('=') {
        None if kind == "ipa" => AdversarySpec::Impersonate { forge, timing },
        None if kind == "replay" => AdversarySpec::Replay,
        Some(("mutate", offset)) => AdversarySpec::Mutate {
            offset: decimal(offset, "mutation offset")?,
            timing,
        },
        _ => return Err(bad().into()),
    };
    Ok((index, parsed))
}

pub fn attack(args: AttackArgs) -> Result<u8> {
    let params = read_params(&args.params)?;
    let mut rng = rng(args.seed);
    let nonce = args
        .nonce
        .unwrap_or_else(|| rand::RngCore::next_u64(&mut rng));

    let mut adversaries = std::collections::BTreeMap::new();
    for spec in &args.adversaries {
        let (index, parsed) = parse_adversary(spec)?;
        if !args.participants.contains(&index) {
            return Err(Failure::usage(format!("adversary {index} is not a participant")).into());
        }
        adversaries.insert(index, parsed);
    }

    let mut agents = Vec::with_capacity(args.participants.len());
    for &index in &args.participants {
        let load = || read_share(&share_path(&args.shares_dir, index), &params);
        let agent = match adversaries.remove(&index) {
            None => ParticipantAgent::honest(load()?),
            Some(AdversarySpec::Impersonate { forge, timing }) => {
                ParticipantAgent::impersonator(index, forge, timing)
            }
            Some(AdversarySpec::Mutate { offset, timing }) => {
                ParticipantAgent::mutator(load()?, offset, timing)
            }
            Some(AdversarySpec::Replay) => {
                let earlier = Session::open(&params, &args.participants, nonce.wrapping_sub(1))?;
                let stale = earlier.construct_component(&load()?, &params, &mut rng)?;
                ParticipantAgent::replayer(stale)
            }
        };
        agents.push(agent);
    }

    let mode = match args.mode {
        AttackMode::Reconstruct => Mode::Reconstruction,
        AttackMode::Authenticate => {
            Mode::Authentication(read_json(&commitment_path(&args.shares_dir))?)
        }
    };
    let mut config = SessionConfig::new(mode);
    config.nonce = Some(nonce);
    config.topology = match args.topology {
        TopologyArg::Pairwise => Topology::PairwisePrivate,
        TopologyArg::Broadcast => Topology::Broadcast,
    };
    let transcript = run_session(&params, &agents, &config, &mut rng)
        .map_err(|e| Failure::usage(e.to_string()))?;
    fs::write(&args.out, transcript.to_jsonl())
        .with_context(|| format!("writing {}", args.out.display()))?;

    println!("session_binding: {}", transcript.session_binding);
    println!("messages: {}", transcript.messages.len());
    let mut recovered = Vec::new();
    for (index, outcome) in transcript.honest_outcomes() {
        let line = match outcome {
            AgentOutcome::Recovered(s) => {
                recovered.push(s.clone());
                "recovered".to_string()
            }
            AgentOutcome::Verdict(v) if v.accepted => "accepted".to_string(),
            AgentOutcome::Verdict(_) => "rejected".to_string(),
            AgentOutcome::Failed(e) => format!("failed ({e})"),
            AgentOutcome::Adversary => continue,
        };
        println!("agent {index}: {line}");
    }
    if !recovered.is_empty() {
        let agree = recovered.windows(2).all(|w| w[0] == w[1]);
        println!("honest agents agree: {agree}");
    }
    Ok(EXIT_OK)
}

fn need<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Failure::usage(format!("{flag} is required for this analysis")).into())
}

fn parse_forge(text: &str) -> Result<ForgeStrategy> {
    match text.split_once('=') {
        None if text == "exhaustive" => Ok(ForgeStrategy::Exhaustive),
        None if text == "honest" => Ok(ForgeStrategy::Honest),
        Some(("fixed", v)) => {
            Ok(ForgeStrategy::Fixed(v.parse().map_err(|_| {
                Failure::usage(format!("bad forged value `{v}`"))
            })?))
        }
        _ => Err(Failure::usage(format!("unknown forge strategy `{text}`")).into()),
    }
}

pub fn analyze(args: AnalyzeArgs) -> Result<u8> {
    let mut config = AnalysisConfig::default();
    if let Some(b) = args.budget {
        config.budget = b;
    }
    if args.exact {
        config.fallback_samples = None;
    }
    if args.sequential {
        config.execution = Execution::Sequential;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }

    let emit = |value: &dyn erased::Report| {
        if args.json {
            println!("{}", value.json());
        } else {
            print!("{}", value.text());
        }
    };

    if args.linear || args.mixed {
        let report = if args.linear {
            enumerate_linear_combination(&args.coeffs, args.p, &config)?
        } else {
            let q = need(args.q, "--q")?;
            enumerate_mixed_combination(&args.coeffs, &args.small_coeffs, args.p, q, &config)?
        };
        emit(&report);
        let broken = report.hypothesis_holds && !report.uniform;
        return Ok(if broken { EXIT_REJECTED } else { EXIT_OK });
    }

    let q = need(args.q, "--q")?;
    let t = need(args.t, "--t")?;
    let n = need(args.n, "--n")?;
    let scheme = TinyScheme::new(args.p, q, t, n)?;
    let within = if args.threshold {
        let report = leakage_below_threshold(&scheme, &args.known, &config)?;
        emit(&report);
        report.within_bounds
    } else if args.impersonation {
        let m = need(args.m, "--m")?;
        let report = ipa_success_probability(&scheme, m, parse_forge(&args.forge)?, &config)?;
        emit(&report);
        report.within_bounds
    } else if args.subsets {
        let m = need(args.m, "--m")?;
        let report = subset_component_leakage(&scheme, m, need(args.j, "--j")?, &config)?;
        emit(&report);
        report.within_bounds
    } else {
        let m = need(args.m, "--m")?;
        let report = forged_token_acceptance(&scheme, m, &config)?;
        emit(&report);
        report.within_bounds
    };
    Ok(if within { EXIT_OK } else { EXIT_REJECTED })
}

mod erased {
    use serde::Serialize;

    use super::{canonical_json, render_text};

    /// Lets one closure print any report type.
    pub trait Report {
        fn json(&self) -> String;
        fn text(&self) -> String;
    }

    impl<T: Serialize> Report for T {
        fn json(&self) -> String {
            String::from_utf8(canonical_json(self)).expect("utf-8")
        }

        fn text(&self) -> String {
            render_text(self)
        }
    }
}
