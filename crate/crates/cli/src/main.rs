//! `tcss`: command-line front end for dealing, reconstruction, group
//! authentication, attack simulation and leakage analysis.

mod args;
mod commands;
mod files;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Process exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

/// An error that carries its own exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INFEASIBLE,
            message: message.into(),
        }
    }

    pub fn rejected(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_REJECTED,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Setup(a) => commands::setup(a),
        Command::Deal(a) => commands::deal(a),
        Command::Component(a) => commands::component(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Authenticate(a) => commands::authenticate(a),
        Command::Attack(a) => commands::attack(a),
        Command::Analyze(a) => commands::analyze(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let code = classify(&err);
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    use tcss_core::analysis::AnalysisError;
    use tcss_core::field::FieldError;
    use tcss_core::lincode::CodeError;
    use tcss_core::tcss::SchemeError;

    if let Some(f) = err.downcast_ref::<Failure>() {
        return f.code;
    }
    if err.downcast_ref::<FieldError>().is_some() || err.downcast_ref::<CodeError>().is_some() {
        return EXIT_INFEASIBLE;
    }
    if let Some(e) = err.downcast_ref::<SchemeError>() {
        return match e {
            SchemeError::InvalidParams(_) | SchemeError::Field(_) | SchemeError::Code(_) => {
                EXIT_INFEASIBLE
            }
            _ => EXIT_USAGE,
        };
    }
    if let Some(e) = err.downcast_ref::<AnalysisError>() {
        return match e {
            AnalysisError::TooLarge { .. } => EXIT_INFEASIBLE,
            _ => EXIT_USAGE,
        };
    }
    EXIT_USAGE
}
