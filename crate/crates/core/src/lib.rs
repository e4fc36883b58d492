//! Threshold-changeable secret sharing over linear codes.
//!
//! Modules, bottom-up:
//!
//! - [`field`]: big-integer prime fields and `(p, q)` generation.
//! - [`lincode`]: generator matrices and combination coefficients.
//! - [`tcss`]: dealing, component construction, reconstruction.
//! - [`groupauth`]: one-round group authentication and key agreement.
//! - [`netsim`]: in-memory session simulator with adversarial agents.
//! - [`analysis`]: exact enumeration of leakage at toy sizes.

pub mod analysis;
pub mod encoding;
pub mod field;
pub mod groupauth;
pub mod lincode;
pub mod netsim;
pub mod parallel;
pub mod tcss;

pub use field::{FieldElement, PrimePair};
pub use groupauth::{authenticate, AuthVerdict, GroupCommitment, Token};
pub use lincode::{CoefficientSet, GeneratorMatrix, ParticipantSet};
pub use parallel::Execution;
pub use tcss::{reconstruct, share_generation, Component, SchemeParams, Session, Share};
