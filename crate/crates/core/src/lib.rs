//! State-vector simulation of a three-player quantum game and its
//! reference-frame-free refinement.
//!
//! A team of three isolated players answers Z-or-X questions under a parity
//! win rule. Classically they win at most 75% of rounds; sharing a GHZ triple
//! wins always, but only while everyone agrees on the measurement directions.
//! Encoding each player's qubit into a four-qubit rotationally invariant
//! block of a twelve-qubit state removes that last assumption: the strategy
//! keeps winning even when an adversary rotates whole labs, using only
//! single-qubit measurements.
//!
//! The crate provides:
//!
//! * [`sim`] — a minimal exact state-vector engine with seeded randomness;
//! * [`states`] — the canonical named states, bases and constants, plus
//!   identity/invariance verification suites;
//! * [`protocols`] — the fixed-basis and adaptive single-qubit measurement
//!   protocols for the logical observables, and the collective oracle;
//! * [`games`] — referee, win rule, classical/GHZ/frame-free strategies,
//!   brute-force classical bound and the hidden-variable check;
//! * [`tasks`] — the apples communication-complexity task and three-party
//!   secret sharing.

pub mod error;
pub mod games;
pub mod protocols;
pub mod sim;
pub mod states;
pub mod tasks;

pub use error::{Error, Result};
pub use sim::{
    derive_seed, fidelity, haar_random_unitary, ProjectiveObservable, ProjectorOutcome, RngStream,
    SingleQubitUnitary, StateVector, ACCUMULATED_TOL, ALGEBRAIC_TOL,
};
pub use states::{make_named, state, BasisId, BasisPair, NamedState, StateName};
