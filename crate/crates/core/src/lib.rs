//! Entanglement decay of generalized GHZ states `α|0…0⟩ + β|1…1⟩` under
//! independent local noise.
//!
//! The evolved state is kept in an `O(N)` weight-indexed form
//! ([`state::SymmetricEvolvedState`]), from which the negativity of every
//! bipartition follows in closed form ([`negativity`]). Sudden-death points,
//! ε-decay thresholds and bound-entanglement windows live in
//! [`criticality`]; [`oracle`] is a brute-force dense reference used to
//! validate all of it at small N.

pub mod channels;
pub mod cli;
pub mod criticality;
pub mod crosscheck;
pub mod dense;
pub mod error;
pub mod logspace;
pub mod negativity;
pub mod oracle;
pub mod separability;
pub mod state;

pub use channels::{ChannelFamily, ChannelSpec};
pub use error::{Error, Result};
pub use state::{evolve, GhzParams, SymmetricEvolvedState};
