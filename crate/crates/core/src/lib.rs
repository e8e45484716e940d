//! Measurement games on a two-channel spin experiment.
//!
//! The crate makes a family of decision-theoretic arguments about quantum
//! measurement executable:
//!
//! - [`quantum`]: spin states, half-turn rotations, and ancilla refinement
//!   as exact algebraic objects;
//! - [`games`]: game values over reward schedules and an axiom-configurable
//!   derivation of outcome weights, exact at rational points;
//! - [`sampling`]: seeded stochastic trials under rival outcome semantics
//!   (Born collapse, uniform branch counting, Born-weighted branch choice);
//! - [`ledger`]: exact big-integer combinatorics of the branch expansion
//!   after `N` trials, comparing the count measure to the Born measure;
//! - [`channel`]: angle estimation from counts and the signaling channel it
//!   induces, whose decodability depends on the semantics;
//! - [`classical`]: ball-box and breeding analogs with a generic
//!   measurement-neutrality checker.
//!
//! Everything stochastic flows from an explicit [`sampling::Seed`] through a
//! per-trial ChaCha8 stream, so every run is reproducible bit for bit.

pub mod channel;
pub mod classical;
pub mod error;
pub mod games;
pub mod ledger;
pub mod quantum;
pub mod sampling;
pub mod weights;

pub use error::{Error, Result};
pub use games::{AxiomSet, GameValue, RewardSchedule, WeightDerivation};
pub use quantum::{AncillaSpec, Angle, MeasurementSetup, OutcomeLabel, SpinAmplitudes};
pub use sampling::{RunStats, Seed, Semantics};
pub use weights::{Scalar, WeightVector};
