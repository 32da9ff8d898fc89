//! Secrecy rates and upper bounds for the Gaussian two-hop channel with an
//! untrusted relay and a cooperative jammer.
//!
//! The source and the jammer (the destination) transmit during phase one,
//! a fraction `alpha` of the channel uses; the relay receives
//! `Y1 = X1 + X2 + Z1`. In phase two the relay forwards to the destination,
//! which receives `Y2 = Xr + Z2`. All noises have unit variance, so every
//! power in this crate is an SNR on a linear scale.
//!
//! * [`channel`] holds the power budgets, the time share and `C(x)`.
//! * [`achievable`] evaluates and optimizes the compress-and-forward
//!   secrecy rate.
//! * [`bounds`] evaluates the correlated-noise genie bound, the
//!   generalized-EPI bound, the cut-set reference and their asymptotes.
//! * [`verify`] is a Monte Carlo oracle for the closed-form
//!   mutual-information terms.

// `!(x > 0.0)` is how NaN inputs fail domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod achievable;
pub mod bounds;
pub mod channel;
mod error;
pub(crate) mod search;
pub mod verify;

pub use achievable::{AchievablePoint, QuantizationNoise, SourcePowerChoice};
pub use bounds::{AlphaPolicy, BoundSet, DominanceReport, RhoSolution, UpperBoundPoint};
pub use channel::{
    capacity, db_to_linear, linear_to_db, positive_part, to_phase_powers, PhasePowers, RelayPower, SystemBudget,
    TimeShare,
};
pub use error::{Error, Result};
