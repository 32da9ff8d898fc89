//! Power budgets, the phase-one time share, and the Gaussian capacity function.
//!
//! Every noise in the model has unit variance, so powers are stored directly
//! as linear SNRs. Decibels only appear at the command-line boundary through
//! [`db_to_linear`] and [`linear_to_db`].

use std::f64::consts::LN_2;
use std::fmt;

use crate::error::{Error, Result};

/// Relay transmit power, either finite or unbounded.
///
/// The unbounded case is kept distinct from a large float so that callers
/// branch to the closed-form limits instead of overflowing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelayPower {
    Finite(f64),
    Infinite,
}

impl RelayPower {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelayPower::Finite(p) => Some(p),
            RelayPower::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelayPower::Infinite)
    }

    fn scaled(self, factor: f64) -> Self {
        match self {
            RelayPower::Finite(p) => RelayPower::Finite(p * factor),
            RelayPower::Infinite => RelayPower::Infinite,
        }
    }
}

impl fmt::Display for RelayPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelayPower::Finite(p) => write!(f, "{p}"),
            RelayPower::Infinite => f.write_str("inf"),
        }
    }
}

/// Long-run average power constraints of source, jammer and relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemBudget {
    p1_bar: f64,
    p2_bar: f64,
    pr_bar: RelayPower,
}

impl SystemBudget {
    pub fn new(p1_bar: f64, p2_bar: f64, pr_bar: RelayPower) -> Result<Self> {
        check_power("p1_bar", p1_bar)?;
        check_power("p2_bar", p2_bar)?;
        if let RelayPower::Finite(p) = pr_bar {
            check_power("pr_bar", p)?;
        }
        Ok(Self { p1_bar, p2_bar, pr_bar })
    }

    pub fn p1_bar(&self) -> f64 {
        self.p1_bar
    }

    pub fn p2_bar(&self) -> f64 {
        self.p2_bar
    }

    pub fn pr_bar(&self) -> RelayPower {
        self.pr_bar
    }

    pub(crate) fn finite_relay(&self) -> Result<f64> {
        self.pr_bar.finite().ok_or(Error::InfiniteRelay)
    }
}

fn check_power(name: &'static str, p: f64) -> Result<()> {
    if p.is_finite() && p >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, p, "finite and >= 0"))
    }
}

/// Fraction of channel uses spent in phase one, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TimeShare(f64);

impl TimeShare {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::domain("alpha", alpha, "0 < alpha < 1"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - alpha`, the phase-two fraction.
    #[inline]
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

/// Powers used while each phase is active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePowers {
    pub p1: f64,
    pub p2: f64,
    pub pr: RelayPower,
}

/// Converts average budgets into per-phase powers: source and jammer
/// concentrate their budget into the phase-one fraction, the relay into the
/// remainder.
pub fn to_phase_powers(budget: &SystemBudget, share: TimeShare) -> PhasePowers {
    let alpha = share.get();
    PhasePowers {
        p1: budget.p1_bar / alpha,
        p2: budget.p2_bar / alpha,
        pr: budget.pr_bar.scaled(1.0 / share.complement()),
    }
}

/// `C(x) = ½·log₂(1 + x)`, in bits per channel use.
pub fn capacity(x: f64) -> Result<f64> {
    if x > -1.0 {
        Ok(cap(x))
    } else {
        Err(Error::domain("x", x, "x > -1"))
    }
}

/// Unchecked `C(x)` for internal callers that already hold `x >= 0`.
#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * x.ln_1p() / LN_2
}

/// `[x]⁺`. Never returns `-0.0`.
#[inline]
pub fn positive_part(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::domain("x", x, "x > 0"))
    }
}
