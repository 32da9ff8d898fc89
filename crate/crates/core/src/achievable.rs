//! Compress-and-forward secrecy rate with cooperative jamming.
//!
//! The relay quantizes its phase-one observation with Gaussian test-channel
//! noise of variance `σ_c²`, chosen so that the description exactly fills the
//! phase-two relay link:
//!
//! ```text
//! α·C((P′₁ + 1) / σ_c²) = (1 − α)·C(P_r)
//! ```
//!
//! The secrecy rate is then `α·[C(P′₁/(1+σ_c²)) − C(P′₁/(1+P₂))]⁺`, maximized
//! over the transmitted source power `P′₁` and the time share `α`.

use std::f64::consts::LN_2;

use crate::channel::{cap, positive_part, SystemBudget, TimeShare};
use crate::error::{Error, Result};
use crate::search::{self, Peak};

/// Quantization noise variance, kept as its natural logarithm.
///
/// For short phase-one fractions and strong relays the variance drops below
/// the smallest positive `f64`; the log survives and keeps the relay-link
/// balance exactly checkable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationNoise {
    ln_var: f64,
}

impl QuantizationNoise {
    pub fn from_variance(var: f64) -> Result<Self> {
        if var > 0.0 && var.is_finite() {
            Ok(Self { ln_var: var.ln() })
        } else {
            Err(Error::domain("sigma_c2", var, "finite and > 0"))
        }
    }

    pub fn from_ln_variance(ln_var: f64) -> Self {
        Self { ln_var }
    }

    /// `σ_c²`; may underflow to `0.0`, which is also its large-`P_r` limit.
    pub fn variance(self) -> f64 {
        self.ln_var.exp()
    }

    pub fn ln_variance(self) -> f64 {
        self.ln_var
    }

    /// `α·C((P′₁+1)/σ_c²) − (1−α)·C(P_r)`, evaluated in the log domain.
    pub fn balance_residual(self, p1_prime: f64, pr: f64, alpha: TimeShare) -> f64 {
        let y = p1_prime.ln_1p() - self.ln_var;
        alpha.get() * cap_exp(y) - alpha.complement() * cap(pr)
    }
}

/// `C(eʸ)` without forming `eʸ`.
fn cap_exp(y: f64) -> f64 {
    let ln = if y > 0.0 { y + (-y).exp().ln_1p() } else { y.exp().ln_1p() };
    0.5 * ln / LN_2
}

/// `ln(eˣ − 1)` for `x > 0`.
fn ln_expm1(x: f64) -> f64 {
    if x > 36.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// The relay-link side of the balance for fixed `(P_r, α)`:
/// `ln((1+P_r)^((1−α)/α) − 1)`.
#[derive(Debug, Clone, Copy)]
struct RelayLink {
    ln_capacity_excess: f64,
}

impl RelayLink {
    fn new(pr: f64, alpha: TimeShare) -> Result<Self> {
        if !(pr.is_finite() && pr >= 0.0) {
            return Err(Error::domain("pr", pr, "finite and >= 0"));
        }
        if pr == 0.0 {
            return Err(Error::NoFiniteSolution);
        }
        let exponent = alpha.complement() / alpha.get() * pr.ln_1p();
        Ok(Self { ln_capacity_excess: ln_expm1(exponent) })
    }

    fn noise(&self, p1_prime: f64) -> QuantizationNoise {
        QuantizationNoise::from_ln_variance(p1_prime.ln_1p() - self.ln_capacity_excess)
    }

    fn rate(&self, p1_prime: f64, p2: f64, alpha: TimeShare) -> f64 {
        let sigma_c2 = self.noise(p1_prime).variance();
        let bracket = cap(p1_prime / (1.0 + sigma_c2)) - cap(p1_prime / (1.0 + p2));
        alpha.get() * positive_part(bracket)
    }
}

/// Quantization noise that balances the relay link:
/// `σ_c² = (P′₁+1) / ((1+P_r)^((1−α)/α) − 1)`.
pub fn solve_sigma_c2(p1_prime: f64, pr: f64, alpha: TimeShare) -> Result<QuantizationNoise> {
    check_nonneg("p1_prime", p1_prime)?;
    Ok(RelayLink::new(pr, alpha)?.noise(p1_prime))
}

/// Secrecy rate at fixed phase powers and time share.
pub fn rate_fixed(p1_prime: f64, p2: f64, pr: f64, alpha: TimeShare) -> Result<f64> {
    check_nonneg("p1_prime", p1_prime)?;
    check_nonneg("p2", p2)?;
    Ok(RelayLink::new(pr, alpha)?.rate(p1_prime, p2, alpha))
}

fn check_nonneg(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, x, "finite and >= 0"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePowerChoice {
    pub p1_star: f64,
    pub rate: f64,
}

/// Best transmitted source power in `[0, p1_max]`.
///
/// The rate vanishes both as `P′₁ → 0` and as `P′₁ → ∞` once the relay link
/// saturates, so full power is not always optimal.
pub fn optimize_source_power(p1_max: f64, p2: f64, pr: f64, alpha: TimeShare) -> Result<SourcePowerChoice> {
    check_nonneg("p1_max", p1_max)?;
    check_nonneg("p2", p2)?;
    let link = RelayLink::new(pr, alpha)?;
    Ok(best_source_power(&link, p1_max, p2, alpha))
}

fn best_source_power(link: &RelayLink, p1_max: f64, p2: f64, alpha: TimeShare) -> SourcePowerChoice {
    let grid = search::source_power_grid(p1_max);
    let Peak { x, value } =
        search::grid_then_refine(&grid, |p| link.rate(p, p2, alpha), |_, hi| search::POWER_REL_TOL * hi);
    SourcePowerChoice { p1_star: x, rate: value }
}

/// Optimized rate together with the witnesses that reproduce it through
/// [`rate_fixed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AchievablePoint {
    pub rate: f64,
    pub alpha: TimeShare,
    /// Source power actually transmitted during phase one.
    pub p1_used: f64,
    pub sigma_c2: f64,
}

/// Achievable point at a given time share. Without power control the source
/// transmits its full phase power `P̄₁/α`.
pub fn evaluate_at_alpha(budget: &SystemBudget, alpha: TimeShare, power_control: bool) -> Result<AchievablePoint> {
    let pr_bar = budget.finite_relay()?;
    let a = alpha.get();
    let (p1_max, p2, pr) = (budget.p1_bar() / a, budget.p2_bar() / a, pr_bar / alpha.complement());
    let link = RelayLink::new(pr, alpha)?;
    let (p1_used, rate) = if power_control {
        let c = best_source_power(&link, p1_max, p2, alpha);
        (c.p1_star, c.rate)
    } else {
        (p1_max, link.rate(p1_max, p2, alpha))
    };
    Ok(AchievablePoint { rate, alpha, p1_used, sigma_c2: link.noise(p1_used).variance() })
}

/// Maximizes the secrecy rate over the time share.
pub fn optimize_alpha(budget: &SystemBudget, power_control: bool) -> Result<AchievablePoint> {
    let pr_bar = budget.finite_relay()?;
    if pr_bar == 0.0 {
        return Err(Error::NoFiniteSolution);
    }
    let objective = |a: f64| match TimeShare::new(a) {
        Ok(alpha) => evaluate_at_alpha(budget, alpha, power_control).map_or(f64::NEG_INFINITY, |p| p.rate),
        Err(_) => f64::NEG_INFINITY,
    };
    let peak = search::grid_then_refine(&search::alpha_grid(), objective, |_, _| search::ALPHA_TOL);
    evaluate_at_alpha(budget, TimeShare::new(peak.x)?, power_control)
}

/// Limit of the optimized rate as the relay power grows without bound:
/// `[C(P̄₁) − C(P̄₁/(1+P̄₂))]⁺`.
pub fn asymptotic_rate(p1_bar: f64, p2_bar: f64) -> f64 {
    positive_part(cap(p1_bar) - cap(p1_bar / (1.0 + p2_bar)))
}
