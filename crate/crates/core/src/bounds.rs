//! Upper bounds on the secrecy rate.
//!
//! The main bound adds a fictitious eavesdropper whose noise `Z_e` is
//! correlated with the relay noise `Z₁` (coefficient `ρ`), reveals genie side
//! information, and minimizes the resulting per-use term over `ρ`:
//!
//! ```text
//! ½·log₂( ((P₁+1)(P₁+P₂+1) − (P₁+ρ)²) / ((P₁+P₂+1)(1−ρ²)) )
//! ```
//!
//! The term is combined with the relay link `(1−α)·C(P_r)` and maximized over
//! `α`. For comparison the module also evaluates the generalized-EPI bound,
//! the no-secrecy trivial bound and the cut-set bound, plus their limits when
//! the relay power is unbounded.

use std::f64::consts::LN_2;

use crate::channel::{cap, RelayPower, SystemBudget, TimeShare};
use crate::error::{Error, Result};
use crate::search;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoSolution {
    /// Correlation between `Z₁` and `Z_e` minimizing the genie term.
    pub rho: f64,
    /// `4P₂P₁² + 4P₂P₁ + P₂²P₁² + 2P₂²P₁ + P₂²`.
    pub discriminant: f64,
}

/// Optimal noise correlation `ρ* = (2P₁ + P₁P₂ + P₂ − √A) / (2P₁)`.
///
/// Evaluated as `2P₁ / (2P₁ + P₁P₂ + P₂ + √A)`; the two agree because the
/// squared leading term exceeds `A` by exactly `4P₁²`, and the second form
/// does not cancel when `P₂` is large.
pub fn optimal_rho(p1: f64, p2: f64) -> Result<RhoSolution> {
    if !(p1 > 0.0 && p1.is_finite()) {
        return Err(Error::Degenerate("optimal rho needs p1 > 0"));
    }
    if !(p2 >= 0.0 && p2.is_finite()) {
        return Err(Error::domain("p2", p2, "finite and >= 0"));
    }
    let discriminant = discriminant(p1, p2);
    let b = 2.0 * p1 + p1 * p2 + p2;
    Ok(RhoSolution { rho: 2.0 * p1 / (b + discriminant.sqrt()), discriminant })
}

fn discriminant(p1: f64, p2: f64) -> f64 {
    4.0 * p2 * p1 * p1 + 4.0 * p2 * p1 + p2 * p2 * p1 * p1 + 2.0 * p2 * p2 * p1 + p2 * p2
}

/// The genie term at an arbitrary correlation `rho ∈ (−1, 1)`, straight from
/// its definition.
pub fn genie_term(p1: f64, p2: f64, rho: f64) -> f64 {
    let s = p1 + p2 + 1.0;
    let num = (p1 + 1.0) * s - (p1 + rho) * (p1 + rho);
    let den = s * (1.0 - rho * rho);
    0.5 * (num / den).log2()
}

/// Genie term at the optimal correlation, per phase-one channel use.
///
/// With no jamming `ρ* = 1` and the expression is `0/0`; its limit is 1, so
/// the term is 0.
pub fn first_term_per_use(p1: f64, p2: f64) -> f64 {
    if !(p1 > 0.0) || !(p2 > 0.0) {
        return 0.0;
    }
    let sqrt_a = discriminant(p1, p2).sqrt();
    let b = 2.0 * p1 + p1 * p2 + p2;
    let denom = b + sqrt_a;
    let rho = 2.0 * p1 / denom;
    // 1 − ρ without cancellation
    let one_minus = (p1 * p2 + p2 + sqrt_a) / denom;
    let s = p1 + p2 + 1.0;
    // (P₁+1)·s − (P₁+ρ)² = (1−ρ)(2P₁+1+ρ) + (P₁+1)P₂
    let num = one_minus * (2.0 * p1 + 1.0 + rho) + (p1 + 1.0) * p2;
    let den = s * one_minus * (1.0 + rho);
    0.5 * (num / den).log2()
}

/// Generalized-EPI bound per phase-one channel use:
/// `½·log₂(2(P₁+1)(P₂+1) / (P₁+P₂+2))`.
pub fn gepi_bound_per_use(p1: f64, p2: f64) -> f64 {
    0.5 * (2.0 * (p1 + 1.0) * (p2 + 1.0) / (p1 + p2 + 2.0)).log2()
}

/// How the time share is chosen for a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaPolicy {
    Fixed(TimeShare),
    Optimize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBoundPoint {
    pub value: f64,
    pub alpha: TimeShare,
    pub rho: f64,
    /// `α` times the genie term at `ρ*`.
    pub first_term: f64,
    /// `(1−α)·C(P_r)`.
    pub second_term: f64,
}

/// `min(α·per_use(P̄₁/α, P̄₂/α), (1−α)·C(P̄_r/(1−α)))` and its two sides.
fn relay_limited_terms<F: Fn(f64, f64) -> f64>(
    budget: &SystemBudget,
    pr_bar: f64,
    alpha: f64,
    per_use: &F,
) -> (f64, f64) {
    let first = alpha * per_use(budget.p1_bar() / alpha, budget.p2_bar() / alpha);
    let second = (1.0 - alpha) * cap(pr_bar / (1.0 - alpha));
    (first, second)
}

/// A per-use phase-one bound closed by the relay link, at a fixed or
/// optimized time share. Returns `(value, alpha)`.
pub fn relay_limited_bound<F>(budget: &SystemBudget, policy: AlphaPolicy, per_use: F) -> Result<(f64, TimeShare)>
where
    F: Fn(f64, f64) -> f64,
{
    let pr_bar = budget.finite_relay()?;
    let value_at = |a: f64| {
        let (f, s) = relay_limited_terms(budget, pr_bar, a, &per_use);
        f.min(s)
    };
    let alpha = match policy {
        AlphaPolicy::Fixed(a) => a,
        AlphaPolicy::Optimize => {
            let peak = search::grid_then_refine(&search::alpha_grid(), value_at, |_, _| search::ALPHA_TOL);
            TimeShare::new(peak.x)?
        }
    };
    Ok((value_at(alpha.get()), alpha))
}

/// The correlated-noise genie bound closed by the relay link.
pub fn upper_bound(budget: &SystemBudget, policy: AlphaPolicy) -> Result<UpperBoundPoint> {
    let pr_bar = budget.finite_relay()?;
    let (_, alpha) = relay_limited_bound(budget, policy, first_term_per_use)?;
    let a = alpha.get();
    let (first_term, second_term) = relay_limited_terms(budget, pr_bar, a, &first_term_per_use);
    let p1 = budget.p1_bar() / a;
    let rho = if p1 > 0.0 { optimal_rho(p1, budget.p2_bar() / a)?.rho } else { 1.0 };
    Ok(UpperBoundPoint { value: first_term.min(second_term), alpha, rho, first_term, second_term })
}

/// Two-hop capacity without secrecy: `max_α min(α·C(P̄₁/α), (1−α)·C(P̄_r/(1−α)))`.
///
/// The first side grows with `α` and the second shrinks, so the optimum sits
/// at their crossing. With unbounded relay power the value is `C(P̄₁)`.
pub fn cutset_no_secrecy(budget: &SystemBudget) -> f64 {
    let p1_bar = budget.p1_bar();
    let pr_bar = match budget.pr_bar() {
        RelayPower::Infinite => return cap(p1_bar),
        RelayPower::Finite(p) => p,
    };
    if p1_bar == 0.0 || pr_bar == 0.0 {
        return 0.0;
    }
    let source = |a: f64| a * cap(p1_bar / a);
    let relay = |a: f64| (1.0 - a) * cap(pr_bar / (1.0 - a));
    let alpha = search::bisect_increasing(|a| source(a) - relay(a), 0.0, 1.0, search::ALPHA_TOL);
    source(alpha).min(relay(alpha))
}

/// Limit of `ρ*` for fixed jammer power as source and relay powers grow:
/// `1 + P̄₂/2 − √(P̄₂ + P̄₂²/4)`.
pub fn rho_bar(p2_bar: f64) -> f64 {
    1.0 / (1.0 + 0.5 * p2_bar + (p2_bar + 0.25 * p2_bar * p2_bar).sqrt())
}

/// Limiting gap between the genie bound and the achievable rate for a fixed
/// jammer: `C((P̄₂ + (ρ̄−1)²)/(1−ρ̄²)) − C(P̄₂)`. Independent of `P̄₁`.
pub fn asymptotic_gap_fixed_jammer(p2_bar: f64) -> f64 {
    let r = rho_bar(p2_bar);
    // difference of the two C arguments, over 1 + P̄₂
    let excess = (p2_bar * r * r + (1.0 - r) * (1.0 - r)) / ((1.0 - r) * (1.0 + r));
    0.5 * (excess / (1.0 + p2_bar)).ln_1p() / LN_2
}

/// Large-`P̄₁` limit of the genie bound with `P̄₂ = β·P̄₁` and unbounded
/// relay power: `C(P̄₁) − C(1/β)`.
pub fn asymptotic_upper_proportional(p1_bar: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::domain("beta", beta, "beta > 0"));
    }
    Ok(cap(p1_bar) - cap(1.0 / beta))
}

/// Gap between the generalized-EPI bound and the achievable rate when the
/// relay power is unbounded: `½·log₂(1 + (P̄₁+P̄₂)/(2+P̄₁+P̄₂))`, always
/// below half a bit.
pub fn gepi_gap_asymptotic(p1_bar: f64, p2_bar: f64) -> f64 {
    // = ½ + ½·log₂(1 − 1/(2+s)); stays strictly below ½ in f64.
    let sum = p1_bar + p2_bar;
    0.5 + 0.5 * (-1.0 / (2.0 + sum)).ln_1p() / LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceReport {
    pub first_term: f64,
    pub gepi: f64,
    pub trivial: f64,
    /// `P₁ + P₂ > 1`, the region where the genie bound provably wins.
    pub condition_holds: bool,
}

impl DominanceReport {
    pub fn gepi_is_looser(&self) -> bool {
        self.gepi > self.first_term
    }
}

/// Compares the genie term, the generalized-EPI bound and `C(P₁)`.
/// Fails if `P₁ + P₂ > 1` and the generalized-EPI bound is not strictly looser.
pub fn dominance_check(p1: f64, p2: f64) -> Result<DominanceReport> {
    if !(p1 > 0.0) {
        return Err(Error::Degenerate("dominance check needs p1 > 0"));
    }
    let report = DominanceReport {
        first_term: first_term_per_use(p1, p2),
        gepi: gepi_bound_per_use(p1, p2),
        trivial: cap(p1),
        condition_holds: p1 + p2 > 1.0,
    };
    if report.condition_holds && !report.gepi_is_looser() {
        return Err(Error::Numerical(format!(
            "generalized-EPI bound {} not above genie term {} at p1={p1}, p2={p2}",
            report.gepi, report.first_term
        )));
    }
    Ok(report)
}

/// Achievable rate next to every upper bound at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    pub achievable: f64,
    pub upper_new: f64,
    pub upper_gepi: f64,
    pub upper_trivial: f64,
    pub cutset: f64,
}

impl BoundSet {
    pub fn tightest_upper(&self) -> f64 {
        self.upper_new.min(self.upper_gepi).min(self.upper_trivial).min(self.cutset)
    }

    /// `achievable <= every bound + slack`.
    pub fn is_sandwiched(&self, slack: f64) -> bool {
        self.achievable <= self.tightest_upper() + slack
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::achievable;

    /// Grid maximum, then a second grid of the same size across the two
    /// cells around the winner.
    fn two_level_grid_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
        let step = (hi - lo) / (n - 1) as f64;
        let (i, _) =
            (0..n)
                .map(|i| (i, f(lo + step * i as f64)))
                .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
        let a = (lo + step * (i as f64 - 1.0)).max(lo);
        let z = (lo + step * (i as f64 + 1.0)).min(hi);
        (0..n).map(|j| f(a + (z - a) * j as f64 / (n - 1) as f64)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Dense grid minimum of the genie term over `ρ`.
    fn grid_min_rho(p1: f64, p2: f64, n: usize) -> (f64, f64) {
        (0..n)
            .map(|i| {
                let rho = -0.999 + 1.998 * i as f64 / (n - 1) as f64;
                (rho, genie_term(p1, p2, rho))
            })
            .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }

    #[test]
    fn rho_examples() {
        let r = optimal_rho(1.0, 1.0).unwrap();
        assert_eq!(r.discriminant, 12.0);
        assert!((r.rho - (4.0 - 12f64.sqrt()) / 2.0).abs() < 1e-15);
        let (grid_rho, _) = grid_min_rho(1.0, 1.0, 1_000_000);
        assert!((grid_rho - r.rho).abs() < 2e-6);

        let r = optimal_rho(3.0, 0.0).unwrap();
        assert_eq!((r.rho, r.discriminant), (1.0, 0.0));

        let r = optimal_rho(1.0, 1e6).unwrap();
        assert!(r.rho > 0.0 && r.rho < 1e-2);
        let (grid_rho, _) = grid_min_rho(1.0, 1e6, 1_000_000);
        assert!((grid_rho - r.rho).abs() < 2e-6);

        assert!(optimal_rho(0.0, 1.0).is_err());
    }

    #[test]
    fn rationalized_rho_matches_textbook_form() {
        for &(p1, p2) in &[(1.0, 1.0), (0.3, 7.0), (20.0, 0.5), (2.0, 2.0)] {
            let r = optimal_rho(p1, p2).unwrap();
            let textbook = (2.0 * p1 + p1 * p2 + p2 - r.discriminant.sqrt()) / (2.0 * p1);
            assert!((r.rho - textbook).abs() < 1e-12);
        }
    }

    #[test]
    fn first_term_examples() {
        assert_eq!(first_term_per_use(5.0, 0.0), 0.0);
        assert_eq!(first_term_per_use(0.0, 5.0), 0.0);
        let v = first_term_per_use(1.0, 1.0);
        assert!((v - 0.328_751_531_557_958_9).abs() < 1e-14);
        assert!(v < cap(1.0));
        let rho = optimal_rho(1.0, 1.0).unwrap().rho;
        assert!((genie_term(1.0, 1.0, rho) - v).abs() < 1e-14);
    }

    #[test]
    fn first_term_continuous_as_jamming_vanishes() {
        let mut prev = first_term_per_use(2.0, 1e-2);
        for k in 3..14 {
            let v = first_term_per_use(2.0, 10f64.powi(-k));
            assert!(v >= 0.0 && v < prev);
            prev = v;
        }
        // the term vanishes like √P₂
        assert!(prev < 1e-6);
    }

    #[test]
    fn gepi_examples() {
        assert_eq!(gepi_bound_per_use(0.0, 0.0), 0.0);
        assert!((gepi_bound_per_use(3.0, 1.0) - 0.707_518_749_639_421_9).abs() < 1e-15);
        for p in [0.01, 1.0, 17.0, 1e6] {
            assert!((gepi_bound_per_use(p, p) - cap(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn cutset_examples() {
        for p in [0.5, 3.0, 100.0] {
            let b = SystemBudget::new(p, 0.0, RelayPower::Finite(p)).unwrap();
            assert!((cutset_no_secrecy(&b) - 0.5 * cap(2.0 * p)).abs() < 1e-10);
        }
        let b = SystemBudget::new(1.0, 0.0, RelayPower::Infinite).unwrap();
        assert_eq!(cutset_no_secrecy(&b), 0.5);

        let b = SystemBudget::new(10.0, 0.0, RelayPower::Finite(1000.0)).unwrap();
        let side = |a: f64| (a * cap(10.0 / a)).min((1.0 - a) * cap(1000.0 / (1.0 - a)));
        let oracle = two_level_grid_max(side, 1e-6, 1.0 - 1e-6, 1_000_000);
        let v = cutset_no_secrecy(&b);
        assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn upper_bound_examples() {
        let b = SystemBudget::new(10.0, 0.0, RelayPower::Finite(100.0)).unwrap();
        let u = upper_bound(&b, AlphaPolicy::Fixed(TimeShare::new(0.4).unwrap())).unwrap();
        assert_eq!(u.first_term, 0.0);
        assert_eq!(u.value, 0.0);

        let b = SystemBudget::new(10.0, 10.0, RelayPower::Finite(1000.0)).unwrap();
        let u = upper_bound(&b, AlphaPolicy::Optimize).unwrap();
        assert_eq!(u.value, u.first_term.min(u.second_term));
        let at = |a: f64| upper_bound(&b, AlphaPolicy::Fixed(TimeShare::new(a).unwrap())).unwrap().value;
        let oracle = two_level_grid_max(at, 1e-6, 1.0 - 1e-6, 2001);
        assert!((u.value - oracle).abs() < 1e-6, "{} vs {oracle}", u.value);

        for a in [0.1, 0.5, 0.9] {
            let u = upper_bound(&b, AlphaPolicy::Fixed(TimeShare::new(a).unwrap())).unwrap();
            assert!(u.value < a * cap(10.0 / a));
        }
    }

    #[test]
    fn upper_bound_rejects_infinite_relay() {
        let b = SystemBudget::new(1.0, 1.0, RelayPower::Infinite).unwrap();
        assert_eq!(upper_bound(&b, AlphaPolicy::Optimize), Err(Error::InfiniteRelay));
    }

    #[test]
    fn rho_bar_examples() {
        assert!((rho_bar(1e-12) - 1.0).abs() < 1e-5);
        assert!((rho_bar(4.0) - (3.0 - 8f64.sqrt())).abs() < 1e-15);
        assert!((rho_bar(1000.0) - 9.980_049_860_418_684e-4).abs() < 1e-15);
    }

    #[test]
    fn fixed_jammer_gap() {
        assert!((asymptotic_gap_fixed_jammer(4.0) - 0.110_589_255_719_930_8).abs() < 1e-14);
        assert!((asymptotic_gap_fixed_jammer(1000.0) - 7.195_487_077_705_23e-4).abs() < 1e-15);
        let gaps: Vec<f64> = (0..=6).map(|k| asymptotic_gap_fixed_jammer(10f64.powi(k))).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps.iter().all(|&g| g > 0.0));
    }

    #[test]
    fn fixed_jammer_gap_is_limit_of_exact_gap() {
        // unbounded relay: genie term at α → 1 minus the limiting rate
        let p2 = 4.0;
        let p1 = 1e9;
        let gap = first_term_per_use(p1, p2) - achievable::asymptotic_rate(p1, p2);
        assert!((gap - asymptotic_gap_fixed_jammer(p2)).abs() < 1e-6);
    }

    #[test]
    fn proportional_asymptote() {
        let v = asymptotic_upper_proportional(1000.0, 0.5).unwrap();
        assert!((v - 4.191_131_879_057_419).abs() < 1e-12);
        assert!((asymptotic_upper_proportional(50.0, 1e12).unwrap() - cap(50.0)).abs() < 1e-11);
        assert!(asymptotic_upper_proportional(1.0, 0.0).is_err());
    }

    #[test]
    fn gepi_gap_examples() {
        assert!(gepi_gap_asymptotic(0.0, 0.0).abs() < 1e-15);
        assert!((gepi_gap_asymptotic(1.0, 1.0) - 0.292_481_250_360_578_1).abs() < 1e-15);
        let g = gepi_gap_asymptotic(1e15, 1e15);
        assert!(g < 0.5 && 0.5 - g < 1e-14);
        // depends on the sum only, bit for bit
        for (a, b) in [(0.7574, 3e-3), (1e-3, 12.5), (7.0, 1e9)] {
            assert_eq!(gepi_gap_asymptotic(a, b), gepi_gap_asymptotic(b, a));
        }
    }

    #[test]
    fn dominance_examples() {
        let r = dominance_check(1.0, 1.0).unwrap();
        assert!(r.condition_holds && r.gepi_is_looser());
        assert!((r.gepi - 0.5).abs() < 1e-15);
        for p in [0.7, 3.0, 40.0] {
            let r = dominance_check(p, p).unwrap();
            assert!((r.gepi - r.trivial).abs() < 1e-12);
            assert!(r.first_term < r.trivial);
        }
        let r = dominance_check(0.3, 0.3).unwrap();
        assert!(!r.condition_holds);
        assert!(dominance_check(0.0, 1.0).is_err());
    }

    #[test]
    fn genie_term_nondecreasing_in_powers_at_fixed_rho() {
        let rho = 0.3;
        let grid: Vec<f64> = (0..60).map(|k| 10f64.powf(-2.0 + k as f64 * 0.1)).collect();
        for &p2 in &grid {
            let v: Vec<f64> = grid.iter().map(|&p1| genie_term(p1, p2, rho)).collect();
            assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        }
        for &p1 in &grid {
            let v: Vec<f64> = grid.iter().map(|&p2| genie_term(p1, p2, rho)).collect();
            assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        }
    }
}
