//! Sweeps a scenario over its source-power grid.

use rayon::prelude::*;
use untrusted_relay::achievable::{asymptotic_rate, evaluate_at_alpha, optimize_alpha};
use untrusted_relay::bounds::{
    cutset_no_secrecy, first_term_per_use, gepi_bound_per_use, optimal_rho, relay_limited_bound, upper_bound,
    AlphaPolicy, BoundSet,
};
use untrusted_relay::{capacity, db_to_linear, positive_part, RelayPower, SystemBudget, TimeShare};

use crate::config::{AlphaSetting, JammerPolicy, RelaySetting, ScenarioSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p1_db: f64,
    pub achievable: f64,
    pub upper_new: f64,
    pub upper_gepi: f64,
    pub upper_trivial: f64,
    pub cutset: f64,
    pub alpha_star: f64,
    /// Linear source power transmitted in phase one.
    pub p1_star: f64,
    pub sigma_c2: f64,
    pub rho_star: f64,
}

impl SweepRow {
    pub fn bounds(&self) -> BoundSet {
        BoundSet {
            achievable: self.achievable,
            upper_new: self.upper_new,
            upper_gepi: self.upper_gepi,
            upper_trivial: self.upper_trivial,
            cutset: self.cutset,
        }
    }
}

impl ScenarioSpec {
    /// Replaces an unbounded relay with a finite one at `db`.
    pub fn with_proxy_relay(mut self, db: f64) -> Self {
        if self.relay == RelaySetting::Infinite {
            self.relay = RelaySetting::Finite { db };
        }
        self
    }

    pub fn budget_at(&self, p1_db: f64) -> untrusted_relay::Result<SystemBudget> {
        let p1 = db_to_linear(p1_db);
        let p2 = match self.jammer {
            JammerPolicy::Proportional { ratio } => ratio * p1,
            JammerPolicy::Fixed { db } => db_to_linear(db),
        };
        let pr = match self.relay {
            RelaySetting::Infinite => RelayPower::Infinite,
            RelaySetting::Finite { db } => RelayPower::Finite(db_to_linear(db)),
        };
        SystemBudget::new(p1, p2, pr)
    }
}

fn rho_at(p1: f64, p2: f64) -> untrusted_relay::Result<f64> {
    Ok(if p1 > 0.0 { optimal_rho(p1, p2)?.rho } else { 1.0 })
}

/// Unbounded relay. With `α` optimized every quantity sits at its `α → 1`
/// limit; a fixed `α` scales the per-use values at phase powers `P̄/α`.
fn unbounded_relay_row(p1_db: f64, b: &SystemBudget, alpha: AlphaSetting) -> untrusted_relay::Result<SweepRow> {
    let a = match alpha {
        AlphaSetting::Optimize => 1.0,
        AlphaSetting::Fixed(a) => a,
    };
    let (p1, p2) = (b.p1_bar() / a, b.p2_bar() / a);
    let achievable = match alpha {
        AlphaSetting::Optimize => asymptotic_rate(p1, p2),
        AlphaSetting::Fixed(_) => a * positive_part(capacity(p1)? - capacity(p1 / (1.0 + p2))?),
    };
    let trivial = a * capacity(p1)?;
    Ok(SweepRow {
        p1_db,
        achievable,
        upper_new: a * first_term_per_use(p1, p2),
        upper_gepi: a * gepi_bound_per_use(p1, p2),
        upper_trivial: trivial,
        cutset: cutset_no_secrecy(b),
        alpha_star: a,
        p1_star: p1,
        sigma_c2: 0.0,
        rho_star: rho_at(p1, p2)?,
    })
}

fn finite_relay_row(
    p1_db: f64,
    b: &SystemBudget,
    alpha: AlphaSetting,
    power_control: bool,
) -> untrusted_relay::Result<SweepRow> {
    let (ach, policy) = match alpha {
        AlphaSetting::Optimize => (optimize_alpha(b, power_control)?, AlphaPolicy::Optimize),
        AlphaSetting::Fixed(a) => {
            let share = TimeShare::new(a)?;
            (evaluate_at_alpha(b, share, power_control)?, AlphaPolicy::Fixed(share))
        }
    };
    let ub = upper_bound(b, policy)?;
    let (gepi, _) = relay_limited_bound(b, policy, gepi_bound_per_use)?;
    let (trivial, _) = relay_limited_bound(b, policy, |p1, _| capacity(p1).unwrap_or(f64::NAN))?;
    Ok(SweepRow {
        p1_db,
        achievable: ach.rate,
        upper_new: ub.value,
        upper_gepi: gepi,
        upper_trivial: trivial,
        cutset: cutset_no_secrecy(b),
        alpha_star: ach.alpha.get(),
        p1_star: ach.p1_used,
        sigma_c2: ach.sigma_c2,
        rho_star: ub.rho,
    })
}

pub fn evaluate_point(spec: &ScenarioSpec, p1_db: f64) -> untrusted_relay::Result<SweepRow> {
    let b = spec.budget_at(p1_db)?;
    match spec.relay {
        RelaySetting::Infinite => unbounded_relay_row(p1_db, &b, spec.alpha),
        RelaySetting::Finite { .. } => finite_relay_row(p1_db, &b, spec.alpha, spec.power_control),
    }
}

/// One row per grid point, in grid order. Points are evaluated in parallel.
pub fn run_scenario(spec: &ScenarioSpec) -> crate::Result<Vec<SweepRow>> {
    spec.validate()?;
    let rows =
        spec.grid.par_iter().map(|&p1_db| evaluate_point(spec, p1_db)).collect::<untrusted_relay::Result<Vec<_>>>()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{db_grid, preset};

    #[test]
    fn fixed_alpha_unbounded_relay_scales_per_use_values() {
        let spec = ScenarioSpec {
            relay: RelaySetting::Infinite,
            jammer: JammerPolicy::Fixed { db: 0.0 },
            alpha: AlphaSetting::Fixed(0.5),
            power_control: false,
            grid: vec![0.0],
        };
        let row = evaluate_point(&spec, 0.0).unwrap();
        // phase powers 2 and 2
        let c = |x: f64| capacity(x).unwrap();
        assert!((row.achievable - 0.5 * (c(2.0) - c(2.0 / 3.0))).abs() < 1e-15);
        assert!((row.upper_trivial - 0.5 * c(2.0)).abs() < 1e-15);
        assert!((row.cutset - c(1.0)).abs() < 1e-15);
        assert!(row.bounds().is_sandwiched(1e-12));
    }

    #[test]
    fn proxy_approaches_unbounded_relay_from_below() {
        let mut spec = preset("fig7").unwrap();
        spec.grid = db_grid(0.0, 40.0, 10.0).unwrap();
        let exact = run_scenario(&spec).unwrap();
        let near = run_scenario(&spec.clone().with_proxy_relay(60.0)).unwrap();
        let far = run_scenario(&spec.clone().with_proxy_relay(300.0)).unwrap();
        for ((e, n), f) in exact.iter().zip(&near).zip(&far) {
            assert!(f.achievable <= e.achievable + 1e-12 && f.upper_new <= e.upper_new + 1e-12);
            assert!(e.achievable - f.achievable < e.achievable - n.achievable, "{e:?} {f:?}");
            assert!(e.upper_new - f.upper_new < e.upper_new - n.upper_new);
        }
    }

    #[test]
    fn finite_row_witnesses() {
        let mut spec = preset("fig10").unwrap();
        spec.grid = vec![20.0];
        let row = run_scenario(&spec).unwrap()[0];
        assert!(row.alpha_star > 0.0 && row.alpha_star < 1.0);
        assert_eq!(row.p1_star, 100.0 / row.alpha_star);
        assert!(row.sigma_c2 > 0.0);
        assert!(row.rho_star > 0.0 && row.rho_star < 1.0);
        assert!(row.bounds().is_sandwiched(1e-9));
    }
}
