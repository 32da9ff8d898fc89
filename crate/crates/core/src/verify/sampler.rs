//! Block sampler for the two-phase Gaussian channel.
//!
//! Output contract: block `b` of seed `s` is drawn from ChaCha8 keyed by
//! `seed_from_u64(s)` on stream `b`, word position 0. Standard normals come
//! from `rand_distr::StandardNormal` in this order: `x1`, `x2`, `z1`, `zq`,
//! then the independent part of `ze` (each `n′` draws), then `xr`, `z2`
//! (each `m′` draws). Blocks are therefore reproducible one at a time and in
//! any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::PhasePowers;
use crate::error::{Error, Result};

/// Minimum number of blocks before any statistical statement is made.
pub const MIN_STATISTICAL_SAMPLES: usize = 1000;

/// Stream reserved for bootstrap resampling; no block index reaches it.
pub(crate) const BOOTSTRAP_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    /// Phase-one channel uses per block.
    pub n_prime: usize,
    /// Phase-two channel uses per block.
    pub m_prime: usize,
    /// Number of independent blocks.
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn scalar(samples: usize, seed: u64) -> Self {
        Self { n_prime: 1, m_prime: 1, samples, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_prime == 0 || self.m_prime == 0 {
            return Err(Error::InvalidConfig("block lengths must be at least 1"));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("at least one block is required"));
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate), and also requires enough blocks for
    /// a statistical comparison.
    pub fn validate_statistical(&self) -> Result<()> {
        self.validate()?;
        if self.samples < MIN_STATISTICAL_SAMPLES {
            return Err(Error::InsufficientSamples { got: self.samples, need: MIN_STATISTICAL_SAMPLES });
        }
        Ok(())
    }
}

/// One block of every signal in the model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChannelSample {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub z1: Vec<f64>,
    /// `x1 + x2 + z1`
    pub y1: Vec<f64>,
    pub zq: Vec<f64>,
    /// `y1 + zq`
    pub y1_hat: Vec<f64>,
    /// Fictitious eavesdropper noise, correlated with `z1`.
    pub ze: Vec<f64>,
    /// `x1 + x2 + ze`
    pub ye: Vec<f64>,
    pub xr: Vec<f64>,
    pub z2: Vec<f64>,
    /// `xr + z2`
    pub y2: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ChannelSampler {
    cfg: McConfig,
    base: ChaCha8Rng,
    sd_x1: f64,
    sd_x2: f64,
    sd_xr: f64,
    sd_zq: f64,
    rho: f64,
    rho_perp: f64,
}

/// Sampler for `cfg.samples` independent blocks.
///
/// `X₁ ~ N(0, P′₁)`, `X₂ ~ N(0, P₂)`, `X_r ~ N(0, P_r)`, `Z_Q ~ N(0, σ_c²)`,
/// unit-variance `Z₁`, `Z₂`, and `Z_e = ρZ₁ + √(1−ρ²)·Z_ind`.
pub fn sample_blocks(
    cfg: McConfig,
    powers: &PhasePowers,
    p1_prime: f64,
    sigma_c2: f64,
    rho: f64,
) -> Result<ChannelSampler> {
    cfg.validate()?;
    if !(rho.abs() < 1.0) {
        return Err(Error::domain("rho", rho, "|rho| < 1"));
    }
    let pr = powers.pr.finite().ok_or(Error::InfiniteRelay)?;
    for (name, v) in [("p1_prime", p1_prime), ("p2", powers.p2), ("pr", pr), ("sigma_c2", sigma_c2)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::domain(name, v, "finite and >= 0"));
        }
    }
    Ok(ChannelSampler {
        cfg,
        base: ChaCha8Rng::seed_from_u64(cfg.seed),
        sd_x1: p1_prime.sqrt(),
        sd_x2: powers.p2.sqrt(),
        sd_xr: pr.sqrt(),
        sd_zq: sigma_c2.sqrt(),
        rho,
        rho_perp: (1.0 - rho * rho).sqrt(),
    })
}

impl ChannelSampler {
    pub fn config(&self) -> McConfig {
        self.cfg
    }

    pub(crate) fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng
    }

    pub fn block(&self, index: u64) -> ChannelSample {
        let mut out = ChannelSample::default();
        self.block_into(index, &mut out);
        out
    }

    /// Fills `out` with block `index`, reusing its buffers.
    pub fn block_into(&self, index: u64, out: &mut ChannelSample) {
        let (n, m) = (self.cfg.n_prime, self.cfg.m_prime);
        let mut rng = self.stream(index);
        let mut draw = |v: &mut Vec<f64>, len: usize, sd: f64| {
            v.clear();
            v.extend((0..len).map(|_| sd * rng.sample::<f64, _>(StandardNormal)));
        };
        draw(&mut out.x1, n, self.sd_x1);
        draw(&mut out.x2, n, self.sd_x2);
        draw(&mut out.z1, n, 1.0);
        draw(&mut out.zq, n, self.sd_zq);
        draw(&mut out.ze, n, 1.0);
        draw(&mut out.xr, m, self.sd_xr);
        draw(&mut out.z2, m, 1.0);

        for (ze, &z1) in out.ze.iter_mut().zip(&out.z1) {
            *ze = self.rho * z1 + self.rho_perp * *ze;
        }
        out.y1.clear();
        out.y1.extend((0..n).map(|i| out.x1[i] + out.x2[i] + out.z1[i]));
        out.y1_hat.clear();
        out.y1_hat.extend((0..n).map(|i| out.y1[i] + out.zq[i]));
        out.ye.clear();
        out.ye.extend((0..n).map(|i| out.x1[i] + out.x2[i] + out.ze[i]));
        out.y2.clear();
        out.y2.extend((0..m).map(|i| out.xr[i] + out.z2[i]));
    }

    pub fn iter(&self) -> impl Iterator<Item = ChannelSample> + '_ {
        (0..self.cfg.samples as u64).map(move |i| self.block(i))
    }
}
