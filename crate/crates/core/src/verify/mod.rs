//! Monte Carlo cross-check of the closed-form information terms.
//!
//! The sampler draws the channel exactly as the coding argument assumes
//! (independent Gaussian inputs, Gaussian quantization noise) and the
//! estimators recover each mutual-information term from sample covariances.
//! A term passes when the estimate lies within three bootstrap standard
//! errors of its closed form.

mod estimator;
mod sampler;

pub use estimator::{
    estimate_functional, estimate_mi, estimate_mi_with, gaussian_mi_from_covariance, log2_det, Bootstrap, Estimate,
    SampleMatrix, Split,
};
pub use sampler::{sample_blocks, ChannelSample, ChannelSampler, McConfig, MIN_STATISTICAL_SAMPLES};

use std::fmt;

use crate::achievable::solve_sigma_c2;
use crate::bounds::genie_term;
use crate::channel::{cap, PhasePowers, RelayPower, TimeShare};
use crate::error::{Error, Result};

/// Standard errors a passing estimate may sit from its closed form.
pub const PASS_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    /// `I(X₁; Ŷ₁ | X_r, Y₂, X₂)`, closed form `C(P′₁/(1+σ_c²))`.
    SourceToQuantized,
    /// `I(X₁; Y₁ | X_r)`, closed form `C(P′₁/(1+P₂))`.
    SourceToRelay,
    /// `I(X_r; Y₂, X₂)`, closed form `C(P_r)`.
    RelayLink,
    /// `I(Ŷ₁; Y₁ | Y₂, X₂, X_r)`, closed form `C((P′₁+1)/σ_c²)`.
    QuantizerRate,
    /// `h(X₁+Z₁ | Y_e) − h(Z₁ | Z_e)`, the genie term at a given `ρ`.
    GenieEntropyGap,
}

impl Term {
    pub fn label(self) -> &'static str {
        match self {
            Term::SourceToQuantized => "source_to_quantized",
            Term::SourceToRelay => "source_to_relay",
            Term::RelayLink => "relay_link",
            Term::QuantizerRate => "quantizer_rate",
            Term::GenieEntropyGap => "genie_entropy_gap",
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One term: closed form next to its Monte Carlo estimate, per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiReport {
    pub term: Term,
    pub closed_form: f64,
    pub estimate: f64,
    pub std_err: f64,
}

impl MiReport {
    pub fn deviation(&self) -> f64 {
        (self.estimate - self.closed_form).abs()
    }

    /// Within [`PASS_SIGMAS`] standard errors. A term that is identically
    /// zero (constant input) has zero error and passes on exact agreement.
    pub fn passes(&self) -> bool {
        self.deviation() < PASS_SIGMAS * self.std_err || self.estimate == self.closed_form
    }
}

// Column layout of the compress-and-forward sample matrix, in units of n′ / m′.
struct CfColumns {
    n: usize,
    m: usize,
}

impl CfColumns {
    fn dim(&self) -> usize {
        4 * self.n + 2 * self.m
    }
    fn range(start: usize, len: usize) -> Vec<usize> {
        (start..start + len).collect()
    }
    fn x1(&self) -> Vec<usize> {
        Self::range(0, self.n)
    }
    fn x2(&self) -> Vec<usize> {
        Self::range(self.n, self.n)
    }
    fn y1(&self) -> Vec<usize> {
        Self::range(2 * self.n, self.n)
    }
    fn y1_hat(&self) -> Vec<usize> {
        Self::range(3 * self.n, self.n)
    }
    fn xr(&self) -> Vec<usize> {
        Self::range(4 * self.n, self.m)
    }
    fn y2(&self) -> Vec<usize> {
        Self::range(4 * self.n + self.m, self.m)
    }
}

fn concat(parts: &[Vec<usize>]) -> Vec<usize> {
    parts.concat()
}

fn bootstrap_for(sampler: &ChannelSampler) -> Bootstrap {
    Bootstrap { seed: sampler.config().seed, stream: sampler::BOOTSTRAP_STREAM, ..Bootstrap::default() }
}

/// Checks the four compress-and-forward information terms at one operating
/// point. `p2` and `pr` are phase powers; `σ_c²` is derived from the
/// relay-link balance at `alpha`.
pub fn verify_cf_terms(cfg: McConfig, p1_prime: f64, p2: f64, pr: f64, alpha: TimeShare) -> Result<Vec<MiReport>> {
    cfg.validate_statistical()?;
    let sigma_c2 = solve_sigma_c2(p1_prime, pr, alpha)?.variance();
    if !(sigma_c2 > 0.0) {
        return Err(Error::Numerical(format!(
            "quantization noise variance underflows at p1'={p1_prime}, pr={pr}, alpha={}",
            alpha.get()
        )));
    }
    let powers = PhasePowers { p1: p1_prime, p2, pr: RelayPower::Finite(pr) };
    let sampler = sample_blocks(cfg, &powers, p1_prime, sigma_c2, 0.0)?;
    let cols = CfColumns { n: cfg.n_prime, m: cfg.m_prime };

    let mut data = SampleMatrix::with_capacity(cols.dim(), cfg.samples);
    let mut block = ChannelSample::default();
    let mut row = Vec::with_capacity(cols.dim());
    for i in 0..cfg.samples as u64 {
        sampler.block_into(i, &mut block);
        row.clear();
        for part in [&block.x1, &block.x2, &block.y1, &block.y1_hat, &block.xr, &block.y2] {
            row.extend_from_slice(part);
        }
        data.push_row(&row);
    }

    let (n, m) = (cfg.n_prime as f64, cfg.m_prime as f64);
    let terms = [
        (
            Term::SourceToQuantized,
            Split::pair(cols.x1(), cols.y1_hat()).given(concat(&[cols.xr(), cols.y2(), cols.x2()])),
            cap(p1_prime / (1.0 + sigma_c2)),
            n,
        ),
        (Term::SourceToRelay, Split::pair(cols.x1(), cols.y1()).given(cols.xr()), cap(p1_prime / (1.0 + p2)), n),
        (Term::RelayLink, Split::pair(cols.xr(), concat(&[cols.y2(), cols.x2()])), cap(pr), m),
        (
            Term::QuantizerRate,
            Split::pair(cols.y1_hat(), cols.y1()).given(concat(&[cols.y2(), cols.x2(), cols.xr()])),
            cap((p1_prime + 1.0) / sigma_c2),
            n,
        ),
    ];

    let bootstrap = bootstrap_for(&sampler);
    terms
        .into_iter()
        .map(|(term, split, closed_form, uses)| {
            let e = estimate_mi_with(&data, &split, &bootstrap)?;
            Ok(MiReport { term, closed_form, estimate: e.value / uses, std_err: e.std_err / uses })
        })
        .collect()
}

/// Checks `h(X₁+Z₁ | X₁+X₂+Z_e) − h(Z₁ | Z_e)` against the genie term at
/// the given correlation, per phase-one channel use.
pub fn verify_genie_term(p1: f64, p2: f64, rho: f64, cfg: McConfig) -> Result<MiReport> {
    cfg.validate_statistical()?;
    let powers = PhasePowers { p1, p2, pr: RelayPower::Finite(1.0) };
    let sampler = sample_blocks(cfg, &powers, p1, 1.0, rho)?;
    let n = cfg.n_prime;
    // columns: x1+z1 | ye | z1 | ze
    let mut data = SampleMatrix::with_capacity(4 * n, cfg.samples);
    let mut block = ChannelSample::default();
    let mut row = Vec::with_capacity(4 * n);
    for i in 0..cfg.samples as u64 {
        sampler.block_into(i, &mut block);
        row.clear();
        row.extend(block.x1.iter().zip(&block.z1).map(|(x, z)| x + z));
        row.extend_from_slice(&block.ye);
        row.extend_from_slice(&block.z1);
        row.extend_from_slice(&block.ze);
        data.push_row(&row);
    }
    let r = |k: usize| -> Vec<usize> { (k * n..(k + 1) * n).collect() };
    let (relay, eve, z1, ze) = (r(0), r(1), r(2), r(3));
    let relay_eve = concat(&[relay, eve.clone()]);
    let z1_ze = concat(&[z1, ze.clone()]);

    // h(A|B) − h(C|D) = ½·[log det Σ_AB − log det Σ_B − log det Σ_CD + log det Σ_D]
    let functional = |cov: &nalgebra::DMatrix<f64>| -> Result<f64> {
        Ok(0.5 * (log2_det(cov, &relay_eve)? - log2_det(cov, &eve)? - log2_det(cov, &z1_ze)? + log2_det(cov, &ze)?))
    };
    let e = estimate_functional(&data, &bootstrap_for(&sampler), functional)?;
    Ok(MiReport {
        term: Term::GenieEntropyGap,
        closed_form: genie_term(p1, p2, rho),
        estimate: e.value / n as f64,
        std_err: e.std_err / n as f64,
    })
}
