//! Gaussian plug-in estimators built on log-determinants of covariance
//! matrices, with a batch bootstrap for standard errors.
//!
//! Every signal in the channel model is jointly Gaussian, so mutual
//! information and conditional-entropy differences are functions of the
//! covariance alone. The plug-in estimate substitutes the sample covariance.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Row-major sample matrix: one row per independent block.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SampleMatrix {
    pub fn new(dim: usize) -> Self {
        Self { dim, data: Vec::new() }
    }

    pub fn with_capacity(dim: usize, rows: usize) -> Self {
        Self { dim, data: Vec::with_capacity(dim * rows) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim, "row length must match sample dimension");
        self.data.extend_from_slice(row);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Which coordinates form `U`, `V` and the conditioning set `W` in
/// `I(U; V | W)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub given: Vec<usize>,
}

impl Split {
    pub fn pair(first: impl Into<Vec<usize>>, second: impl Into<Vec<usize>>) -> Self {
        Self { first: first.into(), second: second.into(), given: Vec::new() }
    }

    pub fn given(mut self, given: impl Into<Vec<usize>>) -> Self {
        self.given = given.into();
        self
    }
}

/// `log₂ det` of the principal submatrix on `idx` (1 for an empty set).
///
/// Coordinates with exactly zero variance are constants; they carry no
/// information and are dropped instead of making the matrix singular.
pub fn log2_det(cov: &DMatrix<f64>, idx: &[usize]) -> Result<f64> {
    let active: Vec<usize> = idx.iter().copied().filter(|&i| cov[(i, i)] != 0.0).collect();
    if active.is_empty() {
        return Ok(0.0);
    }
    let sub = DMatrix::from_fn(active.len(), active.len(), |r, c| cov[(active[r], active[c])]);
    let chol = sub.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let ln_det: f64 = chol.l_dirty().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
    if ln_det.is_finite() {
        Ok(ln_det / std::f64::consts::LN_2)
    } else {
        Err(Error::NotPositiveDefinite)
    }
}

/// Exact Gaussian (conditional) mutual information in bits:
/// `½·log₂(det Σ_UW · det Σ_VW / (det Σ_W · det Σ_UVW))`.
pub fn gaussian_mi_from_covariance(cov: &DMatrix<f64>, split: &Split) -> Result<f64> {
    if !cov.is_square() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = cov.nrows();
    if split.first.iter().chain(&split.second).chain(&split.given).any(|&i| i >= n) {
        return Err(Error::Degenerate("split index outside the covariance matrix"));
    }
    for i in 0..n {
        if !(cov[(i, i)] >= 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
    }
    // A constant block shares no information with anything.
    let varying = |idx: &[usize]| -> Vec<usize> { idx.iter().copied().filter(|&i| cov[(i, i)] != 0.0).collect() };
    let (first, second) = (varying(&split.first), varying(&split.second));
    if first.is_empty() || second.is_empty() {
        return Ok(0.0);
    }
    let join = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().chain(b).copied().collect() };
    let uw = join(&first, &split.given);
    let vw = join(&second, &split.given);
    let uvw = join(&uw, &second);
    let mi = 0.5 * (log2_det(cov, &uw)? + log2_det(cov, &vw)? - log2_det(cov, &split.given)? - log2_det(cov, &uvw)?);
    Ok(mi)
}

/// Sums and cross-products of one batch of rows.
#[derive(Debug, Clone)]
struct Moments {
    count: f64,
    sum: Vec<f64>,
    cross: Vec<f64>,
}

impl Moments {
    fn zero(dim: usize) -> Self {
        Self { count: 0.0, sum: vec![0.0; dim], cross: vec![0.0; dim * dim] }
    }

    fn add_row(&mut self, row: &[f64]) {
        let d = row.len();
        self.count += 1.0;
        for i in 0..d {
            self.sum[i] += row[i];
            let ri = row[i];
            let line = &mut self.cross[i * d..(i + 1) * d];
            for (c, &rj) in line.iter_mut().zip(row).skip(i) {
                *c += ri * rj;
            }
        }
    }

    fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum.iter_mut().zip(&other.sum).for_each(|(a, b)| *a += b);
        self.cross.iter_mut().zip(&other.cross).for_each(|(a, b)| *a += b);
    }

    /// Unbiased sample covariance.
    fn covariance(&self) -> DMatrix<f64> {
        let d = self.sum.len();
        let n = self.count;
        DMatrix::from_fn(d, d, |r, c| {
            let (i, j) = if r <= c { (r, c) } else { (c, r) };
            (self.cross[i * d + j] - self.sum[i] * self.sum[j] / n) / (n - 1.0)
        })
    }
}

/// Batch bootstrap settings: rows are cut into `batches` contiguous groups,
/// and each of `resamples` replicates draws that many groups with
/// replacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bootstrap {
    pub resamples: usize,
    pub batches: usize,
    pub seed: u64,
    pub stream: u64,
}

impl Default for Bootstrap {
    fn default() -> Self {
        Self { resamples: 32, batches: 256, seed: 0, stream: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

/// Plug-in estimate of any covariance functional, with bootstrap standard
/// error. Batches and replicates are reduced in index order.
pub fn estimate_functional<F>(samples: &SampleMatrix, bootstrap: &Bootstrap, functional: F) -> Result<Estimate>
where
    F: Fn(&DMatrix<f64>) -> Result<f64>,
{
    let (rows, dim) = (samples.rows(), samples.dim());
    if rows < dim + 2 {
        return Err(Error::InsufficientSamples { got: rows, need: dim + 2 });
    }
    let batches = bootstrap.batches.clamp(2, rows);
    let mut parts = vec![Moments::zero(dim); batches];
    for r in 0..rows {
        parts[r * batches / rows].add_row(samples.row(r));
    }
    let mut total = Moments::zero(dim);
    parts.iter().for_each(|p| total.merge(p));
    let value = functional(&total.covariance())?;

    let mut rng = ChaCha8Rng::seed_from_u64(bootstrap.seed);
    rng.set_stream(bootstrap.stream);
    let mut replicates = Vec::with_capacity(bootstrap.resamples);
    for _ in 0..bootstrap.resamples {
        let mut acc = Moments::zero(dim);
        for _ in 0..batches {
            acc.merge(&parts[rng.random_range(0..batches)]);
        }
        replicates.push(functional(&acc.covariance())?);
    }
    let k = replicates.len() as f64;
    let mean = replicates.iter().sum::<f64>() / k;
    let var = replicates.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    Ok(Estimate { value, std_err: var.sqrt() })
}

/// Plug-in mutual information in bits with default bootstrap settings.
/// Returns `(estimate, std_err)`.
pub fn estimate_mi(samples: &SampleMatrix, split: &Split) -> Result<(f64, f64)> {
    let e = estimate_mi_with(samples, split, &Bootstrap::default())?;
    Ok((e.value, e.std_err))
}

pub fn estimate_mi_with(samples: &SampleMatrix, split: &Split, bootstrap: &Bootstrap) -> Result<Estimate> {
    estimate_functional(samples, bootstrap, |cov| gaussian_mi_from_covariance(cov, split))
}
