//! Reproducible generation of four-channel Gaussian voltage records.
//!
//! [`synthesize`] draws `n` i.i.d. samples of `x = [I1, Q1, I2, Q2]ᵀ` from
//! the zero-mean Gaussian with covariance [`QtmsCovariance::matrix`], using
//! the lower Cholesky factor of the target matrix applied to standard
//! normals.
//!
//! # Reproducibility contract
//!
//! The sample stream is fixed and documented so results can be reproduced
//! across runs and machines:
//!
//! * RNG: ChaCha12 (`rand_chacha::ChaCha12Rng`), keyed from the `u64` seed
//!   via `SeedableRng::seed_from_u64` (SplitMix64 expansion).
//! * Normal variates: `rand_distr::StandardNormal` (ziggurat).
//! * Draw order: row-major, channel-minor — the four standard normals of
//!   sample `k` are drawn consecutively before sample `k+1` begins.
//!
//! Independent streams for Monte Carlo trials come from distinct seeds; the
//! seed-derivation rule lives in [`crate::mc::derive_trial_seed`].

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::QtmsCovariance;

/// Correlation substituted for ρ = 1 when degenerate sampling is allowed.
pub const DEGENERATE_RHO: f64 = 1.0 - 1e-12;

/// CSV header for sample blocks; column order matches `x = [I1,Q1,I2,Q2]ᵀ`.
pub const CSV_HEADER: &str = "I1,Q1,I2,Q2";

/// A block of `n` four-channel voltage samples plus generation metadata.
///
/// Column order is fixed: 0 = I1, 1 = Q1, 2 = I2, 3 = Q2.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock {
    rows: Vec<[f64; 4]>,
    seed: Option<u64>,
    params: Option<QtmsCovariance>,
}

impl SampleBlock {
    /// Build a block from raw rows. All entries must be finite and there
    /// must be at least one row.
    pub fn from_rows(
        rows: Vec<[f64; 4]>,
        seed: Option<u64>,
        params: Option<QtmsCovariance>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter(
                "a sample block needs at least one row".into(),
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite voltage in row {i}: {row:?}"
                )));
            }
        }
        Ok(Self { rows, seed, params })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[[f64; 4]] {
        &self.rows
    }

    /// Seed the block was generated from, when known.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Generating parameters, when known.
    pub fn params(&self) -> Option<&QtmsCovariance> {
        self.params.as_ref()
    }
}

/// Options for [`synthesize_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SynthesisOptions {
    /// Accept ρ = 1 by substituting [`DEGENERATE_RHO`] (with a warning)
    /// instead of failing. Cholesky sampling is undefined at ρ = 1 exactly.
    pub allow_degenerate: bool,
}

/// Draw `n` i.i.d. samples from the model covariance, deterministically for
/// a fixed `(params, n, seed)` triple.
pub fn synthesize(params: &QtmsCovariance, n: usize, seed: u64) -> Result<SampleBlock> {
    synthesize_with(params, n, seed, SynthesisOptions::default())
}

/// [`synthesize`] with explicit options.
pub fn synthesize_with(
    params: &QtmsCovariance,
    n: usize,
    seed: u64,
    options: SynthesisOptions,
) -> Result<SampleBlock> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let rows = sample_rows(params, n, &mut rng, options)?;
    Ok(SampleBlock {
        rows,
        seed: Some(seed),
        params: Some(*params),
    })
}

/// Draw `n` samples from an existing RNG stream. Used by the Monte Carlo
/// harness when a trial consumes randomness before sampling begins.
pub fn sample_rows<R: Rng>(
    params: &QtmsCovariance,
    n: usize,
    rng: &mut R,
    options: SynthesisOptions,
) -> Result<Vec<[f64; 4]>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    let params = if params.rho() >= 1.0 {
        if !options.allow_degenerate {
            return Err(Error::Degenerate(
                "rho = 1 makes the covariance singular; Cholesky sampling is undefined \
                 (set allow_degenerate to substitute rho = 1 - 1e-12)"
                    .into(),
            ));
        }
        log::warn!("rho = 1 requested; sampling with rho = {DEGENERATE_RHO} instead");
        params.with_rho(DEGENERATE_RHO)?
    } else {
        *params
    };

    let target = params.matrix();
    let chol = target.cholesky().ok_or_else(|| {
        Error::NotPositiveDefinite(format!(
            "Cholesky factorization failed for rho={}, p1={}, p2={}",
            params.rho(),
            params.p1(),
            params.p2()
        ))
    })?;
    let l = chol.l();

    // unpack the 10 nonzero entries of the lower factor
    let (l00, l10, l11, l20, l21, l22, l30, l31, l32, l33) = (
        l[(0, 0)],
        l[(1, 0)],
        l[(1, 1)],
        l[(2, 0)],
        l[(2, 1)],
        l[(2, 2)],
        l[(3, 0)],
        l[(3, 1)],
        l[(3, 2)],
        l[(3, 3)],
    );

    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let z0: f64 = rng.sample(StandardNormal);
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let z3: f64 = rng.sample(StandardNormal);
        rows.push([
            l00 * z0,
            l10 * z0 + l11 * z1,
            l20 * z0 + l21 * z1 + l22 * z2,
            l30 * z0 + l31 * z1 + l32 * z2 + l33 * z3,
        ]);
    }
    Ok(rows)
}

/// Sample covariance in the known-zero-mean form `Ŝ = (1/n)·Σ xₖxₖᵀ`.
///
/// The model is explicitly zero-mean, so no mean is subtracted; the result
/// is symmetric by construction. Use [`sample_covariance_centered`] for the
/// mean-subtracting variant. Requires `n ≥ 2`.
pub fn sample_covariance(block: &SampleBlock) -> Result<Matrix4<f64>> {
    if block.n() < 2 {
        return Err(Error::InvalidParameter(format!(
            "sample covariance needs at least 2 samples, got {}",
            block.n()
        )));
    }
    Ok(accumulate(block.rows(), &[0.0; 4]))
}

/// Mean-subtracting sample covariance `Ŝ = (1/n)·Σ (xₖ−x̄)(xₖ−x̄)ᵀ`.
///
/// Kept behind its own entry point because the detector is defined against
/// the zero-mean form; the divisor stays `n` for comparability.
pub fn sample_covariance_centered(block: &SampleBlock) -> Result<Matrix4<f64>> {
    if block.n() < 2 {
        return Err(Error::InvalidParameter(format!(
            "sample covariance needs at least 2 samples, got {}",
            block.n()
        )));
    }
    let n = block.n() as f64;
    let mut mean = [0.0f64; 4];
    for row in block.rows() {
        for c in 0..4 {
            mean[c] += row[c];
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    Ok(accumulate(block.rows(), &mean))
}

fn accumulate(rows: &[[f64; 4]], mean: &[f64; 4]) -> Matrix4<f64> {
    let n = rows.len() as f64;
    // upper triangle only, mirrored afterwards for exact symmetry
    let mut acc = [0.0f64; 10];
    for row in rows {
        let d = [
            row[0] - mean[0],
            row[1] - mean[1],
            row[2] - mean[2],
            row[3] - mean[3],
        ];
        let mut idx = 0;
        for i in 0..4 {
            for j in i..4 {
                acc[idx] += d[i] * d[j];
                idx += 1;
            }
        }
    }
    let mut m = Matrix4::zeros();
    let mut idx = 0;
    for i in 0..4 {
        for j in i..4 {
            let v = acc[idx] / n;
            m[(i, j)] = v;
            m[(j, i)] = v;
            idx += 1;
        }
    }
    m
}

/// Metadata sidecar stored next to a sample-block CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockMeta {
    pub n: usize,
    pub seed: Option<u64>,
    pub params: Option<QtmsCovariance>,
    pub columns: Vec<String>,
}

impl BlockMeta {
    fn of(block: &SampleBlock) -> Self {
        Self {
            n: block.n(),
            seed: block.seed,
            params: block.params,
            columns: CSV_HEADER.split(',').map(str::to_owned).collect(),
        }
    }
}

/// Write a block as CSV: header `I1,Q1,I2,Q2`, one row per sample, 17
/// significant digits (lossless for f64).
pub fn write_sample_csv<W: Write>(block: &SampleBlock, mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in block.rows() {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            row[0], row[1], row[2], row[3]
        )?;
    }
    Ok(())
}

/// Read a block from CSV produced by [`write_sample_csv`] (or any CSV with
/// the same four-column header). Seed and parameters are unknown here; use
/// [`read_sample_files`] to merge them from a sidecar.
pub fn read_sample_csv<R: Read>(r: R) -> Result<SampleBlock> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_reader(r);
    {
        let headers = reader.headers()?;
        let expected: Vec<&str> = CSV_HEADER.split(',').collect();
        let got: Vec<&str> = headers.iter().map(str::trim).collect();
        if got != expected {
            return Err(Error::config(format!(
                "unexpected CSV header {got:?}, expected {expected:?}"
            )));
        }
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 4 {
            return Err(Error::config(format!(
                "row {} has {} fields, expected 4",
                i + 1,
                record.len()
            )));
        }
        let mut row = [0.0f64; 4];
        for (c, field) in record.iter().enumerate() {
            row[c] = field.trim().parse::<f64>().map_err(|e| {
                Error::config(format!("row {}, field {}: {e} (`{field}`)", i + 1, c + 1))
            })?;
        }
        rows.push(row);
    }
    SampleBlock::from_rows(rows, None, None)
}

/// Write `block` to `csv_path` along with a JSON metadata sidecar of the
/// same basename (`samples.csv` → `samples.json`). Returns the sidecar path.
pub fn write_sample_files(block: &SampleBlock, csv_path: &Path) -> Result<PathBuf> {
    let file = std::fs::File::create(csv_path)?;
    write_sample_csv(block, std::io::BufWriter::new(file))?;
    let sidecar = csv_path.with_extension("json");
    let meta = BlockMeta::of(block);
    std::fs::write(&sidecar, serde_json::to_string_pretty(&meta)?)?;
    Ok(sidecar)
}

/// Read a block from `csv_path`, merging seed and parameters from the JSON
/// sidecar when one exists.
pub fn read_sample_files(csv_path: &Path) -> Result<SampleBlock> {
    let file = std::fs::File::open(csv_path)?;
    let mut block = read_sample_csv(std::io::BufReader::new(file))?;
    let sidecar = csv_path.with_extension("json");
    if sidecar.exists() {
        let meta: BlockMeta = serde_json::from_str(&std::fs::read_to_string(&sidecar)?)?;
        block.seed = meta.seed;
        block.params = meta.params;
    }
    Ok(block)
}
