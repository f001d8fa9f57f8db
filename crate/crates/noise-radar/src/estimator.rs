//! Recovery of `(P1, P2, ρ, φ)` from a sample covariance matrix.
//!
//! The estimate is the constrained minimizer of the Frobenius distance
//! between the structured model matrix and the sample covariance `Ŝ`,
//! subject to `P1 ≥ 0`, `P2 ≥ 0`, `0 ≤ ρ ≤ 1`, `0 ≤ φ < 2π`. The problem
//! decouples exactly:
//!
//! * the diagonal blocks fix `P̂1 = (Ŝ₁₁+Ŝ₂₂)/2` and `P̂2 = (Ŝ₃₃+Ŝ₄₄)/2`;
//! * the cross block `M` projects onto the scaled coupling matrix, giving
//!   `k̂ = √(c²+s²)` and `φ̂ = atan2(s, c)` where for rotation coupling
//!   `c = (M₁₁+M₂₂)/2`, `s = (M₁₂−M₂₁)/2` and for reflection coupling
//!   `c = (M₁₁−M₂₂)/2`, `s = (M₁₂+M₂₁)/2`;
//! * `ρ̂ = k̂/√(P̂1·P̂2)`, clipped to 1 when the unconstrained value exceeds
//!   the boundary (the `clipped` flag records this).
//!
//! This closed form is the exact global minimizer whenever no clipping
//! occurs; when clipping does occur the diagonal powers are kept rather than
//! re-optimized jointly, which can be marginally suboptimal at near-singular
//! inputs. The acceptance suite checks both regimes against a dense grid
//! search.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CouplingKind, QtmsCovariance};
use crate::synthesis::{sample_covariance, SampleBlock};

/// Relative symmetry tolerance accepted by [`fit`].
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Result of the constrained covariance fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Estimated received-signal power.
    pub p1: f64,
    /// Estimated reference-signal power.
    pub p2: f64,
    /// Estimated correlation coefficient, in `[0, 1]`.
    pub rho: f64,
    /// Estimated phase, in `[0, 2π)`; reported as 0 when ρ̂ = 0 leaves it
    /// unidentifiable.
    pub phi: f64,
    /// Frobenius norm of `R(P̂1,P̂2,ρ̂,φ̂) − Ŝ`.
    pub residual: f64,
    /// True when the unconstrained ρ exceeded 1 and was clipped.
    pub clipped: bool,
}

impl FitResult {
    /// Realize the fitted model matrix.
    pub fn model(&self, coupling: CouplingKind) -> Result<QtmsCovariance> {
        QtmsCovariance::new(self.p1, self.p2, self.rho, self.phi, coupling)
    }
}

/// Fit the structured covariance model to a symmetric 4×4 sample covariance.
///
/// Fails on non-finite entries, on asymmetry beyond [`SYMMETRY_TOL`]
/// (relative to the largest entry), and on degenerate inputs where either
/// fitted power is non-positive (ρ is undefined there).
pub fn fit(s_hat: &Matrix4<f64>, coupling: CouplingKind) -> Result<FitResult> {
    if s_hat.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "sample covariance contains non-finite entries".into(),
        ));
    }
    let scale = s_hat.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let skew = (s_hat[(i, j)] - s_hat[(j, i)]).abs();
            if skew > tol {
                return Err(Error::Asymmetric(format!(
                    "entries ({i},{j}) and ({j},{i}) differ by {skew} (tolerance {tol})"
                )));
            }
        }
    }

    let p1 = 0.5 * (s_hat[(0, 0)] + s_hat[(1, 1)]);
    let p2 = 0.5 * (s_hat[(2, 2)] + s_hat[(3, 3)]);
    if p1 <= 0.0 || p2 <= 0.0 {
        return Err(Error::Degenerate(format!(
            "fitted powers must be positive (p1={p1}, p2={p2}); rho is undefined"
        )));
    }

    // average the two off-diagonal blocks so tolerance-level asymmetry
    // cannot bias the projection; exact for symmetric input
    let m11 = 0.5 * (s_hat[(0, 2)] + s_hat[(2, 0)]);
    let m12 = 0.5 * (s_hat[(0, 3)] + s_hat[(3, 0)]);
    let m21 = 0.5 * (s_hat[(1, 2)] + s_hat[(2, 1)]);
    let m22 = 0.5 * (s_hat[(1, 3)] + s_hat[(3, 1)]);

    let (c, s) = match coupling {
        CouplingKind::Rotation => (0.5 * (m11 + m22), 0.5 * (m12 - m21)),
        CouplingKind::Reflection => (0.5 * (m11 - m22), 0.5 * (m12 + m21)),
    };

    let k = c.hypot(s);
    let (rho_raw, phi) = if k == 0.0 {
        // rho = 0 leaves phi unidentifiable; tie-break at 0
        (0.0, 0.0)
    } else {
        let phi = s.atan2(c).rem_euclid(std::f64::consts::TAU);
        let phi = if phi >= std::f64::consts::TAU { 0.0 } else { phi };
        (k / (p1 * p2).sqrt(), phi)
    };
    let clipped = rho_raw > 1.0;
    let rho = rho_raw.min(1.0);

    let model = QtmsCovariance::new(p1, p2, rho, phi, coupling)?;
    let residual = (model.matrix() - s_hat).norm();

    Ok(FitResult {
        p1,
        p2,
        rho,
        phi,
        residual,
        clipped,
    })
}

/// Detection decision for one sample block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub detection: bool,
    pub rho_hat: f64,
}

/// Estimate ρ̂ from the block's sample covariance and declare a detection
/// when it exceeds `threshold` (strictly). `threshold` must lie in `[0, 1]`.
pub fn detect(
    block: &SampleBlock,
    threshold: f64,
    coupling: CouplingKind,
) -> Result<Detection> {
    if !(threshold.is_finite() && (0.0..=1.0).contains(&threshold)) {
        return Err(Error::InvalidParameter(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    let s = sample_covariance(block)?;
    let fit = fit(&s, coupling)?;
    Ok(Detection {
        detection: fit.rho > threshold,
        rho_hat: fit.rho,
    })
}
