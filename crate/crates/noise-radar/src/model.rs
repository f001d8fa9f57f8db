//! Covariance parameterization of the two-channel noise radar signal model.
//!
//! The four real voltages `x = [I1, Q1, I2, Q2]ᵀ` of the received and
//! reference signals are zero-mean jointly Gaussian. Their joint statistics
//! are fully described by a structured 4×4 covariance matrix with power
//! blocks `P1·I`, `P2·I` on the diagonal and a scaled 2×2 coupling block
//! `ρ√(P1P2)·C(φ)` off the diagonal, where `C(φ)` is either a rotation or a
//! reflection matrix depending on how the reference signal was generated.
//!
//! The correlation coefficient ρ is the detection statistic of interest:
//! ρ = 1 means the received signal is a perfect copy of the reference,
//! ρ = 0 means the two are unrelated (no target).
//!
//! # Example
//!
//! ```
//! use noise_radar::model::{QtmsCovariance, CouplingKind};
//!
//! let params = QtmsCovariance::new(2.0, 0.5, 0.6, 0.0, CouplingKind::Rotation).unwrap();
//! let m = params.matrix();
//! // diagonal blocks carry the channel powers
//! assert_eq!(m[(0, 0)], 2.0);
//! assert_eq!(m[(2, 2)], 0.5);
//! // cross block carries rho * sqrt(P1 P2) = 0.6
//! assert!((m[(0, 2)] - 0.6).abs() < 1e-15);
//! ```

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Form of the 2×2 cross-covariance block.
///
/// `Rotation` arises when the reference is a direct copy of the transmitted
/// signal; `Reflection` arises when transmit and reference are the two
/// sidebands of a mixed bandlimited noise source. Under `Reflection` the
/// complex cross-correlation `⟨z1 z2*⟩` vanishes, so complex matched
/// filtering sees nothing; all processing here stays in real voltages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    Rotation,
    Reflection,
}

impl CouplingKind {
    /// The 2×2 coupling matrix `C(φ)`.
    pub fn block(&self, phi: f64) -> Matrix2<f64> {
        let (s, c) = phi.sin_cos();
        match self {
            CouplingKind::Rotation => Matrix2::new(c, s, -s, c),
            CouplingKind::Reflection => Matrix2::new(c, s, s, -c),
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingKind::Rotation => write!(f, "rotation"),
            CouplingKind::Reflection => write!(f, "reflection"),
        }
    }
}

impl FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rotation" => Ok(CouplingKind::Rotation),
            "reflection" => Ok(CouplingKind::Reflection),
            other => Err(Error::InvalidParameter(format!(
                "unknown coupling kind `{other}` (expected `rotation` or `reflection`)"
            ))),
        }
    }
}

/// Parameters of the structured covariance matrix: channel powers, the
/// correlation coefficient, the coupling phase, and the coupling kind.
///
/// Invariants enforced at construction: `p1 > 0`, `p2 > 0`, `0 ≤ rho ≤ 1`,
/// and `phi` stored canonically in `[0, 2π)`. The realized matrix is
/// symmetric by construction and positive definite iff `rho < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QtmsCovariance {
    p1: f64,
    p2: f64,
    rho: f64,
    phi: f64,
    coupling: CouplingKind,
}

impl QtmsCovariance {
    pub fn new(p1: f64, p2: f64, rho: f64, phi: f64, coupling: CouplingKind) -> Result<Self> {
        if !(p1.is_finite() && p1 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "p1 must be finite and positive, got {p1}"
            )));
        }
        if !(p2.is_finite() && p2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "p2 must be finite and positive, got {p2}"
            )));
        }
        if !(rho.is_finite() && (0.0..=1.0).contains(&rho)) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in [0, 1], got {rho}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "phi must be finite, got {phi}"
            )));
        }
        Ok(Self {
            p1,
            p2,
            rho,
            phi: canonical_phase(phi),
            coupling,
        })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Coupling phase, canonical in `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn coupling(&self) -> CouplingKind {
        self.coupling
    }

    /// Same parameters with a different correlation coefficient.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.p1, self.p2, rho, self.phi, self.coupling)
    }

    /// Realize the 4×4 covariance matrix.
    ///
    /// Diagonal blocks are `P1·I` and `P2·I`; the upper-right block is
    /// `ρ√(P1P2)·C(φ)` and the lower-left block is its transpose, so the
    /// result is exactly symmetric. Singular (determinant zero) iff ρ = 1.
    pub fn matrix(&self) -> Matrix4<f64> {
        let k = self.rho * (self.p1 * self.p2).sqrt();
        let cross = self.coupling.block(self.phi) * k;
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.p1;
        m[(1, 1)] = self.p1;
        m[(2, 2)] = self.p2;
        m[(3, 3)] = self.p2;
        for i in 0..2 {
            for j in 0..2 {
                m[(i, 2 + j)] = cross[(i, j)];
                m[(2 + j, i)] = cross[(i, j)];
            }
        }
        m
    }
}

// Validated deserialization: reject out-of-range parameters in sidecar files.
impl<'de> Deserialize<'de> for QtmsCovariance {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            p1: f64,
            p2: f64,
            rho: f64,
            phi: f64,
            coupling: CouplingKind,
        }
        let raw = Raw::deserialize(deserializer)?;
        QtmsCovariance::new(raw.p1, raw.p2, raw.rho, raw.phi, raw.coupling)
            .map_err(serde::de::Error::custom)
    }
}

/// Reduce a phase to `[0, 2π)`.
fn canonical_phase(phi: f64) -> f64 {
    let c = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if c >= TAU {
        0.0
    } else {
        c
    }
}

/// Split of each channel into a shared (perfectly correlated) component of
/// power `p` and independent noise of powers `pn1`, `pn2`. The channel
/// totals are `P1 = p + pn1` and `P2 = p + pn2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalDecomposition {
    p: f64,
    pn1: f64,
    pn2: f64,
}

impl SignalDecomposition {
    pub fn new(p: f64, pn1: f64, pn2: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("pn1", pn1), ("pn2", pn2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self { p, pn1, pn2 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pn1(&self) -> f64 {
        self.pn1
    }

    pub fn pn2(&self) -> f64 {
        self.pn2
    }

    /// Total received power `P1 = p + pn1`.
    pub fn p1(&self) -> f64 {
        self.p + self.pn1
    }

    /// Total reference power `P2 = p + pn2`.
    pub fn p2(&self) -> f64 {
        self.p + self.pn2
    }

    /// Correlation coefficient `[(1 + pn1/p)(1 + pn2/p)]^(-1/2)`.
    ///
    /// In the limit `p = 0` with any noise present the correlation is 0.
    /// `p = 0` with no noise at all leaves ρ indeterminate and is an error.
    pub fn rho(&self) -> Result<f64> {
        if self.p == 0.0 {
            return if self.pn1 > 0.0 || self.pn2 > 0.0 {
                Ok(0.0)
            } else {
                Err(Error::Degenerate(
                    "all powers are zero; correlation coefficient is indeterminate".into(),
                ))
            };
        }
        Ok(((1.0 + self.pn1 / self.p) * (1.0 + self.pn2 / self.p)).powf(-0.5))
    }
}

/// Correlation coefficient from channel totals and noise powers:
/// `√((1 − pn1/p1)(1 − pn2/p2))`.
///
/// Equals [`SignalDecomposition::rho`] on the consistent decomposition
/// `p = p1 − pn1 = p2 − pn2`; requires `0 ≤ pn1 ≤ p1` and `0 ≤ pn2 ≤ p2`.
pub fn rho_from_totals(p1: f64, p2: f64, pn1: f64, pn2: f64) -> Result<f64> {
    if !(p1.is_finite() && p1 > 0.0) || !(p2.is_finite() && p2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "total powers must be finite and positive, got p1={p1}, p2={p2}"
        )));
    }
    if !(pn1.is_finite() && (0.0..=p1).contains(&pn1)) {
        return Err(Error::InvalidParameter(format!(
            "pn1 must satisfy 0 <= pn1 <= p1, got pn1={pn1}, p1={p1}"
        )));
    }
    if !(pn2.is_finite() && (0.0..=p2).contains(&pn2)) {
        return Err(Error::InvalidParameter(format!(
            "pn2 must satisfy 0 <= pn2 <= p2, got pn2={pn2}, p2={p2}"
        )));
    }
    Ok(((1.0 - pn1 / p1) * (1.0 - pn2 / p2)).sqrt())
}

/// Maximum observable correlation `ρ₀ = 1 − pn2/p2`, set by the noise in the
/// reference channel alone. This is the correlation the radar would measure
/// with no external noise on the received signal.
pub fn rho0_from_reference(p2: f64, pn2: f64) -> Result<f64> {
    if !(p2.is_finite() && p2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "p2 must be finite and positive, got {p2}"
        )));
    }
    if !(pn2.is_finite() && (0.0..=p2).contains(&pn2)) {
        return Err(Error::InvalidParameter(format!(
            "pn2 must satisfy 0 <= pn2 <= p2, got pn2={pn2}, p2={p2}"
        )));
    }
    Ok(1.0 - pn2 / p2)
}
