//! Radar range equation, characteristic range, and the range law for ρ.
//!
//! With transmit gain `G`, receive effective area `A_e`, target cross
//! section `σ`, transmit power `P2` and external noise power `P_n`, the
//! received signal power at range `R` is `P1 = κ·P2 + P_n` with
//! `κ = G·A_e·σ/((4π)²·R⁴)`. Two derived quantities summarize everything
//! the detector needs:
//!
//! * the characteristic range `R_c = (G·A_e·σ·P2/((4π)²·P_n))^¼`, the range
//!   at which received signal power equals noise power (SNR = 1);
//! * the maximum observable correlation `ρ₀ = 1 − pn2/P2`, set by the noise
//!   in the reference channel.
//!
//! Together they give the range law `ρ(R) = ρ₀/√(1 + (R/R_c)⁴)`, which this
//! module cross-checks against the full power-propagation chain
//! ([`rho_range_consistency`]).
//!
//! # Conventions
//!
//! The spreading denominator is `(4π)²`. Some range-equation forms use a
//! single `4π` instead, which scales `R_c` up by `(4π)^¼ ≈ 1.88`;
//! [`characteristic_range_4pi`] reports that variant for cross-checking
//! against sources using the other convention. All core quantities are
//! linear (watts, m², dimensionless gain); dB and dBm appear only in
//! [`LinkBudgetConfig`], the JSON-facing schema.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{rho0_from_reference, rho_from_totals};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// `10^(dB/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10·log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// `10^((dBm − 30)/10)` watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Power in dBm for a value in watts.
pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Radar parameters in linear units. Construct directly via [`LinkBudget::new`]
/// or from the dB-facing [`LinkBudgetConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    gain: f64,
    effective_area_m2: f64,
    rcs_m2: f64,
    tx_power_w: f64,
    noise_power_w: f64,
    rho0: f64,
}

impl LinkBudget {
    /// All quantities linear and positive; `rho0` defaults to 1.
    pub fn new(
        gain: f64,
        effective_area_m2: f64,
        rcs_m2: f64,
        tx_power_w: f64,
        noise_power_w: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("gain", gain),
            ("effective_area_m2", effective_area_m2),
            ("rcs_m2", rcs_m2),
            ("tx_power_w", tx_power_w),
            ("noise_power_w", noise_power_w),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(Self {
            gain,
            effective_area_m2,
            rcs_m2,
            tx_power_w,
            noise_power_w,
            rho0: 1.0,
        })
    }

    /// Replace the system-limited maximum correlation (`0 < rho0 ≤ 1`).
    pub fn with_rho0(mut self, rho0: f64) -> Result<Self> {
        if !(rho0.is_finite() && rho0 > 0.0 && rho0 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho0 must lie in (0, 1], got {rho0}"
            )));
        }
        self.rho0 = rho0;
        Ok(self)
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn effective_area_m2(&self) -> f64 {
        self.effective_area_m2
    }

    pub fn rcs_m2(&self) -> f64 {
        self.rcs_m2
    }

    pub fn tx_power_w(&self) -> f64 {
        self.tx_power_w
    }

    pub fn noise_power_w(&self) -> f64 {
        self.noise_power_w
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    /// One-way propagation factor `κ = G·A_e·σ/((4π)²·R⁴)` at `range_m`.
    fn kappa(&self, range_m: f64) -> f64 {
        self.gain * self.effective_area_m2 * self.rcs_m2
            / (FOUR_PI * FOUR_PI * range_m.powi(4))
    }
}

/// JSON schema for a link budget: gains in dB, powers in dBm, areas in m².
///
/// ```json
/// {
///   "gain_db": 30.0,
///   "effective_area_m2": 0.081,
///   "rcs_m2": 1.0,
///   "tx_power_dbm": 18.0,
///   "noise_power_dbm": -94.0,
///   "rho0": 0.99
/// }
/// ```
///
/// `rho0` is optional and defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudgetConfig {
    pub gain_db: f64,
    pub effective_area_m2: f64,
    pub rcs_m2: f64,
    pub tx_power_dbm: f64,
    pub noise_power_dbm: f64,
    #[serde(default)]
    pub rho0: Option<f64>,
}

impl TryFrom<LinkBudgetConfig> for LinkBudget {
    type Error = Error;

    fn try_from(cfg: LinkBudgetConfig) -> Result<Self> {
        LinkBudget::new(
            db_to_linear(cfg.gain_db),
            cfg.effective_area_m2,
            cfg.rcs_m2,
            dbm_to_watts(cfg.tx_power_dbm),
            dbm_to_watts(cfg.noise_power_dbm),
        )?
        .with_rho0(cfg.rho0.unwrap_or(1.0))
    }
}

/// The pair `(ρ₀, R_c)` that fully determines the range law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeProfile {
    rho0: f64,
    r_c_m: f64,
}

impl RangeProfile {
    pub fn new(rho0: f64, r_c_m: f64) -> Result<Self> {
        if !(rho0.is_finite() && rho0 > 0.0 && rho0 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho0 must lie in (0, 1], got {rho0}"
            )));
        }
        if !(r_c_m.is_finite() && r_c_m > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "characteristic range must be positive, got {r_c_m}"
            )));
        }
        Ok(Self { rho0, r_c_m })
    }

    /// Profile implied by a link budget: `ρ₀` from the budget,
    /// `R_c` from [`characteristic_range`].
    pub fn from_budget(budget: &LinkBudget) -> Self {
        Self {
            rho0: budget.rho0(),
            r_c_m: characteristic_range(budget),
        }
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn r_c_m(&self) -> f64 {
        self.r_c_m
    }
}

/// Characteristic range `R_c = (G·A_e·σ·P2/((4π)²·P_n))^¼` in meters —
/// the range at which SNR = 1 and ρ falls to `ρ₀/√2`.
pub fn characteristic_range(budget: &LinkBudget) -> f64 {
    (budget.gain * budget.effective_area_m2 * budget.rcs_m2 * budget.tx_power_w
        / (FOUR_PI * FOUR_PI * budget.noise_power_w))
        .powf(0.25)
}

/// Characteristic range under the single-`4π` spreading convention used by
/// some forms of the range equation: larger than [`characteristic_range`]
/// by the constant factor `(4π)^¼ ≈ 1.8828`. Reported alongside the
/// canonical value so results can be compared against sources that use the
/// other convention.
pub fn characteristic_range_4pi(budget: &LinkBudget) -> f64 {
    (budget.gain * budget.effective_area_m2 * budget.rcs_m2 * budget.tx_power_w
        / (FOUR_PI * budget.noise_power_w))
        .powf(0.25)
}

/// Received total power and received noise power at a given range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReceivedPowers {
    /// `P1 = κ·P2 + P_n`.
    pub p1_w: f64,
    /// `Pn1 = κ·pn2 + P_n`.
    pub pn1_w: f64,
}

/// Propagate transmit power and reference-channel noise power `pn2` through
/// the range equation at `range_m`.
pub fn received_powers(
    budget: &LinkBudget,
    pn2_w: f64,
    range_m: f64,
) -> Result<ReceivedPowers> {
    if !(range_m.is_finite() && range_m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "range must be positive, got {range_m}"
        )));
    }
    if !(pn2_w.is_finite() && pn2_w >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "pn2 must be non-negative, got {pn2_w}"
        )));
    }
    let kappa = budget.kappa(range_m);
    Ok(ReceivedPowers {
        p1_w: kappa * budget.tx_power_w + budget.noise_power_w,
        pn1_w: kappa * pn2_w + budget.noise_power_w,
    })
}

/// The range law `ρ(R) = ρ₀/√(1 + (R/R_c)⁴)`: strictly decreasing, equal to
/// `ρ₀` at `R = 0` and to `ρ₀/√2` at `R = R_c`.
pub fn rho_at_range(profile: &RangeProfile, range_m: f64) -> Result<f64> {
    if !(range_m.is_finite() && range_m >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "range must be non-negative, got {range_m}"
        )));
    }
    let ratio = range_m / profile.r_c_m;
    Ok(profile.rho0 / (1.0 + ratio.powi(4)).sqrt())
}

/// Single-pulse SNR `(R_c/R)⁴`. Diverges at `R = 0`, so zero range is an
/// error rather than infinity.
pub fn snr_at_range(profile: &RangeProfile, range_m: f64) -> Result<f64> {
    if !(range_m.is_finite() && range_m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "range must be positive, got {range_m}"
        )));
    }
    Ok((profile.r_c_m / range_m).powi(4))
}

/// Compute ρ at range through the full power-propagation chain — reference
/// noise → `ρ₀`, range equation → `(P1, Pn1)`, totals → ρ — rather than
/// through the closed-form range law. Agrees with [`rho_at_range`] to
/// floating-point accuracy for every valid input; the identity is the range
/// model's central correctness check.
pub fn rho_range_consistency(budget: &LinkBudget, pn2_w: f64, range_m: f64) -> Result<f64> {
    // validates 0 <= pn2 <= P2 as a side effect
    let _rho0 = rho0_from_reference(budget.tx_power_w, pn2_w)?;
    let powers = received_powers(budget, pn2_w, range_m)?;
    rho_from_totals(powers.p1_w, budget.tx_power_w, powers.pn1_w, pn2_w)
}
