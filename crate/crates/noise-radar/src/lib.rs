//! Detection performance of coherent noise radars, predicted and validated
//! through the correlation coefficient ρ between the received and reference
//! signals.
//!
//! The library covers the full chain:
//!
//! 1. [`model`] — the structured 4×4 covariance of the four voltage
//!    channels `(I1, Q1, I2, Q2)` and the power algebra relating signal and
//!    noise powers to ρ.
//! 2. [`synthesis`] — reproducible Gaussian voltage records drawn from a
//!    model covariance, and sample covariance estimation.
//! 3. [`estimator`] — recovery of `(P1, P2, ρ, φ)` from a sample covariance
//!    by constrained Frobenius-norm fitting, and threshold detection on ρ̂.
//! 4. [`range`] — the radar range equation, the characteristic range `R_c`,
//!    and the range law `ρ(R) = ρ₀/√(1 + (R/R_c)⁴)`.
//! 5. [`detection`] — the Marcum Q₁ function and closed-form ROC curves for
//!    the noise radar and a conventional coherent radar, composable with the
//!    range law.
//! 6. [`mc`] — a deterministic Monte Carlo harness that builds empirical ROC
//!    curves through the full synthesize → fit pipeline and quantifies their
//!    agreement with the closed form.
//!
//! Runnable walkthroughs for each capability live in `examples/`; the
//! `noise-radar` binary exposes the same operations as subcommands for
//! scripted experiments.
//!
//! All randomness is explicitly seeded (ChaCha12), so every result in the
//! crate is reproducible bit for bit.

pub mod cli;
pub mod detection;
pub mod error;
pub mod estimator;
pub mod mc;
pub mod model;
pub mod range;
pub mod synthesis;

pub use error::{Error, Result};
pub use estimator::{detect, fit, Detection, FitResult};
pub use model::{
    rho0_from_reference, rho_from_totals, CouplingKind, QtmsCovariance, SignalDecomposition,
};
pub use range::{LinkBudget, LinkBudgetConfig, RangeProfile};
pub use synthesis::{sample_covariance, synthesize, SampleBlock};
