//! Secrecy degrees of freedom and secrecy rates for MIMO wiretap channels
//! with a full-duplex active eavesdropper.
//!
//! Alice sends a confidential message to Bob while Eve, a full-duplex
//! adversary, splits her antennas between jamming the legitimate link and
//! eavesdropping. Bob defends by splitting his own antennas between
//! receiving and jamming back at Eve. The crate provides:
//!
//! - closed-form S.D.o.F. expressions for any antenna split, the optimal
//!   split, and the worst-case Eve strategy, together with exhaustive-search
//!   oracles and grid verification ([`dof`], [`verify`]);
//! - the complex linear algebra the transmit designs need: null-space
//!   bases, a Hermitian-definite generalized eigensolver, log-det rate
//!   evaluation ([`numerics`]);
//! - random channel generation with path loss and imperfect CSI, seeded by
//!   a deterministic counter-based scheme ([`channel`]);
//! - the null-space / alignment precoder construction and a half-duplex
//!   baseline ([`precoding`]);
//! - Monte-Carlo secrecy-rate simulation over position / self-interference
//!   / CSI-quality / power sweeps ([`simulator`]).

pub mod channel;
pub mod dof;
pub mod numerics;
pub mod precoding;
pub mod simulator;
pub mod verify;

pub use dof::{AntennaConfig, DofResult, HelperConfig};

use thiserror::Error;

/// Errors surfaced by this crate, grouped by how callers should react:
/// configuration and dimension errors are caller bugs or bad inputs,
/// numerical errors are factorization failures on pathological matrices,
/// simulation errors mean a scenario produced too many failed trials.
#[derive(Debug, Error)]
pub enum SdofError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("simulation failure: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, SdofError>;
