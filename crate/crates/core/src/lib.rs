//! Link-level model of a microfluidic molecular-communication channel that is
//! read out by a receptor-functionalized silicon-nanowire bioFET.
//!
//! Starting from physical parameters alone (channel geometry, flow, ligand
//! kinetics, electrolyte, transducer stack, FET bias), the crate computes the
//! received-signal statistics through the chain
//! transport → receptor binding → charge transduction → FET current,
//! the output-referred noise spectrum (binding Lorentzian + 1/f), the output
//! SNR, and the closed-form symbol error probability of M-ary concentration
//! shift keying under per-adjacent-pair ML thresholds.
//!
//! Every closed form is cross-validated by an independent numerical oracle
//! (ODE integration, Monte Carlo, adaptive quadrature, root finding); see
//! [`oracles`] and the `acceptance` integration test.

pub mod binding;
pub mod config;
pub mod consts;
pub mod detection;
pub mod error;
pub mod fet_output;
pub mod link;
pub mod oracles;
pub mod special;
pub mod sweep;
pub mod transducer;
pub mod transport;

pub use error::{Error, Result};
