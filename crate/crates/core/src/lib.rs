//! Exact quench dynamics of the spin-1/2 transverse-field XY chain and the
//! nearest-neighbour quantum correlations that follow from it.
//!
//! The free-fermion engine ([`quench`], [`steady`], [`spectral`]) scales to
//! thousands of sites; [`oracle`] is a dense exact-diagonalization reference
//! for small chains, written without any of the engine's algebra.

pub mod error;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod quench;
pub mod spectral;
pub mod steady;

pub use error::{Error, Result};
pub use measures::{assemble_xstate, concurrence, quantum_discord, QcValues, XStateDensity};
pub use model::{ChainParams, ModeData};
pub use quench::{MiddleQuench, PairCorrelators, QuenchEngine, QuenchProtocol};
