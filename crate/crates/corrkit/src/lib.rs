//! corrkit: exactly computable nonlocal-correlation measures for discrete
//! multipartite density matrices.
//!
//! The library computes correlance, diagonal correlance, discordance,
//! diagonal discordance, strong discordance, and their multipartite
//! (partitional) generalizations, for arbitrary mixed or pure states. It
//! also ships the classical-data ingestion pipeline that turns N-variable
//! sample data into a diagonal multipartite histogram state, the
//! decomposition-level statance/probablance machinery, a multipartite
//! Bloch-vector toolkit, and seeded benchmark-state generators.
//!
//! All operations are pure functions on immutable values and safe to call
//! concurrently.

pub mod bloch;
pub mod classical;
pub mod decomp;
pub mod error;
pub mod io;
pub mod measures;
pub mod partitions;
pub mod randgen;
pub mod state;

pub use error::{CorrkitError, Result, Violation};
pub use measures::{MeasureKind, MeasureResult, NormalizationReport};
pub use state::{CMatrix, DensityMatrix, ModeStructure, Spectrum, Tolerances};
