//! Exact and Monte Carlo evaluation of the HCIZ and BGW unitary matrix
//! integrals through their string and character expansions, together with
//! the monotone Hurwitz numbers that appear in their genus expansion.

pub mod characters;
pub mod error;
pub mod haarmc;
pub mod integrals;
pub mod monotone;
pub mod par;
pub mod partitions;
pub mod plancherel;
pub mod scalar;
pub mod stringseries;

pub use error::{Error, Result};
pub use par::Execution;
pub use partitions::Partition;
pub use stringseries::{SeriesKind, StringSeries};
