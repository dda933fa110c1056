//! Stable-like Lévy process on the compact support subgroup of an infinite
//! tamely ramified p-adic extension tower.
//!
//! The crate builds the tower exactly (rational monomial bases, structural
//! embeddings, exact traces), enumerates the finite quotient groups and their
//! duals, evaluates the jump measure and its closed-form totals, checks the
//! exact identities connecting them, and estimates path statistics (exit
//! times, occupation ratios, dimension and φ-measure sums) by simulation.

pub mod analyze;
pub mod character;
pub mod config;
pub mod coset;
pub mod dual;
pub mod enumerate;
pub mod levy;
pub mod par;
pub mod report;
pub mod simulate;
pub mod stats;
pub mod verify;
pub mod element;
pub mod error;
pub mod tower;

pub use config::TowerConfig;
pub use coset::Coset;
pub use dual::{DualIndex, PairingTable};
pub use enumerate::EnumTables;
pub use levy::{BnSequence, ExactLevel, LevyTable};
pub use element::FieldElement;
pub use error::{Error, Result};
pub use simulate::{DeltaCache, ExitStats, PathRecord, StopRule};
pub use tower::TowerSpec;
