//! Supplementary difference sets over `Z_v` and periodic complementary
//! sequences.
//!
//! * [`seqcore`]: sequences, subsets, PAF/DFT/PSD, parameters and exact
//!   verification.
//! * [`compress`]: `m`-compression and the constants and multiplicities it
//!   preserves.
//! * [`enumerate`]: fixed-content necklaces, bracelets and charmed bracelets.
//! * [`search`]: PSD filtering, PAF matching, lifting and the two-block
//!   existence decision.
//! * [`catalog`]: feasible parameters, shipped witnesses, witness files and
//!   report tables.

pub mod catalog;
pub mod compress;
pub mod enumerate;
pub mod error;
pub mod search;
pub mod seqcore;

pub use catalog::{ParamRecord, ParamStatus, WitnessRecord, WitnessSource};
pub use compress::{CompressionSpec, Content, ContentCase, Multiplicities};
pub use enumerate::{ClassStream, EquivMode};
pub use error::{Result, SdsError};
pub use search::{ExistenceResult, SearchOptions, SearchReport, Status, Strategy};
pub use seqcore::{ConstantsPair, PafVector, SdsParams, Sequence, SpectrumVector, Subset};
