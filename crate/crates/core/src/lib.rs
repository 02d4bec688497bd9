//! Blocked order-of-addition (OofA) designs.
//!
//! An OofA experiment runs `m` components in some order; a run records the
//! position `z_j` at which component `j` was added. This crate builds and
//! evaluates blocked OofA designs:
//!
//! - [`galois`] and [`latin`]: finite fields and the candidate Latin squares
//!   and component orthogonal arrays they generate.
//! - [`contrasts`], [`indicator`] and [`wlp`]: orthogonal polynomial
//!   contrasts, indicator-function spectra and word length patterns.
//! - [`construct`]: COA stacking plus randomized LS and row exchange.
//! - [`stats`]: model matrices, least squares, forward selection and
//!   column correlations.
//! - [`simulate`]: power / type I error simulation and the five-drug case
//!   study.
//!
//! ```
//! use oofa::{construct, wlp, SearchBudget};
//!
//! let result = construct::construct(5, 3, 20, &SearchBudget::default()).unwrap();
//! let w = wlp::wlp(&result.design).unwrap();
//! assert!((w.p(2) - 0.625).abs() < 1e-9);
//! ```

pub mod construct;
pub mod contrasts;
pub mod design;
pub mod error;
pub mod fixtures;
pub mod galois;
pub mod indicator;
pub mod latin;
pub mod simulate;
pub mod stats;
pub mod wlp;

pub use construct::{ConstructionResult, SearchBudget};
pub use contrasts::ContrastTable;
pub use design::{AnyDesign, BlockOofaDesign, DesignFile, DesignShape, OofaDesign, Violation};
pub use error::{Error, Result};
pub use galois::GaloisField;
pub use indicator::IndicatorSpectrum;
pub use latin::{CandidateSet, ComponentOrthogonalArray, LatinSquare};
pub use wlp::WordLengthPattern;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20240501;
