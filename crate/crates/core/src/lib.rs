//! Biordered sets of idempotents in finite regular rings and semigroups.

pub mod biorder;
pub mod bits;
pub mod complement;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod pipeline;
pub mod report;
pub mod ring;
pub mod semigroup;
pub mod sequences;

pub use error::{Error, Result};
