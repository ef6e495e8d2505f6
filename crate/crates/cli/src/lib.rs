//! Command-line driver internals: problem-document ingestion, curve
//! emission, reference figures, and the acceptance harness.

pub mod doc;
pub mod emit;
pub mod figures;
pub mod solve;
pub mod validate;
