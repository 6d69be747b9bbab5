//! er2rel compiles a small entity-relationship modeling DSL into an
//! annotated relational schema.
//!
//! The pipeline has three stages:
//!
//! 1. [`parse`] turns DSL text into an [`model::ERModel`], keeping source
//!    spans for diagnostics;
//! 2. [`transform::transform`] validates the model and rewrites it into a
//!    [`transform::Schema`], applying one step per declaration — regular
//!    entity types, then subtypes, then relationship types (see
//!    [`transform`] for the step table);
//! 3. [`render`] prints the schema as bracketed text notation, as a stable
//!    JSON document, or as SQL DDL.
//!
//! Every stage is a pure function over immutable inputs: equal inputs
//! produce byte-equal outputs.

pub mod classify;
pub mod cli;
pub mod diag;
pub mod fixtures;
mod lexer;
pub mod model;
pub mod parser;
pub mod printer;
pub mod render;
pub mod transform;
pub mod validate;

pub use parser::{parse, ParseResult};
pub use printer::format_model;
