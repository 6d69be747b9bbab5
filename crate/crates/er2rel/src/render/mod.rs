//! Output renderers: bracketed text notation, JSON, and SQL DDL.

mod sql;
mod structured;
mod text;

pub use sql::render_sql;
pub use structured::{parse_structured, render_structured, FORMAT_TAG};
pub use text::{relation_line, render_text, PkMarker, TextOptions};
