//! The bracketed text notation: one `Name[attr, attr, ...]` line per
//! relation.
//!
//! Embedded foreign-key suffixes render as `(RelName, a, b, c)` and pair
//! suffixes as `(a, b)`, with `n` for unbounded. With
//! [`PkMarker::Underscore`] each key attribute's full display name is
//! wrapped as `_Name_` to stand in for underlining; the default marker
//! renders the plain strings.

use std::fmt::Write as _;

use crate::model::{FkAnnotation, Relation};
use crate::transform::Schema;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PkMarker {
    #[default]
    None,
    Underscore,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TextOptions {
    pub pk_marker: PkMarker,
}

pub fn render_text(schema: &Schema, options: &TextOptions) -> String {
    let mut out = String::new();
    for relation in &schema.relations {
        writeln!(out, "{}", relation_line(relation, options)).unwrap();
    }
    out
}

/// One relation as a single line of text notation.
pub fn relation_line(relation: &Relation, options: &TextOptions) -> String {
    let attrs: Vec<String> = relation
        .attributes
        .iter()
        .map(|a| {
            let mut s = a.display_name();
            if a.pk && options.pk_marker == PkMarker::Underscore {
                s = format!("_{s}_");
            }
            if let Some(annotation) = a.fk.as_ref().and_then(|fk| fk.annotation.as_ref()) {
                s.push_str(&annotation_text(annotation));
            }
            s
        })
        .collect();
    format!("{}[{}]", relation.name, attrs.join(", "))
}

pub(crate) fn annotation_text(annotation: &FkAnnotation) -> String {
    match annotation {
        FkAnnotation::Embedded {
            rel_name,
            near_min,
            far_min,
            far_max,
        } => format!("({rel_name}, {near_min}, {far_min}, {far_max})"),
        FkAnnotation::Pair { min, max } => format!("({min}, {max})"),
    }
}
