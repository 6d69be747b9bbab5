//! Relationship classification and host selection.
//!
//! A binary relationship type is classified by its maximum cardinalities
//! alone: both 1 is one-to-one, exactly one 1 is one-to-many (the side with
//! maximum 1 hosts the foreign key), anything else is many-to-many. Three or
//! more participants make it n-ary. The step is then selected by whether
//! each participant is a regular entity type or a subtype.

use crate::diag::{DiagCode, Diagnostic};
use crate::model::{CardinalityClass, ERModel, RelationshipType, StepKind};

/// Classify `rel` and pick the step that transforms it.
///
/// N-ary relationship types are only supported among regular entity types;
/// a subtype participant is an error.
pub fn classify(
    rel: &RelationshipType,
    model: &ERModel,
) -> Result<(CardinalityClass, StepKind), Diagnostic> {
    if rel.participations.len() > 2 {
        if rel
            .participations
            .iter()
            .any(|p| model.is_subtype(&p.target))
        {
            return Err(Diagnostic::error(
                DiagCode::NaryWithSubtype,
                format!(
                    "unsupported: n-ary with subtype participant (relationship '{}')",
                    rel.name
                ),
            )
            .at(rel.span));
        }
        return Ok((CardinalityClass::NAry, StepKind::Thg));
    }

    let a = &rel.participations[0];
    let b = &rel.participations[1];
    let sub_a = model.is_subtype(&a.target);
    let sub_b = model.is_subtype(&b.target);

    let class = match (a.max.is_one(), b.max.is_one()) {
        (true, true) => CardinalityClass::OneOne,
        (true, false) | (false, true) => CardinalityClass::OneMany,
        (false, false) => CardinalityClass::ManyMany,
    };

    let step = match (class, sub_a, sub_b) {
        (CardinalityClass::OneOne, true, true) => StepKind::Sos,
        // Mixed 1:1 is handled with the same host rules as the
        // regular/regular case; the transform attaches a warning.
        (CardinalityClass::OneOne, _, _) => StepKind::Gog,
        (CardinalityClass::OneMany, true, true) => StepKind::Sns,
        (CardinalityClass::OneMany, false, false) => StepKind::Gng,
        (CardinalityClass::OneMany, _, _) => StepKind::Sng,
        (CardinalityClass::ManyMany, true, true) => StepKind::Sms,
        (CardinalityClass::ManyMany, false, false) => StepKind::Gmg,
        (CardinalityClass::ManyMany, _, _) => StepKind::Smg,
        (CardinalityClass::NAry, _, _) => unreachable!("binary handled above"),
    };

    Ok((class, step))
}

/// Pick the host participation of a one-to-one relationship type.
///
/// The participation with a non-zero minimum (a total participation) is
/// preferred; when both or neither qualify, the first-declared participation
/// wins. Returns the index into `rel.participations`.
pub fn choose_host(rel: &RelationshipType) -> usize {
    let a_total = rel.participations[0].min > 0;
    let b_total = rel.participations[1].min > 0;
    match (a_total, b_total) {
        (false, true) => 1,
        _ => 0,
    }
}

/// Index of the N-side participation of a one-to-many relationship type:
/// the side with maximum 1, whose relation receives the foreign key.
pub fn n_side_index(rel: &RelationshipType) -> usize {
    rel.participations
        .iter()
        .position(|p| p.max.is_one())
        .expect("a one-to-many relationship has a side with max 1")
}
