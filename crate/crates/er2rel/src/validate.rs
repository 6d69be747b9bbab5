//! Model validation.
//!
//! `validate` re-checks every model invariant the parser establishes, so
//! programmatically built models get the same guarantees as parsed ones,
//! and adds the semantic checks the transformation steps rely on.

use std::collections::{HashMap, HashSet};

use crate::diag::{DiagCode, Diagnostic};
use crate::model::{Cardinality, ERModel};

/// Check every model invariant and return all violations. Errors abort
/// schema emission downstream; warnings do not.
pub fn validate(model: &ERModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    check_namespace(model, &mut diags);
    check_entities(model, &mut diags);
    check_subtypes(model, &mut diags);
    check_subtype_cycles(model, &mut diags);
    check_relationships(model, &mut diags);
    diags
}

fn is_valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_identifier(name: &str, what: &str, span: Option<crate::diag::SourceSpan>, diags: &mut Vec<Diagnostic>) {
    if !is_valid_identifier(name) {
        diags.push(
            Diagnostic::error(
                DiagCode::InvalidIdentifier,
                format!("invalid {what} name '{name}'"),
            )
            .at(span),
        );
    }
}

// Entity, subtype, and relationship names share one namespace.
fn check_namespace(model: &ERModel, diags: &mut Vec<Diagnostic>) {
    let mut seen: HashSet<&str> = HashSet::new();
    let names = model
        .entities
        .iter()
        .map(|e| (e.name.as_str(), "entity type", e.span))
        .chain(
            model
                .subtypes
                .iter()
                .map(|s| (s.name.as_str(), "subtype", s.span)),
        )
        .chain(
            model
                .relationships
                .iter()
                .map(|r| (r.name.as_str(), "relationship type", r.span)),
        );
    for (name, what, span) in names {
        check_identifier(name, what, span, diags);
        if !seen.insert(name) {
            diags.push(
                Diagnostic::error(DiagCode::DuplicateName, format!("duplicate name '{name}'"))
                    .at(span),
            );
        }
    }
}

fn check_entities(model: &ERModel, diags: &mut Vec<Diagnostic>) {
    for e in &model.entities {
        let mut attr_names: HashSet<&str> = HashSet::new();
        for a in &e.attributes {
            check_identifier(&a.name, "attribute", a.span, diags);
            if !attr_names.insert(&a.name) {
                diags.push(
                    Diagnostic::error(
                        DiagCode::DuplicateAttribute,
                        format!("duplicate attribute '{}' in entity type '{}'", a.name, e.name),
                    )
                    .at(a.span.or(e.span)),
                );
            }
        }
        if e.pk.is_empty() {
            diags.push(
                Diagnostic::error(
                    DiagCode::MissingKey,
                    format!("entity type '{}' declares no key attribute", e.name),
                )
                .at(e.span),
            );
        }
        let mut pk_seen: HashSet<&str> = HashSet::new();
        for k in &e.pk {
            if e.attribute(k).is_none() {
                diags.push(
                    Diagnostic::error(
                        DiagCode::UnknownKeyAttribute,
                        format!("key attribute '{k}' is not an attribute of entity type '{}'", e.name),
                    )
                    .at(e.span),
                );
            }
            if !pk_seen.insert(k) {
                diags.push(
                    Diagnostic::error(
                        DiagCode::DuplicateAttribute,
                        format!("key attribute '{k}' listed twice in entity type '{}'", e.name),
                    )
                    .at(e.span),
                );
            }
        }
    }
}

fn check_subtypes(model: &ERModel, diags: &mut Vec<Diagnostic>) {
    for s in &model.subtypes {
        if !model.is_entity(&s.supertype) && !model.is_subtype(&s.supertype) {
            let message = if model.relationships.iter().any(|r| r.name == s.supertype) {
                format!(
                    "reference '{}' names a relationship type; expected an entity type or subtype",
                    s.supertype
                )
            } else {
                format!("unresolved reference '{}'", s.supertype)
            };
            diags.push(Diagnostic::error(DiagCode::UnresolvedReference, message).at(s.span));
        }
        let mut own: HashSet<&str> = HashSet::new();
        for a in &s.attributes {
            check_identifier(&a.name, "attribute", a.span, diags);
            if !own.insert(&a.name) {
                diags.push(
                    Diagnostic::error(
                        DiagCode::DuplicateAttribute,
                        format!("duplicate attribute '{}' in subtype '{}'", a.name, s.name),
                    )
                    .at(a.span.or(s.span)),
                );
            }
        }
        // Own attributes must not shadow the key inherited from the root.
        if let Some(root) = model.root_entity(&s.name) {
            for a in &s.attributes {
                if root.pk.contains(&a.name) {
                    diags.push(
                        Diagnostic::error(
                            DiagCode::AttributeShadowsKey,
                            format!(
                                "attribute '{}' of subtype '{}' collides with the inherited key of '{}'",
                                a.name, s.name, root.name
                            ),
                        )
                        .at(a.span.or(s.span)),
                    );
                }
            }
        }
    }
}

// Report each subtype cycle once, at its first-declared member.
fn check_subtype_cycles(model: &ERModel, diags: &mut Vec<Diagnostic>) {
    let mut settled: HashSet<&str> = HashSet::new();
    for s in &model.subtypes {
        if settled.contains(s.name.as_str()) {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut positions: HashMap<&str, usize> = HashMap::new();
        let mut current: &str = &s.name;
        loop {
            if let Some(&start) = positions.get(current) {
                let cycle = &path[start..];
                diags.push(
                    Diagnostic::error(
                        DiagCode::SubtypeCycle,
                        format!("subtype cycle: {} -> {}", cycle.join(" -> "), current),
                    )
                    .at(model.subtype(cycle[0]).and_then(|x| x.span)),
                );
                break;
            }
            if settled.contains(current) || model.is_entity(current) {
                break;
            }
            let Some(sub) = model.subtype(current) else {
                break; // unresolved supertype, reported elsewhere
            };
            positions.insert(current, path.len());
            path.push(current);
            current = &sub.supertype;
        }
        settled.extend(path);
    }
}

fn check_relationships(model: &ERModel, diags: &mut Vec<Diagnostic>) {
    for r in &model.relationships {
        if r.participations.len() < 2 {
            diags.push(
                Diagnostic::error(
                    DiagCode::TooFewParticipants,
                    format!("relationship '{}' needs at least two participations", r.name),
                )
                .at(r.span),
            );
            continue;
        }

        let mut attr_names: HashSet<&str> = HashSet::new();
        for a in &r.attributes {
            check_identifier(&a.name, "attribute", a.span, diags);
            if !attr_names.insert(&a.name) {
                diags.push(
                    Diagnostic::error(
                        DiagCode::DuplicateAttribute,
                        format!("duplicate attribute '{}' in relationship '{}'", a.name, r.name),
                    )
                    .at(a.span.or(r.span)),
                );
            }
        }

        for p in &r.participations {
            if let Some(role) = &p.role {
                check_identifier(role, "role", p.span, diags);
            }
            if !model.is_entity(&p.target) && !model.is_subtype(&p.target) {
                let message = if model.relationships.iter().any(|x| x.name == p.target) {
                    format!(
                        "reference '{}' names a relationship type; expected an entity type or subtype",
                        p.target
                    )
                } else {
                    format!("unresolved reference '{}'", p.target)
                };
                diags.push(Diagnostic::error(DiagCode::UnresolvedReference, message).at(p.span));
                continue;
            }
            match p.max {
                Cardinality::Finite(0) => {
                    diags.push(
                        Diagnostic::error(
                            DiagCode::ZeroMax,
                            format!("max cardinality must be at least 1 for '{}'", p.target),
                        )
                        .at(p.span),
                    );
                }
                Cardinality::Finite(m) if p.min > m => {
                    diags.push(
                        Diagnostic::error(
                            DiagCode::MinExceedsMax,
                            format!("min {} exceeds max {m} for '{}'", p.min, p.target),
                        )
                        .at(p.span),
                    );
                }
                _ => {}
            }
            // Foreign keys are single-column, so a participant's root key
            // must be a single attribute.
            if let Some(root) = model.root_entity(&p.target) {
                if root.pk.len() > 1 {
                    diags.push(
                        Diagnostic::error(
                            DiagCode::CompositeKeyParticipant,
                            format!(
                                "'{}' has a composite key and cannot participate in relationship '{}'",
                                p.target, r.name
                            ),
                        )
                        .at(p.span),
                    );
                }
            }
        }

        if r.participations.len() == 2 {
            check_binary_host_max(model, r, diags);
        }

        // A many-to-many or n-ary relationship becomes a relation named
        // after itself; point out the post-transformation collision that
        // accompanies a namespace violation.
        let creates_relation = r.participations.len() > 2
            || r.participations
                .iter()
                .filter(|p| p.max.is_one())
                .count()
                == 0;
        if creates_relation
            && (model.is_entity(&r.name) || model.is_subtype(&r.name))
        {
            diags.push(
                Diagnostic::warning(
                    DiagCode::PostTransformCollision,
                    format!(
                        "relationship '{}' would create a relation whose name collides with the relation for '{}' after transformation",
                        r.name, r.name
                    ),
                )
                .at(r.span),
            );
        }
    }
}

// The classification rules require max = 1 on the foreign-key host side of
// every 1:1 and 1:N relationship; an unbounded max cannot sit there.
fn check_binary_host_max(model: &ERModel, r: &crate::model::RelationshipType, diags: &mut Vec<Diagnostic>) {
    let a = &r.participations[0];
    let b = &r.participations[1];
    let ones = usize::from(a.max.is_one()) + usize::from(b.max.is_one());
    let host = match ones {
        2 => crate::classify::choose_host(r),
        1 => {
            if a.max.is_one() {
                0
            } else {
                1
            }
        }
        _ => return, // many-to-many: no host side
    };
    let host_p = &r.participations[host];
    if !host_p.max.is_one() {
        diags.push(
            Diagnostic::error(
                DiagCode::HostMaxNotOne,
                format!(
                    "host side '{}' of relationship '{}' must have max 1, found {}",
                    host_p.target, r.name, host_p.max
                ),
            )
            .at(host_p.span),
        );
    }
    let _ = model;
}
