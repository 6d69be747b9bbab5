//! The transformation pipeline: rewrite an ER model into an ordered list of
//! relations.
//!
//! The pipeline is deterministic. Regular entity types become relations
//! first (declaration order), then subtypes (supertypes first, declaration
//! order among peers), then each relationship type is dispatched in
//! declaration order to the step selected by [`classify`]:
//!
//! | step | relationship type |
//! |------|-------------------|
//! | GOG  | 1:1 between regular entity types |
//! | GNG  | 1:N between regular entity types (extension, warned) |
//! | GMG  | M:N between regular entity types |
//! | SNG  | 1:N between a subtype and a regular entity type |
//! | SMG  | M:N between a subtype and a regular entity type |
//! | SOS  | 1:1 between subtypes |
//! | SNS  | 1:N between subtypes |
//! | SMS  | M:N between subtypes |
//! | THG  | ternary and higher among regular entity types |
//!
//! 1:1 and 1:N steps embed an annotated foreign key into the host relation;
//! M:N and n-ary steps create a new relation named after the relationship.
//! Foreign keys drawn from a subtype relation are display-prefixed
//! `Subtype~Key`; a role label on the participation replaces that prefix.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::classify::{choose_host, classify, n_side_index};
use crate::diag::{DiagCode, Diagnostic};
use crate::model::{
    AttributeDef, ERModel, EntityType, FkAnnotation, FkDescriptor, Participation, RelAttribute,
    Relation, RelationshipType, StepKind, Subtype,
};
use crate::validate::validate;

/// The output schema: relations in creation order plus a record of which
/// step produced each relation and each embedded attribute.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    pub relations: Vec<Relation>,
    pub provenance: Provenance,
}

impl Schema {
    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    fn relation_mut(&mut self, name: &str) -> Option<&mut Relation> {
        self.relations.iter_mut().find(|r| r.name == name)
    }

    fn insert(&mut self, relation: Relation, step: StepKind) {
        self.provenance
            .relations
            .insert(relation.name.clone(), step);
        self.relations.push(relation);
    }
}

/// Step attribution. `relations` maps every relation to the step that
/// created it; `attributes` records only attributes appended into an
/// existing relation (everything else was produced by its relation's step).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub relations: BTreeMap<String, StepKind>,
    pub attributes: BTreeMap<String, BTreeMap<String, StepKind>>,
}

/// Outcome of [`transform`]: the schema is present exactly when no error
/// diagnostic was produced.
#[derive(Debug)]
pub struct TransformResult {
    pub schema: Option<Schema>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Validate `model` and apply every transformation step.
///
/// All relations are kept, including subtype relations that only serve as
/// foreign-key targets; dropping them would break referential closure.
pub fn transform(model: &ERModel) -> TransformResult {
    let mut diagnostics = validate(model);
    if diagnostics.iter().any(Diagnostic::is_error) {
        return TransformResult {
            schema: None,
            diagnostics,
        };
    }

    let mut schema = Schema::default();
    for entity in &model.entities {
        schema.insert(step_reg(entity), StepKind::Reg);
    }
    for subtype in subtype_order(model) {
        schema.insert(step_sub(subtype, model), StepKind::Sub);
    }
    for rel in &model.relationships {
        match classify(rel, model) {
            Err(d) => diagnostics.push(d),
            Ok((_, step)) => {
                let step_diags = match step {
                    StepKind::Gog => step_gog(rel, model, &mut schema),
                    StepKind::Gng => step_gng(rel, model, &mut schema),
                    StepKind::Gmg => step_gmg(rel, model, &mut schema),
                    StepKind::Sng => step_sng(rel, model, &mut schema),
                    StepKind::Smg => step_smg(rel, model, &mut schema),
                    StepKind::Sos => step_sos(rel, model, &mut schema),
                    StepKind::Sns => step_sns(rel, model, &mut schema),
                    StepKind::Sms => step_sms(rel, model, &mut schema),
                    StepKind::Thg => step_thg(rel, model, &mut schema),
                    // classify never selects the base steps
                    StepKind::Reg | StepKind::Sub => Vec::new(),
                };
                diagnostics.extend(step_diags);
            }
        }
    }

    if diagnostics.iter().any(Diagnostic::is_error) {
        TransformResult {
            schema: None,
            diagnostics,
        }
    } else {
        TransformResult {
            schema: Some(schema),
            diagnostics,
        }
    }
}

// Supertypes first; declaration order among peers.
fn subtype_order(model: &ERModel) -> Vec<&Subtype> {
    let mut ordered: Vec<&Subtype> = Vec::new();
    let mut emitted: HashSet<&str> = HashSet::new();
    let mut remaining: Vec<&Subtype> = model.subtypes.iter().collect();
    loop {
        let before = remaining.len();
        remaining.retain(|s| {
            let parent_ready =
                model.is_entity(&s.supertype) || emitted.contains(s.supertype.as_str());
            if parent_ready {
                emitted.insert(s.name.as_str());
                ordered.push(s);
                false
            } else {
                true
            }
        });
        if remaining.is_empty() || remaining.len() == before {
            // validation rejects cycles, so leftovers cannot occur for
            // validated models
            break;
        }
    }
    ordered
}

/// A regular entity type becomes a relation with its own attributes, keys
/// flagged, no foreign keys.
pub fn step_reg(entity: &EntityType) -> Relation {
    Relation {
        name: entity.name.clone(),
        attributes: entity
            .attributes
            .iter()
            .map(|a| RelAttribute {
                base_name: a.name.clone(),
                pk: entity.pk.contains(&a.name),
                fk: None,
                sql_type: a.sql_type.clone(),
            })
            .collect(),
    }
}

/// A subtype becomes a relation holding the key of the regular entity type
/// at the root of its supertype chain, then its own attributes. The key
/// doubles as a plain (unannotated) foreign key to the immediate supertype's
/// relation.
pub fn step_sub(subtype: &Subtype, model: &ERModel) -> Relation {
    let root = model
        .root_entity(&subtype.name)
        .expect("subtype chain resolves to a regular entity type");
    let mut attributes: Vec<RelAttribute> = root
        .pk
        .iter()
        .map(|key| {
            let def = root.attribute(key).expect("key attribute exists");
            RelAttribute {
                base_name: key.clone(),
                pk: true,
                fk: Some(FkDescriptor {
                    references: subtype.supertype.clone(),
                    referenced_pk: key.clone(),
                    prefix: None,
                    annotation: None,
                }),
                sql_type: def.sql_type.clone(),
            }
        })
        .collect();
    attributes.extend(subtype.attributes.iter().map(plain_attribute));
    Relation {
        name: subtype.name.clone(),
        attributes,
    }
}

/// 1:1 between regular entity types: embed an annotated foreign key into
/// the host relation picked by [`choose_host`], then the relationship's own
/// attributes. Also covers the mixed subtype/regular 1:1, with a warning.
pub fn step_gog(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    if mixed_participants(rel, model) {
        diags.push(
            Diagnostic::warning(
                DiagCode::MixedParticipants,
                format!(
                    "relationship '{}' is a 1:1 between a subtype and a regular entity type; applied step GOG host rules with subtype prefixing",
                    rel.name
                ),
            )
            .at(rel.span),
        );
    }
    diags.extend(embedded_step(rel, model, schema, StepKind::Gog, choose_host(rel)));
    diags
}

/// 1:N between regular entity types. Mirrors step SNG with the foreign key
/// hosted at the N-side; flagged as an extension every time it runs.
pub fn step_gng(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    let mut diags = vec![Diagnostic::warning(
        DiagCode::ExtensionStep,
        format!(
            "step GNG is an extension: relationship '{}' is a 1:N between two regular entity types, outside the core step set",
            rel.name
        ),
    )
    .at(rel.span)];
    diags.extend(embedded_step(rel, model, schema, StepKind::Gng, n_side_index(rel)));
    diags
}

/// M:N between regular entity types: a new relation named after the
/// relationship, both keys included as annotated foreign keys that jointly
/// form the primary key.
pub fn step_gmg(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    new_relation_step(rel, model, schema, StepKind::Gmg, &[0, 1])
}

/// 1:N between a subtype and a regular entity type: the N-side relation
/// hosts the annotated foreign key. When the N-side is the regular entity
/// type the far key carries the subtype prefix and a warning is attached.
pub fn step_sng(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    let host = n_side_index(rel);
    let mut diags = Vec::new();
    if !model.is_subtype(&rel.participations[host].target) {
        diags.push(
            Diagnostic::warning(
                DiagCode::MixedParticipants,
                format!(
                    "relationship '{}' places the foreign key in a regular entity type relation referencing a subtype; applied step SNG with subtype prefixing",
                    rel.name
                ),
            )
            .at(rel.span),
        );
    }
    diags.extend(embedded_step(rel, model, schema, StepKind::Sng, host));
    diags
}

/// M:N between a subtype and a regular entity type: like GMG, but the
/// subtype's key comes first and is display-prefixed with the subtype name.
pub fn step_smg(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    let subtype_first = if model.is_subtype(&rel.participations[0].target) {
        [0, 1]
    } else {
        [1, 0]
    };
    new_relation_step(rel, model, schema, StepKind::Smg, &subtype_first)
}

/// 1:1 between subtypes: embed into the host subtype relation picked by
/// [`choose_host`]; the far key is prefixed with its subtype's name.
pub fn step_sos(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    embedded_step(rel, model, schema, StepKind::Sos, choose_host(rel))
}

/// 1:N between subtypes: the N-side subtype relation hosts the prefixed,
/// annotated foreign key.
pub fn step_sns(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    embedded_step(rel, model, schema, StepKind::Sns, n_side_index(rel))
}

/// M:N between subtypes: a new relation whose first two attributes are both
/// subtype keys, each prefixed, annotated, and jointly the primary key.
pub fn step_sms(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    new_relation_step(rel, model, schema, StepKind::Sms, &[0, 1])
}

/// Ternary and higher relationship types among regular entity types: a new
/// relation with one annotated key per participant, jointly the primary key.
pub fn step_thg(rel: &RelationshipType, model: &ERModel, schema: &mut Schema) -> Vec<Diagnostic> {
    let order: Vec<usize> = (0..rel.participations.len()).collect();
    new_relation_step(rel, model, schema, StepKind::Thg, &order)
}

fn mixed_participants(rel: &RelationshipType, model: &ERModel) -> bool {
    let subs = rel
        .participations
        .iter()
        .filter(|p| model.is_subtype(&p.target))
        .count();
    subs == 1
}

fn plain_attribute(a: &AttributeDef) -> RelAttribute {
    RelAttribute {
        base_name: a.name.clone(),
        pk: false,
        fk: None,
        sql_type: a.sql_type.clone(),
    }
}

// Foreign key on the key of `p.target`'s relation. The display prefix is
// the participation's role label when present, otherwise the subtype name
// when the referenced relation is a subtype relation.
fn fk_attribute(model: &ERModel, p: &Participation, annotation: FkAnnotation) -> RelAttribute {
    let pk_attr = model
        .single_root_pk(&p.target)
        .expect("participants have a single-attribute root key");
    let prefix = p
        .role
        .clone()
        .or_else(|| model.is_subtype(&p.target).then(|| p.target.clone()));
    RelAttribute {
        base_name: pk_attr.name.clone(),
        pk: false,
        fk: Some(FkDescriptor {
            references: p.target.clone(),
            referenced_pk: pk_attr.name.clone(),
            prefix,
            annotation: Some(annotation),
        }),
        sql_type: pk_attr.sql_type.clone(),
    }
}

// Shared shape of GOG/GNG/SNG/SOS/SNS: append to the host relation one
// foreign key carrying the 4-variable suffix (relationship name, host-side
// min, far-side min, far-side max), then the relationship's attributes.
fn embedded_step(
    rel: &RelationshipType,
    model: &ERModel,
    schema: &mut Schema,
    step: StepKind,
    host_idx: usize,
) -> Vec<Diagnostic> {
    let host_p = &rel.participations[host_idx];
    let far_p = &rel.participations[1 - host_idx];
    let annotation = FkAnnotation::Embedded {
        rel_name: rel.name.clone(),
        near_min: host_p.min,
        far_min: far_p.min,
        far_max: far_p.max,
    };
    let mut attrs = vec![fk_attribute(model, far_p, annotation)];
    attrs.extend(rel.attributes.iter().map(plain_attribute));
    append_attributes(schema, &host_p.target, attrs, step, rel)
}

// Shared shape of GMG/SMG/SMS/THG: a new relation named after the
// relationship whose first attributes are the participants' keys (in the
// given order), each key-flagged and suffixed with its own (min, max) pair,
// followed by the relationship's attributes.
fn new_relation_step(
    rel: &RelationshipType,
    model: &ERModel,
    schema: &mut Schema,
    step: StepKind,
    order: &[usize],
) -> Vec<Diagnostic> {
    if schema.relation(&rel.name).is_some() {
        return vec![Diagnostic::error(
            DiagCode::RelationCollision,
            format!(
                "relation name collision: '{}' already names a relation (step {step})",
                rel.name
            ),
        )
        .at_step(rel.span, step, format!("relationship '{}'", rel.name))];
    }

    let mut attributes = Vec::new();
    for &i in order {
        let p = &rel.participations[i];
        let mut fk = fk_attribute(
            model,
            p,
            FkAnnotation::Pair {
                min: p.min,
                max: p.max,
            },
        );
        fk.pk = true;
        attributes.push(fk);
    }
    attributes.extend(rel.attributes.iter().map(plain_attribute));

    let mut displays = HashSet::new();
    for a in &attributes {
        let display = a.display_name();
        if !displays.insert(display.clone()) {
            return vec![Diagnostic::error(
                DiagCode::AttributeCollision,
                format!(
                    "attribute name collision: '{display}' appears twice in new relation '{}' (step {step}); add role labels to disambiguate",
                    rel.name
                ),
            )
            .at_step(rel.span, step, format!("relationship '{}'", rel.name))];
        }
    }

    schema.insert(
        Relation {
            name: rel.name.clone(),
            attributes,
        },
        step,
    );
    Vec::new()
}

// Append attributes to an existing relation, refusing display-name
// collisions. Nothing is committed unless every attribute fits.
fn append_attributes(
    schema: &mut Schema,
    host: &str,
    new_attrs: Vec<RelAttribute>,
    step: StepKind,
    rel: &RelationshipType,
) -> Vec<Diagnostic> {
    let relation = schema
        .relation(host)
        .expect("host relation exists for a validated model");
    let mut taken: HashSet<String> = relation
        .attributes
        .iter()
        .map(|a| a.display_name())
        .collect();
    for a in &new_attrs {
        let display = a.display_name();
        if !taken.insert(display.clone()) {
            return vec![Diagnostic::error(
                DiagCode::AttributeCollision,
                format!(
                    "attribute name collision: '{display}' already exists in relation '{host}' (step {step}, relationship '{}')",
                    rel.name
                ),
            )
            .at_step(rel.span, step, format!("relationship '{}'", rel.name))];
        }
    }

    let displays: Vec<String> = new_attrs.iter().map(|a| a.display_name()).collect();
    let relation = schema.relation_mut(host).expect("checked above");
    relation.attributes.extend(new_attrs);
    let entry = schema.provenance.attributes.entry(host.to_string()).or_default();
    for display in displays {
        entry.insert(display, step);
    }
    Vec::new()
}
