//! Shared test support: a bounded random-model generator and the whole-
//! artifact invariant checks.


use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use er2rel::classify::{choose_host, classify, n_side_index};
use er2rel::model::{
    AttributeDef, Cardinality, CardinalityClass, ERModel, EntityType, FkAnnotation, Participation,
    RelationshipType, StepKind, Subtype,
};
use er2rel::transform::Schema;

#[derive(Debug, Clone)]
pub struct RawRel {
    pub arity_pick: u8,
    pub target_picks: [u16; 4],
    pub recursive: bool,
    pub mins: [u8; 4],
    pub max_picks: [u8; 4],
    pub attr_count: usize,
}

/// Random valid models: up to 5 entity types, 4 subtypes, 5 relationship
/// types, single-attribute keys, unique names throughout. The builder
/// widens a would-be 1:1 or 1:N to M:N whenever embedding its foreign key
/// would collide with an existing attribute, so every generated model
/// transforms cleanly.
pub fn arb_model() -> impl Strategy<Value = ERModel> {
    let entities = prop::collection::vec((0usize..=3, any::<u8>()), 1..=5);
    let subtypes = prop::collection::vec((any::<u16>(), 0usize..=2), 0..=4);
    let rels = prop::collection::vec(raw_rel(), 0..=5);
    (entities, subtypes, rels).prop_map(|(e, s, r)| build_model(&e, &s, &r))
}

fn raw_rel() -> impl Strategy<Value = RawRel> {
    (
        0u8..=9,
        prop::array::uniform4(any::<u16>()),
        any::<bool>(),
        prop::array::uniform4(0u8..=3),
        prop::array::uniform4(0u8..=4),
        0usize..=2,
    )
        .prop_map(
            |(arity_pick, target_picks, recursive, mins, max_picks, attr_count)| RawRel {
                arity_pick,
                target_picks,
                recursive,
                mins,
                max_picks,
                attr_count,
            },
        )
}

fn cardinality(pick: u8) -> Cardinality {
    match pick {
        0 => Cardinality::Finite(1),
        1 => Cardinality::Finite(2),
        2 => Cardinality::Finite(3),
        3 => Cardinality::Finite(4),
        _ => Cardinality::Unbounded,
    }
}

fn clamp_min(raw: u8, max: Cardinality) -> u32 {
    let min = raw as u32;
    match max {
        Cardinality::Finite(m) => min.min(m),
        Cardinality::Unbounded => min,
    }
}

fn attr(name: String, hinted: bool) -> AttributeDef {
    AttributeDef {
        name,
        sql_type: hinted.then(|| "integer".to_string()),
        span: None,
    }
}

pub fn build_model(
    entities: &[(usize, u8)],
    subtypes: &[(u16, usize)],
    rels: &[RawRel],
) -> ERModel {
    let mut model = ERModel::default();

    for (i, &(extra, hints)) in entities.iter().enumerate() {
        let mut attrs = vec![attr(format!("Key{i}"), hints & 1 != 0)];
        for j in 0..extra {
            attrs.push(attr(format!("E{i}f{j}"), (hints >> (j + 1)) & 1 != 0));
        }
        model.entities.push(EntityType {
            name: format!("Ent{i}"),
            attributes: attrs,
            pk: vec![format!("Key{i}")],
            span: None,
        });
    }

    // Root key per target name, maintained as subtypes are added.
    let mut root_key: HashMap<String, String> = model
        .entities
        .iter()
        .enumerate()
        .map(|(i, e)| (e.name.clone(), format!("Key{i}")))
        .collect();

    for (j, &(pick, own_count)) in subtypes.iter().enumerate() {
        let pool = model.entities.len() + model.subtypes.len();
        let p = pick as usize % pool;
        let supertype = if p < model.entities.len() {
            model.entities[p].name.clone()
        } else {
            model.subtypes[p - model.entities.len()].name.clone()
        };
        let name = format!("Sub{j}");
        root_key.insert(name.clone(), root_key[&supertype].clone());
        model.subtypes.push(Subtype {
            name,
            supertype,
            attributes: (0..own_count).map(|k| attr(format!("S{j}o{k}"), false)).collect(),
            span: None,
        });
    }

    let targets: Vec<String> = model
        .entities
        .iter()
        .map(|e| e.name.clone())
        .chain(model.subtypes.iter().map(|s| s.name.clone()))
        .collect();
    let subtype_names: HashSet<String> = model.subtypes.iter().map(|s| s.name.clone()).collect();

    // Display names already present in (or appended to) each relation.
    let mut occupied: HashMap<String, HashSet<String>> = HashMap::new();
    for e in &model.entities {
        occupied.insert(
            e.name.clone(),
            e.attributes.iter().map(|a| a.name.clone()).collect(),
        );
    }
    for s in &model.subtypes {
        let mut displays: HashSet<String> = s.attributes.iter().map(|a| a.name.clone()).collect();
        displays.insert(root_key[&s.name].clone());
        occupied.insert(s.name.clone(), displays);
    }

    for (k, raw) in rels.iter().enumerate() {
        let arity = if raw.arity_pick >= 9 && model.entities.len() >= 4 {
            4
        } else if raw.arity_pick >= 8 && model.entities.len() >= 3 {
            3
        } else {
            2
        };

        let mut participations: Vec<Participation>;
        if arity == 2 {
            let a = targets[raw.target_picks[0] as usize % targets.len()].clone();
            let picked_b = targets[raw.target_picks[1] as usize % targets.len()].clone();
            let b = if raw.recursive { a.clone() } else { picked_b };
            let recursive = a == b;
            let roles: [Option<String>; 2] = if recursive {
                [Some("first".into()), Some("second".into())]
            } else {
                [None, None]
            };
            let mut maxes = [cardinality(raw.max_picks[0]), cardinality(raw.max_picks[1])];
            let mins = [clamp_min(raw.mins[0], maxes[0]), clamp_min(raw.mins[1], maxes[1])];

            let ones = maxes.iter().filter(|m| m.is_one()).count();
            if ones >= 1 {
                let host = if ones == 2 {
                    match (mins[0] > 0, mins[1] > 0) {
                        (false, true) => 1,
                        _ => 0,
                    }
                } else if maxes[0].is_one() {
                    0
                } else {
                    1
                };
                let far = 1 - host;
                let far_target = if far == 0 { &a } else { &b };
                let host_target = if host == 0 { &a } else { &b };
                let prefix = roles[far].clone().or_else(|| {
                    subtype_names
                        .contains(far_target)
                        .then(|| far_target.clone())
                });
                let key = root_key[far_target].clone();
                let display = match prefix {
                    Some(p) => format!("{p}~{key}"),
                    None => key,
                };
                let slots = occupied.get_mut(host_target).unwrap();
                if slots.contains(&display) {
                    // widen to M:N so the step creates a fresh relation
                    for m in &mut maxes {
                        if m.is_one() {
                            *m = Cardinality::Finite(2);
                        }
                    }
                } else {
                    slots.insert(display);
                }
            }

            participations = Vec::new();
            for (side, target) in [(0usize, a), (1, b)] {
                participations.push(Participation {
                    target,
                    min: mins[side],
                    max: maxes[side],
                    role: roles[side].clone(),
                    span: None,
                });
            }
        } else {
            let n = model.entities.len();
            let start = raw.target_picks[0] as usize % n;
            participations = (0..arity)
                .map(|i| {
                    let max = cardinality(raw.max_picks[i]);
                    Participation {
                        target: model.entities[(start + i) % n].name.clone(),
                        min: clamp_min(raw.mins[i], max),
                        max,
                        role: None,
                        span: None,
                    }
                })
                .collect();
        }

        model.relationships.push(RelationshipType {
            name: format!("Rel{k}"),
            participations,
            attributes: (0..raw.attr_count).map(|j| attr(format!("R{k}a{j}"), false)).collect(),
            span: None,
        });
    }

    model
}

/// The whole-artifact invariants, checked on one (model, schema) pair.
pub fn check_invariants(model: &ERModel, schema: &Schema) -> Result<(), String> {
    referential_closure(schema)?;

    for relation in &schema.relations {
        if !relation.attributes.iter().any(|a| a.pk) {
            return Err(format!("relation '{}' has no key attribute", relation.name));
        }
        if !schema.provenance.relations.contains_key(&relation.name) {
            return Err(format!("relation '{}' has no provenance entry", relation.name));
        }
    }

    for rel in &model.relationships {
        let (class, step) = classify(rel, model).map_err(|d| d.message)?;
        match class {
            CardinalityClass::OneOne | CardinalityClass::OneMany => {
                check_embedded(model, schema, rel, class, step)?
            }
            CardinalityClass::ManyMany | CardinalityClass::NAry => {
                check_new_relation(model, schema, rel, step)?
            }
        }
    }

    attribute_conservation(model, schema)?;
    annotation_kind_correspondence(schema)?;
    new_relation_pk_shape(schema)?;
    Ok(())
}

fn referential_closure(schema: &Schema) -> Result<(), String> {
    for relation in &schema.relations {
        for a in &relation.attributes {
            let Some(fk) = &a.fk else { continue };
            let target = schema
                .relation(&fk.references)
                .ok_or_else(|| format!("fk in '{}' references missing relation '{}'", relation.name, fk.references))?;
            let ok = target.attributes.iter().any(|t| {
                t.pk && t.base_name == fk.referenced_pk && t.display_name() == fk.referenced_pk
            });
            if !ok {
                return Err(format!(
                    "'{}' is not a bare key attribute of '{}'",
                    fk.referenced_pk, fk.references
                ));
            }
        }
    }
    Ok(())
}

fn expected_prefix(model: &ERModel, p: &Participation) -> Option<String> {
    p.role
        .clone()
        .or_else(|| model.is_subtype(&p.target).then(|| p.target.clone()))
}

fn check_embedded(
    model: &ERModel,
    schema: &Schema,
    rel: &RelationshipType,
    class: CardinalityClass,
    step: StepKind,
) -> Result<(), String> {
    let host_idx = match class {
        CardinalityClass::OneOne => choose_host(rel),
        _ => n_side_index(rel),
    };
    let host_p = &rel.participations[host_idx];
    let far_p = &rel.participations[1 - host_idx];

    // near-max suppression: the host side of an embedded step has max 1
    if !host_p.max.is_one() {
        return Err(format!("host side of '{}' has max {}", rel.name, host_p.max));
    }

    // exactly one embedded FK carries this relationship's name
    let mut found = Vec::new();
    for relation in &schema.relations {
        for (i, a) in relation.attributes.iter().enumerate() {
            if let Some(FkAnnotation::Embedded { rel_name, .. }) =
                a.fk.as_ref().and_then(|fk| fk.annotation.as_ref())
            {
                if rel_name == &rel.name {
                    found.push((relation, i, a));
                }
            }
        }
    }
    if found.len() != 1 {
        return Err(format!(
            "expected exactly one embedded fk for '{}', found {}",
            rel.name,
            found.len()
        ));
    }
    let (host_rel, fk_index, fk_attr) = found[0];
    if host_rel.name != host_p.target {
        return Err(format!(
            "fk for '{}' landed in '{}', expected '{}'",
            rel.name, host_rel.name, host_p.target
        ));
    }
    if fk_attr.pk {
        return Err(format!("embedded fk for '{}' must not be key-flagged", rel.name));
    }

    let fk = fk_attr.fk.as_ref().unwrap();
    if fk.references != far_p.target {
        return Err(format!(
            "fk for '{}' references '{}', expected '{}'",
            rel.name, fk.references, far_p.target
        ));
    }
    // cardinality conservation for the 4-variable suffix
    match fk.annotation.as_ref().unwrap() {
        FkAnnotation::Embedded {
            rel_name,
            near_min,
            far_min,
            far_max,
        } => {
            if rel_name != &rel.name
                || *near_min != host_p.min
                || *far_min != far_p.min
                || *far_max != far_p.max
            {
                return Err(format!("suffix values for '{}' do not match the participations", rel.name));
            }
        }
        FkAnnotation::Pair { .. } => unreachable!("filtered above"),
    }
    // prefix rule
    if fk.prefix != expected_prefix(model, far_p) {
        return Err(format!(
            "fk prefix for '{}' is {:?}, expected {:?}",
            rel.name,
            fk.prefix,
            expected_prefix(model, far_p)
        ));
    }
    // attribute conservation: the relationship's attributes follow the fk
    for (j, def) in rel.attributes.iter().enumerate() {
        let Some(a) = host_rel.attributes.get(fk_index + 1 + j) else {
            return Err(format!("attribute '{}' of '{}' missing after the fk", def.name, rel.name));
        };
        if a.display_name() != def.name || a.pk || a.fk.is_some() {
            return Err(format!(
                "attribute '{}' of '{}' not appended plainly after the fk",
                def.name, rel.name
            ));
        }
    }
    // provenance entries for each appended display
    let appended = schema
        .provenance
        .attributes
        .get(&host_rel.name)
        .ok_or_else(|| format!("no appended-attribute provenance for '{}'", host_rel.name))?;
    let mut displays = vec![fk_attr.display_name()];
    displays.extend(rel.attributes.iter().map(|a| a.name.clone()));
    for display in displays {
        if appended.get(&display) != Some(&step) {
            return Err(format!(
                "provenance for '{display}' in '{}' is not {step}",
                host_rel.name
            ));
        }
    }
    Ok(())
}

fn check_new_relation(
    model: &ERModel,
    schema: &Schema,
    rel: &RelationshipType,
    step: StepKind,
) -> Result<(), String> {
    let relation = schema
        .relation(&rel.name)
        .ok_or_else(|| format!("no relation created for '{}'", rel.name))?;
    if schema.provenance.relations.get(&rel.name) != Some(&step) {
        return Err(format!("relation '{}' provenance is not {step}", rel.name));
    }

    // participant order: declaration order, except SMG puts the subtype first
    let mut order: Vec<usize> = (0..rel.participations.len()).collect();
    if step == StepKind::Smg && !model.is_subtype(&rel.participations[0].target) {
        order.swap(0, 1);
    }

    let k = order.len();
    if relation.attributes.len() != k + rel.attributes.len() {
        return Err(format!("relation '{}' has the wrong attribute count", rel.name));
    }
    for (pos, &pi) in order.iter().enumerate() {
        let p = &rel.participations[pi];
        let a = &relation.attributes[pos];
        if !a.pk {
            return Err(format!("fk {pos} of '{}' is not key-flagged", rel.name));
        }
        let fk = a
            .fk
            .as_ref()
            .ok_or_else(|| format!("attribute {pos} of '{}' is not an fk", rel.name))?;
        if fk.references != p.target {
            return Err(format!(
                "fk {pos} of '{}' references '{}', expected '{}'",
                rel.name, fk.references, p.target
            ));
        }
        // cardinality conservation for the (min, max) suffix
        if fk.annotation
            != Some(FkAnnotation::Pair {
                min: p.min,
                max: p.max,
            })
        {
            return Err(format!("pair suffix {pos} of '{}' does not match", rel.name));
        }
        if fk.prefix != expected_prefix(model, p) {
            return Err(format!("fk prefix {pos} of '{}' is wrong", rel.name));
        }
    }
    for (j, def) in rel.attributes.iter().enumerate() {
        let a = &relation.attributes[k + j];
        if a.display_name() != def.name || a.pk || a.fk.is_some() {
            return Err(format!(
                "attribute '{}' of '{}' not appended plainly",
                def.name, rel.name
            ));
        }
    }
    Ok(())
}

// Every relationship attribute lands in the schema exactly once.
fn attribute_conservation(model: &ERModel, schema: &Schema) -> Result<(), String> {
    for rel in &model.relationships {
        for def in &rel.attributes {
            let count: usize = schema
                .relations
                .iter()
                .flat_map(|r| &r.attributes)
                .filter(|a| a.base_name == def.name)
                .count();
            if count != 1 {
                return Err(format!(
                    "attribute '{}' of '{}' appears {count} times",
                    def.name, rel.name
                ));
            }
        }
    }
    Ok(())
}

// Embedded suffixes only on attributes appended by embedding steps; pair
// suffixes only inside relations created by new-relation steps; plain FKs
// only as subtype keys.
fn annotation_kind_correspondence(schema: &Schema) -> Result<(), String> {
    const EMBEDDING: [StepKind; 5] = [
        StepKind::Gog,
        StepKind::Gng,
        StepKind::Sng,
        StepKind::Sos,
        StepKind::Sns,
    ];
    const CREATING: [StepKind; 4] = [StepKind::Gmg, StepKind::Smg, StepKind::Sms, StepKind::Thg];

    for relation in &schema.relations {
        let rel_step = schema.provenance.relations[&relation.name];
        for a in &relation.attributes {
            let Some(fk) = &a.fk else { continue };
            match &fk.annotation {
                Some(FkAnnotation::Embedded { .. }) => {
                    let step = schema
                        .provenance
                        .attributes
                        .get(&relation.name)
                        .and_then(|m| m.get(&a.display_name()))
                        .copied()
                        .ok_or_else(|| {
                            format!("embedded fk '{}' has no provenance", a.display_name())
                        })?;
                    if !EMBEDDING.contains(&step) {
                        return Err(format!(
                            "embedded fk '{}' attributed to {step}",
                            a.display_name()
                        ));
                    }
                }
                Some(FkAnnotation::Pair { .. }) => {
                    if !CREATING.contains(&rel_step) {
                        return Err(format!(
                            "pair fk '{}' inside a {rel_step} relation",
                            a.display_name()
                        ));
                    }
                }
                None => {
                    if rel_step != StepKind::Sub || !a.pk || fk.prefix.is_some() {
                        return Err(format!(
                            "plain fk '{}' outside a subtype key position",
                            a.display_name()
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

// Relations created for M:N and n-ary relationships are keyed by exactly
// their leading foreign keys.
fn new_relation_pk_shape(schema: &Schema) -> Result<(), String> {
    const CREATING: [StepKind; 4] = [StepKind::Gmg, StepKind::Smg, StepKind::Sms, StepKind::Thg];
    for relation in &schema.relations {
        if !CREATING.contains(&schema.provenance.relations[&relation.name]) {
            continue;
        }
        let fk_count = relation.attributes.iter().filter(|a| a.fk.is_some()).count();
        for (i, a) in relation.attributes.iter().enumerate() {
            let leading = i < fk_count;
            if leading != a.fk.is_some() || leading != a.pk {
                return Err(format!(
                    "relation '{}' key shape broken at position {i}",
                    relation.name
                ));
            }
        }
    }
    Ok(())
}
