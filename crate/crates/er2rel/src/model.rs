//! The ER input IR and the relational output IR.
//!
//! [`ERModel`] is what the parser produces and the transformation consumes;
//! [`Relation`] and its parts are what the transformation produces and the
//! renderers consume. Declaration order is preserved everywhere: step
//! dispatch, host tie-breaks, and attribute layout all depend on it.
//!
//! Equality on the input types ignores source spans, so a reparsed
//! pretty-print compares equal to the model it came from.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diag::SourceSpan;

/// Upper bound of a cardinality ratio pair: a finite count, or `n` for
/// unbounded. Unbounded compares greater than any finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinality {
    Finite(u32),
    Unbounded,
}

impl Cardinality {
    pub fn is_one(self) -> bool {
        matches!(self, Cardinality::Finite(1))
    }
}

impl Ord for Cardinality {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cardinality::Finite(a), Cardinality::Finite(b)) => a.cmp(b),
            (Cardinality::Finite(_), Cardinality::Unbounded) => Ordering::Less,
            (Cardinality::Unbounded, Cardinality::Finite(_)) => Ordering::Greater,
            (Cardinality::Unbounded, Cardinality::Unbounded) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Cardinality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(v) => write!(f, "{v}"),
            Cardinality::Unbounded => write!(f, "n"),
        }
    }
}

// JSON form: a number, or the string "n".
impl Serialize for Cardinality {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinality::Finite(v) => serializer.serialize_u32(*v),
            Cardinality::Unbounded => serializer.serialize_str("n"),
        }
    }
}

impl<'de> Deserialize<'de> for Cardinality {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = Cardinality;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a non-negative integer or the string \"n\"")
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Cardinality, E> {
                u32::try_from(v)
                    .map(Cardinality::Finite)
                    .map_err(|_| E::custom("cardinality out of range"))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Cardinality, E> {
                u32::try_from(v)
                    .map(Cardinality::Finite)
                    .map_err(|_| E::custom("cardinality out of range"))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Cardinality, E> {
                if v == "n" {
                    Ok(Cardinality::Unbounded)
                } else {
                    Err(E::custom("expected \"n\""))
                }
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

/// A simple attribute: a name with an optional SQL type hint.
#[derive(Debug, Clone)]
pub struct AttributeDef {
    pub name: String,
    pub sql_type: Option<String>,
    pub span: Option<SourceSpan>,
}

impl AttributeDef {
    pub fn new(name: impl Into<String>) -> Self {
        AttributeDef {
            name: name.into(),
            sql_type: None,
            span: None,
        }
    }
}

impl PartialEq for AttributeDef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.sql_type == other.sql_type
    }
}
impl Eq for AttributeDef {}

/// A regular entity type. `pk` names the key attributes; each must exist in
/// `attributes`.
#[derive(Debug, Clone)]
pub struct EntityType {
    pub name: String,
    pub attributes: Vec<AttributeDef>,
    pub pk: Vec<String>,
    pub span: Option<SourceSpan>,
}

impl EntityType {
    pub fn attribute(&self, name: &str) -> Option<&AttributeDef> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

impl PartialEq for EntityType {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.attributes == other.attributes && self.pk == other.pk
    }
}
impl Eq for EntityType {}

/// An entity type specializing a supertype. It inherits the key of the
/// regular entity type at the root of its supertype chain; `attributes`
/// holds only its own attributes.
#[derive(Debug, Clone)]
pub struct Subtype {
    pub name: String,
    pub supertype: String,
    pub attributes: Vec<AttributeDef>,
    pub span: Option<SourceSpan>,
}

impl PartialEq for Subtype {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.supertype == other.supertype
            && self.attributes == other.attributes
    }
}
impl Eq for Subtype {}

/// One leg of a relationship type: the participating entity type or subtype
/// together with its (min, max) cardinality ratio pair and an optional role
/// label.
#[derive(Debug, Clone)]
pub struct Participation {
    pub target: String,
    pub min: u32,
    pub max: Cardinality,
    pub role: Option<String>,
    pub span: Option<SourceSpan>,
}

impl PartialEq for Participation {
    fn eq(&self, other: &Self) -> bool {
        self.target == other.target
            && self.min == other.min
            && self.max == other.max
            && self.role == other.role
    }
}
impl Eq for Participation {}

/// A named association among two or more participants, optionally carrying
/// simple attributes of its own.
#[derive(Debug, Clone)]
pub struct RelationshipType {
    pub name: String,
    pub participations: Vec<Participation>,
    pub attributes: Vec<AttributeDef>,
    pub span: Option<SourceSpan>,
}

impl PartialEq for RelationshipType {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.participations == other.participations
            && self.attributes == other.attributes
    }
}
impl Eq for RelationshipType {}

/// The parsed ER model: the compiler's input IR.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ERModel {
    pub entities: Vec<EntityType>,
    pub subtypes: Vec<Subtype>,
    pub relationships: Vec<RelationshipType>,
}

impl ERModel {
    pub fn entity(&self, name: &str) -> Option<&EntityType> {
        self.entities.iter().find(|e| e.name == name)
    }

    pub fn subtype(&self, name: &str) -> Option<&Subtype> {
        self.subtypes.iter().find(|s| s.name == name)
    }

    pub fn is_entity(&self, name: &str) -> bool {
        self.entity(name).is_some()
    }

    pub fn is_subtype(&self, name: &str) -> bool {
        self.subtype(name).is_some()
    }

    /// Walk the supertype chain from `name` to the regular entity type at
    /// its root. `None` when the chain is broken or cyclic.
    pub fn root_entity(&self, name: &str) -> Option<&EntityType> {
        let mut current = name;
        let mut hops = 0usize;
        loop {
            if let Some(e) = self.entity(current) {
                return Some(e);
            }
            current = &self.subtype(current)?.supertype;
            hops += 1;
            if hops > self.subtypes.len() {
                return None; // cycle
            }
        }
    }

    /// The root key attribute behind `target`, when that key is a single
    /// attribute.
    pub fn single_root_pk(&self, target: &str) -> Option<&AttributeDef> {
        let root = self.root_entity(target)?;
        match root.pk.as_slice() {
            [only] => root.attribute(only),
            _ => None,
        }
    }
}

/// Derived classification of a relationship type by its maximum
/// cardinalities. Never stored in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardinalityClass {
    OneOne,
    OneMany,
    ManyMany,
    NAry,
}

/// The transformation step that handles a model element.
///
/// `Reg` and `Sub` build the base relations for regular entity types and
/// subtypes. The remaining steps transform relationship types, keyed by
/// cardinality class and whether the participants are regular entity types
/// (`G`) or subtypes (`S`). `Gng` is an extension for the 1:N
/// regular/regular case and is flagged with a warning whenever it runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StepKind {
    Reg,
    Sub,
    Gog,
    Gng,
    Gmg,
    Sng,
    Smg,
    Sos,
    Sns,
    Sms,
    Thg,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Reg => "REG",
            StepKind::Sub => "SUB",
            StepKind::Gog => "GOG",
            StepKind::Gng => "GNG",
            StepKind::Gmg => "GMG",
            StepKind::Sng => "SNG",
            StepKind::Smg => "SMG",
            StepKind::Sos => "SOS",
            StepKind::Sns => "SNS",
            StepKind::Sms => "SMS",
            StepKind::Thg => "THG",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A relation of the output schema: ordered attributes, at least one of
/// which is key-flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub attributes: Vec<RelAttribute>,
}

impl Relation {
    pub fn attribute(&self, display: &str) -> Option<&RelAttribute> {
        self.attributes.iter().find(|a| a.display_name() == display)
    }
}

/// One attribute of a relation. The display name is `prefix~base` when the
/// foreign key carries a prefix, the bare base name otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelAttribute {
    pub base_name: String,
    pub pk: bool,
    pub fk: Option<FkDescriptor>,
    pub sql_type: Option<String>,
}

impl RelAttribute {
    pub fn display_name(&self) -> String {
        match self.fk.as_ref().and_then(|fk| fk.prefix.as_deref()) {
            Some(prefix) => format!("{prefix}~{}", self.base_name),
            None => self.base_name.clone(),
        }
    }
}

/// A foreign key: the referenced relation and key attribute, an optional
/// display prefix, and an optional cardinality annotation. Subtype key
/// attributes double as plain foreign keys and carry no annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FkDescriptor {
    pub references: String,
    pub referenced_pk: String,
    pub prefix: Option<String>,
    pub annotation: Option<FkAnnotation>,
}

/// The bracketed suffix on a foreign key.
///
/// `Embedded` is the 4-variable form used when the key is embedded into an
/// existing relation: the relationship name, the minimum on the host side
/// (the host's maximum is always 1 and is not recorded), and the (min, max)
/// pair of the far side. `Pair` is the 2-variable (min, max) form used on
/// each key of a relation newly created for an M:N or n-ary relationship.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FkAnnotation {
    Embedded {
        rel_name: String,
        near_min: u32,
        far_min: u32,
        far_max: Cardinality,
    },
    Pair { min: u32, max: Cardinality },
}
