//! Stable JSON form of a schema, and its inverse.
//!
//! The document layout (kept in step with the `structured output` section
//! of the README):
//!
//! ```json
//! {
//!   "format": "er2rel.schema.v1",
//!   "relations": [
//!     {
//!       "name": "Employee",
//!       "attributes": [
//!         { "base_name": "EmpNo", "display_name": "EmpNo", "pk": true },
//!         { "base_name": "ProNo", "display_name": "ProNo", "pk": false,
//!           "fk": {
//!             "references": "Project", "referenced_pk": "ProNo",
//!             "annotation": { "kind": "embedded", "relationship": "Assigned",
//!                             "near_min": 1, "far_min": 0, "far_max": 1 } } }
//!       ]
//!     }
//!   ],
//!   "provenance": { "relations": { "Employee": "REG" },
//!                   "attributes": { "Employee": { "ProNo": "GOG" } } }
//! }
//! ```
//!
//! Key order is fixed by the struct layout; map keys are sorted. Optional
//! fields (`sql_type`, `fk`, `prefix`, `annotation`, an FK's `kind`-specific
//! values) are omitted when absent. Cardinalities serialize as numbers, or
//! the string `"n"` for unbounded. `parse_structured` inverts
//! `render_structured` exactly.

use serde::{Deserialize, Serialize};

use crate::model::{Cardinality, FkAnnotation, FkDescriptor, RelAttribute, Relation};
use crate::transform::{Provenance, Schema};

/// Format tag carried by every document this module writes.
pub const FORMAT_TAG: &str = "er2rel.schema.v1";

#[derive(Serialize, Deserialize)]
struct SchemaDoc {
    format: String,
    relations: Vec<RelationDoc>,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct RelationDoc {
    name: String,
    attributes: Vec<AttributeDoc>,
}

#[derive(Serialize, Deserialize)]
struct AttributeDoc {
    base_name: String,
    display_name: String,
    pk: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    sql_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    fk: Option<FkDoc>,
}

#[derive(Serialize, Deserialize)]
struct FkDoc {
    references: String,
    referenced_pk: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    prefix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    annotation: Option<AnnotationDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum AnnotationDoc {
    Embedded {
        relationship: String,
        near_min: u32,
        far_min: u32,
        far_max: Cardinality,
    },
    Pair { min: u32, max: Cardinality },
}

/// Serialize `schema` as a pretty-printed JSON document.
pub fn render_structured(schema: &Schema) -> String {
    let doc = SchemaDoc {
        format: FORMAT_TAG.to_string(),
        relations: schema.relations.iter().map(relation_doc).collect(),
        provenance: schema.provenance.clone(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("schema serializes");
    text.push('\n');
    text
}

/// Parse a document written by [`render_structured`] back into a schema.
pub fn parse_structured(text: &str) -> Result<Schema, String> {
    let doc: SchemaDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.format != FORMAT_TAG {
        return Err(format!(
            "unsupported format tag '{}', expected '{FORMAT_TAG}'",
            doc.format
        ));
    }
    let mut relations = Vec::with_capacity(doc.relations.len());
    for r in doc.relations {
        let mut attributes = Vec::with_capacity(r.attributes.len());
        for a in r.attributes {
            let attr = RelAttribute {
                base_name: a.base_name,
                pk: a.pk,
                fk: a.fk.map(|fk| FkDescriptor {
                    references: fk.references,
                    referenced_pk: fk.referenced_pk,
                    prefix: fk.prefix,
                    annotation: fk.annotation.map(|ann| match ann {
                        AnnotationDoc::Embedded {
                            relationship,
                            near_min,
                            far_min,
                            far_max,
                        } => FkAnnotation::Embedded {
                            rel_name: relationship,
                            near_min,
                            far_min,
                            far_max,
                        },
                        AnnotationDoc::Pair { min, max } => FkAnnotation::Pair { min, max },
                    }),
                }),
                sql_type: a.sql_type,
            };
            if attr.display_name() != a.display_name {
                return Err(format!(
                    "display name '{}' does not match '{}' in relation '{}'",
                    a.display_name,
                    attr.display_name(),
                    r.name
                ));
            }
            attributes.push(attr);
        }
        relations.push(Relation {
            name: r.name,
            attributes,
        });
    }
    Ok(Schema {
        relations,
        provenance: doc.provenance,
    })
}

fn relation_doc(relation: &Relation) -> RelationDoc {
    RelationDoc {
        name: relation.name.clone(),
        attributes: relation
            .attributes
            .iter()
            .map(|a| AttributeDoc {
                base_name: a.base_name.clone(),
                display_name: a.display_name(),
                pk: a.pk,
                sql_type: a.sql_type.clone(),
                fk: a.fk.as_ref().map(|fk| FkDoc {
                    references: fk.references.clone(),
                    referenced_pk: fk.referenced_pk.clone(),
                    prefix: fk.prefix.clone(),
                    annotation: fk.annotation.as_ref().map(|ann| match ann {
                        FkAnnotation::Embedded {
                            rel_name,
                            near_min,
                            far_min,
                            far_max,
                        } => AnnotationDoc::Embedded {
                            relationship: rel_name.clone(),
                            near_min: *near_min,
                            far_min: *far_min,
                            far_max: *far_max,
                        },
                        FkAnnotation::Pair { min, max } => AnnotationDoc::Pair {
                            min: *min,
                            max: *max,
                        },
                    }),
                }),
            })
            .collect(),
    }
}
