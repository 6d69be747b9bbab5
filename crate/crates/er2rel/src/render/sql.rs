//! SQL DDL for a schema.
//!
//! One `CREATE TABLE` per relation, in schema order. Key-flagged attributes
//! form the primary key; each foreign key becomes a `FOREIGN KEY` clause. An
//! embedded suffix with a non-zero near minimum makes its column `NOT NULL`;
//! everything else the suffixes say has no column-constraint equivalent and
//! is carried as `-- cardinality:` comments after the table. Column types
//! come from the attribute's type hint, defaulting to `TEXT`.

use std::fmt::Write as _;

use crate::model::{FkAnnotation, Relation};
use crate::transform::Schema;

use super::text::annotation_text;

pub fn render_sql(schema: &Schema) -> String {
    let mut out = String::new();
    for (i, relation) in schema.relations.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        table(&mut out, relation);
    }
    out
}

fn table(out: &mut String, relation: &Relation) {
    writeln!(out, "CREATE TABLE {} (", quote(&relation.name)).unwrap();
    let mut lines: Vec<String> = Vec::new();
    for a in &relation.attributes {
        let ty = a.sql_type.as_deref().unwrap_or("TEXT");
        let mut line = format!("    {} {ty}", quote(&a.display_name()));
        if let Some(FkAnnotation::Embedded { near_min, .. }) =
            a.fk.as_ref().and_then(|fk| fk.annotation.as_ref())
        {
            if *near_min >= 1 {
                line.push_str(" NOT NULL");
            }
        }
        lines.push(line);
    }
    let keys: Vec<String> = relation
        .attributes
        .iter()
        .filter(|a| a.pk)
        .map(|a| quote(&a.display_name()))
        .collect();
    if !keys.is_empty() {
        lines.push(format!("    PRIMARY KEY ({})", keys.join(", ")));
    }
    for a in &relation.attributes {
        if let Some(fk) = &a.fk {
            lines.push(format!(
                "    FOREIGN KEY ({}) REFERENCES {} ({})",
                quote(&a.display_name()),
                quote(&fk.references),
                quote(&fk.referenced_pk)
            ));
        }
    }
    out.push_str(&lines.join(",\n"));
    out.push_str("\n);\n");
    for a in &relation.attributes {
        if let Some(annotation) = a.fk.as_ref().and_then(|fk| fk.annotation.as_ref()) {
            writeln!(
                out,
                "-- cardinality: {}.{} {}",
                relation.name,
                a.display_name(),
                annotation_text(annotation)
            )
            .unwrap();
        }
    }
}

fn quote(name: &str) -> String {
    format!("\"{name}\"")
}
