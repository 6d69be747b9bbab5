//! Canonical DSL text for a model.

use std::fmt::Write as _;

use crate::model::{AttributeDef, ERModel};

/// Pretty-print `model` as canonical DSL text. Parsing the result yields a
/// model structurally equal to the input.
///
/// Key attributes are written as `key` flags in attribute order, so the
/// printed key order always follows attribute order (the DSL cannot express
/// any other ordering).
pub fn format_model(model: &ERModel) -> String {
    let mut blocks = Vec::new();
    for e in &model.entities {
        let mut block = format!("entity {}", e.name);
        write_body(&mut block, &e.attributes, Some(&e.pk));
        blocks.push(block);
    }
    for s in &model.subtypes {
        let mut block = format!("subtype {} of {}", s.name, s.supertype);
        write_body(&mut block, &s.attributes, None);
        blocks.push(block);
    }
    for r in &model.relationships {
        let participations: Vec<String> = r
            .participations
            .iter()
            .map(|p| {
                let role = p
                    .role
                    .as_ref()
                    .map(|role| format!(" as {role}"))
                    .unwrap_or_default();
                format!("{}{role}[{},{}]", p.target, p.min, p.max)
            })
            .collect();
        let mut block = format!("relationship {} ({})", r.name, participations.join(", "));
        write_body(&mut block, &r.attributes, None);
        blocks.push(block);
    }
    if blocks.is_empty() {
        return String::new();
    }
    blocks.join("\n\n") + "\n"
}

fn write_body(out: &mut String, attributes: &[AttributeDef], keys: Option<&[String]>) {
    if attributes.is_empty() {
        out.push_str(" {}");
        return;
    }
    out.push_str(" {\n");
    for a in attributes {
        let key = keys
            .map(|keys| keys.iter().any(|k| k == &a.name))
            .unwrap_or(false);
        let flag = if key { "key " } else { "" };
        match &a.sql_type {
            Some(ty) => writeln!(out, "  {flag}{}: {ty};", a.name).unwrap(),
            None => writeln!(out, "  {flag}{};", a.name).unwrap(),
        }
    }
    out.push('}');
}
