//! Recursive descent parser for the ER modeling DSL.
//!
//! Grammar:
//!
//! ```text
//! model         := statement*
//! statement     := entity | subtype | relationship
//! entity        := "entity" IDENT "{" attr_decl* "}"
//! subtype       := "subtype" IDENT "of" IDENT "{" attr_decl* "}"
//! relationship  := "relationship" IDENT "(" participation ("," participation)+ ")"
//!                  "{" attr_decl* "}"
//! participation := IDENT ["as" IDENT] "[" INT "," (INT | "n") "]"
//! attr_decl     := ["key"] IDENT [":" IDENT] ";"
//! ```
//!
//! `//` comments run to end of line; identifiers are a letter followed by
//! letters, digits, or underscores. The parser recovers at statement
//! boundaries (semicolons and closing braces) so one run reports as many
//! errors as possible, and it attaches a source span to every diagnostic.

use std::collections::HashSet;

use crate::diag::{DiagCode, Diagnostic};
use crate::lexer::{lex, Token, TokenKind};
use crate::model::{
    AttributeDef, Cardinality, ERModel, EntityType, Participation, RelationshipType, Subtype,
};

/// Outcome of [`parse`]: the model is present exactly when no error was
/// reported.
#[derive(Debug)]
pub struct ParseResult {
    pub model: Option<ERModel>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parse DSL text into an [`ERModel`], preserving declaration order.
pub fn parse(source: &str) -> ParseResult {
    let (tokens, mut diagnostics) = lex(source);
    let mut parser = Parser {
        tokens,
        pos: 0,
        diags: Vec::new(),
        declared: HashSet::new(),
    };
    let model = parser.model();
    diagnostics.extend(parser.diags);
    resolve_references(&model, &mut diagnostics);
    let ok = !diagnostics.iter().any(Diagnostic::is_error);
    ParseResult {
        model: ok.then_some(model),
        diagnostics,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AttrContext {
    Entity,
    Subtype,
    Relationship,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    declared: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        if token.kind != TokenKind::Eof {
            self.pos += 1;
        }
        token
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().kind == kind
    }

    fn eat(&mut self, kind: TokenKind) -> Option<Token> {
        self.at(kind).then(|| self.bump())
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, ()> {
        if self.at(kind) {
            Ok(self.bump())
        } else {
            let found = self.peek().text.clone();
            self.error_here(format!("expected {what}, found '{found}'"));
            Err(())
        }
    }

    fn error_here(&mut self, message: String) {
        let span = self.peek().span;
        self.diags
            .push(Diagnostic::error(DiagCode::Syntax, message).at(Some(span)));
    }

    fn declare(&mut self, token: &Token) {
        if !self.declared.insert(token.text.clone()) {
            self.diags.push(
                Diagnostic::error(
                    DiagCode::DuplicateName,
                    format!("duplicate name '{}'", token.text),
                )
                .at(Some(token.span)),
            );
        }
    }

    fn model(&mut self) -> ERModel {
        let mut model = ERModel::default();
        while !self.at(TokenKind::Eof) {
            match self.peek().kind {
                TokenKind::Entity => match self.entity() {
                    Ok(e) => model.entities.push(e),
                    Err(()) => self.sync_statement(),
                },
                TokenKind::Subtype => match self.subtype() {
                    Ok(s) => model.subtypes.push(s),
                    Err(()) => self.sync_statement(),
                },
                TokenKind::Relationship => match self.relationship() {
                    Ok(r) => model.relationships.push(r),
                    Err(()) => self.sync_statement(),
                },
                TokenKind::Ident => {
                    let token = self.bump();
                    self.diags.push(
                        Diagnostic::error(
                            DiagCode::UnknownKeyword,
                            format!("unknown keyword '{}'", token.text),
                        )
                        .at(Some(token.span)),
                    );
                    self.sync_statement();
                }
                _ => {
                    let found = self.peek().text.clone();
                    self.error_here(format!("expected a declaration, found '{found}'"));
                    self.sync_statement();
                }
            }
        }
        model
    }

    // Skip to the next top-level declaration keyword, balancing braces.
    fn sync_statement(&mut self) {
        let mut depth = 0u32;
        loop {
            match self.peek().kind {
                TokenKind::Eof => return,
                TokenKind::LBrace => {
                    depth += 1;
                    self.bump();
                }
                TokenKind::RBrace => {
                    self.bump();
                    if depth <= 1 {
                        return;
                    }
                    depth -= 1;
                }
                TokenKind::Entity | TokenKind::Subtype | TokenKind::Relationship if depth == 0 => {
                    return
                }
                _ => {
                    self.bump();
                }
            }
        }
    }

    fn entity(&mut self) -> Result<EntityType, ()> {
        self.bump();
        let name = self.expect(TokenKind::Ident, "an entity name")?;
        self.declare(&name);
        let (attributes, pk) = self.attr_block(AttrContext::Entity)?;
        Ok(EntityType {
            name: name.text,
            attributes,
            pk,
            span: Some(name.span),
        })
    }

    fn subtype(&mut self) -> Result<Subtype, ()> {
        self.bump();
        let name = self.expect(TokenKind::Ident, "a subtype name")?;
        self.declare(&name);
        self.expect(TokenKind::Of, "'of'")?;
        let supertype = self.expect(TokenKind::Ident, "a supertype name")?;
        let (attributes, _) = self.attr_block(AttrContext::Subtype)?;
        Ok(Subtype {
            name: name.text,
            supertype: supertype.text,
            attributes,
            span: Some(name.span),
        })
    }

    fn relationship(&mut self) -> Result<RelationshipType, ()> {
        self.bump();
        let name = self.expect(TokenKind::Ident, "a relationship name")?;
        self.declare(&name);
        self.expect(TokenKind::LParen, "'('")?;
        let mut participations = vec![self.participation()?];
        while self.eat(TokenKind::Comma).is_some() {
            participations.push(self.participation()?);
        }
        self.expect(TokenKind::RParen, "')'")?;
        if participations.len() < 2 {
            self.diags.push(
                Diagnostic::error(
                    DiagCode::TooFewParticipants,
                    format!(
                        "relationship '{}' needs at least two participations",
                        name.text
                    ),
                )
                .at(Some(name.span)),
            );
        }
        let (attributes, _) = self.attr_block(AttrContext::Relationship)?;
        Ok(RelationshipType {
            name: name.text,
            participations,
            attributes,
            span: Some(name.span),
        })
    }

    fn participation(&mut self) -> Result<Participation, ()> {
        let target = self.expect(TokenKind::Ident, "an entity or subtype name")?;
        let role = if self.eat(TokenKind::As).is_some() {
            Some(self.expect(TokenKind::Ident, "a role name")?.text)
        } else {
            None
        };
        self.expect(TokenKind::LBracket, "'['")?;
        let min = self
            .expect(TokenKind::Int, "a minimum cardinality")?
            .int
            .unwrap_or(0);
        self.expect(TokenKind::Comma, "','")?;
        let max = match self.peek().kind {
            TokenKind::Int => Cardinality::Finite(self.bump().int.unwrap_or(0)),
            TokenKind::Ident if self.peek().text == "n" => {
                self.bump();
                Cardinality::Unbounded
            }
            _ => {
                let found = self.peek().text.clone();
                self.error_here(format!(
                    "expected an integer or 'n' for the maximum cardinality, found '{found}'"
                ));
                return Err(());
            }
        };
        self.expect(TokenKind::RBracket, "']'")?;
        Ok(Participation {
            target: target.text,
            min,
            max,
            role,
            span: Some(target.span),
        })
    }

    fn attr_block(&mut self, ctx: AttrContext) -> Result<(Vec<AttributeDef>, Vec<String>), ()> {
        self.expect(TokenKind::LBrace, "'{'")?;
        let mut attributes = Vec::new();
        let mut keys = Vec::new();
        loop {
            match self.peek().kind {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => {
                    self.error_here("missing '}'".into());
                    return Err(());
                }
                TokenKind::Entity | TokenKind::Subtype | TokenKind::Relationship => {
                    self.error_here("missing '}' before the next declaration".into());
                    break;
                }
                _ => match self.attr_decl(ctx) {
                    Ok((attr, is_key)) => {
                        if is_key {
                            keys.push(attr.name.clone());
                        }
                        attributes.push(attr);
                    }
                    Err(()) => self.sync_attr(),
                },
            }
        }
        Ok((attributes, keys))
    }

    // Skip to the next ';' (consumed) or stop before a closing brace.
    fn sync_attr(&mut self) {
        loop {
            match self.peek().kind {
                TokenKind::Semi => {
                    self.bump();
                    return;
                }
                TokenKind::RBrace
                | TokenKind::Eof
                | TokenKind::Entity
                | TokenKind::Subtype
                | TokenKind::Relationship => return,
                _ => {
                    self.bump();
                }
            }
        }
    }

    fn attr_decl(&mut self, ctx: AttrContext) -> Result<(AttributeDef, bool), ()> {
        let mut is_key = false;
        if let Some(key) = self.eat(TokenKind::Key) {
            if ctx == AttrContext::Entity {
                is_key = true;
            } else {
                let where_ = match ctx {
                    AttrContext::Subtype => "subtype",
                    _ => "relationship",
                };
                self.diags.push(
                    Diagnostic::error(
                        DiagCode::KeyNotAllowed,
                        format!("'key' is not allowed on {where_} attributes"),
                    )
                    .at(Some(key.span)),
                );
            }
        }
        let name = self.expect(TokenKind::Ident, "an attribute name")?;
        let sql_type = if self.eat(TokenKind::Colon).is_some() {
            Some(self.expect(TokenKind::Ident, "a type name")?.text)
        } else {
            None
        };
        self.expect(TokenKind::Semi, "';'")?;
        Ok((
            AttributeDef {
                name: name.text,
                sql_type,
                span: Some(name.span),
            },
            is_key,
        ))
    }
}

// Supertype and participation references must name a declared entity type
// or subtype.
fn resolve_references(model: &ERModel, diagnostics: &mut Vec<Diagnostic>) {
    let resolvable: HashSet<&str> = model
        .entities
        .iter()
        .map(|e| e.name.as_str())
        .chain(model.subtypes.iter().map(|s| s.name.as_str()))
        .collect();
    let relationships: HashSet<&str> =
        model.relationships.iter().map(|r| r.name.as_str()).collect();

    let mut report = |name: &str, span| {
        let message = if relationships.contains(name) {
            format!("reference '{name}' names a relationship type; expected an entity type or subtype")
        } else {
            format!("unresolved reference '{name}'")
        };
        diagnostics.push(Diagnostic::error(DiagCode::UnresolvedReference, message).at(span));
    };

    for s in &model.subtypes {
        if !resolvable.contains(s.supertype.as_str()) {
            report(&s.supertype, s.span);
        }
    }
    for r in &model.relationships {
        for p in &r.participations {
            if !resolvable.contains(p.target.as_str()) {
                report(&p.target, p.span);
            }
        }
    }
}
