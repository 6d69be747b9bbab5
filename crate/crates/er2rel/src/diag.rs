//! Diagnostics: structured errors and warnings with stable codes.
//!
//! Errors abort schema emission; warnings do not. Every diagnostic carries a
//! location, which is either a span in the DSL source text or, for models
//! built programmatically, the transformation step it arose in.

use std::fmt;

use crate::model::StepKind;

/// A position in the input text, 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    pub fn new(line: u32, column: u32, length: u32) -> Self {
        SourceSpan {
            line,
            column,
            length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

/// Machine-readable diagnostic codes. The kebab-case form printed by
/// [`DiagCode::as_str`] is part of the tool's stable interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagCode {
    Syntax,
    UnknownKeyword,
    DuplicateName,
    UnresolvedReference,
    KeyNotAllowed,
    DuplicateAttribute,
    MissingKey,
    UnknownKeyAttribute,
    AttributeShadowsKey,
    MinExceedsMax,
    ZeroMax,
    TooFewParticipants,
    InvalidIdentifier,
    SubtypeCycle,
    CompositeKeyParticipant,
    HostMaxNotOne,
    PostTransformCollision,
    NaryWithSubtype,
    AttributeCollision,
    RelationCollision,
    ExtensionStep,
    MixedParticipants,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::Syntax => "syntax",
            DiagCode::UnknownKeyword => "unknown-keyword",
            DiagCode::DuplicateName => "duplicate-name",
            DiagCode::UnresolvedReference => "unresolved-reference",
            DiagCode::KeyNotAllowed => "key-not-allowed",
            DiagCode::DuplicateAttribute => "duplicate-attribute",
            DiagCode::MissingKey => "missing-key",
            DiagCode::UnknownKeyAttribute => "unknown-key-attribute",
            DiagCode::AttributeShadowsKey => "attribute-shadows-key",
            DiagCode::MinExceedsMax => "min-exceeds-max",
            DiagCode::ZeroMax => "zero-max",
            DiagCode::TooFewParticipants => "too-few-participants",
            DiagCode::InvalidIdentifier => "invalid-identifier",
            DiagCode::SubtypeCycle => "subtype-cycle",
            DiagCode::CompositeKeyParticipant => "composite-key-participant",
            DiagCode::HostMaxNotOne => "host-max-not-one",
            DiagCode::PostTransformCollision => "post-transform-collision",
            DiagCode::NaryWithSubtype => "nary-subtype",
            DiagCode::AttributeCollision => "attribute-collision",
            DiagCode::RelationCollision => "relation-collision",
            DiagCode::ExtensionStep => "extension-step",
            DiagCode::MixedParticipants => "mixed-participants",
        }
    }
}

/// Where a diagnostic points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// A place in the DSL source text.
    Span(SourceSpan),
    /// A transformation step applied to a model without source spans.
    Step { step: StepKind, context: String },
    /// The model as a whole.
    Model,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub message: String,
    pub location: Location,
}

impl Diagnostic {
    pub fn error(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            location: Location::Model,
        }
    }

    pub fn warning(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            location: Location::Model,
        }
    }

    /// Attach a source span when one is known.
    pub fn at(mut self, span: Option<SourceSpan>) -> Self {
        if let Some(span) = span {
            self.location = Location::Span(span);
        }
        self
    }

    /// Attach a step context; a known source span takes precedence.
    pub fn at_step(mut self, span: Option<SourceSpan>, step: StepKind, context: String) -> Self {
        self.location = match span {
            Some(span) => Location::Span(span),
            None => Location::Step { step, context },
        };
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}]: {}",
            self.severity.as_str(),
            self.code.as_str(),
            self.message
        )
    }
}

/// True when any diagnostic in the slice is an error.
pub fn has_error(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
