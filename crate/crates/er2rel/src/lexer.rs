//! Tokenizer for the ER modeling DSL.

use crate::diag::{DiagCode, Diagnostic, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Entity,
    Subtype,
    Of,
    Relationship,
    As,
    Key,
    Ident,
    Int,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub int: Option<u32>,
    pub span: SourceSpan,
}

pub(crate) fn lex(source: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! push {
        ($kind:expr, $text:expr, $int:expr, $start:expr, $len:expr) => {
            tokens.push(Token {
                kind: $kind,
                text: $text,
                int: $int,
                span: SourceSpan::new(line, $start, $len),
            })
        };
    }

    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '/' {
            let start = col;
            chars.next();
            col += 1;
            if chars.peek() == Some(&'/') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            } else {
                diags.push(
                    Diagnostic::error(DiagCode::Syntax, "unexpected character '/'")
                        .at(Some(SourceSpan::new(line, start, 1))),
                );
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = col;
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let len = word.len() as u32;
            let kind = match word.as_str() {
                "entity" => TokenKind::Entity,
                "subtype" => TokenKind::Subtype,
                "of" => TokenKind::Of,
                "relationship" => TokenKind::Relationship,
                "as" => TokenKind::As,
                "key" => TokenKind::Key,
                _ => TokenKind::Ident,
            };
            push!(kind, word, None, start, len);
            continue;
        }
        if c.is_ascii_digit() {
            let start = col;
            let mut digits = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let len = digits.len() as u32;
            let value = match digits.parse::<u32>() {
                Ok(v) => v,
                Err(_) => {
                    diags.push(
                        Diagnostic::error(
                            DiagCode::Syntax,
                            format!("cardinality value '{digits}' is out of range"),
                        )
                        .at(Some(SourceSpan::new(line, start, len))),
                    );
                    0
                }
            };
            push!(TokenKind::Int, digits, Some(value), start, len);
            continue;
        }
        let start = col;
        chars.next();
        col += 1;
        let kind = match c {
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ',' => Some(TokenKind::Comma),
            ';' => Some(TokenKind::Semi),
            ':' => Some(TokenKind::Colon),
            _ => None,
        };
        match kind {
            Some(kind) => push!(kind, c.to_string(), None, start, 1),
            None => diags.push(
                Diagnostic::error(DiagCode::Syntax, format!("unexpected character '{c}'"))
                    .at(Some(SourceSpan::new(line, start, 1))),
            ),
        }
    }

    tokens.push(Token {
        kind: TokenKind::Eof,
        text: "end of input".into(),
        int: None,
        span: SourceSpan::new(line, col, 0),
    });
    (tokens, diags)
}
