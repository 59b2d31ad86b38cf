//! Lossless tokenizer.
//!
//! Every byte of the input belongs to exactly one token, so concatenating the
//! token texts reproduces the input. Characters outside the PDDL alphabet are
//! emitted one at a time as [`TokenKind::InvalidChar`].

use serde::Serialize;

use crate::span::{LineIndex, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TokenKind {
    LParen,
    RParen,
    /// `:name`
    Keyword,
    /// `?name`
    Variable,
    Name,
    Number,
    /// A lone `-`.
    Dash,
    /// `;` up to (not including) the end of line.
    Comment,
    Whitespace,
    InvalidChar,
}

impl TokenKind {
    pub fn is_trivia(self) -> bool {
        matches!(self, TokenKind::Whitespace | TokenKind::Comment)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

#[derive(Debug, thiserror::Error)]
#[error("input is not valid UTF-8 (first invalid byte at offset {offset})")]
pub struct InvalidEncoding {
    pub offset: usize,
}

/// Tokenize raw bytes, rejecting invalid UTF-8.
pub fn tokenize_bytes(bytes: &[u8]) -> Result<Vec<Token>, InvalidEncoding> {
    let text = std::str::from_utf8(bytes).map_err(|e| InvalidEncoding {
        offset: e.valid_up_to(),
    })?;
    Ok(tokenize(text))
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let index = LineIndex::new(text);
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();

    while let Some(&(start, c)) = chars.peek() {
        let kind = match c {
            '(' => {
                chars.next();
                TokenKind::LParen
            }
            ')' => {
                chars.next();
                TokenKind::RParen
            }
            ';' => {
                while chars.next_if(|&(_, c)| c != '\n').is_some() {}
                TokenKind::Comment
            }
            c if c.is_whitespace() => {
                while chars.next_if(|&(_, c)| c.is_whitespace()).is_some() {}
                TokenKind::Whitespace
            }
            c if is_atom_char(c) => {
                while chars.next_if(|&(_, c)| is_atom_char(c)).is_some() {}
                let end = chars.peek().map_or(text.len(), |&(i, _)| i);
                classify_atom(&text[start..end])
            }
            _ => {
                chars.next();
                TokenKind::InvalidChar
            }
        };
        let end = chars.peek().map_or(text.len(), |&(i, _)| i);
        tokens.push(Token {
            kind,
            text: text[start..end].to_string(),
            span: index.span(start, end),
        });
    }
    tokens
}

/// Characters allowed inside names, keywords, variables and numbers.
pub fn is_atom_char(c: char) -> bool {
    c.is_ascii_alphanumeric()
        || matches!(c, '-' | '_' | ':' | '?' | '.' | '<' | '>' | '=' | '+' | '*' | '/' | '#')
}

fn classify_atom(atom: &str) -> TokenKind {
    match atom.as_bytes()[0] {
        b':' => TokenKind::Keyword,
        b'?' => TokenKind::Variable,
        _ if atom == "-" => TokenKind::Dash,
        _ if is_number(atom) => TokenKind::Number,
        _ => TokenKind::Name,
    }
}

/// Decimal integer or fraction with an optional leading minus. No exponents.
pub fn is_number(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    let all_digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    all_digits(int) && frac.is_none_or(all_digits)
}
