use super::FrontendError;
use crate::span::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

const KEYWORDS: &[&str] = &[
    "fun", "let", "if", "else", "with", "do", "return", "null", "true", "false", "default", "had",
    "type", "not", "skip", "alloc", "uint", "bool", "ptr",
];

// Longest first so that maximal munch falls out of a linear scan.
const SYMBOLS: &[&str] = &[
    "<->", "<-", "->", "==", "!=", "&&", "||", "+", "-", "*", ".", "&", "(", ")", "{", "}", "[",
    "]", ",", ";", ":", "<", ">", "=",
];

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Token>, FrontendError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, n: usize| {
        for _ in 0..n {
            if bytes[*i] == b'\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if src[i..].starts_with("//") {
            while i < bytes.len() && bytes[i] != b'\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if src[i..].starts_with("/*") {
            let start = Span::new(line, col);
            match src[i + 2..].find("*/") {
                Some(end) => advance(&mut i, &mut line, &mut col, end + 4),
                None => return Err(FrontendError::new(start, "unterminated comment")),
            }
            continue;
        }
        let span = Span::new(line, col);
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                advance(&mut i, &mut line, &mut col, 1);
            }
            let word = &src[start..i];
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Kw(k),
                None => {
                    if word.contains("__") {
                        return Err(FrontendError::new(
                            span,
                            format!("identifier `{word}` may not contain `__`"),
                        ));
                    }
                    Tok::Ident(word.to_string())
                }
            };
            out.push(Token { tok, span });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col, 1);
            }
            let n = src[start..i]
                .parse::<u64>()
                .map_err(|_| FrontendError::new(span, "integer literal too large"))?;
            out.push(Token { tok: Tok::Int(n), span });
            continue;
        }
        match SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            Some(s) => {
                advance(&mut i, &mut line, &mut col, s.len());
                out.push(Token { tok: Tok::Sym(s), span });
            }
            None => {
                let ch = src[i..].chars().next().unwrap();
                return Err(FrontendError::new(span, format!("unexpected character `{ch}`")));
            }
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(line, col) });
    Ok(out)
}
