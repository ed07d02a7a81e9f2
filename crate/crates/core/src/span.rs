//! Source positions attached to statements.

use std::fmt;
use std::hash::{Hash, Hasher};

/// A line/column position. Spans are metadata only: two spans always
/// compare equal so structural equality of statements ignores them.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _state: &mut H) {}
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Generates `base__N` names. User identifiers cannot contain `__`, so these
/// never collide with source names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fresh {
    next: u64,
}

impl Fresh {
    pub fn new() -> Self {
        Fresh { next: 0 }
    }

    /// A generator whose names avoid every `base__N` among `used`.
    pub fn avoiding<'a>(used: impl IntoIterator<Item = &'a str>) -> Self {
        let next = used
            .into_iter()
            .filter_map(|x| x.rfind("__").and_then(|i| x[i + 2..].parse::<u64>().ok()))
            .map(|n| n + 1)
            .max()
            .unwrap_or(0);
        Fresh { next }
    }

    pub fn name(&mut self, base: &str) -> String {
        let root = match base.find("__") {
            Some(i) if i > 0 => &base[..i],
            Some(_) => "t",
            None => base,
        };
        let n = self.next;
        self.next += 1;
        format!("{root}__{n}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_never_distinguish() {
        assert_eq!(Span::new(1, 2), Span::new(9, 9));
    }

    #[test]
    fn fresh_strips_old_suffix() {
        let mut f = Fresh::new();
        assert_eq!(f.name("out"), "out__0");
        assert_eq!(f.name("out__0"), "out__1");
        assert_eq!(f.name("__heap"), "t__2");
    }
}
