//! Surface syntax: lexing, parsing, inlining of bounded recursion, desugaring.

mod ast;
mod desugar;
mod inline;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use desugar::{desugar, zero_value, HEAP_HEAD};
pub use inline::{infer_ret_type, instantiate_and_inline, InlinedProgram};
pub use lexer::{lex, Tok, Token};
pub use parser::parse_program;
pub use printer::{print_block, print_program, print_sexpr};

use crate::span::Span;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct FrontendError {
    pub span: Span,
    pub message: String,
}

impl FrontendError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        FrontendError { span, message: message.into() }
    }
}
