//! Lexer and parser for the QF_IDL subset of SMT-LIB v2.6.

pub mod ast;
pub mod lexer;
pub mod parser;

use thiserror::Error;

pub use ast::{AttrValue, CmpOp, ScriptCommand, Sort, Term, Valuation};
pub use lexer::{tokenize, CharSource, Lexer, ReaderSource, StrSource, Token, TokenKind};
pub use parser::{parse_command, parse_script, DeclEnv, Parser};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("{line}:{col}: lexical error: {message}")]
    Lex { line: u32, col: u32, message: String },
    #[error("{line}:{col}: parse error: {message}")]
    Parse { line: u32, col: u32, message: String },
    #[error("{line}:{col}: sort error: {message}")]
    Sort { line: u32, col: u32, message: String },
    #[error("{line}:{col}: unknown symbol `{symbol}`")]
    UnknownSymbol { line: u32, col: u32, symbol: String },
    #[error("{line}:{col}: unsupported command {name}")]
    UnsupportedCommand { line: u32, col: u32, name: String },
}

impl FrontendError {
    pub fn position(&self) -> Option<(u32, u32)> {
        match *self {
            FrontendError::Lex { line, col, .. }
            | FrontendError::Parse { line, col, .. }
            | FrontendError::Sort { line, col, .. }
            | FrontendError::UnknownSymbol { line, col, .. }
            | FrontendError::UnsupportedCommand { line, col, .. } => Some((line, col)),
        }
    }
}
