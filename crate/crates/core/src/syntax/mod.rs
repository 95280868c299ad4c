//! ASCII surface syntax for every calculus.
//!
//! ```text
//! types  Unit | #b | #R | Ch[Unit] | Ch[T, .. -> T] | Ch[T, ..] | T -> T
//! λ      * | x | \x:T. M | M M | M | M
//! adm    let[inf|1|0] x = V in D | @(D, D, ..) | D | D      V ::= * | \x:T, ... . D
//! π      new x (P) | new x ([!]x(y, ..).P | P) | x!(y, ..) | P | P
//! ```

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use lexer::locate_ident;
pub use parser::{parse_adm, parse_lam, parse_pi, parse_type};
pub use printer::{
    pretty_adm, pretty_lam, print_adm, print_adm_term, print_adm_value, print_lam, print_pi, print_pi_type, print_type,
};

use crate::kernel::Term;
use crate::types::Calculus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

/// Parses `src` with the grammar of `calc`.
pub fn parse_term(src: &str, calc: Calculus) -> Result<Term, ParseError> {
    Ok(match calc {
        Calculus::Lam | Calculus::LamPar => Term::Lam(parse_lam(src)?),
        Calculus::Adm | Calculus::AdmPar | Calculus::Cps | Calculus::CpsPar => Term::Adm(parse_adm(src)?),
        Calculus::Pi => Term::Pi(parse_pi(src)?),
    })
}

/// Source form of any term, re-parseable with [`parse_term`].
pub fn print_term(t: &Term) -> String {
    match t {
        Term::Lam(m) => print_lam(m),
        Term::Adm(d) => print_adm(d),
        Term::Pi(p) => print_pi(p),
    }
}

/// Reader-facing form of any term.
pub fn pretty_term(t: &Term) -> String {
    match t {
        Term::Lam(m) => pretty_lam(m),
        Term::Adm(d) => pretty_adm(d),
        Term::Pi(p) => print_pi(p),
    }
}
