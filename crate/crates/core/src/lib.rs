//! Compiler and decompiler between call-by-value λ-calculi, their
//! administrative and continuation-passing forms, and a typed π-calculus.

pub mod encodings;
pub mod harness;
pub mod ident;
pub mod kernel;
pub mod reduce;
pub mod syntax;
pub mod translate;
pub mod typecheck;
pub mod types;

pub use ident::{Ident, NameSupply};
pub use kernel::{AdmDecl, AdmTerm, AdmValue, Binding, LamTerm, Param, PiProc, Term};
pub use types::{Calculus, TypeExpr, Usage};
