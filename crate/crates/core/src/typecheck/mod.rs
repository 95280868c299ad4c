//! Typing judgments for every calculus.
//!
//! The λ-calculi are checked directly from their annotations. The
//! administrative calculi and π go through a small unifier because a few
//! types are left open by the rules: the codomain and parameters of a `let₀`
//! definition, whose value is never typed, and every π binder.

mod adm;
mod lam;
mod pi;
mod unify;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ident::Ident;
use crate::kernel::{AdmDecl, LamTerm, PiProc, Term};
use crate::types::{Calculus, TypeExpr};

pub use adm::cps_shape;
pub use unify::{Clash, MetaKind, Ty, Unifier};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Ident),
    #[error("`{0}` is already in the context")]
    DuplicateName(Ident),
    #[error("`{name}` expects {expected} argument(s), given {found}")]
    ArityMismatch { name: Ident, expected: usize, found: usize },
    #[error("behaviour type used as a value type: {ty}")]
    BehaviorMisuse { name: Option<Ident>, ty: TypeExpr },
    #[error("`{0}` is used inside its own definition or before it is defined")]
    RecursiveDefinition(Ident),
    #[error("usage of `{name}`: {reason}")]
    UsageViolation { name: Ident, reason: &'static str },
    #[error("outside the fragment: {0}")]
    NotInFragment(String),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { name: Option<Ident>, expected: TypeExpr, found: TypeExpr },
    #[error("not a function: {ty}")]
    NotAFunction { name: Option<Ident>, ty: TypeExpr },
    #[error("ill-formed type {ty}")]
    IllFormedType { name: Option<Ident>, ty: TypeExpr },
    #[error("a {sort} term cannot be checked in calculus {calculus}")]
    WrongCalculus { calculus: Calculus, sort: &'static str },
}

impl TypeError {
    /// The identifier the error is about, for locating it in source text.
    pub fn culprit(&self) -> Option<&Ident> {
        match self {
            TypeError::UnboundVariable(x) | TypeError::DuplicateName(x) | TypeError::RecursiveDefinition(x) => Some(x),
            TypeError::ArityMismatch { name, .. } | TypeError::UsageViolation { name, .. } => Some(name),
            TypeError::BehaviorMisuse { name, .. }
            | TypeError::TypeMismatch { name, .. }
            | TypeError::NotAFunction { name, .. }
            | TypeError::IllFormedType { name, .. } => name.as_ref(),
            TypeError::NotInFragment(_) | TypeError::WrongCalculus { .. } => None,
        }
    }
}

/// Γ: a finite map from names to types, never holding `#b` or `#R`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypingContext {
    entries: BTreeMap<Ident, TypeExpr>,
}

impl TypingContext {
    pub fn new() -> Self {
        TypingContext::default()
    }

    /// `Γ, x:A`, defined only when `x` is new and `A` is not a behaviour.
    pub fn extend(&self, x: impl Into<Ident>, ty: TypeExpr) -> Result<TypingContext, TypeError> {
        let x = x.into();
        if self.entries.contains_key(&x) {
            return Err(TypeError::DuplicateName(x));
        }
        if !ty.is_value_type() {
            return Err(TypeError::BehaviorMisuse { name: Some(x), ty });
        }
        let mut next = self.clone();
        next.entries.insert(x, ty);
        Ok(next)
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Ident, TypeExpr)>) -> Result<TypingContext, TypeError> {
        entries.into_iter().try_fold(TypingContext::new(), |ctx, (x, t)| ctx.extend(x, t))
    }

    pub fn get(&self, x: &Ident) -> Option<&TypeExpr> {
        self.entries.get(x)
    }

    pub fn entries(&self) -> &BTreeMap<Ident, TypeExpr> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    fn check_for(&self, calc: Calculus) -> Result<(), TypeError> {
        for (x, t) in &self.entries {
            if !t.is_value_type_of(calc) {
                return Err(if t.contains_behavior() && !calc.has_par() {
                    TypeError::BehaviorMisuse { name: Some(x.clone()), ty: t.clone() }
                } else {
                    TypeError::IllFormedType { name: Some(x.clone()), ty: t.clone() }
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for TypingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries.iter().map(|(x, t)| format!("{x}: {t}")).collect();
        f.write_str(&items.join(", "))
    }
}

/// Outcome of a successful check: a type, or plain well-formedness for π.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inferred {
    Type(TypeExpr),
    Ok,
}

impl Inferred {
    pub fn ty(&self) -> Option<&TypeExpr> {
        match self {
            Inferred::Type(t) => Some(t),
            Inferred::Ok => None,
        }
    }
}

impl fmt::Display for Inferred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inferred::Type(t) => write!(f, "{t}"),
            Inferred::Ok => f.write_str("ok"),
        }
    }
}

/// Result type plus the type given to every binder.
///
/// Binders are keyed by name, so a shadowed name keeps the type of its last
/// occurrence; callers needing all of them should uniquify first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Typing {
    pub ty: TypeExpr,
    pub binders: BTreeMap<Ident, TypeExpr>,
}

pub fn infer_type(ctx: &TypingContext, t: &Term, calc: Calculus) -> Result<Inferred, TypeError> {
    match (t, calc) {
        (Term::Lam(m), Calculus::Lam | Calculus::LamPar) => check_lam(ctx, m, calc).map(Inferred::Type),
        (Term::Adm(d), c) if c.is_admin() => check_adm(ctx, d, c).map(|t| Inferred::Type(t.ty)),
        (Term::Pi(p), Calculus::Pi) => check_pi(ctx, p).map(|_| Inferred::Ok),
        _ => Err(TypeError::WrongCalculus { calculus: calc, sort: t.sort() }),
    }
}

pub fn check_lam(ctx: &TypingContext, t: &LamTerm, calc: Calculus) -> Result<TypeExpr, TypeError> {
    let mode = match calc {
        Calculus::Lam => lam::Mode::Plain,
        Calculus::LamPar => lam::Mode::Par,
        _ => return Err(TypeError::WrongCalculus { calculus: calc, sort: "lam" }),
    };
    ctx.check_for(calc)?;
    lam::infer(ctx, t, mode)
}

/// The simply typed calculus over `Unit` and `#b`, with `#b` allowed in
/// argument position. Used to type the parallel-composition encoding.
pub fn infer_lambda_p(ctx: &TypingContext, t: &LamTerm) -> Result<TypeExpr, TypeError> {
    lam::infer(ctx, t, lam::Mode::Behavioural)
}

pub fn check_adm(ctx: &TypingContext, d: &AdmDecl, calc: Calculus) -> Result<Typing, TypeError> {
    if !calc.is_admin() {
        return Err(TypeError::WrongCalculus { calculus: calc, sort: "adm" });
    }
    ctx.check_for(calc)?;
    adm::check(ctx, d, calc)
}

/// π well-formedness; the binder map gives the inferred channel types.
pub fn check_pi(ctx: &TypingContext, p: &PiProc) -> Result<BTreeMap<Ident, TypeExpr>, TypeError> {
    ctx.check_for(Calculus::Pi)?;
    pi::check(ctx, p)
}

/// Monadic types: `Ch(1)` and `Ch(A → A')` with `A, A'` monadic (or `#b`
/// as a result).
pub fn is_monadic(a: &TypeExpr) -> bool {
    match a {
        TypeExpr::Behavior => true,
        TypeExpr::Chan(p) => match p.as_ref() {
            TypeExpr::Unit => true,
            TypeExpr::Arrow(dom, cod) => dom.len() == 1 && dom[0] != TypeExpr::Behavior && is_monadic(&dom[0]) && is_monadic(cod),
            _ => false,
        },
        _ => false,
    }
}

/// Scope stack shared by the unification-based checkers. `None` marks a
/// name that is being defined and may not be referenced yet.
#[derive(Debug, Clone, Default)]
pub(crate) struct Scope {
    frames: Vec<(Ident, Option<Ty>)>,
}

impl Scope {
    fn from_context(ctx: &TypingContext) -> Self {
        Scope { frames: ctx.entries().iter().map(|(x, t)| (x.clone(), Some(Ty::from_expr(t)))).collect() }
    }

    fn push(&mut self, x: Ident, t: Option<Ty>) {
        self.frames.push((x, t));
    }

    fn len(&self) -> usize {
        self.frames.len()
    }

    fn truncate(&mut self, n: usize) {
        self.frames.truncate(n);
    }

    /// Innermost binding wins, pending or not.
    fn lookup_strict(&self, x: &Ident) -> Result<Ty, TypeError> {
        match self.frames.iter().rev().find(|(y, _)| y == x) {
            Some((_, Some(t))) => Ok(t.clone()),
            Some((_, None)) => Err(TypeError::RecursiveDefinition(x.clone())),
            None => Err(TypeError::UnboundVariable(x.clone())),
        }
    }

    /// Innermost defined binding; pending names only explain a failure.
    fn lookup_lexical(&self, x: &Ident) -> Result<Ty, TypeError> {
        let mut pending = false;
        for (y, t) in self.frames.iter().rev() {
            if y == x {
                match t {
                    Some(t) => return Ok(t.clone()),
                    None => pending = true,
                }
            }
        }
        Err(if pending { TypeError::RecursiveDefinition(x.clone()) } else { TypeError::UnboundVariable(x.clone()) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_adm, parse_lam, parse_pi, parse_type};

    fn ty(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    #[test]
    fn star_and_identity() {
        let ctx = TypingContext::new();
        assert_eq!(check_lam(&ctx, &LamTerm::Star, Calculus::Lam).unwrap(), TypeExpr::Unit);
        let id = parse_lam("\\x:Unit. x").unwrap();
        assert_eq!(check_lam(&ctx, &id, Calculus::Lam).unwrap(), ty("Unit -> Unit"));
    }

    #[test]
    fn context_rejects_duplicates_and_behaviour() {
        let ctx = TypingContext::new().extend("x", TypeExpr::Unit).unwrap();
        assert!(matches!(ctx.extend("x", TypeExpr::Unit), Err(TypeError::DuplicateName(_))));
        assert!(matches!(ctx.extend("y", TypeExpr::Behavior), Err(TypeError::BehaviorMisuse { .. })));
    }

    #[test]
    fn recursive_processes_rejected() {
        let p1 = parse_pi("new x (!x(y).x!(y) | x!(z))").unwrap();
        let ctx = TypingContext::new().extend("z", TypeExpr::chan_unit()).unwrap();
        assert!(matches!(check_pi(&ctx, &p1), Err(TypeError::RecursiveDefinition(_))));
        let p2 = parse_pi("new x (!x(y).x'!(y) | new x' (!x'(y).x!(y) | x!(y)))").unwrap();
        let ctx2 = TypingContext::new().extend("y", TypeExpr::chan_unit()).unwrap();
        assert!(matches!(check_pi(&ctx2, &p2), Err(TypeError::RecursiveDefinition(_))));
    }

    #[test]
    fn ill_typed_let_zero_value_is_ignored() {
        let d = parse_adm("let x = * in let[0] g = \\y:Unit. @(y, y, y) in @(g, x)").unwrap();
        let t = check_adm(&TypingContext::new(), &d, Calculus::CpsPar).unwrap();
        assert_eq!(t.ty, TypeExpr::Behavior);
        assert_eq!(t.binders[&Ident::parse("g")], ty("Ch[Ch[Unit] -> #b]"));
    }

    #[test]
    fn adm_rules() {
        let ctx = TypingContext::new();
        let ok = parse_adm("let x = * in let f = \\y:Ch[Unit]. y in @(f, x)").unwrap();
        assert_eq!(check_adm(&ctx, &ok, Calculus::Adm).unwrap().ty, TypeExpr::chan_unit());
        let rec = parse_adm("let f = \\y:Ch[Unit]. @(f, y) in f").unwrap();
        assert!(matches!(check_adm(&ctx, &rec, Calculus::Adm), Err(TypeError::RecursiveDefinition(_))));
        let once_star = parse_adm("let[1] x = * in x").unwrap();
        assert!(matches!(check_adm(&ctx, &once_star, Calculus::AdmPar), Err(TypeError::UsageViolation { .. })));
        let arity = parse_adm("let x = * in let f = \\y:Ch[Unit]. y in @(f, x, x)").unwrap();
        assert!(matches!(check_adm(&ctx, &arity, Calculus::Adm), Err(TypeError::ArityMismatch { .. })));
        let bare = parse_adm("let x = * in x").unwrap();
        assert!(matches!(check_adm(&ctx, &bare, Calculus::Cps), Err(TypeError::NotInFragment(_))));
    }

    #[test]
    fn pi_infers_channel_types() {
        let p = parse_pi("new x (!x(y).y!(y) | new w (x!(w)))");
        // `y!(y)` needs `y : Ch[y]`, which has no finite solution.
        assert!(matches!(check_pi(&TypingContext::new(), &p.unwrap()), Err(TypeError::TypeMismatch { .. })));
        let q = parse_pi("new x (!x(y, k).k!(y) | new w (new k (x!(w, k))))").unwrap();
        let binders = check_pi(&TypingContext::new(), &q).unwrap();
        assert_eq!(binders[&Ident::parse("x")], ty("Ch[Ch[Unit], Ch[Ch[Unit] -> #b] -> #b]"));
    }

    #[test]
    fn monadic_examples() {
        assert!(is_monadic(&ty("Ch[Unit]")));
        assert!(is_monadic(&ty("Ch[Ch[Unit] -> Ch[Unit]]")));
        assert!(!is_monadic(&ty("Ch[Ch[Unit], Ch[Unit] -> Ch[Unit]]")));
    }

    #[test]
    fn lambda_p_accepts_behaviour_arguments() {
        let ctx = TypingContext::new().extend("p", ty("#b -> (#b -> #b)")).unwrap();
        let t = parse_lam("\\x:#b. \\y:#b. p x y").unwrap();
        assert_eq!(infer_lambda_p(&ctx, &t).unwrap(), ty("#b -> (#b -> #b)"));
        assert!(check_lam(&TypingContext::new(), &parse_lam("\\x:#b. x").unwrap(), Calculus::LamPar).is_err());
    }
}
