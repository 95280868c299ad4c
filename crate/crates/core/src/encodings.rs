//! Concurrency idioms written as macro-expansions into the concurrent
//! administrative calculus.
//!
//! Joined definitions are simulated by ordinary sequential ones. A
//! definition that must never run is bound with usage `0` to an
//! abstraction; calling it blocks forever, which plays the role of the
//! inert process.

use std::fmt;

use thiserror::Error;

use crate::ident::{Ident, NameSupply};
use crate::kernel::desugar::apply_decls;
use crate::kernel::{AdmDecl, AdmTerm, AdmValue, Binding, Param};
use crate::typecheck::{check_adm, TypingContext};
use crate::types::{Calculus, TypeExpr, Usage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingName {
    OutputPrefix,
    InternalChoice,
    ExternalChoice,
    MultiDef,
    JoinedDef,
    LockUnlock,
    CcsChannel,
}

impl EncodingName {
    pub const ALL: [EncodingName; 7] = [
        EncodingName::OutputPrefix,
        EncodingName::InternalChoice,
        EncodingName::ExternalChoice,
        EncodingName::MultiDef,
        EncodingName::JoinedDef,
        EncodingName::LockUnlock,
        EncodingName::CcsChannel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingName::OutputPrefix => "output-prefix",
            EncodingName::InternalChoice => "internal-choice",
            EncodingName::ExternalChoice => "external-choice",
            EncodingName::MultiDef => "multi-def",
            EncodingName::JoinedDef => "joined-def",
            EncodingName::LockUnlock => "lock-unlock",
            EncodingName::CcsChannel => "ccs-channel",
        }
    }

    pub fn from_name(s: &str) -> Option<EncodingName> {
        EncodingName::ALL.into_iter().find(|e| e.name() == s)
    }

    /// Argument kinds, in order. A trailing `+` group may repeat.
    pub fn signature(self) -> &'static str {
        match self {
            EncodingName::OutputPrefix => "name name decl",
            EncodingName::InternalChoice => "decl decl",
            EncodingName::ExternalChoice => "decl decl decl",
            EncodingName::MultiDef => "name value+ decl",
            EncodingName::JoinedDef => "(name value)+ decl",
            EncodingName::LockUnlock => "name decl",
            EncodingName::CcsChannel => "name name decl",
        }
    }
}

impl fmt::Display for EncodingName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodingArg {
    Name(Ident),
    Value(AdmValue),
    Decl(AdmDecl),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("{encoding} expects arguments `{expected}`, got {found} argument(s)")]
    ArityMismatch { encoding: EncodingName, expected: &'static str, found: usize },
    #[error("ill-typed argument: {0}")]
    IllTypedArgument(String),
}

/// `Ch[Ch[Unit] -> #b]`, a continuation that is handed a unit name.
pub fn unit_continuation() -> TypeExpr {
    TypeExpr::chan_fn(vec![TypeExpr::chan_unit()], TypeExpr::Behavior)
}

/// Church booleans over unit continuations: `Ch[K, K -> K]`.
pub fn boolean_type() -> TypeExpr {
    let k = unit_continuation();
    TypeExpr::chan_fn(vec![k.clone(), k.clone()], k)
}

/// Type of the name handed to a thread that acquired the lock.
pub fn unlock_type() -> TypeExpr {
    unit_continuation()
}

/// Type of `lock`: it takes the thread's continuation.
pub fn lock_type() -> TypeExpr {
    TypeExpr::chan_fn(vec![TypeExpr::chan_fn(vec![unlock_type()], TypeExpr::Behavior)], TypeExpr::Behavior)
}

pub fn expand_encoding(which: EncodingName, args: &[EncodingArg], ctx: &TypingContext) -> Result<AdmDecl, EncodingError> {
    let arity = || EncodingError::ArityMismatch { encoding: which, expected: which.signature(), found: args.len() };
    let mut supply = supply_for(args, ctx);
    let out = match (which, args) {
        (EncodingName::OutputPrefix, [EncodingArg::Name(x), EncodingArg::Name(y), EncodingArg::Decl(d)]) => {
            output_prefix(x, y, d, ctx, &mut supply)?
        }
        (EncodingName::InternalChoice, [EncodingArg::Decl(m), EncodingArg::Decl(n)]) => {
            require_behaviour(m, ctx)?;
            require_behaviour(n, ctx)?;
            internal_choice(m, n, &mut supply)
        }
        (EncodingName::ExternalChoice, [EncodingArg::Decl(b), EncodingArg::Decl(m), EncodingArg::Decl(n)]) => {
            external_choice(b, m, n, &mut supply)
        }
        (EncodingName::MultiDef, [EncodingArg::Name(x), values @ .., EncodingArg::Decl(d)]) if !values.is_empty() => {
            let values = values
                .iter()
                .map(|a| match a {
                    EncodingArg::Value(v) => Ok(v.clone()),
                    _ => Err(arity()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            multi_def(x, &values, d, ctx, &mut supply)?
        }
        (EncodingName::JoinedDef, [defs @ .., EncodingArg::Decl(d)]) if !defs.is_empty() && defs.len() % 2 == 0 => {
            let mut bindings = Vec::with_capacity(defs.len() / 2);
            for pair in defs.chunks(2) {
                match pair {
                    [EncodingArg::Name(x), EncodingArg::Value(v)] => bindings.push(Binding::new(Usage::Infinite, x.clone(), v.clone())),
                    _ => return Err(arity()),
                }
            }
            prefix(bindings, d)
        }
        (EncodingName::LockUnlock, [EncodingArg::Name(lock), EncodingArg::Decl(m)]) => lock_unlock(lock, m, &mut supply),
        (EncodingName::CcsChannel, [EncodingArg::Name(inp), EncodingArg::Name(out), EncodingArg::Decl(m)]) => {
            ccs_channel(inp, out, m, &mut supply)
        }
        _ => return Err(arity()),
    };
    match check_adm(ctx, &out, Calculus::AdmPar) {
        Ok(t) if t.ty == TypeExpr::Behavior => Ok(out),
        Ok(t) => Err(EncodingError::IllTypedArgument(format!("expansion has type {}, expected #b", t.ty))),
        Err(e) => Err(EncodingError::IllTypedArgument(e.to_string())),
    }
}

fn supply_for(args: &[EncodingArg], ctx: &TypingContext) -> NameSupply {
    let mut names: Vec<Ident> = ctx.entries().keys().cloned().collect();
    for a in args {
        match a {
            EncodingArg::Name(x) => names.push(x.clone()),
            EncodingArg::Value(v) => v.idents(&mut names),
            EncodingArg::Decl(d) => d.idents(&mut names),
        }
    }
    NameSupply::avoiding(names.iter())
}

fn require_behaviour(d: &AdmDecl, ctx: &TypingContext) -> Result<(), EncodingError> {
    match check_adm(ctx, d, Calculus::AdmPar) {
        Ok(t) if t.ty == TypeExpr::Behavior => Ok(()),
        Ok(t) => Err(EncodingError::IllTypedArgument(format!("branch has type {}, expected #b", t.ty))),
        Err(e) => Err(EncodingError::IllTypedArgument(e.to_string())),
    }
}

fn prefix(mut bindings: Vec<Binding>, d: &AdmDecl) -> AdmDecl {
    bindings.extend(d.bindings.iter().cloned());
    AdmDecl::new(bindings, d.body.clone())
}

fn call(f: &Ident, args: &[&Ident]) -> AdmTerm {
    AdmTerm::call(f.clone(), args.iter().map(|a| (*a).clone()))
}

/// `let₁ k = λw.D in @(x, y, k)`.
fn output_prefix(x: &Ident, y: &Ident, d: &AdmDecl, ctx: &TypingContext, supply: &mut NameSupply) -> Result<AdmDecl, EncodingError> {
    let ack = ctx
        .get(x)
        .and_then(|t| t.as_chan_fn())
        .filter(|(dom, cod)| dom.len() == 2 && **cod == TypeExpr::Behavior)
        .and_then(|(dom, _)| dom[1].as_chan_fn().map(|(a, _)| a.to_vec()))
        .filter(|a| a.len() == 1)
        .ok_or_else(|| EncodingError::IllTypedArgument(format!("`{x}` must have type Ch[A, Ch[B -> #b] -> #b]")))?;
    let (k, w) = (supply.fresh("k"), supply.fresh("w"));
    let value = AdmValue::abs(vec![Param::new(w, ack[0].clone())], d.clone());
    Ok(AdmDecl::new(vec![Binding::new(Usage::One, k.clone(), value)], call(x, &[y, &k])))
}

/// `M ⊕ N`: a single-use `y` hands the unit name to whichever of the two
/// continuations calls it first.
fn internal_choice(m: &AdmDecl, n: &AdmDecl, supply: &mut NameSupply) -> AdmDecl {
    let (x, y, k) = (supply.fresh("x"), supply.fresh("y"), supply.fresh("k"));
    let (k1, k2, w1, w2) = (supply.fresh("k"), supply.fresh("k"), supply.fresh("w"), supply.fresh("w"));
    let bindings = vec![
        Binding::new(Usage::Infinite, x.clone(), AdmValue::Star),
        Binding::new(
            Usage::One,
            y.clone(),
            AdmValue::abs(vec![Param::new(k.clone(), unit_continuation())], AdmDecl::term(call(&k, &[&x]))),
        ),
        Binding::new(Usage::One, k1.clone(), AdmValue::abs(vec![Param::new(w1, TypeExpr::chan_unit())], m.clone())),
        Binding::new(Usage::One, k2.clone(), AdmValue::abs(vec![Param::new(w2, TypeExpr::chan_unit())], n.clone())),
    ];
    AdmDecl::new(bindings, AdmTerm::par(call(&y, &[&k1]), call(&y, &[&k2])))
}

/// The boolean selects one of two continuations, which is then run.
fn external_choice(b: &AdmDecl, m: &AdmDecl, n: &AdmDecl, supply: &mut NameSupply) -> AdmDecl {
    let (x, y, z) = (supply.fresh("x"), supply.fresh("y"), supply.fresh("z"));
    let (k1, k2, w1, w2) = (supply.fresh("k"), supply.fresh("k"), supply.fresh("w"), supply.fresh("w"));
    let body = AdmDecl::new(
        vec![
            Binding::new(Usage::Infinite, k1.clone(), AdmValue::abs(vec![Param::new(w1, TypeExpr::chan_unit())], m.clone())),
            Binding::new(Usage::Infinite, k2.clone(), AdmValue::abs(vec![Param::new(w2, TypeExpr::chan_unit())], n.clone())),
        ],
        AdmTerm::app(AdmTerm::app(AdmTerm::Var(z.clone()), vec![AdmTerm::Var(k1), AdmTerm::Var(k2)]), vec![AdmTerm::Var(x.clone())]),
    );
    let head = AdmDecl::new(
        vec![
            Binding::new(Usage::Infinite, x, AdmValue::Star),
            Binding::new(Usage::One, y.clone(), AdmValue::abs(vec![Param::new(z, boolean_type())], body)),
        ],
        AdmTerm::Var(y),
    );
    apply_decls(&head, std::slice::from_ref(b))
}

/// One definition of `x` that takes the arguments and then chooses
/// internally among the branches.
fn multi_def(x: &Ident, values: &[AdmValue], d: &AdmDecl, ctx: &TypingContext, supply: &mut NameSupply) -> Result<AdmDecl, EncodingError> {
    let names: Vec<Ident> = values.iter().map(|_| supply.fresh("v")).collect();
    let mut types = Vec::with_capacity(values.len());
    for (v, name) in values.iter().zip(&names) {
        let probe = AdmDecl::new(vec![Binding::new(Usage::Infinite, name.clone(), v.clone())], AdmTerm::Var(name.clone()));
        let t = check_adm(ctx, &probe, Calculus::AdmPar).map_err(|e| EncodingError::IllTypedArgument(e.to_string()))?.ty;
        types.push(t);
    }
    let (dom, cod) = types[0]
        .as_chan_fn()
        .map(|(d, c)| (d.to_vec(), c.clone()))
        .ok_or_else(|| EncodingError::IllTypedArgument("definitions must be abstractions".into()))?;
    if cod != TypeExpr::Behavior || types.iter().any(|t| *t != types[0]) {
        return Err(EncodingError::IllTypedArgument("definitions must share one type Ch[A.. -> #b]".into()));
    }
    let params: Vec<Param> = dom.iter().map(|a| Param::new(supply.fresh("y"), a.clone())).collect();
    let args: Vec<&Ident> = params.iter().map(|p| &p.name).collect();
    let mut branches = names.iter().map(|v| AdmDecl::term(call(v, &args))).rev();
    let last = branches.next().expect("at least one definition");
    let choice = branches.fold(last, |acc, b| internal_choice(&b, &acc, supply));
    let mut bindings: Vec<Binding> = values.iter().zip(&names).map(|(v, n)| Binding::new(Usage::Infinite, n.clone(), v.clone())).collect();
    bindings.push(Binding::new(Usage::Infinite, x.clone(), AdmValue::abs(params, choice)));
    Ok(prefix(bindings, d))
}

/// Releasing is inert here: without recursion the lock cannot be handed
/// out again, so `lock` is single-use and at most one thread ever holds it.
fn lock_unlock(lock: &Ident, m: &AdmDecl, supply: &mut NameSupply) -> AdmDecl {
    let (x, idle, unlock) = (supply.fresh("x"), supply.fresh("idle"), supply.fresh("unlock"));
    let (v, w, k) = (supply.fresh("v"), supply.fresh("w"), supply.fresh("k"));
    let bindings = vec![
        Binding::new(Usage::Infinite, x.clone(), AdmValue::Star),
        Binding::new(
            Usage::Zero,
            idle.clone(),
            AdmValue::abs(vec![Param::new(v.clone(), TypeExpr::chan_unit())], AdmDecl::term(call(&v, &[&v]))),
        ),
        Binding::new(
            Usage::Infinite,
            unlock.clone(),
            AdmValue::abs(vec![Param::new(w.clone(), TypeExpr::chan_unit())], AdmDecl::term(call(&idle, &[&w]))),
        ),
        Binding::new(
            Usage::One,
            lock.clone(),
            AdmValue::abs(
                vec![Param::new(k.clone(), TypeExpr::chan_fn(vec![unlock_type()], TypeExpr::Behavior))],
                AdmDecl::term(call(&k, &[&unlock])),
            ),
        ),
    ];
    let mut d = prefix(bindings, m);
    d.body = AdmTerm::par(call(&unlock, &[&x]), d.body);
    d
}

/// Both ends hand the channel's unit name to their continuation.
fn ccs_channel(inp: &Ident, out: &Ident, m: &AdmDecl, supply: &mut NameSupply) -> AdmDecl {
    let x = supply.fresh("x");
    let end = |supply: &mut NameSupply| {
        let k = supply.fresh("k");
        AdmValue::abs(vec![Param::new(k.clone(), unit_continuation())], AdmDecl::term(call(&k, &[&x])))
    };
    let bindings = vec![
        Binding::new(Usage::Infinite, x.clone(), AdmValue::Star),
        Binding::new(Usage::Infinite, inp.clone(), end(supply)),
        Binding::new(Usage::Infinite, out.clone(), end(supply)),
    ];
    prefix(bindings, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_adm, parse_type};

    fn ctx() -> TypingContext {
        TypingContext::from_entries(
            [("m", "Ch[Ch[Unit] -> #b]"), ("n", "Ch[Ch[Unit] -> #b]"), ("a", "Ch[Unit]"), ("o", "Ch[Ch[Unit], Ch[Ch[Unit] -> #b] -> #b]")]
                .into_iter()
                .map(|(x, t)| (Ident::parse(x), parse_type(t).unwrap())),
        )
        .unwrap()
    }

    fn decl(s: &str) -> EncodingArg {
        EncodingArg::Decl(parse_adm(s).unwrap())
    }

    fn name(s: &str) -> EncodingArg {
        EncodingArg::Name(Ident::parse(s))
    }

    fn value(s: &str) -> EncodingArg {
        let d = parse_adm(&format!("let v = {s} in v")).unwrap();
        EncodingArg::Value(d.bindings[0].value.clone())
    }

    #[test]
    fn output_prefix_shape() {
        let d = expand_encoding(EncodingName::OutputPrefix, &[name("o"), name("a"), decl("@(m, a)")], &ctx()).unwrap();
        let expected = parse_adm("let[1] k = \\w:Ch[Unit]. @(m, a) in @(o, a, k)").unwrap();
        assert!(d.alpha_equal(&expected), "{d}");
    }

    #[test]
    fn internal_choice_shape() {
        let d = expand_encoding(EncodingName::InternalChoice, &[decl("@(m, a)"), decl("@(n, a)")], &ctx()).unwrap();
        assert_eq!(d.bindings.len(), 4);
        assert!(matches!(d.body, AdmTerm::Par(..)));
        assert!(expand_encoding(EncodingName::InternalChoice, &[decl("a"), decl("@(n, a)")], &ctx()).is_err());
    }

    #[test]
    fn every_encoding_typechecks() {
        let c = ctx();
        let t = decl("let t = \\p:Ch[Ch[Unit] -> #b], q:Ch[Ch[Unit] -> #b]. p in t");
        let cases: Vec<(EncodingName, Vec<EncodingArg>)> = vec![
            (EncodingName::OutputPrefix, vec![name("o"), name("a"), decl("@(m, a)")]),
            (EncodingName::InternalChoice, vec![decl("@(m, a)"), decl("@(n, a)")]),
            (EncodingName::ExternalChoice, vec![t, decl("@(m, a)"), decl("@(n, a)")]),
            (EncodingName::MultiDef, vec![name("f"), value("\\u:Ch[Unit]. @(m, u)"), value("\\u:Ch[Unit]. @(n, u)"), decl("@(f, a)")]),
            (EncodingName::JoinedDef, vec![name("f"), value("\\u:Ch[Unit]. @(m, u)"), name("g"), value("\\u:Ch[Unit]. @(f, u)"), decl("@(g, a)")]),
            (
                EncodingName::LockUnlock,
                vec![
                    name("lock"),
                    decl("let[1] c = \\u:Ch[Ch[Unit] -> #b]. (@(m, a) | @(u, a)) in let[1] d = \\u:Ch[Ch[Unit] -> #b]. (@(n, a) | @(u, a)) in @(lock, c) | @(lock, d)"),
                ],
            ),
            (EncodingName::CcsChannel, vec![name("i"), name("o2"), decl("@(i, m) | @(o2, n)")]),
        ];
        for (e, args) in cases {
            assert!(expand_encoding(e, &args, &c).is_ok(), "{e}: {:?}", expand_encoding(e, &args, &c));
        }
    }

    #[test]
    fn wrong_arguments() {
        assert!(matches!(
            expand_encoding(EncodingName::InternalChoice, &[decl("@(m, a)")], &ctx()),
            Err(EncodingError::ArityMismatch { .. })
        ));
    }

    fn graph(d: &AdmDecl) -> crate::reduce::ReductionGraph {
        use crate::kernel::Term;
        use crate::reduce::{evaluate, Outcome, StepBudget, Strategy};
        match evaluate(&Term::Adm(d.clone()), Calculus::AdmPar, Strategy::EnumerateAll, StepBudget::new(10_000).unwrap()) {
            Outcome::ReductionGraph(g) => g,
            _ => unreachable!(),
        }
    }

    fn body_calls(t: &crate::kernel::Term, f: &str) -> usize {
        fn go(t: &AdmTerm, f: &Ident) -> usize {
            match t {
                AdmTerm::App(h, _) if h.as_var() == Some(f) => 1,
                AdmTerm::Par(l, r) => go(l, f) + go(r, f),
                _ => 0,
            }
        }
        match t {
            crate::kernel::Term::Adm(d) => go(&d.body, &Ident::parse(f)),
            _ => 0,
        }
    }

    #[test]
    fn internal_choice_reaches_both_branches() {
        let d = expand_encoding(EncodingName::InternalChoice, &[decl("@(m, a)"), decl("@(n, a)")], &ctx()).unwrap();
        let g = graph(&d);
        assert!(g.complete);
        assert!(g.nodes.iter().any(|t| body_calls(t, "m") == 1 && body_calls(t, "n") == 0));
        assert!(g.nodes.iter().any(|t| body_calls(t, "n") == 1 && body_calls(t, "m") == 0));
        assert!(g.nodes.iter().all(|t| body_calls(t, "m") + body_calls(t, "n") <= 1));
    }

    #[test]
    fn lock_is_never_held_twice() {
        let threads = "let[1] c = \\u:Ch[Ch[Unit] -> #b]. (@(m, a) | @(u, a)) in \
                       let[1] d = \\u:Ch[Ch[Unit] -> #b]. (@(n, a) | @(u, a)) in @(lock, c) | @(lock, d)";
        let d = expand_encoding(EncodingName::LockUnlock, &[name("lock"), decl(threads)], &ctx()).unwrap();
        let g = graph(&d);
        assert!(g.complete);
        assert!(g.nodes.iter().any(|t| body_calls(t, "m") == 1));
        assert!(g.nodes.iter().any(|t| body_calls(t, "n") == 1));
        assert!(g.nodes.iter().all(|t| body_calls(t, "m") + body_calls(t, "n") <= 1));
    }
}
