use std::collections::BTreeMap;

use super::{TypeError, TypingContext};
use crate::ident::Ident;
use crate::kernel::LamTerm;
use crate::types::{Calculus, TypeExpr};

#[derive(Clone, Copy, PartialEq, Eq)]
pub(super) enum Mode {
    Plain,
    Par,
    /// Types over `Unit` and `#b` in any position, no parallel composition.
    Behavioural,
}

pub(super) fn infer(ctx: &TypingContext, t: &LamTerm, mode: Mode) -> Result<TypeExpr, TypeError> {
    let mut env: BTreeMap<Ident, TypeExpr> = ctx.entries().clone();
    go(&mut env, t, mode)
}

fn well_formed(a: &TypeExpr, mode: Mode) -> bool {
    match mode {
        Mode::Plain => a.is_value_type_of(Calculus::Lam),
        Mode::Par => a.is_value_type_of(Calculus::LamPar),
        Mode::Behavioural => match a {
            TypeExpr::Unit | TypeExpr::Behavior => true,
            TypeExpr::Arrow(d, c) => d.len() == 1 && well_formed(&d[0], mode) && well_formed(c, mode),
            _ => false,
        },
    }
}

fn go(env: &mut BTreeMap<Ident, TypeExpr>, t: &LamTerm, mode: Mode) -> Result<TypeExpr, TypeError> {
    match t {
        LamTerm::Star => Ok(TypeExpr::Unit),
        LamTerm::Var(x) => env.get(x).cloned().ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        LamTerm::Abs(x, a, body) => {
            if mode != Mode::Behavioural && a.contains_behavior() && !well_formed(a, mode) {
                return Err(TypeError::BehaviorMisuse { name: Some(x.clone()), ty: a.clone() });
            }
            if !well_formed(a, mode) {
                return Err(TypeError::IllFormedType { name: Some(x.clone()), ty: a.clone() });
            }
            let saved = env.insert(x.clone(), a.clone());
            let res = go(env, body, mode);
            match saved {
                Some(prev) => env.insert(x.clone(), prev),
                None => env.remove(x),
            };
            let cod = res?;
            if mode == Mode::Plain && cod == TypeExpr::Behavior {
                return Err(TypeError::NotInFragment("behaviour result in the sequential calculus".into()));
            }
            Ok(TypeExpr::arrow(a.clone(), cod))
        }
        LamTerm::App(f, arg) => {
            let tf = go(env, f, mode)?;
            let ta = go(env, arg, mode)?;
            match tf {
                TypeExpr::Arrow(dom, cod) if dom.len() == 1 => {
                    if dom[0] != ta {
                        return Err(TypeError::TypeMismatch { name: head_name(arg), expected: dom[0].clone(), found: ta });
                    }
                    Ok(*cod)
                }
                other => Err(TypeError::NotAFunction { name: head_name(f), ty: other }),
            }
        }
        LamTerm::Par(l, r) => {
            if mode != Mode::Par {
                return Err(TypeError::NotInFragment("parallel composition outside the concurrent calculus".into()));
            }
            for side in [l, r] {
                let ty = go(env, side, mode)?;
                if ty != TypeExpr::Behavior {
                    return Err(TypeError::TypeMismatch { name: head_name(side), expected: TypeExpr::Behavior, found: ty });
                }
            }
            Ok(TypeExpr::Behavior)
        }
    }
}

fn head_name(t: &LamTerm) -> Option<Ident> {
    match t {
        LamTerm::Var(x) => Some(x.clone()),
        LamTerm::App(f, _) => head_name(f),
        _ => None,
    }
}
