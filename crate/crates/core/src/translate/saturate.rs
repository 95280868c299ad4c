use std::collections::BTreeMap;

use super::TranslateError;
use crate::ident::{Ident, NameSupply};
use crate::kernel::desugar::apply_decls;
use crate::kernel::{AdmDecl, AdmTerm, AdmValue, Binding, Param};
use crate::typecheck::{check_adm, TypingContext};
use crate::types::{Calculus, TypeExpr, Usage};

const SEARCH_DEPTH: usize = 4;

/// Every usage becomes `∞`; a `let₀` value, which may be ill-typed, is
/// replaced by an inhabitant of its channel type built from `*`,
/// abstractions and the names in scope.
pub fn saturate_usages(d: &AdmDecl, ctx: &TypingContext) -> Result<AdmDecl, TranslateError> {
    let d = d.uniquify();
    let typing = check_adm(ctx, &d, Calculus::AdmPar).map_err(TranslateError::IllTyped)?;
    let mut supply = d.supply();
    supply.reserve(ctx.entries().keys());
    let mut env: Vec<(Ident, TypeExpr)> = ctx.entries().iter().map(|(x, t)| (x.clone(), t.clone())).collect();
    let mut s = Saturator { types: typing.binders, supply };
    s.decl(&d, &mut env)
}

struct Saturator {
    types: BTreeMap<Ident, TypeExpr>,
    supply: NameSupply,
}

impl Saturator {
    fn decl(&mut self, d: &AdmDecl, env: &mut Vec<(Ident, TypeExpr)>) -> Result<AdmDecl, TranslateError> {
        let base = env.len();
        let mut bindings = Vec::with_capacity(d.bindings.len());
        for b in &d.bindings {
            let ty = self.types[&b.name].clone();
            let value = match (&b.value, b.usage) {
                (_, Usage::Zero) => self.inhabit_value(&ty, env, SEARCH_DEPTH).ok_or_else(|| TranslateError::CannotSaturate(b.name.clone()))?,
                (AdmValue::Star, _) => AdmValue::Star,
                (AdmValue::Abs(params, body), _) => {
                    let mark = env.len();
                    env.extend(params.iter().map(|p| (p.name.clone(), p.ty.clone())));
                    let body = self.decl(body, env);
                    env.truncate(mark);
                    AdmValue::abs(params.clone(), body?)
                }
            };
            bindings.push(Binding::new(Usage::Infinite, b.name.clone(), value));
            env.push((b.name.clone(), ty));
        }
        env.truncate(base);
        Ok(AdmDecl::new(bindings, d.body.clone()))
    }

    fn inhabit_value(&mut self, ty: &TypeExpr, env: &mut Vec<(Ident, TypeExpr)>, depth: usize) -> Option<AdmValue> {
        let (dom, cod) = ty.as_chan_fn()?;
        let params: Vec<Param> = dom.iter().map(|a| Param::new(self.supply.fresh("y"), a.clone())).collect();
        let mark = env.len();
        env.extend(params.iter().map(|p| (p.name.clone(), p.ty.clone())));
        let body = self.inhabit(cod, env, depth);
        env.truncate(mark);
        Some(AdmValue::abs(params, body?))
    }

    /// A declaration of type `ty`, preferring the innermost name that
    /// already has it.
    fn inhabit(&mut self, ty: &TypeExpr, env: &mut Vec<(Ident, TypeExpr)>, depth: usize) -> Option<AdmDecl> {
        if ty.is_value_type() {
            if let Some((x, _)) = env.iter().rev().find(|(_, t)| t == ty) {
                return Some(AdmDecl::term(AdmTerm::Var(x.clone())));
            }
        }
        match ty {
            TypeExpr::Chan(p) if **p == TypeExpr::Unit => {
                let x = self.supply.fresh("x");
                Some(AdmDecl::new(vec![Binding::new(Usage::Infinite, x.clone(), AdmValue::Star)], AdmTerm::Var(x)))
            }
            TypeExpr::Chan(_) => {
                let v = self.inhabit_value(ty, env, depth)?;
                let f = self.supply.fresh("f");
                Some(AdmDecl::new(vec![Binding::new(Usage::Infinite, f.clone(), v)], AdmTerm::Var(f)))
            }
            TypeExpr::Behavior | TypeExpr::Result if depth > 0 => {
                let candidates: Vec<(Ident, Vec<TypeExpr>)> = env
                    .iter()
                    .rev()
                    .filter_map(|(h, t)| t.as_chan_fn().filter(|(_, c)| *c == ty).map(|(d, _)| (h.clone(), d.to_vec())))
                    .collect();
                'next: for (h, dom) in candidates {
                    let mut args = Vec::with_capacity(dom.len());
                    for a in &dom {
                        match self.inhabit(a, env, depth - 1) {
                            Some(arg) => args.push(arg),
                            None => continue 'next,
                        }
                    }
                    return Some(apply_decls(&AdmDecl::term(AdmTerm::Var(h)), &args));
                }
                None
            }
            _ => None,
        }
    }
}
