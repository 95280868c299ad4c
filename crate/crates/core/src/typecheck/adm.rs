use std::collections::{BTreeMap, VecDeque};

use super::unify::{MetaKind, Ty, Unifier};
use super::{Scope, TypeError, Typing, TypingContext};
use crate::ident::Ident;
use crate::kernel::{AdmDecl, AdmTerm, AdmValue, Param};
use crate::types::{Calculus, TypeExpr, Usage};

/// A `let₀` value whose type is still partly open once everything else has
/// been checked. It is typed afterwards, and only if that succeeds does it
/// refine the open parts.
#[derive(Clone)]
struct Deferred {
    scope: Scope,
    params: Vec<Param>,
    body: AdmDecl,
    ty: Ty,
}

#[derive(Clone)]
struct Checker {
    calc: Calculus,
    u: Unifier,
    binders: Vec<(Ident, Ty)>,
    deferred: VecDeque<Deferred>,
}

pub(super) fn check(ctx: &TypingContext, d: &AdmDecl, calc: Calculus) -> Result<Typing, TypeError> {
    if calc.is_cps() {
        cps_shape(d, calc.has_par())?;
    }
    let mut c = Checker { calc, u: Unifier::new(), binders: Vec::new(), deferred: VecDeque::new() };
    let mut scope = Scope::from_context(ctx);
    let ty = c.decl(&mut scope, d)?;
    while let Some(site) = c.deferred.pop_front() {
        let mut trial = c.clone();
        let mut scope = site.scope.clone();
        if let Ok(vt) = trial.abs(&mut scope, &site.params, &site.body) {
            if trial.u.unify(&vt, &site.ty).is_ok() {
                c = trial;
            }
        }
    }
    let ty = c.u.zonk(&ty);
    let expected = match calc {
        Calculus::Cps => Some(TypeExpr::Result),
        Calculus::CpsPar => Some(TypeExpr::Behavior),
        _ => None,
    };
    if let Some(e) = expected {
        if ty != e {
            return Err(TypeError::TypeMismatch { name: None, expected: e, found: ty });
        }
    }
    let binders = c.binders.iter().map(|(x, t)| (x.clone(), c.u.zonk(t))).collect::<BTreeMap<_, _>>();
    Ok(Typing { ty, binders })
}

/// Shape of the CPS fragment: terms apply a variable to variables, or compose
/// such applications in parallel.
pub fn cps_shape(d: &AdmDecl, allow_par: bool) -> Result<(), TypeError> {
    fn term(t: &AdmTerm, allow_par: bool) -> Result<(), TypeError> {
        match t {
            AdmTerm::Var(x) => Err(TypeError::NotInFragment(format!("bare variable `{x}` in a CPS term"))),
            AdmTerm::App(h, args) => {
                if h.as_var().is_none() || args.iter().any(|a| a.as_var().is_none()) {
                    return Err(TypeError::NotInFragment("nested application in a CPS term".into()));
                }
                Ok(())
            }
            AdmTerm::Par(l, r) if allow_par => term(l, allow_par).and_then(|_| term(r, allow_par)),
            AdmTerm::Par(..) => Err(TypeError::NotInFragment("parallel composition in a functional CPS term".into())),
        }
    }
    for b in &d.bindings {
        if let AdmValue::Abs(_, body) = &b.value {
            cps_shape(body, allow_par)?;
        }
    }
    term(&d.body, allow_par)
}

impl Checker {
    fn clash(&self, name: Option<Ident>, expected: &Ty, found: &Ty) -> TypeError {
        TypeError::TypeMismatch { name, expected: self.u.zonk(expected), found: self.u.zonk(found) }
    }

    fn decl(&mut self, scope: &mut Scope, d: &AdmDecl) -> Result<Ty, TypeError> {
        let base = scope.len();
        let res = self.bindings(scope, d, 0);
        scope.truncate(base);
        res
    }

    fn bindings(&mut self, scope: &mut Scope, d: &AdmDecl, i: usize) -> Result<Ty, TypeError> {
        let Some(b) = d.bindings.get(i) else {
            return self.term(scope, &d.body);
        };
        let concurrent = self.calc.has_par();
        if !concurrent && b.usage != Usage::Infinite {
            return Err(TypeError::UsageViolation { name: b.name.clone(), reason: "usages other than inf need the concurrent calculus" });
        }
        let ty = match (&b.value, b.usage) {
            (AdmValue::Star, Usage::Infinite) => Ty::Chan(Box::new(Ty::Unit)),
            (AdmValue::Star, _) => {
                return Err(TypeError::UsageViolation { name: b.name.clone(), reason: "`*` must be bound with usage inf" });
            }
            (AdmValue::Abs(params, body), Usage::Zero) => {
                let dom = params.iter().map(|_| self.u.fresh(MetaKind::Name)).collect();
                let cod = if self.calc == Calculus::CpsPar { Ty::Behavior } else { self.u.fresh(MetaKind::Codomain) };
                let ty = Ty::chan_fn(dom, cod);
                // The value sees the scope of its binding point, with the
                // names it may not use marked pending.
                let mut site = scope.clone();
                for later in &d.bindings[i..] {
                    site.push(later.name.clone(), None);
                }
                self.deferred.push_back(Deferred { scope: site, params: params.clone(), body: (**body).clone(), ty: ty.clone() });
                ty
            }
            (AdmValue::Abs(params, body), _) => {
                let base = scope.len();
                for later in &d.bindings[i..] {
                    scope.push(later.name.clone(), None);
                }
                let res = self.abs(scope, params, body);
                scope.truncate(base);
                res?
            }
        };
        self.binders.push((b.name.clone(), ty.clone()));
        scope.push(b.name.clone(), Some(ty));
        self.bindings(scope, d, i + 1)
    }

    fn abs(&mut self, scope: &mut Scope, params: &[Param], body: &AdmDecl) -> Result<Ty, TypeError> {
        let base = scope.len();
        let mut dom = Vec::with_capacity(params.len());
        for p in params {
            if !p.ty.is_value_type_of(self.calc) {
                scope.truncate(base);
                return Err(if !p.ty.is_value_type() || (!self.calc.has_par() && p.ty.contains_behavior()) {
                    TypeError::BehaviorMisuse { name: Some(p.name.clone()), ty: p.ty.clone() }
                } else {
                    TypeError::IllFormedType { name: Some(p.name.clone()), ty: p.ty.clone() }
                });
            }
            let t = Ty::from_expr(&p.ty);
            self.binders.push((p.name.clone(), t.clone()));
            scope.push(p.name.clone(), Some(t.clone()));
            dom.push(t);
        }
        let res = self.decl(scope, body);
        scope.truncate(base);
        let cod = res?;
        let required = match self.calc {
            Calculus::Cps => Some(Ty::Result),
            Calculus::CpsPar => Some(Ty::Behavior),
            _ => None,
        };
        if let Some(r) = required {
            self.u.unify(&cod, &r).map_err(|_| self.clash(None, &r, &cod))?;
        }
        match self.u.shallow(&cod) {
            Ty::Result if !self.calc.is_cps() => {
                return Err(TypeError::NotInFragment("result type outside the CPS fragment".into()));
            }
            Ty::Behavior if !self.calc.has_par() => {
                return Err(TypeError::NotInFragment("behaviour result in the sequential calculus".into()));
            }
            _ => {}
        }
        Ok(Ty::chan_fn(dom, cod))
    }

    fn term(&mut self, scope: &mut Scope, t: &AdmTerm) -> Result<Ty, TypeError> {
        match t {
            AdmTerm::Var(x) => scope.lookup_lexical(x),
            AdmTerm::App(h, args) => {
                let th = self.term(scope, h)?;
                let mut targs = Vec::with_capacity(args.len());
                for a in args {
                    let ta = self.term(scope, a)?;
                    if matches!(self.u.shallow(&ta), Ty::Behavior | Ty::Result) {
                        return Err(TypeError::BehaviorMisuse { name: a.as_var().cloned(), ty: self.u.zonk(&ta) });
                    }
                    targs.push(ta);
                }
                let name = h.as_var().cloned();
                let payload = match self.u.shallow(&th) {
                    Ty::Chan(p) => self.u.shallow(&p),
                    Ty::Meta(_) => {
                        let cod = self.u.fresh(MetaKind::Codomain);
                        let expected = Ty::chan_fn(targs, cod.clone());
                        self.u.unify(&th, &expected).map_err(|_| self.clash(name, &expected, &th))?;
                        return Ok(cod);
                    }
                    _ => return Err(TypeError::NotAFunction { name, ty: self.u.zonk(&th) }),
                };
                match payload {
                    Ty::Arrow(dom, cod) => {
                        if dom.len() != targs.len() {
                            return Err(TypeError::ArityMismatch {
                                name: name.unwrap_or_else(|| Ident::new("_", 0)),
                                expected: dom.len(),
                                found: targs.len(),
                            });
                        }
                        for ((d, a), arg) in dom.iter().zip(&targs).zip(args) {
                            self.u.unify(d, a).map_err(|_| self.clash(arg.as_var().cloned(), d, a))?;
                        }
                        Ok(*cod)
                    }
                    _ => Err(TypeError::NotAFunction { name, ty: self.u.zonk(&th) }),
                }
            }
            AdmTerm::Par(l, r) => {
                if !self.calc.has_par() {
                    return Err(TypeError::NotInFragment("parallel composition in a functional calculus".into()));
                }
                for side in [l, r] {
                    let ts = self.term(scope, side)?;
                    self.u.unify(&ts, &Ty::Behavior).map_err(|_| self.clash(side.as_var().cloned(), &Ty::Behavior, &ts))?;
                }
                Ok(Ty::Behavior)
            }
        }
    }
}
