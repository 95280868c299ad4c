use std::collections::BTreeMap;

use super::unify::{MetaKind, Ty, Unifier};
use super::{Scope, TypeError, TypingContext};
use crate::ident::Ident;
use crate::kernel::PiProc;
use crate::types::TypeExpr;

struct Checker {
    u: Unifier,
    binders: Vec<(Ident, Ty)>,
}

pub(super) fn check(ctx: &TypingContext, p: &PiProc) -> Result<BTreeMap<Ident, TypeExpr>, TypeError> {
    let mut c = Checker { u: Unifier::new(), binders: Vec::new() };
    let mut scope = Scope::from_context(ctx);
    c.proc(&mut scope, p)?;
    Ok(c.binders.iter().map(|(x, t)| (x.clone(), c.u.zonk(t))).collect())
}

impl Checker {
    fn proc(&mut self, scope: &mut Scope, p: &PiProc) -> Result<(), TypeError> {
        match p {
            PiProc::Out(x, args) => {
                let tx = scope.lookup_strict(x)?;
                let targs = args.iter().map(|a| scope.lookup_strict(a)).collect::<Result<Vec<_>, _>>()?;
                match self.u.shallow(&tx) {
                    Ty::Chan(inner) => match self.u.shallow(&inner) {
                        Ty::Arrow(dom, _) if dom.len() != args.len() => {
                            return Err(TypeError::ArityMismatch { name: x.clone(), expected: dom.len(), found: args.len() });
                        }
                        Ty::Arrow(..) | Ty::Meta(_) => {}
                        _ => return Err(TypeError::NotAFunction { name: Some(x.clone()), ty: self.u.zonk(&tx) }),
                    },
                    Ty::Meta(_) => {}
                    _ => return Err(TypeError::NotAFunction { name: Some(x.clone()), ty: self.u.zonk(&tx) }),
                }
                let expected = Ty::chan_fn(targs, Ty::Behavior);
                self.u.unify(&tx, &expected).map_err(|_| TypeError::TypeMismatch {
                    name: Some(x.clone()),
                    expected: self.u.zonk(&expected),
                    found: self.u.zonk(&tx),
                })
            }
            PiProc::Par(l, r) => {
                self.proc(scope, l)?;
                self.proc(scope, r)
            }
            PiProc::Nu(..) => {
                // The names of a chain are bound together; each guard may use
                // the names defined before it, never itself or later ones.
                let (defs, tail) = p.chain();
                let base = scope.len();
                for (i, (x, guard)) in defs.iter().enumerate() {
                    let ty = match guard {
                        Some(g) => {
                            let mark = scope.len();
                            for (later, _) in &defs[i..] {
                                scope.push((*later).clone(), None);
                            }
                            let mut dom = Vec::with_capacity(g.params.len());
                            for y in &g.params {
                                let t = self.u.fresh(MetaKind::Name);
                                self.binders.push((y.clone(), t.clone()));
                                scope.push(y.clone(), Some(t.clone()));
                                dom.push(t);
                            }
                            let res = self.proc(scope, &g.body);
                            scope.truncate(mark);
                            res?;
                            Ty::chan_fn(dom, Ty::Behavior)
                        }
                        None => self.u.fresh(MetaKind::Name),
                    };
                    self.binders.push(((*x).clone(), ty.clone()));
                    scope.push((*x).clone(), Some(ty));
                }
                let res = self.proc(scope, tail);
                scope.truncate(base);
                res
            }
        }
    }
}
