//! Terms of the call-by-value λ-calculus and its parallel extension.

use std::collections::{BTreeMap, BTreeSet};

use crate::ident::{Ident, NameSupply};
use crate::types::TypeExpr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LamTerm {
    Star,
    Var(Ident),
    Abs(Ident, TypeExpr, Box<LamTerm>),
    App(Box<LamTerm>, Box<LamTerm>),
    Par(Box<LamTerm>, Box<LamTerm>),
}

impl LamTerm {
    pub fn var(name: impl Into<Ident>) -> Self {
        LamTerm::Var(name.into())
    }

    pub fn abs(param: impl Into<Ident>, ty: TypeExpr, body: LamTerm) -> Self {
        LamTerm::Abs(param.into(), ty, Box::new(body))
    }

    pub fn app(f: LamTerm, a: LamTerm) -> Self {
        LamTerm::App(Box::new(f), Box::new(a))
    }

    pub fn par(l: LamTerm, r: LamTerm) -> Self {
        LamTerm::Par(Box::new(l), Box::new(r))
    }

    /// Values are `*`, variables and abstractions.
    pub fn is_value(&self) -> bool {
        matches!(self, LamTerm::Star | LamTerm::Var(_) | LamTerm::Abs(..))
    }

    pub fn has_par(&self) -> bool {
        match self {
            LamTerm::Star | LamTerm::Var(_) => false,
            LamTerm::Abs(_, _, b) => b.has_par(),
            LamTerm::App(f, a) => f.has_par() || a.has_par(),
            LamTerm::Par(..) => true,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LamTerm::Star | LamTerm::Var(_) => 1,
            LamTerm::Abs(_, _, b) => 1 + b.size(),
            LamTerm::App(f, a) | LamTerm::Par(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        match self {
            LamTerm::Star => {}
            LamTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            LamTerm::Abs(x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            LamTerm::App(f, a) | LamTerm::Par(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    /// Every identifier occurring anywhere, bound or free.
    pub fn idents(&self, out: &mut Vec<Ident>) {
        match self {
            LamTerm::Star => {}
            LamTerm::Var(x) => out.push(x.clone()),
            LamTerm::Abs(x, _, body) => {
                out.push(x.clone());
                body.idents(out);
            }
            LamTerm::App(f, a) | LamTerm::Par(f, a) => {
                f.idents(out);
                a.idents(out);
            }
        }
    }

    pub fn supply(&self) -> NameSupply {
        let mut names = Vec::new();
        self.idents(&mut names);
        NameSupply::avoiding(names.iter())
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn subst(&self, map: &BTreeMap<Ident, LamTerm>) -> LamTerm {
        let mut supply = self.supply();
        for t in map.values() {
            let mut names = Vec::new();
            t.idents(&mut names);
            supply.reserve(names.iter());
        }
        self.subst_with(map, &mut supply)
    }

    pub fn subst_one(&self, x: &Ident, v: &LamTerm) -> LamTerm {
        let mut map = BTreeMap::new();
        map.insert(x.clone(), v.clone());
        self.subst(&map)
    }

    pub fn subst_with(&self, map: &BTreeMap<Ident, LamTerm>, supply: &mut NameSupply) -> LamTerm {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            LamTerm::Star => LamTerm::Star,
            LamTerm::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            LamTerm::App(f, a) => LamTerm::app(f.subst_with(map, supply), a.subst_with(map, supply)),
            LamTerm::Par(l, r) => LamTerm::par(l.subst_with(map, supply), r.subst_with(map, supply)),
            LamTerm::Abs(x, ty, body) => {
                let mut inner = map.clone();
                inner.remove(x);
                let body_fv = body.free_vars();
                inner.retain(|k, _| body_fv.contains(k));
                let captures = inner.values().any(|t| t.free_vars().contains(x));
                if captures {
                    let fresh = supply.fresh_like(x);
                    inner.insert(x.clone(), LamTerm::Var(fresh.clone()));
                    LamTerm::Abs(fresh, ty.clone(), Box::new(body.subst_with(&inner, supply)))
                } else {
                    LamTerm::Abs(x.clone(), ty.clone(), Box::new(body.subst_with(&inner, supply)))
                }
            }
        }
    }

    /// Renames every binder to a canonical name determined by binder
    /// position; α-equivalent terms map to identical results.
    pub fn alpha_canonical(&self) -> LamTerm {
        let mut canon = super::Canonicalizer::new(&self.free_vars());
        self.canon(&mut Vec::new(), &mut canon)
    }

    fn canon(&self, env: &mut Vec<(Ident, Ident)>, canon: &mut super::Canonicalizer) -> LamTerm {
        match self {
            LamTerm::Star => LamTerm::Star,
            LamTerm::Var(x) => LamTerm::Var(super::lookup(env, x)),
            LamTerm::Abs(x, ty, body) => {
                let c = canon.next();
                env.push((x.clone(), c.clone()));
                let body = body.canon(env, canon);
                env.pop();
                LamTerm::Abs(c, ty.clone(), Box::new(body))
            }
            LamTerm::App(f, a) => LamTerm::app(f.canon(env, canon), a.canon(env, canon)),
            LamTerm::Par(l, r) => LamTerm::par(l.canon(env, canon), r.canon(env, canon)),
        }
    }

    pub fn alpha_equal(&self, other: &LamTerm) -> bool {
        self.alpha_canonical() == other.alpha_canonical()
    }

    /// Same term with every binder annotation replaced by `Unit`.
    pub fn erase_annotations(&self) -> LamTerm {
        match self {
            LamTerm::Star | LamTerm::Var(_) => self.clone(),
            LamTerm::Abs(x, _, b) => LamTerm::Abs(x.clone(), TypeExpr::Unit, Box::new(b.erase_annotations())),
            LamTerm::App(f, a) => LamTerm::app(f.erase_annotations(), a.erase_annotations()),
            LamTerm::Par(l, r) => LamTerm::par(l.erase_annotations(), r.erase_annotations()),
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&LamTerm> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(self);
        };
        let child = match (self, first) {
            (LamTerm::Abs(_, _, b), 0) => b.as_ref(),
            (LamTerm::App(f, _), 0) | (LamTerm::Par(f, _), 0) => f.as_ref(),
            (LamTerm::App(_, a), 1) | (LamTerm::Par(_, a), 1) => a.as_ref(),
            _ => return None,
        };
        child.subterm(rest)
    }

    pub fn replace_at(&self, path: &[usize], with: LamTerm) -> Option<LamTerm> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(with);
        };
        Some(match (self, first) {
            (LamTerm::Abs(x, ty, b), 0) => LamTerm::Abs(x.clone(), ty.clone(), Box::new(b.replace_at(rest, with)?)),
            (LamTerm::App(f, a), 0) => LamTerm::app(f.replace_at(rest, with)?, (**a).clone()),
            (LamTerm::App(f, a), 1) => LamTerm::app((**f).clone(), a.replace_at(rest, with)?),
            (LamTerm::Par(l, r), 0) => LamTerm::par(l.replace_at(rest, with)?, (**r).clone()),
            (LamTerm::Par(l, r), 1) => LamTerm::par((**l).clone(), r.replace_at(rest, with)?),
            _ => return None,
        })
    }
}

impl std::fmt::Debug for LamTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_lam(self))
    }
}

impl std::fmt::Display for LamTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_lam(self))
    }
}
