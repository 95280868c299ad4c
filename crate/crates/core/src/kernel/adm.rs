//! Declarations of the administrative calculi.
//!
//! A declaration is an ordered let-prefix followed by a term. Each binding
//! scopes over later bindings and the body, never over its own value.

use std::collections::{BTreeMap, BTreeSet};

use super::{lookup, Canonicalizer};
use crate::ident::{Ident, NameSupply};
use crate::types::{TypeExpr, Usage};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Param {
    pub name: Ident,
    pub ty: TypeExpr,
}

impl Param {
    pub fn new(name: impl Into<Ident>, ty: TypeExpr) -> Self {
        Param { name: name.into(), ty }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdmValue {
    Star,
    Abs(Vec<Param>, Box<AdmDecl>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdmTerm {
    Var(Ident),
    App(Box<AdmTerm>, Vec<AdmTerm>),
    Par(Box<AdmTerm>, Box<AdmTerm>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binding {
    pub usage: Usage,
    pub name: Ident,
    pub value: AdmValue,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmDecl {
    pub bindings: Vec<Binding>,
    pub body: AdmTerm,
}

impl Binding {
    pub fn new(usage: Usage, name: impl Into<Ident>, value: AdmValue) -> Self {
        Binding { usage, name: name.into(), value }
    }
}

impl AdmValue {
    pub fn abs(params: Vec<Param>, body: AdmDecl) -> Self {
        AdmValue::Abs(params, Box::new(body))
    }

    pub fn arity(&self) -> Option<usize> {
        match self {
            AdmValue::Star => None,
            AdmValue::Abs(ps, _) => Some(ps.len()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            AdmValue::Star => 1,
            AdmValue::Abs(ps, body) => 1 + ps.len() + body.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        if let AdmValue::Abs(ps, body) = self {
            let depth = bound.len();
            bound.extend(ps.iter().map(|p| p.name.clone()));
            body.collect_free(bound, out);
            bound.truncate(depth);
        }
    }

    /// Free occurrences in left-to-right order, duplicates included.
    pub(crate) fn free_occurrences(&self, bound: &mut Vec<Ident>, out: &mut Vec<Ident>) {
        if let AdmValue::Abs(ps, body) = self {
            let depth = bound.len();
            bound.extend(ps.iter().map(|p| p.name.clone()));
            body.free_occurrences(bound, out);
            bound.truncate(depth);
        }
    }

    pub(crate) fn idents(&self, out: &mut Vec<Ident>) {
        if let AdmValue::Abs(ps, body) = self {
            out.extend(ps.iter().map(|p| p.name.clone()));
            body.idents(out);
        }
    }

    pub fn rename_with(&self, map: &BTreeMap<Ident, Ident>, supply: &mut NameSupply, freshen_all: bool) -> AdmValue {
        match self {
            AdmValue::Star => AdmValue::Star,
            AdmValue::Abs(ps, body) => {
                let mut inner = map.clone();
                for p in ps {
                    inner.remove(&p.name);
                }
                let mut params = Vec::with_capacity(ps.len());
                for p in ps {
                    let clash = inner.values().any(|v| v == &p.name);
                    if freshen_all || clash {
                        let f = supply.fresh_like(&p.name);
                        inner.insert(p.name.clone(), f.clone());
                        params.push(Param { name: f, ty: p.ty.clone() });
                    } else {
                        params.push(p.clone());
                    }
                }
                AdmValue::Abs(params, Box::new(body.rename_with(&inner, supply, freshen_all)))
            }
        }
    }

    fn canon(&self, env: &mut Vec<(Ident, Ident)>, canon: &mut Canonicalizer) -> AdmValue {
        match self {
            AdmValue::Star => AdmValue::Star,
            AdmValue::Abs(ps, body) => {
                let depth = env.len();
                let params = ps
                    .iter()
                    .map(|p| {
                        let c = canon.next();
                        env.push((p.name.clone(), c.clone()));
                        Param { name: c, ty: p.ty.clone() }
                    })
                    .collect();
                let body = body.canon(env, canon);
                env.truncate(depth);
                AdmValue::Abs(params, Box::new(body))
            }
        }
    }

    pub(crate) fn map_decls(&self, f: &mut impl FnMut(&AdmDecl) -> AdmDecl) -> AdmValue {
        match self {
            AdmValue::Star => AdmValue::Star,
            AdmValue::Abs(ps, body) => AdmValue::Abs(ps.clone(), Box::new(f(body))),
        }
    }
}

impl AdmTerm {
    pub fn var(name: impl Into<Ident>) -> Self {
        AdmTerm::Var(name.into())
    }

    pub fn app(head: AdmTerm, args: Vec<AdmTerm>) -> Self {
        AdmTerm::App(Box::new(head), args)
    }

    /// `@(x, y⁺)` over plain names.
    pub fn call(head: impl Into<Ident>, args: impl IntoIterator<Item = Ident>) -> Self {
        AdmTerm::App(Box::new(AdmTerm::Var(head.into())), args.into_iter().map(AdmTerm::Var).collect())
    }

    pub fn par(l: AdmTerm, r: AdmTerm) -> Self {
        AdmTerm::Par(Box::new(l), Box::new(r))
    }

    pub fn as_var(&self) -> Option<&Ident> {
        match self {
            AdmTerm::Var(x) => Some(x),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            AdmTerm::Var(_) => 1,
            AdmTerm::App(h, args) => 1 + h.size() + args.iter().map(AdmTerm::size).sum::<usize>(),
            AdmTerm::Par(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn has_par(&self) -> bool {
        match self {
            AdmTerm::Var(_) => false,
            AdmTerm::App(h, args) => h.has_par() || args.iter().any(AdmTerm::has_par),
            AdmTerm::Par(..) => true,
        }
    }

    /// Variable occurrences, left to right.
    pub fn occurrences(&self, out: &mut Vec<Ident>) {
        match self {
            AdmTerm::Var(x) => out.push(x.clone()),
            AdmTerm::App(h, args) => {
                h.occurrences(out);
                for a in args {
                    a.occurrences(out);
                }
            }
            AdmTerm::Par(l, r) => {
                l.occurrences(out);
                r.occurrences(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut occ = Vec::new();
        self.occurrences(&mut occ);
        occ.into_iter().collect()
    }

    pub fn rename(&self, map: &BTreeMap<Ident, Ident>) -> AdmTerm {
        match self {
            AdmTerm::Var(x) => AdmTerm::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            AdmTerm::App(h, args) => AdmTerm::App(Box::new(h.rename(map)), args.iter().map(|a| a.rename(map)).collect()),
            AdmTerm::Par(l, r) => AdmTerm::par(l.rename(map), r.rename(map)),
        }
    }

    fn canon(&self, env: &[(Ident, Ident)]) -> AdmTerm {
        match self {
            AdmTerm::Var(x) => AdmTerm::Var(lookup(env, x)),
            AdmTerm::App(h, args) => AdmTerm::App(Box::new(h.canon(env)), args.iter().map(|a| a.canon(env)).collect()),
            AdmTerm::Par(l, r) => AdmTerm::par(l.canon(env), r.canon(env)),
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&AdmTerm> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(self);
        };
        let child = match self {
            AdmTerm::Var(_) => return None,
            AdmTerm::App(h, args) => {
                if first == 0 {
                    h.as_ref()
                } else {
                    args.get(first - 1)?
                }
            }
            AdmTerm::Par(l, r) => match first {
                0 => l.as_ref(),
                1 => r.as_ref(),
                _ => return None,
            },
        };
        child.subterm(rest)
    }

    pub fn replace_at(&self, path: &[usize], with: AdmTerm) -> Option<AdmTerm> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(with);
        };
        match self {
            AdmTerm::Var(_) => None,
            AdmTerm::App(h, args) => {
                if first == 0 {
                    Some(AdmTerm::App(Box::new(h.replace_at(rest, with)?), args.clone()))
                } else {
                    let mut args = args.clone();
                    let slot = args.get_mut(first - 1)?;
                    *slot = slot.replace_at(rest, with)?;
                    Some(AdmTerm::App(h.clone(), args))
                }
            }
            AdmTerm::Par(l, r) => match first {
                0 => Some(AdmTerm::par(l.replace_at(rest, with)?, (**r).clone())),
                1 => Some(AdmTerm::par((**l).clone(), r.replace_at(rest, with)?)),
                _ => None,
            },
        }
    }
}

impl AdmDecl {
    pub fn new(bindings: Vec<Binding>, body: AdmTerm) -> Self {
        AdmDecl { bindings, body }
    }

    pub fn term(body: AdmTerm) -> Self {
        AdmDecl { bindings: Vec::new(), body }
    }

    pub fn size(&self) -> usize {
        self.bindings.iter().map(|b| 1 + b.value.size()).sum::<usize>() + self.body.size()
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        let depth = bound.len();
        for b in &self.bindings {
            b.value.collect_free(bound, out);
            bound.push(b.name.clone());
        }
        let mut occ = Vec::new();
        self.body.occurrences(&mut occ);
        for x in occ {
            if !bound.contains(&x) {
                out.insert(x);
            }
        }
        bound.truncate(depth);
    }

    pub(crate) fn free_occurrences(&self, bound: &mut Vec<Ident>, out: &mut Vec<Ident>) {
        let depth = bound.len();
        for b in &self.bindings {
            b.value.free_occurrences(bound, out);
            bound.push(b.name.clone());
        }
        let mut occ = Vec::new();
        self.body.occurrences(&mut occ);
        out.extend(occ.into_iter().filter(|x| !bound.contains(x)));
        bound.truncate(depth);
    }

    pub fn idents(&self, out: &mut Vec<Ident>) {
        for b in &self.bindings {
            out.push(b.name.clone());
            b.value.idents(out);
        }
        self.body.occurrences(out);
    }

    pub fn supply(&self) -> NameSupply {
        let mut names = Vec::new();
        self.idents(&mut names);
        NameSupply::avoiding(names.iter())
    }

    /// Capture-avoiding renaming of free names. With `freshen_all` every
    /// binder is also replaced by a fresh name from `supply`.
    pub fn rename_with(&self, map: &BTreeMap<Ident, Ident>, supply: &mut NameSupply, freshen_all: bool) -> AdmDecl {
        let mut map = map.clone();
        let mut bindings = Vec::with_capacity(self.bindings.len());
        for b in &self.bindings {
            let value = b.value.rename_with(&map, supply, freshen_all);
            map.remove(&b.name);
            let clash = map.values().any(|v| v == &b.name);
            let name = if freshen_all || clash {
                let f = supply.fresh_like(&b.name);
                map.insert(b.name.clone(), f.clone());
                f
            } else {
                b.name.clone()
            };
            bindings.push(Binding { usage: b.usage, name, value });
        }
        AdmDecl { bindings, body: self.body.rename(&map) }
    }

    pub fn rename(&self, map: &BTreeMap<Ident, Ident>) -> AdmDecl {
        let mut supply = self.supply();
        supply.reserve(map.values());
        supply.reserve(map.keys());
        self.rename_with(map, &mut supply, false)
    }

    /// α-renames so that every binder is distinct from every other binder
    /// and from every free name. Binders already satisfying this keep
    /// their names.
    pub fn uniquify(&self) -> AdmDecl {
        let mut supply = self.supply();
        let mut seen: BTreeSet<Ident> = self.free_vars();
        self.uniquify_with(&mut seen, &mut supply)
    }

    pub(crate) fn uniquify_with(&self, seen: &mut BTreeSet<Ident>, supply: &mut NameSupply) -> AdmDecl {
        let mut map: BTreeMap<Ident, Ident> = BTreeMap::new();
        let mut bindings = Vec::with_capacity(self.bindings.len());
        for b in &self.bindings {
            let value = match &b.value {
                AdmValue::Star => AdmValue::Star,
                AdmValue::Abs(ps, body) => {
                    let mut inner = map.clone();
                    let mut params = Vec::new();
                    for p in ps {
                        let name = if seen.contains(&p.name) {
                            supply.fresh_like(&p.name)
                        } else {
                            p.name.clone()
                        };
                        seen.insert(name.clone());
                        inner.insert(p.name.clone(), name.clone());
                        params.push(Param { name, ty: p.ty.clone() });
                    }
                    let body = body.rename_with(&inner, supply, false);
                    // `inner` maps onto names already unique, so only nested binders remain to fix
                    AdmValue::Abs(params, Box::new(body.uniquify_with(seen, supply)))
                }
            };
            let name = if seen.contains(&b.name) { supply.fresh_like(&b.name) } else { b.name.clone() };
            seen.insert(name.clone());
            map.insert(b.name.clone(), name.clone());
            bindings.push(Binding { usage: b.usage, name, value });
        }
        AdmDecl { bindings, body: self.body.rename(&map) }
    }

    pub fn alpha_canonical(&self) -> AdmDecl {
        let mut canon = Canonicalizer::new(&self.free_vars());
        self.canon(&mut Vec::new(), &mut canon)
    }

    fn canon(&self, env: &mut Vec<(Ident, Ident)>, canon: &mut Canonicalizer) -> AdmDecl {
        let depth = env.len();
        let mut bindings = Vec::with_capacity(self.bindings.len());
        for b in &self.bindings {
            let value = b.value.canon(env, canon);
            let c = canon.next();
            env.push((b.name.clone(), c.clone()));
            bindings.push(Binding { usage: b.usage, name: c, value });
        }
        let body = self.body.canon(env);
        env.truncate(depth);
        AdmDecl { bindings, body }
    }

    pub fn alpha_equal(&self, other: &AdmDecl) -> bool {
        self.alpha_canonical() == other.alpha_canonical()
    }

    /// Index of the binding that a body-level occurrence of `x` refers to.
    pub fn binding_of(&self, x: &Ident) -> Option<usize> {
        self.bindings.iter().rposition(|b| &b.name == x)
    }

    /// True when every usage, at every depth, is `∞`.
    pub fn all_infinite(&self) -> bool {
        self.bindings.iter().all(|b| {
            b.usage == Usage::Infinite
                && match &b.value {
                    AdmValue::Star => true,
                    AdmValue::Abs(_, body) => body.all_infinite(),
                }
        })
    }

    pub fn has_par(&self) -> bool {
        self.body.has_par()
            || self.bindings.iter().any(|b| matches!(&b.value, AdmValue::Abs(_, body) if body.has_par()))
    }

    /// Same declaration with binder annotations replaced by `Ch[Unit]` and
    /// every usage-0 binding replaced by `let x = *`: the information a
    /// process keeps about a declaration.
    pub fn erase_annotations(&self) -> AdmDecl {
        let bindings = self
            .bindings
            .iter()
            .map(|b| {
                let (usage, value) = match (&b.value, b.usage) {
                    (_, Usage::Zero) | (AdmValue::Star, _) => (Usage::Infinite, AdmValue::Star),
                    (AdmValue::Abs(ps, body), u) => (
                        u,
                        AdmValue::Abs(
                            ps.iter().map(|p| Param::new(p.name.clone(), TypeExpr::chan_unit())).collect(),
                            Box::new(body.erase_annotations()),
                        ),
                    ),
                };
                Binding { usage, name: b.name.clone(), value }
            })
            .collect();
        AdmDecl { bindings, body: self.body.clone() }
    }
}

impl std::fmt::Debug for AdmDecl {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_adm(self))
    }
}

impl std::fmt::Display for AdmDecl {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_adm(self))
    }
}

impl std::fmt::Debug for AdmTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_adm_term(self))
    }
}

impl std::fmt::Debug for AdmValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_adm_value(self))
    }
}

impl std::fmt::Debug for Binding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "let[{}] {} = {:?}", self.usage, self.name, self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch1() -> TypeExpr {
        TypeExpr::chan_unit()
    }

    #[test]
    fn let_binds_name_in_body_only() {
        // let₁ x = λ(y:Ch(Ch 1)).y in @(x,z)
        let d = AdmDecl::new(
            vec![Binding::new(
                Usage::One,
                "x",
                AdmValue::abs(vec![Param::new("y", TypeExpr::chan_fn(vec![ch1()], TypeExpr::Behavior))], AdmDecl::term(AdmTerm::var("y"))),
            )],
            AdmTerm::call("x", ["z".into()]),
        );
        assert_eq!(d.free_vars(), ["z".into()].into_iter().collect());
    }

    #[test]
    fn own_value_does_not_see_binder() {
        let d = AdmDecl::new(
            vec![Binding::new(
                Usage::Infinite,
                "x",
                AdmValue::abs(vec![Param::new("y", ch1())], AdmDecl::term(AdmTerm::call("x", ["y".into()]))),
            )],
            AdmTerm::var("x"),
        );
        assert_eq!(d.free_vars(), ["x".into()].into_iter().collect());
    }

    #[test]
    fn rename_is_capture_avoiding() {
        // [z/y] @(x,y) = @(x,z)
        let t = AdmDecl::term(AdmTerm::call("x", ["y".into()]));
        let map: BTreeMap<Ident, Ident> = [("y".into(), "z".into())].into_iter().collect();
        assert_eq!(t.rename(&map), AdmDecl::term(AdmTerm::call("x", ["z".into()])));

        // [y/x] (let y = * in @(x,y)) must not capture
        let d = AdmDecl::new(vec![Binding::new(Usage::Infinite, "y", AdmValue::Star)], AdmTerm::call("x", ["y".into()]));
        let map: BTreeMap<Ident, Ident> = [("x".into(), "y".into())].into_iter().collect();
        let r = d.rename(&map);
        assert_ne!(r.bindings[0].name, Ident::from("y"));
        assert_eq!(r.body, AdmTerm::call("y", [r.bindings[0].name.clone()]));
    }

    #[test]
    fn alpha_equal_lets() {
        let a = AdmDecl::new(vec![Binding::new(Usage::Infinite, "x", AdmValue::Star)], AdmTerm::var("x"));
        let b = AdmDecl::new(vec![Binding::new(Usage::Infinite, "y", AdmValue::Star)], AdmTerm::var("y"));
        assert!(a.alpha_equal(&b));
        let c = AdmDecl::new(vec![Binding::new(Usage::One, "y", AdmValue::Star)], AdmTerm::var("y"));
        assert!(!a.alpha_equal(&c));
    }

    #[test]
    fn uniquify_separates_shadowed_binders() {
        let d = AdmDecl::new(
            vec![Binding::new(Usage::Infinite, "x", AdmValue::Star), Binding::new(Usage::Infinite, "x", AdmValue::Star)],
            AdmTerm::call("f", ["x".into()]),
        );
        let u = d.uniquify();
        assert_ne!(u.bindings[0].name, u.bindings[1].name);
        assert_eq!(u.body, AdmTerm::call("f", [u.bindings[1].name.clone()]));
        assert!(u.alpha_equal(&d));
    }
}
