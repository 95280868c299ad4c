//! Processes of the typed π-calculus.
//!
//! Restrictions optionally carry the unique input on the restricted name;
//! outputs are asynchronous and polyadic. The guard always listens on the
//! name its `Nu` restricts, so the channel is not stored twice.

use std::collections::{BTreeMap, BTreeSet};

use super::{lookup, Canonicalizer};
use crate::ident::{Ident, NameSupply};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputGuard {
    pub replicated: bool,
    pub params: Vec<Ident>,
    pub body: Box<PiProc>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PiProc {
    Nu(Ident, Option<InputGuard>, Box<PiProc>),
    Out(Ident, Vec<Ident>),
    Par(Box<PiProc>, Box<PiProc>),
}

impl InputGuard {
    pub fn new(replicated: bool, params: Vec<Ident>, body: PiProc) -> Self {
        InputGuard { replicated, params, body: Box::new(body) }
    }

    /// Free occurrences of `λy⁺.body`.
    pub fn free_occurrences(&self, bound: &mut Vec<Ident>, out: &mut Vec<Ident>) {
        let depth = bound.len();
        bound.extend(self.params.iter().cloned());
        self.body.free_occurrences(bound, out);
        bound.truncate(depth);
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut occ = Vec::new();
        self.free_occurrences(&mut Vec::new(), &mut occ);
        occ.into_iter().collect()
    }

    fn rename_with(&self, map: &BTreeMap<Ident, Ident>, supply: &mut NameSupply, freshen_all: bool) -> InputGuard {
        let mut gmap = map.clone();
        for p in &self.params {
            gmap.remove(p);
        }
        let mut params = Vec::with_capacity(self.params.len());
        for p in &self.params {
            if freshen_all || gmap.values().any(|v| v == p) {
                let f = supply.fresh_like(p);
                gmap.insert(p.clone(), f.clone());
                params.push(f);
            } else {
                params.push(p.clone());
            }
        }
        InputGuard { replicated: self.replicated, params, body: Box::new(self.body.rename_with(&gmap, supply, freshen_all)) }
    }
}

impl PiProc {
    pub fn nu(x: impl Into<Ident>, rest: PiProc) -> Self {
        PiProc::Nu(x.into(), None, Box::new(rest))
    }

    pub fn nu_in(x: impl Into<Ident>, replicated: bool, params: Vec<Ident>, body: PiProc, rest: PiProc) -> Self {
        PiProc::Nu(x.into(), Some(InputGuard::new(replicated, params, body)), Box::new(rest))
    }

    pub fn out(x: impl Into<Ident>, args: impl IntoIterator<Item = Ident>) -> Self {
        PiProc::Out(x.into(), args.into_iter().collect())
    }

    pub fn par(l: PiProc, r: PiProc) -> Self {
        PiProc::Par(Box::new(l), Box::new(r))
    }

    pub fn size(&self) -> usize {
        match self {
            PiProc::Nu(_, g, rest) => 1 + g.as_ref().map_or(0, |g| 1 + g.params.len() + g.body.size()) + rest.size(),
            PiProc::Out(_, args) => 1 + args.len(),
            PiProc::Par(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Splits off the maximal run of restrictions at the root. Names of one
    /// run scope jointly over every guard of the run and over the tail, as
    /// in the usual `νx,x′(…)` notation; the typing, not the scoping, forbids
    /// a guard from mentioning its own or a later name.
    pub fn chain(&self) -> (Vec<(&Ident, Option<&InputGuard>)>, &PiProc) {
        let mut defs = Vec::new();
        let mut cur = self;
        while let PiProc::Nu(x, g, rest) = cur {
            defs.push((x, g.as_ref()));
            cur = rest;
        }
        (defs, cur)
    }

    /// Rebuilds a run of restrictions over a tail.
    pub fn from_chain(defs: Vec<(Ident, Option<InputGuard>)>, tail: PiProc) -> PiProc {
        defs.into_iter().rev().fold(tail, |acc, (x, g)| PiProc::Nu(x, g, Box::new(acc)))
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut occ = Vec::new();
        self.free_occurrences(&mut Vec::new(), &mut occ);
        occ.into_iter().collect()
    }

    /// Free occurrences, left to right, guards before the tail.
    pub fn free_occurrences(&self, bound: &mut Vec<Ident>, out: &mut Vec<Ident>) {
        match self {
            PiProc::Out(x, args) => {
                out.extend(std::iter::once(x).chain(args).filter(|a| !bound.contains(a)).cloned());
            }
            PiProc::Par(l, r) => {
                l.free_occurrences(bound, out);
                r.free_occurrences(bound, out);
            }
            PiProc::Nu(..) => {
                let (defs, tail) = self.chain();
                let depth = bound.len();
                bound.extend(defs.iter().map(|(x, _)| (*x).clone()));
                for (_, g) in &defs {
                    if let Some(g) = g {
                        g.free_occurrences(bound, out);
                    }
                }
                tail.free_occurrences(bound, out);
                bound.truncate(depth);
            }
        }
    }

    pub fn idents(&self, out: &mut Vec<Ident>) {
        match self {
            PiProc::Out(x, args) => {
                out.push(x.clone());
                out.extend(args.iter().cloned());
            }
            PiProc::Par(l, r) => {
                l.idents(out);
                r.idents(out);
            }
            PiProc::Nu(x, g, rest) => {
                out.push(x.clone());
                if let Some(g) = g {
                    out.extend(g.params.iter().cloned());
                    g.body.idents(out);
                }
                rest.idents(out);
            }
        }
    }

    pub fn supply(&self) -> NameSupply {
        let mut names = Vec::new();
        self.idents(&mut names);
        NameSupply::avoiding(names.iter())
    }

    /// Capture-avoiding simultaneous renaming of free names.
    pub fn rename(&self, map: &BTreeMap<Ident, Ident>) -> PiProc {
        let mut supply = self.supply();
        supply.reserve(map.keys());
        supply.reserve(map.values());
        self.rename_with(map, &mut supply, false)
    }

    pub fn rename_with(&self, map: &BTreeMap<Ident, Ident>, supply: &mut NameSupply, freshen_all: bool) -> PiProc {
        let get = |x: &Ident| map.get(x).cloned().unwrap_or_else(|| x.clone());
        match self {
            PiProc::Out(x, args) => PiProc::Out(get(x), args.iter().map(get).collect()),
            PiProc::Par(l, r) => {
                let l = l.rename_with(map, supply, freshen_all);
                PiProc::par(l, r.rename_with(map, supply, freshen_all))
            }
            PiProc::Nu(..) => {
                let (defs, tail) = self.chain();
                let mut inner = map.clone();
                for (x, _) in &defs {
                    inner.remove(*x);
                }
                let mut names = Vec::with_capacity(defs.len());
                for (x, _) in &defs {
                    if freshen_all || inner.values().any(|v| v == *x) {
                        let f = supply.fresh_like(x);
                        inner.insert((*x).clone(), f.clone());
                        names.push(f);
                    } else {
                        names.push((*x).clone());
                    }
                }
                let new_defs = names
                    .into_iter()
                    .zip(&defs)
                    .map(|(name, (_, g))| (name, g.map(|g| g.rename_with(&inner, supply, freshen_all))))
                    .collect();
                PiProc::from_chain(new_defs, tail.rename_with(&inner, supply, freshen_all))
            }
        }
    }

    /// Renames binders so that no two binders share a name and no binder
    /// shares a name with a free name.
    pub fn uniquify(&self) -> PiProc {
        let mut seen = self.free_vars();
        let mut supply = self.supply();
        self.uniquify_with(&mut seen, &mut supply)
    }

    pub(crate) fn uniquify_with(&self, seen: &mut BTreeSet<Ident>, supply: &mut NameSupply) -> PiProc {
        match self {
            PiProc::Out(..) => self.clone(),
            PiProc::Par(l, r) => {
                let l = l.uniquify_with(seen, supply);
                PiProc::par(l, r.uniquify_with(seen, supply))
            }
            PiProc::Nu(..) => {
                let (defs, tail) = self.chain();
                let mut map = BTreeMap::new();
                let mut names = Vec::with_capacity(defs.len());
                for (x, _) in &defs {
                    let name = if seen.contains(*x) { supply.fresh_like(x) } else { (*x).clone() };
                    seen.insert(name.clone());
                    map.insert((*x).clone(), name.clone());
                    names.push(name);
                }
                let mut new_defs = Vec::with_capacity(defs.len());
                for (name, (_, g)) in names.into_iter().zip(&defs) {
                    let guard = g.map(|g| {
                        let mut gmap = map.clone();
                        let params: Vec<Ident> = g
                            .params
                            .iter()
                            .map(|p| {
                                let q = if seen.contains(p) { supply.fresh_like(p) } else { p.clone() };
                                seen.insert(q.clone());
                                gmap.insert(p.clone(), q.clone());
                                q
                            })
                            .collect();
                        let body = g.body.rename_with(&gmap, supply, false).uniquify_with(seen, supply);
                        InputGuard { replicated: g.replicated, params, body: Box::new(body) }
                    });
                    new_defs.push((name, guard));
                }
                let tail = tail.rename_with(&map, supply, false).uniquify_with(seen, supply);
                PiProc::from_chain(new_defs, tail)
            }
        }
    }

    pub fn alpha_canonical(&self) -> PiProc {
        let mut canon = Canonicalizer::new(&self.free_vars());
        self.canon(&mut Vec::new(), &mut canon)
    }

    fn canon(&self, env: &mut Vec<(Ident, Ident)>, canon: &mut Canonicalizer) -> PiProc {
        match self {
            PiProc::Out(x, args) => PiProc::Out(lookup(env, x), args.iter().map(|a| lookup(env, a)).collect()),
            PiProc::Par(l, r) => {
                let l = l.canon(env, canon);
                PiProc::par(l, r.canon(env, canon))
            }
            PiProc::Nu(..) => {
                let (defs, tail) = self.chain();
                let depth = env.len();
                let names: Vec<Ident> = defs
                    .iter()
                    .map(|(x, _)| {
                        let c = canon.next();
                        env.push(((*x).clone(), c.clone()));
                        c
                    })
                    .collect();
                let new_defs = names
                    .into_iter()
                    .zip(&defs)
                    .map(|(c, (_, g))| {
                        let guard = g.map(|g| {
                            let gdepth = env.len();
                            let params = g
                                .params
                                .iter()
                                .map(|p| {
                                    let q = canon.next();
                                    env.push((p.clone(), q.clone()));
                                    q
                                })
                                .collect();
                            let body = g.body.canon(env, canon);
                            env.truncate(gdepth);
                            InputGuard { replicated: g.replicated, params, body: Box::new(body) }
                        });
                        (c, guard)
                    })
                    .collect();
                let tail = tail.canon(env, canon);
                env.truncate(depth);
                PiProc::from_chain(new_defs, tail)
            }
        }
    }

    pub fn alpha_equal(&self, other: &PiProc) -> bool {
        self.alpha_canonical() == other.alpha_canonical()
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&PiProc> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(self);
        };
        let child = match (self, first) {
            (PiProc::Nu(_, Some(g), _), 0) => g.body.as_ref(),
            (PiProc::Nu(_, _, r), 1) => r.as_ref(),
            (PiProc::Par(l, _), 0) => l.as_ref(),
            (PiProc::Par(_, r), 1) => r.as_ref(),
            _ => return None,
        };
        child.subterm(rest)
    }

    pub fn replace_at(&self, path: &[usize], with: PiProc) -> Option<PiProc> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(with);
        };
        Some(match (self, first) {
            (PiProc::Nu(x, Some(g), r), 0) => {
                let body = g.body.replace_at(rest, with)?;
                PiProc::Nu(x.clone(), Some(InputGuard { replicated: g.replicated, params: g.params.clone(), body: Box::new(body) }), r.clone())
            }
            (PiProc::Nu(x, g, r), 1) => PiProc::Nu(x.clone(), g.clone(), Box::new(r.replace_at(rest, with)?)),
            (PiProc::Par(l, r), 0) => PiProc::par(l.replace_at(rest, with)?, (**r).clone()),
            (PiProc::Par(l, r), 1) => PiProc::par((**l).clone(), r.replace_at(rest, with)?),
            _ => return None,
        })
    }

    /// True when some restriction occurs below a parallel composition or
    /// inside a guard body after a non-restriction.
    pub fn has_nested_nu(&self) -> bool {
        fn term_has_nu(p: &PiProc) -> bool {
            match p {
                PiProc::Nu(..) => true,
                PiProc::Out(..) => false,
                PiProc::Par(l, r) => term_has_nu(l) || term_has_nu(r),
            }
        }
        match self {
            PiProc::Nu(_, g, rest) => g.as_ref().is_some_and(|g| g.body.has_nested_nu()) || rest.has_nested_nu(),
            other => term_has_nu(other),
        }
    }
}

impl std::fmt::Debug for PiProc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_pi(self))
    }
}

impl std::fmt::Display for PiProc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::print_pi(self))
    }
}

impl std::fmt::Debug for InputGuard {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({:?}).{:?}", if self.replicated { "!" } else { "" }, self.params, self.body)
    }
}
