//! Term representations and the binding discipline shared by every calculus.

pub mod adm;
pub mod congruence;
pub mod desugar;
pub mod lam;
pub mod pi;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ident::Ident;
pub use adm::{AdmDecl, AdmTerm, AdmValue, Binding, Param};
pub use congruence::{normalize_adm, normalize_pi};
pub use lam::LamTerm;
pub use pi::{InputGuard, PiProc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("cannot substitute a {found} for `{name}` in a {target} term")]
    SortMismatch { name: Ident, found: &'static str, target: &'static str },
    #[error("no hole at path {0:?}")]
    BadPath(Vec<usize>),
}

/// A term of any of the calculi.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Lam(LamTerm),
    Adm(AdmDecl),
    Pi(PiProc),
}

/// What may replace a name: another name in every calculus, a λ-term only
/// inside λ-terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replacement {
    Name(Ident),
    Lam(LamTerm),
}

impl Term {
    pub fn sort(&self) -> &'static str {
        match self {
            Term::Lam(_) => "lambda",
            Term::Adm(_) => "administrative",
            Term::Pi(_) => "process",
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        match self {
            Term::Lam(t) => t.free_vars(),
            Term::Adm(d) => d.free_vars(),
            Term::Pi(p) => p.free_vars(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Lam(t) => t.size(),
            Term::Adm(d) => d.size(),
            Term::Pi(p) => p.size(),
        }
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn substitute(&self, mapping: &BTreeMap<Ident, Replacement>) -> Result<Term, KernelError> {
        match self {
            Term::Lam(t) => {
                let map = mapping
                    .iter()
                    .map(|(k, r)| {
                        let v = match r {
                            Replacement::Name(n) => LamTerm::Var(n.clone()),
                            Replacement::Lam(t) => t.clone(),
                        };
                        (k.clone(), v)
                    })
                    .collect();
                Ok(Term::Lam(t.subst(&map)))
            }
            Term::Adm(_) | Term::Pi(_) => {
                let fv = self.free_vars();
                let mut names = BTreeMap::new();
                for (k, r) in mapping {
                    match r {
                        Replacement::Name(n) => {
                            names.insert(k.clone(), n.clone());
                        }
                        Replacement::Lam(LamTerm::Var(n)) => {
                            names.insert(k.clone(), n.clone());
                        }
                        Replacement::Lam(_) if !fv.contains(k) => {}
                        Replacement::Lam(_) => {
                            return Err(KernelError::SortMismatch { name: k.clone(), found: "lambda term", target: self.sort() })
                        }
                    }
                }
                Ok(match self {
                    Term::Adm(d) => Term::Adm(d.rename(&names)),
                    Term::Pi(p) => Term::Pi(p.rename(&names)),
                    Term::Lam(_) => unreachable!(),
                })
            }
        }
    }

    pub fn alpha_equal(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Lam(a), Term::Lam(b)) => a.alpha_equal(b),
            (Term::Adm(a), Term::Adm(b)) => a.alpha_equal(b),
            (Term::Pi(a), Term::Pi(b)) => a.alpha_equal(b),
            _ => false,
        }
    }

    /// Canonical representative of the structural-congruence class. λ-terms
    /// have no congruence beyond α, so they are only α-normalized.
    pub fn normalize(&self) -> Term {
        match self {
            Term::Lam(t) => Term::Lam(t.alpha_canonical()),
            Term::Adm(d) => Term::Adm(normalize_adm(d)),
            Term::Pi(p) => Term::Pi(normalize_pi(p)),
        }
    }

    pub fn congruent(&self, other: &Term) -> bool {
        self.normalize() == other.normalize()
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Term::Lam(t) => write!(f, "{t}"),
            Term::Adm(d) => write!(f, "{d}"),
            Term::Pi(p) => write!(f, "{p}"),
        }
    }
}

/// Hands out binder names by position for α-canonical forms. Indices start
/// above every free name's index so canonical binders never collide with
/// free names.
pub(crate) struct Canonicalizer {
    offset: u32,
    count: u32,
}

impl Canonicalizer {
    pub(crate) fn new(free: &BTreeSet<Ident>) -> Self {
        let offset = free.iter().map(Ident::index).max().map_or(1, |m| m + 1);
        Canonicalizer { offset, count: 0 }
    }

    pub(crate) fn next(&mut self) -> Ident {
        let id = Ident::new("v", self.offset + self.count);
        self.count += 1;
        id
    }
}

/// Innermost binding of `x` in a scope stack, or `x` itself when free.
pub(crate) fn lookup(env: &[(Ident, Ident)], x: &Ident) -> Ident {
    env.iter().rev().find(|(from, _)| from == x).map_or_else(|| x.clone(), |(_, to)| to.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::TypeExpr;

    #[test]
    fn lambda_replacement_rejected_in_admin_terms() {
        let d = Term::Adm(AdmDecl::term(AdmTerm::call("x", ["y".into()])));
        let mut m = BTreeMap::new();
        m.insert(Ident::from("y"), Replacement::Lam(LamTerm::abs("w", TypeExpr::Unit, LamTerm::var("w"))));
        assert!(matches!(d.substitute(&m), Err(KernelError::SortMismatch { .. })));
        m.insert(Ident::from("y"), Replacement::Name("z".into()));
        assert_eq!(d.substitute(&m).unwrap(), Term::Adm(AdmDecl::term(AdmTerm::call("x", ["z".into()]))));
    }

    #[test]
    fn canonical_binders_avoid_free_names() {
        let free: BTreeSet<Ident> = [Ident::new("v", 3)].into_iter().collect();
        let mut c = Canonicalizer::new(&free);
        assert_eq!(c.next(), Ident::new("v", 4));
    }
}
