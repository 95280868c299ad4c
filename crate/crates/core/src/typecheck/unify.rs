//! First-order unification over types with metavariables.
//!
//! Needed where the calculi leave a type unconstrained by annotations: the
//! codomain of a `let₀` definition, and every binder of a π-process.

use crate::types::TypeExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetaKind {
    /// Result of a function; defaults to `#b`.
    Codomain,
    /// A name; defaults to `Ch[Unit]`.
    Name,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Unit,
    Behavior,
    Result,
    Arrow(Vec<Ty>, Box<Ty>),
    Chan(Box<Ty>),
    Meta(usize),
}

impl Ty {
    pub fn from_expr(t: &TypeExpr) -> Ty {
        match t {
            TypeExpr::Unit => Ty::Unit,
            TypeExpr::Behavior => Ty::Behavior,
            TypeExpr::Result => Ty::Result,
            TypeExpr::Arrow(d, c) => Ty::Arrow(d.iter().map(Ty::from_expr).collect(), Box::new(Ty::from_expr(c))),
            TypeExpr::Chan(p) => Ty::Chan(Box::new(Ty::from_expr(p))),
        }
    }

    pub fn chan_fn(dom: Vec<Ty>, cod: Ty) -> Ty {
        Ty::Chan(Box::new(Ty::Arrow(dom, Box::new(cod))))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Unifier {
    slots: Vec<(MetaKind, Option<Ty>)>,
}

/// The two sides that failed to unify, fully resolved.
#[derive(Debug, Clone)]
pub struct Clash(pub TypeExpr, pub TypeExpr);

impl Unifier {
    pub fn new() -> Self {
        Unifier::default()
    }

    pub fn fresh(&mut self, kind: MetaKind) -> Ty {
        self.slots.push((kind, None));
        Ty::Meta(self.slots.len() - 1)
    }

    /// Follows bound metavariables at the root.
    pub fn shallow(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Meta(m) = t {
            match &self.slots[m].1 {
                Some(next) => t = next.clone(),
                None => return Ty::Meta(m),
            }
        }
        t
    }

    pub fn is_unresolved(&self, t: &Ty) -> bool {
        matches!(self.shallow(t), Ty::Meta(_))
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Meta(n) => n == m,
            Ty::Unit | Ty::Behavior | Ty::Result => false,
            Ty::Arrow(d, c) => d.iter().any(|a| self.occurs(m, a)) || self.occurs(m, &c),
            Ty::Chan(p) => self.occurs(m, &p),
        }
    }

    pub fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), Clash> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Ty::Meta(m), Ty::Meta(n)) if m == n => Ok(()),
            (Ty::Meta(m), other) | (other, Ty::Meta(m)) => {
                if self.occurs(*m, other) {
                    return Err(Clash(self.zonk(&a), self.zonk(&b)));
                }
                self.slots[*m].1 = Some(other.clone());
                Ok(())
            }
            (Ty::Unit, Ty::Unit) | (Ty::Behavior, Ty::Behavior) | (Ty::Result, Ty::Result) => Ok(()),
            (Ty::Chan(p), Ty::Chan(q)) => self.unify(p, q).map_err(|_| Clash(self.zonk(&a), self.zonk(&b))),
            (Ty::Arrow(d1, c1), Ty::Arrow(d2, c2)) if d1.len() == d2.len() => {
                let inner = d1.iter().zip(d2).try_for_each(|(x, y)| self.unify(x, y)).and_then(|_| self.unify(c1, c2));
                inner.map_err(|_| Clash(self.zonk(&a), self.zonk(&b)))
            }
            _ => Err(Clash(self.zonk(&a), self.zonk(&b))),
        }
    }

    /// Fully resolved type; unresolved metavariables take their defaults.
    pub fn zonk(&self, t: &Ty) -> TypeExpr {
        match self.shallow(t) {
            Ty::Unit => TypeExpr::Unit,
            Ty::Behavior => TypeExpr::Behavior,
            Ty::Result => TypeExpr::Result,
            Ty::Arrow(d, c) => TypeExpr::Arrow(d.iter().map(|a| self.zonk(a)).collect(), Box::new(self.zonk(&c))),
            Ty::Chan(p) => TypeExpr::Chan(Box::new(self.zonk(&p))),
            Ty::Meta(m) => match self.slots[m].0 {
                MetaKind::Codomain => TypeExpr::Behavior,
                MetaKind::Name => TypeExpr::chan_unit(),
            },
        }
    }
}
