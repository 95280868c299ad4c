//! The unified type language shared by every calculus, plus usages and
//! the calculus tags.

use std::fmt;

/// Types of all five calculi.
///
/// The λ-calculi use `Unit`, single-domain `Arrow` and `Behavior`. The
/// administrative calculi type names with `Chan`: `Chan(Unit)` is a name
/// bound to `*`, `Chan(Arrow(..))` a name bound to an abstraction. π-calculus
/// channel types `Ch(A⁺)` are represented as `Chan(Arrow(A⁺, Behavior))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeExpr {
    Unit,
    Arrow(Vec<TypeExpr>, Box<TypeExpr>),
    Behavior,
    Result,
    Chan(Box<TypeExpr>),
}

impl TypeExpr {
    pub fn arrow(domain: TypeExpr, codomain: TypeExpr) -> Self {
        TypeExpr::Arrow(vec![domain], Box::new(codomain))
    }

    pub fn chan_unit() -> Self {
        TypeExpr::Chan(Box::new(TypeExpr::Unit))
    }

    /// `Ch(A⁺ → codomain)`.
    pub fn chan_fn(domain: Vec<TypeExpr>, codomain: TypeExpr) -> Self {
        TypeExpr::Chan(Box::new(TypeExpr::Arrow(domain, Box::new(codomain))))
    }

    /// π channel type `Ch(A⁺)`.
    pub fn pi_chan(payload: Vec<TypeExpr>) -> Self {
        TypeExpr::chan_fn(payload, TypeExpr::Behavior)
    }

    /// Domain and codomain of a channel carrying an abstraction.
    pub fn as_chan_fn(&self) -> Option<(&[TypeExpr], &TypeExpr)> {
        match self {
            TypeExpr::Chan(inner) => match inner.as_ref() {
                TypeExpr::Arrow(dom, cod) => Some((dom, cod)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn contains_behavior(&self) -> bool {
        match self {
            TypeExpr::Behavior => true,
            TypeExpr::Unit | TypeExpr::Result => false,
            TypeExpr::Arrow(dom, cod) => dom.iter().any(TypeExpr::contains_behavior) || cod.contains_behavior(),
            TypeExpr::Chan(p) => p.contains_behavior(),
        }
    }

    pub fn is_value_type(&self) -> bool {
        !matches!(self, TypeExpr::Behavior | TypeExpr::Result)
    }

    /// Well-formedness of this type as a *value* type of the given calculus.
    pub fn is_value_type_of(&self, calc: Calculus) -> bool {
        use TypeExpr::*;
        match calc {
            Calculus::Lam => match self {
                Unit => true,
                Arrow(dom, cod) => dom.len() == 1 && dom[0].is_value_type_of(calc) && cod.is_value_type_of(calc),
                _ => false,
            },
            Calculus::LamPar => match self {
                Unit => true,
                Arrow(dom, cod) => {
                    dom.len() == 1
                        && dom[0].is_value_type_of(calc)
                        && (**cod == Behavior || cod.is_value_type_of(calc))
                }
                _ => false,
            },
            Calculus::Adm | Calculus::AdmPar | Calculus::Cps | Calculus::CpsPar | Calculus::Pi => match self {
                Chan(payload) => match payload.as_ref() {
                    Unit => true,
                    Arrow(dom, cod) => {
                        !dom.is_empty()
                            && dom.iter().all(|a| a.is_value_type_of(calc))
                            && match calc {
                                Calculus::Adm => cod.is_value_type_of(calc),
                                Calculus::AdmPar => **cod == Behavior || cod.is_value_type_of(calc),
                                Calculus::Cps => **cod == Result,
                                _ => **cod == Behavior,
                            }
                    }
                    _ => false,
                },
                _ => false,
            },
        }
    }

    /// Well-formedness as a result type of a term of the given calculus.
    pub fn is_type_of(&self, calc: Calculus) -> bool {
        match calc {
            Calculus::Lam | Calculus::Adm => self.is_value_type_of(calc),
            Calculus::LamPar | Calculus::AdmPar => *self == TypeExpr::Behavior || self.is_value_type_of(calc),
            Calculus::Cps => *self == TypeExpr::Result,
            Calculus::CpsPar | Calculus::Pi => *self == TypeExpr::Behavior,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TypeExpr::Unit | TypeExpr::Behavior | TypeExpr::Result => 1,
            TypeExpr::Arrow(dom, cod) => 1 + dom.iter().map(TypeExpr::size).sum::<usize>() + cod.size(),
            TypeExpr::Chan(p) => 1 + p.size(),
        }
    }
}

impl fmt::Debug for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_type(self))
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_type(self))
    }
}

/// Multiplicity of a declaration: available forever, once, or not at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Usage {
    Infinite,
    One,
    Zero,
}

impl Usage {
    /// `↓∞ = ∞`, `↓1 = 0`, `↓0` undefined.
    pub fn decrement(self) -> Option<Usage> {
        match self {
            Usage::Infinite => Some(Usage::Infinite),
            Usage::One => Some(Usage::Zero),
            Usage::Zero => None,
        }
    }

    pub fn is_available(self) -> bool {
        self != Usage::Zero
    }
}

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Usage::Infinite => "inf",
            Usage::One => "1",
            Usage::Zero => "0",
        })
    }
}

/// The calculi handled by the toolkit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Calculus {
    /// Simply typed call-by-value λ.
    Lam,
    /// λ with parallel composition and behaviour type.
    LamPar,
    /// Administrative form, functional.
    Adm,
    /// Administrative form with parallel composition and usages.
    AdmPar,
    /// Administrative CPS fragment, functional (results typed `#R`).
    Cps,
    /// Administrative CPS fragment, concurrent (results typed `#b`).
    CpsPar,
    /// The typed π-calculus.
    Pi,
}

impl Calculus {
    pub const ALL: [Calculus; 7] = [
        Calculus::Lam,
        Calculus::LamPar,
        Calculus::Adm,
        Calculus::AdmPar,
        Calculus::Cps,
        Calculus::CpsPar,
        Calculus::Pi,
    ];

    pub fn is_lambda(self) -> bool {
        matches!(self, Calculus::Lam | Calculus::LamPar)
    }

    pub fn is_admin(self) -> bool {
        matches!(self, Calculus::Adm | Calculus::AdmPar | Calculus::Cps | Calculus::CpsPar)
    }

    pub fn is_cps(self) -> bool {
        matches!(self, Calculus::Cps | Calculus::CpsPar)
    }

    pub fn has_par(self) -> bool {
        matches!(self, Calculus::LamPar | Calculus::AdmPar | Calculus::CpsPar | Calculus::Pi)
    }

    pub fn name(self) -> &'static str {
        match self {
            Calculus::Lam => "lam",
            Calculus::LamPar => "lam-par",
            Calculus::Adm => "adm",
            Calculus::AdmPar => "adm-par",
            Calculus::Cps => "cps",
            Calculus::CpsPar => "cps-par",
            Calculus::Pi => "pi",
        }
    }

    pub fn from_name(name: &str) -> Option<Calculus> {
        Calculus::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
