use super::TranslateError;
use crate::ident::{Ident, NameSupply};
use crate::kernel::desugar::{apply_decls, par_decls};
use crate::kernel::{AdmDecl, AdmTerm, AdmValue, Binding, LamTerm, Param};
use crate::types::{TypeExpr, Usage};

pub fn to_admin_type(a: &TypeExpr) -> TypeExpr {
    match a {
        TypeExpr::Unit => TypeExpr::chan_unit(),
        TypeExpr::Arrow(dom, cod) => TypeExpr::chan_fn(dom.iter().map(to_admin_type).collect(), to_admin_type(cod)),
        other => other.clone(),
    }
}

/// Administrative form of a λ-term. Values are named where they occur and
/// never shared; free variables stay as they are.
pub fn to_admin(m: &LamTerm) -> AdmDecl {
    let mut supply = m.supply();
    adm(m, &mut supply)
}

fn adm(m: &LamTerm, supply: &mut NameSupply) -> AdmDecl {
    match m {
        LamTerm::Var(x) => AdmDecl::term(AdmTerm::Var(x.clone())),
        LamTerm::Star => {
            let x = supply.fresh("x");
            AdmDecl::new(vec![Binding::new(Usage::Infinite, x.clone(), AdmValue::Star)], AdmTerm::Var(x))
        }
        LamTerm::Abs(x, a, body) => {
            let f = supply.fresh("f");
            let value = AdmValue::abs(vec![Param::new(x.clone(), to_admin_type(a))], adm(body, supply));
            AdmDecl::new(vec![Binding::new(Usage::Infinite, f.clone(), value)], AdmTerm::Var(f))
        }
        LamTerm::App(f, a) => apply_decls(&adm(f, supply), &[adm(a, supply)]),
        LamTerm::Par(l, r) => par_decls(&adm(l, supply), &adm(r, supply)),
    }
}

/// `Ch(A₁,…,Aₖ → α)` unfolds to the curried `A₁ → … → Aₖ → α`.
pub fn readback_type(a: &TypeExpr) -> TypeExpr {
    match a {
        TypeExpr::Chan(p) => match p.as_ref() {
            TypeExpr::Unit => TypeExpr::Unit,
            TypeExpr::Arrow(dom, cod) => {
                dom.iter().rev().fold(readback_type(cod), |acc, d| TypeExpr::arrow(readback_type(d), acc))
            }
            other => readback_type(other),
        },
        other => other.clone(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReadbackConfig {
    /// Substitute outer definitions before inner ones. Wrong whenever a
    /// later value mentions an earlier name.
    pub swap_substitution_order: bool,
}

pub fn readback(d: &AdmDecl) -> Result<LamTerm, TranslateError> {
    readback_with(d, ReadbackConfig::default())
}

pub fn readback_with(d: &AdmDecl, cfg: ReadbackConfig) -> Result<LamTerm, TranslateError> {
    check_infinite(d)?;
    Ok(rb_decl(d, cfg))
}

fn check_infinite(d: &AdmDecl) -> Result<(), TranslateError> {
    for b in &d.bindings {
        if b.usage != Usage::Infinite {
            return Err(TranslateError::UsageNotInfinite(b.name.clone()));
        }
        if let AdmValue::Abs(_, body) = &b.value {
            check_infinite(body)?;
        }
    }
    Ok(())
}

fn rb_decl(d: &AdmDecl, cfg: ReadbackConfig) -> LamTerm {
    let body = rb_term(&d.body);
    let defs: Vec<(Ident, LamTerm)> = d.bindings.iter().map(|b| (b.name.clone(), rb_value(&b.value, cfg))).collect();
    if cfg.swap_substitution_order {
        defs.iter().fold(body, |acc, (x, v)| acc.subst_one(x, v))
    } else {
        defs.iter().rev().fold(body, |acc, (x, v)| acc.subst_one(x, v))
    }
}

fn rb_value(v: &AdmValue, cfg: ReadbackConfig) -> LamTerm {
    match v {
        AdmValue::Star => LamTerm::Star,
        AdmValue::Abs(params, body) => params
            .iter()
            .rev()
            .fold(rb_decl(body, cfg), |acc, p| LamTerm::abs(p.name.clone(), readback_type(&p.ty), acc)),
    }
}

fn rb_term(t: &AdmTerm) -> LamTerm {
    match t {
        AdmTerm::Var(x) => LamTerm::Var(x.clone()),
        AdmTerm::App(h, args) => args.iter().fold(rb_term(h), |acc, a| LamTerm::app(acc, rb_term(a))),
        AdmTerm::Par(l, r) => LamTerm::par(rb_term(l), rb_term(r)),
    }
}

/// Replaces every parallel composition `M | N` by `p M N`; `p` must not be
/// free in `m`.
pub fn embed_parallel(m: &LamTerm, p: &Ident) -> Result<LamTerm, TranslateError> {
    if m.free_vars().contains(p) {
        return Err(TranslateError::NameNotFresh(p.clone()));
    }
    Ok(embed(m, p))
}

fn embed(m: &LamTerm, p: &Ident) -> LamTerm {
    match m {
        LamTerm::Star | LamTerm::Var(_) => m.clone(),
        LamTerm::Abs(x, a, body) => LamTerm::abs(x.clone(), a.clone(), embed(body, p)),
        LamTerm::App(f, a) => LamTerm::app(embed(f, p), embed(a, p)),
        LamTerm::Par(l, r) => LamTerm::app(LamTerm::app(LamTerm::Var(p.clone()), embed(l, p)), embed(r, p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_adm, parse_lam};

    #[test]
    fn star_and_abstraction() {
        let d = to_admin(&LamTerm::Star);
        assert!(d.alpha_equal(&parse_adm("let x = * in x").unwrap()));
        let d = to_admin(&parse_lam("\\z:Unit. z").unwrap());
        assert!(d.alpha_equal(&parse_adm("let f = \\z:Ch[Unit]. z in f").unwrap()));
    }

    #[test]
    fn values_are_not_shared() {
        let d = to_admin(&parse_lam("(\\z:Unit. z) (\\z:Unit. z)").unwrap());
        let expected = parse_adm("let x = \\z:Ch[Unit]. z in let y = \\z:Ch[Unit]. z in @(x, y)").unwrap();
        assert!(d.alpha_equal(&expected), "{d}");
    }

    #[test]
    fn parallel_distributes() {
        let d = to_admin(&parse_lam("a b | c").unwrap());
        assert!(d.alpha_equal(&parse_adm("@(a, b) | c").unwrap()));
    }

    #[test]
    fn readback_examples() {
        let d = parse_adm("let x = \\z:Ch[Unit]. z in @(x, x)").unwrap();
        assert!(readback(&d).unwrap().alpha_equal(&parse_lam("(\\z:Unit. z) (\\z:Unit. z)").unwrap()));
        let m = parse_lam("(\\x:Unit. x) *").unwrap();
        assert!(readback(&to_admin(&m)).unwrap().alpha_equal(&m));
        let once = parse_adm("let[1] x = \\y:Ch[Unit]. y in @(x, z)").unwrap();
        assert!(matches!(readback(&once), Err(TranslateError::UsageNotInfinite(_))));
    }

    #[test]
    fn polyadic_readback_curries() {
        let d = parse_adm("let f = \\a:Ch[Unit], b:Ch[Unit]. a in @(f, u, v)").unwrap();
        let expected = parse_lam("(\\a:Unit. \\b:Unit. a) u v").unwrap();
        assert!(readback(&d).unwrap().alpha_equal(&expected));
    }

    #[test]
    fn swapped_substitution_leaves_names_free() {
        let d = parse_adm("let x = * in let f = \\y:Ch[Unit]. x in f").unwrap();
        let good = readback(&d).unwrap();
        let bad = readback_with(&d, ReadbackConfig { swap_substitution_order: true }).unwrap();
        assert!(good.free_vars().is_empty());
        assert!(!bad.free_vars().is_empty());
    }

    #[test]
    fn embedding_replaces_parallel() {
        let p = Ident::parse("p");
        let m = parse_lam("a | b").unwrap();
        assert_eq!(embed_parallel(&m, &p).unwrap(), parse_lam("p a b").unwrap());
        let id = parse_lam("\\x:Unit. x").unwrap();
        assert_eq!(embed_parallel(&id, &p).unwrap(), id);
    }
}
