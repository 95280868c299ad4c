use std::collections::BTreeMap;

use super::TranslateError;
use crate::ident::{Ident, NameSupply};
use crate::kernel::desugar::par_decls;
use crate::kernel::{AdmDecl, AdmTerm, AdmValue, Binding, InputGuard, Param, PiProc};
use crate::typecheck::{check_pi, TypingContext};
use crate::types::{TypeExpr, Usage};

/// Definitions become restricted inputs: `∞` replicated, `1` linear, and
/// names bound to `*` or with usage `0` bare restrictions.
pub fn to_pi(d: &AdmDecl) -> Result<PiProc, TranslateError> {
    crate::typecheck::cps_shape(d, true).map_err(|e| TranslateError::NotCpsShape(e.to_string()))?;
    Ok(decl(&d.uniquify()))
}

fn decl(d: &AdmDecl) -> PiProc {
    let defs = d
        .bindings
        .iter()
        .map(|b| {
            let guard = match (&b.value, b.usage) {
                (AdmValue::Abs(params, body), Usage::Infinite | Usage::One) => Some(InputGuard::new(
                    b.usage == Usage::Infinite,
                    params.iter().map(|p| p.name.clone()).collect(),
                    decl(body),
                )),
                _ => None,
            };
            (b.name.clone(), guard)
        })
        .collect();
    PiProc::from_chain(defs, term(&d.body))
}

fn term(t: &AdmTerm) -> PiProc {
    match t {
        AdmTerm::App(h, args) => PiProc::Out(
            h.as_var().expect("CPS shape").clone(),
            args.iter().map(|a| a.as_var().expect("CPS shape").clone()).collect(),
        ),
        AdmTerm::Par(l, r) => PiProc::par(term(l), term(r)),
        AdmTerm::Var(_) => unreachable!("CPS shape has no bare variables"),
    }
}

/// Inverse of [`to_pi`]. Binder annotations come from the inferred types;
/// a bare restriction becomes `let x = *` at type `Ch[Unit]` and an unused
/// definition `let[0]` at a channel type.
pub fn from_pi(p: &PiProc, ctx: &TypingContext) -> Result<AdmDecl, TranslateError> {
    let p = p.uniquify();
    let types = check_pi(ctx, &p).map_err(TranslateError::UntypablePi)?;
    let mut supply = p.supply();
    supply.reserve(ctx.entries().keys());
    Ok(back(&p, &types, &mut supply))
}

fn back(p: &PiProc, types: &BTreeMap<Ident, TypeExpr>, supply: &mut NameSupply) -> AdmDecl {
    match p {
        PiProc::Out(x, args) => AdmDecl::term(AdmTerm::call(x.clone(), args.iter().cloned())),
        PiProc::Par(l, r) => par_decls(&back(l, types, supply), &back(r, types, supply)),
        PiProc::Nu(x, guard, rest) => {
            let binding = match guard {
                Some(g) => {
                    let params = g.params.iter().map(|y| Param::new(y.clone(), types[y].clone())).collect();
                    let usage = if g.replicated { Usage::Infinite } else { Usage::One };
                    Binding::new(usage, x.clone(), AdmValue::abs(params, back(&g.body, types, supply)))
                }
                None => match types[x].as_chan_fn() {
                    Some((dom, _)) => {
                        // never typed, only has to be an abstraction
                        let params: Vec<Param> = dom.iter().map(|a| Param::new(supply.fresh("y"), a.clone())).collect();
                        let names: Vec<Ident> = params.iter().map(|p| p.name.clone()).collect();
                        let body = AdmDecl::term(AdmTerm::call(names[0].clone(), names.clone()));
                        Binding::new(Usage::Zero, x.clone(), AdmValue::abs(params, body))
                    }
                    None => Binding::new(Usage::Infinite, x.clone(), AdmValue::Star),
                },
            };
            let inner = back(rest, types, supply);
            let mut bindings = vec![binding];
            bindings.extend(inner.bindings);
            AdmDecl::new(bindings, inner.body)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::normalize_adm;
    use crate::syntax::{parse_adm, parse_pi, parse_type};

    #[test]
    fn replicated_and_linear_definitions() {
        let d = parse_adm("let x = \\y:Ch[Unit]. @(k, y) in @(x, z)").unwrap();
        assert!(to_pi(&d).unwrap().alpha_equal(&parse_pi("new x (!x(y).k!(y) | x!(z))").unwrap()));
        let d = parse_adm("let[1] x = \\y:Ch[Unit]. @(k, y) in @(x, z)").unwrap();
        assert!(to_pi(&d).unwrap().alpha_equal(&parse_pi("new x (x(y).k!(y) | x!(z))").unwrap()));
        assert!(matches!(to_pi(&parse_adm("x").unwrap()), Err(TranslateError::NotCpsShape(_))));
    }

    #[test]
    fn typing_picks_the_binding() {
        let ctx = TypingContext::new().extend("k", parse_type("Ch[Ch[Unit] -> #b]").unwrap()).unwrap();
        let d = from_pi(&parse_pi("new x (k!(x))").unwrap(), &ctx).unwrap();
        assert!(d.alpha_equal(&parse_adm("let x = * in @(k, x)").unwrap()));
        let d = from_pi(&parse_pi("new x (new w (x!(w)))").unwrap(), &TypingContext::new()).unwrap();
        assert_eq!(d.bindings[0].usage, Usage::Zero);
        assert!(matches!(from_pi(&parse_pi("new x (!x(y).x!(y) | x!(z))").unwrap(), &TypingContext::new()), Err(TranslateError::UntypablePi(_))));
    }

    #[test]
    fn roundtrip_up_to_congruence() {
        let ctx = TypingContext::new().extend("k", parse_type("Ch[Ch[Unit] -> #b]").unwrap()).unwrap();
        let d = parse_adm("let z = * in let[1] x = \\y:Ch[Unit]. @(k, y) in let w = \\y:Ch[Unit]. @(x, y) in @(w, z) | @(k, z)").unwrap();
        let back = from_pi(&to_pi(&d).unwrap(), &ctx).unwrap();
        assert_eq!(normalize_adm(&back.erase_annotations()), normalize_adm(&d.erase_annotations()));
    }
}
