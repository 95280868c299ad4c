use std::collections::BTreeMap;

use super::TranslateError;
use crate::ident::{Ident, NameSupply};
use crate::kernel::{AdmDecl, AdmTerm, AdmValue, Binding, Param};
use crate::typecheck::{check_adm, TypingContext};
use crate::types::{Calculus, TypeExpr, Usage};

fn answer(concurrent: bool) -> TypeExpr {
    if concurrent {
        TypeExpr::Behavior
    } else {
        TypeExpr::Result
    }
}

/// `⌈A⌉`: every function channel gains a continuation parameter.
pub fn cps_type(a: &TypeExpr, concurrent: bool) -> TypeExpr {
    match a.as_chan_fn() {
        Some((dom, cod)) => {
            let mut params: Vec<TypeExpr> = dom.iter().map(|d| cps_type(d, concurrent)).collect();
            params.push(cont_type(cod, concurrent));
            TypeExpr::chan_fn(params, answer(concurrent))
        }
        None => a.clone(),
    }
}

/// `K(α)`, the type of a continuation expecting an `α`. A behaviour has
/// nothing to return, so its continuation is a plain name.
pub fn cont_type(a: &TypeExpr, concurrent: bool) -> TypeExpr {
    if concurrent && *a == TypeExpr::Behavior {
        TypeExpr::chan_unit()
    } else {
        TypeExpr::chan_fn(vec![cps_type(a, concurrent)], answer(concurrent))
    }
}

/// `D : k`. `calc` selects the functional (`Adm`, answers `#R`) or the
/// concurrent (`AdmPar`, answers `#b`) translation; `ctx` types the free
/// names of `d`, since intermediate continuations are annotated.
pub fn cps_transform(d: &AdmDecl, k: &Ident, ctx: &TypingContext, calc: Calculus) -> Result<AdmDecl, TranslateError> {
    let concurrent = match calc {
        Calculus::Adm => false,
        Calculus::AdmPar => true,
        _ => return Err(TranslateError::NotCpsShape(format!("no CPS translation from calculus {calc}"))),
    };
    let mut names = Vec::new();
    d.idents(&mut names);
    if names.contains(k) || ctx.get(k).is_some() {
        return Err(TranslateError::NameNotFresh(k.clone()));
    }
    let d = d.uniquify();
    let typing = check_adm(ctx, &d, calc).map_err(TranslateError::IllTyped)?;
    let mut env: BTreeMap<Ident, TypeExpr> = ctx.entries().clone();
    env.extend(typing.binders);
    let mut supply = d.supply();
    supply.reserve(ctx.entries().keys());
    supply.reserve([k]);
    let mut t = Cps { env, supply, concurrent };
    t.decl(&d, k)
}

struct Cps {
    env: BTreeMap<Ident, TypeExpr>,
    supply: NameSupply,
    concurrent: bool,
}

impl Cps {
    fn decl(&mut self, d: &AdmDecl, k: &Ident) -> Result<AdmDecl, TranslateError> {
        let mut bindings = Vec::with_capacity(d.bindings.len());
        for b in &d.bindings {
            let value = self.value(&b.name, &b.value)?;
            bindings.push(Binding { usage: b.usage, name: b.name.clone(), value });
        }
        let (extra, body) = self.term(&d.body, k)?;
        bindings.extend(extra);
        Ok(AdmDecl::new(bindings, body))
    }

    /// `ψ(λy⁺.D) = λy⁺,k.(D:k)`.
    fn value(&mut self, x: &Ident, v: &AdmValue) -> Result<AdmValue, TranslateError> {
        let AdmValue::Abs(params, body) = v else { return Ok(AdmValue::Star) };
        for p in params {
            self.env.entry(p.name.clone()).or_insert_with(|| p.ty.clone());
        }
        let cod = match self.env.get(x).and_then(|t| t.as_chan_fn()) {
            Some((_, cod)) => cod.clone(),
            None => self.synth(&body.body).unwrap_or(answer(self.concurrent)),
        };
        let k = self.supply.fresh("k");
        let mut ps: Vec<Param> = params.iter().map(|p| Param::new(p.name.clone(), cps_type(&p.ty, self.concurrent))).collect();
        ps.push(Param::new(k.clone(), cont_type(&cod, self.concurrent)));
        Ok(AdmValue::abs(ps, self.decl(body, &k)?))
    }

    fn term(&mut self, t: &AdmTerm, k: &Ident) -> Result<(Vec<Binding>, AdmTerm), TranslateError> {
        match t {
            AdmTerm::Var(x) => Ok((Vec::new(), AdmTerm::call(k.clone(), [x.clone()]))),
            AdmTerm::Par(l, r) => {
                let (mut bl, tl) = self.term(l, k)?;
                let (br, tr) = self.term(r, k)?;
                bl.extend(br);
                Ok((bl, AdmTerm::par(tl, tr)))
            }
            AdmTerm::App(head, args) => {
                let comps: Vec<&AdmTerm> = std::iter::once(head.as_ref()).chain(args).collect();
                let Some(i) = comps.iter().position(|c| c.as_var().is_none()) else {
                    let mut out: Vec<AdmTerm> = args.clone();
                    out.push(AdmTerm::Var(k.clone()));
                    return Ok((Vec::new(), AdmTerm::app((**head).clone(), out)));
                };
                let inner = comps[i];
                if !matches!(inner, AdmTerm::App(..)) {
                    return Err(TranslateError::NotCpsShape("parallel composition used as an argument".into()));
                }
                // @(x*, @(M, M⁺), N*) : k  =  let k' = λy.(@(x*, y, N*) : k) in @(M, M⁺) : k'
                let ty = self.synth(inner).unwrap_or_else(TypeExpr::chan_unit);
                let y = self.supply.fresh("y");
                let k2 = self.supply.fresh("k");
                self.env.insert(y.clone(), ty.clone());
                let mut rest: Vec<AdmTerm> = comps.iter().map(|c| (*c).clone()).collect();
                rest[i] = AdmTerm::Var(y.clone());
                let outer = AdmTerm::app(rest.remove(0), rest);
                let (ob, ot) = self.term(&outer, k)?;
                let cont = AdmValue::abs(vec![Param::new(y, cps_type(&ty, self.concurrent))], AdmDecl::new(ob, ot));
                let usage = if self.concurrent { Usage::One } else { Usage::Infinite };
                let (ib, it) = self.term(inner, &k2)?;
                let mut bindings = vec![Binding::new(usage, k2, cont)];
                bindings.extend(ib);
                Ok((bindings, it))
            }
        }
    }

    /// Type of a term from the binder types; unknown only inside `let₀`
    /// values that do not type.
    fn synth(&self, t: &AdmTerm) -> Option<TypeExpr> {
        match t {
            AdmTerm::Var(x) => self.env.get(x).cloned(),
            AdmTerm::App(h, _) => self.synth(h)?.as_chan_fn().map(|(_, cod)| cod.clone()),
            AdmTerm::Par(..) => Some(TypeExpr::Behavior),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_adm, parse_type};

    fn ctx(entries: &[(&str, &str)]) -> TypingContext {
        TypingContext::from_entries(entries.iter().map(|(x, t)| (Ident::parse(x), parse_type(t).unwrap()))).unwrap()
    }

    fn k() -> Ident {
        Ident::parse("k")
    }

    #[test]
    fn application_of_names() {
        let g = ctx(&[("x", "Ch[Ch[Unit] -> Ch[Unit]]"), ("y", "Ch[Unit]")]);
        let d = parse_adm("@(x, y)").unwrap();
        let out = cps_transform(&d, &k(), &g, Calculus::Adm).unwrap();
        assert_eq!(out, parse_adm("@(x, y, k)").unwrap());
    }

    #[test]
    fn bare_variable() {
        let g = ctx(&[("x", "Ch[Unit]")]);
        let out = cps_transform(&parse_adm("x").unwrap(), &k(), &g, Calculus::Adm).unwrap();
        assert_eq!(out, parse_adm("@(k, x)").unwrap());
    }

    #[test]
    fn nested_application_binds_a_continuation() {
        let g = ctx(&[("f", "Ch[Ch[Unit] -> Ch[Unit]]"), ("m", "Ch[Ch[Unit] -> Ch[Unit]]"), ("a", "Ch[Unit]")]);
        let d = parse_adm("@(f, @(m, a))").unwrap();
        let out = cps_transform(&d, &k(), &g, Calculus::AdmPar).unwrap();
        let expected = parse_adm("let[1] k' = \\y:Ch[Unit]. @(f, y, k) in @(m, a, k')").unwrap();
        assert!(out.alpha_equal(&expected), "{out}");
        let out = cps_transform(&d, &k(), &g, Calculus::Adm).unwrap();
        assert_eq!(out.bindings[0].usage, Usage::Infinite);
    }

    #[test]
    fn parallel_distributes_and_types() {
        let g = ctx(&[("f", "Ch[Ch[Unit] -> #b]"), ("a", "Ch[Unit]")]);
        let d = parse_adm("@(f, a) | @(f, a)").unwrap();
        let out = cps_transform(&d, &k(), &g, Calculus::AdmPar).unwrap();
        assert_eq!(out, parse_adm("@(f, a, k) | @(f, a, k)").unwrap());
        assert_eq!(cont_type(&TypeExpr::Behavior, true), TypeExpr::chan_unit());
        let cg = ctx(&[("f", "Ch[Ch[Unit], Ch[Unit] -> #b]"), ("a", "Ch[Unit]"), ("k", "Ch[Unit]")]);
        assert_eq!(check_adm(&cg, &out, Calculus::CpsPar).unwrap().ty, TypeExpr::Behavior);
    }

    #[test]
    fn values_gain_a_continuation() {
        let d = parse_adm("let x = * in let f = \\y:Ch[Unit]. y in @(f, x)").unwrap();
        let out = cps_transform(&d, &k(), &TypingContext::new(), Calculus::Adm).unwrap();
        let expected = parse_adm(
            "let x = * in let f = \\y:Ch[Unit], k1:Ch[Ch[Unit] -> #R]. @(k1, y) in @(f, x, k)",
        )
        .unwrap();
        assert!(out.alpha_equal(&expected), "{out}");
        let kctx = ctx(&[("k", "Ch[Ch[Unit] -> #R]")]);
        assert_eq!(check_adm(&kctx, &out, Calculus::Cps).unwrap().ty, TypeExpr::Result);
    }
}
