use std::collections::HashSet;

use super::gen::cps_image;
use super::{DiagramError, DiagramKind, Faults, Verdict, CURRIED_PREFIX};
use crate::kernel::{normalize_adm, normalize_pi, AdmDecl, AdmTerm, LamTerm, PiProc, Term};
use crate::reduce::{evaluate, find_redexes, step_at_with, successors, Outcome, RedexDescriptor, StepBudget, StepConfig, Strategy};
use crate::translate::{
    embed_parallel, from_pi, readback, readback_type, readback_with, saturate_usages, to_admin, to_admin_type, to_pi, ReadbackConfig,
};
use crate::typecheck::{check_adm, check_lam, check_pi, infer_lambda_p, is_monadic, TypingContext};
use crate::types::{Calculus, TypeExpr};

/// Seeds of the randomized strategies tried by the termination check.
const TERMINATION_SEEDS: [u64; 8] = [1, 2, 3, 5, 8, 13, 21, 34];
const TERMINATION_BUDGET: usize = 100_000;

pub fn check_diagram(kind: DiagramKind, t: &Term, ctx: &TypingContext, ty: &TypeExpr) -> Result<Verdict, DiagramError> {
    check_diagram_with(kind, t, ctx, ty, Faults::default())
}

pub fn check_diagram_with(kind: DiagramKind, t: &Term, ctx: &TypingContext, ty: &TypeExpr, faults: Faults) -> Result<Verdict, DiagramError> {
    match kind {
        DiagramKind::Retraction => retraction(lam_source(t, ctx, ty)?, faults),
        DiagramKind::AdmSimulation => adm_simulation(saturated_source(t, ctx, ty)?, faults),
        DiagramKind::MonadicLifting => monadic_lifting(monadic_source(t, ctx, ty)?),
        DiagramKind::CpsSimulation => {
            let (d, calc) = adm_source(t, ctx, ty)?;
            cps_simulation(d, ctx, ty, calc, faults)
        }
        DiagramKind::PiRoundtrip => pi_roundtrip(t, ctx),
        DiagramKind::TypingPreservation => typing_preservation(t, ctx, ty),
        DiagramKind::Termination => termination(t, ctx),
    }
}

fn na(why: impl Into<String>) -> DiagramError {
    DiagramError::NotApplicable(why.into())
}

fn fail(lines: Vec<String>) -> Result<Verdict, DiagramError> {
    Ok(Verdict::CounterExample { trace: lines })
}

fn describe(r: &RedexDescriptor) -> String {
    format!("{} at {}", r.rule, r.path_string())
}

fn lam_source<'a>(t: &'a Term, ctx: &TypingContext, ty: &TypeExpr) -> Result<&'a LamTerm, DiagramError> {
    let Term::Lam(m) = t else { return Err(na("expects a λ-term")) };
    match check_lam(ctx, m, Calculus::LamPar) {
        Ok(found) if found == *ty => Ok(m),
        Ok(found) => Err(na(format!("term has type {found}, not {ty}"))),
        Err(e) => Err(na(format!("ill-typed: {e}"))),
    }
}

/// A well-typed administrative term, with the calculus it is checked in:
/// the functional one when it types there.
fn adm_source<'a>(t: &'a Term, ctx: &TypingContext, ty: &TypeExpr) -> Result<(&'a AdmDecl, Calculus), DiagramError> {
    let Term::Adm(d) = t else { return Err(na("expects an administrative term")) };
    for calc in [Calculus::Adm, Calculus::AdmPar] {
        if let Ok(typing) = check_adm(ctx, d, calc) {
            if typing.ty == *ty {
                return Ok((d, calc));
            }
        }
    }
    Err(na(format!("not well-typed at {ty}")))
}

fn saturated_source<'a>(t: &'a Term, ctx: &TypingContext, ty: &TypeExpr) -> Result<&'a AdmDecl, DiagramError> {
    let (d, _) = adm_source(t, ctx, ty)?;
    if !d.all_infinite() {
        return Err(na("usages other than inf"));
    }
    Ok(d)
}

fn monadic_source<'a>(t: &'a Term, ctx: &TypingContext, ty: &TypeExpr) -> Result<&'a AdmDecl, DiagramError> {
    let d = saturated_source(t, ctx, ty)?;
    let typing = check_adm(ctx, d, Calculus::AdmPar).map_err(|e| na(e.to_string()))?;
    if !is_monadic(&typing.ty) || !typing.binders.values().all(is_monadic) || !ctx.entries().values().all(is_monadic) {
        return Err(na("not in the monadic fragment"));
    }
    Ok(d)
}

fn retraction(m: &LamTerm, faults: Faults) -> Result<Verdict, DiagramError> {
    let d = to_admin(m);
    let back = match readback_with(&d, ReadbackConfig { swap_substitution_order: faults.swap_readback_order }) {
        Ok(back) => back,
        Err(e) => return fail(vec![format!("source {m}"), format!("adm {d}"), format!("readback failed: {e}")]),
    };
    if back.alpha_canonical() == m.alpha_canonical() {
        Ok(Verdict::Pass { depth: 0, steps: 0 })
    } else {
        fail(vec![format!("source {m}"), format!("adm {d}"), format!("readback {back}")])
    }
}

/// Shortest number of steps (at least one, at most `bound`) from `from` to
/// a term congruent to `target`.
fn search(from: &Term, target: &Term, calc: Calculus, bound: usize) -> Option<usize> {
    let target = target.normalize();
    let mut seen: HashSet<Term> = HashSet::new();
    let mut frontier = vec![from.normalize()];
    seen.insert(frontier[0].clone());
    for depth in 1..=bound {
        let mut next = Vec::new();
        for t in &frontier {
            for (_, s) in successors(t, calc) {
                let s = s.normalize();
                if s == target {
                    return Some(depth);
                }
                if seen.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

fn arity_at(d: &AdmDecl, r: &RedexDescriptor) -> usize {
    match d.body.subterm(&r.path) {
        Some(AdmTerm::App(_, args)) => args.len(),
        _ => 0,
    }
}

/// Number of components before the hole of the first call on the path to
/// `r` that has at least two of them. Read back, such a call curries into
/// `(x₁ x₂ …) E`, which is not an evaluation context.
fn curried_prefix(d: &AdmDecl, r: &RedexDescriptor) -> Option<usize> {
    let mut t = &d.body;
    for &i in &r.path {
        if matches!(t, AdmTerm::App(..)) && i >= 2 {
            return Some(i);
        }
        t = t.subterm(&[i])?;
    }
    None
}

fn adm_simulation(d: &AdmDecl, faults: Faults) -> Result<Verdict, DiagramError> {
    let rb = ReadbackConfig { swap_substitution_order: faults.swap_readback_order };
    let step_cfg = StepConfig { skip_usage_decrement: faults.skip_usage_decrement };
    let source = Term::Adm(d.clone());
    let m = match readback_with(d, rb) {
        Ok(m) => Term::Lam(m),
        Err(e) => return fail(vec![format!("source {d}"), format!("readback failed: {e}")]),
    };
    let mut deepest = 0;
    for r in find_redexes(&source, Calculus::AdmPar) {
        let Ok(Term::Adm(next)) = step_at_with(&source, Calculus::AdmPar, &r, step_cfg) else { unreachable!("enumerated redex") };
        let m2 = match readback_with(&next, rb) {
            Ok(m2) => Term::Lam(m2),
            Err(e) => return fail(vec![format!("source {d}"), describe(&r), format!("reduct {next}"), format!("readback failed: {e}")]),
        };
        let bound = arity_at(d, &r) + 1;
        match search(&m, &m2, Calculus::LamPar, bound) {
            Some(depth) => deepest = deepest.max(depth),
            None => {
                let mut trace = vec![
                    format!("source {d}"),
                    describe(&r),
                    format!("reduct {next}"),
                    format!("readback {m} does not reach {m2} within {bound} steps"),
                ];
                if let Some(n) = curried_prefix(d, &r) {
                    trace.push(format!("{CURRIED_PREFIX}: hole after {n} components"));
                }
                return fail(trace);
            }
        }
    }
    Ok(Verdict::Pass { depth: deepest, steps: 0 })
}

fn monadic_lifting(d: &AdmDecl) -> Result<Verdict, DiagramError> {
    let source = Term::Adm(d.clone());
    let m = Term::Lam(readback(d).map_err(|e| na(e.to_string()))?);
    let lifted: Vec<(RedexDescriptor, Term)> = successors(&source, Calculus::AdmPar)
        .into_iter()
        .map(|(r, next)| {
            let Term::Adm(next) = next else { unreachable!("adm reduct") };
            let back = readback(&next).map(|b| Term::Lam(b).normalize());
            (r, back.unwrap_or(Term::Lam(LamTerm::Star)))
        })
        .collect();
    for (r, m2) in successors(&m, Calculus::LamPar) {
        let m2 = m2.normalize();
        let matches = lifted.iter().filter(|(_, b)| *b == m2).count();
        if matches != 1 {
            return fail(vec![format!("source {d}"), format!("readback {m}"), describe(&r), format!("{matches} matching administrative steps")]);
        }
    }
    Ok(Verdict::Pass { depth: 1, steps: 0 })
}

fn cps_simulation(d: &AdmDecl, ctx: &TypingContext, ty: &TypeExpr, calc: Calculus, faults: Faults) -> Result<Verdict, DiagramError> {
    let target_calc = if calc == Calculus::AdmPar { Calculus::CpsPar } else { Calculus::Cps };
    let step_cfg = StepConfig { skip_usage_decrement: faults.skip_usage_decrement };
    let bound = if faults.drop_admin_cps_step { 1 } else { 2 };
    let Some((image, _, k)) = cps_image(d, ctx, ty, calc) else {
        return fail(vec![format!("source {d}"), "CPS translation failed".into()]);
    };
    let source = Term::Adm(d.clone());
    let mut deepest = 0;
    for r in find_redexes(&source, calc) {
        let Ok(Term::Adm(next)) = step_at_with(&source, calc, &r, step_cfg) else { unreachable!("enumerated redex") };
        let target = match crate::translate::cps_transform(&next, &k, ctx, calc) {
            Ok(t) => t,
            Err(e) => return fail(vec![format!("source {d}"), describe(&r), format!("reduct {next}"), format!("CPS of reduct failed: {e}")]),
        };
        match search(&Term::Adm(image.clone()), &Term::Adm(target.clone()), target_calc, bound) {
            Some(depth) => deepest = deepest.max(depth),
            None => {
                return fail(vec![
                    format!("source {d}"),
                    describe(&r),
                    format!("reduct {next}"),
                    format!("image {image} does not reach {target} within {bound} steps"),
                ])
            }
        }
    }
    Ok(Verdict::Pass { depth: deepest, steps: 0 })
}

fn erased(d: &AdmDecl) -> AdmDecl {
    normalize_adm(&d.erase_annotations())
}

fn pi_roundtrip(t: &Term, ctx: &TypingContext) -> Result<Verdict, DiagramError> {
    match t {
        Term::Adm(d) => {
            check_adm(ctx, d, Calculus::CpsPar).map_err(|e| na(format!("not a typed concurrent CPS term: {e}")))?;
            let p = match to_pi(d) {
                Ok(p) => p,
                Err(e) => return fail(vec![format!("source {d}"), format!("to-pi failed: {e}")]),
            };
            let back = match from_pi(&p, ctx) {
                Ok(b) => b,
                Err(e) => return fail(vec![format!("source {d}"), format!("process {p}"), format!("from-pi failed: {e}")]),
            };
            if erased(&back) != erased(d) {
                return fail(vec![format!("source {d}"), format!("process {p}"), format!("back {back}")]);
            }
            pi_side(&p, ctx)
        }
        Term::Pi(p) => {
            check_pi(ctx, p).map_err(|e| na(format!("ill-typed process: {e}")))?;
            pi_side(p, ctx)
        }
        Term::Lam(_) => Err(na("expects a CPS term or a process")),
    }
}

/// `to_pi(from_pi(P)) ≡ P`.
fn pi_side(p: &PiProc, ctx: &TypingContext) -> Result<Verdict, DiagramError> {
    let d = match from_pi(p, ctx) {
        Ok(d) => d,
        Err(e) => return fail(vec![format!("process {p}"), format!("from-pi failed: {e}")]),
    };
    match to_pi(&d) {
        Ok(q) if normalize_pi(&q) == normalize_pi(p) => Ok(Verdict::Pass { depth: 0, steps: 0 }),
        Ok(q) => fail(vec![format!("process {p}"), format!("adm {d}"), format!("back {q}")]),
        Err(e) => fail(vec![format!("process {p}"), format!("adm {d}"), format!("to-pi failed: {e}")]),
    }
}

fn map_ctx(ctx: &TypingContext, f: impl Fn(&TypeExpr) -> TypeExpr) -> Option<TypingContext> {
    TypingContext::from_entries(ctx.entries().iter().map(|(x, t)| (x.clone(), f(t)))).ok()
}

fn typing_preservation(t: &Term, ctx: &TypingContext, ty: &TypeExpr) -> Result<Verdict, DiagramError> {
    let mut problems = Vec::new();
    match t {
        Term::Lam(_) => {
            let m = lam_source(t, ctx, ty)?;
            let d = to_admin(m);
            let actx = map_ctx(ctx, to_admin_type).ok_or_else(|| na("context does not translate"))?;
            let want = to_admin_type(ty);
            match check_adm(&actx, &d, Calculus::AdmPar) {
                Ok(typing) if typing.ty == want => {
                    if !typing.binders.values().all(is_monadic) || !is_monadic(&typing.ty) {
                        problems.push(format!("adm image {d} leaves the monadic fragment"));
                    }
                }
                Ok(typing) => problems.push(format!("adm image {d} has type {}, expected {want}", typing.ty)),
                Err(e) => problems.push(format!("adm image {d} is ill-typed: {e}")),
            }
            match readback(&d).map(|b| (check_lam(ctx, &b, Calculus::LamPar), b)) {
                Ok((Ok(found), _)) if found == *ty => {}
                Ok((found, b)) => problems.push(format!("readback {b} types as {found:?}, expected {ty}")),
                Err(e) => problems.push(format!("readback failed: {e}")),
            }
            let p = m.supply().fresh("p");
            let pty = TypeExpr::arrow(TypeExpr::Behavior, TypeExpr::arrow(TypeExpr::Behavior, TypeExpr::Behavior));
            let pctx = ctx.extend(p.clone(), pty).map_err(|e| na(e.to_string()))?;
            match embed_parallel(m, &p).map(|e| (infer_lambda_p(&pctx, &e), e)) {
                Ok((Ok(found), _)) if found == *ty => {}
                Ok((found, e)) => problems.push(format!("embedding {e} types as {found:?}, expected {ty}")),
                Err(e) => problems.push(format!("embedding failed: {e}")),
            }
        }
        Term::Adm(_) => {
            let (d, calc) = adm_source(t, ctx, ty)?;
            adm_images(d, ctx, ty, calc, &mut problems);
        }
        Term::Pi(p) => {
            check_pi(ctx, p).map_err(|e| na(format!("ill-typed process: {e}")))?;
            match from_pi(p, ctx) {
                Ok(d) => match check_adm(ctx, &d, Calculus::CpsPar) {
                    Ok(typing) if typing.ty == TypeExpr::Behavior => {}
                    Ok(typing) => problems.push(format!("from-pi image {d} has type {}", typing.ty)),
                    Err(e) => problems.push(format!("from-pi image {d} is ill-typed: {e}")),
                },
                Err(e) => problems.push(format!("from-pi failed: {e}")),
            }
        }
    }
    if problems.is_empty() {
        Ok(Verdict::Pass { depth: 0, steps: 0 })
    } else {
        problems.insert(0, format!("source {t}"));
        fail(problems)
    }
}

fn adm_images(d: &AdmDecl, ctx: &TypingContext, ty: &TypeExpr, calc: Calculus, problems: &mut Vec<String>) {
    let is_cps = crate::typecheck::cps_shape(d, true).is_ok()
        && (check_adm(ctx, d, Calculus::CpsPar).is_ok() || check_adm(ctx, d, Calculus::Cps).is_ok());
    if is_cps {
        if let Ok(typing) = check_adm(ctx, d, Calculus::CpsPar) {
            if typing.ty == TypeExpr::Behavior {
                match to_pi(d).map(|p| (check_pi(ctx, &p), p)) {
                    Ok((Ok(_), _)) => {}
                    Ok((Err(e), p)) => problems.push(format!("process {p} is ill-typed: {e}")),
                    Err(e) => problems.push(format!("to-pi failed: {e}")),
                }
            }
        }
    }
    // D : k at the answer type
    let concurrent = calc == Calculus::AdmPar;
    let (target, answer) = if concurrent { (Calculus::CpsPar, TypeExpr::Behavior) } else { (Calculus::Cps, TypeExpr::Result) };
    match cps_image(d, ctx, ty, calc) {
        Some((image, kctx, _)) => match check_adm(&kctx, &image, target) {
            Ok(typing) if typing.ty == answer => {}
            Ok(typing) => problems.push(format!("CPS image {image} has type {}, expected {answer}", typing.ty)),
            Err(e) => problems.push(format!("CPS image {image} is ill-typed: {e}")),
        },
        None => problems.push("CPS translation failed".into()),
    }
    let saturated = if d.all_infinite() {
        Some(d.clone())
    } else {
        match saturate_usages(d, ctx) {
            Ok(s) => {
                match check_adm(ctx, &s, Calculus::AdmPar) {
                    Ok(typing) if typing.ty == *ty && s.all_infinite() => {}
                    Ok(typing) => problems.push(format!("saturated {s} has type {}, expected {ty}", typing.ty)),
                    Err(e) => problems.push(format!("saturated {s} is ill-typed: {e}")),
                }
                Some(s)
            }
            // Not every behaviour-returning channel has an inhabitant.
            Err(crate::translate::TranslateError::CannotSaturate(_)) => None,
            Err(e) => {
                problems.push(format!("saturation failed: {e}"));
                None
            }
        }
    };
    if let Some(s) = saturated {
        let Some(lctx) = map_ctx(ctx, readback_type) else { return };
        let want = readback_type(ty);
        match readback(&s).map(|b| (check_lam(&lctx, &b, Calculus::LamPar), b)) {
            Ok((Ok(found), _)) if found == want => {}
            Ok((found, b)) => problems.push(format!("readback {b} types as {found:?}, expected {want}")),
            Err(e) => problems.push(format!("readback failed: {e}")),
        }
    }
}

fn termination(t: &Term, ctx: &TypingContext) -> Result<Verdict, DiagramError> {
    let calc = match t {
        Term::Lam(m) => [Calculus::Lam, Calculus::LamPar].into_iter().find(|c| check_lam(ctx, m, *c).is_ok()),
        Term::Adm(d) => [Calculus::Adm, Calculus::AdmPar, Calculus::Cps, Calculus::CpsPar].into_iter().find(|c| check_adm(ctx, d, *c).is_ok()),
        Term::Pi(p) => check_pi(ctx, p).ok().map(|_| Calculus::Pi),
    };
    let calc = calc.ok_or_else(|| na("ill-typed, so termination is not claimed"))?;
    let budget = StepBudget::new(TERMINATION_BUDGET).expect("positive budget");
    let strategies = std::iter::once(Strategy::Leftmost).chain(TERMINATION_SEEDS.iter().map(|s| Strategy::Seeded(*s)));
    let mut longest = 0;
    for s in strategies {
        match evaluate(t, calc, s, budget) {
            Outcome::NormalForm { steps, .. } => longest = longest.max(steps),
            _ => return fail(vec![format!("source {t}"), format!("{s:?} exhausted {TERMINATION_BUDGET} steps")]),
        }
    }
    Ok(Verdict::Pass { depth: 0, steps: longest })
}
