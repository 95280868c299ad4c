use std::collections::BTreeMap;

use proptest::prelude::*;

use picomp_core::harness::{gen_typed_term, GenConfig, UsagePolicy};
use picomp_core::ident::Ident;
use picomp_core::kernel::{AdmDecl, Replacement, Term};
use picomp_core::reduce::{evaluate, find_redexes, step_at, successors, Outcome, StepBudget, Strategy as Reduction};
use picomp_core::syntax::{parse_term, print_term};
use picomp_core::translate::{cps_transform, readback, to_admin};
use picomp_core::typecheck::{infer_type, is_monadic, TypingContext};
use picomp_core::types::{Calculus, TypeExpr, Usage};

fn calculus() -> impl Strategy<Value = Calculus> {
    prop::sample::select(Calculus::ALL.to_vec())
}

fn policy() -> impl Strategy<Value = UsagePolicy> {
    prop::sample::select(vec![UsagePolicy::AllInfinite, UsagePolicy::Mixed])
}

fn generated(seed: u64, size: usize, calc: Calculus, policy: UsagePolicy) -> (Term, TypingContext, TypeExpr) {
    gen_typed_term(&GenConfig::new(seed, size, calc).with_usage_policy(policy))
}

fn adm_calculus() -> impl Strategy<Value = Calculus> {
    prop::sample::select(vec![Calculus::Adm, Calculus::AdmPar])
}

fn as_adm(t: &Term) -> &AdmDecl {
    match t {
        Term::Adm(d) => d,
        other => panic!("expected a declaration, got {other}"),
    }
}

fn usages(d: &AdmDecl) -> BTreeMap<Ident, Usage> {
    d.bindings.iter().map(|b| (b.name.clone(), b.usage)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_terms_typecheck(seed: u64, size in 1usize..20, calc in calculus(), policy in policy()) {
        let (t, ctx, ty) = generated(seed, size, calc, policy);
        let inferred = infer_type(&ctx, &t, calc);
        prop_assert!(inferred.is_ok(), "{t}: {inferred:?}");
        if let Some(found) = inferred.unwrap().ty() {
            prop_assert_eq!(found, &ty);
        }
    }

    #[test]
    fn generation_is_deterministic(seed: u64, size in 1usize..20, calc in calculus()) {
        let cfg = GenConfig::new(seed, size, calc);
        prop_assert_eq!(gen_typed_term(&cfg), gen_typed_term(&cfg));
    }

    #[test]
    fn print_then_parse_is_alpha_equal(seed: u64, size in 1usize..20, calc in calculus(), policy in policy()) {
        let (t, _, _) = generated(seed, size, calc, policy);
        let text = print_term(&t);
        let back = parse_term(&text, calc);
        prop_assert!(back.is_ok(), "{text}: {back:?}");
        prop_assert!(back.unwrap().alpha_equal(&t), "{text}");
    }

    #[test]
    fn normalize_is_idempotent_and_keeps_free_names(seed: u64, size in 1usize..20, calc in calculus(), policy in policy()) {
        let (t, _, _) = generated(seed, size, calc, policy);
        let n = t.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        // Dropping a dead binding also drops the free names of its value.
        prop_assert!(n.free_vars().is_subset(&t.free_vars()));
        if n.size() == t.size() {
            prop_assert_eq!(n.free_vars(), t.free_vars());
        }
    }

    #[test]
    fn substitution_respects_alpha(seed: u64, size in 1usize..20, calc in calculus()) {
        let (t, _, _) = generated(seed, size, calc, UsagePolicy::AllInfinite);
        let renamed = t.normalize();
        let Some(target) = t.free_vars().into_iter().next() else { return Ok(()) };
        let sigma = BTreeMap::from([(target, Replacement::Name(Ident::new("sigma", 0)))]);
        let a = t.substitute(&sigma).unwrap();
        let b = renamed.substitute(&sigma).unwrap();
        prop_assert!(a.normalize().alpha_equal(&b.normalize()), "{a} vs {b}");
    }

    #[test]
    fn typing_survives_congruence(seed: u64, size in 1usize..20, calc in calculus(), policy in policy()) {
        let (t, ctx, _) = generated(seed, size, calc, policy);
        prop_assert_eq!(infer_type(&ctx, &t.normalize(), calc), infer_type(&ctx, &t, calc));
    }

    #[test]
    fn weakening(seed: u64, size in 1usize..20, calc in calculus()) {
        let (t, ctx, _) = generated(seed, size, calc, UsagePolicy::AllInfinite);
        let extra = if matches!(calc, Calculus::Lam | Calculus::LamPar) { TypeExpr::Unit } else { TypeExpr::chan_unit() };
        let wider = ctx.extend("fresh_name", extra).unwrap();
        prop_assert_eq!(infer_type(&wider, &t, calc), infer_type(&ctx, &t, calc));
    }

    #[test]
    fn subject_reduction(seed: u64, size in 1usize..16, calc in calculus(), policy in policy()) {
        let (t, ctx, _) = generated(seed, size, calc, policy);
        let before = infer_type(&ctx, &t, calc).unwrap();
        for (r, next) in successors(&t, calc) {
            prop_assert_eq!(infer_type(&ctx, &next, calc), Ok(before.clone()), "{} at {}", t, r.path_string());
        }
    }

    #[test]
    fn monadic_terms_stay_monadic(seed: u64, size in 1usize..16) {
        let (t, ctx, _) = generated(seed, size, Calculus::LamPar, UsagePolicy::AllInfinite);
        let Term::Lam(m) = t else { unreachable!() };
        let d = Term::Adm(to_admin(&m));
        let ctx = TypingContext::from_entries(
            ctx.entries().iter().map(|(x, a)| (x.clone(), picomp_core::translate::to_admin_type(a))),
        ).unwrap();
        for (_, next) in successors(&d, Calculus::AdmPar) {
            let next = as_adm(&next).clone();
            for b in &next.bindings {
                if let picomp_core::kernel::AdmValue::Abs(ps, _) = &b.value {
                    prop_assert!(ps.len() == 1 && ps.iter().all(|p| is_monadic(&p.ty)), "{next}");
                }
            }
            prop_assert!(infer_type(&ctx, &Term::Adm(next), Calculus::AdmPar).is_ok());
        }
    }

    #[test]
    fn leftmost_is_deterministic(seed: u64, size in 1usize..16, calc in calculus(), policy in policy()) {
        let (t, _, _) = generated(seed, size, calc, policy);
        let budget = StepBudget::new(1000).unwrap();
        prop_assert_eq!(evaluate(&t, calc, Reduction::Leftmost, budget), evaluate(&t, calc, Reduction::Leftmost, budget));
    }

    #[test]
    fn typed_terms_terminate(seed: u64, size in 1usize..14, calc in calculus(), strategy_seed: u64) {
        let (t, _, _) = generated(seed, size, calc, UsagePolicy::Mixed);
        for strategy in [Reduction::Leftmost, Reduction::Seeded(strategy_seed)] {
            let out = evaluate(&t, calc, strategy, StepBudget::default());
            prop_assert!(out.is_normal_form(), "{t} under {strategy:?}");
        }
    }

    #[test]
    fn usages_only_decrease(seed: u64, size in 1usize..16, calc in adm_calculus()) {
        let (t, _, _) = generated(seed, size, calc, UsagePolicy::Mixed);
        let mut current = t;
        for _ in 0..50 {
            let Some(r) = find_redexes(&current, calc).into_iter().next() else { break };
            let before = usages(as_adm(&current));
            let next = step_at(&current, calc, &r).unwrap();
            for (x, u) in usages(as_adm(&next)) {
                if let Some(&old) = before.get(&x) {
                    prop_assert!(old == u || (old == Usage::One && u == Usage::Zero), "{x}: {old:?} -> {u:?}");
                }
            }
            current = next;
        }
    }

    #[test]
    fn reduction_is_closed_under_congruence(seed: u64, size in 1usize..16, calc in adm_calculus(), policy in policy()) {
        let (t, _, _) = generated(seed, size, calc, policy);
        let n = t.normalize();
        let from_n: Vec<Term> = successors(&n, calc).into_iter().map(|(_, s)| s.normalize()).collect();
        for (r, s) in successors(&t, calc) {
            prop_assert!(from_n.contains(&s.normalize()), "{t} at {}", r.path_string());
        }
    }

    #[test]
    fn readback_respects_congruence(seed: u64, size in 1usize..20, calc in adm_calculus()) {
        let (t, _, _) = generated(seed, size, calc, UsagePolicy::AllInfinite);
        let d = as_adm(&t);
        let a = readback(d).unwrap();
        let b = readback(as_adm(&t.normalize())).unwrap();
        prop_assert!(a.alpha_equal(&b), "{a} vs {b}");
        prop_assert!(a.free_vars().is_subset(&d.free_vars()));
    }

    #[test]
    fn cps_respects_congruence(seed: u64, size in 1usize..16, calc in adm_calculus()) {
        let (t, ctx, _) = generated(seed, size, calc, UsagePolicy::Mixed);
        let k = Ident::new("k", 0);
        let a = cps_transform(as_adm(&t), &k, &ctx, calc).unwrap();
        let b = cps_transform(as_adm(&t.normalize()), &k, &ctx, calc).unwrap();
        prop_assert!(Term::Adm(a).congruent(&Term::Adm(b)));
    }
}

#[test]
fn enumerated_graph_matches_successors() {
    let (t, _, _) = generated(7, 10, Calculus::AdmPar, UsagePolicy::Mixed);
    let Outcome::ReductionGraph(g) = evaluate(&t, Calculus::AdmPar, Reduction::EnumerateAll, StepBudget::default()) else {
        panic!("enumeration yields a graph");
    };
    assert!(g.complete);
    assert_eq!(g.nodes[0], t.normalize());
    let first: Vec<Term> = successors(&t, Calculus::AdmPar).into_iter().map(|(_, s)| s.normalize()).collect();
    let from_start: Vec<&Term> = g.edges.iter().filter(|e| e.0 == 0).map(|e| &g.nodes[e.1]).collect();
    assert!(first.iter().all(|s| from_start.contains(&s)));
}
