//! Canonical forms for structural congruence.
//!
//! A let-list (or run of restrictions) is reduced to the bindings reachable
//! from its body, ordered by a depth-first post-order walk that starts from
//! the body's occurrences. Reachability performs every possible erasure and
//! the walk yields a dependency-respecting order that depends only on the
//! term's shape, so two congruent terms meet at the same representative.
//! Every normalization can also report the swaps and erasures it used.

use std::collections::BTreeMap;

use thiserror::Error;

use super::adm::{AdmDecl, AdmValue, Binding};
use super::pi::{InputGuard, PiProc};
use crate::ident::Ident;

/// One rewrite of a let-list or restriction run. `scope` locates the list:
/// for declarations it is the sequence of binding indices leading into
/// nested abstraction bodies; for processes it is a process path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CongruenceStep {
    /// Drop binding `index`, whose name is unused.
    Erase { scope: Vec<usize>, index: usize },
    /// Exchange bindings `index` and `index + 1`.
    Swap { scope: Vec<usize>, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {0:?} addresses no binding list")]
    BadScope(CongruenceStep),
    #[error("side condition of {0:?} fails")]
    SideCondition(CongruenceStep),
}

/// Post-order over the bindings reachable from `roots`; `deps(i)` lists the
/// bindings that binding `i` mentions, in occurrence order.
fn canonical_order(n: usize, roots: &[usize], deps: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    // explicit stack: (binding, next dependency to try)
    for &root in roots {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, deps(root), 0usize)];
        state[root] = 1;
        while let Some((node, ds, next)) = stack.last_mut() {
            if let Some(&d) = ds.get(*next) {
                *next += 1;
                if state[d] == 0 {
                    state[d] = 1;
                    let dd = deps(d);
                    stack.push((d, dd, 0));
                }
            } else {
                let node = *node;
                state[node] = 2;
                order.push(node);
                stack.pop();
            }
        }
    }
    order
}

/// Emits erasures (last first) then adjacent swaps turning the current list
/// into `order`. Returns the permutation applied, as original indices.
fn plan(n: usize, order: &[usize], scope: &[usize], trace: &mut Vec<CongruenceStep>) -> Vec<usize> {
    let mut current: Vec<usize> = (0..n).collect();
    for i in (0..n).rev() {
        if !order.contains(&i) {
            trace.push(CongruenceStep::Erase { scope: scope.to_vec(), index: i });
            current.remove(i);
        }
    }
    for (p, want) in order.iter().enumerate() {
        let mut q = current.iter().position(|c| c == want).expect("kept binding");
        while q > p {
            trace.push(CongruenceStep::Swap { scope: scope.to_vec(), index: q - 1 });
            current.swap(q - 1, q);
            q -= 1;
        }
    }
    current
}

/// Canonical representative of a declaration's ≡-class.
pub fn normalize_adm(d: &AdmDecl) -> AdmDecl {
    normalize_adm_traced(d).0
}

/// The canonical form together with the rewrite trace that reaches it from
/// `d.uniquify()` (up to a final α-renaming).
pub fn normalize_adm_traced(d: &AdmDecl) -> (AdmDecl, Vec<CongruenceStep>) {
    let mut trace = Vec::new();
    let reordered = reorder_adm(&d.uniquify(), &mut Vec::new(), &mut trace);
    (reordered.alpha_canonical(), trace)
}

fn reorder_adm(d: &AdmDecl, scope: &mut Vec<usize>, trace: &mut Vec<CongruenceStep>) -> AdmDecl {
    let bindings: Vec<Binding> = d
        .bindings
        .iter()
        .enumerate()
        .map(|(i, b)| {
            scope.push(i);
            let value = b.value.map_decls(&mut |body| reorder_adm(body, scope, trace));
            scope.pop();
            Binding { usage: b.usage, name: b.name.clone(), value }
        })
        .collect();
    let index: BTreeMap<&Ident, usize> = bindings.iter().enumerate().map(|(i, b)| (&b.name, i)).collect();
    let mut occ = Vec::new();
    d.body.occurrences(&mut occ);
    let roots: Vec<usize> = occ.iter().filter_map(|x| index.get(x).copied()).collect();
    let order = canonical_order(bindings.len(), &roots, |i| {
        let mut occ = Vec::new();
        bindings[i].value.free_occurrences(&mut Vec::new(), &mut occ);
        occ.iter().filter_map(|x| index.get(x).copied()).filter(|&j| j < i).collect()
    });
    let perm = plan(bindings.len(), &order, scope, trace);
    AdmDecl { bindings: perm.into_iter().map(|i| bindings[i].clone()).collect(), body: d.body.clone() }
}

/// Applies a trace step by step, checking each side condition.
pub fn replay_adm(d: &AdmDecl, trace: &[CongruenceStep]) -> Result<AdmDecl, ReplayError> {
    let mut d = d.clone();
    for step in trace {
        let (scope, index) = match step {
            CongruenceStep::Erase { scope, index } | CongruenceStep::Swap { scope, index } => (scope, *index),
        };
        let target = adm_scope_mut(&mut d, scope).ok_or_else(|| ReplayError::BadScope(step.clone()))?;
        match step {
            CongruenceStep::Erase { .. } => {
                if index >= target.bindings.len() {
                    return Err(ReplayError::BadScope(step.clone()));
                }
                let rest = AdmDecl { bindings: target.bindings[index + 1..].to_vec(), body: target.body.clone() };
                if rest.free_vars().contains(&target.bindings[index].name) {
                    return Err(ReplayError::SideCondition(step.clone()));
                }
                target.bindings.remove(index);
            }
            CongruenceStep::Swap { .. } => {
                if index + 1 >= target.bindings.len() {
                    return Err(ReplayError::BadScope(step.clone()));
                }
                let (b1, b2) = (&target.bindings[index], &target.bindings[index + 1]);
                if b2.value.free_vars().contains(&b1.name) || b1.value.free_vars().contains(&b2.name) {
                    return Err(ReplayError::SideCondition(step.clone()));
                }
                target.bindings.swap(index, index + 1);
            }
        }
    }
    Ok(d)
}

fn adm_scope_mut<'a>(d: &'a mut AdmDecl, scope: &[usize]) -> Option<&'a mut AdmDecl> {
    let Some((&first, rest)) = scope.split_first() else {
        return Some(d);
    };
    match &mut d.bindings.get_mut(first)?.value {
        AdmValue::Abs(_, body) => adm_scope_mut(body, rest),
        AdmValue::Star => None,
    }
}

/// Canonical representative of a process's ≡-class.
pub fn normalize_pi(p: &PiProc) -> PiProc {
    normalize_pi_traced(p).0
}

pub fn normalize_pi_traced(p: &PiProc) -> (PiProc, Vec<CongruenceStep>) {
    let mut trace = Vec::new();
    let reordered = reorder_pi(&p.uniquify(), &mut Vec::new(), &mut trace);
    (reordered.alpha_canonical(), trace)
}

fn reorder_pi(p: &PiProc, path: &mut Vec<usize>, trace: &mut Vec<CongruenceStep>) -> PiProc {
    match p {
        PiProc::Out(..) => p.clone(),
        PiProc::Par(l, r) => {
            path.push(0);
            let l = reorder_pi(l, path, trace);
            path.pop();
            path.push(1);
            let r = reorder_pi(r, path, trace);
            path.pop();
            PiProc::par(l, r)
        }
        PiProc::Nu(..) => {
            let (defs, tail) = p.chain();
            let n = defs.len();
            let depth = path.len();
            let mut new_defs: Vec<(Ident, Option<InputGuard>)> = Vec::with_capacity(n);
            for (i, (x, g)) in defs.iter().enumerate() {
                let guard = g.map(|g| {
                    path.extend(std::iter::repeat_n(1, i));
                    path.push(0);
                    let body = reorder_pi(&g.body, path, trace);
                    path.truncate(depth);
                    InputGuard { replicated: g.replicated, params: g.params.clone(), body: Box::new(body) }
                });
                new_defs.push(((*x).clone(), guard));
            }
            path.extend(std::iter::repeat_n(1, n));
            let tail = reorder_pi(tail, path, trace);
            path.truncate(depth);

            let index: BTreeMap<&Ident, usize> = new_defs.iter().enumerate().map(|(i, (x, _))| (x, i)).collect();
            let mut occ = Vec::new();
            tail.free_occurrences(&mut Vec::new(), &mut occ);
            let roots: Vec<usize> = occ.iter().filter_map(|x| index.get(x).copied()).collect();
            let order = canonical_order(n, &roots, |i| match &new_defs[i].1 {
                None => Vec::new(),
                Some(g) => {
                    let mut occ = Vec::new();
                    g.free_occurrences(&mut Vec::new(), &mut occ);
                    occ.iter().filter_map(|x| index.get(x).copied()).filter(|&j| j != i).collect()
                }
            });
            let perm = plan(n, &order, path, trace);
            PiProc::from_chain(perm.into_iter().map(|i| new_defs[i].clone()).collect(), tail)
        }
    }
}

pub fn replay_pi(p: &PiProc, trace: &[CongruenceStep]) -> Result<PiProc, ReplayError> {
    let mut p = p.clone();
    for step in trace {
        let (scope, index) = match step {
            CongruenceStep::Erase { scope, index } | CongruenceStep::Swap { scope, index } => (scope, *index),
        };
        let bad = || ReplayError::BadScope(step.clone());
        let node = p.subterm(scope).ok_or_else(bad)?;
        let (defs, tail) = node.chain();
        let mut defs: Vec<(Ident, Option<InputGuard>)> = defs.into_iter().map(|(x, g)| (x.clone(), g.cloned())).collect();
        let tail = tail.clone();
        let guard_fv = |g: &Option<InputGuard>| g.as_ref().map(InputGuard::free_vars).unwrap_or_default();
        match step {
            CongruenceStep::Erase { .. } => {
                if index >= defs.len() {
                    return Err(bad());
                }
                let x = &defs[index].0;
                let used = tail.free_vars().contains(x)
                    || defs.iter().enumerate().any(|(j, (_, g))| j != index && guard_fv(g).contains(x));
                if used {
                    return Err(ReplayError::SideCondition(step.clone()));
                }
                defs.remove(index);
            }
            CongruenceStep::Swap { .. } => {
                if index + 1 >= defs.len() {
                    return Err(bad());
                }
                let (x1, g1) = &defs[index];
                let (x2, g2) = &defs[index + 1];
                if guard_fv(g2).contains(x1) || guard_fv(g1).contains(x2) {
                    return Err(ReplayError::SideCondition(step.clone()));
                }
                defs.swap(index, index + 1);
            }
        }
        p = p.replace_at(scope, PiProc::from_chain(defs, tail)).ok_or_else(bad)?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::adm::{AdmTerm, Param};
    use crate::types::{TypeExpr, Usage};

    fn id_value() -> AdmValue {
        AdmValue::abs(vec![Param::new("z", TypeExpr::chan_unit())], AdmDecl::term(AdmTerm::var("z")))
    }

    #[test]
    fn unused_binding_is_erased() {
        let d = AdmDecl::new(vec![Binding::new(Usage::Infinite, "x", AdmValue::Star)], AdmTerm::var("y"));
        assert_eq!(normalize_adm(&d), AdmDecl::term(AdmTerm::var("y")));
    }

    #[test]
    fn sharing_is_not_congruence() {
        let m = AdmDecl::new(vec![Binding::new(Usage::Infinite, "x", id_value())], AdmTerm::call("x", ["x".into()]));
        let n = AdmDecl::new(
            vec![Binding::new(Usage::Infinite, "x", id_value()), Binding::new(Usage::Infinite, "y", id_value())],
            AdmTerm::call("x", ["y".into()]),
        );
        assert_ne!(normalize_adm(&m), normalize_adm(&n));
    }

    #[test]
    fn independent_bindings_commute() {
        let a = AdmDecl::new(
            vec![Binding::new(Usage::Infinite, "x", AdmValue::Star), Binding::new(Usage::One, "y", id_value())],
            AdmTerm::call("y", ["x".into()]),
        );
        let b = AdmDecl::new(
            vec![Binding::new(Usage::One, "y", id_value()), Binding::new(Usage::Infinite, "x", AdmValue::Star)],
            AdmTerm::call("y", ["x".into()]),
        );
        assert_eq!(normalize_adm(&a), normalize_adm(&b));
        let (canon, trace) = normalize_adm_traced(&a);
        assert_eq!(replay_adm(&a.uniquify(), &trace).unwrap().alpha_canonical(), canon);
    }

    #[test]
    fn replay_rejects_dependent_swap() {
        let d = AdmDecl::new(
            vec![
                Binding::new(Usage::Infinite, "x", AdmValue::Star),
                Binding::new(
                    Usage::Infinite,
                    "f",
                    AdmValue::abs(vec![Param::new("z", TypeExpr::chan_unit())], AdmDecl::term(AdmTerm::var("x"))),
                ),
            ],
            AdmTerm::call("f", ["x".into()]),
        );
        let bad = [CongruenceStep::Swap { scope: vec![], index: 0 }];
        assert!(matches!(replay_adm(&d, &bad), Err(ReplayError::SideCondition(_))));
    }

    #[test]
    fn pi_unused_restriction_is_erased() {
        let p = PiProc::nu("x", PiProc::out("o", ["w".into()]));
        assert_eq!(normalize_pi(&p), PiProc::out("o", ["w".into()]));
    }
}
