//! Notational conventions of the administrative calculi: applications and
//! parallel compositions whose operands are whole declarations, and
//! plugging a declaration into an evaluation context.

use std::collections::{BTreeMap, BTreeSet};

use super::adm::{AdmDecl, AdmTerm, Binding};
use super::KernelError;
use crate::ident::{Ident, NameSupply};

/// Renames the top-level binders of `d` that occur in `avoid`.
fn rename_top(d: &AdmDecl, avoid: &BTreeSet<Ident>, supply: &mut NameSupply) -> AdmDecl {
    let mut map: BTreeMap<Ident, Ident> = BTreeMap::new();
    let mut bindings = Vec::with_capacity(d.bindings.len());
    for b in &d.bindings {
        let value = b.value.rename_with(&map, supply, false);
        let name = if avoid.contains(&b.name) {
            let f = supply.fresh_like(&b.name);
            map.insert(b.name.clone(), f.clone());
            f
        } else {
            map.remove(&b.name);
            b.name.clone()
        };
        bindings.push(Binding { usage: b.usage, name, value });
    }
    AdmDecl { bindings, body: d.body.rename(&map) }
}

fn all_idents(d: &AdmDecl) -> BTreeSet<Ident> {
    let mut v = Vec::new();
    d.idents(&mut v);
    v.into_iter().collect()
}

/// Concatenates the let-prefixes of `parts` left to right, renaming binders
/// so no part captures or shadows a name of another.
fn lift(parts: &[AdmDecl]) -> (Vec<Binding>, Vec<AdmTerm>) {
    let names: Vec<BTreeSet<Ident>> = parts.iter().map(all_idents).collect();
    let mut supply = NameSupply::avoiding(names.iter().flatten());
    let mut bindings = Vec::new();
    let mut bodies = Vec::with_capacity(parts.len());
    let mut chosen: BTreeSet<Ident> = BTreeSet::new();
    for (i, d) in parts.iter().enumerate() {
        let mut avoid: BTreeSet<Ident> = names.iter().enumerate().filter(|(j, _)| *j != i).flat_map(|(_, s)| s.iter().cloned()).collect();
        avoid.extend(chosen.iter().cloned());
        let d = rename_top(d, &avoid, &mut supply);
        chosen.extend(d.bindings.iter().map(|b| b.name.clone()));
        bindings.extend(d.bindings);
        bodies.push(d.body);
    }
    (bindings, bodies)
}

/// `@(D₀, D₁, …, Dₙ)`: every let-prefix lifted outward in argument order.
pub fn apply_decls(head: &AdmDecl, args: &[AdmDecl]) -> AdmDecl {
    let mut parts = Vec::with_capacity(args.len() + 1);
    parts.push(head.clone());
    parts.extend(args.iter().cloned());
    let (bindings, mut bodies) = lift(&parts);
    let head = bodies.remove(0);
    AdmDecl { bindings, body: AdmTerm::app(head, bodies) }
}

/// `D | D′` with both prefixes lifted.
pub fn par_decls(left: &AdmDecl, right: &AdmDecl) -> AdmDecl {
    let (bindings, mut bodies) = lift(&[left.clone(), right.clone()]);
    let r = bodies.pop().expect("two parts");
    let l = bodies.pop().expect("two parts");
    AdmDecl { bindings, body: AdmTerm::par(l, r) }
}

/// `E[D]` where `context` is `E` with its hole at `hole` in the body.
/// The declaration's bindings go in front of the context's prefix when they
/// do not mention the context's names, and behind it otherwise.
pub fn plug(context: &AdmDecl, hole: &[usize], d: &AdmDecl) -> Result<AdmDecl, KernelError> {
    if context.body.subterm(hole).is_none() {
        return Err(KernelError::BadPath(hole.to_vec()));
    }
    let ctx_names = all_idents(context);
    let mut supply = NameSupply::avoiding(ctx_names.iter());
    supply.reserve(all_idents(d).iter());
    let d = rename_top(d, &ctx_names, &mut supply);
    let ctx_binders: BTreeSet<&Ident> = context.bindings.iter().map(|b| &b.name).collect();
    let independent = d.bindings.iter().all(|b| b.value.free_vars().iter().all(|x| !ctx_binders.contains(x)));
    let body = context.body.replace_at(hole, d.body.clone()).ok_or_else(|| KernelError::BadPath(hole.to_vec()))?;
    let bindings = if independent {
        d.bindings.iter().chain(&context.bindings).cloned().collect()
    } else {
        context.bindings.iter().chain(&d.bindings).cloned().collect()
    };
    Ok(AdmDecl { bindings, body })
}
