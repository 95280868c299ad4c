use std::collections::BTreeMap;

use super::{RedexDescriptor, Rule, StepConfig};
use crate::kernel::{AdmDecl, AdmTerm, AdmValue};

pub(super) fn redexes(d: &AdmDecl) -> Vec<RedexDescriptor> {
    let mut out = Vec::new();
    spine(d, &d.body, &mut Vec::new(), &mut out);
    out
}

/// Parallel compositions over chains of applications, each evaluating its
/// first component that is not yet an identifier.
fn spine(d: &AdmDecl, t: &AdmTerm, path: &mut Vec<usize>, out: &mut Vec<RedexDescriptor>) {
    match t {
        AdmTerm::Var(_) => {}
        AdmTerm::Par(l, r) => {
            for (i, side) in [l, r].into_iter().enumerate() {
                path.push(i);
                spine(d, side, path, out);
                path.pop();
            }
        }
        AdmTerm::App(head, args) => {
            let pending = std::iter::once(head.as_ref()).chain(args).position(|c| c.as_var().is_none());
            match pending {
                Some(i) => {
                    let inner = if i == 0 { head.as_ref() } else { &args[i - 1] };
                    if let AdmTerm::App(..) = inner {
                        path.push(i);
                        spine(d, inner, path, out);
                        path.pop();
                    }
                }
                None => {
                    let x = head.as_var().expect("all components are names");
                    let Some(site) = d.binding_of(x) else { return };
                    let b = &d.bindings[site];
                    if b.usage.is_available() && b.value.arity() == Some(args.len()) {
                        out.push(RedexDescriptor { path: path.clone(), rule: Rule::BetaVAdm, definition_site: Some(vec![site]) });
                    }
                }
            }
        }
    }
}

/// The called body, with arguments for parameters and fresh binders, lands
/// at the end of the top-level list; its result replaces the call.
pub(super) fn contract(d: &AdmDecl, r: &RedexDescriptor, cfg: StepConfig) -> AdmDecl {
    let d = d.uniquify();
    let site = r.definition_site.as_ref().expect("administrative redex has a site")[0];
    let Some(AdmTerm::App(_, args)) = d.body.subterm(&r.path) else { unreachable!("checked redex") };
    let AdmValue::Abs(params, body) = &d.bindings[site].value else { unreachable!("checked redex") };
    let map: BTreeMap<_, _> = params
        .iter()
        .zip(args)
        .map(|(p, a)| (p.name.clone(), a.as_var().expect("argument is a name").clone()))
        .collect();
    let mut supply = d.supply();
    let copy = body.rename_with(&map, &mut supply, true);
    let mut bindings = d.bindings.clone();
    if !cfg.skip_usage_decrement {
        let b = &mut bindings[site];
        b.usage = b.usage.decrement().expect("available usage");
    }
    bindings.extend(copy.bindings);
    let body = d.body.replace_at(&r.path, copy.body).expect("path exists");
    AdmDecl::new(bindings, body)
}
