use std::collections::BTreeMap;

use super::{RedexDescriptor, Rule};
use crate::ident::Ident;
use crate::kernel::{InputGuard, PiProc};

pub(super) fn redexes(p: &PiProc) -> Vec<RedexDescriptor> {
    let mut out = Vec::new();
    walk(p, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Evaluation contexts pass restrictions (never a guard body) and both
/// sides of a parallel composition.
fn walk<'a>(
    p: &'a PiProc,
    path: &mut Vec<usize>,
    defs: &mut Vec<(&'a Ident, Option<&'a InputGuard>, Vec<usize>)>,
    out: &mut Vec<RedexDescriptor>,
) {
    match p {
        PiProc::Nu(x, g, rest) => {
            defs.push((x, g.as_ref(), path.clone()));
            path.push(1);
            walk(rest, path, defs, out);
            path.pop();
            defs.pop();
        }
        PiProc::Par(l, r) => {
            for (i, side) in [l, r].into_iter().enumerate() {
                path.push(i);
                walk(side, path, defs, out);
                path.pop();
            }
        }
        PiProc::Out(x, args) => {
            let Some((_, guard, site)) = defs.iter().rev().find(|(y, _, _)| *y == x) else { return };
            if let Some(g) = guard {
                if g.params.len() == args.len() {
                    let rule = if g.replicated { Rule::PiBang } else { Rule::PiOnce };
                    out.push(RedexDescriptor { path: path.clone(), rule, definition_site: Some(site.clone()) });
                }
            }
        }
    }
}

/// The received body is instantiated with fresh binders; its restrictions
/// join the run enclosing the output and its terms replace the output.
pub(super) fn contract(p: &PiProc, r: &RedexDescriptor) -> PiProc {
    let p = p.uniquify();
    let site = r.definition_site.as_ref().expect("π redex has a site");
    let Some(PiProc::Nu(_, Some(guard), _)) = p.subterm(site) else { unreachable!("checked redex") };
    let Some(PiProc::Out(_, args)) = p.subterm(&r.path) else { unreachable!("checked redex") };
    let map: BTreeMap<Ident, Ident> = guard.params.iter().cloned().zip(args.iter().cloned()).collect();
    let mut supply = p.supply();
    let copy = guard.body.rename_with(&map, &mut supply, true);
    let (copy_defs, copy_tail) = copy.chain();
    let copy_defs: Vec<(Ident, Option<InputGuard>)> = copy_defs.into_iter().map(|(x, g)| (x.clone(), g.cloned())).collect();

    // the innermost restriction above the output
    let anchor = (0..r.path.len())
        .rev()
        .find(|&k| r.path[k] == 1 && matches!(p.subterm(&r.path[..k]), Some(PiProc::Nu(..))))
        .expect("output lies under its definition");
    let Some(PiProc::Nu(x, g, rest)) = p.subterm(&r.path[..anchor]) else { unreachable!() };
    let rest = rest.replace_at(&r.path[anchor + 1..], copy_tail.clone()).expect("path exists");
    let node = PiProc::Nu(x.clone(), g.clone(), Box::new(PiProc::from_chain(copy_defs, rest)));
    let mut p = p.replace_at(&r.path[..anchor], node).expect("path exists");

    if r.rule == Rule::PiOnce {
        let Some(PiProc::Nu(x, _, rest)) = p.subterm(site) else { unreachable!() };
        let node = PiProc::Nu(x.clone(), None, rest.clone());
        p = p.replace_at(site, node).expect("path exists");
    }
    p
}
