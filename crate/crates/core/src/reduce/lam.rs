use super::{RedexDescriptor, Rule};
use crate::kernel::LamTerm;

pub(super) fn redexes(t: &LamTerm) -> Vec<RedexDescriptor> {
    let mut out = Vec::new();
    cbv(t, &mut Vec::new(), &mut out);
    out
}

/// Contexts `E M`, `V E`, `E | M`, `M | E`.
fn cbv(t: &LamTerm, path: &mut Vec<usize>, out: &mut Vec<RedexDescriptor>) {
    match t {
        LamTerm::App(f, a) => {
            if !f.is_value() {
                descend(f, 0, path, out, cbv);
            } else if !a.is_value() {
                descend(a, 1, path, out, cbv);
            } else if matches!(**f, LamTerm::Abs(..)) {
                out.push(redex(path));
            }
        }
        LamTerm::Par(l, r) => {
            descend(l, 0, path, out, cbv);
            descend(r, 1, path, out, cbv);
        }
        _ => {}
    }
}

pub(super) fn weak_redexes(t: &LamTerm) -> Vec<RedexDescriptor> {
    let mut out = Vec::new();
    weak(t, &mut Vec::new(), &mut out);
    out
}

fn weak(t: &LamTerm, path: &mut Vec<usize>, out: &mut Vec<RedexDescriptor>) {
    match t {
        LamTerm::App(f, a) => {
            if matches!(**f, LamTerm::Abs(..)) && a.is_value() {
                out.push(redex(path));
            }
            descend(f, 0, path, out, weak);
            descend(a, 1, path, out, weak);
        }
        LamTerm::Par(l, r) => {
            descend(l, 0, path, out, weak);
            descend(r, 1, path, out, weak);
        }
        _ => {}
    }
}

fn descend(
    t: &LamTerm,
    child: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<RedexDescriptor>,
    f: fn(&LamTerm, &mut Vec<usize>, &mut Vec<RedexDescriptor>),
) {
    path.push(child);
    f(t, path, out);
    path.pop();
}

fn redex(path: &[usize]) -> RedexDescriptor {
    RedexDescriptor { path: path.to_vec(), rule: Rule::BetaV, definition_site: None }
}

pub(super) fn contract(t: &LamTerm, r: &RedexDescriptor) -> LamTerm {
    let Some(LamTerm::App(f, a)) = t.subterm(&r.path) else { unreachable!("checked redex") };
    let LamTerm::Abs(x, _, body) = f.as_ref() else { unreachable!("checked redex") };
    t.replace_at(&r.path, body.subst_one(x, a)).expect("path exists")
}
