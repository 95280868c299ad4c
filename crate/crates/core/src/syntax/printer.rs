use crate::kernel::adm::{AdmDecl, AdmTerm, AdmValue};
use crate::kernel::lam::LamTerm;
use crate::kernel::pi::PiProc;
use crate::types::{TypeExpr, Usage};

pub fn print_type(t: &TypeExpr) -> String {
    let mut s = String::new();
    ty(t, &mut s, false);
    s
}

fn ty(t: &TypeExpr, out: &mut String, atom: bool) {
    match t {
        TypeExpr::Unit => out.push_str("Unit"),
        TypeExpr::Behavior => out.push_str("#b"),
        TypeExpr::Result => out.push_str("#R"),
        TypeExpr::Chan(p) => {
            out.push_str("Ch[");
            match p.as_ref() {
                TypeExpr::Arrow(dom, cod) => {
                    for (i, a) in dom.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        ty(a, out, true);
                    }
                    out.push_str(" -> ");
                    ty(cod, out, true);
                }
                other => ty(other, out, true),
            }
            out.push(']');
        }
        TypeExpr::Arrow(dom, cod) => {
            if atom {
                out.push('(');
            }
            if dom.len() == 1 {
                ty(&dom[0], out, true);
            } else {
                out.push('(');
                for (i, a) in dom.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    ty(a, out, false);
                }
                out.push(')');
            }
            out.push_str(" -> ");
            ty(cod, out, false);
            if atom {
                out.push(')');
            }
        }
    }
}

/// π channel types print without their implicit `-> #b`.
pub fn print_pi_type(t: &TypeExpr) -> String {
    match t.as_chan_fn() {
        Some((dom, TypeExpr::Behavior)) => {
            let items: Vec<String> = dom.iter().map(print_pi_type).collect();
            format!("Ch[{}]", items.join(", "))
        }
        _ => print_type(t),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    /// Whole term, abstraction body, or inside parentheses.
    Top,
    /// Left operand of `|`.
    ParLeft,
    /// Right operand of `|`.
    ParRight,
    AppFun,
    AppArg,
}

/// Source form with every annotation; parses back to an α-equal term.
pub fn print_lam(t: &LamTerm) -> String {
    let mut s = String::new();
    lam(t, Pos::Top, true, &mut s);
    s
}

/// Reader-facing form without binder annotations.
pub fn pretty_lam(t: &LamTerm) -> String {
    let mut s = String::new();
    lam(t, Pos::Top, false, &mut s);
    s
}

fn lam(t: &LamTerm, pos: Pos, annotate: bool, out: &mut String) {
    match t {
        LamTerm::Star => out.push('*'),
        LamTerm::Var(x) => out.push_str(&x.to_string()),
        LamTerm::Abs(x, a, body) => {
            let paren = pos != Pos::Top;
            if paren {
                out.push('(');
            }
            out.push('\\');
            out.push_str(&x.to_string());
            if annotate {
                out.push(':');
                out.push_str(&print_type(a));
            }
            out.push_str(". ");
            lam(body, Pos::Top, annotate, out);
            if paren {
                out.push(')');
            }
        }
        LamTerm::App(f, a) => {
            let paren = pos == Pos::AppArg;
            if paren {
                out.push('(');
            }
            lam(f, Pos::AppFun, annotate, out);
            out.push(' ');
            lam(a, Pos::AppArg, annotate, out);
            if paren {
                out.push(')');
            }
        }
        LamTerm::Par(l, r) => {
            let paren = matches!(pos, Pos::AppFun | Pos::AppArg | Pos::ParRight);
            if paren {
                out.push('(');
            }
            lam(l, Pos::ParLeft, annotate, out);
            out.push_str(" | ");
            lam(r, Pos::ParRight, annotate, out);
            if paren {
                out.push(')');
            }
        }
    }
}

/// Source form: every usage and annotation explicit.
pub fn print_adm(d: &AdmDecl) -> String {
    let mut s = String::new();
    decl(d, true, &mut s);
    s
}

/// Usage `inf` left implicit.
pub fn pretty_adm(d: &AdmDecl) -> String {
    let mut s = String::new();
    decl(d, false, &mut s);
    s
}

pub fn print_adm_term(t: &AdmTerm) -> String {
    let mut s = String::new();
    term(t, false, &mut s);
    s
}

pub fn print_adm_value(v: &AdmValue) -> String {
    let mut s = String::new();
    value(v, true, &mut s);
    s
}

fn decl(d: &AdmDecl, explicit: bool, out: &mut String) {
    for b in &d.bindings {
        out.push_str("let");
        if explicit || b.usage != Usage::Infinite {
            out.push_str(&format!("[{}]", b.usage));
        }
        out.push(' ');
        out.push_str(&b.name.to_string());
        out.push_str(" = ");
        value(&b.value, explicit, out);
        out.push_str(" in ");
    }
    term(&d.body, false, out);
}

fn value(v: &AdmValue, explicit: bool, out: &mut String) {
    match v {
        AdmValue::Star => out.push('*'),
        AdmValue::Abs(params, body) => {
            out.push('\\');
            for (i, p) in params.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&format!("{}:{}", p.name, print_type(&p.ty)));
            }
            out.push_str(". ");
            let paren = !body.bindings.is_empty();
            if paren {
                out.push('(');
            }
            decl(body, explicit, out);
            if paren {
                out.push(')');
            }
        }
    }
}

fn term(t: &AdmTerm, right_of_par: bool, out: &mut String) {
    match t {
        AdmTerm::Var(x) => out.push_str(&x.to_string()),
        AdmTerm::App(h, args) => {
            out.push_str("@(");
            term(h, false, out);
            for a in args {
                out.push_str(", ");
                term(a, false, out);
            }
            out.push(')');
        }
        AdmTerm::Par(l, r) => {
            if right_of_par {
                out.push('(');
            }
            term(l, false, out);
            out.push_str(" | ");
            term(r, true, out);
            if right_of_par {
                out.push(')');
            }
        }
    }
}

pub fn print_pi(p: &PiProc) -> String {
    let mut s = String::new();
    proc(p, false, &mut s);
    s
}

fn names(xs: &[crate::ident::Ident]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn proc(p: &PiProc, atom: bool, out: &mut String) {
    match p {
        PiProc::Out(x, args) => out.push_str(&format!("{x}!({})", names(args))),
        PiProc::Nu(x, g, rest) => {
            out.push_str(&format!("new {x} ("));
            if let Some(g) = g {
                if g.replicated {
                    out.push('!');
                }
                out.push_str(&format!("{x}({}).", names(&g.params)));
                proc(&g.body, true, out);
                out.push_str(" | ");
            }
            proc(rest, false, out);
            out.push(')');
        }
        PiProc::Par(l, r) => {
            if atom {
                out.push('(');
            }
            proc(l, true, out);
            out.push_str(" | ");
            proc(r, true, out);
            if atom {
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_adm, parse_lam, parse_pi, parse_type};

    #[test]
    fn pretty_lambda_drops_annotations() {
        let t = parse_lam("(\\z:Ch[Unit]. z) (\\z:Ch[Unit]. z)").unwrap();
        assert_eq!(pretty_lam(&t), "(\\z. z) (\\z. z)");
    }

    #[test]
    fn roundtrips() {
        for src in ["(\\x:Unit -> Unit. x) (\\y:Unit. y) | f (a b)", "\\x:Unit. x | x", "a | (b | c)", "f (\\x:Unit. x) *"] {
            let t = parse_lam(src).unwrap();
            assert_eq!(parse_lam(&print_lam(&t)).unwrap(), t, "{src}");
        }
        let d = parse_adm("let[1] x = \\y:Ch[Unit], k:Ch[Ch[Unit] -> #b]. (let[inf] z = * in @(k, z)) in @(x, w, w) | (a | b)").unwrap();
        assert_eq!(parse_adm(&print_adm(&d)).unwrap(), d);
        let p = parse_pi("new x (!x(y, z).(y!(z) | z!(y)) | new w (x!(w, w)))").unwrap();
        assert_eq!(parse_pi(&print_pi(&p)).unwrap(), p);
        for src in ["Ch[Ch[Unit], (Unit -> Unit) -> #b]", "(Unit -> Unit) -> Unit"] {
            let t = parse_type(src).unwrap();
            assert_eq!(parse_type(&print_type(&t)).unwrap(), t);
        }
    }
}
